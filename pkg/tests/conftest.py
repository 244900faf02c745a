"""Shared fixtures: the exact equilateral scene and a scalene triangle."""

import math

import numpy as np
import pytest

from p3pshare.geometry import ControlTriangle, ViewAngles


SQRT3 = math.sqrt(3.0)

#: the four ratio points of the equilateral fixture
EQ1_RATIOS = ((1.0, 1.0), (4.0, 4.0), (1.0, 0.25), (0.25, 1.0))
#: the two distance values appearing in its solution triplets
EQ1_S_LONG = 2.0 / SQRT3          # 1.1547005383792515
EQ1_S_SHORT = 1.0 / (2.0 * SQRT3)  # 0.28867513459481287


@pytest.fixture
def eq1_triangle() -> ControlTriangle:
    """Unit equilateral triangle in the z = 0 plane."""
    return ControlTriangle.from_points(
        np.array([0.5, SQRT3 / 2.0, 0.0]),
        np.array([0.0, 0.0, 0.0]),
        np.array([1.0, 0.0, 0.0]))


@pytest.fixture
def eq1_center() -> np.ndarray:
    """Viewpoint on the circumcenter axis at height 1."""
    return np.array([0.5, 1.0 / (2.0 * SQRT3), 1.0])


@pytest.fixture
def eq1_angles() -> ViewAngles:
    """All three subtended-angle cosines are exactly 5/8 for this scene."""
    return ViewAngles(cos_alpha=0.625, cos_beta=0.625, cos_gamma=0.625)


@pytest.fixture
def sc1_triangle() -> ControlTriangle:
    """Scalene triangle with canonical frame a=3, e=1, f=2."""
    return ControlTriangle.from_points(
        np.array([1.0, 2.0, 0.0]),
        np.array([0.0, 0.0, 0.0]),
        np.array([3.0, 0.0, 0.0]))


def triplet_of(u: float, v: float, a: float, cos_alpha: float):
    """Independent triplet recovery used to cross-check the solver."""
    s1 = a / math.sqrt(u * u + v * v - 2.0 * cos_alpha * u * v)
    return (s1, u * s1, v * s1)
