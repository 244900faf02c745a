"""Scene files, delimited reports, and mesh output.

Scene files are canonical JSON with either the optical center or the
subtended-angle cosines; parse/serialize round-trips bit-identically.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import SceneParseError
from .geometry import ControlTriangle, ViewAngles


def parse_scene(text: str):
    """-> (triangle, center-or-None, angles-or-None, label).

    Exactly one of opticalCenter / subtendedAngleCosines must be present;
    when the center is given the cosines are derived by the caller.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SceneParseError("scene document must be a JSON object")
    try:
        pts = doc["controlPoints"]
    except KeyError:
        raise SceneParseError("missing controlPoints")
    pts = np.asarray(pts, dtype=float)
    if pts.shape != (3, 3):
        raise SceneParseError("controlPoints must be a 3x3 array")
    has_center = "opticalCenter" in doc
    has_cos = "subtendedAngleCosines" in doc
    if has_center == has_cos:
        raise SceneParseError(
            "exactly one of opticalCenter / subtendedAngleCosines required")
    tri = ControlTriangle.from_points(pts[0], pts[1], pts[2])
    center = None
    angles = None
    if has_center:
        center = np.asarray(doc["opticalCenter"], dtype=float)
        if center.shape != (3,):
            raise SceneParseError("opticalCenter must be a 3-vector")
    else:
        cs = doc["subtendedAngleCosines"]
        if not (isinstance(cs, list) and len(cs) == 3):
            raise SceneParseError("subtendedAngleCosines must be a 3-list")
        angles = ViewAngles(*(float(x) for x in cs))
    return tri, center, angles, doc.get("label")


def serialize_scene(tri: ControlTriangle, center=None, angles=None,
                    label=None) -> str:
    """Canonical JSON text for a scene (sorted keys, repr floats)."""
    doc = {"controlPoints": [[float(x) for x in p] for p in tri.points]}
    if center is not None:
        doc["opticalCenter"] = [float(x) for x in center]
    elif angles is not None:
        doc["subtendedAngleCosines"] = list(angles.cosines)
    if label is not None:
        doc["label"] = label
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_scene(path: str):
    with open(path) as fh:
        return parse_scene(fh.read())


def write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def format_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def write_obj(path: str, vertices: np.ndarray, faces) -> None:
    """Text mesh: 'v x y z' lines plus 1-based triangular 'f i j k' lines."""
    with open(path, "w") as fh:
        for v in vertices:
            fh.write(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
        for f in faces:
            fh.write(f"f {f[0]} {f[1]} {f[2]}\n")


def read_obj(path: str):
    verts = []
    faces = []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(x) for x in parts[1:4]])
    return np.array(verts), faces
