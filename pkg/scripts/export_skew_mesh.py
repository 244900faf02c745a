#!/usr/bin/env python3
"""Export the three point-sharing surfaces of a scene as mesh files.

Usage:
    python3 scripts/export_skew_mesh.py scene.json outdir [--grid N]
"""

import argparse
import os
import sys

import numpy as np

from p3pshare.loci import skew_mesh, skewed_danger_cylinder
from p3pshare.sceneio import load_scene, write_obj
from p3pshare.sharing import POINT_LABELS


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("scene")
    ap.add_argument("outdir")
    ap.add_argument("--grid", type=int, default=96)
    args = ap.parse_args(argv)

    tri, _, _, _ = load_scene(args.scene)
    os.makedirs(args.outdir, exist_ok=True)
    for label in POINT_LABELS:
        surf = skewed_danger_cylinder(tri, label)
        verts, faces = skew_mesh(surf, n=args.grid)
        world = np.array([surf.frame.to_world(v) for v in verts])
        path = os.path.join(args.outdir, f"skew_{label.name.lower()}.obj")
        write_obj(path, world, faces)
        print(f"{path}: {len(verts)} vertices, {len(faces)} faces")
    return 0


if __name__ == "__main__":
    sys.exit(main())
