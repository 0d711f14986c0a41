#!/usr/bin/env python3
"""Build the one-point union of two simplicial-set JSON files.

Usage: build_wedge.py left.json right.json [base_left] [base_right]

Simplices of the left factor keep their ids prefixed `l.`, the right factor
is prefixed `r.`, and the right basepoint vertex is identified with the left
one. Basepoints default to vertex id "0". The result is written to stdout in
the same JSON format (fields: dim, simplices, faces).
"""

import json
import sys


def load(path):
    with open(path) as fh:
        space = json.load(fh)
    if len(space["simplices"]) != space["dim"] + 1:
        raise SystemExit(f"{path}: dim does not match the simplex table")
    return space


def main():
    if len(sys.argv) not in (3, 5):
        raise SystemExit(__doc__.strip())
    left = load(sys.argv[1])
    right = load(sys.argv[2])
    base_left = sys.argv[3] if len(sys.argv) == 5 else "0"
    base_right = sys.argv[4] if len(sys.argv) == 5 else "0"
    if base_left not in left["simplices"][0]:
        raise SystemExit(f"left basepoint `{base_left}` is not a vertex")
    if base_right not in right["simplices"][0]:
        raise SystemExit(f"right basepoint `{base_right}` is not a vertex")

    def rename_left(sid):
        return f"l.{sid}"

    def rename_right(sid):
        return rename_left(base_left) if sid == base_right else f"r.{sid}"

    dim = max(left["dim"], right["dim"])
    simplices = [[] for _ in range(dim + 1)]
    faces = {}
    for space, rename, skip in (
        (left, rename_left, None),
        (right, rename_right, base_right),
    ):
        for n, level in enumerate(space["simplices"]):
            for sid in level:
                if n == 0 and sid == skip:
                    continue
                simplices[n].append(rename(sid))
                if n >= 1:
                    faces[rename(sid)] = [
                        {
                            **(
                                {"degeneracies": f["degeneracies"]}
                                if f.get("degeneracies")
                                else {}
                            ),
                            "target": rename(f["target"]),
                        }
                        for f in space["faces"][sid]
                    ]

    out = {"dim": dim, "simplices": simplices, "faces": dict(sorted(faces.items()))}
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
