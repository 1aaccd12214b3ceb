"""JSON wire formats: linkages, labels, paths, configurations, motions.

Rationals travel as "p" or "p/q" strings so nothing is corrupted by
floats; coordinates are floats formatted to 12 significant digits.  All
serializers emit sorted keys, so identical inputs give byte-identical
output.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .geometry import Configuration, Motion, MotionSegment
from .linkage import CyclicPartition, Linkage, Move, Path, PathStep, apply_move, new_linkage


def fmt_float(x: float) -> float:
    """Round to 12 significant digits for stable, readable output."""
    return float(f"{x:.12g}")


def rational_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def linkage_to_json(L: Linkage) -> dict:
    return {"lengths": [rational_str(l) for l in L.lengths]}


def linkage_from_json(obj: dict) -> Linkage:
    return new_linkage([Fraction(s) for s in obj["lengths"]])


def label_to_json(p: CyclicPartition) -> list[list[int]]:
    return p.to_lists()


def label_from_json(obj) -> CyclicPartition:
    return CyclicPartition(tuple(tuple(int(i) for i in part) for part in obj))


def path_to_json(p: Path) -> dict:
    return {
        "start": label_to_json(p.start),
        "steps": [
            {
                "move": {
                    "from": s.move.source,
                    "dir": s.move.direction,
                    "set": list(s.move.subset),
                },
                "edge": label_to_json(s.edge),
                "vertex": label_to_json(s.vertex),
            }
            for s in p.steps
        ],
    }


def path_from_json(obj: dict) -> Path:
    start = label_from_json(obj["start"])
    steps = []
    for s in obj["steps"]:
        move = Move(int(s["move"]["from"]), s["move"]["dir"], tuple(s["move"]["set"]))
        steps.append(
            PathStep(move, label_from_json(s["edge"]), label_from_json(s["vertex"]))
        )
    return Path(start, tuple(steps))


def rebuild_path(L: Linkage, start: CyclicPartition, moves: list[Move]) -> Path:
    steps = []
    current = start
    for m in moves:
        edge, current = apply_move(L, current, m)
        steps.append(PathStep(m, edge, current))
    return Path(start, tuple(steps))


def configuration_to_json(c: Configuration) -> list[list[float]]:
    return [[fmt_float(x), fmt_float(y)] for x, y in c.points]


def configuration_from_json(obj) -> Configuration:
    return Configuration(np.array(obj, dtype=float))


def motion_to_json(L: Linkage, m: Motion) -> dict:
    return {
        "linkage": linkage_to_json(L),
        "segments": [
            {
                "provenance": {"kind": seg.kind, "label": label_to_json(seg.label)},
                "params": [fmt_float(t) for t in seg.params],
                "frames": [configuration_to_json(f) for f in seg.frames],
            }
            for seg in m.segments
        ],
    }


def motion_from_json(obj: dict) -> tuple[Linkage, Motion]:
    L = linkage_from_json(obj["linkage"])
    segments = []
    for seg in obj["segments"]:
        segments.append(
            MotionSegment(
                seg["provenance"]["kind"],
                label_from_json(seg["provenance"]["label"]),
                tuple(float(t) for t in seg["params"]),
                tuple(configuration_from_json(f) for f in seg["frames"]),
            )
        )
    return L, Motion(tuple(segments))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
