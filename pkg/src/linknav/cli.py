"""Command-line interface.

Subcommands: check, graph, plan, synth, render, verify.  Exit codes:
0 success, 2 input error, 3 no path, 4 numeric failure, 5 a navigation
bound was violated.  The enumeration cap honors LINKNAV_MAX_N.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import random
import sys
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from . import cells, serialize
from .cells import TooLarge, bfs_distances, build_graph, census, components
from .geometry import GeometryError, HomotopyStalled, synthesize_motion
from .linkage import LinkageError, mirror
from .navigate import (
    BOW_BUDGET,
    CONNECTED_BUDGET,
    DISCONNECTED_BUDGET,
    NoPath,
    is_bow,
    plan,
    plan_bow,
    validate_path,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOPATH = 3
EXIT_NUMERIC = 4
EXIT_BOUND = 5


def _version() -> str:
    try:
        return version("linknav")
    except PackageNotFoundError:
        return "unknown"


def _load_linkage(path: str):
    with open(path) as fh:
        return serialize.linkage_from_json(json.load(fh))


def _load_label(text: str):
    return serialize.label_from_json(json.loads(text))


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _write_manifest(path: str, args, inputs: list[str], outputs: list[str]) -> None:
    manifest = {
        "command": " ".join(sys.argv[1:]),
        "inputs": {p: _sha256(p) for p in inputs},
        "options": {k: v for k, v in sorted(vars(args).items()) if k != "func"},
        "outputs": sorted(outputs),
        "version": _version(),
    }
    with open(path, "w") as fh:
        fh.write(serialize.dumps(manifest))


def cmd_check(args) -> int:
    try:
        L = _load_linkage(args.linkage)
    except LinkageError as exc:
        print(f"invalid linkage: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"n = {L.n}")
    print(f"perimeter = {serialize.rational_str(L.perimeter)}")
    print(f"longest edge index = {L.longest}")
    print("genericity: OK" + ("" if L.generic_certified else " (randomized check only)"))
    print(f"connected: {'yes' if L.is_connected() else 'no'}")
    if is_bow(L):
        print("one dominant edge: navigation needs at most 3 steps")
    return EXIT_OK


def cmd_graph(args) -> int:
    try:
        L = _load_linkage(args.linkage)
    except LinkageError as exc:
        print(f"invalid linkage: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.census:
            counts = census(L).counts
            print(serialize.dumps({"census": list(counts)}), end="")
            return EXIT_OK
        g = build_graph(L, force=args.force)
        if args.dot:
            lines = ["graph linkage {"]
            for v in g.vertices:
                lines.append(f'  "{v}";')
            for e, i, j in g.edges:
                lines.append(f'  "{g.vertices[i]}" -- "{g.vertices[j]}" [label="{e}"];')
            lines.append("}")
            print("\n".join(lines))
            return EXIT_OK
        ranks = cells.betti_numbers(L)
        stats = {
            "n": L.n,
            "vertex_count": len(g.vertices),
            "edge_count": len(g.edges),
            "predicted_vertex_count": cells.predicted_vertex_count(L),
            "components": len(components(g)),
            "degree_histogram": {str(k): v for k, v in cells.degree_histogram(g).items()},
            "betti": list(ranks),
            "euler_census": census(L).euler(),
            "euler_betti": sum((-1) ** k * r for k, r in enumerate(ranks)),
            "diameter": cells.diameter(g),
        }
        print(serialize.dumps(stats), end="")
        return EXIT_OK
    except TooLarge as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT


def cmd_plan(args) -> int:
    try:
        L = _load_linkage(args.linkage)
        v = _load_label(args.frm)
        w = _load_label(args.to)
    except (LinkageError, json.JSONDecodeError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        report = plan(L, v, w)
    except NoPath as exc:
        print(f"no path: {exc}", file=sys.stderr)
        return EXIT_NOPATH
    except LinkageError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for i, step in enumerate(report.path.steps, start=1):
        print(
            f"step {i}: shift {set(step.move.subset)} "
            f"{step.move.direction} -> {step.vertex}"
        )
    payload = serialize.path_to_json(report.path)
    text = serialize.dumps(payload)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        if args.manifest:
            _write_manifest(args.manifest, args, [args.linkage], [args.out])
    else:
        print(text, end="")
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        L = _load_linkage(args.linkage)
        with open(args.from_config) as fh:
            start = serialize.configuration_from_json(json.load(fh))
        with open(args.to_config) as fh:
            goal = serialize.configuration_from_json(json.load(fh))
    except (LinkageError, json.JSONDecodeError, ValueError, GeometryError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    from .geometry import FlexOptions, LengthMismatch

    opts = FlexOptions(samples=args.samples)
    try:
        motion = synthesize_motion(L, start, goal, opts)
    except NoPath as exc:
        print(f"no path: {exc}", file=sys.stderr)
        return EXIT_NOPATH
    except LengthMismatch as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (HomotopyStalled, GeometryError) as exc:
        print(f"geometry failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    residual = max(f.max_length_residual(L) for f in motion.all_frames())
    print(
        f"segments = {len(motion.segments)}, frames = {motion.frame_count()}, "
        f"max length residual = {residual:.3e}"
    )
    text = serialize.dumps(serialize.motion_to_json(L, motion))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        if args.manifest:
            _write_manifest(
                args.manifest, args, [args.linkage, args.from_config, args.to_config], [args.out]
            )
    else:
        print(text, end="")
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import render_animated, render_frames

    try:
        with open(args.motion) as fh:
            L, motion = serialize.motion_from_json(json.load(fh))
    except (KeyError, ValueError, LinkageError, GeometryError) as exc:
        print(f"malformed motion: {exc}", file=sys.stderr)
        return EXIT_INPUT
    names = render_frames(motion, args.out)
    outputs = [os.path.join(args.out, n) for n in names]
    if args.animated:
        anim = os.path.join(args.out, "motion.svg")
        render_animated(motion, anim, fps=args.fps)
        outputs.append(anim)
    print(f"wrote {len(outputs)} files to {args.out}")
    if args.manifest:
        _write_manifest(args.manifest, args, [args.motion], outputs)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        L = _load_linkage(args.linkage)
    except LinkageError as exc:
        print(f"invalid linkage: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        g = build_graph(L, force=args.force)
    except TooLarge as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    comps = components(g)
    comp_of = {}
    for ci, comp in enumerate(comps):
        for idx in comp:
            comp_of[idx] = ci
    bow = is_bow(L)
    budget = CONNECTED_BUDGET if len(comps) == 1 else DISCONNECTED_BUDGET
    if bow:
        budget = min(budget, BOW_BUDGET)

    pairs = [
        (i, j)
        for i, j in itertools.product(range(len(g.vertices)), repeat=2)
        if comp_of[i] == comp_of[j]
    ]
    if args.sample and args.sample < len(pairs):
        rng = random.Random(args.seed)
        pairs = rng.sample(pairs, args.sample)

    max_plan = 0
    max_bfs = 0
    violations = 0
    dist_cache: dict[int, list[int]] = {}
    for i, j in pairs:
        v, w = g.vertices[i], g.vertices[j]
        path = plan_bow(L, v, w) if bow else plan(L, v, w).path
        validate_path(L, path, expect_end=w)
        max_plan = max(max_plan, len(path.steps))
        if i not in dist_cache:
            dist_cache[i] = bfs_distances(g, i)
        d = dist_cache[i][j]
        max_bfs = max(max_bfs, d)
        if len(path.steps) > budget or d > len(path.steps):
            violations += 1
    print(
        f"checked {len(pairs)} pairs: max plan length = {max_plan} "
        f"(budget {budget}), max graph distance = {max_bfs}"
    )
    if violations:
        print(f"{violations} bound violations", file=sys.stderr)
        return EXIT_BOUND
    print("all navigation bounds hold")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="linknav",
        description="Plan and synthesize motions of planar polygonal linkages.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a linkage file and report its invariants")
    p.add_argument("linkage")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("graph", help="enumerate the vertex-edge graph")
    p.add_argument("linkage")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--stats", action="store_true", help="summary JSON (default)")
    mode.add_argument("--dot", action="store_true", help="DOT output")
    mode.add_argument("--census", action="store_true", help="per-dimension cell counts")
    p.add_argument("--force", action="store_true", help="override the enumeration cap")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("plan", help="navigate between two vertex labels")
    p.add_argument("linkage")
    p.add_argument("--from", dest="frm", required=True, help='label JSON, e.g. "[[1,4,7],[2,5],[3,6]]"')
    p.add_argument("--to", dest="to", required=True)
    p.add_argument("--out", help="write the path JSON here instead of stdout")
    p.add_argument("--manifest", help="write a reproducibility manifest")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("synth", help="synthesize a motion between two configurations")
    p.add_argument("linkage")
    p.add_argument("--from-config", required=True)
    p.add_argument("--to-config", required=True)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--out", help="write the motion JSON here instead of stdout")
    p.add_argument("--manifest", help="write a reproducibility manifest")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("render", help="render a motion JSON to SVG frames")
    p.add_argument("motion")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--fps", type=float, default=25.0)
    p.add_argument("--animated", action="store_true", help="also write one animated SVG")
    p.add_argument("--manifest", help="write a reproducibility manifest")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="check the navigation bounds against BFS")
    p.add_argument("linkage")
    p.add_argument("--sample", type=int, default=0, help="check only N random pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
