"""Constant-step navigation between vertices of the linkage graph.

Everything here works symbolically on labels; the graph is never
enumerated.  Planning runs in layers:

* ``plan_bow``                 -- linkages with one dominant edge, <= 3 steps;
* ``plan_to_target_or_mirror`` -- any linkage, <= 7 steps, ending at the
  target or at its mirror image;
* ``turn_inside_out``          -- a vertex to its mirror image on a
  connected space, normally <= 6 steps;
* ``plan``                     -- the composition, with a 13-step budget on
  connected spaces and 7 on disconnected ones.

A relabeling permutation reduces arbitrary targets to interval form
(each part an arc of the index circle), which is what makes the step
bounds independent of n: after a bounded number of shifts only two arc
cut points remain to fix.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .linkage import (
    CyclicPartition,
    IllegalMove,
    Linkage,
    LinkageError,
    Move,
    Path,
    PathStep,
    apply_move,
    is_admissible,
    mirror,
    orientation_class,
)

log = logging.getLogger(__name__)

INSIDE_OUT_BUDGET = 6
CONNECTED_BUDGET = 13
DISCONNECTED_BUDGET = 7
EITHER_OR_BUDGET = 7
BOW_BUDGET = 3


class NotABow(LinkageError):
    pass


class InvalidVertex(LinkageError):
    pass


class Disconnected(LinkageError):
    pass


class NoPath(LinkageError):
    def __init__(self, msg, class_from=None, class_to=None):
        super().__init__(msg)
        self.class_from = class_from
        self.class_to = class_to


class NormalizationFailed(LinkageError):
    pass


class InternalBoundViolation(LinkageError):
    pass


class InvalidStep(LinkageError):
    def __init__(self, index: int, reason: str):
        self.index = index
        self.reason = reason
        super().__init__(f"step {index}: {reason}")


@dataclass(frozen=True)
class PlanReport:
    """Outcome of ``plan``: the path plus bookkeeping about how it was found."""

    path: Path
    reached_mirror: bool
    sigma: tuple[int, ...]
    phase_steps: dict = field(default_factory=dict)


def validate_path(L: Linkage, path: Path, expect_end: CyclicPartition | None = None) -> None:
    """Re-derive every step with apply_move; raise InvalidStep on any mismatch."""
    if not is_admissible(L, path.start):
        raise InvalidStep(0, f"start {path.start} is not admissible")
    current = path.start
    for i, step in enumerate(path.steps):
        try:
            edge, nxt = apply_move(L, current, step.move)
        except IllegalMove as exc:
            raise InvalidStep(i, f"move {step.move} illegal: {exc}") from exc
        if edge != step.edge:
            raise InvalidStep(i, f"edge mismatch: derived {edge}, recorded {step.edge}")
        if nxt != step.vertex:
            raise InvalidStep(i, f"vertex mismatch: derived {nxt}, recorded {step.vertex}")
        current = nxt
    if expect_end is not None and current != expect_end:
        raise InvalidStep(len(path.steps), f"path ends at {current}, expected {expect_end}")


class _Walk:
    """Step accumulator: shifts are given by content, positions are derived."""

    def __init__(self, L: Linkage, start: CyclicPartition):
        self.L = L
        self.start = start
        self.current = start
        self.steps: list[PathStep] = []

    def shift(self, subset: Iterable[int], dest_content: Iterable[int]) -> None:
        subset = tuple(sorted(subset))
        dest = tuple(sorted(dest_content))
        v = self.current
        src = v.part_index_of(subset[0])
        dst = v.position_of_part(dest)
        p = len(v.parts)
        if dst == (src + 1) % p:
            direction = "next"
        elif dst == (src - 1) % p:
            direction = "prev"
        else:
            raise IllegalMove(f"parts at {src} and {dst} are not adjacent in {v}")
        move = Move(src, direction, subset)
        edge, nxt = apply_move(self.L, v, move)
        self.steps.append(PathStep(move, edge, nxt))
        self.current = nxt

    def path(self) -> Path:
        return Path(self.start, tuple(self.steps))


def _rotated(v: CyclicPartition, anchor_pos: int) -> tuple[tuple[int, ...], ...]:
    """Parts of v starting from anchor_pos, in cyclic order."""
    return v.parts[anchor_pos:] + v.parts[:anchor_pos]


def _require_vertex(L: Linkage, v: CyclicPartition, what: str) -> None:
    if len(v.parts) != 3:
        raise InvalidVertex(f"{what} must have 3 parts, got {len(v.parts)}")
    if not is_admissible(L, v):
        raise InvalidVertex(f"{what} {v} has a long part")


def is_bow(L: Linkage) -> bool:
    """One dominant edge: every pair containing the longest edge is long."""
    b = L.longest
    others = [i for i in range(1, L.n + 1) if i != b]
    shortest = min(others, key=lambda i: (L.lengths[i - 1], i))
    return L.is_long((b, shortest))


def plan_bow(L: Linkage, v: CyclicPartition, target: CyclicPartition) -> Path:
    """Navigate a one-long-edge linkage in at most 3 steps.

    Phases: bring the pivot (the lowest index of the target's leading
    part) next to the long edge, collapse everything else into the other
    part, then pull the target's leading part back out.
    """
    if not is_bow(L):
        raise NotABow("the longest edge is not long against every other edge")
    if L.n < 4:
        raise NotABow("bow navigation needs n >= 4")
    _require_vertex(L, v, "start")
    _require_vertex(L, target, "target")
    if v == target:
        return Path(v)
    b = L.longest
    walk = _Walk(L, v)

    def sides(label: CyclicPartition) -> tuple[tuple[int, ...], tuple[int, ...]]:
        pos = label.part_index_of(b)
        rot = _rotated(label, pos)
        if rot[0] != (b,):
            raise InvalidVertex(f"{label} puts the dominant edge {b} in a non-singleton part")
        return rot[1], rot[2]  # cyclically after / before the long edge

    t_after, t_before = sides(target)
    p_after, p_before = sides(v)
    pivot = min(t_after)

    if pivot in p_before:
        if len(p_before) >= 2:
            walk.shift({pivot}, p_after)
        elif set(t_after) == {pivot}:
            # start is the mirror of the target hub: a three-step flip
            x = min(p_after)
            rest = tuple(i for i in p_after if i != x)
            walk.shift({x}, (pivot,))
            walk.shift({pivot}, rest)
            walk.shift(rest, (x,))
            assert walk.current == target
            return walk.path()
        else:
            pivot = min(set(t_after) & set(p_after))

    if walk.current != target:
        after, before = sides(walk.current)
        if set(after) != {pivot}:
            walk.shift(set(after) - {pivot}, before)
    if walk.current != target:
        after, before = sides(walk.current)
        if set(t_after) != {pivot}:
            walk.shift(set(t_after) - {pivot}, after)
    assert walk.current == target, f"bow navigation missed: {walk.current} != {target}"
    assert len(walk.steps) <= BOW_BUDGET
    return walk.path()


def _interval_sigma(L: Linkage, target: CyclicPartition) -> tuple[int, ...]:
    """Permutation sending the target to interval form with the longest edge at 1.

    Rotate the target so the longest edge's part comes first, then number
    the entries consecutively along the cyclic order (the longest edge
    first within its part, then ascending).
    """
    b = L.longest
    rot = _rotated(target, target.part_index_of(b))
    sigma = [0] * L.n
    nxt = 1
    for pi, part in enumerate(rot):
        members = sorted(part)
        if pi == 0:
            members = [b] + [i for i in members if i != b]
        for item in members:
            sigma[item - 1] = nxt
            nxt += 1
    return tuple(sigma)


def _apply_sigma(p: CyclicPartition, sigma: Sequence[int]) -> CyclicPartition:
    return CyclicPartition(tuple(tuple(sigma[i - 1] for i in part) for part in p.parts))


def _inverse_sigma(sigma: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s - 1] = i + 1
    return tuple(inv)


def plan_to_target_or_mirror(
    L: Linkage, v: CyclicPartition, target: CyclicPartition
) -> tuple[Path, bool]:
    """A path of length at most 7 from v to the target or to its mirror image.

    The boolean reports which endpoint was reached (True for the mirror).
    """
    _require_vertex(L, v, "start")
    _require_vertex(L, target, "target")
    if v == target:
        return Path(v), False
    if v == mirror(target):
        return Path(v), True

    sigma = _interval_sigma(L, target)
    L2 = L.permuted(sigma)
    v2 = _apply_sigma(v, sigma)
    t2 = _apply_sigma(target, sigma)
    shifts = _either_or_shifts(L2, v2, t2)

    inv = _inverse_sigma(sigma)
    walk = _Walk(L, v)
    for subset, dest in shifts:
        walk.shift({inv[i - 1] for i in subset}, {inv[i - 1] for i in dest})
    reached_mirror = walk.current == mirror(target)
    if not reached_mirror and walk.current != target:
        raise InternalBoundViolation(
            f"phase walk ended at {walk.current}, expected {target} or its mirror"
        )
    if len(walk.steps) > EITHER_OR_BUDGET:
        raise InternalBoundViolation(
            f"target-or-mirror used {len(walk.steps)} steps (> {EITHER_OR_BUDGET})"
        )
    return walk.path(), reached_mirror


def _either_or_shifts(
    L: Linkage, v: CyclicPartition, target: CyclicPartition
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Phase engine in the relabeled world; returns the (subset, dest) shifts.

    Requires the target in interval form ({1..k},{k+1..m},{m+1..n}) with
    edge 1 longest.  Phase budget: 2 + 2 + 1 + 2 = 7.
    """
    n = L.n
    t_parts = target.parts
    k = len(t_parts[0])
    m = k + len(t_parts[1])
    assert t_parts == (
        tuple(range(1, k + 1)),
        tuple(range(k + 1, m + 1)),
        tuple(range(m + 1, n + 1)),
    ), "target must be in interval form"
    tmirror = mirror(target)

    walk = _Walk(L, v)
    shifts: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def do(subset, dest):
        subset = tuple(sorted(subset))
        dest = tuple(sorted(dest))
        walk.shift(subset, dest)
        shifts.append((subset, dest))

    def done():
        return walk.current in (target, tmirror)

    # phase 1 (<= 2 shifts): isolate edge 1 in its own part, greedy-max first.
    # Whatever will not fit beside the third part goes to the first; that
    # union stays short because edge 1 outweighs any rejected entry.
    if not done():
        pos1 = walk.current.part_index_of(1)
        a_part, b_part, c_part = _rotated(walk.current, (pos1 - 1) % 3)
        movers = sorted(set(b_part) - {1})
        batch: list[int] = []
        acc = set(c_part)
        for x in movers:
            if L.is_short(acc | {x}):
                acc.add(x)
                batch.append(x)
        rest = [x for x in movers if x not in batch]
        if batch:
            do(batch, c_part)
        if rest and not done():
            cur = walk.current
            do(rest, cur.parts[cur.part_index_of(min(a_part))])

    # phase 2 (<= 2): pull the maximal short prefix {2..t} into edge 1's part.
    # Neither side can be emptied: a side containing all of {t+1..n} would
    # be long because its complement sits inside the short prefix.
    t = 1
    while t < n and L.is_short(range(1, t + 2)):
        t += 1
    if not done():
        cur = walk.current
        mid = cur.parts[cur.part_index_of(1)]
        for side in [p for p in cur.parts if p != mid]:
            pull = [i for i in side if 2 <= i <= t]
            if pull and not done():
                now = walk.current
                do(pull, now.parts[now.part_index_of(1)])

    # phase 3 (<= 1): beyond the prefix, keep the run starting at t+1 and
    # flush the rest of its part to the other side, leaving three arcs.
    # The flushed union is {u+1..n}, short because {1..u} contains the
    # long set {1..t+1}.
    if not done():
        cur = walk.current
        side = cur.parts[cur.part_index_of(t + 1)]
        u = t + 1
        while u + 1 <= n and (u + 1) in side:
            u += 1
        rest = [i for i in side if i > u]
        if rest:
            other = next(p for p in cur.parts if t + 1 not in p and 1 not in p)
            do(rest, other)

    # phase 4 (<= 2): parts are arcs {1..t}, {t+1..u}, {u+1..n}; the cut at
    # n is shared with the target, so move the other two cuts to m then k.
    if not done():
        cur = walk.current
        prefix = cur.parts[cur.part_index_of(1)]
        t_now = len(prefix)
        assert prefix == tuple(range(1, t_now + 1)), f"prefix not an arc: {cur}"
        first = cur.parts[cur.part_index_of(t_now + 1)]
        u = t_now + len(first)
        assert first == tuple(range(t_now + 1, u + 1)), f"arc structure lost: {cur}"
        assert k <= t_now < m, f"cut invariants violated: k={k} t={t_now} m={m}"
        if m < u:
            do(range(m + 1, u + 1), range(u + 1, n + 1))
        elif m > u:
            do(range(u + 1, m + 1), range(t_now + 1, u + 1))
        if not done() and k < t_now:
            cur = walk.current
            do(range(k + 1, t_now + 1), cur.parts[cur.part_index_of(t_now + 1)])

    assert walk.current in (target, tmirror), f"phases ended at {walk.current}"
    return shifts


Shifts = list[tuple[frozenset, frozenset]]


def _flip3(L: Linkage, v: CyclicPartition) -> Shifts | None:
    """Three content-shifts from v to its mirror image, when a split exists.

    Pick a part F to keep fixed; split one neighbor X into two pieces
    whose unions with the opposite part Y are both short.  Piece by piece
    the sides then trade places around F, which reverses the cyclic
    order.
    """
    for f_pos in range(3):
        rot = _rotated(v, f_pos)
        for x_side, y_side in ((rot[2], rot[1]), (rot[1], rot[2])):
            if len(x_side) < 2:
                continue
            y = frozenset(y_side)
            anchor, rest = x_side[0], x_side[1:]
            for r in range(0, len(rest)):
                for combo in itertools.combinations(rest, r):
                    piece_a = frozenset({anchor, *combo})
                    piece_b = frozenset(x_side) - piece_a
                    if L.is_short(y | piece_b) and L.is_short(y | piece_a):
                        return [
                            (piece_b, y),
                            (y, piece_a),
                            (piece_a, piece_b),
                        ]
    return None


def _flip4(L: Linkage, v: CyclicPartition) -> Shifts | None:
    """Four content-shifts from v to its mirror image: both sides split once.

    With blocks (B4|B5, F, B2|B3) the moves are B3 into the far side, B5
    across to B2, B2 back across, and B4 across; legal when B3 with all of
    X, B5 with B2, and the complement of F|B5 are each short.
    """
    for f_pos in range(3):
        rot = _rotated(v, f_pos)
        fixed = frozenset(rot[0])
        for x_side, y_side in ((rot[2], rot[1]), (rot[1], rot[2])):
            if len(x_side) < 2 or len(y_side) < 2:
                continue
            x = frozenset(x_side)
            y = frozenset(y_side)
            for b5 in _split_candidates(L, x_side):
                b4 = x - b5
                if not b4 or not L.is_long(fixed | b5):
                    continue
                for b2 in _split_candidates(L, y_side):
                    b3 = y - b2
                    if not b3:
                        continue
                    if not (L.is_short(b3 | x) and L.is_short(b2 | b5)):
                        continue
                    return [
                        (b3, x),
                        (b5, b2),
                        (b2, b3 | b4),
                        (b4, b5),
                    ]
    return None


def _split_candidates(L: Linkage, side: tuple[int, ...], cap: int = 12) -> Iterable[frozenset]:
    """Nonempty proper-subset candidates: singletons first, then the rest."""
    for item in side:
        yield frozenset({item})
    if len(side) <= cap:
        for r in range(2, len(side)):
            for combo in itertools.combinations(side, r):
                yield frozenset(combo)


def _run_shifts(L: Linkage, start: CyclicPartition, shifts: Shifts) -> Path | None:
    walk = _Walk(L, start)
    try:
        for subset, dest in shifts:
            walk.shift(subset, dest)
    except (IllegalMove, KeyError):
        return None
    return walk.path()


def _prepped_flip(
    L: Linkage, v: CyclicPartition, prep_after: bool, prep_before: bool
) -> Path | None:
    """Maximal shifts into the longest edge's part, flip there, mirrored undo."""
    b = L.longest
    rot = _rotated(v, v.part_index_of(b))
    after, before = rot[1], rot[2]
    walk = _Walk(L, v)
    preps: list[tuple[tuple[int, ...], frozenset]] = []

    def pull(side: tuple[int, ...]) -> None:
        hub = set(walk.current.parts[walk.current.part_index_of(b)])
        batch: list[int] = []
        for x in sorted(side):
            if len(batch) == len(side) - 1:
                break
            if L.is_short(hub | {x}):
                hub.add(x)
                batch.append(x)
        if batch:
            cur = walk.current
            walk.shift(batch, cur.parts[cur.part_index_of(b)])
            preps.append((tuple(batch), frozenset(side) - set(batch)))

    try:
        if prep_after:
            pull(after)
        if prep_before:
            pull(before)
    except IllegalMove:
        return None
    if not preps:
        return None

    w = walk.current
    shifts = _flip3(L, w) or _flip4(L, w)
    if shifts is None:
        return None
    try:
        for subset, dest in shifts:
            walk.shift(subset, dest)
    except (IllegalMove, KeyError):
        return None
    if walk.current != mirror(w):
        return None
    for subset, home in reversed(preps):
        try:
            walk.shift(subset, home)
        except (IllegalMove, KeyError):
            return None
    if walk.current != mirror(v):
        return None
    return walk.path()


def _inside_out_search(L: Linkage, v: CyclicPartition) -> Path | None:
    """Flip decompositions by increasing length; None when everything fails."""
    target = mirror(v)
    for finder in (_flip3, _flip4):
        shifts = finder(L, v)
        if shifts is not None:
            path = _run_shifts(L, v, shifts)
            if path is not None and path.end == target:
                return path
    best: Path | None = None
    for prep_after, prep_before in ((True, False), (False, True), (True, True)):
        path = _prepped_flip(L, v, prep_after, prep_before)
        if path is not None and (best is None or len(path.steps) < len(best.steps)):
            best = path
    return best


def turn_inside_out(L: Linkage, v: CyclicPartition) -> Path:
    """A path from a vertex to its mirror image on a connected space.

    Searches block decompositions realizing the flip in 3 or 4 moves;
    when the direct decompositions fail, maximal preparatory shifts into
    the longest edge's part are tried and undone afterwards.  Raises
    Disconnected when no mirror path can exist.
    """
    _require_vertex(L, v, "vertex")
    if not L.is_connected():
        raise Disconnected("the mirror image lies in the other connected component")
    best = _inside_out_search(L, v)
    if best is None:
        raise NormalizationFailed(f"no inside-out decomposition found at {v}")
    if len(best.steps) > INSIDE_OUT_BUDGET:
        log.warning(
            "inside-out at %s used %d steps (budget %d); counterexample logged",
            v,
            len(best.steps),
            INSIDE_OUT_BUDGET,
        )
    return best


def _reversed_path(L: Linkage, path: Path) -> Path:
    """The same walk traversed backwards, moves rebuilt step by step."""
    vertices = path.vertices()
    walk = _Walk(L, vertices[-1])
    for i in range(len(path.steps) - 1, -1, -1):
        before = vertices[i]
        step = path.steps[i]
        subset = set(step.move.subset)
        remainder = set(before.parts[step.move.source]) - subset
        walk.shift(subset, remainder)
        assert walk.current == before
    return walk.path()


def _concat(L: Linkage, first: Path, second: Path) -> Path:
    assert first.end == second.start
    return Path(first.start, first.steps + second.steps)


def plan(L: Linkage, v: CyclicPartition, target: CyclicPartition) -> PlanReport:
    """Full navigation: at most 13 steps when connected, at most 7 otherwise.

    Phase one heads for the target or its mirror image; when only the
    mirror was reached, a second attempt aims at the mirror directly and
    plans backwards from the target, and failing those the mirror image is
    turned inside out.  Raises NoPath when the endpoints lie in different
    components.
    """
    _require_vertex(L, v, "start")
    _require_vertex(L, target, "target")
    sigma = _interval_sigma(L, target)
    if v == target:
        return PlanReport(Path(v), False, sigma, {"to_target_or_mirror": 0})

    oc_v = orientation_class(L, v)
    oc_t = orientation_class(L, target)
    if oc_v is not None and oc_v != oc_t:
        raise NoPath(
            f"orientation classes differ ({oc_v} vs {oc_t}); no path exists",
            class_from=oc_v,
            class_to=oc_t,
        )
    budget = CONNECTED_BUDGET if oc_v is None else DISCONNECTED_BUDGET

    p1, hit_mirror = plan_to_target_or_mirror(L, v, target)
    if not hit_mirror:
        report = PlanReport(p1, False, sigma, {"to_target_or_mirror": len(p1.steps)})
        _check_plan(L, report, v, target, budget)
        return report
    if oc_v is not None:
        raise InternalBoundViolation(
            "reached the mirror image on a disconnected space despite equal "
            "orientation classes"
        )

    p2, p2_mirror = plan_to_target_or_mirror(L, v, mirror(target))
    if p2_mirror:  # the mirror of the mirror is the target itself
        report = PlanReport(p2, False, sigma, {"to_target_or_mirror": len(p2.steps)})
        _check_plan(L, report, v, target, budget)
        return report
    back, back_mirror = plan_to_target_or_mirror(L, target, v)
    if not back_mirror:
        forward = _reversed_path(L, back)
        report = PlanReport(forward, False, sigma, {"to_target_or_mirror": len(forward.steps)})
        _check_plan(L, report, v, target, budget)
        return report

    candidates: list[tuple[Path, dict]] = []
    flip_end = _inside_out_search(L, mirror(target))
    if flip_end is not None:
        for head in (p1, p2):
            full = _concat(L, head, flip_end)
            candidates.append(
                (
                    full,
                    {
                        "to_target_or_mirror": len(head.steps),
                        "inside_out": len(flip_end.steps),
                    },
                )
            )
    flip_start = _inside_out_search(L, v)
    if flip_start is not None:
        tail = _reversed_path(L, back)  # mirror(v) -> target
        full = _concat(L, flip_start, tail)
        candidates.append(
            (
                full,
                {
                    "inside_out": len(flip_start.steps),
                    "to_target_or_mirror": len(tail.steps),
                },
            )
        )
    if not candidates:
        raise NormalizationFailed(
            f"no inside-out decomposition at {mirror(target)} or {v}"
        )
    best, phases = min(candidates, key=lambda c: len(c[0].steps))
    report = PlanReport(best, True, sigma, phases)
    _check_plan(L, report, v, target, budget)
    return report


def _check_plan(L, report, v, target, budget):
    validate_path(L, report.path, expect_end=target)
    if report.path.start != v:
        raise InternalBoundViolation("plan starts at the wrong vertex")
    if len(report.path.steps) > budget:
        raise InternalBoundViolation(
            f"plan used {len(report.path.steps)} steps, budget {budget}"
        )
