"""Numeric realization of labels and synthesis of continuous motions.

Floating point lives here and only here.  A configuration is the joint
coordinates p_1..p_n in a fixed gauge (p_1 at the origin, p_2 on the
positive x axis), one representative per orientation-preserving isometry
class; mirror configurations therefore get distinct representatives.

Vertices of the graph realize as "disguised triangles" (three edge
directions), edges as one-parameter families of disguised convex
quadrilaterals, parametrized in closed form by one diagonal.  Motions
are assembled as: an in-cell homotopy from the start onto a vertex, a
quadrilateral flex per planned graph edge, and an in-cell homotopy into
the target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linkage import (
    CyclicPartition,
    InadmissibleEdge,
    InadmissibleVertex,
    Linkage,
    LinkageError,
    edge_endpoints,
    is_admissible,
    orientation_class,
    refines,
)
from .navigate import NoPath, plan


class GeometryError(LinkageError):
    pass


class ConvexityLost(GeometryError):
    pass


class DegenerateDirection(GeometryError):
    pass


class NoCut(GeometryError):
    pass


class LengthMismatch(GeometryError):
    pass


class HomotopyStalled(GeometryError):
    def __init__(self, msg, partial=None, parameter=None):
        super().__init__(msg)
        self.partial = partial
        self.parameter = parameter


@dataclass(frozen=True)
class FlexOptions:
    """Tolerances and sampling density; lengths scale with the perimeter."""

    samples: int = 64
    length_tol: float = 1e-9  # times the perimeter
    angle_tol: float = 1e-7  # radians
    continuity: float = 0.05  # times the perimeter
    min_step: float = 1e-6

    def tol_len(self, L: Linkage) -> float:
        return self.length_tol * float(L.perimeter)

    def max_jump(self, L: Linkage) -> float:
        return self.continuity * float(L.perimeter)


DEFAULTS = FlexOptions()


@dataclass(frozen=True, eq=False)
class Configuration:
    """Joint coordinates (n, 2) in the fixed gauge."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
            raise GeometryError(f"expected an (n, 2) coordinate array, got {pts.shape}")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)

    def edge_vectors(self) -> np.ndarray:
        return np.roll(self.points, -1, axis=0) - self.points

    def edge_lengths(self) -> np.ndarray:
        return np.linalg.norm(self.edge_vectors(), axis=1)

    def max_length_residual(self, L: Linkage) -> float:
        target = np.array([float(l) for l in L.lengths])
        return float(np.max(np.abs(self.edge_lengths() - target)))


def cross2(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def gauge(points: np.ndarray) -> np.ndarray:
    """Translate p_1 to the origin and rotate p_2 onto the positive x axis."""
    pts = np.asarray(points, dtype=float) - points[0]
    v = pts[1]
    norm = math.hypot(v[0], v[1])
    if norm == 0:
        raise GeometryError("first edge has zero length; cannot fix the gauge")
    c, s = v[0] / norm, v[1] / norm
    rot = np.array([[c, s], [-s, c]])
    return pts @ rot.T


def _chain_from_vectors(vectors: np.ndarray) -> Configuration:
    pts = np.zeros((len(vectors), 2))
    np.cumsum(vectors[:-1], axis=0, out=pts[1:])
    return Configuration(gauge(pts))


def _triangle_directions(a: float, b: float, c: float) -> list[np.ndarray]:
    """Unit directions of a counterclockwise triangle with sides a, b, c.

    Side a runs from the origin along +x; the strict triangle inequality
    must hold.
    """
    x = (a * a + c * c - b * b) / (2 * a)
    y_sq = c * c - x * x
    if y_sq <= 0:
        raise GeometryError(f"degenerate triangle with sides {a}, {b}, {c}")
    apex = np.array([x, math.sqrt(y_sq)])
    p0 = np.array([0.0, 0.0])
    p1 = np.array([a, 0.0])
    return [
        (p1 - p0) / a,
        (apex - p1) / b,
        (p0 - apex) / c,
    ]


def _vectors_by_index(L: Linkage, parts, directions) -> np.ndarray:
    vectors = np.zeros((L.n, 2))
    for part, direction in zip(parts, directions):
        for i in sorted(part):
            vectors[i - 1] = direction * float(L.lengths[i - 1])
    return vectors


def realize_vertex(L: Linkage, v: CyclicPartition) -> Configuration:
    """The disguised-triangle configuration of a 3-part label.

    Each part's total length is one triangle side (counterclockwise, the
    first part's side leaving the origin along +x); the side is subdivided
    into its edges in ascending index order, and the edges are then
    reassembled in index order, keeping directions.
    """
    if len(v.parts) != 3 or not is_admissible(L, v):
        raise InadmissibleVertex(f"{v} is not an admissible 3-part label")
    sums = [float(L.subset_sum(p)) for p in v.parts]
    directions = _triangle_directions(*sums)
    return _chain_from_vectors(_vectors_by_index(L, v.parts, directions))


def _quad_rotation(L: Linkage, e: CyclicPartition) -> tuple[int, ...]:
    """Rotation offset making parts (X, Y, Z) consecutive with X|Y and Y|Z short.

    The edge's two short adjacent-pair merges always overlap in exactly
    one part (one merge from each complementary family); that shared part
    is Y.
    """
    parts = e.parts
    short_pairs = [
        i for i in range(4) if L.is_short(parts[i] + parts[(i + 1) % 4])
    ]
    if len(short_pairs) != 2:
        raise InadmissibleEdge(f"{e} does not have exactly two short adjacent merges")
    i, j = short_pairs
    # pairs (i, i+1) and (j, j+1) share the part Y; X is the earlier one
    if (i + 1) % 4 == j:
        return tuple((i + off) % 4 for off in range(4))
    if (j + 1) % 4 == i:
        return tuple((j + off) % 4 for off in range(4))
    raise InadmissibleEdge(f"{e}: short merges do not overlap")


def realize_edge_point(
    L: Linkage, e: CyclicPartition, t: float, opts: FlexOptions = DEFAULTS
) -> Configuration:
    """A point on the one-parameter family of configurations of an edge label.

    t = 0 gives the first endpoint vertex of ``edge_endpoints`` and t = 1
    the second (up to gauge).  The convex quadrilateral with the four part
    sums as sides is parametrized by the diagonal spanning the two merging
    parts: it shrinks linearly from the straightened sum to its law-of-
    cosines value in the opposite degenerate triangle.
    """
    if len(e.parts) != 4 or not is_admissible(L, e):
        raise InadmissibleEdge(f"{e} is not an admissible 4-part label")
    if not 0 <= t <= 1:
        raise GeometryError(f"t must lie in [0, 1], got {t}")
    order = _quad_rotation(L, e)
    px, py, pz, pw = (e.parts[i] for i in order)
    x, y, z, w = (float(L.subset_sum(p)) for p in (px, py, pz, pw))

    v0, v1 = edge_endpoints(L, e)
    c0 = CyclicPartition((tuple(sorted(px + py)), pz, pw))
    s = t if c0 == v0 else 1.0 - t
    if c0 != v0:
        assert CyclicPartition((px, tuple(sorted(py + pz)), pw)) == v0

    # diagonal Q0-Q2: x+y when the X|Y joint straightens, law of cosines
    # in the degenerate triangle (x, y+z, w) when the Y|Z joint does
    cos_t1 = (x * x + (y + z) ** 2 - w * w) / (2 * x * (y + z))
    d1_sq = x * x + y * y - 2 * x * y * cos_t1
    d0 = x + y
    d = (1.0 - s) * d0 + s * math.sqrt(max(d1_sq, 0.0))

    q0 = np.array([0.0, 0.0])
    q2 = np.array([d, 0.0])
    q1x = (x * x + d * d - y * y) / (2 * d)
    q1 = np.array([q1x, -math.sqrt(max(x * x - q1x * q1x, 0.0))])
    q3x = (w * w + d * d - z * z) / (2 * d)
    q3 = np.array([q3x, math.sqrt(max(w * w - q3x * q3x, 0.0))])

    quad = [q0, q1, q2, q3]
    sides = [x, y, z, w]
    directions = [(quad[(i + 1) % 4] - quad[i]) / sides[i] for i in range(4)]
    if 0 < t < 1:
        for i in range(4):
            cross = cross2(directions[i - 1], directions[i])
            if cross <= 0:
                raise ConvexityLost(
                    f"{e} at t={t}: joint {i} is not strictly convex (cross={cross:.3e})"
                )
    return _chain_from_vectors(_vectors_by_index(L, (px, py, pz, pw), directions))


def convexify(
    c: Configuration, angle_tol: float = DEFAULTS.angle_tol
) -> tuple[Configuration, CyclicPartition]:
    """Sort the edge vectors by direction into a convex polygon plus label.

    Edges whose directions coincide within ``angle_tol`` merge into one
    part; the label is the cyclically ordered partition of edge indices in
    slope order.
    """
    vectors = c.edge_vectors()
    norms = np.linalg.norm(vectors, axis=1)
    if np.any(norms == 0):
        raise DegenerateDirection("zero-length edge")
    angles = np.arctan2(vectors[:, 1], vectors[:, 0])
    order = sorted(range(c.n), key=lambda i: (angles[i], i))
    groups: list[list[int]] = [[order[0]]]
    for i in order[1:]:
        if angles[i] - angles[groups[-1][0]] <= angle_tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    if len(groups) > 1 and (angles[groups[0][0]] + 2 * math.pi) - angles[groups[-1][0]] <= angle_tol:
        groups[0] = groups[-1] + groups[0]
        groups.pop()
    if len(groups) < 3:
        raise DegenerateDirection(
            f"only {len(groups)} distinct edge directions; closed generic "
            "configurations need at least 3"
        )
    start = min(range(len(groups)), key=lambda gi: min(groups[gi]))
    groups = groups[start:] + groups[:start]
    label = CyclicPartition(tuple(tuple(sorted(i + 1 for i in g)) for g in groups))
    sums = np.array([vectors[g].sum(axis=0) for g in groups])
    pts = np.zeros((len(groups), 2))
    np.cumsum(sums[:-1], axis=0, out=pts[1:])
    return Configuration(gauge(pts)), label


def cell_label(c: Configuration, angle_tol: float = DEFAULTS.angle_tol) -> CyclicPartition:
    """The label of the open cell containing the configuration."""
    return convexify(c, angle_tol)[1]


def entry_vertex(L: Linkage, cell: CyclicPartition) -> CyclicPartition:
    """A vertex in the closure of a cell, preferably flanking the longest edge.

    The preferred cut keeps the longest edge's part alone between a
    maximal short run J of the following parts and the remainder I; when
    that part is a singleton such a cut always exists.  Cells whose
    closure vertices all merge the longest edge's part fall back to a
    search over consecutive-run coarsenings.
    """
    if not is_admissible(L, cell):
        raise InadmissibleVertex(f"{cell} is not admissible")
    if len(cell.parts) == 3:
        return cell
    b = L.longest
    rot = cell.parts[cell.part_index_of(b):] + cell.parts[:cell.part_index_of(b)]
    pivot, blocks = rot[0], rot[1:]
    prefix_sums = []
    acc: list[int] = []
    for blk in blocks:
        acc.extend(blk)
        prefix_sums.append(tuple(sorted(acc)))
    for j in range(len(blocks) - 1, 0, -1):
        j_set = prefix_sums[j - 1]
        if not L.is_short(j_set):
            continue
        i_set = tuple(sorted(set(range(1, L.n + 1)) - set(j_set) - set(pivot)))
        if L.is_short(i_set):
            return CyclicPartition((pivot, j_set, i_set))
    # general fallback: merge the cyclic block sequence into 3 consecutive runs
    p = len(cell.parts)
    for offset in range(p):
        seq = cell.parts[offset:] + cell.parts[:offset]
        for cut1 in range(1, p - 1):
            for cut2 in range(cut1 + 1, p):
                runs = (seq[:cut1], seq[cut1:cut2], seq[cut2:])
                merged = tuple(
                    tuple(sorted(i for blk in run for i in blk)) for run in runs
                )
                if all(L.is_short(part) for part in merged):
                    return CyclicPartition(merged)
    raise NoCut(f"no admissible 3-part coarsening of {cell}")


@dataclass(frozen=True)
class MotionSegment:
    """A sampled continuous family of configurations with provenance."""

    kind: str  # "edge" | "cell" | "connector"
    label: CyclicPartition
    params: tuple[float, ...]
    frames: tuple[Configuration, ...]

    def __len__(self) -> int:
        return len(self.frames)


@dataclass(frozen=True)
class Motion:
    segments: tuple[MotionSegment, ...]

    def frame_count(self) -> int:
        return sum(len(s) for s in self.segments)

    def all_frames(self):
        for seg in self.segments:
            yield from seg.frames


def edge_flex(L: Linkage, e: CyclicPartition, opts: FlexOptions = DEFAULTS) -> MotionSegment:
    """Uniform sampling of an edge's configuration family, endpoint to endpoint.

    Interframe joint displacement is kept below the continuity bound by
    doubling the sample count when needed.
    """
    samples = max(2, opts.samples)
    limit = opts.max_jump(L)
    for _ in range(6):
        ts = [i / samples for i in range(samples + 1)]
        frames = [realize_edge_point(L, e, t, opts) for t in ts]
        jump = max(
            float(np.max(np.linalg.norm(a.points - b.points, axis=1)))
            for a, b in zip(frames, frames[1:])
        )
        if jump <= limit:
            return MotionSegment("edge", e, tuple(ts), tuple(frames))
        samples *= 2
    raise GeometryError(f"continuity bound unreachable for {e} at {samples} samples")


def _group_angles(c: Configuration, label: CyclicPartition) -> tuple[list[list[int]], np.ndarray]:
    """Slope-ordered edge groups of a configuration and their lifted angles.

    The lift is nondecreasing along the slope order, spanning less than a
    full turn.
    """
    vectors = c.edge_vectors()
    angles = np.arctan2(vectors[:, 1], vectors[:, 0])
    groups = sorted(
        ([i - 1 for i in part] for part in label.parts),
        key=lambda g: (angles[g[0]], g[0]),
    )
    lifted = []
    prev = None
    for g in groups:
        a = float(np.median(angles[g]))
        if prev is not None and a < prev:
            a += 2 * math.pi
        lifted.append(a)
        prev = a
    return groups, np.array(lifted)


def _close_angles(
    weights: np.ndarray, theta: np.ndarray, tol: float
) -> np.ndarray | None:
    """Minimum-norm angle correction enforcing the closure constraint."""
    th = theta.copy()
    for _ in range(60):
        cos, sin = np.cos(th), np.sin(th)
        residual = np.array([np.dot(weights, cos), np.dot(weights, sin)])
        if math.hypot(*residual) <= tol:
            return th
        jac = np.stack([-weights * sin, weights * cos])
        try:
            delta = jac.T @ np.linalg.solve(jac @ jac.T, -residual)
        except np.linalg.LinAlgError:
            return None
        th = th + delta
    return None


def _config_from_group_angles(
    L: Linkage, groups: list[list[int]], theta: np.ndarray
) -> Configuration:
    vectors = np.zeros((L.n, 2))
    for g, a in zip(groups, theta):
        d = np.array([math.cos(a), math.sin(a)])
        for i in g:
            vectors[i] = d * float(L.lengths[i])
    return _chain_from_vectors(vectors)


def intra_cell_flex(
    L: Linkage,
    c: Configuration,
    v: CyclicPartition,
    opts: FlexOptions = DEFAULTS,
    kind: str = "cell",
) -> MotionSegment:
    """Continuous family from a configuration to a vertex in its cell's closure.

    Interpolates the slope-ordered edge direction angles toward the target
    triangle directions and restores the closure constraint after every
    step by a minimum-norm correction; the step bisects adaptively when
    the correction fails or the weak slope order breaks.
    """
    label_c = cell_label(c, opts.angle_tol)
    if not refines(label_c, v):
        raise InadmissibleVertex(f"{v} is not in the closure of the cell {label_c}")
    target = realize_vertex(L, v)
    tol = opts.tol_len(L)
    if float(np.max(np.linalg.norm(c.points - target.points, axis=1))) <= tol:
        return MotionSegment(kind, label_c, (0.0,), (Configuration(c.points),))

    groups, theta0 = _group_angles(c, label_c)
    weights = np.array([sum(float(L.lengths[i]) for i in g) for g in groups])

    # target angle per group: its part's direction in the realized triangle,
    # lifted to stay weakly increasing alongside theta0
    tvecs = target.edge_vectors()
    part_of = {}
    for part in v.parts:
        for i in part:
            part_of[i - 1] = part
    theta1 = []
    for gi, g in enumerate(groups):
        vec = tvecs[g[0]]
        a = math.atan2(vec[1], vec[0])
        base = theta0[gi]
        while a < base - math.pi:
            a += 2 * math.pi
        while a > base + math.pi:
            a -= 2 * math.pi
        theta1.append(a)
    theta1 = np.array(theta1)
    for gi in range(1, len(groups)):
        if theta1[gi] < theta1[gi - 1] - 1e-9 and part_of[groups[gi][0]] is not part_of[groups[gi - 1][0]]:
            raise GeometryError("target directions are not order-compatible with the cell")

    frames = [Configuration(c.points)]
    params = [0.0]
    s = 0.0
    step = 1.0 / max(8, opts.samples // 4)
    max_jump = opts.max_jump(L)
    while s < 1.0:
        ds = min(step, 1.0 - s)
        while True:
            s_try = s + ds
            theta_try = (1.0 - s_try) * theta0 + s_try * theta1
            closed = _close_angles(weights, theta_try, tol * 0.1)
            ok = closed is not None
            if ok:
                order_drift = np.min(np.diff(closed)) if len(closed) > 1 else 0.0
                ok = order_drift >= -1e-6
            if ok:
                cfg = _config_from_group_angles(L, groups, closed)
                jump = float(np.max(np.linalg.norm(cfg.points - frames[-1].points, axis=1)))
                ok = jump <= max_jump
            if ok:
                break
            ds /= 2
            if ds < opts.min_step:
                raise HomotopyStalled(
                    f"homotopy stalled at s={s:.6f}",
                    partial=MotionSegment(kind, label_c, tuple(params), tuple(frames)),
                    parameter=s,
                )
        s = s_try
        frames.append(cfg)
        params.append(s)
    if float(np.max(np.linalg.norm(frames[-1].points - target.points, axis=1))) > 10 * tol:
        raise HomotopyStalled(
            "homotopy ended away from the target realization",
            partial=MotionSegment(kind, label_c, tuple(params), tuple(frames)),
            parameter=1.0,
        )
    frames[-1] = target
    return MotionSegment(kind, label_c, tuple(params), tuple(frames))


def snap_configuration(L: Linkage, c: Configuration, rel_tol: float = 1e-6) -> Configuration:
    """Rescale each edge to its exact length and restore closure.

    Rejects inputs whose lengths deviate by more than ``rel_tol``
    relative error; measurement noise below that is projected away.
    """
    vectors = c.edge_vectors()
    norms = np.linalg.norm(vectors, axis=1)
    target = np.array([float(l) for l in L.lengths])
    rel = np.abs(norms - target) / target
    if float(np.max(rel)) > rel_tol:
        worst = int(np.argmax(rel))
        raise LengthMismatch(
            f"edge {worst + 1} deviates by {rel[worst]:.2e} relative "
            f"(limit {rel_tol:.0e})"
        )
    angles = np.arctan2(vectors[:, 1], vectors[:, 0])
    closed = _close_angles(target, angles, 1e-12 * float(L.perimeter))
    if closed is None:
        raise GeometryError("closure projection failed while snapping")
    vecs = np.stack([np.cos(closed), np.sin(closed)], axis=1) * target[:, None]
    return _chain_from_vectors(vecs)


def synthesize_motion(
    L: Linkage,
    start: Configuration,
    goal: Configuration,
    opts: FlexOptions = DEFAULTS,
) -> Motion:
    """End-to-end motion: connector flex, planned edge flexes, connector flex.

    The number of graph steps obeys the planner's budget; the two
    connectors move within single closed cells.  Raises NoPath when the
    configurations lie in different components.
    """
    s_cfg = snap_configuration(L, start)
    g_cfg = snap_configuration(L, goal)
    tol = opts.tol_len(L)
    if float(np.max(np.linalg.norm(s_cfg.points - g_cfg.points, axis=1))) <= tol:
        label = cell_label(s_cfg, opts.angle_tol)
        return Motion((MotionSegment("connector", label, (0.0,), (s_cfg,)),))

    label_s = cell_label(s_cfg, opts.angle_tol)
    label_g = cell_label(g_cfg, opts.angle_tol)
    oc_s = orientation_class(L, label_s)
    oc_g = orientation_class(L, label_g)
    if oc_s is not None and oc_s != oc_g:
        raise NoPath(
            f"configurations lie in different components ({oc_s} vs {oc_g})",
            class_from=oc_s,
            class_to=oc_g,
        )
    v_s = entry_vertex(L, label_s)
    v_g = entry_vertex(L, label_g)
    report = plan(L, v_s, v_g)

    segments = [intra_cell_flex(L, s_cfg, v_s, opts, kind="connector")]
    current = v_s
    for step in report.path.steps:
        seg = edge_flex(L, step.edge, opts)
        v0, v1 = edge_endpoints(L, step.edge)
        if (current, step.vertex) == (v0, v1):
            segments.append(seg)
        else:
            assert (current, step.vertex) == (v1, v0)
            segments.append(
                MotionSegment(
                    "edge",
                    step.edge,
                    tuple(1.0 - t for t in reversed(seg.params)),
                    tuple(reversed(seg.frames)),
                )
            )
        current = step.vertex
    tail = intra_cell_flex(L, g_cfg, v_g, opts, kind="connector")
    segments.append(
        MotionSegment(
            "connector",
            tail.label,
            tuple(1.0 - t for t in reversed(tail.params)),
            tuple(reversed(tail.frames)),
        )
    )
    _check_motion(L, segments, opts)
    return Motion(tuple(segments))


def _check_motion(L: Linkage, segments, opts: FlexOptions) -> None:
    tol = opts.tol_len(L)
    limit = opts.max_jump(L)
    for seg in segments:
        for f in seg.frames:
            if f.max_length_residual(L) > tol:
                raise GeometryError(
                    f"frame in {seg.kind} segment violates edge lengths by "
                    f"{f.max_length_residual(L):.3e}"
                )
        for a, b in zip(seg.frames, seg.frames[1:]):
            if float(np.max(np.linalg.norm(a.points - b.points, axis=1))) > limit:
                raise GeometryError(f"{seg.kind} segment jumps more than {limit}")
    for prev, nxt in zip(segments, segments[1:]):
        gap = float(np.max(np.linalg.norm(prev.frames[-1].points - nxt.frames[0].points, axis=1)))
        if gap > tol:
            raise GeometryError(f"segment junction mismatch {gap:.3e} exceeds {tol:.3e}")
