"""Chord solvers on planar domains: extend boundary data to the interior by
ray casting, find chords through interior points whose endpoints carry equal
values, and certify that the solution set spans the domain.

The domain W is bounded by one or more simple polygon loops; boundary data
is a piecewise-linear real function on the loops (per-vertex values) or a
finite list of (arc length, value) samples.  Ray-polygon degeneracies are
resolved by a deterministic angular perturbation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

ANGLE_NUDGE = 1e-9
PARALLEL_EPS = 1e-13
ENDPOINT_EPS = 1e-11


class SceneError(ValueError):
    pass


@dataclass
class BoundaryData:
    """Values along one loop: PL per-vertex values or arc-length samples."""

    kind: str  # "function" | "samples"
    vertex_values: Optional[np.ndarray] = None  # kind=function: (n_vertices,)
    samples: Optional[np.ndarray] = None  # kind=samples: (n, 2) of (s, e)


@dataclass
class ChordScene:
    loops: List[np.ndarray]  # each (n_i, 2), implicitly closed, simple
    data: List[BoundaryData]  # one per loop
    grid: Tuple[int, int]
    dir_res: int
    tol: Optional[float] = None

    def __post_init__(self):
        self.loops = [np.asarray(L, dtype=float) for L in self.loops]
        if len(self.data) != len(self.loops):
            raise SceneError("one boundary data entry per loop required")
        if self.dir_res % 2:
            raise SceneError("dir_res must be even")
        for L in self.loops:
            if L.ndim != 2 or L.shape[1] != 2 or L.shape[0] < 3:
                raise SceneError("each loop needs at least 3 planar points")

    # -- geometry helpers ---------------------------------------------------

    def edges(self):
        """(loop index, edge index, A, B) over all polygon edges."""
        for li, L in enumerate(self.loops):
            n = len(L)
            for ei in range(n):
                yield li, ei, L[ei], L[(ei + 1) % n]

    def arc_lengths(self, li: int) -> np.ndarray:
        L = self.loops[li]
        seg = np.linalg.norm(np.roll(L, -1, axis=0) - L, axis=1)
        return np.concatenate([[0.0], np.cumsum(seg)])

    def edge_value(self, li: int, ei: int, t: float) -> float:
        """Boundary value at parameter t along edge ei of loop li."""
        d = self.data[li]
        L = self.loops[li]
        n = len(L)
        if d.kind == "function":
            va = d.vertex_values[ei]
            vb = d.vertex_values[(ei + 1) % n]
            return float(va + t * (vb - va))
        arcs = self.arc_lengths(li)
        s = arcs[ei] + t * (arcs[ei + 1] - arcs[ei])
        samples = d.samples
        total = arcs[-1]
        ss = samples[:, 0] % total
        order = np.argsort(ss)
        ss, ee = ss[order], samples[order, 1]
        # periodic linear interpolation
        if s <= ss[0] or s >= ss[-1]:
            s0, e0, s1, e1 = ss[-1] - total, ee[-1], ss[0], ee[0]
            if s >= ss[-1]:
                s0, e0, s1, e1 = ss[-1], ee[-1], ss[0] + total, ee[0]
        else:
            k = int(np.searchsorted(ss, s)) - 1
            s0, e0, s1, e1 = ss[k], ee[k], ss[k + 1], ee[k + 1]
        if s1 == s0:
            return float(e0)
        return float(e0 + (s - s0) * (e1 - e0) / (s1 - s0))

    def lipschitz_epsilon(self) -> float:
        """2x the largest value jump between adjacent boundary samples."""
        est = 0.0
        for li, d in enumerate(self.data):
            if d.kind == "function":
                v = d.vertex_values
                est = max(est, float(np.abs(np.diff(np.concatenate([v, v[:1]]))).max()))
            else:
                e = d.samples[np.argsort(d.samples[:, 0]), 1]
                est = max(est, float(np.abs(np.diff(np.concatenate([e, e[:1]]))).max()))
        return 2.0 * est

    def epsilon(self) -> float:
        return self.tol if self.tol is not None else self.lipschitz_epsilon()

    def contains(self, point: np.ndarray) -> bool:
        """Even-odd interior test over all loops."""
        x, y = float(point[0]), float(point[1])
        inside = False
        for _, _, A, B in self.edges():
            if (A[1] > y) != (B[1] > y):
                xc = A[0] + (y - A[1]) * (B[0] - A[0]) / (B[1] - A[1])
                if x < xc:
                    inside = not inside
        return inside

    def boundary_distance(self, point: np.ndarray) -> float:
        best = math.inf
        p = np.asarray(point, dtype=float)
        for _, _, A, B in self.edges():
            d = B - A
            t = float(np.clip(np.dot(p - A, d) / max(np.dot(d, d), 1e-300), 0.0, 1.0))
            best = min(best, float(np.linalg.norm(p - (A + t * d))))
        return best


@dataclass
class Hit:
    lam: float
    loop: int
    edge: int
    t: float
    e: float
    point: np.ndarray


@dataclass
class ChordSolution:
    w: np.ndarray
    direction_class: int
    x1: np.ndarray
    x2: np.ndarray
    e: float
    residual: float


def _cast(scene: ChordScene, w: np.ndarray, angle: float) -> Tuple[Optional[List[Hit]], bool]:
    """All boundary intersections of the ray from w at the given angle.

    Returns (hits, degenerate): degenerate hits (edge-parallel rays, vertex
    grazes) make the result None so the caller can nudge the angle.
    """
    x = np.array([math.cos(angle), math.sin(angle)])
    hits: List[Hit] = []
    for li, ei, A, B in scene.edges():
        d = B - A
        denom = x[0] * d[1] - x[1] * d[0]
        rel = A - w
        if abs(denom) < PARALLEL_EPS * max(1.0, float(np.abs(d).max())):
            cross = rel[0] * x[1] - rel[1] * x[0]
            if abs(cross) < ENDPOINT_EPS:
                return None, True  # collinear overlap
            continue
        t = (rel[0] * x[1] - rel[1] * x[0]) / denom
        lam = (rel[0] * d[1] - rel[1] * d[0]) / denom
        if -ENDPOINT_EPS < t < ENDPOINT_EPS or 1 - ENDPOINT_EPS < t < 1 + ENDPOINT_EPS:
            if -ENDPOINT_EPS < lam:
                return None, True  # vertex graze
        if 0.0 <= t <= 1.0 and lam > ENDPOINT_EPS:
            hits.append(
                Hit(lam, li, ei, t, scene.edge_value(li, ei, t), w + lam * x)
            )
    hits.sort(key=lambda h: h.lam)
    return hits, False


def ray_hits(scene: ChordScene, w: Sequence[float], direction) -> List[Hit]:
    """Sorted positive-parameter boundary hits of the ray w + lambda * x.

    Degenerate configurations retry with the angle nudged by +1e-9 radians
    (doubling until clean), keeping results deterministic.
    """
    w = np.asarray(w, dtype=float)
    if not scene.contains(w):
        raise SceneError(f"ray origin {w.tolist()} is not interior")
    if scene.boundary_distance(w) < ENDPOINT_EPS:
        raise SceneError("ray origin lies on the boundary")
    if np.isscalar(direction):
        angle = float(direction)
    else:
        dx, dy = float(direction[0]), float(direction[1])
        angle = math.atan2(dy, dx)
    nudge = ANGLE_NUDGE
    for _ in range(60):
        hits, degenerate = _cast(scene, w, angle)
        if not degenerate:
            return hits
        angle += nudge
        nudge *= 2.0
    raise SceneError("could not resolve ray degeneracies")


def chord_solutions(scene: ChordScene, w: Sequence[float]) -> List[ChordSolution]:
    """Direction classes whose opposite rays carry matching boundary values."""
    w = np.asarray(w, dtype=float)
    eps = scene.epsilon()
    out: List[ChordSolution] = []
    half = scene.dir_res // 2
    for k in range(half):
        angle = 2.0 * math.pi * k / scene.dir_res
        plus = ray_hits(scene, w, angle)
        minus = ray_hits(scene, w, angle + math.pi)
        best = None
        for hp in plus:
            for hm in minus:
                r = abs(hp.e - hm.e)
                if r <= eps and (best is None or r < best.residual):
                    best = ChordSolution(
                        w=w,
                        direction_class=k,
                        x1=hp.point,
                        x2=hm.point,
                        e=0.5 * (hp.e + hm.e),
                        residual=r,
                    )
        if best is not None:
            out.append(best)
    return out


# -- the sampled spherical correspondence -------------------------------------


@dataclass
class ChordCloud:
    """Ray-cast samples of the extension of boundary data over W x S^1.

    values[iw, k] lists the boundary values seen along the ray from interior
    grid point iw in direction k; a one-cell dilation along the direction
    axis stands in for the closure of the correspondence.
    """

    scene: ChordScene
    nx: int
    ny: int
    dir_res: int
    interior: np.ndarray  # (n_cells,) flattened bool mask
    centers: np.ndarray  # (n_interior, 2)
    cell_index: Dict[Tuple[int, int], int]
    values: np.ndarray  # (n_interior, dir_res, MAXH) nan-padded
    counts: np.ndarray
    closure_cells: int = 1

    def fiber_values(self, iw: int, k: int) -> np.ndarray:
        c = self.counts[iw, k]
        return self.values[iw, k, :c]


MAX_HITS = 8


def build_spherical(scene: ChordScene) -> ChordCloud:
    """Sample the spherical extension on the interior grid: for every interior
    cell center and direction, the values of the boundary data at all ray
    hits."""
    nx, ny = scene.grid
    allpts = np.concatenate(scene.loops)
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    dx = (hi[0] - lo[0]) / nx
    dy = (hi[1] - lo[1]) / ny

    centers = []
    cell_index: Dict[Tuple[int, int], int] = {}
    interior = np.zeros(nx * ny, dtype=bool)
    for ix in range(nx):
        for iy in range(ny):
            c = np.array([lo[0] + (ix + 0.5) * dx, lo[1] + (iy + 0.5) * dy])
            if scene.contains(c) and scene.boundary_distance(c) > ENDPOINT_EPS:
                interior[ix * ny + iy] = True
                cell_index[(ix, iy)] = len(centers)
                centers.append(c)
    centers = np.asarray(centers)
    n = len(centers)
    values = np.full((n, scene.dir_res, MAX_HITS), np.nan)
    counts = np.zeros((n, scene.dir_res), dtype=np.int32)

    pre = _precompute_rays(scene, centers)
    for k in range(scene.dir_res):
        angle = 2.0 * math.pi * k / scene.dir_res
        lam_stack, e_stack = _cast_all(scene, centers, angle, pre)
        order = np.argsort(lam_stack, axis=0)  # nan sorts last
        e_sorted = np.take_along_axis(e_stack, order, axis=0)[:MAX_HITS]
        lam_sorted = np.take_along_axis(lam_stack, order, axis=0)[:MAX_HITS]
        e_sorted = np.where(np.isfinite(lam_sorted), e_sorted, np.nan)
        values[:, k, : e_sorted.shape[0]] = e_sorted.T
        counts[:, k] = np.isfinite(lam_stack).sum(axis=0).clip(max=MAX_HITS)
    return ChordCloud(
        scene, nx, ny, scene.dir_res, interior, centers, cell_index, values, counts
    )


def _edge_arrays(scene: ChordScene):
    """Stacked edge geometry and PL value endpoints, cached on the scene."""
    cached = getattr(scene, "_edge_arrays", None)
    if cached is not None:
        return cached
    A, B, va0, va1, loop_idx, edge_idx, pl = [], [], [], [], [], [], []
    for li, ei, a, b in scene.edges():
        A.append(a)
        B.append(b)
        loop_idx.append(li)
        edge_idx.append(ei)
        d = scene.data[li]
        if d.kind == "function":
            n = len(scene.loops[li])
            va0.append(d.vertex_values[ei])
            va1.append(d.vertex_values[(ei + 1) % n])
            pl.append(True)
        else:
            va0.append(0.0)
            va1.append(0.0)
            pl.append(False)
    out = (
        np.asarray(A),
        np.asarray(B),
        np.asarray(va0),
        np.asarray(va1),
        np.asarray(loop_idx),
        np.asarray(edge_idx),
        np.asarray(pl),
    )
    object.__setattr__(scene, "_edge_arrays", out)
    return out


def _precompute_rays(scene: ChordScene, points: np.ndarray) -> dict:
    """Angle-independent pieces of the edge/ray intersection formulas."""
    A, B, va0, va1, loop_idx, edge_idx, pl = _edge_arrays(scene)
    d = B - A  # (E, 2)
    rel0 = A[:, None, 0] - points[None, :, 0]  # (E, N)
    rel1 = A[:, None, 1] - points[None, :, 1]
    return {
        "d": d,
        "scale": np.maximum(1.0, np.abs(d).max(axis=1)),
        "rel0": rel0,
        "rel1": rel1,
        "rel_cross_d": rel0 * d[:, None, 1] - rel1 * d[:, None, 0],
        "va0": va0,
        "va1": va1,
        "loop_idx": loop_idx,
        "edge_idx": edge_idx,
        "pl": pl,
    }


def _cast_all(scene: ChordScene, points: np.ndarray, angle: float, pre: Optional[dict] = None):
    """Vectorized ray cast of every point in one direction.

    Returns (edges x points) arrays of hit parameters (nan when missed) and
    boundary values.  Degenerate directions are nudged for all points at
    once.
    """
    if pre is None:
        pre = _precompute_rays(scene, points)
    d, scale = pre["d"], pre["scale"]
    rel0, rel1, rel_cross_d = pre["rel0"], pre["rel1"], pre["rel_cross_d"]
    va0, va1, pl = pre["va0"], pre["va1"], pre["pl"]
    nudge = ANGLE_NUDGE
    for _ in range(60):
        x0, x1 = math.cos(angle), math.sin(angle)
        denom = x0 * d[:, 1] - x1 * d[:, 0]  # (E,)
        cross_x = rel0 * x1 - rel1 * x0  # (E, N)
        parallel = np.abs(denom) < PARALLEL_EPS * scale
        if parallel.any() and (np.abs(cross_x[parallel]) < ENDPOINT_EPS).any():
            angle += nudge
            nudge *= 2.0
            continue
        safe = np.where(parallel, 1.0, denom)[:, None]
        t = cross_x / safe
        lam = rel_cross_d / safe
        live = ~parallel[:, None]
        graze = (
            ((np.abs(t) < ENDPOINT_EPS) | (np.abs(t - 1.0) < ENDPOINT_EPS))
            & (lam > -ENDPOINT_EPS)
            & live
        )
        if graze.any():
            angle += nudge
            nudge *= 2.0
            continue
        hit = (t >= 0.0) & (t <= 1.0) & (lam > ENDPOINT_EPS) & live
        lam_arr = np.where(hit, lam, np.nan)
        e_arr = np.where(hit, va0[:, None] + t * (va1 - va0)[:, None], np.nan)
        if not pl.all():
            for row in np.nonzero(~pl)[0]:
                li, ei = int(pre["loop_idx"][row]), int(pre["edge_idx"][row])
                e_arr[row] = [
                    scene.edge_value(li, ei, tt) if h else np.nan
                    for tt, h in zip(t[row], hit[row])
                ]
        return lam_arr, e_arr
    raise SceneError("could not resolve ray degeneracies (vectorized)")


@dataclass
class ChordSolutionSet:
    """Flagged (interior cell, direction class) boxes with witnesses."""

    cloud: ChordCloud
    cells: Dict[Tuple[int, int], Tuple[float, float]]  # (iw, k) -> (e, residual)
    epsilon: float

    def fiber(self, iw: int) -> List[int]:
        return sorted(k for (w, k) in self.cells if w == iw)


def solve_chord_cloud(cloud: ChordCloud, eps: Optional[float] = None) -> ChordSolutionSet:
    """Antipodal matching on the sampled spherical correspondence."""
    scene = cloud.scene
    if eps is None:
        eps = scene.epsilon()
    half = cloud.dir_res // 2
    rad = cloud.closure_cells
    cells: Dict[Tuple[int, int], Tuple[float, float]] = {}
    n = len(cloud.centers)
    for k in range(half):
        ak = k + half
        best_r = np.full(n, np.inf)
        best_e = np.zeros(n)
        for dk in range(-rad, rad + 1):
            a = cloud.values[:, (k + dk) % cloud.dir_res, :]
            for dk2 in range(-rad, rad + 1):
                b = cloud.values[:, (ak + dk2) % cloud.dir_res, :]
                d = np.abs(a[:, :, None] - b[:, None, :])
                d = np.where(np.isnan(d), np.inf, d)
                flat = d.reshape(n, -1)
                idx = np.argmin(flat, axis=1)
                r = flat[np.arange(n), idx]
                i0, i1 = np.unravel_index(idx, (MAX_HITS, MAX_HITS))
                e = 0.5 * (a[np.arange(n), i0] + b[np.arange(n), i1])
                better = r < best_r
                best_r = np.where(better, r, best_r)
                best_e = np.where(better, e, best_e)
        for iw in np.nonzero(best_r <= eps)[0]:
            cells[(int(iw), k)] = (float(best_e[iw]), float(best_r[iw]))
    return ChordSolutionSet(cloud, cells, float(eps))


# -- spanning certification ----------------------------------------------------


def _circular_span(ks: List[int], half: int) -> Tuple[int, int]:
    """Shortest circular interval [a, a+len) covering the class set."""
    ks = sorted(set(ks))
    if len(ks) == 1:
        return ks[0], 1
    best = None
    m = len(ks)
    for i in range(m):
        a = ks[i]
        width = (ks[(i - 1) % m] - a) % half + 1
        if best is None or width < best[1]:
            best = (a, width)
    return best


def section_certificate(sol: ChordSolutionSet, max_jump: int = 2) -> Optional[Dict[Tuple[int, int], int]]:
    """A direction-class section over the interior cells inside the flagged set.

    Picks per cell the class of smallest matching residual, then checks that
    4-neighbor picks differ by at most max_jump circularly with the
    intermediate classes flagged in one of the two cells.  The graph of such
    a section is a sheet in the flagged region projecting one-to-one onto W.
    """
    cloud = sol.cloud
    half = cloud.dir_res // 2
    fibers: Dict[int, Dict[int, float]] = {}
    for (iw, k), (_, r) in sol.cells.items():
        fibers.setdefault(iw, {})[k] = r
    pick: Dict[int, int] = {}
    for iw in range(len(cloud.centers)):
        if iw not in fibers:
            return None
        pick[iw] = min(fibers[iw], key=lambda k: (fibers[iw][k], k))

    by_grid: Dict[Tuple[int, int], int] = {}
    for (ix, iy), iw in cloud.cell_index.items():
        by_grid[(ix, iy)] = iw

    def ok_pair(a: int, b: int, wa: int, wb: int) -> bool:
        d = (b - a) % half
        d = min(d, half - d)
        if d > max_jump:
            return False
        step = 1 if (b - a) % half <= half // 2 else -1
        k = a
        for _ in range(d):
            k = (k + step) % half
            if k not in fibers[wa] and k not in fibers[wb]:
                return False
        return True

    for (ix, iy), iw in by_grid.items():
        for nb in ((ix + 1, iy), (ix, iy + 1)):
            jw = by_grid.get(nb)
            if jw is None:
                continue
            if not ok_pair(pick[iw], pick[jw], iw, jw):
                return None
    return {(ix, iy): pick[iw] for (ix, iy), iw in by_grid.items()}


@dataclass
class ChordSpanReport:
    hypothesis: dict
    surjective: bool
    essential: bool
    status: str
    certificate: str
    epsilon: float
    dir_res: int
    grid: Tuple[int, int]
    missing_cells: List[int] = field(default_factory=list)
    section: Optional[dict] = None
    center_solution: Optional[dict] = None

    def to_json_dict(self) -> dict:
        return {
            "hypothesis": self.hypothesis,
            "surjective": self.surjective,
            "essential": self.essential,
            "status": self.status,
            "certificate": self.certificate,
            "epsilon": self.epsilon,
            "dir_res": self.dir_res,
            "grid": list(self.grid),
            "missing_cells": self.missing_cells[:50],
            "section": self.section,
            "center_solution": self.center_solution,
        }


def _boundary_data_spans(scene: ChordScene) -> dict:
    """Per-loop hypothesis: the boundary data projects essentially onto the loop.

    PL functions are graphs and span by construction; sample clouds are
    certified in degree one through the homology machinery, on the nerve of
    their (arc cell, value cell) box footprint mapped onto the loop.
    """
    loops = []
    ok = True
    for li, d in enumerate(scene.data):
        if d.kind == "function":
            loops.append({"loop": li, "spans": True, "detail": "graph of a PL function"})
            continue
        arcs = scene.arc_lengths(li)
        total = float(arcs[-1])
        n_arc = max(8, len(d.samples))
        evals = d.samples[:, 1]
        elo, ehi = float(evals.min()), float(evals.max())
        n_e = 8
        estep = (ehi - elo) / n_e if ehi > elo else 1.0

        def box_of(s, e):
            ia = int((s % total) / total * n_arc) % n_arc
            ie = min(int((e - elo) / estep), n_e - 1) if ehi > elo else 0
            return ia, ie

        # rasterize the segments between nearby consecutive samples: the
        # cloud stands for a continuum locally, but genuine arc gaps
        # (spacing beyond two arc cells) stay open
        order = np.argsort(d.samples[:, 0] % total)
        pts = d.samples[order]
        cell = total / n_arc
        boxes = set()
        for idx in range(len(pts)):
            s0, e0 = float(pts[idx][0]) % total, float(pts[idx][1])
            s1, e1 = float(pts[(idx + 1) % len(pts)][0]) % total, float(pts[(idx + 1) % len(pts)][1])
            boxes.add(box_of(s0, e0))
            gap = (s1 - s0) % total
            if gap > 2 * cell:
                continue
            steps = max(2, int(4 * gap / cell) + 2)
            prev = None
            for t in np.linspace(0.0, 1.0, steps):
                ia, ie = box_of(s0 + t * gap, e0 + t * (e1 - e0))
                boxes.add((ia, ie))
                if prev is not None and prev[0] == ia:
                    lo, hi = sorted((prev[1], ie))
                    for fill in range(lo, hi + 1):
                        boxes.add((ia, fill))
                prev = (ia, ie)
        covered = {ia for ia, _ in boxes}
        spans = len(covered) == n_arc and _loop_footprint_essential(boxes, n_arc)
        ok = ok and spans
        loops.append({
            "loop": li,
            "spans": bool(spans),
            "detail": f"{len(covered)}/{n_arc} arc cells covered",
        })
    return {"kind": "boundary_data", "satisfied": ok, "loops": loops}


def _loop_footprint_essential(boxes: set, n_arc: int) -> bool:
    """Degree-1 essentiality of the box footprint onto the boundary loop.

    Box centers and facet connectors form the nerve graph; value-adjacent
    boxes collapse over the loop, arc-adjacent ones cross a loop node.
    """
    from .homology import is_h_essential
    from .simplicial import SimplicialMap, build_pair

    boxes = sorted(boxes)
    bid = {b: i for i, b in enumerate(boxes)}
    target = build_pair(
        2 * n_arc, [(t, (t + 1) % (2 * n_arc)) for t in range(2 * n_arc)]
    )
    vertices = [2 * ia + 1 for (ia, _) in boxes]
    edges = []
    extra = len(boxes)
    for (ia, ie) in boxes:
        me = bid[(ia, ie)]
        for de in (1, -1):
            nb = (ia, ie + de)
            if nb in bid and bid[nb] > me:
                edges.append((me, bid[nb]))
        nb = ((ia + 1) % n_arc, ie)
        if nb in bid:
            mid = extra
            extra += 1
            vertices.append((2 * (ia + 1)) % (2 * n_arc))
            edges.append((me, mid))
            edges.append((mid, bid[nb]))
    simplices = [(v,) for v in range(extra)] + sorted(set(tuple(sorted(e)) for e in edges))
    source = build_pair(extra, simplices)
    proj = SimplicialMap(source, target, vertices)
    return is_h_essential(proj, 1).essential


def chord_span_check(scene: ChordScene) -> ChordSpanReport:
    """End-to-end pipeline: extend boundary data, solve the antipodal matching,
    certify spanning of the solution set over the domain."""
    hypothesis = _boundary_data_spans(scene)
    cloud = build_spherical(scene)
    sol = solve_chord_cloud(cloud)

    n = len(cloud.centers)
    missing = [iw for iw in range(n) if not sol.fiber(iw)]
    surjective = not missing
    section = section_certificate(sol) if surjective else None
    essential = section is not None

    status = "ok" if (surjective and essential) else "not_spanning"
    if not hypothesis["satisfied"]:
        status = "hypothesis_violated"

    center = None
    ctr = np.mean(np.concatenate(scene.loops), axis=0)
    if scene.contains(ctr):
        sols = chord_solutions(scene, ctr)
        if sols:
            best = min(sols, key=lambda s: s.residual)
            center = {
                "w": ctr.tolist(),
                "direction_class": best.direction_class,
                "angle": 2.0 * math.pi * best.direction_class / scene.dir_res,
                "e": best.e,
                "endpoints": [best.x1.tolist(), best.x2.tolist()],
            }

    return ChordSpanReport(
        hypothesis=hypothesis,
        surjective=surjective,
        essential=essential,
        status=status,
        certificate="PL section through the flagged boxes" if essential else "no section found",
        epsilon=sol.epsilon,
        dir_res=scene.dir_res,
        grid=scene.grid,
        missing_cells=missing,
        section={f"{ix},{iy}": k for (ix, iy), k in sorted(section.items())} if section else None,
        center_solution=center,
    )


# -- stock scenes ---------------------------------------------------------------


def disk_scene(
    n_poly: int = 128,
    grid: Tuple[int, int] = (16, 16),
    dir_res: int = 64,
    value: str = "cos",
    tol: Optional[float] = None,
) -> ChordScene:
    """Unit disk approximated by a regular polygon with angle-driven data."""
    ang = 2.0 * math.pi * np.arange(n_poly) / n_poly
    loop = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    if value == "cos":
        vals = np.cos(ang)
    elif value == "x":
        vals = loop[:, 0]
    else:
        raise SceneError(f"unknown disk data {value!r}")
    return ChordScene(
        [loop], [BoundaryData("function", vertex_values=vals)], grid, dir_res, tol
    )


def square_scene(
    per_side: int = 16,
    grid: Tuple[int, int] = (16, 16),
    dir_res: int = 64,
    tol: Optional[float] = None,
) -> ChordScene:
    """The square [-1, 1]^2 with the first coordinate as boundary value."""
    side = np.linspace(-1.0, 1.0, per_side, endpoint=False)
    pts = []
    pts += [(s, -1.0) for s in side]
    pts += [(1.0, s) for s in side]
    pts += [(-s, 1.0) for s in side]
    pts += [(-1.0, -s) for s in side]
    loop = np.asarray(pts)
    vals = loop[:, 0]
    return ChordScene(
        [loop], [BoundaryData("function", vertex_values=vals)], grid, dir_res, tol
    )


def annulus_scene(
    n_outer: int = 96,
    n_inner: int = 48,
    r_inner: float = 0.45,
    grid: Tuple[int, int] = (16, 16),
    dir_res: int = 64,
    value: str = "x",
    tol: Optional[float] = None,
) -> ChordScene:
    """Annulus between two circles, same data rule on both loops."""
    a_out = 2.0 * math.pi * np.arange(n_outer) / n_outer
    a_in = 2.0 * math.pi * np.arange(n_inner) / n_inner
    outer = np.stack([np.cos(a_out), np.sin(a_out)], axis=1)
    inner = r_inner * np.stack([np.cos(a_in), np.sin(a_in)], axis=1)
    if value == "x":
        v_out, v_in = outer[:, 0], inner[:, 0]
    elif value == "cos":
        v_out, v_in = np.cos(a_out), np.cos(a_in)
    else:
        raise SceneError(f"unknown annulus data {value!r}")
    return ChordScene(
        [outer, inner],
        [BoundaryData("function", vertex_values=v_out), BoundaryData("function", vertex_values=v_in)],
        grid,
        dir_res,
        tol,
    )


def scene_from_json(doc: dict) -> ChordScene:
    loops = [np.asarray(p, dtype=float) for p in doc["polygons"]]
    data = []
    for entry in doc["boundary_values"]:
        if entry.get("kind", "function") == "function":
            data.append(BoundaryData("function", vertex_values=np.asarray(entry["values"], dtype=float)))
        else:
            data.append(BoundaryData("samples", samples=np.asarray(entry["samples"], dtype=float)))
    g = doc.get("grid", {"nx": 16, "ny": 16})
    return ChordScene(loops, data, (int(g["nx"]), int(g["ny"])), int(doc.get("dir_res", 64)), doc.get("tol"))
