"""Grid solvers for families of antipodal matching problems over a
parameter manifold, and homological certification that the solution set
spans the parameter space.

A family is a table F[w, v] sampled on W x S^1 (W a point, an interval or
a circle), or a finite box cloud approximating a correspondence in
W x S^1 x R^m.  Solutions are grid cells of W x (S^1/antipode) where
F(w, v) and F(w, -v) match; the certifier projects the flagged set to W
and checks essentiality of the projection in the top degree of W.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .homology import is_h_essential
from .simplicial import SimplicialMap, SimplicialPair, build_pair

W_MODELS = ("point", "interval", "circle")

# flagged-cell budget for running the fully triangulated certification;
# larger solution sets use the nerve-graph model (also certified through
# the homology machinery, just on a homotopy-equivalent 1-complex)
TRIANGULATED_LIMIT = 1200


class FamilyError(ValueError):
    pass


@dataclass
class SampledFamily:
    """Samples of F: W x S^1 -> R^m, or a box cloud over W x S^1 x R^m."""

    w_model: str
    w_res: int
    sphere_res: int
    values: Optional[np.ndarray] = None  # (n_w_nodes, sphere_res, m)
    cloud: Optional[Dict[Tuple[int, int], np.ndarray]] = None
    tol: Optional[float] = None
    func: Optional[Callable] = None
    closure_cells: int = 0

    def __post_init__(self):
        if self.w_model not in W_MODELS:
            raise FamilyError(f"unknown W model {self.w_model!r}")
        if self.sphere_res % 2 != 0:
            raise FamilyError("sphere_res must be even so the antipode is sample-exact")
        if self.w_model == "point":
            self.w_res = 0
        elif self.w_model == "circle" and self.w_res < 3:
            raise FamilyError("circle parameter models need w_res >= 3")
        elif self.w_model == "interval" and self.w_res < 1:
            raise FamilyError("interval parameter models need w_res >= 1")
        if self.values is not None:
            self.values = np.asarray(self.values, dtype=float)
            if self.values.ndim == 2:
                self.values = self.values[:, :, None]
            if self.values.shape[0] != self.n_w_nodes or self.values.shape[1] != self.sphere_res:
                raise FamilyError(
                    f"values shape {self.values.shape} does not match "
                    f"({self.n_w_nodes}, {self.sphere_res}, m)"
                )
            if not np.isfinite(self.values).all():
                raise FamilyError("values must be finite")

    @property
    def n_w_nodes(self) -> int:
        if self.w_model == "point":
            return 1
        if self.w_model == "interval":
            return self.w_res + 1
        return self.w_res

    @property
    def n_w_cells(self) -> int:
        if self.w_model == "point":
            return 1
        return self.w_res

    @property
    def is_function(self) -> bool:
        return self.values is not None

    def antipode(self, iv: int) -> int:
        return (iv + self.sphere_res // 2) % self.sphere_res

    def w_coordinate(self, j: int) -> float:
        if self.w_model == "point":
            return 0.0
        if self.w_model == "interval":
            return j / self.w_res
        return 2.0 * math.pi * j / self.w_res

    @classmethod
    def from_function(
        cls,
        func: Callable[[float, float], Sequence[float]],
        w_model: str,
        w_res: int,
        sphere_res: int,
        tol: Optional[float] = None,
    ) -> "SampledFamily":
        fam = cls(w_model, w_res, sphere_res, values=None, tol=tol, func=func)
        thetas = [2.0 * math.pi * i / sphere_res for i in range(sphere_res)]
        rows = []
        for j in range(fam.n_w_nodes):
            w = fam.w_coordinate(j)
            rows.append([np.atleast_1d(np.asarray(func(w, t), dtype=float)) for t in thetas])
        fam.values = np.asarray(rows, dtype=float)
        fam.__post_init__()
        return fam

    def lipschitz_epsilon(self) -> float:
        """2x the largest adjacent-sample jump, a principled matching slack."""
        if self.values is None:
            raise FamilyError("no sampled values to estimate from")
        dv = np.abs(np.diff(self.values, axis=1, append=self.values[:, :1]))
        est = float(dv.max()) if dv.size else 0.0
        if self.n_w_nodes > 1:
            dw = np.abs(np.diff(self.values, axis=0))
            est = max(est, float(dw.max()) if dw.size else 0.0)
        return 2.0 * est


def antipodal_difference(fam: SampledFamily) -> SampledFamily:
    """The odd part g(w, v) = F(w, v) - F(w, -v), sample-exact."""
    if not fam.is_function:
        raise FamilyError("antipodal_difference needs a function family; solve box clouds directly")
    half = fam.sphere_res // 2
    g = fam.values - np.roll(fam.values, -half, axis=1)
    return SampledFamily(
        fam.w_model, fam.w_res, fam.sphere_res, values=g, tol=fam.tol, func=None
    )


@dataclass
class SolutionSet:
    """Flagged cells of the W x (S^1/antipode) grid with matching witnesses."""

    w_model: str
    w_res: int
    sphere_res: int
    cells: Dict[Tuple[int, int], np.ndarray]  # (w_cell, direction class) -> e
    epsilon: float

    @property
    def n_classes(self) -> int:
        return self.sphere_res // 2

    @property
    def n_w_cells(self) -> int:
        return 1 if self.w_model == "point" else self.w_res

    def full_cells(self) -> set:
        """Both antipodal representatives of every flagged cell."""
        out = set()
        for (j, i) in self.cells:
            out.add((j, i))
            out.add((j, i + self.n_classes))
        return out

    def fiber(self, j: int) -> List[int]:
        return sorted(i for (jj, i) in self.cells if jj == j)

    def proj_w(self) -> Dict[int, List[int]]:
        return {j: self.fiber(j) for j in range(self.n_w_cells)}

    def components(self) -> List[List[Tuple[int, int]]]:
        seen = set()
        comps = []
        for start in sorted(self.cells):
            if start in seen:
                continue
            comp = []
            stack = [start]
            seen.add(start)
            while stack:
                c = stack.pop()
                comp.append(c)
                for n in self._neighbors(c):
                    if n in self.cells and n not in seen:
                        seen.add(n)
                        stack.append(n)
            comps.append(sorted(comp))
        return comps

    def _neighbors(self, cell: Tuple[int, int]):
        j, i = cell
        half = self.n_classes
        yield j, (i + 1) % half
        yield j, (i - 1) % half
        if self.w_model == "circle":
            yield (j + 1) % self.w_res, i
            yield (j - 1) % self.w_res, i
        elif self.w_model == "interval":
            if j + 1 < self.w_res:
                yield j + 1, i
            if j - 1 >= 0:
                yield j - 1, i


def _sign_change_mask(corner_values: np.ndarray) -> np.ndarray:
    """Componentwise sign change over cell corners; exact zeros count."""
    pos = (corner_values > 0).any(axis=0)
    neg = (corner_values < 0).any(axis=0)
    zero = (corner_values == 0).any(axis=0)
    per_coord = (pos & neg) | zero
    return per_coord.all(axis=-1)


def solve_bu(fam: SampledFamily) -> SolutionSet:
    """Flag the grid cells carrying antipodal matches.

    Function families use the componentwise corner sign test on the odd part
    g; box clouds match e-values between a cell and its antipodal partner
    within the tolerance.
    """
    if fam.is_function:
        return _solve_function(fam)
    return _solve_cloud(fam)


def _solve_function(fam: SampledFamily) -> SolutionSet:
    g = antipodal_difference(fam).values
    res = fam.sphere_res
    half = res // 2
    nw = fam.n_w_cells
    eps = fam.tol if fam.tol is not None else fam.lipschitz_epsilon()

    # corner arrays indexed [corner, w_cell, class, coord]
    v0 = np.arange(half)
    v1 = (v0 + 1) % res
    if fam.w_model == "point":
        corners = np.stack([g[0, v0], g[0, v1]])[:, None, :, :]
    else:
        j0 = np.arange(nw)
        j1 = (j0 + 1) % fam.n_w_nodes if fam.w_model == "circle" else j0 + 1
        corners = np.stack(
            [
                g[np.ix_(j0, v0)],
                g[np.ix_(j0, v1)],
                g[np.ix_(j1, v0)],
                g[np.ix_(j1, v1)],
            ]
        )
    mask = _sign_change_mask(corners)

    F = fam.values
    Fa = np.roll(F, -half, axis=1)
    mean_e = 0.5 * (F + Fa)
    cells: Dict[Tuple[int, int], np.ndarray] = {}
    for j, i in zip(*np.nonzero(mask)):
        j, i = int(j), int(i)
        if fam.w_model == "point":
            e = 0.5 * (mean_e[0, i] + mean_e[0, (i + 1) % res])
        else:
            jn = (j + 1) % fam.n_w_nodes if fam.w_model == "circle" else j + 1
            e = 0.25 * (
                mean_e[j, i]
                + mean_e[j, (i + 1) % res]
                + mean_e[jn, i]
                + mean_e[jn, (i + 1) % res]
            )
        cells[(j, i)] = e
    return SolutionSet(fam.w_model, fam.w_res, fam.sphere_res, cells, float(eps))


def _solve_cloud(fam: SampledFamily) -> SolutionSet:
    if fam.cloud is None:
        raise FamilyError("family carries neither values nor a cloud")
    res = fam.sphere_res
    half = res // 2
    eps = fam.tol if fam.tol is not None else 0.0
    radius = fam.closure_cells
    cells: Dict[Tuple[int, int], np.ndarray] = {}
    for (j, i), vals in fam.cloud.items():
        if i >= half:
            continue
        best = None
        for di in range(-radius, radius + 1):
            a = fam.cloud.get((j, (i + di) % res))
            if a is None or len(a) == 0:
                continue
            for dj in range(-radius, radius + 1):
                b = fam.cloud.get((j, (fam.antipode(i) + dj) % res))
                if b is None or len(b) == 0:
                    continue
                av = np.atleast_2d(np.asarray(a, dtype=float))
                bv = np.atleast_2d(np.asarray(b, dtype=float))
                d = np.abs(av[:, None, :] - bv[None, :, :]).max(axis=2)
                k = np.unravel_index(np.argmin(d), d.shape)
                if d[k] <= eps and (best is None or d[k] < best[0]):
                    best = (float(d[k]), 0.5 * (av[k[0]] + bv[k[1]]))
        if best is not None:
            cells[(j, i)] = best[1]
    return SolutionSet(fam.w_model, fam.w_res, fam.sphere_res, cells, float(eps))


# -- certification ------------------------------------------------------------


def _w_target_pair(sol: SolutionSet) -> Tuple[SimplicialPair, Dict[str, int]]:
    """Path or cycle model of W with sub = boundary nodes."""
    if sol.w_model == "point":
        return build_pair(1, [(0,)]), {}
    n = sol.w_res
    if sol.w_model == "interval":
        edges = [(j, j + 1) for j in range(n)]
        return build_pair(n + 1, edges, [(0,), (n,)]), {}
    edges = [(j, (j + 1) % n) for j in range(n)]
    return build_pair(n, edges), {}


def flagged_subcomplex(sol: SolutionSet) -> Tuple[SimplicialPair, SimplicialMap]:
    """Triangulated flagged region of W x (S/antipode) with its projection.

    Each flagged cell contributes two triangles of the product grid; the
    source subcomplex is the part over the boundary of W.
    """
    half = sol.n_classes
    if half < 3 or (sol.w_model == "circle" and sol.w_res < 3):
        raise FamilyError("grid too coarse to triangulate (need sphere_res >= 6)")
    n_wn = 1 if sol.w_model == "point" else (
        sol.w_res + 1 if sol.w_model == "interval" else sol.w_res
    )

    def vid(j: int, i: int) -> int:
        return j * half + (i % half)

    def wnext(j: int) -> int:
        return (j + 1) % n_wn if sol.w_model == "circle" else j + 1

    simplices = set()
    sub = set()
    for (j, i) in sol.cells:
        if sol.w_model == "point":
            simplices.add(tuple(sorted((vid(0, i), vid(0, i + 1)))))
            continue
        a, b = vid(j, i), vid(j, i + 1)
        c, d = vid(wnext(j), i), vid(wnext(j), i + 1)
        simplices.add(tuple(sorted((a, c, d))))
        simplices.add(tuple(sorted((a, b, d))))
    source = build_pair(n_wn * half, sorted(simplices))

    target, _ = _w_target_pair(sol)
    if sol.w_model == "interval":
        for s in source.all_simplices():
            js = {v // half for v in s}
            if js <= {0} or js <= {sol.w_res}:
                sub.add(s)
        source = source.with_sub(sorted(sub))
    vertex_map = [v // half for v in range(n_wn * half)]
    if sol.w_model == "point":
        vertex_map = [0] * (n_wn * half)
    return source, SimplicialMap(source, target, vertex_map)


def nerve_graph(sol: SolutionSet) -> Tuple[SimplicialPair, SimplicialMap]:
    """Homotopy nerve of the flagged boxes, mapped to a subdivided W model.

    Vertices are flagged cells plus facet connectors between W-adjacent
    flagged cells; direction-adjacent connections collapse over W.  The
    target is W subdivided once so the projection is simplicial.
    """
    cells = sorted(sol.cells)
    cid = {c: k for k, c in enumerate(cells)}
    half = sol.n_classes
    n = max(sol.n_w_cells, 1)

    # target: nodes n_0, c_0, n_1, c_1, ... (interval) or cyclic version
    if sol.w_model == "point":
        target = build_pair(1, [(0,)])
    elif sol.w_model == "interval":
        edges = [(t, t + 1) for t in range(2 * n)]
        target = build_pair(2 * n + 1, edges, [(0,), (2 * n,)])
    else:
        edges = [(t, (t + 1) % (2 * n)) for t in range(2 * n)]
        target = build_pair(2 * n, edges)

    def center_node(j: int) -> int:
        return 0 if sol.w_model == "point" else 2 * j + 1

    vertices: List[int] = [center_node(j) for (j, _) in cells]
    graph_edges = []
    extra_id = len(cells)
    sub_vertices = []

    for (j, i) in cells:
        k = cid[(j, i)]
        # direction-adjacent cells collapse to the same W node
        for i2 in ((i + 1) % half, (i - 1) % half):
            if (j, i2) in cid and cid[(j, i2)] > k:
                graph_edges.append((k, cid[(j, i2)]))
        if sol.w_model == "point":
            continue
        jn = (j + 1) % sol.w_res if sol.w_model == "circle" else j + 1
        if (sol.w_model == "circle" or jn < sol.w_res) and (jn, i) in cid:
            mid = extra_id
            extra_id += 1
            vertices.append((2 * jn) % (2 * n))
            graph_edges.append((k, mid))
            graph_edges.append((mid, cid[(jn, i)]))
        if sol.w_model == "interval":
            if j == 0:
                stub = extra_id
                extra_id += 1
                vertices.append(0)
                graph_edges.append((stub, k))
                sub_vertices.append(stub)
            if j == sol.w_res - 1:
                stub = extra_id
                extra_id += 1
                vertices.append(2 * n)
                graph_edges.append((k, stub))
                sub_vertices.append(stub)

    simplices = [(v,) for v in range(extra_id)] + [tuple(sorted(e)) for e in set(graph_edges)]
    source = build_pair(extra_id, simplices, [(v,) for v in sub_vertices])
    return source, SimplicialMap(source, target, vertices)


def _path_certificate(sol: SolutionSet) -> Optional[List[Tuple[int, int]]]:
    """Interval W: a flagged-cell path from the w=0 side to the w=1 side."""
    starts = [c for c in sol.cells if c[0] == 0]
    goal = sol.w_res - 1
    prev: Dict[Tuple[int, int], Optional[Tuple[int, int]]] = {c: None for c in starts}
    queue = list(starts)
    while queue:
        c = queue.pop(0)
        if c[0] == goal:
            path = [c]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for nb in sol._neighbors(c):
            if nb in sol.cells and nb not in prev:
                prev[nb] = c
                queue.append(nb)
    return None


def _parity_certificate(sol: SolutionSet) -> Optional[List[Tuple[int, int]]]:
    """Circle W: a flagged cell cycle winding oddly around W, or None.

    BFS labels each cell with the winding parity of its tree path; an edge
    whose endpoints disagree with its own weight closes an odd cycle,
    returned as the two tree paths joined through that edge.
    """
    parity: Dict[Tuple[int, int], int] = {}
    parent: Dict[Tuple[int, int], Optional[Tuple[int, int]]] = {}
    for start in sorted(sol.cells):
        if start in parity:
            continue
        parity[start] = 0
        parent[start] = None
        queue = [start]
        while queue:
            c = queue.pop(0)
            j, i = c
            for nb in sol._neighbors(c):
                if nb not in sol.cells:
                    continue
                dj = nb[0] - j
                weight = 1 if (sol.w_model == "circle" and abs(dj) > 1) else 0
                p = parity[c] ^ weight
                if nb not in parity:
                    parity[nb] = p
                    parent[nb] = c
                    queue.append(nb)
                elif parity[nb] != p:
                    path_a, path_b = [c], [nb]
                    for path in (path_a, path_b):
                        while parent[path[-1]] is not None:
                            path.append(parent[path[-1]])
                    return path_a[::-1] + path_b
    return None


@dataclass
class SpanningReport:
    surjective: bool
    essential: bool
    status: str  # "ok" | "inconclusive_refine" | "not_spanning"
    certificate: str
    witness_cells: List[Tuple[int, int]]
    epsilon: float
    resolution: Tuple[int, int]
    hypothesis: dict
    homology_verdict: Optional[bool] = None
    missing_fibers: List[int] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "surjective": self.surjective,
            "essential": self.essential,
            "status": self.status,
            "certificate": self.certificate,
            "witness_cells": [list(c) for c in self.witness_cells],
            "epsilon": self.epsilon,
            "resolution": list(self.resolution),
            "hypothesis": self.hypothesis,
            "homology_verdict": self.homology_verdict,
            "missing_fibers": self.missing_fibers,
        }


def _hypothesis_block(fam: SampledFamily) -> dict:
    if fam.is_function:
        return {
            "kind": "graph_family",
            "satisfied": True,
            "detail": "the graph of a sampled function spans W x S by construction",
        }
    covered = {key for key, vals in fam.cloud.items() if len(vals)}
    missing = []
    for j in range(fam.n_w_cells):
        for i in range(fam.sphere_res):
            if (j, i) not in covered:
                missing.append([j, i])
    return {
        "kind": "box_cloud",
        "satisfied": not missing,
        "detail": "every W x S cell meets the correspondence"
        if not missing
        else f"{len(missing)} W x S cells carry no boxes",
        "missing_cells": missing[:50],
    }


def spanning_check(sol: SolutionSet, fam: SampledFamily) -> SpanningReport:
    """Certify that the solution set spans W.

    Surjectivity of the projection is checked fiber by fiber; essentiality
    of the projection in degree dim W runs through the homology machinery on
    the flagged subcomplex (triangulated when small, its nerve graph above
    the budget), with a direct path/parity certificate recorded alongside.
    """
    hypothesis = _hypothesis_block(fam)
    missing = [j for j in range(sol.n_w_cells) if not sol.fiber(j)]
    surjective = not missing

    status = "ok"
    if not surjective:
        refined = _refine_probe(fam, missing)
        status = "inconclusive_refine" if refined else "not_spanning"
        return SpanningReport(
            surjective=False,
            essential=False,
            status=status,
            certificate="projection misses fibers",
            witness_cells=[],
            epsilon=sol.epsilon,
            resolution=(sol.w_res, sol.sphere_res),
            hypothesis=hypothesis,
            missing_fibers=missing,
        )

    if sol.w_model == "point":
        essential = bool(sol.cells)
        return SpanningReport(
            surjective=True,
            essential=essential,
            status="ok" if essential else "not_spanning",
            certificate="nonempty solution set over the point",
            witness_cells=sorted(sol.cells)[:1],
            epsilon=sol.epsilon,
            resolution=(0, sol.sphere_res),
            hypothesis=hypothesis,
        )

    if sol.w_model == "interval":
        path = _path_certificate(sol)
        essential = path is not None
        certificate = "end-to-end path through the solution set" if essential else "no path certificate"
        witness = path or []
    else:
        cycle = _parity_certificate(sol)
        essential = cycle is not None
        certificate = "odd-winding cycle through the solution set" if essential else "no odd cycle"
        witness = cycle or []

    homology_verdict = None
    if len(sol.cells) <= TRIANGULATED_LIMIT and sol.n_classes >= 3:
        source, proj = flagged_subcomplex(sol)
        report = is_h_essential(proj, 1)
        homology_verdict = report.essential
    else:
        source, proj = nerve_graph(sol)
        report = is_h_essential(proj, 1)
        homology_verdict = report.essential
    if homology_verdict != essential:
        raise AssertionError(
            "certificate and homology verdicts disagree "
            f"({essential} vs {homology_verdict}); solver invariant broken"
        )

    return SpanningReport(
        surjective=True,
        essential=essential,
        status="ok" if essential else "not_spanning",
        certificate=certificate,
        witness_cells=witness,
        epsilon=sol.epsilon,
        resolution=(sol.w_res, sol.sphere_res),
        hypothesis=hypothesis,
        homology_verdict=homology_verdict,
    )


def _refine_probe(fam: SampledFamily, missing: List[int], factor: int = 4) -> bool:
    """Re-sample empty fibers finer; True when solutions appear (too coarse)."""
    if fam.func is None or not fam.is_function:
        return False
    res = fam.sphere_res * factor
    for j in missing:
        w0 = fam.w_coordinate(j)
        w1 = fam.w_coordinate((j + 1) % max(fam.n_w_nodes, 1))
        if fam.w_model == "interval":
            w1 = fam.w_coordinate(j + 1)
        for frac in (0.0, 0.5, 1.0):
            w = w0 + frac * (w1 - w0)
            g = np.array(
                [
                    np.atleast_1d(fam.func(w, 2 * math.pi * i / res))
                    - np.atleast_1d(fam.func(w, 2 * math.pi * i / res + math.pi))
                    for i in range(res)
                ]
            )
            corners = np.stack([g, np.roll(g, -1, axis=0)])
            if _sign_change_mask(corners).any():
                return True
    return False


# -- S^2 fibers behind the n=2 feature flag -------------------------------------


def cube_sphere_points(res: int) -> np.ndarray:
    """Corner grid of the cube surface, normalized to S^2: (6, res+1, res+1, 3).

    Faces are ordered +x, -x, +y, -y, +z, -z; the antipode of a grid point is
    the mirrored point on the opposite face, exactly.
    """
    u = np.linspace(-1.0, 1.0, res + 1)
    uu, vv = np.meshgrid(u, u, indexing="ij")
    one = np.ones_like(uu)
    faces = np.stack(
        [
            np.stack([one, uu, vv], axis=-1),
            np.stack([-one, -uu, -vv], axis=-1),
            np.stack([uu, one, vv], axis=-1),
            np.stack([-uu, -one, -vv], axis=-1),
            np.stack([uu, vv, one], axis=-1),
            np.stack([-uu, -vv, -one], axis=-1),
        ]
    )
    return faces / np.linalg.norm(faces, axis=-1, keepdims=True)


def antipodal_face(face: int) -> int:
    return face ^ 1


def solve_bu_s2(func: Callable[[np.ndarray], Sequence[float]], res: int) -> List[Tuple[int, int, int]]:
    """W = point with S^2 fibers: flagged cube-surface cells where the odd part
    of F: S^2 -> R^2 changes sign in both coordinates.

    The face parametrizations satisfy points[f^1, i, j] = -points[f, i, j],
    so the antipode is sample-exact and the flagged set is mirror-closed.
    """
    pts = cube_sphere_points(res)
    vals = np.asarray(
        [[[np.atleast_1d(func(pts[f, i, j])) for j in range(res + 1)]
          for i in range(res + 1)] for f in range(6)],
        dtype=float,
    )
    return solve_bu_s2_values(vals)


def solve_bu_s2_values(vals: np.ndarray) -> List[Tuple[int, int, int]]:
    """Cube-surface flagging from sampled values (6, res+1, res+1, m)."""
    vals = np.asarray(vals, dtype=float)
    if vals.ndim == 3:
        vals = vals[:, :, :, None]
    if vals.shape[0] != 6 or vals.shape[1] != vals.shape[2]:
        raise FamilyError("S^2 samples must have shape (6, res+1, res+1, m)")
    g = vals - vals[[antipodal_face(f) for f in range(6)]]
    corners = np.stack(
        [
            g[:, :-1, :-1],
            g[:, 1:, :-1],
            g[:, :-1, 1:],
            g[:, 1:, 1:],
        ]
    )
    mask = _sign_change_mask(corners)
    return [(int(f), int(i), int(j)) for f, i, j in zip(*np.nonzero(mask))]


# -- input formats -------------------------------------------------------------


def family_from_json(doc: dict) -> SampledFamily:
    kind = doc.get("type", "function_samples")
    tol = doc.get("tol")
    if kind == "function_samples":
        return SampledFamily(
            doc["w_model"], int(doc.get("w_res", 0)), int(doc["sphere_res"]),
            values=np.asarray(doc["values"], dtype=float), tol=tol,
        )
    if kind == "box_cloud":
        cloud: Dict[Tuple[int, int], np.ndarray] = {}
        for iw, iv, es in doc["boxes"]:
            key = (int(iw), int(iv))
            arr = np.atleast_2d(np.asarray(es, dtype=float))
            if key in cloud:
                cloud[key] = np.vstack([cloud[key], arr])
            else:
                cloud[key] = arr
        fam = SampledFamily(
            doc["w_model"], int(doc.get("w_res", 0)), int(doc["sphere_res"]),
            tol=tol, closure_cells=int(doc.get("closure_cells", 0)),
        )
        fam.cloud = cloud
        return fam
    raise FamilyError(f"unknown family type {kind!r}")


def family_from_csv(text: str, w_model: str, w_res: int, sphere_res: int,
                    tol: Optional[float] = None) -> SampledFamily:
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and not r[0].startswith("#")]
    m = len(rows[0]) - 2
    fam = SampledFamily(w_model, w_res, sphere_res, tol=tol)
    values = np.zeros((fam.n_w_nodes, sphere_res, m))
    seen = np.zeros((fam.n_w_nodes, sphere_res), dtype=bool)
    for r in rows:
        j, i = int(r[0]), int(r[1])
        values[j, i] = [float(x) for x in r[2:]]
        seen[j, i] = True
    if not seen.all():
        raise FamilyError("CSV does not cover the full sample grid")
    fam.values = values
    fam.__post_init__()
    return fam
