"""Finite-sample correspondence operators over probability simplices:
preimages, fiberwise convexification, payoff saturation, and the two
glued-correspondence constructions whose spanning behavior this lab probes
empirically on small state sets.

All coordinates are exact rationals on a uniform payoff grid, so hull
membership, idempotence and monotonicity checks are decidable equalities.
Spanning verdicts produced here are labeled EMPIRICAL: they are grid
evidence, never proofs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .homology import is_h_essential
from .simplicial import SimplicialMap, build_pair

Point = Tuple[Fraction, ...]

SELECTION_CAP = 200_000


class CorrespondenceError(ValueError):
    pass


def frac(x) -> Fraction:
    """Exact rational from ints, Fractions, strings; floats via repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(repr(x)))
    return Fraction(x)


def _as_point(xs) -> Point:
    return tuple(frac(x) for x in xs)


# -- convex membership ---------------------------------------------------------


@dataclass(frozen=True)
class ConvexVertexSet:
    """A finite generating set; hull queried by exact membership tests."""

    points: Tuple[Point, ...]

    def dim(self) -> int:
        return len(self.points[0]) if self.points else 0

    def contains(self, x) -> bool:
        x = _as_point(x)
        pts = self.points
        if not pts:
            return False
        d = len(x)
        # Caratheodory: some <= d+1 generators suffice
        for r in range(1, min(len(pts), d + 1) + 1):
            for subset in itertools.combinations(pts, r):
                if _in_hull_exact(x, subset):
                    return True
        return False

    def reduce(self) -> "ConvexVertexSet":
        """Drop generators lying in the hull of the others (canonical form)."""
        pts = sorted(set(self.points))
        keep = list(pts)
        changed = True
        while changed:
            changed = False
            for p in list(keep):
                others = [q for q in keep if q != p]
                if others and ConvexVertexSet(tuple(others)).contains(p):
                    keep.remove(p)
                    changed = True
        return ConvexVertexSet(tuple(sorted(keep)))


def _in_hull_exact(x: Point, gens: Sequence[Point]) -> bool:
    """One exact solve of sum l_i g_i = x, sum l_i = 1 with free vars zeroed.

    Complete for affinely independent generator sets; the Caratheodory
    enumeration in ConvexVertexSet.contains covers the dependent case.
    """
    d = len(x)
    n = len(gens)
    rows = [[gens[j][i] for j in range(n)] + [x[i]] for i in range(d)]
    rows.append([Fraction(1)] * n + [Fraction(1)])
    m = len(rows)
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, m):
        if rows[i][n] != 0:
            return False
    sol = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][n]
    return all(v >= 0 for v in sol)


# -- correspondences -----------------------------------------------------------


@dataclass(frozen=True)
class FiniteCorrespondence:
    """A finite set of (distribution, payoff) pairs over a label set L."""

    label: Tuple[int, ...]
    box: Tuple[Fraction, Fraction]
    points: Tuple[Tuple[Point, Point], ...]

    def __post_init__(self):
        a, b = self.box
        for p, y in self.points:
            if len(p) != len(self.label) or len(y) != len(self.label):
                raise CorrespondenceError("point arity does not match the label")
            if any(v < 0 for v in p) or sum(p) != 1:
                raise CorrespondenceError(f"{p} is not a probability vector")
            if any(v < a or v > b for v in y):
                raise CorrespondenceError(f"payoff {y} outside the box [{a}, {b}]")

    @classmethod
    def build(cls, label, box, points) -> "FiniteCorrespondence":
        a, b = frac(box[0]), frac(box[1])
        pts = []
        for p, y in points:
            p = _as_point(p)
            s = sum(p)
            if s != 1:
                if abs(s - 1) > Fraction(1, 10**12):
                    raise CorrespondenceError(f"{p} does not sum to 1")
                p = p[:-1] + (p[-1] + (1 - s),)
            pts.append((p, _as_point(y)))
        return cls(tuple(int(l) for l in label), (a, b), tuple(sorted(set(pts))))

    def fiber_points(self, y, eps=Fraction(0)) -> List[Point]:
        y = _as_point(y)
        eps = frac(eps)
        return [p for p, yy in self.points if max(abs(a - b) for a, b in zip(yy, y)) <= eps]

    def payoffs(self) -> List[Point]:
        return sorted(set(y for _, y in self.points))


def preimage(F: FiniteCorrespondence, y, eps=0) -> List[Point]:
    """All distributions p with (p, y') in F and |y' - y|_inf <= eps."""
    return sorted(F.fiber_points(y, frac(eps)))


@dataclass(frozen=True)
class HullUnionCorrespondence:
    """Fibers stored as unions of convex hull generating sets."""

    label: Tuple[int, ...]
    box: Tuple[Fraction, Fraction]
    fibers: Tuple[Tuple[Point, Tuple[ConvexVertexSet, ...]], ...]

    def fiber(self, y) -> Tuple[ConvexVertexSet, ...]:
        y = _as_point(y)
        for yy, hulls in self.fibers:
            if yy == y:
                return hulls
        return ()

    def contains(self, p, y) -> bool:
        return any(h.contains(p) for h in self.fiber(y))

    def payoffs(self) -> List[Point]:
        return [y for y, _ in self.fibers]


def convexify(F) -> HullUnionCorrespondence:
    """Replace every fiber by (the vertex set of) its convex hull."""
    if isinstance(F, FiniteCorrespondence):
        grouped: Dict[Point, List[Point]] = {}
        for p, y in F.points:
            grouped.setdefault(y, []).append(p)
        fibers = tuple(
            (y, (ConvexVertexSet(tuple(sorted(ps))).reduce(),))
            for y, ps in sorted(grouped.items())
        )
        return HullUnionCorrespondence(F.label, F.box, fibers)
    if isinstance(F, HullUnionCorrespondence):
        fibers = []
        for y, hulls in F.fibers:
            merged = tuple(sorted(set(itertools.chain(*(h.points for h in hulls)))))
            fibers.append((y, (ConvexVertexSet(merged).reduce(),)))
        return HullUnionCorrespondence(F.label, F.box, tuple(fibers))
    raise CorrespondenceError(f"cannot convexify {type(F).__name__}")


def payoff_grid(box: Tuple[Fraction, Fraction], grid_res: int) -> List[Fraction]:
    a, b = box
    return [a + (b - a) * Fraction(i, grid_res) for i in range(grid_res + 1)]


def saturate(F: FiniteCorrespondence, grid_res: int) -> FiniteCorrespondence:
    """Grid-exact payoff saturation.

    For every (p, x) add (p, y) for grid payoffs y dominating x that agree
    with x on every coordinate where p is positive.
    """
    grid = payoff_grid(F.box, grid_res)
    gset = set(grid)
    out = set(F.points)
    for p, x in F.points:
        free = [l for l in range(len(F.label)) if p[l] == 0]
        for xi in x:
            if xi not in gset:
                raise CorrespondenceError(
                    f"payoff {xi} is not on the grid of resolution {grid_res}"
                )
        choices = [[g for g in grid if g >= x[l]] for l in free]
        for combo in itertools.product(*choices):
            y = list(x)
            for l, v in zip(free, combo):
                y[l] = v
            out.add((p, tuple(y)))
    return FiniteCorrespondence(F.label, F.box, tuple(sorted(out)))


def is_saturated(F: FiniteCorrespondence, grid_res: int) -> bool:
    return saturate(F, grid_res).points == F.points


# -- embedding into the full simplex -------------------------------------------


def embed_point(p: Point, label: Tuple[int, ...], K: Tuple[int, ...]) -> Point:
    """Distribution over L viewed in the simplex over K (zeros elsewhere)."""
    pos = {l: i for i, l in enumerate(label)}
    return tuple(p[pos[k]] if k in pos else Fraction(0) for k in K)


def lift_correspondence(
    F: FiniteCorrespondence, K: Tuple[int, ...], grid_res: int
) -> List[Tuple[Point, Point]]:
    """Points of F x I^(K \\ L) on the payoff grid, inside Delta(K) x I^K."""
    grid = payoff_grid(F.box, grid_res)
    pos = {l: i for i, l in enumerate(F.label)}
    extra = [k for k in K if k not in pos]
    out = []
    for p, y in F.points:
        pe = embed_point(p, F.label, K)
        for combo in itertools.product(grid, repeat=len(extra)):
            ye = []
            ci = 0
            for k in K:
                if k in pos:
                    ye.append(y[pos[k]])
                else:
                    ye.append(combo[ci])
                    ci += 1
            out.append((pe, tuple(ye)))
    return out


# -- the two glued constructions ------------------------------------------------


@dataclass
class GammaCorrespondence:
    """A correspondence over the full simplex, fibers = unions of hulls."""

    K: Tuple[int, ...]
    box: Tuple[Fraction, Fraction]
    grid_res: int
    fibers: Dict[Point, Tuple[ConvexVertexSet, ...]]
    flags: List[str] = field(default_factory=list)

    def fiber(self, y) -> Tuple[ConvexVertexSet, ...]:
        return self.fibers.get(_as_point(y), ())

    def nonempty_payoffs(self) -> List[Point]:
        return sorted(y for y, h in self.fibers.items() if h)


def _box_contains(box_lo: Point, box_hi: Point, y: Point) -> bool:
    return all(lo <= v <= hi for lo, v, hi in zip(box_lo, y, box_hi))


def gamma_far(
    F_by_label: Dict[Tuple[int, ...], FiniteCorrespondence],
    U_by_label: Dict[Tuple[int, ...], Tuple[Sequence, Sequence]],
    K: Sequence[int],
    script_L: Sequence[Sequence[int]],
    grid_res: int,
) -> GammaCorrespondence:
    """Glue a top correspondence with lifted label correspondences.

    Per payoff y the fiber is the hull of the lifted fibers together with,
    for each top-correspondence point over y, the hull rejoined with that
    point.  Hypotheses (saturation, constraint boxes containing the top
    payoff corner, lifted correspondences inside their boxes) are checked
    and reported as flags; the construction is emitted regardless.
    """
    K = tuple(sorted(int(k) for k in K))
    labels = [tuple(sorted(int(x) for x in L)) for L in script_L]
    flags: List[str] = []

    FK = F_by_label[K]
    box = FK.box
    b_top = tuple(box[1] for _ in K)

    lo = [box[0] for _ in K]
    hi = [box[1] for _ in K]
    for L, (blo, bhi) in U_by_label.items():
        blo, bhi = _as_point(blo), _as_point(bhi)
        if not _box_contains(blo, bhi, b_top):
            flags.append(f"constraint box for {L} misses the top payoff corner")
        lo = [max(a, c) for a, c in zip(lo, blo)]
        hi = [min(a, c) for a, c in zip(hi, bhi)]
    U_lo, U_hi = tuple(lo), tuple(hi)

    for L in labels + [K]:
        F = F_by_label[L]
        if not is_saturated(F, grid_res):
            flags.append(f"correspondence over {L} is not saturated")

    lifted: Dict[Tuple[int, ...], List[Tuple[Point, Point]]] = {}
    for L in labels:
        pts = lift_correspondence(F_by_label[L], K, grid_res)
        lifted[L] = pts
        UL = U_by_label.get(L)
        if UL is not None:
            blo, bhi = _as_point(UL[0]), _as_point(UL[1])
            if any(not _box_contains(blo, bhi, y) for _, y in pts):
                flags.append(f"lifted correspondence over {L} leaves its constraint box")

    F_pts = [
        (embed_point(p, K, K), y)
        for p, y in FK.points
        if _box_contains(U_lo, U_hi, y)
    ]
    G_pts = [
        (p, y)
        for L in labels
        for p, y in lifted[L]
        if _box_contains(U_lo, U_hi, y)
    ]

    by_y_G: Dict[Point, List[Point]] = {}
    for p, y in G_pts:
        by_y_G.setdefault(y, []).append(p)
    by_y_F: Dict[Point, List[Point]] = {}
    for p, y in F_pts:
        by_y_F.setdefault(y, []).append(p)

    fibers: Dict[Point, Tuple[ConvexVertexSet, ...]] = {}
    for y in sorted(set(by_y_G) | set(by_y_F)):
        hulls: List[ConvexVertexSet] = []
        g = sorted(set(by_y_G.get(y, [])))
        if g:
            hulls.append(ConvexVertexSet(tuple(g)).reduce())
        for x in sorted(set(by_y_F.get(y, []))):
            hulls.append(ConvexVertexSet(tuple(sorted(set(g) | {x}))).reduce())
        fibers[y] = tuple(hulls)
    return GammaCorrespondence(K, box, grid_res, fibers, flags)


def gamma_close(
    F_by_maximal: Dict[Tuple[int, ...], FiniteCorrespondence],
    K: Sequence[int],
    script_L: Sequence[Sequence[int]],
    grid_res: int,
) -> GammaCorrespondence:
    """Glue correspondences given only over maximal labels.

    Non-maximal labels inherit the points supported on them; fibers collect
    hulls of one generator per maximal label (repeats of the same maximal
    label are forbidden), any number from non-maximal ones.
    """
    K = tuple(sorted(int(k) for k in K))
    labels = [tuple(sorted(int(x) for x in L)) for L in script_L]
    flags: List[str] = []

    label_set = set(labels)
    for L1, L2 in itertools.combinations(labels, 2):
        inter = tuple(sorted(set(L1) & set(L2)))
        if inter and inter not in label_set:
            flags.append(f"label family is not intersection closed at {L1} ^ {L2}")

    maximal = [L for L in labels if not any(set(L) < set(M) for M in labels)]
    box = next(iter(F_by_maximal.values())).box

    induced: Dict[Tuple[int, ...], FiniteCorrespondence] = {}
    for L in labels:
        pts = set()
        pos_of = {}
        for J in maximal:
            if not set(L) <= set(J):
                continue
            FJ = F_by_maximal[J]
            posJ = {l: i for i, l in enumerate(J)}
            for p, y in FJ.points:
                if all(p[posJ[j]] == 0 for j in J if j not in L):
                    pts.add(
                        (
                            tuple(p[posJ[l]] for l in L),
                            tuple(y[posJ[l]] for l in L),
                        )
                    )
        induced[L] = FiniteCorrespondence(L, box, tuple(sorted(pts)))

    lifted: Dict[Tuple[int, ...], Dict[Point, List[Point]]] = {}
    for L in labels:
        per_y: Dict[Point, List[Point]] = {}
        for p, y in lift_correspondence(induced[L], K, grid_res):
            per_y.setdefault(y, []).append(p)
        lifted[L] = per_y

    all_y = sorted(set(itertools.chain(*(d.keys() for d in lifted.values()))))
    non_max = [L for L in labels if L not in maximal]

    fibers: Dict[Point, Tuple[ConvexVertexSet, ...]] = {}
    for y in all_y:
        base = sorted(
            set(itertools.chain(*(lifted[L].get(y, []) for L in non_max)))
        )
        options = []
        for M in maximal:
            options.append([None] + sorted(set(lifted[M].get(y, []))))
        count = 1
        for o in options:
            count *= len(o)
        if count > SELECTION_CAP:
            raise CorrespondenceError(
                f"selection count {count} over payoff {y} exceeds the cap"
            )
        hulls: List[ConvexVertexSet] = []
        seen = set()
        for combo in itertools.product(*options):
            gens = tuple(sorted(set(base) | {c for c in combo if c is not None}))
            if not gens or gens in seen:
                continue
            seen.add(gens)
            hulls.append(ConvexVertexSet(gens))
        fibers[y] = tuple(hulls)
    return GammaCorrespondence(K, box, grid_res, fibers, flags)


# -- empirical spanning ----------------------------------------------------------


@dataclass
class SpanVerdict:
    spans: Optional[bool]
    label: str  # always "EMPIRICAL"
    detail: str
    witness_boxes: List[tuple] = field(default_factory=list)


def _gamma_boxes(gamma: GammaCorrespondence, p_res: int) -> FrozenSet[tuple]:
    """Flagged (simplex cell, payoff index) boxes of the footprint.

    Only two-state ground sets are supported: the simplex is the segment
    parametrized by the probability of the larger state.
    """
    if len(gamma.K) != 2:
        raise CorrespondenceError("footprint certification supports |K| = 2 only")
    payoffs = sorted(gamma.fibers)
    flagged = set()
    for yi, y in enumerate(payoffs):
        for hull in gamma.fibers[y]:
            if not hull.points:
                continue
            ts = [p[1] for p in hull.points]
            t0, t1 = min(ts), max(ts)
            # cells [c, c+1]/p_res meeting the closed interval [t0, t1]
            c0 = max(0, math.ceil(t0 * p_res) - 1 if (t0 * p_res).denominator == 1 else math.floor(t0 * p_res))
            c1 = min(p_res - 1, math.floor(t1 * p_res))
            for c in range(c0, c1 + 1):
                flagged.add((c, yi))
    return frozenset(flagged)


def _boxes_essential(
    flagged: FrozenSet[tuple], p_res: int, payoffs: List[Point], step: Fraction
) -> Tuple[bool, List[tuple]]:
    """Nerve graph of the boxes mapped onto the subdivided segment, certified
    through the homology machinery."""
    y_index = {i: y for i, y in enumerate(payoffs)}
    y_adj: Dict[int, List[int]] = {}
    for i, y in y_index.items():
        for j, z in y_index.items():
            if i >= j:
                continue
            diffs = [abs(a - b) for a, b in zip(y, z) if a != b]
            if len(diffs) == 1 and diffs[0] == step:
                y_adj.setdefault(i, []).append(j)
                y_adj.setdefault(j, []).append(i)

    boxes = sorted(flagged)
    bid = {b: i for i, b in enumerate(boxes)}
    target = build_pair(2 * p_res + 1, [(t, t + 1) for t in range(2 * p_res)], [(0,), (2 * p_res,)])
    vertices = [2 * c + 1 for (c, _) in boxes]
    edges = []
    sub_v = []
    extra = len(boxes)
    for (c, yi) in boxes:
        me = bid[(c, yi)]
        for yj in y_adj.get(yi, []):
            if (c, yj) in bid and bid[(c, yj)] > me:
                edges.append((me, bid[(c, yj)]))
        if (c + 1, yi) in bid:
            mid = extra
            extra += 1
            vertices.append(2 * (c + 1))
            edges.append((me, mid))
            edges.append((mid, bid[(c + 1, yi)]))
        if c == 0:
            stub = extra
            extra += 1
            vertices.append(0)
            edges.append((stub, me))
            sub_v.append(stub)
        if c == p_res - 1:
            stub = extra
            extra += 1
            vertices.append(2 * p_res)
            edges.append((me, stub))
            sub_v.append(stub)
    simplices = [(v,) for v in range(extra)] + sorted(set(tuple(sorted(e)) for e in edges))
    source = build_pair(extra, simplices, [(v,) for v in sub_v])
    proj = SimplicialMap(source, target, vertices)
    report = is_h_essential(proj, 1)
    witness = []
    if report.essential and report.witness is not None:
        for s in sorted(report.witness.simplices):
            for v in s:
                if v < len(boxes):
                    witness.append(boxes[v])
    return report.essential, sorted(set(witness))


def spanning_empirical(
    gamma: GammaCorrespondence, p_res: Optional[int] = None
) -> SpanVerdict:
    """Grid evidence for the spanning property of a glued correspondence.

    The footprint of the fibers over the simplex segment is certified for
    essentiality onto the segment through the homology machinery.  The
    verdict is evidence at the stated resolution, not a proof.
    """
    if len(gamma.K) != 2:
        return SpanVerdict(None, "EMPIRICAL", "only |K| = 2 footprints are certified; inconclusive")
    if p_res is None:
        p_res = gamma.grid_res
    payoffs = sorted(gamma.fibers)
    if not payoffs:
        return SpanVerdict(False, "EMPIRICAL", "all fibers empty")
    try:
        flagged = _gamma_boxes(gamma, p_res)
    except CorrespondenceError as exc:
        return SpanVerdict(None, "EMPIRICAL", str(exc))
    if len(flagged) > 50_000:
        return SpanVerdict(None, "EMPIRICAL", "footprint too large for this grid resolution")
    covered = {c for (c, _) in flagged}
    if len(covered) < p_res:
        return SpanVerdict(
            False,
            "EMPIRICAL",
            f"projection misses {p_res - len(covered)} simplex cells",
        )
    step = (gamma.box[1] - gamma.box[0]) / gamma.grid_res
    essential, witness = _boxes_essential(flagged, p_res, payoffs, step)
    detail = "footprint essential onto the simplex" if essential else "footprint not essential"
    return SpanVerdict(essential, "EMPIRICAL", detail, witness)


# -- instance files ---------------------------------------------------------------


def correspondence_from_json(label, box, pairs) -> FiniteCorrespondence:
    return FiniteCorrespondence.build(label, box, [(p, y) for p, y in pairs])


def instance_from_json(doc: dict) -> dict:
    K = tuple(sorted(int(k) for k in doc["K"]))
    script_L = [tuple(sorted(int(x) for x in L)) for L in doc["script_L"]]
    box = (frac(doc["payoff_box"][0]), frac(doc["payoff_box"][1]))
    F = {}
    for key, pairs in doc.get("F", {}).items():
        label = tuple(sorted(int(x) for x in key.split(",")))
        F[label] = correspondence_from_json(label, box, pairs)
    U = {}
    for key, bounds in doc.get("U", {}).items():
        label = tuple(sorted(int(x) for x in key.split(",")))
        U[label] = (bounds[0], bounds[1])
    return {
        "K": K,
        "script_L": script_L,
        "box": box,
        "F": F,
        "U": U,
        "grid_res": int(doc.get("grid_res", 8)),
        "mode": doc.get("mode", "far"),
    }
