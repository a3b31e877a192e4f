"""Finite models of the symmetric square of a simplicial pair and the
chain-level squaring of homology classes.

The square X x X is handled as a polyhedral complex whose cells are ordered
pairs of simplices of X.  Two barycentric subdivisions (the order complex of
the cell poset, subdivided once more) make the coordinate swap a simplicial
involution whose fixed subcomplex is exactly the diagonal and whose quotient
is again a simplicial complex.  A class of degree k squares to the degree-2k
chain collecting, for every unordered pair of distinct representative
simplices, the triangulated image of their product cell in the quotient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .homology import HomologyClass, boundary_of_chain, homology
from .simplicial import (
    Simplex,
    SimplicialMap,
    SimplicialPair,
    all_subfaces,
    barycentric_subdivision,
    build_pair,
    subdivided_chain,
    subdivided_map,
)

Cell = Tuple[Simplex, Simplex]

DEFAULT_RINGS = 4
SUBDIVISION_CAP = 5


class SmallnessError(ValueError):
    pass


# -- staircase product triangulation ----------------------------------------


@dataclass
class ProductComplex:
    """Staircase triangulation of |p| x |q| with product-cell tags."""

    left: SimplicialPair
    right: SimplicialPair
    complex: SimplicialPair
    top_cells: Dict[Cell, List[Simplex]]

    def vertex_id(self, v: int, w: int) -> int:
        return v * self.right.n_vertices + w


def product_triangulation(p: SimplicialPair, q: SimplicialPair) -> ProductComplex:
    """Staircase (shuffle) triangulation of the product of two pairs.

    Each product of an a-simplex and a b-simplex is subdivided into
    binomial(a+b, a) top simplices, one per monotone lattice path.  The
    subcomplex is A x |q| union |p| x B.
    """
    nq = q.n_vertices

    def vid(v: int, w: int) -> int:
        return v * nq + w

    tops: Dict[Cell, List[Simplex]] = {}
    simplices = set()
    sub = set()
    for s in p.all_simplices():
        for t in q.all_simplices():
            a, b = len(s) - 1, len(t) - 1
            cell_tops = []
            for rights in itertools.combinations(range(a + b), a):
                i = j = 0
                path = [vid(s[0], t[0])]
                for step in range(a + b):
                    if step in rights:
                        i += 1
                    else:
                        j += 1
                    path.append(vid(s[i], t[j]))
                simplex = tuple(sorted(path))
                cell_tops.append(simplex)
                simplices.add(simplex)
                if s in p.sub or t in q.sub:
                    sub.add(simplex)
            tops[(s, t)] = cell_tops
    pair = build_pair(p.n_vertices * nq, sorted(simplices), sorted(sub))
    return ProductComplex(p, q, pair, tops)


# -- the symmetric-square model ----------------------------------------------


def _swap_cell(c: Cell) -> Cell:
    return (c[1], c[0])


def _cell_orbit(c: Cell) -> Cell:
    return min(c, _swap_cell(c))


@dataclass
class SymSquarePair:
    """A simplicial model of (X, A)^s built from a given subdivision level."""

    source: SimplicialPair
    level: int
    base: SimplicialPair  # level-fold barycentric subdivision of source
    quotient: SimplicialPair  # with sub = image of diagonal + A-part
    diag: FrozenSet[Simplex]  # quotient simplices lying in the diagonal
    carrier: Dict[Simplex, Cell]  # quotient simplex -> unordered carrier cell
    interior_by_orbit: Dict[Cell, List[Simplex]]  # cell orbit -> its top simplices
    vertex_key: List[tuple]  # quotient vertex -> canonical chain-of-cells key
    key_to_vid: Dict[tuple, int]
    _nbhd_cache: Dict[int, "DiagonalNeighborhood"] = field(default_factory=dict)

    def top_simplices_of_cell(self, a: Simplex, b: Simplex) -> List[Simplex]:
        return self.interior_by_orbit[_cell_orbit((a, b))]

    def proj_table(self) -> List[dict]:
        out = []
        for s in sorted(self.carrier):
            a, b = self.carrier[s]
            out.append({"simplex": list(s), "cell": [list(a), list(b)]})
        return out


def _subdivide_times(pair: SimplicialPair, level: int) -> SimplicialPair:
    cur = pair
    for _ in range(level):
        cur, _ = barycentric_subdivision(cur)
    return cur


_MODEL_CACHE: Dict[Tuple[SimplicialPair, int], SymSquarePair] = {}


def sym_square_space(pair: SimplicialPair, level: int = 0) -> SymSquarePair:
    """Build the quotient model of (X, A)^s from the level-fold subdivision."""
    key = (pair, level)
    cached = _MODEL_CACHE.get(key)
    if cached is not None:
        return cached

    base = _subdivide_times(pair, level)
    cells = [(s, t) for s in base.all_simplices() for t in base.all_simplices()]
    cells.sort(key=lambda c: (len(c[0]) + len(c[1]), c))
    cell_id = {c: i for i, c in enumerate(cells)}

    # first subdivision: order complex of the cell poset
    def proper_cell_faces(c: Cell) -> List[Cell]:
        s, t = c
        out = []
        for fs in all_subfaces(s):
            for ft in all_subfaces(t):
                if (fs, ft) != c:
                    out.append((fs, ft))
        return out

    ending: Dict[Cell, List[Tuple[int, ...]]] = {}
    chains: List[Tuple[int, ...]] = []
    for c in cells:
        mine = [(cell_id[c],)]
        for f in proper_cell_faces(c):
            for ch in ending[f]:
                mine.append(ch + (cell_id[c],))
        ending[c] = mine
        chains.extend(mine)
    sd1 = build_pair(len(cells), chains)

    # second subdivision
    sd2, _ = barycentric_subdivision(sd1)
    sd1_simplices = sd1.all_simplices()

    # the swap involution through both subdivisions
    tau_cell = [cell_id[_swap_cell(c)] for c in cells]
    sd1_pos = {s: i for i, s in enumerate(sd1_simplices)}

    def tau_chain(ch: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(tau_cell[v] for v in ch)  # dims preserved, order kept

    tau_sd2_vertex = [sd1_pos[tuple(sorted(tau_chain(sd1_simplices[v])))] for v in range(len(sd1_simplices))]

    # quotient vertices: orbits of sd2 vertices, canonically keyed by the
    # lexicographically smaller of the chain and its swap (cells spelled out)
    def chain_cells(v: int) -> tuple:
        return tuple(cells[i] for i in sd1_simplices[v])

    orbit_rep = [min(v, tau_sd2_vertex[v]) for v in range(len(sd1_simplices))]
    reps = sorted(set(orbit_rep))
    qvid = {r: i for i, r in enumerate(reps)}
    vertex_key = [
        min(chain_cells(r), tuple(_swap_cell(c) for c in chain_cells(r)))
        for r in reps
    ]
    key_to_vid = {k: i for i, k in enumerate(vertex_key)}

    diag_vertex = [all(c[0] == c[1] for c in chain_cells(r)) for r in reps]

    qsimplices = set()
    carrier: Dict[Simplex, Cell] = {}
    diag_set = set()
    interior: Dict[Cell, List[Simplex]] = {}
    base_sub = base.sub
    sub_set = set()

    for grade in sd2.simplices:
        for s in grade:
            q = tuple(sorted(qvid[orbit_rep[v]] for v in s))
            if q in qsimplices:
                continue
            qsimplices.add(q)
            # carrier: the top cell of the longest chain among the vertices
            top_chain = max((sd1_simplices[v] for v in s), key=len)
            cell = cells[top_chain[-1]]
            orbit = _cell_orbit(cell)
            carrier[q] = orbit
            if len(q) - 1 == len(orbit[0]) + len(orbit[1]) - 2:
                interior.setdefault(orbit, []).append(q)
            if all(diag_vertex[qvid[orbit_rep[v]]] for v in s):
                diag_set.add(q)
                sub_set.add(q)
            if orbit[0] in base_sub or orbit[1] in base_sub:
                sub_set.add(q)

    quotient = build_pair(len(reps), sorted(qsimplices), sorted(sub_set))
    model = SymSquarePair(
        source=pair,
        level=level,
        base=base,
        quotient=quotient,
        diag=frozenset(diag_set),
        carrier=carrier,
        interior_by_orbit={k: sorted(v) for k, v in interior.items()},
        vertex_key=vertex_key,
        key_to_vid=key_to_vid,
    )
    if len(_MODEL_CACHE) > 24:
        _MODEL_CACHE.clear()
    _MODEL_CACHE[key] = model
    return model


# -- diagonal neighborhoods ---------------------------------------------------


@dataclass
class DiagonalNeighborhood:
    """A face-closed set of quotient simplices containing the diagonal."""

    model: SymSquarePair
    simplices: FrozenSet[Simplex]
    rings: Optional[int] = None

    def __post_init__(self):
        if not self.model.diag <= self.simplices:
            raise ValueError("neighborhood must contain the diagonal")

    def is_proper(self) -> bool:
        """Component-wise room check: every connected component of the
        quotient with content beyond the diagonal keeps some simplex outside
        sub and the neighborhood (otherwise relative classes there die for
        lack of room, and a finer model is called for)."""
        q = self.model.quotient
        blocked = self.simplices | q.sub
        exempt_blocked = set(self.model.diag) | q.sub
        root = list(range(q.n_vertices))

        def find(v):
            while root[v] != v:
                root[v] = root[root[v]]
                v = root[v]
            return v

        for s in q.all_simplices():
            for v in s[1:]:
                root[find(v)] = find(s[0])
        needs_room = set()
        has_room = set()
        for s in q.all_simplices():
            c = find(s[0])
            if s not in exempt_blocked:
                needs_room.add(c)
            if s not in blocked:
                has_room.add(c)
        return needs_room <= has_room

    def __contains__(self, simplex: Simplex) -> bool:
        return simplex in self.simplices


def _face_closure(simplices) -> set:
    out = set()
    for s in simplices:
        out.update(all_subfaces(s))
    return out


def diagonal_neighborhood(model: SymSquarePair, rings: int = DEFAULT_RINGS) -> DiagonalNeighborhood:
    """Iterated closed star of the diagonal in the quotient complex."""
    cached = model._nbhd_cache.get(rings)
    if cached is not None:
        return cached
    cur = set(model.diag)
    all_s = model.quotient.all_simplices()
    for _ in range(rings):
        vertices = {v for s in cur for v in s}
        grown = {s for s in all_s if any(v in vertices for v in s)}
        cur = _face_closure(cur | grown)
    out = DiagonalNeighborhood(model, frozenset(cur), rings=rings)
    model._nbhd_cache[rings] = out
    return out


def full_neighborhood(model: SymSquarePair) -> DiagonalNeighborhood:
    return DiagonalNeighborhood(
        model, frozenset(model.quotient.all_simplices()), rings=None
    )


def neighborhood_from_simplices(model: SymSquarePair, simplices) -> DiagonalNeighborhood:
    closed = _face_closure(set(simplices) | set(model.diag))
    for s in closed:
        if not model.quotient.has_simplex(s):
            raise ValueError(f"{s} is not a quotient simplex")
    return DiagonalNeighborhood(model, frozenset(closed), rings=None)


# -- smallness and the squared class -----------------------------------------


def check_smallness(chain: Sequence[Simplex], neighborhood: DiagonalNeighborhood) -> bool:
    """Is every product of chain simplices either inside the neighborhood or
    disjoint from the diagonal?

    Products of simplices with a common vertex meet the diagonal, so their
    full triangulated image must land in the neighborhood; disjoint pairs
    are unconstrained.
    """
    model = neighborhood.model
    simplices = [tuple(sorted(s)) for s in chain]
    for s in simplices:
        if not model.base.has_simplex(s):
            raise ValueError(f"chain simplex {s} does not live on the model base")
    for i, a in enumerate(simplices):
        for b in simplices[i:]:
            if set(a) & set(b):
                for q in model.top_simplices_of_cell(a, b):
                    if q not in neighborhood.simplices:
                        return False
    return True


def squared_chain(rep: Sequence[Simplex], model: SymSquarePair) -> FrozenSet[Simplex]:
    """The quotient chain collecting the product of every unordered pair of
    distinct representative simplices."""
    rep = sorted(set(tuple(sorted(s)) for s in rep))
    out: set = set()
    for a, b in itertools.combinations(rep, 2):
        out ^= set(model.top_simplices_of_cell(a, b))
    return frozenset(out)


def sym_pair_with(model: SymSquarePair, neighborhood: DiagonalNeighborhood) -> SimplicialPair:
    """The pair (X, A)^s_U: the quotient relative to sub union neighborhood."""
    cached = getattr(neighborhood, "_home_pair", None)
    if cached is not None:
        return cached
    home = model.quotient.with_sub(
        set(model.quotient.sub) | set(neighborhood.simplices)
    )
    object.__setattr__(neighborhood, "_home_pair", home)
    return home


@dataclass
class SquaredClass:
    cls: HomologyClass
    model: SymSquarePair
    neighborhood: DiagonalNeighborhood
    subdivisions: int


def sym_square_class(
    alpha: HomologyClass,
    neighborhood: Optional[DiagonalNeighborhood] = None,
    rings: int = DEFAULT_RINGS,
    max_subdivisions: int = SUBDIVISION_CAP,
) -> SquaredClass:
    """Square a degree-k class to a degree-2k class on (X, A)^s_U.

    With an explicit neighborhood the representative must satisfy the
    smallness condition on that model.  Otherwise the representative is
    subdivided (rebuilding the model at matching level) until it is small
    for the default ring neighborhood and the neighborhood leaves room for
    nontrivial relative classes; models where the neighborhood can never be
    proper (e.g. a point) fall back to the last level.
    """
    pair = alpha.home
    k = alpha.degree

    if neighborhood is not None:
        model = neighborhood.model
        if model.source != pair:
            raise ValueError("neighborhood model was built from a different pair")
        rep = list(alpha.simplices)
        cur = pair
        for _ in range(model.level):
            rep = subdivided_chain(cur, rep)
            cur, _ = barycentric_subdivision(cur)
        if not check_smallness(rep, neighborhood):
            raise SmallnessError(
                "representative is not small for the given neighborhood "
                f"(explicit neighborhoods are not subdivided; cap {max_subdivisions})"
            )
        return _finish(alpha, rep, model, neighborhood)

    rep = list(alpha.simplices)
    cur = pair
    fallback = None
    for level in range(max_subdivisions + 1):
        model = sym_square_space(pair, level)
        nbhd = diagonal_neighborhood(model, rings)
        if check_smallness(rep, nbhd):
            if nbhd.is_proper():
                return _finish(alpha, rep, model, nbhd)
            fallback = (list(rep), model, nbhd)
        rep = subdivided_chain(cur, rep)
        cur, _ = barycentric_subdivision(cur)
    if fallback is not None:
        rep, model, nbhd = fallback
        return _finish(alpha, rep, model, nbhd)
    raise SmallnessError(
        f"no small representative within {max_subdivisions} barycentric subdivisions"
    )


def _finish(
    alpha: HomologyClass,
    rep: Sequence[Simplex],
    model: SymSquarePair,
    neighborhood: DiagonalNeighborhood,
) -> SquaredClass:
    chain = squared_chain(rep, model)
    home = sym_pair_with(model, neighborhood)
    chain = frozenset(chain) - home.sub
    for f in boundary_of_chain(home, chain):
        if f not in home.sub:
            raise AssertionError(
                f"squared chain fails to be a relative cycle at {f}"
            )
    cls = HomologyClass(2 * alpha.degree, chain, home)
    return SquaredClass(cls, model, neighborhood, model.level)


# -- induced maps on symmetric squares ----------------------------------------


@dataclass
class SymSquareMap:
    """The map (X, A)^s -> (Y, B)^s induced by a simplicial map."""

    source_model: SymSquarePair
    target_model: SymSquarePair
    vertex_image: List[int]

    def image_simplex(self, s: Simplex) -> Simplex:
        return tuple(sorted(set(self.vertex_image[v] for v in s)))

    def push(self, chain) -> FrozenSet[Simplex]:
        acc: set = set()
        for s in chain:
            img = self.image_simplex(tuple(sorted(s)))
            if len(img) == len(s):
                acc ^= {img}
        return frozenset(acc)

    def as_simplicial_map(self) -> SimplicialMap:
        return SimplicialMap(
            self.source_model.quotient,
            self.target_model.quotient,
            self.vertex_image,
        )


def induced_sym_map(f: SimplicialMap, level: int = 0) -> SymSquareMap:
    """Model of f^s at a common subdivision level of source and target."""
    mx = sym_square_space(f.source, level)
    my = sym_square_space(f.target, level)

    g = f
    src, tgt = f.source, f.target
    for _ in range(level):
        src_orig = src.all_simplices()
        tgt_orig = tgt.all_simplices()
        sd_src, _ = barycentric_subdivision(src)
        sd_tgt, _ = barycentric_subdivision(tgt)
        g = subdivided_map(g, sd_src, sd_tgt, src_orig, tgt_orig)
        src, tgt = sd_src, sd_tgt

    def image_cell(c: Cell) -> Cell:
        return (g.image_simplex(c[0]), g.image_simplex(c[1]))

    def image_key(key: tuple) -> tuple:
        out: List[Cell] = []
        for c in key:
            ic = image_cell(c)
            if not out or out[-1] != ic:
                out.append(ic)
        chain = tuple(out)
        swapped = tuple(_swap_cell(c) for c in chain)
        return min(chain, swapped)

    vertex_image = []
    for key in mx.vertex_key:
        ik = image_key(key)
        vertex_image.append(my.key_to_vid[ik])
    return SymSquareMap(mx, my, vertex_image)


# -- subpair embedding ---------------------------------------------------------


def sym_subpair(model: SymSquarePair, target: SimplicialPair) -> SimplicialPair:
    """(Y, B)^s realized inside the model of (X, A)^s, for Y a subcomplex of X.

    Returns the quotient subcomplex of simplices carried by cells of Y x Y,
    with subcomplex the diagonal plus the B x Y and Y x B parts.  The
    subcomplex is tracked through the model's subdivision levels in the
    model's own vertex numbering.
    """
    cur = model.source
    y_set = set(target.all_simplices())
    b_set = set(target.sub)
    for _ in range(model.level):
        originals = cur.all_simplices()
        sd, _ = barycentric_subdivision(cur)
        y_set = {
            s for s in sd.all_simplices() if all(originals[v] in y_set for v in s)
        }
        b_set = {
            s for s in sd.all_simplices() if all(originals[v] in b_set for v in s)
        }
        cur = sd
    simplices = []
    sub = []
    for s in model.quotient.all_simplices():
        a, b = model.carrier[s]
        if a in y_set and b in y_set:
            simplices.append(s)
            if s in model.diag or a in b_set or b in b_set:
                sub.append(s)
    return build_pair(model.quotient.n_vertices, sorted(simplices), sorted(sub))
