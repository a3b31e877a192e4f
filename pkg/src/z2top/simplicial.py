"""Finite simplicial pairs and simplicial maps.

A pair (X, A) is stored as a canonical list of simplices (strictly
increasing vertex tuples, graded by dimension, lexicographically ordered
within each dimension) plus a face-closed subcomplex A.  Everything is
immutable after construction; operations that look like mutation return
new objects.
"""

from __future__ import annotations

import itertools
import json
from typing import Dict, Iterable, List, Sequence, Tuple

Simplex = Tuple[int, ...]


def faces(s: Simplex) -> List[Simplex]:
    """Codimension-1 faces of a simplex (empty for vertices)."""
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1 :] for i in range(len(s))]


def all_subfaces(s: Simplex) -> List[Simplex]:
    """Every nonempty face of s, s included."""
    out = []
    n = len(s)
    for mask in range(1, 1 << n):
        out.append(tuple(s[i] for i in range(n) if mask & (1 << i)))
    return out


class InvalidComplexError(ValueError):
    pass


class SimplicialPair:
    """A finite simplicial complex with a distinguished subcomplex."""

    __slots__ = ("n_vertices", "simplices", "sub", "_index", "_hash")

    def __init__(
        self,
        n_vertices: int,
        simplices: Tuple[Tuple[Simplex, ...], ...],
        sub: frozenset,
    ):
        self.n_vertices = n_vertices
        self.simplices = simplices  # simplices[k] = sorted tuple of k-simplices
        self.sub = sub
        self._index: Dict[Simplex, int] = {}
        for grade in simplices:
            for i, s in enumerate(grade):
                self._index[s] = i
        self._hash = None

    # -- basic queries --------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def simplices_of_dim(self, k: int) -> Tuple[Simplex, ...]:
        if 0 <= k <= self.dim:
            return self.simplices[k]
        return ()

    def all_simplices(self) -> List[Simplex]:
        return [s for grade in self.simplices for s in grade]

    def has_simplex(self, s: Simplex) -> bool:
        return s in self._index

    def index_of(self, s: Simplex) -> int:
        """Position of s within its dimension grade."""
        return self._index[s]

    def in_sub(self, s: Simplex) -> bool:
        return s in self.sub

    def relative_simplices(self, k: int) -> List[Simplex]:
        return [s for s in self.simplices_of_dim(k) if s not in self.sub]

    def top_dim(self) -> int:
        """Largest dimension carrying a simplex outside the subcomplex."""
        for k in range(self.dim, -1, -1):
            if any(s not in self.sub for s in self.simplices[k]):
                return k
        return -1

    def sub_pair(self) -> "SimplicialPair":
        """The subcomplex A as an absolute pair (A, empty)."""
        grades: List[List[Simplex]] = []
        for grade in self.simplices:
            picked = [s for s in grade if s in self.sub]
            grades.append(picked)
        while grades and not grades[-1]:
            grades.pop()
        return SimplicialPair(
            self.n_vertices,
            tuple(tuple(g) for g in grades),
            frozenset(),
        )

    def absolute(self) -> "SimplicialPair":
        """Same complex with empty subcomplex."""
        return SimplicialPair(self.n_vertices, self.simplices, frozenset())

    def with_sub(self, sub_simplices: Iterable[Simplex]) -> "SimplicialPair":
        """Same complex with a different (face-closed) subcomplex."""
        closure = set()
        for s in sub_simplices:
            for f in all_subfaces(tuple(sorted(s))):
                closure.add(f)
        for s in closure:
            if s not in self._index:
                raise InvalidComplexError(f"sub simplex {s} not in complex")
        return SimplicialPair(self.n_vertices, self.simplices, frozenset(closure))

    # -- identity --------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimplicialPair)
            and self.n_vertices == other.n_vertices
            and self.simplices == other.simplices
            and self.sub == other.sub
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n_vertices, self.simplices, self.sub))
        return self._hash

    def __repr__(self):
        counts = [len(g) for g in self.simplices]
        return f"SimplicialPair(vertices={self.n_vertices}, counts={counts}, sub={len(self.sub)})"

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        flat = self.all_simplices()
        pos = {s: i for i, s in enumerate(flat)}
        return {
            "vertices": self.n_vertices,
            "simplices": [list(s) for s in flat],
            "sub": sorted(pos[s] for s in self.sub),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SimplicialPair":
        simplices = [tuple(s) for s in doc["simplices"]]
        sub = [simplices[i] for i in doc.get("sub", [])]
        return build_pair(doc["vertices"], simplices, sub)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def build_pair(
    n_vertices: int,
    simplices: Iterable[Sequence[int]],
    sub: Iterable[Sequence[int]] = (),
) -> SimplicialPair:
    """Canonicalize raw simplex lists into a SimplicialPair.

    Vertex tuples are sorted, the face closure is completed, and simplices
    are ordered lexicographically within each dimension.  Duplicate input
    simplices (after canonicalization) and sub entries missing from the
    complex are rejected.
    """
    seen = set()
    canon: List[Simplex] = []
    for raw in simplices:
        s = tuple(sorted(int(v) for v in raw))
        if len(set(s)) != len(s):
            raise InvalidComplexError(f"simplex {tuple(raw)} has repeated vertices")
        if any(v < 0 or v >= n_vertices for v in s):
            raise InvalidComplexError(f"simplex {s} has vertex outside range 0..{n_vertices - 1}")
        if s in seen:
            raise InvalidComplexError(f"duplicate simplex {s}")
        seen.add(s)
        canon.append(s)

    closure = set()
    for s in canon:
        for f in all_subfaces(s):
            closure.add(f)

    sub_closure = set()
    for raw in sub:
        s = tuple(sorted(int(v) for v in raw))
        if s not in closure:
            raise InvalidComplexError(f"sub simplex {s} not contained in complex")
        for f in all_subfaces(s):
            sub_closure.add(f)

    if not closure:
        return SimplicialPair(n_vertices, (), frozenset())
    top = max(len(s) for s in closure) - 1
    grades = tuple(
        tuple(sorted(s for s in closure if len(s) == k + 1)) for k in range(top + 1)
    )
    return SimplicialPair(n_vertices, grades, frozenset(sub_closure))


class InvalidMapError(ValueError):
    pass


class SimplicialMap:
    """A vertex assignment inducing a map of pairs (X, A) -> (Y, B)."""

    __slots__ = ("source", "target", "vertex_map")

    def __init__(
        self,
        source: SimplicialPair,
        target: SimplicialPair,
        vertex_map: Sequence[int],
    ):
        if len(vertex_map) != source.n_vertices:
            raise InvalidMapError("vertex_map length must equal source vertex count")
        self.source = source
        self.target = target
        self.vertex_map = tuple(int(v) for v in vertex_map)
        self._validate()

    def _validate(self):
        for s in self.source.all_simplices():
            img = self.image_simplex(s)
            if not self.target.has_simplex(img):
                raise InvalidMapError(f"image of {s} is {img}, not a simplex of the target")
            if s in self.source.sub and img not in self.target.sub:
                raise InvalidMapError(f"simplex {s} in sub maps to {img} outside target sub")

    def image_simplex(self, s: Simplex) -> Simplex:
        """Vertex-set image (dimension may drop)."""
        return tuple(sorted(set(self.vertex_map[v] for v in s)))

    def is_degenerate_on(self, s: Simplex) -> bool:
        return len(self.image_simplex(s)) < len(s)

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """self after other (other first)."""
        if other.target is not self.source and other.target != self.source:
            raise InvalidMapError("composition mismatch")
        vm = [self.vertex_map[other.vertex_map[v]] for v in range(other.source.n_vertices)]
        return SimplicialMap(other.source, self.target, vm)

    @classmethod
    def identity(cls, pair: SimplicialPair) -> "SimplicialMap":
        return cls(pair, pair, list(range(pair.n_vertices)))

    def __repr__(self):
        return f"SimplicialMap({self.source!r} -> {self.target!r})"


# -- barycentric subdivision ---------------------------------------------


def barycentric_subdivision(pair: SimplicialPair) -> Tuple[SimplicialPair, Dict[Simplex, Simplex]]:
    """One barycentric subdivision.

    New vertices are the simplices of the input (ordered by dimension then
    lexicographically); new k-simplices are strict chains s_0 < ... < s_k
    in the face order.  Returns the subdivided pair together with the map
    from new vertex id to the original simplex it is the barycenter of,
    encoded as {(v,): original simplex}; carriers of higher simplices are
    the top element of the chain.
    """
    originals = pair.all_simplices()
    vid = {s: i for i, s in enumerate(originals)}

    chains: List[Tuple[int, ...]] = []

    def proper_faces(s: Simplex) -> List[Simplex]:
        return [f for f in all_subfaces(s) if f != s]

    # chains ending at s, built by dimension
    ending: Dict[Simplex, List[Tuple[int, ...]]] = {}
    for s in originals:
        mine = [(vid[s],)]
        for f in proper_faces(s):
            for ch in ending[f]:
                mine.append(ch + (vid[s],))
        ending[s] = mine
        chains.extend(mine)

    sub_chains = []
    for s in pair.sub:
        for ch in ending[s]:
            sub_chains.append(ch)

    sd = build_pair(len(originals), chains, sub_chains)
    barycenter_of = {(vid[s],): s for s in originals}
    return sd, barycenter_of


def subdivided_chain(
    pair: SimplicialPair, chain: Iterable[Simplex]
) -> List[Simplex]:
    """Image of a k-chain under barycentric subdivision (k! pieces each)."""
    originals = pair.all_simplices()
    vid = {s: i for i, s in enumerate(originals)}
    out: List[Simplex] = []
    for s in chain:
        k = len(s)
        # maximal chains within s: permutations give flags of faces
        for perm in itertools.permutations(s):
            flag = []
            for i in range(1, k + 1):
                flag.append(vid[tuple(sorted(perm[:i]))])
            out.append(tuple(sorted(flag)))
    return out


def subdivided_map(
    f: SimplicialMap,
    sd_source: SimplicialPair,
    sd_target: SimplicialPair,
    source_originals: List[Simplex],
    target_originals: List[Simplex],
) -> SimplicialMap:
    """The subdivision of a simplicial map (barycenter -> barycenter of image)."""
    t_vid = {s: i for i, s in enumerate(target_originals)}
    vm = [t_vid[f.image_simplex(s)] for s in source_originals]
    return SimplicialMap(sd_source, sd_target, vm)


# -- stock models ---------------------------------------------------------


def circle_pair(n_edges: int = 3) -> SimplicialPair:
    """A simplicial circle with n_edges edges (n >= 3)."""
    edges = [(i, (i + 1) % n_edges) for i in range(n_edges)]
    return build_pair(n_edges, edges)


def interval_pair(n_edges: int = 2, rel_boundary: bool = True) -> SimplicialPair:
    """A subdivided interval; sub = both endpoints when rel_boundary."""
    edges = [(i, i + 1) for i in range(n_edges)]
    sub = [(0,), (n_edges,)] if rel_boundary else []
    return build_pair(n_edges + 1, edges, sub)


def point_pair() -> SimplicialPair:
    return build_pair(1, [(0,)])


def torus7_pair() -> SimplicialPair:
    """The 7-vertex triangulated torus (cyclic 2-neighborly triangulation)."""
    tris = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)]
    tris += [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
    return build_pair(7, tris)


def octahedron_pair() -> SimplicialPair:
    """The boundary of the octahedron: a 6-vertex 2-sphere."""
    # vertices: 0/1 = +-x, 2/3 = +-y, 4/5 = +-z
    tris = []
    for x in (0, 1):
        for y in (2, 3):
            for z in (4, 5):
                tris.append(tuple(sorted((x, y, z))))
    return build_pair(6, tris)


def projective_plane6_pair() -> SimplicialPair:
    """The 6-vertex projective plane (antipodal icosahedron quotient)."""
    tris = [
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
        (1, 2, 4), (2, 4, 5), (2, 3, 5), (1, 3, 5), (1, 3, 4),
    ]
    return build_pair(6, tris)


def mobius_pair(rel_boundary: bool = True) -> SimplicialPair:
    """The 5-vertex Moebius band; sub = boundary circle when rel_boundary."""
    tris = [(0, 1, 2), (1, 2, 3), (2, 3, 4), (0, 3, 4), (0, 1, 4)]
    p = build_pair(5, tris)
    if not rel_boundary:
        return p
    # boundary edges: those contained in exactly one triangle
    edge_count: Dict[Simplex, int] = {}
    for t in p.simplices_of_dim(2):
        for e in faces(t):
            edge_count[e] = edge_count.get(e, 0) + 1
    boundary = [e for e, c in edge_count.items() if c == 1]
    return p.with_sub(boundary)


def disjoint_union(a: SimplicialPair, b: SimplicialPair) -> SimplicialPair:
    """Disjoint union, b's vertices shifted past a's."""
    off = a.n_vertices
    simplices = [s for s in a.all_simplices()]
    simplices += [tuple(v + off for v in s) for s in b.all_simplices()]
    sub = [s for s in a.sub] + [tuple(v + off for v in s) for s in b.sub]
    return build_pair(a.n_vertices + b.n_vertices, simplices, sub)
