"""Mod-2 relative homology of simplicial pairs and the operators built on it:
induced maps, connecting maps, fundamental classes, essentiality of maps onto
manifold pairs, and the restriction of classes to admissible subpairs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional

from .gf2 import Z2Matrix, Z2Vector, column_space_basis
from .simplicial import (
    Simplex,
    SimplicialMap,
    SimplicialPair,
    faces,
)


class ManifoldConditionError(ValueError):
    pass


class AdmissibilityError(ValueError):
    pass


@dataclass(frozen=True)
class HomologyClass:
    """A degree, a representative chain (set of simplices), and its home pair.

    The representative avoids the subcomplex and its boundary is supported
    on the subcomplex (a relative cycle).
    """

    degree: int
    simplices: frozenset
    home: SimplicialPair

    def __post_init__(self):
        for s in self.simplices:
            if not self.home.has_simplex(s) or len(s) != self.degree + 1:
                raise ValueError(f"representative simplex {s} not a {self.degree}-simplex of the pair")

    def is_zero(self) -> bool:
        """True when the representative chain is empty (class may still be
        zero in homology without this being true)."""
        return not self.simplices

    def vector(self) -> Z2Vector:
        """Coordinates over the relative simplices of the home pair."""
        rel = self.home.relative_simplices(self.degree)
        pos = {s: i for i, s in enumerate(rel)}
        return Z2Vector.from_support(len(rel), [pos[s] for s in self.simplices])

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        if other.home != self.home or other.degree != self.degree:
            raise ValueError("classes live on different pairs")
        return HomologyClass(self.degree, self.simplices ^ other.simplices, self.home)


def class_from_vector(pair: SimplicialPair, k: int, v: Z2Vector) -> HomologyClass:
    rel = pair.relative_simplices(k)
    return HomologyClass(k, frozenset(rel[i] for i in v.support()), pair)


def chain_class(pair: SimplicialPair, k: int, simplices) -> HomologyClass:
    """Build a class from explicit simplices, dropping any in the subcomplex."""
    canon = frozenset(tuple(sorted(s)) for s in simplices) - pair.sub
    return HomologyClass(k, canon, pair)


def boundary_matrix(pair: SimplicialPair, k: int) -> Z2Matrix:
    """Matrix of the k-th boundary operator on relative chains.

    Rows are the relative (k-1)-simplices, columns the relative k-simplices;
    faces inside the subcomplex are dropped.  Out-of-range degrees give empty
    matrices of the correct shape.
    """
    rows = pair.relative_simplices(k - 1)
    cols = pair.relative_simplices(k)
    row_pos = {s: i for i, s in enumerate(rows)}
    m = Z2Matrix(len(rows), len(cols))
    for j, s in enumerate(cols):
        for f in faces(s):
            i = row_pos.get(f)
            if i is not None:
                m.set(i, j, 1)
    return m


def boundary_of_chain(pair: SimplicialPair, simplices) -> frozenset:
    """Mod-2 boundary support of a chain given by simplex tuples (absolute)."""
    acc = set()
    for s in simplices:
        for f in faces(tuple(sorted(s))):
            acc ^= {f}
    return frozenset(acc)


def is_relative_cycle(pair: SimplicialPair, simplices) -> bool:
    return all(f in pair.sub for f in boundary_of_chain(pair, simplices))


@dataclass
class HomologyBasis:
    rank: int
    representatives: List[HomologyClass]
    # internal: cycle space data used to express classes in this basis
    pair: SimplicialPair
    degree: int
    _coord_matrix: Z2Matrix  # columns: [boundary basis | homology reps]
    _n_boundary: int

    def coordinates(self, cls: HomologyClass) -> Optional[Z2Vector]:
        """Coordinates of a relative cycle in this homology basis, or None
        if the chain is not a cycle of this pair."""
        if cls.home != self.pair or cls.degree != self.degree:
            raise ValueError("class does not live on this pair/degree")
        target = cls.vector()
        sol = self._coord_matrix.solve(target)
        if sol is None:
            return None
        coords = Z2Vector(self.rank)
        for i in sol.support():
            if i >= self._n_boundary:
                coords.flip(i - self._n_boundary)
        return coords

    def class_from_coordinates(self, coords: Z2Vector) -> HomologyClass:
        acc = frozenset()
        for i in coords.support():
            acc = acc ^ self.representatives[i].simplices
        return HomologyClass(self.degree, acc, self.pair)


def homology(pair: SimplicialPair, k: int) -> HomologyBasis:
    """Rank and representative relative cycles of H_k(X, A; Z/2).

    Representatives come from the deterministic kernel basis of the k-th
    boundary matrix, reduced against the image of the (k+1)-st.
    """
    d_k = boundary_matrix(pair, k)
    d_k1 = boundary_matrix(pair, k + 1)
    kernel = d_k.nullspace()
    image = column_space_basis(d_k1)
    n = len(pair.relative_simplices(k))

    stacked = Z2Matrix.from_columns(image + kernel, n)
    _, pivots = stacked.rref()
    reps: List[HomologyClass] = []
    chosen: List[Z2Vector] = []
    for c in pivots:
        if c >= len(image):
            v = kernel[c - len(image)]
            chosen.append(v)
            reps.append(class_from_vector(pair, k, v))
    coord = Z2Matrix.from_columns(image + chosen, n)
    return HomologyBasis(
        rank=len(reps),
        representatives=reps,
        pair=pair,
        degree=k,
        _coord_matrix=coord,
        _n_boundary=len(image),
    )


def euler_characteristic_relative(pair: SimplicialPair) -> int:
    chi = 0
    for k in range(pair.dim + 1):
        chi += (-1) ** k * len(pair.relative_simplices(k))
    return chi


def chain_map_matrix(f: SimplicialMap, k: int) -> Z2Matrix:
    """Matrix of the induced chain map on relative k-chains.

    Degenerate images and images inside the target subcomplex push to zero.
    """
    src = f.source.relative_simplices(k)
    tgt = f.target.relative_simplices(k)
    tgt_pos = {s: i for i, s in enumerate(tgt)}
    m = Z2Matrix(len(tgt), len(src))
    for j, s in enumerate(src):
        img = f.image_simplex(s)
        if len(img) != len(s):
            continue
        i = tgt_pos.get(img)
        if i is not None:
            m.set(i, j, 1)
    return m


def push_chain(f: SimplicialMap, simplices) -> frozenset:
    """Mod-2 pushforward of a chain (set of simplices); degenerate images drop."""
    acc = set()
    for s in simplices:
        img = f.image_simplex(tuple(sorted(s)))
        if len(img) == len(s):
            acc ^= {img}
    return frozenset(acc)


def induced_map(
    f: SimplicialMap,
    k: int,
    source_basis: Optional[HomologyBasis] = None,
    target_basis: Optional[HomologyBasis] = None,
) -> Z2Matrix:
    """Matrix of f_*: H_k(source) -> H_k(target) in the chosen bases."""
    if source_basis is None:
        source_basis = homology(f.source, k)
    if target_basis is None:
        target_basis = homology(f.target, k)
    out = Z2Matrix(target_basis.rank, source_basis.rank)
    for j, rep in enumerate(source_basis.representatives):
        pushed = push_chain(f, rep.simplices) - f.target.sub
        coords = target_basis.coordinates(HomologyClass(k, pushed, f.target))
        if coords is None:
            raise ValueError("pushforward of a cycle failed to be a cycle; map invalid")
        for i in coords.support():
            out.set(i, j, 1)
    return out


def connecting_map(
    pair: SimplicialPair,
    k: int,
    rel_basis: Optional[HomologyBasis] = None,
    sub_basis: Optional[HomologyBasis] = None,
) -> Z2Matrix:
    """Matrix of the connecting homomorphism H_k(X, A) -> H_{k-1}(A)."""
    if rel_basis is None:
        rel_basis = homology(pair, k)
    sub_abs = pair.sub_pair()
    if sub_basis is None:
        sub_basis = homology(sub_abs, k - 1)
    out = Z2Matrix(sub_basis.rank, rel_basis.rank)
    for j, rep in enumerate(rel_basis.representatives):
        bd = boundary_of_chain(pair, rep.simplices)
        coords = sub_basis.coordinates(HomologyClass(k - 1, bd, sub_abs))
        if coords is None:
            raise ValueError("boundary of a relative cycle not a cycle of the subcomplex")
        for i in coords.support():
            out.set(i, j, 1)
    return out


def fundamental_class(pair: SimplicialPair) -> HomologyClass:
    """Sum of all top simplices outside the subcomplex, for weak manifolds.

    Requires every (m-1)-simplex outside the subcomplex to be a face of
    exactly two relative m-simplices; raises naming the offending simplex
    otherwise.
    """
    m = pair.top_dim()
    if m < 0:
        raise ManifoldConditionError("complex has no simplices outside the subcomplex")
    top = pair.relative_simplices(m)
    count: Dict[Simplex, int] = {}
    for t in top:
        for f in faces(t):
            if f not in pair.sub:
                count[f] = count.get(f, 0) + 1
    for f in pair.relative_simplices(m - 1) if m >= 1 else []:
        c = count.get(f, 0)
        if c != 2:
            raise ManifoldConditionError(
                f"interior {m - 1}-simplex {f} lies in {c} top simplices (need 2)"
            )
    cls = HomologyClass(m, frozenset(top), pair)
    if not is_relative_cycle(pair, cls.simplices):
        raise ManifoldConditionError("sum of top simplices is not a relative cycle")
    return cls


@dataclass
class EssentialityReport:
    essential: bool
    degree: int
    witness: Optional[HomologyClass]
    reason: str
    induced: Z2Matrix


def is_h_essential(f: SimplicialMap, d: Optional[int] = None) -> EssentialityReport:
    """Does f induce a surjection onto H_d(target)?

    The check runs in degree d (default: top dimension of the target).  When
    the target is a manifold pair, an essential map returns a witness class
    mapping to the target's fundamental class.
    """
    target_dim = f.target.top_dim()
    if d is None:
        d = target_dim
    elif d != target_dim:
        warnings.warn(
            f"essentiality checked in degree {d}, but the target has top dimension {target_dim}",
            stacklevel=2,
        )
    for s in f.source.all_simplices():
        img = f.image_simplex(s)
        if (img in f.target.sub) != (s in f.source.sub):
            raise ValueError(
                f"source subcomplex is not the preimage of the target subcomplex at {s}"
            )

    tgt_basis = homology(f.target, d)
    src_basis = homology(f.source, d)
    mat = induced_map(f, d, src_basis, tgt_basis)
    essential = mat.rank() == tgt_basis.rank

    witness = None
    reason = "induced map surjective" if essential else "induced map not surjective"
    if essential and tgt_basis.rank > 0:
        try:
            fund = fundamental_class(f.target)
            target_coords = tgt_basis.coordinates(fund) if fund.degree == d else None
        except ManifoldConditionError:
            fund, target_coords = None, None
        if target_coords is not None:
            sol = mat.solve(target_coords)
            if sol is not None:
                witness = src_basis.class_from_coordinates(sol)
                reason = "witness maps to the fundamental class"
    return EssentialityReport(essential, d, witness, reason, mat)


# -- restriction -------------------------------------------------------------


def check_admissible(
    pair: SimplicialPair, target: SimplicialPair
) -> List[Simplex]:
    """Combinatorial admissibility of (Y, B) for (X, A).

    Y must be a subcomplex of X with B = Y's subcomplex, and the simplex set
    D = Y \\ B must be closed upward in X (every coface of a member is a
    member) with its minimal members outside A: then |D| is a union of open
    stars and is relatively open.  Returns D; raises AdmissibilityError
    naming the violating simplex.
    """
    for s in target.all_simplices():
        if not pair.has_simplex(s):
            raise AdmissibilityError(f"target simplex {s} not in the ambient complex")
    target_set = set(target.all_simplices())
    D = [s for s in target.all_simplices() if s not in target.sub]
    D_set = set(D)
    for k in range(pair.dim + 1):
        for s in pair.simplices_of_dim(k):
            if s in D_set:
                continue
            # up-closure: any face of s in D forces s in D
            for d in D:
                if set(d) <= set(s):
                    raise AdmissibilityError(
                        f"simplex {s} contains {d} from the target interior but is outside it"
                    )
    minimal = [
        d for d in D if not any(set(e) < set(d) for e in D_set if e != d)
    ]
    for d in minimal:
        if d in pair.sub:
            raise AdmissibilityError(
                f"minimal interior simplex {d} lies in the ambient subcomplex"
            )
    return D


def restrict(cls: HomologyClass, target: SimplicialPair) -> HomologyClass:
    """Restriction of a class on (X, A) to an admissible subpair (Y, B).

    Realized at chain level: keep exactly the representative simplices lying
    in Y outside B (the excision-inverse image of the representative).
    """
    pair = cls.home
    check_admissible(pair, target)
    target_set = set(target.all_simplices())
    kept = frozenset(
        s for s in cls.simplices if s in target_set and s not in target.sub
    )
    out = HomologyClass(cls.degree, kept, target)
    if not is_relative_cycle(target, kept):
        raise AdmissibilityError("restricted chain is not a relative cycle; subpair invalid")
    return out


def is_zero_class(cls: HomologyClass) -> bool:
    """Decide triviality of a relative cycle in H(home)."""
    basis = homology(cls.home, cls.degree)
    coords = basis.coordinates(cls)
    if coords is None:
        raise ValueError("chain is not a relative cycle")
    return coords.is_zero()


def classes_equal(a: HomologyClass, b: HomologyClass) -> bool:
    if a.home != b.home or a.degree != b.degree:
        return False
    if a.simplices == b.simplices:
        return True
    return is_zero_class(HomologyClass(a.degree, a.simplices ^ b.simplices, a.home))
