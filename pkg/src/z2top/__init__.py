"""z2top: mod-2 simplicial topology with symmetric squaring and antipodal
solution-set certification on sampled families."""

__version__ = "0.1.0"

from .gf2 import Z2Matrix, Z2Vector
from .simplicial import (
    SimplicialMap,
    SimplicialPair,
    build_pair,
    barycentric_subdivision,
    circle_pair,
    interval_pair,
    mobius_pair,
    octahedron_pair,
    point_pair,
    projective_plane6_pair,
    torus7_pair,
)
from .homology import (
    HomologyClass,
    boundary_matrix,
    chain_class,
    connecting_map,
    fundamental_class,
    homology,
    induced_map,
    is_h_essential,
    restrict,
)
from .symsq import (
    DiagonalNeighborhood,
    SymSquarePair,
    check_smallness,
    diagonal_neighborhood,
    induced_sym_map,
    product_triangulation,
    sym_square_class,
    sym_square_space,
)
from .bu import (
    SampledFamily,
    SolutionSet,
    antipodal_difference,
    solve_bu,
    spanning_check,
)
from .chords import (
    ChordScene,
    build_spherical,
    chord_solutions,
    chord_span_check,
    ray_hits,
)
from .corrlab import (
    ConvexVertexSet,
    FiniteCorrespondence,
    convexify,
    gamma_close,
    gamma_far,
    preimage,
    saturate,
    spanning_empirical,
)
