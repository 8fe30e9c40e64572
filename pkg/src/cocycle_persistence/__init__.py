"""Level persistence for 0-cochains, circle-valued maps, and 1-cocycles."""

from .cells import (
    CellComplexView,
    ValueInterval,
    band_cell_complex,
    filtered_complex_view,
    full_complex_view,
    halfspace_cell_complex,
    level_cell_complex,
    prefix_view,
    sublevel_subcomplex_filtration,
    value_interval,
)
from .cochains import (
    AlmostIntegralCocycle,
    CircleMap,
    Cochain0,
    Cochain1,
    angles_from_values,
    check_almost_integral,
    check_generic,
    coboundary,
    cohomologous,
    validate_cocycle,
    vertex_angles,
)
from .complexes import (
    CellOrder,
    IncidenceMatrix,
    SimplicialComplex,
    build_complex,
    incidence_matrix,
    make_filtration_compatible,
    star,
    topological_order,
)
from .persistence import (
    CirclePersistenceResult,
    LevelPersistence,
    LevelRow,
    SGrid,
    StandardPersistence,
    circle_level_persistence,
    cocycle_persistence,
    level_persistence,
    mu_from_beta,
    standard_persistence,
)
from .reduction import (
    INF,
    PairTable,
    ReducedMatrix,
    TripleTable,
    betti_numbers,
    extract_pairs,
    persistence_pairs,
    reduce_matrix,
    relative_reduce,
    simultaneous_numbers,
)
from .unroll import (
    ThetaDecomposition,
    UnrolledComplex,
    max_copies_needed,
    theta_decompose,
    unroll,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
