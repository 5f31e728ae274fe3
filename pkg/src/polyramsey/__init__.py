"""Polychromatic Ramsey computations on finite colorings of pairs."""

from .coloring import (
    DualColoring,
    ImplicitColoring,
    PairColoring,
    SubsetStatus,
    Verdict,
    bound_of,
    classify_subset,
    galvin_dual,
    is_normal,
    is_polychromatic,
    k_bounded_decompose,
)
from .errors import (
    BoundOverflowError,
    InternalInvariantError,
    MalformedInputError,
    PolyRamseyError,
    PreconditionError,
    SearchCapError,
    WindowUnsatisfiableError,
)
from .extraction import (
    BoundTables,
    ExtractionCertificate,
    bound_tables,
    ext,
    extend_normal,
    extend_polychromatic,
    extender_set,
    g_value,
    lim,
    nrm,
    pigeonhole_check,
    rainbow_extract,
    replay_certificate,
    rich_refine,
)
from .search import (
    EdgePartition,
    SearchResult,
    max_monochromatic,
    max_polychromatic,
    rainbow_number,
    ramsey_witness,
    weak_selecter,
)

__version__ = "0.1.0"
