"""Block coherence, POVM-based coherence and their conversion into entanglement."""

from .coherence import (
    CoherenceReport,
    block_coherence,
    is_povm_incoherent,
    povm_coherence,
    povm_coherence_via_naimark,
)
from .convert import (
    ConversionResult,
    build_entangling_unitary,
    convert,
    negativity,
    rel_ent_entanglement_converted,
    theorem1_check,
)
from .measure import (
    POVM,
    DensityMatrix,
    ProjectiveMeasurement,
    block_dephase,
    measurement_operators,
    projective_part,
    validate_povm,
    validate_projective,
)
from .naimark import (
    Ancilla,
    DirectSum,
    KrausBlock,
    NaimarkExtension,
    canonical_extension,
    embed_state,
    extract_povm_family,
    fourier_family_extension,
    minimal_rank_one_extension,
    verify_extension,
)

__version__ = "0.1.0"
