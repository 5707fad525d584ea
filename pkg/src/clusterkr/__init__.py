"""Exact cluster-algebra engine.

Quiver mutation, maximal green sequences, c/g-vectors and F-polynomials,
Kirillov-Reshetikhin q-characters through two independent mutation routes,
and cluster Donaldson-Thomas transformations -- all in exact arbitrary-
precision arithmetic, with every headline result cross-checkable by at
least two computation paths.
"""

from .errors import EngineFault, NonExactDivision, UsageError
from .laurent import LaurentFraction, LaurentPoly
from .quiver import (
    DynkinType,
    Quiver,
    VertexId,
    coframe,
    coxeter_number,
    dynkin_quiver,
    frame,
    hl_truncation,
    line_quiver,
    mutate_quiver,
    triangular_product,
)
from .seed import (
    Seed,
    TropicalData,
    YSeed,
    apply_sequence,
    mutate_seed,
    p_map,
    separation_reconstruct,
    tropical_data,
    vertex_color,
    y_mutate,
)
from .greenseq import (
    MutationSequence,
    SequenceReport,
    bps_charges,
    check_level_property,
    classify_sequence,
    hl_sequence_An,
    sink_sequence_An,
    source_mgs,
    source_sink_sequence,
)
from .krchar import (
    IntervalCollection,
    KRDescriptor,
    QCharacter,
    c_collection,
    combined_sequence,
    general_position,
    hl_sweep_character,
    mgs_character,
    nested_sequence,
    qstring_general_position,
    sl2_closed_form,
    to_t_variables,
)
from .dt import (
    DTMap,
    double_bruhat_dt,
    dt_closed_form_A,
    dt_transform,
    dt_via_qcharacters,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
