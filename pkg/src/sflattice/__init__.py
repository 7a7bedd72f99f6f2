"""Executable combinatorics of the lattice of subgroups of SF(ω).

Submodules:

* :mod:`~sflattice.perm`: finitary permutations and the canonical enumeration
* :mod:`~sflattice.groups`: lazily described subgroups, membership, local parts
* :mod:`~sflattice.partitions`: eventually periodic partitions and their groups
* :mod:`~sflattice.lattice`: orthogonality, almost containment, families, metric
* :mod:`~sflattice.constructions`: the constructive lemmas as searches
* :mod:`~sflattice.forcing`: the posets ``P_r``, ``P_a`` and a generic-filter engine
* :mod:`~sflattice.cli`: command line and scenario runner
"""

from .errors import (
    BudgetExceeded,
    DuplicatePoint,
    JoinNotFinitelyDescribable,
    LFError,
    NoSparePoint,
    NotFoundInWindow,
    ParseError,
    StepMismatch,
)
from .perm import (
    IDENTITY,
    FinPerm,
    compose,
    cycle_decomposition,
    inverse,
    iter_sf,
    make_k_cycle,
    sf_at,
    sf_index,
    transposition,
)
from .indexset import IndexSet
from .partitions import (
    PartitionDesc,
    almost_coarser,
    coarsen_by_perm,
    extract_transposition,
    group_is_finite,
    join,
    meet,
    partition_group,
    refines,
)
from .groups import (
    DisjointFamily,
    ExtendedBy,
    FinitelyGenerated,
    GroupDesc,
    PartitionGroup,
    WindowConfig,
    generated_over,
    group_from_json,
    gstar,
    gstar_subgroup,
    local_part,
    membership,
    trace_set,
    transport_maps,
    trivial_group,
)
from .lattice import (
    Verdict,
    almost_contained,
    almost_contained_verify,
    almost_witness_search,
    family_check,
    metric_d,
    orthogonal,
    shattering_from_splitting,
    splits,
)
from .constructions import (
    ChainPrefix,
    EnumeratedFamily,
    anti_reaping_pair,
    avoid_support,
    avoid_support_constrained,
    build_rho,
    orthogonal_diagonal,
    pseudo_intersection,
    rho_k_cycles,
)
from .forcing import (
    DenseOracle,
    FilterChain,
    PaCondition,
    PrCondition,
    extract_group,
    extract_pair,
    pa_leq,
    pr_leq,
    rasiowa_sikorski,
)
from .serialize import dumps, export, import_

__version__ = "0.1.0"

import types as _types

__all__ = [name for name, value in list(globals().items())
           if not name.startswith("_") and not isinstance(value, _types.ModuleType)]
