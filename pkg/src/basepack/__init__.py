"""Matroid base-packing toolkit.

Independence oracles over finite ground sets, the standard matroid
constructions and combinators, polynomial intersection/partition
algorithms, a certified two-matroid reduction gadget, the chain of
reductions between not-all-equal SAT, spanning-tree packing, even
factors, 2-factors with cycle lengths divisible by 4, and common-base
packing, plus desk-scale exact solvers, certificate verifiers, and an
oracle-query adversary experiment.
"""

from .core import (
    AxiomCheck,
    AxiomReport,
    ElementSet,
    GroundSet,
    Matroid,
    QueryLog,
    ResourceCapExceeded,
    UniverseMismatch,
    check_basis_axioms,
    check_independence_axioms,
    enumerate_bases,
    is_basis,
    is_independent,
    rank,
    with_query_log,
)
from .constructions import (
    HyperplaneFamily,
    PartitionOfGroundSet,
    direct_sum,
    direct_sum_all,
    dual,
    free_matroid,
    graphic_matroid,
    linear_matroid,
    matroid_from_descriptor,
    parallel_copies,
    partition_matroid,
    paving_matroid,
    relabel,
    transversal_linear_representation,
    transversal_matroid,
    truncate,
    uniform_matroid,
)
from .graphs import BipartiteGraph, Digraph, MultiGraph
from .instances import (
    CnfFormula,
    CommonBasesInstance,
    ModularInstance,
    ModularTreesInstance,
    ParityInstance,
)
from .intersection import (
    common_bases_necessary_check,
    max_common_independent,
    partition_into_independent,
)
from .gadget import (
    DEFAULT_LABELING,
    BlockLabeling,
    GadgetPair,
    build_gadget,
    default_gadget,
    search_block_labeling,
    verify_gadget,
)
from .solvers import (
    solve_common_bases,
    solve_mod4_two_factor,
    solve_modular_bases,
    solve_modular_trees,
    solve_naesat,
    solve_parity_bases,
    solve_perfect_even_factor,
    verify_certificate,
)
from .adversary import (
    AdversaryPair,
    build_adversary,
    count_parity_hiding_sets,
    run_indistinguishability,
)

__version__ = "0.1.0"
