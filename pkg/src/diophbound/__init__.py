"""Exact tools for linear Diophantine systems ``A x = b, x >= 0``.

If such a system has a nonnegative integer solution, it has one with
every coordinate at most ``d``, the largest absolute m x m minor of
``(A b)``.  This package computes ``d``, finds such a solution and checks
the claim and its companions against brute force.
"""

from .diophantine import (
    DEFAULT_CAP,
    BoundTooLargeError,
    DiophantineSystem,
    InfeasibleError,
    KernelRepresentation,
    NotInCosetError,
    SaturationResult,
    SolutionCertificate,
    find_bounded_solution,
    from_ambient,
    gcd_maximal_minors,
    is_bounded_m,
    is_feasible,
    kernel_representation,
    minor_bound,
    saturate,
    to_ambient,
)
from .exact_linalg import (
    DimensionError,
    HnfResult,
    IntMatrix,
    SnfResult,
    determinant,
    hermite_normal_form,
    kernel_lattice_basis,
    maximal_minors,
    rank,
    smith_normal_form,
    solve_linear_integer,
)
from .verify import (
    CampaignReport,
    GenParams,
    TheoremReport,
    brute_force_box_search,
    check_lemma,
    check_theorem,
    check_vertex_remark,
    fuzz_campaign,
    random_feasible_instance,
)

__version__ = "0.1.0"
