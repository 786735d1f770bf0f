"""Mod-ell cohomology of Bianchi groups SL2(O_K), with Hecke action and weight reduction.

The public surface is re-exported here; see the submodules for details:

- ``quad_arith``: integers of Q(sqrt(-d)), split primes, 2x2 matrices over O_K
- ``group_data``: presentations of SL2(O_K), word problem, congruence subgroups, coset tables
- ``rep_modules``: the modules E, I, U, V, W, characters and induced modules over F_ell
- ``cohomology``: H^0 and H^1 through Fox calculus, Reidemeister-Schreier, Shapiro transport
- ``hecke``: Hecke operators, eigensystems, twist matching and the weight-reduction check
- ``verify``: the structural verification suites
"""

__version__ = "0.1.0"

from .quad_arith import (  # noqa: E402
    FieldData,
    Mat2,
    QuadInt,
    SplitPrime,
    canonical_associate,
    enumerate_primes,
    format_quadint,
    make_field,
    parse_quadint,
    split_prime,
)
from .group_data import (  # noqa: E402
    CongruenceSubgroup,
    GroupPresentation,
    builtin_presentation,
    coset_table,
    parse_level,
    word_decompose,
)
from .rep_modules import (  # noqa: E402
    E_weight,
    FpRepModule,
    build_E,
    build_I,
    build_induced,
    build_sequence,
    parse_weight,
)
from .cohomology import CohomologySpace, h0, h1, reidemeister_schreier  # noqa: E402
from .hecke import (  # noqa: E402
    EigenSystem,
    compute_space,
    eigensystems,
    hecke_matrix,
    hecke_primes,
    hecke_reps,
    match_up_to_twist,
    weight_reduction_check,
)

__all__ = [
    "CohomologySpace",
    "CongruenceSubgroup",
    "E_weight",
    "EigenSystem",
    "FieldData",
    "FpRepModule",
    "GroupPresentation",
    "Mat2",
    "QuadInt",
    "SplitPrime",
    "build_E",
    "build_I",
    "build_induced",
    "build_sequence",
    "builtin_presentation",
    "canonical_associate",
    "compute_space",
    "coset_table",
    "eigensystems",
    "enumerate_primes",
    "format_quadint",
    "h0",
    "h1",
    "hecke_matrix",
    "hecke_primes",
    "hecke_reps",
    "make_field",
    "match_up_to_twist",
    "parse_level",
    "parse_quadint",
    "parse_weight",
    "reidemeister_schreier",
    "split_prime",
    "weight_reduction_check",
    "word_decompose",
]
