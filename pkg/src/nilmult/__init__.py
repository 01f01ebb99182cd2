"""c-nilpotent multipliers of nilpotent products of cyclic groups."""

from .engine import (
    GroupContext,
    GroupElement,
    abelian_fingerprint,
    build_group,
    gamma_subgroup,
    parse_word,
    verify_multiplier,
)
from .errors import DomainError, NilmultError, PreconditionError, SizeError, UnsupportedError
from .hallbasis import (
    BasicCommutator,
    BasisTable,
    count_involving_last,
    enumerate_basis,
    occurring_generators,
    parse_commutator,
)
from .multiplier import (
    AbelianStructure,
    ProductSpec,
    Verdict,
    canonicalize,
    modulus_of,
    multiplier_closed_form,
    multiplier_general,
    multiplier_two_factor,
    validate_spec,
)
from .numtheory import chi_partial_sum, gcd_zero_aware, mobius, witt_chi

__version__ = "0.1.0"
