"""Enumeration operators, Turing functionals and effectivized functors on finite stages."""
from .coding import cantor_pair, cantor_unpair, dual, join, project, tuple_decode, tuple_encode
from .diagrams import (
    ATOMIC,
    POSITIVE,
    CESchedule,
    Enumeration,
    RelationalLanguage,
    StructurePresentation,
    atomic_diagram,
    decode_diagram,
    encode_diagram,
    positive_diagram,
    pullback,
    quotient_by_equality,
    spread_relations,
)
from .errors import *  # noqa: F401,F403
from .functors import (
    EffectivizedFunctor,
    IsoWitness,
    apply_morphism,
    apply_object,
    check_effective_isomorphism,
    check_functor_laws,
    check_pseudo_inverse,
    identity_functor,
    identity_witness,
)
from .machines import (
    EnumAxiom,
    EnumOperator,
    QueryAxiom,
    RuleOperator,
    TotalOracle,
    TuringFunctional,
    apply_enum_operator,
    apply_turing_functional,
)
from .opformat import format_operator, parse_operator
from .transforms import enum_to_star, enum_to_turing_diagram, star_to_enum, turing_to_enum_diagram

__version__ = "0.1.0"
