"""Exact test-ideal computations over prime fields via the Frobenius-trace
operator, finite Kummer covers with field trace, and a Newton-polyhedron
multiplier oracle for cross-checks."""

from .polyring import (
    ExponentOverflowError,
    ParseError,
    Polynomial,
    PrimeField,
    Ring,
    RingMismatchError,
    ceil_scale,
    emit_polynomial,
    parse_polynomial,
    parse_rational,
)
from .groebner import (
    Ideal,
    MonomialOrder,
    SPairCapExceeded,
    buchberger,
    ideal_contains,
    ideal_equal,
    ideal_sum,
    normal_form,
)
from .frobenius import (
    CartierMap,
    FrobeniusDecomposition,
    cartier_apply,
    compose,
    decompose,
    span_check,
)
from .testideal import (
    AmbientRing,
    NotStabilizedError,
    PrincipalPair,
    TauResult,
    cross_checked_tau,
    fpt_search,
    nu_value,
    polynomial_ambient,
    quotient_ambient,
    tau,
    tau_polynomial,
    tau_quotient,
)
from .multoracle import (
    NewtonData,
    compare_tau_multiplier,
    howald_multiplier,
)
from .covers import (
    CoverElement,
    FractionalIdealData,
    KummerCover,
    UnsupportedCoverError,
    field_trace,
    pullback_pair,
    ramification_divisor,
    root_cover_presentation,
    trace_image,
    verify_containment_tau_in_image,
    verify_multiplier_transform,
    verify_tau_transform,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
