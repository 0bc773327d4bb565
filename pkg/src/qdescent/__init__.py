"""qdescent: decides whether a number field is a field of definition up to
isogeny of a quaternionic building block, from its cohomological invariants."""

from .qarith import (
    AbsSquareClass,
    INFINITY,
    Place,
    PolyquadraticField,
    QQ,
    QuaternionClass,
    QuaternionSymbol,
    SquareClass,
    TRIVIAL_CLASS,
    embeds_as_maximal_subfield,
    field_is_local_point,
    hilbert_symbol,
    is_local_square,
    ramification_set,
    splits_over,
    squarefree_reduce,
)

__all__ = [
    "AbsSquareClass",
    "INFINITY",
    "Place",
    "PolyquadraticField",
    "QQ",
    "QuaternionClass",
    "QuaternionSymbol",
    "SquareClass",
    "TRIVIAL_CLASS",
    "embeds_as_maximal_subfield",
    "field_is_local_point",
    "hilbert_symbol",
    "is_local_square",
    "ramification_set",
    "splits_over",
    "squarefree_reduce",
]
