"""Symbolic math interfaces, solution metrics and a deliberation engine."""

from ._core import (
    Corpus,
    Expr,
    GatewayError,
    MathError,
    SchemaError,
    cas,
    evaluate,
    exp_acc,
    extract,
    fail_where,
    interfaces,
    invoke,
    is_equiv,
    parse,
    solve,
    validate_graph,
)

__all__ = [
    "Corpus",
    "Expr",
    "GatewayError",
    "MathError",
    "SchemaError",
    "cas",
    "evaluate",
    "exp_acc",
    "extract",
    "fail_where",
    "interfaces",
    "invoke",
    "is_equiv",
    "parse",
    "solve",
    "validate_graph",
]
