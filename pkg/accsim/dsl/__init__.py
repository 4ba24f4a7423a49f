"""Attack function language: one-variable expressions with exact
derivatives."""

from accsim.dsl.expr import (  # noqa: F401
    Add,
    Constant,
    Cos,
    Div,
    Expr,
    Mul,
    Neg,
    Pow,
    Sin,
    Sub,
    Var,
    differentiate,
    evaluate,
    simplify,
)
from accsim.dsl.parser import parse  # noqa: F401
