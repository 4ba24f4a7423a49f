"""Abstract syntax tree of one-variable attack functions, with exact
evaluation and symbolic differentiation."""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass

import numpy as np

from accsim.exception import EvaluationException


class Expr(metaclass=abc.ABCMeta):
    """Base class for expression tree nodes. Nodes are immutable and compare
    structurally."""

    @abc.abstractmethod
    def evaluate(self, x: float) -> float:
        """Evaluate the expression at a single point."""
        pass  # pragma: no cover

    @abc.abstractmethod
    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        """Evaluate the expression elementwise over an array. Poles and
        overflows show up as non-finite entries instead of exceptions."""
        pass  # pragma: no cover

    @abc.abstractmethod
    def derivative(self) -> Expr:
        """Return the unsimplified derivative with respect to the variable."""
        pass  # pragma: no cover

    @property
    @abc.abstractmethod
    def children(self) -> tuple[Expr, ...]:
        pass  # pragma: no cover

    @property
    def depth(self) -> int:
        # iterative, long operator chains can exceed the recursion limit
        deepest = 0
        stack = [(self, 1)]
        while stack:
            node, level = stack.pop()
            deepest = max(deepest, level)
            stack.extend((child, level + 1) for child in node.children)
        return deepest


@dataclass(frozen=True)
class Constant(Expr):
    value: float

    def evaluate(self, x: float) -> float:
        return self.value

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        return np.full(np.shape(xs), self.value, dtype=float)

    def derivative(self) -> Expr:
        return ZERO

    @property
    def children(self) -> tuple[Expr, ...]:
        return ()

    def __str__(self) -> str:
        if math.copysign(1.0, self.value) < 0:
            return f"(-{-self.value!r})"
        return repr(self.value)


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def evaluate(self, x: float) -> float:
        return x

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        return np.array(xs, dtype=float)

    def derivative(self) -> Expr:
        return ONE

    @property
    def children(self) -> tuple[Expr, ...]:
        return ()

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr

    def evaluate(self, x: float) -> float:
        return -self.operand.evaluate(x)

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        return -self.operand.evaluate_many(xs)

    def derivative(self) -> Expr:
        return Neg(self.operand.derivative())

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.operand,)

    def __str__(self) -> str:
        return f"(-{self.operand})"


@dataclass(frozen=True)
class BinaryOp(Expr):
    left: Expr
    right: Expr

    symbol = None

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.left, self.right)

    def __str__(self) -> str:
        return f"({self.left} {self.symbol} {self.right})"


@dataclass(frozen=True)
class Add(BinaryOp):
    symbol = "+"

    def evaluate(self, x: float) -> float:
        return self.left.evaluate(x) + self.right.evaluate(x)

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        return self.left.evaluate_many(xs) + self.right.evaluate_many(xs)

    def derivative(self) -> Expr:
        return Add(self.left.derivative(), self.right.derivative())


@dataclass(frozen=True)
class Sub(BinaryOp):
    symbol = "-"

    def evaluate(self, x: float) -> float:
        return self.left.evaluate(x) - self.right.evaluate(x)

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        return self.left.evaluate_many(xs) - self.right.evaluate_many(xs)

    def derivative(self) -> Expr:
        return Sub(self.left.derivative(), self.right.derivative())


@dataclass(frozen=True)
class Mul(BinaryOp):
    symbol = "*"

    def evaluate(self, x: float) -> float:
        return self.left.evaluate(x) * self.right.evaluate(x)

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        return self.left.evaluate_many(xs) * self.right.evaluate_many(xs)

    def derivative(self) -> Expr:
        return Add(
            Mul(self.left.derivative(), self.right),
            Mul(self.left, self.right.derivative()),
        )


@dataclass(frozen=True)
class Div(BinaryOp):
    symbol = "/"

    def evaluate(self, x: float) -> float:
        denominator = self.right.evaluate(x)
        if denominator == 0.0:
            raise EvaluationException(f"division by zero in '{self}'", point=x)
        return self.left.evaluate(x) / denominator

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        return self.left.evaluate_many(xs) / self.right.evaluate_many(xs)

    def derivative(self) -> Expr:
        return Div(
            Sub(
                Mul(self.left.derivative(), self.right),
                Mul(self.left, self.right.derivative()),
            ),
            Pow(self.right, 2),
        )


@dataclass(frozen=True)
class Sin(Expr):
    operand: Expr

    def evaluate(self, x: float) -> float:
        return math.sin(self.operand.evaluate(x))

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        return np.sin(self.operand.evaluate_many(xs))

    def derivative(self) -> Expr:
        return Mul(Cos(self.operand), self.operand.derivative())

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.operand,)

    def __str__(self) -> str:
        return f"sin({self.operand})"


@dataclass(frozen=True)
class Cos(Expr):
    operand: Expr

    def evaluate(self, x: float) -> float:
        return math.cos(self.operand.evaluate(x))

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        return np.cos(self.operand.evaluate_many(xs))

    def derivative(self) -> Expr:
        return Neg(Mul(Sin(self.operand), self.operand.derivative()))

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.operand,)

    def __str__(self) -> str:
        return f"cos({self.operand})"


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def evaluate(self, x: float) -> float:
        base = self.base.evaluate(x)
        if base == 0.0 and self.exponent < 0:
            raise EvaluationException(f"division by zero in '{self}'", point=x)
        try:
            return base**self.exponent
        except OverflowError:
            raise EvaluationException(f"overflow in '{self}'", point=x)

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        return np.power(self.base.evaluate_many(xs), float(self.exponent))

    def derivative(self) -> Expr:
        return Mul(
            Mul(Constant(float(self.exponent)), Pow(self.base, self.exponent - 1)),
            self.base.derivative(),
        )

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.base,)

    def __str__(self) -> str:
        return f"({self.base}^{self.exponent})"


ZERO = Constant(0.0)
ONE = Constant(1.0)


def _is_const(e: Expr, value: float | None = None) -> bool:
    return isinstance(e, Constant) and (value is None or e.value == value)


def _neg(a: Expr) -> Expr:
    if isinstance(a, Constant):
        return Constant(-a.value)
    if isinstance(a, Neg):
        return a.operand
    return Neg(a)


def _add(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Constant(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Constant(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return _neg(b)
    return Sub(a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Constant(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Mul(a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 1.0):
        return a
    if _is_const(a, 0.0) and not _is_const(b, 0.0):
        return ZERO
    if _is_const(a) and _is_const(b) and b.value != 0.0:
        return Constant(a.value / b.value)
    return Div(a, b)


def _pow(base: Expr, exponent: int) -> Expr:
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if _is_const(base) and (base.value != 0.0 or exponent > 0):
        try:
            return Constant(base.value**exponent)
        except OverflowError:
            pass
    return Pow(base, exponent)


def simplify(e: Expr) -> Expr:
    """Rebuild the tree bottom-up applying constant folding and the
    identities x*0, x*1, x+0, x-0, x/1, x^0, x^1 and --x."""

    if isinstance(e, (Constant, Var)):
        return e
    if isinstance(e, Neg):
        return _neg(simplify(e.operand))
    if isinstance(e, Add):
        return _add(simplify(e.left), simplify(e.right))
    if isinstance(e, Sub):
        return _sub(simplify(e.left), simplify(e.right))
    if isinstance(e, Mul):
        return _mul(simplify(e.left), simplify(e.right))
    if isinstance(e, Div):
        return _div(simplify(e.left), simplify(e.right))
    if isinstance(e, Pow):
        return _pow(simplify(e.base), e.exponent)
    operand = simplify(e.operand)
    if isinstance(operand, Constant) and math.isfinite(operand.value):
        return Constant(type(e)(operand).evaluate(0.0))
    return type(e)(operand)


def differentiate(e: Expr) -> Expr:
    """Return the exact derivative of the expression with respect to its
    variable, lightly simplified."""
    return simplify(e.derivative())


def evaluate(e: Expr, x: float) -> float:
    """Evaluate the expression at x. Division by zero and results that are
    not finite raise EvaluationException."""

    if not math.isfinite(x):
        raise EvaluationException(f"cannot evaluate '{e}' at non-finite {x}", x)
    try:
        value = e.evaluate(x)
    except (OverflowError, ValueError, ZeroDivisionError) as err:
        raise EvaluationException(f"evaluating '{e}' failed: {err}", point=x)
    if not math.isfinite(value):
        raise EvaluationException(f"'{e}' is not finite at {x!r}", point=x)
    return value
