"""Closed-form expression grammar for custom ladder-operator profiles.

Custom profiles are written as strings over a small fixed grammar: the variable
`x`, decimal numbers, `+ - * / ^ **`, parentheses and the functions `cosh`,
`sinh`, `tanh`, `exp` and `ln`. Strings are screened token by token before they
reach sympy, so nothing outside the grammar is ever evaluated.
"""

import re
from collections.abc import Callable
from functools import lru_cache
from tokenize import TokenError

import numpy as np
import numpy.typing as npt
import sympy as sp
from sympy.core.function import AppliedUndef
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from src.domain.exceptions import ExpressionError

X = sp.Symbol("x", real=True)

ALLOWED_FUNCTIONS: dict[str, sp.FunctionClass] = {
    "cosh": sp.cosh,
    "sinh": sp.sinh,
    "tanh": sp.tanh,
    "exp": sp.exp,
    "ln": sp.log,
}

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
                    r"|(?P<name>[A-Za-z_]\w*)|(?P<op>\*\*|[-+*/^()]))")
_MAX_LENGTH = 512

ScalarFunction = Callable[[npt.ArrayLike], npt.NDArray[np.float64]]


def _screen(text: str) -> None:
    if not text.strip():
        error_message = "Empty profile expression."
        raise ExpressionError(error_message)
    if len(text) > _MAX_LENGTH:
        error_message = f"Profile expression longer than {_MAX_LENGTH} characters."
        raise ExpressionError(error_message)
    position = 0
    stripped = text.rstrip()
    while position < len(stripped):
        match = _TOKEN.match(stripped, position)
        if match is None or match.end() == position:
            error_message = f"Unexpected character {stripped[position]!r} in {text!r}."
            raise ExpressionError(error_message)
        name = match.group("name")
        if name is not None and name != "x" and name not in ALLOWED_FUNCTIONS:
            error_message = (
                f"Unknown name {name!r} in {text!r}; allowed: x, "
                + ", ".join(sorted(ALLOWED_FUNCTIONS))
            )
            raise ExpressionError(error_message)
        position = match.end()


@lru_cache(maxsize=128)
def parse_profile_expression(text: str) -> sp.Expr:
    """Parse a profile expression string into a sympy expression in `x`.

    Args:
        text (str): The expression, e.g. ``"cosh(2*x)"`` or ``"0.5*x^2 + 1"``.

    Raises:
        ExpressionError: If the text uses anything outside the grammar.

    Returns:
        sp.Expr: The parsed expression.
    """
    _screen(text)
    local_dict: dict[str, object] = {"x": X, **ALLOWED_FUNCTIONS}
    global_dict: dict[str, object] = {
        "Integer": sp.Integer,
        "Float": sp.Float,
        "Rational": sp.Rational,
        "Symbol": sp.Symbol,
        "Function": sp.Function,
    }
    try:
        expr = parse_expr(
            text,
            local_dict=local_dict,
            global_dict=global_dict,
            transformations=(*standard_transformations, convert_xor),
        )
    except (
        SyntaxError,
        TokenError,
        TypeError,
        ValueError,
        NameError,
        AttributeError,
    ) as error:
        error_message = f"Cannot parse profile expression {text!r}: {error}"
        raise ExpressionError(error_message) from error

    if not isinstance(expr, sp.Expr) or expr.atoms(AppliedUndef):
        error_message = f"Profile expression {text!r} is not a closed form in x."
        raise ExpressionError(error_message)
    if expr.free_symbols - {X}:
        error_message = f"Profile expression {text!r} depends on symbols other than x."
        raise ExpressionError(error_message)
    if expr.has(sp.I, sp.zoo, sp.nan, sp.oo):
        error_message = f"Profile expression {text!r} is not real and finite."
        raise ExpressionError(error_message)
    return expr


def derivatives(expr: sp.Expr, order: int) -> list[sp.Expr]:
    """Symbolic derivatives of `expr` with respect to `x`, from order 0 to `order`."""
    result = [expr]
    for _ in range(order):
        result.append(sp.diff(result[-1], X))
    return result


def compile_expression(expr: sp.Expr) -> ScalarFunction:
    """Turn a sympy expression in `x` into a vectorized numpy evaluator.

    Constant expressions are broadcast to the shape of the input, so every
    evaluator behaves like a ufunc.

    Args:
        expr (sp.Expr): Expression in the module symbol `x`.

    Returns:
        ScalarFunction: Callable accepting a float or an array.
    """
    function = sp.lambdify(X, expr, modules="numpy")

    def evaluate(x: npt.ArrayLike) -> npt.NDArray[np.float64]:
        values = np.asarray(x, dtype=np.float64)
        return function(values) + 0.0 * values

    return evaluate
