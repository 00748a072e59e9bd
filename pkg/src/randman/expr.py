"""Safe evaluation of small arithmetic expressions over numpy arrays.

Used by the JSON inputs, e.g. ``"1/(1+abs(z)**2)"``.  Only literals, the
variables passed in, ``+ - * / **``, unary minus and a fixed set of
functions are accepted; anything else is rejected before evaluation.
"""
from __future__ import annotations

import ast

import numpy as np

from .measure import ValidationError

__all__ = ["compile_expression"]

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "conj": np.conj,
    "re": np.real,
    "im": np.imag,
    "bump": lambda r: _bump(r),
}
CONSTANTS = {"pi": np.pi, "e": np.e, "i": 1j, "j": 1j}

_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
    ast.Pow: np.power,
}


def _bump(r):
    from .chernweil import bump

    return bump(np.real(r))


def compile_expression(text: str, variables: tuple[str, ...], path: str = "expression"):
    """Return ``f(**arrays)`` evaluating ``text``; raises ValidationError on bad syntax."""
    if not isinstance(text, str):
        raise ValidationError(path, f"expected an expression string, got {text!r}")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ValidationError(path, f"syntax error in {text!r}: {exc.msg}") from None
    _check(tree.body, set(variables), path, text)

    def evaluate(**env):
        return _eval(tree.body, env)

    evaluate.source = text
    return evaluate


def _check(node, variables, path, text):
    if isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float, complex)) or isinstance(node.value, bool):
            raise ValidationError(path, f"unsupported literal {node.value!r} in {text!r}")
    elif isinstance(node, ast.Name):
        if node.id not in variables and node.id not in CONSTANTS:
            raise ValidationError(path, f"unknown name {node.id!r} in {text!r}")
    elif isinstance(node, ast.BinOp):
        if type(node.op) not in _BINOPS:
            raise ValidationError(path, f"unsupported operator in {text!r}")
        _check(node.left, variables, path, text)
        _check(node.right, variables, path, text)
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        _check(node.operand, variables, path, text)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS or node.keywords:
            raise ValidationError(path, f"unsupported call in {text!r}")
        for arg in node.args:
            _check(arg, variables, path, text)
    else:
        raise ValidationError(path, f"unsupported syntax {type(node).__name__} in {text!r}")


def _eval(node, env):
    if isinstance(node, ast.Constant):
        return node.value
    if isinstance(node, ast.Name):
        return env[node.id] if node.id in env else CONSTANTS[node.id]
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    return FUNCTIONS[node.func.id](*(_eval(a, env) for a in node.args))
