#
# (c) 2026, pyCMono contributors
#
# Created: 05.10.2026
# Updated: 11.10.2026
#
# License: Apache 2.0
#
"""
The nodes of a closed-form analytic map such as `(1-1/t)*z + (1/t)*sqrt(z**2 - 2*t*s)`.  The parser builds these
from Python's own AST; the compiler turns them into evaluators and exact series.
"""
import ast


class Variable(ast.expr):

    def __init__(self, name: str):
        super().__init__()
        self.name = name

    _fields = ('name',)


class Number(ast.expr):
    """An exact rational constant (an element of `QQ`)."""

    def __init__(self, value):
        super().__init__()
        self.value = value

    _fields = ('value',)


class ImaginaryUnit(ast.expr):

    _fields = ()


class BinaryOp(ast.expr):

    def __init__(self, op: str, left: ast.expr, right: ast.expr):
        super().__init__()
        self.op = op        # one of '+', '-', '*', '/'
        self.left = left
        self.right = right

    _fields = ('op', 'left', 'right')


class Negate(ast.expr):

    def __init__(self, operand: ast.expr):
        super().__init__()
        self.operand = operand

    _fields = ('operand',)


class Power(ast.expr):

    def __init__(self, base: ast.expr, exponent: int):
        super().__init__()
        self.base = base
        self.exponent = exponent

    _fields = ('base', 'exponent')


class Call(ast.expr):
    """
    One of the branch-specific functions: `sqrt` (meaning `exp(1/2 log_[2])`), `log1` (arg in `(-pi, pi)`), or
    `log2` (arg in `(0, 2 pi)`).
    """

    def __init__(self, func: str, arg: ast.expr):
        super().__init__()
        self.func = func
        self.arg = arg

    _fields = ('func', 'arg')


FUNCTIONS = ('sqrt', 'log1', 'log2')
