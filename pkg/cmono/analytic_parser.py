#
# (c) 2026, pyCMono contributors
#
# Created: 05.10.2026
# Updated: 12.10.2026
#
# License: Apache 2.0
#
import ast
from . import analytic_ast
from .errors import AnalyticSyntaxError
from .measures import to_rational


_BIN_OPS = {
    ast.Add: '+',
    ast.Sub: '-',
    ast.Mult: '*',
    ast.Div: '/',
}


def _fold(op: str, a, b):
    if op == '+':
        return a + b
    elif op == '-':
        return a - b
    elif op == '*':
        return a * b
    elif b == 0:
        raise ZeroDivisionError()
    else:
        return a / b


class AnalyticParser(ast.NodeTransformer):
    """
    Transforms the Python AST of an expression in `z` into an analytic-map AST.  Parameters are substituted by their
    exact rational values while parsing, and constant sub-expressions are folded.

    The accepted language is small on purpose: the variable `z`, the names of the given parameters, the imaginary
    unit `I`, integer and rational constants, `+ - * /`, integer powers `**`, and the functions `sqrt`, `log1`, and
    `log2`.  Anything else is an `AnalyticSyntaxError`.
    """

    def __init__(self, source_text: str, params: dict = None):
        self.source_text = source_text
        self.params = {key: to_rational(value) for key, value in (params or {}).items()}

    def parse(self, node=None):
        if node is None:
            node = self.source_text
        if type(node) is str:
            try:
                node = ast.parse(node.strip(), mode='eval')
            except SyntaxError as e:
                raise AnalyticSyntaxError(e.msg, self.source_text, e.offset)
        return self.visit(node)

    def _syntax_error(self, msg: str, node: ast.AST):
        if hasattr(node, 'col_offset'):
            return AnalyticSyntaxError(msg, self.source_text, node.col_offset + 1)
        else:
            return AnalyticSyntaxError(msg)

    def generic_visit(self, node):
        raise self._syntax_error(f"unsupported syntax in analytic map: {type(node).__name__}", node)

    def visit_Expression(self, node: ast.Expression):
        return self.visit(node.body)

    def visit_Constant(self, node: ast.Constant):
        if type(node.value) is int:
            return analytic_ast.Number(to_rational(node.value))
        raise self._syntax_error(f"only integer constants are allowed, not {node.value!r}", node)

    def visit_Name(self, node: ast.Name):
        if node.id == 'z':
            return analytic_ast.Variable('z')
        elif node.id == 'I':
            return analytic_ast.ImaginaryUnit()
        elif node.id in self.params:
            return analytic_ast.Number(self.params[node.id])
        raise self._syntax_error(f"unknown name '{node.id}'", node)

    def visit_UnaryOp(self, node: ast.UnaryOp):
        operand = self.visit(node.operand)
        if isinstance(node.op, ast.UAdd):
            return operand
        elif isinstance(node.op, ast.USub):
            if isinstance(operand, analytic_ast.Number):
                return analytic_ast.Number(-operand.value)
            return analytic_ast.Negate(operand)
        raise self._syntax_error("unsupported unary operator", node)

    def visit_BinOp(self, node: ast.BinOp):
        if isinstance(node.op, ast.Pow):
            exponent = self.visit(node.right)
            if not isinstance(exponent, analytic_ast.Number) or exponent.value != int(exponent.value):
                raise self._syntax_error("exponents must be integer constants", node.right)
            base = self.visit(node.left)
            n = int(exponent.value)
            if isinstance(base, analytic_ast.Number):
                if base.value == 0 and n < 0:
                    raise self._syntax_error("division by zero", node)
                return analytic_ast.Number(base.value ** n)
            return analytic_ast.Power(base, n)

        op = _BIN_OPS.get(type(node.op))
        if op is None:
            raise self._syntax_error("unsupported binary operator", node)
        left = self.visit(node.left)
        right = self.visit(node.right)
        if isinstance(left, analytic_ast.Number) and isinstance(right, analytic_ast.Number):
            try:
                return analytic_ast.Number(_fold(op, left.value, right.value))
            except ZeroDivisionError:
                raise self._syntax_error("division by zero", node)
        return analytic_ast.BinaryOp(op, left, right)

    def visit_Call(self, node: ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in analytic_ast.FUNCTIONS:
            raise self._syntax_error(f"unknown function; use one of {', '.join(analytic_ast.FUNCTIONS)}", node)
        if len(node.args) != 1 or len(node.keywords) > 0:
            raise self._syntax_error(f"'{node.func.id}' takes exactly one argument", node)
        return analytic_ast.Call(node.func.id, self.visit(node.args[0]))
