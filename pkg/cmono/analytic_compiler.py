#
# (c) 2026, pyCMono contributors
#
# Created: 06.10.2026
# Updated: 17.10.2026
#
# License: Apache 2.0
#
import ast
import builtins
import logging
import types

from sympy import QQ

from . import analytic_ast
from . import analytic_parser
from . import analytic_template
from . import series
from .errors import BranchCutHit, TransformInapplicable


LOGGER = logging.getLogger(__name__)


class Compiler(ast.NodeVisitor):
    """
    Generates the Python source of an evaluator for an analytic map.  The generated function takes a complex
    (mpmath) value `z`, and computes the map with the branch-checked functions of `analytic_template`.
    """

    def __init__(self, name: str = 'evaluate'):
        self.name = name

    def create_function(self, node):
        body = self.visit(node)
        return f"def {self.name}(z):\n" \
               f"\treturn {body}\n"

    def generic_visit(self, node):
        raise SystemError(f"unexpected node in analytic map: '{ast.dump(node)}'")

    def visit_Variable(self, node: analytic_ast.Variable):
        return node.name

    def visit_Number(self, node: analytic_ast.Number):
        return f"_num({int(QQ.numer(node.value))}, {int(QQ.denom(node.value))})"

    def visit_ImaginaryUnit(self, node: analytic_ast.ImaginaryUnit):
        return "I"

    def visit_BinaryOp(self, node: analytic_ast.BinaryOp):
        return f"({self.visit(node.left)} {node.op} {self.visit(node.right)})"

    def visit_Negate(self, node: analytic_ast.Negate):
        return f"(-{self.visit(node.operand)})"

    def visit_Power(self, node: analytic_ast.Power):
        return f"({self.visit(node.base)} ** {node.exponent})"

    def visit_Call(self, node: analytic_ast.Call):
        return f"_{node.func}({self.visit(node.arg)})"


class SeriesBuilder(ast.NodeVisitor):
    """
    Expands an analytic map as an exact Laurent series in `1/z` at infinity.  The square root expands around its
    leading term, and `log1` around 1; `log2` has its cut through the expansion point and is rejected.
    """

    def __init__(self, prec: int):
        self.prec = prec

    def generic_visit(self, node):
        raise SystemError(f"unexpected node in analytic map: '{ast.dump(node)}'")

    def visit_Variable(self, node: analytic_ast.Variable):
        return series.identity(self.prec)

    def visit_Number(self, node: analytic_ast.Number):
        return series.Series.constant(node.value, self.prec)

    def visit_ImaginaryUnit(self, node: analytic_ast.ImaginaryUnit):
        raise TransformInapplicable("maps involving the imaginary unit have no real series at infinity")

    def visit_BinaryOp(self, node: analytic_ast.BinaryOp):
        left = self.visit(node.left)
        right = self.visit(node.right)
        if node.op == '+':
            return left + right
        elif node.op == '-':
            return left - right
        elif node.op == '*':
            return left * right
        else:
            return left / right

    def visit_Negate(self, node: analytic_ast.Negate):
        return -self.visit(node.operand)

    def visit_Power(self, node: analytic_ast.Power):
        return self.visit(node.base) ** node.exponent

    def visit_Call(self, node: analytic_ast.Call):
        arg = self.visit(node.arg)
        if node.func == 'sqrt':
            return arg.sqrt()
        elif node.func == 'log1':
            return arg.log()
        raise BranchCutHit("log_[2] cannot be expanded at infinity: its cut runs through the expansion point")


class AnalyticMap(object):
    """
    A closed-form map of the upper half-plane, given as an expression text in `z` together with exact parameter
    values.  Calling the map evaluates it at a complex point with the branch conventions of `analytic_template`;
    `series(order)` expands it exactly at infinity.
    ```
    h = AnalyticMap("(1-1/t)*z + (1/t)*sqrt(z**2 - 2*t*s)", t=2, s=1)
    h(1j)
    ```
    """

    def __init__(self, text: str, **params):
        self.text = text
        self.params = params
        self.node = analytic_parser.AnalyticParser(text, params).parse()
        self._function = None

    _fields = ('text', 'params')

    def __repr__(self):
        if len(self.params) > 0:
            args = ', '.join(f"{key}={value}" for key, value in sorted(self.params.items()))
            return f"AnalyticMap({self.text!r}, {args})"
        return f"AnalyticMap({self.text!r})"

    def get_code(self):
        return Compiler().create_function(self.node)

    def _compile(self):
        if self._function is None:
            code = self.get_code()
            LOGGER.debug("compiled %s to:\n%s", self, code)
            mod = types.ModuleType('__analytic__')
            mod.__dict__.update({key: value for key, value in analytic_template.__dict__.items()
                                 if not key.startswith('__')})
            exec(builtins.compile(code, '__analytic__', 'exec'), mod.__dict__)
            self._function = mod.evaluate
        return self._function

    def __call__(self, z):
        return self._compile()(analytic_template.mpmath.mpc(z))

    def series(self, order: int):
        """The series of the map at infinity, with precision enough for `order` moments of `1/H`."""
        return SeriesBuilder(order + 2).visit(self.node)
