"""
System source parser.

Grammar (UTF-8 text, `#` starts a comment):

    variable_group x y;            # kind detected: homogeneous iff every polynomial is
    hom_variable_group x0 x1;      # forced homogeneous
    affine_variable_group u v;     # forced affine
    dimension 2;                   # optional declared dimension
    f = x^3 + y^3 - 3*x*y;

Expressions admit + - * / ^ (or **), parentheses, integer/rational/decimal
literals and `i` for the imaginary unit. Division is only by constants.
Coefficients are computed exactly (Gaussian rationals) and converted to
complex floating point at the end.
"""

import re
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

from multitrace.calculations.polynomial import PolySystem, Term, VarGroup
from multitrace.common.errors import InputError, ParseError

GROUP_KEYWORDS = {
    "variable_group": None,
    "hom_variable_group": True,
    "affine_variable_group": False,
}
RESERVED = {"i", "dimension", *GROUP_KEYWORDS}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^()=;,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "ident", "op", "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            msg = f"unexpected character {text[pos]!r}"
            raise ParseError(msg, line, pos - line_start + 1)
        kind = match.lastgroup or ""
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind in ("number", "ident", "op"):
            tokens.append(Token(kind, match.group(), line, pos - line_start + 1))
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# Exact Gaussian-rational polynomials, keyed by exponent tuples over declared variables

Coeff = tuple[Fraction, Fraction]
ExactPoly = dict[tuple[int, ...], Coeff]

_ZERO = Fraction(0)


def _cmul(a: Coeff, b: Coeff) -> Coeff:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _clean(p: ExactPoly) -> ExactPoly:
    return {k: c for k, c in p.items() if c[0] != 0 or c[1] != 0}


def _add(a: ExactPoly, b: ExactPoly, sign: int = 1) -> ExactPoly:
    out = dict(a)
    for k, c in b.items():
        re_, im_ = out.get(k, (_ZERO, _ZERO))
        out[k] = (re_ + sign * c[0], im_ + sign * c[1])
    return _clean(out)


def _mul(a: ExactPoly, b: ExactPoly) -> ExactPoly:
    out: ExactPoly = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb, strict=True))
            prod = _cmul(ca, cb)
            re_, im_ = out.get(k, (_ZERO, _ZERO))
            out[k] = (re_ + prod[0], im_ + prod[1])
    return _clean(out)


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.pos = 0
        self.group_decls: list[tuple[tuple[str, ...], bool | None]] = []
        self.variables: list[str] = []
        self.equations: list[tuple[str, ExactPoly]] = []
        self.declared_dim: int | None = None

    # Token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def expect_op(self, text: str) -> Token:
        if self.tok.kind != "op" or self.tok.text != text:
            found = self.tok.text or "end of input"
            msg = f"expected '{text}', found '{found}'"
            raise self.error(msg)
        return self.advance()

    # Statements

    def parse(self) -> PolySystem:
        while self.tok.kind != "eof":
            self.statement()
        if not self.group_decls:
            msg = "no variable_group declared"
            raise self.error(msg)
        if not self.equations:
            msg = "empty system: no polynomials"
            raise self.error(msg)
        return self.build()

    def statement(self) -> None:
        tok = self.tok
        if tok.kind != "ident":
            msg = f"expected a statement, found '{tok.text}'"
            raise self.error(msg)
        if tok.text in GROUP_KEYWORDS:
            self.advance()
            self.group(GROUP_KEYWORDS[tok.text], tok)
        elif tok.text == "dimension":
            self.advance()
            num = self.advance()
            if num.kind != "number" or not num.text.isdigit():
                msg = "dimension must be a nonnegative integer"
                raise self.error(msg, num)
            self.declared_dim = int(num.text)
            self.expect_op(";")
        else:
            self.equation()

    def group(self, homogeneous: bool | None, keyword: Token) -> None:
        if self.equations:
            msg = "variable groups must be declared before polynomials"
            raise self.error(msg, keyword)
        names: list[str] = []
        while not (self.tok.kind == "op" and self.tok.text == ";"):
            tok = self.advance()
            if tok.kind == "op" and tok.text == ",":
                continue
            if tok.kind != "ident":
                msg = f"expected a variable name, found '{tok.text or 'end of input'}'"
                raise self.error(msg, tok)
            if tok.text in RESERVED:
                msg = f"'{tok.text}' is reserved"
                raise self.error(msg, tok)
            if tok.text in self.variables or tok.text in names:
                msg = f"duplicate variable: {tok.text}"
                raise self.error(msg, tok)
            names.append(tok.text)
        self.advance()
        if not names:
            msg = "variable group declares no variables"
            raise self.error(msg, keyword)
        self.group_decls.append((tuple(names), homogeneous))
        self.variables.extend(names)

    def equation(self) -> None:
        name_tok = self.advance()
        if name_tok.text in RESERVED or name_tok.text in self.variables:
            msg = f"'{name_tok.text}' cannot name a polynomial"
            raise self.error(msg, name_tok)
        if not self.group_decls:
            msg = "polynomial defined before any variable_group"
            raise self.error(msg, name_tok)
        self.expect_op("=")
        poly = self.expression()
        self.expect_op(";")
        self.equations.append((name_tok.text, poly))

    # Expressions

    def expression(self) -> ExactPoly:
        result = self.product()
        while self.tok.kind == "op" and self.tok.text in "+-":
            sign = 1 if self.advance().text == "+" else -1
            result = _add(result, self.product(), sign)
        return result

    def product(self) -> ExactPoly:
        result = self.unary()
        while self.tok.kind == "op" and self.tok.text in ("*", "/"):
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                result = _mul(result, rhs)
                continue
            zero = (0,) * len(self.variables)
            if set(rhs) - {zero}:
                msg = "division is only allowed by constants"
                raise self.error(msg, op)
            if not rhs:
                msg = "division by zero"
                raise self.error(msg, op)
            re_, im_ = rhs[zero]
            norm = re_ * re_ + im_ * im_
            result = _mul(result, {zero: (re_ / norm, -im_ / norm)})
        return result

    def unary(self) -> ExactPoly:
        if self.tok.kind == "op" and self.tok.text in "+-":
            sign = 1 if self.advance().text == "+" else -1
            operand = self.unary()
            return operand if sign == 1 else _add({}, operand, -1)
        return self.power()

    def power(self) -> ExactPoly:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text in ("^", "**"):
            self.advance()
            exp_tok = self.advance()
            if exp_tok.kind != "number" or not exp_tok.text.isdigit():
                msg = "exponents must be nonnegative integer literals"
                raise self.error(msg, exp_tok)
            result: ExactPoly = {(0,) * len(self.variables): (Fraction(1), _ZERO)}
            for _ in range(int(exp_tok.text)):
                result = _mul(result, base)
            return result
        return base

    def atom(self) -> ExactPoly:
        tok = self.advance()
        zero = (0,) * len(self.variables)
        if tok.kind == "number":
            return _clean({zero: (Fraction(tok.text), _ZERO)})
        if tok.kind == "ident":
            if tok.text == "i":
                return {zero: (_ZERO, Fraction(1))}
            if tok.text not in self.variables:
                msg = f"undeclared identifier '{tok.text}'"
                raise self.error(msg, tok)
            key = [0] * len(self.variables)
            key[self.variables.index(tok.text)] = 1
            return {tuple(key): (Fraction(1), _ZERO)}
        if tok.kind == "op" and tok.text == "(":
            inner = self.expression()
            self.expect_op(")")
            return inner
        found = tok.text or "end of input"
        msg = f"expected an expression, found '{found}'"
        raise self.error(msg, tok)

    # Assembly

    def build(self) -> PolySystem:
        polys = []
        for _, exact in self.equations:
            terms = []
            for key, (re_, im_) in exact.items():
                exps = {v: e for v, e in zip(self.variables, key, strict=True) if e}
                terms.append(Term(complex(float(re_), float(im_)), exps))
            polys.append(tuple(terms))
        groups = []
        for gi, (names, forced) in enumerate(self.group_decls):
            homogeneous = forced if forced is not None else _homogeneous(polys, names)
            groups.append(VarGroup(name=f"g{gi + 1}", variables=names, homogeneous=homogeneous))
        return PolySystem(
            groups=tuple(groups),
            polynomials=tuple(polys),
            names=tuple(name for name, _ in self.equations),
            declared_dim=self.declared_dim,
        )


def _homogeneous(polys: list[tuple[Term, ...]], names: tuple[str, ...]) -> bool:
    return all(len({t.degree_in(names) for t in poly}) <= 1 for poly in polys)


def parse_system(text: str) -> PolySystem:
    """Parse system source into a PolySystem"""
    try:
        return _Parser(text).parse()
    except ParseError:
        raise
    except InputError as e:
        raise ParseError(str(e), 1, 1) from e


# Rendering

def _format_coefficient(c: complex) -> str:
    if c.imag == 0:
        return repr(c.real)
    sign = "+" if c.imag >= 0 else "-"
    return f"{c.real!r}{sign}{abs(c.imag)!r}*i"


def _format_term(term: Term, variables: tuple[str, ...]) -> str:
    factors = [f"({_format_coefficient(complex(term.coefficient))})"]
    for var in variables:
        e = term.exponents.get(var, 0)
        if e == 1:
            factors.append(var)
        elif e > 1:
            factors.append(f"{var}^{e}")
    return "*".join(factors)


def _render_lines(system: PolySystem) -> Iterator[str]:
    for group in system.groups:
        keyword = "hom_variable_group" if group.homogeneous else "affine_variable_group"
        yield f"{keyword} {' '.join(group.variables)};"
    if system.declared_dim is not None:
        yield f"dimension {system.declared_dim};"
    for name, poly in zip(system.names, system.polynomials, strict=True):
        body = " + ".join(_format_term(t, system.variables) for t in poly) or "0"
        yield f"{name} = {body};"


def render_system(system: PolySystem) -> str:
    """Inverse of parse_system (floats rendered with exact repr)"""
    return "\n".join(_render_lines(system)) + "\n"
