"""Sparse commutative polynomials over the parameter-rational field.

The variable list of a polynomial mirrors the ordered basis of a Lie algebra
(lowercase names), so exponent vectors can be shared with the enveloping
algebra side.  Terms map exponent tuples to ParamScalar coefficients; zero
coefficients are never stored.
"""

from __future__ import annotations

from fractions import Fraction

from . import scalars
from .scalars import ParamScalar, ZERO, scalar


def grlex_key(exps: tuple[int, ...]) -> tuple:
    return (sum(exps), exps)


class SymPolynomial:
    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        cleaned = {}
        for exps, c in (terms or {}).items():
            if c:
                if len(exps) != len(self.vars):
                    raise ValueError("exponent vector length mismatch")
                cleaned[tuple(exps)] = c
        self.terms = cleaned

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def constant(cls, variables, c):
        c = scalar(c) if not isinstance(c, ParamScalar) else c
        n = len(tuple(variables))
        return cls(variables, {(0,) * n: c})

    @classmethod
    def variable(cls, variables, name):
        variables = tuple(variables)
        idx = variables.index(name)
        exps = [0] * len(variables)
        exps[idx] = 1
        return cls(variables, {tuple(exps): scalars.ONE})

    @classmethod
    def monomial(cls, variables, exps, c=1):
        return cls(variables, {tuple(exps): scalar(c) if not isinstance(c, ParamScalar) else c})

    # -- ring operations ----------------------------------------------------

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError(f"variable sets differ: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, ParamScalar)):
            other = SymPolynomial.constant(self.vars, other)
        self._check(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            acc = out.get(exps)
            acc = c if acc is None else acc + c
            if acc:
                out[exps] = acc
            else:
                out.pop(exps, None)
        return SymPolynomial(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return SymPolynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, ParamScalar)):
            other = SymPolynomial.constant(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = scalar(other)
        if isinstance(other, ParamScalar):
            if not other:
                return SymPolynomial.zero(self.vars)
            return SymPolynomial(self.vars, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                acc = out.get(key)
                acc = ca * cb if acc is None else acc + ca * cb
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return SymPolynomial(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = SymPolynomial.constant(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SymPolynomial)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- queries ------------------------------------------------------------

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def diff(self, var_index: int) -> "SymPolynomial":
        out: dict = {}
        for exps, c in self.terms.items():
            k = exps[var_index]
            if not k:
                continue
            lowered = list(exps)
            lowered[var_index] = k - 1
            key = tuple(lowered)
            acc = out.get(key)
            acc = c * scalar(k) if acc is None else acc + c * scalar(k)
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return SymPolynomial(self.vars, out)

    def evaluate(self, point: list[Fraction], params: dict[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for exps, c in self.terms.items():
            val = scalars.substitute(c, params)
            for x, e in zip(point, exps):
                if e:
                    val *= x**e
            total += val
        return total

    def leading_monomial(self) -> tuple[int, ...]:
        return max(self.terms, key=grlex_key)

    def coefficient(self, exps) -> ParamScalar:
        return self.terms.get(tuple(exps), ZERO)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def content_normalized(self) -> "SymPolynomial":
        items = self.sorted_terms()
        coeffs = scalars.content_normalize([c for _, c in items])
        return SymPolynomial(self.vars, {e: c for (e, _), c in zip(items, coeffs)})

    # -- printing -----------------------------------------------------------

    def __str__(self):
        return poly_str(self)

    def __repr__(self):
        return f"SymPolynomial({poly_str(self)})"


def poly_mul(p: SymPolynomial, q: SymPolynomial) -> SymPolynomial:
    return p * q


def weight_of(exps: tuple[int, ...], algebra) -> int:
    """Weight of a monomial: sum of generator weights times exponents."""
    if algebra.weights is None:
        raise ValueError(f"algebra {algebra.name} carries no weights")
    return sum(e * algebra.weights.get(i, 0) for i, e in enumerate(exps) if e)


def _term_str(exps, coeff, variables, latex=False):
    parts = []
    for name, e in zip(variables, exps):
        if not e:
            continue
        if latex:
            name = _latex_symbol(name)
        if e == 1:
            parts.append(name)
        elif latex:
            parts.append(f"{name}^{{{e}}}")
        else:
            parts.append(f"{name}^{e}")
    if not parts:
        return scalars.scalar_str(coeff, latex)
    body = (" " if latex else "*").join(parts)
    if coeff == scalars.ONE:
        return body
    if coeff == -scalars.ONE:
        return "-" + body
    if latex:
        return scalars.scalar_str(coeff, latex=True) + " " + body
    return scalars.scalar_factor_str(coeff) + "*" + body


def _latex_symbol(name: str) -> str:
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return f"{head}_{{{tail}}}" if tail else head


def poly_str(p: SymPolynomial, latex: bool = False) -> str:
    out = ""
    for exps, c in p.sorted_terms():
        t = _term_str(exps, c, p.vars, latex)
        if not out:
            out = t
        elif t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out or "0"


# ---------------------------------------------------------------------------
# exact numeric rank
# ---------------------------------------------------------------------------

#: parameter instantiation for numeric work: distinct small primes
GENERIC_PARAMS = {"m": Fraction(3), "lambda": Fraction(5)}


def jacobian_matrix(polys, point, params=None):
    params = GENERIC_PARAMS if params is None else params
    mat = []
    for p in polys:
        row = [p.diff(j).evaluate(point, params) for j in range(len(p.vars))]
        mat.append(row)
    return mat


def fraction_rank(mat: list[list[Fraction]]) -> int:
    """Rank over Q by exact Gaussian elimination."""
    rows = [row[:] for row in mat if any(row)]
    ncols = len(mat[0]) if mat else 0
    rank = 0
    col = 0
    while rows and col < ncols:
        pivot = next((i for i, r in enumerate(rows) if r[col]), None)
        if pivot is None:
            col += 1
            continue
        rows[0], rows[pivot] = rows[pivot], rows[0]
        lead = rows[0][col]
        head = rows.pop(0)
        rank += 1
        for r in rows:
            if r[col]:
                f = r[col] / lead
                for j in range(col, ncols):
                    r[j] -= f * head[j]
        rows = [r for r in rows if any(r)]
        col += 1
    return rank


def jacobian_rank(polys, point, params=None) -> int:
    """Rank of the Jacobian of the polynomial list at a rational point."""
    if not polys:
        return 0
    return fraction_rank(jacobian_matrix(polys, point, params))


# ---------------------------------------------------------------------------
# parsing (lowercase variables, shared coefficient grammar)
# ---------------------------------------------------------------------------

def parse_poly(text: str, variables) -> SymPolynomial:
    variables = tuple(variables)
    tokens = scalars._tokenize_scalar(text)
    value, pos = _parse_sum(tokens, 0, variables)
    if pos != len(tokens):
        raise scalars.ScalarSyntaxError(f"unexpected {tokens[pos][0]!r}", tokens[pos][1])
    return value


def _parse_sum(tokens, pos, variables):
    sign = 1
    while pos < len(tokens) and tokens[pos][0] in "+-":
        if tokens[pos][0] == "-":
            sign = -sign
        pos += 1
    value, pos = _parse_product(tokens, pos, variables)
    if sign < 0:
        value = -value
    while pos < len(tokens) and tokens[pos][0] in "+-":
        op = tokens[pos][0]
        rhs, pos = _parse_product(tokens, pos + 1, variables)
        value = value + rhs if op == "+" else value - rhs
    return value, pos


def _parse_product(tokens, pos, variables):
    value, pos = _parse_factor(tokens, pos, variables)
    while pos < len(tokens) and tokens[pos][0] in "*/":
        op = tokens[pos][0]
        rhs, pos = _parse_factor(tokens, pos + 1, variables)
        if op == "/":
            const = _as_constant(rhs)
            if const is None or not const:
                raise ValueError("division is only defined by nonzero scalars")
            value = value * (scalars.ONE / const)
        else:
            value = value * rhs
    return value, pos


def _as_constant(p: SymPolynomial):
    if not p.terms:
        return ZERO
    if len(p.terms) == 1:
        exps, c = next(iter(p.terms.items()))
        if not any(exps):
            return c
    return None


def _parse_factor(tokens, pos, variables):
    if pos >= len(tokens):
        raise scalars.ScalarSyntaxError("unexpected end of input", pos)
    tok, at = tokens[pos]
    if tok == "-":
        value, pos = _parse_factor(tokens, pos + 1, variables)
        return -value, pos
    if tok == "(":
        value, pos = _parse_sum(tokens, pos + 1, variables)
        if pos >= len(tokens) or tokens[pos][0] != ")":
            raise scalars.ScalarSyntaxError("missing ')'", at)
        pos += 1
    elif tok.isdigit():
        value = SymPolynomial.constant(variables, int(tok))
        pos += 1
    elif scalars.is_parameter_name(tok):
        value = SymPolynomial.constant(variables, scalars.parameter(tok))
        pos += 1
    elif tok in variables:
        value = SymPolynomial.variable(variables, tok)
        pos += 1
    else:
        raise scalars.ScalarSyntaxError(f"unknown symbol {tok!r}", at)
    if pos < len(tokens) and tokens[pos][0] == "^":
        pos += 1
        neg = False
        if pos < len(tokens) and tokens[pos][0] == "-":
            neg = True
            pos += 1
        if pos >= len(tokens) or not tokens[pos][0].isdigit():
            raise scalars.ScalarSyntaxError("exponent must be an integer", at)
        e = int(tokens[pos][0])
        pos += 1
        if neg:
            const = _as_constant(value)
            if const is None or not const:
                raise ValueError("negative powers only apply to nonzero scalars")
            value = SymPolynomial.constant(variables, const ** (-e))
        else:
            value = value**e
    return value, pos
