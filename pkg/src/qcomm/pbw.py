"""Enveloping-algebra kernel: PBW normal ordering, products, commutators,
symmetrization, and the expression language.

Elements are sparse maps from ordered monomials (exponent tuples over the
algebra basis) to coefficients.  Products are computed by pushing generators
into ordered monomials one at a time; the (monomial, generator) rewrite is
the hot path and is memoized per algebra, as is the full monomial-pair
product.
"""

from __future__ import annotations

from fractions import Fraction

from sympy.utilities.iterables import multiset_permutations

from . import scalars
from .liealg import LieAlgebra
from .scalars import ONE, ZERO, ParamScalar, scalar
from .sympoly import SymPolynomial, grlex_key

_PAIR_CACHE_LIMIT = 600_000


class PBWError(ValueError):
    pass


class ExprSyntaxError(PBWError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _iadd(acc: dict, key, value):
    old = acc.get(key)
    if old is None:
        acc[key] = value
    else:
        new = old + value
        if new:
            acc[key] = new
        else:
            del acc[key]


def _mono_times_gen(alg: LieAlgebra, mono: tuple, g: int) -> dict:
    """Normal form of (ordered monomial) * X_g as a term dict.

    Returned dicts live in the per-algebra cache and must not be mutated.
    """
    cache = alg._mono_gen_cache
    key = (mono, g)
    res = cache.get(key)
    if res is not None:
        return res
    top = -1
    for idx in range(len(mono) - 1, -1, -1):
        if mono[idx]:
            top = idx
            break
    if top <= g:
        lifted = list(mono)
        lifted[g] += 1
        res = {tuple(lifted): ONE}
    else:
        lowered = list(mono)
        lowered[top] -= 1
        m0 = tuple(lowered)
        acc: dict = {}
        for mono1, c1 in _mono_times_gen(alg, m0, g).items():
            for mono2, c2 in _mono_times_gen(alg, mono1, top).items():
                _iadd(acc, mono2, c1 * c2)
        for coeff, t in alg.bracket(top, g):
            if t is None:
                _iadd(acc, m0, coeff)
            else:
                for mono2, c2 in _mono_times_gen(alg, m0, t).items():
                    _iadd(acc, mono2, coeff * c2)
        res = acc
    cache[key] = res
    return res


def _mono_times_mono(alg: LieAlgebra, ma: tuple, mb: tuple) -> dict:
    """Normal form of the product of two ordered monomials (cached)."""
    g = -1
    for idx, e in enumerate(mb):
        if e:
            g = idx
            break
    if g < 0:
        return {ma: ONE}
    cache = alg._mono_pair_cache
    key = (ma, mb)
    res = cache.get(key)
    if res is not None:
        return res
    rest = list(mb)
    rest[g] -= 1
    rest = tuple(rest)
    acc: dict = {}
    for mono1, c1 in _mono_times_gen(alg, ma, g).items():
        for mono2, c2 in _mono_times_mono(alg, mono1, rest).items():
            _iadd(acc, mono2, c1 * c2)
    if len(cache) < _PAIR_CACHE_LIMIT:
        cache[key] = acc
    return acc


class PBWElement:
    """An element of the enveloping algebra in PBW normal form."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: LieAlgebra, terms=None):
        self.algebra = algebra
        cleaned = {}
        n = algebra.dim
        for exps, c in (terms or {}).items():
            if c:
                if len(exps) != n:
                    raise PBWError("exponent vector length mismatch")
                cleaned[tuple(exps)] = c
        self.terms = cleaned

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, {})

    @classmethod
    def unit(cls, algebra, c=1):
        c = c if isinstance(c, ParamScalar) else scalar(c)
        return cls(algebra, {(0,) * algebra.dim: c})

    @classmethod
    def generator(cls, algebra, name_or_index):
        idx = name_or_index
        if not isinstance(idx, int):
            if name_or_index not in algebra.index:
                raise PBWError(f"unknown generator {name_or_index!r}")
            idx = algebra.index[name_or_index]
        exps = [0] * algebra.dim
        exps[idx] = 1
        return cls(algebra, {tuple(exps): ONE})

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise PBWError("elements belong to different algebras")

    def __add__(self, other):
        if isinstance(other, (int, ParamScalar)):
            other = PBWElement.unit(self.algebra, other)
        self._check(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            _iadd(out, exps, c)
        return PBWElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return PBWElement(self.algebra, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, ParamScalar)):
            other = PBWElement.unit(self.algebra, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = scalar(other)
        if isinstance(other, ParamScalar):
            if not other:
                return PBWElement.zero(self.algebra)
            return PBWElement(self.algebra, {e: c * other for e, c in self.terms.items()})
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            other = scalar(other)
        if isinstance(other, ParamScalar):
            return self.__mul__(other)
        return mul(other, self)

    def __pow__(self, k: int):
        if k < 0:
            raise PBWError("negative power in the enveloping algebra")
        out = PBWElement.unit(self.algebra)
        for _ in range(k):
            out = mul(out, self)
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = PBWElement.unit(self.algebra, other)
        return (
            isinstance(other, PBWElement)
            and self.algebra == other.algebra
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- queries ------------------------------------------------------------

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def scalar_part(self) -> ParamScalar:
        return self.terms.get((0,) * self.algebra.dim, ZERO)

    def is_scalar(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def weight(self) -> "int | None":
        """Common weight of all monomials, or None if mixed."""
        ws = {weight_of_monomial(e, self.algebra) for e in self.terms}
        return ws.pop() if len(ws) == 1 else None

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def leading_monomial(self) -> tuple:
        return max(self.terms, key=grlex_key)

    def homogeneous_component(self, d: int) -> "PBWElement":
        return PBWElement(self.algebra, {e: c for e, c in self.terms.items() if sum(e) == d})

    def map_coefficients(self, fn) -> "PBWElement":
        return PBWElement(self.algebra, {e: fn(c) for e, c in self.terms.items()})

    def content_normalized(self) -> "PBWElement":
        items = self.sorted_terms()
        coeffs = scalars.content_normalize([c for _, c in items])
        return PBWElement(self.algebra, {e: c for (e, _), c in zip(items, coeffs)})

    def to_sym(self) -> SymPolynomial:
        """Forget ordering: image under the symbol map onto S(g)."""
        return SymPolynomial(self.algebra.var_names, dict(self.terms))

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"PBWElement({format_element(self)})"


def weight_of_monomial(exps: tuple, algebra: LieAlgebra) -> int:
    if algebra.weights is None:
        raise PBWError(f"algebra {algebra.name} carries no weights")
    return sum(e * algebra.weights.get(i, 0) for i, e in enumerate(exps) if e)


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def mul(a: PBWElement, b: PBWElement) -> PBWElement:
    a._check(b)
    alg = a.algebra
    acc: dict = {}
    for mb, cb in b.terms.items():
        for ma, ca in a.terms.items():
            c = ca * cb
            for mono, k in _mono_times_mono(alg, ma, mb).items():
                _iadd(acc, mono, c * k)
    return PBWElement(alg, acc)


def commutator(a: PBWElement, b: PBWElement) -> PBWElement:
    return mul(a, b) - mul(b, a)


def normalize(algebra: LieAlgebra, word, coeff=1) -> PBWElement:
    """Normal-order a word of generator symbols (parameters fold into the
    coefficient), rewriting inversions pairwise until sorted."""
    c = coeff if isinstance(coeff, ParamScalar) else scalar(coeff)
    letters = []
    for sym in word:
        if isinstance(sym, int):
            letters.append(sym)
        elif scalars.is_parameter_name(sym):
            c = c * scalars.parameter(sym)
        elif sym in algebra.index:
            letters.append(algebra.index[sym])
        else:
            raise PBWError(f"unknown symbol {sym!r} in word")
    acc = {(0,) * algebra.dim: c}
    for g in letters:
        nxt: dict = {}
        for mono, cm in acc.items():
            for mono2, c2 in _mono_times_gen(algebra, mono, g).items():
                _iadd(nxt, mono2, cm * c2)
        acc = nxt
    return PBWElement(algebra, acc)


# ---------------------------------------------------------------------------
# symmetrization
# ---------------------------------------------------------------------------

def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def symmetrize(p: SymPolynomial, algebra: LieAlgebra) -> PBWElement:
    """The symmetrization map: monomial-wise average over all orderings.

    Distinct orderings of a multiset word are enumerated once and weighted by
    the multiplicity of each, which is exact and avoids the full s! sum.
    """
    if p.vars != algebra.var_names:
        raise PBWError(
            f"polynomial variables {p.vars} do not match algebra {algebra.name}"
        )
    acc: dict = {}
    for exps, c in p.terms.items():
        s = sum(exps)
        if s == 0:
            _iadd(acc, exps, c)
            continue
        letters = []
        rep = 1
        for idx, e in enumerate(exps):
            letters.extend([idx] * e)
            rep *= _factorial(e)
        weight = c * scalars.rational(rep, _factorial(s))
        for word in multiset_permutations(letters):
            mono = (0,) * algebra.dim
            partial = [(mono, ONE)]
            for g in word:
                nxt: dict = {}
                for mo, cm in partial:
                    for mono2, c2 in _mono_times_gen(algebra, mo, g).items():
                        _iadd(nxt, mono2, cm * c2)
                partial = list(nxt.items())
            for mono2, c2 in partial:
                _iadd(acc, mono2, weight * c2)
    return PBWElement(algebra, acc)


# ---------------------------------------------------------------------------
# expression language
# ---------------------------------------------------------------------------
#
# expr   := ["-"] term (("+"|"-") term)*
# term   := factor (("*"|"/") factor)*          '/' needs a scalar divisor
# factor := atom ["^" ["-"] INT]
# atom   := INT | parameter | generator | name bound in env | "(" expr ")"

def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append((text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((text[i:j], i))
            i = j
        elif ch in "+-*/^()":
            tokens.append((ch, i))
            i += 1
        else:
            raise ExprSyntaxError(f"bad character {ch!r}", i)
    return tokens


def parse_ast(text: str):
    tokens = _tokenize(text)
    node, pos = _ast_sum(tokens, 0)
    if pos != len(tokens):
        raise ExprSyntaxError(f"unexpected {tokens[pos][0]!r}", tokens[pos][1])
    return node


def _ast_sum(tokens, pos):
    sign = 1
    while pos < len(tokens) and tokens[pos][0] in "+-":
        if tokens[pos][0] == "-":
            sign = -sign
        pos += 1
    node, pos = _ast_product(tokens, pos)
    if sign < 0:
        node = ("neg", node)
    parts = [node]
    while pos < len(tokens) and tokens[pos][0] in "+-":
        op = tokens[pos][0]
        rhs, pos = _ast_product(tokens, pos + 1)
        parts.append(("neg", rhs) if op == "-" else rhs)
    return (parts[0] if len(parts) == 1 else ("add", parts)), pos


def _ast_product(tokens, pos):
    node, pos = _ast_factor(tokens, pos)
    factors = [(node, "*")]
    while pos < len(tokens) and tokens[pos][0] in "*/":
        op = tokens[pos][0]
        rhs, pos = _ast_factor(tokens, pos + 1)
        factors.append((rhs, op))
    if len(factors) == 1:
        return node, pos
    return ("mul", factors), pos


def _ast_factor(tokens, pos):
    if pos >= len(tokens):
        raise ExprSyntaxError("unexpected end of input", pos)
    tok, at = tokens[pos]
    if tok == "-":
        node, pos = _ast_factor(tokens, pos + 1)
        return ("neg", node), pos
    if tok == "(":
        node, pos = _ast_sum(tokens, pos + 1)
        if pos >= len(tokens) or tokens[pos][0] != ")":
            raise ExprSyntaxError("missing ')'", at)
        pos += 1
    elif tok.isdigit():
        node = ("num", int(tok))
        pos += 1
    elif tok in "+*/^)":
        raise ExprSyntaxError(f"unexpected {tok!r}", at)
    else:
        node = ("sym", tok, at)
        pos += 1
    if pos < len(tokens) and tokens[pos][0] == "^":
        pos += 1
        neg = False
        if pos < len(tokens) and tokens[pos][0] == "-":
            neg = True
            pos += 1
        if pos >= len(tokens) or not tokens[pos][0].isdigit():
            raise ExprSyntaxError("exponent must be an integer", at)
        e = int(tokens[pos][0])
        pos += 1
        node = ("pow", node, -e if neg else e)
    return node, pos


def eval_ast(node, algebra: LieAlgebra, env=None, symmetrized_products=False) -> PBWElement:
    """Evaluate a parsed expression to a PBW element.

    ``env`` maps extra names (generator-set labels) to elements.  With
    ``symmetrized_products`` every product of non-scalar operands is replaced
    by the average over all orderings of its factors, which is the alternative
    reading of printed products in commutator tables.
    """
    kind = node[0]
    if kind == "num":
        return PBWElement.unit(algebra, node[1])
    if kind == "sym":
        name = node[1]
        if env and name in env:
            val = env[name]
            if val.algebra != algebra:
                raise PBWError(f"symbol {name!r} bound in a different algebra")
            return val
        if scalars.is_parameter_name(name):
            return PBWElement.unit(algebra, scalars.parameter(name))
        if name in algebra.index:
            return PBWElement.generator(algebra, name)
        raise ExprSyntaxError(f"unknown symbol {name!r}", node[2])
    if kind == "neg":
        return -eval_ast(node[1], algebra, env, symmetrized_products)
    if kind == "add":
        out = PBWElement.zero(algebra)
        for part in node[1]:
            out = out + eval_ast(part, algebra, env, symmetrized_products)
        return out
    if kind == "pow":
        base = eval_ast(node[1], algebra, env, symmetrized_products)
        e = node[2]
        if e < 0:
            if not base.is_scalar() or not base:
                raise PBWError("negative powers only apply to nonzero scalars")
            return PBWElement.unit(algebra, base.scalar_part() ** e)
        return base**e
    if kind == "mul":
        factors = []
        for sub, op in node[1]:
            val = eval_ast(sub, algebra, env, symmetrized_products)
            if op == "/":
                if not val.is_scalar() or not val:
                    raise PBWError("division is only defined by nonzero scalars")
                val = PBWElement.unit(algebra, ONE / val.scalar_part())
            factors.append(val)
        scalar_acc = ONE
        element_factors = []
        for f in factors:
            if f.is_scalar():
                scalar_acc = scalar_acc * f.scalar_part()
            else:
                element_factors.append(f)
        if not element_factors:
            return PBWElement.unit(algebra, scalar_acc)
        if symmetrized_products and len(element_factors) > 1:
            out = PBWElement.zero(algebra)
            for perm in multiset_permutations(list(range(len(element_factors)))):
                prod = element_factors[perm[0]]
                for idx in perm[1:]:
                    prod = mul(prod, element_factors[idx])
                out = out + prod
            out = out * scalars.rational(1, _factorial(len(element_factors)))
        else:
            out = element_factors[0]
            for f in element_factors[1:]:
                out = mul(out, f)
        return out * scalar_acc
    raise PBWError(f"malformed expression node {node!r}")


def parse(text: str, algebra: LieAlgebra, env=None, symmetrized_products=False) -> PBWElement:
    return eval_ast(parse_ast(text), algebra, env, symmetrized_products)


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def _gen_latex(name: str) -> str:
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return f"{head}_{{{tail}}}" if tail else head


def format_element(e: PBWElement, style: str = "text") -> str:
    if style not in ("text", "latex"):
        raise PBWError(f"unknown style {style!r}")
    latex = style == "latex"
    names = e.algebra.basis
    out = ""
    for exps, c in e.sorted_terms():
        parts = []
        for name, k in zip(names, exps):
            if not k:
                continue
            sym = _gen_latex(name) if latex else name
            if k == 1:
                parts.append(sym)
            elif latex:
                parts.append(f"{sym}^{{{k}}}")
            else:
                parts.append(f"{sym}^{k}")
        if not parts:
            t = scalars.scalar_str(c, latex)
        else:
            body = (" " if latex else "*").join(parts)
            if c == ONE:
                t = body
            elif c == -ONE:
                t = "-" + body
            elif latex:
                t = scalars.scalar_str(c, latex=True) + " " + body
            else:
                t = scalars.scalar_factor_str(c) + "*" + body
        if not out:
            out = t
        elif t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out or "0"
