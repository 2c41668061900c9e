"""Exact coefficient arithmetic over the parameter-rational field Q(m, lambda).

Every coefficient in the engine lives in the fraction field of integer
polynomials in the declared central parameters.  The heavy lifting
(gcd-reduced fractions, canonical signs) is delegated to sympy's sparse
polynomial fields, which keep numerator and denominator in lowest terms.
"""

from __future__ import annotations

import math
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.fields import field

PARAMETERS = ("m", "lambda")

_FIELD, M, LAMBDA = field(",".join(PARAMETERS), QQ)

#: the scalar type used for every coefficient in the engine
ParamScalar = type(M)

ZERO = _FIELD.zero
ONE = _FIELD.one

_PARAM_GENS = {"m": M, "lambda": LAMBDA}
_INT_CACHE: dict[int, ParamScalar] = {}


def scalar(value=1) -> ParamScalar:
    """Coerce an int, Fraction or ParamScalar into the coefficient field."""
    if isinstance(value, ParamScalar):
        return value
    if isinstance(value, int):
        c = _INT_CACHE.get(value)
        if c is None:
            c = _FIELD.ground_new(QQ(value))
            if -128 <= value <= 128:
                _INT_CACHE[value] = c
        return c
    if isinstance(value, Fraction):
        return _FIELD.ground_new(QQ(value.numerator, value.denominator))
    raise TypeError(f"cannot coerce {value!r} into the coefficient field")


def rational(p: int, q: int = 1) -> ParamScalar:
    return _FIELD.ground_new(QQ(p, q))


def parameter(name: str) -> ParamScalar:
    try:
        return _PARAM_GENS[name]
    except KeyError:
        raise KeyError(f"unknown parameter {name!r}; declared: {PARAMETERS}") from None


def is_parameter_name(name: str) -> bool:
    return name in _PARAM_GENS


def is_rational(c: ParamScalar) -> bool:
    """True when c carries no parameter dependence."""
    return c.denom.is_ground and c.numer.is_ground


def as_fraction(c: ParamScalar) -> Fraction:
    if not is_rational(c):
        raise ValueError(f"{c} is not parameter-free")
    if not c:
        return Fraction(0)
    num = c.numer.LC / c.denom.LC
    return Fraction(int(num.numerator), int(num.denominator))


def substitute(c: ParamScalar, values: dict[str, Fraction]) -> Fraction:
    """Evaluate at rational parameter values (denominator must not vanish)."""
    vals = [QQ(1)] * len(PARAMETERS)
    for k, v in values.items():
        vals[PARAMETERS.index(k)] = QQ(v.numerator, v.denominator)

    def eval_poly(p):
        total = QQ(0)
        for exps, q in p.terms():
            term = q
            for val, e in zip(vals, exps):
                if e:
                    term = term * val**e
            total += term
        return total

    den_val = eval_poly(c.denom)
    if not den_val:
        raise ZeroDivisionError(f"denominator of {c} vanishes at {values}")
    val = eval_poly(c.numer) / den_val
    return Fraction(int(val.numerator), int(val.denominator))


def parameter_factors(c: ParamScalar) -> tuple[str, ...]:
    """Names of parameters the value genuinely depends on."""
    out = []
    for idx, name in enumerate(PARAMETERS):
        if c.numer.degrees()[idx] > 0 or c.denom.degrees()[idx] > 0:
            out.append(name)
    return tuple(out)


def m_degree(c: ParamScalar) -> int:
    """Degree in m of the numerator; requires an m-free denominator."""
    if c.denom.degrees()[0] > 0:
        raise ValueError(f"{c} is not polynomial in m")
    if not c:
        return 0
    return max(0, c.numer.degrees()[0])


def m_coefficients(c: ParamScalar) -> dict[int, ParamScalar]:
    """Split c = sum_k a_k(lambda) m^k; requires an m-free denominator."""
    if c.denom.degrees()[0] > 0:
        raise ValueError(f"{c} is not polynomial in m")
    den = _FIELD.field_new(c.denom)
    out: dict[int, ParamScalar] = {}
    for (em, el), coeff in c.numer.terms():
        piece = _FIELD.ground_new(coeff) * LAMBDA**el / den
        out[em] = out.get(em, ZERO) + piece
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def _frac_str(q: Fraction, latex: bool) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    if latex:
        sign = "-" if q < 0 else ""
        return f"{sign}\\frac{{{abs(q.numerator)}}}{{{q.denominator}}}"
    return f"{q.numerator}/{q.denominator}"


def _poly_term_str(exps, coeff, latex: bool) -> str:
    q = Fraction(int(coeff.numerator), int(coeff.denominator))
    parts = []
    for name, e in zip(PARAMETERS, exps):
        if e == 0:
            continue
        sym = "\\lambda" if (latex and name == "lambda") else name
        if e == 1:
            parts.append(sym)
        elif latex:
            parts.append(f"{sym}^{{{e}}}")
        else:
            parts.append(f"{sym}^{e}")
    if not parts:
        return _frac_str(q, latex)
    sep = " " if latex else "*"
    body = sep.join(parts)
    if q == 1:
        return body
    if q == -1:
        return "-" + body
    return _frac_str(q, latex) + sep + body


def _poly_str(poly, latex: bool) -> str:
    terms = sorted(poly.terms(), key=lambda t: (sum(t[0]), t[0]), reverse=True)
    out = ""
    for exps, coeff in terms:
        t = _poly_term_str(exps, coeff, latex)
        if not out:
            out = t
        elif t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out or "0"


def scalar_str(c: ParamScalar, latex: bool = False) -> str:
    """Canonical text form, e.g. '-3/4', 'm^2', '2*m/lambda', '(m + 2)/lambda'."""
    if not c:
        return "0"
    num = _poly_str(c.numer, latex)
    if c.denom == c.denom.ring.one:
        return num
    den = _poly_str(c.denom, latex)
    if latex:
        neg = num.startswith("-")
        if neg:
            num = num[1:]
        return ("-" if neg else "") + f"\\frac{{{num}}}{{{den}}}"
    if "+" in num or " - " in num:
        num = f"({num})"
    if "+" in den or " - " in den or "*" in den or "/" in den:
        den = f"({den})"
    return f"{num}/{den}"


def _needs_parens(s: str) -> bool:
    return "+" in s or " - " in s or "/" in s


def scalar_factor_str(c: ParamScalar) -> str:
    """Text for c usable as a factor in a '*' product (parenthesised whenever
    the plain form would not re-parse as a single factor)."""
    s = scalar_str(c)
    if s.startswith("-"):
        core = s[1:]
        if _needs_parens(core):
            return f"-({core})"
        return s
    if _needs_parens(s):
        return f"({s})"
    return s


class ScalarSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def parse_scalar(text: str) -> ParamScalar:
    """Parse coefficient text: rationals, parameter monomials and +,-,*,/,^,()."""
    tokens = _tokenize_scalar(text)
    value, pos = _parse_scalar_sum(tokens, 0)
    if pos != len(tokens):
        raise ScalarSyntaxError(f"unexpected {tokens[pos][0]!r}", tokens[pos][1])
    return value


def _tokenize_scalar(text: str):
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
        elif ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((text[i:j], i))
            i = j
        elif ch in "+-*/^()":
            tokens.append((ch, i))
            i += 1
        else:
            raise ScalarSyntaxError(f"bad character {ch!r}", i)
    return tokens


def _parse_scalar_sum(tokens, pos):
    sign = 1
    while pos < len(tokens) and tokens[pos][0] in "+-":
        if tokens[pos][0] == "-":
            sign = -sign
        pos += 1
    value, pos = _parse_scalar_product(tokens, pos)
    if sign < 0:
        value = -value
    while pos < len(tokens) and tokens[pos][0] in "+-":
        op = tokens[pos][0]
        rhs, pos = _parse_scalar_product(tokens, pos + 1)
        value = value + rhs if op == "+" else value - rhs
    return value, pos


def _parse_scalar_product(tokens, pos):
    value, pos = _parse_scalar_factor(tokens, pos)
    while pos < len(tokens) and tokens[pos][0] in "*/":
        op = tokens[pos][0]
        rhs, pos = _parse_scalar_factor(tokens, pos + 1)
        if op == "/":
            if not rhs:
                raise ZeroDivisionError("division by zero in coefficient")
            value = value / rhs
        else:
            value = value * rhs
    return value, pos


def _parse_scalar_factor(tokens, pos):
    if pos >= len(tokens):
        raise ScalarSyntaxError("unexpected end of input", pos)
    tok, at = tokens[pos]
    if tok == "-":
        value, pos = _parse_scalar_factor(tokens, pos + 1)
        return -value, pos
    if tok == "(":
        value, pos = _parse_scalar_sum(tokens, pos + 1)
        if pos >= len(tokens) or tokens[pos][0] != ")":
            raise ScalarSyntaxError("missing ')'", at)
        pos += 1
    elif tok.isdigit():
        value = scalar(int(tok))
        pos += 1
    elif is_parameter_name(tok):
        value = parameter(tok)
        pos += 1
    else:
        raise ScalarSyntaxError(f"unknown symbol {tok!r} in coefficient", at)
    if pos < len(tokens) and tokens[pos][0] == "^":
        pos += 1
        neg = False
        if pos < len(tokens) and tokens[pos][0] == "-":
            neg = True
            pos += 1
        if pos >= len(tokens) or not tokens[pos][0].isdigit():
            raise ScalarSyntaxError("exponent must be an integer", at)
        e = int(tokens[pos][0])
        pos += 1
        value = value ** (-e if neg else e)
    return value, pos


def content_normalize(coeffs: list[ParamScalar]) -> list[ParamScalar]:
    """Scale a coefficient vector by one field element so that entries become
    polynomials with integer content 1 and a positive leading sign.

    Used to produce readable solver output; the scaling is exact and
    invertible, so spans are unchanged.
    """
    nonzero = [c for c in coeffs if c]
    if not nonzero:
        return list(coeffs)
    den_lcm = nonzero[0].denom.ring.one
    for c in nonzero:
        g = den_lcm.gcd(c.denom)
        den_lcm = den_lcm * c.denom.quo(g)
    factor = _FIELD.field_new(den_lcm)
    scaled = [c * factor for c in coeffs]
    num_gcd, den_lcm_int = 0, 1
    for c in scaled:
        if not c:
            continue
        for _, q in c.numer.terms():
            num_gcd = math.gcd(num_gcd, int(q.numerator))
            den_lcm_int = den_lcm_int * int(q.denominator) // math.gcd(den_lcm_int, int(q.denominator))
    if num_gcd:
        content = _FIELD.ground_new(QQ(den_lcm_int, num_gcd))
        scaled = [c * content for c in scaled]
    for c in scaled:
        if c:
            if c.numer.LC < 0:
                scaled = [-x for x in scaled]
            break
    return scaled
