"""Coadjoint vector fields and polynomial solutions of their joint PDE systems.

A generator Y = a^i X_i acts on the symmetric algebra through the first-order
operator with linear coefficients built from the structure constants; central
bracket terms contribute parameter constants.  Commutant seeds are exact
nullspace vectors of the induced linear map on a bounded-degree ansatz.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

from . import linalg, scalars
from .liealg import LieAlgebra
from .pbw import PBWElement
from .scalars import ONE, ParamScalar
from .sympoly import (
    GENERIC_PARAMS,
    SymPolynomial,
    fraction_rank,
    grlex_key,
    jacobian_matrix,
    weight_of,
)


class AnsatzTooLargeError(RuntimeError):
    def __init__(self, dimension: int, budget: int):
        super().__init__(
            f"ansatz dimension {dimension} exceeds the configured budget {budget}"
        )
        self.dimension = dimension
        self.budget = budget


DEFAULT_ANSATZ_BUDGET = 120_000


@dataclass(frozen=True)
class VectorField:
    """First-order operator sum_j c_j(x) d/dx_j with c_j linear in x."""

    algebra: LieAlgebra
    terms: tuple  # tuple of (SymPolynomial, int var index)
    label: str = ""

    def apply(self, p: SymPolynomial) -> SymPolynomial:
        out = SymPolynomial.zero(p.vars)
        for coeff, j in self.terms:
            dp = p.diff(j)
            if dp:
                out = out + coeff * dp
        return out

    def __str__(self):
        names = self.algebra.var_names
        parts = [f"({coeff})*d/d{names[j]}" for coeff, j in self.terms]
        return " + ".join(parts) if parts else "0"


def _as_linear_combination(algebra: LieAlgebra, y) -> dict[int, ParamScalar]:
    """Coerce y (name, expression, PBW element, or index dict) to a^i."""
    if isinstance(y, dict):
        out = {}
        for k, c in y.items():
            idx = k if isinstance(k, int) else algebra.index.get(k)
            if idx is None:
                raise ValueError(f"unknown generator {k!r}")
            out[idx] = c if isinstance(c, ParamScalar) else scalars.scalar(c)
        return out
    if isinstance(y, str):
        from . import pbw as _pbw

        y = _pbw.parse(y, algebra)
    if isinstance(y, PBWElement):
        if y.algebra != algebra:
            raise ValueError("element belongs to a different algebra")
        out = {}
        for exps, c in y.terms.items():
            total = sum(exps)
            if total == 0:
                raise ValueError("affine terms are not a linear combination of generators")
            if total > 1:
                raise ValueError(f"{y} has degree {y.degree()}, expected 1")
            out[exps.index(1)] = c
        return out
    raise TypeError(f"cannot interpret {y!r} as an algebra element")


def coadjoint_field(algebra: LieAlgebra, y, label: str = "") -> VectorField:
    """The coadjoint action of y: coefficients C_ij^k x_k (unit targets give
    parameter constants)."""
    coeffs = _as_linear_combination(algebra, y)
    variables = algebra.var_names
    acc: dict[int, SymPolynomial] = {}
    for i, a_i in coeffs.items():
        for j in range(algebra.dim):
            if j == i:
                continue
            terms = algebra.bracket(i, j)
            if not terms:
                continue
            poly = acc.get(j, SymPolynomial.zero(variables))
            for c, t in terms:
                if t is None:
                    poly = poly + SymPolynomial.constant(variables, a_i * c)
                else:
                    poly = poly + SymPolynomial.monomial(
                        variables, tuple(1 if k == t else 0 for k in range(algebra.dim)), a_i * c
                    )
            acc[j] = poly
    terms = tuple((p, j) for j, p in sorted(acc.items()) if p)
    if not label:
        label = "+".join(
            f"{algebra.basis[i]}" if c == ONE else f"({scalars.scalar_str(c)})*{algebra.basis[i]}"
            for i, c in sorted(coeffs.items())
        )
    return VectorField(algebra, terms, label)


def apply(v: VectorField, p: SymPolynomial) -> SymPolynomial:
    return v.apply(p)


@dataclass(frozen=True)
class SolutionSpace:
    algebra: LieAlgebra
    degree: int
    annihilators: tuple[str, ...]
    basis: list[SymPolynomial]
    ansatz_dimension: int
    solution_dimension: int
    assumptions: tuple[str, ...] = ()
    weight_filter: "int | None" = None

    def nonconstant_basis(self) -> list[SymPolynomial]:
        return [p for p in self.basis if p.degree() > 0]


def _ansatz_monomials(algebra: LieAlgebra, degree: int, weight_filter):
    nvars = algebra.dim
    out = []

    def rec(prefix, idx, remaining):
        if idx == nvars:
            mono = tuple(prefix)
            if weight_filter is None or weight_of(mono, algebra) == weight_filter:
                out.append(mono)
            return
        for e in range(remaining + 1):
            rec(prefix + [e], idx + 1, remaining - e)

    rec([], 0, degree)
    out.sort(key=grlex_key, reverse=True)
    return out


def solve_degree(
    algebra: LieAlgebra,
    annihilators,
    degree: int,
    weight_filter: "int | None" = None,
    max_ansatz: int = DEFAULT_ANSATZ_BUDGET,
) -> SolutionSpace:
    """Exact nullspace of the joint action on the degree-<=d ansatz.

    With ``weight_filter`` set, the ansatz is restricted to monomials of that
    weight before solving (sound whenever the weight-grading element is among
    the annihilators, since it acts diagonally).
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    fields = [
        y if isinstance(y, VectorField) else coadjoint_field(algebra, y)
        for y in annihilators
    ]
    columns = _ansatz_monomials(algebra, degree, weight_filter)
    if len(columns) > max_ansatz:
        raise AnsatzTooLargeError(len(columns), max_ansatz)
    col_index = {mono: k for k, mono in enumerate(columns)}
    variables = algebra.var_names
    rows: dict = {}
    for v_idx, v in enumerate(fields):
        for k, mono in enumerate(columns):
            for coeff, j in v.terms:
                e = mono[j]
                if not e:
                    continue
                lowered = list(mono)
                lowered[j] = e - 1
                scale = scalars.scalar(e)
                for cexps, c in coeff.terms.items():
                    image = tuple(a + b for a, b in zip(lowered, cexps))
                    row = rows.setdefault((v_idx, image), {})
                    old = row.get(k)
                    new = c * scale if old is None else old + c * scale
                    if new:
                        row[k] = new
                    else:
                        del row[k]
    vectors, assumptions = linalg.nullspace(rows.values(), len(columns))
    basis = []
    for vec in sorted(vectors, key=lambda v: min(v)):
        items = sorted(vec.items())
        coeffs = scalars.content_normalize([c for _, c in items])
        poly = SymPolynomial(
            variables, {columns[k]: c for (k, _), c in zip(items, coeffs)}
        )
        basis.append(poly)
    return SolutionSpace(
        algebra=algebra,
        degree=degree,
        annihilators=tuple(f.label for f in fields),
        basis=basis,
        ansatz_dimension=len(columns),
        solution_dimension=len(basis),
        assumptions=tuple(assumptions),
        weight_filter=weight_filter,
    )


# ---------------------------------------------------------------------------
# functional independence
# ---------------------------------------------------------------------------

DEFAULT_SEED = 20240801


def _random_point(nvars: int, rng: Random) -> list[Fraction]:
    return [Fraction(rng.randint(2, 97)) for _ in range(nvars)]


def independent_subset(polys, rng=None, tries: int = 3, params=None):
    """Greedy maximal functionally independent subset.

    A candidate is kept when the Jacobian rank grows at one of ``tries``
    random rational points: a single witness proves independence exactly,
    while rejection is probabilistic (a dependent candidate never witnesses).
    """
    polys = list(polys)
    if not polys:
        return []
    rng = rng or Random(DEFAULT_SEED)
    params = params or GENERIC_PARAMS
    nvars = len(polys[0].vars)
    points = [_random_point(nvars, rng) for _ in range(tries)]
    accepted: list[SymPolynomial] = []
    for cand in polys:
        if not cand or cand.degree() == 0:
            continue
        grew = False
        for pt in points:
            base = fraction_rank(jacobian_matrix(accepted, pt, params)) if accepted else 0
            aug = fraction_rank(jacobian_matrix(accepted + [cand], pt, params))
            if aug > base:
                grew = True
                break
        if grew:
            accepted.append(cand)
    return accepted


def _is_cartan_like(algebra: LieAlgebra, annihilators) -> bool:
    """True when some annihilator acts diagonally with the declared weights,
    so that the weight-0 ansatz restriction is exact."""
    if algebra.weights is None:
        return False
    for y in annihilators:
        if isinstance(y, VectorField):
            continue
        try:
            combo = _as_linear_combination(algebra, y)
        except (ValueError, TypeError):
            continue
        if len(combo) != 1:
            continue
        idx, c = next(iter(combo.items()))
        if c != ONE:
            continue
        diag = coadjoint_field(algebra, {idx: ONE})
        touched = set()
        ok = True
        for p, j in diag.terms:
            touched.add(j)
            mono = tuple(1 if k == j else 0 for k in range(algebra.dim))
            if p.terms != {mono: scalars.scalar(algebra.weights.get(j, 0))}:
                ok = False
                break
        if ok:
            for j in range(algebra.dim):
                if j not in touched and algebra.weights.get(j, 0) != 0:
                    ok = False
                    break
        if ok:
            return True
    return False


def integrity_basis_candidate(
    algebra: LieAlgebra,
    annihilators,
    max_degree: int,
    rng=None,
    max_ansatz: int = DEFAULT_ANSATZ_BUDGET,
):
    """Degree-by-degree integrity basis approximation.

    At each degree, nullspace solutions already lying in the linear span of
    products of accepted polynomials are discarded, and survivors must also
    grow the Jacobian rank (functional independence witness), so rational
    dependencies like f*p0^2 = (ef)(p0 p1)^2 / (e p1^2) are not re-listed.
    """
    rng = rng or Random(DEFAULT_SEED)
    weight = 0 if _is_cartan_like(algebra, annihilators) else None
    accepted: list[SymPolynomial] = []
    points = None
    for d in range(1, max_degree + 1):
        space = solve_degree(algebra, annihilators, d, weight_filter=weight, max_ansatz=max_ansatz)
        if points is None:
            points = [_random_point(algebra.dim, rng) for _ in range(3)]
        reducer = linalg.RowReducer()
        col_of: dict = {}

        def ingest(poly):
            row = {}
            for mono, c in poly.terms.items():
                k = col_of.setdefault(mono, len(col_of))
                row[k] = c
            reducer.add_row(row)

        for prod in _products_within(accepted, d, algebra):
            ingest(prod)
        for cand in sorted(space.basis, key=lambda p: grlex_key(p.leading_monomial()), reverse=True):
            if cand.degree() == 0:
                continue
            row = {}
            for mono, c in cand.terms.items():
                k = col_of.setdefault(mono, len(col_of))
                row[k] = c
            residual, _ = reducer.reduce_row(row)
            if not residual:
                continue
            grew = False
            for pt in points:
                base = fraction_rank(jacobian_matrix(accepted, pt)) if accepted else 0
                if fraction_rank(jacobian_matrix(accepted + [cand], pt)) > base:
                    grew = True
                    break
            if not grew:
                continue
            accepted.append(cand)
            for prod in _products_with(cand, accepted, d):
                ingest(prod)
    return accepted


def _products_within(polys, max_degree: int, algebra: LieAlgebra):
    """All products of the given polynomials (with repetition, incl. the empty
    product) of total degree <= max_degree."""
    one = SymPolynomial.constant(algebra.var_names, 1)
    out = [one]

    def rec(start, current, deg):
        for i in range(start, len(polys)):
            d = polys[i].degree()
            if deg + d > max_degree:
                continue
            nxt = current * polys[i]
            out.append(nxt)
            rec(i, nxt, deg + d)

    rec(0, one, 0)
    return out


def _products_with(new_poly, accepted, max_degree: int):
    """Products that involve the newly accepted polynomial at least once."""
    out = []
    base = [p for p in accepted if p is not new_poly]

    def rec(start, current, deg):
        nd = deg + new_poly.degree()
        if nd > max_degree:
            return
        cur = current * new_poly
        out.append(cur)
        rec_other(0, cur, nd)
        rec(start, cur, nd)

    def rec_other(start, current, deg):
        for i in range(start, len(base)):
            d = base[i].degree()
            if deg + d > max_degree:
                continue
            nxt = current * base[i]
            out.append(nxt)
            rec_other(i, nxt, deg + d)

    rec(0, SymPolynomial.constant(new_poly.vars, 1), 0)
    return out
