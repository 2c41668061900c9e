"""Lie algebras given by structure constants, with central and affine brackets.

A bracket [X_i, X_j] is stored for i < j only, as a list of terms
``coeff * X_t`` plus an optional affine part ``coeff * 1``.  Central charges
declared as parameters (m) are folded into the affine part at construction,
so the normal-ordering alphabet never contains them.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from . import scalars
from .scalars import ParamScalar, scalar


class AlgebraError(ValueError):
    pass


#: one bracket contribution: (coefficient, generator index or None for the unit)
BracketTerm = tuple[ParamScalar, "int | None"]


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violations: list = field(default_factory=list)

    def __str__(self):
        if self.passed:
            return "jacobi: passed"
        lines = [f"jacobi: {len(self.violations)} violation(s)"]
        for triple, residual in self.violations:
            lines.append(f"  ({', '.join(triple)}): residual {residual}")
        return "\n".join(lines)


class LieAlgebra:
    """Immutable structure-constant Lie algebra with a fixed ordered basis.

    ``basis`` is the normal-ordering alphabet; central parameter symbols are
    kept in ``parameters`` and appear in coefficients only.
    """

    def __init__(self, name, basis, parameters=(), brackets=None, weights=None):
        self.name = str(name)
        self.basis = tuple(basis)
        self.parameters = tuple(parameters)
        for p in self.parameters:
            if not scalars.is_parameter_name(p):
                raise AlgebraError(f"undeclarable parameter {p!r}")
        if len(set(self.basis)) != len(self.basis):
            raise AlgebraError("duplicate generator names")
        for g in self.basis:
            if scalars.is_parameter_name(g):
                raise AlgebraError(f"generator {g!r} collides with a parameter")
        self.index = {g: i for i, g in enumerate(self.basis)}
        self.dim = len(self.basis)
        table: dict[tuple[int, int], tuple[BracketTerm, ...]] = {}
        for (i, j), terms in (brackets or {}).items():
            if not 0 <= i < j < self.dim:
                raise AlgebraError(f"bad bracket key ({i}, {j})")
            cleaned = tuple((c, t) for c, t in self._merge(terms) if c)
            if cleaned:
                table[(i, j)] = cleaned
        self.brackets = table
        self.weights = dict(weights) if weights is not None else None
        # caches for the normal-ordering kernel (see pbw module)
        self._mono_gen_cache: dict = {}
        self._mono_pair_cache: dict = {}

    @staticmethod
    def _merge(terms):
        acc: dict = {}
        for c, t in terms:
            acc[t] = acc.get(t, scalars.ZERO) + c
        return [(c, t) for t, c in acc.items()]

    # -- structure ---------------------------------------------------------

    def bracket(self, i: int, j: int) -> tuple[BracketTerm, ...]:
        """[X_i, X_j] for any index pair, antisymmetry implied."""
        if i == j:
            return ()
        if i < j:
            return self.brackets.get((i, j), ())
        return tuple((-c, t) for c, t in self.brackets.get((j, i), ()))

    def weight(self, i: int) -> int:
        if self.weights is None:
            raise AlgebraError(f"algebra {self.name} carries no weights")
        return self.weights.get(i, 0)

    @property
    def var_names(self) -> tuple[str, ...]:
        """Lowercase images of the basis, the symmetric-algebra variables."""
        names = tuple(g.lower() for g in self.basis)
        if len(set(names)) != len(names):
            raise AlgebraError("lowercased generator names collide")
        return names

    def __repr__(self):
        return f"LieAlgebra({self.name}, dim={self.dim + len(self.parameters)})"

    def __eq__(self, other):
        return self is other or (
            isinstance(other, LieAlgebra)
            and self.basis == other.basis
            and self.parameters == other.parameters
            and self.brackets == other.brackets
        )

    def __hash__(self):
        return hash((self.basis, self.parameters))

    # -- validation --------------------------------------------------------

    def validate(self) -> ValidationReport:
        return validate(self)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "generators": list(self.basis),
            "parameters": list(self.parameters),
            "brackets": [],
        }
        for (i, j), terms in sorted(self.brackets.items()):
            entry = {
                "left": self.basis[i],
                "right": self.basis[j],
                "terms": [
                    {
                        "coeff": scalars.scalar_str(c),
                        "gen": "1" if t is None else self.basis[t],
                    }
                    for c, t in terms
                ],
            }
            out["brackets"].append(entry)
        if self.weights is not None:
            out["weights"] = {self.basis[i]: w for i, w in sorted(self.weights.items())}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "LieAlgebra":
        try:
            name = data["name"]
            gens = list(data["generators"])
            params = tuple(data.get("parameters", ()))
            raw = data.get("brackets", [])
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"malformed algebra description: {exc}") from exc
        # parameters may be listed among the generators (central charges);
        # they are folded into coefficients here
        alphabet = [g for g in gens if g not in params]
        index = {g: i for i, g in enumerate(alphabet)}
        brackets: dict = {}
        for entry in raw:
            li, ri = entry["left"], entry["right"]
            if li not in index or ri not in index:
                raise AlgebraError(f"bracket on unknown generator [{li}, {ri}]")
            i, j = index[li], index[ri]
            terms = []
            for t in entry["terms"]:
                coeff = scalars.parse_scalar(str(t["coeff"]))
                target = t["gen"]
                if target == "1":
                    terms.append((coeff, None))
                elif target in params:
                    terms.append((coeff * scalars.parameter(target), None))
                elif target in index:
                    terms.append((coeff, index[target]))
                else:
                    raise AlgebraError(f"bracket target {target!r} is not declared")
            if i == j:
                raise AlgebraError(f"bracket [{li}, {li}] must vanish")
            if i > j:
                i, j = j, i
                terms = [(-c, t) for c, t in terms]
            brackets[(i, j)] = tuple(terms)
        weights = None
        if "weights" in data and data["weights"] is not None:
            weights = {index[g]: int(w) for g, w in data["weights"].items() if g in index}
        return cls(name, alphabet, params, brackets, weights)

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "LieAlgebra":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def validate(algebra: LieAlgebra) -> ValidationReport:
    """Check the Jacobi identity on all basis triples, exactly.

    Affine (unit-valued) terms participate as 2-cocycle conditions: the unit
    brackets to zero with everything, so [[X_i,X_j],X_k] only propagates
    generator-valued targets.
    """
    violations = []
    n = algebra.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                acc: dict = {}
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    for coeff, t in algebra.bracket(a, b):
                        if t is None:
                            continue
                        for c2, t2 in algebra.bracket(t, c):
                            key = t2
                            acc[key] = acc.get(key, scalars.ZERO) + coeff * c2
                residual = {t: c for t, c in acc.items() if c}
                if residual:
                    names = (algebra.basis[i], algebra.basis[j], algebra.basis[k])
                    pretty = " + ".join(
                        f"({scalars.scalar_str(c)})*{'1' if t is None else algebra.basis[t]}"
                        for t, c in sorted(residual.items(), key=lambda kv: (kv[0] is None, kv[0]))
                    )
                    violations.append((names, pretty))
    return ValidationReport(passed=not violations, violations=violations)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def build_schrodinger(two_j: int) -> LieAlgebra:
    """Centrally extended Schroedinger algebra with spin j = two_j / 2.

    Basis order H, E, F, P0..P_{2j}; the central charge m is a parameter.
    """
    if not isinstance(two_j, int) or two_j < 1 or two_j % 2 == 0:
        raise AlgebraError(f"two_j must be an odd positive integer, got {two_j!r}")
    n = two_j
    basis = ["H", "E", "F"] + [f"P{s}" for s in range(n + 1)]
    H, E, F = 0, 1, 2
    P = lambda s: 3 + s
    m = scalars.parameter("m")
    br: dict = {}
    br[(H, E)] = ((scalar(2), E),)
    br[(H, F)] = ((scalar(-2), F),)
    br[(E, F)] = ((scalar(1), H),)
    for s in range(n + 1):
        w = n - 2 * s
        if w:
            br[(H, P(s))] = ((scalar(w), P(s)),)
        if s >= 1:
            br[(E, P(s))] = ((scalar(s), P(s - 1)),)
        if s <= n - 1:
            br[(F, P(s))] = ((scalar(n - s), P(s + 1)),)
    half = (n + 1) // 2  # r + j + 1/2 = r + half for n = 2j
    fact = [1]
    for k in range(1, n + 1):
        fact.append(fact[-1] * k)
    for r in range(half):
        s = n - r
        sign = -1 if (r + half) % 2 else 1
        br[(P(r), P(s))] = ((scalar(sign * fact[n - r] * fact[r]) * m, None),)
    weights = {H: 0, E: 2, F: -2}
    for s in range(n + 1):
        weights[P(s)] = n - 2 * s
    return LieAlgebra(f"S{n}", basis, ("m",), br, weights)


_NAMED_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*(?:\(([^)]*)\))?\s*$")


def build_named(ident: str) -> LieAlgebra:
    """Builders for the fixed algebra menagerie: r3, sl2, heisenberg(k), weyl(vars...)."""
    match = _NAMED_RE.match(ident)
    if not match:
        raise AlgebraError(f"cannot parse algebra id {ident!r}")
    base, argtext = match.group(1), match.group(2)
    args = [a.strip() for a in argtext.split(",")] if argtext else []
    if base == "r3":
        br = {
            (0, 2): ((scalar(-1), 1),),  # [X1, X3] = -X2
            (1, 2): ((scalar(1), 0),),   # [X2, X3] = X1
        }
        return LieAlgebra("r3", ("X1", "X2", "X3"), (), br)
    if base == "sl2":
        br = {
            (0, 1): ((scalar(2), 1),),
            (0, 2): ((scalar(-2), 2),),
            (1, 2): ((scalar(1), 0),),
        }
        return LieAlgebra("sl2", ("H", "E", "F"), (), br, {0: 0, 1: 2, 2: -2})
    if base == "heisenberg":
        if len(args) != 1 or not args[0].isdigit():
            raise AlgebraError("heisenberg(k) takes one integer argument")
        k = int(args[0])
        if k < 1:
            raise AlgebraError("heisenberg(k) needs k >= 1")
        basis = [f"P{i}" for i in range(1, k + 1)] + [f"Q{i}" for i in range(1, k + 1)] + ["Z"]
        br = {(i, k + i): ((scalar(1), 2 * k),) for i in range(k)}
        return LieAlgebra(f"heisenberg({k})", basis, (), br)
    if base == "weyl":
        if not args:
            raise AlgebraError("weyl(vars...) needs at least one coordinate")
        coords = list(args)
        derivs = ["D" + v for v in coords]
        br = {(i, len(coords) + i): ((scalar(-1), None),) for i in range(len(coords))}
        # stored [v, Dv] = -1, i.e. [Dv, v] = 1
        return LieAlgebra(f"weyl({','.join(coords)})", coords + derivs, ("m",), br)
    raise AlgebraError(f"unknown algebra id {ident!r}")
