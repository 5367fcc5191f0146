"""Central extensions from reduced 2-cocycles with trivial coefficients.

A reduced 2-cocycle ``c`` adds the bracket term ``s * c_{x,-x}(g_i, g_j) C``
to ``[g_i _x g_j]``, where ``C`` is a new central generator with ``D C = 0``.
Evaluating at ``l_2 = -l_1`` is well defined because ``C`` is killed by ``D``,
so only the class of ``c`` modulo ``(l_1 + l_2)`` matters.  The ``(M, L)``
term comes from the skew-symmetric evaluation of the stored ``(L, M)`` value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cochain import Cochain, from_names
from .conformal import (
    CheckReport,
    ConformalAlgebra,
    check_jacobi,
    check_sesquilinearity,
    check_skew_symmetry,
    heisenberg_virasoro,
    trivial_module,
    virasoro,
)
from .exactpoly import D, X, ZERO, Polynomial
from .linalg import rank, solve

_XP = Polynomial.var(X)


class CocycleCheckFailed(ValueError):
    pass


@dataclass
class ExtensionSpec:
    """``cocycles``: ``(central name, reduced 2-cocycle)``; ``normalization``: scalar per central."""

    base: ConformalAlgebra
    cocycles: List[Tuple[str, Cochain]]
    normalization: Dict[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        from .cohomology import is_reduced_cocycle

        for name, c in self.cocycles:
            if c.arity != 2:
                raise CocycleCheckFailed(f"{name}: arity {c.arity}, expected 2")
            if not c.module.is_trivial or c.algebra.generators != self.base.generators:
                raise CocycleCheckFailed(f"{name}: needs trivial coefficients over {self.base.name}")
            if not is_reduced_cocycle(c):
                raise CocycleCheckFailed(f"{name}: d c is not in the image of D")
            if name in self.base.generators:
                raise CocycleCheckFailed(f"{name} clashes with a generator of {self.base.name}")

    def scale(self, name: str) -> Fraction:
        return Fraction(self.normalization.get(name, 1))


def bracket_term(c: Cochain, i: int, j: int) -> Polynomial:
    """``c_{x,-x}(g_i, g_j)``: the central coefficient contributed to ``[g_i _x g_j]``."""
    return c.evaluate((i, j), [_XP, -_XP])


def build_extension(spec: ExtensionSpec, name: str | None = None) -> ConformalAlgebra:
    base = spec.base
    n = base.rank
    names = tuple(base.generators) + tuple(nm for nm, _ in spec.cocycles)
    total = len(names)
    table = []
    for i in range(total):
        row = []
        for j in range(total):
            elem = [ZERO] * total
            if i < n and j < n:
                elem[:n] = base.structure(i, j)
                for k, (nm, c) in enumerate(spec.cocycles):
                    elem[n + k] = bracket_term(c, i, j) * spec.scale(nm)
            row.append(tuple(elem))
        table.append(tuple(row))
    centrals = frozenset(base.centrals) | frozenset(range(n, total))
    return ConformalAlgebra(name or f"{base.name}ext", names, tuple(table), centrals)


@dataclass
class ExtensionReport:
    algebra: str
    passed: bool
    checks: List[CheckReport]
    normalizations: Dict[str, Fraction] = field(default_factory=dict)

    def __str__(self) -> str:
        lines = [f"{self.algebra}: {'PASS' if self.passed else 'FAIL'}"]
        lines += [f"  {c}" for c in self.checks]
        lines += [f"  scale {k} = {v}" for k, v in self.normalizations.items()]
        return "\n".join(lines)


def verify_extension(A: ConformalAlgebra, normalizations: Dict[str, Fraction] | None = None) -> ExtensionReport:
    """Sesquilinearity, skew-symmetry and Jacobi, with ``D`` killing the centrals."""
    checks = [check_sesquilinearity(A), check_skew_symmetry(A), check_jacobi(A)]
    return ExtensionReport(A.name, all(c.passed for c in checks), checks, dict(normalizations or {}))


def proportionality(c: Cochain, i: int, j: int, target: Polynomial) -> Optional[Fraction]:
    """The scalar ``s`` with ``s * c_{x,-x}(g_i, g_j) == target``, or None if not proportional."""
    term = bracket_term(c, i, j)
    if not term:
        return None
    mono, coeff = term.sorted_terms()[0]
    s = target.coefficient(mono) / coeff
    return s if s and term * s == target else None


def trivializing_shift(base: ConformalAlgebra, c: Cochain) -> Optional[Dict[str, Fraction]]:
    """Constants ``f`` such that ``g -> g + f_g C`` removes the term ``c_{x,-x} C``.

    In the new basis the central part of ``[g_i _x g_j]`` becomes
    ``c_ij(x) - sum_k P_ijk(0, x) f_k``; a solution exists exactly when the
    extension is trivial.
    """
    n = base.rank
    columns = []
    for k in range(n):
        col = {}
        for i in range(n):
            for j in range(n):
                p = base.structure(i, j)[k].substitute({D: ZERO})
                for mono, coeff in p.items():
                    col[(i, j, mono)] = coeff
        columns.append(col)
    target = {}
    for i in range(n):
        for j in range(n):
            for mono, coeff in bracket_term(c, i, j).items():
                target[(i, j, mono)] = coeff
    x = solve(columns, target)
    if x is None:
        return None
    return {base.generators[k]: x[k] for k in range(n)}


def _term_vector(base: ConformalAlgebra, c: Cochain) -> Dict:
    n = base.rank
    return {(i, j, mono): coeff for i in range(n) for j in range(n)
            for mono, coeff in bracket_term(c, i, j).items()}


def center_dimension(base: ConformalAlgebra, cocycles: Sequence[Cochain]) -> int:
    """Independent central directions: rank of the cocycle terms modulo basis-change terms."""
    n = base.rank
    shifts = []
    for k in range(n):
        col = {}
        for i in range(n):
            for j in range(n):
                for mono, coeff in base.structure(i, j)[k].substitute({D: ZERO}).items():
                    col[(i, j, mono)] = coeff
        shifts.append(col)
    vecs = [_term_vector(base, c) for c in cocycles]
    return rank(shifts + vecs) - rank(shifts)


# central terms of the universal extension of HV: (central, pair, coefficient)
HV_TARGETS = {
    "C1": (("L", "L"), "1/12*x^3"),
    "C2": (("L", "M"), "x^2"),
    "C3": (("M", "M"), "x"),
}

# which reduced 2-cocycle feeds which central
HV_ASSIGNMENT = {"C1": "phi3bar", "C2": "phi2bar", "C3": "phi1bar"}


def hv_extension_spec() -> ExtensionSpec:
    """The three reduced 2-classes of HV, scaled to the ``x^3/12, x^2, x`` convention."""
    from .cohomology import REDUCED, representatives
    from .exactpoly import parse

    A = heisenberg_virasoro()
    reps = dict(representatives(2, REDUCED, A))
    cocycles, scales = [], {}
    for central, (pair, text) in HV_TARGETS.items():
        c = reps[HV_ASSIGNMENT[central]]
        i, j = (A.index(g) for g in pair)
        s = proportionality(c, i, j, parse(text))
        if s is None:
            raise CocycleCheckFailed(f"{HV_ASSIGNMENT[central]} is not proportional to {text} on {pair}")
        cocycles.append((central, c))
        scales[central] = s
    return ExtensionSpec(A, cocycles, scales)


def vir_extension_spec(scale: Fraction = Fraction(-1, 24)) -> ExtensionSpec:
    """Virasoro with the L-sector restriction of the cubic class."""
    V = trivial_module(virasoro())
    c = from_names(V, {("L", "L"): "-x1^3+x2^3"})
    return ExtensionSpec(V.algebra, [("C", c)], {"C": Fraction(scale)})
