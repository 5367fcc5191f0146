"""Lie conformal algebras and rank-one conformal modules given by structure polynomials.

An algebra on generators ``g_0, ..., g_{n-1}`` stores, for every ordered
pair, the bracket ``[g_i _x g_j] = sum_k P_ijk(D, x) g_k``.  An *element*
of ``C[D] (x) span(g)`` (possibly with extra scalar variables such as ``y``
in its coefficients) is a tuple of ``n`` coefficient polynomials.

Central generators are killed by ``D``: any ``D``-dependence in their
coefficient is dropped whenever an element is normalized.

A module is ``C[D] v`` (free of rank one) or a line on which ``D`` acts by a
scalar polynomial ``a``; ``g_i _x v = A_i(D, x) v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .exactpoly import D, ONE, X, Y, ZERO, Polynomial, param, parse

Element = Tuple[Polynomial, ...]

_DP = Polynomial.var(D)
_XP = Polynomial.var(X)
_YP = Polynomial.var(Y)


class NotInCatalog(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class ConformalAlgebra:
    name: str
    generators: Tuple[str, ...]
    bracket: Tuple[Tuple[Element, ...], ...]
    centrals: frozenset = frozenset()

    def __post_init__(self):
        n = len(self.generators)
        if len(set(self.generators)) != n:
            raise ValueError("duplicate generator names")
        if len(self.bracket) != n or any(len(row) != n for row in self.bracket):
            raise ValueError("bracket table must have an entry for every ordered pair")
        allowed = {D, X}
        for row in self.bracket:
            for elem in row:
                if len(elem) != n:
                    raise ValueError("bracket value has wrong length")
                for c in elem:
                    extra = {v for v in c.variables() if v not in allowed and not v.is_param}
                    if extra:
                        raise ValueError(f"bracket polynomial {c} uses {sorted(map(str, extra))}")
        for c in self.centrals:
            for j in range(n):
                if any(self.bracket[c][j]) or any(self.bracket[j][c]):
                    raise ValueError(f"central generator {self.generators[c]} has a nonzero bracket")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def generator(self, i: int) -> Element:
        return tuple(ONE if k == i else ZERO for k in range(self.rank))

    def zero(self) -> Element:
        return (ZERO,) * self.rank

    def normalize(self, elem: Sequence[Polynomial]) -> Element:
        return tuple(
            c.substitute({D: ZERO}) if k in self.centrals and c else c
            for k, c in enumerate(elem)
        )

    def structure(self, i: int, j: int) -> Element:
        return self.bracket[i][j]

    def lam_bracket(self, a: Sequence[Polynomial], b: Sequence[Polynomial], lam: Polynomial = _XP) -> Element:
        """``[a _lam b]`` extended to C[D]-combinations by sesquilinearity.

        ``[p(D) g_i _lam q(D) g_j] = p(-lam) q(D+lam) [g_i _lam g_j]``.
        """
        out = [ZERO] * self.rank
        for i, p in enumerate(a):
            if not p:
                continue
            p_left = p.substitute({D: -lam})
            for j, q in enumerate(b):
                if not q:
                    continue
                q_right = q.substitute({D: _DP + lam})
                scale = p_left * q_right
                for k, s in enumerate(self.bracket[i][j]):
                    if s:
                        out[k] = out[k] + scale * s.substitute({X: lam})
        return self.normalize(out)

    def with_centrals(self) -> bool:
        return bool(self.centrals)


@dataclass(frozen=True, eq=False)
class ConformalModule:
    """A rank-one module: free ``C[D] v`` if ``partial is None``, else a line with ``D v = partial*v``."""

    name: str
    algebra: ConformalAlgebra
    action: Tuple[Polynomial, ...]
    partial: Optional[Polynomial] = None

    def __post_init__(self):
        if len(self.action) != self.algebra.rank:
            raise ValueError("one action polynomial per generator")
        if self.partial is not None:
            object.__setattr__(
                self, "action", tuple(a.substitute({D: self.partial}) for a in self.action)
            )
            if D in self.partial.variables():
                raise ValueError("scalar D-action must not involve D")

    @property
    def free(self) -> bool:
        return self.partial is None

    @property
    def rank(self) -> int:
        return 1 if self.free else 0

    @property
    def is_trivial(self) -> bool:
        return self.partial is not None and not self.partial and not any(self.action)

    @property
    def partial_value(self) -> Polynomial:
        """What D acts as on coefficient values: the variable D itself, or the scalar."""
        return _DP if self.partial is None else self.partial

    def act(self, i: int, lam: Polynomial, value: Polynomial) -> Polynomial:
        """``g_i _lam (value * v)`` where ``value`` is a polynomial in D (free case) or a scalar."""
        if not value or not self.action[i]:
            return ZERO
        a = self.action[i].substitute({X: lam})
        if self.free:
            return value.substitute({D: _DP + lam}) * a
        return value * a

    def act_element(self, elem: Sequence[Polynomial], lam: Polynomial, value: Polynomial) -> Polynomial:
        """``(sum p_i(D) g_i) _lam (value*v) = sum p_i(-lam) g_i _lam (value*v)``."""
        out = ZERO
        for i, p in enumerate(elem):
            if p:
                out = out + p.substitute({D: -lam}) * self.act(i, lam, value)
        return out


# --- reports -----------------------------------------------------------------

@dataclass
class CheckReport:
    check: str
    passed: bool = True
    failures: List[Tuple[str, str]] = field(default_factory=list)
    checked: int = 0

    def fail(self, label: str, residual: str):
        self.passed = False
        self.failures.append((label, residual))

    @property
    def witness(self) -> Optional[Tuple[str, str]]:
        return self.failures[0] if self.failures else None

    def __str__(self) -> str:
        if self.passed:
            return f"{self.check}: PASS ({self.checked} identities)"
        label, residual = self.witness
        return f"{self.check}: FAIL at {label}, residual {residual}"


def element_str(algebra: ConformalAlgebra, elem: Sequence[Polynomial], names=None) -> str:
    names = names or algebra.generators
    parts = []
    for c, g in zip(elem, names):
        if not c:
            continue
        if c == ONE:
            parts.append(g)
        elif c == -ONE:
            parts.append(f"-{g}")
        elif len(c) == 1:
            parts.append(f"{c}*{g}")
        else:
            parts.append(f"({c})*{g}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def _sub(a: Sequence[Polynomial], b: Sequence[Polynomial]) -> Element:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Sequence[Polynomial], b: Sequence[Polynomial]) -> Element:
    return tuple(x + y for x, y in zip(a, b))


def _scale(c: Polynomial, a: Sequence[Polynomial]) -> Element:
    return tuple(c * x for x in a)


# --- axiom checks ------------------------------------------------------------

def check_sesquilinearity(A: ConformalAlgebra) -> CheckReport:
    """Cross-check the C[D]-extension of the bracket against the sesquilinearity rules.

    ``[D a _x b] = -x [a _x b]`` and ``[a _x D b] = (D + x)[a _x b]``.
    """
    report = CheckReport("sesquilinearity")
    for i in range(A.rank):
        for j in range(A.rank):
            base = A.lam_bracket(A.generator(i), A.generator(j))
            d_left = A.normalize(_scale(_DP, A.generator(i)))
            d_right = A.normalize(_scale(_DP, A.generator(j)))
            lhs = A.lam_bracket(d_left, A.generator(j))
            res = _sub(lhs, A.normalize(_scale(-_XP, base)))
            report.checked += 1
            if any(res):
                report.fail(f"[D{A.generators[i]}_x {A.generators[j]}]", element_str(A, res))
            rhs = A.lam_bracket(A.generator(i), d_right)
            res = _sub(rhs, A.normalize(_scale(_DP + _XP, base)))
            report.checked += 1
            if any(res):
                report.fail(f"[{A.generators[i]}_x D{A.generators[j]}]", element_str(A, res))
    return report


def skew_residual(A: ConformalAlgebra, i: int, j: int) -> Element:
    """``[g_i _x g_j] + [g_j _{-x-D} g_i]``."""
    flipped = tuple(c.substitute({X: -_XP - _DP}) for c in A.structure(j, i))
    return A.normalize(_add(A.structure(i, j), flipped))


def check_skew_symmetry(A: ConformalAlgebra) -> CheckReport:
    report = CheckReport("skew-symmetry")
    for i in range(A.rank):
        for j in range(A.rank):
            res = skew_residual(A, i, j)
            report.checked += 1
            if any(res):
                report.fail(f"({A.generators[i]},{A.generators[j]})", element_str(A, res))
    return report


def jacobi_residual(A: ConformalAlgebra, i: int, j: int, k: int) -> Element:
    """``[a_x [b_y c]] - [[a_x b]_{x+y} c] - [b_y [a_x c]]`` on generators."""
    a, b, c = A.generator(i), A.generator(j), A.generator(k)
    lhs = A.lam_bracket(a, A.lam_bracket(b, c, _YP), _XP)
    r1 = A.lam_bracket(A.lam_bracket(a, b, _XP), c, _XP + _YP)
    r2 = A.lam_bracket(b, A.lam_bracket(a, c, _XP), _YP)
    return _sub(_sub(lhs, r1), r2)


def check_jacobi(A: ConformalAlgebra) -> CheckReport:
    report = CheckReport("Jacobi")
    for i in range(A.rank):
        for j in range(A.rank):
            for k in range(A.rank):
                res = jacobi_residual(A, i, j, k)
                report.checked += 1
                if any(res):
                    g = A.generators
                    report.fail(f"({g[i]},{g[j]},{g[k]})", element_str(A, res))
    return report


def check_algebra(A: ConformalAlgebra) -> List[CheckReport]:
    return [check_sesquilinearity(A), check_skew_symmetry(A), check_jacobi(A)]


def check_module(A: ConformalAlgebra, V: ConformalModule) -> CheckReport:
    """Module axioms as polynomial identities in D (or the scalar), x, y and the parameters."""
    if V.algebra is not A:
        raise ValueError("module is defined over a different algebra")
    report = CheckReport(f"module {V.name}")
    one = ONE
    for i in range(A.rank):
        # a _x (D v) = (D + x) a _x v
        if V.free:
            lhs = V.act(i, _XP, _DP)
            rhs = (_DP + _XP) * V.act(i, _XP, one)
        else:
            lhs = V.act(i, _XP, V.partial)
            rhs = (V.partial + _XP) * V.act(i, _XP, one)
        report.checked += 1
        if lhs != rhs:
            report.fail(f"{A.generators[i]}_x (Dv)", str(lhs - rhs))
        # (D a) _x v = -x a _x v
        lhs = V.act_element(A.normalize(_scale(_DP, A.generator(i))), _XP, one)
        rhs = -_XP * V.act(i, _XP, one)
        report.checked += 1
        if lhs != rhs:
            report.fail(f"(D{A.generators[i]})_x v", str(lhs - rhs))
    for i in range(A.rank):
        for j in range(A.rank):
            lhs = V.act(i, _XP, V.act(j, _YP, one)) - V.act(j, _YP, V.act(i, _XP, one))
            rhs = V.act_element(A.structure(i, j), _XP + _YP, one)
            report.checked += 1
            if lhs != rhs:
                g = A.generators
                report.fail(f"({g[i]},{g[j]}) on v", str(lhs - rhs))
    return report


# --- construction helpers ------------------------------------------------------

def algebra_from_strings(
    name: str,
    generators: Sequence[str],
    brackets: Dict[Tuple[str, str], str],
    centrals: Sequence[str] = (),
    params: Sequence[str] | None = None,
) -> ConformalAlgebra:
    """Build an algebra from bracket text such as ``{("L","L"): "(D+2*x)*L"}``; missing pairs are zero."""
    from .exactpoly import GEN_KIND, Var

    gens = tuple(generators)
    symbols = {g: Var(GEN_KIND, idx) for idx, g in enumerate(gens)}
    table = [[(ZERO,) * len(gens) for _ in gens] for _ in gens]
    for (left, right), text in brackets.items():
        poly = parse(text, symbols=symbols, params=params)
        table[gens.index(left)][gens.index(right)] = split_linear(poly, len(gens))
    central_idx = frozenset(gens.index(c) for c in centrals)
    return ConformalAlgebra(name, gens, tuple(tuple(r) for r in table), central_idx)


def split_linear(poly: Polynomial, n: int) -> Element:
    """Split a polynomial linear in generator symbols into per-generator coefficients."""
    from .exactpoly import GEN_KIND, Var

    gens = [Var(GEN_KIND, k) for k in range(n)]
    parts = poly.coefficients_in(gens)
    out = [ZERO] * n
    for mono, coeff in parts.items():
        if len(mono) != 1 or mono[0][1] != 1:
            raise ValueError(f"expression {poly} is not linear in the generators")
        out[mono[0][0].key] = coeff
    return tuple(out)


# --- catalog -------------------------------------------------------------------

def heisenberg_virasoro() -> ConformalAlgebra:
    return algebra_from_strings(
        "HV",
        ["L", "M"],
        {
            ("L", "L"): "(D+2*x)*L",
            ("L", "M"): "(D+x)*M",
            ("M", "L"): "x*M",
        },
    )


def virasoro() -> ConformalAlgebra:
    return algebra_from_strings("Vir", ["L"], {("L", "L"): "(D+2*x)*L"})


def heisenberg_virasoro_extended() -> ConformalAlgebra:
    return algebra_from_strings(
        "HVext",
        ["L", "M", "C1", "C2", "C3"],
        {
            ("L", "L"): "(D+2*x)*L + 1/12*x^3*C1",
            ("L", "M"): "(D+x)*M + x^2*C2",
            ("M", "L"): "x*M - x^2*C2",
            ("M", "M"): "x*C3",
        },
        centrals=["C1", "C2", "C3"],
    )


def trivial_module(A: ConformalAlgebra) -> ConformalModule:
    return ConformalModule("trivial", A, (ZERO,) * A.rank, partial=ZERO)


def scalar_module(A: ConformalAlgebra, a: Polynomial | None = None) -> ConformalModule:
    """``C_a``: D acts by ``a`` (a symbol by default), the algebra acts by zero."""
    a = Polynomial.var(param("a")) if a is None else a
    return ConformalModule("Ca", A, (ZERO,) * A.rank, partial=a)


def free_module(A: ConformalAlgebra, with_beta: bool = False) -> ConformalModule:
    """``M_{Delta,alpha}`` (L acts by ``D+alpha+Delta*x``, the rest by zero), or ``M_{Delta,alpha,beta}``."""
    action = [ZERO] * A.rank
    action[0] = parse("D+alpha+Delta*x")
    name = "MDeltaAlpha"
    if with_beta:
        if A.rank < 2:
            raise ValueError("M_{Delta,alpha,beta} needs a second generator")
        action[1] = parse("beta")
        name = "MDeltaAlphaBeta"
    return ConformalModule(name, A, tuple(action))


_ALGEBRAS = {
    "HV": heisenberg_virasoro,
    "Vir": virasoro,
    "HVext": heisenberg_virasoro_extended,
}

_MODULES = {
    "Trivial": trivial_module,
    "Ca": scalar_module,
    "MDeltaAlpha": free_module,
    "MDeltaAlphaBeta": lambda A: free_module(A, with_beta=True),
}


def builtin(name: str, algebra: ConformalAlgebra | None = None):
    """Catalog lookup.  Modules are built over ``algebra`` (HV by default)."""
    if name in _ALGEBRAS:
        return _ALGEBRAS[name]()
    if name in _MODULES:
        return _MODULES[name](algebra if algebra is not None else heisenberg_virasoro())
    raise NotInCatalog(name)


def catalog_names() -> List[str]:
    return list(_ALGEBRAS) + list(_MODULES)
