"""The differential on cochains, the D-action on cochains, and the contracting homotopies.

For a q-cochain ``gamma`` the differential is::

    (d gamma)_{l_1..l_{q+1}}(a_1..a_{q+1})
        = sum_i (-1)^(i+1) a_i _{l_i} gamma(.. a_i omitted ..)
        + sum_{i<j} (-1)^(i+j) gamma_{l_i+l_j, ..}([a_i _{l_i} a_j], ..)

A ``D`` in a bracket output sitting in the first slot becomes
``-(l_i + l_j)`` (conformal antilinearity).  For free-module coefficients
the action shifts the ``D`` already present in the value:
``a _l (f(D) v) = f(D + l) a _l v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cochain import (
    Cochain,
    SliceBasis,
    basis_of_slice,
    block_of,
    blocks,
    lambda_poly,
    lambda_vars,
    tuple_of,
)
from .conformal import ConformalModule
from .exactpoly import D, X, ZERO, Polynomial, divide_by_linear, lam, lambda_sum

TAU, TAU2, TAU3 = "tau", "tau2", "tau3"


class ModuleMismatch(ValueError):
    pass


class NonHomogeneous(ValueError):
    pass


class TargetSliceOverflow(ValueError):
    pass


def _check_module(gamma: Cochain, V: ConformalModule):
    if gamma.module is not V:
        raise ModuleMismatch(f"cochain has coefficients in {gamma.module.name}, not {V.name}")


def apply_differential(gamma: Cochain, V: ConformalModule | None = None) -> Cochain:
    V = gamma.module if V is None else V
    _check_module(gamma, V)
    A = V.algebra
    q = gamma.arity
    n = A.rank
    if q == 0:
        c = gamma.value(())
        lam1 = lambda_poly(1)
        return Cochain(1, V, {(i,): V.act(i, lam1, c) for i in range(n)})
    if not gamma.values:
        return Cochain(q + 1, V, {})
    args = [lambda_poly(i) for i in range(1, q + 2)]
    acting = any(V.action)
    # bracket structure with x -> l_i and D -> -(l_i + l_j), cached per (gi, gj, i, j)
    merged: Dict[Tuple[int, int, int, int], List[Tuple[int, Polynomial]]] = {}

    def bracket_terms(gi, gj, i, j):
        key = (gi, gj, i, j)
        if key not in merged:
            s = args[i] + args[j]
            out = []
            for k, P in enumerate(A.structure(gi, gj)):
                if P:
                    out.append((k, P.substitute({D: -s, X: args[i]})))
            merged[key] = out
        return merged[key]

    support = set(gamma.values)
    out: Dict[Tuple[int, ...], Polynomial] = {}
    for block in blocks(q + 1, n):
        T = tuple_of(block)
        total = ZERO
        if acting:
            for i in range(q + 1):
                rest = T[:i] + T[i + 1:]
                if rest not in support:
                    continue
                val = gamma.evaluate(rest, args[:i] + args[i + 1:])
                term = V.act(T[i], args[i], val)
                total = total + (term if i % 2 == 0 else -term)
        for i in range(q + 1):
            for j in range(i + 1, q + 1):
                terms = bracket_terms(T[i], T[j], i, j)
                if not terms:
                    continue
                rest = T[:i] + T[i + 1:j] + T[j + 1:]
                rest_args = [args[i] + args[j]] + args[:i] + args[i + 1:j] + args[j + 1:]
                for k, coeff in terms:
                    val = gamma.evaluate((k,) + rest, rest_args)
                    if not val:
                        continue
                    term = coeff * val
                    # (-1)^(i+j) with 1-based positions equals (-1)^(i+j) 0-based
                    total = total + (term if (i + j) % 2 == 0 else -term)
        if total:
            out[T] = total
    return Cochain(q + 1, V, out)


def partial_on_cochain(gamma: Cochain, V: ConformalModule | None = None) -> Cochain:
    """Multiply every value by ``D_V + l_1 + ... + l_q``."""
    V = gamma.module if V is None else V
    _check_module(gamma, V)
    factor = V.partial_value + lambda_sum(gamma.arity)
    return gamma.map_values(lambda t, p: factor * p)


def _contract(gamma: Cochain, derivative: bool, gen: int = 0) -> Cochain:
    q = gamma.arity
    if q < 1:
        raise ValueError("contracting homotopies are undefined on 0-cochains")
    lq = lam(q)
    args = [lambda_poly(i) for i in range(1, q + 1)]
    sign = 1 if (q - 1) % 2 == 0 else -1
    targets = set()
    for t in gamma.values:
        if gen in t:
            idx = t.index(gen)
            targets.add(t[:idx] + t[idx + 1:])
    out = {}
    for T in sorted(targets):
        val = gamma.evaluate(T + (gen,), args)
        if derivative:
            val = val.derivative(lq)
        val = val.substitute({lq: ZERO})
        if val:
            out[T] = val if sign > 0 else -val
    return Cochain(q - 1, gamma.module, out)


def tau(gamma: Cochain, gen: int = 0) -> Cochain:
    """``(-1)^(q-1) d/dl gamma_{l_1..l_{q-1}, l}(X_1..X_{q-1}, L) |_{l=0}``."""
    return _contract(gamma, derivative=True, gen=gen)


def tau2(gamma: Cochain, gen: int = 0) -> Cochain:
    """``(-1)^(q-1) gamma_{l_1..l_{q-1}, l}(X_1..X_{q-1}, L) |_{l=0}`` (scalar-module coefficients)."""
    return _contract(gamma, derivative=False, gen=gen)


def tau3(gamma: Cochain, gen: int = 0) -> Cochain:
    """Same evaluation as :func:`tau2`, used with free-module coefficients."""
    return _contract(gamma, derivative=False, gen=gen)


def reduce_mod_partial(value: Polynomial, q: int, V: ConformalModule) -> Polynomial:
    """Remainder of a value modulo ``D_V + l_1 + ... + l_q`` (the image of D on cochains)."""
    ell = V.partial_value + lambda_sum(q)
    if ell.is_constant():
        return ZERO if ell else value
    return divide_by_linear(value, ell)[1]


def reduce_cochain(gamma: Cochain) -> Cochain:
    V = gamma.module
    return gamma.map_values(lambda t, p: reduce_mod_partial(p, gamma.arity, V))


def homotopy_residual(gamma: Cochain, which: str) -> Cochain:
    """``(d h + h d) gamma`` minus its predicted value, for ``h`` one of tau, tau2, tau3.

    * ``tau`` (trivial coefficients): prediction ``(deg - k) gamma`` per block,
      ``k`` the number of L's; exact.
    * ``tau2`` (D acts by ``a``): prediction ``-a gamma``, compared modulo
      ``a + sum l_i``.
    * ``tau3`` (free module, L acting by ``D + alpha + ...``): prediction
      ``alpha gamma``, compared modulo ``D + sum l_i``.
    """
    V = gamma.module
    q = gamma.arity
    h = {TAU: tau, TAU2: tau2, TAU3: tau3}[which]
    d_gamma = apply_differential(gamma, V)
    lhs = h(d_gamma)
    if q >= 1:
        lhs = lhs + apply_differential(h(gamma), V)
    if which == TAU:
        if not V.is_trivial:
            raise ModuleMismatch("tau needs trivial coefficients")
        lvars = lambda_vars(q)
        predicted = {}
        for t, p in gamma.values.items():
            if not p.is_homogeneous(lvars):
                raise NonHomogeneous(f"value on {t} mixes lambda-degrees")
            k = t.count(0)
            predicted[t] = p * (p.degree(lvars) - k)
        return lhs - Cochain(q, V, predicted)
    if which == TAU2:
        if V.free or not V.partial:
            raise ModuleMismatch("tau2 needs a scalar D-action a != 0")
        residual = lhs + gamma.scale(V.partial)
    else:
        if not V.free:
            raise ModuleMismatch("tau3 needs free-module coefficients")
        alpha = V.action[0].substitute({X: ZERO}) - Polynomial.var(D)
        residual = lhs - gamma.scale(alpha)
    return reduce_cochain(residual)


# --- matrices ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DifferentialMatrix:
    """``matrix[r][c]``: coordinate ``r`` (over the concatenated targets) of ``d(source[c])``."""

    source: SliceBasis
    targets: Tuple[SliceBasis, ...]
    matrix: Tuple[Tuple[Fraction, ...], ...]   # polynomial entries when parameters occur

    @property
    def shape(self) -> Tuple[int, int]:
        return (sum(t.dim for t in self.targets), self.source.dim)

    @property
    def target(self) -> Optional[SliceBasis]:
        return self.targets[0] if len(self.targets) == 1 else None

    def column_cochain(self, c: int) -> Cochain:
        """Re-expand column ``c`` into a cochain."""
        V = self.source.module
        values: Dict[Tuple[int, ...], Polynomial] = {}
        r = 0
        for tgt in self.targets:
            for e in tgt.elements:
                x = self.matrix[r][c]
                if x:
                    values[tgt.tuple] = values.get(tgt.tuple, ZERO) + e * x
                r += 1
        return Cochain(self.source.arity + 1, V, values)

    def rank(self) -> int:
        from .linalg import rank

        if any(isinstance(x, Polynomial) and not x.is_constant() for row in self.matrix for x in row):
            raise ValueError("rank of a matrix with parameter entries is not defined here")
        cols = [{r: Polynomial.lift(x).constant_term() for r, x in enumerate(col) if x}
                for col in zip(*self.matrix)] if self.matrix else []
        return rank(cols)

    def to_json(self) -> dict:
        rows, cols = self.shape
        return {
            "source": self.source.label,
            "targets": [t.label for t in self.targets],
            "rows": rows,
            "cols": cols,
            "entries": [[_fstr(x) for x in row] for row in self.matrix],
        }


def _fstr(x) -> str:
    if isinstance(x, Polynomial):
        return str(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _slice_key(V: ConformalModule, t, p: Polynomial, q: int):
    """Split a value into (lambda-degree, D-degree) homogeneous pieces."""
    lvars = lambda_vars(q)
    pieces = {}
    for m, part in p.homogeneous_components(lvars).items():
        if V.free:
            for j, sub in part.homogeneous_components([D]).items():
                pieces[(m, j)] = sub
        else:
            pieces[(m, 0)] = part
    return pieces


def assemble_matrix(
    src: SliceBasis,
    V: ConformalModule | None = None,
    targets: Sequence[SliceBasis] | None = None,
) -> DifferentialMatrix:
    """Matrix of ``d`` on a slice.  Targets are inferred from the images unless declared."""
    V = src.module if V is None else V
    images = [apply_differential(c, V) for c in src.cochains()]
    q1 = src.arity + 1
    if targets is None:
        keys = set()
        for img in images:
            for t, p in img.values.items():
                for (m, j) in _slice_key(V, t, p, q1):
                    keys.add((block_of(t, V.algebra.rank), m, j))
        targets = [basis_of_slice(q1, b, m, V, j) for (b, m, j) in sorted(keys, key=lambda k: (-k[0][0], k[1], k[2]))]
    targets = tuple(targets)
    index = {}
    for n, tgt in enumerate(targets):
        index[(tgt.block, tgt.degree, tgt.partial_power)] = n
    columns: List[List[Fraction]] = []
    for img in images:
        coords: List[list] = [[Fraction(0)] * t.dim for t in targets]
        for t, p in img.values.items():
            b = block_of(t, V.algebra.rank)
            for (m, j), part in _slice_key(V, t, p, q1).items():
                n = index.get((b, m, j))
                if n is None:
                    raise TargetSliceOverflow(f"image leaves the declared targets at block {b}, degree {m}")
                x = targets[n].coordinates(part)
                if x is None:
                    raise TargetSliceOverflow(f"image component not in slice {targets[n].label}")
                coords[n] = x
        columns.append([x for part in coords for x in part])
    n_rows = sum(t.dim for t in targets)
    matrix = tuple(tuple(columns[c][r] for c in range(src.dim)) for r in range(n_rows))
    return DifferentialMatrix(src, targets, matrix)
