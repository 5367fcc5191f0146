"""Cochains and bases of their graded slices.

A q-cochain is stored by its values on *canonical* generator tuples
(nondecreasing generator indices); conformal antilinearity and
skew-symmetry recover everything else.  A value is a polynomial in
``lambda_1..lambda_q`` (plus ``D`` for free-module coefficients and any
parameters).

A *block* is a vector of generator multiplicities, e.g. ``(2, 1)`` for
``(L, L, M)``.  The slice ``(q, block, m)`` is the space of values on that
block that are homogeneous of lambda-degree ``m`` and skew-symmetric inside
each group of equal generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .conformal import ConformalModule
from .exactpoly import D, ONE, ZERO, Polynomial, lam, lambda_sum

GenTuple = Tuple[int, ...]
Block = Tuple[int, ...]


class InconsistentSkewData(ValueError):
    pass


def sort_with_sign(t: Sequence[int]) -> Tuple[GenTuple, List[int], int]:
    """Stable sort of ``t``: returns ``(sorted, order, sign)`` with ``sorted[j] == t[order[j]]``."""
    order = sorted(range(len(t)), key=lambda i: t[i])
    # parity via cycle decomposition
    seen = [False] * len(order)
    sign = 1
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return tuple(t[i] for i in order), order, sign


def block_of(t: GenTuple, rank: int) -> Block:
    counts = [0] * rank
    for g in t:
        counts[g] += 1
    return tuple(counts)


def tuple_of(block: Block) -> GenTuple:
    return tuple(g for g, n in enumerate(block) for _ in range(n))


def lambda_vars(q: int):
    return [lam(i) for i in range(1, q + 1)]


def lambda_poly(i: int) -> Polynomial:
    return Polynomial.var(lam(i))


@dataclass(frozen=True, eq=False)
class Cochain:
    """A q-cochain with coefficients in ``module``; ``values`` keyed by canonical tuples."""

    arity: int
    module: ConformalModule
    values: Mapping[GenTuple, Polynomial] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for t, p in self.values.items():
            t = tuple(t)
            if len(t) != self.arity:
                raise ValueError(f"tuple {t} has wrong length for arity {self.arity}")
            if list(t) != sorted(t):
                raise ValueError(f"tuple {t} is not canonical; use normalize()")
            if p:
                clean[t] = p
        object.__setattr__(self, "values", dict(sorted(clean.items())))

    @property
    def algebra(self):
        return self.module.algebra

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.arity == other.arity and self.values == other.values

    def __hash__(self):
        return hash((self.arity, tuple(self.values.items())))

    def is_zero(self) -> bool:
        return not self.values

    def __bool__(self) -> bool:
        return bool(self.values)

    def _combine(self, other: "Cochain", sign: int) -> "Cochain":
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        out = dict(self.values)
        for t, p in other.values.items():
            out[t] = out.get(t, ZERO) + (p if sign > 0 else -p)
        return Cochain(self.arity, self.module, out)

    def __add__(self, other: "Cochain") -> "Cochain":
        return self._combine(other, 1)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self._combine(other, -1)

    def __neg__(self) -> "Cochain":
        return Cochain(self.arity, self.module, {t: -p for t, p in self.values.items()})

    def scale(self, c) -> "Cochain":
        c = Polynomial.lift(c)
        return Cochain(self.arity, self.module, {t: c * p for t, p in self.values.items()})

    def map_values(self, f) -> "Cochain":
        return Cochain(self.arity, self.module, {t: f(t, p) for t, p in self.values.items()})

    def value(self, t: Sequence[int]) -> Polynomial:
        """Value on a canonical tuple."""
        return self.values.get(tuple(t), ZERO)

    def evaluate(self, t: Sequence[int], args: Sequence[Polynomial]) -> Polynomial:
        """``gamma_{args}(g_t1, ..., g_tq)`` for any tuple, via signed reordering."""
        canon, order, sign = sort_with_sign(t)
        p = self.values.get(canon)
        if p is None:
            return ZERO
        if self.arity == 0:
            return p
        bindings = {lam(j + 1): args[order[j]] for j in range(self.arity)}
        out = p.substitute(bindings)
        return out if sign > 0 else -out

    def blocks(self) -> List[Block]:
        return [block_of(t, self.algebra.rank) for t in self.values]

    def to_pairs(self, names: Sequence[str] | None = None) -> List[Tuple[List[str], str]]:
        names = names or self.algebra.generators
        return [([names[g] for g in t], str(p)) for t, p in self.values.items()]

    def __repr__(self) -> str:
        body = ", ".join(f"({','.join(self.algebra.generators[g] for g in t)}): {p}"
                         for t, p in self.values.items())
        return f"Cochain[{self.arity}]{{{body}}}"


def zero_cochain(q: int, module: ConformalModule) -> Cochain:
    return Cochain(q, module, {})


def from_names(module: ConformalModule, values: Mapping[Sequence[str], object], arity: int | None = None) -> Cochain:
    """Build a cochain from ``{("L","M","M"): "x2-x3"}``-style data, normalizing the tuples."""
    from .exactpoly import parse

    gens = module.algebra.generators
    raw = {}
    for names, v in values.items():
        t = tuple(gens.index(n) for n in names)
        raw[t] = parse(v) if isinstance(v, str) else Polynomial.lift(v)
    if arity is None:
        if not raw:
            raise ValueError("arity needed for an empty cochain")
        arity = len(next(iter(raw)))
    return normalize(raw, arity, module)


def _group_permutations(t: GenTuple) -> Iterator[Tuple[List[int], int]]:
    """All permutations of positions preserving the generator at each position, with sign."""
    groups: Dict[int, List[int]] = {}
    for i, g in enumerate(t):
        groups.setdefault(g, []).append(i)
    group_lists = list(groups.values())
    per_group = [list(itertools.permutations(ix)) for ix in group_lists]
    for combo in itertools.product(*per_group):
        perm = list(range(len(t)))
        for src, dst in zip(group_lists, combo):
            for a, b in zip(src, dst):
                perm[a] = b
        _, _, sign = sort_with_sign(perm)
        yield perm, sign


def is_group_skew(p: Polynomial, t: GenTuple) -> bool:
    """Is ``p`` skew-symmetric under simultaneous swaps of equal generators in ``t``?"""
    for perm, sign in _group_permutations(t):
        moved = p.substitute({lam(i + 1): lambda_poly(perm[i] + 1) for i in range(len(t))})
        if moved != (p if sign > 0 else -p):
            return False
    return True


def normalize(values: Mapping[Sequence[int], Polynomial], arity: int, module: ConformalModule) -> Cochain:
    """Canonicalize values given on arbitrary tuples.

    Each entry is moved to its canonical tuple (with the permutation sign and
    the matching permutation of the lambda variables).  Two entries landing
    on the same canonical tuple must agree, and every canonical value must be
    skew under swaps of equal generators, else :class:`InconsistentSkewData`.
    """
    out: Dict[GenTuple, Polynomial] = {}
    if arity == 0:
        for t, p in values.items():
            if tuple(t) != ():
                raise ValueError("0-cochains take the empty tuple")
            out[()] = Polynomial.lift(p)
        return Cochain(0, module, out)
    for t, p in values.items():
        t = tuple(t)
        if len(t) != arity:
            raise ValueError(f"tuple {t} has wrong length")
        canon, order, sign = sort_with_sign(t)
        # gamma_{mu}(t) = sign * gamma_{mu o order}(canon): canonical value has
        # lambda_j where the original had lambda_{order[j]}
        inv = {lam(order[j] + 1): lambda_poly(j + 1) for j in range(arity)}
        moved = Polynomial.lift(p).substitute(inv)
        moved = moved if sign > 0 else -moved
        if canon in out and out[canon] != moved:
            raise InconsistentSkewData(f"conflicting values for {canon}: {out[canon]} vs {moved}")
        out[canon] = moved
    for canon, p in out.items():
        if p and not is_group_skew(p, canon):
            raise InconsistentSkewData(f"value {p} on {canon} is not skew-symmetric in equal arguments")
    return Cochain(arity, module, out)


# --- slice bases -------------------------------------------------------------

def partitions(n: int, max_parts: int, max_part: int | None = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of ``n`` into at most ``max_parts`` parts, in decreasing lex order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, max_parts - 1, first):
            yield (first,) + rest


def vandermonde(indices: Sequence[int]) -> Polynomial:
    """``prod_{i<j} (lambda_i - lambda_j)`` over the given lambda indices."""
    out = ONE
    for a, b in itertools.combinations(indices, 2):
        out = out * (lambda_poly(a) - lambda_poly(b))
    return out


def monomial_symmetric(mu: Sequence[int], indices: Sequence[int]) -> Polynomial:
    """The monomial symmetric function ``m_mu`` in the given lambda variables."""
    exps = list(mu) + [0] * (len(indices) - len(mu))
    terms = {}
    for perm in set(itertools.permutations(exps)):
        mono = tuple((lam(i), e) for i, e in zip(indices, perm) if e)
        terms[tuple(sorted(mono))] = Fraction(1)
    return Polynomial(terms)


def skew_basis(indices: Sequence[int], degree: int) -> List[Polynomial]:
    """Basis of skew-symmetric polynomials of the given degree in the given variables."""
    r = len(indices)
    base = r * (r - 1) // 2
    if degree < base:
        return []
    v = vandermonde(indices)
    return [v * monomial_symmetric(mu, indices) for mu in partitions(degree - base, r)]


def min_degree(block: Block) -> int:
    return sum(n * (n - 1) // 2 for n in block)


@dataclass(frozen=True, eq=False)
class SliceBasis:
    """Basis of the slice ``(arity, block, degree)``; elements are values on the canonical tuple.

    ``partial_power`` multiplies every element by ``D**partial_power`` (free-module coefficients).
    """

    arity: int
    block: Block
    degree: int
    elements: Tuple[Polynomial, ...]
    module: ConformalModule
    partial_power: int = 0

    @property
    def tuple(self) -> GenTuple:
        return tuple_of(self.block)

    @property
    def dim(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def cochain(self, i: int) -> Cochain:
        return Cochain(self.arity, self.module, {self.tuple: self.elements[i]})

    def cochains(self) -> List[Cochain]:
        return [self.cochain(i) for i in range(self.dim)]

    def coordinates(self, value: Polynomial):
        """Coordinates of a value in this basis, or None if outside the slice.

        Rational numbers for parameter-free values; otherwise polynomials in
        the parameters (each parameter monomial is solved separately).
        """
        from .linalg import solve

        cols = [dict(e.terms) for e in self.elements]
        params = [v for v in value.variables() if v.is_param]
        if not params:
            return solve(cols, dict(value.terms))
        out = [ZERO] * self.dim
        for pmono, part in value.coefficients_in(params).items():
            x = solve(cols, dict(part.terms))
            if x is None:
                return None
            scale = Polynomial({pmono: 1})
            out = [o + scale * c for o, c in zip(out, x)]
        return out

    @property
    def label(self) -> str:
        gens = self.module.algebra.generators
        tup = ",".join(gens[g] for g in self.tuple)
        return f"q={self.arity} ({tup}) deg={self.degree}" + (
            f" D^{self.partial_power}" if self.partial_power else ""
        )


def basis_of_slice(q: int, block: Block, degree: int, module: ConformalModule, partial_power: int = 0) -> SliceBasis:
    """Product basis: (skew basis of each equal-generator group), degrees summing to ``degree``."""
    if sum(block) != q:
        raise ValueError(f"block {block} does not have {q} entries")
    if len(block) != module.algebra.rank:
        raise ValueError("block length must equal the number of generators")
    if partial_power and not module.free:
        raise ValueError("D-powers only make sense for free-module coefficients")
    groups = []
    start = 1
    for n in block:
        groups.append(list(range(start, start + n)))
        start += n
    elements: List[Polynomial] = []
    if q == 0:
        elements = [ONE] if degree == 0 else []
    else:
        for split in _compositions(degree, len(groups)):
            factors = [skew_basis(g, d) for g, d in zip(groups, split)]
            for combo in itertools.product(*factors):
                p = ONE
                for f in combo:
                    p = p * f
                elements.append(p)
    if partial_power:
        dp = Polynomial.var(D, partial_power)
        elements = [dp * e for e in elements]
    return SliceBasis(q, tuple(block), degree, tuple(elements), module, partial_power)


def _compositions(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    if k == 0:
        if n == 0:
            yield ()
        return
    if k == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def blocks(q: int, rank: int) -> List[Block]:
    """All multiplicity vectors of length ``rank`` summing to ``q``, most generator-0 first."""
    return list(_compositions(q, rank))


def degree_decompose(gamma: Cochain) -> List[Cochain]:
    """Split a cochain into pieces that are homogeneous in lambda on a single block."""
    lvars = lambda_vars(gamma.arity)
    out = []
    for t, p in gamma.values.items():
        for _, part in p.homogeneous_components(lvars).items():
            out.append(Cochain(gamma.arity, gamma.module, {t: part}))
    return out


def lambda_degree(p: Polynomial, q: int) -> int:
    return p.degree(lambda_vars(q))


def total_lambda(q: int) -> Polynomial:
    return lambda_sum(q)
