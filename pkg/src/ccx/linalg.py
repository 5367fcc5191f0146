"""Exact linear algebra over the rationals.

Vectors are sparse dicts ``{key: Fraction}``; a matrix is a list of such
vectors (rows or columns, depending on the caller).  Keys may be anything
hashable and orderable, which lets callers index coordinates directly by
``(block, monomial)`` without building a dense layout first.

Rank uses fraction-free (Bareiss) elimination on integer rows; everything
that needs explicit solutions uses Gauss-Jordan over :class:`Fraction`.
Pivoting is deterministic: rows in the given order, columns in sorted key
order.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Hashable, List, Optional, Sequence

Vector = Dict[Hashable, Fraction]


def _columns(vectors: Sequence[Vector]) -> List[Hashable]:
    keys = set()
    for v in vectors:
        keys.update(k for k, c in v.items() if c)
    return sorted(keys)


def _integer_row(v: Vector, cols: Sequence[Hashable]) -> List[int]:
    den = 1
    for c in v.values():
        if c:
            den = lcm(den, Fraction(c).denominator)
    row = [int(Fraction(v.get(k, 0)) * den) for k in cols]
    g = 0
    for x in row:
        g = gcd(g, x)
    return [x // g for x in row] if g > 1 else row


def rank(vectors: Sequence[Vector]) -> int:
    """Rank of a family of sparse vectors (fraction-free elimination)."""
    vectors = [v for v in vectors if any(v.values())]
    if not vectors:
        return 0
    cols = _columns(vectors)
    rows = [_integer_row(v, cols) for v in vectors]
    n_rows, n_cols = len(rows), len(cols)
    r = 0
    prev = 1
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][c]
        for i in range(r + 1, n_rows):
            a = rows[i][c]
            row_i = rows[i]
            row_r = rows[r]
            for j in range(c, n_cols):
                # Bareiss step; the division is exact
                row_i[j] = (p * row_i[j] - a * row_r[j]) // prev
        prev = p
        r += 1
        if r == n_rows:
            break
    return r


class Echelon:
    """Incremental reduced row echelon form of a growing family of vectors.

    Each stored row remembers which input vectors it is a combination of, so
    membership tests can also return explicit coefficients.
    """

    def __init__(self):
        self.rows: List[Vector] = []          # reduced rows
        self.pivots: List[Hashable] = []      # pivot key of each row
        self.combos: List[Vector] = []        # row = sum combo[i] * input[i]
        self.count = 0

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vector):
        """Return ``(residual, combo)`` with ``v = residual + sum combo[i]*input[i]``."""
        residual = {k: Fraction(c) for k, c in v.items() if c}
        combo: Vector = {}
        for row, piv, rc in zip(self.rows, self.pivots, self.combos):
            c = residual.get(piv)
            if not c:
                continue
            for k, x in row.items():
                y = residual.get(k, 0) - c * x
                if y:
                    residual[k] = y
                else:
                    residual.pop(k, None)
            for k, x in rc.items():
                y = combo.get(k, 0) + c * x
                if y:
                    combo[k] = y
                else:
                    combo.pop(k, None)
        return residual, combo

    def add(self, v: Vector) -> bool:
        """Insert ``v``; return True if it was independent of earlier inputs."""
        idx = self.count
        self.count += 1
        residual, combo = self.reduce(v)
        if not residual:
            return False
        piv = min(residual)
        scale = 1 / residual[piv]
        row = {k: x * scale for k, x in residual.items()}
        # row = (v - sum combo*input) * scale
        new_combo = {k: -x * scale for k, x in combo.items()}
        new_combo[idx] = scale
        # keep the form fully reduced
        for i, other in enumerate(self.rows):
            c = other.get(piv)
            if not c:
                continue
            for k, x in row.items():
                y = other.get(k, 0) - c * x
                if y:
                    other[k] = y
                else:
                    other.pop(k, None)
            oc = self.combos[i]
            for k, x in new_combo.items():
                y = oc.get(k, 0) - c * x
                if y:
                    oc[k] = y
                else:
                    oc.pop(k, None)
        self.rows.append(row)
        self.pivots.append(piv)
        self.combos.append(new_combo)
        return True

    def express(self, v: Vector) -> Optional[Vector]:
        """Coefficients ``c`` with ``v = sum c[i]*input[i]``, or None if ``v`` is outside the span."""
        residual, combo = self.reduce(v)
        return None if residual else combo


def independent_subset(vectors: Sequence[Vector]) -> List[int]:
    """Indices of a maximal independent subfamily, chosen greedily in order."""
    ech = Echelon()
    return [i for i, v in enumerate(vectors) if ech.add(v)]


def solve(columns: Sequence[Vector], target: Vector) -> Optional[List[Fraction]]:
    """Find ``x`` with ``sum x[j]*columns[j] == target``; None if infeasible."""
    ech = Echelon()
    for col in columns:
        ech.add(col)
    combo = ech.express(target)
    if combo is None:
        return None
    return [Fraction(combo.get(j, 0)) for j in range(len(columns))]


def nullspace(columns: Sequence[Vector]) -> List[List[Fraction]]:
    """Basis of ``{x : sum x[j]*columns[j] == 0}``."""
    ech = Echelon()
    basis = []
    n = len(columns)
    for j, col in enumerate(columns):
        residual, combo = ech.reduce(col)
        ech.add(col)
        if residual:
            continue
        x = [Fraction(0)] * n
        x[j] = Fraction(1)
        for k, c in combo.items():
            x[k] -= c
        basis.append(x)
    return basis


def separating_functional(columns: Sequence[Vector], target: Vector) -> Optional[Vector]:
    """A linear functional vanishing on every column but equal to 1 on ``target``.

    Returns None if ``target`` lies in the span of the columns.  The
    functional is a certificate of non-membership: check it with
    :func:`apply_functional`.
    """
    ech = Echelon()
    for col in columns:
        ech.add(col)
    residual, _ = ech.reduce(target)
    if not residual:
        return None
    # project onto the complement of the pivot coordinates: pick the residual's
    # leading key; a functional supported on non-pivot keys kills every row
    # of the reduced echelon form only after correcting for pivot entries.
    piv = min(residual)
    f: Vector = {piv: Fraction(1) / residual[piv]}
    for row, p in zip(ech.rows, ech.pivots):
        c = row.get(piv)
        if c:
            f[p] = f.get(p, 0) - c * f[piv]
    return {k: x for k, x in f.items() if x}


def apply_functional(f: Vector, v: Vector) -> Fraction:
    return sum((Fraction(x) * v.get(k, 0) for k, x in f.items()), Fraction(0))
