"""Exact multivariate polynomials over the rationals.

A polynomial is a sparse map from monomials to :class:`fractions.Fraction`
coefficients.  A monomial is a tuple of ``(Var, exponent)`` pairs sorted by
variable, so two polynomials are equal exactly when their term maps are
equal.  Variables are drawn from a fixed alphabet::

    PARTIAL < BRACKET_LAMBDA < BRACKET_MU < LAMBDA(1) < LAMBDA(2) < ... < PARAM(name)

Text form (used by spec files and reports)::

    D        the derivation (PARTIAL)
    x, y     the bracket variables lambda and mu
    x1, x2   lambda_1, lambda_2, ...
    other    parameters, e.g. ``alpha``, ``Delta``

>>> p = parse("(D+2*x)*(x1-x2)")
>>> str(p.substitute({X: parse("-x-D")}))
'-D*x1+D*x2-2*x*x1+2*x*x2'
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, NamedTuple, Tuple, Union


class DegreeError(ValueError):
    """Raised when a divisor is not of total degree one."""


class ParseError(ValueError):
    """Malformed polynomial text.  ``line``/``col`` are 1-based."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at {line}:{col}")
        self.reason = message
        self.line = line
        self.col = col


PARTIAL_KIND = 0
BRACKET_LAMBDA_KIND = 1
BRACKET_MU_KIND = 2
LAMBDA_KIND = 3
PARAM_KIND = 4
GEN_KIND = 5  # algebra/module generator symbols while parsing spec files


class Var(NamedTuple):
    kind: int
    key: Union[int, str]

    def __str__(self) -> str:
        if self.kind == PARTIAL_KIND:
            return "D"
        if self.kind == BRACKET_LAMBDA_KIND:
            return "x"
        if self.kind == BRACKET_MU_KIND:
            return "y"
        if self.kind == LAMBDA_KIND:
            return f"x{self.key}"
        return str(self.key)

    @property
    def is_lambda(self) -> bool:
        return self.kind == LAMBDA_KIND

    @property
    def is_param(self) -> bool:
        return self.kind == PARAM_KIND


D = Var(PARTIAL_KIND, 0)
X = Var(BRACKET_LAMBDA_KIND, 0)
Y = Var(BRACKET_MU_KIND, 0)


def lam(i: int) -> Var:
    if i < 1:
        raise ValueError("lambda indices are 1-based")
    return Var(LAMBDA_KIND, i)


def param(name: str) -> Var:
    if not _IDENT.fullmatch(name) or _reserved(name):
        raise ValueError(f"invalid parameter name {name!r}")
    return Var(PARAM_KIND, name)


Monomial = Tuple[Tuple[Var, int], ...]
Coeff = Union[int, Fraction]

_ONE: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _sort_key(m: Monomial):
    # graded lex, descending: higher degree first, then earlier variables first
    return (-_mono_degree(m), [(v, -e) for v, e in m])


class Polynomial:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Coeff] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = Fraction(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # caller guarantees no zero coefficients
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Coeff) -> "Polynomial":
        return cls._raw({_ONE: Fraction(c)}) if c else cls._raw({})

    @classmethod
    def var(cls, v: Var, exponent: int = 1) -> "Polynomial":
        if exponent == 0:
            return cls.const(1)
        return cls._raw({((v, exponent),): Fraction(1)})

    @staticmethod
    def lift(x: "PolyLike") -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, Var):
            return Polynomial.var(x)
        if isinstance(x, (int, Fraction)):
            return Polynomial.const(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Polynomial")

    # --- queries -----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self, of: Iterable[Var] | None = None) -> int:
        """Total degree, or the degree in the variables ``of``.  Zero has degree -1."""
        if not self._terms:
            return -1
        if of is None:
            return max(_mono_degree(m) for m in self._terms)
        vs = set(of)
        return max(sum(e for v, e in m if v in vs) for m in self._terms)

    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v, _ in m)

    def constant_term(self) -> Fraction:
        return self._terms.get(_ONE, Fraction(0))

    def is_constant(self) -> bool:
        return all(m == _ONE for m in self._terms)

    def coefficient(self, monomial: Monomial) -> Fraction:
        return self._terms.get(monomial, Fraction(0))

    def is_homogeneous(self, of: Iterable[Var] | None = None) -> bool:
        vs = None if of is None else set(of)
        degs = {
            _mono_degree(m) if vs is None else sum(e for v, e in m if v in vs)
            for m in self._terms
        }
        return len(degs) <= 1

    def homogeneous_components(self, of: Iterable[Var] | None = None) -> Dict[int, "Polynomial"]:
        vs = None if of is None else set(of)
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            d = _mono_degree(m) if vs is None else sum(e for v, e in m if v in vs)
            parts.setdefault(d, {})[m] = c
        return {d: Polynomial._raw(t) for d, t in sorted(parts.items())}

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: _sort_key(t[0]))

    def coefficients_in(self, vs: Iterable[Var]) -> Dict[Monomial, "Polynomial"]:
        """Split into ``{monomial in vs: coefficient polynomial free of vs}``."""
        vset = set(vs)
        out: Dict[Monomial, Dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            inner = tuple(t for t in m if t[0] in vset)
            outer = tuple(t for t in m if t[0] not in vset)
            out.setdefault(inner, {})[outer] = c
        return {k: Polynomial._raw(v) for k, v in out.items()}

    # --- arithmetic ----------------------------------------------------------

    def __add__(self, other: "PolyLike") -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "PolyLike") -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "PolyLike") -> "Polynomial":
        return _coerce(other) - self

    def __mul__(self, other: "PolyLike") -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return Polynomial._raw({m: c * other for m, c in self._terms.items()})
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out: Dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return Polynomial._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other: Coeff) -> "Polynomial":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        f = Fraction(1) / other
        return self * f

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Polynomial.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # --- calculus ----------------------------------------------------------

    def substitute(self, bindings: Mapping[Var, "PolyLike"]) -> "Polynomial":
        """Simultaneous substitution of variables by polynomials."""
        if not bindings or not self._terms:
            return self
        images = {v: Polynomial.lift(p) for v, p in bindings.items()}
        powers: Dict[Tuple[Var, int], Polynomial] = {}

        def power(v: Var, e: int) -> Polynomial:
            key = (v, e)
            if key not in powers:
                powers[key] = images[v] if e == 1 else power(v, e - 1) * images[v]
            return powers[key]

        out: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            kept = tuple(t for t in m if t[0] not in images)
            factor: Polynomial | None = None
            for v, e in m:
                if v in images:
                    pe = power(v, e)
                    factor = pe if factor is None else factor * pe
            if factor is None:
                out[kept] = out.get(kept, 0) + c
                continue
            for fm, fc in factor._terms.items():
                nm = _mono_mul(kept, fm)
                out[nm] = out.get(nm, 0) + c * fc
        return Polynomial._raw({m: c for m, c in out.items() if c})

    def derivative(self, v: Var) -> "Polynomial":
        out: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            for idx, (w, e) in enumerate(m):
                if w == v:
                    nm = m[:idx] + (((w, e - 1),) if e > 1 else ()) + m[idx + 1:]
                    out[nm] = out.get(nm, 0) + c * e
                    break
        return Polynomial._raw({m: c for m, c in out.items() if c})

    def divide_by_var(self, v: Var) -> "Polynomial":
        """Exact division by a single variable; every term must contain ``v``."""
        out: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            for idx, (w, e) in enumerate(m):
                if w == v:
                    out[m[:idx] + (((w, e - 1),) if e > 1 else ()) + m[idx + 1:]] = c
                    break
            else:
                raise ValueError(f"{self} is not divisible by {v}")
        return Polynomial._raw(out)

    # --- text --------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            body = "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not body:
                txt = _fmt_coeff(a)
            elif a == 1:
                txt = body
            else:
                txt = f"{_fmt_coeff(a)}*{body}"
            parts.append((sign, txt))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, txt in parts[1:]:
            out += sign + txt
        return out

    def __repr__(self) -> str:
        return f"Polynomial('{self}')"


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _coerce(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction, Var)):
        return Polynomial.lift(x)
    return NotImplemented


PolyLike = Union[Polynomial, Var, int, Fraction]

ZERO = Polynomial()
ONE = Polynomial.const(1)


# --- module-level operations ------------------------------------------------

def add(p: PolyLike, q: PolyLike) -> Polynomial:
    return Polynomial.lift(p) + Polynomial.lift(q)


def mul(p: PolyLike, q: PolyLike) -> Polynomial:
    return Polynomial.lift(p) * Polynomial.lift(q)


def substitute(p: PolyLike, bindings: Mapping[Var, PolyLike]) -> Polynomial:
    return Polynomial.lift(p).substitute(bindings)


def partial_derivative(p: PolyLike, v: Var) -> Polynomial:
    return Polynomial.lift(p).derivative(v)


def lambda_sum(n: int, start: int = 1) -> Polynomial:
    """``lambda_start + ... + lambda_{start+n-1}``."""
    return Polynomial._raw({((lam(i), 1),): Fraction(1) for i in range(start, start + n)})


def elimination_variable(ell: PolyLike) -> Var:
    """The variable ``divide_by_linear`` eliminates: the highest lambda, else the highest variable."""
    ell = Polynomial.lift(ell)
    if ell.degree() != 1:
        raise DegreeError(f"divisor {ell} is not of total degree 1")
    linear = [m[0][0] for m in ell.terms if m]
    lambdas = [v for v in linear if v.is_lambda]
    return max(lambdas) if lambdas else max(linear)


def divide_by_linear(p: PolyLike, ell: PolyLike) -> Tuple[Polynomial, Polynomial]:
    """Divide ``p`` by a degree-one polynomial ``ell``.

    Returns ``(quotient, remainder)`` with ``p == ell*quotient + remainder``
    and ``remainder`` free of the eliminated variable (see
    :func:`elimination_variable`).  The remainder is ``p`` restricted to the
    hyperplane ``ell = 0``.
    """
    p = Polynomial.lift(p)
    ell = Polynomial.lift(ell)
    v = elimination_variable(ell)
    lead = ell.coefficient(((v, 1),))
    rest = ell - Polynomial.var(v) * lead
    # v = -rest/lead on the hyperplane; peel off the top power of v repeatedly
    by_power = p.coefficients_in([v])
    top = max((m[0][1] if m else 0) for m in by_power) if by_power else 0
    coeffs = {e: ZERO for e in range(top + 1)}
    for m, c in by_power.items():
        coeffs[m[0][1] if m else 0] = c
    quotient_coeffs = {}
    for e in range(top, 0, -1):
        c = coeffs[e]
        if not c:
            continue
        qc = c / lead
        quotient_coeffs[e - 1] = qc
        # subtract ell * qc * v^(e-1) = qc*v^e*lead + qc*rest*v^(e-1)
        coeffs[e] = ZERO
        coeffs[e - 1] = coeffs[e - 1] - qc * rest
    quotient = ZERO
    for e, c in quotient_coeffs.items():
        quotient = quotient + c * Polynomial.var(v, e)
    return quotient, coeffs[0]


# --- parsing ----------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_LAMBDA_NAME = re.compile(r"x([1-9][0-9]*)")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _reserved(name: str) -> bool:
    return name in ("D", "x", "y") or bool(_LAMBDA_NAME.fullmatch(name))


def name_to_var(name: str) -> Var:
    if name == "D":
        return D
    if name == "x":
        return X
    if name == "y":
        return Y
    m = _LAMBDA_NAME.fullmatch(name)
    if m:
        return lam(int(m.group(1)))
    return Var(PARAM_KIND, name)


class _Parser:
    def __init__(self, text: str, symbols: Mapping[str, Var] | None, allowed_params):
        self.text = text
        self.symbols = symbols or {}
        self.allowed = allowed_params
        self.tokens = []
        for m in _TOKEN.finditer(text):
            if m.group(0).strip() == "":
                continue
            kind = "num" if m.group(1) else "id" if m.group(2) else "op"
            self.tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        self.i = 0

    def _where(self, offset: int):
        line = self.text.count("\n", 0, offset) + 1
        col = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return line, col

    def _end_offset(self) -> int:
        stripped = self.text.rstrip()
        return max(len(stripped) - 1, 0)

    def error(self, message: str, offset: int | None = None):
        if offset is None:
            offset = self.tokens[self.i][2] if self.i < len(self.tokens) else self._end_offset()
        raise ParseError(message, *self._where(offset))

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty expression", 1, 1)
        p = self.expr()
        if self.peek() is not None:
            tok = self.peek()
            if tok[1] == ")":
                self.error("unbalanced parenthesis")
            self.error(f"unexpected {tok[1]!r}")
        return p

    def expr(self) -> Polynomial:
        tok = self.peek()
        sign = 1
        if tok and tok[1] in "+-" and tok[0] == "op":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        result = self.term() * sign
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.take()
                t = self.term()
                result = result + t if tok[1] == "+" else result - t
            else:
                return result

    def term(self) -> Polynomial:
        result = self.factor()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "*/":
                self.take()
                if tok[1] == "*":
                    result = result * self.factor()
                else:
                    f = self.factor()
                    if not f.is_constant():
                        self.error("division by a non-constant", tok[2])
                    if not f:
                        self.error("division by zero", tok[2])
                    result = result / f.constant_term()
            else:
                return result

    def factor(self) -> Polynomial:
        base = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.take()
            exp = self.take()
            if exp is None:
                self.error("missing exponent")
            if exp[0] != "num":
                self.error("exponent must be a nonnegative integer", exp[2])
            base = base ** int(exp[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        if tok is None:
            self.error("unexpected end of expression")
        kind, text, offset = tok
        if kind == "num":
            return Polynomial.const(int(text))
        if kind == "id":
            if text in self.symbols:
                return Polynomial.var(self.symbols[text])
            v = name_to_var(text)
            if v.is_param and self.allowed is not None and text not in self.allowed:
                self.error(f"unknown identifier {text!r}", offset)
            return Polynomial.var(v)
        if text == "(":
            inner = self.expr()
            close = self.peek()
            if close is None or close[1] != ")":
                self.error("unbalanced parenthesis")
            self.take()
            return inner
        if text in "+-":
            # unary sign inside a product, e.g. 2*-x
            inner = self.factor()
            return -inner if text == "-" else inner
        if text == ")":
            self.error("unbalanced parenthesis", offset)
        self.error(f"unexpected {text!r}", offset)


def parse(text: str, symbols: Mapping[str, Var] | None = None, params: Iterable[str] | None = None) -> Polynomial:
    """Parse the polynomial text grammar.

    ``symbols`` maps extra identifiers (e.g. generator names) to variables.
    If ``params`` is given, any other non-reserved identifier is an error.
    """
    allowed = None if params is None else set(params)
    return _Parser(text, symbols, allowed).parse()
