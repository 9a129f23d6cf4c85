"""Integer polynomials in T_1..T_d standing in for elements of Z_p[[T_1..T_d]].

Only polynomial elements are represented. Coefficients are exact integers;
p-adic precision enters later, when cokernels are taken.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb, gcd
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]
LevelVector = tuple[int, ...]


class LambdaPolynomial:
    """A polynomial with integer coefficients in ``d`` variables, tagged with p."""

    __slots__ = ("p", "d", "_terms", "_hash")

    def __init__(self, p: int, d: int, terms: Mapping[Exponent, int] | Iterable = ()):
        self.p = p
        self.d = d
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Exponent, int] = {}
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != d:
                raise ValueError(f"exponent {exp} does not have length {d}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = clean.get(exp, 0) + int(c)
            if c:
                clean[exp] = c
            else:
                clean.pop(exp, None)
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, p: int, d: int, c: int) -> LambdaPolynomial:
        return cls(p, d, {(0,) * d: c})

    @classmethod
    def variable(cls, p: int, d: int, i: int) -> LambdaPolynomial:
        return cls(p, d, {tuple(int(k == i) for k in range(d)): 1})

    @classmethod
    def from_coefficients(cls, p: int, coeffs: Sequence[int]) -> LambdaPolynomial:
        """Univariate polynomial from coefficients listed by increasing degree."""
        return cls(p, 1, {(k,): c for k, c in enumerate(coeffs)})

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exp: Exponent) -> int:
        return self._terms.get(tuple(exp), 0)

    def degree(self, i: int = 0) -> int:
        """Degree in the variable ``T_{i+1}``; -1 for the zero polynomial."""
        return max((e[i] for e in self._terms), default=-1)

    def coefficients(self) -> list[int]:
        """Univariate coefficient list by increasing degree."""
        self._require_univariate()
        out = [0] * (self.degree() + 1)
        for (e,), c in self._terms.items():
            out[e] = c
        return out

    def _require_univariate(self):
        if self.d != 1:
            raise ValueError("operation needs a univariate polynomial")

    def _check(self, other: LambdaPolynomial):
        if (self.p, self.d) != (other.p, other.d):
            raise ValueError("polynomials live in different rings")

    def _lift(self, other) -> LambdaPolynomial:
        if isinstance(other, int):
            return LambdaPolynomial.constant(self.p, self.d, other)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LambdaPolynomial(self.p, self.d, out)

    __radd__ = __add__

    def __neg__(self):
        return LambdaPolynomial(self.p, self.d, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return LambdaPolynomial(self.p, self.d, {e: c * other for e, c in self._terms.items()})
        self._check(other)
        out: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LambdaPolynomial(self.p, self.d, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = LambdaPolynomial.constant(self.p, self.d, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LambdaPolynomial.constant(self.p, self.d, other)
        if not isinstance(other, LambdaPolynomial):
            return NotImplemented
        return (self.p, self.d, self._terms) == (other.p, other.d, other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.d, frozenset(self._terms.items())))
        return self._hash

    def __call__(self, *values):
        """Evaluate at integers or Fractions."""
        total = 0
        for e, c in self._terms.items():
            term = c
            for v, k in zip(values, e):
                term *= v**k
            total += term
        return total

    def __repr__(self):
        if not self._terms:
            return "0"
        names = ["T"] if self.d == 1 else [f"T{i + 1}" for i in range(self.d)]
        parts = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            mono = "*".join(f"{n}^{k}" if k > 1 else n for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_tuples(self) -> list[list[int]]:
        """Serialized form: ``[coefficient, e_1, ..., e_d]`` sorted by exponent."""
        return [[self._terms[e], *e] for e in sorted(self._terms)]

    def mu(self) -> int:
        """Smallest p-adic valuation among the coefficients."""
        if not self._terms:
            raise ValueError("mu of the zero polynomial")
        g = 0
        for c in self._terms.values():
            g = gcd(g, c)
        v = 0
        while g % self.p == 0:
            g //= self.p
            v += 1
        return v

    def lam(self) -> int:
        """Index of the first coefficient that is a unit after dividing by p^mu."""
        self._require_univariate()
        scale = self.p ** self.mu()
        return next(k for k, c in enumerate(self.coefficients()) if (c // scale) % self.p)


def w_poly(p: int, n: int, i: int = 0, d: int = 1) -> LambdaPolynomial:
    """``(1 + T_i)^(p^n) - 1`` with ``i`` counted from zero."""
    P = p**n
    terms = {}
    for k in range(1, P + 1):
        exp = tuple(k if j == i else 0 for j in range(d))
        terms[exp] = comb(P, k)
    return LambdaPolynomial(p, d, terms)


def norm_poly(p: int, n: int, n2: int, i: int = 0, d: int = 1) -> LambdaPolynomial:
    """``w_{n2} / w_n`` as the sum of ``(1 + T_i)^(j p^n)`` over ``j < p^(n2 - n)``."""
    if n > n2:
        raise ValueError(f"norm polynomial needs n <= n', got {n} > {n2}")
    step = p**n
    terms: dict[Exponent, int] = {}
    for j in range(p ** (n2 - n)):
        for k in range(j * step + 1):
            exp = tuple(k if q == i else 0 for q in range(d))
            terms[exp] = terms.get(exp, 0) + comb(j * step, k)
    return LambdaPolynomial(p, d, terms)


def multi_norm(p: int, n: LevelVector, n2: LevelVector) -> LambdaPolynomial:
    if len(n) != len(n2):
        raise ValueError("level vectors have different lengths")
    if any(a > b for a, b in zip(n, n2)):
        raise ValueError(f"multi_norm needs {n} <= {n2} componentwise")
    d = len(n)
    out = LambdaPolynomial.constant(p, d, 1)
    for i, (a, b) in enumerate(zip(n, n2)):
        if a != b:
            out = out * norm_poly(p, a, b, i, d)
    return out


def iota_reversal(f: LambdaPolynomial) -> LambdaPolynomial:
    """``(1+T)^D f((1+T)^-1 - 1)`` with ``D = deg f``.

    Expanding ``(1+T)^-1 - 1 = -T/(1+T)`` gives the sum of
    ``c_k (-T)^k (1+T)^(D-k)``.
    """
    f._require_univariate()
    if f.is_zero():
        raise ValueError("iota_reversal of the zero polynomial")
    D = f.degree()
    out = [0] * (D + 1)
    for k, c in enumerate(f.coefficients()):
        if not c:
            continue
        sign = -c if k % 2 else c
        for j in range(D - k + 1):
            out[k + j] += sign * comb(D - k, j)
    return LambdaPolynomial.from_coefficients(f.p, out)


def divide_univariate(f: LambdaPolynomial, g: LambdaPolynomial) -> tuple[LambdaPolynomial, LambdaPolynomial]:
    """Division with remainder by a monic ``g``."""
    f._check(g)
    f._require_univariate()
    gc = g.coefficients()
    if not gc or gc[-1] != 1:
        raise ValueError("divisor must be monic")
    r = f.coefficients()
    dg = len(gc) - 1
    q = [0] * max(len(r) - dg, 0)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c:
            q[k - dg] = c
            for j in range(dg + 1):
                r[k - dg + j] -= c * gc[j]
    return (LambdaPolynomial.from_coefficients(f.p, q),
            LambdaPolynomial.from_coefficients(f.p, r[:dg]))


def unit_normalize(f: LambdaPolynomial) -> LambdaPolynomial:
    """Strip factors of the unit ``1+T`` and fix the sign of the lambda coefficient."""
    f._require_univariate()
    if f.is_zero():
        raise ValueError("cannot normalize the zero polynomial")
    one_plus_t = LambdaPolynomial.from_coefficients(f.p, [1, 1])
    while f.degree() > 0 and f(-1) == 0:
        # division by the monic 1+T is exact here
        f, _ = divide_univariate(f, one_plus_t)
    scale = f.p ** f.mu()
    if f.coefficients()[f.lam()] // scale < 0:
        f = -f
    return f


def reduce_mod_level(f: LambdaPolynomial, level: LevelVector) -> LambdaPolynomial:
    """Canonical representative modulo ``(w_{n_1}(T_1), ..., w_{n_d}(T_d))``.

    Uses ``T_i^P = -(sum of binom(P, k) T_i^k for 0 < k < P)`` modulo
    ``w_{n_i}`` with ``P = p^{n_i}``, applied from the top degree down.
    """
    if len(level) != f.d:
        raise ValueError("level vector length does not match the variable count")
    terms = dict(f.items())
    for i, n in enumerate(level):
        P = f.p**n
        tail = [comb(P, k) for k in range(P)]
        top = max((e[i] for e in terms), default=-1)
        for deg in range(top, P - 1, -1):
            hits = [e for e in terms if e[i] == deg]
            for e in hits:
                c = terms.pop(e)
                shift = deg - P
                for k in range(1, P):
                    e2 = e[:i] + (k + shift,) + e[i + 1:]
                    v = terms.get(e2, 0) - c * tail[k]
                    if v:
                        terms[e2] = v
                    else:
                        terms.pop(e2, None)
    return LambdaPolynomial(f.p, f.d, terms)


def level_basis(p: int, level: LevelVector) -> list[Exponent]:
    """Monomial exponents ``a`` with ``0 <= a_i < p^{n_i}`` in lexicographic order."""
    return list(product(*(range(p**n) for n in level)))


def determinant(rows: Sequence[Sequence[LambdaPolynomial]], p: int, d: int) -> LambdaPolynomial:
    """Determinant by cofactor expansion (presentations are small)."""
    n = len(rows)
    if n == 0:
        return LambdaPolynomial.constant(p, d, 1)
    if n == 1:
        return rows[0][0]
    total = LambdaPolynomial(p, d)
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * determinant(minor, p, d)
        total = total - term if j % 2 else total + term
    return total


def _primitive(coeffs: list) -> list[int]:
    """Scale a rational coefficient list to a primitive integer list."""
    den = 1
    for c in coeffs:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    g = g or 1
    ints = [c // g for c in ints]
    while ints and ints[-1] == 0:
        ints.pop()
    if ints and ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def rational_gcd(f: LambdaPolynomial, g: LambdaPolynomial) -> LambdaPolynomial:
    """Primitive integer generator of the gcd of ``f`` and ``g`` in Q[T]."""
    f._check(g)
    a = [Fraction(c) for c in f.coefficients()]
    b = [Fraction(c) for c in g.coefficients()]
    while b:
        while len(a) >= len(b) and a:
            c = a[-1] / b[-1]
            shift = len(a) - len(b)
            for j, x in enumerate(b):
                a[shift + j] -= c * x
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    if not a:
        return LambdaPolynomial(f.p, 1)
    return LambdaPolynomial.from_coefficients(f.p, _primitive(a))
