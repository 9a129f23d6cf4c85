"""Characteristic ideals of one-variable torsion modules.

The generator is the determinant of a square presentation, or in general the
gcd of the maximal minors (the divisorial hull of the Fitting ideal). It is
split as ``p^mu * P * unit`` with ``P`` distinguished of degree ``lambda``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .modules import ModulePresentation, default_precision
from .poly import LambdaPolynomial, determinant, iota_reversal, rational_gcd, unit_normalize


class NotTorsion(ValueError):
    pass


@dataclass(frozen=True)
class CharIdealData:
    p: int
    mu: int
    lam: int
    distinguished: LambdaPolynomial
    precision: int
    generator: LambdaPolynomial

    def as_dict(self) -> dict:
        return {
            "mu": self.mu,
            "lambda": self.lam,
            "distinguished": self.distinguished.coefficients(),
            "precision": self.precision,
        }


def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _mul_mod(a, b, m):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % m
    return out


def _series_inverse(q, lam, p):
    """Inverse of ``q`` modulo ``(p, T^lam)``; needs ``q[0]`` prime to p."""
    inv0 = pow(q[0], -1, p)
    out = [0] * lam
    for k in range(lam):
        acc = 1 if k == 0 else 0
        for j in range(1, k + 1):
            if j < len(q):
                acc -= q[j] * out[k - j]
        out[k] = (acc * inv0) % p
    return out


def weierstrass(f: LambdaPolynomial, N: int) -> tuple[int, int, list[int]]:
    """``(mu, lambda, P mod p^N)`` with ``f = p^mu P u`` and ``P`` distinguished.

    ``P`` is found by linear Hensel lifting of ``f/p^mu ≡ T^lam Q`` from mod p
    to mod p^N; it divides ``f`` in ``Z_p[T]``.
    """
    if f.is_zero():
        raise ValueError("zero has no Weierstrass decomposition")
    p = f.p
    mu = f.mu()
    g = [c // p**mu for c in f.coefficients()]
    lam = next(k for k, c in enumerate(g) if c % p)
    if lam == 0:
        return mu, 0, [1]
    P = [0] * lam + [1]
    Q = g[lam:]
    qbar = [c % p for c in Q]
    qinv = _series_inverse(qbar, lam, p)
    for k in range(1, N):
        prod = [0] * (len(P) + len(Q) - 1)
        for i, x in enumerate(P):
            for j, y in enumerate(Q):
                prod[i + j] += x * y
        size = max(len(g), len(prod))
        E = [((g[i] if i < len(g) else 0) - (prod[i] if i < len(prod) else 0)) for i in range(size)]
        assert all(c % p**k == 0 for c in E)
        E = [(c // p**k) % p for c in E]
        dP = _mul_mod(E, qinv, p)[:lam]
        dP += [0] * (lam - len(dP))
        rest = E[:]
        for i, c in enumerate(_mul_mod(qbar, dP, p)):
            if i < len(rest):
                rest[i] = (rest[i] - c) % p
            else:
                rest.append(-c % p)
        assert all(c == 0 for c in rest[:lam])
        dQ = _trim(rest[lam:])
        for i in range(lam):
            P[i] += p**k * dP[i]
        Q = Q + [0] * max(0, len(dQ) - len(Q))
        for i, c in enumerate(dQ):
            Q[i] += p**k * c
    m = p**N
    return mu, lam, [c % m for c in P]


def _char_data(generator: LambdaPolynomial, precision: int | None) -> CharIdealData:
    N = precision or default_precision()
    mu, lam, P = weierstrass(generator, N)
    dist = LambdaPolynomial.from_coefficients(generator.p, P)
    return CharIdealData(generator.p, mu, lam, dist, N, generator)


def characteristic_generator(M: ModulePresentation) -> LambdaPolynomial:
    """gcd of the maximal minors; the determinant when the presentation is square."""
    if M.d != 1:
        raise ValueError("characteristic ideals are only computed for d = 1")
    r, s = M.generators, M.relations
    rows = [list(row) for row in M.matrix]
    if r == s:
        det = determinant(rows, M.p, 1)
        if det.is_zero():
            raise NotTorsion("zero determinant: module not torsion-with-square-presentation")
        return det
    if r > s:
        raise NotTorsion("more generators than relations: module is not torsion")
    minors = []
    for cols in combinations(range(s), r):
        m = determinant([[row[c] for c in cols] for row in rows], M.p, 1)
        if not m.is_zero():
            minors.append(m)
    if not minors:
        raise NotTorsion("all maximal minors vanish: module is not torsion")
    mu = min(m.mu() for m in minors)
    g = minors[0]
    for m in minors[1:]:
        g = rational_gcd(g, m)
    g = rational_gcd(g, g)  # primitive, positive leading coefficient
    return g * (M.p ** (mu - g.mu()))


def char_from_square_presentation(M: ModulePresentation, precision: int | None = None) -> CharIdealData:
    if not M.is_square:
        raise ValueError("presentation is not square; use char_from_presentation")
    return _char_data(characteristic_generator(M), precision)


def char_from_presentation(M: ModulePresentation, precision: int | None = None) -> CharIdealData:
    return _char_data(characteristic_generator(M), precision)


def char_iota(c: CharIdealData) -> CharIdealData:
    """Characteristic data of the ι-twisted module."""
    return _char_data(unit_normalize(iota_reversal(c.generator)), c.precision)


def cross_check_growth(c: CharIdealData, growth) -> bool:
    return (c.mu, c.lam) == (growth.mu, growth.lam)
