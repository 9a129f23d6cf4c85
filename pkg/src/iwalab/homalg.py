"""Equivariant maps into torsion group rings and the identity-coefficient map.

``Hom_{Z[G/U]}(X, (Q_p/Z_p)[G/U])`` is computed at torsion level ``t`` (the
exponent of ``X``) as the kernel of one linear system over ``Z/p^t``. Group
ring elements use the group basis ``γ^a = Π (1+T_i)^{a_i}`` in lexicographic
order of ``a``; index 0 is the identity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from .linalg import kernel_mod, subgroup_exponents
from .modules import (
    FiniteLevelModule,
    ModulePresentation,
    _level_ring,
    coinvariants,
    compose_matrices,
    identity_matrix,
    dual,
    matrix_power,
    norm_morphism,
)
from .poly import LambdaPolynomial, level_basis, w_poly

EXHAUSTIVE_LIMIT = 10**4


@lru_cache(maxsize=None)
def _group_basis(p: int, level: tuple[int, ...]):
    basis = level_basis(p, level)
    index = {a: k for k, a in enumerate(basis)}
    return basis, index


def _shift_back(p, level, i):
    """Index map ``σ -> γ_i^{-1} σ`` on the group basis."""
    basis, index = _group_basis(p, level)
    P = p ** level[i]
    return [index[a[:i] + ((a[i] - 1) % P,) + a[i + 1:]] for a in basis]


@dataclass(frozen=True)
class GroupRingElement:
    """Element of ``(Z/p^t)[G/U]``, standing for the p^t-torsion of ``(Q_p/Z_p)[G/U]``."""

    p: int
    level: tuple[int, ...]
    t: int
    coeffs: tuple[int, ...]

    def identity_coefficient(self) -> int:
        return self.coeffs[0]

    def project(self, level: tuple[int, ...]) -> GroupRingElement:
        """Image under ``Z[G/V] -> Z[G/U]``: coefficients summed over cosets."""
        basis, _ = _group_basis(self.p, self.level)
        _, target = _group_basis(self.p, level)
        out = [0] * len(target)
        for a, c in zip(basis, self.coeffs):
            out[target[tuple(x % self.p**n for x, n in zip(a, level))]] += c
        m = self.p**self.t
        return GroupRingElement(self.p, level, self.t, tuple(c % m for c in out))


@dataclass(frozen=True, eq=False)
class EquivariantHom:
    """``f: X -> (Z/p^t)[G/U]``; ``images[j]`` lists the group-basis coefficients of ``f(e_j)``."""

    source: FiniteLevelModule
    t: int
    images: tuple[tuple[int, ...], ...]

    @property
    def p(self) -> int:
        return self.source.p

    @property
    def level(self) -> tuple[int, ...]:
        return self.source.level

    def __call__(self, x: Sequence[int]) -> GroupRingElement:
        m = self.p**self.t
        D = len(self.images[0]) if self.images else len(_group_basis(self.p, self.level)[0])
        out = [0] * D
        for xj, img in zip(x, self.images):
            if xj:
                for s in range(D):
                    out[s] += xj * img[s]
        return GroupRingElement(self.p, self.level, self.t, tuple(c % m for c in out))

    def __eq__(self, other):
        if not isinstance(other, EquivariantHom):
            return NotImplemented
        return (self.source is other.source and self.t == other.t
                and self.images == other.images)

    __hash__ = None

    def respects_orders(self) -> bool:
        m = self.p**self.t
        return all((c * self.p**e) % m == 0
                   for img, e in zip(self.images, self.source.divisors) for c in img)

    def is_equivariant(self) -> bool:
        p, m, X = self.p, self.p**self.t, self.source
        for i, G in enumerate(X.actions):
            back = _shift_back(p, self.level, i)
            for j in range(X.rank):
                lhs = [sum(G[k][j] * self.images[k][s] for k in range(X.rank)) % m
                       for s in range(len(back))]
                rhs = [self.images[j][back[s]] for s in range(len(back))]
                if lhs != rhs:
                    return False
        return True

    def is_valid(self) -> bool:
        return self.respects_orders() and self.is_equivariant()

    def precompose(self, i: int) -> EquivariantHom:
        """``f ∘ γ_i``, the action of ``γ_i`` on the Hom group."""
        X, m = self.source, self.p**self.t
        G = X.actions[i]
        D = len(self.images[0]) if self.images else 0
        images = tuple(
            tuple(sum(G[k][j] * self.images[k][s] for k in range(X.rank)) % m for s in range(D))
            for j in range(X.rank))
        return EquivariantHom(X, self.t, images)


@dataclass(frozen=True, eq=False)
class Character:
    """Homomorphism ``X -> Z/p^t`` given by its values on the generators of ``X``."""

    source: FiniteLevelModule
    t: int
    values: tuple[int, ...]

    def __call__(self, x: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(x, self.values)) % self.source.p**self.t

    def dual_coords(self) -> tuple[int, ...]:
        """Coordinates in the dual basis ``χ_j(e_k) = δ_jk / p^{e_j}``."""
        p = self.source.p
        out = []
        for v, e in zip(self.values, self.source.divisors):
            q, r = divmod(v, p ** (self.t - e))
            if r:
                raise ValueError("values do not define a homomorphism")
            out.append(q % p**e)
        return tuple(out)

    @classmethod
    def from_dual_coords(cls, X: FiniteLevelModule, coords: Sequence[int]) -> Character:
        t = X.exponent
        m = X.p**t
        return cls(X, t, tuple((c * X.p ** (t - e)) % m for c, e in zip(coords, X.divisors)))


@dataclass(frozen=True, eq=False)
class HomSpace:
    """The group of equivariant maps, as ``⊕ Z/p^{a_k}`` on independent generators."""

    source: FiniteLevelModule
    t: int
    generators: tuple[EquivariantHom, ...]
    exponents: tuple[int, ...]

    @property
    def divisors(self) -> tuple[int, ...]:
        return tuple(sorted(self.exponents))

    @property
    def order_log(self) -> int:
        return sum(self.exponents)

    def combine(self, coeffs: Sequence[int]) -> EquivariantHom:
        X, m = self.source, self.source.p**self.t
        D = len(_group_basis(X.p, X.level)[0])
        acc = [[0] * D for _ in range(X.rank)]
        for c, g in zip(coeffs, self.generators):
            if c:
                for j in range(X.rank):
                    for s in range(D):
                        acc[j][s] += c * g.images[j][s]
        return EquivariantHom(X, self.t, tuple(tuple(v % m for v in row) for row in acc))

    def coefficient_ranges(self):
        return [range(self.source.p**a) for a in self.exponents]

    def elements(self):
        for coeffs in product(*self.coefficient_ranges()):
            yield self.combine(coeffs)


def hom_system(X: FiniteLevelModule, t: int) -> list[list[int]]:
    """Constraint rows in the unknowns ``y[j, σ]`` (index ``j*D + σ``).

    Order rows: ``p^{e_j} y[j, σ] = 0``. Equivariance rows:
    ``Σ_k G_i[k][j] y[k, σ] - y[j, γ_i^{-1} σ] = 0``.
    """
    p = X.p
    D = len(_group_basis(p, X.level)[0])
    n = X.rank * D
    rows: list[list[int]] = []
    for j, e in enumerate(X.divisors):
        if e < t:
            for s in range(D):
                row = [0] * n
                row[j * D + s] = p**e
                rows.append(row)
    for i, G in enumerate(X.actions):
        back = _shift_back(p, X.level, i)
        for j in range(X.rank):
            for s in range(D):
                row = [0] * n
                for k in range(X.rank):
                    row[k * D + s] += G[k][j]
                row[j * D + back[s]] -= 1
                rows.append(row)
    return rows


@lru_cache(maxsize=None)
def hom_to_gpring(X: FiniteLevelModule) -> HomSpace:
    """Solve for all equivariant ``X -> (Z/p^t)[G/U]`` with ``t`` the exponent of ``X``."""
    t = X.exponent
    D = len(_group_basis(X.p, X.level)[0])
    n = X.rank * D
    if t == 0:
        return HomSpace(X, 0, (), ())
    gens, exps = [], []
    for vec, a in kernel_mod(hom_system(X, t), X.p, t, cols=n):
        images = tuple(tuple(vec[j * D:(j + 1) * D]) for j in range(X.rank))
        gens.append(EquivariantHom(X, t, images))
        exps.append(a)
    return HomSpace(X, t, tuple(gens), tuple(exps))


def eta(f: EquivariantHom) -> Character:
    """``f -> f_1``: the identity coefficient of ``f``."""
    return Character(f.source, f.t, tuple(img[0] if img else 0 for img in f.images))


def eta_inverse(phi: Character) -> EquivariantHom:
    """``f(x) = Σ_σ φ(σ^{-1} x) σ``."""
    X, t = phi.source, phi.t
    p, m = X.p, X.p**phi.t
    basis, _ = _group_basis(p, X.level)
    inverses = [matrix_power(G, p**n - 1, X.divisors, p) for G, n in zip(X.actions, X.level)]
    powers = []
    for G, n in zip(inverses, X.level):
        seq = [None] * (p**n)
        cur = identity_matrix(X.divisors, p)
        for a in range(p**n):
            seq[a] = cur
            cur = compose_matrices(cur, G, X.divisors, p)
        powers.append(seq)
    images = [[0] * len(basis) for _ in range(X.rank)]
    for s, a in enumerate(basis):
        # row vector φ ∘ σ^{-1}, one factor per coordinate
        row = list(phi.values)
        for i, ai in enumerate(a):
            if ai:
                S = powers[i][ai]
                row = [sum(row[k] * S[k][c] for k in range(X.rank)) % m for c in range(X.rank)]
        for j in range(X.rank):
            images[j][s] = row[j] % m
    return EquivariantHom(X, t, tuple(tuple(r) for r in images))


class FactoringError(AssertionError):
    """``ρ(h)`` failed to factor through the lower level (an implementation bug)."""


def rho(h: EquivariantHom, level: Sequence[int]) -> EquivariantHom:
    """Push ``h`` along ``Z[G/V] -> Z[G/U]`` and re-base it on ``M_{U_n}``."""
    X2 = h.source
    M = X2.presentation
    if M is None:
        raise ValueError("rho needs a hom whose source comes from a presentation")
    level = tuple(level)
    if level == X2.level:
        return h
    X = coinvariants(M, level, X2.precision)
    p, t2, t = X2.p, h.t, X.exponent
    ring, ring2 = _level_ring(p, level), _level_ring(p, X2.level)

    def pushed(ambient2):
        return h(X2.coords(ambient2)).project(level)

    # the pushed map must vanish on ker(M_{U_n'} -> M_{U_n})
    for i, n in enumerate(level):
        w = w_poly(p, n, i, M.d)
        for r in range(M.generators):
            for a in ring2.basis:
                polys = [LambdaPolynomial(p, M.d) for _ in range(M.generators)]
                polys[r] = w * LambdaPolynomial(p, M.d, {a: 1})
                if any(pushed(ring2.polys_to_ambient(polys)).coeffs):
                    raise FactoringError(f"rho does not factor at level {level}")
    images = []
    for j in range(X.rank):
        value = pushed(ring2.polys_to_ambient(ring.ambient_to_polys(X.representative(j))))
        scaled = []
        for c in value.coeffs:
            q, r = divmod(c, p ** (t2 - t))
            if r:
                raise FactoringError("pushed values exceed the torsion of M_U")
            scaled.append(q % p**t)
        images.append(tuple(scaled))
    return EquivariantHom(X, t, tuple(images))


@dataclass(frozen=True)
class NaturalityReport:
    source_level: tuple[int, ...]
    target_level: tuple[int, ...]
    passed: bool
    homs_checked: int
    elements_checked: int
    homs_exhaustive: bool
    elements_exhaustive: bool
    witness: dict | None = None


def _sample(space_ranges, rng, count):
    return [tuple(rng.randrange(len(r)) for r in space_ranges) for _ in range(count)]


def verify_eta_natural(M: ModulePresentation, n: Sequence[int], n2: Sequence[int],
                       seed: int = 0, precision: int | None = None,
                       limit: int = EXHAUSTIVE_LIMIT, samples: int = 64) -> NaturalityReport:
    """Check ``η(ρ(h))(x) = η(h)(N(x))`` for h at level n2 and x at level n."""
    n, n2 = tuple(n), tuple(n2)
    rng = random.Random(seed)
    X = coinvariants(M, n, precision)
    X2 = coinvariants(M, n2, precision)
    H2 = hom_to_gpring(X2)
    N = norm_morphism(M, n, n2, precision)
    p, t, t2 = M.p, X.exponent, X2.exponent
    m2 = p**t2

    homs_exhaustive = H2.order_log == 0 or p**H2.order_log <= limit
    if homs_exhaustive:
        hom_coeffs = list(product(*H2.coefficient_ranges()))
    else:
        k = len(H2.generators)
        hom_coeffs = [tuple(int(i == j) for i in range(k)) for j in range(k)]
        hom_coeffs += _sample(H2.coefficient_ranges(), rng, samples)

    elements_exhaustive = X.order_log == 0 or X.group_order <= limit
    if elements_exhaustive:
        xs = list(X.elements())
    else:
        xs = [X.basis_element(j) for j in range(X.rank)]
        xs += [tuple(rng.randrange(p**e) for e in X.divisors) for _ in range(samples)]
    dt = np.int64 if (X.rank + 2) * m2 * m2 < 2**62 else object
    xmat = np.array(xs, dtype=dt).reshape(len(xs), X.rank)
    images = [N(X.basis_element(j)) for j in range(X.rank)]

    for coeffs in hom_coeffs:
        h = H2.combine(coeffs)
        left = eta(rho(h, n)).values
        eh = eta(h)
        lv = [(v * p ** (t2 - t)) % m2 for v in left]
        rv = [eh(images[j]) for j in range(X.rank)]
        diff = np.array([(a - b) % m2 for a, b in zip(lv, rv)], dtype=dt)
        bad = np.nonzero((xmat @ diff) % m2)[0] if X.rank else []
        if len(bad):
            x = xs[int(bad[0])]
            witness = {
                "hom": list(coeffs),
                "element": list(x),
                "lhs": f"{sum(a * b for a, b in zip(x, lv)) % m2}/{m2}",
                "rhs": f"{sum(a * b for a, b in zip(x, rv)) % m2}/{m2}",
            }
            return NaturalityReport(n, n2, False, len(hom_coeffs), len(xs),
                                    homs_exhaustive, elements_exhaustive, witness)
    return NaturalityReport(n, n2, True, len(hom_coeffs), len(xs),
                            homs_exhaustive, elements_exhaustive)


@dataclass(frozen=True)
class DualityReport:
    level: tuple[int, ...]
    hom_divisors: tuple[int, ...]
    dual_divisors: tuple[int, ...]
    eta_image_divisors: tuple[int, ...]
    eta_injective_exhaustive: bool | None
    eta_equivariant: bool
    eta_inverse_roundtrip: bool
    homs_valid: bool

    @property
    def divisors_equal(self) -> bool:
        return self.hom_divisors == self.dual_divisors

    @property
    def eta_bijective(self) -> bool:
        # η is a homomorphism between groups of equal order; it is bijective iff onto
        onto = self.eta_image_divisors == self.dual_divisors
        return onto and self.divisors_equal and self.eta_injective_exhaustive is not False

    @property
    def passed(self) -> bool:
        return (self.divisors_equal and self.eta_bijective and self.eta_equivariant
                and self.eta_inverse_roundtrip and self.homs_valid)


def duality_check(M: ModulePresentation, level: Sequence[int], precision: int | None = None,
                  limit: int = EXHAUSTIVE_LIMIT) -> DualityReport:
    """Compare the solved Hom group with the dual of ``M_U`` and test ``η`` on it."""
    level = tuple(level)
    X = coinvariants(M, level, precision)
    H = hom_to_gpring(X)
    Xd = dual(X)
    p = X.p

    homs_valid = all(g.is_valid() for g in H.generators)
    chars = [eta(g) for g in H.generators]
    image = subgroup_exponents([c.dual_coords() for c in chars], X.divisors, p)

    injective = None
    if H.order_log == 0 or p**H.order_log <= limit:
        seen = {eta(f).values for f in H.elements()}
        injective = len(seen) == p**H.order_log

    equivariant = True
    for g, c in zip(H.generators, chars):
        for i in range(X.d):
            if eta(g.precompose(i)).dual_coords() != Xd.act(i, c.dual_coords()):
                equivariant = False

    roundtrip = True
    for g, c in zip(H.generators, chars):
        back = eta_inverse(c)
        if back.images != g.images or not back.is_valid():
            roundtrip = False
    for j in range(X.rank):
        phi = Character.from_dual_coords(X, X.basis_element(j))
        f = eta_inverse(phi)
        if not f.is_valid() or eta(f).values != phi.values:
            roundtrip = False

    return DualityReport(level, H.divisors, Xd.divisors, image, injective,
                         equivariant, roundtrip, homs_valid)
