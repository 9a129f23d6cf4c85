"""Presented modules over the Iwasawa algebra and their finite-level coinvariants.

A module ``M = coker(A: Λ^s -> Λ^r)`` is flattened at a level ``n`` over the
monomial basis of ``Z[T]/(w_{n_1}(T_1), ..., w_{n_d}(T_d))``; the p-part of
the integer cokernel of that matrix is ``M_{U_n}``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Sequence

from .linalg import mat_mul, rank_exact, snf_mod_prime_power
from .poly import LambdaPolynomial, LevelVector, level_basis, multi_norm, reduce_mod_level

DEFAULT_PRECISION = 4


def default_precision() -> int:
    raw = os.environ.get("IWALAB_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    value = int(raw)
    if value < 1:
        raise ValueError("IWALAB_PRECISION must be a positive integer")
    return value


class NotCoinvariantFinite(ValueError):
    """Raised when ``M_U`` is infinite at the requested level."""

    def __init__(self, level, rank, expected):
        super().__init__(
            f"not coinvariant-finite at level {tuple(level)}: "
            f"rank {rank} < {expected}")
        self.level = tuple(level)
        self.rank = rank
        self.expected = expected


@dataclass(frozen=True)
class ModulePresentation:
    """``M = coker(A)`` with ``A`` an r x s matrix of polynomials."""

    p: int
    d: int
    matrix: tuple[tuple[LambdaPolynomial, ...], ...]
    relations: int
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        for row in self.matrix:
            if len(row) != self.relations:
                raise ValueError("presentation rows must all have `relations` entries")
            for f in row:
                if (f.p, f.d) != (self.p, self.d):
                    raise ValueError("presentation entries must share p and d")

    @classmethod
    def build(cls, p: int, d: int, rows: Sequence[Sequence[LambdaPolynomial]],
              relations: int | None = None, name: str | None = None):
        rows = tuple(tuple(r) for r in rows)
        if relations is None:
            relations = len(rows[0]) if rows else 0
        return cls(p, d, rows, relations, name)

    @property
    def generators(self) -> int:
        return len(self.matrix)

    @property
    def is_square(self) -> bool:
        return self.generators == self.relations


class GroupAlgebraLevel:
    """``Z[G/U_n]`` with the monomial basis ``T^a``, ``0 <= a_i < p^{n_i}``."""

    def __init__(self, p: int, level: LevelVector):
        self.p = p
        self.level = tuple(level)
        self.d = len(self.level)
        self.basis = level_basis(p, self.level)
        self.index = {a: k for k, a in enumerate(self.basis)}

    @property
    def size(self) -> int:
        return len(self.basis)

    def vector(self, f: LambdaPolynomial) -> list[int]:
        out = [0] * self.size
        for e, c in reduce_mod_level(f, self.level).items():
            out[self.index[e]] = c
        return out

    def polynomial(self, vec: Sequence[int]) -> LambdaPolynomial:
        return LambdaPolynomial(self.p, self.d, {self.basis[k]: c for k, c in enumerate(vec) if c})

    def mult_matrix(self, f: LambdaPolynomial) -> list[list[int]]:
        """Matrix of multiplication by ``f``; column k is ``f * T^{basis[k]}``."""
        f = reduce_mod_level(f, self.level)
        cols = [self.vector(f * LambdaPolynomial(self.p, self.d, {a: 1})) for a in self.basis]
        return [[cols[j][i] for j in range(self.size)] for i in range(self.size)]

    def ambient_to_polys(self, vec: Sequence[int]) -> list[LambdaPolynomial]:
        D = self.size
        return [self.polynomial(vec[i * D:(i + 1) * D]) for i in range(len(vec) // D)]

    def polys_to_ambient(self, polys: Sequence[LambdaPolynomial]) -> list[int]:
        out: list[int] = []
        for f in polys:
            out.extend(self.vector(f))
        return out


@lru_cache(maxsize=None)
def _level_ring(p: int, level: LevelVector) -> GroupAlgebraLevel:
    return GroupAlgebraLevel(p, level)


@lru_cache(maxsize=None)
def flatten(M: ModulePresentation, level: LevelVector) -> tuple[tuple[int, ...], ...]:
    """Integer matrix of ``A`` over ``Z[G/U_n]``: rows ``(i, a)``, columns ``(j, b)``."""
    ring = _level_ring(M.p, tuple(level))
    D = ring.size
    rows = [[0] * (M.relations * D) for _ in range(M.generators * D)]
    for i, row in enumerate(M.matrix):
        for j, f in enumerate(row):
            if f.is_zero():
                continue
            block = ring.mult_matrix(f)
            for a in range(D):
                target = rows[i * D + a]
                for b in range(D):
                    target[j * D + b] = block[a][b]
    return tuple(tuple(r) for r in rows)


def levels_up_to(bound: LevelVector) -> list[LevelVector]:
    return [tuple(n) for n in product(*(range(b + 1) for b in bound))]


def leq(n: LevelVector, n2: LevelVector) -> bool:
    return all(a <= b for a, b in zip(n, n2))


@dataclass(frozen=True)
class LevelFiniteness:
    level: LevelVector
    rank: int
    expected_rank: int

    @property
    def finite(self) -> bool:
        return self.rank == self.expected_rank

    @property
    def deficit(self) -> int:
        return self.expected_rank - self.rank


@dataclass(frozen=True)
class ScfCertificate:
    levels: tuple[LevelFiniteness, ...]

    @property
    def verdict(self) -> bool:
        return all(lv.finite for lv in self.levels)

    def first_failure(self) -> LevelFiniteness | None:
        return next((lv for lv in self.levels if not lv.finite), None)


@lru_cache(maxsize=None)
def level_finiteness(M: ModulePresentation, level: LevelVector) -> LevelFiniteness:
    level = tuple(level)
    D = _level_ring(M.p, level).size
    expected = M.generators * D
    rank = rank_exact(flatten(M, level)) if expected else 0
    return LevelFiniteness(level, rank, expected)


def is_scf(M: ModulePresentation, bound: LevelVector) -> ScfCertificate:
    """Exact finiteness certificate for every level ``n <= bound``."""
    if len(bound) != M.d:
        raise ValueError("bound has the wrong number of coordinates")
    return ScfCertificate(tuple(level_finiteness(M, n) for n in levels_up_to(tuple(bound))))


def _reduce_rows(A, divisors, p):
    return tuple(tuple(x % p**e for x in row) for row, e in zip(A, divisors))


def compose_matrices(A, B, divisors, p):
    """``A @ B`` with row i reduced modulo ``p^{divisors[i]}``."""
    return _reduce_rows(mat_mul(A, B), divisors, p)


def identity_matrix(divisors, p):
    k = len(divisors)
    return _reduce_rows([[int(i == j) for j in range(k)] for i in range(k)], divisors, p)


def matrix_power(A, k, divisors, p):
    result = identity_matrix(divisors, p)
    base = A
    while k:
        if k & 1:
            result = compose_matrices(result, base, divisors, p)
        base = compose_matrices(base, base, divisors, p)
        k >>= 1
    return result


@dataclass(frozen=True, eq=False)
class FiniteLevelModule:
    """``⊕_j Z/p^{e_j}`` with the action of ``γ_i = 1 + T_i`` at a level.

    ``actions[i][r][c]`` is the r-th coordinate of ``γ_i`` applied to the c-th
    generator, reduced modulo ``p^{e_r}``. Modules computed as coinvariants
    keep their presentation and the coordinate maps to and from the ambient
    ``Z[G/U]^r``; duals and twists do not.
    """

    p: int
    level: LevelVector
    divisors: tuple[int, ...]
    actions: tuple[tuple[tuple[int, ...], ...], ...]
    presentation: ModulePresentation | None = None
    precision: int | None = None
    to_coords: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)
    representatives: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        self.validate()

    @property
    def d(self) -> int:
        return len(self.level)

    @property
    def rank(self) -> int:
        return len(self.divisors)

    @property
    def exponent(self) -> int:
        return max(self.divisors, default=0)

    @property
    def order_log(self) -> int:
        return sum(self.divisors)

    @property
    def group_order(self) -> int:
        return self.p**self.order_log

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(v % self.p**e for v, e in zip(x, self.divisors))

    def act(self, i: int, x: Sequence[int]) -> tuple[int, ...]:
        G = self.actions[i]
        return self.reduce([sum(G[r][c] * x[c] for c in range(self.rank)) for r in range(self.rank)])

    def elements(self):
        for x in product(*(range(self.p**e) for e in self.divisors)):
            yield x

    def basis_element(self, j: int) -> tuple[int, ...]:
        return self.reduce([int(k == j) for k in range(self.rank)])

    def coords(self, ambient: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of an ambient vector of ``Z[G/U]^r`` (coinvariants only)."""
        if self.to_coords is None:
            raise ValueError("module has no ambient coordinates")
        return self.reduce([sum(a * b for a, b in zip(row, ambient)) for row in self.to_coords])

    def representative(self, j: int) -> list[int]:
        """An ambient lift of the j-th generator (coinvariants only)."""
        if self.representatives is None:
            raise ValueError("module has no ambient representatives")
        return [row[j] for row in self.representatives]

    def validate(self):
        p, divs = self.p, self.divisors
        ident = identity_matrix(divs, p)
        for i, G in enumerate(self.actions):
            if _reduce_rows(G, divs, p) != tuple(map(tuple, G)):
                raise AssertionError(f"action {i} is not reduced")
            for c, e in enumerate(divs):
                if any((G[r][c] * p**e) % p**divs[r] for r in range(len(divs))):
                    raise AssertionError(f"action {i} is not well defined")
            if matrix_power(G, p ** self.level[i], divs, p) != ident:
                raise AssertionError(f"γ_{i + 1}^(p^n) is not the identity")
        for a in range(len(self.actions)):
            for b in range(a + 1, len(self.actions)):
                Ga, Gb = self.actions[a], self.actions[b]
                if compose_matrices(Ga, Gb, divs, p) != compose_matrices(Gb, Ga, divs, p):
                    raise AssertionError("actions do not commute")

    def same_structure(self, other: FiniteLevelModule) -> bool:
        return (self.p, self.level, self.divisors, self.actions) == (
            other.p, other.level, other.divisors, other.actions)


@lru_cache(maxsize=None)
def _stable_exponents(M: ModulePresentation, level: LevelVector, N: int) -> tuple[int, ...]:
    lf = level_finiteness(M, level)
    if not lf.finite:
        raise NotCoinvariantFinite(level, lf.rank, lf.expected_rank)
    ring = _level_ring(M.p, level)
    A = flatten(M, level)
    rows = M.generators * ring.size
    while True:
        exps = snf_mod_prime_power(A, M.p, N, cols=M.relations * ring.size,
                                   left=False, right=False).exponents
        # full row rank: every ambient coordinate has a diagonal entry
        if len(exps) == rows and N not in exps:
            return exps
        N *= 2


def _coinvariants(M: ModulePresentation, level: LevelVector, N: int) -> FiniteLevelModule:
    exps = _stable_exponents(M, level, N)
    # transforms depend on the working precision; fix it so bases are canonical
    return _canonical_coinvariants(M, level, max(exps, default=0) + 1)


@lru_cache(maxsize=None)
def _canonical_coinvariants(M: ModulePresentation, level: LevelVector, N: int) -> FiniteLevelModule:
    p = M.p
    ring = _level_ring(p, level)
    A = flatten(M, level)
    rows = M.generators * ring.size
    snf = snf_mod_prime_power(A, p, N, cols=M.relations * ring.size,
                              right=False, left_inverse=True)
    exps = snf.exponents
    keep = [k for k in range(rows) if exps[k] > 0]
    divisors = tuple(exps[k] for k in keep)
    to_coords = tuple(snf.left[k] for k in keep)
    reps = tuple(tuple(row[k] for k in keep) for row in snf.left_inverse)
    actions = []
    for i in range(M.d):
        gamma = LambdaPolynomial.variable(p, M.d, i) + 1
        cols = []
        for j in range(len(keep)):
            polys = ring.ambient_to_polys([row[j] for row in reps])
            moved = ring.polys_to_ambient([gamma * f for f in polys])
            cols.append([sum(a * b for a, b in zip(r, moved)) for r in to_coords])
        G = [[cols[c][r] for c in range(len(keep))] for r in range(len(keep))]
        actions.append(_reduce_rows(G, divisors, p))
    return FiniteLevelModule(p, level, divisors, tuple(actions), M, N, to_coords, reps)


def coinvariants(M: ModulePresentation, level: LevelVector,
                 precision: int | None = None) -> FiniteLevelModule:
    """``M_{U_n}`` as a finite module with its group action.

    Precision is raised automatically until the Smith form is unsaturated, so
    the result does not depend on the starting precision.
    """
    level = tuple(level)
    if len(level) != M.d:
        raise ValueError("level has the wrong number of coordinates")
    return _coinvariants(M, level, precision or default_precision())


def coinvariant_order(M: ModulePresentation, level: LevelVector,
                      precision: int | None = None) -> int | None:
    """``log_p |M_{U_n}|``, or ``None`` when the coinvariants are infinite."""
    level = tuple(level)
    if not level_finiteness(M, level).finite:
        return None
    return sum(_stable_exponents(M, level, precision or default_precision()))


@dataclass(frozen=True, eq=False)
class FiniteMorphism:
    """Homomorphism given by ``matrix[r][c]`` = r-th target coordinate of generator c."""

    source: FiniteLevelModule
    target: FiniteLevelModule
    matrix: tuple[tuple[int, ...], ...]

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        k = self.source.rank
        return self.target.reduce(
            [sum(row[c] * x[c] for c in range(k)) for row in self.matrix])

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.matrix for v in row)

    def is_well_defined(self) -> bool:
        p = self.source.p
        return all(
            (self.matrix[r][c] * p**e) % p**self.target.divisors[r] == 0
            for c, e in enumerate(self.source.divisors)
            for r in range(self.target.rank))

    def is_equivariant(self) -> bool:
        p = self.source.p
        for Gs, Gt in zip(self.source.actions, self.target.actions):
            left = compose_matrices(self.matrix, Gs, self.target.divisors, p)
            right = compose_matrices(Gt, self.matrix, self.target.divisors, p)
            if left != right:
                return False
        return True

    def then(self, other: FiniteMorphism) -> FiniteMorphism:
        """``other ∘ self``."""
        if other.source is not self.target and not other.source.same_structure(self.target):
            raise ValueError("morphisms are not composable")
        M = compose_matrices(other.matrix, self.matrix, other.target.divisors, self.source.p)
        return FiniteMorphism(self.source, other.target, M)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(row[c] for row in self.matrix) for c in range(self.source.rank)]

    def image_exponents(self) -> tuple[int, ...]:
        from .linalg import subgroup_exponents
        return subgroup_exponents(self.columns(), self.target.divisors, self.source.p)


def _transport(src: FiniteLevelModule, tgt: FiniteLevelModule, multiplier: LambdaPolynomial):
    p = src.p
    src_ring = _level_ring(p, src.level)
    tgt_ring = _level_ring(p, tgt.level)
    cols = []
    for j in range(src.rank):
        polys = src_ring.ambient_to_polys(src.representative(j))
        cols.append(tgt.coords(tgt_ring.polys_to_ambient([multiplier * f for f in polys])))
    matrix = tuple(tuple(cols[c][r] for c in range(src.rank)) for r in range(tgt.rank))
    return FiniteMorphism(src, tgt, matrix)


def norm_morphism(M: ModulePresentation, n: LevelVector, n2: LevelVector,
                  precision: int | None = None) -> FiniteMorphism:
    """``N_{U/V}: M_{U_n} -> M_{U_{n'}}``, multiplication by ``w_{n'}/w_n``."""
    n, n2 = tuple(n), tuple(n2)
    if not leq(n, n2):
        raise ValueError(f"norm needs {n} <= {n2}")
    src = coinvariants(M, n, precision)
    tgt = coinvariants(M, n2, precision)
    return _transport(src, tgt, multi_norm(M.p, n, n2))


def projection_morphism(M: ModulePresentation, n2: LevelVector, n: LevelVector,
                        precision: int | None = None) -> FiniteMorphism:
    """The natural surjection ``M_{U_{n'}} -> M_{U_n}``."""
    n, n2 = tuple(n), tuple(n2)
    if not leq(n, n2):
        raise ValueError(f"projection needs {n} <= {n2}")
    src = coinvariants(M, n2, precision)
    tgt = coinvariants(M, n, precision)
    return _transport(src, tgt, LambdaPolynomial.constant(M.p, M.d, 1))


def scalar_morphism(X: FiniteLevelModule, c: int) -> FiniteMorphism:
    k = X.rank
    return FiniteMorphism(X, X, _reduce_rows(
        [[c * int(i == j) for j in range(k)] for i in range(k)], X.divisors, X.p))


def dual(X: FiniteLevelModule) -> FiniteLevelModule:
    """Pontryagin dual with ``(γ·φ)(x) = φ(γx)``, in the dual basis.

    For the dual basis ``χ_j(e_k) = δ_jk / p^{e_j}`` the action matrix entry
    ``(k, i)`` is ``G[i][k] * p^{e_k - e_i}``; when the exponent is negative
    the division is exact because ``G`` is well defined.
    """
    p, divs = X.p, X.divisors
    k = X.rank
    actions = []
    for G in X.actions:
        D = [[0] * k for _ in range(k)]
        for r in range(k):
            for c in range(k):
                shift = divs[r] - divs[c]
                if shift >= 0:
                    D[r][c] = G[c][r] * p**shift
                else:
                    q, rem = divmod(G[c][r], p**-shift)
                    assert rem == 0
                    D[r][c] = q
        actions.append(_reduce_rows(D, divs, p))
    return FiniteLevelModule(p, X.level, divs, tuple(actions))


def iota_twist(X: FiniteLevelModule) -> FiniteLevelModule:
    """Same group, each ``γ_i`` replaced by its inverse ``γ_i^(p^{n_i} - 1)``."""
    actions = tuple(matrix_power(G, X.p ** n - 1, X.divisors, X.p)
                    for G, n in zip(X.actions, X.level))
    return FiniteLevelModule(X.p, X.level, X.divisors, actions)
