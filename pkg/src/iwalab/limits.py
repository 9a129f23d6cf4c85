"""Direct systems of coinvariants under norms and what a finite horizon says about them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .charideal import char_from_presentation, char_iota
from .modules import (
    FiniteLevelModule,
    FiniteMorphism,
    ModulePresentation,
    NotCoinvariantFinite,
    coinvariant_order,
    coinvariants,
    is_scf,
    leq,
    norm_morphism,
    projection_morphism,
    scalar_morphism,
)
from .poly import LambdaPolynomial, iota_reversal, unit_normalize


def default_chain(bound: Sequence[int]) -> list[tuple[int, ...]]:
    """Diagonal levels ``(j, ..., j)`` clipped coordinatewise at ``bound``."""
    top = max(bound, default=0)
    return [tuple(min(j, b) for b in bound) for j in range(top + 1)]


def _index_exponent(n, n2) -> int:
    return sum(b - a for a, b in zip(n, n2))


def functor_witness(M: ModulePresentation, n, n2, precision: int | None = None) -> dict | None:
    """First basis element where ``projection ∘ norm`` differs from the index, if any."""
    N = norm_morphism(M, n, n2, precision)
    P = projection_morphism(M, n2, n, precision)
    X = N.source
    k = M.p ** _index_exponent(n, n2)
    for j in range(X.rank):
        e = X.basis_element(j)
        lhs = P(N(e))
        rhs = X.reduce([k * x for x in e])
        if lhs != rhs:
            return {"element": list(e), "lhs": list(lhs), "rhs": list(rhs)}
    return None


def functor_consistent(M: ModulePresentation, n, n2, precision: int | None = None) -> bool:
    """``projection ∘ norm`` equals multiplication by the index ``p^{Σ(n'_i - n_i)}``."""
    return functor_witness(M, n, n2, precision) is None


@dataclass(frozen=True)
class DirectSystem:
    parent: ModulePresentation
    chain: tuple[tuple[int, ...], ...]
    modules: tuple[FiniteLevelModule, ...]
    norms: tuple[FiniteMorphism, ...]

    @property
    def length(self) -> int:
        return len(self.chain) - 1

    def composite(self, j: int, k: int) -> FiniteMorphism:
        """Transition from ``chain[j]`` to ``chain[k]`` as a composite of steps."""
        if j > k:
            raise ValueError("composites only run up the chain")
        if j == k:
            return scalar_morphism(self.modules[j], 1)
        out = self.norms[j]
        for step in self.norms[j + 1:k]:
            out = out.then(step)
        return out

    def orders(self) -> list[int]:
        return [X.order_log for X in self.modules]


def build_direct_system(M: ModulePresentation, bound: Sequence[int],
                        chain: Sequence[Sequence[int]] | None = None,
                        precision: int | None = None) -> DirectSystem:
    chain = [tuple(n) for n in (chain if chain is not None else default_chain(bound))]
    if not chain:
        raise ValueError("a chain needs at least one level")
    for a, b in zip(chain, chain[1:]):
        if not leq(a, b):
            raise ValueError(f"chain is not monotone at {a} -> {b}")
    for n in chain:
        cert = is_scf(M, n)
        bad = cert.first_failure()
        if bad is not None:
            raise NotCoinvariantFinite(bad.level, bad.rank, bad.expected_rank)
    modules = tuple(coinvariants(M, n, precision) for n in chain)
    norms = tuple(norm_morphism(M, a, b, precision) for a, b in zip(chain, chain[1:]))
    S = DirectSystem(M, tuple(chain), modules, norms)
    for j in range(len(chain)):
        for k in range(j + 2, len(chain)):
            direct = norm_morphism(M, chain[j], chain[k], precision)
            if S.composite(j, k).matrix != direct.matrix:
                raise AssertionError(
                    f"norm composite {chain[j]} -> {chain[k]} disagrees with the direct norm")
    return S


@dataclass(frozen=True)
class ColimitReport:
    chain: tuple[tuple[int, ...], ...]
    per_step_image_divisors: tuple[tuple[int, ...], ...]
    zero_through_bound: bool
    stabilized_image_divisors: tuple[tuple[int, ...], ...]
    first_zero: tuple[int | None, ...]
    # a finite horizon is evidence that the colimit vanishes, never a proof
    evidence_only: bool = True

    def as_dict(self) -> dict:
        return {
            "chain": [list(n) for n in self.chain],
            "perStepImageDivisors": [list(x) for x in self.per_step_image_divisors],
            "zeroThroughBound": self.zero_through_bound,
            "stabilizedImageDivisors": [list(x) for x in self.stabilized_image_divisors],
            "firstZero": list(self.first_zero),
            "evidenceOnly": self.evidence_only,
        }


def colimit_analysis(S: DirectSystem) -> ColimitReport:
    L = S.length
    per_step = tuple(S.composite(0, k).image_exponents() for k in range(L + 1))
    stabilized = tuple(S.composite(j, L).image_exponents() for j in range(L + 1))
    first_zero = []
    for j in range(L + 1):
        hit = next((k for k in range(j, L + 1) if S.composite(j, k).is_zero()), None)
        first_zero.append(hit)
    if L == 0:
        zero = S.modules[0].rank == 0
    else:
        zero = all(first_zero[j] is not None for j in range(L))
    return ColimitReport(S.chain, per_step, zero, stabilized, tuple(first_zero))


def _require_d1(M: ModulePresentation):
    if M.d != 1:
        raise ValueError("this analysis is only available for d = 1")


def adjoint_divisors(M: ModulePresentation, bound: int,
                     precision: int | None = None) -> list[tuple[int, ...]]:
    """Divisors of the dual of the image of ``M_n`` in ``M_bound``, for each ``n < bound``.

    This is the finite-level shadow of the Iwasawa adjoint; a Pontryagin dual
    has the same divisors as the group itself.
    """
    _require_d1(M)
    bound = bound[0] if isinstance(bound, (tuple, list)) else bound
    S = build_direct_system(M, (bound,), precision=precision)
    return [S.composite(n, bound).image_exponents() for n in range(bound)]


@dataclass(frozen=True)
class DualPseudoReport:
    levels: tuple[int, ...]
    orders: tuple[int | None, ...]
    iota_orders: tuple[int | None, ...]
    iota_generator: LambdaPolynomial
    char_preserved: bool

    @property
    def orders_match(self) -> bool:
        return self.orders == self.iota_orders

    @property
    def passed(self) -> bool:
        return self.orders_match and self.char_preserved

    def as_dict(self) -> dict:
        return {
            "levels": list(self.levels),
            "orders": list(self.orders),
            "iotaOrders": list(self.iota_orders),
            "iotaGenerator": self.iota_generator.coefficients(),
            "charPreserved": self.char_preserved,
            "passed": self.passed,
        }


def dual_pseudo_order_check(M: ModulePresentation, bound: int,
                            precision: int | None = None) -> DualPseudoReport:
    """Compare ``|M_{U_n}|`` with the coinvariant orders of ``Λ/(f^ι)``, ``f`` = det.

    Orders are ``None`` where the coinvariants are infinite; both towers must
    then be infinite at the same levels.
    """
    _require_d1(M)
    if not M.is_square:
        raise ValueError(
            "the order check needs a square presentation; rewrite the module with as "
            "many relations as generators, or use the per-level duality checks instead")
    bound = bound[0] if isinstance(bound, (tuple, list)) else bound
    c = char_from_presentation(M, precision)
    g = unit_normalize(iota_reversal(c.generator))
    Mi = ModulePresentation.build(M.p, 1, [[g]], name=None)
    levels = tuple(range(bound + 1))
    orders = tuple(coinvariant_order(M, (n,), precision) for n in levels)
    iota_orders = tuple(coinvariant_order(Mi, (n,), precision) for n in levels)
    ci = char_iota(c)
    preserved = (ci.mu, ci.lam) == (c.mu, c.lam)
    return DualPseudoReport(levels, orders, iota_orders, g, preserved)


@dataclass(frozen=True)
class GrowthData:
    orders: tuple[int, ...]
    mu: Fraction
    lam: Fraction
    nu: Fraction
    residual: Fraction

    @property
    def integral(self) -> bool:
        return all(x.denominator == 1 for x in (self.mu, self.lam, self.nu))

    def as_dict(self) -> dict:
        def num(x):
            return int(x) if x.denominator == 1 else str(x)
        return {
            "orders": list(self.orders),
            "mu": num(self.mu),
            "lambda": num(self.lam),
            "nu": num(self.nu),
            "residual": num(self.residual),
        }


def fit_growth(p: int, orders: Sequence[int]) -> GrowthData:
    """Exact fit of ``e_n = μ p^n + λ n + ν`` through the last three points.

    The residual is the largest deviation at the earlier points.
    """
    L = len(orders) - 1
    if L < 2:
        raise ValueError("growth fit needs at least three levels (bound >= 2)")
    n = L - 2
    e0, e1, e2 = (Fraction(x) for x in orders[n:])
    d1, d2 = e1 - e0, e2 - e1
    # d1 = μ(p-1)p^n + λ, d2 = μ(p-1)p^{n+1} + λ
    mu = (d2 - d1) / ((p - 1) ** 2 * p**n)
    lam = d1 - mu * (p - 1) * p**n
    nu = e0 - mu * p**n - lam * n
    residual = max((abs(orders[k] - (mu * p**k + lam * k + nu)) for k in range(n)),
                   default=Fraction(0))
    return GrowthData(tuple(orders), mu, lam, nu, residual)


def growth_invariants(M: ModulePresentation, bound: int,
                      precision: int | None = None) -> GrowthData:
    _require_d1(M)
    bound = bound[0] if isinstance(bound, (tuple, list)) else bound
    if bound < 2:
        raise ValueError("growth fit needs at least three levels (bound >= 2)")
    orders = []
    for n in range(bound + 1):
        e = coinvariant_order(M, (n,), precision)
        if e is None:
            lf = is_scf(M, (n,)).first_failure()
            raise NotCoinvariantFinite(lf.level, lf.rank, lf.expected_rank)
        orders.append(e)
    return fit_growth(M.p, orders)


@dataclass(frozen=True)
class PseudoNullVerdict:
    colimit_zero: bool
    d1_finiteness: bool | None
    consistent: bool | None

    def as_dict(self) -> dict:
        return {
            "colimitZero": self.colimit_zero,
            "d1Finiteness": self.d1_finiteness,
            "consistent": self.consistent,
        }


def pseudo_null_verdict(M: ModulePresentation, bound: Sequence[int],
                        precision: int | None = None,
                        expected: bool | None = None,
                        report: ColimitReport | None = None) -> PseudoNullVerdict:
    """Colimit-zero evidence against the independent d = 1 finiteness test.

    For d = 1 pseudo-null means finite, which shows up as orders that stop
    growing. For d >= 2 the only comparison is with an ``expected`` flag.
    """
    bound = tuple(bound)
    if report is None:
        report = colimit_analysis(build_direct_system(M, bound, precision=precision))
    zero = report.zero_through_bound
    if M.d == 1:
        orders = [coinvariant_order(M, (n,), precision) for n in range(bound[0] + 1)]
        bounded = len(orders) < 2 or orders[-1] == orders[-2]
        consistent = zero == bounded
        if expected is not None:
            consistent = consistent and zero == expected
        return PseudoNullVerdict(zero, bounded, consistent)
    return PseudoNullVerdict(zero, None, None if expected is None else zero == expected)
