"""The verification pipeline behind ``iwalab verify``.

The report is a plain dict with a fixed key layout so that it serializes
deterministically. It never records the starting precision: every quantity
in it is independent of that choice.
"""

from __future__ import annotations

from typing import Sequence

from .charideal import NotTorsion, char_from_presentation, char_iota, cross_check_growth
from .fileio import module_to_dict
from .homalg import duality_check, verify_eta_natural
from .limits import (
    adjoint_divisors,
    build_direct_system,
    colimit_analysis,
    dual_pseudo_order_check,
    fit_growth,
    functor_witness,
    pseudo_null_verdict,
)
from .modules import ModulePresentation, coinvariant_order, coinvariants, is_scf, leq, levels_up_to

CHECKS = ("duality", "naturality", "colimit", "growth", "char")

EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_HYPOTHESIS = 2
EXIT_INPUT = 3


def default_bound(d: int) -> tuple[int, ...]:
    return (2,) if d == 1 else (1,) * d


def parse_checks(spec: str | Sequence[str] | None) -> tuple[str, ...]:
    if spec is None:
        return CHECKS
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    items = [s.strip() for s in items if s.strip()]
    if "all" in items:
        return CHECKS
    unknown = [s for s in items if s not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)} (choose from {', '.join(CHECKS)}, all)")
    return tuple(c for c in CHECKS if c in items)


def _char_dict(c) -> dict:
    return {"mu": c.mu, "lambda": c.lam, "distinguished": c.distinguished.coefficients(),
            "precision": c.precision}


def _duality_dict(r) -> dict:
    return {
        "passed": r.passed,
        "homDivisors": list(r.hom_divisors),
        "dualDivisors": list(r.dual_divisors),
        "etaImageDivisors": list(r.eta_image_divisors),
        "etaBijective": r.eta_bijective,
        "etaInjectiveExhaustive": r.eta_injective_exhaustive,
        "etaEquivariant": r.eta_equivariant,
        "etaInverseRoundtrip": r.eta_inverse_roundtrip,
        "homsValid": r.homs_valid,
    }


def _naturality_dict(r) -> dict:
    return {
        "source": list(r.source_level),
        "target": list(r.target_level),
        "passed": r.passed,
        "homsChecked": r.homs_checked,
        "elementsChecked": r.elements_checked,
        "homsExhaustive": r.homs_exhaustive,
        "elementsExhaustive": r.elements_exhaustive,
        "witness": r.witness,
    }


def _growth_section(M, bound, c, precision) -> dict:
    orders = [coinvariant_order(M, (n,), precision) for n in range(bound + 2)]
    g = fit_growth(M.p, orders[:-1])
    g_next = fit_growth(M.p, orders) if orders[-1] is not None else None
    stable = g_next is not None and (g.mu, g.lam, g.nu) == (g_next.mu, g_next.lam, g_next.nu)
    out = {"fit": g.as_dict(), "fitNextLevel": g_next.as_dict() if g_next else None,
           "stable": stable}
    if c is None:
        out["status"] = "pass" if stable else "inconclusive"
        out["matchesChar"] = None
        return out
    match = cross_check_growth(c, g)
    out["matchesChar"] = match
    if stable:
        out["status"] = "pass" if match else "fail"
    else:
        # the last three points are not yet in the asymptotic regime
        out["status"] = "inconclusive"
    return out


def run_verify(M: ModulePresentation, bound: Sequence[int] | None = None,
               precision: int | None = None, seed: int = 0,
               checks: Sequence[str] | None = None,
               expected_pseudo_null: bool | None = None) -> tuple[dict, int]:
    """Run the enabled checks and return ``(report, exit_code)``.

    ``expected_pseudo_null`` (known for catalog entries) is compared with the
    colimit verdict; it is the only cross-check available when ``d >= 2``.
    """
    checks = parse_checks(checks)
    bound = tuple(bound) if bound is not None else default_bound(M.d)
    if len(bound) != M.d:
        raise ValueError(f"bound {bound} has {len(bound)} coordinates, module has d = {M.d}")
    if any(b < 0 for b in bound):
        raise ValueError("bound coordinates must be nonnegative")
    failures: list[dict] = []
    report: dict = {
        "module": module_to_dict(M),
        "parameters": {"bound": list(bound), "seed": seed, "checks": list(checks)},
    }

    cert = is_scf(M, bound)
    report["scf"] = {
        "verdict": cert.verdict,
        "levels": [{"level": list(lv.level), "rank": lv.rank, "expectedRank": lv.expected_rank}
                   for lv in cert.levels],
    }
    bad = cert.first_failure()
    if bad is not None:
        report["scf"]["certificate"] = {
            "level": list(bad.level), "rank": bad.rank,
            "expectedRank": bad.expected_rank, "deficit": bad.deficit,
            "reason": "the flattened presentation does not have full row rank, "
                      "so the coinvariants at this level are infinite",
        }
        report["failures"] = []
        report["verdict"] = "hypothesis-failure"
        report["exitCode"] = EXIT_HYPOTHESIS
        return report, EXIT_HYPOTHESIS

    levels = levels_up_to(bound)
    level_sections = []
    for n in levels:
        X = coinvariants(M, n, precision)
        sec = {"level": list(n), "divisors": list(X.divisors), "orderLog": X.order_log}
        if "duality" in checks:
            r = duality_check(M, n, precision)
            sec["duality"] = _duality_dict(r)
            if not r.passed:
                failures.append({"check": "duality", "level": list(n),
                                 "witness": {"homDivisors": list(r.hom_divisors),
                                             "dualDivisors": list(r.dual_divisors),
                                             "etaImageDivisors": list(r.eta_image_divisors)}})
        level_sections.append(sec)
    report["levels"] = level_sections

    if "naturality" in checks:
        nat, fun = [], []
        for a in levels:
            for b in levels:
                if a == b or not leq(a, b):
                    continue
                r = verify_eta_natural(M, a, b, seed=seed, precision=precision)
                nat.append(_naturality_dict(r))
                if not r.passed:
                    failures.append({"check": "naturality", "level": [list(a), list(b)],
                                     "witness": r.witness})
                w = functor_witness(M, a, b, precision)
                fun.append({"source": list(a), "target": list(b), "passed": w is None})
                if w is not None:
                    failures.append({"check": "functor", "level": [list(a), list(b)],
                                     "witness": w})
        report["naturality"] = nat
        report["functor"] = fun

    if "colimit" in checks:
        S = build_direct_system(M, bound, precision=precision)
        col = colimit_analysis(S)
        verdict = pseudo_null_verdict(M, bound, precision, expected=expected_pseudo_null,
                                      report=col)
        sec = {"colimit": col.as_dict(), "pseudoNull": verdict.as_dict()}
        if M.d == 1 and bound[0] >= 1:
            sec["adjointDivisors"] = [list(x) for x in adjoint_divisors(M, bound[0], precision)]
        if verdict.consistent is False:
            failures.append({"check": "pseudo-null", "level": list(bound),
                             "witness": verdict.as_dict()})
        report["limit"] = sec

    if M.d == 1 and ("growth" in checks or "char" in checks):
        report["d1"] = _d1_section(M, bound[0], checks, precision, levels, failures)

    report["failures"] = failures
    passed = not failures
    report["verdict"] = "pass" if passed else "fail"
    report["exitCode"] = EXIT_PASS if passed else EXIT_FAILURE
    return report, report["exitCode"]


def _d1_section(M, bound, checks, precision, levels, failures) -> dict:
    sec: dict = {}
    c = None
    # characteristic data is reported at a precision fixed by the module itself
    report_precision = max(2, max(coinvariants(M, n, precision).precision for n in levels))
    if "char" in checks:
        try:
            c = char_from_presentation(M, report_precision)
        except NotTorsion as exc:
            sec["char"] = {"error": str(exc)}
            failures.append({"check": "char", "level": None, "witness": str(exc)})
        else:
            ci = char_iota(c)
            sec["char"] = _char_dict(c)
            sec["charIota"] = _char_dict(ci)
            if (ci.mu, ci.lam) != (c.mu, c.lam):
                failures.append({"check": "char-iota", "level": None,
                                 "witness": {"char": [c.mu, c.lam], "iota": [ci.mu, ci.lam]}})
            if M.is_square:
                dp = dual_pseudo_order_check(M, bound, precision)
                sec["dualPseudo"] = dp.as_dict()
                if not dp.passed:
                    n = next((k for k, (a, b) in enumerate(zip(dp.orders, dp.iota_orders)) if a != b), None)
                    failures.append({"check": "dual-pseudo", "level": n,
                                     "witness": {"orders": list(dp.orders),
                                                 "iotaOrders": list(dp.iota_orders)}})
            else:
                sec["dualPseudo"] = None
    if "growth" in checks:
        if bound < 2:
            sec["growth"] = {"status": "skipped", "reason": "needs bound >= 2"}
        else:
            g = _growth_section(M, bound, c, precision)
            sec["growth"] = g
            if g["status"] == "fail":
                failures.append({"check": "growth", "level": bound,
                                 "witness": {"growth": [g["fit"]["mu"], g["fit"]["lambda"]],
                                             "char": [c.mu, c.lam]}})
    return sec
