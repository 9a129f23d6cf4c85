"""Serializing verification reports as JSON or as plain text."""

from __future__ import annotations

import json


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _fmt_divisors(divs, p) -> str:
    if not divs:
        return "0"
    parts = []
    for e in sorted(set(divs)):
        base = f"Z/{p}^{e}" if e > 1 else f"Z/{p}"
        k = divs.count(e)
        parts.append(base if k == 1 else f"({base})^{k}")
    return " x ".join(parts)


def _yes(flag) -> str:
    if flag is None:
        return "n/a"
    return "yes" if flag else "no"


def to_text(report: dict) -> str:
    mod = report["module"]
    p = mod["p"]
    out = []
    out.append(f"module    {mod.get('name', '<unnamed>')}  (p = {p}, d = {mod['d']}, "
               f"{len(mod['presentation'])} generators, {mod['relationCount']} relations)")
    params = report["parameters"]
    out.append(f"bound     {tuple(params['bound'])}   seed {params['seed']}   "
               f"checks {','.join(params['checks'])}")
    scf = report["scf"]
    out.append(f"finite coinvariants through bound: {_yes(scf['verdict'])}")
    cert = scf.get("certificate")
    if cert:
        out.append(f"  level {tuple(cert['level'])}: rank {cert['rank']} < {cert['expectedRank']} "
                   f"(deficit {cert['deficit']})")

    if "levels" in report:
        out.append("")
        out.append(f"{'level':<10}{'log_p |M_U|':>12}  {'divisors':<30}{'duality':>8}")
        for sec in report["levels"]:
            dual = sec.get("duality")
            status = "-" if dual is None else ("pass" if dual["passed"] else "FAIL")
            out.append(f"{str(tuple(sec['level'])):<10}{sec['orderLog']:>12}  "
                       f"{_fmt_divisors(sec['divisors'], p):<30}{status:>8}")

    if report.get("naturality"):
        out.append("")
        out.append("naturality of the duality map")
        for r in report["naturality"]:
            mode = "exhaustive" if r["homsExhaustive"] and r["elementsExhaustive"] else "sampled"
            out.append(f"  {tuple(r['source'])} -> {tuple(r['target'])}: "
                       f"{'pass' if r['passed'] else 'FAIL'} "
                       f"({r['homsChecked']} homs x {r['elementsChecked']} elements, {mode})")
        for r in report.get("functor", []):
            out.append(f"  projection . norm = index, {tuple(r['source'])} -> {tuple(r['target'])}: "
                       f"{'pass' if r['passed'] else 'FAIL'}")

    lim = report.get("limit")
    if lim:
        col = lim["colimit"]
        out.append("")
        out.append("direct limit along " + " -> ".join(str(tuple(n)) for n in col["chain"]))
        for n, divs in zip(col["chain"], col["perStepImageDivisors"]):
            out.append(f"  image of first level in {tuple(n)}: {_fmt_divisors(divs, p)}")
        out.append(f"  zero through bound: {_yes(col['zeroThroughBound'])} (finite-horizon evidence)")
        pn = lim["pseudoNull"]
        out.append(f"  bounded orders: {_yes(pn['d1Finiteness'])}   consistent: {_yes(pn['consistent'])}")
        if "adjointDivisors" in lim:
            for n, divs in enumerate(lim["adjointDivisors"]):
                out.append(f"  adjoint shadow at horizon {n}: {_fmt_divisors(divs, p)}")

    d1 = report.get("d1")
    if d1:
        out.append("")
        if "char" in d1:
            c = d1["char"]
            if "error" in c:
                out.append(f"characteristic ideal: {c['error']}")
            else:
                out.append(f"characteristic ideal: mu = {c['mu']}, lambda = {c['lambda']}, "
                           f"distinguished part {c['distinguished']} mod {p}^{c['precision']}")
                ci = d1["charIota"]
                out.append(f"iota-twist:           mu = {ci['mu']}, lambda = {ci['lambda']}, "
                           f"distinguished part {ci['distinguished']}")
        dp = d1.get("dualPseudo")
        if dp:
            out.append(f"orders of M:          {dp['orders']}")
            out.append(f"orders of M^iota:     {dp['iotaOrders']}   {'pass' if dp['passed'] else 'FAIL'}")
        g = d1.get("growth")
        if g:
            if g["status"] == "skipped":
                out.append(f"growth fit: skipped ({g['reason']})")
            else:
                f = g["fit"]
                out.append(f"growth fit: orders {f['orders']} -> mu = {f['mu']}, lambda = {f['lambda']}, "
                           f"nu = {f['nu']} (residual {f['residual']}): {g['status']}")

    failures = report.get("failures", [])
    if failures:
        out.append("")
        out.append("failures")
        for f in failures:
            out.append(f"  {f['check']} at {f['level']}: {json.dumps(f['witness'], sort_keys=True)}")
    out.append("")
    out.append(f"verdict: {report['verdict']} (exit {report['exitCode']})")
    return "\n".join(out) + "\n"


def emit_report(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"unknown format {fmt!r}")
