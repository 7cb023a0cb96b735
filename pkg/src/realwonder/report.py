"""Run reports: deterministic machine schema and the human rendering.

Reports are plain dicts serialized as canonical JSON (sorted keys), so
identical inputs give byte-identical files and parse/re-emit is the
identity.  Every reported number is recomputable from the step traces.
"""

from __future__ import annotations

import json

from . import gradedpoly as gp
from .engine import RunResult
from .errors import InputError

SCHEMA_VERSION = 1


def trace_to_dict(trace) -> dict:
    return {
        "event": list(trace.event),
        "codim": trace.codim,
        "cases": {sid: list(labels) for sid, labels in trace.cases.items()},
        "event_betti_c": list(trace.event_betti_c),
        "event_betti_r": list(trace.event_betti_r),
        "betti_c_before": list(trace.betti_c_before),
        "betti_c_after": list(trace.betti_c_after),
        "betti_r_before": list(trace.betti_r_before),
        "betti_r_after": list(trace.betti_r_after),
        "deficiency_before": trace.deficiency_before,
        "deficiency_after": trace.deficiency_after,
        "new_strata": list(trace.new_strata),
    }


def verify_trace_identities(report: dict) -> list:
    """Re-derive the ledger / Euler / total recursions from the recorded
    traces; returns [name, ok] pairs."""
    checks = []
    ok_ledger = ok_euler = ok_totals = True
    for step in report["steps"]:
        d = step["codim"]
        ec, er = step["event_betti_c"], step["event_betti_r"]
        if step["deficiency_after"] != step["deficiency_before"] + (d - 1) * (
            sum(ec) - sum(er)
        ):
            ok_ledger = False
        if gp.euler(step["betti_c_after"]) != gp.euler(
            step["betti_c_before"]
        ) + (d - 1) * gp.euler(ec):
            ok_euler = False
        if sum(step["betti_c_after"]) != sum(step["betti_c_before"]) + (d - 1) * sum(
            ec
        ) or sum(step["betti_r_after"]) != sum(step["betti_r_before"]) + (
            d - 1
        ) * sum(er):
            ok_totals = False
    checks.append(["ledger-identity-every-step", ok_ledger])
    checks.append(["euler-recursion-every-step", ok_euler])
    checks.append(["total-recursions-every-step", ok_totals])
    final = report["final"]
    n = report["ambient_dim"]
    checks.append(
        [
            "final-complex-poincare-duality",
            gp.is_palindromic(final["betti_c"], 2 * n),
        ]
    )
    if final["total_r"] > 0:
        checks.append(
            ["final-real-poincare-duality", gp.is_palindromic(final["betti_r"], n)]
        )
    checks.append(
        [
            "final-smith-inequality-and-parity",
            final["total_r"] <= final["total_c"]
            and (final["total_c"] - final["total_r"]) % 2 == 0,
        ]
    )
    checks.append(
        ["deficiency-equals-totals", final["deficiency"] == final["total_c"] - final["total_r"]]
    )
    return checks


def build_report(model: dict, result: RunResult) -> dict:
    arr = result.arrangement
    final = {
        "betti_c": list(result.betti_c),
        "betti_r": list(result.betti_r),
        "total_c": gp.total(result.betti_c),
        "total_r": gp.total(result.betti_r),
        "euler_c": gp.euler(result.betti_c),
        "deficiency": result.deficiency,
        "verdict": result.verdict,
        "flags": result.flags.as_dict(),
        "flags_provenance": "propagated" if result.traces else "input axiom",
    }
    report = {
        "schema_version": SCHEMA_VERSION,
        "model": model,
        "ambient_dim": arr.ambient.dim_c,
        "final": final,
        "flag_axioms": [list(ax) for ax in arr.flag_axioms],
        "stratum_count": len(arr.strata),
        "steps": [trace_to_dict(t) for t in result.traces],
        "ledger": {
            "value": result.ledger.value,
            "contributions": [list(c) for c in result.ledger.contributions],
        },
    }
    report["checks"] = verify_trace_identities(report)
    return report


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def from_json(text: str) -> dict:
    try:
        report = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad report JSON: {exc}") from exc
    if report.get("schema_version") != SCHEMA_VERSION:
        raise InputError(
            f"unsupported report schema version {report.get('schema_version')}"
        )
    return report


def render_text(report: dict, trace: bool = False) -> str:
    final = report["final"]
    lines = []
    lines.append(f"model: {json.dumps(report['model'], sort_keys=True)}")
    lines.append(f"ambient complex dimension: {report['ambient_dim']}")
    lines.append(f"complex Betti: {final['betti_c']}   total {final['total_c']}")
    lines.append(f"real    Betti: {final['betti_r']}   total {final['total_r']}")
    lines.append(
        f"deficiency: {final['deficiency']}   euler: {final['euler_c']}   "
        f"steps: {len(report['steps'])}"
    )
    flags = final["flags"]
    lines.append(
        "flags: effective={effective} maximal={maximal} "
        "galois_maximal={galois_maximal}".format(**flags)
    )
    lines.append(f"verdict: {final['verdict']}")
    if report["flag_axioms"]:
        lines.append("flag axioms (inputs):")
        for sid, note in report["flag_axioms"]:
            lines.append(f"  {sid}: {note}")
    if trace:
        lines.append("steps:")
        for i, step in enumerate(report["steps"], start=1):
            lines.append(
                f"  {i:3d}. blow up {'+'.join(step['event'])} (codim {step['codim']}): "
                f"c {step['betti_c_before']} -> {step['betti_c_after']}, "
                f"r {step['betti_r_before']} -> {step['betti_r_after']}, "
                f"defi {step['deficiency_before']} -> {step['deficiency_after']}"
            )
    lines.append("checks:")
    for name, ok in report["checks"]:
        lines.append(f"  [{'pass' if ok else 'FAIL'}] {name}")
    return "\n".join(lines) + "\n"
