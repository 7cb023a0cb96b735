"""Verification suites: the acceptance criteria as runnable checks.

Shared between `realwonder verify` and the test suite.  Every check is
deterministic (seeded randomness) and exact (integer equalities, no
tolerances).
"""

from __future__ import annotations

import random

from . import gradedpoly as gp
from .engine import wonderful_run
from .hilbert import (
    SmithData,
    consistency,
    deficiency_effective_gm,
    deficiency_general,
    smith_data_from_run,
)
from .models import (
    ModuliSpec,
    SpaceData,
    build_braid,
    build_dcp,
    build_fm,
    build_kt,
    build_moduli,
    build_ulyanov,
    parse_sigma,
)
from .report import build_report
from .subspaces import rnc_points, span_points


def _all_involutions_with_fix(n: int):
    """All order-<=2 permutations of 1..n with a fixed point, grouped by
    number of 2-cycles."""
    out = [ModuliSpec(n=n, sigma=tuple(range(1, n + 1)))]
    elements = list(range(1, n + 1))

    def rec(remaining, cycles):
        if cycles:
            sigma = list(range(1, n + 1))
            for i, j in cycles:
                sigma[i - 1], sigma[j - 1] = j, i
            if any(sigma[k] == k + 1 for k in range(n)):
                out.append(ModuliSpec(n=n, sigma=tuple(sigma)))
        if len(remaining) < 2:
            return
        first = remaining[0]
        for j in remaining[1:]:
            rest = [x for x in remaining[1:] if x != j]
            rec(rest, cycles + [(first, j)])
        rec(remaining[1:], cycles)

    rec(elements, [])
    seen = set()
    unique = []
    for spec in out:
        if spec.sigma not in seen:
            seen.add(spec.sigma)
            unique.append(spec)
    return unique


def _sigma_samples(n: int, rng: random.Random, per_type: int = 2):
    """Representatives of every 2-cycle count, plus random relabelings."""
    by_cycles = {}
    for spec in _all_involutions_with_fix(n):
        k = sum(1 for i in range(n) if spec.sigma[i] > i + 1)
        by_cycles.setdefault(k, []).append(spec)
    picked = []
    for k in sorted(by_cycles):
        group = by_cycles[k]
        picked.append(group[0])
        extra = rng.sample(group[1:], min(per_type - 1, len(group) - 1))
        picked.extend(extra)
    return picked


def random_dcp_arrangement(rng: random.Random, ambient_dim: int):
    """Spans of random subsets of rational-normal-curve points in
    P^3 / P^4, the randomized real linear corpus."""
    npts = ambient_dim + 2
    params = rng.sample(range(-9, 10), npts)
    pts = rnc_points(ambient_dim, params)
    count = rng.randint(2, 4 + (ambient_dim - 3))
    subsets = set()
    while len(subsets) < count:
        size = rng.randint(1, ambient_dim - 1)
        subsets.add(tuple(sorted(rng.sample(range(npts), size))))
    generators = []
    for subset in sorted(subsets):
        name = "g" + ".".join(str(i) for i in subset)
        generators.append((name, span_points([pts[i] for i in subset])))
    desc = f"dcp P^{ambient_dim} {sorted(subsets)} params {params}"
    return desc, build_dcp(ambient_dim, generators)


def corpus_runs(seed: int = 20260808, count: int = 100, nmax: int = 6):
    """The test corpus: randomized real DCP arrangements plus all the
    moduli and configuration runs; yields (description, RunResult)."""
    rng = random.Random(seed)
    for i in range(count):
        ambient_dim = 3 if i % 2 == 0 else 4
        desc, arr = random_dcp_arrangement(rng, ambient_dim)
        yield desc, wonderful_run(arr)
    for n in range(4, nmax + 1):
        for spec in _sigma_samples(n, rng, per_type=1):
            yield f"moduli n={n} sigma={spec.sigma}", wonderful_run(
                build_moduli(spec)
            )
    p1 = SpaceData.projective_space(1)
    p2 = SpaceData.projective_space(2)
    for desc, arr in [
        ("fm n=2 P2", build_fm(2, p2)),
        ("fm n=3 P1", build_fm(3, p1)),
        ("fm n=4 P1", build_fm(4, p1)),
        ("fm n=3 P2", build_fm(3, p2)),
        ("ulyanov n=3 P1", build_ulyanov(3, p1)),
        ("ulyanov n=4 P1", build_ulyanov(4, p1)),
        ("ulyanov n=3 P2", build_ulyanov(3, p2)),
        ("fm n=2 ellipsoid", build_fm(2, SpaceData.ellipsoid())),
        ("kt n=3 P1 chain", build_kt(3, p1, [[[1, 2, 3]]])),
    ]:
        yield desc, wonderful_run(arr)


# ----------------------------------------------------------------------
# acceptance criteria


def check_moduli_n4():
    """Criterion 1: every real structure on the 4-pointed moduli space
    gives P^1 with its standard real structure."""
    for spec in _all_involutions_with_fix(4):
        res = wonderful_run(build_moduli(spec))
        if list(res.betti_c) != [1, 0, 1] or list(res.betti_r) != [1, 1]:
            return False, f"sigma={spec.sigma}: {list(res.betti_c)}/{list(res.betti_r)}"
    return True, "complex (1,0,1), real (1,1) for all sigma"


def check_moduli_n5_id():
    res = wonderful_run(build_moduli(parse_sigma("id", 5), validate_prefixes=True))
    ok = (
        list(res.betti_c) == [1, 0, 5, 0, 1]
        and list(res.betti_r) == [1, 5, 1]
        and res.verdict == "ConjugationSpace"
        and res.deficiency == 0
    )
    return ok, f"{list(res.betti_c)}/{list(res.betti_r)} {res.verdict} defi {res.deficiency}"


def check_moduli_n5_transposition():
    res = wonderful_run(build_moduli(parse_sigma("(1 2)", 5)))
    ok = (
        gp.total(res.betti_c) == 7
        and gp.total(res.betti_r) == 5
        and res.deficiency == 2
        and res.verdict == "EffectiveGaloisMaximal"
    )
    return ok, f"totals {gp.total(res.betti_c)}/{gp.total(res.betti_r)} {res.verdict}"


def check_moduli_n5_double_pair():
    res = wonderful_run(build_moduli(parse_sigma("(1 2)(3 4)", 5)))
    ok = gp.total(res.betti_r) == 3 and res.deficiency == 4
    return ok, f"real total {gp.total(res.betti_r)} defi {res.deficiency}"


def check_moduli_n6_id():
    """Criterion 5: the degree-2 and degree-1 recursions are independent
    computations whose totals must agree (maximality)."""
    res = wonderful_run(build_moduli(parse_sigma("id", 6), validate_prefixes=True))
    ok = (
        list(res.betti_c) == [1, 0, 16, 0, 16, 0, 1]
        and list(res.betti_r) == [1, 16, 16, 1]
        and gp.total(res.betti_c) == 34 == gp.total(res.betti_r)
    )
    return ok, f"{list(res.betti_c)} / {list(res.betti_r)}"


def check_sigma_independence(nmax: int = 7, per_type: int = 2):
    """Criterion 6: the complex output depends only on n.  Exhaustive
    over sigma for n <= 5; every 2-cycle count with random relabelings
    for n = 6, 7 (the complex path is label-independent by symmetry of
    the construction)."""
    rng = random.Random(4)
    for n in range(4, nmax + 1):
        specs = (
            _all_involutions_with_fix(n)
            if n <= 5
            else _sigma_samples(n, rng, per_type=per_type)
        )
        reference = None
        for spec in specs:
            res = wonderful_run(build_moduli(spec))
            if reference is None:
                reference = res.betti_c
            elif res.betti_c != reference:
                return False, f"n={n} sigma={spec.sigma} differs"
    # independence of the real parameter choice as well
    res_a = wonderful_run(
        build_moduli(ModuliSpec(n=5, sigma=(1, 2, 3, 4, 5)), real_params=[0, 1, 2, 3])
    )
    res_b = wonderful_run(
        build_moduli(ModuliSpec(n=5, sigma=(1, 2, 3, 4, 5)), real_params=[-5, 1, 7, 11])
    )
    if res_a.betti_c != res_b.betti_c or res_a.betti_r != res_b.betti_r:
        return False, "parameter choice changed the answer"
    return True, f"complex output identical across sigma for n <= {nmax}"


def check_step_identities(count: int = 100, nmax: int = 6):
    """Criterion 7: ledger and Euler identities after every step of
    every corpus run, re-derived from the traces."""
    runs = 0
    steps = 0
    for desc, result in corpus_runs(count=count, nmax=nmax):
        report = build_report({"desc": desc}, result)
        for name, ok in report["checks"]:
            if not ok:
                return False, f"{desc}: {name} failed"
        runs += 1
        steps += len(result.traces)
    return True, f"{runs} runs, {steps} steps, all identities exact"


def check_dcp_conjugation(count: int = 25, seed: int = 7):
    """Criterion 8: randomized real linear DCP arrangements are
    conjugation spaces with zero deficiency and no odd cohomology."""
    rng = random.Random(seed)
    for i in range(count):
        desc, arr = random_dcp_arrangement(rng, 3 if i % 2 == 0 else 4)
        res = wonderful_run(arr)
        if (
            res.verdict != "ConjugationSpace"
            or res.deficiency != 0
            or gp.odd_part(res.betti_c) != 0
        ):
            return False, f"{desc}: {res.verdict} defi {res.deficiency}"
    return True, f"{count} random real arrangements, all ConjugationSpace"


def check_config_models():
    """Criterion 9: FM values, Ulyanov >= FM degreewise, and the flag
    transfer from the input space."""
    p1, p2 = SpaceData.projective_space(1), SpaceData.projective_space(2)
    res = wonderful_run(build_fm(2, p2))
    if not (
        gp.total(res.betti_c) == 12 == gp.total(res.betti_r)
        and res.verdict == "ConjugationSpace"
    ):
        return False, f"fm(2, P2): {gp.total(res.betti_c)}/{gp.total(res.betti_r)}"
    res = wonderful_run(build_fm(3, p1))
    if not (gp.total(res.betti_c) == 10 == gp.total(res.betti_r)):
        return False, f"fm(3, P1): {gp.total(res.betti_c)}/{gp.total(res.betti_r)}"
    for n, x in [(3, p1), (3, p2), (4, p1)]:
        fm = wonderful_run(build_fm(n, x))
        ul = wonderful_run(build_ulyanov(n, x))
        pairs = [(fm.betti_c, ul.betti_c), (fm.betti_r, ul.betti_r)]
        for small, big in pairs:
            if any(small[i] > big[i] for i in range(len(small))):
                return False, f"ulyanov < fm degreewise at n={n} {x.name}"
    ell = wonderful_run(build_fm(2, SpaceData.ellipsoid()))
    if ell.verdict != "EffectiveGaloisMaximal":
        return False, f"ellipsoid transfer: {ell.verdict}"
    return True, "fm/ulyanov values, degreewise domination, flag transfer"


def check_braid_oracle(nmax: int = 6):
    """Criterion 10: the partition and linear backends produce identical
    step traces and final Betti vectors."""
    for n in range(3, nmax + 1):
        rp = wonderful_run(build_braid(n, "partition"))
        rl = wonderful_run(build_braid(n, "linear"))
        if rp.betti_c != rl.betti_c or rp.betti_r != rl.betti_r:
            return False, f"n={n}: final Betti differ"
        if len(rp.traces) != len(rl.traces):
            return False, f"n={n}: different step counts"
        for tp, tl in zip(rp.traces, rl.traces):
            if tp != tl:
                return False, f"n={n}: trace at {tp.event} differs"
    return True, f"identical traces and Betti vectors for n <= {nmax}"


def check_hilbert_squares(samples: int = 1000, seed: int = 11):
    """Criterion 11: conjugation-space inputs give 0; the P^1 case
    matches beta(P^2) - beta(RP^2); the two formulas agree on random
    valid Smith data."""
    for builder in (
        build_moduli(parse_sigma("id", 5)),
        build_fm(2, SpaceData.projective_space(2)),
    ):
        res = wonderful_run(builder)
        s = smith_data_from_run(res)
        if deficiency_effective_gm(s, attest_effective_gm=True, attest_tors2_free=True) != 0:
            return False, "conjugation-space input with nonzero Hilbert deficiency"
    p1 = SmithData(n=1, beta_total=2, beta_fixed=2, beta_odd=0, delta=(0, 0), rank_mu=1)
    value = deficiency_general(p1, attest_tors2_free=True)
    p2_defect = (1 + 1 + 1) - (1 + 1 + 1)  # beta(P^2) - beta(RP^2)
    if value != p2_defect:
        return False, f"P1 Hilbert square: {value} != {p2_defect}"
    rng = random.Random(seed)
    for _ in range(samples):
        n = rng.randint(1, 4)
        delta = tuple(rng.randint(0, 3) for _ in range(2 * n))
        a = 2 * sum(delta)
        beta_fixed = rng.randint(0, 10)
        if (n * beta_fixed) % 2:
            beta_fixed += 1
        s = SmithData(
            n=n,
            beta_total=beta_fixed + a,
            beta_fixed=beta_fixed,
            beta_odd=0,
            delta=delta,
            rank_mu=None,
        )
        if consistency(s, effective_gm=True):
            return False, f"generated inconsistent data {s}"
        special = deficiency_effective_gm(
            s, attest_effective_gm=True, attest_tors2_free=True
        )
        general = deficiency_general(
            SmithData(
                n=n,
                beta_total=s.beta_total,
                beta_fixed=s.beta_fixed,
                beta_odd=0,
                delta=delta,
                rank_mu=n * beta_fixed // 2,
            ),
            attest_tors2_free=True,
        )
        if special != general:
            return False, f"formulas disagree on {s}"
    return True, f"{samples} random Smith data, formulas agree; P1 case 0"


def check_global_properties(count: int = 100, nmax: int = 6):
    """Criterion 12: Smith inequality, parity and duality for every
    ambient and stratum after every step.  The engine asserts these
    after each step and aborts on violation, so completion of the whole
    corpus is the check; the final arrangements are re-validated here."""
    runs = 0
    for desc, result in corpus_runs(count=count, nmax=nmax):
        problems = result.arrangement.validate_strata()
        if problems:
            return False, f"{desc}: {problems[0]}"
        runs += 1
    return True, f"{runs} runs completed with per-step property checks on"


SUITES = {
    "core": [
        ("moduli-n4", check_moduli_n4, {}),
        ("moduli-n5-id", check_moduli_n5_id, {}),
        ("moduli-n5-transposition", check_moduli_n5_transposition, {}),
        ("moduli-n5-double-pair", check_moduli_n5_double_pair, {}),
        ("moduli-n6-id", check_moduli_n6_id, {}),
        ("sigma-independence", check_sigma_independence, {"nmax": 6, "per_type": 1}),
        ("step-identities", check_step_identities, {"count": 20, "nmax": 5}),
        ("dcp-conjugation-spaces", check_dcp_conjugation, {"count": 8}),
        ("config-models", check_config_models, {}),
        ("braid-oracle", check_braid_oracle, {"nmax": 5}),
        ("hilbert-squares", check_hilbert_squares, {"samples": 200}),
        ("global-properties", check_global_properties, {"count": 20, "nmax": 5}),
    ],
    "full": [
        ("moduli-n4", check_moduli_n4, {}),
        ("moduli-n5-id", check_moduli_n5_id, {}),
        ("moduli-n5-transposition", check_moduli_n5_transposition, {}),
        ("moduli-n5-double-pair", check_moduli_n5_double_pair, {}),
        ("moduli-n6-id", check_moduli_n6_id, {}),
        ("sigma-independence", check_sigma_independence, {"nmax": 7}),
        ("step-identities", check_step_identities, {"count": 100, "nmax": 6}),
        ("dcp-conjugation-spaces", check_dcp_conjugation, {"count": 25}),
        ("config-models", check_config_models, {}),
        ("braid-oracle", check_braid_oracle, {"nmax": 6}),
        ("hilbert-squares", check_hilbert_squares, {"samples": 1000}),
        ("global-properties", check_global_properties, {"count": 100, "nmax": 6}),
    ],
}


def run_suite(name: str):
    """Run a named suite; yields (check_name, ok, detail)."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    for check_name, fn, kwargs in SUITES[name]:
        ok, detail = fn(**kwargs)
        yield check_name, ok, detail
