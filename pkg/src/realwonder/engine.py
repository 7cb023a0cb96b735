"""One G-equivariant blow-up step and the iterated wonderful run.

Per step, every stratum falls into one case relative to the center C
(codim d in the ambient):

  Disjoint       unchanged.
  InsideCenter   full preimage, a projectivized-normal-bundle: Kunneth
                 with the rank-d fiber factor (the center itself becomes
                 its exceptional divisor this way).
  ContainsCenter proper transform Bl_C A: degree-shift corrections from
                 the center's payload, plus a new stratum A~∩E, the
                 projectivized normal bundle of C inside A.
  ProperMeet     same with C replaced by M = A∧C.

The intersection table is updated by id-level rules; the only geometric
input is the clean-sum separation test when two transforms met inside
the center.  Exceptional pieces that coincide with full preimage fibers
(transversal proper meets, dim A - dim M = d) are aliased to the fiber
stratum so later InsideCenter classifications stay exact.  Pairs the
rules cannot express are marked unresolved and abort the run only if
actually consulted.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import gradedpoly as gp
from . import partitions as pt
from . import subspaces as sub
from .arrangement import (
    Arrangement,
    REAL,
    Stratum,
    UNRESOLVED,
    geom_key,
    geom_meet,
)
from .errors import EngineError, InternalCheckError, UnsupportedExcessIntersection
from .flags import (
    FlagSet,
    YES,
    NO,
    bundle_flags,
    deficiency_update,
    DeficiencyLedger,
    pair_event_flags,
    propagate_blowup_flags,
    verdict as flag_verdict,
)

DISJOINT = "Disjoint"
INSIDE = "InsideCenter"
CONTAINS = "ContainsCenter"
PROPER = "ProperMeet"
CENTER = "Center"


def classify_case(arr: Arrangement, sid: str, cid: str) -> str:
    """Position of stratum sid relative to the blow-up center cid,
    using the current intersection table."""
    if sid == cid:
        return CENTER
    m = arr.meet(sid, cid)
    if m is None:
        return DISJOINT
    if m == sid:
        return INSIDE
    if m == cid:
        return CONTAINS
    return PROPER


@dataclass(frozen=True)
class StepTrace:
    """Per-event record; all reported numbers are recomputable from it:
    complex totals and Euler characteristics change by (d-1) times those
    of event_betti_c, real totals by (d-1) times event_betti_r, and
    event_defi = total(event_betti_c) - total(event_betti_r)."""

    event: tuple
    codim: int
    cases: dict
    event_betti_c: gp.BettiVector
    event_betti_r: gp.BettiVector
    betti_c_before: gp.BettiVector
    betti_c_after: gp.BettiVector
    betti_r_before: gp.BettiVector
    betti_r_after: gp.BettiVector
    deficiency_before: int
    deficiency_after: int
    new_strata: tuple

    @property
    def event_defi(self) -> int:
        return gp.total(self.event_betti_c) - gp.total(self.event_betti_r)


@dataclass(frozen=True)
class RunResult:
    arrangement: Arrangement
    traces: tuple
    ledger: DeficiencyLedger
    verdict: str

    @property
    def betti_c(self) -> gp.BettiVector:
        return self.arrangement.ambient.betti_c

    @property
    def betti_r(self) -> gp.BettiVector:
        return self.arrangement.ambient.betti_r

    @property
    def flags(self) -> FlagSet:
        return self.arrangement.ambient.flags

    @property
    def deficiency(self) -> int:
        return self.ledger.value


def _shadow(arr: Arrangement, sid: str):
    """Original geometry of a stratum; exceptional pieces descend to
    their source (tangent data of linear/polydiagonal shadows is
    position-independent, so the downstairs clean-sum test decides
    separation along whatever part of the meet the tower retained)."""
    s = arr.strata.get(sid)
    if s is not None and s.geometry is not None:
        return s.geometry
    if "^" in sid:
        return _shadow(arr, sid.rsplit("^", 1)[0])
    return None


_SEPARATION_CACHE = {}


def _separation(arr: Arrangement, a: str, b: str, cid: str):
    ga = _shadow(arr, a)
    gb = _shadow(arr, b)
    gc = _shadow(arr, cid)
    if ga is None or gb is None or gc is None:
        raise UnsupportedExcessIntersection(
            f"transforms {a} and {b} meet inside center {cid} and no "
            "geometry is available to separate them"
        )
    cache_key = (frozenset((ga, gb)), gc)
    outcome = _SEPARATION_CACHE.get(cache_key)
    if outcome is None:
        outcome = _separation_outcome(ga, gb, gc)
        _SEPARATION_CACHE[cache_key] = outcome
    if outcome != "separated":
        raise UnsupportedExcessIntersection(
            f"transforms of {a} and {b} at center {cid}: {outcome}"
        )


def _separation_outcome(ga, gb, gc) -> str:
    def inside(g, h) -> bool:
        m = geom_meet(g, h)
        return m is not None and geom_key(m) == geom_key(g)

    if inside(ga, gc) or inside(gb, gc):
        return "shadow inside the center shadow; outside the supported analysis"
    mm = geom_meet(ga, gb)
    if mm is not None and not inside(mm, gc):
        return "shared directions outside the center; transforms still meet"
    if isinstance(ga, sub.ProjSubspace):
        rb = len(gc.basis)
        rub = sub.linear_rank(ga, gc)
        rvb = sub.linear_rank(gb, gc)
        ruvb = sub.linear_rank(ga, gb, gc)
        excess = rub + rvb - ruvb - rb
    else:
        ru = ga.indicator_rows()
        rv = gb.indicator_rows()
        rc = gc.indicator_rows()
        rub = pt.int_rank(ru + rc)
        rvb = pt.int_rank(rv + rc)
        ruvb = pt.int_rank(ru + rv + rc)
        excess = rub + rvb - ruvb - len(rc)
    if excess:
        return f"transforms still meet after the blow-up (excess cone dim {excess})"
    return "separated"


def _elementary(arr: Arrangement, cid: str):
    """Blow up along one invariant-or-pair-member center; returns the
    new arrangement (flags untouched) and the case labels."""
    strata = arr.strata
    center = strata[cid]
    d = arr.codim(cid)
    if d < 2:
        raise EngineError(f"blow-up center {cid} has codimension {d} < 2")
    center_real = center.real_status == REAL

    # strata disjoint from the center keep their payload AND their whole
    # table row verbatim (any pair involving a Disjoint stratum meets in
    # an untouched stratum), so only "touched" rows are recomputed
    center_row = arr.table.get(cid, {})
    cls = {sid: DISJOINT for sid in strata}
    cls[cid] = CENTER
    for sid, m in center_row.items():
        if m is UNRESOLVED:
            raise UnsupportedExcessIntersection(
                f"intersection of {sid} and center {cid} is unresolved"
            )
        if m == sid:
            cls[sid] = INSIDE
        elif m == cid:
            cls[sid] = CONTAINS
        else:
            cls[sid] = PROPER

    # exceptional pieces of ContainsCenter / ProperMeet strata
    resolved_new = {}
    new_defs = []
    for sid, c in cls.items():
        if c not in (CONTAINS, PROPER):
            continue
        mid = cid if c == CONTAINS else arr.meet(sid, cid)
        d_s = strata[sid].dim_c - strata[mid].dim_c
        if c == PROPER and d_s == d:
            # transversal meet: A~∩E is the whole fiber preimage of M
            resolved_new[sid] = mid
        else:
            nid = f"{sid}^{cid}"
            resolved_new[sid] = nid
            new_defs.append((nid, sid, mid, d_s))

    # ambient: always ContainsCenter
    amb = arr.ambient
    amb_c = gp.add(amb.betti_c, gp.blowup_terms(center.betti_c, d, 2))
    if center_real:
        amb_r = gp.add(amb.betti_r, gp.blowup_terms(center.betti_r, d, 1))
    else:
        amb_r = amb.betti_r
    new_ambient = replace(amb, betti_c=amb_c, betti_r=amb_r)

    fiber_c = gp.bundle_factor(d, 2)
    fiber_r = gp.bundle_factor(d, 1)
    new_strata = {}
    for sid, s in strata.items():
        c = cls[sid]
        if c == DISJOINT:
            new_strata[sid] = s
        elif c in (CENTER, INSIDE):
            new_strata[sid] = replace(
                s,
                dim_c=s.dim_c + d - 1,
                betti_c=gp.kunneth(s.betti_c, fiber_c),
                betti_r=gp.kunneth(s.betti_r, fiber_r),
            )
        else:
            mid = cid if c == CONTAINS else arr.meet(sid, cid)
            m = strata[mid]
            d_s = s.dim_c - m.dim_c
            bc = gp.add(s.betti_c, gp.blowup_terms(m.betti_c, d_s, 2))
            if s.real_status == REAL and m.real_status == REAL:
                br = gp.add(s.betti_r, gp.blowup_terms(m.betti_r, d_s, 1))
            else:
                br = s.betti_r
            new_strata[sid] = replace(s, betti_c=bc, betti_r=br)

    for nid, sid, mid, d_s in sorted(new_defs):
        s, m = strata[sid], strata[mid]
        invariant = s.partner is None and center.partner is None
        bc = gp.kunneth(m.betti_c, gp.bundle_factor(d_s, 2))
        if invariant and m.real_status == REAL:
            br = gp.kunneth(m.betti_r, gp.bundle_factor(d_s, 1))
            real_nonempty = True
        else:
            br = gp.ZERO
            real_nonempty = invariant and False
        new_strata[nid] = Stratum(
            sid=nid,
            dim_c=s.dim_c - 1,
            betti_c=bc,
            betti_r=br,
            flags=bundle_flags(m.flags) if invariant else pair_event_flags(),
            partner=None,  # resolved at event level
            real_nonempty=real_nonempty if invariant else True,
            geometry=None,
        )

    # ---- intersection table -----------------------------------------
    raw_meet = arr.raw_meet

    by_center_meet = {cid: [cid]}
    for sid, m in center_row.items():
        by_center_meet.setdefault(m, []).append(sid)

    def exceptional_restriction(m, big):
        """T(a)∧T(big) for a inside the center and big in
        ContainsCenter/ProperMeet position, with old meet m: the
        restriction of big's exceptional bundle over m.  It equals
        NEW(A') for the arrangement member A' ⊆ big with A'∧C = m of
        complementary dimension (clean intersections make the normal
        bundles agree); anything else stays unresolved."""
        m_big = cid if cls[big] == CONTAINS else raw_meet(big, cid)
        target = strata[m].dim_c + strata[big].dim_c - strata[m_big].dim_c
        candidates = [
            s
            for s in by_center_meet.get(m, ())
            if strata[s].dim_c == target and raw_meet(s, big) == s
        ]
        if len(candidates) == 1:
            return resolved_new[candidates[0]]
        return UNRESOLVED

    def tt_value(a, b, m):
        ca, cb = cls[a], cls[b]
        pair = {ca, cb}
        if DISJOINT in pair:
            return m
        if pair <= {INSIDE}:
            return m
        if pair == {INSIDE, CENTER}:
            return a if ca == INSIDE else b
        if CENTER in pair:
            other = a if cb == CENTER else b
            return resolved_new[other]
        if INSIDE in pair:
            big = b if ca == INSIDE else a
            return exceptional_restriction(m, big)
        # both ContainsCenter / ProperMeet
        mc = raw_meet(m, cid)
        if mc is UNRESOLVED:
            return UNRESOLVED
        if mc != m:
            return m
        if m == cid:
            return None  # normal directions along C are disjoint (clean)
        _separation(arr, a, b, cid)
        return None

    touched = [cid] + sorted(center_row)
    touched_set = set(touched)
    new_table = dict(arr.table)  # untouched rows are shared, never mutated
    edited = {}

    def edit_row(sid):
        row = edited.get(sid)
        if row is None:
            row = dict(arr.table.get(sid, ()))
            edited[sid] = row
            new_table[sid] = row
        return row

    for a in touched:
        row = arr.table.get(a, ())
        for b in row:
            if b not in touched_set or not (a < b):
                continue
            m = row[b]
            if m is UNRESOLVED:
                continue
            value = tt_value(a, b, m)
            if value == m:
                continue
            if value is None:
                del edit_row(a)[b]
                del edit_row(b)[a]
            else:
                edit_row(a)[b] = value
                edit_row(b)[a] = value

    created = [nd[0] for nd in sorted(new_defs)]
    sources = {nd[0]: nd[1] for nd in new_defs}
    created_set = set(created)

    def and_e(v):
        if v is None or v is UNRESOLVED:
            return v
        if v in created_set:
            return v  # an exceptional piece created this step
        c = cls[v]
        if c in (INSIDE, CENTER):
            return v
        if c == DISJOINT:
            return None
        return resolved_new[v]

    for nid in created:
        sid = sources[nid]
        nrow = {sid: nid}
        # NEW(S)∧T(S') = (T(S)∧T(S'))∧E; nonempty only for touched S'
        for other in touched:
            val = and_e(new_table[sid].get(other) if other != sid else sid)
            if val is not None and other != sid:
                nrow[other] = val
        new_table[nid] = nrow
    # NEW(S)∧NEW(S') reduces to the same formula
    for i, nid in enumerate(created):
        sid = sources[nid]
        for nid2 in created[:i]:
            val = and_e(new_table[sid].get(sources[nid2]))
            if val is not None:
                new_table[nid][nid2] = val
                new_table[nid2][nid] = val
    for nid in created:
        for other, val in new_table[nid].items():
            if other not in created_set:
                edit_row(other)[nid] = val

    out = replace(
        arr,
        ambient=new_ambient,
        strata=new_strata,
        table=new_table,
    )
    return out, cls, created


def blow_up_step(arr: Arrangement, event=None):
    """Execute the first remaining building event (one invariant center
    or a conjugate pair of centers) and return (arrangement', trace)."""
    if not arr.events:
        raise EngineError("no building events remain")
    if event is None:
        event = arr.events[0]
    if tuple(event) != tuple(arr.events[0]):
        raise EngineError(f"event {event} is not the first remaining event")
    event = tuple(event)

    strata = arr.strata
    centers = [strata[cid] for cid in event]
    if len(event) == 2:
        c1, c2 = centers
        if c1.partner != c2.sid or c2.partner != c1.sid:
            raise EngineError(f"event {event} is not a conjugate pair")
        if c1.dim_c != c2.dim_c:
            raise EngineError(f"pair event {event} with unequal dimensions")
    elif centers[0].partner is not None:
        raise EngineError(f"single event {event} on a paired stratum")

    d = arr.codim(event[0])
    remaining = {sid for ev in arr.events[1:] for sid in ev}
    for b in remaining:
        if arr.leq(b, event[0]) and b != event[0]:
            raise EngineError(f"center {event[0]} is not minimal: contains {b}")

    is_pair = len(event) == 2
    center0 = centers[0]
    pair_meet = arr.meet(event[0], event[1]) if is_pair else None
    touching_pair = (
        pair_meet is not None and strata[pair_meet].real_status == REAL
    )
    if touching_pair:
        _guard_touching_pair(arr, event, pair_meet, d)
    if is_pair:
        if touching_pair:
            # the centers carry real points of W on them, so neither the
            # empty-fixed-locus effectivity transfer nor the GM transfer
            # applies; the deficiency still strictly grows
            event_flags = FlagSet(maximal=NO)
            event_real_empty = False
            event_br = strata[pair_meet].betti_r
        else:
            event_flags = pair_event_flags()
            event_real_empty = True
            event_br = gp.ZERO
    else:
        event_flags = center0.flags
        event_real_empty = center0.real_status != REAL
        event_br = center0.betti_r if not event_real_empty else gp.ZERO

    before_c, before_r = arr.ambient.betti_c, arr.ambient.betti_r
    defi_before = gp.total(before_c) - gp.total(before_r)

    cur = arr
    case_record = {}
    created_all = []
    event_bc = gp.ZERO
    for cid in event:
        event_bc = gp.add(event_bc, cur.strata[cid].betti_c)
        cur, cls, created = _elementary(cur, cid)
        created_all += created
        for sid, label in cls.items():
            case_record.setdefault(sid, []).append(label)

    if touching_pair:
        cur = _apply_touching_pair_correction(cur, arr, pair_meet, d)

    # ---- event-level flags ------------------------------------------
    stretched = arr.stretched
    new_strata = dict(cur.strata)
    for sid, labels in case_record.items():
        if sid not in strata:
            continue  # created mid-event; flags set at creation
        s_old = strata[sid]
        s_new = new_strata[sid]
        if s_old.partner is not None:
            continue  # swapped pairs keep their static event flags
        if sid == pair_meet and touching_pair:
            continue  # real structure overridden by the pair correction
        if any(lab in (INSIDE, CENTER) for lab in labels):
            new_strata[sid] = replace(s_new, flags=bundle_flags(s_old.flags))
        elif any(lab in (CONTAINS, PROPER) for lab in labels):
            mid = arr.meet(sid, event[0])
            m_old = strata[mid]
            d_s = s_old.dim_c - m_old.dim_c
            if is_pair:
                m_flags, m_empty = pair_event_flags(), True
            else:
                m_flags, m_empty = m_old.flags, m_old.real_status != REAL
            new_strata[sid] = replace(
                s_new,
                flags=propagate_blowup_flags(
                    s_old.flags, m_flags, m_empty, stretched, d_s
                ),
            )

    # partner links among exceptional pieces
    def conj_of(sid):
        if sid in strata:
            s = strata[sid]
            return sid if s.partner is None else s.partner
        src, c = sid.rsplit("^", 1)
        return f"{conj_of(src)}^{conj_of(c)}"

    for nid in created_all:
        mate = conj_of(nid)
        if mate == nid:
            continue
        if mate not in new_strata:
            raise InternalCheckError(f"conjugate piece {mate} of {nid} missing")
        new_strata[nid] = replace(new_strata[nid], partner=mate)

    amb_flags = propagate_blowup_flags(
        arr.ambient.flags, event_flags, event_real_empty, stretched, d
    )
    ambient = replace(cur.ambient, flags=amb_flags)

    out = replace(
        cur,
        ambient=ambient,
        strata=new_strata,
        events=arr.events[1:],
    )

    after_c, after_r = ambient.betti_c, ambient.betti_r
    defi_after = gp.total(after_c) - gp.total(after_r)
    trace = StepTrace(
        event=event,
        codim=d,
        cases={sid: tuple(labels) for sid, labels in sorted(case_record.items())},
        event_betti_c=event_bc,
        event_betti_r=event_br,
        betti_c_before=before_c,
        betti_c_after=after_c,
        betti_r_before=before_r,
        betti_r_after=after_r,
        deficiency_before=defi_before,
        deficiency_after=defi_after,
        new_strata=tuple(created_all),
    )

    _check_step(out, trace)
    return out, trace


def _guard_touching_pair(arr: Arrangement, event, wid: str, d: int):
    """Scope guard for a conjugate-pair event whose members intersect in
    an invariant stratum W with real points.  The real-locus correction
    below is derived for the transversal case with nothing else (real)
    in the way; any other configuration is rejected honestly."""
    c1 = arr.strata[event[0]]
    w = arr.strata[wid]
    if c1.dim_c - w.dim_c != d:
        raise UnsupportedExcessIntersection(
            f"conjugate centers {event} meet non-transversally in {wid}"
        )
    for sid, s in arr.strata.items():
        if sid in event or sid == wid:
            continue
        raw = arr.raw_meet(sid, event[0])
        if raw is None:
            continue
        if s.partner is None:
            raise UnsupportedExcessIntersection(
                f"invariant stratum {sid} meets the intersecting conjugate "
                f"pair {event}; real bookkeeping not supported"
            )
        if arr.leq(sid, wid):
            raise UnsupportedExcessIntersection(
                f"stratum {sid} inside the pair intersection {wid}"
            )


def _apply_touching_pair_correction(
    cur: Arrangement, before: Arrangement, wid: str, d: int
) -> Arrangement:
    """Real-locus correction for a conjugate-pair event with transversal
    invariant intersection W.

    Locally at a real point of W the composite fixed locus is a
    complex-type blow-up of F(X) along F(W) with exceptional CP^{d-1}
    fibers, so the ambient real vector gains degree-2k shifts of W's
    real vector, and the twice-projectivized fiber over W carries the
    swap real structure with fixed locus a CP^{d-1}-bundle over F(W).
    """
    w_old = before.strata[wid]
    amb = cur.ambient
    amb_r = gp.add(amb.betti_r, gp.blowup_terms(w_old.betti_r, d, 2))
    strata = dict(cur.strata)
    fiber = strata[wid]
    strata[wid] = replace(
        fiber,
        betti_r=gp.kunneth(w_old.betti_r, gp.bundle_factor(d, 2)),
        flags=FlagSet(maximal=NO),
    )
    return replace(cur, ambient=replace(amb, betti_r=amb_r), strata=strata)


def _check_step(arr: Arrangement, trace: StepTrace):
    """Always-on exact identities after a step: the deficiency ledger
    and Euler recursions, complex/real total recursions, Smith and
    duality constraints for every stratum, and flag/ledger agreement."""
    d = trace.codim
    expected_defi = trace.deficiency_before + (d - 1) * trace.event_defi
    if trace.deficiency_after != expected_defi:
        raise InternalCheckError(
            f"deficiency ledger identity failed at {trace.event}: "
            f"{trace.deficiency_after} != {expected_defi}"
        )
    eu_expected = gp.euler(trace.betti_c_before) + (d - 1) * gp.euler(
        trace.event_betti_c
    )
    if gp.euler(trace.betti_c_after) != eu_expected:
        raise InternalCheckError(f"Euler recursion failed at {trace.event}")
    if gp.total(trace.betti_c_after) != gp.total(trace.betti_c_before) + (
        d - 1
    ) * gp.total(trace.event_betti_c):
        raise InternalCheckError(f"complex total recursion failed at {trace.event}")
    if gp.total(trace.betti_r_after) != gp.total(trace.betti_r_before) + (
        d - 1
    ) * gp.total(trace.event_betti_r):
        raise InternalCheckError(f"real total recursion failed at {trace.event}")
    problems = arr.validate_strata()
    if problems:
        raise InternalCheckError("; ".join(problems))
    if arr.ambient.flags.maximal is YES and trace.deficiency_after != 0:
        raise InternalCheckError("maximal flag with positive deficiency")
    if arr.ambient.flags.maximal is NO and trace.deficiency_after == 0:
        raise InternalCheckError("non-maximal flag with zero deficiency")


def wonderful_run(arr: Arrangement) -> RunResult:
    """Blow up all building events in order and report the verdict."""
    dims = [arr.strata[ev[0]].dim_c for ev in arr.events]
    if dims != sorted(dims):
        raise EngineError("building events are not in nondecreasing dimension order")
    ledger = DeficiencyLedger(arr.ambient.defi)
    traces = []
    cur = arr
    while cur.events:
        cur, trace = blow_up_step(cur)
        traces.append(trace)
        ledger = deficiency_update(
            ledger, trace.codim, trace.event_defi, label="+".join(trace.event)
        )
        if ledger.value != trace.deficiency_after:
            raise InternalCheckError("ledger diverged from Betti payloads")
    final_verdict = flag_verdict(cur.ambient.flags, cur.ambient.betti_c)
    return RunResult(
        arrangement=cur,
        traces=tuple(traces),
        ledger=ledger,
        verdict=final_verdict,
    )
