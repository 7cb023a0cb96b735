"""Strata, arrangements, intersection tables, building-set validation.

An Arrangement is a value: the blow-up engine consumes one and produces
a new one.  The intersection table is sparse (only nonempty meets are
stored) and may contain UNRESOLVED markers for pairs the incremental
rules cannot express; reading such an entry aborts the run honestly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import gradedpoly as gp
from .errors import InputError, UnsupportedExcessIntersection
from .flags import FlagSet, Tri, UNKNOWN
from .partitions import SetPartition
from .subspaces import ProjSubspace, intersect as sub_intersect

AMBIENT_ID = "ambient"

REAL = "real"          # Conj-invariant with nonempty real locus
NO_REAL = "empty"      # Conj-invariant with empty real locus
PAIRED = "paired"      # swapped with a partner stratum


class _Unresolved:
    def __repr__(self):
        return "UNRESOLVED"


UNRESOLVED = _Unresolved()


@dataclass(frozen=True)
class Stratum:
    sid: str
    dim_c: int
    betti_c: gp.BettiVector
    betti_r: gp.BettiVector
    flags: FlagSet = field(default_factory=FlagSet)
    partner: str | None = None
    real_nonempty: bool = True
    geometry: object | None = None

    @property
    def real_status(self) -> str:
        if self.partner is not None:
            return PAIRED
        return REAL if self.real_nonempty else NO_REAL

    @property
    def defi(self) -> int:
        return gp.total(self.betti_c) - gp.total(self.betti_r)

    def validate(self) -> list[str]:
        """Smith inequality, mod-2 parity, Poincare duality.

        Smith and parity are G-space statements, so they apply to
        invariant strata; a conj-swapped pair satisfies them as a pair
        automatically (2*total vs 0)."""
        problems = []
        tc, tr = gp.total(self.betti_c), gp.total(self.betti_r)
        if self.partner is None:
            if tr > tc:
                problems.append(f"{self.sid}: Smith inequality violated ({tr} > {tc})")
            if (tc - tr) % 2:
                problems.append(f"{self.sid}: total Betti parity violated")
        if not gp.is_palindromic(self.betti_c, 2 * self.dim_c):
            problems.append(f"{self.sid}: complex Betti not palindromic")
        if self.real_status == REAL:
            if not gp.is_palindromic(self.betti_r, self.dim_c):
                problems.append(f"{self.sid}: real Betti not palindromic")
        elif not self.betti_r.is_zero:
            problems.append(f"{self.sid}: nonzero real Betti without real points")
        return problems


def table_pairs(table):
    """Iterate (a, b, value) over the unordered nonempty pairs of an
    adjacency-style table."""
    for a, row in table.items():
        for b, v in row.items():
            if a < b:
                yield a, b, v


@dataclass
class Arrangement:
    ambient: Stratum
    strata: dict
    table: dict  # sid -> {other_sid: meet_sid | UNRESOLVED}; symmetric, sparse
    building_set: tuple = ()
    events: tuple = ()
    stretched: Tri = UNKNOWN
    flag_axioms: tuple = ()

    def codim(self, sid: str) -> int:
        return self.ambient.dim_c - self.strata[sid].dim_c

    def raw_meet(self, a: str, b: str):
        if a == b:
            return a
        row = self.table.get(a)
        return None if row is None else row.get(b)

    def meet(self, a: str, b: str):
        """Stratum id of the intersection, or None when empty."""
        if a == b:
            return a
        if a == AMBIENT_ID:
            return b
        if b == AMBIENT_ID:
            return a
        value = self.raw_meet(a, b)
        if value is UNRESOLVED:
            raise UnsupportedExcessIntersection(
                f"intersection of {a} and {b} is not representable by the "
                "dominant-transform rules"
            )
        return value

    def leq(self, a: str, b: str) -> bool:
        """Whether stratum a is contained in stratum b."""
        return self.meet(a, b) == a

    def validate_strata(self) -> list[str]:
        problems = self.ambient.validate()
        for s in self.strata.values():
            problems += s.validate()
            if s.partner is not None:
                p = self.strata.get(s.partner)
                if p is None or p.partner != s.sid:
                    problems.append(f"{s.sid}: broken partner link")
                elif p.betti_c != s.betti_c or not s.betti_r.is_zero:
                    problems.append(f"{s.sid}: partner payload mismatch")
        return problems


# ----------------------------------------------------------------------
# geometry dispatch


def geom_key(g):
    if isinstance(g, ProjSubspace):
        return g.key()
    if isinstance(g, SetPartition):
        return (g.n, g.blocks)
    raise InputError(f"unsupported geometry {type(g).__name__}")


def geom_meet(g1, g2):
    """Intersection of concrete geometries; None when empty."""
    if isinstance(g1, ProjSubspace) and isinstance(g2, ProjSubspace):
        m = sub_intersect(g1, g2)
        return None if m.is_empty else m
    if isinstance(g1, SetPartition) and isinstance(g2, SetPartition):
        return g1.join(g2)
    raise InputError("mixed or abstract geometry in intersection closure")


def geom_conj(g):
    if isinstance(g, ProjSubspace):
        return g.conjugate()
    if isinstance(g, SetPartition):
        return g
    raise InputError(f"unsupported geometry {type(g).__name__}")


def close_under_intersection(
    ambient: Stratum,
    generators,
    stratum_factory,
    namer=None,
) -> Arrangement:
    """Close concrete generators under pairwise intersection and build
    the full table.

    generators: list of (sid, geometry).  stratum_factory(sid, geometry,
    partner_sid_or_None) -> Stratum supplies payloads and flags.
    Discovered intersections are named by namer(k, geometry) (default
    "x1", "x2", ...) in deterministic discovery order.
    """
    if namer is None:
        namer = lambda k, g: f"x{k}"
    ids = []
    geoms = {}
    by_key = {}
    for sid, g in generators:
        if sid in geoms:
            raise InputError(f"duplicate generator id {sid}")
        if geom_key(g) in by_key:
            raise InputError(f"duplicate generator geometry for {sid}")
        ids.append(sid)
        geoms[sid] = g
        by_key[geom_key(g)] = sid

    flat = {}
    counter = 0
    frontier = list(ids)
    known = list(ids)
    while frontier:
        new = []
        pairs = [
            (a, b)
            for i, a in enumerate(known)
            for b in known[i + 1:]
            if ((a, b) if a < b else (b, a)) not in flat
        ]
        for a, b in pairs:
            key = (a, b) if a < b else (b, a)
            m = geom_meet(geoms[a], geoms[b])
            if m is None:
                flat[key] = None
                continue
            mk = geom_key(m)
            sid = by_key.get(mk)
            if sid is None:
                counter += 1
                sid = namer(counter, m)
                if sid in geoms:
                    raise InputError(f"intersection name clash at {sid}")
                geoms[sid] = m
                by_key[mk] = sid
                new.append(sid)
            flat[key] = sid
        known += new
        frontier = new

    # conj structure: the closure of a conj-closed set is conj-closed
    partner = {}
    for sid in known:
        ck = geom_key(geom_conj(geoms[sid]))
        other = by_key.get(ck)
        if other is None:
            raise InputError(
                f"conjugate of {sid} missing: generators must be invariant "
                "or given in conjugate pairs"
            )
        partner[sid] = None if other == sid else other

    strata = {}
    for sid in known:
        strata[sid] = stratum_factory(sid, geoms[sid], partner[sid])

    table = {sid: {} for sid in known}
    for (a, b), v in flat.items():
        if v is not None:
            table[a][b] = v
            table[b][a] = v
    return Arrangement(ambient=ambient, strata=strata, table=table)


# ----------------------------------------------------------------------
# building sets


def building_violations(arr: Arrangement, members, building):
    """Check the G-building-set condition over the given member ids: the
    minimal building elements containing each member must intersect
    transversally (codimension additivity) with intersection the member
    itself.  Returns (member_id, reason) pairs."""
    problems = []
    building = list(dict.fromkeys(building))
    for a in members:
        containers = [b for b in building if arr.leq(a, b)]
        minimal = [
            b
            for b in containers
            if not any(c != b and arr.leq(c, b) for c in containers)
        ]
        if not minimal:
            problems.append((a, "no building element contains it"))
            continue
        meet = minimal[0]
        for b in minimal[1:]:
            meet = arr.meet(meet, b)
            if meet is None:
                break
        if meet != a:
            problems.append((a, f"minimal building elements meet in {meet}, not {a}"))
            continue
        codim_sum = sum(arr.codim(b) for b in minimal)
        if codim_sum != arr.codim(a):
            problems.append(
                (a, f"not transversal (codims {codim_sum} != {arr.codim(a)})")
            )
    return problems


def validate_building_set(arr: Arrangement, building=None) -> list[str]:
    """Violation report as strings; empty means ok (reports, never
    throws)."""
    building = arr.building_set if building is None else tuple(building)
    problems = []
    for b in building:
        if b not in arr.strata:
            problems.append(f"{b}: building element is not a stratum")
    if problems:
        return problems
    for b in building:
        s = arr.strata[b]
        if s.partner is not None and s.partner not in building:
            problems.append(f"{b}: conjugate partner missing from building set")
    problems += [
        f"{sid}: {reason}"
        for sid, reason in building_violations(arr, list(arr.strata), building)
    ]
    return problems


def _close_ids(arr: Arrangement, ids) -> set:
    closure = set(ids)
    frontier = set(ids)
    while frontier:
        new = set()
        for a in frontier:
            for b in closure:
                m = arr.meet(a, b)
                if m is not None and m not in closure and m not in new:
                    new.add(m)
        closure |= new
        frontier = new
    return closure


def order_building_set(arr: Arrangement, validate_prefixes: bool = False) -> Arrangement:
    """Designate blow-up events: building members of codim >= 2, grouped
    into conjugate-pair events, sorted by nondecreasing complex
    dimension (ties by id).  Optionally re-validate that every prefix of
    the event list is itself a building set of its induced closure."""
    eligible = [b for b in arr.building_set if arr.codim(b) >= 2]
    events = []
    seen = set()
    for b in sorted(eligible, key=lambda s: (arr.strata[s].dim_c, s)):
        if b in seen:
            continue
        s = arr.strata[b]
        if s.partner is not None:
            if s.partner not in arr.building_set:
                raise InputError(f"building set not conj-invariant at {b}")
            pair = tuple(sorted((b, s.partner)))
            events.append(pair)
            seen.update(pair)
        else:
            events.append((b,))
            seen.add(b)
    events.sort(key=lambda ev: (arr.strata[ev[0]].dim_c, ev[0]))
    out = replace(arr, events=tuple(events))

    if validate_prefixes:
        flat = []
        for i, ev in enumerate(events):
            flat += list(ev)
            closure = _close_ids(arr, flat)
            problems = building_violations(arr, closure, flat)
            if problems:
                raise InputError(
                    f"prefix {i + 1} of the event order is not a building set: "
                    + "; ".join(f"{sid}: {reason}" for sid, reason in problems)
                )
    return out


def check_g_invariance(arr: Arrangement) -> list[str]:
    """Confirm recorded real statuses against the geometry and the
    equivariance of the intersection table."""
    problems = []
    conj_id = {}
    for sid, s in arr.strata.items():
        if s.geometry is None:
            conj_id[sid] = sid if s.partner is None else s.partner
            continue
        ck = geom_key(geom_conj(s.geometry))
        match = None
        for tid, t in arr.strata.items():
            if t.geometry is not None and geom_key(t.geometry) == ck:
                match = tid
                break
        if match is None:
            problems.append(f"{sid}: conjugate geometry not in arrangement")
            continue
        conj_id[sid] = match
        expected = None if match == sid else match
        if s.partner != expected:
            problems.append(
                f"{sid}: recorded status {s.real_status!r} does not match "
                f"geometry (conjugate is {match})"
            )
    for a, b, m in table_pairs(arr.table):
        if m is UNRESOLVED or a not in conj_id or b not in conj_id:
            continue
        cm = arr.raw_meet(conj_id[a], conj_id[b])
        if cm is not UNRESOLVED and m in conj_id and cm != conj_id[m]:
            problems.append(f"table not equivariant at ({a}, {b})")
    return problems
