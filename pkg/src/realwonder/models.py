"""Builders for the supported families: De Concini-Procesi subspace
models, Kapranov's moduli of stable rational curves with the real
structures Conj_sigma, configuration-space compactifications
(Fulton-MacPherson, Ulyanov, Kuperberg-Thurston), and the braid twins
used as a cross-backend oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import gradedpoly as gp
from .arrangement import (
    AMBIENT_ID,
    Arrangement,
    Stratum,
    building_violations,
    close_under_intersection,
    order_building_set,
    validate_building_set,
)
from .errors import InputError
from .exact import GaussianRational
from .flags import (
    CONJUGATION_SPACE,
    FlagSet,
    Tri,
    YES,
    pair_event_flags,
    product_flags,
)
from .partitions import SetPartition, diagonals
from .subspaces import (
    ProjSubspace,
    linear_rank,
    rnc_points,
    span_points,
)


# ----------------------------------------------------------------------
# abstract factors for configuration models


@dataclass(frozen=True)
class SpaceData:
    """A closed nonsingular complex variety with a real structure, given
    by its exact Betti data plus declared verdict flags (axioms)."""

    name: str
    dim_c: int
    betti_c: gp.BettiVector
    betti_r: gp.BettiVector
    real_nonempty: bool = True
    flags: FlagSet = field(default_factory=FlagSet)

    def __post_init__(self):
        tc, tr = gp.total(self.betti_c), gp.total(self.betti_r)
        if tr > tc or (tc - tr) % 2:
            raise InputError(f"{self.name}: Smith inequality or parity violated")
        if not gp.is_palindromic(self.betti_c, 2 * self.dim_c):
            raise InputError(f"{self.name}: complex Betti numbers not palindromic")
        if self.real_nonempty:
            if not gp.is_palindromic(self.betti_r, self.dim_c):
                raise InputError(f"{self.name}: real Betti numbers not palindromic")
        elif not self.betti_r.is_zero:
            raise InputError(f"{self.name}: empty real locus with nonzero real Betti")
        if self.flags.maximal is YES and tc != tr:
            raise InputError(f"{self.name}: declared maximal with deficiency {tc - tr}")
        if self.flags.maximal is Tri.NO and tc == tr:
            raise InputError(f"{self.name}: declared non-maximal with deficiency 0")

    @classmethod
    def projective_space(cls, k: int) -> "SpaceData":
        return cls(
            name=f"P{k}",
            dim_c=k,
            betti_c=gp.projective_betti(k, 2),
            betti_r=gp.projective_betti(k, 1),
            flags=CONJUGATION_SPACE,
        )

    @classmethod
    def ellipsoid(cls) -> "SpaceData":
        """The quadric ellipsoid (P1 x P1 with fixed locus S^2): a
        declared effective Galois-maximal, non-maximal surface."""
        return cls(
            name="ellipsoid",
            dim_c=2,
            betti_c=gp.BettiVector([1, 0, 2, 0, 1]),
            betti_r=gp.BettiVector([1, 0, 1]),
            flags=FlagSet(effective=YES, maximal=Tri.NO, galois_maximal=YES),
        )

    @classmethod
    def from_dict(cls, d) -> "SpaceData":
        try:
            return cls(
                name=str(d.get("name", "space")),
                dim_c=int(d["dim_c"]),
                betti_c=gp.BettiVector(d["betti_c"]),
                betti_r=gp.BettiVector(d.get("betti_r", [])),
                real_nonempty=bool(d.get("real_nonempty", True)),
                flags=FlagSet.from_dict(d.get("flags", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad space data: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dim_c": self.dim_c,
            "betti_c": list(self.betti_c),
            "betti_r": list(self.betti_r),
            "real_nonempty": self.real_nonempty,
            "flags": self.flags.as_dict(),
        }


# ----------------------------------------------------------------------
# linear (De Concini-Procesi) backend


def _linear_factory(sid, geom: ProjSubspace, partner):
    k = geom.proj_dim
    invariant = partner is None
    return Stratum(
        sid=sid,
        dim_c=k,
        betti_c=gp.projective_betti(k, 2),
        betti_r=gp.projective_betti(k, 1) if invariant else gp.ZERO,
        flags=CONJUGATION_SPACE if invariant else pair_event_flags(),
        partner=partner,
        real_nonempty=invariant,
        geometry=geom,
    )


def _linear_axioms(arr: Arrangement):
    axioms = [(AMBIENT_ID, "projective space with standard conjugation")]
    for sid, s in sorted(arr.strata.items()):
        if s.partner is None:
            axioms.append((sid, "real linear subspace: conjugation space"))
        elif sid < s.partner:
            axioms.append((sid, "conj-swapped pair: effective, Galois maximal"))
    return tuple(axioms)


def _complete_building(arr: Arrangement, building) -> tuple:
    """Add violating intersection strata to the building set until the
    G-building-set condition holds ("generators plus closure
    requirements")."""
    building = list(dict.fromkeys(building))
    while True:
        violators = {
            sid
            for sid, _ in building_violations(arr, list(arr.strata), building)
            if sid not in building
        }
        if not violators:
            break
        for sid in sorted(violators):
            if sid in building:
                continue  # added as a partner earlier this round
            if arr.codim(sid) < 2:
                raise InputError(
                    f"building set cannot be completed: {sid} has codim < 2"
                )
            building.append(sid)
            partner = arr.strata[sid].partner
            if partner and partner not in building:
                building.append(partner)
    problems = validate_building_set(arr, building)
    if problems:
        raise InputError("invalid building set: " + "; ".join(problems))
    return tuple(sorted(building, key=lambda s: (arr.strata[s].dim_c, s)))


def build_dcp(
    ambient_dim: int,
    generators,
    *,
    validate_prefixes: bool = False,
) -> Arrangement:
    """Wonderful model of an arrangement of Conj-invariant (or
    conj-paired) linear subspaces of P^N.

    generators: list of (name, ProjSubspace).  The building set is the
    generator set completed by whatever closure members the G-building
    condition demands; events are its codim >= 2 members in dimension
    order.
    """
    seen = set()
    for name, g in generators:
        if g.ambient_dim != ambient_dim:
            raise InputError(f"{name}: ambient mismatch")
        if g.is_empty or g.proj_dim >= ambient_dim:
            raise InputError(f"{name}: generators must be proper nonempty subspaces")
        if g in seen:
            raise InputError(f"{name}: duplicate generator")
        seen.add(g)

    ambient = Stratum(
        sid=AMBIENT_ID,
        dim_c=ambient_dim,
        betti_c=gp.projective_betti(ambient_dim, 2),
        betti_r=gp.projective_betti(ambient_dim, 1),
        flags=CONJUGATION_SPACE,
    )
    arr = close_under_intersection(ambient, generators, _linear_factory)
    arr.building_set = _complete_building(arr, [name for name, _ in generators])
    arr.stretched = YES
    arr.flag_axioms = _linear_axioms(arr)
    return order_building_set(arr, validate_prefixes=validate_prefixes)


# ----------------------------------------------------------------------
# Kapranov's moduli model


@dataclass(frozen=True)
class ModuliSpec:
    """Moduli of n-pointed stable rational curves with the real
    structure induced by an order-2 permutation sigma (as a 1-indexed
    tuple of images) fixing at least one marked point."""

    n: int
    sigma: tuple

    def __post_init__(self):
        n, s = self.n, self.sigma
        if n < 3:
            raise InputError("need n >= 3 marked points")
        if sorted(s) != list(range(1, n + 1)):
            raise InputError(f"sigma is not a permutation of 1..{n}")
        if any(s[s[i] - 1] != i + 1 for i in range(n)):
            raise InputError("sigma must be an involution")
        if all(s[i] != i + 1 for i in range(n)):
            raise InputError(
                "sigma must have a fixed marked point (the free case is out of scope)"
            )

    @property
    def fixed(self):
        return [i + 1 for i in range(self.n) if self.sigma[i] == i + 1]

    @property
    def cycles(self):
        return [
            (i + 1, self.sigma[i])
            for i in range(self.n)
            if self.sigma[i] > i + 1
        ]


def parse_sigma(text: str, n: int) -> ModuliSpec:
    """Cycle notation: "id" or e.g. "(1 2)(3 4)"; commas also accepted."""
    text = text.strip()
    images = list(range(1, n + 1))
    if text not in ("id", "", "()"):
        if not (text.startswith("(") and text.endswith(")")):
            raise InputError(f"cannot parse permutation {text!r}")
        for chunk in text[1:-1].split(")("):
            parts = [p for p in chunk.replace(",", " ").split() if p]
            try:
                cycle = [int(p) for p in parts]
            except ValueError as exc:
                raise InputError(f"cannot parse cycle ({chunk})") from exc
            if len(cycle) != 2:
                raise InputError("only order-2 permutations are allowed")
            i, j = cycle
            if not (1 <= i <= n and 1 <= j <= n) or i == j:
                raise InputError(f"bad transposition ({i} {j})")
            if images[i - 1] != i or images[j - 1] != j:
                raise InputError("cycles must be disjoint")
            images[i - 1], images[j - 1] = j, i
    return ModuliSpec(n=n, sigma=tuple(images))


def _relabel_fixing_last(spec: ModuliSpec) -> ModuliSpec:
    """Kapranov's model distinguishes one sigma-fixed marked point;
    relabel so it is the n-th."""
    n = spec.n
    if spec.sigma[n - 1] == n:
        return spec
    m = spec.fixed[0]
    tau = list(range(1, n + 1))
    tau[m - 1], tau[n - 1] = n, m

    def t(x):
        return tau[x - 1]

    new = [0] * n
    for i in range(1, n + 1):
        new[t(i) - 1] = t(spec.sigma[i - 1])
    return ModuliSpec(n=n, sigma=tuple(new))


def moduli_parameters(spec: ModuliSpec, real_params=None):
    """Rational-normal-curve parameters for the n-1 points: one real
    value per sigma-fixed marked point (except the distinguished one),
    one conjugate pair per 2-cycle."""
    spec = _relabel_fixing_last(spec)
    n = spec.n
    fixed = [i for i in spec.fixed if i != n]
    if real_params is None:
        real_params = list(range(len(fixed)))
    if len(real_params) != len(fixed):
        raise InputError("wrong number of real parameters")
    params = {}
    for i, t in zip(fixed, real_params):
        params[i] = GaussianRational(t)
    for k, (i, j) in enumerate(spec.cycles, start=1):
        params[i] = GaussianRational(k, 1)
        params[j] = GaussianRational(k, -1)
    return spec, [params[i] for i in range(1, n)]


def build_moduli(
    spec: ModuliSpec,
    *,
    real_params=None,
    validate_prefixes: bool = False,
) -> Arrangement:
    """Kapranov's iterated blow-up model: P^{n-3} and the spans of
    subsets of the n-1 generic points, blown up in dimension order."""
    spec, params = moduli_parameters(spec, real_params)
    n = spec.n
    big_n = n - 3

    ambient = Stratum(
        sid=AMBIENT_ID,
        dim_c=max(big_n, 0),
        betti_c=gp.projective_betti(max(big_n, 0), 2),
        betti_r=gp.projective_betti(max(big_n, 0), 1),
        flags=CONJUGATION_SPACE,
    )
    if big_n < 1 or n < 5:
        return Arrangement(
            ambient=ambient,
            strata={},
            table={},
            stretched=YES,
            flag_axioms=((AMBIENT_ID, "projective space with standard conjugation"),),
        )

    points = rnc_points(big_n, params)
    # verified genericity: every small subset of the points is independent
    labels = list(range(1, n))
    for size in range(2, min(big_n + 1, n - 1) + 1):
        for subset in combinations(range(n - 1), size):
            if linear_rank(*[points[i] for i in subset]) != size:
                raise InputError("rational normal curve points are not generic")

    generators = []
    for size in range(1, n - 3):
        for subset in combinations(range(n - 1), size):
            name = "s" + ".".join(str(labels[i]) for i in subset)
            generators.append((name, span_points([points[i] for i in subset])))

    arr = build_dcp(big_n, generators, validate_prefixes=validate_prefixes)
    return arr


# ----------------------------------------------------------------------
# configuration-space models (partition backend)


def _power_factory(space: SpaceData):
    def factory(sid, part: SetPartition, partner):
        k = part.num_blocks
        bc = gp.kunneth(*([space.betti_c] * k))
        br = (
            gp.kunneth(*([space.betti_r] * k))
            if space.real_nonempty
            else gp.ZERO
        )
        return Stratum(
            sid=sid,
            dim_c=space.dim_c * k,
            betti_c=bc,
            betti_r=br,
            flags=product_flags([space.flags] * k),
            partner=None,
            real_nonempty=space.real_nonempty,
            geometry=part,
        )

    return factory


def _config_arrangement(n: int, space: SpaceData, generators) -> Arrangement:
    if n < 2:
        raise InputError("configuration models need n >= 2 points")
    ambient = Stratum(
        sid=AMBIENT_ID,
        dim_c=space.dim_c * n,
        betti_c=gp.kunneth(*([space.betti_c] * n)),
        betti_r=gp.kunneth(*([space.betti_r] * n)) if space.real_nonempty else gp.ZERO,
        flags=product_flags([space.flags] * n),
        real_nonempty=space.real_nonempty,
    )
    named = [(p.label(), p) for p in generators]
    arr = close_under_intersection(
        ambient, named, _power_factory(space), namer=lambda k, g: g.label()
    )
    arr.stretched = YES
    arr.flag_axioms = (
        (AMBIENT_ID, f"product of {n} copies of declared space {space.name}"),
    )
    return arr


def build_fm(n: int, space: SpaceData, *, validate_prefixes: bool = False) -> Arrangement:
    """Fulton-MacPherson compactification: building set = all diagonals."""
    arr = _config_arrangement(n, space, diagonals(n))
    building = [p.label() for p in diagonals(n)]
    problems = validate_building_set(arr, building)
    if problems:
        raise InputError("diagonal building set invalid: " + "; ".join(problems))
    arr.building_set = tuple(
        sorted(building, key=lambda s: (arr.strata[s].dim_c, s))
    )
    return order_building_set(arr, validate_prefixes=validate_prefixes)


def build_ulyanov(
    n: int, space: SpaceData, *, validate_prefixes: bool = False
) -> Arrangement:
    """Ulyanov's compactification: building set = all polydiagonals."""
    arr = _config_arrangement(n, space, diagonals(n))
    building = sorted(arr.strata)
    problems = validate_building_set(arr, building)
    if problems:
        raise InputError("polydiagonal building set invalid: " + "; ".join(problems))
    arr.building_set = tuple(
        sorted(building, key=lambda s: (arr.strata[s].dim_c, s))
    )
    return order_building_set(arr, validate_prefixes=validate_prefixes)


def build_kt(
    n: int,
    space: SpaceData,
    building,
    *,
    validate_prefixes: bool = False,
) -> Arrangement:
    """Kuperberg-Thurston style compactification for a user-supplied
    polydiagonal building set (list of block lists); the set is
    validated, never auto-completed."""
    parts = []
    for blocks in building:
        parts.append(SetPartition(n, blocks))
    if not parts:
        raise InputError("empty building set")
    arr = _config_arrangement(n, space, parts)
    names = [p.label() for p in parts]
    problems = validate_building_set(arr, names)
    if problems:
        raise InputError("user building set invalid: " + "; ".join(problems))
    arr.building_set = tuple(sorted(names, key=lambda s: (arr.strata[s].dim_c, s)))
    return order_building_set(arr, validate_prefixes=validate_prefixes)


# ----------------------------------------------------------------------
# braid twins: the same wonderful model through both backends


def _braid_partition_factory(sid, part: SetPartition, partner):
    k = part.num_blocks
    return Stratum(
        sid=sid,
        dim_c=k,
        betti_c=gp.projective_betti(k, 2),
        betti_r=gp.projective_betti(k, 1),
        flags=CONJUGATION_SPACE,
        partner=None,
        geometry=part,
    )


def _braid_subspace(n: int, part: SetPartition) -> ProjSubspace:
    rows = []
    for row in part.indicator_rows(projective=True):
        rows.append(tuple(GaussianRational(x) for x in row))
    return ProjSubspace.from_basis_rows(n, rows)


def build_braid(n: int, backend: str, *, validate_prefixes: bool = False) -> Arrangement:
    """The braid diagonal arrangement z_i = z_j inside the projective
    closure P^n of n points on an affine line, built either through the
    partition backend or through honest linear algebra; runs of the two
    twins must agree step by step."""
    if n < 3:
        raise InputError("braid models need n >= 3")
    gens = diagonals(n)
    if backend == "partition":
        ambient = Stratum(
            sid=AMBIENT_ID,
            dim_c=n,
            betti_c=gp.projective_betti(n, 2),
            betti_r=gp.projective_betti(n, 1),
            flags=CONJUGATION_SPACE,
        )
        named = [(p.label(), p) for p in gens]
        arr = close_under_intersection(
            ambient, named, _braid_partition_factory, namer=lambda k, g: g.label()
        )
    elif backend == "linear":
        from .partitions import all_partitions

        label_by_subspace = {}
        subspace_by_label = {}
        for part in all_partitions(n):
            if part.is_discrete:
                continue
            subspace = _braid_subspace(n, part)
            label_by_subspace[subspace] = part.label()
            subspace_by_label[part.label()] = subspace

        def namer(counter, geom):
            # every honest meet of polydiagonals must be a polydiagonal
            label = label_by_subspace.get(geom)
            if label is None:
                raise InputError("discovered braid intersection is not a polydiagonal")
            return label

        ambient = Stratum(
            sid=AMBIENT_ID,
            dim_c=n,
            betti_c=gp.projective_betti(n, 2),
            betti_r=gp.projective_betti(n, 1),
            flags=CONJUGATION_SPACE,
        )
        named = [(p.label(), subspace_by_label[p.label()]) for p in gens]
        arr = close_under_intersection(ambient, named, _linear_factory, namer=namer)
    else:
        raise InputError(f"unknown braid backend {backend!r}")

    arr.stretched = YES
    building = [p.label() for p in gens]
    problems = validate_building_set(arr, building)
    if problems:
        raise InputError(f"braid building set invalid ({backend}): " + "; ".join(problems))
    arr.building_set = tuple(sorted(building, key=lambda s: (arr.strata[s].dim_c, s)))
    arr.flag_axioms = ((AMBIENT_ID, "projective space with standard conjugation"),)
    return order_building_set(arr, validate_prefixes=validate_prefixes)
