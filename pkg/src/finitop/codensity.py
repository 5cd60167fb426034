"""Truncated comma-category limits and the universality of the two monads.

For a space ``x`` and a family of generator objects (finite discrete sets or
Sierpiński powers) the diagram has one object per continuous map from ``x``
into a generator and one arrow per generator morphism commuting with those
maps.  Its limit is computed by brute force and compared with the carrier of
the corresponding monad.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

from . import frame, stone
from .monad import LawReport, Monad
from .topology import (
    ContinuousMap,
    FiniteLimit,
    FiniteSpace,
    discrete,
    is_continuous,
    limit_of_finite_diagram,
)

log = logging.getLogger(__name__)

FINSET = "finset"
SIERPINSKI = "sierpinski"
KINDS = (FINSET, SIERPINSKI)
DEFAULT_BOUNDS = {FINSET: 3, SIERPINSKI: 2}
DEFAULT_MAX_OBJECTS = 5_000
DEFAULT_MAX_ARROWS = 2_000_000


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, count: int, cap: int):
        self.what, self.count, self.cap = what, count, cap
        super().__init__(f"{what}: {count} exceeds budget {cap}")


class ConeConditionViolated(AssertionError):
    pass


class NotACone(ValueError):
    pass


class MediationFailure(AssertionError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    size_bound: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        lowest = 1 if self.kind == FINSET else 0
        if self.size_bound < lowest:
            raise ValueError(f"{self.kind} bound must be at least {lowest}")

    @property
    def sizes(self) -> range:
        """Labels of the generator objects: |B| for sets, m for P(m)."""
        return range(1 if self.kind == FINSET else 0, self.size_bound + 1)

    def obj(self, size: int) -> FiniteSpace:
        return generator_object(self.kind, size)

    @property
    def monad(self) -> Monad:
        return stone.STONE if self.kind == FINSET else frame.SOBER

    def psi(self, f: ContinuousMap) -> ContinuousMap:
        if self.kind == FINSET:
            return stone.projection_psi(f)
        return frame.projection_psi_sober(f)


def generator_object(kind: str, size: int) -> FiniteSpace:
    if kind == FINSET:
        return discrete(size)
    return frame.power(size).space


@lru_cache(maxsize=None)
def generator_morphisms(kind: str, src: int, dst: int) -> tuple[ContinuousMap, ...]:
    """Every morphism between two generator objects."""
    a, b = generator_object(kind, src), generator_object(kind, dst)
    if kind == FINSET:
        return tuple(
            ContinuousMap(a, b, m) for m in itertools.product(range(b.n), repeat=a.n)
        )
    # continuous maps into P(dst) are dst-indexed families of opens
    return tuple(
        frame.family_to_map(a, fam) for fam in itertools.product(a.opens, repeat=dst)
    )


def maps_into_generator(x: FiniteSpace, kind: str, size: int) -> list[ContinuousMap]:
    b = generator_object(kind, size)
    if kind == FINSET:
        return [
            ContinuousMap(x, b, m, check=False)
            for m in itertools.product(range(size), repeat=x.n)
            if is_continuous(x, b, m)
        ]
    return [frame.family_to_map(x, fam) for fam in itertools.product(x.opens, repeat=size)]


@dataclass(frozen=True)
class DiagramObject:
    size: int
    map: ContinuousMap

    @property
    def codomain(self) -> FiniteSpace:
        return self.map.codomain


@dataclass(frozen=True)
class CommaDiagram:
    apex: FiniteSpace
    generator: GeneratorSpec
    objects: tuple[DiagramObject, ...]
    arrows: tuple[tuple[int, int, ContinuousMap], ...]

    @cached_property
    def index(self) -> dict[tuple[FiniteSpace, tuple[int, ...]], int]:
        return {(o.codomain, o.map.mapping): i for i, o in enumerate(self.objects)}

    def lookup(self, codomain: FiniteSpace, mapping: Sequence[int]) -> int:
        return self.index[(codomain, tuple(mapping))]


def build_comma_diagram(
    x: FiniteSpace,
    g: GeneratorSpec,
    max_objects: int = DEFAULT_MAX_OBJECTS,
    max_arrows: int = DEFAULT_MAX_ARROWS,
) -> CommaDiagram:
    """Enumerate the comma category of ``x`` over the truncated generators.

    Objects are sorted by generator size, then by map table.
    """
    objects: list[DiagramObject] = []
    by_size: dict[int, list[int]] = {}
    for size in g.sizes:
        for f in maps_into_generator(x, g.kind, size):
            by_size.setdefault(size, []).append(len(objects))
            objects.append(DiagramObject(size, f))
            if len(objects) > max_objects:
                raise BudgetExceeded("diagram objects", len(objects), max_objects)

    arrow_count = sum(
        len(by_size.get(s, ())) * len(generator_morphisms(g.kind, s, t))
        for s in g.sizes
        for t in g.sizes
    )
    if arrow_count > max_arrows:
        raise BudgetExceeded("diagram arrows", arrow_count, max_arrows)

    index = {(o.codomain, o.map.mapping): i for i, o in enumerate(objects)}
    arrows = []
    for s in g.sizes:
        for t in g.sizes:
            codomain = g.obj(t)
            for phi in generator_morphisms(g.kind, s, t):
                pm = phi.mapping
                for i in by_size.get(s, ()):
                    target = tuple(pm[v] for v in objects[i].map.mapping)
                    arrows.append((i, index[(codomain, target)], phi))
    return CommaDiagram(x, g, tuple(objects), tuple(arrows))


@dataclass(frozen=True)
class LimitCone:
    diagram: CommaDiagram
    limit: FiniteLimit

    @property
    def carrier(self) -> FiniteSpace:
        return self.limit.space

    @property
    def projections(self) -> tuple[ContinuousMap, ...]:
        return self.limit.projections

    def as_cone(self) -> "Cone":
        return Cone(self.carrier, self.projections)


def compute_limit(d: CommaDiagram) -> LimitCone:
    lim = limit_of_finite_diagram([o.codomain for o in d.objects], d.arrows)
    return LimitCone(d, lim)


@dataclass(frozen=True)
class Cone:
    apex: FiniteSpace
    legs: tuple[ContinuousMap, ...]


def cone_violation(cone: Cone, d: CommaDiagram) -> Optional[int]:
    """Index of the first arrow whose triangle fails to commute, if any."""
    if len(cone.legs) != len(d.objects):
        raise NotACone("leg count differs from object count")
    for leg, obj in zip(cone.legs, d.objects):
        if leg.domain != cone.apex or leg.codomain != obj.codomain:
            raise NotACone("leg has the wrong domain or codomain")
    for k, (src, dst, phi) in enumerate(d.arrows):
        pm = phi.mapping
        if tuple(pm[v] for v in cone.legs[src].mapping) != cone.legs[dst].mapping:
            return k
    return None


def candidate_cone(x: FiniteSpace, g: GeneratorSpec, d: Optional[CommaDiagram] = None) -> Cone:
    """T(x) with the projections psi_f, checked against every arrow."""
    d = d or build_comma_diagram(x, g)
    cone = Cone(g.monad.carrier(x), tuple(g.psi(o.map) for o in d.objects))
    bad = cone_violation(cone, d)
    if bad is not None:
        raise ConeConditionViolated(f"arrow {d.arrows[bad][:2]}")
    return cone


@dataclass(frozen=True)
class Comparison:
    apex: FiniteSpace
    limit: LimitCone
    mapping: tuple[int, ...]

    @property
    def bijective(self) -> bool:
        return self.limit.limit.n == self.apex.n == len(set(self.mapping))

    @cached_property
    def map(self) -> ContinuousMap:
        return ContinuousMap(self.apex, self.limit.carrier, self.mapping)

    @cached_property
    def iso(self) -> bool:
        return self.bijective and self.map.is_homeomorphism()


def comparison_map(cone: Cone, limit: LimitCone) -> Comparison:
    """Mediating map from a cone into the limit, with an isomorphism verdict."""
    d = limit.diagram
    if len(cone.legs) != len(d.objects):
        raise NotACone("leg count differs from object count")
    index = limit.limit.index
    mapping = []
    for m in cone.apex.points:
        t = tuple(leg.mapping[m] for leg in cone.legs)
        if t not in index:
            raise NotACone(f"apex point {m} maps to an incompatible tuple")
        mapping.append(index[t])
    return Comparison(cone.apex, limit, tuple(mapping))


def mediating_alpha(
    test_cone: Cone,
    x: FiniteSpace,
    g: GeneratorSpec,
    d: Optional[CommaDiagram] = None,
    limit: Optional[LimitCone] = None,
) -> ContinuousMap:
    """The factorisation of ``test_cone`` through T(x), built from its
    values on characteristic maps and then cross-checked against the
    factorisation through the brute-force limit.
    """
    d = d or build_comma_diagram(x, g)
    if cone_violation(test_cone, d) is not None:
        raise NotACone("test cone fails a commuting triangle")
    two = g.obj(2 if g.kind == FINSET else 1)
    if g.size_bound < (2 if g.kind == FINSET else 1):
        raise ValueError("bound too small to contain characteristic maps")

    if g.kind == FINSET:
        witness = stone.sc_object(x)
        elements = witness.algebra.elements
        index = witness.stone.index

        def is_point(members):
            return stone.is_ultrafilter(witness.algebra, members) and stone.galvin_horn_check(
                witness.algebra, members
            )
    else:
        witness = frame.fpo_object(x)
        elements = witness.frame.elements
        index = witness.points.index

        def is_point(members):
            return frame.is_completely_prime(witness.frame, members)

    legs = {
        a: test_cone.legs[d.lookup(two, [1 if a >> p & 1 else 0 for p in x.points])]
        for a in elements
    }
    mapping = []
    for m in test_cone.apex.points:
        members = frozenset(a for a in elements if legs[a].mapping[m] == 1)
        if not is_point(members) or members not in index:
            raise MediationFailure(f"alpha({m}) is not a point of T(x)")
        mapping.append(index[members])
    alpha = ContinuousMap(test_cone.apex, witness.carrier, tuple(mapping))

    candidate = candidate_cone(x, g, d)
    for psi, leg in zip(candidate.legs, test_cone.legs):
        if (psi @ alpha).mapping != leg.mapping:
            raise MediationFailure("alpha does not commute with the projections")

    limit = limit or compute_limit(d)
    cand = comparison_map(candidate, limit)
    if not cand.iso:
        raise MediationFailure("candidate cone is not universal at this bound")
    beta = cand.map.inverse() @ comparison_map(test_cone, limit).map
    if beta.mapping != alpha.mapping:
        raise MediationFailure("alpha differs from the mediation through the limit")
    return alpha


def cone_through(h: ContinuousMap, candidate: Cone) -> Cone:
    """The cone obtained by precomposing every leg of ``candidate`` with ``h``."""
    return Cone(h.domain, tuple(leg @ h for leg in candidate.legs))


def limit_morphism(
    phi: ContinuousMap, source: LimitCone, target: LimitCone
) -> ContinuousMap:
    """T(phi) between limits: the projection at g equals the projection at g.phi."""
    ds, dt = source.diagram, target.diagram
    coords = [ds.lookup(o.codomain, [o.map.mapping[v] for v in phi.mapping]) for o in dt.objects]
    index = target.limit.index
    mapping = []
    for t in source.limit.tuples:
        image = tuple(t[c] for c in coords)
        if image not in index:
            raise AssertionError("induced tuple is not in the target limit")
        mapping.append(index[image])
    return ContinuousMap(source.carrier, target.carrier, tuple(mapping))


@dataclass
class ScanEntry:
    bound: int
    objects: int
    arrows: int
    carrier_size: int
    candidate_size: int
    iso: bool
    seconds: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "objects": self.objects,
            "arrows": self.arrows,
            "carrier_size": self.carrier_size,
            "candidate_size": self.candidate_size,
            "iso": self.iso,
        }


@dataclass
class LimitReport:
    space: FiniteSpace
    kind: str
    entries: list[ScanEntry]

    @property
    def least_iso_bound(self) -> Optional[int]:
        return next((e.bound for e in self.entries if e.iso), None)

    @property
    def stable(self) -> bool:
        """Iso at the least iso bound and at every larger tested bound."""
        least = self.least_iso_bound
        return least is not None and all(e.iso for e in self.entries if e.bound >= least)

    def to_dict(self) -> dict:
        return {
            "space": self.space.canonical_string(),
            "generator": self.kind,
            "entries": [e.to_dict() for e in self.entries],
            "least_iso_bound": self.least_iso_bound,
            "stable": self.stable,
        }


def check_bound(x: FiniteSpace, g: GeneratorSpec, **budget) -> ScanEntry:
    start = time.perf_counter()
    d = build_comma_diagram(x, g, **budget)
    lim = compute_limit(d)
    cmp = comparison_map(candidate_cone(x, g, d), lim)
    entry = ScanEntry(
        g.size_bound,
        len(d.objects),
        len(d.arrows),
        lim.limit.n,
        cmp.apex.n,
        cmp.iso,
        time.perf_counter() - start,
    )
    log.info(
        "%s bound %d on %s: %d objects, %d arrows, %.3fs",
        g.kind, g.size_bound, x.canonical_string(), entry.objects, entry.arrows, entry.seconds,
    )
    return entry


def stabilization_scan(
    x: FiniteSpace, kind: str, bounds: Iterable[int], **budget
) -> LimitReport:
    entries = [check_bound(x, GeneratorSpec(kind, b), **budget) for b in sorted(bounds)]
    return LimitReport(x, kind, entries)


def verify_idempotence(x: FiniteSpace, g: GeneratorSpec) -> bool:
    """mu at x is an isomorphism and T(x) is fixed by T up to the unit."""
    monad = g.monad
    try:
        mu = monad.mult(x)
    except Exception:
        return False
    return mu.is_homeomorphism() and monad.unit(monad.carrier(x)).is_homeomorphism()


def projection_laws(
    x: FiniteSpace, g: GeneratorSpec, report: Optional[LawReport] = None
) -> LawReport:
    """psi_f . eta = f and psi_f . mu = psi_{psi_f} for every diagram object f."""
    monad = g.monad
    report = report or LawReport(monad.name, x)
    eta, mu = monad.unit(x), monad.mult(x)
    for size in g.sizes:
        for f in maps_into_generator(x, g.kind, size):
            psi = g.psi(f)
            where = f"f={list(f.mapping)} into size {size}"
            ok = (psi @ eta).mapping == f.mapping
            report.record("psi_eta", ok, "" if ok else where)
            ok = (psi @ mu).mapping == g.psi(psi).mapping
            report.record("psi_mu", ok, "" if ok else where)
    return report
