"""Frames of opens, completely prime filters and the sober monad.

Points of a frame are its completely prime filters; the frame of opens of
``x`` followed by the point space gives the soberification FpΩ(x).  The
Sierpiński powers P(m) classify m-indexed families of opens and play the
role of generator objects for the sober monad.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

from .monad import LawReport, Monad, UnitNotIso, verify_laws
from .topology import (
    ContinuousMap,
    FiniteSpace,
    TopologyError,
    generate_topology,
    indices,
    kolmogorov_quotient,
    mask_of,
    up_sets,
    validate_topology,
)

DEFAULT_INDEX_CAP = 4


class NotATopology(RuntimeError):
    pass


class IndexCapExceeded(ValueError):
    pass


class NotOpen(ValueError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"family member {index} is not open")


def joins_of_subfamilies(family: Iterable[int]) -> set[int]:
    """Join of every subfamily of ``family`` (the empty join included)."""
    joins = {0}
    for a in family:
        joins |= {j | a for j in joins}
    return joins


@dataclass(frozen=True)
class OpenFrame:
    """Frame of opens of ``base`` ordered by inclusion."""

    base: FiniteSpace

    @property
    def elements(self) -> tuple[int, ...]:
        return self.base.opens

    @property
    def top(self) -> int:
        return self.base.full

    @property
    def bottom(self) -> int:
        return 0

    @cached_property
    def index(self) -> dict[int, int]:
        return {a: i for i, a in enumerate(self.elements)}

    def leq(self, a: int, b: int) -> bool:
        return a & b == a

    def meet(self, a: int, b: int) -> int:
        c = a & b
        assert c in self.index
        return c

    def join(self, family: Iterable[int]) -> int:
        c = 0
        for a in family:
            c |= a
        assert c in self.index
        return c

    @cached_property
    def strictly_above(self) -> tuple[int, ...]:
        els = self.elements
        return tuple(
            mask_of(j for j, b in enumerate(els) if b != a and a & b == a)
            for a in els
        )

    def check_distributive(self, exhaustive: bool = False) -> bool:
        """Meet distributes over joins.

        The binary law is checked by default and implies the law for every
        finite family by induction; ``exhaustive`` checks every subfamily.
        """
        els = self.elements
        if not exhaustive:
            return all(
                self.meet(x, y | z) == self.meet(x, y) | self.meet(x, z)
                for x, y, z in itertools.product(els, repeat=3)
            )
        for r in range(len(els) + 1):
            for fam in itertools.combinations(els, r):
                joined = self.join(fam)
                for x in els:
                    if self.meet(x, joined) != self.join(self.meet(x, y) for y in fam):
                        return False
        return True

    def __len__(self) -> int:
        return len(self.elements)


def open_frame(x: FiniteSpace) -> OpenFrame:
    frame = OpenFrame(x)
    if not frame.check_distributive():
        raise AssertionError("frame of opens violates distributivity")
    return frame


def preimage_map(f: ContinuousMap) -> dict[int, int]:
    """Ω(f): Ω(codomain) -> Ω(domain)."""
    return {v: f.preimage(v) for v in f.codomain.opens}


def is_frame_homomorphism(
    source: OpenFrame, target: OpenFrame, h: Mapping[int, int]
) -> bool:
    """True when ``h`` preserves top, bottom, binary meets and finite joins."""
    els = source.elements
    if set(h) != set(els) or any(v not in target.index for v in h.values()):
        return False
    if h[source.top] != target.top or h[source.bottom] != target.bottom:
        return False
    for a, b in itertools.product(els, repeat=2):
        if h[a & b] != h[a] & h[b]:
            return False
    pairs = {(0, 0)}
    for a in els:
        pairs |= {(j | a, k | h[a]) for j, k in pairs}
    return all(h[j] == k for j, k in pairs)


@dataclass(frozen=True)
class CompletelyPrimeFilter:
    frame: OpenFrame = field(compare=False, repr=False)
    members: frozenset[int]

    def __contains__(self, a: int) -> bool:
        return a in self.members

    @property
    def bits(self) -> int:
        return mask_of(self.frame.index[a] for a in self.members)


def filter_conditions(frame: OpenFrame, members: Iterable[int]) -> dict[str, bool]:
    """Evaluate the five completely-prime-filter conditions separately."""
    p = frozenset(members)
    els = frame.elements
    return {
        "top": frame.top in p,
        "bottom": frame.bottom not in p,
        "meet": all(a & b in p for a, b in itertools.combinations(p, 2)),
        "up": all(a | b in p for a in p for b in els),
        # a subfamily meeting p is harmless; only those avoiding p matter
        "prime": not (joins_of_subfamilies(a for a in els if a not in p) & p),
    }


def is_completely_prime(frame: OpenFrame, members: Iterable[int]) -> bool:
    return all(filter_conditions(frame, members).values())


def completely_prime_filters(frame: OpenFrame) -> list[CompletelyPrimeFilter]:
    """All points of a finite frame, ordered by member bitmask.

    Every up-closed subset is generated and tested against all five
    conditions.
    """
    out = []
    els = frame.elements
    for bits in up_sets(frame.strictly_above):
        members = frozenset(els[i] for i in indices(bits))
        if is_completely_prime(frame, members):
            out.append((bits, CompletelyPrimeFilter(frame, members)))
    out.sort(key=lambda t: t[0])
    return [cpf for _, cpf in out]


@dataclass(frozen=True)
class PointSpace:
    frame: OpenFrame
    space: FiniteSpace
    points: tuple[CompletelyPrimeFilter, ...]

    @cached_property
    def index(self) -> dict[frozenset[int], int]:
        return {p.members: i for i, p in enumerate(self.points)}

    def star(self, a: int) -> int:
        """A* = the points containing ``a``."""
        return _star(self.points, a)


def _star(points: Sequence[CompletelyPrimeFilter], a: int) -> int:
    return mask_of(i for i, p in enumerate(points) if a in p)


def point_space(frame: OpenFrame) -> PointSpace:
    pts = tuple(completely_prime_filters(frame))
    stars = {a: _star(pts, a) for a in frame.elements}
    for a, b in itertools.combinations(frame.elements, 2):
        if stars[a | b] != stars[a] | stars[b] or stars[a & b] != stars[a] & stars[b]:
            raise NotATopology(f"star does not preserve {indices(a)}, {indices(b)}")
    try:
        space = validate_topology(len(pts), stars.values())
    except TopologyError as exc:
        raise NotATopology(str(exc)) from exc
    return PointSpace(frame, space, pts)


@dataclass(frozen=True)
class SoberMonadWitness:
    base: FiniteSpace
    points: PointSpace
    unit: ContinuousMap

    @property
    def carrier(self) -> FiniteSpace:
        return self.points.space

    @property
    def frame(self) -> OpenFrame:
        return self.points.frame

    @property
    def mult(self) -> ContinuousMap:
        return mu_sober(self.base)


@lru_cache(maxsize=None)
def fpo_object(x: FiniteSpace) -> SoberMonadWitness:
    ps = point_space(open_frame(x))
    mapping = []
    for p in x.points:
        nbhd = frozenset(a for a in x.opens if a >> p & 1)
        if nbhd not in ps.index:
            raise AssertionError(f"neighbourhood filter of point {p} is not completely prime")
        mapping.append(ps.index[nbhd])
    return SoberMonadWitness(x, ps, ContinuousMap(x, ps.space, tuple(mapping)))


def fpo_carrier(x: FiniteSpace) -> FiniteSpace:
    return fpo_object(x).carrier


def unit_eta_sober(x: FiniteSpace) -> ContinuousMap:
    return fpo_object(x).unit


def fpo_morphism(f: ContinuousMap) -> ContinuousMap:
    src, dst = fpo_object(f.domain).points, fpo_object(f.codomain).points
    mapping = []
    for p in src.points:
        image = frozenset(a for a in dst.frame.elements if f.preimage(a) in p)
        if image not in dst.index:
            conditions = filter_conditions(dst.frame, image)
            raise AssertionError(f"image filter fails {conditions}")
        mapping.append(dst.index[image])
    return ContinuousMap(src.space, dst.space, tuple(mapping))


def mu_sober(x: FiniteSpace) -> ContinuousMap:
    unit_t = unit_eta_sober(fpo_carrier(x))
    if not unit_t.is_homeomorphism():
        raise UnitNotIso(f"unit at FpΩ({x.canonical_string()}) is not a homeomorphism")
    return unit_t.inverse()


def is_sober(x: FiniteSpace) -> bool:
    return unit_eta_sober(x).is_homeomorphism()


SOBER = Monad("sober", fpo_carrier, unit_eta_sober, fpo_morphism, mu_sober)


def verify_monad_laws(x: FiniteSpace, test_spaces: Iterable[FiniteSpace] = ()) -> LawReport:
    return verify_laws(SOBER, x, test_spaces)


def soberification_factorisation(x: FiniteSpace) -> ContinuousMap:
    """Homeomorphism from the T0 quotient of ``x`` onto FpΩ(x).

    The unit of ``x`` must factor through the quotient map; the factor is
    returned after checking it is a homeomorphism.
    """
    quotient, q = kolmogorov_quotient(x)
    unit = unit_eta_sober(x)
    table = [-1] * quotient.n
    for p in x.points:
        if table[q(p)] not in (-1, unit(p)):
            raise AssertionError("unit does not factor through the T0 quotient")
        table[q(p)] = unit(p)
    h = ContinuousMap(quotient, unit.codomain, tuple(table))
    if not h.is_homeomorphism():
        raise AssertionError("T0 quotient is not homeomorphic to FpΩ")
    return h


# Sierpiński powers ---------------------------------------------------------


@dataclass(frozen=True)
class SierpinskiPower:
    """P({0..m-1}); point ``k`` is the subset with bitmask ``k``."""

    index_count: int
    space: FiniteSpace

    @property
    def full_index(self) -> int:
        return (1 << self.index_count) - 1

    def basic_open(self, finite: int) -> int:
        """U_F: the subsets containing ``finite``."""
        return mask_of(a for a in range(self.space.n) if a & finite == finite)


def _inclusion_up_sets(m: int) -> set[int]:
    size = 1 << m
    above = [mask_of(b for b in range(size) if b != a and a & b == a) for a in range(size)]
    return set(up_sets(above))


def sierpinski_power(m: int, cap: int = DEFAULT_INDEX_CAP) -> SierpinskiPower:
    """P(m) with the topology generated by the sets U_F."""
    if m < 0:
        raise ValueError("index count must be non-negative")
    if m > cap:
        raise IndexCapExceeded(f"index count {m} exceeds cap {cap}")
    return power(m)


@lru_cache(maxsize=None)
def power(m: int) -> SierpinskiPower:
    size = 1 << m
    basis = {
        mask_of(a for a in range(size) if a & f == f) for f in range(size)
    }
    space = generate_topology(size, basis)
    if set(space.opens) != _inclusion_up_sets(m):
        raise AssertionError("U_F topology differs from the up-set topology")
    return SierpinskiPower(m, space)


def power_index(space: FiniteSpace) -> int:
    """The m with ``space == P(m)``; ValueError otherwise."""
    m = space.n.bit_length() - 1
    if space.n != 1 << m or space != power(m).space:
        raise ValueError("not a Sierpiński power")
    return m


def family_to_map(x: FiniteSpace, family: Sequence[int]) -> ContinuousMap:
    """The map x -> P(m) sending a point to the indices of members containing it."""
    for i, a in enumerate(family):
        if not x.is_open(a):
            raise NotOpen(i)
    target = power(len(family))
    mapping = tuple(
        mask_of(i for i, a in enumerate(family) if a >> p & 1) for p in x.points
    )
    return ContinuousMap(x, target.space, mapping)


def map_to_family(f: ContinuousMap) -> list[int]:
    m = power_index(f.codomain)
    return [f.preimage(power(m).basic_open(1 << i)) for i in range(m)]


def projection_psi_sober(f: ContinuousMap) -> ContinuousMap:
    """FpΩ(x) -> P(m): index i is in the image iff f⁻¹(U_{i}) belongs to the point."""
    m = power_index(f.codomain)
    target = power(m)
    ps = fpo_object(f.domain).points
    pulled = [f.preimage(target.basic_open(1 << i)) for i in range(m)]
    mapping = tuple(
        mask_of(i for i, a in enumerate(pulled) if a in p) for p in ps.points
    )
    psi = ContinuousMap(ps.space, f.codomain, mapping)
    for fin in range(1 << m):
        expected = ps.space.full
        for i in indices(fin):
            expected &= ps.star(pulled[i])
        if psi.preimage(target.basic_open(fin)) != expected:
            raise AssertionError("preimage of a basic open is not the expected meet")
    return psi


def psi_membership_check(f: ContinuousMap, d: int, p: CompletelyPrimeFilter) -> bool:
    """psi_f(p) lies in the open ``d`` iff f⁻¹(d) belongs to ``p``."""
    psi = projection_psi_sober(f)
    ps = fpo_object(f.domain).points
    lhs = bool(d >> psi(ps.index[p.members]) & 1)
    return lhs == (f.preimage(d) in p)


def chi_preimage_check(f: ContinuousMap, d: int) -> bool:
    """chi of f⁻¹(d) equals chi of d composed with f."""
    return chi(f.domain, f.preimage(d)) == chi(f.codomain, d) @ f


# Auxiliary maps into and between small powers -------------------------------

T = 1  # the point {t} of P(1)


def chi(x: FiniteSpace, a: int) -> ContinuousMap:
    """x -> P({t}), sending the points of ``a`` to {t}."""
    return family_to_map(x, [a])


def chi_pair(x: FiniteSpace, a1: int, a2: int) -> ContinuousMap:
    """x -> P({z1, z2}) recording membership in ``a1`` and ``a2``."""
    return family_to_map(x, [a1, a2])


def _to_point(m: int, test) -> ContinuousMap:
    src = power(m).space
    return ContinuousMap(src, power(1).space, tuple(T if test(a) else 0 for a in src.points))


def chi_coordinate(m: int, i: int) -> ContinuousMap:
    """P(m) -> P({t}): {t} exactly on subsets containing ``i``."""
    return _to_point(m, lambda a: a >> i & 1)


def chi_meet(m: int = 2) -> ContinuousMap:
    """P(m) -> P({t}): {t} only on the full index set."""
    return _to_point(m, lambda a: a == (1 << m) - 1)


def chi_join(m: int = 2) -> ContinuousMap:
    """P(m) -> P({t}): {t} on every nonempty subset."""
    return _to_point(m, lambda a: a != 0)


def rho(x: FiniteSpace, family: Sequence[int]) -> ContinuousMap:
    return family_to_map(x, family)


rho_coordinate = chi_coordinate
rho_join = chi_join


def tau(x: FiniteSpace) -> ContinuousMap:
    """The unique map x -> P(∅)."""
    return family_to_map(x, [])


def tau_prime() -> ContinuousMap:
    """P(∅) -> P({t}) picking {t}."""
    return ContinuousMap(power(0).space, power(1).space, (T,))
