"""Clopen algebras, ultrafilters and the Stone monad SC on finite spaces."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Optional

from .monad import LawReport, Monad, UnitNotIso, verify_laws
from .topology import (
    ContinuousMap,
    FiniteSpace,
    generate_topology,
    indices,
    quasi_components,
)


@dataclass(frozen=True)
class ClopenAlgebra:
    """Boolean algebra of the clopen subsets of ``base``."""

    base: FiniteSpace
    elements: tuple[int, ...]

    @property
    def top(self) -> int:
        return self.base.full

    @property
    def bottom(self) -> int:
        return 0

    def complement(self, a: int) -> int:
        return self.top ^ a

    @cached_property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    @cached_property
    def atoms(self) -> tuple[int, ...]:
        nonzero = [a for a in self.elements if a]
        return tuple(
            a for a in nonzero if not any(b != a and b & a == b for b in nonzero)
        )

    def up_closure(self, a: int) -> frozenset[int]:
        return frozenset(b for b in self.elements if a & b == a)

    @cached_property
    def partitions(self) -> tuple[tuple[int, int, int], ...]:
        """Ordered triples with pairwise meet 0 and join 1."""
        out = []
        for x0, x1, x2 in itertools.product(self.elements, repeat=3):
            if x0 & x1 or x0 & x2 or x1 & x2:
                continue
            if x0 | x1 | x2 == self.top:
                out.append((x0, x1, x2))
        return tuple(out)

    def __len__(self) -> int:
        return len(self.elements)


def clopen_algebra(x: FiniteSpace) -> ClopenAlgebra:
    return ClopenAlgebra(x, x.clopens)


@dataclass(frozen=True)
class Ultrafilter:
    algebra: ClopenAlgebra = field(compare=False, repr=False)
    members: frozenset[int]

    def __contains__(self, a: int) -> bool:
        return a in self.members

    @property
    def atom(self) -> int:
        out = self.algebra.top
        for a in self.members:
            out &= a
        return out


def is_ultrafilter(b: ClopenAlgebra, u: Iterable[int]) -> bool:
    """Direct test of the ultrafilter axioms."""
    u = frozenset(u)
    if not u <= b.element_set:
        return False
    if b.top not in u or b.bottom in u:
        return False
    for a in u:
        for c in b.elements:
            if a & c == a and c not in u:
                return False
    for a, c in itertools.combinations(u, 2):
        if a & c not in u:
            return False
    return all((a in u) != (b.complement(a) in u) for a in b.elements)


def galvin_horn_check(b: ClopenAlgebra, u: Iterable[int]) -> bool:
    """Exactly one member of every three-block partition of unity lies in ``u``."""
    u = frozenset(u)
    return all(
        (x0 in u) + (x1 in u) + (x2 in u) == 1 for x0, x1, x2 in b.partitions
    )


def ultrafilters(b: ClopenAlgebra) -> list[Ultrafilter]:
    """All ultrafilters of a finite algebra, ordered by atom bitmask.

    In a finite algebra every ultrafilter is the up-closure of its atom;
    each candidate is still checked against the axioms.
    """
    out = []
    for atom in sorted(b.atoms):
        members = b.up_closure(atom)
        if not is_ultrafilter(b, members):
            raise AssertionError(f"up-closure of atom {indices(atom)} is not an ultrafilter")
        out.append(Ultrafilter(b, members))
    return out


@dataclass(frozen=True)
class StoneSpace:
    """Ultrafilter space of an algebra; point ``i`` is ``points[i]``."""

    algebra: ClopenAlgebra
    space: FiniteSpace
    points: tuple[Ultrafilter, ...]

    @cached_property
    def index(self) -> dict[frozenset[int], int]:
        return {u.members: i for i, u in enumerate(self.points)}

    def basic_open(self, a: int) -> int:
        """The set D_a of ultrafilters containing ``a``."""
        return _basic_open(self.points, a)


def _basic_open(points: Iterable[Ultrafilter], a: int) -> int:
    out = 0
    for i, u in enumerate(points):
        if a in u:
            out |= 1 << i
    return out


def stone_space(b: ClopenAlgebra) -> StoneSpace:
    """Ultrafilters topologised by the basis D_a, closed up to a topology."""
    pts = tuple(ultrafilters(b))
    space = generate_topology(len(pts), {_basic_open(pts, a) for a in b.elements})
    return StoneSpace(b, space, pts)


@dataclass(frozen=True)
class StoneMonadWitness:
    base: FiniteSpace
    stone: StoneSpace
    unit: ContinuousMap

    @property
    def carrier(self) -> FiniteSpace:
        return self.stone.space

    @property
    def algebra(self) -> ClopenAlgebra:
        return self.stone.algebra

    @property
    def mult(self) -> ContinuousMap:
        return mu(self.base)


@lru_cache(maxsize=None)
def sc_object(x: FiniteSpace) -> StoneMonadWitness:
    st = stone_space(clopen_algebra(x))
    unit = ContinuousMap(
        x,
        st.space,
        tuple(
            st.index[frozenset(a for a in x.clopens if a >> p & 1)] for p in x.points
        ),
    )
    return StoneMonadWitness(x, st, unit)


def sc_carrier(x: FiniteSpace) -> FiniteSpace:
    return sc_object(x).carrier


def eta(x: FiniteSpace) -> ContinuousMap:
    return sc_object(x).unit


def sc_morphism(f: ContinuousMap) -> ContinuousMap:
    src, dst = sc_object(f.domain).stone, sc_object(f.codomain).stone
    mapping = []
    for u in src.points:
        image = frozenset(a for a in dst.algebra.elements if f.preimage(a) in u)
        if image not in dst.index:
            raise AssertionError("image of an ultrafilter is not an ultrafilter")
        mapping.append(dst.index[image])
    return ContinuousMap(src.space, dst.space, tuple(mapping))


def projection_psi(f: ContinuousMap) -> ContinuousMap:
    """The projection SC(X) -> B attached to a map into a discrete space."""
    if not f.codomain.is_discrete():
        raise ValueError("codomain must be discrete")
    st = sc_object(f.domain).stone
    fibres = [f.preimage(1 << b) for b in f.codomain.points]
    mapping = []
    for u in st.points:
        hits = [b for b, fib in enumerate(fibres) if fib in u]
        if len(hits) != 1:
            raise AssertionError(f"{len(hits)} fibres lie in one ultrafilter")
        mapping.append(hits[0])
    psi = ContinuousMap(st.space, f.codomain, tuple(mapping))
    for b, fib in enumerate(fibres):
        if psi.preimage(1 << b) != st.basic_open(fib):
            raise AssertionError("fibre of psi differs from the basic open of the fibre")
    return psi


def mu(x: FiniteSpace) -> ContinuousMap:
    """Multiplication SC(SC(x)) -> SC(x): the inverse of the unit at SC(x)."""
    unit_t = eta(sc_carrier(x))
    if not unit_t.is_homeomorphism():
        raise UnitNotIso(f"unit at SC({x.canonical_string()}) is not a homeomorphism")
    return unit_t.inverse()


STONE = Monad("stone", sc_carrier, eta, sc_morphism, mu)


def verify_monad_laws(x: FiniteSpace, test_spaces: Iterable[FiniteSpace] = ()) -> LawReport:
    return verify_laws(STONE, x, test_spaces)


def quasi_component_map(x: FiniteSpace) -> Optional[dict[int, int]]:
    """Send each ultrafilter to the quasi-component whose clopen supersets it contains."""
    blocks = quasi_components(x).blocks
    st = sc_object(x).stone
    out = {}
    for i, u in enumerate(st.points):
        owners = [
            k
            for k, blk in enumerate(blocks)
            if all(a in u for a in st.algebra.elements if a & blk == blk)
        ]
        if len(owners) != 1:
            return None
        out[i] = owners[0]
    return out
