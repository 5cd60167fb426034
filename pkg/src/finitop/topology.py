"""Finite topological spaces encoded as bitmask families.

A space on ``n`` points stores its open sets as integers whose bit ``i``
marks membership of point ``i``.  The family is kept sorted by
(cardinality, ascending index list) so that equal topologies compare equal
field-by-field; homeomorphism is a separate search (:func:`is_homeomorphic`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Optional, Sequence


class TopologyError(ValueError):
    """Raised when a subset family is not a topology."""


class MissingEmptyOrFull(TopologyError):
    pass


class NotClosedUnderUnion(TopologyError):
    def __init__(self, a: int, b: int, n: int):
        self.pair = (a, b)
        super().__init__(
            f"union of {indices(a)} and {indices(b)} is not open (n={n})"
        )


class NotClosedUnderIntersection(TopologyError):
    def __init__(self, a: int, b: int, n: int):
        self.pair = (a, b)
        super().__init__(
            f"intersection of {indices(a)} and {indices(b)} is not open (n={n})"
        )


class NotContinuous(ValueError):
    pass


def indices(mask: int) -> tuple[int, ...]:
    """Ascending point indices set in ``mask``."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_of(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def open_key(mask: int) -> tuple[int, tuple[int, ...]]:
    return (mask.bit_count(), indices(mask))


@dataclass(frozen=True)
class FiniteSpace:
    """A finite topological space.

    Build instances through :func:`validate_topology` (or the named
    constructors below); the raw constructor trusts its arguments.
    """

    n: int
    opens: tuple[int, ...]

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def points(self) -> range:
        return range(self.n)

    @cached_property
    def open_set(self) -> frozenset[int]:
        return frozenset(self.opens)

    def is_open(self, mask: int) -> bool:
        return mask in self.open_set

    def is_closed(self, mask: int) -> bool:
        return (self.full ^ mask) in self.open_set

    @cached_property
    def clopens(self) -> tuple[int, ...]:
        return tuple(a for a in self.opens if self.is_closed(a))

    @cached_property
    def neighbourhoods(self) -> tuple[int, ...]:
        """Smallest open set around each point."""
        out = []
        for p in self.points:
            u = self.full
            for a in self.opens:
                if a >> p & 1:
                    u &= a
            out.append(u)
        return tuple(out)

    def specializes(self, p: int, q: int) -> bool:
        """True when ``p`` lies in the closure of ``{q}``."""
        return bool(self.neighbourhoods[p] >> q & 1)

    def open_degree(self, p: int) -> int:
        return sum(1 for a in self.opens if a >> p & 1)

    def is_t0(self) -> bool:
        return len(set(self.neighbourhoods)) == self.n

    def is_discrete(self) -> bool:
        return len(self.opens) == 1 << self.n

    def is_hausdorff(self) -> bool:
        nb = self.neighbourhoods
        return all(
            nb[p] & nb[q] == 0 for p, q in itertools.combinations(self.points, 2)
        )

    def has_clopen_basis(self) -> bool:
        for a in self.opens:
            cover = 0
            for c in self.clopens:
                if c & a == c:
                    cover |= c
            if cover != a:
                return False
        return True

    def open_lists(self) -> list[list[int]]:
        return [list(indices(a)) for a in self.opens]

    def canonical_string(self) -> str:
        return f"{self.n}|" + ";".join(
            ",".join(map(str, indices(a))) for a in self.opens
        )

    def __repr__(self) -> str:
        return f"FiniteSpace({self.n}, {self.open_lists()})"


def validate_topology(n: int, opens: Iterable) -> FiniteSpace:
    """Check the topology axioms and return the canonical space.

    ``opens`` may hold bitmasks or iterables of point indices.
    """
    if n < 0:
        raise ValueError("point count must be non-negative")
    full = (1 << n) - 1
    family = set()
    for a in opens:
        m = a if isinstance(a, int) else mask_of(a)
        if m < 0 or m & ~full:
            raise ValueError(f"subset {indices(m)} references points >= {n}")
        family.add(m)
    if 0 not in family or full not in family:
        raise MissingEmptyOrFull(
            f"family must contain the empty set and {list(indices(full))}"
        )
    ordered = sorted(family, key=open_key)
    for a, b in itertools.combinations(ordered, 2):
        if a | b not in family:
            raise NotClosedUnderUnion(a, b, n)
        if a & b not in family:
            raise NotClosedUnderIntersection(a, b, n)
    return FiniteSpace(n, tuple(ordered))


def _close(family: set[int], op: Callable[[int, int], int]) -> set[int]:
    result = set(family)
    queue = list(result)
    while queue:
        a = queue.pop()
        for b in list(result):
            c = op(a, b)
            if c not in result:
                result.add(c)
                queue.append(c)
    return result


def generate_topology(n: int, subbasis: Iterable[int]) -> FiniteSpace:
    """Coarsest topology containing ``subbasis``.

    Finite intersections first (the empty intersection is the full set),
    then arbitrary unions (the empty union is the empty set).
    """
    full = (1 << n) - 1
    basis = _close(set(subbasis) | {full}, lambda a, b: a & b)
    return validate_topology(n, _close(basis | {0}, lambda a, b: a | b))


def discrete(n: int) -> FiniteSpace:
    return FiniteSpace(n, tuple(sorted(range(1 << n), key=open_key)))


def indiscrete(n: int) -> FiniteSpace:
    return validate_topology(n, {0, (1 << n) - 1})


def sierpinski() -> FiniteSpace:
    """Two points, ``0`` open and ``1`` closed."""
    return validate_topology(2, [0, 1, 3])


def empty_space() -> FiniteSpace:
    return FiniteSpace(0, (0,))


def point() -> FiniteSpace:
    return FiniteSpace(1, (0, 1))


@dataclass(frozen=True)
class ContinuousMap:
    domain: FiniteSpace
    codomain: FiniteSpace
    mapping: tuple[int, ...]
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if len(self.mapping) != self.domain.n:
            raise ValueError("mapping must be total on the domain")
        if any(not 0 <= v < self.codomain.n for v in self.mapping):
            raise ValueError("mapping leaves the codomain")
        if self.check:
            for v in self.codomain.opens:
                if not self.domain.is_open(self.preimage(v)):
                    raise NotContinuous(
                        f"preimage of {list(indices(v))} is not open"
                    )

    def __call__(self, p: int) -> int:
        return self.mapping[p]

    def __matmul__(self, other: "ContinuousMap") -> "ContinuousMap":
        """``g @ f`` is the composite ``g`` after ``f``."""
        if other.codomain != self.domain:
            raise ValueError("maps are not composable")
        return ContinuousMap(
            other.domain,
            self.codomain,
            tuple(self.mapping[v] for v in other.mapping),
            check=False,
        )

    def preimage(self, mask: int) -> int:
        out = 0
        for p, v in enumerate(self.mapping):
            if mask >> v & 1:
                out |= 1 << p
        return out

    def image(self, mask: int) -> int:
        return mask_of(self.mapping[p] for p in indices(mask))

    def is_bijective(self) -> bool:
        return self.domain.n == self.codomain.n and len(set(self.mapping)) == self.domain.n

    def is_homeomorphism(self) -> bool:
        if not self.is_bijective():
            return False
        return all(self.codomain.is_open(self.image(a)) for a in self.domain.opens)

    def inverse(self) -> "ContinuousMap":
        if not self.is_bijective():
            raise ValueError("map is not bijective")
        inv = [0] * self.codomain.n
        for p, v in enumerate(self.mapping):
            inv[v] = p
        return ContinuousMap(self.codomain, self.domain, tuple(inv))

    def table(self) -> list[list[int]]:
        return [[p, v] for p, v in enumerate(self.mapping)]


def is_continuous(
    domain: FiniteSpace, codomain: FiniteSpace, mapping: Sequence[int]
) -> bool:
    for v in codomain.opens:
        pre = 0
        for p, q in enumerate(mapping):
            if v >> q & 1:
                pre |= 1 << p
        if not domain.is_open(pre):
            return False
    return True


def identity(x: FiniteSpace) -> ContinuousMap:
    return ContinuousMap(x, x, tuple(x.points), check=False)


def constant(x: FiniteSpace, y: FiniteSpace, value: int) -> ContinuousMap:
    return ContinuousMap(x, y, (value,) * x.n)


def continuous_maps(x: FiniteSpace, y: FiniteSpace) -> Iterator[ContinuousMap]:
    """Every continuous map ``x -> y``, in lexicographic order of tables."""
    for mapping in itertools.product(range(y.n), repeat=x.n):
        if is_continuous(x, y, mapping):
            yield ContinuousMap(x, y, mapping, check=False)


def up_sets(above: Sequence[int]) -> Iterator[int]:
    """Up-closed subsets of a finite poset, as bitmasks over its elements.

    ``above[i]`` is the mask of elements strictly above ``i``; every such
    element must carry a larger index than ``i``.
    """

    def rec(i: int, chosen: int) -> Iterator[int]:
        if i < 0:
            yield chosen
            return
        yield from rec(i - 1, chosen)
        if chosen & above[i] == above[i]:
            yield from rec(i - 1, chosen | 1 << i)

    return rec(len(above) - 1, 0)


@dataclass(frozen=True)
class SpacePartition:
    space: FiniteSpace
    blocks: tuple[int, ...]

    def block_of(self, p: int) -> int:
        for i, b in enumerate(self.blocks):
            if b >> p & 1:
                return i
        raise KeyError(p)


def _partition_by(x: FiniteSpace, signature: Callable[[int], object]) -> SpacePartition:
    groups: dict[object, int] = {}
    for p in x.points:
        key = signature(p)
        groups[key] = groups.get(key, 0) | 1 << p
    # first-seen order equals order of the smallest member
    return SpacePartition(x, tuple(groups.values()))


def quasi_components(x: FiniteSpace) -> SpacePartition:
    return _partition_by(x, lambda p: tuple(c for c in x.clopens if c >> p & 1))


def subspace(x: FiniteSpace, members: Sequence[int]) -> tuple[FiniteSpace, ContinuousMap]:
    """Subspace on ``members`` (renumbered in the given order) and its inclusion."""
    pos = {p: i for i, p in enumerate(members)}

    def restrict(a: int) -> int:
        return mask_of(pos[p] for p in indices(a) if p in pos)

    sub = validate_topology(len(members), {restrict(a) for a in x.opens})
    return sub, ContinuousMap(sub, x, tuple(members))


def kolmogorov_quotient(x: FiniteSpace) -> tuple[FiniteSpace, ContinuousMap]:
    """Identify points with the same open neighbourhoods."""
    classes = _partition_by(x, lambda p: x.neighbourhoods[p])
    q = tuple(classes.block_of(p) for p in x.points)
    k = len(classes.blocks)

    def image(a: int) -> int:
        return mask_of(q[p] for p in indices(a))

    quotient = validate_topology(k, {image(a) for a in x.opens})
    return quotient, ContinuousMap(x, quotient, q)


def product(factors: Sequence[FiniteSpace]) -> tuple[FiniteSpace, list[ContinuousMap]]:
    """Product space with points in lexicographic tuple order."""
    tuples = list(itertools.product(*(range(f.n) for f in factors)))
    n = len(tuples)
    subbasis = set()
    for j, f in enumerate(factors):
        for v in f.opens:
            subbasis.add(mask_of(i for i, t in enumerate(tuples) if v >> t[j] & 1))
    space = generate_topology(n, subbasis)
    projections = [
        ContinuousMap(space, f, tuple(t[j] for t in tuples))
        for j, f in enumerate(factors)
    ]
    return space, projections


@dataclass(frozen=True)
class FiniteLimit:
    """Carrier tuples of a limit; the topology is built on first use.

    Non-universal limits can have many points whose product topology is
    too large to enumerate, so callers that only need the carrier never
    pay for it.
    """

    objects: tuple[FiniteSpace, ...]
    tuples: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.tuples)

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {t: i for i, t in enumerate(self.tuples)}

    @cached_property
    def space(self) -> FiniteSpace:
        subbasis = set()
        for j, obj in enumerate(self.objects):
            for v in obj.opens:
                subbasis.add(mask_of(i for i, t in enumerate(self.tuples) if v >> t[j] & 1))
        return generate_topology(self.n, subbasis)

    @cached_property
    def projections(self) -> tuple[ContinuousMap, ...]:
        return tuple(
            ContinuousMap(self.space, obj, tuple(t[j] for t in self.tuples))
            for j, obj in enumerate(self.objects)
        )


Arrow = tuple[int, int, ContinuousMap]


def _bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _propagate(domains, out_arcs, in_arcs, queue) -> bool:
    pending = set(queue)
    while queue:
        i = queue.pop()
        pending.discard(i)
        di = domains[i]
        vals = list(_bits(di))
        for j, phi in out_arcs[i]:
            img = 0
            for a in vals:
                img |= 1 << phi[a]
            nd = domains[j] & img
            if nd != domains[j]:
                if not nd:
                    return False
                domains[j] = nd
                if j not in pending:
                    pending.add(j)
                    queue.append(j)
        for k, phi in in_arcs[i]:
            dk = domains[k]
            nd = 0
            for a in _bits(dk):
                if di >> phi[a] & 1:
                    nd |= 1 << a
            if nd != dk:
                if not nd:
                    return False
                domains[k] = nd
                if k not in pending:
                    pending.add(k)
                    queue.append(k)
    return True


def limit_of_finite_diagram(
    objects: Sequence[FiniteSpace], arrows: Sequence[Arrow]
) -> FiniteLimit:
    """Limit of a finite diagram in finite spaces.

    The carrier is the set of tuples compatible with every arrow, found by
    backtracking over objects in list order with arc-consistency
    propagation; the topology is the subspace topology of the product.
    """
    count = len(objects)
    out_arcs: list[list] = [[] for _ in range(count)]
    in_arcs: list[list] = [[] for _ in range(count)]
    for src, dst, phi in arrows:
        if phi.domain != objects[src] or phi.codomain != objects[dst]:
            raise ValueError(f"arrow {src}->{dst} is not well-typed")
        out_arcs[src].append((dst, phi.mapping))
        in_arcs[dst].append((src, phi.mapping))

    solutions: list[tuple[int, ...]] = []
    domains = [obj.full for obj in objects]
    if all(domains) and _propagate(domains, out_arcs, in_arcs, list(range(count))):
        _search(domains, 0, out_arcs, in_arcs, solutions)

    return FiniteLimit(tuple(objects), tuple(solutions))


def _search(domains, i, out_arcs, in_arcs, solutions) -> None:
    while i < len(domains) and domains[i] & (domains[i] - 1) == 0:
        i += 1
    if i == len(domains):
        solutions.append(tuple(d.bit_length() - 1 for d in domains))
        return
    for v in _bits(domains[i]):
        trial = list(domains)
        trial[i] = 1 << v
        if _propagate(trial, out_arcs, in_arcs, [i]):
            _search(trial, i + 1, out_arcs, in_arcs, solutions)


def is_homeomorphic(a: FiniteSpace, b: FiniteSpace) -> Optional[ContinuousMap]:
    """A homeomorphism ``a -> b`` if one exists.

    Candidates are pruned by point count, open-family size and per-point
    open degree; partial assignments must preserve the specialization
    preorder, which determines a finite topology.  Targets are tried in
    ascending order, so the first witness is deterministic.
    """
    if a.n != b.n or len(a.opens) != len(b.opens):
        return None
    deg_a = [a.open_degree(p) for p in a.points]
    deg_b = [b.open_degree(q) for q in b.points]
    if sorted(deg_a) != sorted(deg_b):
        return None
    assignment: list[int] = []
    used = [False] * b.n

    def extend(p: int) -> bool:
        if p == a.n:
            return True
        for q in b.points:
            if used[q] or deg_b[q] != deg_a[p]:
                continue
            if all(
                a.specializes(p, r) == b.specializes(q, assignment[r])
                and a.specializes(r, p) == b.specializes(assignment[r], q)
                for r in range(p)
            ):
                used[q] = True
                assignment.append(q)
                if extend(p + 1):
                    return True
                assignment.pop()
                used[q] = False
        return False

    if not extend(0):
        return None
    witness = ContinuousMap(a, b, tuple(assignment))
    return witness if witness.is_homeomorphism() else None


@dataclass(frozen=True)
class Classification:
    is_t0: bool
    is_discrete: bool
    is_sober: bool
    is_stone: bool


def classify(x: FiniteSpace) -> Classification:
    """Separation and duality classification of a finite space.

    Stone-ness is read off its definition (compactness is automatic for a
    finite space; Hausdorff plus a clopen basis is checked directly).
    Sobriety uses the unit into the space of completely prime filters.
    """
    from .frame import is_sober

    return Classification(
        is_t0=x.is_t0(),
        is_discrete=x.is_discrete(),
        is_sober=is_sober(x),
        is_stone=x.is_hausdorff() and x.has_clopen_basis(),
    )
