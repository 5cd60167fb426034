"""Acceptance criteria, one test each.

Every test tags itself with a ``criterion`` property; the conftest hook
prints one PASS/FAIL line per criterion at the end of the run.
"""

import itertools
import time

import pytest

from finitop import frame, stone
from finitop.census import enumerate_topologies, run_census
from finitop.codensity import (
    FINSET,
    SIERPINSKI,
    Cone,
    GeneratorSpec,
    NotACone,
    build_comma_diagram,
    candidate_cone,
    check_bound,
    compute_limit,
    cone_through,
    mediating_alpha,
)
from finitop.monad import verify_laws
from finitop.topology import (
    ContinuousMap,
    constant,
    continuous_maps,
    discrete,
    indiscrete,
    is_homeomorphic,
    kolmogorov_quotient,
    point,
    quasi_components,
    validate_topology,
)

from oracles import subsets

SPACES3 = [x for n in range(4) for x in enumerate_topologies(n)]
THREE = enumerate_topologies(3)
FOUR = enumerate_topologies(4)

# three-point spaces with at most four opens keep the bound-3 Sierpiński
# diagram under the arrow budget
SPOT_CHECK = [
    indiscrete(3),
    validate_topology(3, [[], [0], [0, 1, 2]]),
    validate_topology(3, [[], [0, 1], [0, 1, 2]]),
    validate_topology(3, [[], [0], [0, 1], [0, 1, 2]]),
    validate_topology(3, [[], [0], [1, 2], [0, 1, 2]]),
]


def _tag(record_property, label):
    record_property("criterion", label)


def test_criterion_1_stone_oracle(record_property):
    _tag(record_property, "1 Stone monad equals the FinSet codensity limit")
    assert (len(THREE), len(FOUR)) == (29, 355)
    start = time.perf_counter()
    bad = [x.canonical_string() for x in THREE + FOUR if not check_bound(x, GeneratorSpec(FINSET, 3)).iso]
    bad += [x.canonical_string() for x in THREE if not check_bound(x, GeneratorSpec(FINSET, 4)).iso]
    assert bad == []
    assert time.perf_counter() - start < 300


def test_criterion_2_sober_oracle(record_property):
    _tag(record_property, "2 sober monad equals the Sierpinski codensity limit")
    start = time.perf_counter()
    bad = [x.canonical_string() for x in THREE if not check_bound(x, GeneratorSpec(SIERPINSKI, 2)).iso]
    assert bad == []
    assert len({x.canonical_string() for x in SPOT_CHECK}) >= 5
    for x in SPOT_CHECK:
        assert check_bound(x, GeneratorSpec(SIERPINSKI, 3)).iso, x.canonical_string()
    assert time.perf_counter() - start < 600


def test_criterion_3_monad_laws(record_property):
    _tag(record_property, "3 monad laws, naturality and mu inverse to eta")
    for monad in (stone.STONE, frame.SOBER):
        for x in SPACES3:
            report = verify_laws(monad, x, SPACES3)
            assert report.passed, report.to_dict()
            for law in ("left_unit", "right_unit", "associativity", "mu_inverts_eta", "mu_iso"):
                assert report.checked[law] == 1
            mu, eta_t = monad.mult(x), monad.unit(monad.carrier(x))
            assert mu.mapping == eta_t.inverse().mapping


def test_criterion_4_classification(record_property):
    _tag(record_property, "4 unit iso iff discrete / T0, reflections witnessed")
    rows = run_census(3) + run_census(4) + [r for n in range(3) for r in run_census(n)]
    assert len(rows) == 1 + 1 + 4 + 29 + 355
    for r in rows:
        assert r.sc_unit_iso == r.is_discrete
        assert r.fpo_unit_iso == r.is_t0
    for x in SPACES3 + FOUR:
        blocks = quasi_components(x).blocks
        w = is_homeomorphic(stone.sc_carrier(x), discrete(len(blocks)))
        assert w is not None
        assert stone.quasi_component_map(x) is not None
        q, _ = kolmogorov_quotient(x)
        h = frame.soberification_factorisation(x)
        assert h.domain == q and h.is_homeomorphism()


def _algebras_upto8():
    seen = {}
    for x in SPACES3 + FOUR:
        b = stone.clopen_algebra(x)
        if len(b) <= 8:
            seen.setdefault((x.n, b.elements), b)
    return list(seen.values())


def test_criterion_5_partition_lemma(record_property):
    _tag(record_property, "5 three-block partition test equals the ultrafilter test")
    algebras = _algebras_upto8()
    assert {len(b) for b in algebras} == {1, 2, 4, 8}
    checked = 0
    for b in algebras:
        for u in subsets(b.elements):
            assert stone.galvin_horn_check(b, u) == stone.is_ultrafilter(b, u)
            checked += 1
    assert checked > 0


def _fibre_maps(x, size):
    b = discrete(size)
    return [
        ContinuousMap(x, b, m)
        for m in itertools.product(range(size), repeat=x.n)
        if all(x.is_open(sum(1 << p for p in x.points if m[p] == v)) for v in range(size))
    ]


def _power_maps(x, upto=2):
    return [
        frame.family_to_map(x, fam)
        for m in range(upto + 1)
        for fam in itertools.product(x.opens, repeat=m)
    ]


def test_criterion_6_proof_equations(record_property):
    _tag(record_property, "6 proof equations and auxiliary-map identities")
    for x in SPACES3:
        eta_s, eta_o = stone.eta(x), frame.unit_eta_sober(x)
        cpfs = frame.fpo_object(x).points.points
        fibre_maps = [f for k in range(1, 4) for f in _fibre_maps(x, k)]
        power_maps = _power_maps(x)
        for f in fibre_maps:
            psi = stone.projection_psi(f)
            k = f.codomain.n
            assert (psi @ eta_s).mapping == f.mapping
            for k2 in range(1, 4):
                for phi in itertools.product(range(k2), repeat=k):
                    phi = ContinuousMap(discrete(k), discrete(k2), phi)
                    assert (phi @ psi).mapping == stone.projection_psi(phi @ f).mapping
            for b in range(k):
                fib = f.preimage(1 << b)
                assert tuple(fib >> p & 1 for p in x.points) == tuple(int(v == b) for v in f.mapping)
        for f in power_maps:
            psi = frame.projection_psi_sober(f)
            assert (psi @ eta_o).mapping == f.mapping
            for d in f.codomain.opens:
                assert frame.chi_preimage_check(f, d)
                assert all(frame.psi_membership_check(f, d, p) for p in cpfs)
            for m2 in range(3):
                for phi in continuous_maps(f.codomain, frame.power(m2).space):
                    assert (phi @ psi).mapping == frame.projection_psi_sober(phi @ f).mapping
        for y in SPACES3:
            for f in continuous_maps(x, y):
                scf, fpf = stone.sc_morphism(f), frame.fpo_morphism(f)
                for k in range(1, 4):
                    for g in _fibre_maps(y, k):
                        assert (stone.projection_psi(g) @ scf).mapping == stone.projection_psi(g @ f).mapping
                for g in _power_maps(y):
                    assert (frame.projection_psi_sober(g) @ fpf).mapping == frame.projection_psi_sober(g @ f).mapping
        for a1, a2 in itertools.product(x.opens, repeat=2):
            chi = frame.chi_pair(x, a1, a2)
            assert frame.chi_coordinate(2, 0) @ chi == frame.chi(x, a1)
            assert frame.chi_coordinate(2, 1) @ chi == frame.chi(x, a2)
            assert frame.chi_meet(2) @ chi == frame.chi(x, a1 & a2)
            assert frame.chi_join(2) @ chi == frame.chi(x, a1 | a2)
        for m in range(4):
            for fam in itertools.product(x.opens, repeat=m):
                rho = frame.rho(x, fam)
                union = 0
                for i, a in enumerate(fam):
                    assert frame.rho_coordinate(m, i) @ rho == frame.chi(x, a)
                    union |= a
                assert frame.rho_join(m) @ rho == frame.chi(x, union)
        assert frame.tau_prime() @ frame.tau(x) == frame.chi(x, x.full)


MEDIATION_SPACES = [x for n in (1, 2) for x in enumerate_topologies(n)] + [
    validate_topology(3, [[], [0], [1, 2], [0, 1, 2]]),
    validate_topology(3, [[], [0], [0, 1], [0, 1, 2]]),
]


@pytest.mark.parametrize("kind", [FINSET, SIERPINSKI])
def test_criterion_7_mediating_maps(record_property, kind):
    _tag(record_property, f"7 mediating map uniqueness ({kind})")
    g = GeneratorSpec(kind, 3 if kind == FINSET else 2)
    for x in MEDIATION_SPACES:
        d = build_comma_diagram(x, g)
        lim = compute_limit(d)
        cand = candidate_cone(x, g, d)
        cones = [lim.as_cone(), cand]
        for apex in SPACES3:
            cones += [cone_through(h, cand) for h in continuous_maps(apex, cand.apex)]
        # cones from points of x that never pass through T(x)
        bare = Cone(x, tuple(o.map for o in d.objects))
        cones += [cone_through(constant(point(), x, p), bare) for p in x.points]
        assert len(cones) >= 20
        for cone in cones:
            mediating_alpha(cone, x, g, d, lim)

        legs = list(cand.legs)
        k = next(i for i, o in enumerate(d.objects) if len(set(o.map.mapping)) > 1 or o.codomain.n > 1)
        target = legs[k].codomain
        wrong = next(
            v for v in range(target.n) if v != legs[k].mapping[0]
        )
        legs[k] = ContinuousMap(cand.apex, target, (wrong,) * cand.apex.n, check=False)
        with pytest.raises(NotACone):
            mediating_alpha(Cone(cand.apex, tuple(legs)), x, g, d, lim)
