import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finitop import frame
from finitop.census import enumerate_topologies
from finitop.monad import UnitNotIso
from finitop.topology import (
    ContinuousMap,
    continuous_maps,
    discrete,
    empty_space,
    identity,
    indiscrete,
    is_homeomorphic,
    kolmogorov_quotient,
    point,
)

from oracles import brute_cp_filters, up_sets_brute

SPACES2 = [x for n in range(3) for x in enumerate_topologies(n)]
SPACES3 = SPACES2 + enumerate_topologies(3)
SPACES4 = SPACES3 + enumerate_topologies(4)
ids = lambda x: x.canonical_string()  # noqa: E731


# frames ------------------------------------------------------------------------


def test_open_frame_examples(sier, d2, i2):
    f = frame.open_frame(sier)
    assert f.elements == (0, 0b01, 0b11)
    assert all(f.leq(a, b) for a, b in zip(f.elements, f.elements[1:]))
    assert len(frame.open_frame(d2)) == 4
    f = frame.open_frame(i2)
    assert f.elements == (0, 0b11)


@pytest.mark.parametrize("x", SPACES3, ids=ids)
def test_distributive_law_every_subfamily(x):
    assert frame.open_frame(x).check_distributive(exhaustive=True)


def test_frame_homomorphism_examples(sier):
    f = frame.open_frame(sier)
    assert frame.is_frame_homomorphism(f, f, {a: a for a in f.elements})
    assert not frame.is_frame_homomorphism(f, f, {a: f.top for a in f.elements})


@given(st.sampled_from(SPACES3), st.sampled_from(SPACES3), st.data())
@settings(max_examples=100, deadline=None)
def test_preimage_maps_are_frame_homomorphisms(x, y, data):
    maps = list(continuous_maps(x, y))
    if not maps:
        return
    f = data.draw(st.sampled_from(maps))
    assert frame.is_frame_homomorphism(frame.open_frame(y), frame.open_frame(x), frame.preimage_map(f))


def test_non_join_preserving_map_is_rejected():
    x = discrete(2)
    f = frame.open_frame(x)
    # preserves top, bottom and meets, but sends {0} v {1} elsewhere than the join
    h = {0: 0, 0b01: 0, 0b10: 0, 0b11: 0b11}
    assert not frame.is_frame_homomorphism(f, f, h)


# completely prime filters ------------------------------------------------------------


def test_cpf_examples(sier, i2):
    cpfs = frame.completely_prime_filters(frame.open_frame(sier))
    assert [set(p.members) for p in cpfs] == [{0b11}, {0b01, 0b11}]
    cpfs = frame.completely_prime_filters(frame.open_frame(i2))
    assert [set(p.members) for p in cpfs] == [{0b11}]
    assert frame.completely_prime_filters(frame.open_frame(empty_space())) == []


@pytest.mark.parametrize("x", SPACES3, ids=ids)
def test_cpf_match_brute_force(x):
    f = frame.open_frame(x)
    found = frame.completely_prime_filters(f)
    assert {p.members for p in found} == set(brute_cp_filters(x.opens, x.full))
    bits = [p.bits for p in found]
    assert bits == sorted(bits)


def test_filter_conditions_separate(sier):
    f = frame.open_frame(sier)
    assert frame.filter_conditions(f, {0, 0b01, 0b11})["bottom"] is False
    assert frame.filter_conditions(f, {0b01})["top"] is False
    d = frame.open_frame(discrete(2))
    # {0,1} is in it, {0} and {1} are not: the join {0} v {1} is not prime
    assert frame.filter_conditions(d, {0b11})["prime"] is False


def test_point_space_examples(sier, i2, d2):
    ps = frame.point_space(frame.open_frame(sier))
    assert is_homeomorphic(ps.space, sier) is not None
    assert frame.point_space(frame.open_frame(i2)).space == point()
    assert frame.point_space(frame.open_frame(d2)).space == d2


@pytest.mark.parametrize("x", SPACES4, ids=ids)
def test_point_space_is_kolmogorov_quotient(x):
    q, qmap = kolmogorov_quotient(x)
    h = frame.soberification_factorisation(x)
    assert h.is_homeomorphism()
    assert (h @ qmap).mapping == frame.unit_eta_sober(x).mapping
    assert h.domain == q


@pytest.mark.parametrize("x", SPACES4, ids=ids)
def test_sober_iff_t0(x):
    assert frame.is_sober(x) == x.is_t0()


def test_unit_examples(sier, i2):
    u = frame.unit_eta_sober(sier)
    assert u.is_homeomorphism()
    assert frame.unit_eta_sober(i2).mapping == (0, 0)
    for n in range(4):
        assert frame.unit_eta_sober(discrete(n)).is_homeomorphism()
    assert frame.is_sober(empty_space())


def test_fpo_morphism_examples(sier, i2):
    assert frame.fpo_morphism(identity(sier)) == identity(frame.fpo_carrier(sier))
    bang = ContinuousMap(i2, discrete(1), (0, 0))
    assert frame.fpo_morphism(bang).mapping == (0,)
    relabeled = frame.power(1).space
    twist = ContinuousMap(sier, relabeled, (1, 0))
    assert frame.fpo_morphism(twist).is_homeomorphism()


@given(st.sampled_from(SPACES3), st.sampled_from(SPACES3), st.sampled_from(SPACES3), st.data())
@settings(max_examples=80, deadline=None)
def test_fpo_functoriality(x, y, z, data):
    assert frame.fpo_morphism(identity(x)) == identity(frame.fpo_carrier(x))
    fs, gs = list(continuous_maps(x, y)), list(continuous_maps(y, z))
    if not fs or not gs:
        return
    f, g = data.draw(st.sampled_from(fs)), data.draw(st.sampled_from(gs))
    composite = frame.fpo_morphism(g) @ frame.fpo_morphism(f)
    assert frame.fpo_morphism(g @ f).mapping == composite.mapping


def test_mu_sober_examples(sier, i2):
    m = frame.mu_sober(sier)
    assert m.mapping == (0, 1)
    assert frame.mu_sober(empty_space()).mapping == ()
    assert frame.mu_sober(i2) == identity(point())


def test_mu_sober_raises_when_unit_is_not_iso(monkeypatch, i2):
    monkeypatch.setattr(frame, "fpo_carrier", lambda x: i2)
    with pytest.raises(UnitNotIso):
        frame.mu_sober(i2)


@pytest.mark.parametrize("x", SPACES3, ids=ids)
def test_monad_laws(x):
    report = frame.verify_monad_laws(x, SPACES2 + [x])
    assert report.passed, report.to_dict()


# Sierpiński powers -----------------------------------------------------------------------


@pytest.mark.parametrize("m,count", [(0, 2), (1, 3), (2, 6), (3, 20)])
def test_power_open_counts(m, count):
    p = frame.sierpinski_power(m)
    size = 1 << m
    brute = up_sets_brute(list(range(size)), lambda a, b: a != b and a & b == a)
    assert set(p.space.opens) == brute
    assert len(p.space.opens) == count


def test_power_examples(sier):
    assert frame.sierpinski_power(0).space == point()
    assert is_homeomorphic(frame.sierpinski_power(1).space, sier) is not None
    with pytest.raises(frame.IndexCapExceeded):
        frame.sierpinski_power(5)
    assert frame.power_index(frame.power(2).space) == 2
    with pytest.raises(ValueError):
        frame.power_index(discrete(2))


@pytest.mark.parametrize("m", range(4))
def test_powers_are_sober(m):
    assert frame.is_sober(frame.power(m).space)


def test_family_to_map_examples(sier):
    chi = frame.family_to_map(sier, [0b01])
    assert chi == frame.chi(sier, 0b01)
    assert chi.mapping == (frame.T, 0)
    assert frame.family_to_map(sier, []).mapping == (0, 0)
    assert frame.family_to_map(sier, [0b11, 0]).mapping == (0b01, 0b01)
    with pytest.raises(frame.NotOpen) as exc:
        frame.family_to_map(sier, [0b11, 0b10])
    assert exc.value.index == 1


@pytest.mark.parametrize("x", SPACES3, ids=ids)
def test_family_map_bijection(x):
    for m in range(3):
        families = list(itertools.product(x.opens, repeat=m))
        maps = [frame.family_to_map(x, fam) for fam in families]
        for fam, f in zip(families, maps):
            assert frame.map_to_family(f) == list(fam)
        every = [g.mapping for g in continuous_maps(x, frame.power(m).space)]
        assert sorted(f.mapping for f in maps) == sorted(every)


def test_projection_psi_sober_examples(sier):
    w = frame.fpo_object(sier)
    for a in sier.opens:
        psi = frame.projection_psi_sober(frame.chi(sier, a))
        for i, p in enumerate(w.points.points):
            assert (psi(i) == frame.T) == (a in p)
    const = frame.family_to_map(sier, [0, 0])
    assert set(frame.projection_psi_sober(const).mapping) == {0}


def _maps_into_powers(x, upto=2):
    for m in range(upto + 1):
        for fam in itertools.product(x.opens, repeat=m):
            yield frame.family_to_map(x, fam)


@pytest.mark.parametrize("x", SPACES3, ids=ids)
def test_psi_eta_unit_equation(x):
    eta = frame.unit_eta_sober(x)
    for f in _maps_into_powers(x):
        assert (frame.projection_psi_sober(f) @ eta).mapping == f.mapping


@pytest.mark.parametrize("x", SPACES3, ids=ids)
def test_psi_membership_and_chi_preimage(x):
    cpfs = frame.fpo_object(x).points.points
    for f in _maps_into_powers(x):
        for d in f.codomain.opens:
            assert frame.chi_preimage_check(f, d)
            for p in cpfs:
                assert frame.psi_membership_check(f, d, p)


def test_psi_membership_on_sierpinski(sier):
    cpfs = frame.fpo_object(sier).points.points
    for m in (1, 2):
        for fam in itertools.product(sier.opens, repeat=m):
            f = frame.family_to_map(sier, fam)
            assert all(frame.psi_membership_check(f, d, p) for d in f.codomain.opens for p in cpfs)


@pytest.mark.parametrize("x", SPACES3, ids=ids)
def test_cone_condition_for_power_maps(x):
    for f in _maps_into_powers(x):
        psi = frame.projection_psi_sober(f)
        for m2 in range(3):
            for phi in continuous_maps(f.codomain, frame.power(m2).space):
                assert (phi @ psi).mapping == frame.projection_psi_sober(phi @ f).mapping


@pytest.mark.parametrize("x", SPACES3, ids=ids)
def test_psi_after_fpo_morphism(x):
    for y in SPACES2:
        for f in continuous_maps(x, y):
            ff = frame.fpo_morphism(f)
            for g in _maps_into_powers(y):
                assert (frame.projection_psi_sober(g) @ ff).mapping == frame.projection_psi_sober(g @ f).mapping


# auxiliary maps ----------------------------------------------------------------------------


@pytest.mark.parametrize("x", SPACES3, ids=ids)
def test_auxiliary_identities(x):
    for a1, a2 in itertools.product(x.opens, repeat=2):
        chi = frame.chi_pair(x, a1, a2)
        assert frame.chi_coordinate(2, 0) @ chi == frame.chi(x, a1)
        assert frame.chi_coordinate(2, 1) @ chi == frame.chi(x, a2)
        assert frame.chi_meet(2) @ chi == frame.chi(x, a1 & a2)
        assert frame.chi_join(2) @ chi == frame.chi(x, a1 | a2)
    for m in range(4):
        for fam in itertools.product(x.opens, repeat=m):
            rho = frame.rho(x, fam)
            for i, a in enumerate(fam):
                assert frame.rho_coordinate(m, i) @ rho == frame.chi(x, a)
            union = 0
            for a in fam:
                union |= a
            assert frame.rho_join(m) @ rho == frame.chi(x, union)
    assert frame.tau_prime() @ frame.tau(x) == frame.chi(x, x.full)


def test_auxiliary_maps_are_continuous():
    for m in range(4):
        for i in range(m):
            assert frame.chi_coordinate(m, i).codomain == frame.power(1).space
        frame.chi_meet(m)
        frame.chi_join(m)
    assert frame.tau_prime().mapping == (frame.T,)
    assert frame.tau(indiscrete(3)).codomain == point()
