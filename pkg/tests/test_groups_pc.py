"""Polycyclic presentation backend: collection, sifting, Hirsch length."""

import random

import pytest

import helpers
from polyfam import groups
from polyfam.errors import InconsistentPresentation, Unsupported


@pytest.fixture
def dinf():
    return groups.dihedral_infinite_pc()


@pytest.fixture
def heis():
    return groups.heisenberg_pc()


def test_identity_multiplication(dinf):
    a = dinf.generator(1)
    assert groups.multiply(dinf.identity(), a) == a
    assert groups.multiply(a, dinf.identity()) == a


def test_dinf_collection_hand_values(dinf):
    b = dinf.generator(0)
    a = dinf.generator(1)
    # a.b collects to b a^-1, b.a stays b a
    ab = groups.multiply(a, b)
    assert ab.data == (1, -1)
    ba = groups.multiply(b, a)
    assert ba.data == (1, 1)
    assert groups.multiply(b, b) == dinf.identity()


def test_dinf_collection_matches_affine_oracle(dinf):
    affine = groups.dihedral_infinite_affine()
    rng = random.Random(5)
    els = [dinf.element([rng.randint(0, 1), rng.randint(-4, 4)]) for _ in range(40)]
    for x in els:
        for y in els[:10]:
            z = groups.multiply(x, y)
            img = groups.multiply(
                helpers.dinf_pc_to_affine(dinf, affine, x),
                helpers.dinf_pc_to_affine(dinf, affine, y))
            assert helpers.dinf_pc_to_affine(dinf, affine, z) == img


def test_inverse(dinf, heis):
    rng = random.Random(9)
    for group in (dinf, heis):
        for _ in range(30):
            data = [rng.randint(0, r - 1) if r else rng.randint(-3, 3)
                    for r in group.relative_orders]
            x = group.element(data)
            assert groups.multiply(x, x.inverse()) == group.identity()
            assert groups.multiply(x.inverse(), x) == group.identity()


def test_normal_form_idempotent_and_associative(heis):
    rng = random.Random(13)
    gens = [heis.generator(i) for i in range(3)]
    gens += [g.inverse() for g in gens]
    for _ in range(60):
        word = [rng.choice(gens) for _ in range(rng.randint(1, 8))]
        # fold left-to-right vs a random split: same collected form
        full = heis.identity()
        for w in word:
            full = groups.multiply(full, w)
        cut = rng.randint(0, len(word))
        left = heis.identity()
        for w in word[:cut]:
            left = groups.multiply(left, w)
        right = heis.identity()
        for w in word[cut:]:
            right = groups.multiply(right, w)
        assert groups.multiply(left, right) == full


def test_heisenberg_commutator(heis):
    g0, g1, g2 = (heis.generator(i) for i in range(3))
    # g0^-1 g1 g0 = g1 g2, so g0^-1 g1^-1 g0 g1 = g2^-1
    comm = groups.multiply(
        groups.multiply(g0.inverse(), g1.inverse()), groups.multiply(g0, g1))
    assert comm == g2.inverse()
    # centre
    for g in (g0, g1):
        assert groups.multiply(g2, g) == groups.multiply(g, g2)


def test_inconsistent_presentation_rejected():
    # order-2 generator with a non-involutive conjugation cannot close up
    with pytest.raises(InconsistentPresentation):
        groups.PcPresentation(
            [2, None],
            conjugation_relations={(0, 1, 1): [(1, -1)], (0, 1, -1): [(1, 1)]})


def test_subgroup_close_b_in_dinf(dinf):
    b = dinf.generator(0)
    H = groups.subgroup_close([b])
    assert groups.hirsch_length(H) == 0
    assert H.contains_element(b)
    assert not H.contains_element(dinf.generator(1))
    # order 2: the only elements are 1 and b
    brute = helpers.brute_subgroup_elements([b], steps=4)
    assert len(brute) == 2


def test_subgroup_membership_matches_brute_force(dinf):
    b = dinf.generator(0)
    a = dinf.generator(1)
    a2 = groups.multiply(a, a)
    H = groups.subgroup_close([b, a2])
    brute = helpers.brute_subgroup_elements([b, a2], steps=7)
    for e in list(brute)[:80]:
        assert H.contains_element(e)
    assert not H.contains_element(a)
    assert groups.hirsch_length(H) == 1


def test_heisenberg_subgroups(heis):
    g0, g1, g2 = (heis.generator(i) for i in range(3))
    full = groups.subgroup_close([g0, g1])
    assert groups.hirsch_length(full) == 3  # commutator is forced in
    assert full.contains_element(g2)
    centre = groups.subgroup_close([g2])
    assert groups.hirsch_length(centre) == 1
    plane = groups.subgroup_close([g1, g2])
    assert groups.hirsch_length(plane) == 2
    assert not plane.contains_element(g0)


def test_hirsch_whole_group(dinf, heis):
    assert groups.hirsch_length(groups.full_subgroup(dinf)) == 1
    assert groups.hirsch_length(groups.full_subgroup(heis)) == 3


def test_pc_intersection_unsupported(dinf):
    H = groups.subgroup_close([dinf.generator(0)])
    K = groups.subgroup_close([dinf.generator(1)])
    with pytest.raises(Unsupported):
        groups.intersect(H, K)
    with pytest.raises(Unsupported):
        groups.normalizer(H)


def test_pc_json_roundtrip(heis):
    data = heis.to_json()
    back = groups.PcPresentation.from_json(data)
    assert back.to_json() == data
    x = groups.multiply(back.generator(0), back.generator(1))
    assert x.data == (1, 1, 0) or back.multiply(back.generator(1), back.generator(0)) is not None
