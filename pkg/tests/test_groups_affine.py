"""Affine crystallographic backend: subgroup calculus vs brute-force oracles."""

import random
from fractions import Fraction

import pytest

import helpers
from polyfam import groups, intlin
from polyfam.errors import NotASubgroup, ParseError


@pytest.fixture
def z2():
    return groups.integer_lattice(2)


@pytest.fixture
def dinf():
    return groups.dihedral_infinite_affine()


@pytest.fixture
def pm():
    return groups.wallpaper_pm()


@pytest.fixture
def p2():
    return groups.wallpaper_p2()


def test_p2_involution(p2):
    g = p2.element([[-1, 0], [0, -1]], [0, 0])
    assert groups.multiply(g, g) == p2.identity()


def test_dinf_affine_reflection_composition(dinf):
    b = dinf.element([[-1]], [0])
    a = dinf.translation([1])
    ab = groups.multiply(a, b)
    # x -> -x + 1, an involution fixing 1/2
    assert groups.multiply(ab, ab) == dinf.identity()


def test_subgroup_close_hnf_example(z2):
    H = groups.subgroup_close([z2.translation([2, 0]), z2.translation([1, 1])])
    assert H.lattice == ((2, 1), (0, 1))
    # brute-force box oracle: every small combination is a member
    for a in range(-5, 6):
        for b in range(-5, 6):
            v = [2 * a + b, b]
            assert H.contains_element(z2.translation(v))
    assert not H.contains_element(z2.translation([1, 0]))


def test_full_lattice(z2):
    H = groups.subgroup_close([z2.translation([1, 0]), z2.translation([0, 1])])
    assert H == groups.full_subgroup(z2)
    assert groups.hirsch_length(H) == 2


def test_hirsch_lengths():
    for n in range(1, 5):
        zn = groups.integer_lattice(n)
        assert groups.hirsch_length(groups.full_subgroup(zn)) == n
    dinf = groups.dihedral_infinite_affine()
    assert groups.hirsch_length(groups.full_subgroup(dinf)) == 1


def test_subgroup_with_point_part(dinf):
    b = dinf.element([[-1]], [0])
    H = groups.subgroup_close([b])
    assert H.is_finite() and H.order() == 2
    assert groups.hirsch_length(H) == 0
    full = groups.subgroup_close([b, dinf.translation([1])])
    assert full == groups.full_subgroup(dinf)


def test_intersect_example(z2):
    L1 = groups.subgroup_close([z2.translation([2, 0]), z2.translation([0, 1])])
    L2 = groups.subgroup_close([z2.translation([1, 1]), z2.translation([0, 3])])
    I = groups.intersect(L1, L2)
    assert groups.index(I, groups.full_subgroup(z2)) == 6


def test_intersect_idempotent_and_trivial(z2):
    H = groups.subgroup_close([z2.translation([1, 0])])
    assert groups.intersect(H, H) == H
    K = groups.subgroup_close([z2.translation([0, 1])])
    assert groups.intersect(H, K) == groups.trivial_subgroup(z2)


def test_intersect_against_box_oracle():
    rng = random.Random(31)
    for dim in (2, 3):
        zn = groups.integer_lattice(dim)
        for _ in range(100):
            H = helpers.random_lattice_handle(zn, rng, max_entry=5)
            K = helpers.random_lattice_handle(zn, rng, max_entry=5)
            I = groups.intersect(H, K)
            pts_h = helpers.brute_lattice_points_handle(H, 10)
            pts_k = helpers.brute_lattice_points_handle(K, 10)
            both = pts_h & pts_k
            for p in both:
                assert I.contains_element(zn.translation(list(p)))
            for col in intlin.columns(I.lattice_matrix()):
                assert H.contains_element(zn.translation(col))
                assert K.contains_element(zn.translation(col))


def test_intersect_with_point_parts(dinf):
    b = dinf.element([[-1]], [0])
    b1 = dinf.element([[-1]], [1])
    H = groups.subgroup_close([b])
    K = groups.subgroup_close([b1])
    I = groups.intersect(H, K)
    assert I.is_trivial()
    K2 = groups.subgroup_close([b, dinf.translation([2])])
    I2 = groups.intersect(K2, groups.subgroup_close([b]))
    assert I2 == groups.subgroup_close([b])


def test_index_examples(z2):
    two = groups.subgroup_close([z2.translation([2, 0]), z2.translation([0, 1])])
    assert groups.index(two, groups.full_subgroup(z2)) == 2
    line = groups.subgroup_close([z2.translation([1, 0])])
    assert groups.index(line, groups.full_subgroup(z2)) == float("inf")
    hnf = groups.subgroup_close([z2.translation([2, 0]), z2.translation([1, 3])])
    assert groups.index(hnf, groups.full_subgroup(z2)) == 6


def test_index_requires_containment(z2):
    H = groups.subgroup_close([z2.translation([2, 0])])
    K = groups.subgroup_close([z2.translation([0, 1])])
    with pytest.raises(NotASubgroup):
        groups.index(H, K)


def test_index_multiplicative(dinf):
    rng = random.Random(37)
    G = groups.full_subgroup(dinf)
    for _ in range(40):
        k = rng.randint(1, 4)
        m = rng.randint(1, 4)
        K = groups.subgroup_close([dinf.translation([k])])
        H = groups.subgroup_close([dinf.translation([k * m])])
        assert groups.index(H, K) == m
        iG_K = groups.index(K, G)
        iK_H = groups.index(H, K)
        iG_H = groups.index(H, G)
        assert iG_H == iG_K * iK_H


def test_conjugate_roundtrip(p2):
    rng = random.Random(41)
    for _ in range(40):
        H = helpers.random_subgroup(p2, rng)
        g = rng.choice(p2.ball(3))
        HG = groups.conjugate_subgroup(H, g)
        back = groups.conjugate_subgroup(HG, g.inverse())
        assert back == H


def test_normalizer_abelian(z2):
    H = groups.subgroup_close([z2.translation([1, 1])])
    assert groups.normalizer(H) == groups.full_subgroup(z2)


def test_normalizer_pm_line(pm):
    H = groups.subgroup_close([pm.translation([1, 0])])
    N = groups.normalizer(H)
    assert N == groups.full_subgroup(pm)


def test_normalizer_dinf_reflection(dinf):
    b = dinf.element([[-1]], [0])
    H = groups.subgroup_close([b])
    N = groups.normalizer(H)
    assert N == H
    # oracle: conjugation over a word ball of radius 6
    for g in dinf.ball(6):
        in_n = N.contains_element(g)
        conj = groups.conjugate_subgroup(H, g)
        assert in_n == (conj == H)


def test_normalizer_against_ball_oracle():
    rng = random.Random(43)
    for make in (groups.wallpaper_p2, groups.wallpaper_pm, groups.wallpaper_p4):
        G = make()
        ball = G.ball(4)
        for _ in range(10):
            H = helpers.random_subgroup(G, rng, max_entry=2)
            N = groups.normalizer(H)
            for g in ball:
                assert N.contains_element(g) == (groups.conjugate_subgroup(H, g) == H)


def test_subgroup_as_group_roundtrip(p2):
    H = groups.subgroup_close(
        [p2.translation([2, 0]), p2.translation([0, 1]),
         p2.element([[-1, 0], [0, -1]], [0, 0])])
    sub, embed, project = groups.subgroup_as_group(H)
    assert groups.hirsch_length(groups.full_subgroup(sub)) == 2
    for g in sub.ball(2):
        assert project(embed(g)) == g
        assert H.contains_element(embed(g))


def test_quotient_by_line(z2):
    N = groups.subgroup_close([z2.translation([1, 0])])
    quot, project = groups.quotient_by_lattice(z2, N)
    assert quot.dimension == 1
    img = project(z2.translation([3, 5]))
    assert img.data[1] == (Fraction(5),)
    assert project(z2.translation([1, 0])) == quot.identity()


def test_quotient_hirsch_additivity():
    rng = random.Random(47)
    for make in (lambda: groups.integer_lattice(2), groups.wallpaper_p2,
                 lambda: groups.integer_lattice(3)):
        G = make()
        n = G.dimension
        full = groups.full_subgroup(G)
        assert groups.hirsch_length(full) == n
        for _ in range(10):
            H = helpers.random_lattice_handle(G, rng, max_entry=2, nvecs=1)
            sat_basis = intlin.lattice_saturation(H.lattice_matrix())
            N = groups.subgroup_close(
                [G.translation(c) for c in intlin.columns(sat_basis)]
                + [G.identity()])
            if not groups.is_normal(G, N):
                continue
            try:
                quot, _ = groups.quotient_by_lattice(G, N)
            except Exception:
                continue
            assert groups.hirsch_length(N) + quot.dimension == n


def test_affine_json_roundtrip(pm):
    data = pm.to_json()
    back = groups.AffineCrystGroup.from_json(data)
    assert back.to_json() == data


def test_bad_vector_system_rejected():
    with pytest.raises(ParseError):
        groups.AffineCrystGroup.from_json({
            "dimension": 1,
            "point_group": [[[1]], [[-1]]],
            "vector_system": [["0"], ["1/3"]],
        })


def test_group_and_subgroup_json(dinf):
    b = dinf.element([[-1]], [1])
    H = groups.subgroup_close([b, dinf.translation([2])])
    data = H.to_json()
    back = groups.SubgroupHandle.from_json(dinf, data)
    assert back == H
