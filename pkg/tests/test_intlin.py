"""Integer linear algebra against brute-force and sympy oracles."""

import itertools
import random
from fractions import Fraction

import pytest

from polyfam import intlin


def brute_lattice_points(basis, box):
    """All lattice points with coefficient vectors in [-box, box]^rank."""
    rank = intlin.lattice_rank(basis)
    dim = len(basis)
    pts = set()
    for coeffs in itertools.product(range(-box, box + 1), repeat=rank):
        v = tuple(sum(basis[i][j] * coeffs[j] for j in range(rank)) for i in range(dim))
        pts.add(v)
    return pts


def test_hnf_canonical_example():
    H = intlin.lattice_basis([[2, 0], [1, 1]], 2)
    assert H == [[2, 1], [0, 1]]


def test_hnf_spans_same_lattice():
    rng = random.Random(7)
    for _ in range(120):
        dim = rng.choice([1, 2, 3])
        vecs = [[rng.randint(-4, 4) for _ in range(dim)]
                for _ in range(rng.randint(1, 4))]
        H = intlin.lattice_basis(vecs, dim)
        for v in vecs:
            assert intlin.lattice_member(H, v)
        for col in intlin.columns(H):
            assert intlin.solve_rational(intlin.from_columns(
                [list(v) for v in vecs], nrows=dim) if any(any(v) for v in vecs) else [[0]*0]*dim, col) is not None


def test_hnf_unique_under_unimodular_change():
    rng = random.Random(3)
    for _ in range(60):
        dim = rng.choice([2, 3])
        vecs = [[rng.randint(-3, 3) for _ in range(dim)] for _ in range(dim)]
        H1 = intlin.lattice_basis(vecs, dim)
        # shuffle / add multiples: same lattice, new generators
        mixed = [list(v) for v in vecs]
        rng.shuffle(mixed)
        if len(mixed) >= 2:
            mixed[0] = [mixed[0][i] + 2 * mixed[1][i] for i in range(dim)]
            mixed.append([-x for x in mixed[-1]])
        H2 = intlin.lattice_basis(mixed, dim)
        assert H1 == H2


def test_kernel_and_solve():
    rng = random.Random(11)
    for _ in range(80):
        m, n = rng.randint(1, 3), rng.randint(1, 4)
        A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        for k in intlin.kernel_basis(A):
            assert all(sum(A[i][j] * k[j] for j in range(n)) == 0 for i in range(m))
        x = [rng.randint(-2, 2) for _ in range(n)]
        b = [sum(A[i][j] * x[j] for j in range(n)) for i in range(m)]
        sol = intlin.solve_integer(A, b)
        assert sol is not None
        assert all(sum(A[i][j] * sol[j] for j in range(n)) == b[i] for i in range(m))


def test_solve_unsolvable():
    assert intlin.solve_integer([[2]], [1]) is None
    assert intlin.solve_integer([[2, 0], [0, 2]], [1, 0]) is None


def test_snf_against_sympy():
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form

    rng = random.Random(19)
    for _ in range(50):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
        ours = [d for d in intlin.smith_normal_form(A)]
        S = smith_normal_form(sympy.Matrix(A))
        theirs = [abs(S[i, i]) for i in range(min(m, n))]
        theirs = [d for d in theirs if d != 0]
        ours_nonzero = [d for d in ours if d != 0]
        assert ours_nonzero == theirs


def test_intersection_against_box_oracle():
    rng = random.Random(23)
    for _ in range(200):
        dim = rng.choice([2, 3])
        v1 = [[rng.randint(-5, 5) for _ in range(dim)] for _ in range(2)]
        v2 = [[rng.randint(-5, 5) for _ in range(dim)] for _ in range(2)]
        B1 = intlin.lattice_basis(v1, dim)
        B2 = intlin.lattice_basis(v2, dim)
        I = intlin.lattice_intersection(B1, B2)
        pts1 = brute_lattice_points(B1, 3)
        pts2 = brute_lattice_points(B2, 3)
        both = pts1 & pts2
        for p in both:
            if max(abs(x) for x in p) <= 10:
                assert intlin.lattice_member(I, list(p))
        for col in intlin.columns(I):
            assert intlin.lattice_member(B1, col) and intlin.lattice_member(B2, col)


def test_index_examples():
    B = intlin.lattice_basis([[2, 0], [1, 3]], 2)
    full = intlin.lattice_basis([[1, 0], [0, 1]], 2)
    assert intlin.lattice_index(B, full) == 6
    line = intlin.lattice_basis([[1, 0]], 2)
    assert intlin.lattice_index(line, full) == float("inf")


def test_intersection_index_example():
    B1 = intlin.lattice_basis([[2, 0], [0, 1]], 2)
    B2 = intlin.lattice_basis([[1, 1], [0, 3]], 2)
    I = intlin.lattice_intersection(B1, B2)
    full = intlin.lattice_basis([[1, 0], [0, 1]], 2)
    assert intlin.lattice_index(I, full) == 6


def test_saturation():
    B = intlin.lattice_basis([[2, 4]], 2)
    S = intlin.lattice_saturation(B)
    assert intlin.lattice_member(S, [1, 2])
    assert intlin.lattice_index(B, S) == 2
    B2 = intlin.lattice_basis([[1, 2]], 2)
    assert intlin.lattice_saturation(B2) == B2


def test_reduce_vector_canonical():
    B = intlin.lattice_basis([[2, 0], [0, 3]], 2)
    r = intlin.lattice_reduce_vector(B, [5, -4])
    assert r == [Fraction(1), Fraction(2)]
    r2 = intlin.lattice_reduce_vector(B, [Fraction(1, 2), 7])
    assert r2 == [Fraction(1, 2), Fraction(1)]


def test_quotient_reps():
    B = intlin.lattice_basis([[2, 1], [0, 3]], 2)
    full = intlin.lattice_basis([[1, 0], [0, 1]], 2)
    reps = intlin.lattice_quotient_reps(B, full)
    assert len(reps) == 6
    seen = set()
    for r in reps:
        canon = tuple(intlin.lattice_reduce_vector(B, r))
        assert canon not in seen
        seen.add(canon)


def test_solve_congruence():
    # 2t = 0 mod 6Z: t in 3Z
    sol = intlin.solve_congruence([[2]], [[6]], [0])
    t0, T = sol
    assert sum(abs(x) for x in t0) % 3 == 0
    assert intlin.lattice_member(T, [3])
    assert not intlin.lattice_member(T, [1])


def test_cokernel_invariants():
    # Z/2 + Z/3 = Z/6 in invariant-factor form
    free, tors = intlin.cokernel_invariants([[2, 0], [0, 3]], 2)
    assert free == 0 and tors == [6]
    free, tors = intlin.cokernel_invariants([[2], [0]], 2)
    assert free == 1 and tors == [2]
    free, tors = intlin.cokernel_invariants([[2, 0], [0, 2]], 2)
    assert free == 0 and tors == [2, 2]
