"""Shared brute-force oracles for the test suite."""

import itertools

from polyfam import groups, intlin


def dinf_pc_to_affine(pc, affine, el):
    """Faithful image of a Dinf pc element (b, a) as an affine map; b is the
    reflection at 0, a the unit translation."""
    b = affine.element([[-1]], [0])
    a = affine.translation([1])
    out = affine.identity()
    for gen, exp in zip((b, a), el.data):
        step = gen if exp >= 0 else affine.inverse(gen)
        for _ in range(abs(exp)):
            out = affine.multiply(out, step)
    return out


def brute_subgroup_elements(gens, steps=6):
    """Word closure of the generating set out to the given length."""
    group = gens[0].group
    gen_set = list(gens) + [g.inverse() for g in gens]
    seen = {group.identity()}
    frontier = [group.identity()]
    for _ in range(steps):
        nxt = []
        for x in frontier:
            for g in gen_set:
                y = groups.multiply(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def random_lattice_handle(group, rng, max_entry=3, nvecs=2):
    n = group.dimension
    gens = []
    for _ in range(nvecs):
        v = [rng.randint(-max_entry, max_entry) for _ in range(n)]
        gens.append(group.translation(v))
    return groups.subgroup_close(gens)


def random_subgroup(group, rng, max_entry=3, allow_point=True):
    n = group.dimension
    gens = []
    for _ in range(rng.randint(1, 2)):
        v = [rng.randint(-max_entry, max_entry) for _ in range(n)]
        gens.append(group.translation(v))
    if allow_point and rng.random() < 0.5 and len(group.point_group) > 1:
        A = rng.choice(group.point_group[1:])
        shift = [rng.randint(-1, 1) for _ in range(n)]
        vA = group.vector_of(A)
        gens.append(group.element(A, [vA[i] + shift[i] for i in range(n)]))
    return groups.subgroup_close(gens)


def brute_lattice_points_handle(H, box):
    """Integer points of a lattice handle with coefficients in [-box, box]."""
    import itertools as _it

    basis = H.lattice_matrix()
    from polyfam import intlin as _intlin

    rank = _intlin.lattice_rank(basis)
    dim = len(basis)
    pts = set()
    for coeffs in _it.product(range(-box, box + 1), repeat=rank):
        pts.add(tuple(sum(basis[i][j] * coeffs[j] for j in range(rank))
                      for i in range(dim)))
    return pts


def primitive_vectors(n, bound):
    """Primitive integer vectors of max-norm <= bound, up to sign."""
    out = []
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        if not any(v):
            continue
        if intlin.gcd_list([abs(x) for x in v]) != 1:
            continue
        lead = next(x for x in v if x)
        if lead < 0:
            continue
        out.append(list(v))
    return out
