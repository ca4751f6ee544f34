"""Symbolic families of subgroups with decidable membership.

A descriptor carries its ambient group and a variant tag.  Membership is a
total predicate on subgroup handles of that group.  The strong equivalence
sim_r (intersection keeps the top Hirsch length, equivalently
commensurability), commensurators as span stabilizers, and bounded class
enumeration live here too.
"""

from dataclasses import dataclass, field
import itertools

from . import groups, intlin
from .errors import (
    BackendMismatch,
    EmptyBound,
    ParseError,
    PreconditionViolated,
    Unsupported,
)


@dataclass(frozen=True)
class FamilyDescriptor:
    """Tagged union of the supported family variants.

    kind: trivial | all | fin | hr | restrict | quotient | union |
          intersection | rs | fr_bracket
    """

    group: object
    kind: str
    rank: int = None                 # hr, rs (the i), fr_bracket (the r)
    level: int = None                # rs: ambient class level r = h(base)
    base: object = None              # rs / fr_bracket: the reference subgroup
    subgroup: object = None          # restrict: K; quotient: N
    inner: object = None             # restrict / quotient
    parts: tuple = ()                # union / intersection

    def __post_init__(self):
        if self.kind not in {"trivial", "all", "fin", "hr", "restrict",
                             "quotient", "union", "intersection", "rs",
                             "fr_bracket"}:
            raise ParseError(f"unknown family kind {self.kind!r}")

    def describe(self):
        if self.kind == "hr":
            return f"h<={self.rank}"
        if self.kind == "rs":
            return f"R_{self.rank}[{self.level}]"
        if self.kind == "fr_bracket":
            return f"bracket_{self.rank}"
        if self.kind in ("union", "intersection"):
            sep = " u " if self.kind == "union" else " n "
            return "(" + sep.join(p.describe() for p in self.parts) + ")"
        return self.kind


def trivial_family(group):
    return FamilyDescriptor(group, "trivial")


def all_family(group):
    return FamilyDescriptor(group, "all")


def fin_family(group):
    return FamilyDescriptor(group, "fin")


def hr_family(group, r):
    return FamilyDescriptor(group, "hr", rank=r)


def restrict_family(group, K, inner):
    return FamilyDescriptor(group, "restrict", subgroup=K, inner=inner)


def quotient_family(group, N, inner):
    return FamilyDescriptor(group, "quotient", subgroup=N, inner=inner)


def union_family(*parts):
    group = parts[0].group
    return FamilyDescriptor(group, "union", parts=tuple(parts))


def intersection_family(*parts):
    group = parts[0].group
    return FamilyDescriptor(group, "intersection", parts=tuple(parts))


def rs_family(group, i, base, level=None, within=None):
    """R_i relative to `base`; members live in the commensurator of base
    (optionally intersected with `within`)."""
    fam = FamilyDescriptor(group, "rs", rank=i,
                           level=level if level is not None else groups.hirsch_length(base),
                           base=base, subgroup=within)
    return fam


def fr_bracket_family(group, r, base, within=None):
    return FamilyDescriptor(group, "fr_bracket", rank=r, base=base,
                            subgroup=within)


# ---------------------------------------------------------------------------
# membership


def member(F, H):
    """Does the subgroup handle H belong to the family F?"""
    if H.group is not F.group:
        raise BackendMismatch("subgroup from a different group")
    kind = F.kind
    if kind == "trivial":
        return H.is_trivial()
    if kind == "all":
        return True
    if kind == "fin":
        return H.is_finite()
    if kind == "hr":
        return groups.hirsch_length(H) <= F.rank
    if kind == "restrict":
        return F.subgroup.contains(H) and member(F.inner, H)
    if kind == "quotient":
        return _quotient_member(F, H)
    if kind == "union":
        return any(member(p, H) for p in F.parts)
    if kind == "intersection":
        return all(member(p, H) for p in F.parts)
    if kind == "rs":
        comm = commensurator(F.base)
        if not comm.contains(H):
            return False
        if F.subgroup is not None and not F.subgroup.contains(H):
            return False
        h = groups.hirsch_length(H)
        if h > F.rank:
            return False
        if h == 0:
            return True
        meet = groups.intersect(H, F.base)
        return groups.hirsch_length(meet) == h
    if kind == "fr_bracket":
        comm = commensurator(F.base)
        if not comm.contains(H):
            return False
        if F.subgroup is not None and not F.subgroup.contains(H):
            return False
        h = groups.hirsch_length(H)
        r = F.rank
        if h <= r - 1:
            return True
        if h != r:
            return False
        meet = groups.intersect(H, F.base)
        return groups.hirsch_length(meet) == r
    raise ParseError(f"unhandled family kind {kind}")


def _quotient_member(F, H):
    """Preimage-family membership: the image of H in G/N belongs to inner."""
    N = F.subgroup
    inner = F.inner
    HN = groups.join_subgroups(H, N)
    h_img = groups.hirsch_length(HN) - groups.hirsch_length(N)
    if inner.kind == "all":
        return True
    if inner.kind == "fin":
        return h_img == 0
    if inner.kind == "hr":
        return h_img <= inner.rank
    if inner.kind == "trivial":
        return groups.index(N, HN) != float("inf") and groups.index(N, HN) == 1
    raise Unsupported("quotient families support trivial/all/fin/hr inner variants")


def contains_group(F, group=None):
    g = group or F.group
    return member(F, groups.full_subgroup(g))


def family_subsumes(big, small):
    """Conservative syntactic check that small is a subfamily of big."""
    if small.kind == "trivial":
        return True
    if big.kind == "all":
        return True
    if big.kind == small.kind == "hr":
        return small.rank <= big.rank
    if small.kind == "fin" and big.kind == "hr":
        return True
    if small.kind == "fin" and big.kind == "fin":
        return True
    if big.kind == "union" and any(family_subsumes(p, small) for p in big.parts):
        return True
    return False


# ---------------------------------------------------------------------------
# commensurability and the strong equivalence


def commensurable(H, K):
    """Finite mutual index over the intersection (affine backend)."""
    if H.group is not K.group:
        raise BackendMismatch("subgroups of different groups")
    if H.backend != "affine":
        raise Unsupported("commensurability is affine-backend only")
    meet = groups.intersect(H, K)
    hm = groups.hirsch_length(meet)
    return hm == groups.hirsch_length(H) == groups.hirsch_length(K)


def sim_r(H, K, r):
    """The strong equivalence at level r: the intersection stays at level r."""
    if groups.hirsch_length(H) != r or groups.hirsch_length(K) != r:
        raise PreconditionViolated("both subgroups must have Hirsch length r")
    if r == 0:
        return True
    meet = groups.intersect(H, K)
    return groups.hirsch_length(meet) == r


def commensurator(H):
    """Comm_G(H) = setwise stabilizer of the rational span of H's lattice,
    as a subgroup handle (affine backend)."""
    if H.backend != "affine":
        raise Unsupported("commensurator is affine-backend only")
    group = H.group
    n = group.dimension
    L = H.lattice_matrix()
    gens = [group.translation(col) for col in intlin.columns(intlin.identity_matrix(n))]
    for A in group.point_group:
        if _stabilizes_span(A, L):
            gens.append(group.element(A, group.vector_of(A)))
    return groups.subgroup_close(gens)


def _stabilizes_span(A, L):
    rank = intlin.lattice_rank(L)
    if rank == 0:
        return True
    Amat = [list(r) for r in A]
    for col in intlin.columns(L):
        img = intlin.mat_vec(Amat, col)
        if intlin.solve_rational(L, img) is None:
            return False
    return True


def finest_check(H, K, r):
    """Nested subgroups of equal level are equivalent; vacuous otherwise."""
    if groups.hirsch_length(H) != r or groups.hirsch_length(K) != r:
        raise PreconditionViolated("both subgroups must have Hirsch length r")
    if not K.contains(H):
        return True
    return sim_r(H, K, r)


def ssacfs_check(chain_levels, samples):
    """Intersection-transfer condition on sampled triples (H, K, L).

    Triples whose Hirsch data do not match the condition's shape are skipped;
    an empty effective sample is vacuously true.
    """
    for (H, K, L) in samples:
        r = groups.hirsch_length(H)
        if groups.hirsch_length(K) != r:
            continue
        meet = groups.intersect(H, K)
        if groups.hirsch_length(meet) != r:
            continue
        i = groups.hirsch_length(L)
        if i > r or (chain_levels and i not in chain_levels):
            continue
        lh = groups.hirsch_length(groups.intersect(L, H)) == i
        lk = groups.hirsch_length(groups.intersect(L, K)) == i
        if lh != lk:
            return False
    return True


# ---------------------------------------------------------------------------
# class catalogs


@dataclass(frozen=True)
class CommClass:
    representative: object
    level: int
    commensurator: object
    span: tuple  # HNF basis of the saturated span lattice

    def to_json(self):
        return {
            "representative": self.representative.to_json(),
            "level": self.level,
            "span": [list(r) for r in self.span],
        }


@dataclass(frozen=True)
class ClassCatalog:
    group: object
    level: int
    bound: int
    classes: tuple
    complete_within_bound: bool

    def __len__(self):
        return len(self.classes)

    def to_json(self):
        return {
            "level": self.level,
            "bound": self.bound,
            "complete_within_bound": self.complete_within_bound,
            "classes": [c.to_json() for c in self.classes],
        }


def enumerate_classes(group, r, bound):
    """One representative per conjugacy class of sim_r classes among
    subgroups whose span is generated by primitive vectors of max-norm <=
    bound (affine backend)."""
    if group.backend != "affine":
        raise Unsupported("class enumeration is affine-backend only")
    if bound <= 0:
        raise EmptyBound("height bound must be positive")
    if r < 1:
        raise PreconditionViolated("class level must be at least 1")
    n = group.dimension
    if r > n:
        return ClassCatalog(group, r, bound, (), True)
    prim = _primitive_vectors(n, bound)
    spans = {}
    for subset in itertools.combinations(prim, r):
        basis = intlin.lattice_basis([list(v) for v in subset], n)
        if intlin.lattice_rank(basis) != r:
            continue
        sat = intlin.lattice_saturation(basis)
        spans[_key(sat)] = sat
    # orbits under the point group; keep the least enumerated member per orbit
    orbit_member = {}
    for key, sat in sorted(spans.items()):
        orbit = set()
        for A in group.point_group:
            img = intlin.lattice_basis(
                [intlin.mat_vec([list(row) for row in A], col)
                 for col in intlin.columns(sat)], n)
            orbit.add(_key(intlin.lattice_saturation(img)))
        oid = min(orbit)
        if oid not in orbit_member:
            orbit_member[oid] = sat
    classes = []
    for oid in sorted(orbit_member):
        sat = orbit_member[oid]
        rep = groups.subgroup_close(
            [group.translation(col) for col in intlin.columns(sat)]
            + [group.identity()])
        comm = commensurator(rep)
        classes.append(CommClass(rep, r, comm, _key(sat)))
    return ClassCatalog(group, r, bound, tuple(classes), True)


def _key(basis):
    return tuple(tuple(row) for row in basis)


def _primitive_vectors(n, bound):
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


# ---------------------------------------------------------------------------
# JSON


def family_to_json(F):
    data = {"kind": F.kind}
    if F.kind == "hr":
        data["rank"] = F.rank
    elif F.kind == "restrict":
        data["subgroup"] = F.subgroup.to_json()
        data["inner"] = family_to_json(F.inner)
    elif F.kind == "quotient":
        data["normal"] = F.subgroup.to_json()
        data["inner"] = family_to_json(F.inner)
    elif F.kind in ("union", "intersection"):
        data["parts"] = [family_to_json(p) for p in F.parts]
    elif F.kind == "rs":
        data["rank"] = F.rank
        data["level"] = F.level
        data["base"] = F.base.to_json()
        if F.subgroup is not None:
            data["within"] = F.subgroup.to_json()
    elif F.kind == "fr_bracket":
        data["rank"] = F.rank
        data["base"] = F.base.to_json()
        if F.subgroup is not None:
            data["within"] = F.subgroup.to_json()
    return data


def family_from_json(group, data):
    kind = data.get("kind")
    if kind in ("trivial", "all", "fin"):
        return FamilyDescriptor(group, kind)
    if kind == "hr":
        return hr_family(group, int(data["rank"]))
    if kind == "restrict":
        K = groups.SubgroupHandle.from_json(group, data["subgroup"])
        return restrict_family(group, K, family_from_json(group, data["inner"]))
    if kind == "quotient":
        N = groups.SubgroupHandle.from_json(group, data["normal"])
        return quotient_family(group, N, family_from_json(group, data["inner"]))
    if kind == "union":
        return union_family(*[family_from_json(group, p) for p in data["parts"]])
    if kind == "intersection":
        return intersection_family(*[family_from_json(group, p) for p in data["parts"]])
    if kind == "rs":
        base = groups.SubgroupHandle.from_json(group, data["base"])
        within = (groups.SubgroupHandle.from_json(group, data["within"])
                  if "within" in data else None)
        return rs_family(group, int(data["rank"]), base,
                         level=int(data["level"]), within=within)
    if kind == "fr_bracket":
        base = groups.SubgroupHandle.from_json(group, data["base"])
        within = (groups.SubgroupHandle.from_json(group, data["within"])
                  if "within" in data else None)
        return fr_bracket_family(group, int(data["rank"]), base, within=within)
    raise ParseError(f"unknown family kind {kind!r}")
