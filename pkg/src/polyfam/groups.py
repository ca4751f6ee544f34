"""Polycyclic-by-finite groups: two exact backends.

* Polycyclic presentations: element arithmetic by collection from the left,
  induced polycyclic sequences by echelon sifting, Hirsch length.
* Affine crystallographic groups (integer point group acting on the lattice
  Z^n with a rational vector system): the full subgroup calculus via integer
  linear algebra (HNF lattices plus finite point-part coset lists).

All values are immutable after construction and safe to share.
"""

from dataclasses import dataclass
from fractions import Fraction
import itertools

from . import intlin
from .errors import (
    BackendMismatch,
    ClosureOverflow,
    InconsistentPresentation,
    NotASubgroup,
    ParseError,
    Unsupported,
)

CLOSURE_BOUND = 4096


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def _mat_key(A):
    return tuple(tuple(row) for row in A)


def _vec_key(v):
    return tuple(_frac(x) for x in v)


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class GroupElement:
    """Element of a pc or affine group; `data` is the backend payload."""

    group: object
    data: tuple

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.group is other.group
            and self.data == other.data
        )

    def __hash__(self):
        return hash((id(self.group), self.data))

    def __mul__(self, other):
        return multiply(self, other)

    def inverse(self):
        return self.group.inverse(self)

    def __repr__(self):
        return f"<{self.group.describe_element(self)}>"


def multiply(a, b):
    if a.group is not b.group:
        raise BackendMismatch("elements live in different groups")
    return a.group.multiply(a, b)


def conjugate_element(x, g):
    """g^-1 x g."""
    return multiply(multiply(g.inverse(), x), g)


# ---------------------------------------------------------------------------
# affine crystallographic groups


class AffineCrystGroup:
    """Extension of a finite integer point group by the lattice Z^n.

    Elements are pairs (A, v): x -> A x + v with A in the point group and
    v congruent to the vector system entry of A modulo Z^n.
    """

    backend = "affine"

    def __init__(self, dimension, point_group, vector_system, name=None,
                 strict_denominators=False):
        self.dimension = dimension
        mats = [_mat_key(A) for A in point_group]
        vecs = [_vec_key(v) for v in vector_system]
        if len(mats) != len(vecs):
            raise ParseError("point group and vector system sizes differ")
        ident = _mat_key(intlin.identity_matrix(dimension))
        order = sorted(range(len(mats)), key=lambda i: (mats[i] != ident, mats[i]))
        self.point_group = tuple(mats[i] for i in order)
        rawvec = [vecs[i] for i in order]
        if not self.point_group or self.point_group[0] != ident:
            raise ParseError("point group must contain the identity")
        self._vector_system = {}
        for A, v in zip(self.point_group, rawvec):
            self._vector_system[A] = tuple(x - (x // 1) for x in v)  # reduce mod Z^n
        if any(x != 0 for x in self._vector_system[ident]):
            raise ParseError("identity must carry the zero vector")
        self._inverse_table = {}
        self._check_closure()
        self._check_cocycle()
        if strict_denominators:
            bound = len(self.point_group)
            for v in self._vector_system.values():
                if any(x.denominator and bound % x.denominator != 0 for x in v):
                    raise ParseError("vector system denominator must divide the point group order")
        self.name = name or f"affine{dimension}d_{len(self.point_group)}pt"
        self._ball_cache = {}

    # -- construction checks

    def _check_closure(self):
        pset = set(self.point_group)
        for A in self.point_group:
            found_inverse = False
            for B in self.point_group:
                prod = _mat_key(intlin.mat_mul(A, B))
                if prod not in pset:
                    raise ParseError("point group not closed under products")
                if prod == self.point_group[0]:
                    self._inverse_table[A] = B
                    found_inverse = True
            if not found_inverse:
                raise ParseError("point group not closed under inverses")

    def _check_cocycle(self):
        n = self.dimension
        for A in self.point_group:
            vA = self._vector_system[A]
            for B in self.point_group:
                vB = self._vector_system[B]
                AB = _mat_key(intlin.mat_mul(A, B))
                lhs = self._vector_system[AB]
                rhs = [vA[i] + sum(Fraction(A[i][j]) * vB[j] for j in range(n))
                       for i in range(n)]
                if any((lhs[i] - rhs[i]).denominator != 1 for i in range(n)):
                    raise ParseError("vector system violates the cocycle condition")

    # -- element arithmetic

    def element(self, A, v):
        A = _mat_key(A)
        v = _vec_key(v)
        if A not in self._vector_system:
            raise ParseError("matrix not in the point group")
        vA = self._vector_system[A]
        if any((v[i] - vA[i]).denominator != 1 for i in range(self.dimension)):
            raise ParseError("translation incompatible with the vector system")
        return GroupElement(self, (A, v))

    def identity(self):
        n = self.dimension
        ident = self.point_group[0]
        return GroupElement(self, (ident, tuple(Fraction(0) for _ in range(n))))

    def translation(self, t):
        return self.element(self.point_group[0], [Fraction(x) for x in t])

    def multiply(self, a, b):
        (A1, v1), (A2, v2) = a.data, b.data
        n = self.dimension
        A = _mat_key(intlin.mat_mul(A1, A2))
        v = tuple(v1[i] + sum(Fraction(A1[i][j]) * v2[j] for j in range(n))
                  for i in range(n))
        return GroupElement(self, (A, v))

    def inverse(self, a):
        (A, v) = a.data
        Ainv = self._inverse_table[A]
        n = self.dimension
        w = tuple(-sum(Fraction(Ainv[i][j]) * v[j] for j in range(n)) for i in range(n))
        return GroupElement(self, (Ainv, w))

    def point_matrix_inverse(self, A):
        return self._inverse_table[_mat_key(A)]

    def vector_of(self, A):
        return self._vector_system[_mat_key(A)]

    def describe_element(self, el):
        A, v = el.data
        return f"({A}|{tuple(str(x) for x in v)})"

    # -- generators and word balls

    def generators(self):
        gens = []
        n = self.dimension
        for i in range(n):
            t = [Fraction(0)] * n
            t[i] = Fraction(1)
            gens.append(self.translation(t))
        ident = self.point_group[0]
        for A in self.point_group[1:]:
            gens.append(self.element(A, self._vector_system[A]))
        out = []
        for g in gens:
            out.append(g)
            gi = self.inverse(g)
            if gi != g:
                out.append(gi)
        return out

    def ball(self, radius):
        """All products of at most `radius` generators (with inverses)."""
        if radius in self._ball_cache:
            return self._ball_cache[radius]
        gens = self.generators()
        seen = {self.identity()}
        frontier = [self.identity()]
        for _ in range(radius):
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.multiply(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        result = tuple(sorted(seen, key=lambda e: (e.data[0], e.data[1])))
        self._ball_cache[radius] = result
        return result

    def to_json(self):
        return {
            "kind": "affine",
            "dimension": self.dimension,
            "point_group": [[list(row) for row in A] for A in self.point_group],
            "vector_system": [
                [str(x) for x in self._vector_system[A]] for A in self.point_group
            ],
        }

    @classmethod
    def from_json(cls, data, name=None):
        try:
            dim = int(data["dimension"])
            mats = data["point_group"]
            vecs = [[Fraction(s) for s in v] for v in data["vector_system"]]
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"bad affine group JSON: {exc}") from exc
        return cls(dim, mats, vecs, name=name, strict_denominators=True)


# ---------------------------------------------------------------------------
# polycyclic presentations


class PcPresentation:
    """Consistent polycyclic presentation with collection from the left.

    `relative_orders[i]` is None for an infinite generator.  Words are tuples
    of (generator index, exponent) pairs referencing strictly higher indices
    than the relation's own generator.  Conjugation relations default to
    commuting: g_j^{g_i} = g_j.
    """

    backend = "pc"

    def __init__(self, relative_orders, power_relations=None,
                 conjugation_relations=None, name=None):
        self.relative_orders = tuple(relative_orders)
        self.ngens = len(self.relative_orders)
        self.power_relations = {int(k): tuple(tuple(p) for p in w)
                                for k, w in (power_relations or {}).items()}
        self.conjugation_relations = {}
        for key, w in (conjugation_relations or {}).items():
            i, j, s = key
            if not (0 <= i < j < self.ngens) or s not in (1, -1):
                raise ParseError("bad conjugation relation key")
            self.conjugation_relations[(i, j, s)] = tuple(tuple(p) for p in w)
        self._validate_words()
        self.name = name or f"pc{self.ngens}"
        self._check_consistency()

    def _validate_words(self):
        for i, w in self.power_relations.items():
            if self.relative_orders[i] is None:
                raise ParseError("power relation on an infinite generator")
            for j, _ in w:
                if j <= i:
                    raise ParseError("power relation word must use higher generators")
        for (i, j, _), w in self.conjugation_relations.items():
            for k, _ in w:
                if k <= i:
                    raise ParseError("conjugation word must use higher generators")

    # -- elements

    def identity(self):
        return GroupElement(self, tuple(0 for _ in range(self.ngens)))

    def element(self, exponents):
        e = list(int(x) for x in exponents)
        if len(e) != self.ngens:
            raise ParseError("wrong exponent vector length")
        for i, r in enumerate(self.relative_orders):
            if r is not None and not 0 <= e[i] < r:
                raise ParseError("exponent out of range for finite generator")
        return GroupElement(self, tuple(e))

    def generator(self, i, power=1):
        out = self.identity()
        for _ in range(abs(power)):
            out = self._mult_gen(out, i, 1 if power > 0 else -1)
        return out

    def multiply(self, a, b):
        out = a
        for j in range(self.ngens):
            ej = b.data[j]
            sign = 1 if ej > 0 else -1
            for _ in range(abs(ej)):
                out = self._mult_gen(out, j, sign)
        return out

    def inverse(self, a):
        out = self.identity()
        for j in range(self.ngens - 1, -1, -1):
            ej = a.data[j]
            sign = -1 if ej > 0 else 1
            for _ in range(abs(ej)):
                out = self._mult_gen(out, j, sign)
        return out

    def power(self, a, k):
        if k < 0:
            return self.power(self.inverse(a), -k)
        out = self.identity()
        for _ in range(k):
            out = self.multiply(out, a)
        return out

    def describe_element(self, el):
        parts = [f"g{i}^{e}" for i, e in enumerate(el.data) if e]
        return " ".join(parts) if parts else "1"

    # -- collection

    def _mult_gen(self, el, i, sign):
        """el * g_i^sign with el in collected normal form."""
        e = list(el.data)
        tail = [0] * self.ngens
        has_tail = False
        for j in range(i + 1, self.ngens):
            if e[j]:
                tail[j] = e[j]
                e[j] = 0
                has_tail = True
        bumped = self._bump(tuple(e), i, sign)
        if not has_tail:
            return bumped
        conj = self._conj_vector(tail, i, sign)
        return self.multiply(bumped, conj)

    def _bump(self, e, i, sign):
        """g_1^{e_1}..g_i^{e_i} * g_i^{sign}; entries above i are zero."""
        e = list(e)
        r = self.relative_orders[i]
        val = e[i] + sign
        if r is None or 0 <= val < r:
            e[i] = val
            return GroupElement(self, tuple(e))
        word = self.power_relations.get(i, ())
        if val == r:
            e[i] = 0
            return self._mult_word(GroupElement(self, tuple(e)), word, invert=False)
        # val == -1: g_i^{-1} = g_i^{r-1} w^{-1}
        e[i] = r - 1
        return self._mult_word(GroupElement(self, tuple(e)), word, invert=True)

    def _mult_word(self, el, word, invert=False):
        seq = [(j, -p) for j, p in reversed(word)] if invert else word
        out = el
        for j, p in seq:
            sign = 1 if p > 0 else -1
            for _ in range(abs(p)):
                out = self._mult_gen(out, j, sign)
        return out

    def _conj_vector(self, tail, i, sign):
        """(g_{i+1}^{t_{i+1}} .. g_n^{t_n}) conjugated by g_i^{sign}."""
        out = self.identity()
        for j in range(i + 1, self.ngens):
            tj = tail[j]
            if not tj:
                continue
            word = self.conjugation_relations.get((i, j, sign), ((j, 1),))
            conj_gen = self._mult_word(self.identity(), word)
            out = self.multiply(out, self.power(conj_gen, tj))
        return out

    # -- consistency

    def _check_consistency(self):
        gens = [self.generator(i) for i in range(self.ngens)]
        for i, j in itertools.combinations(range(self.ngens), 2):
            gi, gj = gens[i], gens[j]
            back = self._conj_vector(list(self._conj_vector(
                [0] * j + [1] + [0] * (self.ngens - j - 1), i, 1).data), i, -1)
            if back != gj:
                raise InconsistentPresentation(
                    f"conjugation by g{i} is not invertible on g{j}")
        for i in range(self.ngens):
            r = self.relative_orders[i]
            if r is not None:
                lhs = self.power(gens[i], r)
                rhs = self._mult_word(self.identity(), self.power_relations.get(i, ()))
                if lhs != rhs:
                    raise InconsistentPresentation(f"power relation fails for g{i}")
        for k in range(self.ngens):
            for j in range(k + 1):
                for i in range(j + 1):
                    a = self.multiply(self.multiply(gens[k], gens[j]), gens[i])
                    b = self.multiply(gens[k], self.multiply(gens[j], gens[i]))
                    if a != b:
                        raise InconsistentPresentation(
                            f"associativity fails on g{k} g{j} g{i}")

    def to_json(self):
        return {
            "kind": "pc",
            "generators": self.ngens,
            "relative_orders": [r if r is not None else None
                                for r in self.relative_orders],
            "power_relations": {str(i): [list(p) for p in w]
                                for i, w in sorted(self.power_relations.items())},
            "conjugation_relations": {
                f"{i},{j},{s}": [list(p) for p in w]
                for (i, j, s), w in sorted(self.conjugation_relations.items())
            },
        }

    @classmethod
    def from_json(cls, data, name=None):
        try:
            orders = [None if r is None else int(r) for r in data["relative_orders"]]
            powers = {int(k): [tuple(p) for p in w]
                      for k, w in data.get("power_relations", {}).items()}
            conj = {}
            for key, w in data.get("conjugation_relations", {}).items():
                i, j, s = (int(x) for x in key.split(","))
                conj[(i, j, s)] = [tuple(p) for p in w]
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"bad pc group JSON: {exc}") from exc
        return cls(orders, powers, conj, name=name)


def group_from_json(data, name=None):
    kind = data.get("kind")
    if kind == "affine":
        return AffineCrystGroup.from_json(data, name=name)
    if kind == "pc":
        return PcPresentation.from_json(data, name=name)
    raise ParseError(f"unknown group kind {kind!r}")


# ---------------------------------------------------------------------------
# subgroup handles


@dataclass(frozen=True)
class SubgroupHandle:
    """Canonical subgroup of a pc or affine group.

    Affine: `lattice` is the HNF basis (columns) of the translation part and
    `cosets` is the finite list of (point matrix, reduced translation) pairs
    including the identity pair.  Pc: `slots` is the induced polycyclic
    sequence in echelon form (one exponent vector per leading index).
    """

    group: object
    lattice: tuple = None
    cosets: tuple = None
    slots: tuple = None

    def __eq__(self, other):
        return (
            isinstance(other, SubgroupHandle)
            and self.group is other.group
            and self.lattice == other.lattice
            and self.cosets == other.cosets
            and self.slots == other.slots
        )

    def __hash__(self):
        return hash((id(self.group), self.lattice, self.cosets, self.slots))

    @property
    def backend(self):
        return self.group.backend

    def lattice_matrix(self):
        return [list(row) for row in self.lattice]

    def generators(self):
        g = self.group
        if self.backend == "affine":
            gens = [g.translation(col) for col in intlin.columns(self.lattice_matrix())]
            ident = g.point_group[0]
            gens.extend(g.element(A, v) for A, v in self.cosets if A != ident)
            return gens if gens else [g.identity()]
        return [GroupElement(g, s) for s in self.slots] or [g.identity()]

    def contains_element(self, el):
        if el.group is not self.group:
            raise BackendMismatch("element from a different group")
        if self.backend == "affine":
            A, v = el.data
            for B, w in self.cosets:
                if B == A:
                    return intlin.lattice_member(
                        self.lattice_matrix(), [v[i] - w[i] for i in range(len(v))])
            return False
        return _pc_residue(self.group, self.slots, el.data) is None

    def contains(self, other):
        if other.group is not self.group:
            raise BackendMismatch("subgroup of a different group")
        return all(self.contains_element(g) for g in other.generators())

    def is_trivial(self):
        if self.backend == "affine":
            return intlin.lattice_rank(self.lattice_matrix()) == 0 and len(self.cosets) == 1
        return len(self.slots) == 0

    def is_finite(self):
        if self.backend == "affine":
            return intlin.lattice_rank(self.lattice_matrix()) == 0
        return hirsch_length(self) == 0

    def order(self):
        """Order of a finite affine subgroup."""
        if self.backend != "affine" or not self.is_finite():
            raise Unsupported("order available for finite affine subgroups only")
        return len(self.cosets)

    def point_matrices(self):
        return [A for A, _ in self.cosets]

    def to_json(self):
        if self.backend == "affine":
            return {
                "kind": "affine-subgroup",
                "lattice": [list(r) for r in self.lattice],
                "cosets": [
                    {"matrix": [list(r) for r in A], "vector": [str(x) for x in v]}
                    for A, v in self.cosets
                ],
            }
        return {"kind": "pc-subgroup", "slots": [list(s) for s in self.slots]}

    @classmethod
    def from_json(cls, group, data):
        try:
            if data["kind"] == "affine-subgroup":
                gens = [group.translation([Fraction(0)] * group.dimension)]
                for col in intlin.columns([list(r) for r in data["lattice"]]):
                    gens.append(group.translation(col))
                for c in data["cosets"]:
                    gens.append(group.element(c["matrix"], [Fraction(s) for s in c["vector"]]))
                return subgroup_close(gens)
            if data["kind"] == "pc-subgroup":
                return subgroup_close([group.element(s) for s in data["slots"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad subgroup JSON: {exc}") from exc
        raise ParseError("unknown subgroup kind")


def _canonical_affine_handle(group, lattice_vectors, coset_pairs):
    n = group.dimension
    L = intlin.lattice_basis([intlin.vec_int(v) for v in lattice_vectors], n)
    reduced = {}
    for A, v in coset_pairs:
        reduced[A] = tuple(intlin.lattice_reduce_vector(L, v))
    ident = group.point_group[0]
    if ident not in reduced:
        reduced[ident] = tuple(intlin.lattice_reduce_vector(L, [Fraction(0)] * n))
    cosets = tuple(sorted(reduced.items()))
    return SubgroupHandle(group, lattice=tuple(tuple(row) for row in L), cosets=cosets)


def subgroup_close(gens, bound=CLOSURE_BOUND):
    """Canonical handle for the subgroup generated by the given elements."""
    if not gens:
        raise ParseError("empty generator list")
    group = gens[0].group
    if any(g.group is not group for g in gens):
        raise BackendMismatch("generators from different groups")
    if group.backend == "affine":
        return _affine_close(group, gens, bound)
    return _pc_close(group, gens)


def _affine_close(group, gens, bound):
    n = group.dimension
    ident = group.point_group[0]
    lattice_vecs = []
    L = intlin.lattice_basis([], n)
    cosets = {ident: tuple(Fraction(0) for _ in range(n))}

    def add_translation(vec):
        nonlocal L
        vec = intlin.vec_int(vec)
        if not any(vec):
            return False
        if intlin.lattice_member(L, vec):
            return False
        lattice_vecs.append(vec)
        L = intlin.lattice_basis(lattice_vecs, n)
        return True

    def add_element(A, v):
        if A == ident:
            return add_translation(v)
        if A in cosets:
            w = cosets[A]
            return add_translation([v[i] - w[i] for i in range(n)])
        if len(cosets) >= bound:
            raise ClosureOverflow(f"point-part closure exceeded {bound}")
        cosets[A] = tuple(v)
        return True

    for g in gens:
        A, v = g.data
        add_element(A, v)
    changed = True
    while changed:
        changed = False
        # lattice invariance under every coset point part
        for A in list(cosets):
            for col in intlin.columns(L):
                img = intlin.mat_vec([list(r) for r in A], col)
                if add_translation(img):
                    changed = True
        # closure of cosets under products and inverses
        items = list(cosets.items())
        for (A1, v1), (A2, v2) in itertools.product(items, items):
            A = _mat_key(intlin.mat_mul(A1, A2))
            v = [v1[i] + sum(Fraction(A1[i][j]) * v2[j] for j in range(n))
                 for i in range(n)]
            if add_element(A, v):
                changed = True
        for A, v in list(cosets.items()):
            Ainv = group.point_matrix_inverse(A)
            w = [-sum(Fraction(Ainv[i][j]) * v[j] for j in range(n)) for i in range(n)]
            if add_element(Ainv, w):
                changed = True
    return _canonical_affine_handle(group, [list(c) for c in intlin.columns(L)],
                                    list(cosets.items()))


# -- pc sifting ---------------------------------------------------------------


def _pc_lead(data):
    for i, e in enumerate(data):
        if e:
            return i
    return None


def _pc_close(group, gens):
    slots = {}
    queue = [g.data for g in gens]

    def sift(data):
        x = GroupElement(group, data)
        while True:
            i = _pc_lead(x.data)
            if i is None:
                return None
            if i not in slots:
                if group.relative_orders[i] is None and x.data[i] < 0:
                    x = group.inverse(x)
                slots[i] = x.data
                return i
            s = GroupElement(group, slots[i])
            a, b = s.data[i], x.data[i]
            g, p, q = intlin._xgcd(a, b)
            y = group.multiply(group.power(s, p), group.power(x, q))
            if y.data[i] != g:
                # finite-order wraparound: fall back to products until reduced
                y = s
            if y.data != s.data and _pc_lead(y.data) == i and abs(y.data[i]) < abs(a):
                slots[i] = y.data
                queue.append(s.data)
                queue.extend(_closure_products(y.data))
                s = y
                a = y.data[i]
            # reduce x by the slot
            r = group.relative_orders[i]
            if r is None:
                if b % a != 0:
                    g2, p2, q2 = intlin._xgcd(a, b)
                    y2 = group.multiply(group.power(s, p2), group.power(x, q2))
                    slots[i] = y2.data
                    queue.append(s.data)
                    queue.append(x.data)
                    queue.extend(_closure_products(y2.data))
                    return i
                k = b // a
            else:
                d = intlin.gcd_list([a, r])
                if b % d != 0:
                    g2, p2, q2 = intlin._xgcd(a, b)
                    y2 = group.multiply(group.power(s, p2), group.power(x, q2))
                    slots[i] = y2.data
                    queue.append(s.data)
                    queue.append(x.data)
                    queue.extend(_closure_products(y2.data))
                    return i
                k = next(k for k in range(r) if (b - k * a) % r == 0)
            x = group.multiply(group.power(group.inverse(s), k), x)
            if _pc_lead(x.data) == i and x.data[i] != 0:
                # remainder with smaller lead exponent: swap in as new slot
                slots[i] = x.data
                queue.append(s.data)
                queue.extend(_closure_products(x.data))
                return i

    def _closure_products(data):
        out = []
        x = GroupElement(group, data)
        for j, sdata in list(slots.items()):
            s = GroupElement(group, sdata)
            out.append(group.multiply(x, s).data)
            out.append(group.multiply(s, x).data)
            out.append(conjugate_element(s, x).data)
            out.append(conjugate_element(x, s).data)
        return out

    while queue:
        data = queue.pop()
        sift(data)
    # fixed point: also close pairwise until stable
    stable = False
    while not stable:
        stable = True
        snapshot = list(slots.items())
        for (_, d1), (_, d2) in itertools.product(snapshot, snapshot):
            e1 = GroupElement(group, d1)
            e2 = GroupElement(group, d2)
            for prod in (group.multiply(e1, e2), conjugate_element(e2, e1),
                         conjugate_element(e2, group.inverse(e1))):
                if _pc_residue(group, slots, prod.data) is not None:
                    sift(prod.data)
                    stable = False
    return SubgroupHandle(group, slots=tuple(slots[i] for i in sorted(slots)))


def _pc_residue(group, slots, data):
    """None if data sifts to the identity through the echelon slots, else the
    stuck residue vector."""
    if isinstance(slots, dict):
        table = slots
    else:
        table = {_pc_lead(s): s for s in slots}
    x = GroupElement(group, data)
    while True:
        i = _pc_lead(x.data)
        if i is None:
            return None
        if i not in table:
            return x.data
        s = GroupElement(group, table[i])
        a, b = s.data[i], x.data[i]
        r = group.relative_orders[i]
        if r is None:
            if b % a != 0:
                return x.data
            k = b // a
        else:
            k = next((k for k in range(r) if (b - k * a) % r == 0), None)
            if k is None:
                return x.data
        x = group.multiply(group.power(group.inverse(s), k), x)
        if _pc_lead(x.data) == i:
            return x.data


# ---------------------------------------------------------------------------
# subgroup operations


def hirsch_length(H):
    """Number of infinite cyclic factors of an induced series of H."""
    if H.backend == "affine":
        return intlin.lattice_rank(H.lattice_matrix())
    count = 0
    for s in H.slots:
        i = _pc_lead(s)
        if H.group.relative_orders[i] is None:
            count += 1
    return count


def conjugate_subgroup(H, g):
    """g H g^-1."""
    if H.backend != "affine":
        gens = [multiply(multiply(g, x), g.inverse()) for x in H.generators()]
        return subgroup_close(gens)
    group = H.group
    n = group.dimension
    A, v = g.data
    Amat = [list(r) for r in A]
    new_lattice = [intlin.mat_vec(Amat, col) for col in intlin.columns(H.lattice_matrix())]
    new_cosets = []
    for B, u in H.cosets:
        el = group.multiply(group.multiply(g, group.element(B, u)), group.inverse(g))
        new_cosets.append(el.data)
    return _canonical_affine_handle(group, new_lattice, new_cosets)


def intersect(H, K):
    """H intersect K; exact on the affine backend."""
    if H.group is not K.group:
        raise BackendMismatch("subgroups of different groups")
    if H.backend != "affine":
        raise Unsupported("general pc-backend intersection is not implemented")
    group = H.group
    n = group.dimension
    LH, LK = H.lattice_matrix(), K.lattice_matrix()
    L = intlin.lattice_intersection(LH, LK)
    coset_pairs = []
    k_cosets = dict(K.cosets)
    for A, w in H.cosets:
        if A not in k_cosets:
            continue
        u = k_cosets[A]
        diff = [u[i] - w[i] for i in range(n)]
        try:
            diff = intlin.vec_int(diff)
        except ValueError:
            continue
        rH, rK = intlin.lattice_rank(LH), intlin.lattice_rank(LK)
        M = [[LH[i][j] for j in range(rH)] + [-LK[i][j] for j in range(rK)]
             for i in range(n)]
        sol = intlin.solve_integer(M, diff)
        if sol is None:
            continue
        a = sol[:rH]
        v = [w[i] + sum(LH[i][j] * a[j] for j in range(rH)) for i in range(n)]
        coset_pairs.append((A, tuple(_frac(x) for x in v)))
    return _canonical_affine_handle(group, [list(c) for c in intlin.columns(L)],
                                    coset_pairs)


def index(H, K):
    """|K : H| for H <= K; float('inf') when infinite."""
    if H.group is not K.group:
        raise BackendMismatch("subgroups of different groups")
    if H.backend != "affine":
        raise Unsupported("index is affine-backend only")
    if not K.contains(H):
        raise NotASubgroup("H is not contained in K")
    lat_index = intlin.lattice_index(H.lattice_matrix(), K.lattice_matrix())
    if lat_index == float("inf"):
        return float("inf")
    total = lat_index * len(K.cosets)
    assert total % len(H.cosets) == 0
    return total // len(H.cosets)


def normalizer(H):
    """N_G(H) in the affine backend, as an exact handle."""
    if H.backend != "affine":
        raise Unsupported("normalizer is affine-backend only")
    group = H.group
    n = group.dimension
    L = H.lattice_matrix()
    ident = group.point_group[0]
    nontrivial = [(B, u) for B, u in H.cosets if B != ident or any(u)]
    # translations t with (I - B) t in L for every coset
    rows = []
    for B, _ in nontrivial:
        IB = [[(1 if i == j else 0) - B[i][j] for j in range(n)] for i in range(n)]
        rows.extend(IB)
    lat_rank = intlin.lattice_rank(L)
    if rows:
        # block diagonal stack of L per coset row-block
        blocks = len(rows) // n
        big_L = [[0] * (lat_rank * blocks) for _ in range(len(rows))]
        for b in range(blocks):
            for i in range(n):
                for j in range(lat_rank):
                    big_L[b * n + i][b * lat_rank + j] = L[i][j]
        sol = intlin.solve_congruence(rows, big_L, [0] * len(rows))
        T = sol[1] if sol else intlin.lattice_basis([], n)
    else:
        T = intlin.lattice_basis(intlin.columns(intlin.identity_matrix(n)), n)
    coset_pairs = []
    h_matrices = {B for B, _ in H.cosets}
    for A in group.point_group:
        Amat = [list(r) for r in A]
        # (1) lattice stabilized setwise
        imgs = [intlin.mat_vec(Amat, col) for col in intlin.columns(L)]
        if not all(intlin.lattice_member(L, img) for img in imgs):
            continue
        if intlin.lattice_rank(intlin.lattice_basis(imgs, n)) != lat_rank:
            continue
        # (2) conjugation permutes coset matrices
        Ainv = group.point_matrix_inverse(A)
        conj_ok = True
        mapped = []
        for B, u in H.cosets:
            Bp = _mat_key(intlin.mat_mul(intlin.mat_mul(Amat, [list(r) for r in B]),
                                         [list(r) for r in Ainv]))
            if Bp not in h_matrices:
                conj_ok = False
                break
            mapped.append(((B, u), Bp))
        if not conj_ok:
            continue
        # (3) translation part: (I - B') v = w_{B'} - A u  (mod L), v = v_A + t
        vA = group.vector_of(A)
        sys_rows, rhs = [], []
        skip = False
        coset_lookup = dict(H.cosets)
        for (B, u), Bp in mapped:
            wBp = coset_lookup[Bp]
            IBp = [[(1 if i == j else 0) - Bp[i][j] for j in range(n)] for i in range(n)]
            Au = [sum(Fraction(A[i][j]) * u[j] for j in range(n)) for i in range(n)]
            IBp_vA = [sum(Fraction(IBp[i][j]) * vA[j] for j in range(n)) for i in range(n)]
            c = [wBp[i] - Au[i] - IBp_vA[i] for i in range(n)]
            if any(x.denominator != 1 for x in c):
                skip = True
                break
            sys_rows.extend(IBp)
            rhs.extend(int(x) for x in c)
        if skip:
            continue
        if sys_rows:
            blocks = len(sys_rows) // n
            big_L = [[0] * (lat_rank * blocks) for _ in range(len(sys_rows))]
            for b in range(blocks):
                for i in range(n):
                    for j in range(lat_rank):
                        big_L[b * n + i][b * lat_rank + j] = L[i][j]
            sol = intlin.solve_congruence(sys_rows, big_L, rhs)
            if sol is None:
                continue
            t0 = sol[0]
        else:
            t0 = [0] * n
        v = tuple(vA[i] + t0[i] for i in range(n))
        coset_pairs.append((A, v))
    return _canonical_affine_handle(
        H.group, [list(c) for c in intlin.columns(T)], coset_pairs)


def trivial_subgroup(group):
    if group.backend == "affine":
        return _canonical_affine_handle(group, [], [])
    return SubgroupHandle(group, slots=())


def full_subgroup(group):
    if group.backend == "affine":
        n = group.dimension
        lattice = [list(c) for c in intlin.columns(intlin.identity_matrix(n))]
        cosets = [(A, group.vector_of(A)) for A in group.point_group]
        return _canonical_affine_handle(group, lattice, cosets)
    slots = tuple(
        tuple(1 if j == i else 0 for j in range(group.ngens))
        for i in range(group.ngens)
    )
    return SubgroupHandle(group, slots=slots)


def join_subgroups(H, K):
    return subgroup_close(H.generators() + K.generators())


# ---------------------------------------------------------------------------
# derived groups: subgroup-as-group and quotients


def subgroup_as_group(H, name=None):
    """Present a full-lattice-rank affine subgroup as a group in its own
    right.  Returns (group, embed, project): embed maps new-group elements to
    ambient elements, project the other way."""
    if H.backend != "affine":
        raise Unsupported("subgroup_as_group is affine-backend only")
    group = H.group
    n = group.dimension
    B = H.lattice_matrix()
    if intlin.lattice_rank(B) != n:
        raise Unsupported("subgroup_as_group needs a finite-index translation part")
    Binv = _rational_inverse(B)
    mats, vecs = [], []
    for A, v in H.cosets:
        AB = _frac_mat_mul(Binv, _frac_mat_mul([list(r) for r in A], B))
        Am = _cast_int_matrix(AB)
        vb = [sum(Binv[i][j] * v[j] for j in range(n)) for i in range(n)]
        mats.append(Am)
        vecs.append(vb)
    sub = AffineCrystGroup(n, mats, vecs, name=name or f"{group.name}|sub")

    def embed(el):
        A, v = el.data
        AB = _frac_mat_mul(B, _frac_mat_mul([list(r) for r in A], Binv))
        Am = _cast_int_matrix(AB)
        vv = [sum(Fraction(B[i][j]) * v[j] for j in range(n)) for i in range(n)]
        return group.element(Am, vv)

    def project(el):
        A, v = el.data
        AB = _frac_mat_mul(Binv, _frac_mat_mul([list(r) for r in A], B))
        Am = _cast_int_matrix(AB)
        vv = [sum(Binv[i][j] * v[j] for j in range(n)) for i in range(n)]
        return sub.element(Am, vv)

    return sub, embed, project


def handle_in_subgroup(H, ambient_handle, sub, project):
    """Rewrite a handle contained in H in the coordinates of sub = H-as-group."""
    gens = [project(g) for g in ambient_handle.generators()]
    return subgroup_close(gens)


def handle_in_ambient(sub_handle, embed):
    gens = [embed(g) for g in sub_handle.generators()]
    return subgroup_close(gens)


def quotient_by_lattice(group, N, name=None):
    """G/N for a saturated normal lattice subgroup N (affine backend).

    Returns (quotient_group, project_el) where project_el maps ambient
    elements onto quotient elements.  Raises Unsupported when the quotient is
    not again crystallographic in this representation.
    """
    if group.backend != "affine":
        raise Unsupported("quotients are affine-backend only")
    n = group.dimension
    ident = group.point_group[0]
    if any(A != ident for A, _ in N.cosets):
        raise Unsupported("quotient supported for lattice subgroups only")
    BN = N.lattice_matrix()
    s = intlin.lattice_rank(BN)
    if s and intlin.lattice_index(BN, intlin.lattice_saturation(BN)) != 1:
        raise Unsupported("quotient needs a saturated lattice")
    if not is_normal(group, N):
        raise NotNormalError()
    if s == n:
        quot = AffineCrystGroup(0, [[]], [[]], name=name or f"{group.name}/N")

        def project_full(el):
            return quot.identity()
        return quot, project_full
    m = n - s
    if s == 0:
        Q = intlin.identity_matrix(n)
    else:
        rel = intlin.kernel_basis(intlin.transpose(BN))
        R = rel  # rows annihilating N
        img = intlin.lattice_basis(
            [intlin.mat_vec(R, col) for col in intlin.columns(intlin.identity_matrix(n))],
            len(R))
        Hinv = _rational_inverse(img)
        Q = [[0] * n for _ in range(m)]
        for jcol in range(n):
            e = [1 if t == jcol else 0 for t in range(n)]
            y = intlin.mat_vec(R, e)
            z = [sum(Hinv[i][j] * y[j] for j in range(len(y))) for i in range(m)]
            for i in range(m):
                f = Fraction(z[i])
                assert f.denominator == 1
                Q[i][jcol] = int(f)
    X = []
    for i in range(m):
        e = [1 if t == i else 0 for t in range(m)]
        sol = intlin.solve_integer(Q, e)
        assert sol is not None
        X.append(sol)
    Xmat = intlin.from_columns(X, nrows=n)
    mats, vecs, seen = [], [], {}
    for A in group.point_group:
        QA = intlin.mat_mul(Q, [list(r) for r in A])
        Abar = intlin.mat_mul(QA, Xmat)
        if intlin.mat_mul(Abar, Q) != QA:
            raise Unsupported("point action does not descend to the quotient")
        key = _mat_key(Abar)
        vA = group.vector_of(A)
        vbar = [sum(Fraction(Q[i][j]) * vA[j] for j in range(n)) for i in range(m)]
        if key in seen:
            prev = seen[key]
            if any((prev[i] - vbar[i]).denominator != 1 for i in range(m)):
                raise Unsupported("quotient has fractional translations")
        else:
            seen[key] = vbar
            mats.append(Abar)
            vecs.append(vbar)
    quot = AffineCrystGroup(m, mats, vecs, name=name or f"{group.name}/N")

    def project(el):
        A, v = el.data
        QA = intlin.mat_mul(Q, [list(r) for r in A])
        Abar = _cast_int_matrix(_frac_mat_mul(QA, Xmat))
        vbar = [sum(Fraction(Q[i][j]) * v[j] for j in range(n)) for i in range(m)]
        return quot.element(Abar, vbar)

    return quot, project


def is_normal(group, N):
    for g in group.generators():
        if conjugate_subgroup(N, g) != N:
            return False
    return True


def NotNormalError():
    from .errors import NotNormal
    return NotNormal("subgroup is not normal")


def _rational_inverse(B):
    n = len(B)
    M = [[Fraction(B[i][j]) for j in range(len(B[0]))] for i in range(n)]
    assert len(B[0]) == n
    aug = [M[i] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        sel = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[sel] = aug[sel], aug[col]
        piv = aug[col][col]
        aug[col] = [x / piv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [aug[r][j] - f * aug[col][j] for j in range(2 * n)]
    return [[aug[i][n + j] for j in range(n)] for i in range(n)]


def _frac_mat_mul(A, B):
    m, k, n = len(A), len(B), len(B[0]) if B else 0
    return [[sum(Fraction(A[i][t]) * Fraction(B[t][j]) for t in range(k))
             for j in range(n)] for i in range(m)]


def _cast_int_matrix(A):
    out = []
    for row in A:
        orow = []
        for x in row:
            f = Fraction(x)
            if f.denominator != 1:
                raise Unsupported("matrix fails to be integral")
            orow.append(f.numerator)
        out.append(orow)
    return _mat_key(out)


# ---------------------------------------------------------------------------
# standard groups


def integer_lattice(n, name=None):
    """Z^n as an affine group with trivial point part."""
    return AffineCrystGroup(n, [intlin.identity_matrix(n)], [[Fraction(0)] * n],
                            name=name or f"Z{n}")


def dihedral_infinite_affine(name="Dinf"):
    """Infinite dihedral group acting on the line: x -> x + 1 and x -> -x."""
    return AffineCrystGroup(1, [[[1]], [[-1]]], [[Fraction(0)], [Fraction(0)]],
                            name=name)


def wallpaper_p2(name="p2"):
    return AffineCrystGroup(
        2, [intlin.identity_matrix(2), [[-1, 0], [0, -1]]],
        [[Fraction(0)] * 2, [Fraction(0)] * 2], name=name)


def wallpaper_pm(name="pm"):
    return AffineCrystGroup(
        2, [intlin.identity_matrix(2), [[1, 0], [0, -1]]],
        [[Fraction(0)] * 2, [Fraction(0)] * 2], name=name)


def wallpaper_p4(name="p4"):
    rot = [[0, -1], [1, 0]]
    mats = [intlin.identity_matrix(2), rot,
            intlin.mat_mul(rot, rot), intlin.mat_mul(rot, intlin.mat_mul(rot, rot))]
    return AffineCrystGroup(2, mats, [[Fraction(0)] * 2] * 4, name=name)


def swap_group(name="swap2"):
    """Z^2 extended by the coordinate swap; used to exercise representatives
    whose normalizer is smaller than their commensurator."""
    return AffineCrystGroup(
        2, [intlin.identity_matrix(2), [[0, 1], [1, 0]]],
        [[Fraction(0)] * 2, [Fraction(0)] * 2], name=name)


def p2_times_z(name="p2xZ"):
    mats = [intlin.identity_matrix(3), [[-1, 0, 0], [0, -1, 0], [0, 0, 1]]]
    return AffineCrystGroup(3, mats, [[Fraction(0)] * 3] * 2, name=name)


def dihedral_infinite_pc(name="Dinf-pc"):
    """<b, a | b^2 = 1, a^b = a^-1> with b first in the polycyclic ordering."""
    return PcPresentation(
        [2, None],
        power_relations={},
        conjugation_relations={(0, 1, 1): [(1, -1)], (0, 1, -1): [(1, -1)]},
        name=name)


def heisenberg_pc(name="Heis"):
    """Discrete Heisenberg group: [g0, g1] = g2 central."""
    return PcPresentation(
        [None, None, None],
        conjugation_relations={
            (0, 1, 1): [(1, 1), (2, 1)],
            (0, 1, -1): [(1, 1), (2, -1)],
        },
        name=name)


STANDARD_GROUPS = {
    "z1": lambda: integer_lattice(1),
    "z2": lambda: integer_lattice(2),
    "z3": lambda: integer_lattice(3),
    "z4": lambda: integer_lattice(4),
    "dinf": dihedral_infinite_affine,
    "dinf-pc": dihedral_infinite_pc,
    "p2": wallpaper_p2,
    "pm": wallpaper_pm,
    "p4": wallpaper_p4,
    "p2xz": p2_times_z,
    "heis": heisenberg_pc,
    "swap2": swap_group,
}
