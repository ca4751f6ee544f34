"""Finite CW complexes as labelled cells with integer boundary matrices.

Constructions: products (Leibniz boundary with sign (-1)^{left dim}), joins,
mapping cylinders and cones, double mapping cylinders, push-outs along a
subcomplex, and Smith-normal-form homology.  Every constructor asserts
boundary-squared-zero, so a sign mistake cannot survive construction.
"""

from dataclasses import dataclass

from . import abelian, intlin
from .errors import NotCellular, NotSubcomplex


class CellComplex:
    """cells[d] is a tuple of hashable labels; boundary(d) the integer matrix
    from d-cells to (d-1)-cells."""

    def __init__(self, cells, boundaries, check=True):
        self.cells = tuple(tuple(cs) for cs in cells)
        while self.cells and not self.cells[-1]:
            self.cells = self.cells[:-1]
        self.boundaries = [
            [list(row) for row in boundaries[d - 1]] if d - 1 < len(boundaries)
            else [[0] * len(self.cells[d]) for _ in range(len(self.cells[d - 1]))]
            for d in range(1, len(self.cells))
        ]
        self._index = [
            {label: i for i, label in enumerate(cs)} for cs in self.cells
        ]
        if check:
            self._check_boundary_squared()

    # -- basic queries

    @property
    def dimension(self):
        return len(self.cells) - 1 if self.cells else -1

    def ncells(self, d):
        return len(self.cells[d]) if 0 <= d < len(self.cells) else 0

    def boundary(self, d):
        """Matrix of the boundary map C_d -> C_{d-1}."""
        if d <= 0 or d > self.dimension:
            return [[0] * self.ncells(d) for _ in range(self.ncells(d - 1))]
        return self.boundaries[d - 1]

    def cell_index(self, d, label):
        return self._index[d][label]

    def is_empty(self):
        return not self.cells

    def _check_boundary_squared(self):
        for d in range(2, self.dimension + 1):
            prod = intlin.mat_mul(self.boundary(d - 1), self.boundary(d))
            if any(any(row) for row in prod):
                raise ValueError(f"boundary squared nonzero in degree {d}")

    # -- invariants

    def euler_characteristic(self):
        return sum((-1) ** d * self.ncells(d) for d in range(self.dimension + 1))

    def homology(self):
        """List of (rank, invariant factors) per degree, via SNF."""
        if self.is_empty():
            return [abelian.FGAbelian(0)]
        ranks = [self.ncells(d) for d in range(self.dimension + 1)]
        boundaries = [None] + [self.boundary(d) for d in range(1, self.dimension + 1)]
        return abelian.homology_groups(boundaries, ranks)

    def cohomology(self):
        """Integral cohomology from homology by universal coefficients."""
        return abelian.cohomology_from_homology(self.homology())

    def is_connected(self):
        if self.is_empty():
            return False
        parent = list(range(self.ncells(0)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        if self.dimension >= 1:
            b1 = self.boundary(1)
            for j in range(self.ncells(1)):
                touched = [i for i in range(self.ncells(0)) if b1[i][j]]
                for a, b in zip(touched, touched[1:]):
                    parent[find(a)] = find(b)
        return len({find(i) for i in range(self.ncells(0))}) == 1

    def is_acyclic(self):
        """Connected with vanishing reduced homology."""
        if self.is_empty() or not self.is_connected():
            return False
        hom = self.homology()
        if hom[0] != abelian.FGAbelian(1):
            return False
        return all(h.is_trivial for h in hom[1:])

    def to_json(self):
        triples = []
        for d in range(1, self.dimension + 1):
            b = self.boundary(d)
            for i in range(self.ncells(d - 1)):
                for j in range(self.ncells(d)):
                    if b[i][j]:
                        triples.append([d, i, j, b[i][j]])
        return {
            "dimension": self.dimension,
            "cells": [[str(label) for label in cs] for cs in self.cells],
            "boundary_triples": triples,
        }

    @classmethod
    def from_json(cls, data):
        cells = [list(cs) for cs in data["cells"]]
        boundaries = []
        for d in range(1, len(cells)):
            boundaries.append([[0] * len(cells[d]) for _ in range(len(cells[d - 1]))])
        for d, i, j, c in data["boundary_triples"]:
            boundaries[d - 1][i][j] = c
        return cls(cells, boundaries)


@dataclass(frozen=True)
class CellularMap:
    """Chain-level cellular map: one integer matrix per degree."""

    src: CellComplex
    dst: CellComplex
    matrices: tuple

    def __post_init__(self):
        mats = []
        for d in range(self.src.dimension + 1):
            if d < len(self.matrices) and self.matrices[d] is not None:
                m = [list(row) for row in self.matrices[d]]
            else:
                m = [[0] * self.src.ncells(d) for _ in range(self.dst.ncells(d))]
            if len(m) != self.dst.ncells(d) or (m and len(m[0]) != self.src.ncells(d)):
                raise NotCellular(f"matrix shape mismatch in degree {d}")
            mats.append(m)
        object.__setattr__(self, "matrices", tuple(tuple(tuple(r) for r in m) for m in mats))
        for d in range(1, self.src.dimension + 1):
            rows, cols = self.dst.ncells(d - 1), self.src.ncells(d)
            lhs = _shaped_mul(self.matrix(d - 1), self.src.boundary(d), rows, cols)
            rhs = _shaped_mul(self.dst.boundary(d), self.matrix(d), rows, cols)
            if lhs != rhs:
                raise NotCellular(f"boundary compatibility fails in degree {d}")

    def matrix(self, d):
        if 0 <= d < len(self.matrices):
            return [list(r) for r in self.matrices[d]]
        return [[0] * self.src.ncells(d) for _ in range(self.dst.ncells(d))]


def _shaped_mul(A, B, rows, cols):
    inner = len(B)
    out = [[0] * cols for _ in range(rows)]
    for i in range(min(rows, len(A))):
        for t in range(min(inner, len(A[i]) if A else 0)):
            a = A[i][t]
            if a:
                for j in range(cols):
                    out[i][j] += a * B[t][j]
    return out


def identity_map(X):
    return CellularMap(X, X, tuple(
        intlin.identity_matrix(X.ncells(d)) for d in range(X.dimension + 1)))


def map_from_cells(src, dst, assignment):
    """Build a cellular map from a label-level assignment.

    assignment maps (d, src_label) to a list of (coeff, dst_label); missing
    keys send the cell to zero.
    """
    mats = []
    for d in range(src.dimension + 1):
        m = [[0] * src.ncells(d) for _ in range(dst.ncells(d))]
        for j, label in enumerate(src.cells[d]):
            for coeff, target in assignment.get((d, label), ()):
                m[dst.cell_index(d, target)][j] += coeff
        mats.append(m)
    return CellularMap(src, dst, tuple(mats))


# ---------------------------------------------------------------------------
# standard complexes


def point_complex(label="pt"):
    return CellComplex([[label]], [])


def interval_complex():
    """Two endpoints, one edge."""
    return CellComplex([["L", "R"], ["e"]], [[[-1], [1]]])


def circle_complex():
    return CellComplex([["v"], ["e"]], [[[0]]])


def sphere_complex(n):
    """One 0-cell and one n-cell with trivial attaching map."""
    if n == 0:
        return CellComplex([["p", "q"]], [])
    cells = [["v"]] + [[] for _ in range(n - 1)] + [["top"]]
    boundaries = []
    for d in range(1, n + 1):
        rows = len(cells[d - 1])
        boundaries.append([[0] * len(cells[d]) for _ in range(rows)])
    return CellComplex(cells, boundaries)


def degree_map_circle(k):
    """The self-map of the circle of degree k."""
    c = circle_complex()
    return CellularMap(c, c, ([[1]], [[k]]))


# ---------------------------------------------------------------------------
# constructions


def product(X, Y):
    """Product cellular structure with Leibniz boundary."""
    dim = X.dimension + Y.dimension
    cells = [[] for _ in range(dim + 1)]
    for da in range(X.dimension + 1):
        for db in range(Y.dimension + 1):
            for a in X.cells[da]:
                for b in Y.cells[db]:
                    cells[da + db].append(("x", da, a, db, b))
    cx = CellComplex.__new__(CellComplex)
    index = [{label: i for i, label in enumerate(cs)} for cs in cells]
    boundaries = []
    for d in range(1, dim + 1):
        m = [[0] * len(cells[d]) for _ in range(len(cells[d - 1]))]
        for j, (_, da, a, db, b) in enumerate(cells[d]):
            ja = X.cell_index(da, a)
            if da > 0:
                ba = X.boundary(da)
                for i in range(X.ncells(da - 1)):
                    if ba[i][ja]:
                        lbl = ("x", da - 1, X.cells[da - 1][i], db, b)
                        m[index[d - 1][lbl]][j] += ba[i][ja]
            if db > 0:
                jb = Y.cell_index(db, b)
                bb = Y.boundary(db)
                sign = (-1) ** da
                for i in range(Y.ncells(db - 1)):
                    if bb[i][jb]:
                        lbl = ("x", da, a, db - 1, Y.cells[db - 1][i])
                        m[index[d - 1][lbl]][j] += sign * bb[i][jb]
        boundaries.append(m)
    return CellComplex(cells, boundaries)


def join(X, Y):
    """Join: cells of X, cells of Y, and prisms a*b of dimension |a|+|b|+1."""
    dim = X.dimension + Y.dimension + 1
    cells = [[] for _ in range(dim + 1)]
    for d in range(X.dimension + 1):
        cells[d].extend(("jx", d, a) for a in X.cells[d])
    for d in range(Y.dimension + 1):
        cells[d].extend(("jy", d, b) for b in Y.cells[d])
    for da in range(X.dimension + 1):
        for db in range(Y.dimension + 1):
            for a in X.cells[da]:
                for b in Y.cells[db]:
                    cells[da + db + 1].append(("j", da, a, db, b))
    index = [{label: i for i, label in enumerate(cs)} for cs in cells]
    boundaries = []
    for d in range(1, dim + 1):
        m = [[0] * len(cells[d]) for _ in range(len(cells[d - 1]))]
        for j, label in enumerate(cells[d]):
            tag = label[0]
            if tag == "jx":
                _, da, a = label
                ba = X.boundary(da)
                ja = X.cell_index(da, a)
                for i in range(X.ncells(da - 1)):
                    if ba[i][ja]:
                        lbl = ("jx", da - 1, X.cells[da - 1][i])
                        m[index[d - 1][lbl]][j] += ba[i][ja]
            elif tag == "jy":
                _, db, b = label
                bb = Y.boundary(db)
                jb = Y.cell_index(db, b)
                for i in range(Y.ncells(db - 1)):
                    if bb[i][jb]:
                        lbl = ("jy", db - 1, Y.cells[db - 1][i])
                        m[index[d - 1][lbl]][j] += bb[i][jb]
            else:
                _, da, a, db, b = label
                if da > 0:
                    ba = X.boundary(da)
                    ja = X.cell_index(da, a)
                    for i in range(X.ncells(da - 1)):
                        if ba[i][ja]:
                            lbl = ("j", da - 1, X.cells[da - 1][i], db, b)
                            m[index[d - 1][lbl]][j] += ba[i][ja]
                if db > 0:
                    bb = Y.boundary(db)
                    jb = Y.cell_index(db, b)
                    sign = (-1) ** da
                    for i in range(Y.ncells(db - 1)):
                        if bb[i][jb]:
                            lbl = ("j", da, a, db - 1, Y.cells[db - 1][i])
                            m[index[d - 1][lbl]][j] += sign * bb[i][jb]
                end_sign = (-1) ** (da + db)
                if da == 0:
                    m[index[d - 1][("jy", db, b)]][j] += end_sign
                if db == 0:
                    m[index[d - 1][("jx", da, a)]][j] -= end_sign
        boundaries.append(m)
    return CellComplex(cells, boundaries)


def mapping_cylinder(f):
    """Cylinder of f: X -> Y; X sits at the free end, Y at the glued end."""
    X, Y = f.src, f.dst
    dim = max(X.dimension + 1, Y.dimension)
    cells = [[] for _ in range(dim + 1)]
    for d in range(Y.dimension + 1):
        cells[d].extend(("cy", d, b) for b in Y.cells[d])
    for d in range(X.dimension + 1):
        cells[d].extend(("cx", d, a) for a in X.cells[d])
        cells[d + 1].extend(("cp", d, a) for a in X.cells[d])
    index = [{label: i for i, label in enumerate(cs)} for cs in cells]
    boundaries = []
    for d in range(1, dim + 1):
        m = [[0] * len(cells[d]) for _ in range(len(cells[d - 1]))]
        for j, label in enumerate(cells[d]):
            tag = label[0]
            if tag == "cy":
                _, dy, b = label
                bb = Y.boundary(dy)
                jb = Y.cell_index(dy, b)
                for i in range(Y.ncells(dy - 1)):
                    if bb[i][jb]:
                        m[index[d - 1][("cy", dy - 1, Y.cells[dy - 1][i])]][j] += bb[i][jb]
            elif tag == "cx":
                _, dx, a = label
                ba = X.boundary(dx)
                ja = X.cell_index(dx, a)
                for i in range(X.ncells(dx - 1)):
                    if ba[i][ja]:
                        m[index[d - 1][("cx", dx - 1, X.cells[dx - 1][i])]][j] += ba[i][ja]
            else:
                _, dx, a = label
                ja = X.cell_index(dx, a)
                if dx > 0:
                    ba = X.boundary(dx)
                    for i in range(X.ncells(dx - 1)):
                        if ba[i][ja]:
                            m[index[d - 1][("cp", dx - 1, X.cells[dx - 1][i])]][j] += ba[i][ja]
                sign = (-1) ** dx
                fm = f.matrix(dx)
                for i in range(Y.ncells(dx)):
                    if fm[i][ja]:
                        m[index[d - 1][("cy", dx, Y.cells[dx][i])]][j] += sign * fm[i][ja]
                m[index[d - 1][("cx", dx, a)]][j] -= sign
        boundaries.append(m)
    return CellComplex(cells, boundaries)


def mapping_cone(f):
    """Cone of f: X -> Y: the cylinder with the free X end collapsed."""
    X, Y = f.src, f.dst
    dim = max(X.dimension + 1, Y.dimension)
    cells = [[] for _ in range(dim + 1)]
    cells[0].append(("cpt",))
    for d in range(Y.dimension + 1):
        cells[d].extend(("cy", d, b) for b in Y.cells[d])
    for d in range(X.dimension + 1):
        cells[d + 1].extend(("cp", d, a) for a in X.cells[d])
    index = [{label: i for i, label in enumerate(cs)} for cs in cells]
    boundaries = []
    for d in range(1, dim + 1):
        m = [[0] * len(cells[d]) for _ in range(len(cells[d - 1]))]
        for j, label in enumerate(cells[d]):
            tag = label[0]
            if tag == "cy":
                _, dy, b = label
                bb = Y.boundary(dy)
                jb = Y.cell_index(dy, b)
                for i in range(Y.ncells(dy - 1)):
                    if bb[i][jb]:
                        m[index[d - 1][("cy", dy - 1, Y.cells[dy - 1][i])]][j] += bb[i][jb]
            elif tag == "cp":
                _, dx, a = label
                ja = X.cell_index(dx, a)
                if dx > 0:
                    ba = X.boundary(dx)
                    for i in range(X.ncells(dx - 1)):
                        if ba[i][ja]:
                            m[index[d - 1][("cp", dx - 1, X.cells[dx - 1][i])]][j] += ba[i][ja]
                sign = (-1) ** dx
                fm = f.matrix(dx)
                for i in range(Y.ncells(dx)):
                    if fm[i][ja]:
                        m[index[d - 1][("cy", dx, Y.cells[dx][i])]][j] += sign * fm[i][ja]
                if dx == 0:
                    m[index[d - 1][("cpt",)]][j] -= sign
        boundaries.append(m)
    return CellComplex(cells, boundaries)


def double_mapping_cylinder(f, g):
    """Homotopy push-out of Y <-f- X -g-> Z."""
    if f.src is not g.src:
        raise NotCellular("double cylinder needs a common source complex")
    X, Y, Z = f.src, f.dst, g.dst
    dim = max(X.dimension + 1, Y.dimension, Z.dimension)
    cells = [[] for _ in range(dim + 1)]
    for d in range(Y.dimension + 1):
        cells[d].extend(("dy", d, b) for b in Y.cells[d])
    for d in range(Z.dimension + 1):
        cells[d].extend(("dz", d, c) for c in Z.cells[d])
    for d in range(X.dimension + 1):
        cells[d + 1].extend(("dp", d, a) for a in X.cells[d])
    index = [{label: i for i, label in enumerate(cs)} for cs in cells]
    boundaries = []
    for d in range(1, dim + 1):
        m = [[0] * len(cells[d]) for _ in range(len(cells[d - 1]))]
        for j, label in enumerate(cells[d]):
            tag = label[0]
            if tag == "dy":
                _, dy, b = label
                bb = Y.boundary(dy)
                jb = Y.cell_index(dy, b)
                for i in range(Y.ncells(dy - 1)):
                    if bb[i][jb]:
                        m[index[d - 1][("dy", dy - 1, Y.cells[dy - 1][i])]][j] += bb[i][jb]
            elif tag == "dz":
                _, dz, c = label
                bz = Z.boundary(dz)
                jc = Z.cell_index(dz, c)
                for i in range(Z.ncells(dz - 1)):
                    if bz[i][jc]:
                        m[index[d - 1][("dz", dz - 1, Z.cells[dz - 1][i])]][j] += bz[i][jc]
            else:
                _, dx, a = label
                ja = X.cell_index(dx, a)
                if dx > 0:
                    ba = X.boundary(dx)
                    for i in range(X.ncells(dx - 1)):
                        if ba[i][ja]:
                            m[index[d - 1][("dp", dx - 1, X.cells[dx - 1][i])]][j] += ba[i][ja]
                sign = (-1) ** dx
                gm = g.matrix(dx)
                for i in range(Z.ncells(dx)):
                    if gm[i][ja]:
                        m[index[d - 1][("dz", dx, Z.cells[dx][i])]][j] += sign * gm[i][ja]
                fm = f.matrix(dx)
                for i in range(Y.ncells(dx)):
                    if fm[i][ja]:
                        m[index[d - 1][("dy", dx, Y.cells[dx][i])]][j] -= sign * fm[i][ja]
        boundaries.append(m)
    return CellComplex(cells, boundaries)


def subcomplex(X, labels_per_dim):
    """The subcomplex on the given cell labels; raises NotSubcomplex if the
    selection is not closed under boundaries."""
    sel = [set(labels_per_dim[d]) if d < len(labels_per_dim) else set()
           for d in range(X.dimension + 1)]
    cells = [[a for a in X.cells[d] if a in sel[d]] for d in range(X.dimension + 1)]
    for d in range(1, X.dimension + 1):
        b = X.boundary(d)
        for a in cells[d]:
            j = X.cell_index(d, a)
            for i in range(X.ncells(d - 1)):
                if b[i][j] and X.cells[d - 1][i] not in sel[d - 1]:
                    raise NotSubcomplex(f"boundary of {a} leaves the selection")
    boundaries = []
    for d in range(1, len(cells)):
        m = [[0] * len(cells[d]) for _ in range(len(cells[d - 1]))]
        b = X.boundary(d)
        for jj, a in enumerate(cells[d]):
            j = X.cell_index(d, a)
            for ii, c in enumerate(cells[d - 1]):
                m[ii][jj] = b[X.cell_index(d - 1, c)][j]
        boundaries.append(m)
    return CellComplex(cells, boundaries)


def pushout(X, A, f):
    """Push-out of X <- A -> Y where A is a subcomplex of X (label-matched)
    and f: A -> Y is cellular.  Cells: Y plus X-minus-A."""
    Y = f.dst
    if f.src is not A:
        raise NotCellular("map source must be the designated subcomplex")
    a_sets = [set(A.cells[d]) if d <= A.dimension else set()
              for d in range(X.dimension + 1)]
    for d in range(A.dimension + 1):
        for a in A.cells[d]:
            if d >= len(X.cells) or a not in X._index[d]:
                raise NotSubcomplex("subcomplex cells must be cells of X")
    dim = max(X.dimension, Y.dimension)
    cells = [[] for _ in range(dim + 1)]
    for d in range(Y.dimension + 1):
        cells[d].extend(("py", d, b) for b in Y.cells[d])
    for d in range(X.dimension + 1):
        cells[d].extend(("px", d, a) for a in X.cells[d] if a not in a_sets[d])
    index = [{label: i for i, label in enumerate(cs)} for cs in cells]
    boundaries = []
    for d in range(1, dim + 1):
        m = [[0] * len(cells[d]) for _ in range(len(cells[d - 1]))]
        for j, label in enumerate(cells[d]):
            tag = label[0]
            if tag == "py":
                _, dy, b = label
                bb = Y.boundary(dy)
                jb = Y.cell_index(dy, b)
                for i in range(Y.ncells(dy - 1)):
                    if bb[i][jb]:
                        m[index[d - 1][("py", dy - 1, Y.cells[dy - 1][i])]][j] += bb[i][jb]
            else:
                _, dx, a = label
                bx = X.boundary(dx)
                ja = X.cell_index(dx, a)
                for i in range(X.ncells(dx - 1)):
                    coeff = bx[i][ja]
                    if not coeff:
                        continue
                    c = X.cells[dx - 1][i]
                    if c in a_sets[dx - 1]:
                        # route through f at the A-cell
                        fa = f.matrix(dx - 1)
                        ia = A.cell_index(dx - 1, c)
                        for iy in range(Y.ncells(dx - 1)):
                            if fa[iy][ia]:
                                lbl = ("py", dx - 1, Y.cells[dx - 1][iy])
                                m[index[d - 1][lbl]][j] += coeff * fa[iy][ia]
                    else:
                        m[index[d - 1][("px", dx - 1, c)]][j] += coeff
        boundaries.append(m)
    return CellComplex(cells, boundaries)
