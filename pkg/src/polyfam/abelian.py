"""Finitely generated abelian groups and (co)chain complex homology.

Groups are recorded as (free rank, invariant factors d1 | d2 | ..., all >= 2).
Complexes may carry relation matrices per degree so that torsion coefficient
groups are supported: degree i is presented as Z^{m_i} / column-span(R_i).
"""

from dataclasses import dataclass

from . import intlin


@dataclass(frozen=True)
class FGAbelian:
    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must divide in order")
        if any(d < 2 for d in self.torsion):
            raise ValueError("invariant factors must be >= 2")

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"C{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["rank"]), tuple(int(d) for d in data.get("torsion", ())))


def from_quotient(numerator_basis, denominator_basis):
    """FGAbelian for (lattice K)/(sublattice D), both HNF column bases."""
    rk = intlin.lattice_rank(numerator_basis)
    if rk == 0:
        return FGAbelian(0)
    coords = []
    for col in intlin.columns(denominator_basis):
        sol = intlin.solve_integer(numerator_basis, col)
        if sol is None:
            raise ValueError("denominator not contained in numerator")
        coords.append(sol)
    X = intlin.from_columns(coords, nrows=rk)
    free, torsion = intlin.cokernel_invariants(X, rk)
    # normalise invariant factor ordering d1 | d2 | ...
    torsion = tuple(sorted(torsion))
    return FGAbelian(free, torsion)


def cohomology_groups(diffs, ranks, relations=None):
    """Cohomology of 0 -> C^0 -> C^1 -> ... given differential matrices.

    diffs[i] maps C^i -> C^{i+1} (matrix ranks[i+1] x ranks[i]); len(diffs)
    = len(ranks) - 1.  relations[i], when given, presents C^i as
    Z^{ranks[i]} / column-span(relations[i]).  Returns [FGAbelian] per degree.
    """
    n = len(ranks)
    if relations is None:
        relations = [None] * n
    out = []
    for i in range(n):
        m = ranks[i]
        d_in = diffs[i - 1] if i > 0 else None
        d_out = diffs[i] if i < n - 1 else None
        rel_here = relations[i]
        rel_next = relations[i + 1] if i < n - 1 else None
        # numerator: {x : d_out x in im(rel_next)} (all of Z^m when d_out absent)
        if d_out is None or (i < n - 1 and ranks[i + 1] == 0):
            numer = intlin.lattice_basis(
                intlin.columns(intlin.identity_matrix(m)), m)
        else:
            s = intlin.lattice_rank(rel_next) if rel_next else 0
            stacked = [
                [d_out[r][c] for c in range(m)]
                + ([-rel_next[r][c] for c in range(s)] if s else [])
                for r in range(ranks[i + 1])
            ]
            kern = intlin.kernel_basis(stacked)
            numer = intlin.lattice_basis([v[:m] for v in kern], m)
        # denominator: im(d_in) + im(rel_here)
        den_cols = []
        if d_in is not None:
            den_cols.extend(intlin.columns(d_in))
        if rel_here:
            den_cols.extend(intlin.columns(rel_here))
        denom = intlin.lattice_basis(den_cols, m)
        if not intlin.lattice_contains(numer, denom):
            raise ValueError("not a complex: image escapes kernel")
        out.append(from_quotient(numer, denom))
    return out


def homology_groups(boundaries, ranks):
    """Homology of ... -> C_1 -> C_0 -> 0; boundaries[k]: C_k -> C_{k-1}."""
    n = len(ranks)
    out = []
    for k in range(n):
        m = ranks[k]
        if m == 0:
            out.append(FGAbelian(0))
            continue
        d_out = boundaries[k] if k > 0 else None  # C_k -> C_{k-1}
        d_in = boundaries[k + 1] if k + 1 < n else None  # C_{k+1} -> C_k
        if d_out is None or ranks[k - 1] == 0:
            numer = intlin.lattice_basis(
                intlin.columns(intlin.identity_matrix(m)), m)
        else:
            numer = intlin.lattice_basis(intlin.kernel_basis(d_out), m)
        den_cols = intlin.columns(d_in) if (d_in is not None and ranks[k + 1] > 0) else []
        denom = intlin.lattice_basis(den_cols, m)
        if not intlin.lattice_contains(numer, denom):
            raise ValueError("not a complex: boundary squared nonzero")
        out.append(from_quotient(numer, denom))
    return out


def cohomology_from_homology(homology):
    """Integral cohomology via universal coefficients: free part of H_n plus
    torsion of H_{n-1}."""
    out = []
    for n, hn in enumerate(homology):
        torsion = homology[n - 1].torsion if n > 0 else ()
        out.append(FGAbelian(hn.rank, torsion))
    return out
