"""Truncated many-boson Fock spaces and sparse ladder operators.

Sites carry occupations 0..n_max; the full space is the tensor product over
sites, enumerated lexicographically so that state ordering (and hence every
matrix built on top of it) is reproducible run to run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sparse

from .errors import CapacityError

DEFAULT_DIMENSION_CAP = 1_000_000


@dataclass(frozen=True)
class FockBasis:
    """Occupation-number basis of an L-site lattice truncated at n_max per site.

    states[k] is the occupation tuple of basis state k; index is its inverse.
    """

    n_sites: int
    n_max: int
    states: tuple = field(repr=False)
    index: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def occupations(self) -> np.ndarray:
        """(dim, n_sites) integer array of occupations, row k = state k."""
        return np.array(self.states, dtype=np.int64)


def build_basis(n_sites: int, n_max: int, max_dim: int = DEFAULT_DIMENSION_CAP) -> FockBasis:
    """Enumerate all occupation vectors of n_sites sites with 0..n_max bosons each.

    Raises CapacityError if (n_max+1)**n_sites exceeds max_dim.
    """
    if n_sites < 1:
        raise ValueError(f"n_sites must be >= 1, got {n_sites}")
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    dim = (n_max + 1) ** n_sites
    if dim > max_dim:
        raise CapacityError(
            f"requested basis dimension {dim} exceeds cap {max_dim} "
            f"(n_sites={n_sites}, n_max={n_max})"
        )
    states = tuple(itertools.product(range(n_max + 1), repeat=n_sites))
    index = {s: k for k, s in enumerate(states)}
    return FockBasis(n_sites=n_sites, n_max=n_max, states=states, index=index)


def _check_site(basis: FockBasis, site: int) -> None:
    if not 0 <= site < basis.n_sites:
        raise IndexError(f"site {site} out of range for {basis.n_sites} sites")


def annihilation(basis: FockBasis, site: int) -> sparse.csr_matrix:
    """Sparse annihilation operator a_site: a|..n..> = sqrt(n)|..n-1..>.

    The adjoint (creation) truncates at n_max: a^dag applied at n_max gives zero.
    """
    _check_site(basis, site)
    rows, cols, vals = [], [], []
    for k, occ in enumerate(basis.states):
        n = occ[site]
        if n == 0:
            continue
        target = list(occ)
        target[site] = n - 1
        rows.append(basis.index[tuple(target)])
        cols.append(k)
        vals.append(np.sqrt(n))
    mat = sparse.csr_matrix(
        (vals, (rows, cols)), shape=(basis.dim, basis.dim), dtype=np.float64
    )
    mat.eliminate_zeros()
    return mat


def creation(basis: FockBasis, site: int) -> sparse.csr_matrix:
    """Sparse creation operator, the transpose of annihilation (real entries)."""
    return annihilation(basis, site).T.tocsr()


def number_operator(basis: FockBasis, site: int | None = None) -> sparse.csr_matrix:
    """Diagonal occupation operator n_site, or the total number N when site is None."""
    occ = basis.occupations()
    if site is None:
        diag = occ.sum(axis=1).astype(np.float64)
    else:
        _check_site(basis, site)
        diag = occ[:, site].astype(np.float64)
    return sparse.diags(diag, format="csr")


def ladder_operators(basis: FockBasis) -> list[sparse.csr_matrix]:
    """Annihilation operators for every site, in site order."""
    return [annihilation(basis, i) for i in range(basis.n_sites)]
