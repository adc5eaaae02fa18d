"""Rotating-frame Bose-Hubbard Hamiltonian and its number-resolved eigensystem.

H = sum_i [U/2 n_i(n_i-1) - mu n_i] - J sum_<ij> (a_i^dag a_j + a_j^dag a_i)

The on-site part already contains -mu*N, so eigenvalues are rotating-frame
energies and thermal weights exp(-beta*eps) are grand-canonical weights.
H commutes with the total number N; eigenvectors are post-rotated inside
degenerate energy clusters so every one carries a definite integer photon
number, which the golden-rule rate construction requires.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sparse

from .errors import ConsistencyError
from .fock import FockBasis, annihilation, number_operator

DENSE_DIMENSION_LIMIT = 4096


@dataclass(frozen=True)
class LatticeSpec:
    """Lattice geometry plus the three Bose-Hubbard couplings (energies in units of U_ref)."""

    n_sites: int
    edges: tuple
    U: float
    mu: float
    J: float

    def __post_init__(self):
        seen = set()
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"edge {e} is not a pair")
            i, j = e
            if i == j:
                raise ValueError(f"self-loop edge {e}")
            if not (0 <= i < self.n_sites and 0 <= j < self.n_sites):
                raise ValueError(f"edge {e} references a site outside 0..{self.n_sites - 1}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(key)


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues, orthonormal eigenvectors (columns), and the
    integer total photon number of each eigenstate."""

    energies: np.ndarray
    vectors: np.ndarray = field(repr=False)
    photon_number: np.ndarray

    @property
    def dim(self) -> int:
        return self.energies.size


def ring_lattice(n_sites: int) -> tuple:
    """Nearest-neighbour edges of a periodic ring; two sites give a single bond."""
    if n_sites < 2:
        raise ValueError(f"a ring needs at least 2 sites, got {n_sites}")
    if n_sites == 2:
        return ((0, 1),)
    return tuple((i, (i + 1) % n_sites) for i in range(n_sites))


def bose_hubbard(basis: FockBasis, spec: LatticeSpec) -> sparse.csr_matrix:
    """Sparse Bose-Hubbard Hamiltonian on the given basis (both hopping directions)."""
    if basis.n_sites != spec.n_sites:
        raise ValueError(
            f"basis has {basis.n_sites} sites but lattice spec has {spec.n_sites}"
        )
    occ = basis.occupations().astype(np.float64)
    onsite = (spec.U / 2.0 * (occ * (occ - 1.0)) - spec.mu * occ).sum(axis=1)
    h = sparse.diags(onsite, format="csr")
    if spec.J != 0.0 and spec.edges:
        hop = sparse.csr_matrix((basis.dim, basis.dim), dtype=np.float64)
        for i, j in spec.edges:
            a_i = annihilation(basis, i)
            a_j = annihilation(basis, j)
            hop = hop + a_i.T @ a_j
        h = h - spec.J * (hop + hop.T)
    return h.tocsr()


def _energy_clusters(energies: np.ndarray, tol: float) -> list[slice]:
    """Split an ascending energy list into clusters of width <= tol between neighbours."""
    clusters = []
    start = 0
    for k in range(1, energies.size):
        if energies[k] - energies[k - 1] > tol:
            clusters.append(slice(start, k))
            start = k
    clusters.append(slice(start, energies.size))
    return clusters


def diagonalize(
    h: sparse.spmatrix,
    n_op: sparse.spmatrix,
    cluster_rtol: float = 1e-9,
    commute_tol: float = 1e-10,
    number_tol: float = 1e-8,
) -> EigenSystem:
    """Dense diagonalization of H with simultaneous number labelling.

    Parameters
    ----------
    h : Hermitian Hamiltonian (sparse or dense).
    n_op : total-number operator; must commute with h to commute_tol.
    cluster_rtol : degenerate clusters are groups of eigenvalues closer than
        cluster_rtol * max|eps|; the number operator is re-diagonalized inside
        each cluster so eigenvectors carry sharp photon numbers.

    Raises
    ------
    ConsistencyError if [h, n_op] is not numerically zero (the rotating-frame
    reduction assumed a number-conserving system part) or if an eigenvector
    fails to be a number eigenstate to number_tol after the cluster rotation.
    """
    h = sparse.csr_matrix(h)
    n_op = sparse.csr_matrix(n_op)
    if h.shape != n_op.shape:
        raise ValueError(f"shape mismatch: H {h.shape} vs N {n_op.shape}")
    comm = (h @ n_op - n_op @ h)
    comm_scale = max(1.0, float(abs(h).max()) * float(abs(n_op).max()))
    if comm.nnz and abs(comm).max() > commute_tol * comm_scale:
        raise ConsistencyError(
            "Hamiltonian does not commute with the number operator "
            f"(max |[H,N]| = {abs(comm).max():.3e}); "
            "number-non-conserving terms must be dropped before rate building"
        )

    dense = h.toarray()
    herm_err = np.abs(dense - dense.conj().T).max()
    if herm_err > 1e-12 * max(1.0, np.abs(dense).max()):
        raise ConsistencyError(f"Hamiltonian is not Hermitian (asymmetry {herm_err:.3e})")

    energies, vectors = np.linalg.eigh(dense)

    n_dense = n_op.toarray()
    tol = cluster_rtol * max(1.0, np.abs(energies).max())
    for cl in _energy_clusters(energies, tol):
        width = cl.stop - cl.start
        if width == 1:
            continue
        block = vectors[:, cl]
        n_block = block.conj().T @ n_dense @ block
        n_block = 0.5 * (n_block + n_block.conj().T)
        n_vals, rot = np.linalg.eigh(n_block)
        order = np.argsort(n_vals, kind="stable")
        vectors[:, cl] = block @ rot[:, order]

    n_exp = np.einsum("ik,ik->k", vectors.conj(), n_dense @ vectors).real
    photon_number = np.rint(n_exp).astype(np.int64)
    resid = n_dense @ vectors - vectors * photon_number[np.newaxis, :]
    worst = np.abs(resid).max()
    if worst > number_tol:
        raise ConsistencyError(
            f"eigenvectors are not number eigenstates (max residual {worst:.3e}); "
            "degenerate-cluster tolerance may need adjusting"
        )
    return EigenSystem(energies=energies, vectors=vectors, photon_number=photon_number)
