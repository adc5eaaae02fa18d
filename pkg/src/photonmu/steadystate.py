"""Stationary solutions of the population rate equation and their observables."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.csgraph import connected_components

from .errors import DegeneracyError, SolverError
from .hamiltonian import EigenSystem
from .rates import RateMatrix


@dataclass(frozen=True)
class SteadyState:
    """Normalized stationary populations over energy eigenstates and the
    residual max|W p| the solver achieved."""

    populations: np.ndarray
    residual: float


def _closed_classes(w: np.ndarray) -> list[np.ndarray]:
    """Communicating classes of the transition graph that no rate leaves.

    The stationary space of a generator has one dimension per closed class,
    so more than one closed class means the steady state is not unique.
    """
    support = sparse.csr_matrix((w > 0).astype(np.int8))
    n_comp, labels = connected_components(support, directed=True, connection="strong")
    closed = []
    off = w.copy()
    np.fill_diagonal(off, 0.0)
    for c in range(n_comp):
        members = np.flatnonzero(labels == c)
        outside = np.setdiff1d(np.arange(w.shape[0]), members, assume_unique=False)
        if outside.size == 0 or off[np.ix_(outside, members)].max(initial=0.0) == 0.0:
            closed.append(members)
    return closed


def solve_steady(rates: RateMatrix, tol: float = 1e-11) -> SteadyState:
    """Normalized null vector of the rate matrix via least squares.

    The zero-row-sum system is augmented with the normalization row, which
    stays well behaved even when the spectral gap of W is tiny (deep in the
    low-temperature regime).  Raises DegeneracyError when the transition
    graph has more than one closed class and SolverError when the residual
    target is missed or negative populations exceed round-off size.
    """
    w = rates.matrix
    dim = w.shape[0]
    closed = _closed_classes(w)
    if len(closed) > 1:
        preview = "; ".join(str(list(c[:8])) for c in closed[:4])
        raise DegeneracyError(
            f"stationary state is not unique: {len(closed)} disconnected "
            f"components of the transition graph (members: {preview})",
            components=closed,
        )

    aug = np.vstack([w, np.ones((1, dim))])
    b = np.zeros(dim + 1)
    b[-1] = 1.0
    p, *_ = np.linalg.lstsq(aug, b, rcond=None)

    if p.min() < -1e-12:
        raise SolverError(
            f"steady-state solve produced negative population {p.min():.3e}",
            residual=float(np.abs(w @ p).max()),
        )
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    residual = float(np.abs(w @ p).max())
    if residual > tol:
        raise SolverError(
            f"steady-state residual {residual:.3e} exceeds tolerance {tol:.1e}",
            residual=residual,
        )
    return SteadyState(populations=p, residual=residual)


def grand_canonical(eig: EigenSystem, beta: float) -> np.ndarray:
    """Gibbs weights exp(-beta*eps_k), normalized.

    The eigenvalues are rotating-frame energies (the -mu*N term is already
    inside them), so this is the grand-canonical reference distribution.
    beta = inf puts all weight on the ground state, split over exact ties.
    """
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    eps = eig.energies
    if math.isinf(beta):
        lowest = eps.min()
        scale = max(1.0, abs(lowest))
        p = (eps - lowest <= 1e-12 * scale).astype(np.float64)
    else:
        p = np.exp(-beta * (eps - eps.min()))
    return p / p.sum()


def mandel_q(state: SteadyState, eig: EigenSystem, number_ops: list) -> float:
    """Site-averaged Mandel Q = (<n^2> - <n>^2 - <n>)/<n>.

    Q is formed per site from eigenbasis diagonal moments and then averaged;
    -1 for a pure Fock state, 0 for Poissonian occupation statistics.
    """
    p = state.populations
    weights2 = np.abs(eig.vectors) ** 2  # |<fock f|eig k>|^2
    qs = []
    for op in number_ops:
        occ = np.asarray(op.diagonal()).ravel()
        n_k = occ @ weights2
        n2_k = (occ**2) @ weights2
        mean_n = float(p @ n_k)
        mean_n2 = float(p @ n2_k)
        if mean_n <= 0.0:
            raise ValueError("Mandel Q is undefined at <n> = 0")
        qs.append((mean_n2 - mean_n**2 - mean_n) / mean_n)
    return float(np.mean(qs))


def coherence(
    state: SteadyState, eig: EigenSystem, ladder_ops: list, edges
) -> float:
    """Edge-averaged single-particle coherence sqrt(|<a_i^dag a_j>|).

    The square root is taken per edge and the results averaged, which on an
    edge-transitive lattice coincides with any other ordering convention.
    """
    if not edges:
        raise ValueError("coherence needs at least one lattice edge")
    p = state.populations
    v = eig.vectors
    av = [op @ v for op in ladder_ops]
    vals = []
    for i, j in edges:
        per_state = np.einsum("fk,fk->k", av[i].conj(), av[j])
        vals.append(math.sqrt(abs(complex(p @ per_state))))
    return float(np.mean(vals))
