"""Golden-rule transition rates between number-resolved energy eigenstates.

Two channels feed the rate matrix:

* an Ohmic parametric bath with coupling gamma = gamma0*|de|/U_ref at
  transition energy de, thermally occupied at inverse temperature beta
  (absorption goes with N_th, emission with N_th + 1);
* a flat high-frequency loss bath of rate kappa that only removes photons.

Both channels act through single-photon matrix elements, so rates connect
eigenstates whose total photon numbers differ by exactly one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hamiltonian import EigenSystem


@dataclass(frozen=True)
class BathParams:
    """Coupling strengths and temperature of the two baths.

    gamma0: overall parametric coupling (energy); kappa: photon loss rate;
    beta: inverse temperature of the parametric bath; U_ref: energy unit in
    gamma = gamma0*|de|/U_ref.
    """

    gamma0: float
    kappa: float
    beta: float
    U_ref: float = 1.0

    def __post_init__(self):
        if self.gamma0 < 0:
            raise ValueError(f"gamma0 must be >= 0, got {self.gamma0}")
        if self.kappa < 0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if not self.U_ref > 0:
            raise ValueError(f"U_ref must be > 0, got {self.U_ref}")


@dataclass(frozen=True)
class RateMatrix:
    """Classical generator W of the population rate equation.

    W[l, k] >= 0 for l != k is the rate from eigenstate k to l; diagonal
    entries hold minus the column outflow so every column sums to zero.
    """

    matrix: np.ndarray
    photon_number: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def n_th(beta: float, nu) -> float | np.ndarray:
    """Bose occupancy 1/(exp(beta*nu) - 1); returns +inf at nu = 0.

    The infinity is a sentinel consumed only inside ohmic_weight, where the
    vanishing Ohmic density of states cancels it.
    """
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    arr = np.asarray(nu, dtype=np.float64)
    if np.any(arr < 0):
        raise ValueError("nu must be >= 0")
    with np.errstate(divide="ignore"):
        out = 1.0 / np.expm1(beta * arr)
    if np.isscalar(nu) or arr.ndim == 0:
        return float(out)
    return out


def ohmic_weight(
    beta: float, delta: float, gamma0: float, U_ref: float = 1.0
) -> tuple[float, float]:
    """Uphill/downhill golden-rule rates for a transition of energy |delta|.

    Returns (rate_absorb, rate_emit) = gamma*(N_th, N_th+1) with
    gamma = gamma0*|delta|/U_ref.  At delta = 0 both equal the analytic
    limit gamma0/(beta*U_ref), since nu*N_th(nu) -> 1/beta.
    """
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    mag = abs(delta)
    if mag == 0.0:
        limit = gamma0 / (beta * U_ref)
        return limit, limit
    gamma = gamma0 * mag / U_ref
    occ = 1.0 / math.expm1(beta * mag)
    return gamma * occ, gamma * (occ + 1.0)


def _thermal_rate_grid(de: np.ndarray, params: BathParams) -> np.ndarray:
    """gamma(|de|) * (N_th(|de|) + Theta(de)) elementwise, with the de -> 0
    limit gamma0/(beta*U_ref) used on exact degeneracies (Theta(0) = 1/2
    keeps the two directions equal there)."""
    mag = np.abs(de)
    gamma = params.gamma0 * mag / params.U_ref
    with np.errstate(divide="ignore", invalid="ignore"):
        occ_part = gamma / np.expm1(params.beta * mag)
    theta = np.where(de > 0, 1.0, 0.0)
    out = np.where(
        mag == 0.0,
        params.gamma0 / (params.beta * params.U_ref),
        occ_part + gamma * theta,
    )
    return out


def build_rates(
    eig: EigenSystem, ladder_ops: list, params: BathParams
) -> RateMatrix:
    """Assemble the full rate matrix over energy eigenstates.

    For states with N_l = N_k + 1 the rate k -> l is
        gamma*(N_th + Theta(eps_k - eps_l)) * sum_i |<l|a_i^dag|k>|^2,
    for N_l = N_k - 1 the loss channel adds kappa:
        [gamma*(N_th + Theta(eps_k - eps_l)) + kappa] * sum_i |<l|a_i|k>|^2.
    """
    dim = eig.dim
    if any(op.shape != (dim, dim) for op in ladder_ops):
        raise ValueError("ladder operator dimensions do not match the eigensystem")

    v = eig.vectors
    # p[k, l] = sum_i |<k|a_i|l>|^2, nonzero only for N_k = N_l - 1
    p = np.zeros((dim, dim))
    for op in ladder_ops:
        a_eig = v.conj().T @ (op @ v)
        p += np.abs(a_eig) ** 2

    de = eig.energies[np.newaxis, :] - eig.energies[:, np.newaxis]  # de[l,k] = eps_k - eps_l
    g = _thermal_rate_grid(de, params)

    dn = eig.photon_number[:, np.newaxis] - eig.photon_number[np.newaxis, :]  # N_l - N_k
    w = np.zeros((dim, dim))
    up = dn == 1
    down = dn == -1
    w[up] = (g * p.T)[up]
    w[down] = ((g + params.kappa) * p)[down]

    np.fill_diagonal(w, 0.0)
    np.fill_diagonal(w, -w.sum(axis=0))
    return RateMatrix(matrix=w, photon_number=eig.photon_number.copy())
