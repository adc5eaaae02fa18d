"""Discrete-mode approximations of continuum baths via Gaussian quadrature.

A continuum spectral density J(w) with cutoff profile f(w) is replaced by N
modes at the Gauss nodes of the orthogonal polynomials of weight f, with
couplings g_j = sqrt(w_j * J(omega_j) / f(omega_j)).  Two families:

* ohmic_exponential: J(w) = w*exp(-w/nu_c); Laguerre nodes scaled by nu_c.
* ohmic_rc_filtered: J(w) = w/(1 + w^2 tau_rc^2) on a hard interval
  [0, omega_cutoff]; Legendre nodes with the low-pass filter absorbed into
  the couplings (tau_rc = 0 turns the filter off).

Nodes and weights come from the Golub-Welsch symmetric tridiagonal
eigenproblem with analytic recurrence coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal

from .errors import CapacityError, IntegrationError

QUADRATURE_ORDER_CAP = 512

OHMIC_EXPONENTIAL = "ohmic_exponential"
OHMIC_RC_FILTERED = "ohmic_rc_filtered"


@dataclass(frozen=True)
class SpectralDensity:
    """Continuum bath family plus its scale parameters."""

    family: str
    nu_c: float | None = None
    tau_rc: float | None = None
    omega_cutoff: float | None = None

    def __post_init__(self):
        if self.family == OHMIC_EXPONENTIAL:
            if self.nu_c is None or not self.nu_c > 0:
                raise ValueError("ohmic_exponential needs a cutoff nu_c > 0")
        elif self.family == OHMIC_RC_FILTERED:
            if self.omega_cutoff is None or not self.omega_cutoff > 0:
                raise ValueError("ohmic_rc_filtered needs omega_cutoff > 0")
            if self.tau_rc is None or self.tau_rc < 0:
                raise ValueError("ohmic_rc_filtered needs tau_rc >= 0 (0 = filter off)")
        else:
            raise ValueError(f"unknown spectral density family {self.family!r}")

    @staticmethod
    def ohmic_exponential(nu_c: float) -> "SpectralDensity":
        return SpectralDensity(family=OHMIC_EXPONENTIAL, nu_c=nu_c)

    @staticmethod
    def ohmic_rc_filtered(tau_rc: float, omega_cutoff: float) -> "SpectralDensity":
        return SpectralDensity(
            family=OHMIC_RC_FILTERED, tau_rc=tau_rc, omega_cutoff=omega_cutoff
        )

    def density(self, omega):
        """Spectral density J(omega)."""
        omega = np.asarray(omega, dtype=np.float64)
        if self.family == OHMIC_EXPONENTIAL:
            out = omega * np.exp(-omega / self.nu_c)
        else:
            out = omega / (1.0 + (omega * self.tau_rc) ** 2)
            out = np.where(omega > self.omega_cutoff, 0.0, out)
        return out if out.ndim else float(out)

    def quadrature_weight(self, omega):
        """Weight function f(omega) the Gauss rule is built for."""
        omega = np.asarray(omega, dtype=np.float64)
        if self.family == OHMIC_EXPONENTIAL:
            out = np.exp(-omega / self.nu_c)
        else:
            out = np.ones_like(omega)
        return out if out.ndim else float(out)

    def upper_limit(self) -> float:
        """Upper integration limit (inf for the exponential family)."""
        return math.inf if self.family == OHMIC_EXPONENTIAL else self.omega_cutoff


@dataclass(frozen=True)
class DiscreteBath:
    """Discrete modes (omega_j, w_j, g_j) standing in for a continuum bath."""

    omegas: np.ndarray
    weights: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.omegas) <= 0):
            raise ValueError("mode frequencies must be strictly increasing")
        if np.any(self.g < 0):
            raise ValueError("couplings must be non-negative")

    @property
    def n_modes(self) -> int:
        return self.omegas.size

    def subset(self, mask) -> "DiscreteBath":
        return DiscreteBath(
            omegas=self.omegas[mask], weights=self.weights[mask], g=self.g[mask]
        )


def _golub_welsch(alpha: np.ndarray, beta: np.ndarray, mass: float):
    """Nodes and weights from three-term recurrence coefficients.

    alpha are diagonal coefficients, beta the squared off-diagonal ones
    (beta[0] unused), mass the total integral of the weight function.
    """
    nodes, vecs = eigh_tridiagonal(alpha, np.sqrt(beta[1:]))
    weights = mass * vecs[0, :] ** 2
    return nodes, weights


def quadrature(n: int, sd: SpectralDensity, order_cap: int = QUADRATURE_ORDER_CAP):
    """N-point Gauss nodes and weights for the density's weight function.

    Exponential-cutoff family: Laguerre rule scaled so the weight is
    exp(-w/nu_c) on [0, inf).  Filtered family: Legendre rule mapped onto
    [0, omega_cutoff] with unit weight.
    """
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    if n > order_cap:
        raise CapacityError(f"quadrature order {n} exceeds cap {order_cap}")
    k = np.arange(n, dtype=np.float64)
    if sd.family == OHMIC_EXPONENTIAL:
        alpha = 2.0 * k + 1.0
        beta = np.concatenate(([0.0], k[1:] ** 2))
        nodes, weights = _golub_welsch(alpha, beta, mass=1.0)
        return nodes * sd.nu_c, weights * sd.nu_c
    alpha = np.zeros(n)
    ks = k[1:]
    beta = np.concatenate(([0.0], ks**2 / ((2.0 * ks - 1.0) * (2.0 * ks + 1.0))))
    nodes, weights = _golub_welsch(alpha, beta, mass=2.0)
    half = 0.5 * sd.omega_cutoff
    return (nodes + 1.0) * half, weights * half


def couplings(nodes: np.ndarray, weights: np.ndarray, sd: SpectralDensity) -> DiscreteBath:
    """Synthesize mode couplings g_j = sqrt(w_j J(omega_j)/f(omega_j))."""
    nodes = np.asarray(nodes, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if np.any(nodes <= 0):
        raise ValueError("all nodes must be positive")
    g2 = weights * np.asarray(sd.density(nodes)) / np.asarray(sd.quadrature_weight(nodes))
    return DiscreteBath(omegas=nodes, weights=weights, g=np.sqrt(g2))


def discretize(n: int, sd: SpectralDensity) -> DiscreteBath:
    """Quadrature plus coupling synthesis in one step."""
    nodes, weights = quadrature(n, sd)
    return couplings(nodes, weights, sd)


def _thermal_factors(beta, omegas):
    if beta is None or math.isinf(beta):
        return np.zeros_like(omegas)
    if not beta > 0:
        raise ValueError(f"beta must be > 0 (or inf/None for zero temperature), got {beta}")
    return 1.0 / np.expm1(beta * omegas)


def correlation(bath: DiscreteBath, beta, t):
    """Discrete bath correlation function

        S(t) = (1/pi) sum_j g_j^2 [(N_th(w_j)+1) e^{-i w_j t} + N_th(w_j) e^{i w_j t}].

    beta = None or inf means a zero-temperature bath.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    occ = _thermal_factors(beta, bath.omegas)
    g2 = bath.g**2 / math.pi
    phases = np.exp(-1j * np.outer(t_arr, bath.omegas))
    vals = phases @ (g2 * (occ + 1.0)) + phases.conj() @ (g2 * occ)
    return vals if np.ndim(t) else complex(vals[0])


def reference_correlation(
    sd: SpectralDensity, beta, t, rtol: float = 1e-9, atol: float = 1e-12
):
    """Continuum correlation integral evaluated by adaptive quadrature.

        S(t) = (1/pi) int dnu J(nu) [(N_th+1) e^{-i nu t} + N_th e^{i nu t}]
             = (1/pi) int dnu J(nu) [(2 N_th + 1) cos(nu t) - i sin(nu t)]

    Oscillatory weights are handed to the integrator explicitly so large t
    stays accurate.  Raises IntegrationError when the integrator's own error
    estimate misses the target.
    """
    zero_temp = beta is None or math.isinf(beta)
    if not zero_temp and not beta > 0:
        raise ValueError(f"beta must be > 0 (or inf/None), got {beta}")

    def symmetric_part(nu):
        if nu <= 0.0:
            # J ~ nu near 0, so J*(2 N_th + 1) -> 2/beta * f(0)
            return 0.0 if zero_temp else 2.0 / beta
        j = sd.density(nu)
        if zero_temp:
            return j
        return j * (2.0 / math.expm1(beta * nu) + 1.0)

    def antisymmetric_part(nu):
        return sd.density(nu) if nu > 0.0 else 0.0

    upper = sd.upper_limit()

    def oscillatory(f, kind, tval):
        if tval == 0.0:
            if kind == "sin":
                return 0.0, 0.0
            return quad(f, 0.0, upper, limit=400, epsrel=rtol, epsabs=atol)[:2]
        if math.isinf(upper):
            val, err = quad(
                f, 0.0, upper, weight=kind, wvar=tval, limit=400,
                epsrel=rtol, epsabs=atol, maxp1=200, limlst=200,
            )[:2]
        else:
            val, err = quad(
                f, 0.0, upper, weight=kind, wvar=tval, limit=400,
                epsrel=rtol, epsabs=atol, maxp1=200,
            )[:2]
        return val, err

    def single(tval):
        re, re_err = oscillatory(symmetric_part, "cos", tval)
        im, im_err = oscillatory(antisymmetric_part, "sin", tval)
        val = (re - 1j * im) / math.pi
        err = (re_err + im_err) / math.pi
        if err > max(atol, 10.0 * rtol * max(abs(val), atol)):
            raise IntegrationError(
                f"correlation integral at t={tval} reached error {err:.2e}",
                achieved=val,
            )
        return val

    if np.ndim(t):
        return np.array([single(float(tv)) for tv in np.asarray(t).ravel()])
    return single(float(t))


@dataclass(frozen=True)
class BandSplit:
    """Three-band decomposition around a parametric drive frequency nu."""

    low: DiscreteBath
    natural: DiscreteBath
    rotating: DiscreteBath
    kappa_estimate: float


def _local_density(omegas: np.ndarray, x: float) -> float:
    """Inverse local node spacing at frequency x; 0 when fewer than two nodes
    are available or x lies outside their span."""
    if omegas.size < 2 or not (omegas[0] <= x <= omegas[-1]):
        return 0.0
    j = int(np.argmin(np.abs(omegas - x)))
    if j == 0:
        spacing = omegas[1] - omegas[0]
    elif j == omegas.size - 1:
        spacing = omegas[-1] - omegas[-2]
    else:
        spacing = 0.5 * (omegas[j + 1] - omegas[j - 1])
    return 1.0 / spacing if spacing > 0 else 0.0


def band_split(bath: DiscreteBath, nu: float, a_static: float, lam: float) -> BandSplit:
    """Partition modes into low (w <= nu/2), natural (nu/2 < w <= 3 nu/2) and
    doubly rotating (w > 3 nu/2) bands, and estimate the induced photon loss

        kappa ~ A^2 * sum_c g^2 * rho(nu) + (lambda^2/4) * sum_d g^2 * rho(2 nu)

    with rho the inverse local node spacing of the band holding nu (2 nu).
    """
    if not nu > 0:
        raise ValueError(f"nu must be > 0, got {nu}")
    w = bath.omegas
    low = bath.subset(w <= 0.5 * nu)
    natural = bath.subset((w > 0.5 * nu) & (w <= 1.5 * nu))
    rotating = bath.subset(w > 1.5 * nu)
    kappa = a_static**2 * float(np.sum(natural.g**2)) * _local_density(natural.omegas, nu)
    kappa += 0.25 * lam**2 * float(np.sum(rotating.g**2)) * _local_density(
        rotating.omegas, 2.0 * nu
    )
    return BandSplit(low=low, natural=natural, rotating=rotating, kappa_estimate=kappa)


def format_bath_table(bath: DiscreteBath) -> str:
    """Plain-text mode table, one 'omega weight g' line per mode."""
    lines = [
        f"{w:.12e} {wt:.12e} {g:.12e}"
        for w, wt, g in zip(bath.omegas, bath.weights, bath.g)
    ]
    return "\n".join(lines) + "\n"
