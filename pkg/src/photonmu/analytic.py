"""Closed-form strong-interaction results for a lossy, parametrically thermalized lattice.

Single decoupled site: detailed-balance population ratios modified by photon
loss.  Perturbative hopping: particle/hole excitation energies above the
n0-filled incompressible state to second order in J/U, effective occupations
seen by particle and hole addition, the resulting phase-boundary curves in the
(J, mu) plane, and equilibrium vs loss-corrected critical temperatures.
Units: k_B = 1, temperatures in units of the interaction energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BreakdownError, SingularityError
from .rates import n_th, ohmic_weight


@dataclass(frozen=True)
class SingleSiteParams:
    """One decoupled nonlinear site coupled to both baths."""

    U: float
    mu: float
    beta: float
    gamma0: float
    kappa: float
    n_max: int = 3

    def __post_init__(self):
        if not self.U > 0:
            raise ValueError(f"U must be > 0, got {self.U}")
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.kappa > 0 and not self.gamma0 > 0:
            raise ValueError("gamma0 must be > 0 when loss ratios kappa/gamma are formed")


@dataclass(frozen=True)
class LobePoint:
    """Excitation energies and effective occupations at one (J, mu) point."""

    n0: int
    z: int
    J: float
    U: float
    mu: float
    dE_particle: float
    dE_hole: float
    n_eff_particle: float
    n_eff_hole: float


def delta_e(n: int, U: float, mu: float) -> float:
    """Energy cost of adding one boson on top of n: E0(n+1) - E0(n) = n*U - mu."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return n * U - mu


def _occupancy(beta: float, de: float) -> float:
    """Bose factor at |de|; +inf at de = 0 (consumed only via the Ohmic limit)."""
    return n_th(beta, abs(de))


def f_plus(n: int, params: SingleSiteParams) -> float:
    """Upward bosonic factor (n+1)[N_th(|dE|) + Theta(-dE)] at dE = delta_e(n)."""
    de = delta_e(n, params.U, params.mu)
    theta = 1.0 if de < 0 else (0.5 if de == 0 else 0.0)
    return (n + 1) * (_occupancy(params.beta, de) + theta)


def f_minus(n: int, params: SingleSiteParams) -> float:
    """Downward bosonic factor (n+1)[N_th(|dE|) + Theta(dE)] at dE = delta_e(n)."""
    de = delta_e(n, params.U, params.mu)
    theta = 1.0 if de > 0 else (0.5 if de == 0 else 0.0)
    return (n + 1) * (_occupancy(params.beta, de) + theta)


def _step_rates(n: int, params: SingleSiteParams) -> tuple[float, float]:
    """(Gamma_up, Gamma_down) for the n <-> n+1 transition of a single site.

    Uses the Ohmic golden-rule weights so the exactly degenerate point
    dE = 0 takes its finite analytic limit instead of the Theta ambiguity.
    """
    de = delta_e(n, params.U, params.mu)
    absorb, emit = ohmic_weight(params.beta, de, params.gamma0, params.U)
    if de > 0:
        up, down = absorb, emit
    elif de < 0:
        up, down = emit, absorb
    else:
        up = down = absorb
    mult = n + 1
    return mult * up, mult * (down + params.kappa)


def single_site_steady(params: SingleSiteParams) -> np.ndarray:
    """Stationary populations p_0..p_n_max from the detailed-balance ratio chain.

    Each ratio is p_{n+1}/p_n = Gamma_up(n)/Gamma_down(n) with the loss rate
    (n+1)*kappa added to the downward channel.  kappa = 0 reduces to Gibbs
    weights exp(-beta*E0(n)).
    """
    ratios = []
    for n in range(params.n_max):
        up, down = _step_rates(n, params)
        if down <= 0.0:
            raise SingularityError(
                f"vanishing downward rate at n={n}; population ratio is undefined"
            )
        ratios.append(up / down)
    p = np.ones(params.n_max + 1)
    for n, r in enumerate(ratios):
        p[n + 1] = p[n] * r
    return p / p.sum()


def n_eff_particle(de: float, beta: float, kappa: float, gamma: float) -> float:
    """Occupation seen by particle addition: N_th(|de|)/(1 + kappa/gamma).

    Loss removes particles, so it cools the particle sector.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    return n_th(beta, abs(de)) / (1.0 + kappa / gamma)


def n_eff_hole(de: float, beta: float, kappa: float, gamma: float) -> float:
    """Occupation seen by hole addition: (N_th(|de|) + kappa/gamma)/(1 - kappa/gamma).

    Loss creates holes, heating the hole sector; the thermal description
    breaks down entirely once kappa/gamma >= 1.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    ratio = kappa / gamma
    if ratio >= 1.0:
        raise BreakdownError(
            f"hole occupation is undefined for kappa/gamma = {ratio:.4g} >= 1"
        )
    return (n_th(beta, abs(de)) + ratio) / (1.0 - ratio)


def excitation_energies(
    n0: int, U: float, mu: float, J: float, z: int
) -> tuple[float, float]:
    """Particle and hole excitation energies above the n0-filled state,
    to second order in J/U at zero quasi-momentum.
    """
    if n0 < 1:
        raise ValueError(f"n0 must be >= 1, got {n0}")
    if J < 0:
        raise ValueError(f"J must be >= 0, got {J}")
    if z < 1:
        raise ValueError(f"z must be >= 1, got {z}")
    j2 = J * J
    de_p = (
        -z * J * (n0 + 1)
        + n0 * U
        - mu
        + z * j2 / (2.0 * U) * n0 * (5 * n0 + 4)
        - z * z * j2 / U * n0 * (n0 + 1)
    )
    de_h = (
        -z * J * n0
        - (n0 - 1) * U
        + mu
        + z * j2 / (2.0 * U) * (n0 + 1) * (5 * n0 + 1)
        - z * z * j2 / U * n0 * (n0 + 1)
    )
    return de_p, de_h


def lobe_point(
    n0: int,
    z: int,
    J: float,
    U: float,
    mu: float,
    beta: float,
    gamma0: float,
    kappa: float,
) -> LobePoint:
    """Evaluate gaps and effective occupations at a single (J, mu) point.

    Occupations are +inf where the corresponding gap is closed (dE <= 0) and
    on the hole side also where kappa/gamma >= 1, so a finite value always
    means 'thermally described excitation with that occupation'.
    """
    de_p, de_h = excitation_energies(n0, U, mu, J, z)
    occ_p = _occupation_or_inf(de_p, U, beta, gamma0, kappa, hole=False)
    occ_h = _occupation_or_inf(de_h, U, beta, gamma0, kappa, hole=True)
    return LobePoint(
        n0=n0, z=z, J=J, U=U, mu=mu,
        dE_particle=de_p, dE_hole=de_h,
        n_eff_particle=occ_p, n_eff_hole=occ_h,
    )


def _occupation_or_inf(
    de: float, U: float, beta: float, gamma0: float, kappa: float, hole: bool
) -> float:
    if de <= 0.0:
        return math.inf
    gamma = gamma0 * de / U
    if kappa == 0.0:
        return n_th(beta, de)
    if hole:
        if kappa / gamma >= 1.0:
            return math.inf
        return n_eff_hole(de, beta, kappa, gamma)
    return n_eff_particle(de, beta, kappa, gamma)


@dataclass(frozen=True)
class LobeBoundary:
    """Phase-boundary curves mu_low(J), mu_high(J) for one n0 lobe.

    open_lobe marks grid points with a nonempty mu interval; hole_breakdown
    marks points where the whole candidate interval sits in the
    kappa/gamma >= 1 regime so no thermal hole boundary exists.
    """

    n0: int
    z: int
    J: np.ndarray
    mu_low: np.ndarray
    mu_high: np.ndarray
    open_lobe: np.ndarray
    hole_breakdown: np.ndarray


def _bisect(f, lo: float, hi: float, tol: float) -> float:
    """Root of a monotone sign-changing f on [lo, hi] to absolute tolerance tol."""
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lobe_boundary(
    n0: int,
    U: float,
    beta: float,
    gamma0: float,
    kappa: float,
    z: int,
    j_grid,
    occupation_threshold: float = 1.0,
    mu_tol: float = 1e-6,
) -> LobeBoundary:
    """Incompressible-lobe boundaries from the occupation-reaching-unity criterion.

    For each hopping value the lobe is the mu interval where both the particle
    and the hole effective occupation stay below occupation_threshold (and
    both gaps are open).  Boundaries are located by bisection to mu_tol*U.
    When an occupation never reaches the threshold before its gap closes, the
    boundary is the gap-closing line itself (the kappa = 0, beta -> inf limit).
    """
    if not gamma0 > 0:
        raise ValueError(f"gamma0 must be > 0, got {gamma0}")
    j_grid = np.asarray(j_grid, dtype=np.float64)
    mu_low = np.full(j_grid.shape, np.nan)
    mu_high = np.full(j_grid.shape, np.nan)
    open_lobe = np.zeros(j_grid.shape, dtype=bool)
    breakdown = np.zeros(j_grid.shape, dtype=bool)
    tol = mu_tol * U

    for idx, J in enumerate(j_grid):
        # Gaps are linear in mu: dE_p = c_p - mu, dE_h = mu - c_h.
        de_p0, de_h0 = excitation_energies(n0, U, 0.0, J, z)
        c_p = de_p0          # particle gap closes at mu = c_p
        c_h = -de_h0         # hole gap closes at mu = c_h
        if c_h >= c_p:
            continue  # closed lobe tip: gaps never simultaneously open

        def occ_h(mu):
            return _occupation_or_inf(mu - c_h, U, beta, gamma0, kappa, hole=True)

        def occ_p(mu):
            return _occupation_or_inf(c_p - mu, U, beta, gamma0, kappa, hole=False)

        edge = tol  # stay strictly inside the open-gap interval
        hi_anchor = c_p - edge
        lo_anchor = c_h + edge
        if hi_anchor <= lo_anchor:
            continue

        if kappa > 0 and (c_p - c_h) <= kappa * U / gamma0:
            # kappa/gamma_h >= 1 across the whole candidate interval
            breakdown[idx] = True
            continue

        # Hole side: occ_h decreases in mu from +inf at the closed gap.
        if occ_h(hi_anchor) >= occupation_threshold:
            continue  # hole occupation above threshold everywhere: no lobe
        if occ_h(lo_anchor) < occupation_threshold:
            lo = c_h  # below threshold arbitrarily close to the gap (beta -> inf)
        else:
            lo = _bisect(
                lambda mu: occ_h(mu) - occupation_threshold, lo_anchor, hi_anchor, tol
            )

        # Particle side: occ_p increases in mu; it may stay below threshold
        # all the way to the gap closing (strong-loss cooling), in which case
        # the gap line is the boundary.
        if occ_p(lo) >= occupation_threshold:
            continue
        if occ_p(hi_anchor) < occupation_threshold:
            hi = c_p
        else:
            hi = _bisect(
                lambda mu: occ_p(mu) - occupation_threshold, lo, hi_anchor, tol
            )

        if hi > lo:
            mu_low[idx] = lo
            mu_high[idx] = hi
            open_lobe[idx] = True

    return LobeBoundary(
        n0=n0, z=z, J=j_grid, mu_low=mu_low, mu_high=mu_high,
        open_lobe=open_lobe, hole_breakdown=breakdown,
    )


def t_c(
    de_particle: float,
    de_hole: float,
    gamma_p: float,
    gamma_h: float,
    kappa: float,
) -> tuple[float, float]:
    """Equilibrium and loss-corrected critical temperatures of the lobe.

    T_c0 = min(dE_h, dE_p)/ln 2.  The loss-corrected value replaces ln 2 by
    channel-specific logarithms: ln[2(gamma_h - kappa)/(gamma_h - 2 kappa)]
    on the hole side and ln[(2 gamma_p + kappa)/(gamma_p + kappa)] on the
    particle side.  Requires gamma_h > 2*kappa, otherwise the hole logarithm
    loses its positive argument and the two-reservoir picture breaks down.
    """
    if not (de_particle > 0 and de_hole > 0):
        raise ValueError("both excitation energies must be positive")
    if gamma_h <= 2.0 * kappa:
        raise BreakdownError(
            f"hole channel breakdown: gamma_h = {gamma_h:.4g} <= 2*kappa = {2 * kappa:.4g}"
        )
    tc0 = min(de_hole, de_particle) / math.log(2.0)
    log_h = math.log(2.0 * (gamma_h - kappa) / (gamma_h - 2.0 * kappa))
    log_p = math.log((2.0 * gamma_p + kappa) / (gamma_p + kappa))
    tc_ne = min(de_hole / log_h, de_particle / log_p)
    return tc0, tc_ne
