"""Mean-field limit of the OPO network: thresholds and classical fixed points.

Replacing operators by their averages <a_mu> = X_mu in the adjoint master
equation and restricting to the real sector gives

    dX_l/dt = (h/4 - g/2) X_l + 1/2 sum_nu C_{l nu} X_nu
              - 1/2 X_l sum_mu W_{l mu} X_mu²

(see docs/mean_field.md for the derivation). For W = beta I this is N
decoupled saturated OPOs with fixed points at ±S1 where S1² = (h/2 - g)/beta;
for W_munu = beta (all entries) the nonzero fixed points fill the sphere
sum X² = S².
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import fsolve

from .network import OPONetworkParams


def classical_rhs(params: OPONetworkParams, X: np.ndarray) -> np.ndarray:
    """Right-hand side of the mean-field amplitude equations (real sector)."""
    X = np.asarray(X, dtype=float)
    h, g = params.pump, params.loss
    C, W = params.linear_coupling, params.nonlinear_coupling
    return (h / 4.0 - g / 2.0) * X + 0.5 * C @ X - 0.5 * X * (W @ X**2)


def classical_threshold(params: OPONetworkParams) -> float:
    """Oscillation threshold h_th = 2 (g - lambda_max(C))."""
    lam_max = float(np.linalg.eigvalsh(params.linear_coupling).max())
    return 2.0 * (params.loss - lam_max)


def hypersphere_radius(params: OPONetworkParams):
    """Fixed-point sphere radius S = sqrt((h/2 - g)/beta), or None below threshold."""
    excess = params.pump / 2.0 - params.loss
    if excess <= 0.0:
        return None
    return float(np.sqrt(excess / params.saturation))


def find_fixed_points(
    params: OPONetworkParams,
    n_starts: int = 32,
    seed: int = 0,
    dedupe_tol: float = 1e-6,
    residual_tol: float = 1e-10,
):
    """Attractor search: integrate from random starts, Newton-polish, dedupe.

    Returns a list of real amplitude vectors with ||rhs|| <= residual_tol.
    Starts that fail to converge are dropped (reported via the return length,
    never fatal).
    """
    if n_starts < 1:
        raise ValueError("n_starts must be >= 1")
    N = params.num_modes
    g = max(params.loss, 1e-6)
    rng = np.random.default_rng(seed)
    scale = hypersphere_radius(params) or 1.0
    rhs = lambda t, X: classical_rhs(params, X)
    found = []
    for _ in range(n_starts):
        x0 = rng.normal(scale=2.0 * scale, size=N)
        sol = solve_ivp(rhs, (0.0, 50.0 / g), x0, rtol=1e-10, atol=1e-12)
        if not sol.success:
            continue
        x = sol.y[:, -1]
        x, info, ok, _ = fsolve(
            lambda v: classical_rhs(params, v), x, full_output=True, xtol=1e-13
        )
        if np.linalg.norm(classical_rhs(params, x)) > residual_tol:
            continue
        if any(np.linalg.norm(x - y) < dedupe_tol for y in found):
            continue
        found.append(x)
    return found
