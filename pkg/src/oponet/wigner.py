"""Wigner functions on quadrature grids via displaced-parity kernels.

The N-mode Wigner function is evaluated as

    W(alpha_1, ..., alpha_N) = (2/pi)^N Tr[ rho  (x)_mu K(alpha_mu) ],

where K(alpha) = D(2 alpha) P is the single-mode displaced-parity kernel
(D the displacement operator, P the photon-number parity). Axis-aligned
grids make the trace separable per mode, so kernels are computed once per
distinct axis value and the contraction runs as a sequence of per-mode
tensor products.

Quadrature scaling: x = (a + a†)/2, so the vacuum is W(alpha) =
(2/pi) exp(-2|alpha|²) and classical fixed points appear at Re[alpha] = X.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln

from .steady import DensityMatrix


def displacement_matrix(beta: complex, d: int) -> np.ndarray:
    """Matrix elements <m|D(beta)|n> on the d-dimensional truncated space.

    Closed form for m >= n:
        sqrt(n!/m!) beta^(m-n) exp(-|beta|²/2) L_n^(m-n)(|beta|²),
    with the conjugate-transpose relation (beta -> -beta*) for m < n.
    Factorials go through gammaln to stay finite at large m, n.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    b2 = abs(beta) ** 2
    out = np.zeros((d, d), dtype=complex)
    m, n = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    lower = m >= n
    k = np.where(lower, m - n, n - m)  # |m - n|
    small = np.where(lower, n, m)
    # sqrt(min!/max!) = exp(-(gammaln(max+1) - gammaln(min+1))/2)
    ratio = np.exp(-0.5 * (gammaln(small + k + 1) - gammaln(small + 1)))
    lag = eval_genlaguerre(small, k, b2)
    base = np.where(lower, beta, -np.conj(beta)) ** k
    out = ratio * base * np.exp(-0.5 * b2) * lag
    return out


def displacement_kernel(alpha: complex, d: int) -> np.ndarray:
    """Displaced-parity kernel K(alpha)_mn = <m|D(2 alpha)|n> (-1)^n.

    Returns exact zeros (the Gaussian envelope underflows) for |alpha| large
    enough that exp(-2|alpha|²) is below the float64 floor.
    """
    if np.exp(-2.0 * abs(alpha) ** 2) == 0.0:
        return np.zeros((d, d), dtype=complex)
    K = displacement_matrix(2.0 * alpha, d)
    K[:, 1::2] *= -1.0
    return K


def displacement_kernel_expm(alpha: complex, d: int, pad: int = 8) -> np.ndarray:
    """Oracle kernel via padded matrix exponential of 2 alpha a† - 2 alpha* a."""
    dd = d + pad
    a = np.diag(np.sqrt(np.arange(1, dd)), 1)
    Dop = expm(2.0 * alpha * a.conj().T - 2.0 * np.conj(alpha) * a)
    K = Dop[:d, :d] * ((-1.0) ** np.arange(d))[None, :]
    return K


@dataclass
class WignerGrid:
    """Wigner values on an axis-aligned slice of quadrature space.

    ``varying_modes`` are 1-based mode numbers whose alpha runs over ``axes``
    (one 1-D complex array per varying mode, in the same order); all other
    modes sit at the complex values in ``fixed_values`` (keyed by mode).
    ``values`` has one axis per varying mode, matching ``axes`` lengths.
    """

    varying_modes: list
    axes: list
    fixed_values: dict
    values: np.ndarray
    normalization: float = np.nan
    metadata: dict = field(default_factory=dict)


def wigner(
    rho: DensityMatrix,
    varying_modes,
    axes,
    fixed_values=None,
    imag_tol: float = 1e-10,
) -> WignerGrid:
    """Evaluate the Wigner function of ``rho`` on an axis-aligned grid.

    ``axes`` entries may be real (real-quadrature slices, the common case) or
    complex. Values are checked to be real to within ``imag_tol`` and
    returned as a real array scaled by (2/pi)^N.
    """
    space = rho.space
    d, N = space.local_dim, space.num_modes
    varying_modes = list(varying_modes)
    fixed_values = dict(fixed_values or {})
    seen = set(varying_modes) | set(fixed_values)
    if seen != set(range(1, N + 1)) or len(varying_modes) != len(set(varying_modes)):
        raise ValueError(
            f"varying modes {varying_modes} plus fixed {sorted(fixed_values)} "
            f"must cover modes 1..{N} exactly once"
        )
    if len(axes) != len(varying_modes):
        raise ValueError("need one axis array per varying mode")

    # per-mode kernel stacks; Tr[rho (x)K] contracts K[n_mu, m_mu] with
    # rho_(m_1..m_N; n_1..n_N)
    tensor = rho.data.reshape([d] * (2 * N))
    operands = [tensor]
    subs = []
    m_letters = [chr(ord("a") + i) for i in range(N)]
    n_letters = [chr(ord("a") + N + i) for i in range(N)]
    grid_letters = {}
    for idx, mode in enumerate(varying_modes):
        grid_letters[mode] = chr(ord("A") + idx)
    rho_sub = "".join(m_letters) + "".join(n_letters)
    out_sub = ""
    for mode in range(1, N + 1):
        mu = mode - 1
        if mode in grid_letters:
            ax = np.asarray(axes[varying_modes.index(mode)])
            stack = np.stack([displacement_kernel(complex(a), d) for a in ax])
            operands.append(stack)
            subs.append(grid_letters[mode] + n_letters[mu] + m_letters[mu])
        else:
            operands.append(displacement_kernel(complex(fixed_values[mode]), d))
            subs.append(n_letters[mu] + m_letters[mu])
    out_sub = "".join(grid_letters[m] for m in varying_modes)
    expr = rho_sub + "," + ",".join(subs) + "->" + out_sub
    raw = np.einsum(expr, *operands, optimize=True)
    raw = raw * (2.0 / np.pi) ** N

    scale = max(np.abs(raw).max(), 1.0)
    if np.abs(raw.imag).max() > imag_tol * scale:
        raise ValueError(
            f"Wigner values have imaginary residue {np.abs(raw.imag).max():.3e}"
        )
    values = raw.real

    grid = WignerGrid(
        varying_modes=varying_modes,
        axes=[np.asarray(ax) for ax in axes],
        fixed_values=fixed_values,
        values=values,
        metadata={
            "scaling": "x = (a + a†)/2; W_vac(alpha) = (2/pi) exp(-2|alpha|^2)",
            "num_modes": N,
            "local_dim": d,
        },
    )
    return grid


def wigner_phase_space_integral(rho: DensityMatrix, mode_axes) -> float:
    """Riemann-sum of W over a full-phase-space grid (2N real dimensions).

    ``mode_axes`` maps each mode to (re_axis, im_axis). Intended as a
    normalization check; cost grows as the product of all axis lengths.
    """
    space = rho.space
    N = space.num_modes
    d = space.local_dim
    tensor = rho.data.reshape([d] * (2 * N))
    weight = 1.0
    m_letters = [chr(ord("a") + i) for i in range(N)]
    n_letters = [chr(ord("a") + N + i) for i in range(N)]
    operands = [tensor]
    subs = []
    for mode in range(1, N + 1):
        re_ax, im_ax = mode_axes[mode]
        re_ax = np.asarray(re_ax, dtype=float)
        im_ax = np.asarray(im_ax, dtype=float)
        pts = (re_ax[:, None] + 1j * im_ax[None, :]).ravel()
        stack = np.stack([displacement_kernel(a, d) for a in pts])
        # integrate the kernel over this mode's phase-space patch directly
        integrated = stack.sum(axis=0)
        weight *= (re_ax[1] - re_ax[0]) * (im_ax[1] - im_ax[0])
        operands.append(integrated)
        subs.append(n_letters[mode - 1] + m_letters[mode - 1])
    expr = "".join(m_letters) + "".join(n_letters) + "," + ",".join(subs) + "->"
    raw = np.einsum(expr, *operands, optimize=True)
    return float((raw * (2.0 / np.pi) ** N).real * weight)


def dump_grid(grid: WignerGrid, path, extra_metadata=None):
    """Write a grid as plain text: '#'-prefixed header lines, then row-major values."""
    with open(path, "w") as f:
        f.write("# wigner grid\n")
        for k, v in {**grid.metadata, **(extra_metadata or {})}.items():
            f.write(f"# {k}: {v}\n")
        f.write(f"# varying_modes: {grid.varying_modes}\n")
        for mode, ax in zip(grid.varying_modes, grid.axes):
            f.write(
                f"# axis mode={mode} start={ax[0].real:.17g} "
                f"stop={ax[-1].real:.17g} points={len(ax)}\n"
            )
        for mode, val in sorted(grid.fixed_values.items()):
            f.write(f"# fixed mode={mode} value={val}\n")
        f.write(f"# shape: {list(grid.values.shape)}\n")
        for v in grid.values.reshape(-1):
            f.write(f"{v:.17g}\n")


def load_grid_values(path) -> np.ndarray:
    """Read back the (flattened) values of a dumped grid."""
    shape = None
    values = []
    with open(path) as f:
        for line in f:
            if line.startswith("#"):
                if line.startswith("# shape:"):
                    shape = [int(x) for x in line.split(":")[1].strip(" []\n").split(",")]
                continue
            values.append(float(line))
    arr = np.array(values)
    return arr.reshape(shape) if shape else arr
