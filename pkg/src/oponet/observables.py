"""Partial traces and single-mode moments of multimode density matrices."""

from __future__ import annotations

import numpy as np

from .fock import FockSpace, annihilation, creation, number_op
from .steady import DensityMatrix


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state over the 1-based modes in ``keep`` (order preserved, sorted)."""
    keep = sorted(set(keep))
    space = rho.space
    N, d = space.num_modes, space.local_dim
    if not keep:
        raise ValueError("keep must be non-empty")
    if not all(1 <= m <= N for m in keep):
        raise ValueError(f"modes {keep} out of range 1..{N}")
    t = rho.data.reshape([d] * (2 * N))
    # traced modes share one einsum letter between their row and column axis
    m_letters = [chr(ord("a") + i) for i in range(N)]
    n_letters = [
        m_letters[i] if (i + 1) not in keep else chr(ord("a") + N + i)
        for i in range(N)
    ]
    out = "".join(m_letters[m - 1] for m in keep) + "".join(
        n_letters[m - 1] for m in keep
    )
    reduced = np.einsum("".join(m_letters) + "".join(n_letters) + "->" + out, t)
    Dk = d ** len(keep)
    reduced = reduced.reshape(Dk, Dk)
    return DensityMatrix(
        data=reduced,
        space=FockSpace(len(keep), d),
        residual=np.nan,
        solver=rho.solver + "+ptrace",
    )


def moments(rho: DensityMatrix, mode: int) -> dict:
    """Photon number and quadrature moments of one mode.

    Convention x = (a + a†)/2, p = (a - a†)/(2i): <x> tracks Re[alpha] under
    the Wigner scaling used in :mod:`oponet.wigner`; vacuum variances are 1/4.
    """
    space = rho.space
    a = annihilation(space, mode)
    ad = creation(space, mode)
    x = 0.5 * (a + ad)
    p = (a - ad) / 2j
    mean = lambda op: complex(np.sum((op @ rho.data).diagonal()))
    mean_x = mean(x).real
    mean_p = mean(p).real
    return {
        "mean_n": mean(number_op(space, mode)).real,
        "mean_x": mean_x,
        "mean_p": mean_p,
        "var_x": mean((x @ x).tocsr()).real - mean_x**2,
        "var_p": mean((p @ p).tocsr()).real - mean_p**2,
    }
