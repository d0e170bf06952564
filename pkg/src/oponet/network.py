"""Network parameters for coupled degenerate OPOs.

Holds the pump amplitude h, intrinsic one-photon loss g, saturation beta,
the symmetric linear coupling matrix C (zero diagonal) and the symmetric
two-photon rate matrix W (diagonal beta). All parameters are angular rates
(hbar = 1).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


class CouplingWarning(UserWarning):
    """A rate matrix lost positive semidefiniteness (non-CP generator)."""


@dataclass(frozen=True)
class OPONetworkParams:
    num_modes: int
    pump: float  # h >= 0
    loss: float  # g >= 0
    saturation: float  # beta >= 0
    linear_coupling: np.ndarray = None  # C, symmetric, zero diagonal
    nonlinear_coupling: np.ndarray = None  # W, symmetric, diagonal beta

    def __post_init__(self):
        N = self.num_modes
        if N < 1:
            raise ValueError("num_modes must be >= 1")
        if self.pump < 0 or self.loss < 0 or self.saturation < 0:
            raise ValueError("pump, loss and saturation must be >= 0")
        C = self.linear_coupling
        C = np.zeros((N, N)) if C is None else np.array(C, dtype=float)
        W = self.nonlinear_coupling
        if W is None:
            W = self.saturation * np.eye(N)
        else:
            W = np.array(W, dtype=float)
        for name, M in (("C", C), ("W", W)):
            if M.shape != (N, N):
                raise ValueError(f"{name} must be {N}x{N}, got {M.shape}")
            if not np.allclose(M, M.T, atol=1e-14):
                raise ValueError(f"{name} must be symmetric")
        if np.any(np.abs(np.diag(C)) > 1e-14):
            raise ValueError("C must have zero diagonal")
        if not np.allclose(np.diag(W), self.saturation, atol=1e-12):
            raise ValueError("W diagonal must equal the saturation beta")
        C.flags.writeable = False
        W.flags.writeable = False
        object.__setattr__(self, "linear_coupling", C)
        object.__setattr__(self, "nonlinear_coupling", W)
        self._warn_if_not_psd()

    @property
    def one_photon_rates(self) -> np.ndarray:
        """Effective rate matrix G: G_mumu = g, G_munu = -C_munu."""
        G = -self.linear_coupling.copy()
        np.fill_diagonal(G, self.loss)
        return G

    def _warn_if_not_psd(self):
        # Non-PSD rate matrices break complete positivity; we warn but still
        # build, since strongly coupled instances are simulated regardless.
        for name, M in (("G", self.one_photon_rates), ("W", self.nonlinear_coupling)):
            lo = np.linalg.eigvalsh(M).min()
            if lo < -1e-12:
                warnings.warn(
                    f"rate matrix {name} is not positive semidefinite "
                    f"(min eigenvalue {lo:.3e}); generator is not completely positive",
                    CouplingWarning,
                    stacklevel=3,
                )

    def is_hyperspin(self) -> bool:
        """True when W_munu = beta for all pairs (collective two-photon loss)."""
        return np.allclose(
            self.nonlinear_coupling, self.saturation * np.ones_like(self.nonlinear_coupling)
        )


def ferromagnetic_coupling(num_modes: int, c: float) -> np.ndarray:
    """All-to-all coupling C_munu = c for mu != nu."""
    C = c * (np.ones((num_modes, num_modes)) - np.eye(num_modes))
    return C


def hyperspin_nonlinear_coupling(num_modes: int, beta: float) -> np.ndarray:
    """W_munu = beta for all pairs: single collective jump sum_mu a_mu^2."""
    return beta * np.ones((num_modes, num_modes))
