"""Truncated multimode Fock-space bookkeeping and sparse ladder operators.

All operators live on the joint Hilbert space H = H_1 (x) ... (x) H_N, with
each local space truncated at occupation ``n_max`` (local dimension
d = n_max + 1). Flat indices follow the convention

    flat = sum_mu n_mu * d**(N - mu)        (mode 1 most significant),

fixed here once and used by every downstream module (Liouvillian assembly,
partial transpose, Wigner contraction).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class FockSpace:
    """Truncated number basis of N bosonic modes.

    Attributes
    ----------
    num_modes : number of modes N (>= 1).
    local_dim : local dimension d = n_max + 1 (>= 2), states |0..n_max>.
    """

    num_modes: int
    local_dim: int

    def __post_init__(self):
        if self.num_modes < 1:
            raise ValueError(f"num_modes must be >= 1, got {self.num_modes}")
        if self.local_dim < 2:
            raise ValueError(f"local_dim must be >= 2, got {self.local_dim}")

    @property
    def n_max(self) -> int:
        """Maximum occupation per mode."""
        return self.local_dim - 1

    @property
    def joint_dim(self) -> int:
        """Dimension D = d**N of the joint space."""
        return self.local_dim**self.num_modes

    def flat_index(self, occupations) -> int:
        """Map occupations (n_1, ..., n_N) to the flat basis index."""
        occ = np.asarray(occupations)
        if occ.shape != (self.num_modes,):
            raise ValueError(
                f"expected {self.num_modes} occupations, got shape {occ.shape}"
            )
        if np.any(occ < 0) or np.any(occ >= self.local_dim):
            raise ValueError(f"occupation out of range [0, {self.local_dim}): {occ}")
        flat = 0
        for n in occ:
            flat = flat * self.local_dim + int(n)
        return flat

    def unflatten(self, flat: int) -> tuple:
        """Inverse of :meth:`flat_index`."""
        if not 0 <= flat < self.joint_dim:
            raise ValueError(f"flat index out of range [0, {self.joint_dim}): {flat}")
        occ = []
        for _ in range(self.num_modes):
            occ.append(flat % self.local_dim)
            flat //= self.local_dim
        return tuple(reversed(occ))

    def _check_mode(self, mode: int):
        if not 1 <= mode <= self.num_modes:
            raise ValueError(f"mode must be in [1, {self.num_modes}], got {mode}")


def single_mode_annihilation(d: int) -> sp.csr_matrix:
    """Single-mode annihilation operator: <n-1|a|n> = sqrt(n), truncated at d-1.

    The operator is exact up to row n_max - 1; no renormalization is applied
    to compensate the truncation (convergence is instead checked on the
    steady state's support near n_max).
    """
    return sp.diags(np.sqrt(np.arange(1, d)), 1, format="csr")


def embed(single_mode_op: sp.spmatrix, space: FockSpace, mode: int) -> sp.csr_matrix:
    """Embed a d x d single-mode operator as I (x) ... (x) op (x) ... (x) I.

    ``mode`` is 1-based; mode 1 is the most significant index factor.
    """
    space._check_mode(mode)
    d = space.local_dim
    if single_mode_op.shape != (d, d):
        raise ValueError(
            f"operator shape {single_mode_op.shape} does not match local dim {d}"
        )
    left = sp.identity(d ** (mode - 1), format="csr")
    right = sp.identity(d ** (space.num_modes - mode), format="csr")
    return sp.kron(sp.kron(left, single_mode_op), right, format="csr")


def annihilation(space: FockSpace, mode: int) -> sp.csr_matrix:
    """Joint-space annihilation operator for the given mode (1-based)."""
    return embed(single_mode_annihilation(space.local_dim), space, mode)


def creation(space: FockSpace, mode: int) -> sp.csr_matrix:
    """Joint-space creation operator; real transpose of :func:`annihilation`."""
    return annihilation(space, mode).T.tocsr()


def number_op(space: FockSpace, mode: int) -> sp.csr_matrix:
    """Joint-space number operator a†a; diagonal (0, 1, ..., n_max) per mode."""
    a = single_mode_annihilation(space.local_dim)
    return embed((a.T @ a).tocsr(), space, mode)


def parity_op(space: FockSpace) -> sp.csr_matrix:
    """Total parity (x)_mu exp(i pi n_mu), diagonal with entries +-1."""
    d = space.local_dim
    p = sp.diags((-1.0) ** np.arange(d), format="csr")
    out = sp.identity(1, format="csr")
    for _ in range(space.num_modes):
        out = sp.kron(out, p, format="csr")
    return out
