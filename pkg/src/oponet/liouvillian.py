"""Sparse Liouvillian assembly for the coupled-OPO master equation.

The generator is

    L rho = -i [H, rho]
            + sum_munu G_munu ( a_mu rho a†_nu - 1/2 {a†_mu a_nu, rho} )
            + 1/2 sum_munu W_munu ( a_mu² rho a†_nu² - 1/2 {a†_mu² a_nu², rho} )

with H = i (h/8) sum_mu (a†_mu² - a_mu²), G_mumu = g, G_munu = -C_munu.

Vectorization convention (the dominant bug class here, so it is fixed once
and tagged on the superoperator): density matrices are vectorized row-major
(numpy reshape order), under which  A rho B  ->  kron(A, B^T) vec(rho).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fock import FockSpace, annihilation
from .network import OPONetworkParams

VECTORIZATION = "row-major; A rho B -> kron(A, B^T)"


@dataclass(frozen=True)
class SparseSuperoperator:
    """Finalized superoperator acting on row-major-vectorized density matrices.

    ``params`` is carried along when the generator came from a parameter set;
    solvers use it to build structure-aware preconditioners.
    """

    matrix: sp.csr_matrix  # D^2 x D^2; real (float64) in the Fock basis
    space: FockSpace
    vectorization: str = VECTORIZATION
    params: OPONetworkParams = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Return d(rho)/dt for a D x D density matrix (or matrix-shaped tangent)."""
        D = self.space.joint_dim
        if rho.shape != (D, D):
            raise ValueError(f"expected {(D, D)} density matrix, got {rho.shape}")
        return (self.matrix @ rho.reshape(-1)).reshape(D, D)


def _check_space(params: OPONetworkParams, space: FockSpace):
    if params.num_modes != space.num_modes:
        raise ValueError(
            f"params have {params.num_modes} modes, space has {space.num_modes}"
        )


def build_hamiltonian(params: OPONetworkParams, space: FockSpace) -> sp.csr_matrix:
    """Parametric-drive Hamiltonian H = i (h/8) sum_mu (a†_mu² - a_mu²).

    Hermitian; purely imaginary and antisymmetric in the real Fock basis.
    """
    _check_space(params, space)
    D = space.joint_dim
    H = sp.csr_matrix((D, D), dtype=complex)
    for mode in range(1, space.num_modes + 1):
        a = annihilation(space, mode)
        a2 = (a @ a).tocsr()
        H = H + 1j * (params.pump / 8.0) * (a2.T - a2)
    return H.tocsr()


def build_liouvillian(params: OPONetworkParams, space: FockSpace) -> SparseSuperoperator:
    """Assemble the full Liouvillian as a D² x D² sparse matrix.

    Terms are accumulated in COO form and merged once at the end; duplicate
    coordinates are summed by the final CSR conversion.
    """
    _check_space(params, space)
    D = space.joint_dim
    I = sp.identity(D, format="csr")
    a = [annihilation(space, m) for m in range(1, space.num_modes + 1)]
    a2 = [(op @ op).tocsr() for op in a]

    terms = []
    # H = iK with K real antisymmetric, so the commutator superoperator
    # (1/i)(kron(H, I) - kron(I, H^T)) = kron(K, I) - kron(I, K^T) is real;
    # assembling K directly keeps the whole generator in real arithmetic.
    K = sp.csr_matrix((D, D))
    for op2 in a2:
        K = K + (params.pump / 8.0) * (op2.T - op2)
    if K.nnz:
        terms.append(sp.kron(K, I, format="coo"))
        terms.append(-sp.kron(I, K.T, format="coo"))

    G = params.one_photon_rates
    W = params.nonlinear_coupling
    N = space.num_modes
    for mu in range(N):
        for nu in range(N):
            # Operators are real in the Fock basis, so a†_nu^T = a_nu etc.
            if G[mu, nu] != 0.0:
                sandwich = sp.kron(a[mu], a[nu], format="coo")
                ada = (a[mu].T @ a[nu]).tocsr()
                terms.append(G[mu, nu] * sandwich)
                terms.append(-0.5 * G[mu, nu] * sp.kron(ada, I, format="coo"))
                terms.append(-0.5 * G[mu, nu] * sp.kron(I, ada.T, format="coo"))
            if W[mu, nu] != 0.0:
                w = 0.5 * W[mu, nu]
                sandwich2 = sp.kron(a2[mu], a2[nu], format="coo")
                q = (a2[mu].T @ a2[nu]).tocsr()
                terms.append(w * sandwich2)
                terms.append(-0.5 * w * sp.kron(q, I, format="coo"))
                terms.append(-0.5 * w * sp.kron(I, q.T, format="coo"))

    if not terms:
        L = sp.csr_matrix((D * D, D * D))
    else:
        data = np.concatenate([t.data for t in terms])
        rows = np.concatenate([t.row for t in terms])
        cols = np.concatenate([t.col for t in terms])
        L = sp.coo_matrix((data, (rows, cols)), shape=(D * D, D * D)).tocsr()
    return SparseSuperoperator(matrix=L, space=space, params=params)


def collective_two_photon_dissipator(
    space: FockSpace, rate: float
) -> SparseSuperoperator:
    """Single collective dissipator with jump L_hs = sum_mu a_mu² at the given rate.

    For W_munu = beta (all entries) this equals the two-photon part of the
    network Liouvillian with rate beta/2; used as an independent cross-check.
    """
    D = space.joint_dim
    I = sp.identity(D, format="csr")
    Lhs = sp.csr_matrix((D, D), dtype=float)
    for mode in range(1, space.num_modes + 1):
        am = annihilation(space, mode)
        Lhs = Lhs + am @ am
    Lhs = Lhs.tocsr()
    q = (Lhs.T @ Lhs).tocsr()
    M = rate * (
        sp.kron(Lhs, Lhs, format="csr")
        - 0.5 * sp.kron(q, I, format="csr")
        - 0.5 * sp.kron(I, q.T, format="csr")
    )
    return SparseSuperoperator(matrix=M.tocsr(), space=space)


def trace_functional(space: FockSpace) -> np.ndarray:
    """Row vector t with t · vec(rho) = trace(rho) in the row-major convention."""
    D = space.joint_dim
    t = np.zeros(D * D)
    t[np.arange(D) * D + np.arange(D)] = 1.0
    return t
