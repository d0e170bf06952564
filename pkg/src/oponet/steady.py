"""Steady-state solvers for the OPO-network Liouvillian.

Methods:

* ``nullspace_lu``   — replace the row of L belonging to the vacuum diagonal
  element with the constraint rho[0,0] = 1 and solve by complete sparse LU.
  Trace preservation makes any one generator row redundant, so the pinned
  system is exact; the state is trace-normalized afterwards. Preferred for
  small and medium dimensions.
* ``nullspace_gmres`` — same pinned system solved by GMRES, preconditioned
  with the exact shifted inverse of the *decoupled* Liouvillian. With all
  couplings removed, L is a Kronecker sum of N single-mode generators of
  dimension d², so its shifted inverse is applied spectrally through per-mode
  eigendecompositions at O(D² d²) cost per iteration. Couplings enter only
  perturbatively, so GMRES converges in tens of iterations. Complete LU
  fill-in on the 2N-dimensional lattice structure of L grows steeply with D,
  making this the production path for large instances (N = 3).
* ``shift_invert_arnoldi`` — ARPACK eigensolve around a small negative shift;
  kept as an independent cross-check.
* ``dense_fallback`` — full dense eigendecomposition of L, for tiny D only.

A classical RK4 integrator (`evolve`) provides a solver-independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .fock import FockSpace
from .liouvillian import SparseSuperoperator, trace_functional

DENSE_LIMIT = 4096  # max superoperator dimension D^2 for dense_fallback


class SteadyStateError(RuntimeError):
    """Solver failed to produce a valid steady state."""


@dataclass
class DensityMatrix:
    """Hermitian, trace-one steady (or evolved) state with solver metadata."""

    data: np.ndarray  # dense D x D complex
    space: FockSpace
    residual: float = np.nan  # ||L vec(rho)||_2
    solver: str = ""
    degenerate: bool = False
    truncation_safe: bool = True
    min_eigenvalue: float = np.nan

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def trace(self) -> complex:
        return np.trace(self.data)

    def expectation(self, op) -> complex:
        """Tr[rho A] for a sparse or dense operator A."""
        return np.sum((op @ self.data).diagonal()) if sp.issparse(op) else np.trace(
            op @ self.data
        )


def _finalize(
    vec: np.ndarray,
    L: SparseSuperoperator,
    solver: str,
    degenerate: bool = False,
    psd_tol: float = 1e-8,
) -> DensityMatrix:
    """Symmetrize, normalize and validate a candidate null vector."""
    D = L.space.joint_dim
    rho = vec.reshape(D, D)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-12 * max(1.0, np.abs(rho).max()):
        raise SteadyStateError(
            "null vector has (near-)zero trace; check vectorization convention"
        )
    rho = rho / tr
    residual = float(np.linalg.norm(L.matrix @ rho.reshape(-1)))
    eigs = np.linalg.eigvalsh(rho)
    min_eig = float(eigs.min())
    if min_eig < -psd_tol:
        raise SteadyStateError(
            f"steady state violates positivity: min eigenvalue {min_eig:.3e}"
        )
    out = DensityMatrix(
        data=rho,
        space=L.space,
        residual=residual,
        solver=solver,
        degenerate=degenerate,
        min_eigenvalue=min_eig,
    )
    out.truncation_safe = truncation_safe(out)
    return out


def truncation_safe(rho: DensityMatrix, rel_tol: float = 1e-6) -> bool:
    """True when density-matrix support near n_max is negligible.

    Checks max|rho| over entries with any mode index equal to n_max against
    rel_tol * max|rho|; failure means observables may be truncation-limited.
    """
    space = rho.space
    d, N = space.local_dim, space.num_modes
    t = np.abs(rho.data).reshape([d] * (2 * N))
    peak = t.max()
    edge = 0.0
    for axis in range(2 * N):
        edge = max(edge, np.take(t, d - 1, axis=axis).max())
    return edge <= rel_tol * peak


def _pinned_system(L: SparseSuperoperator):
    """Replace the vacuum-diagonal row of L with the constraint rho[0,0] = 1.

    The generator is purely real in the Fock basis, so the pinned system is
    assembled in real arithmetic (quarters the factorization cost and halves
    peak memory); a complex-valued generator keeps its dtype.
    """
    A = L.matrix.tocsr()
    if _is_real(L):
        # np.array(...) guarantees a fresh buffer even when A.data is already
        # real (a view would let the row edit below corrupt L itself)
        data = np.array(A.data.real, dtype=np.float64)
    else:
        data = A.data.copy()
    M = sp.csr_matrix((data, A.indices.copy(), A.indptr.copy()), shape=A.shape)
    M.data[M.indptr[0] : M.indptr[1]] = 0.0
    M.eliminate_zeros()
    M = (M + sp.coo_matrix(([1.0], ([0], [0])), shape=M.shape)).tocsr()
    b = np.zeros(M.shape[0], dtype=M.dtype)
    b[0] = 1.0
    return M, b


def _is_real(L: SparseSuperoperator) -> bool:
    data = L.matrix.data
    return not np.iscomplexobj(data) or not data.imag.any()


def _solve_nullspace_lu(L: SparseSuperoperator) -> np.ndarray:
    M, b = _pinned_system(L)
    lu = spla.splu(M.tocsc(), permc_spec="MMD_AT_PLUS_A")
    return lu.solve(b).astype(complex)


def _decoupled_preconditioner(L: SparseSuperoperator, shift: float):
    """Shifted inverse of the decoupled (C = 0, W = beta I) Liouvillian.

    The decoupled generator is a Kronecker sum over the N (m_mu, n_mu) pair
    spaces, so (L0 - shift)^-1 factorizes through the eigendecomposition of
    the single-mode generator.
    """
    from .liouvillian import build_liouvillian  # local import, no cycle at runtime
    from .network import OPONetworkParams

    p = L.params
    d = L.space.local_dim
    N = L.space.num_modes
    single = OPONetworkParams(
        num_modes=1, pump=p.pump, loss=p.loss, saturation=p.saturation
    )
    L1 = build_liouvillian(single, FockSpace(1, d)).matrix.toarray()
    if np.abs(L1.imag).max() == 0.0:
        L1 = L1.real
    lam, V = np.linalg.eig(L1)
    if not np.isfinite(np.linalg.cond(V)) or np.linalg.cond(V) > 1e12:
        return None  # defective single-mode generator; caller falls back to LU
    Vinv = np.linalg.inv(V)
    d2 = d * d
    den = sum(
        lam.reshape([d2 if i == mu else 1 for i in range(N)]) for mu in range(N)
    ) - shift
    inv_den = 1.0 / den
    # vec index order is (m_1..m_N, n_1..n_N); pair up (m_mu, n_mu) axes
    perm_fwd = [x for mu in range(N) for x in (mu, N + mu)]
    perm_bwd = list(np.argsort(perm_fwd))

    def apply(x):
        t = x.reshape([d] * (2 * N)).transpose(perm_fwd).reshape([d2] * N)
        t = t.astype(complex)
        for ax in range(N):
            t = np.moveaxis(np.tensordot(Vinv, t, axes=(1, ax)), 0, ax)
        t *= inv_den
        for ax in range(N):
            t = np.moveaxis(np.tensordot(V, t, axes=(1, ax)), 0, ax)
        out = t.reshape([d] * (2 * N)).transpose(perm_bwd).reshape(-1)
        return out.real if np.isrealobj(x) else out

    return apply


def _solve_nullspace_gmres(L: SparseSuperoperator) -> np.ndarray:
    if L.params is None:
        return _solve_nullspace_lu(L)
    prec = _decoupled_preconditioner(L, shift=0.5 * max(L.params.loss, 1e-3))
    if prec is None:
        return _solve_nullspace_lu(L)
    M, b = _pinned_system(L)
    Mop = spla.LinearOperator(M.shape, matvec=prec)
    x, info = spla.gmres(M, b, M=Mop, rtol=1e-12, atol=0.0, restart=50, maxiter=400)
    if info != 0:
        raise SteadyStateError(f"preconditioned GMRES did not converge (info={info})")
    return x.astype(complex)


def _solve_arnoldi(L: SparseSuperoperator, k: int = 1) -> tuple:
    """Shift-invert ARPACK solve; returns (vecs, vals) of the zero cluster."""
    D = L.space.joint_dim
    v0 = np.zeros(D * D, dtype=L.matrix.dtype)
    v0[0] = 1.0  # vec of the vacuum projector: guaranteed nonzero trace
    sigma = -1e-6 * max(1.0, _characteristic_rate(L))
    vals, vecs = spla.eigs(
        L.matrix.tocsc(), k=k, sigma=sigma, which="LM", v0=v0, tol=1e-12
    )
    return vals, vecs


def _characteristic_rate(L: SparseSuperoperator) -> float:
    # crude scale from the generator itself, for shift and tolerance scaling
    return float(np.abs(L.matrix.diagonal()).max()) or 1.0


def _solve_dense(L: SparseSuperoperator, zero_tol: float):
    if L.dim > DENSE_LIMIT:
        raise SteadyStateError(
            f"dense_fallback limited to superoperator dim <= {DENSE_LIMIT}, got {L.dim}"
        )
    vals, vecs = np.linalg.eig(L.matrix.toarray())
    order = np.argsort(np.abs(vals))
    cluster = [i for i in order if np.abs(vals[i]) <= zero_tol]
    if not cluster:
        cluster = [order[0]]
    return vals[cluster], vecs[:, cluster]


def _combine_zero_cluster(vals, vecs, L: SparseSuperoperator, zero_tol: float):
    """Pick (or combine) the physical state from a near-zero eigenvalue cluster."""
    keep = np.abs(vals) <= zero_tol
    if not keep.any():
        keep = np.abs(vals) == np.abs(vals).min()
    vecs = vecs[:, keep]
    degenerate = vecs.shape[1] > 1
    if not degenerate:
        return vecs[:, 0], False
    # Degenerate cluster: take the trace-weighted Hermitian combination, which
    # projects onto the trace-normalizable direction of the null space.
    t = trace_functional(L.space)
    weights = vecs.T @ t.astype(complex)
    combo = vecs @ np.conj(weights)
    if np.abs(t @ combo) < 1e-12 * np.abs(combo).max():
        combo = vecs[:, np.argmax(np.abs(weights))]
    return combo, True


def solve_steady_state(
    L: SparseSuperoperator,
    method: str = "auto",
    psd_tol: float = 1e-8,
) -> DensityMatrix:
    """Compute the stationary density matrix with L rho = 0.

    ``method`` is one of ``nullspace_gmres``, ``nullspace_lu``,
    ``shift_invert_arnoldi``, ``dense_fallback`` or ``auto``
    (spectrally preconditioned GMRES when network parameters are attached,
    complete LU otherwise).
    """
    zero_tol = 1e-10 * max(1.0, _characteristic_rate(L))
    if method == "auto":
        method = "nullspace_gmres" if L.params is not None else "nullspace_lu"

    if method == "nullspace_lu":
        vec = _solve_nullspace_lu(L)
        return _finalize(vec, L, method, psd_tol=psd_tol)
    if method == "nullspace_gmres":
        vec = _solve_nullspace_gmres(L)
        return _finalize(vec, L, method, psd_tol=psd_tol)
    if method == "shift_invert_arnoldi":
        k = 1 if L.dim <= 16 else 4
        vals, vecs = _solve_arnoldi(L, k=min(k, L.dim - 2))
        vec, degenerate = _combine_zero_cluster(vals, vecs, L, zero_tol)
        return _finalize(vec, L, method, degenerate=degenerate, psd_tol=psd_tol)
    if method == "dense_fallback":
        vals, vecs = _solve_dense(L, zero_tol)
        vec, degenerate = _combine_zero_cluster(vals, vecs, L, zero_tol)
        return _finalize(vec, L, method, degenerate=degenerate, psd_tol=psd_tol)
    raise ValueError(f"unknown method {method!r}")


def default_dt(pump: float, loss: float, saturation: float, n_max: int) -> float:
    """Stable RK4 step for the explicit oracle integrator."""
    return 0.02 / (loss + pump + saturation * n_max**2)


def evolve(
    L: SparseSuperoperator,
    rho0: np.ndarray,
    t_final: float,
    dt: float,
) -> DensityMatrix:
    """Integrate d(rho)/dt = L rho with classical RK4 from rho0 to t_final.

    Oracle path only: explicit, unconditionally trace-preserving up to
    roundoff, with norm blow-up detection for step-size instability.
    """
    D = L.space.joint_dim
    if rho0.shape != (D, D):
        raise ValueError(f"expected {(D, D)} initial state, got {rho0.shape}")
    M = L.matrix
    x = rho0.reshape(-1).astype(complex)
    norm0 = np.linalg.norm(x)
    steps = int(np.ceil(t_final / dt))
    dt = t_final / steps
    for _ in range(steps):
        k1 = M @ x
        k2 = M @ (x + 0.5 * dt * k1)
        k3 = M @ (x + 0.5 * dt * k2)
        k4 = M @ (x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.isfinite(x).all() or np.linalg.norm(x) > 1e6 * norm0:
            raise SteadyStateError("RK4 norm blow-up: decrease dt")
    rho = x.reshape(D, D)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(
        data=rho,
        space=L.space,
        residual=float(np.linalg.norm(M @ rho.reshape(-1))),
        solver="rk4",
        min_eigenvalue=float(np.linalg.eigvalsh(rho).min()),
    )


def zero_cluster_diagnostics(L: SparseSuperoperator, k: int = 6) -> dict:
    """Smallest-magnitude Liouvillian eigenvalues and the spectral gap.

    Returns ``{"eigenvalues": ..., "gap": ...}`` with gap = -max Re(lambda)
    over the nonzero cluster; a sensible evolve horizon is ~10/gap.
    """
    zero_tol = 1e-10 * max(1.0, _characteristic_rate(L))
    if L.dim <= DENSE_LIMIT:
        vals = np.linalg.eigvals(L.matrix.toarray())
        vals = vals[np.argsort(np.abs(vals))][:k]
    else:
        k = min(k, L.dim - 2)
        vals, _ = _solve_arnoldi(L, k=k)
        vals = vals[np.argsort(np.abs(vals))]
    nonzero = vals[np.abs(vals) > zero_tol]
    gap = float(-nonzero.real.max()) if len(nonzero) else np.nan
    return {"eigenvalues": vals, "gap": gap}
