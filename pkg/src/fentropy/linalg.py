"""Dense complex Hermitian linear algebra.

The eigensolver is a cyclic Jacobi iteration written against stacks of
matrices, so a batch of ``(n, d, d)`` Hermitian matrices is diagonalized with
one rotation sweep applied to every member at once.  Single matrices go
through the same code path with ``n = 1``.
"""
from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, NumericalError, SymmetryError

HERMITIAN_TOL = 1e-12
OFFDIAG_REL_TOL = 1e-14
MAX_SWEEPS = 100
CLAMP_TOL = 1e-10


class EigenDecomposition(NamedTuple):
    """Eigenvalues sorted descending; ``eigenvectors[:, i]`` pairs with ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_hermitian(H, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``H`` as a complex square array after checking ``H == H^dagger`` entrywise."""
    H = np.asarray(H, dtype=complex)
    if H.ndim < 2 or H.shape[-1] != H.shape[-2] or H.shape[-1] < 1:
        raise SymmetryError(f"expected a square matrix with dim >= 1, got shape {H.shape}")
    dev = np.max(np.abs(H - np.conj(np.swapaxes(H, -1, -2))), initial=0.0)
    if dev > tol:
        raise SymmetryError(f"matrix is not Hermitian: max |H - H^dagger| = {dev:.3e} > {tol:g}")
    return H


def _jacobi_batch(A: np.ndarray, vectors: bool):
    # A: (n, d, d) Hermitian, modified in place.
    n, d, _ = A.shape
    V = np.broadcast_to(np.eye(d, dtype=complex), (n, d, d)).copy() if vectors else None
    fro = np.sqrt(np.sum(np.abs(A) ** 2, axis=(1, 2)))
    thresh = OFFDIAG_REL_TOL * fro
    offmask = ~np.eye(d, dtype=bool)

    def off(A):
        return np.sqrt(np.sum(np.abs(A[:, offmask]) ** 2, axis=1))

    active = off(A) > thresh
    sweeps = 0
    while active.any():
        if sweeps >= MAX_SWEEPS:
            worst = float(np.max(off(A) - thresh))
            raise NumericalError(
                f"Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps "
                f"(off-diagonal excess {worst:.3e})"
            )
        idx = np.flatnonzero(active)
        B = A[idx]
        W_all = V[idx] if vectors else None
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = B[:, p, q]
                r = np.abs(apq)
                nz = r > 0
                if not nz.any():
                    continue
                phase = np.where(nz, apq / np.where(nz, r, 1.0), 1.0)
                app = B[:, p, p].real
                aqq = B[:, q, q].real
                # Real rotation for [[app, r], [r, aqq]]; t = tan(theta), smaller root.
                with np.errstate(divide="ignore", invalid="ignore"):
                    tau = np.where(nz, (aqq - app) / (2.0 * np.where(nz, r, 1.0)), 0.0)
                    t = np.where(
                        nz,
                        np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau)),
                        0.0,
                    )
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # W = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane.
                cph = np.conj(phase)
                w_pp = c
                w_pq = s
                w_qp = -s * cph
                w_qq = c * cph
                col_p = B[:, :, p].copy()
                col_q = B[:, :, q]
                B[:, :, p] = col_p * w_pp[:, None] + col_q * w_qp[:, None]
                B[:, :, q] = col_p * w_pq[:, None] + col_q * w_qq[:, None]
                row_p = B[:, p, :].copy()
                row_q = B[:, q, :]
                B[:, p, :] = row_p * np.conj(w_pp)[:, None] + row_q * np.conj(w_qp)[:, None]
                B[:, q, :] = row_p * np.conj(w_pq)[:, None] + row_q * np.conj(w_qq)[:, None]
                B[:, p, q] = 0.0
                B[:, q, p] = 0.0
                B[:, p, p] = B[:, p, p].real
                B[:, q, q] = B[:, q, q].real
                if vectors:
                    vp = W_all[:, :, p].copy()
                    vq = W_all[:, :, q]
                    W_all[:, :, p] = vp * w_pp[:, None] + vq * w_qp[:, None]
                    W_all[:, :, q] = vp * w_pq[:, None] + vq * w_qq[:, None]
        A[idx] = B
        if vectors:
            V[idx] = W_all
        active[idx] = off(B) > thresh[idx]
        sweeps += 1
    return np.real(np.diagonal(A, axis1=1, axis2=2)).copy(), V


def eigh_batch(H, vectors: bool = True):
    """Diagonalize a stack of Hermitian matrices of shape ``(n, d, d)``.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues of shape ``(n, d)``
    sorted descending (stable for ties) and eigenvectors ``(n, d, d)`` or
    ``None`` when ``vectors`` is false.
    """
    H = as_hermitian(H)
    if H.ndim != 3:
        raise SymmetryError(f"expected a stack of matrices, got shape {H.shape}")
    A = 0.5 * (H + np.conj(np.swapaxes(H, -1, -2)))
    lam, V = _jacobi_batch(A, vectors)
    order = np.argsort(-lam, axis=1, kind="stable")
    lam = np.take_along_axis(lam, order, axis=1)
    if vectors:
        V = np.take_along_axis(V, order[:, None, :], axis=2)
    return lam, V


def eigh(H) -> EigenDecomposition:
    """Eigendecomposition ``H = U diag(lam) U^dagger`` of one Hermitian matrix.

    >>> eigh([[0, 1], [1, 0]]).eigenvalues
    array([ 1., -1.])
    """
    H = as_hermitian(H)
    if H.ndim != 2:
        raise SymmetryError(f"expected a single matrix, got shape {H.shape}")
    lam, V = eigh_batch(H[None])
    return EigenDecomposition(lam[0], V[0])


def eigvalsh(H) -> np.ndarray:
    H = as_hermitian(H)
    if H.ndim == 2:
        return eigh_batch(H[None], vectors=False)[0][0]
    return eigh_batch(H, vectors=False)[0]


def clamp_spectrum(lam: np.ndarray, lo: float, hi: float, tol: float = CLAMP_TOL) -> np.ndarray:
    """Snap eigenvalues within ``tol`` of ``[lo, hi]`` onto the interval.

    Anything further outside raises :class:`DomainError`.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.size and (lam.min() < lo - tol or lam.max() > hi + tol):
        raise DomainError(
            f"spectrum [{lam.min():.6g}, {lam.max():.6g}] lies outside the domain [{lo:g}, {hi:g}]"
        )
    return np.clip(lam, lo, hi)


def apply_function(H, f: Callable) -> np.ndarray:
    """Return ``sum_i f(lam_i) P_i`` for the spectral decomposition of ``H``.

    ``f`` may be a :class:`~fentropy.entropy.ConvexFunction`, in which case the
    spectrum is clamped onto its domain first, or any vectorized callable.
    """
    lam, U = eigh(H)
    domain = getattr(f, "domain", None)
    if domain is not None:
        lam = clamp_spectrum(lam, *domain)
    vals = np.asarray(f(lam), dtype=float)
    out = (U * vals[None, :]) @ np.conj(U.T)
    return 0.5 * (out + np.conj(out.T))


def trace_abs_half(H) -> float:
    """Half the trace norm, ``0.5 * sum_i |lam_i(H)|``.

    For traceless ``H`` this is also the sum of the positive eigenvalues; the
    two forms are compared and a :class:`NumericalError` is raised if they
    disagree by more than 1e-10.
    """
    H = as_hermitian(H)
    lam = eigvalsh(H)
    half = 0.5 * float(np.sum(np.abs(lam)))
    tr = float(np.trace(H).real)
    if abs(tr) <= 1e-12:
        pos = float(np.sum(np.maximum(lam, 0.0)))
        if abs(pos - half) > 1e-10:
            raise NumericalError(f"trace-norm forms disagree: {half!r} vs {pos!r}")
    return half
