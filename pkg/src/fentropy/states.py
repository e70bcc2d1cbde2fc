"""Density matrices, trace distance and the optimal distinguishing projector."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import DimensionError, NumericalError, PositivityError, SimplexError, TraceError, ValidationError
from .linalg import as_hermitian, eigh, eigh_batch, eigvalsh

TRACE_RENORM_TOL = 1e-8
NEG_EIG_TOL = 1e-8
SIMPLEX_TOL = 1e-12
PROJECTOR_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated unit-trace positive-semidefinite operator.

    Build instances with :func:`validate_density` (or the other constructors
    here); the raw constructor trusts its argument.
    """

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues, descending, clamped to be nonnegative."""
        return np.maximum(eigvalsh(self.matrix), 0.0)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def as_probability_vector(p, tol: float = SIMPLEX_TOL) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise SimplexError(f"probability vector must be 1-D and nonempty, got shape {p.shape}")
    if np.any(p < 0):
        raise SimplexError(f"probability vector has negative entry {p.min()!r}")
    s = float(p.sum())
    if abs(s - 1.0) > tol:
        raise SimplexError(f"probability vector sums to {s!r}, not 1")
    return p


def validate_density(M) -> DensityMatrix:
    """Check and normalize a candidate density matrix.

    Traces within 1e-8 of one are renormalized and eigenvalues in
    ``[-1e-8, 0)`` are clamped to zero; anything worse is rejected.

    >>> validate_density(np.diag([0.5, 0.5])).dim
    2
    """
    H = as_hermitian(M)
    if H.ndim != 2:
        raise DimensionError(f"expected a single matrix, got shape {H.shape}")
    d = H.shape[0]
    if d < 2:
        raise DimensionError(f"density matrices need dim >= 2, got {d}")
    H = 0.5 * (H + H.conj().T)
    tr = float(np.trace(H).real)
    if abs(tr - 1.0) > TRACE_RENORM_TOL:
        raise TraceError(f"trace must be 1, got tr = {tr!r}")
    lam, U = eigh(H)
    if lam[-1] < -NEG_EIG_TOL:
        raise PositivityError(f"matrix is not positive semidefinite: min eigenvalue {lam[-1]!r}")
    if lam[-1] < 0:
        lam = np.maximum(lam, 0.0)
        H = (U * lam) @ U.conj().T
        H = 0.5 * (H + H.conj().T)
    H = H / np.trace(H).real
    return DensityMatrix(H)


def from_probabilities(p) -> DensityMatrix:
    p = as_probability_vector(p)
    if p.size < 2:
        raise DimensionError(f"density matrices need dim >= 2, got {p.size}")
    return DensityMatrix(np.diag(p / p.sum()).astype(complex))


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a 64-bit seed; all sampling in the package goes through this."""
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


def substream(seed: int, task: int) -> np.random.Generator:
    return make_rng(int(seed) ^ int(task))


def ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    """I.i.d. standard complex Gaussians (unit variance)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_density_batch(d: int, n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """``n`` Ginibre-ensemble density matrices ``G G^dagger / tr(G G^dagger)``, shape ``(n, d, d)``."""
    if d < 2:
        raise DimensionError(f"density matrices need dim >= 2, got {d}")
    G = ginibre(rng, (n, d, rank or d))
    R = G @ np.conj(np.swapaxes(G, 1, 2))
    R = 0.5 * (R + np.conj(np.swapaxes(R, 1, 2)))
    return R / np.trace(R, axis1=1, axis2=2).real[:, None, None]


def random_density(d: int, seed: int) -> DensityMatrix:
    if d < 2:
        raise DimensionError(f"density matrices need dim >= 2, got {d}")
    return DensityMatrix(random_density_batch(d, 1, make_rng(seed))[0])


def random_unitary_batch(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitaries from the QR decomposition of Ginibre matrices (phases fixed)."""
    Q, R = np.linalg.qr(ginibre(rng, (n, d, d)))
    diag = np.diagonal(R, axis1=1, axis2=2)
    ph = diag / np.where(np.abs(diag) > 0, np.abs(diag), 1.0)
    return Q * ph[:, None, :]


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    return random_unitary_batch(d, 1, rng)[0]


def _check_pair(rho, sigma):
    r = np.asarray(rho.matrix if isinstance(rho, DensityMatrix) else rho)
    s = np.asarray(sigma.matrix if isinstance(sigma, DensityMatrix) else sigma)
    if r.shape != s.shape:
        raise DimensionError(f"dimension mismatch: {r.shape} vs {s.shape}")
    return r, s


def trace_distance(rho, sigma) -> float:
    """``T(rho, sigma) = 0.5 tr|rho - sigma|``.

    Computed as half the absolute eigenvalue sum and as the positive
    eigenvalue sum; the two must agree within 1e-10.

    >>> trace_distance(from_probabilities([1, 0]), from_probabilities([0, 1]))
    1.0
    """
    r, s = _check_pair(rho, sigma)
    # fixed operand order makes the result exactly symmetric
    if r.tobytes() > s.tobytes():
        r, s = s, r
    lam = eigvalsh(r - s)
    half = 0.5 * float(np.sum(np.abs(lam)))
    pos = float(np.sum(np.maximum(lam, 0.0)))
    if abs(half - pos) > 1e-10:
        raise NumericalError(f"trace distance forms disagree: {half!r} vs {pos!r}")
    return min(half, 1.0)


def trace_distance_batch(R: np.ndarray, S: np.ndarray) -> np.ndarray:
    lam = eigh_batch(R - S, vectors=False)[0]
    return np.clip(np.sum(np.maximum(lam, 0.0), axis=1), 0.0, 1.0)


def optimal_projector(rho, sigma) -> tuple[np.ndarray, float]:
    """Projector onto the positive eigenspace of ``rho - sigma`` and ``tr(P (rho - sigma))``.

    This projector attains the supremum of ``tr(P (rho - sigma))`` over all
    orthogonal projectors, which equals the trace distance.
    """
    r, s = _check_pair(rho, sigma)
    delta = r - s
    lam, U = eigh(delta)
    cols = U[:, lam > 0]
    P = cols @ cols.conj().T
    value = float(np.trace(P @ delta).real)
    return P, value


def is_projector(P, tol: float = PROJECTOR_TOL) -> bool:
    P = np.asarray(P, dtype=complex)
    return bool(
        np.max(np.abs(P @ P - P), initial=0.0) <= tol
        and np.max(np.abs(P - P.conj().T), initial=0.0) <= tol
    )


# -- file format -----------------------------------------------------------

def matrix_to_json(M) -> dict:
    M = np.asarray(M.matrix if isinstance(M, DensityMatrix) else M, dtype=complex)
    return {"dim": int(M.shape[0]), "re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_json(obj) -> np.ndarray:
    """Decode ``{"dim", "re", "im"}``; a bare JSON array is read as a probability vector."""
    if isinstance(obj, list):
        return np.diag(as_probability_vector(obj)).astype(complex)
    try:
        d = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros((d, d))), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix object: {exc}") from exc
    if re.shape != (d, d) or im.shape != (d, d):
        raise DimensionError(f"matrix object declares dim {d} but has shapes {re.shape}, {im.shape}")
    return re + 1j * im


def load_density(path) -> DensityMatrix:
    with open(Path(path)) as fh:
        return validate_density(matrix_from_json(json.load(fh)))
