"""Numerical certification of the f-entropy continuity bound.

Three independent routes are provided:

* :func:`sample_check` draws random and structured pairs of density matrices
  and records the slack ``bound(T) - |S_f(rho) - S_f(sigma)|``.
* :func:`oracle_max_Df` brute-forces ``max D_f(p, q) = sum f(p) - sum f(q)``
  over classical pairs at total-variation distance ``eps`` (d = 2, 3) and
  polishes the best grid points by coordinate ascent.
* :func:`sweep` tabulates the bound over an ``eps`` grid, optionally joined
  with per-``eps`` sampled slack and oracle gap columns.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import f_bound, f_bound_grid, f_bound_trace_t, regime
from .entropy import ConvexFunction, entropy_from_spectrum
from .errors import ParameterError
from .linalg import eigh_batch
from .majorization import SimplexPair
from .states import ginibre, random_density_batch, random_unitary_batch, substream

VIOLATION_TOL = 1e-9
BLOCK = 2048
STRUCTURED_TASK = 1 << 32
STRUCTURED_KINDS = ("commuting", "rank_deficient", "pure_vs_mixed", "near_identical", "near_peak")


@dataclass
class VerificationReport:
    f_name: str
    d: int
    samples: int
    seed: int
    max_entropy_gap: float
    bound_at_gap: float
    min_slack: float
    violations: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self, include_elapsed: bool = False) -> dict:
        out = {
            "f_name": self.f_name,
            "d": self.d,
            "samples": self.samples,
            "seed": self.seed,
            "max_entropy_gap": self.max_entropy_gap,
            "bound_at_gap": self.bound_at_gap,
            "min_slack": self.min_slack,
            "violations": [[int(i), float(s)] for i, s in self.violations],
        }
        if include_elapsed:
            out["elapsed"] = self.elapsed
        return out


@dataclass
class OracleResult:
    eps: float
    d: int
    f_name: str
    max_Df: float
    argmax: SimplexPair
    bound: float
    gap: float
    grid_points: int
    polish_iterations: int

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "d": self.d,
            "f_name": self.f_name,
            "max_Df": self.max_Df,
            "argmax": self.argmax.to_dict(),
            "bound": self.bound,
            "gap": self.gap,
            "grid_points": self.grid_points,
            "polish_iterations": self.polish_iterations,
        }


# -- sampled pairs ---------------------------------------------------------

@dataclass(frozen=True)
class PairSpectra:
    """Spectra of rho, sigma and the trace distance for a batch of sampled pairs."""

    rho: np.ndarray
    sigma: np.ndarray
    distance: np.ndarray

    def __len__(self):
        return self.distance.size


def _spectra_of_pairs(R: np.ndarray, S: np.ndarray) -> PairSpectra:
    lam = eigh_batch(np.concatenate([R, S, R - S]), vectors=False)[0]
    n = R.shape[0]
    dist = np.clip(np.sum(np.maximum(lam[2 * n:], 0.0), axis=1), 0.0, 1.0)
    return PairSpectra(np.maximum(lam[:n], 0.0), np.maximum(lam[n:2 * n], 0.0), dist)


def _conjugate(U, M):
    return U @ M @ np.conj(np.swapaxes(U, 1, 2))


def structured_pairs(d: int, n: int, rng: np.random.Generator):
    """``n`` pairs cycling through commuting, rank-deficient, pure-vs-mixed,
    near-identical and near-peak-distance constructions."""
    kinds = [STRUCTURED_KINDS[i % len(STRUCTURED_KINDS)] for i in range(n)]
    R = np.empty((n, d, d), dtype=complex)
    S = np.empty((n, d, d), dtype=complex)
    for kind in STRUCTURED_KINDS:
        idx = [i for i, k in enumerate(kinds) if k == kind]
        m = len(idx)
        if not m:
            continue
        if kind == "commuting":
            U = random_unitary_batch(d, m, rng)
            p = rng.dirichlet(np.full(d, 0.5), size=m)
            q = rng.dirichlet(np.full(d, 0.5), size=m)
            r, s = _conjugate(U, _diag_batch(p)), _conjugate(U, _diag_batch(q))
        elif kind == "rank_deficient":
            rank = int(rng.integers(1, d)) if d > 2 else 1
            r = random_density_batch(d, m, rng, rank=rank)
            s = random_density_batch(d, m, rng, rank=max(1, d - rank))
        elif kind == "pure_vs_mixed":
            r = random_density_batch(d, m, rng, rank=1)
            s = random_density_batch(d, m, rng)
        elif kind == "near_identical":
            r = random_density_batch(d, m, rng)
            tau = random_density_batch(d, m, rng)
            delta = 10.0 ** rng.uniform(-6, -2, size=m)
            s = (1 - delta)[:, None, None] * r + delta[:, None, None] * tau
        else:
            peak = 1.0 - 1.0 / d
            eps = np.clip(peak + rng.uniform(-1e-3, 1e-3, size=m), 0.0, 1.0)
            p = np.zeros((m, d))
            p[:, 0] = 1.0
            q = np.repeat((eps / (d - 1))[:, None], d, axis=1)
            q[:, 0] = 1.0 - eps
            U = random_unitary_batch(d, m, rng)
            r, s = _conjugate(U, _diag_batch(p)), _conjugate(U, _diag_batch(q))
        R[idx] = r
        S[idx] = s
    return R, S, kinds


def _diag_batch(p: np.ndarray) -> np.ndarray:
    n, d = p.shape
    out = np.zeros((n, d, d), dtype=complex)
    out[:, np.arange(d), np.arange(d)] = p
    return out


def _block_sizes(n: int):
    return [min(BLOCK, n - b * BLOCK) for b in range((n + BLOCK - 1) // BLOCK)]


def _random_block(d: int, seed: int, task: int, size: int) -> PairSpectra:
    rng = substream(seed, task)
    R = random_density_batch(d, size, rng)
    S = random_density_batch(d, size, rng)
    return _spectra_of_pairs(R, S)


def _concat(parts) -> PairSpectra:
    return PairSpectra(
        np.concatenate([p.rho for p in parts]),
        np.concatenate([p.sigma for p in parts]),
        np.concatenate([p.distance for p in parts]),
    )


_SPECTRA_CACHE: dict = {}
_CACHE_SIZE = 32


def sample_spectra(d: int, n: int, seed: int, workers: int = 1) -> PairSpectra:
    """Spectra for ``n`` Ginibre pairs followed by ``n // 10`` structured pairs.

    Random pairs are drawn in blocks of 2048; block ``b`` uses the PCG64
    stream seeded with ``seed ^ b`` and the structured pairs use
    ``seed ^ 2**32``, so the result does not depend on ``workers``.
    Results are cached per ``(d, n, seed)`` and returned read-only.
    """
    if int(d) != d or d < 2:
        raise ParameterError(f"d must be an integer >= 2, got {d!r}")
    if int(n) != n or n < 1:
        raise ParameterError(f"need at least one sample, got n={n!r}")
    key = (int(d), int(n), int(seed))
    if key in _SPECTRA_CACHE:
        return _SPECTRA_CACHE[key]
    d, n, seed = key
    tasks = [(d, seed, b, size) for b, size in enumerate(_block_sizes(n))]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: _random_block(*a), tasks))
    else:
        parts = [_random_block(*a) for a in tasks]
    m = n // 10
    if m:
        R, S, _ = structured_pairs(d, m, substream(seed, STRUCTURED_TASK))
        parts.append(_spectra_of_pairs(R, S))
    out = _concat(parts)
    for a in (out.rho, out.sigma, out.distance):
        a.setflags(write=False)
    if len(_SPECTRA_CACHE) >= _CACHE_SIZE:
        _SPECTRA_CACHE.pop(next(iter(_SPECTRA_CACHE)))
    _SPECTRA_CACHE[key] = out
    return out


def clear_cache() -> None:
    _SPECTRA_CACHE.clear()


def slacks(f: ConvexFunction, d: int, spectra: PairSpectra):
    """Per-pair entropy gaps, bound values and slacks."""
    gap = np.abs(entropy_from_spectrum(spectra.rho, f) - entropy_from_spectrum(spectra.sigma, f))
    bound = f_bound_grid(f, d, spectra.distance)
    return gap, bound, bound - gap


def sample_check(
    f: ConvexFunction, d: int, n: int, seed: int, tol: float = VIOLATION_TOL, workers: int = 1
) -> VerificationReport:
    """Check ``|S_f(rho) - S_f(sigma)| <= bound(T(rho, sigma))`` on sampled pairs.

    A negative slack beyond ``tol`` is recorded as a violation, not raised.
    """
    if int(d) != d or d < 2:
        raise ParameterError(f"d must be an integer >= 2, got {d!r}")
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    if f.t_max < 1.0:
        raise ParameterError(f"{f.name} must be defined on [0, 1]")
    start = time.perf_counter()
    spectra = sample_spectra(int(d), int(n), int(seed), workers)
    gap, bound, slack = slacks(f, d, spectra)
    i = int(np.argmax(gap))
    bad = np.flatnonzero(slack < -tol)
    return VerificationReport(
        f_name=f.label,
        d=int(d),
        samples=len(spectra),
        seed=int(seed),
        max_entropy_gap=float(gap[i]),
        bound_at_gap=float(bound[i]),
        min_slack=float(slack.min()),
        violations=[(int(j), float(slack[j])) for j in bad],
        elapsed=time.perf_counter() - start,
    )


def pairs_at_distance(d: int, eps: float, n: int, rng: np.random.Generator):
    """``n`` random pairs with trace distance exactly ``eps``.

    Two states with orthogonal supports (distance 1) are mixed with a common
    Ginibre state: ``eps * rho0 + (1 - eps) * tau`` against
    ``eps * sigma0 + (1 - eps) * tau``.
    """
    U = random_unitary_batch(d, n, rng)
    split = rng.integers(1, d, size=n)
    w = np.abs(ginibre(rng, (n, d))) ** 2
    mask = np.arange(d)[None, :] < split[:, None]
    a = np.where(mask, w, 0.0)
    b = np.where(mask, 0.0, w)
    a /= a.sum(axis=1, keepdims=True)
    b /= b.sum(axis=1, keepdims=True)
    rho0, sigma0 = _conjugate(U, _diag_batch(a)), _conjugate(U, _diag_batch(b))
    tau = random_density_batch(d, n, rng)
    return eps * rho0 + (1 - eps) * tau, eps * sigma0 + (1 - eps) * tau


# -- classical oracle ------------------------------------------------------

def _patterns(d: int, eps: float):
    """Maps from the unit cube onto sign-pattern slices of the feasible set.

    Each map returns ``(p, q)`` arrays of shape ``(N, d)`` with
    ``0.5 * ||p - q||_1 = eps`` by construction.
    """
    e = eps

    def d2_down(s):
        a = e + s[:, 0] * (1 - e)
        return np.stack([a, 1 - a], 1), np.stack([a - e, 1 - a + e], 1)

    def d2_up(s):
        a = s[:, 0] * (1 - e)
        return np.stack([a, 1 - a], 1), np.stack([a + e, 1 - a - e], 1)

    def d3_k1(s):
        # one coordinate with p > q
        q1 = s[:, 0] * (1 - e)
        p2 = s[:, 1] * (1 - e - q1)
        u = s[:, 2] * e
        p3 = 1 - e - q1 - p2
        return np.stack([q1 + e, p2, p3], 1), np.stack([q1, p2 + u, p3 + e - u], 1)

    def d3_k2(s):
        # two coordinates with p >= q
        q1 = s[:, 0] * (1 - e)
        q2 = s[:, 1] * (1 - e - q1)
        v = s[:, 2] * e
        p3 = 1 - e - q1 - q2
        return np.stack([q1 + v, q2 + e - v, p3], 1), np.stack([q1, q2, p3 + e], 1)

    if d == 2:
        # extremal seed P(1), Q(1) sits at s = 1 on the first branch
        return [(d2_down, 1, np.array([1.0])), (d2_up, 1, np.array([0.0]))]
    return [(d3_k1, 3, np.array([1.0, 0.5, 0.5])), (d3_k2, 3, np.array([1.0, 0.0, 1.0]))]


def _objective(f: ConvexFunction, param):
    def obj(s):
        p, q = param(s)
        p = np.clip(p, 0.0, 1.0)
        q = np.clip(q, 0.0, 1.0)
        return np.sum(f(p), axis=1) - np.sum(f(q), axis=1)

    return obj


def _polish(obj, starts: np.ndarray, step: float, halvings: int):
    """Cyclic coordinate ascent in the unit cube, vectorized over starting points."""
    S = starts.copy()
    val = obj(S)
    moves = 0
    for _ in range(halvings):
        for _round in range(64):
            improved = False
            for c in range(S.shape[1]):
                for sign in (1.0, -1.0):
                    cand = S.copy()
                    cand[:, c] = np.clip(cand[:, c] + sign * step, 0.0, 1.0)
                    cv = obj(cand)
                    better = cv > val
                    if better.any():
                        S[better] = cand[better]
                        val[better] = cv[better]
                        moves += int(better.sum())
                        improved = True
            if not improved:
                break
        step *= 0.5
    return S, val, moves


def oracle_max_Df(
    f: ConvexFunction, d: int, eps: float, grid: int = 400, polish: int = 60, starts: int = 8
) -> OracleResult:
    """Brute-force ``max D_f`` over classical pairs at distance ``eps``.

    For ``d = 2`` each branch ``b = a -/+ eps`` is searched on ``grid``
    points; for ``d = 3`` both sign patterns (one or two coordinates with
    ``p > q``) are searched on a cube grid with ``max(12, grid // 4)`` points
    per axis.  The best points, together with the known extremal point, are
    then polished with ``polish`` step halvings.
    """
    if d not in (2, 3):
        raise ParameterError("oracle supports d in {2,3}")
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"eps must be in [0, 1], got {eps!r}")
    if grid < 50:
        raise ParameterError(f"grid must be >= 50, got {grid!r}")
    bound = f_bound(f, d, eps).value
    if eps == 0.0:
        p = np.zeros(d)
        p[0] = 1.0
        return OracleResult(0.0, d, f.label, 0.0, SimplexPair.of(p, p), bound, bound, 0, 0)

    best_val, best_pair, total_points, total_moves = -np.inf, None, 0, 0
    for param, dim, seed_point in _patterns(d, float(eps)):
        obj = _objective(f, param)
        m = grid if dim == 1 else max(12, grid // 4)
        axes = np.linspace(0.0, 1.0, m)
        S = np.stack(np.meshgrid(*([axes] * dim), indexing="ij"), -1).reshape(-1, dim)
        vals = obj(S)
        total_points += S.shape[0]
        top = np.argsort(-vals, kind="stable")[:starts]
        init = np.vstack([seed_point[None, :], S[top]])
        P, V, moves = _polish(obj, init, 1.0 / (m - 1), polish)
        total_moves += moves
        j = int(np.argmax(V))
        if V[j] > best_val:
            p, q = param(P[j:j + 1])
            best_val = float(V[j])
            p = np.clip(p[0], 0.0, 1.0)
            q = np.clip(q[0], 0.0, 1.0)
            best_pair = SimplexPair(p, q, 0.5 * float(np.sum(np.abs(p - q))))
    return OracleResult(
        eps=float(eps),
        d=int(d),
        f_name=f.label,
        max_Df=best_val,
        argmax=best_pair,
        bound=bound,
        gap=bound - best_val,
        grid_points=total_points,
        polish_iterations=total_moves,
    )


# -- sweeps ----------------------------------------------------------------

@dataclass
class SweepRow:
    eps: float
    delta: float
    regime: str
    min_slack: float | None = None
    oracle_gap: float | None = None


def sweep(
    f: ConvexFunction,
    d: int,
    eps_grid,
    t: float | None = None,
    n: int = 0,
    seed: int = 0,
    oracle: bool = False,
    oracle_grid: int = 400,
) -> list[SweepRow]:
    """Tabulate the bound over an ascending ``eps`` grid.

    With ``n > 0`` each row also gets the minimum slack over ``n`` random pairs
    at exactly that trace distance (``t = 1`` only); with ``oracle`` the
    classical oracle gap is added (``d`` in {2, 3}).
    """
    eps_grid = [float(e) for e in np.asarray(eps_grid, dtype=float).ravel()]
    if any(b < a for a, b in zip(eps_grid, eps_grid[1:])):
        raise ParameterError("eps grid must be sorted ascending")
    tt = 1.0 if t is None else float(t)
    if eps_grid and (eps_grid[0] < 0 or eps_grid[-1] > tt):
        raise ParameterError(f"eps grid must lie in [0, {tt:g}]")
    if (n or oracle) and tt != 1.0:
        raise ParameterError("slack and oracle columns are only defined for t = 1")
    if oracle and d not in (2, 3):
        raise ParameterError("oracle supports d in {2,3}")
    rows = []
    for i, e in enumerate(eps_grid):
        res = f_bound_trace_t(f, d, tt, e)
        row = SweepRow(e, res.value, regime(e, d, tt))
        if n:
            R, S = pairs_at_distance(d, e, n, substream(seed, i))
            gap, bound, slack = slacks(f, d, _spectra_of_pairs(R, S))
            row.min_slack = float(slack.min())
        if oracle:
            row.oracle_gap = 0.0 if e == 0 else oracle_max_Df(f, d, e, grid=oracle_grid).gap
        rows.append(row)
    return rows
