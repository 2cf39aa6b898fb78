"""CP decomposition of 3-mode tensors by alternating least squares.

Restarts are run in lockstep batches (all factor updates are stacked numpy
calls), but each restart owns its random stream and its own stopping
decision, so the outcome equals a sequential run that stops at the first
converged restart.

Each factor update is a proximal least-squares step,
``argmin ||X - F K^T||^2 + lam ||F - F_old||^2`` with ``lam`` proportional to
the current residual.  Since ``F_old`` is feasible, the residual can never
increase, and the damping shortens the swamps that plain ALS falls into on
the 4x4x4 matmul-type tensors.  ``damping=0`` recovers plain ALS.

ALS failure is only *evidence* against a rank: border-rank effects let the
residual drift towards zero without ever reaching it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .schmidt import flattening_lower_bound, verify_decomposition
from .tensor import (
    IDENTITY_TOL,
    RANK_TOL,
    Decomposition,
    as_tensor3,
    khatri_rao,
    mode_flatten,
)

RIDGE = 1e-12
_BATCH = 10


@dataclass(frozen=True)
class AlsConfig:
    max_iters: int = 2000
    restarts: int = 50
    converge_residual: float = 1e-8
    stall_window: int = 50
    stall_delta: float = 1e-12
    seed: int = 0
    damping: float = 1.0

    def __post_init__(self):
        for name in ("max_iters", "restarts", "stall_window"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.converge_residual < 1:
            raise ValueError("converge_residual must lie in (0, 1)")
        if self.stall_delta <= 0:
            raise ValueError("stall_delta must be positive")
        if self.damping < 0:
            raise ValueError("damping must be non-negative")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a non-negative 64-bit integer")


@dataclass(frozen=True, eq=False)
class AlsResult:
    rank_tried: int
    best_residual: float
    converged: bool
    factors: Decomposition = field(repr=False)
    restarts_used: int
    iterations_of_best: int
    best_restart: int  # -1 means the warm start won
    history: tuple[float, ...] = field(repr=False, default=())

    def to_dict(self) -> dict:
        return {
            "rank_tried": self.rank_tried,
            "best_residual": self.best_residual,
            "converged": self.converged,
            "restarts_used": self.restarts_used,
            "iterations_of_best": self.iterations_of_best,
            "best_restart": self.best_restart,
        }


def _init_factors(dims, r, seed, restart):
    rng = np.random.default_rng([seed, restart])
    return [(rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))) / np.sqrt(2)
            for d in dims]


def _update(xm, f1, f2, f_old, lam):
    """Proximal least-squares factor for one mode given the other two (stacked)."""
    k = khatri_rao(f1, f2)
    gram = (f1.conj().transpose(0, 2, 1) @ f1) * (f2.conj().transpose(0, 2, 1) @ f2)
    lam = lam[:, None, None]
    rhs = np.matmul(xm, k.conj()) + lam * f_old
    r = gram.shape[-1]
    sol = np.linalg.solve(gram + (lam + RIDGE) * np.eye(r), rhs.transpose(0, 2, 1))
    return sol.transpose(0, 2, 1)


def _residuals(x1, a, b, c, norm_t):
    approx = a @ khatri_rao(b, c).transpose(0, 2, 1)
    res = np.linalg.norm(x1 - approx, axis=(1, 2)) / norm_t
    return np.where(np.isfinite(res), res, np.inf)


def _run_batch(unf, norm_t, starts, cfg):
    """Run ALS on a stack of starting points; returns per-start outcomes."""
    a, b, c = (np.array(f) for f in starts)
    n = a.shape[0]
    hist = np.full((n, cfg.max_iters + 1), np.nan)
    hist[:, 0] = _residuals(unf[0], a, b, c, norm_t)
    iters = np.zeros(n, dtype=int)
    active = hist[:, 0] > cfg.converge_residual
    for it in range(1, cfg.max_iters + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        ai, bi, ci = a[idx], b[idx], c[idx]
        lam = cfg.damping * hist[idx, it - 1] * norm_t ** 2
        with np.errstate(all="ignore"):
            ai = _update(unf[0], bi, ci, ai, lam)
            bi = _update(unf[1], ai, ci, bi, lam)
            ci = _update(unf[2], ai, bi, ci, lam)
            res = _residuals(unf[0], ai, bi, ci, norm_t)
        a[idx], b[idx], c[idx] = ai, bi, ci
        hist[idx, it] = res
        iters[idx] = it
        done = (res <= cfg.converge_residual) | ~np.isfinite(res)
        if it >= cfg.stall_window:
            prev = hist[idx, it - cfg.stall_window]
            done |= (prev - res) < cfg.stall_delta * prev
        active[idx[done]] = False
    final = hist[np.arange(n), iters]
    return a, b, c, final, iters, hist


def als_fit(t, r: int, cfg: AlsConfig = AlsConfig(),
            warm_start: Optional[Decomposition] = None) -> AlsResult:
    """Best rank-``r`` CP fit of ``t`` over seeded random restarts.

    ``warm_start`` (typically the rank ``r-1`` result) is zero-padded to rank
    ``r`` and tried before the random restarts, which makes the best residual
    non-increasing along a rank sweep.  The search stops after the first
    restart that reaches ``cfg.converge_residual``.
    """
    if r < 1:
        raise ValueError("rank must be at least 1")
    t = as_tensor3(t)
    dims = t.shape
    norm_t = float(np.linalg.norm(t))
    if norm_t == 0.0:
        zeros = Decomposition(*(np.zeros((d, r)) for d in dims))
        return AlsResult(r, 0.0, True, zeros, 0, 0, -1, (0.0,))
    unf = [mode_flatten(t, m) for m in (1, 2, 3)]

    best = None  # (residual, restart index, a, b, c, iters, history)

    def consider(res, k, a, b, c, n_it, h):
        nonlocal best
        if best is None or res < best[0]:
            best = (float(res), k, a, b, c, int(n_it), h)

    used = 0
    if warm_start is not None:
        if warm_start.dims != dims:
            raise ValueError("warm start does not match tensor dims")
        if warm_start.rank > r:
            raise ValueError("warm start has more terms than the target rank")
        ws = warm_start.padded(r)
        a, b, c, fin, its, hist = _run_batch(unf, norm_t, ([ws.a], [ws.b], [ws.c]), cfg)
        consider(fin[0], -1, a[0], b[0], c[0], its[0], hist[0, :its[0] + 1])

    for start in range(0, cfg.restarts, _BATCH):
        if best is not None and best[0] <= cfg.converge_residual:
            break
        ids = list(range(start, min(start + _BATCH, cfg.restarts)))
        inits = [_init_factors(dims, r, cfg.seed, k) for k in ids]
        starts = tuple([f[m] for f in inits] for m in range(3))
        a, b, c, fin, its, hist = _run_batch(unf, norm_t, starts, cfg)
        for j, k in enumerate(ids):
            used = k + 1
            consider(fin[j], k, a[j], b[j], c[j], its[j], hist[j, :its[j] + 1])
            if fin[j] <= cfg.converge_residual:
                break

    res, k, a, b, c, n_it, h = best
    return AlsResult(
        rank_tried=r,
        best_residual=res,
        converged=res <= cfg.converge_residual,
        factors=Decomposition(a, b, c),
        restarts_used=used,
        iterations_of_best=n_it,
        best_restart=k,
        history=tuple(float(v) for v in h),
    )


class Verdict(str, enum.Enum):
    CONSISTENT = "CONSISTENT"
    INCONSISTENT = "INCONSISTENT"
    OPEN = "OPEN"


@dataclass(frozen=True)
class AlsFailure:
    rank: int
    best_residual: float
    restarts: int


@dataclass(frozen=True, eq=False)
class RankReport:
    target: str
    proved_lower: int
    mode_ranks: tuple[int, int, int]
    certified_upper: Optional[int]
    certificate_residual: Optional[float]
    als_upper: Optional[int]
    als_failures: tuple[AlsFailure, ...]
    claimed: Optional[tuple[int, ...]]
    verdict: Verdict
    als_results: tuple[AlsResult, ...] = field(default=(), repr=False)

    @property
    def evidence_interval(self) -> tuple[int, Optional[int]]:
        """``[lo, hi]`` combining proofs with ALS evidence."""
        return _interval(self.proved_lower, self.certified_upper, self.als_upper,
                         self.als_failures)

    def to_dict(self) -> dict:
        lo, hi = self.evidence_interval
        return {
            "target": self.target,
            "proved_lower": self.proved_lower,
            "mode_ranks": list(self.mode_ranks),
            "certified_upper": self.certified_upper,
            "certificate_residual": self.certificate_residual,
            "als_upper": self.als_upper,
            "als_failures": [
                {"rank": f.rank, "best_residual": f.best_residual, "restarts": f.restarts}
                for f in self.als_failures
            ],
            "evidence_interval": [lo, hi],
            "claimed": list(self.claimed) if self.claimed is not None else None,
            "verdict": self.verdict.value,
        }


def _interval(lower, cert, als_upper, failures):
    lo = max([lower] + [f.rank + 1 for f in failures])
    uppers = [u for u in (cert, als_upper) if u is not None]
    hi = min(uppers) if uppers else None
    return lo, hi


def _verdict(lower, cert, als_upper, failures, claimed) -> Verdict:
    if cert is not None and lower > cert:
        return Verdict.INCONSISTENT
    if als_upper is not None and als_upper < lower:
        return Verdict.INCONSISTENT
    lo, hi = _interval(lower, cert, als_upper, failures)
    if claimed is None:
        return Verdict.CONSISTENT if hi is not None and lo == hi else Verdict.OPEN
    if not any(lo <= c and (hi is None or c <= hi) for c in claimed):
        return Verdict.INCONSISTENT
    if len(claimed) == 1 and hi is not None and lo == hi:
        return Verdict.CONSISTENT
    return Verdict.OPEN


def rank_search(t, hints: Optional[Decomposition] = None, cfg: AlsConfig = AlsConfig(),
                claimed=None, target: str = "", max_rank: Optional[int] = None,
                tol: float = RANK_TOL) -> RankReport:
    """Sandwich the CP rank of ``t`` between proofs and ALS evidence.

    Lower bound: flattening ranks (proved).  Upper bound: ``hints`` when it
    reconstructs ``t`` to :data:`IDENTITY_TOL` (proved).  ALS then runs at
    each rank from the lower bound upwards, warm-started from the previous
    rank, until one converges or the upper limit is reached.
    """
    t = as_tensor3(t)
    fb = flattening_lower_bound(t, tol)
    lower = fb.lower_bound
    cert = cert_res = None
    if hints is not None:
        cert_res = verify_decomposition(t, hints)
        if cert_res <= IDENTITY_TOL:
            cert = len(hints)
    if isinstance(claimed, int):
        claimed = (claimed,)
    elif claimed is not None:
        claimed = tuple(sorted(claimed))

    d1, d2, d3 = t.shape
    limit = cert if cert is not None else (max_rank or min(d1 * d2, d1 * d3, d2 * d3))
    failures = []
    results = []
    als_upper = None
    prev = None
    if lower == 0:
        als_upper = 0
    else:
        for r in range(lower, limit + 1):
            res = als_fit(t, r, cfg, warm_start=prev.factors if prev is not None else None)
            results.append(res)
            if res.converged:
                als_upper = r
                break
            failures.append(AlsFailure(r, res.best_residual, res.restarts_used))
            prev = res
    verdict = _verdict(lower, cert, als_upper, failures, claimed)
    return RankReport(target, lower, fb.mode_ranks, cert, cert_res, als_upper,
                      tuple(failures), claimed, verdict, tuple(results))
