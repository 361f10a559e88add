"""Monte Carlo estimation of record probabilities and maxima counts.

Reproducibility contract
------------------------
Replicates are partitioned into fixed-size chunks; chunk ``i`` draws from the
Philox stream ``(seed, stream_base + i)`` and chunk results are reduced in
index order. The partition depends only on the experiment parameters, never
on the worker count, so reruns with a different ``workers`` value are
bit-identical. Workers are threads; the heavy lifting is vectorized numpy on
large blocks.

Estimators
----------
* :func:`estimate_record_prob` -- indicator estimator: the fraction of
  replicates whose n-th observation is a record (binomial standard error).
* :func:`estimate_record_prob_survival` -- averages (1 - S(X))^(n-1) using
  the closed-form survival S; unbiased for the same quantity with strictly
  smaller variance on the same draw count (conditioning estimator).
* :func:`estimate_maxima` -- mean cumulative record count E R_n and mean
  frontier size E r_n, with the identity E r_n = n p_n checked on the side.
* :func:`concomitant_check` -- compares the distribution of the maxima count
  in dimension d with the record count in dimension d-1 (they agree for any
  continuous law: sort the stream by the dropped coordinate).
* :func:`sweep` -- one-parameter grids combining exact values and estimates.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.stats import chi2

from .errors import InvalidParameterError
from .exact import pn_independent, pn_marginal_dirichlet, pn_scale_mixture, survival
from .frontier import Frontier2D, GenericFrontier, StreamResult, run_stream
from .model import (
    DistributionSpec,
    ExperimentConfig,
    ExponentialScaleMixture,
    IidExponential,
    MarginalDirichlet,
    validate,
)
from .samplers import make_rng, sample_observations

__all__ = [
    "ConcomitantResult",
    "EstimateWithCI",
    "MaximaEstimates",
    "SweepRow",
    "TrajectorySummary",
    "concomitant_check",
    "concomitant_records",
    "estimate_maxima",
    "estimate_record_prob",
    "estimate_record_prob_survival",
    "simulate_trajectory",
    "sweep",
]

# Rows per chunk are sized off a fixed element budget so the chunk layout
# (and therefore every stream index) is a pure function of the experiment.
_INDICATOR_BUDGET = 1 << 18
_SURVIVAL_CHUNK = 1 << 16
_MAXIMA_BUDGET = 1 << 20
_PHASE_STRIDE = 1 << 32


@dataclass(frozen=True)
class EstimateWithCI:
    """Point estimate with its standard error and provenance."""

    point: float
    std_error: float
    reps: int
    seed: int
    elapsed: float


@dataclass(frozen=True)
class MaximaEstimates:
    """E R_n and E r_n estimates from one replicate set.

    ``pn_hat`` is the record fraction at the final step of the same
    replicates and ``identity_gap_sigma`` the studentized gap
    |mean(r_n - n * indicator)| / SE, which checks E r_n = n p_n.
    """

    records: EstimateWithCI
    maxima: EstimateWithCI
    pn_hat: float
    identity_gap_sigma: float


class TrajectorySummary(NamedTuple):
    """End state of a single simulated stream."""

    records_total: int
    maxima_count: int
    final_is_record: bool
    final_broken: int


@dataclass(frozen=True)
class ConcomitantResult:
    """Two-sample comparison of r_{n,d} against R_{n,d-1}.

    Histograms index counts by value; the chi-square statistic is computed
    over adjacent-value bins merged until every expected cell is >= 5.
    """

    maxima_counts: np.ndarray
    record_counts: np.ndarray
    statistic: float
    dof: int
    pvalue: float
    reps: int
    seed: int


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a sweep: exact value, estimate, and their gap."""

    family: str
    n: int
    d: int
    a: float | None
    exact: float | None
    estimate: float | None
    std_error: float | None
    sigma_gap: float | None
    error: str | None = None


def _chunk_jobs(reps: int, rows_per_chunk: int) -> list[tuple[int, int]]:
    jobs = []
    start = 0
    idx = 0
    while start < reps:
        m = min(rows_per_chunk, reps - start)
        jobs.append((idx, m))
        start += m
        idx += 1
    return jobs


def _run_chunks(fn, jobs, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(stream, m) for stream, m in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def simulate_trajectory(spec: DistributionSpec, n: int, rng: np.random.Generator) -> StreamResult:
    """Sample one stream of length n from ``spec`` and fold it through a frontier."""
    obs = sample_observations(spec, n, rng)
    return run_stream(obs)


def trajectory_summary(result: StreamResult) -> TrajectorySummary:
    last = result.outcomes[-1]
    return TrajectorySummary(result.records_total, result.maxima_count, last.is_record, last.broken)


# ---------------------------------------------------------------------------
# Record-probability estimators
# ---------------------------------------------------------------------------


def estimate_record_prob(config: ExperimentConfig, *, _stream_base: int = 0) -> EstimateWithCI:
    """Indicator estimator of the probability that observation n sets a record.

    Each replicate draws an independent stream of n observations; the
    estimate is the fraction whose final observation is dominated by none of
    its predecessors. Standard error is binomial.
    """
    t0 = time.perf_counter()
    spec, n, reps = config.spec, config.n, config.reps
    d = spec.dim
    rows = max(1, _INDICATOR_BUDGET // max(n, 1))

    def job(stream: int, m: int) -> int:
        if n == 1:
            return m
        rng = make_rng(config.seed, _stream_base + stream)
        block = sample_observations(spec, m * n, rng).reshape(m, n, d)
        last = block[:, n - 1, :]
        dominated = np.all(block[:, : n - 1, :] >= last[:, None, :], axis=2).any(axis=1)
        return int(m - dominated.sum())

    hits = sum(_run_chunks(job, _chunk_jobs(reps, rows), config.workers))
    p = hits / reps
    se = math.sqrt(p * (1.0 - p) / reps)
    return EstimateWithCI(p, se, reps, config.seed, time.perf_counter() - t0)


def estimate_record_prob_survival(
    spec: DistributionSpec,
    n: int,
    reps: int,
    seed: int = 0,
    workers: int = 1,
    *,
    _stream_base: int = 0,
) -> EstimateWithCI:
    """Survival-weighted estimator: average (1 - S(X))^(n-1) over draws of X.

    Conditioning on the observation removes the indicator's Bernoulli noise,
    so the variance is strictly smaller than the indicator estimator's on
    the same number of draws (and n - 1 = 0 gives exactly 1 with zero
    variance). Requires a closed-form survival; one observation per
    replicate.
    """
    config = ExperimentConfig(spec, n, reps, seed, workers)
    survival(spec, np.zeros(spec.dim))  # raises UnsupportedSpecError early
    t0 = time.perf_counter()

    def job(stream: int, m: int) -> tuple[float, float]:
        rng = make_rng(seed, _stream_base + stream)
        x = sample_observations(spec, m, rng)
        w = (1.0 - survival(spec, x)) ** (n - 1)
        return float(w.sum()), float(np.square(w).sum())

    parts = _run_chunks(job, _chunk_jobs(reps, _SURVIVAL_CHUNK), config.workers)
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    mean = total / reps
    var = max(total_sq - total * total / reps, 0.0) / max(reps - 1, 1)
    return EstimateWithCI(mean, math.sqrt(var / reps), reps, seed, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# Maxima counting
# ---------------------------------------------------------------------------


def _fold_streams_2d(block: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m, n, _ = block.shape
    r = np.empty(m, dtype=np.int64)
    big_r = np.empty(m, dtype=np.int64)
    final = np.empty(m, dtype=np.int64)
    for i in range(m):
        fr = Frontier2D()
        ins = fr._insert_xy
        rec = False
        for x, y in block[i].tolist():
            rec, _ = ins(x, y)
        r[i] = fr.size
        big_r[i] = fr.records_total
        final[i] = rec
    return r, big_r, final


def _fold_streams_nd(block: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m, n, d = block.shape
    r = np.empty(m, dtype=np.int64)
    big_r = np.empty(m, dtype=np.int64)
    final = np.empty(m, dtype=np.int64)
    for i in range(m):
        fr = GenericFrontier(d)
        rec = False
        for row in block[i]:
            rec = fr.insert(row).is_record
        r[i] = fr.size
        big_r[i] = fr.records_total
        final[i] = rec
    return r, big_r, final


def estimate_maxima(config: ExperimentConfig, *, _stream_base: int = 0) -> MaximaEstimates:
    """Estimate E R_n (records seen) and E r_n (current maxima) at time n."""
    t0 = time.perf_counter()
    spec, n, reps = config.spec, config.n, config.reps
    d = spec.dim
    fold = _fold_streams_2d if d == 2 else _fold_streams_nd
    rows = max(1, _MAXIMA_BUDGET // max(n, 1))

    def job(stream: int, m: int):
        rng = make_rng(config.seed, _stream_base + stream)
        block = sample_observations(spec, m * n, rng).reshape(m, n, d)
        r, big_r, final = fold(block)
        diff = r - n * final  # mean zero iff E r_n = n p_n
        return (
            int(r.sum()), int(np.square(r).sum()),
            int(big_r.sum()), int(np.square(big_r).sum()),
            int(final.sum()),
            int(diff.sum()), int(np.square(diff).sum()),
        )

    parts = _run_chunks(job, _chunk_jobs(reps, rows), config.workers)
    agg = [sum(p[i] for p in parts) for i in range(7)]
    elapsed = time.perf_counter() - t0

    def mean_ci(total: int, total_sq: int) -> EstimateWithCI:
        mean = total / reps
        var = max(total_sq - total * total / reps, 0.0) / max(reps - 1, 1)
        return EstimateWithCI(mean, math.sqrt(var / reps), reps, config.seed, elapsed)

    maxima = mean_ci(agg[0], agg[1])
    records = mean_ci(agg[2], agg[3])
    pn_hat = agg[4] / reps
    diff_mean = agg[5] / reps
    diff_var = max(agg[6] - agg[5] ** 2 / reps, 0.0) / max(reps - 1, 1)
    diff_se = math.sqrt(diff_var / reps)
    gap = 0.0 if diff_mean == 0 else (abs(diff_mean) / diff_se if diff_se > 0 else math.inf)
    return MaximaEstimates(records, maxima, pn_hat, gap)


# ---------------------------------------------------------------------------
# Concomitant identity
# ---------------------------------------------------------------------------


def _count_univariate_records(block: np.ndarray) -> np.ndarray:
    # block shape (m, n): records of a scalar stream = strict running maxima.
    m, n = block.shape
    counts = np.ones(m, dtype=np.int64)
    if n > 1:
        running = np.maximum.accumulate(block[:, :-1], axis=1)
        counts += (block[:, 1:] > running).sum(axis=1)
    return counts


def concomitant_records(block: np.ndarray) -> np.ndarray:
    """Record counts of the first d-1 coordinates in concomitant order.

    ``block`` has shape (m, n, d). Each replicate's rows are sorted by the
    last coordinate, largest first, and the records of the remaining d-1
    coordinates are counted in that order. For every realization this count
    equals the number of maxima of the full d-dimensional point set: a point
    is a maximum exactly when no point with a larger last coordinate weakly
    dominates it elsewhere.
    """
    m, n, d = block.shape
    order = np.argsort(-block[:, :, d - 1], axis=1, kind="stable")
    if d - 1 == 1:
        sorted_first = np.take_along_axis(block[:, :, 0], order, axis=1)
        return _count_univariate_records(sorted_first)
    rest = np.take_along_axis(block[:, :, : d - 1], order[:, :, None], axis=1)
    fold = _fold_streams_2d if d - 1 == 2 else _fold_streams_nd
    _, big_r, _ = fold(rest)
    return big_r


def concomitant_check(
    spec: DistributionSpec,
    n: int,
    reps: int,
    seed: int = 0,
    workers: int = 1,
) -> ConcomitantResult:
    """Two-sample chi-square between r_{n,d} and the concomitant R_{n,d-1}.

    Sorting a stream by its last coordinate turns the d-dimensional maxima
    into exactly the records of the first d-1 coordinates read in that
    order, so for any continuous law the two counts share one distribution.
    The two samples here are drawn independently from disjoint stream
    ranges and compared via completely different code paths (frontier fold
    vs sort-and-count), making the test a cross-validation of both.
    """
    validate(spec)
    d = spec.dim
    if d < 2:
        raise InvalidParameterError("concomitant check needs dimension >= 2")
    if n < 1 or reps < 2:
        raise InvalidParameterError("need n >= 1 and reps >= 2")
    rows = max(1, _MAXIMA_BUDGET // max(n, 1))
    fold = _fold_streams_2d if d == 2 else _fold_streams_nd

    def job_maxima(stream: int, m: int) -> np.ndarray:
        rng = make_rng(seed, stream)
        block = sample_observations(spec, m * n, rng).reshape(m, n, d)
        r, _, _ = fold(block)
        return np.bincount(r)

    def job_records(stream: int, m: int) -> np.ndarray:
        rng = make_rng(seed, _PHASE_STRIDE + stream)
        block = sample_observations(spec, m * n, rng).reshape(m, n, d)
        return np.bincount(concomitant_records(block))

    jobs = _chunk_jobs(reps, rows)
    hist_r = _sum_histograms(_run_chunks(job_maxima, jobs, workers))
    hist_big_r = _sum_histograms(_run_chunks(job_records, jobs, workers))
    stat, dof, pvalue = _chi2_two_sample(hist_r, hist_big_r)
    return ConcomitantResult(hist_r, hist_big_r, stat, dof, pvalue, reps, seed)


def _sum_histograms(hists: list[np.ndarray]) -> np.ndarray:
    width = max(h.size for h in hists)
    out = np.zeros(width, dtype=np.int64)
    for h in hists:
        out[: h.size] += h
    return out


def _chi2_two_sample(h1: np.ndarray, h2: np.ndarray, min_expected: float = 5.0):
    """Chi-square homogeneity test on two integer-valued histograms.

    Adjacent value bins are pooled left to right until both expected cells
    reach ``min_expected``; a trailing short bin is merged backwards.
    """
    width = max(h1.size, h2.size)
    o1 = np.zeros(width)
    o2 = np.zeros(width)
    o1[: h1.size] = h1
    o2[: h2.size] = h2
    n1, n2 = o1.sum(), o2.sum()
    total = n1 + n2
    bins: list[tuple[float, float]] = []
    acc1 = acc2 = 0.0
    for v1, v2 in zip(o1, o2):
        acc1 += v1
        acc2 += v2
        pooled = acc1 + acc2
        if pooled * n1 / total >= min_expected and pooled * n2 / total >= min_expected:
            bins.append((acc1, acc2))
            acc1 = acc2 = 0.0
    if acc1 or acc2:
        if bins:
            last1, last2 = bins.pop()
            bins.append((last1 + acc1, last2 + acc2))
        else:
            bins.append((acc1, acc2))
    if len(bins) < 2:
        return 0.0, 0, 1.0
    stat = 0.0
    for b1, b2 in bins:
        pooled = b1 + b2
        e1 = pooled * n1 / total
        e2 = pooled * n2 / total
        stat += (b1 - e1) ** 2 / e1 + (b2 - e2) ** 2 / e2
    dof = len(bins) - 1
    return float(stat), dof, float(chi2.sf(stat, dof))


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

_SWEEP_EXACT = {
    "dir": lambda n, d, a: pn_marginal_dirichlet(n, d, a),
    "pa": lambda n, d, a: pn_scale_mixture(n, d, a),
    "iid-exp": lambda n, d, a: pn_independent(n, d),
}


def _sweep_spec(family: str, d: int, a: float | None) -> DistributionSpec:
    if family == "dir":
        return MarginalDirichlet(d, a)
    if family == "pa":
        return ExponentialScaleMixture(d, a)
    if family == "iid-exp":
        return IidExponential(d)
    raise InvalidParameterError(f'sweep family must be "dir", "pa" or "iid-exp", got {family!r}')


def sweep(
    family: str,
    *,
    a_values=None,
    n_values=None,
    d_values=None,
    n: int | None = None,
    d: int | None = None,
    a: float | None = None,
    reps: int = 0,
    seed: int = 0,
    workers: int = 1,
    estimator: str = "indicator",
) -> list[SweepRow]:
    """Evaluate a one-parameter grid of record probabilities.

    Exactly one of ``a_values``/``n_values``/``d_values`` must be given; the
    other two parameters are fixed. ``reps = 0`` produces an exact-only
    table with no sampling; otherwise each row also carries a Monte Carlo
    estimate (``estimator`` is ``"indicator"`` or ``"survival"``), its SE and
    the gap to the exact value in SE units. A failing row is marked and the
    sweep continues.
    """
    grids = [g for g in (a_values, n_values, d_values) if g is not None]
    if len(grids) != 1 or len(grids[0]) == 0:
        raise InvalidParameterError("exactly one nonempty grid among a_values/n_values/d_values required")
    if estimator not in ("indicator", "survival"):
        raise InvalidParameterError(f'estimator must be "indicator" or "survival", got {estimator!r}')
    if family not in _SWEEP_EXACT:
        raise InvalidParameterError(f'sweep family must be "dir", "pa" or "iid-exp", got {family!r}')

    points: list[tuple[int, int, float | None]]
    if a_values is not None:
        points = [(n, d, float(v)) for v in a_values]
    elif n_values is not None:
        points = [(int(v), d, a) for v in n_values]
    else:
        points = [(n, int(v), a) for v in d_values]

    rows: list[SweepRow] = []
    for idx, (nn, dd, aa) in enumerate(points):
        try:
            if nn is None or dd is None:
                raise InvalidParameterError("fixed n and d must be provided for this grid")
            exact = _SWEEP_EXACT[family](nn, dd, aa)
            estimate = std_error = sigma_gap = None
            if reps > 0:
                spec = _sweep_spec(family, dd, aa)
                base = (idx + 1) * _PHASE_STRIDE
                if estimator == "survival":
                    est = estimate_record_prob_survival(
                        spec, nn, reps, seed, workers, _stream_base=base
                    )
                else:
                    est = estimate_record_prob(
                        ExperimentConfig(spec, nn, reps, seed, workers), _stream_base=base
                    )
                estimate, std_error = est.point, est.std_error
                if std_error > 0:
                    sigma_gap = (estimate - exact) / std_error
                else:
                    sigma_gap = 0.0 if estimate == exact else math.inf
            rows.append(SweepRow(family, nn, dd, aa, exact, estimate, std_error, sigma_gap))
        except Exception as exc:  # noqa: BLE001 - row-level isolation is the contract
            rows.append(SweepRow(family, nn, dd, aa, None, None, None, None, f"{type(exc).__name__}: {exc}"))
    return rows
