"""Monte Carlo verification oracle for the exact moment engines.

Density matrices are drawn as rho = G G^dagger / tr(G G^dagger) with G a
square matrix of independent standard complex Gaussians; that normalization
realizes the flat trace-one ensemble, which the purity, entry-moment, and
eigenvalue-law checks validate rather than assume. Estimators stream samples
in fixed-size chunks, so a given (seed, worker count) reproduces results
bit-for-bit; worker streams are spawned from one seed sequence and reduced in
worker order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from . import classical, quantum
from .classical import DirichletSpec, SimplexMomentSpec, sample_simplex_batch
from .quantum import EntryMomentSpec, mgf_coefficient

__all__ = [
    "EstimateReport",
    "KsReport",
    "sample_density",
    "sample_density_batch",
    "estimate_entry_moment",
    "estimate_entry_moments",
    "estimate_purity",
    "estimate_mgf",
    "estimate_simplex_moment",
    "estimate_dirichlet_moment",
    "ks_eigenvalue_check",
    "larger_eigenvalue_cdf",
]

# Samples are generated and reduced in chunks of this size; a constant keeps
# chunked accumulation deterministic for a given (seed, workers).
_CHUNK = 1 << 16


@dataclass(frozen=True)
class EstimateReport:
    """A Monte Carlo estimate next to its exact target.

    ``std_error`` is the larger of the real/imaginary component standard
    errors; ``z_score`` is the worse of the two component discrepancies in
    standard-error units.
    """

    estimate: complex
    std_error: float
    exact_value: complex
    z_score: float
    sample_count: int
    seed: int

    def passed(self, z_max: float = 4.0) -> bool:
        return self.z_score <= z_max


@dataclass(frozen=True)
class KsReport:
    statistic: float
    p_value: float
    sample_count: int
    seed: int


class _MeanAccumulator:
    """Streaming component-wise mean/variance for complex samples."""

    __slots__ = ("count", "sum_re", "sum_im", "sumsq_re", "sumsq_im")

    def __init__(self):
        self.count = 0
        self.sum_re = 0.0
        self.sum_im = 0.0
        self.sumsq_re = 0.0
        self.sumsq_im = 0.0

    def add(self, values: np.ndarray) -> None:
        re = np.real(values)
        im = np.imag(values)
        self.count += values.size
        self.sum_re += float(re.sum())
        self.sum_im += float(im.sum())
        self.sumsq_re += float((re * re).sum())
        self.sumsq_im += float((im * im).sum())

    def merge(self, other: "_MeanAccumulator") -> None:
        self.count += other.count
        self.sum_re += other.sum_re
        self.sum_im += other.sum_im
        self.sumsq_re += other.sumsq_re
        self.sumsq_im += other.sumsq_im

    def mean(self) -> complex:
        return complex(self.sum_re / self.count, self.sum_im / self.count)

    def std_errors(self) -> tuple[float, float]:
        n = self.count
        if n < 2:
            return (float("inf"), float("inf"))
        var_re = max(self.sumsq_re - self.sum_re**2 / n, 0.0) / (n - 1)
        var_im = max(self.sumsq_im - self.sum_im**2 / n, 0.0) / (n - 1)
        return (math.sqrt(var_re / n), math.sqrt(var_im / n))


def _component_z(delta: float, se: float, scale: float) -> float:
    if se > 0.0:
        return abs(delta) / se
    return 0.0 if abs(delta) <= 1e-12 * scale else float("inf")


def _report(acc: _MeanAccumulator, exact: complex, seed: int) -> EstimateReport:
    estimate = acc.mean()
    se_re, se_im = acc.std_errors()
    scale = 1.0 + abs(exact)
    z = max(
        _component_z(estimate.real - exact.real, se_re, scale),
        _component_z(estimate.imag - exact.imag, se_im, scale),
    )
    return EstimateReport(
        estimate=estimate,
        std_error=max(se_re, se_im),
        exact_value=complex(exact),
        z_score=z,
        sample_count=acc.count,
        seed=seed,
    )


def _split_counts(total: int, workers: int) -> list[int]:
    base, extra = divmod(total, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def _run_workers(
    total: int,
    seed: int,
    workers: int,
    job: Callable[[np.random.Generator, int], list[_MeanAccumulator]],
    n_outputs: int,
) -> list[_MeanAccumulator]:
    """Run ``job`` over per-worker spawned streams, reducing in worker order."""
    workers = max(1, int(workers))
    rngs = [np.random.default_rng(c) for c in np.random.SeedSequence(seed).spawn(workers)]
    counts = _split_counts(total, workers)
    if workers == 1:
        results = [job(rngs[0], counts[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, rngs, counts))
    combined = [_MeanAccumulator() for _ in range(n_outputs)]
    for worker_out in results:
        for acc, part in zip(combined, worker_out):
            acc.merge(part)
    return combined


def sample_density_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, n, n) stack of flat-ensemble density matrices.

    Traces of G G^dagger are strictly positive in exact arithmetic; rows that
    underflow to zero are redrawn.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if count < 0:
        raise ValueError("count must be non-negative")
    g = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n)))
    g *= np.sqrt(0.5)
    gram = np.einsum("sij,skj->sik", g, g.conj())
    traces = np.einsum("sii->s", gram).real
    bad = traces < 1e-300
    while np.any(bad):
        count_bad = int(bad.sum())
        g_new = (
            rng.standard_normal((count_bad, n, n))
            + 1j * rng.standard_normal((count_bad, n, n))
        ) * np.sqrt(0.5)
        gram[bad] = np.einsum("sij,skj->sik", g_new, g_new.conj())
        traces = np.einsum("sii->s", gram).real
        bad = traces < 1e-300
    return gram / traces[:, None, None]


def sample_density(n: int, rng: np.random.Generator) -> np.ndarray:
    """One n x n density matrix from the flat ensemble."""
    return sample_density_batch(n, 1, rng)[0]


def _stream_density(
    n: int,
    rng: np.random.Generator,
    count: int,
    consumers: Sequence[Callable[[np.ndarray], np.ndarray]],
) -> list[_MeanAccumulator]:
    accs = [_MeanAccumulator() for _ in consumers]
    remaining = count
    while remaining > 0:
        batch = sample_density_batch(n, min(_CHUNK, remaining), rng)
        for acc, consumer in zip(accs, consumers):
            acc.add(consumer(batch))
        remaining -= batch.shape[0]
    return accs


def estimate_entry_moments(
    specs: Sequence[EntryMomentSpec],
    samples: int,
    seed: int,
    *,
    workers: int = 1,
) -> list[EstimateReport]:
    """Estimate several entry moments from one shared sample stream."""
    if not specs:
        return []
    if samples < 100:
        raise ValueError("at least 100 samples are required")
    n = specs[0].dimension
    if any(s.dimension != n for s in specs):
        raise ValueError("all specs must share one dimension")
    exact = [quantum.entry_moment(s) for s in specs]

    def make_consumer(spec: EntryMomentSpec) -> Callable[[np.ndarray], np.ndarray]:
        idx = [(i - 1, j - 1) for i, j in spec.pairs]

        def consume(batch: np.ndarray) -> np.ndarray:
            value = batch[:, idx[0][0], idx[0][1]].copy()
            for i, j in idx[1:]:
                value *= batch[:, i, j]
            return value

        return consume

    consumers = [make_consumer(s) for s in specs]
    accs = _run_workers(
        samples, seed, workers, lambda rng, c: _stream_density(n, rng, c, consumers), len(specs)
    )
    return [_report(acc, complex(x), seed) for acc, x in zip(accs, exact)]


def estimate_entry_moment(
    spec: EntryMomentSpec, samples: int, seed: int, *, workers: int = 1
) -> EstimateReport:
    """Sample mean of prod_p rho[i_p, j_p] against the exact engine value."""
    return estimate_entry_moments([spec], samples, seed, workers=workers)[0]


def estimate_purity(n: int, samples: int, seed: int, *, workers: int = 1) -> EstimateReport:
    """Sample mean of tr(rho^2) against the exact ensemble purity."""
    if samples < 100:
        raise ValueError("at least 100 samples are required")
    exact = quantum.purity_mean(n)

    def consume(batch: np.ndarray) -> np.ndarray:
        return np.einsum("sij,sji->s", batch, batch).real

    accs = _run_workers(
        samples, seed, workers, lambda rng, c: _stream_density(n, rng, c, [consume]), 1
    )
    return _report(accs[0], complex(exact), seed)


def estimate_mgf(
    a: np.ndarray,
    truncation: int,
    samples: int,
    seed: int,
    *,
    workers: int = 1,
    truncation_tol: float = 1e-5,
) -> EstimateReport:
    """Sample mean of exp(tr(A rho)) against the truncated coefficient series.

    ``a`` must be Hermitian and small enough that the series remainder bound
    ||A||^(truncation+1) / (truncation+1)! stays below ``truncation_tol``;
    otherwise the comparison would be biased by the cut tail. The default
    tolerance sits well under the 4-sigma resolution of any sample count the
    estimator accepts.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.conj().T, atol=1e-12):
        raise ValueError("a must be Hermitian")
    if truncation < 0:
        raise ValueError("truncation must be non-negative")
    n = a.shape[0]
    norm = float(np.abs(np.linalg.eigvalsh(a)).max()) if n else 0.0
    bound = norm ** (truncation + 1) / math.factorial(truncation + 1)
    if bound > truncation_tol:
        raise ValueError(
            f"truncation remainder bound {bound:.3e} exceeds {truncation_tol:.1e}; "
            "shrink a or raise the truncation order"
        )
    series = sum(mgf_coefficient(k, n, a) for k in range(truncation + 1))

    def consume(batch: np.ndarray) -> np.ndarray:
        return np.exp(np.einsum("ij,sji->s", a, batch).real)

    accs = _run_workers(
        samples, seed, workers, lambda rng, c: _stream_density(n, rng, c, [consume]), 1
    )
    return _report(accs[0], series, seed)


def _stream_simplex(
    n_components: int,
    rng: np.random.Generator,
    count: int,
    consumer: Callable[[np.ndarray], np.ndarray],
) -> list[_MeanAccumulator]:
    acc = _MeanAccumulator()
    remaining = count
    while remaining > 0:
        batch = sample_simplex_batch(n_components, min(_CHUNK, remaining), rng)
        acc.add(consumer(batch))
        remaining -= batch.shape[0]
    return [acc]


def estimate_simplex_moment(
    spec: SimplexMomentSpec, samples: int, seed: int, *, workers: int = 1
) -> EstimateReport:
    """Monte Carlo value of the simplex moment integral.

    Per-sample values are scaled by the simplex volume under the delta
    convention, scale^(N_b-1)/(N_b-1)!, so their mean estimates the integral
    itself.
    """
    if samples < 100:
        raise ValueError("at least 100 samples are required")
    exact = classical.simplex_moment(spec)
    n_b = len(spec.exponents)
    weight = float(spec.scale) ** spec.degree() / math.factorial(n_b - 1)

    def consume(batch: np.ndarray) -> np.ndarray:
        value = np.full(batch.shape[0], weight)
        for b, e in enumerate(spec.exponents):
            if e:
                value *= batch[:, b] ** e
        return value

    accs = _run_workers(
        samples, seed, workers, lambda rng, c: _stream_simplex(n_b, rng, c, consume), 1
    )
    return _report(accs[0], complex(exact), seed)


def estimate_dirichlet_moment(
    spec: DirichletSpec, samples: int, seed: int, *, workers: int = 1
) -> EstimateReport:
    """Monte Carlo value of the Dirichlet integral over {sum(x) < scale}.

    Points uniform on the solid simplex are the leading N_B coordinates of
    points uniform on the (N_B+1)-component boundary simplex; the region
    volume scale^N_B / N_B! converts the sample mean into the integral.
    """
    if samples < 100:
        raise ValueError("at least 100 samples are required")
    exact = classical.dirichlet_moment(spec)
    n_big = len(spec.exponents)
    lam = float(spec.scale)
    volume = lam**n_big / math.factorial(n_big)

    def consume(batch: np.ndarray) -> np.ndarray:
        coords = lam * batch[:, :n_big]
        value = np.full(coords.shape[0], volume)
        for b, e in enumerate(spec.exponents):
            if e:
                value *= coords[:, b] ** e
        if spec.weight_power:
            value *= coords.sum(axis=1) ** spec.weight_power
        return value

    accs = _run_workers(
        samples,
        seed,
        workers,
        lambda rng, c: _stream_simplex(n_big + 1, rng, c, consume),
        1,
    )
    return _report(accs[0], complex(exact), seed)


def larger_eigenvalue_cdf(x) -> np.ndarray:
    """Exact CDF of the larger eigenvalue of a 2 x 2 flat-ensemble sample.

    On the segment chi_0 + chi_1 = 1 with chi_0 >= chi_1 >= 0 the squared
    difference weight normalizes to the density 6(2x-1)^2 on [1/2, 1], so the
    CDF is (2x-1)^3 clipped to that interval.
    """
    x = np.asarray(x, dtype=float)
    return np.clip(2.0 * x - 1.0, 0.0, 1.0) ** 3


def ks_eigenvalue_check(n: int, samples: int, seed: int) -> KsReport:
    """Kolmogorov-Smirnov test of the sampled larger-eigenvalue law at n = 2."""
    if n != 2:
        raise ValueError("only n = 2 has the closed-form marginal implemented")
    if samples < 100:
        raise ValueError("at least 100 samples are required")
    rng = np.random.default_rng(seed)
    values = np.empty(samples)
    at = 0
    while at < samples:
        batch = sample_density_batch(2, min(_CHUNK, samples - at), rng)
        eigs = np.linalg.eigvalsh(batch)
        values[at : at + batch.shape[0]] = eigs[:, -1]
        at += batch.shape[0]
    result = stats.kstest(values, larger_eigenvalue_cdf)
    return KsReport(
        statistic=float(result.statistic),
        p_value=float(result.pvalue),
        sample_count=samples,
        seed=seed,
    )
