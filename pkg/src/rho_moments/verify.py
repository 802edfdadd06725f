"""Self-check suites wired to the ``verify`` CLI command.

Each check compares an exact engine value against an independent route:
closed forms, identities between modules, or seeded Monte Carlo estimates.
Checks report pass/fail plus a one-line detail so failures are actionable
from CI logs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial

import numpy as np

from . import classical, montecarlo, quantum
from .characters import dim_char_sum
from .classical import DirichletSpec, SimplexMomentSpec
from .combinat import CycleType, lower_triangle_count
from .quantum import EntryMomentSpec

__all__ = ["CheckResult", "SUITES", "run_suite"]

Z_MAX = 4.0
KS_P_MIN = 0.001


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _z_check(name: str, report: montecarlo.EstimateReport) -> CheckResult:
    return CheckResult(
        name,
        report.z_score <= Z_MAX,
        f"z={report.z_score:.2f} (exact={report.exact_value.real:.6g}, "
        f"estimate={report.estimate.real:.6g}, n={report.sample_count})",
    )


def _random_simplex_spec(rng: np.random.Generator) -> SimplexMomentSpec:
    n_b = int(rng.integers(1, 5))
    budget = int(rng.integers(0, 5))
    exponents = [0] * n_b
    for _ in range(budget):
        exponents[int(rng.integers(0, n_b))] += 1
    return SimplexMomentSpec(tuple(exponents))


def _classical_checks(samples: int, seed: int, workers: int) -> list[CheckResult]:
    checks = []

    golden = classical.simplex_moment(SimplexMomentSpec((2, 0, 1)))
    checks.append(
        CheckResult("simplex-golden-1/60", golden == Fraction(1, 60), f"value={golden}")
    )

    beta_ok = all(
        classical.beta_function(m, n)
        == classical.simplex_moment(SimplexMomentSpec((m - 1, n - 1)))
        for m in range(1, 7)
        for n in range(1, 7)
    )
    checks.append(CheckResult("beta-vs-simplex-identity", beta_ok, "m,n in 1..6"))

    rng = np.random.default_rng(seed)
    identity_ok = True
    for _ in range(50):
        n_big = int(rng.integers(1, 5))
        exps = tuple(int(rng.integers(0, 4)) for _ in range(n_big))
        lam = Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 5)))
        d = classical.dirichlet_moment(DirichletSpec(exps, lam))
        s = classical.simplex_moment(SimplexMomentSpec(exps + (0,), lam))
        if d != s:
            identity_ok = False
            break
    checks.append(
        CheckResult("dirichlet-vs-simplex-identity", identity_ok, "50 random specs, exact")
    )

    for idx in range(5):
        spec = _random_simplex_spec(rng)
        report = montecarlo.estimate_simplex_moment(
            spec, samples, seed + 100 + idx, workers=workers
        )
        checks.append(_z_check(f"simplex-mc-{list(spec.exponents)}", report))

    for idx, m in enumerate((1, 2)):
        spec = DirichletSpec((1, 0), weight_power=m)
        report = montecarlo.estimate_dirichlet_moment(
            spec, samples, seed + 200 + idx, workers=workers
        )
        checks.append(_z_check(f"dirichlet-mc-weight-{m}", report))

    return checks


def _quantum_checks(samples: int, seed: int, workers: int) -> list[CheckResult]:
    checks = []

    worst = 0.0
    for n in (2, 3):
        for k in range(1, 6):
            value = quantum.moment_traces([np.eye(n)] * k)
            worst = max(worst, abs(value - 1.0))
    checks.append(
        CheckResult("trace-power-normalization", worst <= 1e-12, f"max |E[(tr rho)^K]-1|={worst:.2e}")
    )

    purity_ok = all(
        quantum.purity_mean(n) == Fraction(2 * n, n * n + 1) for n in range(1, 7)
    )
    checks.append(CheckResult("purity-closed-form", purity_ok, "N=1..6, exact"))

    rng = np.random.default_rng(seed)
    worst_k1 = worst_k2 = 0.0
    for _ in range(10):
        n = int(rng.integers(2, 5))
        c1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        c2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        v1 = quantum.moment_traces([c1])
        worst_k1 = max(worst_k1, abs(v1 - np.trace(c1) / n))
        v2 = quantum.moment_traces([c1, c2])
        closed = (n * np.trace(c1) * np.trace(c2) + np.trace(c1 @ c2)) / (n * (n * n + 1))
        worst_k2 = max(worst_k2, abs(v2 - closed))
    checks.append(CheckResult("closed-form-k1", worst_k1 <= 1e-10, f"max delta={worst_k1:.2e}"))
    checks.append(CheckResult("closed-form-k2", worst_k2 <= 1e-10, f"max delta={worst_k2:.2e}"))

    lemma_ok = True
    for n in range(1, 4):
        for beta in product(range(4), repeat=n):
            lhs = quantum.int_lemma_value(beta) * factorial(
                sum(beta) + lower_triangle_count(n) + n - 1
            )
            if lhs != quantum.det_lemma_value(beta):
                lemma_ok = False
    checks.append(CheckResult("det-vs-int-lemma", lemma_ok, "beta entries <= 3, N <= 3"))

    omega_ok = True
    for k in (1, 2, 3):
        poly = dim_char_sum(k, 2)
        for pairs in product(product((1, 2), repeat=2), repeat=k):
            spec = EntryMomentSpec(2, pairs)
            direct = quantum.entry_moment(spec)
            via_omega = Fraction(0)
            for key, coeff in poly.terms.items():
                expansion = quantum.omega_expand(CycleType(key), k)
                via_omega += coeff * expansion.evaluate_entry_pairs(pairs)
            via_omega *= Fraction(factorial(3), factorial(k + 3))
            if via_omega != direct:
                omega_ok = False
    checks.append(
        CheckResult("entry-vs-omega-route", omega_ok, "K <= 3, N = 2, exhaustive, exact")
    )

    a = 0.25 * _random_hermitian(2, rng)
    report = montecarlo.estimate_mgf(a, 6, samples, seed + 300, workers=workers)
    checks.append(_z_check("mgf-series-mc", report))

    return checks


def _random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2.0


def _sampler_checks(samples: int, seed: int, workers: int) -> list[CheckResult]:
    checks = []

    batch_size = min(samples, 20000)
    worst_herm = worst_trace = 0.0
    worst_eig = np.inf
    rng = np.random.default_rng(seed + 400)
    for n in (2, 3):
        batch = montecarlo.sample_density_batch(n, batch_size, rng)
        worst_herm = max(worst_herm, float(np.abs(batch - batch.conj().transpose(0, 2, 1)).max()))
        worst_trace = max(
            worst_trace, float(np.abs(np.einsum("sii->s", batch) - 1.0).max())
        )
        worst_eig = min(worst_eig, float(np.linalg.eigvalsh(batch).min()))
    invariants_ok = worst_herm <= 1e-12 and worst_trace <= 1e-12 and worst_eig >= -1e-10
    checks.append(
        CheckResult(
            "density-sample-invariants",
            invariants_ok,
            f"max |rho-rho^H|={worst_herm:.1e}, max |tr-1|={worst_trace:.1e}, min eig={worst_eig:.1e}",
        )
    )

    for n in (2, 3):
        report = montecarlo.estimate_purity(n, samples, seed + 500 + n, workers=workers)
        checks.append(_z_check(f"purity-mc-n{n}", report))

    golden = montecarlo.estimate_entry_moments(
        [
            EntryMomentSpec(2, ((1, 2), (2, 1))),
            EntryMomentSpec(2, ((1, 1), (1, 1))),
        ],
        samples,
        seed + 600,
        workers=workers,
    )
    checks.append(_z_check("entry-mc-offdiag-1/10", golden[0]))
    checks.append(_z_check("entry-mc-diag-3/10", golden[1]))

    ks = montecarlo.ks_eigenvalue_check(2, min(samples, 100000), seed + 700)
    checks.append(
        CheckResult(
            "ks-eigenvalue-law",
            ks.p_value > KS_P_MIN,
            f"statistic={ks.statistic:.4f}, p={ks.p_value:.4f}",
        )
    )

    from scipy import stats

    control_rng = np.random.default_rng(seed + 800)
    uniform_large = control_rng.uniform(0.5, 1.0, size=min(samples, 100000))
    control = stats.kstest(uniform_large, montecarlo.larger_eigenvalue_cdf)
    checks.append(
        CheckResult(
            "ks-negative-control",
            control.pvalue < KS_P_MIN,
            f"wrong sampler p={control.pvalue:.2e} (must reject)",
        )
    )

    return checks


SUITES = {
    "classical": _classical_checks,
    "quantum": _quantum_checks,
    "sampler": _sampler_checks,
}


def run_suite(suite: str, samples: int, seed: int, workers: int = 1) -> list[CheckResult]:
    """Run one named suite, or every suite for ``all``; results keep order."""
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITES:
        names = [suite]
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'")
    results: list[CheckResult] = []
    for name in names:
        results.extend(SUITES[name](samples, seed, workers))
    return results
