"""Moments of the flat (Hilbert-Schmidt) ensemble of density matrices.

The centerpiece is the permutation-sum formula behind ``moment_traces``: the
mean of a product of observable pairings against the random density matrix is

    (N^2-1)! / (K+N^2-1)! * sum over pi in S_K of
        N^cycles(pi) * prod over cycles (j1 ... jm) of tr(C_j1 ... C_jm).

It is obtained by expanding the dimension-weighted character sum into class
monomials of trace power sums and replacing each monomial by its sum of trace
products over permutations, and is cross-checked against the K = 1, 2 closed
forms, the K <= 4 weighted-character table, and Monte Carlo sampling. All
user-facing moments are normalized by the ensemble volume, so results are
exact rationals (entry moments) or plain complex numbers; the (2*pi)-carrying
raw values remain available through ``ScaledRational``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Sequence

import numpy as np

from .characters import eval_power_sums, unitary_char_eval, weyl_dim
from .combinat import (
    CycleType,
    class_order,
    enumerate_cycle_types,
    enumerate_partitions,
    lower_triangle_count,
    super_factorial,
    vandermonde,
)
from .errors import CapExceededError

__all__ = [
    "DEFAULT_BOX_CAP",
    "ScaledRational",
    "EntryMomentSpec",
    "TraceProductExpr",
    "hs_volume",
    "det_lemma_value",
    "int_lemma_value",
    "mgf_coefficient",
    "omega_expand",
    "moment_traces",
    "entry_moment",
    "purity_mean",
]

# K! permutations are enumerated for K observables; 8! = 40320 is still fast,
# 12! is not. Overridable per call.
DEFAULT_BOX_CAP = 8


@dataclass(frozen=True)
class ScaledRational:
    """An exact rational times an integer power of 2*pi."""

    rational: Fraction
    twopi_exponent: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rational", Fraction(self.rational))
        exponent = int(self.twopi_exponent) if self.rational else 0
        object.__setattr__(self, "twopi_exponent", exponent)

    def to_float(self) -> float:
        return float(self.rational) * (2.0 * np.pi) ** self.twopi_exponent

    def __mul__(self, other):
        if isinstance(other, ScaledRational):
            return ScaledRational(
                self.rational * other.rational,
                self.twopi_exponent + other.twopi_exponent,
            )
        if isinstance(other, (int, Fraction)):
            return ScaledRational(self.rational * other, self.twopi_exponent)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.twopi_exponent == 0:
            return str(self.rational)
        return f"{self.rational}·(2π)^{self.twopi_exponent}"


@dataclass(frozen=True)
class EntryMomentSpec:
    """Mean of a product of matrix entries rho[i_p, j_p], indices 1-based."""

    dimension: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        n = int(self.dimension)
        if n < 1:
            raise ValueError("dimension must be positive")
        pairs = tuple((int(i), int(j)) for i, j in self.pairs)
        if not pairs:
            raise ValueError("at least one index pair is required")
        for i, j in pairs:
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"index pair ({i},{j}) out of range for dimension {n}")
        object.__setattr__(self, "dimension", n)
        object.__setattr__(self, "pairs", pairs)

    def order(self) -> int:
        return len(self.pairs)

    def swapped(self) -> "EntryMomentSpec":
        """The spec with every (i, j) replaced by (j, i)."""
        return EntryMomentSpec(self.dimension, tuple((j, i) for i, j in self.pairs))


def _canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    pivot = min(range(len(cycle)), key=cycle.__getitem__)
    return tuple(cycle[pivot:]) + tuple(cycle[:pivot])


def _permutation_cycles(perm: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles of a permutation given as images (0-based), each min-rotated."""
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycle = []
        at = start
        while not seen[at]:
            seen[at] = True
            cycle.append(at)
            at = perm[at]
        cycles.append(tuple(cycle))
    return cycles


class TraceProductExpr:
    """Formal sum of coefficient * products of trace factors.

    Each term is a tuple of cycles, each cycle an ordered tuple of 1-based
    observable indices rotated so its smallest index leads; the cycles of a
    term are sorted. Every index 1..K appears exactly once per term.
    """

    __slots__ = ("_order", "_terms")

    def __init__(self, order: int, terms: dict[tuple[tuple[int, ...], ...], Fraction] | None = None):
        self._order = int(order)
        clean: dict[tuple[tuple[int, ...], ...], Fraction] = {}
        for term, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if not coeff:
                continue
            indices = sorted(i for cycle in term for i in cycle)
            if indices != list(range(1, self._order + 1)):
                raise ValueError(f"term {term} does not cover indices 1..{self._order}")
            key = tuple(sorted(_canonical_cycle(c) for c in term))
            clean[key] = clean.get(key, Fraction(0)) + coeff
        self._terms = {k: c for k, c in clean.items() if c}

    @property
    def order(self) -> int:
        return self._order

    @property
    def terms(self) -> dict[tuple[tuple[int, ...], ...], Fraction]:
        return dict(self._terms)

    def total_coefficient(self) -> Fraction:
        return sum(self._terms.values(), Fraction(0))

    def evaluate(self, observables: Sequence[np.ndarray]) -> complex:
        """Plug concrete matrices into the trace factors."""
        mats = [np.asarray(c, dtype=complex) for c in observables]
        if len(mats) != self._order:
            raise ValueError(f"expected {self._order} matrices, got {len(mats)}")
        cache: dict[tuple[int, ...], complex] = {}
        total = 0.0 + 0.0j
        for term, coeff in self._terms.items():
            value = complex(coeff)
            for cycle in term:
                if cycle not in cache:
                    prod = mats[cycle[0] - 1]
                    for idx in cycle[1:]:
                        prod = prod @ mats[idx - 1]
                    cache[cycle] = complex(np.trace(prod))
                value *= cache[cycle]
            total += value
        return total

    def evaluate_entry_pairs(self, pairs: Sequence[tuple[int, int]]) -> Fraction:
        """Evaluate with single-entry observables selecting rho[i_p, j_p].

        Each trace factor collapses to a chain of Kronecker deltas, so the
        result is exact.
        """
        if len(pairs) != self._order:
            raise ValueError(f"expected {self._order} index pairs, got {len(pairs)}")
        total = Fraction(0)
        for term, coeff in self._terms.items():
            value = 1
            for cycle in term:
                for t, idx in enumerate(cycle):
                    j_here = pairs[idx - 1][1]
                    i_next = pairs[cycle[(t + 1) % len(cycle)] - 1][0]
                    if j_here != i_next:
                        value = 0
                        break
                if not value:
                    break
            if value:
                total += coeff
        return total

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TraceProductExpr):
            return self._order == other._order and self._terms == other._terms
        return NotImplemented

    def __repr__(self) -> str:
        pieces = []
        for term in sorted(self._terms):
            factors = "*".join(
                "tr(" + "".join(f"C{i}" for i in cycle) + ")" for cycle in term
            )
            pieces.append(f"({self._terms[term]})*{factors}")
        return "TraceProductExpr(" + (" + ".join(pieces) if pieces else "0") + ")"


def hs_volume(n: int) -> ScaledRational:
    """Total volume of the density-matrix body: (2*pi)^L_N * F_{N-1} / (N^2-1)!."""
    if n < 1:
        raise ValueError("n must be positive")
    return ScaledRational(
        Fraction(super_factorial(n - 1), factorial(n * n - 1)),
        lower_triangle_count(n),
    )


def _check_beta(beta: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(b) for b in beta)
    if not out:
        raise ValueError("beta must be non-empty")
    if any(b < 0 for b in out):
        raise ValueError(f"beta entries must be non-negative, got {out}")
    return out


def det_lemma_value(beta: Sequence[int]) -> int:
    """prod(beta_j!) * difference product of beta, as an exact integer.

    Equals the determinant of the matrix M[i, j] = (i + beta_j)!.
    """
    beta = _check_beta(beta)
    product = 1
    for b in beta:
        product *= factorial(b)
    return product * vandermonde(beta)


def int_lemma_value(beta: Sequence[int]) -> Fraction:
    """Ordered-simplex integral of the difference product times monomials.

    prod(beta_j!) * diffprod(beta) / (sum(beta) + L_N + N - 1)! for an
    N-vector beta.
    """
    beta = _check_beta(beta)
    n = len(beta)
    nu = sum(beta) + lower_triangle_count(n) + n - 1
    return Fraction(det_lemma_value(beta), factorial(nu))


def mgf_coefficient(k: int, n: int, a: np.ndarray) -> complex:
    """Normalized series coefficient of the moment generating function.

    (N^2-1)!/(K+N^2-1)! * sum over K-box shapes with at most N rows of
    dim * character(A); the K = 0 coefficient is 1 by convention.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if n < 1:
        raise ValueError("n must be positive")
    if k == 0:
        return 1.0 + 0.0j
    a = np.asarray(a, dtype=complex)
    if a.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got shape {a.shape}")
    total = 0.0 + 0.0j
    for irrep in enumerate_partitions(k, n):
        total += weyl_dim(irrep, n) * unitary_char_eval(irrep, a)
    prefactor = Fraction(factorial(n * n - 1), factorial(k + n * n - 1))
    return complex(prefactor * total)


def omega_expand(monomial: CycleType, k: int, *, max_boxes: int = DEFAULT_BOX_CAP) -> TraceProductExpr:
    """Expand a power-sum monomial into its sum of trace products.

    The derivative operator prod_j (C_j . d/dA) turns the class monomial
    t_1^{i_1} t_2^{i_2} ... into a sum over all K! assignments of the
    observables into cycles of the class pattern; collected terms carry
    integer multiplicities summing to K!.
    """
    if monomial.boxes() != k:
        raise ValueError(f"monomial has box weight {monomial.boxes()}, expected {k}")
    if k > max_boxes:
        raise CapExceededError(
            f"expansion of {k} boxes needs {k}! permutation terms; cap is {max_boxes}"
        )
    lengths = monomial.cycle_lengths()
    terms: dict[tuple[tuple[int, ...], ...], Fraction] = {}
    for perm in permutations(range(1, k + 1)):
        cycles = []
        at = 0
        for length in lengths:
            cycles.append(_canonical_cycle(perm[at : at + length]))
            at += length
        key = tuple(sorted(cycles))
        terms[key] = terms.get(key, Fraction(0)) + 1
    return TraceProductExpr(k, terms)


def _exact_or_complex(values: list[complex]) -> list:
    """Lift exactly-real floats into lossless Fractions, else leave unchanged.

    A float converts to Fraction without rounding, so when every trace in a
    permutation sum is exactly real the sum can be carried out in rational
    arithmetic with a single rounding at the very end; identity or real
    diagonal observables then give exact results.
    """
    exact = []
    for v in values:
        if v.imag != 0.0 or not math.isfinite(v.real):
            return values
        exact.append(Fraction(v.real))
    return exact


def _validated_observables(observables: Sequence[np.ndarray]) -> tuple[list[np.ndarray], int]:
    mats = [np.asarray(c, dtype=complex) for c in observables]
    if not mats:
        raise ValueError("at least one observable is required")
    n = mats[0].shape[0] if mats[0].ndim == 2 else -1
    for c in mats:
        if c.ndim != 2 or c.shape != (n, n):
            raise ValueError("observables must be square matrices of one dimension")
    return mats, n


def moment_traces(
    observables: Sequence[np.ndarray], *, max_boxes: int = DEFAULT_BOX_CAP
) -> complex:
    """Mean of prod_j (C_j . rho) over the flat density-matrix ensemble.

    Evaluates the permutation sum over S_K described in the module docstring.
    When every observable is the same matrix the sum collapses onto classes
    weighted by their orders, avoiding the K! enumeration.
    """
    mats, n = _validated_observables(observables)
    k = len(mats)
    if k > max_boxes:
        raise CapExceededError(
            f"{k} observables need {k}! permutation terms; cap is {max_boxes}"
        )
    prefactor = Fraction(factorial(n * n - 1), factorial(k + n * n - 1))

    if all(np.array_equal(c, mats[0]) for c in mats[1:]):
        ts = _exact_or_complex(eval_power_sums(mats[0], k))
        total = 0
        for cls in enumerate_cycle_types(k):
            value = class_order(cls) * n ** cls.cycles()
            for r, count in enumerate(cls.counts, start=1):
                if count:
                    value = value * ts[r - 1] ** count
            total = total + value
        return complex(prefactor * total)

    trace_cache: dict[tuple[int, ...], complex] = {}

    def chain_trace(cycle: tuple[int, ...]) -> complex:
        if cycle not in trace_cache:
            prod = mats[cycle[0]]
            for idx in cycle[1:]:
                prod = prod @ mats[idx]
            trace_cache[cycle] = complex(np.trace(prod))
        return trace_cache[cycle]

    cycle_sets = [_permutation_cycles(perm) for perm in permutations(range(k))]
    for cycles in cycle_sets:
        for cycle in cycles:
            chain_trace(cycle)
    exact_cache = dict(zip(trace_cache, _exact_or_complex(list(trace_cache.values()))))

    total = 0
    for cycles in cycle_sets:
        value = n ** len(cycles)
        for cycle in cycles:
            value = value * exact_cache[cycle]
        total = total + value
    return complex(prefactor * total)


def entry_moment(spec: EntryMomentSpec, *, max_boxes: int = DEFAULT_BOX_CAP) -> Fraction:
    """Exact mean of prod_p rho[i_p, j_p] over the flat ensemble.

    Single-entry observables make every trace factor a cyclic chain of
    Kronecker deltas, so the permutation sum stays in integer arithmetic.
    """
    k = spec.order()
    if k > max_boxes:
        raise CapExceededError(
            f"{k} index pairs need {k}! permutation terms; cap is {max_boxes}"
        )
    n = spec.dimension
    rows = [i for i, _ in spec.pairs]
    cols = [j for _, j in spec.pairs]
    total = 0
    for perm in permutations(range(k)):
        value = 1
        seen = [False] * k
        ncycles = 0
        for start in range(k):
            if seen[start]:
                continue
            ncycles += 1
            at = start
            while not seen[at]:
                seen[at] = True
                nxt = perm[at]
                if cols[at] != rows[nxt]:
                    value = 0
                    break
                at = nxt
            if not value:
                break
        if value:
            total += n**ncycles
    return Fraction(factorial(n * n - 1) * total, factorial(k + n * n - 1))


def purity_mean(n: int) -> Fraction:
    """Mean of tr(rho^2): the sum of entry moments rho[i,j] * rho[j,i]."""
    if n < 1:
        raise ValueError("n must be positive")
    total = Fraction(0)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            total += entry_moment(EntryMomentSpec(n, ((i, j), (j, i))))
    return total
