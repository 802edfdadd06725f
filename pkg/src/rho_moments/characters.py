"""Characters of S_K and U(N), Weyl dimensions, and dimension-weighted sums.

Symmetric-group characters come from the Murnaghan-Nakayama border-strip
recursion, memoized on (shape, remaining cycles). U(N) characters are carried
either as exact polynomials in the trace power sums t_r = tr(A^r) or as the
determinant ratio over the eigenvalues; the power-sum route is the recommended
evaluator since it has no singularity at coinciding eigenvalues.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cache
from math import factorial
from typing import Iterable, Mapping, Sequence

import numpy as np

from .combinat import (
    CycleType,
    Partition,
    class_order,
    enumerate_cycle_types,
    enumerate_partitions,
    lower_triangle_count,
    super_factorial,
)
from .errors import DegenerateSpectrumError

__all__ = [
    "PowerSumPoly",
    "sym_character",
    "unitary_char_poly",
    "eval_power_sums",
    "unitary_char_eval",
    "unitary_char_ratio",
    "weyl_dim",
    "dim_char_sum",
]

# Relative scale for declaring a spectrum numerically degenerate in
# unitary_char_ratio: |difference product| < 1e-12 * spread^(pair count).
_DEGENERACY_RTOL = 1e-12


def _strip_trailing_zeros(key: tuple[int, ...]) -> tuple[int, ...]:
    while key and key[-1] == 0:
        key = key[:-1]
    return key


class PowerSumPoly:
    """Exact-rational polynomial in the power sums t_1, t_2, ...

    Monomials are keyed by exponent tuples with trailing zeros stripped:
    ``(2,)`` is t1^2 and ``(1, 0, 1)`` is t1*t3. Zero coefficients are never
    stored. Instances are treated as immutable; arithmetic returns new objects.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, ...], Fraction | int] | None = None):
        clean: dict[tuple[int, ...], Fraction] = {}
        for key, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff:
                clean[_strip_trailing_zeros(tuple(int(e) for e in key))] = coeff
        self._terms = clean

    @classmethod
    def monomial(cls, exponents: Iterable[int], coeff: Fraction | int = 1) -> "PowerSumPoly":
        return cls({tuple(exponents): Fraction(coeff)})

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def coefficient(self, exponents: Iterable[int]) -> Fraction:
        return self._terms.get(_strip_trailing_zeros(tuple(exponents)), Fraction(0))

    def __add__(self, other: "PowerSumPoly") -> "PowerSumPoly":
        if not isinstance(other, PowerSumPoly):
            return NotImplemented
        merged = dict(self._terms)
        for key, coeff in other._terms.items():
            merged[key] = merged.get(key, Fraction(0)) + coeff
        return PowerSumPoly(merged)

    def __sub__(self, other: "PowerSumPoly") -> "PowerSumPoly":
        if not isinstance(other, PowerSumPoly):
            return NotImplemented
        merged = dict(self._terms)
        for key, coeff in other._terms.items():
            merged[key] = merged.get(key, Fraction(0)) - coeff
        return PowerSumPoly(merged)

    def __mul__(self, scalar: Fraction | int) -> "PowerSumPoly":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return PowerSumPoly({k: c * scalar for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PowerSumPoly):
            return self._terms == other._terms
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self._terms)

    def max_power_index(self) -> int:
        """Largest r such that t_r appears (0 for a constant)."""
        return max((len(k) for k in self._terms), default=0)

    def box_weights(self) -> set[int]:
        """The set of weights sum(r * i_r) over stored monomials."""
        return {sum(r * e for r, e in enumerate(key, start=1)) for key in self._terms}

    def evaluate(self, power_sums: Sequence):
        """Evaluate with power_sums[r-1] supplying t_r.

        Exact when the inputs are Fractions/ints, complex otherwise.
        """
        if self.max_power_index() > len(power_sums):
            raise ValueError(
                f"need t_1..t_{self.max_power_index()}, got {len(power_sums)} values"
            )
        total = Fraction(0)
        for key, coeff in self._terms.items():
            value = coeff
            for r, e in enumerate(key, start=1):
                if e:
                    value = value * power_sums[r - 1] ** e
            total = total + value
        return total

    def __repr__(self) -> str:
        if not self._terms:
            return "PowerSumPoly(0)"
        order = sorted(self._terms)
        return "PowerSumPoly(" + " + ".join(
            f"({self._terms[k]})*{monomial_label(k)}" for k in order
        ) + ")"


def monomial_label(exponents: tuple[int, ...]) -> str:
    """Display form of a power-sum monomial, e.g. ``t1^2*t2``; constant is ``1``."""
    pieces = []
    for r, e in enumerate(exponents, start=1):
        if e == 1:
            pieces.append(f"t{r}")
        elif e > 1:
            pieces.append(f"t{r}^{e}")
    return "*".join(pieces) if pieces else "1"


@cache
def _mn_character(parts: tuple[int, ...], cycles: tuple[int, ...]) -> int:
    """Murnaghan-Nakayama recursion on the beta-set of the shape.

    ``cycles`` holds the cycle lengths still to be removed, largest first.
    Removing a border strip of length r means lowering one beta number by r
    without colliding with another; the sign is (-1)^(rows spanned - 1).
    """
    if not cycles:
        return 1 if not parts else 0
    r, rest = cycles[0], cycles[1:]
    ell = len(parts)
    beta = [parts[j] + ell - 1 - j for j in range(ell)]
    beta_set = set(beta)
    total = 0
    for b in beta:
        lowered = b - r
        if lowered < 0 or lowered in beta_set:
            continue
        height = sum(1 for x in beta if lowered < x < b)
        new_beta = sorted((x if x != b else lowered for x in beta), reverse=True)
        m = len(new_beta)
        new_parts = tuple(new_beta[i] - (m - 1 - i) for i in range(m))
        while new_parts and new_parts[-1] == 0:
            new_parts = new_parts[:-1]
        sign = -1 if height % 2 else 1
        total += sign * _mn_character(new_parts, rest)
    return total


def sym_character(irrep: Partition, cycle_type: CycleType) -> int:
    """Character of an S_K class in the given irrep; both must have K boxes."""
    k = irrep.boxes()
    if cycle_type.boxes() != k:
        raise ValueError(
            f"irrep has {k} boxes but class permutes {cycle_type.boxes()} letters"
        )
    lengths = tuple(sorted(cycle_type.cycle_lengths(), reverse=True))
    return _mn_character(irrep.parts, lengths)


@cache
def unitary_char_poly(irrep: Partition) -> PowerSumPoly:
    """Power-sum expansion of the U(N) character for this shape.

    The coefficient of the class monomial t^i is |class| * chi(class) / K!.
    The result does not depend on N.
    """
    k = irrep.boxes()
    if k < 1:
        raise ValueError("the shape must have at least one box")
    kfact = factorial(k)
    terms: dict[tuple[int, ...], Fraction] = {}
    for cls in enumerate_cycle_types(k):
        coeff = Fraction(class_order(cls) * sym_character(irrep, cls), kfact)
        if coeff:
            terms[cls.counts] = coeff
    return PowerSumPoly(terms)


def eval_power_sums(a: np.ndarray, max_r: int) -> list[complex]:
    """(t_1, ..., t_max_r) with t_r = tr(a^r), by repeated multiplication."""
    if max_r < 1:
        raise ValueError("max_r must be positive")
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    power = np.eye(a.shape[0], dtype=complex)
    out: list[complex] = []
    for _ in range(max_r):
        power = power @ a
        out.append(complex(np.trace(power)))
    return out


def unitary_char_eval(irrep: Partition, a: np.ndarray) -> complex:
    """Evaluate the U(N) character at a matrix via its power sums.

    Shapes with more rows than the matrix dimension are rejected; the
    power-sum polynomial would not vanish there even though the irrep does
    not exist.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if irrep.rows() > n:
        raise ValueError(f"shape {irrep} has more than {n} rows")
    k = irrep.boxes()
    if k == 0:
        return 1.0 + 0.0j
    ts = eval_power_sums(a, k)
    return complex(unitary_char_poly(irrep).evaluate(ts))


def unitary_char_ratio(irrep: Partition, eigenvalues: Sequence[complex]) -> complex:
    """Determinant-ratio character from the eigenvalues of the matrix.

    Numerator columns carry exponents eta_j + N-1-j; the denominator is the
    difference product of the eigenvalues. Raises DegenerateSpectrumError when
    the denominator is numerically indistinguishable from zero, since the
    ratio is 0/0 at coinciding eigenvalues.
    """
    alpha = np.asarray(eigenvalues, dtype=complex).ravel()
    n = alpha.size
    if n < 1:
        raise ValueError("at least one eigenvalue is required")
    if irrep.rows() > n:
        raise ValueError(f"shape {irrep} has more than {n} rows")

    denom = 1.0 + 0.0j
    spread = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            diff = alpha[j] - alpha[i]
            denom *= diff
            spread = max(spread, abs(diff))
    tol = _DEGENERACY_RTOL * spread ** lower_triangle_count(n) if n > 1 else 0.0
    if n > 1 and abs(denom) <= tol:
        raise DegenerateSpectrumError(
            f"difference product {abs(denom):.3e} below tolerance {tol:.3e}; "
            "use the power-sum evaluator for near-degenerate spectra"
        )

    # The formula's columns run over descending exponents; reversing them to
    # the ascending difference product costs a sign of (-1)^{L_N}.
    if lower_triangle_count(n) % 2:
        denom = -denom
    padded = irrep.padded(n)
    exponents = np.array([padded[j] + n - 1 - j for j in range(n)])
    numerator = np.linalg.det(alpha[:, None] ** exponents[None, :])
    return complex(numerator / denom)


def weyl_dim(irrep: Partition, n: int) -> int:
    """Dimension of the U(N) irrep for this shape; 0 when rows exceed n.

    Evaluates det((eta+delta)^{n-1}, ..., (eta+delta)^0) / prod_{j<n} j! as
    the difference product prod_{i<j} (v_i - v_j) over v_j = eta_j + n-1-j,
    which is an exact integer.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if irrep.rows() > n:
        return 0
    padded = irrep.padded(n)
    v = [padded[j] + n - 1 - j for j in range(n)]
    numerator = 1
    for i in range(n):
        for j in range(i + 1, n):
            numerator *= v[i] - v[j]
    return numerator // super_factorial(n - 1)


def dim_char_sum(k: int, n: int) -> PowerSumPoly:
    """Sum of dim(irrep) * character over all K-box irreps of U(N).

    ``k = 0`` returns the constant 1. Coefficients depend on the concrete n.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if n < 1:
        raise ValueError("n must be positive")
    if k == 0:
        return PowerSumPoly({(): Fraction(1)})
    total = PowerSumPoly()
    for irrep in enumerate_partitions(k, n):
        total = total + unitary_char_poly(irrep) * weyl_dim(irrep, n)
    return total
