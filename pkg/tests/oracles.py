"""Independent oracles used to pin golden values.

Nothing here may call into the code paths it checks: determinants are
cofactor expansions, dimensions come from the hook-content formula, and
integrals go through scipy quadrature in the tests themselves.
"""

from fractions import Fraction


def exact_det(rows):
    """Cofactor-expansion determinant over exact scalars (int/Fraction)."""
    size = len(rows)
    if any(len(r) != size for r in rows):
        raise ValueError("matrix must be square")
    if size == 0:
        return 1
    if size == 1:
        return rows[0][0]
    total = 0
    for col in range(size):
        minor = [r[:col] + r[col + 1 :] for r in rows[1:]]
        term = rows[0][col] * exact_det(minor)
        total = total - term if col % 2 else total + term
    return total


def hook_content_dim(parts, n):
    """U(N) irrep dimension by the hook-content formula: prod (n + j - i) / hook."""
    parts = tuple(parts)
    if len(parts) > n:
        return 0
    conj = [sum(1 for p in parts if p > col) for col in range(parts[0])] if parts else []
    value = Fraction(1)
    for i, row_len in enumerate(parts):
        for j in range(row_len):
            hook = (row_len - j) + (conj[j] - i) - 1
            value *= Fraction(n + j - i, hook)
    assert value.denominator == 1
    return value.numerator


def vandermonde_matrix(values):
    """Explicit Vandermonde matrix rows [1, v, v^2, ...] for the det oracle."""
    size = len(values)
    return [[v**p for p in range(size)] for v in values]
