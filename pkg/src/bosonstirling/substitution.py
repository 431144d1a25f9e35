"""Approximate-substitution tests and builders for finite unipotent matrices.

An infinite lower-triangular matrix represents the transform
f(x) ↦ g(x)·f(φ(x)) exactly when its column EGFs satisfy
Σ_n M[n,k] x^n/n! = g(x)·φ(x)^k/k!.  A finite unipotent matrix of size n+1
is a matrix of approximate substitution when the truncated shadow of that
identity holds:

    c_k = [c_0 · (c_1/c_0)^k / k!]_n     for all 0 ≤ k ≤ n,

with c_k the column-k EGF polynomial.  Columns 0 and 1 satisfy this
identically; columns 2..n are genuine constraints.  Equality is exact
rational equality throughout — no tolerances.

The module also provides the two truncation operators on larger matrices:
r_n (principal submatrix, defined for all row-finite matrices, not
multiplicative) and τ_n (same extraction restricted to lower-triangular
matrices, where it is a morphism for the product).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import RangeError, ValidationError
from .series import TruncatedSeries
from .stirling import column_egf


@dataclass(frozen=True)
class FiniteMatrix:
    """Square matrix of exact rationals, indexed [i, k] from 0."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.entries)
        n = len(rows)
        if n == 0:
            raise ValidationError("matrix must have at least one row")
        for row in rows:
            if len(row) != n:
                raise ValidationError(
                    f"matrix is not square: row of length {len(row)} in size {n}"
                )
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    @classmethod
    def from_rows(cls, rows) -> FiniteMatrix:
        return cls(tuple(tuple(Fraction(v) for v in row) for row in rows))

    @classmethod
    def identity(cls, size: int) -> FiniteMatrix:
        return cls.from_rows(
            [[1 if i == k else 0 for k in range(size)] for i in range(size)]
        )

    def entry(self, i: int, k: int) -> Fraction:
        if not (0 <= i < self.size and 0 <= k < self.size):
            raise RangeError(f"index ({i}, {k}) outside size-{self.size} matrix")
        return self.entries[i][k]

    def is_lower_triangular(self) -> bool:
        return all(
            self.entries[i][k] == 0
            for i in range(self.size)
            for k in range(i + 1, self.size)
        )

    def is_unipotent(self) -> bool:
        return self.is_lower_triangular() and all(
            self.entries[i][i] == 1 for i in range(self.size)
        )

    def __matmul__(self, other: FiniteMatrix) -> FiniteMatrix:
        if not isinstance(other, FiniteMatrix):
            return NotImplemented
        if self.size != other.size:
            raise ValidationError(
                f"size mismatch in product: {self.size} vs {other.size}"
            )
        n = self.size
        rows = [
            [
                sum((self.entries[i][j] * other.entries[j][k] for j in range(n)),
                    Fraction(0))
                for k in range(n)
            ]
            for i in range(n)
        ]
        return FiniteMatrix.from_rows(rows)

    def to_json_obj(self) -> dict:
        return {
            "size": self.size,
            "entries": [[str(v) for v in row] for row in self.entries],
        }

    @classmethod
    def from_json_obj(cls, obj) -> FiniteMatrix:
        m = cls.from_rows(
            [[Fraction(v) for v in row] for row in obj["entries"]]
        )
        if m.size != int(obj["size"]):
            raise ValidationError(
                f"declared size {obj['size']} does not match {m.size} rows"
            )
        return m


@dataclass(frozen=True)
class ColumnMismatch:
    """One failed column of the substitution condition."""

    k: int
    expected: TruncatedSeries
    actual: TruncatedSeries


@dataclass(frozen=True)
class SubstitutionReport:
    """Verdict plus per-column diagnostics of the substitution condition.

    ``extracted_g`` is the column-0 EGF and ``extracted_phi`` the exact
    quotient c_1/c_0; for a unipotent input, phi has zero constant term and
    unit linear coefficient.
    """

    verdict: bool
    failing_columns: tuple[ColumnMismatch, ...]
    extracted_g: TruncatedSeries
    extracted_phi: TruncatedSeries

    def to_json_obj(self) -> dict:
        return {
            "verdict": self.verdict,
            "failing_columns": [
                {
                    "k": f.k,
                    "expected": f.expected.to_json_obj(),
                    "actual": f.actual.to_json_obj(),
                }
                for f in self.failing_columns
            ],
            "g": self.extracted_g.to_json_obj(),
            "phi": self.extracted_phi.to_json_obj(),
        }

    @classmethod
    def from_json_obj(cls, obj) -> SubstitutionReport:
        failing = tuple(
            ColumnMismatch(
                k=int(f["k"]),
                expected=TruncatedSeries.from_json_obj(f["expected"]),
                actual=TruncatedSeries.from_json_obj(f["actual"]),
            )
            for f in obj["failing_columns"]
        )
        return cls(
            verdict=bool(obj["verdict"]),
            failing_columns=failing,
            extracted_g=TruncatedSeries.from_json_obj(obj["g"]),
            extracted_phi=TruncatedSeries.from_json_obj(obj["phi"]),
        )


def _require_unipotent(m: FiniteMatrix) -> None:
    if m.size < 2:
        raise ValidationError(
            "the substitution condition needs at least two columns (size ≥ 2)"
        )
    if not m.is_unipotent():
        raise ValidationError(
            "the substitution condition is defined for unipotent matrices "
            "(lower triangular, unit diagonal)"
        )


def is_approximate_substitution(m: FiniteMatrix) -> SubstitutionReport:
    """Test the column-EGF condition c_k = [c_0(c_1/c_0)^k/k!]_n exactly.

    Columns 0 and 1 are evaluated too, as a cheap self-check of the series
    engine, even though they hold identically for any unipotent input.
    """
    _require_unipotent(m)
    n = m.size - 1
    columns = [column_egf(m, k, n) for k in range(m.size)]
    g = columns[0]
    phi = columns[1].multiply(g.invert())
    failing = []
    phi_power = TruncatedSeries.one(n)
    for k, actual in enumerate(columns):
        expected = g.multiply(phi_power).scale(Fraction(1, factorial(k)))
        if expected != actual:
            failing.append(ColumnMismatch(k=k, expected=expected, actual=actual))
        phi_power = phi_power.multiply(phi)
    return SubstitutionReport(
        verdict=not failing,
        failing_columns=tuple(failing),
        extracted_g=g,
        extracted_phi=phi,
    )


def sheffer_check(m: FiniteMatrix) -> SubstitutionReport:
    """Column-wise Sheffer-condition view of the same test.

    The bivariate identity Σ T(n,k) x^n/n! y^k = g(x)·e^{y·φ(x)} holds
    column-by-column exactly when every column EGF matches g·φ^k/k!, so the
    verdict and the extracted (g, φ) coincide with
    :func:`is_approximate_substitution`.
    """
    return is_approximate_substitution(m)


def build_substitution_matrix(
    g: TruncatedSeries, phi: TruncatedSeries, size: int
) -> FiniteMatrix:
    """Matrix of f ↦ g·(f∘φ) on the EGF monomial basis, truncated to `size`.

    M[i,k] = i! · [x^i] g(x)·φ(x)^k/k!.  Requires the normal forms
    g = 1 + O(x) and φ = x + O(x²), which make the result unipotent and
    guarantee it passes the substitution test at order size−1.
    """
    if size < 2:
        raise ValidationError(f"matrix size must be at least 2, got {size}")
    n = size - 1
    if g.order < n or phi.order < n:
        raise ValidationError(
            f"need series through order {n}: got g at {g.order}, phi at {phi.order}"
        )
    if g.coeffs[0] != 1:
        raise ValidationError("g must have constant term 1")
    if phi.coeffs[0] != 0 or phi.coeffs[1] != 1:
        raise ValidationError("phi must have constant term 0 and linear coefficient 1")
    g = g.truncate(n)
    phi = phi.truncate(n)
    columns = []
    phi_power = TruncatedSeries.one(n)
    for k in range(size):
        col = g.multiply(phi_power).scale(Fraction(1, factorial(k)))
        columns.append(col)
        phi_power = phi_power.multiply(phi)
    rows = [
        [columns[k].coeffs[i] * factorial(i) for k in range(size)]
        for i in range(size)
    ]
    return FiniteMatrix.from_rows(rows)


def _materialized_rows(m) -> int:
    """Last materialized row index of a FiniteMatrix or a Stirling matrix."""
    if isinstance(m, FiniteMatrix):
        return m.size - 1
    return m.n_max


def truncate_rn(m, n: int) -> FiniteMatrix:
    """r_n: the upper-left principal submatrix of dimension n+1.

    Defined on any row-finite matrix materialized through row n.  Not a
    morphism for the product: truncation discards cross terms that feed
    back into the retained block.
    """
    if n < 0:
        raise ValidationError(f"truncation order must be non-negative, got {n}")
    if n > _materialized_rows(m):
        raise RangeError(
            f"matrix materialized through row {_materialized_rows(m)}, need {n}"
        )
    return FiniteMatrix.from_rows(
        [[Fraction(m.entry(i, k)) for k in range(n + 1)] for i in range(n + 1)]
    )


def truncate_taun(m, n: int) -> FiniteMatrix:
    """τ_n: the same extraction, restricted to lower-triangular matrices.

    The domain restriction is what makes τ_n multiplicative:
    τ_n(AB) = τ_n(A)·τ_n(B) for lower-triangular A, B.
    """
    last = _materialized_rows(m)
    if isinstance(m, FiniteMatrix):
        lower = m.is_lower_triangular()
    else:
        lower = all(
            m.entry(i, k) == 0 for i in range(last + 1) for k in range(i + 1, len(m.row(i)))
        )
    if not lower:
        raise ValidationError("τ_n is only defined on lower-triangular matrices")
    return truncate_rn(m, n)
