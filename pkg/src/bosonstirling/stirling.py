"""Generalized Stirling matrices and Bell polynomials attached to a boson word.

For a word w with excess d, the normally ordered powers decompose as

    N(w^n) = (a†)^{nd} Σ_k S_w(n,k) (a†)^k a^k          (d ≥ 0)
    N(w^n) = (Σ_k S_w(n,k) (a†)^k a^k) a^{n|d|}          (d < 0)

and the integers S_w(n,k) generalize the Stirling numbers of the second
kind (w = a†a recovers them exactly).  Rows are materialized up to a
requested index; row n carries columns k = 0..n·s where s is the word's
annihilator count, so the matrix has a staircase profile of step s and is
unitriangular exactly when s = 1 (granted the word has at least one
creator).

Bell polynomials are the row generating polynomials B(n,x) = Σ_k S(n,k)x^k
and the Bell numbers their values at x = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .boson import BosonWord, NormalForm, excess, multiply_normal_forms, normal_order
from .errors import RangeError, ValidationError
from .series import TruncatedSeries

NOT_SINGLE_ANNIHILATOR = "not-single-annihilator"
PURE_SUBSTITUTION = "pure-substitution"
SUBSTITUTION_WITH_PREFUNCTION = "substitution-with-prefunction"


@dataclass(frozen=True)
class GeneralizedStirlingMatrix:
    """Rows 0..n_max of the row-finite staircase matrix S_w(n,k).

    ``rows[n]`` stores the dense staircase slice k = 0..n·s_tot; entries to
    the right of the staircase are implicitly zero.  Immutable once built.
    """

    word: BosonWord
    rows: tuple[tuple[int, ...], ...]
    s_tot: int
    r_tot: int
    d: int

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1

    def row(self, n: int) -> tuple[int, ...]:
        if not 0 <= n <= self.n_max:
            raise RangeError(f"row {n} not materialized (have 0..{self.n_max})")
        return self.rows[n]

    def entry(self, n: int, k: int):
        """S_w(n,k); zero beyond the staircase, RangeError beyond row n_max."""
        if not 0 <= n <= self.n_max:
            raise RangeError(f"row {n} not materialized (have 0..{self.n_max})")
        if k < 0:
            raise RangeError(f"column index {k} is negative")
        row = self.rows[n]
        return row[k] if k < len(row) else 0

    def to_json_obj(self) -> dict:
        return {
            "word": self.word.text,
            "s_tot": self.s_tot,
            "d": self.d,
            "rows": [[str(v) for v in row] for row in self.rows],
        }

    @classmethod
    def from_json_obj(cls, obj) -> GeneralizedStirlingMatrix:
        word = BosonWord(tuple(obj["word"]))
        rows = tuple(tuple(int(v) for v in row) for row in obj["rows"])
        m = cls(
            word=word,
            rows=rows,
            s_tot=word.annihilator_count,
            r_tot=word.creator_count,
            d=excess(word),
        )
        if m.s_tot != int(obj["s_tot"]) or m.d != int(obj["d"]):
            raise ValidationError("serialized s_tot/d do not match the word")
        return m


def stirling_matrix(w: BosonWord, n_max: int) -> GeneralizedStirlingMatrix:
    """Materialize rows 0..n_max of S_w by incremental normal ordering.

    Row n is read off N(w^n), computed as N(w^{n-1})·N(w) — the normally
    ordered product is a homomorphism, so this matches ordering w^n from
    scratch at a fraction of the cost.
    """
    if len(w) == 0:
        raise ValidationError("the empty word has no Stirling matrix")
    if n_max < 0:
        raise ValidationError(f"row count must be non-negative, got {n_max}")
    s_tot = w.annihilator_count
    r_tot = w.creator_count
    d = excess(w)
    nf_w = normal_order(w)
    rows = []
    nf = NormalForm.identity()
    for n in range(n_max + 1):
        if n > 0:
            nf = multiply_normal_forms(nf, nf_w)
        j_shift = n * d if d > 0 else 0
        l_shift = -n * d if d < 0 else 0
        rows.append(
            tuple(
                nf.coefficient(k + j_shift, k + l_shift)
                for k in range(n * s_tot + 1)
            )
        )
    return GeneralizedStirlingMatrix(
        word=w, rows=tuple(rows), s_tot=s_tot, r_tot=r_tot, d=d
    )


def bell_polynomial(m: GeneralizedStirlingMatrix, n: int, x) -> Fraction:
    """Evaluate B_w(n, x) = Σ_k S_w(n,k) x^k at an exact rational x."""
    if not 0 <= n <= m.n_max:
        raise RangeError(f"row {n} not materialized (have 0..{m.n_max})")
    x = Fraction(x)
    value = Fraction(0)
    for coeff in reversed(m.rows[n]):
        value = value * x + coeff
    return value


def bell_numbers(m: GeneralizedStirlingMatrix) -> list[int]:
    """Row sums B_w(n) = B_w(n, 1) for n = 0..n_max."""
    return [sum(row) for row in m.rows]


@dataclass(frozen=True)
class WordClassification:
    """Shape of a word's Stirling matrix, per its annihilator structure.

    A word with exactly one annihilator factors uniquely as
    ``(a†)^{r−p} a (a†)^p``; its matrix is the matrix of a substitution
    (p = 0) or of a substitution with prefunction (p > 0).  ``ends_with_a``
    equivalently reports whether the first matrix column is (1, 0, 0, ...).
    """

    kind: str
    r: int | None
    p: int | None
    ends_with_a: bool
    first_column_unit: bool

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind,
            "r": self.r,
            "p": self.p,
            "ends_with_a": self.ends_with_a,
            "first_column_unit": self.first_column_unit,
        }

    @classmethod
    def from_json_obj(cls, obj) -> WordClassification:
        return cls(
            kind=str(obj["kind"]),
            r=None if obj["r"] is None else int(obj["r"]),
            p=None if obj["p"] is None else int(obj["p"]),
            ends_with_a=bool(obj["ends_with_a"]),
            first_column_unit=bool(obj["first_column_unit"]),
        )


def classify_word(w: BosonWord) -> WordClassification:
    """Classify w by its single-annihilator decomposition, if any."""
    ends_with_a = len(w) > 0 and w.letters[-1] == "a"
    if w.annihilator_count != 1:
        return WordClassification(
            kind=NOT_SINGLE_ANNIHILATOR,
            r=None,
            p=None,
            ends_with_a=ends_with_a,
            first_column_unit=ends_with_a,
        )
    p = len(w) - 1 - w.letters.index("a")
    r = w.creator_count
    kind = PURE_SUBSTITUTION if p == 0 else SUBSTITUTION_WITH_PREFUNCTION
    return WordClassification(
        kind=kind,
        r=r,
        p=p,
        ends_with_a=ends_with_a,
        first_column_unit=ends_with_a,
    )


def column_egf(matrix, k: int, order: int) -> TruncatedSeries:
    """Truncated EGF of column k: Σ_{i=0..order} M[i,k] x^i / i!.

    Accepts anything with an ``entry(i, k)`` accessor (a materialized
    Stirling matrix or a finite square matrix); entries must exist through
    row `order`, else the accessor's RangeError propagates.
    """
    if order < 0:
        raise ValidationError(f"order must be non-negative, got {order}")
    coeffs = tuple(
        Fraction(matrix.entry(i, k)) / factorial(i) for i in range(order + 1)
    )
    return TruncatedSeries(order, coeffs)
