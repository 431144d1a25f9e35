"""Boson words and their exact normally ordered forms.

A boson word is a finite product of the annihilator ``a`` and the creator
``a†`` subject to the commutation relation ``a a† = a† a + 1``.  Every word
(and every product of words) expands uniquely over the basis
``{(a†)^j a^l}``; that expansion is the normally ordered form.  All
coefficients are arbitrary-precision integers: they grow factorially fast,
so fixed-width arithmetic is never safe here.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from math import comb, factorial

from .errors import ParseError, ValidationError

ANNIHILATOR = "a"
CREATOR = "d"

_WHITESPACE = " \t\r\n"


@dataclass(frozen=True)
class BosonWord:
    """A finite word over the two-letter alphabet {annihilator, creator}.

    Letters are stored as ``"a"`` (annihilator) and ``"d"`` (creator, a†).
    The empty word is valid and denotes the identity operator.
    """

    letters: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for x in self.letters:
            if x not in (ANNIHILATOR, CREATOR):
                raise ValidationError(f"invalid letter {x!r}; expected 'a' or 'd'")

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def annihilator_count(self) -> int:
        return sum(1 for x in self.letters if x == ANNIHILATOR)

    @property
    def creator_count(self) -> int:
        return sum(1 for x in self.letters if x == CREATOR)

    @property
    def text(self) -> str:
        """Canonical parseable form, e.g. ``"da"`` for a†a."""
        return "".join(self.letters)

    def pretty(self) -> str:
        """Human-readable form, e.g. ``"a†a"``; the empty word prints as ``"1"``."""
        if not self.letters:
            return "1"
        return "".join("a†" if x == CREATOR else "a" for x in self.letters)

    def rs_pairs(self) -> tuple[tuple[int, int], ...]:
        """Exponent-sequence encoding: maximal runs as pairs (creators, annihilators).

        The word equals ``(a†)^{r_1} a^{s_1} ··· (a†)^{r_M} a^{s_M}`` for the
        returned pairs ``(r_m, s_m)``; a leading annihilator run yields a
        first pair with ``r_1 = 0``.
        """
        pairs: list[tuple[int, int]] = []
        i, n = 0, len(self.letters)
        while i < n:
            r = 0
            while i < n and self.letters[i] == CREATOR:
                r += 1
                i += 1
            s = 0
            while i < n and self.letters[i] == ANNIHILATOR:
                s += 1
                i += 1
            pairs.append((r, s))
        return tuple(pairs)

    @classmethod
    def from_rs(cls, pairs) -> BosonWord:
        """Build the word ``(a†)^{r_1} a^{s_1} ···`` from (r, s) pairs."""
        letters: list[str] = []
        for r, s in pairs:
            if r < 0 or s < 0:
                raise ValidationError(f"negative exponent in (r, s) pair ({r}, {s})")
            letters.extend([CREATOR] * r)
            letters.extend([ANNIHILATOR] * s)
        return cls(tuple(letters))

    def __repr__(self) -> str:
        return f"BosonWord({self.text!r})"


class NormalForm:
    """A finite integer combination of basis monomials (a†)^j a^l.

    ``terms`` maps exponent pairs ``(j, l)`` to nonzero integers.  Zero
    coefficients are never stored.  Instances are value-like: treat them as
    immutable after construction.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        cleaned: dict[tuple[int, int], int] = {}
        for (j, l), c in dict(terms).items():
            if j < 0 or l < 0:
                raise ValidationError(f"negative exponent in term ({j}, {l})")
            if not isinstance(c, int):
                raise ValidationError(f"coefficient {c!r} is not an exact integer")
            if c != 0:
                cleaned[(int(j), int(l))] = c
        self.terms = cleaned

    @classmethod
    def identity(cls) -> NormalForm:
        return cls({(0, 0): 1})

    def coefficient(self, j: int, l: int) -> int:
        return self.terms.get((j, l), 0)

    def sorted_terms(self) -> list[tuple[tuple[int, int], int]]:
        """Terms in canonical order: ascending in j, then l."""
        return sorted(self.terms.items())

    def to_json_obj(self) -> list:
        return [
            {"j": j, "l": l, "coeff": str(c)} for (j, l), c in self.sorted_terms()
        ]

    @classmethod
    def from_json_obj(cls, obj) -> NormalForm:
        terms = {(int(t["j"]), int(t["l"])): int(t["coeff"]) for t in obj}
        if len(terms) != len(obj):
            raise ValidationError("duplicate (j, l) pair in serialized normal form")
        return cls(terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __mul__(self, other) -> NormalForm:
        if not isinstance(other, NormalForm):
            return NotImplemented
        return multiply_normal_forms(self, other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (j, l), c in self.sorted_terms():
            if (j, l) == (0, 0):
                parts.append(str(c))
            else:
                parts.append(f"{c} (a†)^{j} a^{l}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"NormalForm({self.terms!r})"


def parse_word(text: str) -> BosonWord:
    """Parse word text into a BosonWord.

    Two syntaxes are accepted:

    * letter tokens, each ``a`` or ``d`` (case-insensitive), with ``a+`` as a
      synonym for ``d``; whitespace is ignored: ``"a a+ a a a+ a"``;
    * the vector form ``rs:[r1,s1;r2,s2;...]`` which expands to
      ``(a†)^{r1} a^{s1} (a†)^{r2} a^{s2} ···``.

    Unknown tokens raise :class:`ParseError` carrying the character offset;
    a negative exponent in the ``rs:`` form raises :class:`ValidationError`.
    """
    stripped = text.lstrip(_WHITESPACE)
    if stripped[:3].lower() == "rs:":
        return _parse_rs(text, offset=len(text) - len(stripped) + 3)
    letters: list[str] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in _WHITESPACE:
            i += 1
            continue
        low = ch.lower()
        if low == "a":
            if i + 1 < n and text[i + 1] == "+":
                letters.append(CREATOR)
                i += 2
            else:
                letters.append(ANNIHILATOR)
                i += 1
        elif low == "d":
            letters.append(CREATOR)
            i += 1
        else:
            raise ParseError(f"unknown token {ch!r}", offset=i)
    return BosonWord(tuple(letters))


def _parse_rs(text: str, offset: int) -> BosonWord:
    """Parse the ``rs:[r1,s1;...]`` vector syntax; `offset` points past ``rs:``."""
    i, n = offset, len(text)

    def skip_ws(i):
        while i < n and text[i] in _WHITESPACE:
            i += 1
        return i

    def read_int(i):
        i = skip_ws(i)
        start = i
        if i < n and text[i] == "-":
            i += 1
        while i < n and text[i].isdigit():
            i += 1
        if i == start or text[start:i] == "-":
            raise ParseError("expected integer", offset=start)
        value = int(text[start:i])
        if value < 0:
            raise ValidationError(f"negative exponent {value} in rs: form")
        return value, i

    i = skip_ws(i)
    if i >= n or text[i] != "[":
        raise ParseError("expected '[' after rs:", offset=i)
    i += 1
    pairs: list[tuple[int, int]] = []
    while True:
        r, i = read_int(i)
        i = skip_ws(i)
        if i >= n or text[i] != ",":
            raise ParseError("expected ',' between r and s", offset=i)
        s, i = read_int(i + 1)
        pairs.append((r, s))
        i = skip_ws(i)
        if i < n and text[i] == ";":
            i += 1
            continue
        if i < n and text[i] == "]":
            i += 1
            break
        raise ParseError("expected ';' or ']'", offset=i)
    i = skip_ws(i)
    if i != n:
        raise ParseError(f"trailing input {text[i]!r}", offset=i)
    return BosonWord.from_rs(pairs)


def excess(w: BosonWord) -> int:
    """Creator count minus annihilator count; constant across the normal form."""
    return w.creator_count - w.annihilator_count


def word_power(w: BosonWord, n: int) -> BosonWord:
    """Concatenation of n copies of w; n = 0 gives the empty word."""
    if n < 0:
        raise ValidationError(f"word power must be non-negative, got {n}")
    return BosonWord(w.letters * n)


def multiply_normal_forms(p: NormalForm, q: NormalForm) -> NormalForm:
    """Normally ordered product of two normal forms.

    Reduces each cross term with the Weyl-algebra identity

        a^l (a†)^r = Σ_k C(l,k) C(r,k) k! (a†)^{r−k} a^{l−k}

    which collapses the exponential blowup of letter-by-letter rewriting
    into a polynomial-size sum.  Bilinear and associative.
    """
    acc: defaultdict[tuple[int, int], int] = defaultdict(int)
    for (j1, l1), c1 in p.terms.items():
        for (j2, l2), c2 in q.terms.items():
            c = c1 * c2
            for k in range(min(l1, j2) + 1):
                weight = comb(l1, k) * comb(j2, k) * factorial(k)
                acc[(j1 + j2 - k, l1 + l2 - k)] += c * weight
    return NormalForm(acc)


def normal_order(w: BosonWord) -> NormalForm:
    """Expand w over the basis (a†)^j a^l by moving annihilators right.

    The empty word yields the identity ``{(0,0): 1}``.  All coefficients of
    a word's normal form are strictly positive, and j − l equals the word's
    excess in every term.
    """
    result = NormalForm.identity()
    for r, s in w.rs_pairs():
        result = multiply_normal_forms(result, NormalForm({(r, s): 1}))
    return result


def double_dot(w: BosonWord) -> NormalForm:
    """Reorder w as if a and a† commuted: a single term with coefficient 1."""
    return NormalForm({(w.creator_count, w.annihilator_count): 1})
