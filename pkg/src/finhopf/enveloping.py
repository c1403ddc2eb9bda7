"""Degree-truncated universal enveloping algebras in PBW form.

Elements are rational combinations of ordered monomials e_1^a_1 ... e_n^a_n
of total degree at most N.  Products are computed by straightening: an
out-of-order adjacent pair xy with x > y rewrites to yx + [x, y], which
strictly lowers either the number of inversions or the degree, so the
rewriting terminates.  Any product whose raw degree would exceed N raises
TruncationOverflow before any work is discarded; results are never silently
truncated.

The Hopf structure is the usual one determined on generators: generators are
primitive, the counit kills positive degree, and the antipode negates
generators and reverses products.  Comultiplication and antipode never raise
degree, so they are total on the truncated model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import DimensionMismatch, TruncationOverflow
from .liebundle import LieFiber
from .linalg import QMatrix
from .rationals import rat, rat_str

Monomial = tuple[int, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def mono_degree(m: Monomial) -> int:
    return sum(m)

def mono_word(m: Monomial) -> tuple[int, ...]:
    """The sorted index word of a monomial: (0,0,1) for e1^2 e2."""
    word = []
    for i, a in enumerate(m):
        word.extend([i] * a)
    return tuple(word)


def mono_key(m: Monomial):
    """Canonical ordering key: by degree, then lexicographically by word."""
    return (mono_degree(m), mono_word(m))


def mono_from_word(word, dim: int) -> Monomial:
    m = [0] * dim
    for i in word:
        m[i] += 1
    return tuple(m)


def unit_mono(dim: int) -> Monomial:
    return (0,) * dim


def monomials_up_to(dim: int, degree: int) -> list[Monomial]:
    """All PBW monomials of total degree <= degree, in canonical order."""
    out = [()] if dim == 0 else []
    if dim > 0:
        def rec(prefix, remaining, slots):
            if slots == 0:
                out.append(tuple(prefix))
                return
            for a in range(remaining + 1):
                rec(prefix + [a], remaining - a, slots - 1)
        rec([], degree, dim)
    out.sort(key=mono_key)
    return out


def _straighten(fiber: LieFiber, word, coeff: Fraction):
    """Rewrite an arbitrary index word into ordered monomials.

    Bracket terms shorten the word, so the degree never rises above the
    input length; the caller is responsible for the truncation check.
    """
    out = {}
    stack = [(tuple(word), coeff)]
    while stack:
        w, c = stack.pop()
        descent = next((i for i in range(len(w) - 1) if w[i] > w[i + 1]), None)
        if descent is None:
            m = mono_from_word(w, fiber.dim)
            acc = out.get(m, _ZERO) + c
            if acc:
                out[m] = acc
            elif m in out:
                del out[m]
            continue
        x, y = w[descent], w[descent + 1]
        stack.append((w[:descent] + (y, x) + w[descent + 2:], c))
        for k, ck in enumerate(fiber.bracket_coeffs(x, y)):
            if ck:
                stack.append((w[:descent] + (k,) + w[descent + 2:], c * ck))
    return out


@dataclass(frozen=True)
class UElement:
    """An element of U(fiber) truncated at total degree ``truncation``."""

    fiber: LieFiber
    point: str
    truncation: int
    terms: dict = field(default_factory=dict)  # Monomial -> Fraction, zero-free

    def __post_init__(self):
        clean = {}
        for m, c in self.terms.items():
            c = rat(c)
            if len(m) != self.fiber.dim:
                raise DimensionMismatch(
                    f"monomial {m} does not fit a {self.fiber.dim}-dimensional fiber"
                )
            if mono_degree(m) > self.truncation:
                raise TruncationOverflow(mono_degree(m), self.truncation)
            if c:
                clean[m] = c
        object.__setattr__(self, "terms", clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, fiber, point, truncation) -> "UElement":
        return cls(fiber, point, truncation, {})

    @classmethod
    def unit(cls, fiber, point, truncation) -> "UElement":
        return cls(fiber, point, truncation, {unit_mono(fiber.dim): _ONE})

    @classmethod
    def generator(cls, fiber, point, truncation, index) -> "UElement":
        m = [0] * fiber.dim
        m[index] = 1
        return cls(fiber, point, truncation, {tuple(m): _ONE})

    def _like(self, terms) -> "UElement":
        return UElement(self.fiber, self.point, self.truncation, terms)

    # -- linear structure --------------------------------------------------

    def __add__(self, other: "UElement") -> "UElement":
        self._compatible(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            acc = terms.get(m, _ZERO) + c
            if acc:
                terms[m] = acc
            else:
                terms.pop(m, None)
        return self._like(terms)

    def __sub__(self, other: "UElement") -> "UElement":
        return self + (-other)

    def __neg__(self) -> "UElement":
        return self._like({m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "UElement":
        c = rat(c)
        if not c:
            return self._like({})
        return self._like({m: c * x for m, x in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, UElement)
            and self.fiber == other.fiber
            and self.point == other.point
            and self.truncation == other.truncation
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def graded(self, k: int) -> "UElement":
        return self._like({m: c for m, c in self.terms.items() if mono_degree(m) == k})

    def _compatible(self, other):
        if (
            self.fiber != other.fiber
            or self.point != other.point
            or self.truncation != other.truncation
        ):
            raise DimensionMismatch("elements live in different truncated algebras")

    # -- algebra structure -------------------------------------------------

    def mul(self, other: "UElement") -> "UElement":
        self._compatible(other)
        out = {}
        for m1, c1 in self.terms.items():
            w1 = mono_word(m1)
            for m2, c2 in other.terms.items():
                total = len(w1) + mono_degree(m2)
                if total > self.truncation:
                    raise TruncationOverflow(
                        total, self.truncation,
                        "product of stored monomials; no silent truncation",
                    )
                for m, c in _straighten(self.fiber, w1 + mono_word(m2), c1 * c2).items():
                    acc = out.get(m, _ZERO) + c
                    if acc:
                        out[m] = acc
                    else:
                        del out[m]
        return self._like(out)

    __mul__ = mul

    # -- Hopf structure ----------------------------------------------------

    def delta(self) -> dict:
        """Comultiplication as a map (Monomial, Monomial) -> coefficient.

        Splitting an ordered monomial leaves both halves ordered, so no
        restraightening is needed and no overflow can occur.
        """
        out = {}
        for m, c in self.terms.items():
            splits = [((), _ONE)]
            for a in m:
                splits = [
                    (left + (b,), w * comb(a, b))
                    for left, w in splits
                    for b in range(a + 1)
                ]
            for left, weight in splits:
                right = tuple(a - b for a, b in zip(m, left))
                key = (left, right)
                acc = out.get(key, _ZERO) + c * weight
                if acc:
                    out[key] = acc
                else:
                    del out[key]
        return out

    def counit(self) -> Fraction:
        return self.terms.get(unit_mono(self.fiber.dim), _ZERO)

    def antipode(self) -> "UElement":
        """Negate generators and reverse words, then restraighten."""
        out = {}
        for m, c in self.terms.items():
            word = mono_word(m)[::-1]
            sign = -_ONE if len(word) % 2 else _ONE
            for mm, cc in _straighten(self.fiber, word, c * sign).items():
                acc = out.get(mm, _ZERO) + cc
                if acc:
                    out[mm] = acc
                else:
                    del out[mm]
        return self._like(out)

    def transport(self, matrix: QMatrix, target_fiber: LieFiber, target_point: str) -> "UElement":
        """Apply a linear generator substitution, landing in the target fiber.

        The substitution is degree-preserving on words, so it is total; it is
        an algebra map exactly when the matrix preserves brackets, which is
        the action-validation condition, not a precondition here.
        """
        if matrix.cols != self.fiber.dim or matrix.rows != target_fiber.dim:
            raise DimensionMismatch(
                f"transport matrix {matrix.rows}x{matrix.cols} does not map "
                f"dim {self.fiber.dim} into dim {target_fiber.dim}"
            )
        out = {}
        for m, c in self.terms.items():
            images = [((), c)]
            for j in mono_word(m):
                images = [
                    (w + (i,), cc * matrix.entry(i, j))
                    for w, cc in images
                    for i in range(target_fiber.dim)
                    if matrix.entry(i, j)
                ]
            for w, cc in images:
                for mm, c2 in _straighten(target_fiber, w, cc).items():
                    acc = out.get(mm, _ZERO) + c2
                    if acc:
                        out[mm] = acc
                    else:
                        del out[mm]
        return UElement(target_fiber, target_point, self.truncation, out)

    # -- rendering ---------------------------------------------------------

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=mono_key):
            parts.append(f"{rat_str(self.terms[m])}*{mono_text(m, self.fiber.basis)}")
        return " + ".join(parts)

    def __repr__(self):
        return f"UElement({self.point}: {self.text()})"


def mono_text(m: Monomial, names) -> str:
    if not any(m):
        return "1"
    parts = []
    for i, a in enumerate(m):
        if a == 1:
            parts.append(names[i])
        elif a > 1:
            parts.append(f"{names[i]}^{a}")
    return "".join(parts)


@dataclass(frozen=True)
class SectionU:
    """A section of the bundle of truncated enveloping algebras.

    Operations act pointwise, so sections form the product of the fiberwise
    Hopf algebras; embedded over unit arrows they are the functions-on-M
    shaped subalgebra of a convolution algebroid.
    """

    values: dict  # point -> UElement

    def value(self, point: str) -> UElement:
        return self.values[point]

    def mul(self, other: "SectionU") -> "SectionU":
        if set(self.values) != set(other.values):
            raise DimensionMismatch("sections over different point sets")
        return SectionU({p: u.mul(other.values[p]) for p, u in self.values.items()})

    def antipode(self) -> "SectionU":
        return SectionU({p: u.antipode() for p, u in self.values.items()})

    def counit(self) -> dict:
        return {p: u.counit() for p, u in self.values.items()}

    def __add__(self, other: "SectionU") -> "SectionU":
        if set(self.values) != set(other.values):
            raise DimensionMismatch("sections over different point sets")
        return SectionU({p: u + other.values[p] for p, u in self.values.items()})

    def __eq__(self, other):
        return isinstance(other, SectionU) and self.values == other.values
