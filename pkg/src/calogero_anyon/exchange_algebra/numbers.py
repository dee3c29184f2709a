"""Exact Gaussian-rational scalars and permutations of particle labels."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations as _permutations
from numbers import Rational
from typing import Iterable, Iterator, Union

Scalar = Union["ComplexRational", Fraction, int]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        if not value.is_integer():
            raise TypeError(f"refusing to convert non-integral float {value!r} to an exact rational")
        return Fraction(int(value))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


class ComplexRational:
    """A number ``re + i*im`` with arbitrary-precision rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    @classmethod
    def coerce(cls, value) -> "ComplexRational":
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, complex):
            return cls(value.real, value.imag)
        return cls(value, 0)

    @classmethod
    def i(cls) -> "ComplexRational":
        return cls(0, 1)

    @classmethod
    def parse(cls, pair) -> "ComplexRational":
        re, im = pair
        return cls(Fraction(re), Fraction(im))

    def to_strings(self) -> list[str]:
        return [_fraction_str(self.re), _fraction_str(self.im)]

    def __add__(self, other):
        if not isinstance(other, ComplexRational):
            try:
                other = ComplexRational.coerce(other)
            except TypeError:
                return NotImplemented
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, ComplexRational):
            try:
                other = ComplexRational.coerce(other)
            except TypeError:
                return NotImplemented
        return ComplexRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return ComplexRational.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, ComplexRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return ComplexRational(a * c, 0)
            return ComplexRational(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return ComplexRational(self.re * other, self.im * other)
        try:
            return self * ComplexRational.coerce(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ComplexRational.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero ComplexRational")
        return ComplexRational(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other):
        return ComplexRational.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ComplexRational(1) / (self ** (-k))
        result = ComplexRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self):
        return ComplexRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, ComplexRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ComplexRational({_fraction_str(self.re)!r}, {_fraction_str(self.im)!r})"

    def __str__(self):
        if self.im == 0:
            return _fraction_str(self.re)
        if self.re == 0:
            return f"{_fraction_str(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"({_fraction_str(self.re)}{sign}{_fraction_str(abs(self.im))}i)"


def _fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


ONE = ComplexRational(1)
I_UNIT = ComplexRational(0, 1)


class Permutation:
    """A bijection of ``{1, ..., n}`` stored by its images (one-based)."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(k) for k in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images!r} is not a permutation of 1..{len(images)}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        images = list(range(1, n + 1))
        images[i - 1], images[j - 1] = images[j - 1], images[i - 1]
        return cls(images)

    @classmethod
    def all(cls, n: int) -> Iterator["Permutation"]:
        for images in _permutations(range(1, n + 1)):
            yield cls(images)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """Return ``self o other`` (apply ``other`` first)."""
        return Permutation(self.images[k - 1] for k in other.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return self.compose(other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for k, image in enumerate(self.images, start=1):
            inv[image - 1] = k
        return Permutation(inv)

    def inversions(self) -> int:
        im = self.images
        return sum(1 for a in range(len(im)) for b in range(a + 1, len(im)) if im[a] > im[b])

    def parity(self) -> int:
        return -1 if self.inversions() % 2 else 1

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation"):
        return self.images < other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"
