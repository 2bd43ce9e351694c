"""Exact scalars: rationals, real quadratic extensions, and phases.

Every number that flows through the stability engine is either a rational or
a value a + b*sqrt(n) with a, b rational and n a fixed square-free radicand.
Signs, orderings and phase comparisons are decided by integer arithmetic
alone; no floating point is ever consulted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Optional, Union

RatLike = Union[int, Fraction]
QuadLike = Union[int, Fraction, "QuadExt"]


class RadicandMismatchError(ValueError):
    """Two operands live in distinct quadratic extensions."""


def squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, n0) with n == s*s*n0 and n0 square-free (n >= 0)."""
    if n < 0:
        raise ValueError("radicand must be non-negative")
    if n in (0, 1):
        return 1, n
    s, n0 = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                n0 *= p
        p += 1 if p == 2 else 2
    n0 *= n
    return s, n0


def _join_radicands(n1: int, n2: int) -> int:
    if n1 == 0:
        return n2
    if n2 == 0 or n1 == n2:
        return n1
    raise RadicandMismatchError(f"radicand mismatch: sqrt({n1}) vs sqrt({n2})")


@dataclass(frozen=True)
class QuadExt:
    """Exact value a + b*sqrt(n).

    Canonical form: n is square-free and non-negative, and b == 0 forces
    n == 0, so structural equality coincides with numeric equality.  The
    constructor accepts any non-negative radicand and reduces it.
    """

    a: Fraction
    b: Fraction = Fraction(0)
    n: int = 0

    def __post_init__(self) -> None:
        a = Fraction(self.a)
        b = Fraction(self.b)
        s, n0 = squarefree_split(self.n)
        b *= s
        if n0 == 1:
            a += b
            b = Fraction(0)
            n0 = 0
        if n0 == 0:
            b = Fraction(0)
        if b == 0:
            n0 = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "n", n0)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def coerce(x: QuadLike) -> "QuadExt":
        if isinstance(x, QuadExt):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadExt(Fraction(x))
        raise TypeError(f"cannot interpret {x!r} as a quadratic-extension value")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.a

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: QuadLike) -> "QuadExt":
        o = QuadExt.coerce(other)
        n = _join_radicands(self.n, o.n)
        return QuadExt(self.a + o.a, self.b + o.b, n)

    __radd__ = __add__

    def __sub__(self, other: QuadLike) -> "QuadExt":
        return self + (-QuadExt.coerce(other))

    def __rsub__(self, other: QuadLike) -> "QuadExt":
        return (-self) + other

    def __neg__(self) -> "QuadExt":
        return QuadExt(-self.a, -self.b, self.n)

    def __mul__(self, other: QuadLike) -> "QuadExt":
        o = QuadExt.coerce(other)
        n = _join_radicands(self.n, o.n)
        return QuadExt(
            self.a * o.a + self.b * o.b * n,
            self.a * o.b + self.b * o.a,
            n,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: QuadLike) -> "QuadExt":
        o = QuadExt.coerce(other)
        if o.a == 0 and o.b == 0:
            raise ZeroDivisionError("division by zero")
        n = _join_radicands(self.n, o.n)
        norm = o.a * o.a - o.b * o.b * n
        conj = QuadExt(o.a, -o.b, o.n)
        num = self * conj
        return QuadExt(num.a / norm, num.b / norm, n)

    def __rtruediv__(self, other: QuadLike) -> "QuadExt":
        return QuadExt.coerce(other) / self

    def __pow__(self, k: int) -> "QuadExt":
        if k < 0:
            return (QuadExt(Fraction(1)) / self) ** (-k)
        out = QuadExt(Fraction(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- ordering ------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(n), by comparing a*a against b*b*n."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        # opposite signs: |a| vs |b|*sqrt(n) decided on squares
        lhs = self.a * self.a
        rhs = self.b * self.b * self.n
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __lt__(self, other: QuadLike) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: QuadLike) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: QuadLike) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: QuadLike) -> bool:
        return (self - other).sign() >= 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadExt.coerce(other)
        if not isinstance(other, QuadExt):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.n == other.n

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.n))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __str__(self) -> str:
        return format_quadext(self)

    def __repr__(self) -> str:
        return f"QuadExt({self.a!r}, {self.b!r}, {self.n})"


def rational_sqrt(q: RatLike) -> QuadExt:
    """Exact non-negative square root of a rational q >= 0 as a QuadExt."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    s, n0 = squarefree_split(q.numerator * q.denominator)
    return QuadExt(Fraction(0), Fraction(s, q.denominator), n0)


def qe_arith(x: QuadExt, y: QuadExt, op: str) -> QuadExt:
    """Dispatch form of the four field operations ('add','sub','mul','div')."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def qe_sign(x: QuadLike) -> int:
    return QuadExt.coerce(x).sign()


# ---------------------------------------------------------------------------
# Exact complex values and phase comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexQE:
    """Exact complex value with QuadExt real and imaginary parts.

    Both components must live in compatible radicands (rationals mix freely).
    """

    re: QuadExt
    im: QuadExt

    def __post_init__(self) -> None:
        re = QuadExt.coerce(self.re)
        im = QuadExt.coerce(self.im)
        _join_radicands(re.n, im.n)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __add__(self, other: "ComplexQE") -> "ComplexQE":
        return ComplexQE(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexQE") -> "ComplexQE":
        return ComplexQE(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexQE":
        return ComplexQE(-self.re, -self.im)

    def __mul__(self, other: "ComplexQE") -> "ComplexQE":
        return ComplexQE(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def scale(self, t: QuadLike) -> "ComplexQE":
        return ComplexQE(self.re * t, self.im * t)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __str__(self) -> str:
        return f"({self.re}, {self.im})"


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def __str__(self) -> str:  # report-friendly
        return self.name.lower()


@dataclass(frozen=True)
class Phase:
    """Nonzero complex value restricted to {Im > 0} or {Im = 0, Re < 0}.

    Stands for an angle in (0, pi]; the angle itself is never computed,
    orderings go through exact 2x2 determinant signs.
    """

    z: ComplexQE

    def __post_init__(self) -> None:
        s_im = self.z.im.sign()
        if s_im < 0 or (s_im == 0 and self.z.re.sign() >= 0):
            raise ValueError(f"{self.z} is not in the closed upper half plane slit at 0")

    @property
    def is_maximal(self) -> bool:
        """True when the angle is exactly pi (negative real axis)."""
        return self.z.im.sign() == 0


def try_phase(z: ComplexQE) -> Optional[Phase]:
    try:
        return Phase(z)
    except ValueError:
        return None


def phase_cmp(z1: Phase, z2: Phase) -> Ordering:
    """Order arg(z1) against arg(z2) inside (0, pi], exactly.

    For angles strictly inside (0, pi) the sign of im1*re2 - re1*im2 decides;
    the boundary angle pi (Im = 0, Re < 0) is the unique maximum.
    """
    m1, m2 = z1.is_maximal, z2.is_maximal
    if m1 and m2:
        return Ordering.EQUAL
    if m1:
        return Ordering.GREATER
    if m2:
        return Ordering.LESS
    cross = z1.z.im * z2.z.re - z1.z.re * z2.z.im
    return Ordering(cross.sign())


# ---------------------------------------------------------------------------
# Textual form "a+b*sqrt(n)" with reduced fractions
# ---------------------------------------------------------------------------

_FRAC = r"[+-]?\d+(?:/\d+)?"
_QE_FULL = re.compile(rf"^({_FRAC})\s*([+-])\s*(\d+(?:/\d+)?)\*sqrt\((\d+)\)$")
_QE_ROOT = re.compile(rf"^({_FRAC})\*sqrt\((\d+)\)$")
_QE_RAT = re.compile(rf"^({_FRAC})$")


def format_quadext(x: QuadExt) -> str:
    if x.n == 0:
        return str(x.a)
    sign = "+" if x.b >= 0 else "-"
    return f"{x.a}{sign}{abs(x.b)}*sqrt({x.n})"


def parse_quadext(text: str) -> QuadExt:
    t = text.strip().replace(" ", "")
    try:
        m = _QE_FULL.match(t)
        if m:
            a = Fraction(m.group(1))
            b = Fraction(m.group(3))
            if m.group(2) == "-":
                b = -b
            return QuadExt(a, b, int(m.group(4)))
        m = _QE_ROOT.match(t)
        if m:
            return QuadExt(Fraction(0), Fraction(m.group(1)), int(m.group(2)))
        m = _QE_RAT.match(t)
        if m:
            return QuadExt(Fraction(m.group(1)))
    except ZeroDivisionError as exc:
        raise ValueError(f"zero denominator in {text!r}") from exc
    raise ValueError(f"cannot parse {text!r} as 'a+b*sqrt(n)'")
