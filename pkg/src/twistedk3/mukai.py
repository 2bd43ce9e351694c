"""The extended cohomology lattice H0 + H2 + H4 over a chosen degree-2 part,
its pairing <(r,c,s),(r',c',s')> = c.c' - r s' - r' s, exponential classes,
and the twisted transcendental / Picard constructions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Sequence, Union

from . import linalg
from .lattices import Gram, Lattice, gram, orthogonal_complement

RatVec = tuple[Fraction, ...]
VecLike = Sequence[Union[int, Fraction]]


def _fvec(v: VecLike) -> RatVec:
    return tuple(Fraction(x) for x in v)


def _zero_vec(n: int) -> RatVec:
    return tuple(Fraction(0) for _ in range(n))


@dataclass(frozen=True)
class MukaiVector:
    """Triple (r, c, s) with a rational degree-2 component c."""

    r: Fraction
    c: RatVec
    s: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "c", _fvec(self.c))
        object.__setattr__(self, "s", Fraction(self.s))

    def __add__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(
            self.r + other.r,
            tuple(a + b for a, b in zip(self.c, other.c)),
            self.s + other.s,
        )

    def __sub__(self, other: "MukaiVector") -> "MukaiVector":
        return self + (-other)

    def __neg__(self) -> "MukaiVector":
        return MukaiVector(-self.r, tuple(-x for x in self.c), -self.s)

    def scale(self, t: Union[int, Fraction]) -> "MukaiVector":
        t = Fraction(t)
        return MukaiVector(self.r * t, tuple(x * t for x in self.c), self.s * t)

    def is_integral(self) -> bool:
        return (
            self.r.denominator == 1
            and self.s.denominator == 1
            and all(x.denominator == 1 for x in self.c)
        )

    def to_coords(self) -> list[Fraction]:
        return [self.r, *self.c, self.s]

    @staticmethod
    def from_coords(coords: VecLike) -> "MukaiVector":
        xs = _fvec(coords)
        return MukaiVector(xs[0], xs[1:-1], xs[-1])

    def __str__(self) -> str:
        c = ",".join(str(x) for x in self.c)
        return f"({self.r}, [{c}], {self.s})"


def mukai_vector(r: Union[int, Fraction], c: VecLike, s: Union[int, Fraction]) -> MukaiVector:
    return MukaiVector(Fraction(r), _fvec(c), Fraction(s))


def mukai_pairing(v: MukaiVector, w: MukaiVector, h2: Gram) -> Fraction:
    """c_v.c_w - r_v s_w - r_w s_v with the degree-2 product taken in h2."""
    return h2.pairing(v.c, w.c) - v.r * w.s - w.r * v.s


def mukai_gram(h2: Gram) -> Gram:
    """Gram matrix of the full pairing in coordinates (r, c..., s)."""
    n = h2.rank
    rows = [[0] * (n + 2) for _ in range(n + 2)]
    rows[0][n + 1] = rows[n + 1][0] = -1
    for i in range(n):
        for j in range(n):
            rows[1 + i][1 + j] = h2.entries[i][j]
    return gram(rows)


def exp_class(d_vec: VecLike, h2: Gram) -> MukaiVector:
    """(1, D, D.D/2), the multiplicative exponential of a degree-2 class D."""
    d = _fvec(d_vec)
    return MukaiVector(Fraction(1), d, h2.pairing(d, d) / 2)


def twist_by(v: MukaiVector, d_vec: VecLike, h2: Gram) -> MukaiVector:
    """Product v * exp(D): (r, c + rD, s + c.D + r D.D/2).  An isometry."""
    d = _fvec(d_vec)
    return MukaiVector(
        v.r,
        tuple(ci + v.r * di for ci, di in zip(v.c, d)),
        v.s + h2.pairing(v.c, d) + v.r * h2.pairing(d, d) / 2,
    )


@dataclass(frozen=True)
class BField:
    """Rational degree-2 class lifting a torsion twist; order = lcm of
    coordinate denominators, the least d with d*B integral."""

    vec: RatVec

    def __post_init__(self) -> None:
        object.__setattr__(self, "vec", _fvec(self.vec))

    @property
    def order(self) -> int:
        return reduce(lcm, (x.denominator for x in self.vec), 1)

    def integral_multiple(self) -> list[int]:
        d = self.order
        return [int(x * d) for x in self.vec]


class DegenerateLatticeError(ValueError):
    """Raised when a construction requires a nondegenerate lattice."""


def _residue_kernel(lat: Lattice, functional: list[int], modulus: int) -> tuple[Lattice, int]:
    """Kernel of y -> functional . coords(y) mod `modulus` inside `lat`.

    Returns the kernel as a sublattice (same ambient) and its index.
    """
    k = lat.rank
    if modulus == 1 or all(w % modulus == 0 for w in functional):
        return lat, 1
    # solutions (y, t) of w.y + modulus*t = 0, projected onto y
    ker = linalg.kernel_basis([functional + [modulus]])
    coord_rows = linalg.row_basis([row[:k] for row in ker])
    index = abs(linalg.det_bareiss(coord_rows))
    basis = [
        [sum(y[j] * lat.basis[j][e] for j in range(k)) for e in range(lat.ambient.rank)]
        for y in coord_rows
    ]
    return Lattice(lat.ambient, tuple(tuple(r) for r in basis)), index


def twisted_transcendental(ts: Lattice, b: BField) -> tuple[Lattice, int]:
    """The lattice {(0, x, B.x) : x in ts, B.x integral} inside H0+H2+H4.

    Also returns the index of {x : B.x integral} in ts; it divides the
    order of the twist and equals 1 exactly when the restricted class is
    trivial on ts.
    """
    if ts.discriminant() == 0:
        raise DegenerateLatticeError("transcendental lattice is degenerate")
    h2 = ts.ambient
    d = b.order
    db = b.integral_multiple()
    functional = [int(h2.pairing(db, row)) for row in ts.basis]
    sub, index = _residue_kernel(ts, functional, d)
    mg = mukai_gram(h2)
    basis = []
    for row in sub.basis:
        s = h2.pairing(b.vec, row)
        assert s.denominator == 1
        basis.append((0, *row, int(s)))
    return Lattice(mg, tuple(basis)), index


def twisted_picard(h2: Gram, ts: Lattice, b: BField) -> Lattice:
    """Orthogonal complement of the twisted transcendental lattice in the
    full integral module under the Mukai pairing; saturated."""
    tsb, _ = twisted_transcendental(ts, b)
    return orthogonal_complement(mukai_gram(h2), [list(r) for r in tsb.basis])


def picard_generators(pic: Lattice, b: BField) -> list[MukaiVector]:
    """Integral generators of the twisted Picard lattice: the degree-2
    classes of pic placed in the middle, plus (d, d*B, 0) and (0, 0, 1)."""
    d = b.order
    n = pic.ambient.rank
    gens = [MukaiVector(Fraction(0), _fvec(row), Fraction(0)) for row in pic.basis]
    gens.append(MukaiVector(Fraction(d), _fvec(b.integral_multiple()), Fraction(0)))
    gens.append(MukaiVector(Fraction(0), _zero_vec(n), Fraction(1)))
    for g in gens:
        assert g.is_integral()
    return gens


def brauer_kernel(ts: Lattice, b: BField) -> tuple[Lattice, bool]:
    """Kernel of the pairing-with-B map ts -> Z/d, with surjectivity flag.

    Only twists of order 1 or 2 are supported; the order-2 case is the one
    the sign conventions are written for.
    """
    d = b.order
    if d > 2:
        raise ValueError(f"unsupported twist order {d} (only 1 and 2)")
    if d == 1:
        return ts, False
    h2 = ts.ambient
    db = b.integral_multiple()
    functional = [int(h2.pairing(db, row)) for row in ts.basis]
    kernel, index = _residue_kernel(ts, functional, d)
    return kernel, index != 1
