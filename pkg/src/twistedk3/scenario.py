"""The concrete geometric setup: a degree-2 K3 double cover of the plane,
the order-2 twist coming from the quadric fibration, and the invariants of
the even/odd Clifford bundles and of the sheaves attached to lines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence, Union

from .lattices import Gram, Lattice, k3_gram, standard_gram, sublattice_span, direct_sum
from .mukai import BField, MukaiVector, _fvec

IntVec = tuple[int, ...]


class ScenarioError(ValueError):
    """A scenario file or construction violates a named invariant."""


# Twists a_i of the split rank-8 bundles underlying the even and odd parts
# of the quadric fibration's Clifford algebra, as plane bundles.
CLIFFORD_EVEN_TWISTS: tuple[int, ...] = (0, -1, -1, -1, -2, -2, -2, -3)
CLIFFORD_ODD_TWISTS: tuple[int, ...] = (0, 0, 0, -1, -1, -2, -2, -2)

TWIST_PRESETS = {"B0": CLIFFORD_EVEN_TWISTS, "B1": CLIFFORD_ODD_TWISTS}


def chi_p2(twists: Sequence[int]) -> int:
    """Euler characteristic of a direct sum of plane line bundles O(a_i):
    chi(O(a)) = (a+1)(a+2)/2."""
    return sum((a + 1) * (a + 2) // 2 for a in twists)


@dataclass(frozen=True)
class Scenario:
    """All geometric inputs for the charge engine.

    h is the degree-2 polarization, b the twist lift, k_vec the undetermined
    algebraic class in the even-bundle invariant, pic the ambient algebraic
    classes, lam the auxiliary square-2 class entering b.
    """

    ambient: Gram
    h: IntVec
    b: BField
    k_vec: IntVec
    pic: Lattice
    lam: IntVec
    block_names: tuple[str, ...] = ()

    def validate(self) -> None:
        g = self.ambient
        if g.pairing(self.h, self.h) != 2:
            raise ScenarioError("invariant violated: h.h != 2")
        if g.pairing(self.lam, self.lam) != 2:
            raise ScenarioError("invariant violated: lambda.lambda != 2")
        if g.pairing(self.lam, self.h) != 0:
            raise ScenarioError("invariant violated: lambda.h != 0")
        if self.b.order > 1 and g.pairing(self.b.vec, self.h) != Fraction(1, 2):
            raise ScenarioError("invariant violated: B.h != 1/2")
        if not self.pic.contains(self.h):
            raise ScenarioError("invariant violated: h not in Pic(S)")
        if not self.pic.contains(self.k_vec):
            raise ScenarioError("invariant violated: K not in Pic(S)")

    @property
    def twist_order(self) -> int:
        return self.b.order

    @property
    def twisted(self) -> bool:
        """True under the working assumption: a genuinely nontrivial twist."""
        return self.b.order == 2

    def with_k(self, k_vec: Sequence[int]) -> "Scenario":
        sc = replace(self, k_vec=tuple(int(x) for x in k_vec))
        sc.validate()
        return sc


def default_scenario() -> Scenario:
    """The standard identification: h = e1+e2 in the first hyperbolic block,
    lambda = f1+f2 in the second, B = (e2+lambda)/2, K = 0, Pic = Zh."""
    g = k3_gram()
    n = g.rank
    h = tuple(1 if i in (0, 1) else 0 for i in range(n))
    lam = tuple(1 if i in (2, 3) else 0 for i in range(n))
    b = BField(tuple(Fraction(1, 2) if i in (1, 2, 3) else Fraction(0) for i in range(n)))
    pic = sublattice_span(g, [list(h)])
    sc = Scenario(
        ambient=g,
        h=h,
        b=b,
        k_vec=tuple(0 for _ in range(n)),
        pic=pic,
        lam=lam,
        block_names=("U", "U", "U", "E8neg", "E8neg"),
    )
    sc.validate()
    return sc


def spherical_s(r: int, c: Sequence[Union[int, Fraction]], h2: Gram) -> Fraction:
    """The unique s with <(r,c,s),(r,c,s)> = -2, i.e. s = (c.c + 2)/(2r)."""
    if r == 0:
        raise ValueError("spherical degree-4 part needs nonzero rank")
    cc = h2.pairing(c, c)
    return (cc + 2) / (2 * r)


def bundle_vector(sc: Scenario, parity: int) -> MukaiVector:
    """Invariant (2, K + parity*h + 2B, s) of the rank-2 twisted bundle of the
    given Clifford parity, with s pinned by sphericity.  Integral by
    construction; a fractional result signals an inconsistent K/B choice."""
    if parity not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    g = sc.ambient
    c = tuple(
        Fraction(k) + parity * Fraction(hh) + 2 * bb
        for k, hh, bb in zip(sc.k_vec, sc.h, sc.b.vec)
    )
    s = spherical_s(2, c, g)
    v = MukaiVector(Fraction(2), c, s)
    if not v.is_integral():
        raise ScenarioError(
            f"bundle invariant (2, K+{parity}h+2B, {s}) is not integral; K and B are inconsistent"
        )
    return v


def line_vector(sc: Scenario) -> MukaiVector:
    """Invariant (0, h, mu) of the torsion sheaf attached to a line, where mu
    is the slope threshold.  Errors when mu is not an integer."""
    mu = slope_threshold(sc)
    if mu.denominator != 1:
        raise ScenarioError(f"degree-4 part mu = {mu} is not integral")
    return MukaiVector(Fraction(0), _fvec(sc.h), mu)


def slope_threshold(sc: Scenario) -> Fraction:
    """mu = (B + K/2 + h/4) . h"""
    g = sc.ambient
    d = tuple(
        bb + Fraction(k, 2) + Fraction(hh, 4)
        for bb, k, hh in zip(sc.b.vec, sc.k_vec, sc.h)
    )
    return g.pairing(d, sc.h)


def slope(v: MukaiVector, sc: Scenario) -> Fraction:
    """c.h / r; torsion classes (r = 0) have no slope."""
    if v.r == 0:
        raise ValueError("torsion class has no slope")
    return sc.ambient.pairing(v.c, sc.h) / v.r


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------


def scenario_to_json(sc: Scenario) -> dict:
    den = sc.b.order
    return {
        "ambient": list(sc.block_names) if sc.block_names else ["?"],
        "h": list(sc.h),
        "B_num": [int(x * den) for x in sc.b.vec],
        "B_den": den,
        "K": list(sc.k_vec),
        "pic_generators": [list(r) for r in sc.pic.basis],
        "lambda": list(sc.lam),
    }


def scenario_from_json(data: dict) -> Scenario:
    try:
        names = tuple(str(x) for x in data["ambient"])
        blocks = [standard_gram(name) for name in names]
        g = direct_sum(*blocks)
        n = g.rank
        h = tuple(int(x) for x in data["h"])
        b_num = [int(x) for x in data["B_num"]]
        b_den = int(data["B_den"])
        k_vec = tuple(int(x) for x in data["K"])
        pic_gens = [[int(x) for x in row] for row in data["pic_generators"]]
        lam = tuple(int(x) for x in data["lambda"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed scenario file: {exc}") from exc
    if b_den <= 0:
        raise ScenarioError("invariant violated: B_den <= 0")
    for label, vec in (("h", h), ("B_num", b_num), ("K", k_vec), ("lambda", lam)):
        if len(vec) != n:
            raise ScenarioError(f"invariant violated: len({label}) != ambient rank {n}")
    for row in pic_gens:
        if len(row) != n:
            raise ScenarioError(f"invariant violated: pic generator length != {n}")
    b = BField(tuple(Fraction(x, b_den) for x in b_num))
    try:
        pic = sublattice_span(g, pic_gens)
    except ValueError as exc:
        raise ScenarioError(f"invariant violated: {exc}") from exc
    sc = Scenario(ambient=g, h=h, b=b, k_vec=k_vec, pic=pic, lam=lam, block_names=names)
    sc.validate()
    return sc


def load_scenario(path: Optional[str]) -> Scenario:
    if path is None:
        return default_scenario()
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"malformed scenario file: {exc}") from exc
    return scenario_from_json(data)
