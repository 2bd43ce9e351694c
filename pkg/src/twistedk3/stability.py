"""Exact central charges, phase bookkeeping, wall computation and the
charge-level destabilizer scan.

The charge of a class (r, c, s) at parameter m > 0 is

    Z_m = <exp(D + i*m*h), (r,c,s)>,   D = K/2 + B + h/4,

whose real part is quadratic in m with rational coefficients and whose
imaginary part is an integer multiple of m on the twisted Picard lattice.
Everything here is a statement about charges; no claim about actual
subobjects is ever made, and reports say so.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import linalg
from .lattices import Gram, orthogonal_complement, signature
from .mukai import MukaiVector, mukai_pairing, picard_generators
from .scalars import ComplexQE, Ordering, Phase, QuadExt, phase_cmp, rational_sqrt, try_phase
from .scenario import Scenario, bundle_vector, line_vector, slope_threshold

MLike = Union[int, Fraction, QuadExt]

SURROGATE_NOTE = (
    "charge-level comparison only; no categorical subobject claim is made"
)


@dataclass(frozen=True)
class ChargeParams:
    """Scenario plus the derived real shift D = K/2 + B + h/4."""

    scenario: Scenario
    shift: tuple[Fraction, ...]
    threshold: Fraction

    @property
    def h2(self) -> Gram:
        return self.scenario.ambient


def charge_params(sc: Scenario) -> ChargeParams:
    shift = tuple(
        Fraction(k, 2) + bb + Fraction(hh, 4)
        for k, bb, hh in zip(sc.k_vec, sc.b.vec, sc.h)
    )
    mu = slope_threshold(sc)
    assert sc.ambient.pairing(shift, sc.h) == mu
    return ChargeParams(scenario=sc, shift=shift, threshold=mu)


@dataclass(frozen=True)
class ChargeCoeffs:
    """Re Z_m = const + quad*m^2,  Im Z_m = ratio*m."""

    const: Fraction
    quad: Fraction
    ratio: Fraction

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.const, self.quad, self.ratio)


def charge_coeffs(p: ChargeParams, v: MukaiVector) -> ChargeCoeffs:
    g = p.h2
    d = p.shift
    const = g.pairing(d, v.c) - v.s - v.r * g.pairing(d, d) / 2
    quad = v.r
    ratio = g.pairing(v.c, p.scenario.h) - v.r * g.pairing(d, p.scenario.h)
    return ChargeCoeffs(const=const, quad=quad, ratio=ratio)


def _coerce_m(m: MLike) -> QuadExt:
    return QuadExt.coerce(m)


def central_charge(p: ChargeParams, m: MLike, v: MukaiVector) -> ComplexQE:
    """Exact Z_m(v); requires m > 0."""
    mm = _coerce_m(m)
    if mm.sign() <= 0:
        raise ValueError("charge parameter m must be positive")
    co = charge_coeffs(p, v)
    re = mm * mm * co.quad + co.const
    im = mm * co.ratio
    return ComplexQE(re, im)


def im_ratio(p: ChargeParams, v: MukaiVector) -> int:
    """The integer Im(Z_m(v))/m; independent of m.  A fractional value
    signals a class outside the twisted Picard lattice."""
    ratio = charge_coeffs(p, v).ratio
    if ratio.denominator != 1:
        raise ValueError(f"imaginary part ratio {ratio} is not an integer")
    return int(ratio)


# ---------------------------------------------------------------------------
# Walls
# ---------------------------------------------------------------------------


class AlignedChargesError(ValueError):
    """The two charges are positive-real proportional for every m."""


@dataclass(frozen=True)
class WallChamber:
    lower: Optional[QuadExt]  # None = 0
    upper: Optional[QuadExt]  # None = infinity
    sample: QuadExt
    ordering: str  # phase of v against phase of w at the sample, or why undefined


@dataclass(frozen=True)
class WallReport:
    roots: tuple[QuadExt, ...]
    chambers: tuple[WallChamber, ...]


def wall_between(p: ChargeParams, v: MukaiVector, w: MukaiVector) -> WallReport:
    """All m > 0 where Z_m(v) and Z_m(w) are real-proportional.

    The alignment equation Re(Z(v)) Im(Z(w)) = Re(Z(w)) Im(Z(v)) is, after
    dividing by m, linear in m^2 with rational coefficients, so roots are
    rational or quadratic irrationals and are produced exactly.
    """
    cv = charge_coeffs(p, v)
    cw = charge_coeffs(p, w)
    alpha = cv.quad * cw.ratio - cw.quad * cv.ratio
    beta = cv.const * cw.ratio - cw.const * cv.ratio
    if alpha == 0 and beta == 0:
        raise AlignedChargesError("charges aligned for all m (proportional classes)")
    roots: list[QuadExt] = []
    if alpha != 0:
        q = -beta / alpha
        if q > 0:
            root = rational_sqrt(q)
            assert root * root == QuadExt(q)
            roots.append(root)
    chambers = []
    bounds: list[Optional[QuadExt]] = [None, *roots, None]
    for i in range(len(bounds) - 1):
        lo, hi = bounds[i], bounds[i + 1]
        if lo is None and hi is None:
            sample: QuadExt = QuadExt(Fraction(1))
        elif lo is None:
            sample = hi / 2
        elif hi is None:
            sample = lo + 1
        else:
            sample = (lo + hi) / 2
        zv = central_charge(p, sample, v)
        zw = central_charge(p, sample, w)
        pv, pw = try_phase(zv), try_phase(zw)
        if pv is None or pw is None:
            ordering = "undefined (a charge leaves the upper half plane)"
        else:
            ordering = str(phase_cmp(pv, pw))
        chambers.append(WallChamber(lower=lo, upper=hi, sample=sample, ordering=ordering))
    return WallReport(roots=tuple(roots), chambers=tuple(chambers))


def catalogue(p: ChargeParams) -> dict[str, MukaiVector]:
    """The three classes the chamber analysis tracks, by their CLI names."""
    sc = p.scenario
    v0 = bundle_vector(sc, 0)
    v1 = bundle_vector(sc, 1)
    return {
        "J": line_vector(sc),
        "E0": v0,
        "E1": v1,
        "E0[1]": -v0,
    }


def catalogue_wall(p: ChargeParams) -> QuadExt:
    """The unique wall between the line class and the odd bundle class."""
    cat = catalogue(p)
    report = wall_between(p, cat["J"], cat["E1"])
    if len(report.roots) != 1:
        raise ValueError(f"expected a single wall, found {len(report.roots)}")
    return report.roots[0]


# ---------------------------------------------------------------------------
# Closed-form diagnostics
# ---------------------------------------------------------------------------


def re_closed_form(p: ChargeParams, v: MukaiVector, m: MLike) -> tuple[QuadExt, QuadExt]:
    """The alternative real-part formula (1/2r)(-chi + 2r^2 m^2 - F.F) with
    F = c - r(K/2 + h/2 + B), taken verbatim, plus its exactly computed
    deviation from the direct expansion.

    The half-h shift inside F differs from the quarter-h shift in the charge
    kernel; the two are deliberately not reconciled, the discrepancy term is
    the record of the difference.  The direct expansion is authoritative.
    """
    if v.r == 0:
        raise ValueError("closed form needs nonzero rank")
    sc = p.scenario
    g = sc.ambient
    mm = _coerce_m(m)
    f_vec = tuple(
        ci - v.r * (Fraction(k, 2) + Fraction(hh, 2) + bb)
        for ci, k, hh, bb in zip(v.c, sc.k_vec, sc.h, sc.b.vec)
    )
    f_sq = g.pairing(f_vec, f_vec)
    chi = -mukai_pairing(v, v, g)
    value = (mm * mm * (2 * v.r * v.r) + (-chi - f_sq)) / (2 * v.r)
    direct = central_charge(p, mm, v).re
    return value, direct - value


def spherical_real_floor(r: int, m: MLike, f_sq: Union[int, Fraction]) -> QuadExt:
    """(1/2r)(-2 + 2 r^2 m^2 - F.F): the positivity floor for a spherical
    class of rank r whose algebraic deviation F has square f_sq."""
    if r == 0:
        raise ValueError("rank must be nonzero")
    mm = _coerce_m(m)
    return (mm * mm * (2 * r * r) + (-2 - Fraction(f_sq))) / (2 * r)


def epsilon_bound(p: ChargeParams) -> QuadExt:
    """Sufficient lower cutoff 1/2 = sup over even ranks r >= 2 of 1/r for
    the positivity of spherical real parts; strictly below the wall."""
    eps = QuadExt(Fraction(1, 2))
    wall = catalogue_wall(p)
    assert (wall - eps).sign() > 0
    return eps


# ---------------------------------------------------------------------------
# Hodge-index check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HodgeIndexReport:
    ok: bool
    pic_signature: tuple[int, int, int]
    h_square: Fraction
    complement_rank: int
    complement_negative_definite: bool
    reason: str


def hodge_index_check(sc: Scenario) -> HodgeIndexReport:
    """Certify that the algebraic classes form a hyperbolic-signature module
    and that the polarization's complement inside it is negative definite."""
    pic = sc.pic
    g_pic = pic.induced_gram()
    sig = signature(g_pic)
    h_coords = pic.coordinates(sc.h)
    if h_coords is None:
        return HodgeIndexReport(False, sig, Fraction(0), 0, False, "h not in Pic(S)")
    h_sq = sc.ambient.pairing(sc.h, sc.h)
    if sig != (1, pic.rank - 1, 0):
        return HodgeIndexReport(
            False, sig, h_sq, 0, False,
            f"signature {sig} is not (1, {pic.rank - 1}, 0)",
        )
    if h_sq <= 0:
        return HodgeIndexReport(False, sig, h_sq, 0, False, "no class of positive square")
    comp = orthogonal_complement(g_pic, [h_coords])
    comp_rank = comp.rank
    if comp_rank == 0:
        return HodgeIndexReport(True, sig, h_sq, 0, True, "complement of h is trivial")
    comp_sig = signature(comp.induced_gram())
    neg_def = comp_sig == (0, comp_rank, 0)
    reason = "complement of h is negative definite" if neg_def else (
        f"complement of h has signature {comp_sig}"
    )
    return HodgeIndexReport(neg_def, sig, h_sq, comp_rank, neg_def, reason)


# ---------------------------------------------------------------------------
# Destabilizer scan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanCandidate:
    coords: tuple[int, ...]
    rank: int
    ratio: int
    self_pairing: int
    charge: ComplexQE
    verdict: Ordering


@dataclass(frozen=True)
class ScanReport:
    m: QuadExt
    coeff_bound: int
    reference_ratio: int
    survivors: tuple[ScanCandidate, ...]
    phase_one: tuple[ScanCandidate, ...]
    note: str = SURROGATE_NOTE

    def strict_survivors(self) -> tuple[ScanCandidate, ...]:
        return tuple(s for s in self.survivors if s.verdict is Ordering.GREATER)


def _scan_chunk(args: tuple) -> tuple[list[ScanCandidate], list[ScanCandidate]]:
    (
        alphas,
        bound,
        rank_count,
        gen_coeffs,
        gen_ranks,
        gram_rows,
        m,
        ref_charge,
        ref_ratio,
    ) = args
    survivors: list[ScanCandidate] = []
    phase_one: list[ScanCandidate] = []
    ref_phase = Phase(ref_charge)
    m_sq = m * m

    def rec(prefix: tuple[int, ...]) -> None:
        if len(prefix) == rank_count:
            if not any(prefix):
                return
            const = sum(c[0] * y for c, y in zip(gen_coeffs, prefix))
            quad = sum(c[1] * y for c, y in zip(gen_coeffs, prefix))
            ratio = sum(c[2] * y for c, y in zip(gen_coeffs, prefix))
            re = m_sq * quad + const
            im = m * ratio
            if not re and not im:
                return
            self_pair = sum(
                prefix[i] * gram_rows[i][j] * prefix[j]
                for i in range(rank_count)
                for j in range(rank_count)
            )
            rk = sum(r * y for r, y in zip(gen_ranks, prefix))
            z = ComplexQE(re, im)
            if ratio == 0:
                if re.sign() < 0:
                    phase_one.append(
                        ScanCandidate(prefix, rk, 0, self_pair, z, Ordering.GREATER)
                    )
                return
            if not (0 < ratio < ref_ratio):
                return
            if self_pair < -2:
                return
            ph = try_phase(z)
            if ph is None:
                return
            verdict = phase_cmp(ph, ref_phase)
            if verdict is Ordering.LESS:
                return
            survivors.append(
                ScanCandidate(prefix, rk, int(ratio), self_pair, z, verdict)
            )
            return
        values = alphas if not prefix else range(-bound, bound + 1)
        for y in values:
            rec(prefix + (y,))

    rec(())
    return survivors, phase_one


def destabilizer_scan(
    p: ChargeParams,
    v: MukaiVector,
    m: MLike,
    coeff_bound: int = 8,
    jobs: int = 1,
) -> ScanReport:
    """Enumerate twisted Picard classes w with coordinates bounded by
    coeff_bound in the generator basis and keep those passing the charge
    filters: <w,w> >= -2, imaginary channel strictly between 0 and that of
    v, nonzero charge, and phase at least the phase of v.  Classes with a
    vanishing imaginary channel and negative real part are set aside in a
    separate maximal-phase bucket.

    Pure charge arithmetic: survivors are candidate numerics, not certified
    subobjects.  Output is sorted by coordinates and independent of `jobs`.
    """
    mm = _coerce_m(m)
    if mm.sign() <= 0:
        raise ValueError("charge parameter m must be positive")
    sc = p.scenario
    gens = picard_generators(sc.pic, sc.b)
    gen_coeffs = [charge_coeffs(p, g).as_tuple() for g in gens]
    if any(c[2].denominator != 1 for c in gen_coeffs):
        raise ValueError("generator imaginary ratios are not integral")
    gen_ranks = [int(g.r) for g in gens]
    gram_rows = [
        [int(mukai_pairing(gi, gj, sc.ambient)) for gj in gens] for gi in gens
    ]
    # reference class must live in the generator span with integer coords
    coords = linalg.solve_in_rowspace(
        [[int(x) for x in g.to_coords()] for g in gens],
        [x for x in v.to_coords()],
    )
    if coords is None or any(c.denominator != 1 for c in coords):
        raise ValueError("reference class is not in the twisted Picard lattice")
    ref_ratio = im_ratio(p, v)
    if ref_ratio <= 0:
        raise ValueError("reference class has no positive imaginary channel")
    ref_charge = central_charge(p, mm, v)
    if ref_charge.is_zero():
        raise ValueError("reference class has zero charge")

    rank_count = len(gens)
    all_alphas = list(range(-coeff_bound, coeff_bound + 1))
    if jobs <= 1:
        chunks = [all_alphas]
    else:
        step = max(1, (len(all_alphas) + jobs - 1) // jobs)
        chunks = [all_alphas[i : i + step] for i in range(0, len(all_alphas), step)]
    arg_list = [
        (
            chunk,
            coeff_bound,
            rank_count,
            gen_coeffs,
            gen_ranks,
            gram_rows,
            mm,
            ref_charge,
            ref_ratio,
        )
        for chunk in chunks
    ]
    survivors: list[ScanCandidate] = []
    phase_one: list[ScanCandidate] = []
    if len(arg_list) == 1:
        results = [_scan_chunk(arg_list[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(arg_list)) as pool:
            results = list(pool.map(_scan_chunk, arg_list))
    for surv, ph1 in results:
        survivors.extend(surv)
        phase_one.extend(ph1)
    survivors.sort(key=lambda cand: cand.coords)
    phase_one.sort(key=lambda cand: cand.coords)
    return ScanReport(
        m=mm,
        coeff_bound=coeff_bound,
        reference_ratio=ref_ratio,
        survivors=tuple(survivors),
        phase_one=tuple(phase_one),
    )


# ---------------------------------------------------------------------------
# Chamber classification of the three-class catalogue
# ---------------------------------------------------------------------------

DESTABILIZED = "destabilized"
WALL = "wall"
STABLE = "stable"


@dataclass(frozen=True)
class ChamberReport:
    m: QuadExt
    charges: dict[str, ComplexQE]
    shifted_vs_line: Ordering
    odd_vs_line: Ordering
    shifted_vs_odd: Ordering
    classification: str
    detail: str
    note: str = SURROGATE_NOTE


def chamber_report(p: ChargeParams, m: MLike) -> ChamberReport:
    """Compare the catalogue phases {E0[1], J, E1} at m and classify the
    chamber.  The subobject role in the fixed triangle belongs to E0[1]:
    its phase strictly above the line's phase is the destabilization
    certificate, equality is the wall, and below it the line class is
    stable against the catalogue."""
    mm = _coerce_m(m)
    eps = epsilon_bound(p)
    if (mm - eps).sign() <= 0:
        raise ValueError(f"m = {mm} is not above the cutoff {eps}")
    cat = catalogue(p)
    z_line = central_charge(p, mm, cat["J"])
    z_shift = central_charge(p, mm, cat["E0[1]"])
    z_odd = central_charge(p, mm, cat["E1"])
    p_line, p_shift, p_odd = Phase(z_line), Phase(z_shift), Phase(z_odd)
    shifted_vs_line = phase_cmp(p_shift, p_line)
    odd_vs_line = phase_cmp(p_odd, p_line)
    shifted_vs_odd = phase_cmp(p_shift, p_odd)
    if shifted_vs_line is Ordering.GREATER:
        classification = DESTABILIZED
        detail = (
            "shifted even bundle charge strictly exceeds the line charge; "
            "two-step factorization [E0[1], E1] in decreasing phase"
        )
    elif shifted_vs_line is Ordering.EQUAL:
        classification = WALL
        detail = "all three catalogue phases are equal; factors {E1, E0[1]}"
    else:
        classification = STABLE
        detail = "line class stable against the catalogue"
    return ChamberReport(
        m=mm,
        charges={"E0[1]": z_shift, "J": z_line, "E1": z_odd},
        shifted_vs_line=shifted_vs_line,
        odd_vs_line=odd_vs_line,
        shifted_vs_odd=shifted_vs_odd,
        classification=classification,
        detail=detail,
    )
