"""The verification battery: every check the workbench certifies, with a
machine-readable report.

Statuses: "pass" and "fail" are adjudicated; "flagged" is reserved for the
items the workbench computes on both sides and deliberately refuses to
adjudicate (generator discrepancies, the closed-form real part, and the
below-wall scan surrogate), plus checks skipped for untwisted scenarios.
Flagged entries never change the exit code.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .lattices import (
    Gram,
    RepresentKind,
    gram,
    k3_gram,
    orthogonal_complement,
    represents,
    signature,
    sublattice_span,
)
from .mukai import (
    exp_class,
    mukai_gram,
    mukai_pairing,
    mukai_vector,
    brauer_kernel,
    picard_generators,
    twist_by,
    twisted_picard,
    twisted_transcendental,
)
from .scalars import Ordering, QuadExt, format_quadext
from .scenario import (
    CLIFFORD_EVEN_TWISTS,
    CLIFFORD_ODD_TWISTS,
    Scenario,
    bundle_vector,
    chi_p2,
    line_vector,
    slope,
    slope_threshold,
)
from .stability import (
    DESTABILIZED,
    STABLE,
    WALL,
    catalogue,
    catalogue_wall,
    central_charge,
    chamber_report,
    charge_params,
    destabilizer_scan,
    epsilon_bound,
    hodge_index_check,
    re_closed_form,
    spherical_real_floor,
    wall_between,
)

_K_SAMPLE_SEED = 140593
SKIP_NOTE = "skipped: requires a nontrivial twist with B.h = 1/2"


@dataclass(frozen=True)
class ReportEntry:
    name: str
    paper_location: str
    status: str  # pass | fail | flagged
    expected: str
    actual: str

    def line(self) -> str:
        return f"{self.name}: {self.status}, expected {self.expected}, actual {self.actual}"


@dataclass(frozen=True)
class Report:
    checks: tuple[ReportEntry, ...]
    exit_code: int

    def to_json(self) -> str:
        payload = {
            "checks": [
                {
                    "name": e.name,
                    "paper_location": e.paper_location,
                    "status": e.status,
                    "expected": e.expected,
                    "actual": e.actual,
                }
                for e in self.checks
            ],
            "exit": self.exit_code,
        }
        return json.dumps(payload, indent=2)


def _fmt_gram(g: Gram) -> str:
    return json.dumps([list(r) for r in g.entries], separators=(",", ":"))


def _fmt_charge(z) -> str:
    return f"({format_quadext(z.re)}, {format_quadext(z.im)})"


class _Battery:
    def __init__(self, sc: Scenario, coeff_bound: int, jobs: int) -> None:
        self.sc = sc
        self.coeff_bound = coeff_bound
        self.jobs = jobs
        self.entries: list[ReportEntry] = []
        self.twisted = sc.twisted

    def add(self, name: str, location: str, expected: str, actual: str, ok: bool) -> None:
        self.entries.append(
            ReportEntry(name, location, "pass" if ok else "fail", expected, actual)
        )

    def flag(self, name: str, location: str, expected: str, actual: str) -> None:
        self.entries.append(ReportEntry(name, location, "flagged", expected, actual))

    def run_check(self, name: str, location: str, fn: Callable[[], tuple[str, str, bool]],
                  needs_twist: bool = False) -> None:
        if needs_twist and not self.twisted:
            self.flag(name, location, "n/a", SKIP_NOTE)
            return
        try:
            expected, actual, ok = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed battery
            self.add(name, location, "no error", f"{type(exc).__name__}: {exc}", False)
            return
        self.add(name, location, expected, actual, ok)


def run_battery(sc: Scenario, coeff_bound: int = 8, jobs: int = 1) -> Report:
    b = _Battery(sc, coeff_bound, jobs)
    g = sc.ambient
    mg = mukai_gram(g)
    ts = orthogonal_complement(g, [list(sc.h)])
    params = charge_params(sc)

    # --- lattice layer ----------------------------------------------------

    def check_signature() -> tuple[str, str, bool]:
        sig = signature(k3_gram())
        return "(3, 19, 0)", str(sig), sig == (3, 19, 0)

    b.run_check("signature_ambient", "degree-2 module U^3+E8(-1)^2", check_signature)

    def check_complement_k() -> tuple[str, str, bool]:
        disc = ts.discriminant()
        ok = ts.rank == g.rank - 1 and abs(disc) == 2 and ts.is_primitive()
        return "rank 21, |disc| 2, primitive", f"rank {ts.rank}, disc {disc}", ok

    b.run_check("complement_of_polarization", "square-2 complement", check_complement_k)

    def check_picard_span() -> tuple[str, str, bool]:
        pic_b = twisted_picard(g, ts, sc.b)
        gens = picard_generators(sc.pic, sc.b)
        span = sublattice_span(mg, [[int(x) for x in v.to_coords()] for v in gens])
        mutual = all(pic_b.contains(row) for row in span.basis) and all(
            span.contains(row) for row in pic_b.basis
        )
        sat_ok = span.is_primitive() and pic_b.is_primitive()
        d = sc.b.order
        c = sc.pic.discriminant()
        disc = span.discriminant()
        ok = mutual and sat_ok and abs(disc) == abs(d * d * c)
        return (
            f"generator span == computed twisted Picard, |disc| = {abs(d * d * c)}",
            f"mutual containment {mutual}, saturated {sat_ok}, disc {disc}",
            ok,
        )

    b.run_check("twisted_picard_generators", "Lemma 3.1", check_picard_span)

    def check_transcendental() -> tuple[str, str, bool]:
        tsb, index = twisted_transcendental(ts, sc.b)
        pic_b = twisted_picard(g, ts, sc.b)
        d = sc.b.order
        scale = index * index
        ok = (
            index == d
            and abs(tsb.discriminant()) == scale * abs(ts.discriminant())
            and abs(tsb.discriminant()) == abs(pic_b.discriminant())
            and tsb.is_primitive()
        )
        return (
            f"index {d}, |disc| scaled by {d * d}, equal to twisted Picard disc",
            f"index {index}, disc {tsb.discriminant()} vs Picard {pic_b.discriminant()}",
            ok,
        )

    b.run_check("twisted_transcendental", "Lemma 3.1 proof", check_transcendental)

    # --- plane Euler characteristics --------------------------------------

    def check_chi() -> tuple[str, str, bool]:
        c0, c1 = chi_p2(CLIFFORD_EVEN_TWISTS), chi_p2(CLIFFORD_ODD_TWISTS)
        sizes = (len(CLIFFORD_EVEN_TWISTS), len(CLIFFORD_ODD_TWISTS))
        ok = c0 == 2 and c1 == 3 and sizes == (8, 8)
        return "chi 2 and 3 on two rank-8 profiles", f"chi ({c0}, {c1}), ranks {sizes}", ok

    b.run_check("plane_euler_characteristics", "Clifford parts; Remark 2.1; Prop 2.4", check_chi)

    # --- scenario vectors ---------------------------------------------------

    def check_sphericity() -> tuple[str, str, bool]:
        v0, v1 = bundle_vector(sc, 0), bundle_vector(sc, 1)
        p0 = mukai_pairing(v0, v0, g)
        p1 = mukai_pairing(v1, v1, g)
        ok = p0 == -2 and p1 == -2 and v0.is_integral() and v1.is_integral()
        return "<v,v> = -2 for both bundle classes", f"({p0}, {p1})", ok

    b.run_check("bundle_sphericity", "Remark 2.1", check_sphericity, needs_twist=True)

    def check_triangle() -> tuple[str, str, bool]:
        v0, v1 = bundle_vector(sc, 0), bundle_vector(sc, 1)
        vj = line_vector(sc)
        mu = slope_threshold(sc)
        ok = vj == v1 - v0 and vj.s == mu and mukai_pairing(vj, vj, g) == 2
        return (
            "line class = odd - even, degree-4 part = threshold",
            f"difference match {vj == v1 - v0}, s = {vj.s}, mu = {mu}",
            ok,
        )

    b.run_check("line_class_triangle", "Prop 2.4; Lemma 3.2", check_triangle, needs_twist=True)

    def check_hom_dimension() -> tuple[str, str, bool]:
        v0, v1 = bundle_vector(sc, 0), bundle_vector(sc, 1)
        val = -mukai_pairing(v0, v1, g)
        return "3", str(val), val == 3

    b.run_check("bundle_hom_dimension", "Prop 2.4 proof", check_hom_dimension, needs_twist=True)

    def check_slopes() -> tuple[str, str, bool]:
        rng = random.Random(_K_SAMPLE_SEED)
        ks = [0] + rng.sample([k for k in range(-9, 10) if k != 0], 5)
        rows = []
        ok = True
        for k in ks:
            kv = tuple(k * x for x in sc.h)
            sck = sc.with_k(kv)
            mu = slope_threshold(sck)
            s0 = slope(bundle_vector(sck, 0), sck)
            s1 = slope(bundle_vector(sck, 1), sck)
            good = s0 == mu - Fraction(1, 2) and s1 == mu + Fraction(1, 2) and s0 < mu < s1
            ok = ok and good
            rows.append(f"k={k}: {s0} < {mu} < {s1}")
        return "slope gaps exactly 1/2 on both sides", "; ".join(rows), ok

    b.run_check("slope_chain", "Remark 4.3", check_slopes, needs_twist=True)

    def check_primitive() -> tuple[str, str, bool]:
        pic_b = twisted_picard(g, ts, sc.b)
        coords = pic_b.coordinates([int(x) for x in line_vector(sc).to_coords()])
        ok = coords is not None and abs(_gcd_list(coords)) == 1
        return "line class primitive in twisted Picard", f"coords {coords}", ok

    b.run_check("line_class_primitive", "stability of the torsion sheaf", check_primitive,
                needs_twist=True)

    def check_mu_parity() -> tuple[str, str, bool]:
        mu = slope_threshold(sc)
        parity = int(mu) % 2 if mu.denominator == 1 else None
        return "recorded", f"mu = {mu}, parity {parity}", True

    b.run_check("threshold_parity", "undetermined K; recorded per scenario", check_mu_parity,
                needs_twist=True)

    # --- representability ---------------------------------------------------

    claimed = gram([[4, -4], [-4, 0]])

    def check_claimed_form() -> tuple[str, str, bool]:
        verdict = represents(claimed, 6, search_bound=24)
        ok = verdict.kind is RepresentKind.NO_CONGRUENCE and verdict.modulus == 4
        return "NoByCongruence(4)", str(verdict), ok

    b.run_check("claimed_form_misses_6", "Cor 3.4", check_claimed_form)

    def check_kernel_eps0() -> tuple[str, str, bool]:
        pic_b = twisted_picard(g, ts, sc.b)
        v = mukai_vector(0, sc.h, 0)
        kern = pic_b.complement_of([int(x) for x in v.to_coords()])
        kg = kern.induced_gram()
        verdict = represents(kg, 6, search_bound=24)
        ok = kern.rank == 2 and verdict.kind is RepresentKind.YES
        return (
            "rank-2 kernel representing 6",
            f"Gram {_fmt_gram(kg)}, verdict {verdict}",
            ok,
        )

    b.run_check("kernel_form_eps0_hits_6", "Cor 3.4", check_kernel_eps0)

    def flag_cor34() -> None:
        pic_b = twisted_picard(g, ts, sc.b)
        vj = line_vector(sc)
        kern = pic_b.complement_of([int(x) for x in vj.to_coords()])
        kg = kern.induced_gram()
        honest = represents(kg, 6, search_bound=24)
        claimed_verdict = represents(claimed, 6, search_bound=24)
        claimed_gen = mukai_vector(
            4,
            [2 * l + e for l, e in zip(sc.lam, _e1_plus_2e2(sc))],
            1,
        )
        pairing = mukai_pairing(claimed_gen, vj, g)
        b.flag(
            "claimed_generators_vs_kernel",
            "Cor 3.4 proof",
            f"claimed Gram {_fmt_gram(claimed)} -> {claimed_verdict}",
            (
                f"kernel Gram {_fmt_gram(kg)} -> {honest}; "
                f"claimed second generator pairs {pairing} with the line class "
                "(not orthogonal); both sides reported, neither adopted"
            ),
        )

    if b.twisted:
        try:
            flag_cor34()
        except Exception as exc:
            b.add("claimed_generators_vs_kernel", "Cor 3.4 proof", "no error",
                  f"{type(exc).__name__}: {exc}", False)
    else:
        b.flag("claimed_generators_vs_kernel", "Cor 3.4 proof", "n/a", SKIP_NOTE)

    # --- twist pairing ------------------------------------------------------

    def check_brauer() -> tuple[str, str, bool]:
        kern, surjective = brauer_kernel(ts, sc.b)
        if not b.twisted:
            return (
                "surjective = false (trivial twist)",
                f"surjective = {surjective}",
                surjective is False,
            )
        scale = abs(kern.discriminant()) == 4 * abs(ts.discriminant())
        ok = surjective and scale
        return (
            "surjective, kernel of index 2, |disc| scaled by 4",
            f"surjective = {surjective}, disc {kern.discriminant()} vs {ts.discriminant()}",
            ok,
        )

    b.run_check("brauer_pairing", "restriction of (-,B) to the transcendental part",
                check_brauer)

    def check_hodge() -> tuple[str, str, bool]:
        rep = hodge_index_check(sc)
        return (
            "hyperbolic Pic signature, negative definite complement of h",
            f"signature {rep.pic_signature}, h^2 = {rep.h_square}, {rep.reason}",
            rep.ok,
        )

    b.run_check("hodge_index", "Lemma 4.4 proof", check_hodge)

    # --- charges and walls ----------------------------------------------------

    if not b.twisted:
        for name, loc in (
            ("wall_m0", "Remark 4.2"),
            ("charge_identities", "Remark 4.2; Lemma 4.5 proof"),
            ("epsilon_bound", "Lemma 4.4"),
            ("chamber_above_wall", "HN factorization above the wall"),
            ("chamber_at_wall", "Lemma 4.7(ii)"),
            ("chamber_below_wall", "stability below the wall"),
            ("phase_reversal", "Lemma 4.7"),
            ("scan_wall_members", "Lemma 4.7(ii)"),
            ("scan_above_wall", "Lemma 4.5; HN factor"),
            ("scan_below_wall_surrogate", "stability below the wall"),
            ("closed_form_discrepancy", "Lemma 4.4 vs Remark 4.2"),
            ("scan_determinism", "deterministic parallel scan"),
        ):
            b.flag(name, loc, "n/a", SKIP_NOTE)
        return _finish(b)

    cat = catalogue(params)
    m0 = catalogue_wall(params)
    m_below = Fraction(13, 25)
    m_above = Fraction(1)

    def check_wall() -> tuple[str, str, bool]:
        report = wall_between(params, cat["J"], cat["E1"])
        expected_root = QuadExt(Fraction(0), Fraction(1, 4), 5)
        ok = report.roots == (expected_root,)
        return (
            format_quadext(expected_root),
            "[" + ", ".join(format_quadext(r) for r in report.roots) + "]",
            ok,
        )

    b.run_check("wall_m0", "Remark 4.2", check_wall)

    def check_charges() -> tuple[str, str, bool]:
        ok = True
        parts = []
        for m in (QuadExt(m_below), QuadExt(m_above), m0):
            zj = central_charge(params, m, cat["J"])
            z1 = central_charge(params, m, cat["E1"])
            quarter = (m * m * 8 + Fraction(-2) + Fraction(-1, 2)) / 4
            good = (
                zj.re == QuadExt(Fraction(0))
                and zj.im == m * 2
                and z1.im == m
                and z1.re == m * m * 2 - Fraction(5, 8)
                and z1.re == quarter
            )
            ok = ok and good
            parts.append(f"m={format_quadext(m)}: J {_fmt_charge(zj)}, E1 {_fmt_charge(z1)}")
        return "J -> (0, 2m); E1 -> (2m^2-5/8, m), matching the quarter form", "; ".join(parts), ok

    b.run_check("charge_identities", "Remark 4.2; Lemma 4.5 proof", check_charges)

    def check_epsilon() -> tuple[str, str, bool]:
        eps = epsilon_bound(params)
        boundary = spherical_real_floor(2, Fraction(1, 2), 0)
        above = spherical_real_floor(2, Fraction(51, 100), 0)
        ok = (
            eps == QuadExt(Fraction(1, 2))
            and (m0 - eps).sign() > 0
            and boundary == QuadExt(Fraction(0))
            and above.sign() > 0
        )
        return (
            "1/2, strictly below the wall; rank-2 floor vanishes exactly at 1/2",
            f"eps = {format_quadext(eps)}, floor(1/2) = {format_quadext(boundary)}, "
            f"floor(51/100) = {format_quadext(above)}",
            ok,
        )

    b.run_check("epsilon_bound", "Lemma 4.4", check_epsilon)

    def check_above() -> tuple[str, str, bool]:
        rep = chamber_report(params, m_above)
        ok = (
            rep.classification == DESTABILIZED
            and rep.shifted_vs_line is Ordering.GREATER
            and rep.odd_vs_line is Ordering.LESS
        )
        return (
            "destabilized: shifted even > line > odd",
            f"{rep.classification}; E0[1] vs J {rep.shifted_vs_line}, E1 vs J {rep.odd_vs_line}",
            ok,
        )

    b.run_check("chamber_above_wall", "HN factorization above the wall", check_above)

    def check_at_wall() -> tuple[str, str, bool]:
        rep = chamber_report(params, m0)
        ok = (
            rep.classification == WALL
            and rep.shifted_vs_line is Ordering.EQUAL
            and rep.odd_vs_line is Ordering.EQUAL
            and rep.shifted_vs_odd is Ordering.EQUAL
        )
        return "wall: all three phases equal", rep.classification, ok

    b.run_check("chamber_at_wall", "Lemma 4.7(ii)", check_at_wall)

    def check_below() -> tuple[str, str, bool]:
        rep = chamber_report(params, m_below)
        ok = (
            rep.classification == STABLE
            and rep.shifted_vs_line is Ordering.LESS
            and rep.odd_vs_line is Ordering.GREATER
        )
        return (
            "stable against the catalogue: odd > line > shifted even",
            f"{rep.classification}; E1 vs J {rep.odd_vs_line}, E0[1] vs J {rep.shifted_vs_line}",
            ok,
        )

    b.run_check("chamber_below_wall", "stability below the wall", check_below)

    def check_reversal() -> tuple[str, str, bool]:
        below = chamber_report(params, m_below)
        above = chamber_report(params, m_above)
        at = chamber_report(params, m0)
        ok = (
            below.shifted_vs_line is Ordering.LESS
            and above.shifted_vs_line is Ordering.GREATER
            and below.odd_vs_line is Ordering.GREATER
            and above.odd_vs_line is Ordering.LESS
            and at.shifted_vs_line is Ordering.EQUAL
            and at.odd_vs_line is Ordering.EQUAL
        )
        return "orderings reverse across the wall and merge exactly at it", "verified" if ok else "mismatch", ok

    b.run_check("phase_reversal", "Lemma 4.7", check_reversal)

    def check_scan_wall() -> tuple[str, str, bool]:
        scan = destabilizer_scan(params, cat["J"], m0, coeff_bound=b.coeff_bound, jobs=b.jobs)
        equal = tuple(s.coords for s in scan.survivors if s.verdict is Ordering.EQUAL)
        expected = _catalogue_coords(params)
        ok = equal == expected
        return (
            f"equal-phase coordinates exactly {expected}",
            str(equal),
            ok,
        )

    b.run_check("scan_wall_members", "Lemma 4.7(ii)", check_scan_wall)

    def check_scan_above() -> tuple[str, str, bool]:
        scan = destabilizer_scan(params, cat["J"], m_above, coeff_bound=b.coeff_bound, jobs=b.jobs)
        shifted_coords = _catalogue_coords(params)[0]
        hit = next((s for s in scan.survivors if s.coords == shifted_coords), None)
        ok = hit is not None and hit.verdict is Ordering.GREATER
        return (
            "shifted even bundle charge among strict survivors",
            f"{shifted_coords} -> {hit.verdict if hit else 'absent'}",
            ok,
        )

    b.run_check("scan_above_wall", "Lemma 4.5; HN factor", check_scan_above)

    # The below-wall scan is the one place where the literal charge filters
    # and the chamber narrative disagree: the odd bundle charge itself has
    # real part 2m^2 - 5/8 < 0 below the wall, hence strictly larger phase,
    # and survives every stated filter.  Both sides are reported; neither is
    # adjudicated.  See the acceptance suite and README for the analysis.
    def flag_scan_below() -> None:
        scan = destabilizer_scan(params, cat["J"], m_below, coeff_bound=b.coeff_bound, jobs=b.jobs)
        strict = scan.strict_survivors()
        odd_coords = _catalogue_coords(params)[1]
        sample = ", ".join(str(s.coords) for s in strict[:4])
        b.flag(
            "scan_below_wall_surrogate",
            "stability below the wall",
            "no strict-phase survivor (chamber narrative)",
            (
                f"{len(strict)} strict-phase charge candidates within the box "
                f"(including the odd bundle charge {odd_coords}); {scan.note}; "
                f"first coords: {sample}"
            ),
        )

    flag_scan_below()

    def flag_closed_form() -> None:
        value, discrepancy = re_closed_form(params, cat["E1"], m0)
        direct = central_charge(params, m0, cat["E1"]).re
        b.flag(
            "closed_form_discrepancy",
            "Lemma 4.4 vs Remark 4.2",
            f"direct real part {format_quadext(direct)}",
            (
                f"half-shift closed form {format_quadext(value)}, "
                f"discrepancy {format_quadext(discrepancy)}; both computed, neither adopted"
            ),
        )

    flag_closed_form()

    def check_determinism() -> tuple[str, str, bool]:
        one = destabilizer_scan(params, cat["J"], m_below, coeff_bound=b.coeff_bound, jobs=1)
        two = destabilizer_scan(params, cat["J"], m_below, coeff_bound=b.coeff_bound, jobs=2)
        ok = one.survivors == two.survivors and one.phase_one == two.phase_one
        return "identical survivor lists for jobs 1 and 2", "identical" if ok else "diverged", ok

    b.run_check("scan_determinism", "deterministic parallel scan", check_determinism)

    # cheap structural spot checks (full sweeps live in the test suite)

    def check_isometry_spot() -> tuple[str, str, bool]:
        v = mukai_vector(2, sc.b.vec, 3)
        w = mukai_vector(-1, sc.h, 1)
        d = [Fraction(1, 2) if i < 2 else Fraction(0) for i in range(g.rank)]
        before = mukai_pairing(v, w, g)
        after = mukai_pairing(twist_by(v, d, g), twist_by(w, d, g), g)
        sym = mukai_pairing(v, w, g) == mukai_pairing(w, v, g)
        e = exp_class(d, g)
        ok = before == after and sym and e.r == 1
        return "exp-twist preserves the pairing; pairing symmetric", f"{before} == {after}", ok

    b.run_check("pairing_spot_checks", "pairing structure", check_isometry_spot)

    return _finish(b)


def _finish(b: _Battery) -> Report:
    exit_code = 0 if all(e.status != "fail" for e in b.entries) else 1
    return Report(checks=tuple(b.entries), exit_code=exit_code)


def _gcd_list(xs) -> int:
    import math

    out = 0
    for x in xs:
        out = math.gcd(out, int(x))
    return out


def _e1_plus_2e2(sc: Scenario):
    vec = [0] * sc.ambient.rank
    vec[0] = 1
    vec[1] = 2
    return vec


def _catalogue_coords(params) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Coordinates of the shifted even and odd bundle charges in the
    generator basis, sorted."""
    sc = params.scenario
    gens = picard_generators(sc.pic, sc.b)
    rows = [[int(x) for x in g.to_coords()] for g in gens]
    from . import linalg

    cat = catalogue(params)
    out = []
    for name in ("E0[1]", "E1"):
        coords = linalg.solve_in_rowspace(rows, [x for x in cat[name].to_coords()])
        assert coords is not None
        out.append(tuple(int(c) for c in coords))
    return tuple(sorted(out))
