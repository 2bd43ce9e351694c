import random
from fractions import Fraction

import pytest

from twistedk3 import (
    ComplexQE,
    Ordering,
    Phase,
    QuadExt,
    RadicandMismatchError,
    format_quadext,
    parse_quadext,
    phase_cmp,
    qe_arith,
    qe_sign,
    rational_sqrt,
)
from twistedk3.scalars import squarefree_split, try_phase

M0 = QuadExt(0, Fraction(1, 4), 5)


def rnd_quadext(rng, n=5):
    a = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
    b = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
    return QuadExt(a, b, n)


class TestCanonicalForm:
    def test_square_part_reduced(self):
        x = QuadExt(0, 2, 8)
        assert (x.b, x.n) == (Fraction(4), 2)

    def test_radicand_one_collapses(self):
        assert QuadExt(1, 3, 1) == QuadExt(4)

    def test_zero_b_forces_zero_radicand(self):
        assert QuadExt(Fraction(7, 3), 0, 7).n == 0

    def test_squarefree_split(self):
        assert squarefree_split(80) == (4, 5)
        assert squarefree_split(1) == (1, 1)
        assert squarefree_split(0) == (1, 0)
        with pytest.raises(ValueError):
            squarefree_split(-1)


class TestArithmetic:
    def test_root_squares_to_radicand(self):
        assert M0 * M0 == Fraction(5, 16)

    def test_sum_of_rational_and_root(self):
        assert QuadExt(1) + QuadExt(0, 1, 5) == QuadExt(1, 1, 5)

    def test_real_part_vanishes_at_wall(self):
        # 8 m0^2 - 2 - 1/2 == 0
        assert M0 * M0 * 8 - 2 - Fraction(1, 2) == QuadExt(0)

    def test_dispatch(self):
        x, y = QuadExt(1, 1, 5), QuadExt(2, -1, 5)
        assert qe_arith(x, y, "add") == x + y
        assert qe_arith(x, y, "sub") == x - y
        assert qe_arith(x, y, "mul") == x * y
        assert qe_arith(x, y, "div") == x / y
        with pytest.raises(ValueError):
            qe_arith(x, y, "pow")

    def test_mixed_radicands_rejected(self):
        with pytest.raises(RadicandMismatchError):
            QuadExt(0, 1, 5) + QuadExt(0, 1, 2)
        with pytest.raises(RadicandMismatchError):
            QuadExt(0, 1, 5) * QuadExt(0, 1, 3)

    def test_rational_mixes_with_any_radicand(self):
        assert QuadExt(0, 1, 5) + 2 == QuadExt(2, 1, 5)
        assert Fraction(3, 2) * QuadExt(0, 1, 2) == QuadExt(0, Fraction(3, 2), 2)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            QuadExt(1) / QuadExt(0)

    def test_field_axioms_random(self):
        rng = random.Random(2026)
        for _ in range(200):
            x, y, z = (rnd_quadext(rng) for _ in range(3))
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            if y:
                assert (x / y) * y == x
            assert x + (-x) == QuadExt(0)

    def test_power(self):
        x = QuadExt(1, 1, 5)
        assert x ** 3 == x * x * x
        assert x ** 0 == QuadExt(1)
        assert x ** -2 == QuadExt(1) / (x * x)


class TestSign:
    def test_zero(self):
        assert qe_sign(QuadExt(0, 0, 5)) == 0

    def test_opposite_components(self):
        # -1/2 + (1/4) sqrt 5 > 0 since 5/16 > 1/4
        assert qe_sign(QuadExt(Fraction(-1, 2)) + M0) == 1

    def test_wall_root_exact_zero(self):
        assert qe_sign(QuadExt(Fraction(5, 8)) - M0 * M0 * 2) == 0

    def test_multiplicative_random(self):
        rng = random.Random(17)
        for _ in range(300):
            x, y = rnd_quadext(rng), rnd_quadext(rng)
            assert qe_sign(x * y) == qe_sign(x) * qe_sign(y)

    def test_tight_rational_comparisons(self):
        sqrt2 = QuadExt(0, 1, 2)
        assert QuadExt(Fraction(707, 500)) < sqrt2 < QuadExt(Fraction(708, 500))
        assert sqrt2 > 1
        assert -sqrt2 < Fraction(-7, 5)


class TestRationalSqrt:
    def test_wall_value(self):
        assert rational_sqrt(Fraction(5, 16)) == M0

    def test_perfect_square(self):
        assert rational_sqrt(Fraction(9, 4)) == QuadExt(Fraction(3, 2))

    def test_zero_and_negative(self):
        assert rational_sqrt(0) == QuadExt(0)
        with pytest.raises(ValueError):
            rational_sqrt(Fraction(-1, 4))

    def test_random_roundtrip(self):
        rng = random.Random(99)
        for _ in range(100):
            q = Fraction(rng.randint(0, 400), rng.randint(1, 40))
            r = rational_sqrt(q)
            assert r * r == QuadExt(q)
            assert r.sign() >= 0


def phase(re, im):
    return Phase(ComplexQE(QuadExt(Fraction(re)), QuadExt(Fraction(im))))


class TestPhase:
    def test_rejects_invalid(self):
        with pytest.raises(ValueError):
            Phase(ComplexQE(QuadExt(0), QuadExt(0)))
        with pytest.raises(ValueError):
            Phase(ComplexQE(QuadExt(1), QuadExt(-1)))
        with pytest.raises(ValueError):
            Phase(ComplexQE(QuadExt(1), QuadExt(0)))
        assert try_phase(ComplexQE(QuadExt(2), QuadExt(-3))) is None

    def test_quarter_vs_half_turn(self):
        assert phase_cmp(phase(0, 1), phase(1, 1)) is Ordering.GREATER

    def test_imaginary_ray_equal(self):
        assert phase_cmp(phase(0, Fraction(13, 25)), phase(0, 2)) is Ordering.EQUAL

    def test_second_quadrant_beats_imaginary_axis(self):
        z1 = Phase(ComplexQE(QuadExt(Fraction(5, 8) - 2), QuadExt(1)))
        assert phase_cmp(z1, phase(0, 2)) is Ordering.GREATER

    def test_negative_real_axis_is_maximal(self):
        top = phase(-3, 0)
        assert phase_cmp(top, phase(-1000, 1)) is Ordering.GREATER
        assert phase_cmp(top, phase(-5, 0)) is Ordering.EQUAL
        assert phase_cmp(phase(0, 1), top) is Ordering.LESS

    def test_purely_imaginary_against_signs(self):
        z = phase(0, 3)
        assert phase_cmp(z, phase(2, 5)) is Ordering.GREATER
        assert phase_cmp(z, phase(-2, 5)) is Ordering.LESS

    def test_positive_scaling_invariance(self):
        rng = random.Random(5)
        for _ in range(100):
            re = Fraction(rng.randint(-9, 9))
            im = Fraction(rng.randint(0, 9))
            if im == 0 and re >= 0:
                continue
            lam = Fraction(rng.randint(1, 12), rng.randint(1, 12))
            z = ComplexQE(QuadExt(re), QuadExt(im))
            assert phase_cmp(Phase(z), Phase(z.scale(lam))) is Ordering.EQUAL

    def test_total_preorder(self):
        rng = random.Random(8)
        zs = []
        for _ in range(25):
            re = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            im = Fraction(rng.randint(0, 6), rng.randint(1, 4))
            if im == 0 and re >= 0:
                continue
            zs.append(Phase(ComplexQE(QuadExt(re), QuadExt(im))))
        for z1 in zs:
            for z2 in zs:
                assert phase_cmp(z1, z2) == -phase_cmp(z2, z1)
                for z3 in zs:
                    if phase_cmp(z1, z2) is not Ordering.LESS and phase_cmp(z2, z3) is not Ordering.LESS:
                        assert phase_cmp(z1, z3) is not Ordering.LESS


class TestTextualForm:
    def test_format_examples(self):
        assert format_quadext(M0) == "0+1/4*sqrt(5)"
        assert format_quadext(QuadExt(Fraction(-3, 7))) == "-3/7"
        assert format_quadext(QuadExt(1, -1, 5)) == "1-1*sqrt(5)"

    def test_parse_examples(self):
        assert parse_quadext("0+1/4*sqrt(5)") == M0
        assert parse_quadext("1/4*sqrt(5)") == M0
        assert parse_quadext("13/25") == QuadExt(Fraction(13, 25))
        assert parse_quadext("-2") == QuadExt(-2)
        assert parse_quadext("1-1*sqrt(5)") == QuadExt(1, -1, 5)

    def test_roundtrip_random(self):
        rng = random.Random(77)
        for _ in range(100):
            x = rnd_quadext(rng, n=rng.choice([0, 2, 5, 7]))
            assert parse_quadext(format_quadext(x)) == x

    def test_parse_rejects_garbage(self):
        for bad in ("", "sqrt(5)", "1+sqrt(5)", "1/0", "x+1*sqrt(5)"):
            with pytest.raises(ValueError):
                parse_quadext(bad)
