import random

import pytest
import sympy

from twistedk3 import (
    E8_NEG_GRAM,
    Lattice,
    RepresentKind,
    U_GRAM,
    direct_sum,
    full_lattice,
    gram,
    k3_gram,
    orthogonal_complement,
    rank_one,
    represents,
    signature,
    standard_gram,
    sublattice_span,
)
from twistedk3.linalg import det_bareiss, kernel_basis, row_basis, row_hnf


def rnd_vectors(rng, count, dim, lo=-4, hi=4):
    return [[rng.randint(lo, hi) for _ in range(dim)] for _ in range(count)]


class TestStandardLattices:
    def test_hyperbolic_plane(self):
        assert U_GRAM.det() == -1
        assert signature(U_GRAM) == (1, 1, 0)
        assert all(U_GRAM.entries[i][i] % 2 == 0 for i in range(2))

    def test_negated_e8(self):
        assert E8_NEG_GRAM.det() == 1
        assert signature(E8_NEG_GRAM) == (0, 8, 0)
        assert all(E8_NEG_GRAM.entries[i][i] == -2 for i in range(8))
        # the diagram has 7 edges
        edges = sum(
            1
            for i in range(8)
            for j in range(i + 1, 8)
            if E8_NEG_GRAM.entries[i][j] != 0
        )
        assert edges == 7

    def test_rank_one(self):
        assert rank_one(2).det() == 2
        assert rank_one(-2).det() == -2

    def test_named_lookup(self):
        assert standard_gram("U") == U_GRAM
        assert standard_gram("E8neg") == E8_NEG_GRAM
        assert standard_gram("rank1:-4") == rank_one(-4)
        with pytest.raises(ValueError):
            standard_gram("Leech")

    def test_direct_sums(self):
        assert direct_sum(U_GRAM, U_GRAM).det() == 1
        assert direct_sum(rank_one(2), rank_one(-2)).det() == -4
        big = k3_gram()
        assert big.rank == 22
        assert big.det() == -1
        assert signature(big) == (3, 19, 0)

    def test_gram_validation(self):
        with pytest.raises(ValueError):
            gram([[0, 1], [2, 0]])
        with pytest.raises(ValueError):
            gram([[0, 1]])


class TestSpanAndSaturation:
    def test_even_sublattice_of_u(self):
        lat = sublattice_span(U_GRAM, [[2, 0], [0, 2]])
        assert lat.rank == 2
        sat, index = lat.saturation()
        assert index == 4
        assert sat.basis == full_lattice(U_GRAM).basis

    def test_index_two_span(self):
        lat = sublattice_span(U_GRAM, [[1, 0], [1, 2]])
        assert lat.rank == 2
        assert lat.saturation()[1] == 2

    def test_zero_generators_rejected(self):
        with pytest.raises(ValueError):
            sublattice_span(U_GRAM, [[0, 0], [0, 0]])

    def test_saturation_examples(self):
        lat = sublattice_span(U_GRAM, [[2, 0]])
        sat, index = lat.saturation()
        assert index == 2
        assert sat.basis == ((1, 0),)
        lat2 = sublattice_span(U_GRAM, [[1, 1]])
        assert lat2.saturation()[1] == 1
        assert lat2.is_primitive()

    def test_redundant_generators_collapse(self):
        lat = sublattice_span(U_GRAM, [[1, 0], [2, 0], [3, 0]])
        assert lat.rank == 1

    def test_membership(self):
        lat = sublattice_span(U_GRAM, [[1, 2]])
        assert lat.contains([2, 4])
        assert not lat.contains([1, 1])
        assert lat.coordinates([3, 6]) == [3]

    def test_dependent_basis_rejected(self):
        with pytest.raises(ValueError):
            Lattice(U_GRAM, ((1, 0), (2, 0)))


class TestComplement:
    def test_in_hyperbolic_plane(self):
        comp = orthogonal_complement(U_GRAM, [[1, 1]])
        assert comp.basis == ((1, -1),)
        assert comp.induced_gram().entries == ((-2,),)

    def test_empty_list_gives_full(self):
        comp = orthogonal_complement(U_GRAM, [])
        assert comp.rank == 2
        assert comp.basis == full_lattice(U_GRAM).basis

    def test_square_two_vector_in_k3(self):
        g = k3_gram()
        k = [1, 1] + [0] * 20
        comp = orthogonal_complement(g, [k])
        assert comp.rank == 21
        assert abs(comp.discriminant()) == 2
        assert comp.is_primitive()

    def test_complement_always_saturated_random(self):
        rng = random.Random(31)
        g = direct_sum(U_GRAM, U_GRAM, E8_NEG_GRAM)
        for _ in range(20):
            vecs = rnd_vectors(rng, rng.randint(1, 3), g.rank, -2, 2)
            comp = orthogonal_complement(g, vecs)
            assert comp.saturation()[1] == 1

    def test_double_complement_is_saturation(self):
        rng = random.Random(32)
        g = direct_sum(U_GRAM, U_GRAM, E8_NEG_GRAM)
        for _ in range(15):
            vecs = rnd_vectors(rng, rng.randint(1, 4), g.rank, -2, 2)
            if all(all(x == 0 for x in v) for v in vecs):
                continue
            span = sublattice_span(g, vecs)
            sat, _ = span.saturation()
            double = orthogonal_complement(
                g, [list(r) for r in orthogonal_complement(g, vecs).basis]
            )
            assert double.rank == sat.rank
            assert all(double.contains(r) for r in sat.basis)
            assert all(sat.contains(r) for r in double.basis)


class TestDiscriminantAndSignature:
    def test_discriminant_examples(self):
        assert full_lattice(U_GRAM).discriminant() == -1
        assert full_lattice(rank_one(2)).discriminant() == 2

    def test_positive_definite_rank2(self):
        assert signature(gram([[2, 1], [1, 2]])) == (2, 0, 0)

    def test_degenerate(self):
        assert signature(gram([[0, 0], [0, 1]])) == (1, 0, 1)
        assert signature(gram([[0, 1], [1, 0]])) == (1, 1, 0)

    def test_signature_congruence_invariance(self):
        rng = random.Random(41)
        for _ in range(30):
            n = rng.randint(2, 5)
            sym = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    sym[i][j] = sym[j][i] = rng.randint(-4, 4)
            g = gram(sym)
            # random unimodular: product of elementary row/col operations
            a = [[int(i == j) for j in range(n)] for i in range(n)]
            for _ in range(8):
                i, j = rng.sample(range(n), 2)
                c = rng.randint(-2, 2)
                for k in range(n):
                    a[i][k] += c * a[j][k]
            at_g_a = [
                [
                    sum(a[i][p] * sym[p][q] * a[j][q] for p in range(n) for q in range(n))
                    for j in range(n)
                ]
                for i in range(n)
            ]
            assert signature(gram(at_g_a)) == signature(g)

    def test_det_against_sympy(self):
        rng = random.Random(42)
        for _ in range(25):
            n = rng.randint(1, 6)
            m = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
            assert det_bareiss(m) == int(sympy.Matrix(m).det())

    def test_disc_scales_with_index_squared(self):
        rng = random.Random(43)
        g = direct_sum(U_GRAM, rank_one(2), rank_one(-4))
        base = full_lattice(g)
        for _ in range(20):
            n = g.rank
            t = [[0] * n for _ in range(n)]
            for i in range(n):
                t[i][i] = rng.choice([1, 1, 2, 3])
                for j in range(i + 1, n):
                    t[i][j] = rng.randint(-2, 2)
            sub = Lattice(g, tuple(tuple(r) for r in t))
            k = abs(det_bareiss(t))
            assert sub.discriminant() == k * k * base.discriminant()


class TestLinalgKernels:
    def test_kernel_matches_sympy_nullspace_rank(self):
        rng = random.Random(44)
        for _ in range(25):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 6)
            m = [[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)]
            ker = kernel_basis(m, width=cols)
            expected = len(sympy.Matrix(m).nullspace())
            assert len(ker) == expected
            for vec in ker:
                assert all(
                    sum(m[i][j] * vec[j] for j in range(cols)) == 0 for i in range(rows)
                )

    def test_hnf_transform_invariant(self):
        rng = random.Random(45)
        for _ in range(25):
            rows = rng.randint(1, 5)
            cols = rng.randint(1, 5)
            m = [[rng.randint(-7, 7) for _ in range(cols)] for _ in range(rows)]
            h, u, r = row_hnf(m, transform=True)
            # u * m == h and u unimodular
            prod = [
                [sum(u[i][k] * m[k][j] for k in range(rows)) for j in range(cols)]
                for i in range(rows)
            ]
            assert prod == h
            assert abs(det_bareiss(u)) == 1
            assert all(all(x == 0 for x in h[i]) for i in range(r, rows))

    def test_row_basis_idempotent(self):
        rng = random.Random(46)
        for _ in range(20):
            m = rnd_vectors(rng, rng.randint(1, 4), 5, -6, 6)
            b = row_basis(m)
            assert row_basis(b) == b


class TestRepresentability:
    def test_claimed_form_refuted_mod_4(self):
        verdict = represents(gram([[4, -4], [-4, 0]]), 6)
        assert verdict.kind is RepresentKind.NO_CONGRUENCE
        assert verdict.modulus == 4
        assert str(verdict) == "NoByCongruence(4)"

    def test_witness_found(self):
        verdict = represents(gram([[6, 4], [4, 0]]), 6)
        assert verdict.kind is RepresentKind.YES
        assert verdict.witness == (1, 0)

    def test_definite_exhaustion(self):
        verdict = represents(gram([[2, 0], [0, 2]]), 6)
        assert verdict.kind in (RepresentKind.NO_CONGRUENCE, RepresentKind.NO_DEFINITE)
        assert represents(gram([[2, 0], [0, 2]]), 4).witness is not None

    def test_negative_definite(self):
        assert represents(gram([[-2, 0], [0, -2]]), 6).kind is RepresentKind.NO_DEFINITE
        assert represents(gram([[-2, 0], [0, -2]]), -4).kind is RepresentKind.YES

    def test_rank_guard(self):
        with pytest.raises(ValueError):
            represents(gram([[2]]), 2)

    def test_zero_form(self):
        assert represents(gram([[0, 0], [0, 0]]), 0).kind is RepresentKind.YES
        assert represents(gram([[0, 0], [0, 0]]), 3).kind is RepresentKind.NO_CONGRUENCE

    def test_inconclusive_is_honest(self):
        # x^2 - 2 y^2 = 7 has smallest solution (3, 1); a bound of 1 must
        # answer Inconclusive, never a false no.
        verdict = represents(gram([[1, 0], [0, -2]]), 7, search_bound=1)
        assert verdict.kind is RepresentKind.INCONCLUSIVE
        assert represents(gram([[1, 0], [0, -2]]), 7, search_bound=3).witness == (3, 1)

    def test_no_verdict_lies_random(self):
        rng = random.Random(47)
        for _ in range(120):
            p, q, r = (rng.randint(-5, 5) for _ in range(3))
            target = rng.randint(-12, 12)
            g = gram([[p, q], [q, r]])
            verdict = represents(g, target, search_bound=6)

            def value(a, b):
                return p * a * a + 2 * q * a * b + r * b * b

            hits = [
                (a, b)
                for a in range(-10, 11)
                for b in range(-10, 11)
                if (a, b) != (0, 0) and value(a, b) == target
            ]
            if verdict.kind is RepresentKind.YES:
                a, b = verdict.witness
                assert value(a, b) == target
            elif verdict.kind in (RepresentKind.NO_CONGRUENCE, RepresentKind.NO_DEFINITE):
                assert not hits
