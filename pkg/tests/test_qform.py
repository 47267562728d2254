"""Quadratic forms: diagonalization, invariants, isotropy, Witt theory,
Pfister recognition, fundamental-ideal membership."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfisterinv import linalg, qform
from pfisterinv.qform import (
    DegenerateFormError,
    QuadraticForm,
    in_GP_r,
    in_I_n,
    is_hyperbolic,
    is_isometric,
    is_isotropic,
    pfister,
    witt_decompose,
    witt_from_lagrangian,
)

nonzero = st.integers(min_value=-20, max_value=20).filter(lambda n: n != 0)


def random_invertible(rng, n):
    while True:
        m = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        if linalg.rank(m) == n:
            return m


def congruent(q, m):
    g = linalg.mat_mul(linalg.transpose(m), linalg.mat_mul(q.gram, m))
    return QuadraticForm(g)


class TestConstruction:
    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateFormError):
            QuadraticForm([[1, 0], [0, 0]])

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            QuadraticForm([[1, 2], [0, 1]])

    def test_serialization_round_trips(self):
        q = QuadraticForm([[1, 2], [2, 1]])
        assert QuadraticForm.from_json(q.to_json()).gram == q.gram
        d = QuadraticForm.from_diagonal([1, Fraction(-2, 3)])
        assert QuadraticForm.from_json(d.to_json()).gram == d.gram


class TestDiagonalize:
    def test_identity(self):
        diag, _ = qform.diagonalize(QuadraticForm([[1, 0], [0, 1]]))
        assert list(diag) == [1, 1]

    def test_hyperbolic_plane(self):
        q = QuadraticForm([[0, 1], [1, 0]])
        from pfisterinv.arith import square_class

        d0, d1 = q.diagonal()
        assert (d0 > 0) != (d1 > 0)
        assert square_class(-d0 * d1) == 1
        assert is_isometric(q, QuadraticForm.from_diagonal([1, -1]))

    def test_congruence_property(self):
        for n in range(1, 6):
            q = QuadraticForm.from_diagonal(range(1, n + 1))
            diag, p = qform.diagonalize(q)
            lhs = linalg.mat_mul(linalg.transpose(p), linalg.mat_mul(q.gram, p))
            for i in range(n):
                for j in range(n):
                    assert lhs[i][j] == (diag[i] if i == j else 0)

    @given(st.lists(nonzero, min_size=1, max_size=5), st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_random_congruence_preserves_invariants(self, entries, seed):
        q = QuadraticForm.from_diagonal(entries)
        m = random_invertible(random.Random(seed), q.dim)
        assert congruent(q, m).invariants() == q.invariants()


class TestInvariants:
    def test_hyperbolic_plane(self):
        inv = QuadraticForm.from_diagonal([1, -1]).invariants()
        assert inv.disc == 1 and inv.signature == 0
        assert inv.hasse.is_trivial

    def test_sum_of_two_squares(self):
        inv = QuadraticForm.from_diagonal([1, 1]).invariants()
        assert inv.disc == -1 and inv.signature == 2

    def test_quaternion_norm_form_disc(self):
        for a, b in [(2, 3), (-1, 5), (7, -2)]:
            inv = QuadraticForm.from_diagonal([1, -a, -b, a * b]).invariants()
            assert inv.disc == 1

    def test_signature_parity(self):
        for entries in ([3], [1, 2], [1, -2, 3], [5, 5, -5, 1]):
            inv = QuadraticForm.from_diagonal(entries).invariants()
            assert abs(inv.signature) <= inv.dim
            assert (inv.signature - inv.dim) % 2 == 0


class TestPfister:
    def test_two_fold_expansion(self):
        g = pfister([2, 3]).gram
        assert [g[i][i] for i in range(4)] == [1, -2, -3, 6]
        assert all(g[i][j] == 0 for i in range(4) for j in range(4) if i != j)

    def test_sum_of_four_squares(self):
        g = pfister([-1, -1]).gram
        assert [g[i][i] for i in range(4)] == [1, 1, 1, 1]

    def test_isotropic_slot_gives_hyperbolic(self):
        q = pfister([1, 7])
        assert witt_decompose(q).witt_index == 2

    def test_zero_slot_rejected(self):
        with pytest.raises(ValueError):
            pfister([0, 1])


class TestIsotropy:
    def test_binary_anisotropic(self):
        assert not is_isotropic(QuadraticForm.from_diagonal([1, -2]))

    def test_ternary_witness(self):
        res = is_isotropic(QuadraticForm.from_diagonal([1, 1, -1]))
        assert res.isotropic
        q = QuadraticForm.from_diagonal([1, 1, -1])
        assert q.evaluate(res.witness) == 0 and any(res.witness)

    def test_spec_quinary(self):
        q = QuadraticForm.from_diagonal([1, 2, 3, -5, -7])
        res = is_isotropic(q)
        assert res.isotropic and q.evaluate(res.witness) == 0

    def test_definite_never_isotropic(self):
        assert not is_isotropic(QuadraticForm.from_diagonal([1, 2, 3, 4]))

    def test_local_obstruction(self):
        # <1, 1, 1> is anisotropic over Q_2 despite being indefinite-free of
        # real obstruction only for mixed signs; use a genuinely local case:
        # <1, 1, -7> fails at 2 (sum of two squares is never 7 mod 8)
        assert not is_isotropic(QuadraticForm.from_diagonal([1, 1, -7]))

    def test_large_ternary_descent(self):
        # far beyond direct enumeration; the witness certifies the answer
        q = QuadraticForm.from_diagonal(
            [954870, -11564686770, -769776598430]
        )
        res = is_isotropic(q)
        assert res.isotropic
        assert q.evaluate(res.witness) == 0 and any(res.witness)

    @given(st.lists(nonzero, min_size=2, max_size=5))
    @settings(max_examples=40, deadline=None)
    def test_witness_always_exact(self, entries):
        q = QuadraticForm.from_diagonal(entries)
        res = is_isotropic(q)
        if res.isotropic:
            assert q.evaluate(res.witness) == 0 and any(res.witness)
        else:
            # anisotropic forms stay anisotropic after permutation
            res2 = is_isotropic(QuadraticForm.from_diagonal(entries[::-1]))
            assert not res2.isotropic


class TestWitt:
    def test_hyperbolic_plane(self):
        w = witt_decompose(QuadraticForm.from_diagonal([1, -1]))
        assert w.witt_index == 1 and not w.anisotropic_basis

    def test_definite(self):
        w = witt_decompose(QuadraticForm.from_diagonal([1, 1, 1, 1]))
        assert w.witt_index == 0 and len(w.anisotropic_basis) == 4

    def _check_decomposition(self, q, w):
        assert 2 * w.witt_index + len(w.anisotropic_basis) == q.dim
        for u, v in w.hyperbolic_basis:
            assert q.evaluate(u) == 0 and q.evaluate(v) == 0
            assert q.bilinear(u, v) == 1
        flat = [x for pair in w.hyperbolic_basis for x in pair]
        for i, x in enumerate(flat):
            for y in flat[i + 1 :]:
                if (x, y) not in w.hyperbolic_basis:
                    assert q.bilinear(x, y) in (0, 1)
        for x in flat:
            for z in w.anisotropic_basis:
                assert q.bilinear(x, z) == 0
        if w.anisotropic_basis:
            assert not is_isotropic(q.restrict(w.anisotropic_basis))

    def test_round_trip_known_index(self):
        rng = random.Random(5)
        for _ in range(10):
            k = rng.randint(0, 3)
            definite = [rng.choice([1, 2, 5]) for _ in range(rng.randint(0, 3))]
            entries = [1, -1] * k + definite
            if not entries:
                continue
            rng.shuffle(entries)
            q = QuadraticForm.from_diagonal(entries)
            w = witt_decompose(q)
            assert w.witt_index == k
            self._check_decomposition(q, w)

    def test_q_plus_minus_q_hyperbolic(self):
        rng = random.Random(11)
        for _ in range(5):
            entries = [rng.choice([1, 2, 3, 5, -7]) for _ in range(3)]
            q = QuadraticForm.from_diagonal(entries + [-e for e in entries])
            assert is_hyperbolic(q)
            assert witt_decompose(q).witt_index == 3

    def test_from_lagrangian(self):
        q = QuadraticForm.from_diagonal([1, -1, 2, -2])
        lag = [(1, 1, 0, 0), (0, 0, 1, 1)]
        w = witt_from_lagrangian(q, [linalg.vector(v) for v in lag])
        assert w.witt_index == 2 and not w.anisotropic_basis
        self._check_decomposition(q, w)

    def test_from_lagrangian_rejects_non_lagrangian(self):
        q = QuadraticForm.from_diagonal([1, -1, 2, -2])
        with pytest.raises(ValueError):
            witt_from_lagrangian(q, [linalg.vector((1, 0, 0, 0)), linalg.vector((0, 0, 1, 1))])


class TestHyperbolicIsometric:
    def test_is_hyperbolic_examples(self):
        assert is_hyperbolic(QuadraticForm.from_diagonal([1, -1, 2, -2]))
        assert not is_hyperbolic(QuadraticForm.from_diagonal([1, 1, 1, 1]))
        assert not is_hyperbolic(QuadraticForm.from_diagonal([1, 2, -1]))

    def test_isotropic_pfister_is_hyperbolic(self):
        for a, b in [(1, 7), (2, 2), (5, -1)]:
            q = pfister([a, b])
            if is_isotropic(q):
                assert is_hyperbolic(q)

    def test_isometric_to_rediagonalization(self):
        q = QuadraticForm([[2, 1, 0], [1, 3, 1], [0, 1, -5]])
        d = QuadraticForm.from_diagonal(q.diagonal())
        assert is_isometric(q, d)

    def test_signature_separates(self):
        assert not is_isometric(
            QuadraticForm.from_diagonal([1, 1]), QuadraticForm.from_diagonal([1, -1])
        )

    def test_scaled_pfister_by_represented_value(self):
        # Pfister forms are round: scaling by a represented value is an isometry
        q = pfister([2, 3])
        for v in [(1, 0, 0, 0), (1, 1, 0, 0), (1, 0, 1, 1)]:
            lam = q.evaluate(v)
            if lam != 0:
                assert is_isometric(q, q.scale(lam))

    def test_equivalence_relation_on_samples(self):
        forms = [
            QuadraticForm.from_diagonal(d)
            for d in ([1, -1], [2, -2], [1, 1], [1, -2])
        ]
        for a in forms:
            assert is_isometric(a, a)
            for b in forms:
                assert is_isometric(a, b) == is_isometric(b, a)


class TestIdealFiltration:
    def test_hyperbolic_plane_in_all(self):
        q = QuadraticForm.from_diagonal([1, -1])
        for n in (1, 2, 3, 4):
            assert in_I_n(q, n)

    def test_three_fold_pfister_in_i3(self):
        assert in_I_n(pfister([2, 3, 5]), 3)

    def test_odd_dim_not_in_i1(self):
        assert not in_I_n(QuadraticForm.from_diagonal([1, 2, 3]), 1)

    def test_nontrivial_disc_not_in_i2(self):
        assert not in_I_n(QuadraticForm.from_diagonal([1, 1, 1, -7]), 2)


class TestGPr:
    def test_scaled_two_fold(self):
        assert in_GP_r(QuadraticForm.from_diagonal([2, -4, -6, 12]), 2)

    def test_disc_obstruction_dim4(self):
        assert not in_GP_r(QuadraticForm.from_diagonal([1, 1, 1, -7]), 2)

    def test_dim8(self):
        assert in_GP_r(pfister([2, 3, 5]).scale(7), 3)
        assert not in_GP_r(QuadraticForm.from_diagonal([1, 1, 1, 1, 1, 1, 1, -7]), 3)

    def test_dim16_scaled_pfister(self):
        rng = random.Random(3)
        for _ in range(3):
            slots = [rng.choice([2, 3, 5, 7, -1]) for _ in range(4)]
            lam = rng.choice([1, 2, -3])
            assert in_GP_r(pfister(slots).scale(lam), 4)

    def test_wrong_dimension(self):
        assert not in_GP_r(QuadraticForm.from_diagonal([1, -1]), 2)


class TestArasonPfisterDeskCheck:
    def test_dim16_i3_high_witt_is_hyperbolic(self):
        # I^3 forms of dim 16 with witt index >= 5 have anisotropic dimension
        # < 8, which the cubic ideal forces to 0
        rng = random.Random(9)
        for _ in range(5):
            slots = [rng.choice([2, 3, 5, -1]) for _ in range(3)]
            base = pfister(slots)
            q = base.orthogonal_sum(base.scale(-rng.choice([1, 2])))
            assert in_I_n(q, 3)
            w = witt_decompose(q)
            if w.witt_index >= 5:
                assert w.witt_index == 8


class TestCliffordCrossValidation:
    def test_matches_structure_constants_dims_2_to_4(self):
        from pfisterinv import csa

        rng = random.Random(21)
        for _ in range(8):
            n = rng.randint(2, 4)
            entries = [rng.choice([1, 2, 3, 5, -1, -2, -7]) for _ in range(n)]
            q = QuadraticForm.from_diagonal(entries)
            assert csa.clifford_brauer_class(q) == q.invariants().clifford
