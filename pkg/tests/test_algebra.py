import random

import pytest
from hypothesis import given, settings, strategies as st

from mpcshield.algebra import (
    FieldElement,
    MatrixZp,
    NEG_INF,
    Polynomial,
    PrimeModulus,
    determinant,
    is_prime,
    lagrange_evaluate,
    lagrange_interpolate,
    minor_determinant,
    mod_inverse,
    poly_divide,
    poly_eval,
    solve_any,
    solve_linear_system,
    vandermonde_rows,
)
from mpcshield.errors import (
    DivisionByZeroPolynomial,
    DuplicateAbscissa,
    IndexOutOfRange,
    ModulusMismatch,
    NonSquare,
    SingularSystem,
    ZeroInverse,
)

from oracles import brute_inverse, cofactor_det, evaluate, permutation_det, vandermonde_product

P7 = PrimeModulus(7)
P101 = PrimeModulus(101)
A2_APPENDIX = [[1, 1, 1, 5], [1, 2, 4, 0], [1, 3, 2, 3], [1, 4, 2, 4]]
A1_APPENDIX = [[1, 1, 1, 2], [1, 2, 4, 0], [1, 3, 2, 5], [1, 4, 2, 5]]


class TestModulus:
    @pytest.mark.parametrize("p", [3, 7, 101, 65537, 2**31 - 1])
    def test_accepts_primes(self, p):
        assert PrimeModulus(p).p == p

    @pytest.mark.parametrize("p", [2, 6, 9, 561, 2**31, 1, 0, -7])
    def test_rejects(self, p):
        with pytest.raises(ValueError):
            PrimeModulus(p)

    def test_primality_matches_trial_division(self):
        def slow(n):
            return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))

        for n in range(2000):
            assert is_prime(n) == slow(n)
        # strong pseudoprimes to small bases
        for n in (2047, 1373653, 25326001, 3215031751 - 2):
            assert is_prime(n) == slow(n)


class TestFieldElement:
    def test_reduces(self):
        assert FieldElement(9, P7).value == 2
        assert FieldElement(-1, P7).value == 6

    def test_mixed_moduli_rejected(self):
        with pytest.raises(ModulusMismatch):
            FieldElement(1, P7) + FieldElement(1, P101)

    def test_immutable(self):
        a = FieldElement(3, P7)
        with pytest.raises(AttributeError):
            a.value = 4

    def test_int_coercion(self):
        a = P7(3)
        assert a + 5 == 1
        assert 5 - a == 2
        assert 2 / a == P7(2) * P7(5)
        assert a ** -1 == 5

    def test_large_prime_products_exact(self):
        m = PrimeModulus(2**31 - 1)
        a = m(2**31 - 2)
        assert (a * a).value == 1  # (-1)^2
        x, y = 1_234_567_891, 2_000_000_011
        assert (m(x) * m(y)).value == x * y % (2**31 - 1)


class TestModInverse:
    def test_examples(self):
        assert mod_inverse(P7(3)) == 5
        assert brute_inverse(3, 7) == 5
        assert mod_inverse(P7(1)) == 1
        with pytest.raises(ZeroInverse):
            mod_inverse(P7(0))

    @pytest.mark.parametrize("p", [q for q in range(3, 102) if is_prime(q)])
    def test_exhaustive(self, p):
        m = PrimeModulus(p)
        for a in range(1, p):
            assert (m(a) * mod_inverse(m(a))).value == 1
            assert mod_inverse(m(a)).value == brute_inverse(a, p)


@settings(max_examples=200, deadline=None)
@given(
    p=st.sampled_from([7, 101, 65537, 2**31 - 1]),
    a=st.integers(),
    b=st.integers(),
    c=st.integers(),
)
def test_field_axioms(p, a, b, c):
    m = PrimeModulus(p)
    x, y, z = m(a), m(b), m(c)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    assert x + (-x) == 0


class TestPolynomial:
    def test_canonical(self):
        assert Polynomial([1, 2, 0, 7], P7).coeffs == (1, 2)
        assert Polynomial([0, 0], P7).is_zero()
        assert Polynomial([], P7).degree == NEG_INF
        assert Polynomial([3], P7).degree == 0

    def test_eval_examples(self):
        P = Polynomial([4, 5], P7)
        assert poly_eval(P, P7(3)) == 5
        assert poly_eval(P, P7(4)) == 3
        assert poly_eval(Polynomial.zero(P7), P7(6)) == 0
        with pytest.raises(ModulusMismatch):
            poly_eval(P, P101(1))

    def test_eval_matches_interpolation_oracle(self):
        # P through the first two appendix codeword positions
        P = lagrange_interpolate([(1, 2), (2, 0)], P7)
        assert P == Polynomial([4, 5], P7)
        assert [P(i).value for i in (3, 4)] == [5, 3]

    def test_divide_examples(self):
        N = Polynomial([2, 3, 5], P7)
        q, r = poly_divide(N, Polynomial([4, 1], P7))
        assert q == Polynomial([4, 5], P7) and r.is_zero()
        x2 = Polynomial.monomial(2, P7)
        q, r = poly_divide(x2, Polynomial.monomial(1, P7))
        assert q == Polynomial.monomial(1, P7) and r.is_zero()
        q, r = poly_divide(Polynomial([1, 1], P7), x2)
        assert q.is_zero() and r == Polynomial([1, 1], P7)
        with pytest.raises(DivisionByZeroPolynomial):
            poly_divide(N, Polynomial.zero(P7))

    def test_arithmetic(self):
        a = Polynomial([1, 1], P7)
        assert a * a == Polynomial([1, 2, 1], P7)
        assert a - a == Polynomial.zero(P7)
        assert (a + 6) == Polynomial([0, 1], P7)
        assert str(Polynomial([4, 5], P7)) == "4 + 5x"


@settings(max_examples=150, deadline=None)
@given(
    p=st.sampled_from([7, 101, 65537]),
    n_coeffs=st.lists(st.integers(0, 10**6), max_size=8),
    d_coeffs=st.lists(st.integers(0, 10**6), min_size=1, max_size=5),
)
def test_divide_property(p, n_coeffs, d_coeffs):
    m = PrimeModulus(p)
    N, D = Polynomial(n_coeffs, m), Polynomial(d_coeffs, m)
    if D.is_zero():
        return
    q, r = poly_divide(N, D)
    assert D * q + r == N
    assert r.degree < D.degree


class TestInterpolation:
    def test_examples(self):
        assert lagrange_interpolate([(P7(5), P7(3))]) == Polynomial([3], P7)
        with pytest.raises(DuplicateAbscissa):
            lagrange_interpolate([(1, 2), (1, 0)], P7)

    @pytest.mark.parametrize("p", [7, 101, 65537])
    def test_round_trip(self, p):
        m = PrimeModulus(p)
        rng = random.Random(p)
        for _ in range(100):
            count = rng.randint(1, min(p - 1, 9))
            xs = rng.sample(range(p), count)
            coeffs = [rng.randrange(p) for _ in range(rng.randint(0, count))]
            P = Polynomial(coeffs, m)
            pts = [(x, evaluate(coeffs, x, p)) for x in xs]
            assert lagrange_interpolate(pts, m) == P
            x0 = rng.randrange(p)
            assert lagrange_evaluate(pts, x0, m).value == evaluate(coeffs, x0, p)


class TestDeterminant:
    def test_appendix_matrices(self):
        assert cofactor_det(A2_APPENDIX, 7) == 1
        assert cofactor_det(A1_APPENDIX, 7) == 4
        assert determinant(MatrixZp.from_rows(A2_APPENDIX, P7)) == 1
        assert determinant(MatrixZp.from_rows(A1_APPENDIX, P7)) == 4

    def test_identity_and_errors(self):
        assert determinant(MatrixZp.identity(3, P7)) == 1
        with pytest.raises(NonSquare):
            determinant(MatrixZp.from_rows([[1, 2, 3]], P7))

    def test_singular_is_zero(self):
        assert determinant(MatrixZp.from_rows([[1, 2], [2, 4]], P7)) == 0

    def test_row_swap_sign(self):
        assert determinant(MatrixZp.from_rows([[0, 1], [1, 0]], P7)) == 6

    @pytest.mark.parametrize("p", [7, 101])
    def test_matches_cofactor_oracle(self, p):
        m = PrimeModulus(p)
        rng = random.Random(p * 31)
        for _ in range(60):
            size = rng.randint(1, 6)
            rows = [[rng.randrange(p) for _ in range(size)] for _ in range(size)]
            if rng.random() < 0.2:
                rows[-1] = list(rows[0])  # force singular now and then
            assert determinant(MatrixZp.from_rows(rows, m)).value == cofactor_det(rows, p)

    def test_two_oracles_agree(self):
        rng = random.Random(5)
        for _ in range(20):
            rows = [[rng.randrange(101) for _ in range(4)] for _ in range(4)]
            assert cofactor_det(rows, 101) == permutation_det(rows, 101)

    @pytest.mark.parametrize("p,n", [(7, 4), (7, 6), (101, 8), (65537, 12)])
    def test_vandermonde(self, p, n):
        m = PrimeModulus(p)
        nodes = list(range(1, n + 1))
        A = MatrixZp.from_rows(vandermonde_rows(nodes, n, m), m)
        assert determinant(A).value == vandermonde_product(nodes, p)


class TestMinor:
    def _public(self):
        rows = [r + [0] for r in vandermonde_rows(range(1, 5), 3, P7)]
        return MatrixZp.from_rows(rows, P7)

    def test_examples(self):
        A = self._public()
        assert minor_determinant(A, 1, 4) == vandermonde_product([2, 3, 4], 7) == 2
        assert minor_determinant(A, 2, 4) == vandermonde_product([1, 3, 4], 7) == 6
        assert minor_determinant(MatrixZp.identity(2, P7), 1, 1) == 1

    def test_bad_index(self):
        with pytest.raises(IndexOutOfRange):
            minor_determinant(self._public(), 0, 4)
        with pytest.raises(IndexOutOfRange):
            minor_determinant(self._public(), 1, 5)
        with pytest.raises(NonSquare):
            minor_determinant(MatrixZp.from_rows([[1, 2, 3]], P7), 1, 1)


class TestSolve:
    def test_appendix_system(self):
        A = MatrixZp.from_rows(A2_APPENDIX, P7)
        x = solve_linear_system(A, [2, 0, 5, 5])
        assert [v.value for v in x] == [2, 3, 5, 4]
        # substitute back
        for row, rhs in zip(A2_APPENDIX, [2, 0, 5, 5]):
            assert sum(a * v.value for a, v in zip(row, x)) % 7 == rhs

    def test_identity(self):
        assert [v.value for v in solve_linear_system(MatrixZp.identity(3, P7), [3, 1, 4])] == [3, 1, 4]

    def test_singular_flags(self):
        zero = MatrixZp.from_rows([[0, 0], [0, 0]], P7)
        with pytest.raises(SingularSystem) as exc:
            solve_linear_system(zero, [1, 0])
        assert exc.value.inconsistent
        with pytest.raises(SingularSystem) as exc:
            solve_linear_system(zero, [0, 0])
        assert not exc.value.inconsistent

    def test_solve_any_free_variables_zero(self):
        A = MatrixZp.from_rows([[1, 1, 0], [0, 0, 1]], P7)
        assert [v.value for v in solve_any(A, [3, 2])] == [3, 0, 2]
        with pytest.raises(SingularSystem):
            solve_any(MatrixZp.from_rows([[1, 1], [1, 1]], P7), [0, 1])

    def test_random_nonsingular(self):
        rng = random.Random(11)
        for _ in range(50):
            size = rng.randint(1, 6)
            rows = [[rng.randrange(101) for _ in range(size)] for _ in range(size)]
            if cofactor_det(rows, 101) == 0:
                continue
            b = [rng.randrange(101) for _ in range(size)]
            x = solve_linear_system(MatrixZp.from_rows(rows, P101), b)
            for row, rhs in zip(rows, b):
                assert sum(a * v.value for a, v in zip(row, x)) % 101 == rhs
