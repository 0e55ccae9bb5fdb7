"""Exact-arithmetic layer: polynomials, rational functions, linear solving."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sldgf import (LaurentPoly3, NonConstantLeadingTermError, PolyMatrix,
                   SingularMatrixError, UniPolyZ, ZeroDenominatorError,
                   divexact, poly_from_terms, ratfunc_equal, ratfunc_normalize,
                   series_coefficients, solve_linear, solve_linear_raw,
                   uni_gcd, uni_reduce, uni_specialize)

from golden_forms import GOLDEN_GF

X = LaurentPoly3.var("x")
Y = LaurentPoly3.var("y")
Z = LaurentPoly3.var("z")
ONE = LaurentPoly3.const(1)


def coefficients():
    return st.fractions(min_value=-9, max_value=9, max_denominator=6)


def laurent_polys(max_terms=12):
    term = st.tuples(st.integers(-3, 4), st.integers(-3, 4),
                     st.integers(0, 4), coefficients())
    return st.lists(term, min_size=0, max_size=max_terms).map(
        lambda ts: poly_from_terms((ex, ey, ez, c) for ex, ey, ez, c in ts))


class TestPolyOps:
    def test_difference_of_squares(self):
        assert (X + Y) * (X - Y) == X * X - Y * Y

    def test_formal_derivative(self):
        p = X * X + LaurentPoly3.const(3) * Y * Y
        assert p.partial("y") == LaurentPoly3.const(6) * Y

    def test_substitute_bell_point(self):
        p = X * X + LaurentPoly3.const(3) * Y * Y
        assert p.substitute("x", F(3, 4)).substitute("y", F(1, 4)) == \
            LaurentPoly3.const(F(3, 4))

    def test_substitute_zero_into_negative_exponent_rejected(self):
        p = LaurentPoly3.monomial(-1, 2, 0)
        with pytest.raises(ValueError):
            p.substitute("x", 0)

    def test_substitute_zero_drops_positive_powers(self):
        p = X * Y + Y
        assert p.substitute("x", 0) == Y

    def test_laurent_derivative(self):
        p = LaurentPoly3.monomial(-1, 2, 0)
        assert p.partial("x") == LaurentPoly3.monomial(-2, 2, 0, -1)

    @settings(max_examples=60, deadline=None)
    @given(laurent_polys(), laurent_polys(), laurent_polys())
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert (a - a).is_zero()
        assert a * b == b * a

    @settings(max_examples=40, deadline=None)
    @given(laurent_polys(max_terms=6), laurent_polys(max_terms=6))
    def test_exact_division_inverts_multiplication(self, a, b):
        if b.is_zero():
            return
        assert divexact(a * b, b) == a

    def test_json_round_trip(self):
        p = poly_from_terms([(-1, 2, 0, 1), (0, 0, 3, -2), (2, 0, 0, F(1, 3))])
        blob = p.to_json()
        assert blob["vars"] == ["x", "y", "z"]
        exponents = [tuple(t["e"]) for t in blob["terms"]]
        assert exponents == sorted(exponents)
        assert LaurentPoly3.from_json(blob) == p

    def test_rendering(self):
        p = ONE - LaurentPoly3.const(2) * X * Y * Z * Z
        assert str(p) == "1 - 2*x*y*z^2"
        assert p.latex() == "1 - 2 x y z^{2}"


class TestRatFunc:
    def test_monomial_clearing(self):
        f = ratfunc_normalize(LaurentPoly3.monomial(-1, 2, 0),
                              LaurentPoly3.monomial(-1, 0, 0))
        assert f.num == Y * Y
        assert f.den == ONE

    def test_content_removal(self):
        f = ratfunc_normalize(LaurentPoly3.const(2) * (X + Y),
                              LaurentPoly3.const(2))
        assert f.num == X + Y
        assert f.den == ONE

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDenominatorError):
            ratfunc_normalize(ONE, LaurentPoly3.zero())

    def test_sign_convention(self):
        f = ratfunc_normalize(X, -ONE + Z)
        assert f.den.z_slice(0).constant_value() > 0

    def test_equal_up_to_scalar(self):
        f = ratfunc_normalize(X + Y, ONE - Z)
        g = ratfunc_normalize(LaurentPoly3.const(2) * (X + Y),
                              LaurentPoly3.const(2) * (ONE - Z))
        assert ratfunc_equal(f, g)

    def test_path_and_star_differ(self):
        assert not ratfunc_equal(GOLDEN_GF["path"], GOLDEN_GF["star"])

    @settings(max_examples=40, deadline=None)
    @given(laurent_polys(max_terms=5), laurent_polys(max_terms=5),
           laurent_polys(max_terms=4))
    def test_equal_is_an_equivalence(self, p, q, scale):
        if q.is_zero():
            return
        f = ratfunc_normalize(p, q)
        assert ratfunc_equal(f, f)
        if not scale.is_zero():
            g = ratfunc_normalize(p * scale, q * scale)
            assert ratfunc_equal(f, g)
            assert ratfunc_equal(g, f)


class TestSolveLinear:
    def test_identity_system(self):
        b = PolyMatrix([[X], [LaurentPoly3.zero()], [Y], [LaurentPoly3.zero()]])
        u = solve_linear(PolyMatrix.identity(4), b)
        assert [f.num for f in u] == b.column(0)
        assert all(f.den == ONE for f in u)

    def test_singular_matrix_reported(self):
        m = PolyMatrix([[X, X], [X, X]])
        with pytest.raises(SingularMatrixError):
            solve_linear_raw(m, [ONE, ONE])

    def test_pivoting_handles_zero_leading_entry(self):
        m = PolyMatrix([[LaurentPoly3.zero(), ONE], [ONE, LaurentPoly3.zero()]])
        nums, den = solve_linear_raw(m, [X, Y])
        # u = (y, x) up to the shared denominator
        assert divexact(nums[0], den) == Y
        assert divexact(nums[1], den) == X

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2),
                              st.integers(0, 1), coefficients()),
                    min_size=9, max_size=9),
           st.lists(coefficients(), min_size=3, max_size=3))
    def test_solution_satisfies_system_exactly(self, entries, rhs):
        data = [[poly_from_terms([entries[3 * i + j]]) for j in range(3)]
                for i in range(3)]
        m = PolyMatrix(data)
        b = [LaurentPoly3.const(c) for c in rhs]
        try:
            nums, den = solve_linear_raw(m, b)
        except SingularMatrixError:
            return
        for i in range(3):
            acc = LaurentPoly3.zero()
            for j in range(3):
                acc = acc + m.data[i][j] * nums[j]
            # m @ u - b == 0 after clearing the common denominator
            assert acc == b[i] * den

    def test_multiterm_laurent_systems_solve_exactly(self):
        # drive the exact-division chains with dense 4x4 systems whose
        # entries mix several Laurent monomials
        import random
        rng = random.Random(404)

        def random_poly():
            terms = [(rng.randint(-2, 3), rng.randint(-2, 3),
                      rng.randint(0, 2), rng.choice([-3, -2, -1, 1, 2, 3]))
                     for _ in range(rng.randint(1, 2))]
            return poly_from_terms(terms)

        solved = 0
        for _ in range(12):
            m = PolyMatrix([[random_poly() for _ in range(4)]
                            for _ in range(4)])
            b = [random_poly() for _ in range(4)]
            try:
                nums, den = solve_linear_raw(m, b)
            except SingularMatrixError:
                continue
            solved += 1
            for i in range(4):
                acc = LaurentPoly3.zero()
                for j in range(4):
                    acc = acc + m.data[i][j] * nums[j]
                assert acc == b[i] * den
        assert solved >= 8


class TestSeriesCoefficients:
    def test_path_series_matches_small_members(self, systems):
        from sldgf import family_gf
        gf = family_gf(systems["path"])
        coeffs = series_coefficients(gf, 3)
        assert coeffs[0] == ONE
        assert coeffs[1] == X + Y
        assert coeffs[2] == X * X + LaurentPoly3.const(3) * Y * Y
        assert coeffs[3] == poly_from_terms([(3, 0, 0, 1), (1, 2, 0, 3),
                                             (0, 3, 0, 4)])

    def test_grid_first_member_is_bell_pair(self):
        coeffs = series_coefficients(GOLDEN_GF["grid_2"], 1)
        assert coeffs[1] == X * X + LaurentPoly3.const(3) * Y * Y

    def test_non_constant_leading_term_rejected(self):
        f = ratfunc_normalize(ONE, X + Z)
        with pytest.raises(NonConstantLeadingTermError):
            series_coefficients(f, 3)

    @pytest.mark.parametrize("name", sorted(GOLDEN_GF))
    def test_series_times_denominator_reproduces_numerator(self, name):
        f = GOLDEN_GF[name]
        order = 8
        coeffs = series_coefficients(f, order)
        acc = LaurentPoly3.zero()
        for r, w in enumerate(coeffs):
            acc = acc + w.shift((0, 0, r))
        product = acc * f.den
        for r in range(order + 1):
            assert product.z_slice(r) == f.num.z_slice(r)


class TestUnivariate:
    def expect_scalar_multiple(self, got, expected):
        gp, gq = got
        ep, eq = expected
        scale = gq.coeffs[-1] / eq.coeffs[-1]
        assert gq == eq.scale(scale)
        assert gp == ep.scale(scale)

    def test_path_specialisation(self):
        pair = uni_specialize(GOLDEN_GF["path"], F(3, 4), F(1, 4))
        self.expect_scalar_multiple(pair, (UniPolyZ([8, 0, -2]),
                                           UniPolyZ([8, -8, 0, 1])))

    def test_star_specialisation(self):
        pair = uni_specialize(GOLDEN_GF["star"], F(3, 4), F(1, 4))
        # common simple factor of the unreduced pair survives specialisation
        common = UniPolyZ([1, F(-1, 2)])
        p = UniPolyZ([4, -2, -1]) * common
        q = UniPolyZ([4, -6, 2]) * common
        self.expect_scalar_multiple(pair, (p, q))

    def test_cycle_specialisation(self):
        p, q = uni_specialize(GOLDEN_GF["cycle"], F(3, 4), F(1, 4))
        pr, qr = uni_reduce(p, q)
        self.expect_scalar_multiple((pr, qr), (UniPolyZ([8, 0, 0, -2]),
                                               UniPolyZ([8, -8, 0, 1])))

    def test_reduce_preserves_ratio(self):
        base_p = UniPolyZ([1, 2])
        base_q = UniPolyZ([3, 0, 1])
        common = UniPolyZ([-1, 1, 1])
        p, q = uni_reduce(base_p * common, base_q * common)
        assert (p * base_q - q * base_p).is_zero()

    def test_gcd(self):
        a = UniPolyZ([-1, 0, 1])      # (z-1)(z+1)
        b = UniPolyZ([1, 2, 1])       # (z+1)^2
        assert uni_gcd(a, b) == UniPolyZ([1, 1])

    def test_divmod(self):
        a = UniPolyZ([1, 0, 0, 2])
        b = UniPolyZ([1, 1])
        quot, rem = a.divmod(b)
        assert (quot * b - (a - rem)).is_zero()
        assert rem.degree() < b.degree()
