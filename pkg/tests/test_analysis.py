"""Entanglement, fidelity, singularity, and threshold computations."""

from fractions import Fraction as F

import mpmath as mp
import pytest

from sldgf import (DegenerateSingularityError, UniPolyZ, builtin,
                   ce_closed_form_check, coefficient_asymptotic,
                   concentratable_entanglement, criterion_q, critical_lambda,
                   critical_lambda_asymptotic, dominant_singularity,
                   fidelity_asymptotic, fidelity_exact, fidelity_sweep,
                   realize, wep_by_iteration)

from conftest import brute_sectors


class TestConcentratableEntanglement:
    def test_star_member_five(self, systems):
        cbar, c = concentratable_entanglement(systems["star"], 5)
        assert cbar == F(17, 32)
        assert c == F(15, 32)

    def test_cycle_member_six(self, systems):
        # Lucas recurrence: 2, 1, 3, 4, 7, 11, 18
        cbar, _ = concentratable_entanglement(systems["cycle"], 6)
        assert cbar == F(18 + 1, 64)

    def test_single_qubit_is_unentangled(self, systems):
        for name in ("path", "star", "cycle"):
            cbar, c = concentratable_entanglement(systems[name], 1)
            assert cbar == 1 and c == 0

    def test_star_closed_form(self, systems):
        for r in range(1, 31):
            cbar, _ = concentratable_entanglement(systems["star"], r)
            assert cbar == F(1, 2) + F(1, 2 ** r)

    def test_cycle_lucas_closed_form(self, systems):
        lucas = [2, 1]
        while len(lucas) <= 30:
            lucas.append(lucas[-1] + lucas[-2])
        for r in range(1, 31):
            cbar, _ = concentratable_entanglement(systems["cycle"], r)
            assert cbar == F(lucas[r] + 1, 2 ** r)

    def test_path_radical_closed_form(self, systems):
        with mp.workdps(40):
            s5 = mp.sqrt(5)
            for r in range(0, 31):
                cbar, _ = concentratable_entanglement(systems["path"], r)
                radical = ((5 + s5) / (5 * (-1 + s5) ** (r + 1))
                           + (5 - s5) / (5 * (-1 - s5) ** (r + 1)))
                exact = mp.mpf(cbar.numerator) / cbar.denominator
                assert abs(radical - exact) < 1e-10


class TestClosedFormChecks:
    def test_path_roots_and_agreement(self, systems):
        report = ce_closed_form_check(systems["path"], 30)
        assert report.ok and report.max_abs_error < 1e-10
        got = sorted(z.real for z in report.roots)
        assert got == pytest.approx([-1 - 5 ** 0.5, -1 + 5 ** 0.5])

    def test_star_roots(self, systems):
        report = ce_closed_form_check(systems["star"], 30)
        assert report.ok
        assert sorted(z.real for z in report.roots) == pytest.approx([1.0, 2.0])

    def test_cycle_roots(self, systems):
        report = ce_closed_form_check(systems["cycle"], 30)
        assert report.ok
        assert sorted(z.real for z in report.roots) == pytest.approx(
            [-1 - 5 ** 0.5, -1 + 5 ** 0.5, 2.0])


class TestFidelityExact:
    def test_full_noise_is_perfect_fidelity(self, systems):
        for name in ("path", "cycle", "grid_2"):
            for r in (0, 1, 3, 6):
                assert fidelity_exact(systems[name], 1, r) == 1

    def test_bell_pair_formula(self, systems):
        for lam in (F(0), F(1, 3), F(4, 5), F(1)):
            expected = (1 + 3 * lam ** 2) / 4
            assert fidelity_exact(systems["path"], lam, 2) == expected

    def test_ten_chain_against_oracle(self, systems):
        g = realize(builtin("path"), 10)
        sectors = brute_sectors(g.vertex_count, g.sorted_edges())
        lam = F(4, 5)
        expected = sum(a * lam ** k for k, a in enumerate(sectors)) / 2 ** 10
        assert fidelity_exact(systems["path"], lam, 10) == expected

    def test_bounds_and_monotonicity(self, systems):
        sys_ = systems["joint_squares"]
        lams = [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]
        for r in (1, 2, 3):
            n = sys_.spec.qubit_count(r)
            values = [fidelity_exact(sys_, lam, r) for lam in lams]
            assert values[0] == F(1, 2 ** n)
            assert values[-1] == 1
            assert all(a <= b for a, b in zip(values, values[1:]))

    def test_sweep_matches_single_member(self, systems):
        sweep = fidelity_sweep(systems["star"], "0.8", 12)
        for r in (0, 5, 12):
            assert sweep[r] == fidelity_exact(systems["star"], "0.8", r)


class TestDominantSingularity:
    def test_linear_factor(self):
        report = dominant_singularity(UniPolyZ([1, -2]))
        assert complex(report.z_star) == pytest.approx(0.5)
        assert report.multiplicity == 1 and report.unique

    def test_star_denominator(self):
        report = dominant_singularity(UniPolyZ([4, -6, 2]))
        assert complex(report.z_star) == pytest.approx(1.0)
        assert report.multiplicity == 1
        assert report.modulus_gap == pytest.approx(2.0)

    def test_path_denominator_real_positive(self):
        report = dominant_singularity(UniPolyZ([-8, 8, 0, -1]))
        assert complex(report.z_star) == pytest.approx(-1 + 5 ** 0.5)
        assert report.real_positive

    def test_rejects_vanishing_constant_term(self):
        with pytest.raises(ValueError):
            dominant_singularity(UniPolyZ([0, 1]))

    def test_double_root_reported(self):
        report = dominant_singularity(UniPolyZ([1, -2, 1]))
        assert report.multiplicity == 2

    def test_modulus_tie_not_unique(self):
        # roots at +1 and -1
        report = dominant_singularity(UniPolyZ([-1, 0, 1]))
        assert not report.unique


class TestFidelityAsymptotic:
    def test_star_half_noise_member_forty(self, systems):
        exact = fidelity_exact(systems["star"], F(1, 2), 40)
        approx = fidelity_asymptotic(systems["star"], F(1, 2), 40)
        with mp.workdps(40):
            ratio = mp.mpf(exact.numerator) / exact.denominator / approx
            assert abs(ratio - 1) < 1e-6

    def test_ratio_tends_to_one_at_full_noise(self, systems):
        for name in ("path", "star", "pusteblume"):
            approx = fidelity_asymptotic(systems[name], 1, 40)
            assert abs(approx - 1) < 1e-12

    def test_path_error_decays(self, systems):
        lam = F(4, 5)
        exact = fidelity_sweep(systems["path"], lam, 31)
        with mp.workdps(40):
            deltas = []
            for r in range(20, 31):
                approx = fidelity_asymptotic(systems["path"], lam, r)
                deltas.append(abs(mp.mpf(exact[r].numerator)
                                  / exact[r].denominator - approx))
            assert all(b < a for a, b in zip(deltas, deltas[1:]))

    def test_general_formula_behind_opt_in(self):
        # 1 / (1-z)^2 has coefficients r + 1
        p = UniPolyZ([1])
        q = UniPolyZ([1, -2, 1])
        with pytest.raises(DegenerateSingularityError):
            coefficient_asymptotic(p, q, 50)
        value = coefficient_asymptotic(p, q, 200, trust_multiplicity=True)
        assert abs(value / 201 - 1) < 0.01

    def test_general_formula_reduces_to_the_simple_one(self, systems):
        from sldgf import family_gf, uni_reduce, uni_specialize
        lam = F(4, 5)
        pr, qr = uni_reduce(*uni_specialize(family_gf(systems["path"]),
                                            F(1, 2), lam / 2))
        general = coefficient_asymptotic(pr, qr, 30)
        specific = fidelity_asymptotic(systems["path"], lam, 30)
        assert abs(general - specific) < 1e-30


class TestCriterion:
    def test_bell_polynomial(self, systems):
        for lam in (F(0), F(1, 2), F(9, 10)):
            q1, q2, q = criterion_q(systems["path"], lam, 2)
            assert q == 2 - 6 * lam ** 4
            assert q1 - q2 == q

    def test_zero_noise_never_triggers(self, systems):
        for name, r in (("path", 5), ("star", 4), ("joint_squares", 2)):
            sys_ = systems[name]
            _, _, q = criterion_q(sys_, 0, r)
            assert q == sys_.spec.qubit_count(r)

    def test_shared_member_agrees_across_families(self, systems):
        for lam in (F(1, 4), F(1, 2), F(3, 4)):
            assert criterion_q(systems["path"], lam, 2) == \
                criterion_q(systems["star"], lam, 2)

    def test_bell_threshold(self, systems):
        value = critical_lambda(systems["path"], 2)
        assert value == pytest.approx(3 ** -0.25, abs=1e-9)

    def test_entangled_exactly_above_threshold(self, systems):
        threshold = 3 ** -0.25
        for lam, expect_negative in ((F(7, 10), False), (F(8, 10), True)):
            _, _, q = criterion_q(systems["path"], lam, 2)
            assert (q < 0) is expect_negative
            assert (float(lam) > threshold) is expect_negative

    def test_single_qubit_has_no_threshold(self, systems):
        assert critical_lambda(systems["path"], 1) is None

    def test_asymptotic_threshold_is_the_member_limit(self, systems):
        # the member thresholds must close in on the member-independent one
        approx = critical_lambda_asymptotic(systems["path"])
        gap_small = abs(critical_lambda(systems["path"], 40) - approx)
        gap_large = abs(critical_lambda(systems["path"], 400) - approx)
        assert gap_large < gap_small
        assert gap_large < 1e-3

    def test_joint_squares_threshold_converges(self, systems):
        approx = critical_lambda_asymptotic(systems["joint_squares"])
        assert abs(critical_lambda(systems["joint_squares"], 100) - approx) < 1e-3

    def test_star_threshold_sits_at_the_boundary(self, systems):
        approx = critical_lambda_asymptotic(systems["star"])
        assert approx == 1.0
        values = [critical_lambda(systems["star"], r) for r in (10, 40, 100)]
        assert values == sorted(values)
        assert values[-1] < 1.0

    def test_criterion_sweep_collects_members(self, systems):
        from sldgf import criterion_sweep
        result = criterion_sweep(systems["path"], [1, 2, 3],
                                 include_asymptotic=False,
                                 include_q_data=True)
        assert result.family == "path"
        assert [r for r, _ in result.entries] == [1, 2, 3]
        assert result.entries[0][1] is None
        assert result.entries[1][1] == pytest.approx(3 ** -0.25, abs=1e-9)
        assert result.lambda_c_approx is None
        assert result.q_data[1] == (2, [2, 0, -6])  # bell: 2 - 6 mu^2

    def test_negative_member_rejected(self, systems):
        with pytest.raises(ValueError):
            wep_by_iteration(systems["path"], -1)

    def test_asymptotic_ratio_matches_exact_ratio_at_large_members(self, systems):
        # the exact Q1/Q2 sequence approaches the member-independent ratio
        # with a 1/r correction; check the trend and the limit
        from sldgf import criterion_asymptotic_ratio
        lam = F(7, 10)
        limit = float(criterion_asymptotic_ratio(systems["path"], lam))
        gaps = []
        for r in (50, 200):
            q1, q2, _ = criterion_q(systems["path"], lam, r)
            gaps.append(abs(float(q1 / q2) - limit))
        assert gaps[1] < gaps[0]
        assert gaps[1] < 4.5 / 200
