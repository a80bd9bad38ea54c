import numpy as np
import pytest

from bicyclic.capacity import (TrendVerdict, cofactor_experiment, decay_fit,
                               fourier_coefficients, make_bump_measure,
                               make_uniform_measure, noncyclicity_certificate,
                               riesz_energy, trend_verdict)
from bicyclic.curvegeom import closed_form_branch_fa, fa_poly, trace_branch
from bicyclic.poly2 import Poly2

TWO_PI = 2 * np.pi


def line_table(K=64, nodes=1024):
    br = trace_branch(Poly2([[1, 0], [0, 1]]), (0.0, TWO_PI), nodes)
    return fourier_coefficients(make_uniform_measure(br), K)


def horizontal_table(K=64, nodes=1024):
    br = trace_branch(Poly2([[1, -1]]), (0.0, TWO_PI), nodes)  # 1 - z2
    return fourier_coefficients(make_uniform_measure(br), K)


class TestFourierCoefficients:
    def test_exact_line_measure(self):
        tab = line_table(48)
        K = tab.K
        ks = np.arange(-K, K + 1)
        expect = np.zeros((2 * K + 1, 2 * K + 1), dtype=complex)
        expect[ks + K, ks + K] = (-1.0) ** ks
        assert np.abs(tab.coeffs - expect).max() <= 1e-12

    def test_normalization(self):
        cf = closed_form_branch_fa(0.5, (0.0, TWO_PI), 1024)
        mu = make_bump_measure(cf, np.pi / 2, 1.0)
        tab = fourier_coefficients(mu, 32)
        assert abs(tab.get(0, 0) - 1.0) <= 1e-12

    def test_conjugate_symmetry_exact(self):
        cf = closed_form_branch_fa(0.25, (0.0, TWO_PI), 1024)
        tab = fourier_coefficients(make_bump_measure(cf, 2.0, 0.8), 32)
        for k, l in ((3, 5), (-7, 2), (10, -4)):
            assert tab.get(-k, -l) == np.conj(tab.get(k, l))

    def test_resolution_guard(self):
        br = trace_branch(Poly2([[1, 0], [0, 1]]), (0.0, TWO_PI), 128)
        with pytest.raises(ValueError, match="resolution"):
            fourier_coefficients(make_uniform_measure(br), 64)

    def test_bump_profile_properties(self):
        cf = closed_form_branch_fa(0.5, (0.0, TWO_PI), 2048)
        mu = make_bump_measure(cf, np.pi / 2, 0.9)
        h = cf.spacing
        assert abs(mu.psi.sum() * h - 1.0) <= 1e-10
        outside = np.abs((cf.t - np.pi / 2 + np.pi) % TWO_PI - np.pi) >= 0.9
        assert np.all(mu.psi[outside] == 0)

    def test_quadrature_spectral_convergence(self):
        vals = []
        for nodes in (1024, 2048):
            cf = closed_form_branch_fa(0.5, (0.0, TWO_PI), nodes)
            tab = fourier_coefficients(make_bump_measure(cf, np.pi / 2, 1.0), 16)
            vals.append(tab.get(5, 3))
        assert abs(vals[0] - vals[1]) <= 1e-9

    def test_constant_branch_reduces_to_1d(self):
        br = trace_branch(Poly2([[1, -1]]), (0.0, TWO_PI), 1024)
        mu = make_bump_measure(br, np.pi, 1.5)
        tab = fourier_coefficients(mu, 24)
        for l in (-5, 0, 7):
            for k in (-3, 1, 9):
                assert abs(tab.get(k, l) - tab.get(k, 0)) <= 1e-12


class TestDecayFit:
    def test_line_no_decay(self):
        fit = decay_fit(line_table(64), shells=5)
        assert abs(fit.slope) <= 1e-10
        assert np.allclose(fit.shell_maxima, 1.0)

    def test_type2_bound_statistic_stable(self):
        stats = []
        for K, shells in ((64, 6), (128, 7)):
            cf = closed_form_branch_fa(0.5, (0.0, TWO_PI), 8 * K)
            tab = fourier_coefficients(make_bump_measure(cf, np.pi / 2, 1.0), K)
            stats.append(decay_fit(tab, shells, tau_claimed=2.0).bound_statistic)
        assert abs(stats[1] - stats[0]) <= 0.2 * stats[0]

    def test_axis_slope_zero_for_constant_branch(self):
        br = trace_branch(Poly2([[1, -1]]), (0.0, TWO_PI), 1024)
        tab = fourier_coefficients(make_bump_measure(br, np.pi, 1.5), 64)
        along_l = [abs(tab.get(0, l)) for l in range(1, 65)]
        assert np.std(along_l) <= 1e-12

    def test_small_table_rejected(self):
        with pytest.raises(ValueError):
            decay_fit(line_table(16, 512), shells=3)


class TestRieszEnergy:
    def test_diagonal_convergent_above_half(self):
        rep = riesz_energy(line_table(64), 0.75, [8, 16, 32, 64])
        assert rep.verdict is TrendVerdict.CONVERGENT
        # oracle: partial sums equal 1 + 0.5 sum_{k<=c} k^(-1.5) exactly
        for c, s in zip(rep.cutoffs, rep.partial_sums):
            expect = 1.0 + 0.5 * np.sum(np.arange(1, c + 1) ** -1.5)
            assert abs(s - expect) <= 1e-10

    def test_diagonal_divergent_below_half(self):
        rep = riesz_energy(line_table(64), 0.4, [8, 16, 32, 64])
        assert rep.verdict is TrendVerdict.DIVERGENT

    def test_horizontal_divergent_at_09(self):
        rep = riesz_energy(horizontal_table(64), 0.9, [8, 16, 32, 64])
        assert rep.verdict is TrendVerdict.DIVERGENT

    def test_partial_sums_monotone(self):
        for alpha in (0.4, 0.75):
            rep = riesz_energy(line_table(64), alpha, [8, 16, 32, 64])
            s = rep.partial_sums
            assert all(b >= a for a, b in zip(s, s[1:]))

    def test_verdict_stable_under_doubling(self):
        tab = line_table(128, 2048)
        r1 = riesz_energy(tab, 0.75, [8, 16, 32, 64])
        r2 = riesz_energy(tab, 0.75, [16, 32, 64, 128])
        assert r1.verdict is r2.verdict is TrendVerdict.CONVERGENT

    def test_alpha_validated(self):
        with pytest.raises(ValueError):
            riesz_energy(line_table(48, 512), 1.5, [8, 16, 32])

    def test_cutoffs_validated(self):
        with pytest.raises(ValueError):
            riesz_energy(line_table(48, 512), 0.75, [64, 32])


class TestTrendVerdict:
    def test_geometric_convergent(self):
        s = [1.0, 1.5, 1.75, 1.875]
        assert trend_verdict(s) is TrendVerdict.CONVERGENT

    def test_growing_divergent(self):
        s = [1.0, 2.0, 3.5, 5.5]
        assert trend_verdict(s) is TrendVerdict.DIVERGENT

    def test_flat_is_convergent(self):
        s = [2.0, 2.0, 2.0, 2.0]
        assert trend_verdict(s) is TrendVerdict.CONVERGENT

    def test_mixed_inconclusive(self):
        s = [1.0, 1.1, 1.8, 1.85]
        assert trend_verdict(s) is TrendVerdict.INCONCLUSIVE


class TestCertificate:
    def test_fa_above_threshold(self):
        rep = noncyclicity_certificate(fa_poly(0.5), 0.6, K=64)
        assert rep.verdict is TrendVerdict.CONVERGENT

    def test_line_at_075(self, f0):
        rep = noncyclicity_certificate(f0, 0.75, K=64)
        assert rep.verdict is TrendVerdict.CONVERGENT

    def test_line_below_threshold_diverges(self, f0):
        rep = noncyclicity_certificate(f0, 0.4, K=64)
        assert rep.verdict is TrendVerdict.DIVERGENT

    def test_requires_curve(self, two_minus):
        with pytest.raises(ValueError, match="curve"):
            noncyclicity_certificate(two_minus, 0.75, K=64)


class TestCofactor:
    def test_sup_norm_stable_q1(self, two_minus):
        zeros = [(1 + 0j, 1 + 0j)]
        sups = [cofactor_experiment(two_minus, zeros, 1, 1, g).sup_norm
                for g in (256, 512)]
        assert 0.9 <= sups[1] / sups[0] <= 1.1

    def test_n4_beta2_convergent(self, two_minus):
        zeros = [(1 + 0j, 1 + 0j)]
        report = cofactor_experiment(two_minus, zeros, 1, 4, 256)
        assert report.verdicts[2] is TrendVerdict.CONVERGENT
        for beta in (1, 2):
            s = report.weighted_sums[beta]
            assert all(b >= a for a, b in zip(s, s[1:]))

    def test_smooth_reciprocal(self):
        report = cofactor_experiment(Poly2([[3, 1], [1, 0]]), [], 0, 1, 256)
        assert report.verdicts[1] is TrendVerdict.CONVERGENT
        assert report.verdicts[2] is TrendVerdict.CONVERGENT

    def test_unexplained_zero_rejected(self, two_minus):
        with pytest.raises(ValueError, match="away from"):
            cofactor_experiment(two_minus, [], 1, 1, 256)

    def test_grid_validated(self, two_minus):
        with pytest.raises(ValueError):
            cofactor_experiment(two_minus, [(1 + 0j, 1 + 0j)], 1, 1, 200)
        with pytest.raises(ValueError):
            cofactor_experiment(two_minus, [(1 + 0j, 1 + 0j)], 1, 1, 128)
