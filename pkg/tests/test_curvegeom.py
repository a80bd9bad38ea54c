import numpy as np
import pytest

from bicyclic.curvegeom import (closed_form_branch_fa, curve_type_at,
                                fa_poly, mobius_retype, trace_branch)
from bicyclic.poly2 import Poly2

TWO_PI = 2 * np.pi


class TestTraceBranch:
    def test_antidiagonal_line(self, f0):
        br = trace_branch(f0, (0.0, TWO_PI), 256)
        assert np.abs(br.m - (np.pi - br.t)).max() <= 1e-12
        assert br.periodic and br.winding == -1

    def test_diagonal_line(self):
        br = trace_branch(Poly2([[1, 0], [0, -1]]), (0.0, TWO_PI), 256)
        assert np.abs(br.m - (-br.t)).max() <= 1e-12

    def test_fa_matches_closed_form(self):
        tr = trace_branch(fa_poly(0.5), (0.0, TWO_PI), 512)
        cf = closed_form_branch_fa(0.5, (0.0, TWO_PI), 512)
        assert np.abs(tr.m - cf.m).max() <= 1e-8

    def test_fa_derivatives_match_closed_form(self):
        tr = trace_branch(fa_poly(0.5), (0.0, TWO_PI), 512)
        cf = closed_form_branch_fa(0.5, (0.0, TWO_PI), 512)
        assert np.abs(tr.dm - cf.dm).max() <= 1e-6
        assert np.abs(tr.d2m - cf.d2m).max() <= 1e-6

    def test_fa_slope_strictly_negative(self):
        # m'(t) = (1-a^2)/(2a cos t - 1 - a^2) < 0 for a in (0,1)
        for a in (0.25, 0.5, 0.75):
            cf = closed_form_branch_fa(a, (0.0, TWO_PI), 256)
            expect = (1 - a * a) / (2 * a * np.cos(cf.t) - 1 - a * a)
            assert np.abs(cf.dm - expect).max() <= 1e-12
            assert np.all(cf.dm < 0)

    def test_nodes_on_torus(self):
        f = fa_poly(0.3)
        br = trace_branch(f, (0.0, TWO_PI), 128)
        z1, z2 = np.exp(1j * br.t), np.exp(1j * br.m)
        assert np.abs(np.abs(z1) - 1).max() <= 1e-10
        assert np.abs(np.abs(z2) - 1).max() <= 1e-10
        assert np.abs(f(z1, z2)).max() <= 1e-8 * f.scale

    def test_branch_ambiguity_raises(self, f0, two_minus):
        # (1 - z1 z2)(2 - z1 - z2): the two z2-roots collide at z1 = 1
        f = Poly2([[1, 0], [0, -1]]) * two_minus
        with pytest.raises(ValueError, match="ambiguity|no unimodular"):
            trace_branch(f, (-0.1, 0.1), 256)

    def test_no_curve_raises(self):
        with pytest.raises(ValueError):
            trace_branch(Poly2([[3, 1], [1, 0]]), (0.0, TWO_PI), 64)

    def test_csv_rows(self, f0):
        br = trace_branch(f0, (0.0, TWO_PI), 64)
        rows = br.csv_rows()
        assert rows[0] == "t,m,dm,d2m"
        assert len(rows) == 65


class TestCurveType:
    def test_fa_type2_at_half_pi(self):
        cf = closed_form_branch_fa(0.5, (0.0, TWO_PI), 512)
        rep = curve_type_at(cf, np.pi / 2)
        assert rep.tau == 2 and not rep.is_infinite

    def test_fa_type3_at_zero(self):
        cf = closed_form_branch_fa(0.5, (0.0, TWO_PI), 512)
        rep = curve_type_at(cf, 0.0)
        assert rep.tau == 3
        # second derivative really vanishes at the reported point
        pairs = dict((k, v) for k, v in rep.derivative_values)
        assert abs(pairs[2]) <= 1e-7

    def test_traced_branch_types_match_closed_form(self):
        tr = trace_branch(fa_poly(0.5), (0.0, TWO_PI), 512)
        assert curve_type_at(tr, np.pi / 2).tau == 2
        assert curve_type_at(tr, 0.0).tau == 3

    def test_direction_symmetric_points(self):
        # types agree at parameter-reversed locations of the closed curve
        cf = closed_form_branch_fa(0.5, (0.0, TWO_PI), 512)
        assert curve_type_at(cf, np.pi / 2).tau == curve_type_at(cf, 3 * np.pi / 2).tau
        assert curve_type_at(cf, 0.0).tau == curve_type_at(cf, np.pi).tau

    def test_line_infinite(self, f0):
        br = trace_branch(f0, (0.0, TWO_PI), 256)
        rep = curve_type_at(br, 1.0)
        assert rep.is_infinite and rep.tau is None

    def test_line_infinite_nonperiodic_window(self, f0):
        br = trace_branch(f0, (-0.8, 0.8), 256)
        assert curve_type_at(br, 0.0).tau is None

    def test_witness_annihilates_tangent(self):
        cf = closed_form_branch_fa(0.5, (0.0, TWO_PI), 512)
        rep = curve_type_at(cf, np.pi / 2)
        i = cf.node_index(np.pi / 2)
        tangent = np.array([1.0, cf.dm[i]])
        eta = np.array(rep.witness_vector)
        assert abs(tangent @ eta) <= 1e-12
        assert abs(np.linalg.norm(eta) - 1.0) <= 1e-12

    def test_max_order_validated(self, f0):
        br = trace_branch(f0, (0.0, TWO_PI), 64)
        with pytest.raises(ValueError):
            curve_type_at(br, 0.0, max_order=1)

    def test_outside_window_rejected(self):
        br = trace_branch(fa_poly(0.5), (1.0, 2.0), 64)
        with pytest.raises(ValueError):
            curve_type_at(br, 0.5)


class TestMobiusRetype:
    def test_line_reaches_type2(self, f0):
        params, rep = mobius_retype(f0, 0.0, [0.3 + 0.4j])
        assert params.a == 0.3 + 0.4j and params.b == 0
        assert rep.tau == 2

    def test_real_candidate_rejected(self, f0):
        with pytest.raises(ValueError, match="Im"):
            mobius_retype(f0, 0.0, [0.5])

    def test_identity_when_already_type2(self):
        params, rep = mobius_retype(fa_poly(0.5), np.pi / 2, [0.3 + 0.4j])
        assert params.a == 0 and rep.tau == 2

    def test_finite_difference_oracle(self, f0):
        # the transformed curve's curvature at the image point, measured by
        # raw second differences of the traced branch, is genuinely nonzero
        from bicyclic.poly2 import MobiusParams, mobius_numerator
        a = 0.3 + 0.4j
        g = mobius_numerator(f0, MobiusParams(a, 0.0))
        z1_img = (a - 1.0) / (1.0 - np.conj(a))
        t_img = float(np.angle(z1_img))
        h = 1e-3
        window = (t_img - 64 * h, t_img + 64 * h)
        br = trace_branch(g, window, 128)
        i = br.node_index(t_img)
        second = (br.m[i - 1] - 2 * br.m[i] + br.m[i + 1]) / h ** 2
        assert abs(second) > 1e-2
