"""
functionals / layer_cake 유닛 테스트
"""

import math
import pytest
import numpy as np
import sys
import os

# 프로젝트 루트를 Python 경로에 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.convex_fn import ConeBound
from src.exceptions import NotPositivelySpanningError, OriginNotInBodyError, ParameterError
from src.functionals import (
    SupportEvaluator,
    V0,
    V0_pow,
    Vn_pow,
    cone_closed_forms,
    evaluation_diagnostics,
    level_set_body,
    moment_vector_fn,
    polytopal_outer_approx,
)
from src.layer_cake import QuadratureConfig, TailBound, unit_ball_volume
from src.log_concave import characteristic_fn, exp_cone_fn, translate
from src.polytope_core import (
    box,
    cube,
    direction_net,
    support_many,
    t_lambda,
    translate as translate_body,
    unit_vector,
)


class TestConeClosedForms:
    """e^{−qℓ_T} 의 구적값이 닫힌 꼴과 일치하는지"""

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("q", [0.5, 1.0, 2.0])
    def test_volume(self, n, lam, q):
        """V_n(e^{−qℓ_{T_λ}}) = λ/qⁿ"""
        f = exp_cone_fn(t_lambda(lam, n))
        expected = lam / q ** n
        assert abs(Vn_pow(f, q) - expected) <= 1e-6 * expected

    @pytest.mark.parametrize("lam", [0.5, 2.0])
    @pytest.mark.parametrize("q", [1.0, 2.0])
    def test_moment(self, lam, q):
        """m(e^{−qℓ_{T_λ}})·e₁ = λ²/q⁴ (n = 3)"""
        f = exp_cone_fn(t_lambda(lam, 3))
        expected = lam ** 2 / q ** 4
        assert abs(moment_vector_fn(f, q)[0] - expected) <= 1e-6 * expected

    def test_level_set_body(self):
        """h([e^{−qℓ_K}], z) = h(K, z)/q"""
        K = cube(3, -1.0, 2.0)
        q = 1.5
        S = level_set_body(exp_cone_fn(K), q)
        dirs = direction_net(3, 20, seed=4)
        assert np.allclose(S.query_many(dirs), support_many(K, dirs) / q, rtol=1e-6, atol=1e-9)
        assert S.degree == q

    def test_closed_form_dictionary(self):
        K = t_lambda(2.0, 3)
        forms = cone_closed_forms(K, 2.0, unit_vector(3, 0))
        assert abs(forms["vn"] - 2.0 / 8.0) < 1e-12
        assert abs(forms["lsb"] - 1.0) < 1e-12
        assert abs(forms["mv"][0] - 4.0 / 16.0) < 1e-12

    def test_closed_form_requires_origin(self):
        with pytest.raises(OriginNotInBodyError):
            cone_closed_forms(translate_body(cube(3), [1.0, 1.0, 1.0]), 1.0, unit_vector(3, 0))


class TestCharacteristicFunctions:
    """s·χ_K 는 적분 없이 정확"""

    def test_power_scaling(self):
        """V_n((sχ_K)^q) = s^q V_n(K)"""
        K = box([0, 0, 0], [2, 1, 1])
        f = characteristic_fn(K, s=3.0)
        assert abs(Vn_pow(f, 2.0) - 9.0 * 2.0) < 1e-10
        S = level_set_body(f, 2.0)
        assert abs(S.query(unit_vector(3, 0)) - 9.0 * 2.0) < 1e-10

    def test_translated_cube_moment(self):
        """m(χ_{[0,1]³+e₁}) = (3/2, 1/2, 1/2)"""
        f = translate(characteristic_fn(cube(3)), unit_vector(3, 0))
        assert np.allclose(moment_vector_fn(f, 1.0), [1.5, 0.5, 0.5], atol=1e-12)

    def test_v0_any_exponent(self):
        f = characteristic_fn(cube(3), s=2.0)
        assert V0(f) == pytest.approx(2.0)
        assert V0_pow(f, -1.0) == pytest.approx(0.5)
        assert V0_pow(exp_cone_fn(cube(3, -1.0, 1.0)), -3.0) == pytest.approx(1.0)

    def test_nonpositive_q_rejected(self):
        with pytest.raises(ParameterError):
            Vn_pow(characteristic_fn(cube(3)), 0.0)


class TestDiagnostics:
    """구적 진단 테스트"""

    def test_diagnostic_keys(self):
        diag = evaluation_diagnostics(exp_cone_fn(t_lambda(1.0, 3)), 1.0)
        assert set(diag) == {"panels", "subdivisions", "horizon", "tail_estimate", "converged"}
        assert diag["converged"]
        assert diag["tail_estimate"] <= 1e-9 * 1.01
        assert diag["horizon"] > 0

    def test_custom_config_agrees(self):
        f = exp_cone_fn(t_lambda(1.0, 3))
        coarse = Vn_pow(f, 1.0, QuadratureConfig(rel_tol=1e-7, gauss_nodes=12))
        assert abs(coarse - 1.0) < 1e-5

    def test_invalid_config(self):
        with pytest.raises(ParameterError):
            QuadratureConfig(rel_tol=0.0)
        with pytest.raises(ParameterError):
            QuadratureConfig(gauss_nodes=1)

    def test_unit_ball_volume(self):
        assert abs(unit_ball_volume(2) - math.pi) < 1e-12
        assert abs(unit_ball_volume(3) - 4.0 * math.pi / 3.0) < 1e-12

    def test_tail_bound(self):
        tail = TailBound.from_cone_bound(ConeBound(a=1.0, b=-1.0), 3)
        assert abs(tail.bound(1.0) - unit_ball_volume(3)) < 1e-12
        with pytest.raises(ParameterError):
            tail.bound(10.0)
        s_max = tail.horizon(1.0, 0.0, 1e-9)
        assert tail.relative_tail(1.0, 0.0, s_max) <= 1e-9 * 1.01


class TestOuterApproximation:
    """다면체 외부 근사 테스트"""

    def test_cube_exact_on_axes(self):
        S = SupportEvaluator.of_body(cube(3))
        body = polytopal_outer_approx(S, direction_net(3, 30, seed=0))
        assert abs(body.volume - 1.0) < 1e-6

    def test_contains_true_body(self):
        K = t_lambda(2.0, 3)
        body = SupportEvaluator.of_body(K).materialize(direction_net(3, 40, seed=1))
        for v in K.vertices:
            assert body.contains(v)

    def test_not_positively_spanning(self):
        with pytest.raises(NotPositivelySpanningError):
            polytopal_outer_approx(SupportEvaluator.of_body(cube(3)), np.eye(3))

    def test_combination_and_reflection(self):
        """h(K + 2L, z) 와 h(−K, z) = h(K, −z)"""
        K, L = cube(3), t_lambda(1.0, 3)
        dirs = direction_net(3, 12, seed=2)
        S = SupportEvaluator.combine([SupportEvaluator.of_body(K), SupportEvaluator.of_body(L)], [1.0, 2.0])
        assert np.allclose(S.query_many(dirs), support_many(K, dirs) + 2.0 * support_many(L, dirs))
        assert np.allclose(SupportEvaluator.of_body(K).reflected().query_many(dirs), support_many(K, -dirs))
        x = np.array([1.0, -2.0, 0.5])
        assert abs(SupportEvaluator.point_mass(x).query([1.0, 1.0, 1.0]) + 0.5) < 1e-12
        assert SupportEvaluator.zero(3).query([1.0, 0.0, 0.0]) == 0.0


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
