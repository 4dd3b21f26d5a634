"""
log_concave 유닛 테스트
"""

import math
import pytest
import numpy as np
import sys
import os

# 프로젝트 루트를 Python 경로에 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.convex_fn import PLConvexFunction, cone_fn
from src.exceptions import EmptyDomainError, NotCoerciveError, ParameterError
from src.log_concave import (
    LogConcaveFunction,
    NotLogConcave,
    characteristic_fn,
    evaluate,
    exp_cone_fn,
    from_convex,
    hypo_convergence_diagnostic,
    log_max_value,
    max_value,
    pointwise_max,
    pointwise_min,
    power,
    scale,
    shift_exponent,
    superlevel_set,
    to_convex,
    translate,
)
from src.polytope_core import EMPTY, box, cube, t_lambda, translate as translate_body


class TestConstruction:
    """생성 테스트"""

    def test_exp_cone_values(self):
        f = exp_cone_fn(t_lambda(1.0, 3), q=2.0)
        assert evaluate(f, [0.0, 0.0, 0.0]) == 1.0
        assert abs(evaluate(f, [0.5, 0.0, 0.0]) - math.exp(-1.0)) < 1e-12
        assert evaluate(f, [-1.0, 0.0, 0.0]) == 0.0

    def test_characteristic(self):
        f = characteristic_fn(cube(3), s=2.5)
        assert evaluate(f, [0.5, 0.5, 0.5]) == 2.5
        assert max_value(f) == 2.5

    def test_non_coercive_rejected(self):
        u = PLConvexFunction(np.array([[1.0, 0.0, 0.0, 0.0]]))
        with pytest.raises(NotCoerciveError):
            from_convex(u)

    def test_invalid_scale_and_power(self):
        f = exp_cone_fn(cube(3, -1.0, 1.0))
        with pytest.raises(ParameterError):
            scale(f, 0.0)
        with pytest.raises(ParameterError):
            power(f, -1.0)


class TestOperations:
    """변환과 레벨 집합 테스트"""

    def test_scale_and_power_are_exact(self):
        """s·f 와 f^q 는 표현 수준에서 정확"""
        f = exp_cone_fn(cube(3, -1.0, 1.0))
        x = [0.3, -0.2, 0.1]
        assert abs(evaluate(scale(f, 3.0), x) - 3.0 * evaluate(f, x)) < 1e-14
        assert abs(evaluate(power(scale(f, 2.0), 1.5), x) - (2.0 * evaluate(f, x)) ** 1.5) < 1e-12

    def test_effective_base(self):
        """f = s e^{−pu} 의 지수는 p·u − log s"""
        f = LogConcaveFunction(cone_fn(cube(3, -1.0, 1.0)), scale=2.0, power=3.0)
        w = to_convex(f)
        x = np.array([0.4, 0.1, -0.2])
        assert abs(w(x) - (3.0 * 0.4 - math.log(2.0))) < 1e-12
        assert abs(log_max_value(f) - math.log(2.0)) < 1e-12

    def test_translate_and_shift_exponent(self):
        f = exp_cone_fn(cube(3, -1.0, 1.0))
        x = np.array([1.0, 0.0, 0.0])
        assert abs(evaluate(translate(f, x), [1.5, 0.0, 0.0]) - math.exp(-0.5)) < 1e-12
        assert abs(max_value(shift_exponent(f, 2.0)) - math.exp(-2.0)) < 1e-12

    def test_superlevel_set(self):
        """{e^{−ℓ_K} ≥ e^{−2}} = 2K"""
        K = t_lambda(1.0, 3)
        level = superlevel_set(exp_cone_fn(K), math.exp(-2.0))
        assert abs(level.volume - 8.0 * K.volume) < 1e-10
        assert superlevel_set(characteristic_fn(cube(3)), 2.0) is EMPTY
        with pytest.raises(ParameterError):
            superlevel_set(characteristic_fn(cube(3)), 0.0)


class TestLattice:
    """f∨g, f∧g 테스트"""

    def test_max_of_overlapping_characteristics(self):
        K = box([0, 0, 0], [0.7, 1, 1])
        L = box([0.3, 0, 0], [1, 1, 1])
        join = pointwise_max(characteristic_fn(K), characteristic_fn(L))
        assert isinstance(join, LogConcaveFunction)
        assert evaluate(join, [0.9, 0.5, 0.5]) == 1.0
        meet = pointwise_min(characteristic_fn(K), characteristic_fn(L))
        assert evaluate(meet, [0.5, 0.5, 0.5]) == 1.0
        assert evaluate(meet, [0.9, 0.5, 0.5]) == 0.0

    def test_max_of_disjoint_is_not_log_concave(self):
        far = translate_body(cube(3), [3.0, 0.0, 0.0])
        join = pointwise_max(characteristic_fn(cube(3)), characteristic_fn(far))
        assert isinstance(join, NotLogConcave)
        assert join.witness is not None

    def test_min_of_disjoint_raises(self):
        far = translate_body(cube(3), [3.0, 0.0, 0.0])
        with pytest.raises(EmptyDomainError):
            pointwise_min(characteristic_fn(cube(3)), characteristic_fn(far))

    def test_different_heights_not_log_concave(self):
        """높이가 다른 겹치는 특성 함수의 최댓값은 로그 오목이 아님"""
        K = box([0, 0, 0], [0.7, 1, 1])
        L = box([0.3, 0, 0], [1, 1, 1])
        join = pointwise_max(characteristic_fn(K, s=1.0), characteristic_fn(L, s=2.0))
        assert isinstance(join, NotLogConcave)


class TestHypoConvergence:
    """하이포 수렴 진단 테스트"""

    def test_scaled_simplices(self):
        target = exp_cone_fn(t_lambda(1.0, 3))
        seq = [exp_cone_fn(t_lambda(1.0 + 1.0 / k, 3)) for k in range(1, 5)]
        report = hypo_convergence_diagnostic(seq, target, [math.exp(-1.0), math.exp(-2.0)])
        assert report.epi.all_monotone
        assert np.allclose(sorted(report.final_gaps), [0.25, 0.5], atol=1e-8)
        assert set(np.round(report.table["t"], 12)) == {round(math.exp(-1.0), 12), round(math.exp(-2.0), 12)}


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
