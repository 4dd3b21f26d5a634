"""
convex_fn 유닛 테스트
"""

import math
import pytest
import numpy as np
import sys
import os

# 프로젝트 루트를 Python 경로에 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.convex_fn import (
    ConeBound,
    NotCoercive,
    NotConvex,
    PLConvexFunction,
    add_constant,
    coercivity_check,
    cone_fn,
    epi_convergence_diagnostic,
    epi_vertex_levels,
    evaluate,
    indicator_fn,
    intersect_domain,
    min_value,
    minimize,
    pointwise_max,
    pointwise_min,
    precompose_linear,
    scale_values,
    sublevel_set,
    translate_fn,
)
from src.exceptions import EmptyDomainError, OriginNotInBodyError
from src.polytope_core import (
    EMPTY,
    HalfSpace,
    Polytope,
    box,
    cube,
    hausdorff_distance,
    linear_image,
    random_sln,
    t_lambda,
    translate,
    unit_vector,
)


class TestConeAndIndicator:
    """원뿔 함수와 지시 함수 테스트"""

    def test_cone_function_gauge_values(self):
        """ℓ_{T_2}: 꼭짓점에서 1, 정의역 밖에서 +∞"""
        u = cone_fn(t_lambda(2.0, 3))
        assert abs(evaluate(u, [2.0, 0.0, 0.0]) - 1.0) < 1e-12
        assert abs(evaluate(u, [1.0, 0.5, 0.0]) - 1.0) < 1e-12
        assert abs(evaluate(u, [0.5, 0.25, 0.25]) - 0.75) < 1e-12
        assert math.isinf(evaluate(u, [-1.0, 0.0, 0.0]))

    def test_cone_sublevel_is_dilate(self):
        """{ℓ_K ≤ t} = tK"""
        K = t_lambda(2.0, 3)
        level = sublevel_set(cone_fn(K), 2.0)
        assert abs(level.volume - 8.0 * K.volume) < 1e-10
        assert hausdorff_distance(level, Polytope(2.0 * K.vertices)) < 1e-9

    def test_cone_requires_origin(self):
        with pytest.raises(OriginNotInBodyError):
            cone_fn(translate(cube(3), [1.0, 1.0, 1.0]))

    def test_indicator_values(self):
        u = indicator_fn(cube(3))
        assert evaluate(u, [0.5, 0.5, 0.5]) == 0.0
        assert math.isinf(evaluate(u, [1.5, 0.5, 0.5]))
        assert min_value(u) == 0.0

    def test_minimum_and_argmin(self):
        """원뿔 함수 최솟값 0, 평행이동하면 최소점도 이동"""
        u = translate_fn(cone_fn(cube(3, -1.0, 1.0)), [0.5, 0.0, 0.0])
        value, x = minimize(u)
        assert abs(value) < 1e-12
        assert np.allclose(x, [0.5, 0.0, 0.0], atol=1e-9)


class TestTransforms:
    """변환 테스트"""

    def test_translate(self):
        u = cone_fn(cube(3, -1.0, 1.0))
        x = np.array([0.3, -0.2, 0.1])
        v = translate_fn(u, x)
        y = np.array([0.7, 0.4, -0.5])
        assert abs(evaluate(v, y) - evaluate(u, y - x)) < 1e-12

    def test_cone_of_linear_image(self):
        """ℓ_{φK} = ℓ_K ∘ φ⁻¹"""
        K = cube(3, -1.0, 2.0)
        phi = random_sln(7, 3, 3)
        lhs = cone_fn(linear_image(K, phi))
        rhs = precompose_linear(cone_fn(K), phi)
        rng = np.random.default_rng(0)
        for y in rng.normal(size=(10, 3)):
            assert abs(evaluate(lhs, y) - evaluate(rhs, y)) < 1e-9

    def test_scale_and_shift(self):
        u = cone_fn(t_lambda(1.0, 3))
        y = [0.2, 0.3, 0.1]
        assert abs(evaluate(scale_values(u, 2.5), y) - 2.5 * evaluate(u, y)) < 1e-12
        assert abs(evaluate(add_constant(u, -1.5), y) - (evaluate(u, y) - 1.5)) < 1e-12

    def test_intersect_domain(self):
        """epi u ∩ {x₁ ≤ 1}: 정의역 제한"""
        u = cone_fn(t_lambda(4.0, 3))
        v = intersect_domain(u, [HalfSpace(unit_vector(3, 0), 1.0)])
        assert abs(evaluate(v, [1.0, 0.0, 0.0]) - 0.25) < 1e-12
        assert math.isinf(evaluate(v, [2.0, 0.0, 0.0]))

    def test_intersect_domain_empty(self):
        with pytest.raises(EmptyDomainError):
            intersect_domain(indicator_fn(cube(3)), np.array([[1.0, 0.0, 0.0]]), np.array([-1.0]))

    def test_canonical_equality(self):
        """조각 순서가 달라도 같은 함수"""
        a = PLConvexFunction(np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]))
        b = PLConvexFunction(np.array([[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]))
        assert a == b
        assert hash(a) == hash(b)


class TestLattice:
    """격자 연산 테스트"""

    def test_max_of_disjoint_domains(self):
        """정의역이 겹치지 않으면 u∨v 는 proper 가 아님"""
        with pytest.raises(EmptyDomainError):
            pointwise_max(indicator_fn(cube(3)), indicator_fn(translate(cube(3), [3.0, 0.0, 0.0])))

    def test_min_of_overlapping_pieces(self):
        """겹치는 두 조각의 지시 함수 최솟값은 합집합의 지시 함수"""
        K = box([0, 0, 0], [0.6, 1, 1])
        L = box([0.4, 0, 0], [1, 1, 1])
        w = pointwise_min(indicator_fn(K), indicator_fn(L))
        assert isinstance(w, PLConvexFunction)
        assert evaluate(w, [0.1, 0.5, 0.5]) == 0.0
        assert evaluate(w, [0.9, 0.5, 0.5]) == 0.0
        assert abs(sublevel_set(w, 0.0).volume - 1.0) < 1e-10

    def test_min_of_disjoint_is_not_convex(self):
        """떨어진 두 지시 함수의 최솟값은 볼록이 아님 (증거점 포함)"""
        w = pointwise_min(indicator_fn(cube(3)), indicator_fn(translate(cube(3), [3.0, 0.0, 0.0])))
        assert isinstance(w, NotConvex)
        assert w.witness is not None and len(w.witness) == 4

    def test_min_of_split_cones(self):
        """같은 몸체를 잘라 만든 두 원뿔 함수의 최솟값은 원래 원뿔 함수"""
        B = cube(3, -1.0, 1.0)
        e1 = unit_vector(3, 0)
        K = box([-1, -1, -1], [0.5, 1, 1])
        L = box([-0.5, -1, -1], [1, 1, 1])
        w = pointwise_min(cone_fn(K), cone_fn(L))
        assert isinstance(w, PLConvexFunction)
        for y in ([0.9, 0.1, 0.2], [-0.9, 0.3, -0.1], [0.2, 0.2, 0.2]):
            assert abs(evaluate(w, y) - evaluate(cone_fn(B), y)) < 1e-9
        assert abs(evaluate(pointwise_max(cone_fn(K), cone_fn(L)), 0.8 * e1) - 1.6) < 1e-9


class TestCoercivity:
    """강제성 판정 테스트"""

    def test_cone_bound_holds(self):
        u = translate_fn(cone_fn(t_lambda(2.0, 3)), [-0.2, -0.2, -0.2])
        bound = coercivity_check(u)
        assert isinstance(bound, ConeBound)
        assert bound.a > 0
        rng = np.random.default_rng(1)
        for y in rng.uniform(-0.2, 3.0, size=(40, 3)):
            value = evaluate(u, y)
            if math.isfinite(value):
                assert value > bound.lower(y)

    def test_bounded_domain_rule(self):
        bound = coercivity_check(indicator_fn(cube(3)))
        assert isinstance(bound, ConeBound)
        assert bound.a == 1.0
        assert abs(bound.b - (0.0 - math.sqrt(3.0) - 1.0)) < 1e-9

    def test_linear_function_not_coercive(self):
        u = PLConvexFunction(np.array([[1.0, 0.0, 0.0, 0.0]]))
        marker = coercivity_check(u)
        assert isinstance(marker, NotCoercive)
        assert not u.is_coercive
        assert min_value(u) == -math.inf


class TestLevels:
    """레벨 집합과 에피 꼭짓점 높이 테스트"""

    def test_sublevel_below_minimum_is_empty(self):
        assert sublevel_set(add_constant(cone_fn(cube(3, -1.0, 1.0)), 2.0), 1.0) is EMPTY

    def test_cone_has_single_vertex_level(self):
        levels = epi_vertex_levels(cone_fn(t_lambda(1.0, 3)), 5.0)
        assert np.allclose(levels, [0.0])

    def test_truncated_cone_levels(self):
        """x₁ ≤ 1 로 자른 ℓ_{T_4} 는 높이 0 과 ¼ 에서 조합 구조가 바뀜"""
        u = intersect_domain(cone_fn(t_lambda(4.0, 3)), [HalfSpace(unit_vector(3, 0), 1.0)])
        levels = epi_vertex_levels(u, 5.0)
        assert abs(levels[0]) < 1e-12
        assert np.any(np.abs(levels - 0.25) < 1e-9)


class TestEpiConvergence:
    """에피 수렴 진단 테스트"""

    def test_shrinking_simplices(self):
        """ℓ_{T_{1+1/k}} → ℓ_{T_1}: δ = t/k 로 단조 감소"""
        target = cone_fn(t_lambda(1.0, 3))
        seq = [cone_fn(t_lambda(1.0 + 1.0 / k, 3)) for k in range(1, 6)]
        report = epi_convergence_diagnostic(seq, target, [1.0, 2.0])
        assert report.all_monotone
        assert np.allclose(report.final_gaps, [1.0 / 5.0, 2.0 / 5.0], atol=1e-8)
        assert list(report.table.columns) == ["index", "t", "distance"]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
