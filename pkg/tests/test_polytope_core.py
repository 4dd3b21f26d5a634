"""
polytope_core 유닛 테스트
"""

import math
import pytest
import numpy as np
import sys
import os

# 프로젝트 루트를 Python 경로에 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.exceptions import DimensionMismatchError, GeometryError, ParameterError, SingularMapError, TruncationError
from src.polytope_core import (
    EMPTY,
    HalfSpace,
    LinearMap,
    Polytope,
    box,
    clip_halfspace,
    cross_polytope,
    cube,
    difference_body,
    direction_net,
    halfspace_intersection,
    hausdorff_distance,
    hull,
    linear_image,
    minkowski_sum,
    moment_body_support,
    moment_vector,
    point,
    point_to_body_distance,
    random_sln,
    reflect,
    segment,
    support,
    support_many,
    t_lambda,
    translate,
    unit_vector,
    vertices_from_halfspaces,
    volume,
)


class TestPolytopeBasics:
    """다면체 생성과 축약 테스트"""

    def test_interior_points_are_dropped(self):
        """내부 점은 꼭짓점에서 제외"""
        pts = np.vstack([cube(3).vertices, [[0.5, 0.5, 0.5], [0.2, 0.3, 0.4]]])
        P = Polytope(pts)
        assert len(P.vertices) == 8
        assert P.is_full_dimensional

    def test_lower_dimensional_segment(self):
        """선분은 아핀 차원 1, 부피 0"""
        S = segment([0, 0, 0], [1, 0, 0])
        assert S.affine_dim == 1
        assert volume(S) == 0.0
        assert S.contains([0.5, 0.0, 0.0])
        assert not S.contains([0.5, 0.1, 0.0])

    def test_empty_hull(self):
        """빈 입력의 볼록포는 EMPTY"""
        assert hull([]) is EMPTY
        assert support(EMPTY, [1.0, 0.0]) == 0.0
        assert np.all(support_many(EMPTY, np.eye(3)) == 0.0)

    def test_mixed_dimensions_rejected(self):
        """차원이 섞인 입력은 거부"""
        with pytest.raises(DimensionMismatchError):
            hull([[0, 0], [1, 0, 0]])

    def test_nonpositive_lambda_rejected(self):
        with pytest.raises(ParameterError):
            t_lambda(0.0, 3)


class TestMeasures:
    """부피, 모멘트, 지지함수 테스트"""

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 3.0])
    def test_t_lambda_values(self, lam):
        """T_λ 의 h(T,e₁) = λ, h(−T,e₁) = 0, m·e₁ = h(MT,e₁) = λ²/24 (n = 3)"""
        T = t_lambda(lam, 3)
        e1 = unit_vector(3, 0)
        assert abs(support(T, e1) - lam) < 1e-12
        assert abs(support(reflect(T), e1)) < 1e-12
        assert abs(moment_vector(T)[0] - lam ** 2 / 24) < 1e-10
        assert abs(moment_body_support(T, e1) - lam ** 2 / 24) < 1e-10

    def test_t_lambda_volume(self):
        assert abs(t_lambda(2.0, 3).volume - 2.0 / 6.0) < 1e-12
        assert abs(t_lambda(1.0, 4).volume - 1.0 / 24.0) < 1e-12

    @pytest.mark.parametrize("n,r", [(2, 1.0), (3, 1.0), (3, 0.5), (4, 2.0)])
    def test_cross_polytope_volume(self, n, r):
        """V = 2ⁿrⁿ/n!, h(·, e₁) = r"""
        C = cross_polytope(n, r)
        assert abs(C.volume - (2 * r) ** n / math.factorial(n)) < 1e-10
        assert abs(support(C, unit_vector(n, 0)) - r) < 1e-12
        assert np.allclose(moment_vector(C), 0.0, atol=1e-12)
        with pytest.raises(ParameterError):
            cross_polytope(n, 0.0)

    def test_translated_cube_moment(self):
        """m([0,1]³ + e₁) = (3/2, 1/2, 1/2)"""
        K = translate(cube(3), unit_vector(3, 0))
        assert np.allclose(moment_vector(K), [1.5, 0.5, 0.5], atol=1e-12)

    def test_moment_translation_rule(self):
        """m(K + x) = m(K) + V(K)x"""
        K = t_lambda(1.5, 3)
        x = np.array([0.3, -0.7, 1.1])
        assert np.allclose(moment_vector(translate(K, x)), moment_vector(K) + K.volume * x, atol=1e-12)

    def test_moment_body_probe_box(self):
        """P = [−1,2]×[0,1]² 에서 h(MP,e₁) = 5/2, h(M(P+e₁),e₁) = 9/2, h(M(P−e₁),e₁) = 5/2"""
        e1 = unit_vector(3, 0)
        P = box([-1, 0, 0], [2, 1, 1])
        assert abs(moment_body_support(P, e1) - 2.5) < 1e-10
        assert abs(moment_body_support(translate(P, e1), e1) - 4.5) < 1e-10
        assert abs(moment_body_support(translate(P, -e1), e1) - 2.5) < 1e-10

    def test_minkowski_sum_and_difference_body(self):
        """정사각형 두 개의 합은 넓이 4, 삼각형 차체는 넓이 6배"""
        assert abs(minkowski_sum(cube(2), cube(2)).volume - 4.0) < 1e-12
        T = t_lambda(1.0, 2)
        assert abs(difference_body(T).volume - 6.0 * T.volume) < 1e-12

    def test_support_of_sum_is_sum_of_supports(self):
        K, L = t_lambda(2.0, 3), cube(3, -1.0, 0.5)
        dirs = direction_net(3, 40, seed=3)
        assert np.allclose(support_many(minkowski_sum(K, L), dirs), support_many(K, dirs) + support_many(L, dirs))


class TestClippingAndDistance:
    """반공간 절단과 하우스도르프 거리 테스트"""

    def test_clip_halves_cube(self):
        half = clip_halfspace(cube(3), HalfSpace(unit_vector(3, 0), 0.5))
        assert abs(half.volume - 0.5) < 1e-12

    def test_clip_outside_is_empty(self):
        assert clip_halfspace(cube(3), HalfSpace(unit_vector(3, 0), -1.0)) is EMPTY

    def test_point_to_body_distance(self):
        assert abs(point_to_body_distance([2.0, 0.5, 0.5], cube(3)) - 1.0) < 1e-10
        assert point_to_body_distance([0.5, 0.5, 0.5], cube(3)) == 0.0

    def test_hausdorff_of_translate(self):
        K = cube(3)
        assert abs(hausdorff_distance(K, translate(K, [0.5, 0.0, 0.0])) - 0.5) < 1e-10
        assert hausdorff_distance(EMPTY, EMPTY) == 0.0
        assert math.isinf(hausdorff_distance(K, EMPTY))


class TestHalfspaceConversion:
    """H→V 변환 테스트"""

    def test_cube_from_facets(self):
        normals, offsets = cube(3).facet_arrays
        body = halfspace_intersection(normals, offsets)
        assert abs(body.volume - 1.0) < 1e-12

    def test_infeasible_is_empty(self):
        normals = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        offsets = np.array([-1.0, 0.0, 1.0, 1.0])
        assert halfspace_intersection(normals, offsets) is EMPTY

    def test_unbounded_hits_box(self):
        """유계가 아닌 교집합은 절단 상자에 닿아 TruncationError"""
        with pytest.raises(TruncationError):
            vertices_from_halfspaces(np.array([[-1.0, 0.0], [0.0, -1.0]]), np.zeros(2), bounded=False)


class TestLinearMaps:
    """선형사상 테스트"""

    def test_shear_is_unimodular(self):
        phi = LinearMap.shear(3, 0, 2, 1.7)
        assert phi.det == 1.0
        assert abs(linear_image(t_lambda(1.0, 3), phi).volume - 1.0 / 6.0) < 1e-12

    def test_random_sln_deterministic(self):
        a, b = random_sln(5, 4, 3), random_sln(5, 4, 3)
        assert np.array_equal(a.matrix, b.matrix)
        assert a.det == 1.0
        assert abs(np.linalg.det(a.matrix) - 1.0) < 1e-9

    def test_singular_rejected(self):
        with pytest.raises(SingularMapError):
            LinearMap([[1.0, 2.0], [2.0, 4.0]])

    def test_image_support_rule(self):
        """h(φK, z) = h(K, φᵀz)"""
        phi = random_sln(2, 3, 3)
        K = t_lambda(2.0, 3)
        dirs = direction_net(3, 30, seed=1)
        assert np.allclose(support_many(linear_image(K, phi), dirs), support_many(K, phi.transpose().apply(dirs)))

    def test_bad_shear_indices(self):
        with pytest.raises(GeometryError):
            LinearMap.shear(3, 1, 1, 2.0)
        with pytest.raises(DimensionMismatchError):
            LinearMap.shear(3, 0, 5, 1.0)
        with pytest.raises(DimensionMismatchError):
            LinearMap.shear(3, -1, 0, 1.0)


class TestDirectionNet:
    """방향망 테스트"""

    def test_axes_first_and_unit_norm(self):
        dirs = direction_net(3, 50, seed=0)
        assert dirs.shape == (50, 3)
        assert np.allclose(dirs[:3], np.eye(3))
        assert np.allclose(dirs[3:6], -np.eye(3))
        assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0)

    def test_deterministic(self):
        assert np.array_equal(direction_net(4, 30, seed=2), direction_net(4, 30, seed=2))

    def test_point_body(self):
        P = point([1.0, 2.0, 3.0])
        assert P.affine_dim == 0
        assert abs(support(P, [1.0, 1.0, 1.0]) - 6.0) < 1e-12


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
