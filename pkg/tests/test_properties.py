"""
기하 연산과 범함수의 속성 기반 테스트 (hypothesis)
"""

import math
import pytest
import numpy as np
import sys
import os
from hypothesis import given, settings, strategies as st

# 프로젝트 루트를 Python 경로에 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.convex_fn import PLConvexFunction, cone_fn, evaluate, intersect_domain, pointwise_max, pointwise_min
from src.functionals import Vn_pow, level_set_body
from src.log_concave import LogConcaveFunction, exp_cone_fn, scale
from src.pair_families import random_body, split_body
from src.polytope_core import (
    HalfSpace,
    Polytope,
    clip_halfspace,
    direction_net,
    hausdorff_distance,
    minkowski_sum,
    moment_vector,
    support,
    support_many,
    t_lambda,
    translate,
    unit_vector,
)


FAST = settings(max_examples=25, deadline=None, derandomize=True)
SLOW = settings(max_examples=8, deadline=None, derandomize=True)


@st.composite
def bodies(draw, n=3):
    """원점을 내부에 포함하는 무작위 다면체"""
    seed = draw(st.integers(min_value=0, max_value=2 ** 31 - 1))
    return random_body(np.random.default_rng(seed), n)


@st.composite
def split_bodies(draw, n=3):
    """(B, K, L): K ∪ L = B, 원점은 K ∩ L 의 내부"""
    seed = draw(st.integers(min_value=0, max_value=2 ** 31 - 1))
    rng = np.random.default_rng(seed)
    B = random_body(rng, n)
    K, L = split_body(rng, B)
    return B, K, L


vectors = st.lists(st.floats(min_value=-3.0, max_value=3.0), min_size=3, max_size=3).map(np.array)


class TestPolytopeProperties:
    """다면체 연산 속성"""

    @FAST
    @given(bodies(), bodies())
    def test_support_is_additive(self, K, L):
        dirs = direction_net(3, 30, seed=0)
        assert np.allclose(support_many(minkowski_sum(K, L), dirs), support_many(K, dirs) + support_many(L, dirs), atol=1e-9)

    @FAST
    @given(bodies(), vectors)
    def test_moment_translation(self, K, x):
        """m(K + x) = m(K) + V(K)x"""
        assert np.allclose(moment_vector(translate(K, x)), moment_vector(K) + K.volume * x, atol=1e-9)

    @FAST
    @given(bodies())
    def test_hull_of_vertices_is_same_body(self, K):
        assert hausdorff_distance(Polytope(K.vertices), K) < 1e-9

    @FAST
    @given(split_bodies())
    def test_split_covers_body(self, parts):
        B, K, L = parts
        assert K.contains([0.0, 0.0, 0.0]) and L.contains([0.0, 0.0, 0.0])
        assert K.volume + L.volume >= B.volume - 1e-9
        assert K.volume <= B.volume + 1e-9 and L.volume <= B.volume + 1e-9


class TestConeFunctionProperties:
    """원뿔 함수 속성"""

    @FAST
    @given(bodies(), vectors, st.floats(min_value=0.1, max_value=5.0))
    def test_positive_homogeneity(self, K, x, t):
        """ℓ_K(tx) = tℓ_K(x)"""
        u = cone_fn(K)
        assert abs(evaluate(u, t * x) - t * evaluate(u, x)) <= 1e-9 * max(1.0, t * evaluate(u, x))

    @FAST
    @given(split_bodies(), vectors)
    def test_lattice_of_split_cones(self, parts, x):
        """min(ℓ_K, ℓ_L) = ℓ_{K∪L}, max(ℓ_K, ℓ_L) = ℓ_{K∩L}"""
        B, K, L = parts
        uK, uL = cone_fn(K), cone_fn(L)
        meet = pointwise_min(uK, uL)
        assert isinstance(meet, PLConvexFunction)
        assert abs(evaluate(meet, x) - evaluate(cone_fn(B), x)) <= 1e-8 * max(1.0, evaluate(cone_fn(B), x))
        join = pointwise_max(uK, uL)
        expected = max(evaluate(uK, x), evaluate(uL, x))
        assert abs(evaluate(join, x) - expected) <= 1e-8 * max(1.0, expected)


class TestFunctionalProperties:
    """범함수 속성"""

    @SLOW
    @given(st.floats(min_value=0.25, max_value=4.0), st.floats(min_value=0.25, max_value=4.0))
    def test_cone_volume_closed_form(self, lam, q):
        """V_n(e^{−qℓ_{T_λ}}) = λ/qⁿ"""
        value = Vn_pow(exp_cone_fn(t_lambda(lam, 3)), q)
        assert abs(value - lam / q ** 3) <= 1e-6 * lam / q ** 3

    @SLOW
    @given(bodies(), st.floats(min_value=0.2, max_value=5.0), st.floats(min_value=0.5, max_value=2.0))
    def test_level_set_body_scaling(self, K, s, q):
        """[(sf)^q] = s^q [f^q]"""
        f = exp_cone_fn(K)
        dirs = direction_net(3, 12, seed=1)
        base = level_set_body(f, q).query_many(dirs)
        scaled = level_set_body(scale(f, s), q).query_many(dirs)
        assert np.allclose(scaled, s ** q * base, rtol=1e-12, atol=1e-12)
        assert np.allclose(base, support_many(K, dirs) / q, rtol=1e-6, atol=1e-9)

    @pytest.mark.slow
    @SLOW
    @given(bodies(), st.floats(min_value=0.3, max_value=0.9))
    def test_clipped_cone_volume_bounds(self, K, fraction):
        """e^{−1}V(K ∩ H) ≤ ∫_H e^{−ℓ_K} ≤ ∫ e^{−ℓ_K} (패널이 여러 개인 경우)"""
        e1 = unit_vector(3, 0)
        cut = HalfSpace(e1, fraction * support(K, e1))
        value = Vn_pow(LogConcaveFunction(intersect_domain(cone_fn(K), [cut])), 1.0)
        full = Vn_pow(exp_cone_fn(K), 1.0)
        assert math.exp(-1.0) * clip_halfspace(K, cut).volume - 1e-9 <= value <= full + 1e-7


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
