"""
로그 오목 함수의 기하 범함수

V₀(f)^q = (max f)^q, V_n(f^q) = ∫ f^q, 레벨 집합 바디 [f^q] 의 지지함수,
모멘트 벡터 m(f^q) 를 레이어 케이크 적분으로 계산합니다.
f = s·e^{−p(u₀ + c)} 에서 s^q 와 e^{−qp·c} 는 적분 밖으로 빼내므로
배율·수직 이동에 대한 동차성은 표현 수준에서 정확합니다.
"""

import logging
import math
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from .exceptions import NotPositivelySpanningError, OriginNotInBodyError, ParameterError
from .layer_cake import QuadratureConfig, layer_profile
from .log_concave import LogConcaveFunction, log_max_value
from .polytope_core import (
    EPS_GEO,
    Body,
    Polytope,
    as_vector,
    halfspace_intersection,
    moment_vector,
    support_many,
)

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = QuadratureConfig()


class SupportEvaluator:
    """
    볼록체를 지지함수로만 다루는 지연 평가 객체

    Args:
        batch: (k, n) 방향 배열 → (k,) 지지함수 값
        dim: 공간 차원
        degree: 동차 차수 q (알 수 없으면 None)
        provenance: 출처 표시 문자열
        diagnostics: 구적 진단값
    """

    def __init__(
        self,
        batch: Callable[[np.ndarray], np.ndarray],
        dim: int,
        degree: Optional[float] = None,
        provenance: str = "",
        diagnostics: Optional[Dict[str, float]] = None,
    ):
        self._batch = batch
        self.dim = dim
        self.degree = degree
        self.provenance = provenance
        self.diagnostics = diagnostics or {}

    def query(self, z) -> float:
        return float(self.query_many(as_vector(z, self.dim)[None, :])[0])

    def query_many(self, directions) -> np.ndarray:
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        return np.asarray(self._batch(directions), dtype=float).reshape(-1)

    def materialize(self, directions) -> Polytope:
        return polytopal_outer_approx(self, directions)

    @staticmethod
    def of_body(K: Body, provenance: str = "body") -> "SupportEvaluator":
        """고정된 다면체의 지지함수"""
        n = K.dim if isinstance(K, Polytope) else None
        if n is None:
            raise ParameterError("공집합 지지함수에는 SupportEvaluator.zero(n) 을 사용하세요.")
        return SupportEvaluator(lambda d: support_many(K, d), n, degree=None, provenance=provenance)

    @staticmethod
    def zero(n: int) -> "SupportEvaluator":
        return SupportEvaluator(lambda d: np.zeros(d.shape[0]), n, degree=None, provenance="zero")

    @staticmethod
    def point_mass(x, provenance: str = "point") -> "SupportEvaluator":
        """한 점 {x} 의 지지함수 z ↦ x·z"""
        x = as_vector(x)
        return SupportEvaluator(lambda d: d @ x, x.shape[0], provenance=provenance)

    @staticmethod
    def combine(terms: Sequence["SupportEvaluator"], coeffs: Sequence[float], provenance: str = "") -> "SupportEvaluator":
        """
        양의 계수 민코프스키 결합 Σ c_i S_i

        음의 계수는 한 점 (모멘트 벡터) 항에만 허용됩니다 (호출자 책임).
        """
        dim = terms[0].dim
        pairs = [(float(c), t) for c, t in zip(coeffs, terms) if c != 0.0]

        def batch(d: np.ndarray) -> np.ndarray:
            total = np.zeros(d.shape[0])
            for c, t in pairs:
                total += c * t.query_many(d)
            return total

        diagnostics: Dict[str, float] = {}
        for _, t in pairs:
            diagnostics.update(t.diagnostics)
        return SupportEvaluator(batch, dim, provenance=provenance, diagnostics=diagnostics)

    def reflected(self) -> "SupportEvaluator":
        """−S: z ↦ h(S, −z)"""
        return SupportEvaluator(
            lambda d: self.query_many(-d), self.dim, degree=self.degree,
            provenance=f"-({self.provenance})", diagnostics=self.diagnostics,
        )

    def __repr__(self) -> str:
        return f"SupportEvaluator(n={self.dim}, 차수={self.degree}, 출처='{self.provenance}')"


def _check_q(q: float):
    if not q > 0:
        raise ParameterError(f"q 는 양수여야 합니다: {q}")


def _prefactor(f: LogConcaveFunction, q: float, shift: float, min_value: float) -> float:
    """s^q · e^{−qp(shift + min u₀)}"""
    return math.exp(q * math.log(f.scale) - q * f.power * (shift + min_value))


# ---------------------------------------------------------------------------
# 실수값 범함수
# ---------------------------------------------------------------------------

def V0(f: LogConcaveFunction) -> float:
    """V₀(f) = max f"""
    return math.exp(log_max_value(f))


def V0_pow(f: LogConcaveFunction, q: float) -> float:
    """V₀(f)^q (q 는 임의의 실수)"""
    return math.exp(q * log_max_value(f))


def Vn_pow(f: LogConcaveFunction, q: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """
    V_n(f^q) = ∫ f^q dx = Q ∫ V_n({u ≤ s}) e^{−Qs} ds (Q = q·p)

    Args:
        f: 로그 오목 함수
        q: 양의 지수
        config: 구적 설정
    """
    _check_q(q)
    profile, shift = layer_profile(f.base, config)
    rate = q * f.power
    return _prefactor(f, q, shift, profile.min_value) * profile.volume_integral(rate)


def moment_vector_fn(f: LogConcaveFunction, q: float, config: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """m(f^q) = ∫ x f^q dx"""
    _check_q(q)
    profile, shift = layer_profile(f.base, config)
    rate = q * f.power
    return _prefactor(f, q, shift, profile.min_value) * profile.moment_integral(rate)


def level_set_body(f: LogConcaveFunction, q: float, config: QuadratureConfig = DEFAULT_CONFIG) -> SupportEvaluator:
    """
    레벨 집합 바디 [f^q] 의 지지함수

    h([f^q], z) = ∫₀^∞ h({f^q ≥ t}, z) dt. s·χ_K 꼴이면 s^q h(K, z) 를 그대로 돌려줍니다.
    """
    _check_q(q)
    profile, shift = layer_profile(f.base, config)
    rate = q * f.power
    factor = _prefactor(f, q, shift, profile.min_value)

    def batch(directions: np.ndarray) -> np.ndarray:
        return factor * profile.support_integral(rate, directions)

    return SupportEvaluator(
        batch, f.dim, degree=q, provenance=f"level_set_body(q={q:g})",
        diagnostics=profile.diagnostics(rate),
    )


def evaluation_diagnostics(f: LogConcaveFunction, q: float, config: QuadratureConfig = DEFAULT_CONFIG) -> Dict[str, float]:
    """패널 수, 이분 횟수, 절단 높이, 꼬리 추정, 수렴 여부"""
    _check_q(q)
    profile, _ = layer_profile(f.base, config)
    return profile.diagnostics(q * f.power)


# ---------------------------------------------------------------------------
# 원뿔 함수 닫힌 꼴
# ---------------------------------------------------------------------------

def cone_closed_forms(K: Polytope, q: float, z) -> Dict[str, object]:
    """
    e^{−qℓ_K} 의 닫힌 꼴 값 ({ℓ_K ≤ s} = sK 와 감마 적분)

    Returns:
        {"vn": n!V_n(K)/qⁿ, "lsb": h(K,z)/q, "mv": (n+1)! m(K)/q^{n+1}}
    """
    _check_q(q)
    n = K.dim
    if not K.contains(np.zeros(n)):
        raise OriginNotInBodyError("원뿔 함수 닫힌 꼴은 0 ∈ K 에서만 정의됩니다.")
    z = as_vector(z, n)
    return {
        "vn": math.factorial(n) * K.volume / q ** n,
        "lsb": float(support_many(K, z[None, :])[0]) / q,
        "mv": math.factorial(n + 1) * moment_vector(K) / q ** (n + 1),
    }


# ---------------------------------------------------------------------------
# 다면체 외부 근사
# ---------------------------------------------------------------------------

def _check_positive_spanning(directions: np.ndarray):
    """{x : z·x ≤ 0 ∀z} = {0} 인지 2n 개의 LP 로 확인"""
    n = directions.shape[1]
    rhs = np.zeros(directions.shape[0])
    for j in range(n):
        for sign in (1.0, -1.0):
            cost = np.zeros(n)
            cost[j] = -sign
            res = linprog(cost, A_ub=directions, b_ub=rhs, bounds=[(-1.0, 1.0)] * n, method="highs")
            if res.status == 0 and -res.fun > EPS_GEO:
                raise NotPositivelySpanningError(
                    f"방향 집합이 ℝ^{n} 을 양으로 생성하지 않습니다 (좌표 {j}, 부호 {sign:+g})."
                )


def polytopal_outer_approx(S: SupportEvaluator, directions) -> Polytope:
    """
    ∩_z {x : x·z ≤ h(S, z)} (참 볼록체를 포함하는 다면체)

    오프셋에 반올림 여유를 더하므로 한 점 바디도 아주 작은 다면체로 나옵니다.
    """
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    directions = directions / np.linalg.norm(directions, axis=1)[:, None]
    _check_positive_spanning(directions)
    values = S.query_many(directions)
    slack = EPS_GEO * (1.0 + float(np.max(np.abs(values))))
    body = halfspace_intersection(directions, values + slack)
    if not isinstance(body, Polytope):
        raise NotPositivelySpanningError("외부 근사가 비어 있습니다 (지지값이 부선형이 아님).")
    logger.debug(f"외부 근사: 방향 {len(directions)}개, 꼭짓점 {len(body.vertices)}개")
    return body
