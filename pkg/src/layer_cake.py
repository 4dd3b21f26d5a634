"""
레이어 케이크 적분 엔진

∫ F({u ≤ s}) q e^{−qs} ds 꼴의 적분을 계산합니다 (F: 부피, 모멘트 벡터, 지지함수).
에피그래프 꼭짓점 높이 사이에서는 {u ≤ s} 의 꼭짓점이 s 에 대해 아핀이므로
부피는 n 차, 모멘트는 n+1 차 다항식입니다. 패널마다 체비쇼프 노드에서
하위 레벨 집합을 표본화하고, 추가 검사 노드로 보간을 확인한 뒤
가우스-르장드르(패널)와 가우스-라게르(꼬리) 구적으로 적분합니다.
"""

import logging
import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.special import gammaincc, gammainccinv, roots_laguerre, roots_legendre

from .convex_fn import (
    ConeBound,
    NotCoercive,
    PLConvexFunction,
    add_constant,
    coercivity_check,
    epi_vertex_levels,
    minimize,
    sublevel_set,
)
from .exceptions import NotCoerciveError, ParameterError
from .polytope_core import EMPTY, EPS_GEO, Body, support_many

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureConfig:
    """
    구적 설정

    Args:
        rel_tol: 꼬리 절단 상대 허용오차
        max_subdivisions: 보간 실패 시 패널 이분 최대 횟수 (전체 합)
        gauss_nodes: 부분 패널당 가우스-르장드르 노드 수
    """

    rel_tol: float = 1e-9
    max_subdivisions: int = 60
    gauss_nodes: int = 20

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ParameterError(f"rel_tol 은 양수여야 합니다: {self.rel_tol}")
        if self.max_subdivisions < 0:
            raise ParameterError(f"max_subdivisions 는 음수일 수 없습니다: {self.max_subdivisions}")
        if self.gauss_nodes < 2:
            raise ParameterError(f"gauss_nodes 는 2 이상이어야 합니다: {self.gauss_nodes}")


def unit_ball_volume(n: int) -> float:
    """n 차원 단위 공의 부피 π^{n/2}/Γ(n/2+1)"""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


@dataclass(frozen=True)
class TailBound:
    """
    원뿔 하한 u(x) > a|x| + b 에서 얻는 꼬리 지배 함수

    {u ≤ s} ⊂ B(0, (s−b)/a) 이므로 |h(m({u ≤ s}), z)| 와 V_n({u ≤ s}) 는
    v_n ((s−b)/a)^{n+1} (|z| ≤ 1, s − b ≥ 1) 로 지배됩니다.
    """

    a: float
    b: float
    n: int

    @staticmethod
    def from_cone_bound(bound: ConeBound, n: int) -> "TailBound":
        return TailBound(a=bound.a, b=bound.b, n=n)

    def bound(self, t: float) -> float:
        """레벨 t ∈ (0, e^{−b}] 에서의 지배값 (v_n/a^{n+1})(−log t − b)^{n+1}"""
        if not 0 < t <= math.exp(-self.b):
            raise ParameterError(f"레벨 t 가 (0, e^(-b)] 밖입니다: {t}")
        r = -math.log(t) - self.b
        return unit_ball_volume(self.n) / self.a ** (self.n + 1) * r ** (self.n + 1)

    def relative_tail(self, q: float, start: float, horizon: float) -> float:
        """[horizon, ∞) 의 지배 질량 / [start, ∞) 의 지배 질량"""
        k = self.n + 2
        total = gammaincc(k, q * (start - self.b))
        if total <= 0.0:
            return 0.0
        return float(gammaincc(k, q * (horizon - self.b)) / total)

    def horizon(self, q: float, start: float, rel_tol: float) -> float:
        """꼬리 지배 질량이 전체의 rel_tol 이하가 되는 절단 높이 S_max"""
        k = self.n + 2
        x0 = q * (start - self.b)
        target = rel_tol * gammaincc(k, x0)
        if target > 1e-300:
            s_max = self.b + float(gammainccinv(k, target)) / q
            if math.isfinite(s_max):
                return max(s_max, start)
        # 정규화 감마가 언더플로하는 큰 x0: e^{−y}(1+y/x0)^{k−1} 꼴 꼬리
        return start + (2.0 * math.log(1.0 / rel_tol) + k) / q


@dataclass
class _Panel:
    """고정된 조합 구조 구간 [lo, hi] 의 체비쇼프 표본"""

    lo: float
    hi: float
    nodes: np.ndarray
    bodies: List[Body]
    volumes: np.ndarray
    moments: np.ndarray
    inverse_vander: np.ndarray

    def local(self, s: np.ndarray) -> np.ndarray:
        return (2.0 * s - (self.lo + self.hi)) / (self.hi - self.lo)


def _chebyshev_nodes(lo: float, hi: float, count: int) -> np.ndarray:
    """1종 체비쇼프 노드 (양 끝점 제외)"""
    k = np.arange(count)
    x = np.cos((2 * k + 1) * np.pi / (2 * count))[::-1]
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * x


def _body_stats(body: Body, n: int) -> Tuple[float, np.ndarray]:
    if body is EMPTY:
        return 0.0, np.zeros(n)
    return body.volume, body.moment


def _node_supports(bodies: List[Body], directions: np.ndarray) -> np.ndarray:
    """(노드 수, 방향 수) 지지함수 표"""
    return np.vstack([support_many(b, directions) for b in bodies])


class LayerProfile:
    """
    s ↦ {u ≤ s} 의 구간별 다항식 기술 (q 와 무관)

    u 의 수직 이동은 제외한 상태로 보관하며 (적분 시 e^{−q·shift} 로 처리),
    필요한 절단 높이가 커지면 패널을 다시 구성합니다.
    """

    def __init__(self, u: PLConvexFunction, config: QuadratureConfig = QuadratureConfig()):
        """
        Args:
            u: 수직 이동이 0 인 강제적 PL 볼록 함수
            config: 구적 설정
        """
        self.u = u
        self.config = config
        self.n = u.dim
        bound = coercivity_check(u)
        if isinstance(bound, NotCoercive):
            raise NotCoerciveError(bound)
        self.cone_bound = bound
        self.tail = TailBound.from_cone_bound(bound, self.n)
        self.min_value, self.argmin = minimize(u)
        self.is_constant = u.is_constant

        self._lock = threading.Lock()
        self._cap = -math.inf
        self._panels: List[_Panel] = []
        self.subdivisions = 0
        self.converged = True

        self._gl_nodes, self._gl_weights = roots_legendre(config.gauss_nodes)
        self._lag_nodes, self._lag_weights = roots_laguerre(config.gauss_nodes)
        self._weight_cache: Dict[float, Tuple[np.ndarray, float, float]] = {}

        if self.is_constant:
            self.domain_body = sublevel_set(u, self.min_value)

    def __repr__(self) -> str:
        return (
            f"LayerProfile(n={self.n}, min={self.min_value:.6g}, 패널={len(self._panels)}, "
            f"상한={self._cap:.6g})"
        )

    # ------------------------------------------------------------------
    # 패널 구성
    # ------------------------------------------------------------------
    def _sample_panel(self, lo: float, hi: float) -> _Panel:
        count = self.n + 2
        nodes = _chebyshev_nodes(lo, hi, count)
        bodies = [sublevel_set(self.u, s) for s in nodes]
        stats = [_body_stats(b, self.n) for b in bodies]
        volumes = np.array([v for v, _ in stats])
        moments = np.vstack([m for _, m in stats])
        x = (2.0 * nodes - (lo + hi)) / (hi - lo)
        vander = cheb.chebvander(x, count - 1)
        return _Panel(lo, hi, nodes, bodies, volumes, moments, np.linalg.inv(vander))

    def _panel_matches(self, panel: _Panel) -> bool:
        """보간식이 추가 검사 노드를 재현하는지"""
        s = panel.lo + 0.381966 * (panel.hi - panel.lo)
        body = sublevel_set(self.u, s)
        volume, moment = _body_stats(body, self.n)
        basis = cheb.chebvander(panel.local(np.array([s])), len(panel.nodes) - 1)[0]
        weights = basis @ panel.inverse_vander

        axes = np.vstack([np.eye(self.n), -np.eye(self.n)])
        node_h = _node_supports(panel.bodies, axes)
        actual = np.concatenate([[volume], moment, support_many(body, axes)])
        predicted = np.concatenate([[weights @ panel.volumes], weights @ panel.moments, weights @ node_h])
        scale = 1.0 + float(np.max(np.abs(actual)))
        return bool(np.max(np.abs(actual - predicted)) <= 1e-8 * scale)

    def _build_panels(self, cap: float) -> List[_Panel]:
        levels = epi_vertex_levels(self.u, cap)
        tol = EPS_GEO * max(1.0, abs(self.min_value))
        levels = levels[levels > self.min_value + tol]
        breaks = [self.min_value] + list(levels) + [cap]

        pending = [(breaks[i], breaks[i + 1]) for i in range(len(breaks) - 1)]
        panels: List[_Panel] = []
        while pending:
            lo, hi = pending.pop(0)
            panel = self._sample_panel(lo, hi)
            if self._panel_matches(panel):
                panels.append(panel)
                continue
            if self.subdivisions >= self.config.max_subdivisions:
                if self.converged:
                    logger.warning(
                        f"패널 이분 한도({self.config.max_subdivisions}) 초과: "
                        f"[{lo:.6g}, {hi:.6g}] 보간을 그대로 사용합니다."
                    )
                self.converged = False
                panels.append(panel)
                continue
            self.subdivisions += 1
            mid = 0.5 * (lo + hi)
            pending[:0] = [(lo, mid), (mid, hi)]
            logger.debug(f"패널 이분: [{lo:.6g}, {hi:.6g}]")
        panels.sort(key=lambda p: p.lo)
        return panels

    def ensure_cap(self, cap: float):
        """절단 높이 cap 까지 패널이 덮도록 보장"""
        if self.is_constant or cap <= self._cap:
            return
        with self._lock:
            if cap <= self._cap:
                return
            new_cap = max(cap, self.min_value + 2.0 * (self._cap - self.min_value)) if math.isfinite(self._cap) else cap
            self._panels = self._build_panels(new_cap)
            self._cap = new_cap
            self._weight_cache.clear()
            logger.debug(f"레이어 프로파일 구성: 패널 {len(self._panels)}개, 상한 {new_cap:.6g}")

    # ------------------------------------------------------------------
    # 적분 가중치
    # ------------------------------------------------------------------
    def horizon(self, q: float) -> float:
        return self.tail.horizon(q, self.min_value, self.config.rel_tol)

    def _weights(self, q: float) -> Tuple[List[np.ndarray], float, float]:
        """
        패널별 노드 가중치 w_p 와 절단 높이

        Σ_p w_p · (노드 값) = q ∫ F({u ≤ s}) e^{−q(s − min u)} ds
        """
        s_max = self.horizon(q)
        self.ensure_cap(s_max + 1.0)
        with self._lock:
            cached = self._weight_cache.get(q)
            if cached is not None:
                return cached
            panels = self._panels
            m0 = self.min_value
            weights = []
            width = 2.0 / q
            last = None
            for panel in panels:
                w = np.zeros(len(panel.nodes))
                lo, hi = panel.lo, min(panel.hi, s_max)
                if hi > lo:
                    pieces = max(1, int(math.ceil((hi - lo) / width)))
                    edges = np.linspace(lo, hi, pieces + 1)
                    for a, b in zip(edges[:-1], edges[1:]):
                        s = 0.5 * (a + b) + 0.5 * (b - a) * self._gl_nodes
                        g = 0.5 * (b - a) * self._gl_weights * q * np.exp(-q * (s - m0))
                        basis = cheb.chebvander(panel.local(s), len(panel.nodes) - 1)
                        w += (g @ basis) @ panel.inverse_vander
                    if panel.lo <= s_max <= panel.hi or panel is panels[-1]:
                        last = len(weights)
                weights.append(w)
            if last is None:
                last = len(panels) - 1
            # [S_max, ∞) 꼬리: S_max 를 포함하는 패널의 보간식을 라게르 구적
            panel = panels[last]
            s = s_max + self._lag_nodes / q
            g = self._lag_weights * math.exp(-q * (s_max - m0))
            basis = cheb.chebvander(panel.local(s), len(panel.nodes) - 1)
            weights[last] = weights[last] + (g @ basis) @ panel.inverse_vander
            tail = self.tail.relative_tail(q, m0, s_max)
            result = (weights, s_max, tail)
            self._weight_cache[q] = result
            return result

    # ------------------------------------------------------------------
    # 적분
    # ------------------------------------------------------------------
    def diagnostics(self, q: float) -> Dict[str, float]:
        if self.is_constant:
            return {"panels": 0, "subdivisions": 0, "horizon": self.min_value, "tail_estimate": 0.0, "converged": True}
        _, s_max, tail = self._weights(q)
        return {
            "panels": len(self._panels),
            "subdivisions": self.subdivisions,
            "horizon": s_max,
            "tail_estimate": tail,
            "converged": self.converged,
        }

    def volume_integral(self, q: float) -> float:
        """q ∫ V_n({u ≤ s}) e^{−q(s − min u)} ds"""
        if self.is_constant:
            return _body_stats(self.domain_body, self.n)[0]
        weights, _, _ = self._weights(q)
        return float(sum(w @ p.volumes for w, p in zip(weights, self._panels)))

    def moment_integral(self, q: float) -> np.ndarray:
        """q ∫ m({u ≤ s}) e^{−q(s − min u)} ds"""
        if self.is_constant:
            return _body_stats(self.domain_body, self.n)[1]
        weights, _, _ = self._weights(q)
        return sum(w @ p.moments for w, p in zip(weights, self._panels))

    def support_integral(self, q: float, directions: np.ndarray) -> np.ndarray:
        """q ∫ h({u ≤ s}, z) e^{−q(s − min u)} ds (방향별)"""
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        if self.is_constant:
            return support_many(self.domain_body, directions)
        weights, _, _ = self._weights(q)
        total = np.zeros(directions.shape[0])
        for w, panel in zip(weights, self._panels):
            total += w @ _node_supports(panel.bodies, directions)
        return total


@lru_cache(maxsize=256)
def _cached_profile(u: PLConvexFunction, config: QuadratureConfig) -> LayerProfile:
    profile = LayerProfile(u, config)
    logger.info(f"레이어 프로파일 생성: {profile!r}")
    return profile


def layer_profile(u: PLConvexFunction, config: QuadratureConfig = QuadratureConfig()) -> Tuple[LayerProfile, float]:
    """
    수직 이동을 뗀 u 의 프로파일과 그 이동값

    Returns:
        (프로파일, shift): 적분 결과에 e^{−q(min u₀ + shift)} 를 곱해 사용
    """
    shift = u.shift
    base = add_constant(u, -shift) if shift != 0.0 else u
    return _cached_profile(base, config), shift
