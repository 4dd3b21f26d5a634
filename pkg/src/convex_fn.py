"""
조각별 선형 볼록 함수 모듈

Conv(ℝⁿ) 의 원소 u 를 아핀 조각들의 최댓값 + 다면체 정의역 + 수직 이동으로
표현하고, 하위 레벨 집합, 최솟값, 격자 연산(∨/∧), 원뿔/지시 함수,
강제성(coercivity) 판정, 에피 수렴 진단을 제공합니다.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import linprog

from .exceptions import (
    DimensionMismatchError,
    EmptyDomainError,
    GeometryError,
    OriginNotInBodyError,
    ParameterError,
)
from .polytope_core import (
    EMPTY,
    EPS_GEO,
    Body,
    HalfSpace,
    LinearMap,
    Polytope,
    as_vector,
    hausdorff_distance,
    hull,
    vertices_from_halfspaces,
)

logger = logging.getLogger(__name__)


class AllSpace:
    """정의역 전체 공간 표시"""

    def __repr__(self) -> str:
        return "AllSpace()"


ALL_SPACE = AllSpace()


@dataclass(frozen=True, eq=False)
class AffinePiece:
    """아핀 조각 x ↦ slope·x + intercept"""

    slope: np.ndarray
    intercept: float


@dataclass(frozen=True)
class ConeBound:
    """
    강제성 하한 u(x) > a|x| + b

    Args:
        a: 양의 기울기
        b: 절편
    """

    a: float
    b: float

    def lower(self, x) -> float:
        """하한 값 a|x| + b"""
        return self.a * float(np.linalg.norm(x)) + self.b


class NotCoercive:
    """
    강제적이지 않은 함수 표시 (예외가 아닌 값)

    Args:
        reason: 설명
        direction: u 가 증가하지 않는 후퇴 방향
    """

    def __init__(self, reason: str, direction: Optional[np.ndarray] = None):
        self.reason = reason
        self.direction = direction

    def __repr__(self) -> str:
        return f"NotCoercive({self.reason})"


class NotConvex:
    """
    u∧v 가 볼록이 아님을 나타내는 값

    Args:
        reason: 설명
        witness: 두 에피그래프 어디에도 속하지 않는 포락 안의 점 (x, τ)
    """

    def __init__(self, reason: str, witness: Optional[np.ndarray] = None):
        self.reason = reason
        self.witness = witness

    def __repr__(self) -> str:
        return f"NotConvex({self.reason})"


DomainLike = Union[AllSpace, Polytope, Sequence[HalfSpace], Tuple[np.ndarray, np.ndarray], None]


def _normalize_rows(normals: np.ndarray, offsets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """반공간 행을 단위 법선으로 정규화 (법선 0 인 자명한 행 제거)"""
    if normals.shape[0] == 0:
        return normals, offsets
    norms = np.linalg.norm(normals, axis=1)
    keep = norms > EPS_GEO
    if np.any(~keep & (offsets < -EPS_GEO)):
        raise EmptyDomainError("0·x ≤ 음수 꼴의 모순된 정의역 제약입니다.")
    return normals[keep] / norms[keep, None], offsets[keep] / norms[keep]


def _domain_arrays(domain: DomainLike, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """다양한 정의역 입력을 (법선, 오프셋) 배열로 변환"""
    if domain is None or isinstance(domain, AllSpace):
        return np.zeros((0, n)), np.zeros(0)
    if isinstance(domain, Polytope):
        if domain.dim != n:
            raise DimensionMismatchError(f"정의역 차원 {domain.dim} ≠ 함수 차원 {n}")
        g, h = domain.facet_arrays
        return g.copy(), h.copy()
    if isinstance(domain, tuple) and len(domain) == 2 and isinstance(domain[0], np.ndarray):
        g = np.atleast_2d(np.asarray(domain[0], dtype=float)).reshape(-1, n)
        h = np.asarray(domain[1], dtype=float).reshape(-1)
        return _normalize_rows(g, h)
    rows = list(domain)
    if not rows:
        return np.zeros((0, n)), np.zeros(0)
    g = np.vstack([as_vector(hs.normal, n) for hs in rows])
    h = np.array([hs.offset for hs in rows], dtype=float)
    return _normalize_rows(g, h)


class PLConvexFunction:
    """
    조각별 선형 볼록 함수 u(x) = max_i(a_i·x + b_i) + shift  (x ∈ 정의역), 그 외 +∞

    정의역은 반공간 {G x ≤ g} 로 보관하며 (행이 없으면 전체 공간),
    최솟값·강제성·정규 키 등은 처음 요청될 때 계산되어 보관됩니다.
    """

    def __init__(
        self,
        pieces,
        domain: DomainLike = ALL_SPACE,
        shift: float = 0.0,
        intercepts: Optional[Sequence[float]] = None,
        check: bool = True,
    ):
        """
        Args:
            pieces: AffinePiece 리스트, 또는 (k, n+1) 배열 [a…, b], 또는 intercepts 와 함께 (k, n) 기울기
            domain: ALL_SPACE, Polytope, HalfSpace 리스트, 또는 (법선, 오프셋) 튜플
            shift: 수직 이동 t (u + t)
            intercepts: pieces 를 기울기 배열로 줄 때의 절편
            check: 정의역이 비어 있지 않은지 LP 로 확인
        """
        if isinstance(pieces, (list, tuple)) and pieces and isinstance(pieces[0], AffinePiece):
            slopes = np.vstack([as_vector(p.slope) for p in pieces])
            b = np.array([p.intercept for p in pieces], dtype=float)
        else:
            arr = np.atleast_2d(np.asarray(pieces, dtype=float))
            if intercepts is None:
                slopes, b = arr[:, :-1], arr[:, -1]
            else:
                slopes, b = arr, np.asarray(intercepts, dtype=float).reshape(-1)
        if slopes.shape[0] == 0:
            raise GeometryError("아핀 조각이 최소 하나 필요합니다.")
        if slopes.shape[0] != b.shape[0]:
            raise DimensionMismatchError("기울기와 절편 개수가 다릅니다.")
        if not (np.all(np.isfinite(slopes)) and np.all(np.isfinite(b)) and math.isfinite(shift)):
            raise GeometryError("아핀 조각에 유한하지 않은 값이 있습니다.")

        n = slopes.shape[1]
        g, h = _domain_arrays(domain, n)
        for arr in (slopes, b, g, h):
            arr.setflags(write=False)
        self._slopes = slopes
        self._intercepts = b
        self._domain_normals = g
        self._domain_offsets = h
        self._shift = float(shift)

        if check and not self._domain_nonempty():
            raise EmptyDomainError("정의역이 비어 있어 proper 한 함수가 아닙니다.")

    # ------------------------------------------------------------------
    # 기본 속성
    # ------------------------------------------------------------------
    @property
    def dim(self) -> int:
        return self._slopes.shape[1]

    @property
    def slopes(self) -> np.ndarray:
        return self._slopes

    @property
    def intercepts(self) -> np.ndarray:
        return self._intercepts

    @property
    def shift(self) -> float:
        return self._shift

    @property
    def domain_normals(self) -> np.ndarray:
        return self._domain_normals

    @property
    def domain_offsets(self) -> np.ndarray:
        return self._domain_offsets

    @property
    def pieces(self) -> List[AffinePiece]:
        return [AffinePiece(a.copy(), float(b)) for a, b in zip(self._slopes, self._intercepts)]

    @property
    def domain(self) -> Union[AllSpace, List[HalfSpace]]:
        if self._domain_normals.shape[0] == 0:
            return ALL_SPACE
        return [HalfSpace(a, b) for a, b in zip(self._domain_normals, self._domain_offsets)]

    @property
    def is_constant(self) -> bool:
        """모든 기울기가 0 (정의역 위에서 상수, 즉 지시 함수 + 상수)"""
        return bool(np.all(self._slopes == 0.0))

    def _domain_nonempty(self) -> bool:
        if self._domain_normals.shape[0] == 0:
            return True
        res = linprog(
            np.zeros(self.dim), A_ub=self._domain_normals, b_ub=self._domain_offsets,
            bounds=[(None, None)] * self.dim, method="highs",
        )
        return res.status == 0

    @cached_property
    def key(self) -> Tuple[bytes, bytes, float]:
        """정규 표현 키 (조각/정의역 행을 사전식 정렬)"""
        pieces = np.hstack([self._slopes, self._intercepts[:, None]])
        pieces = pieces[np.lexsort(pieces.T[::-1])]
        dom = np.hstack([self._domain_normals, self._domain_offsets[:, None]])
        if dom.shape[0]:
            dom = dom[np.lexsort(dom.T[::-1])]
        return (pieces.tobytes(), dom.tobytes(), self._shift)

    def __hash__(self) -> int:
        return hash(self.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, PLConvexFunction) and self.key == other.key

    def __call__(self, x) -> float:
        return evaluate(self, x)

    def __repr__(self) -> str:
        dom = "전체공간" if self._domain_normals.shape[0] == 0 else f"반공간 {self._domain_normals.shape[0]}개"
        return (
            f"PLConvexFunction(n={self.dim}, 조각={self._slopes.shape[0]}, "
            f"정의역={dom}, shift={self._shift:.6g})"
        )

    # ------------------------------------------------------------------
    # 지연 계산 속성
    # ------------------------------------------------------------------
    @cached_property
    def _minimum(self) -> Tuple[float, Optional[np.ndarray]]:
        return _solve_minimum(self)

    @cached_property
    def recession_witness(self) -> Optional[np.ndarray]:
        """u 가 증가하지 않는 0 이 아닌 후퇴 방향 (없으면 None, 즉 강제적)"""
        return _nonincreasing_direction(self._slopes, self._domain_normals)

    @property
    def is_coercive(self) -> bool:
        return self.recession_witness is None

    @cached_property
    def has_bounded_domain(self) -> bool:
        return _nonincreasing_direction(np.zeros((0, self.dim)), self._domain_normals) is None

    def epigraph_rows(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        에피그래프 epi u ⊂ ℝⁿ⁺¹ 의 반공간 표현 (단위 행)

        조각 행: [a_i, −1]·(x, τ) ≤ −(b_i + shift), 정의역 행: [G_j, 0]·(x, τ) ≤ g_j
        """
        k = self._slopes.shape[0]
        piece_rows = np.hstack([self._slopes, -np.ones((k, 1))])
        piece_rhs = -(self._intercepts + self._shift)
        dom_rows = np.hstack([self._domain_normals, np.zeros((self._domain_normals.shape[0], 1))])
        rows = np.vstack([piece_rows, dom_rows])
        rhs = np.concatenate([piece_rhs, self._domain_offsets])
        norms = np.linalg.norm(rows, axis=1)
        return rows / norms[:, None], rhs / norms


def _nonincreasing_direction(slopes: np.ndarray, domain_normals: np.ndarray) -> Optional[np.ndarray]:
    """
    후퇴 원뿔 {d : G d ≤ 0, a_i·d ≤ 0} 가 {0} 이 아니면 그 원소를 반환

    각 좌표 ±d_j 를 상자 [−1, 1]ⁿ 안에서 최대화하는 LP 2n 개로 판정합니다.
    """
    n = slopes.shape[1] if slopes.shape[0] else domain_normals.shape[1]
    rows = np.vstack([slopes, domain_normals]) if slopes.shape[0] else domain_normals
    if rows.shape[0] == 0:
        return np.eye(n)[0]
    rhs = np.zeros(rows.shape[0])
    for j in range(n):
        for sign in (1.0, -1.0):
            cost = np.zeros(n)
            cost[j] = -sign
            res = linprog(cost, A_ub=rows, b_ub=rhs, bounds=[(-1.0, 1.0)] * n, method="highs")
            if res.status == 0 and -res.fun > EPS_GEO:
                return res.x
    return None


def _solve_minimum(u: PLConvexFunction) -> Tuple[float, Optional[np.ndarray]]:
    """에피그래프 LP: min τ s.t. a_i·x + b_i + shift ≤ τ, x ∈ 정의역"""
    n = u.dim
    if u.is_constant:
        point = _domain_point(u)
        return float(np.max(u.intercepts) + u.shift), point

    rows, rhs = u.epigraph_rows()
    cost = np.zeros(n + 1)
    cost[-1] = 1.0
    res = linprog(cost, A_ub=rows, b_ub=rhs, bounds=[(None, None)] * (n + 1), method="highs")
    if res.status == 3:
        return -math.inf, None
    if not res.success:
        raise GeometryError(f"최솟값 LP 실패: {res.message}")
    x = res.x[:n]
    value = float(np.max(u.slopes @ x + u.intercepts) + u.shift)
    return value, x


def _domain_point(u: PLConvexFunction) -> np.ndarray:
    """정의역의 한 점 (체비쇼프 중심에 가까운 점)"""
    n = u.dim
    g, h = u.domain_normals, u.domain_offsets
    if g.shape[0] == 0:
        return np.zeros(n)
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    a_ub = np.hstack([g, np.ones((g.shape[0], 1))])
    res = linprog(
        cost, A_ub=a_ub, b_ub=h,
        bounds=[(None, None)] * n + [(0.0, 1.0)], method="highs",
    )
    if not res.success:
        raise EmptyDomainError("정의역이 비어 있습니다.")
    return res.x[:n]


# ---------------------------------------------------------------------------
# 평가와 생성자
# ---------------------------------------------------------------------------

def evaluate(u: PLConvexFunction, x) -> float:
    """u(x): 정의역 안이면 조각 최댓값 + shift, 밖이면 +∞"""
    x = as_vector(x, u.dim)
    g, h = u.domain_normals, u.domain_offsets
    if g.shape[0]:
        scale = max(1.0, float(np.max(np.abs(h))))
        if np.any(g @ x - h > EPS_GEO * scale):
            return math.inf
    return float(np.max(u.slopes @ x + u.intercepts) + u.shift)


def cone_fn(K: Polytope) -> PLConvexFunction:
    """
    원뿔 함수 ℓ_K (K 의 게이지 함수, {ℓ_K ≤ t} = tK)

    오프셋이 양수인 면은 게이지 조각 a·x / b 가 되고, 원점을 지나는 면은
    정의역 pos(K) 의 제약이 됩니다.
    """
    n = K.dim
    if not K.contains(np.zeros(n)):
        raise OriginNotInBodyError("원뿔 함수는 원점을 포함하는 다면체에서만 정의됩니다.")
    normals, offsets = K.facet_arrays
    tol = EPS_GEO * max(1.0, float(np.max(np.abs(offsets))))
    gauge = offsets > tol
    if np.any(gauge):
        slopes = normals[gauge] / offsets[gauge][:, None]
    else:
        slopes = np.zeros((1, n))
    domain = (normals[~gauge], np.zeros(int(np.sum(~gauge))))
    return PLConvexFunction(slopes, domain=domain, intercepts=np.zeros(slopes.shape[0]), check=False)


def indicator_fn(K: Polytope) -> PLConvexFunction:
    """지시 함수 I_K (K 위에서 0, 밖에서 +∞)"""
    return PLConvexFunction(np.zeros((1, K.dim)), domain=K, intercepts=[0.0], check=False)


def minimize(u: PLConvexFunction) -> Tuple[float, Optional[np.ndarray]]:
    """(min u, 최소점). 아래로 유계가 아니면 (−inf, None)"""
    return u._minimum


def min_value(u: PLConvexFunction) -> float:
    """min u (에피그래프 선형계획)"""
    return u._minimum[0]


def sublevel_set(u: PLConvexFunction, t: float) -> Body:
    """
    하위 레벨 집합 {u ≤ t}

    정의역 반공간과 조각별 {a_i·x ≤ t − b_i − shift} 의 교집합을 V-표현으로 바꿉니다.
    t < min u 이면 EMPTY.
    """
    m = min_value(u)
    if t < m - EPS_GEO * max(1.0, abs(m)):
        return EMPTY
    normals = np.vstack([u.domain_normals, u.slopes])
    offsets = np.concatenate([u.domain_offsets, t - u.intercepts - u.shift])
    keep = np.linalg.norm(normals, axis=1) > 0
    pts = vertices_from_halfspaces(normals[keep], offsets[keep], bounded=u.is_coercive)
    if len(pts) == 0:
        return EMPTY
    return hull(pts)


def epi_vertex_levels(u: PLConvexFunction, upper: float) -> np.ndarray:
    """
    epi u ∩ {τ ≤ upper} 의 꼭짓점 높이 τ (상한면 꼭짓점 제외, 오름차순)

    이 높이들 사이에서는 {u ≤ s} 의 조합 구조가 변하지 않습니다.
    """
    rows, rhs = u.epigraph_rows()
    n = u.dim
    cap = np.zeros((1, n + 1))
    cap[0, -1] = 1.0
    pts = vertices_from_halfspaces(
        np.vstack([rows, cap]), np.concatenate([rhs, [upper]]), bounded=u.is_coercive,
    )
    if len(pts) == 0:
        return np.zeros(0)
    tol = EPS_GEO * max(1.0, abs(upper))
    levels = np.sort(pts[pts[:, -1] < upper - tol, -1])
    if len(levels) == 0:
        return levels
    merged = [levels[0]]
    for s in levels[1:]:
        if s - merged[-1] > tol:
            merged.append(s)
    return np.asarray(merged)


# ---------------------------------------------------------------------------
# 격자 연산
# ---------------------------------------------------------------------------

def _check_pair(u: PLConvexFunction, v: PLConvexFunction):
    if u.dim != v.dim:
        raise DimensionMismatchError(f"차원 불일치: {u.dim} vs {v.dim}")


def pointwise_max(u: PLConvexFunction, v: PLConvexFunction) -> PLConvexFunction:
    """u ∨ v: 조각 합집합, 정의역 교집합 (정의역이 겹치지 않으면 EmptyDomainError)"""
    _check_pair(u, v)
    slopes = np.vstack([u.slopes, v.slopes])
    intercepts = np.concatenate([u.intercepts + u.shift, v.intercepts + v.shift])
    domain = (
        np.vstack([u.domain_normals, v.domain_normals]),
        np.concatenate([u.domain_offsets, v.domain_offsets]),
    )
    return PLConvexFunction(slopes, domain=domain, intercepts=intercepts, check=True)


def _max_over(row: np.ndarray, rows: np.ndarray, rhs: np.ndarray) -> float:
    """max row·y s.t. rows·y ≤ rhs (유계가 아니면 +inf)"""
    res = linprog(-row, A_ub=rows, b_ub=rhs, bounds=[(None, None)] * rows.shape[1], method="highs")
    if res.status == 3:
        return math.inf
    if not res.success:
        raise GeometryError(f"타당성 LP 실패: {res.message}")
    return float(-res.fun)


def pointwise_min(u: PLConvexFunction, v: PLConvexFunction) -> Union[PLConvexFunction, NotConvex]:
    """
    u ∧ v (볼록성 인증 포함)

    두 에피그래프 P, Q 에서 상대편에도 타당한 행만 모은 포락(envelope)은
    P ∪ Q 를 포함하는 볼록 다면체이며, P ∪ Q 가 볼록일 때 정확히 같습니다.
    포락 안에서 P 의 비타당 행과 Q 의 비타당 행을 동시에 위반하는 점이 있는지
    쌍마다 LP 로 확인하고, 없으면 포락 행으로 u∧v 의 PL 표현을 만듭니다.

    Returns:
        PLConvexFunction 또는 NotConvex (위반점을 witness 로 보관)
    """
    _check_pair(u, v)
    p_rows, p_rhs = u.epigraph_rows()
    q_rows, q_rhs = v.epigraph_rows()
    scale = max(1.0, float(np.max(np.abs(np.concatenate([p_rhs, q_rhs])))))
    tol = EPS_GEO * scale

    p_valid = np.array([_max_over(r, q_rows, q_rhs) <= c + tol for r, c in zip(p_rows, p_rhs)])
    q_valid = np.array([_max_over(r, p_rows, p_rhs) <= c + tol for r, c in zip(q_rows, q_rhs)])

    env_rows = np.vstack([p_rows[p_valid], q_rows[q_valid]])
    env_rhs = np.concatenate([p_rhs[p_valid], q_rhs[q_valid]])
    dim = u.dim + 1

    for i in np.where(~p_valid)[0]:
        for j in np.where(~q_valid)[0]:
            # max ε s.t. env, p_i·y ≥ c_i + ε, q_j·y ≥ d_j + ε, ε ≤ 1
            a_ub = np.vstack([
                np.hstack([env_rows, np.zeros((env_rows.shape[0], 1))]),
                np.hstack([-p_rows[i], [1.0]])[None, :],
                np.hstack([-q_rows[j], [1.0]])[None, :],
            ])
            b_ub = np.concatenate([env_rhs, [-p_rhs[i], -q_rhs[j]]])
            cost = np.zeros(dim + 1)
            cost[-1] = -1.0
            res = linprog(
                cost, A_ub=a_ub, b_ub=b_ub,
                bounds=[(None, None)] * dim + [(None, 1.0)], method="highs",
            )
            if res.status == 0 and -res.fun > tol:
                logger.debug(f"u∧v 비볼록: 위반 여유 {-res.fun:.3e}")
                return NotConvex("에피그래프 합집합이 볼록이 아닙니다.", witness=res.x[:dim])

    return _function_from_epigraph(env_rows, env_rhs, u.dim)


def _function_from_epigraph(rows: np.ndarray, rhs: np.ndarray, n: int) -> PLConvexFunction:
    """에피그래프 행 [r_x, r_τ]·(x, τ) ≤ c 에서 PL 함수 복원"""
    tol = EPS_GEO
    r_tau = rows[:, -1]
    if np.any(r_tau > tol):
        raise GeometryError("에피그래프 행의 τ 계수가 양수입니다.")
    piece = r_tau < -tol
    if not np.any(piece):
        raise GeometryError("에피그래프에 조각 행이 없습니다 (아래로 유계가 아님).")
    w = -r_tau[piece]
    slopes = rows[piece, :n] / w[:, None]
    intercepts = -rhs[piece] / w
    domain = (rows[~piece, :n], rhs[~piece])
    return PLConvexFunction(slopes, domain=domain, intercepts=intercepts, check=False)


# ---------------------------------------------------------------------------
# 변환
# ---------------------------------------------------------------------------

def translate_fn(u: PLConvexFunction, x) -> PLConvexFunction:
    """u∘τ_x⁻¹ (y ↦ u(y − x))"""
    x = as_vector(x, u.dim)
    return PLConvexFunction(
        u.slopes,
        domain=(u.domain_normals, u.domain_offsets + u.domain_normals @ x),
        intercepts=u.intercepts - u.slopes @ x,
        shift=u.shift,
        check=False,
    )


def precompose_linear(u: PLConvexFunction, phi: LinearMap) -> PLConvexFunction:
    """u∘φ⁻¹ (기울기는 φ⁻ᵀ 로, 정의역은 φ 로 옮겨짐)"""
    if phi.dim != u.dim:
        raise DimensionMismatchError(f"차원 불일치: 사상 {phi.dim}, 함수 {u.dim}")
    inv = phi.inverse().matrix
    return PLConvexFunction(
        u.slopes @ inv,
        domain=(u.domain_normals @ inv, u.domain_offsets.copy()),
        intercepts=u.intercepts,
        shift=u.shift,
        check=False,
    )


def add_constant(u: PLConvexFunction, t: float) -> PLConvexFunction:
    """u + t"""
    return PLConvexFunction(
        u.slopes,
        domain=(u.domain_normals, u.domain_offsets),
        intercepts=u.intercepts,
        shift=u.shift + t,
        check=False,
    )


def scale_values(u: PLConvexFunction, q: float) -> PLConvexFunction:
    """q·u (q > 0): 기울기, 절편, 이동을 모두 q 배"""
    if q <= 0:
        raise ParameterError(f"q 는 양수여야 합니다: {q}")
    return PLConvexFunction(
        q * u.slopes,
        domain=(u.domain_normals, u.domain_offsets),
        intercepts=q * u.intercepts,
        shift=q * u.shift,
        check=False,
    )


def intersect_domain(u: PLConvexFunction, normals, offsets=None) -> PLConvexFunction:
    """
    정의역에 반공간 제약 추가 (u + I_H)

    Args:
        u: 대상 함수
        normals: (m, n) 법선 배열, 또는 offsets 없이 HalfSpace 리스트
        offsets: (m,) 오프셋
    """
    if offsets is None:
        extra_g, extra_h = _domain_arrays(list(normals), u.dim)
    else:
        extra_g, extra_h = _domain_arrays(
            (np.asarray(normals, dtype=float), np.asarray(offsets, dtype=float)), u.dim
        )
    return PLConvexFunction(
        u.slopes,
        domain=(
            np.vstack([u.domain_normals, extra_g]),
            np.concatenate([u.domain_offsets, extra_h]),
        ),
        intercepts=u.intercepts,
        shift=u.shift,
        check=True,
    )


# ---------------------------------------------------------------------------
# 강제성과 수렴 진단
# ---------------------------------------------------------------------------

def coercivity_check(u: PLConvexFunction) -> Union[ConeBound, NotCoercive]:
    """
    원뿔 하한 u(x) > a|x| + b 인증

    유계 정의역이면 a = 1, b = min u − R₀ − 1 (R₀: 정의역 꼭짓점 최대 노름).
    아니면 후퇴 방향 LP 로 강제성을 확인한 뒤, 단위 하위 레벨 집합
    {u ≤ min u + 1} 의 최소점 기준 반지름 R 로 a = 1/R 를 정합니다
    (볼록성에 의해 그 밖에서는 기울기 1/R 이상으로 증가).
    """
    witness = u.recession_witness
    if witness is not None:
        return NotCoercive("u 가 증가하지 않는 후퇴 방향이 있습니다.", direction=witness)

    m, x_star = minimize(u)
    if u.has_bounded_domain:
        corners = vertices_from_halfspaces(u.domain_normals, u.domain_offsets)
        r0 = float(np.max(np.linalg.norm(corners, axis=1)))
        return ConeBound(a=1.0, b=m - r0 - 1.0)

    level = sublevel_set(u, m + 1.0)
    radius = float(np.max(np.linalg.norm(level.vertices - x_star, axis=1)))
    if radius <= EPS_GEO:
        raise GeometryError("단위 하위 레벨 집합이 한 점입니다.")
    a = 1.0 / radius
    anchor = a * float(np.linalg.norm(x_star))
    b = m - anchor - 1.0 - EPS_GEO * (1.0 + abs(m) + anchor)
    return ConeBound(a=a, b=b)


@dataclass
class EpiConvergenceReport:
    """
    하위 레벨 집합 하우스도르프 수렴 진단 결과

    Attributes:
        table: 열 (index, t, distance) 의 DataFrame
        summary: t 별 (monotone, final_gap, max_gap) DataFrame
    """

    table: pd.DataFrame
    summary: pd.DataFrame

    @property
    def final_gaps(self) -> np.ndarray:
        return self.summary["final_gap"].to_numpy()

    @property
    def all_monotone(self) -> bool:
        return bool(self.summary["monotone"].all())


def epi_convergence_diagnostic(
    u_seq: Union[Sequence[PLConvexFunction], Mapping[float, PLConvexFunction]],
    u: PLConvexFunction,
    t_grid: Sequence[float],
) -> EpiConvergenceReport:
    """
    에피 수렴 진단: 각 t 에서 δ({u_k ≤ t}, {u ≤ t}) 를 k 에 따라 기록

    증명이 아닌 진단입니다. t 는 min u 에서 EPS_GEO 이상 떨어져야 합니다.

    Args:
        u_seq: 함수열 (리스트 또는 {색인: 함수})
        u: 극한 후보
        t_grid: 레벨 격자
    """
    m = min_value(u)
    for t in t_grid:
        if abs(t - m) < EPS_GEO:
            raise ParameterError(f"레벨 t={t} 가 min u={m} 와 너무 가깝습니다.")
    items = list(u_seq.items()) if isinstance(u_seq, Mapping) else list(enumerate(u_seq))

    rows = []
    for t in t_grid:
        target = sublevel_set(u, t)
        for index, u_k in items:
            rows.append({
                "index": index,
                "t": float(t),
                "distance": hausdorff_distance(sublevel_set(u_k, t), target),
            })
    table = pd.DataFrame(rows, columns=["index", "t", "distance"])

    summary_rows = []
    for t, group in table.groupby("t", sort=True):
        d = group["distance"].to_numpy()
        finite = d[np.isfinite(d)]
        tol = EPS_GEO * max(1.0, float(np.max(finite)) if len(finite) else 1.0)
        summary_rows.append({
            "t": t,
            "monotone": bool(np.all(np.diff(d) <= tol)) if np.all(np.isfinite(d)) else False,
            "final_gap": float(d[-1]),
            "max_gap": float(np.max(d)),
        })
    summary = pd.DataFrame(summary_rows, columns=["t", "monotone", "final_gap", "max_gap"])
    logger.info(f"에피 수렴 진단 완료: 레벨 {len(t_grid)}개, 함수 {len(items)}개")
    return EpiConvergenceReport(table=table, summary=summary)
