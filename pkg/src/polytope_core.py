"""
볼록 다면체 연산 모듈

2 ≤ n ≤ 4 차원의 V-표현 다면체에 대해 볼록포, 지지함수, 민코프스키 합,
부피, 모멘트 벡터, 모멘트 바디, 반공간 절단, 하우스도르프 거리를 계산합니다.
면(H-) 표현은 필요할 때 한 번만 계산됩니다.
"""

import itertools
import logging
import math
import threading
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linprog, nnls
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError, cKDTree
from scipy.stats import norm, qmc

from .exceptions import (
    DimensionMismatchError,
    GeometryError,
    ParameterError,
    SingularMapError,
    TruncationError,
)

logger = logging.getLogger(__name__)

# 전역 기하 허용오차 (극점/공면 판정, 멤버십)
EPS_GEO = 1e-9

# 유계가 아닌 정의역을 qhull 로 변환할 때 쓰는 절단 상자 반지름
BOX_RADIUS = 1e6

MIN_DIM = 2
MAX_DIM = 4

# 벡터화 전수 꼭짓점 열거를 쓰는 최대 조합 수
BRUTE_FORCE_LIMIT = 60000

Vector = np.ndarray


def as_vector(x, n: Optional[int] = None) -> Vector:
    """
    입력을 float64 벡터로 변환

    Args:
        x: 좌표 시퀀스
        n: 기대 차원 (None 이면 검사하지 않음)

    Returns:
        1차원 numpy 배열
    """
    v = np.asarray(x, dtype=float).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise GeometryError(f"유한하지 않은 좌표: {v}")
    if n is not None and v.shape[0] != n:
        raise DimensionMismatchError(f"차원 불일치: 기대 {n}, 입력 {v.shape[0]}")
    return v


def unit_vector(n: int, i: int) -> Vector:
    """표준 기저 벡터 e_{i+1}"""
    e = np.zeros(n)
    e[i] = 1.0
    return e


class EmptySet:
    """
    공집합 (구분되는 값)

    지지함수 관례 h(∅, z) = 0 을 따릅니다.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EmptySet()"


EMPTY = EmptySet()


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """
    반공간 {x : normal·x ≤ offset}

    Args:
        normal: 법선 벡터 (0 이 아님)
        offset: 오프셋
    """

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        normal = as_vector(self.normal)
        if np.linalg.norm(normal) <= EPS_GEO:
            raise GeometryError("반공간 법선 벡터가 0 입니다.")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))

    def contains(self, x, eps: float = EPS_GEO) -> bool:
        """x 가 반공간에 속하는지 (법선 정규화 후 eps 허용)"""
        scale = np.linalg.norm(self.normal)
        return bool((self.normal @ as_vector(x) - self.offset) / scale <= eps)

    def __repr__(self) -> str:
        return f"HalfSpace(normal={np.round(self.normal, 6).tolist()}, offset={self.offset:.6g})"


class LinearMap:
    """
    가역 선형사상 φ (n×n 행렬과 캐시된 행렬식)

    전단(shear) 곱으로 만든 SL(n) 원소는 det = 1.0 을 정확히 가집니다.
    """

    def __init__(self, matrix, det: Optional[float] = None):
        """
        Args:
            matrix: n×n 실수 행렬
            det: 알려진 행렬식 (None 이면 계산)
        """
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"정사각 행렬이 아닙니다: shape={m.shape}")
        if not np.all(np.isfinite(m)):
            raise GeometryError("행렬에 유한하지 않은 값이 있습니다.")
        if det is None:
            det = float(np.linalg.det(m))
        if abs(det) <= 1e-12:
            raise SingularMapError(f"특이 행렬입니다: det={det:.3e}")
        m.setflags(write=False)
        self._matrix = m
        self._det = float(det)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def det(self) -> float:
        return self._det

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @staticmethod
    def identity(n: int) -> "LinearMap":
        """항등사상"""
        return LinearMap(np.eye(n), det=1.0)

    @staticmethod
    def shear(n: int, i: int, j: int, c: float) -> "LinearMap":
        """
        기본 전단 I + c·e_i e_jᵀ (i ≠ j)

        Args:
            n: 차원
            i: 행 인덱스
            j: 열 인덱스
            c: 전단 계수
        """
        if not (0 <= i < n and 0 <= j < n):
            raise DimensionMismatchError(f"전단 인덱스가 범위 [0, {n}) 밖입니다: i={i}, j={j}")
        if i == j:
            raise GeometryError("전단 인덱스 i, j 는 달라야 합니다.")
        m = np.eye(n)
        m[i, j] = c
        return LinearMap(m, det=1.0)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """합성 self ∘ other"""
        return LinearMap(self._matrix @ other.matrix, det=self._det * other.det)

    def inverse(self) -> "LinearMap":
        """역사상"""
        return LinearMap(np.linalg.inv(self._matrix), det=1.0 / self._det)

    def transpose(self) -> "LinearMap":
        """전치 φᵀ"""
        return LinearMap(self._matrix.T, det=self._det)

    def apply(self, x) -> np.ndarray:
        """점 또는 점 배열 (…, n) 에 φ 적용"""
        return np.asarray(x, dtype=float) @ self._matrix.T

    def __repr__(self) -> str:
        return f"LinearMap(n={self.dim}, det={self._det:.6g})"


def _unique_points(points: np.ndarray, tol: float) -> np.ndarray:
    """허용오차 tol (최대노름) 안에서 중복 점 제거 (먼저 나온 점 유지)"""
    if len(points) <= 1:
        return np.asarray(points)
    tree = cKDTree(points)
    neighbours = tree.query_ball_point(points, r=tol, p=np.inf)
    keep = np.ones(len(points), dtype=bool)
    for i, group in enumerate(neighbours):
        if keep[i]:
            for j in group:
                if j > i:
                    keep[j] = False
    return points[keep]


def _canonical_order(points: np.ndarray) -> np.ndarray:
    """사전식 정렬로 꼭짓점 순서를 결정적으로 고정"""
    order = np.lexsort(points.T[::-1])
    return points[order]


def _affine_frame(points: np.ndarray) -> Tuple[np.ndarray, int, np.ndarray]:
    """
    점 집합의 아핀 껍질 정보

    Returns:
        (중심점, 아핀 차원, 직교 기저 행렬 Vt) 튜플
    """
    center = points.mean(axis=0)
    centered = points - center
    scale = max(1.0, float(np.max(np.abs(points))))
    _, sing, vt = np.linalg.svd(centered, full_matrices=True)
    rank = int(np.sum(sing > EPS_GEO * scale))
    return center, rank, vt


def _reduce_to_vertices(points: np.ndarray) -> Tuple[np.ndarray, int]:
    """
    점 집합을 볼록포의 극점으로 축약

    Returns:
        (극점 배열, 아핀 차원) 튜플
    """
    n = points.shape[1]
    scale = max(1.0, float(np.max(np.abs(points))))
    pts = _unique_points(points, EPS_GEO * scale)
    if len(pts) == 1:
        return pts, 0

    center, rank, vt = _affine_frame(pts)
    while rank >= 1:
        if rank == 1:
            t = (pts - center) @ vt[0]
            ends = pts[[int(np.argmin(t)), int(np.argmax(t))]]
            return _canonical_order(ends), 1
        coords = pts if rank == n else (pts - center) @ vt[:rank].T
        try:
            qh = ConvexHull(coords)
            return _canonical_order(pts[np.sort(qh.vertices)]), rank
        except QhullError:
            # 거의 퇴화한 입력은 한 차원 낮춰 다시 시도
            logger.debug(f"qhull 실패, 아핀 차원 {rank} → {rank - 1} 로 재시도")
            rank -= 1
    return _canonical_order(pts[:1]), 0


class _Geometry:
    """지연 계산되는 면 표현과 삼각분할 결과"""

    __slots__ = ("normals", "offsets", "volume", "moment")

    def __init__(self, normals: np.ndarray, offsets: np.ndarray, volume: float, moment: np.ndarray):
        self.normals = normals
        self.offsets = offsets
        self.volume = volume
        self.moment = moment


class Polytope:
    """
    V-표현 볼록 다면체

    꼭짓점은 생성 시 극점만 남도록 축약되며, 면 표현·부피·모멘트 벡터는
    최초 요청 시 잠금 하에 한 번만 계산됩니다.
    """

    def __init__(self, points):
        """
        Args:
            points: 점들의 (k, n) 배열 (비어 있으면 안 됨, 빈 입력은 hull() 사용)
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.size == 0:
            raise GeometryError("빈 점 집합으로 다면체를 만들 수 없습니다. hull() 을 사용하세요.")
        if not np.all(np.isfinite(pts)):
            raise GeometryError("유한하지 않은 좌표가 있습니다.")
        vertices, affine_dim = _reduce_to_vertices(pts)
        self._init_reduced(vertices, affine_dim)

    @classmethod
    def _from_reduced(cls, vertices: np.ndarray, affine_dim: int) -> "Polytope":
        """이미 극점만 남은 꼭짓점 배열로 생성 (가역 아핀 변환 결과 등)"""
        obj = cls.__new__(cls)
        obj._init_reduced(np.asarray(vertices, dtype=float), affine_dim)
        return obj

    def _init_reduced(self, vertices: np.ndarray, affine_dim: int):
        vertices = np.array(vertices, dtype=float)
        vertices.setflags(write=False)
        self._vertices = vertices
        self._affine_dim = int(affine_dim)
        self._geometry: Optional[_Geometry] = None
        self._lock = threading.Lock()

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def dim(self) -> int:
        """주변 공간 차원 n"""
        return self._vertices.shape[1]

    @property
    def affine_dim(self) -> int:
        """아핀 차원 0..n"""
        return self._affine_dim

    @property
    def is_full_dimensional(self) -> bool:
        return self._affine_dim == self.dim

    def _get_geometry(self) -> _Geometry:
        if self._geometry is None:
            with self._lock:
                if self._geometry is None:
                    self._geometry = self._compute_geometry()
        return self._geometry

    def _compute_geometry(self) -> _Geometry:
        v = self._vertices
        n = self.dim
        if self.is_full_dimensional:
            qh = ConvexHull(v)
            normals = qh.equations[:, :n]
            offsets = -qh.equations[:, n]
            normals, offsets = _dedupe_halfspaces(normals, offsets)

            # 꼭짓점 무게중심에서의 별 모양 삼각분할
            center = v.mean(axis=0)
            facets = v[qh.simplices]
            edges = facets - center
            vols = np.abs(np.linalg.det(edges)) / math.factorial(n)
            centroids = (facets.sum(axis=1) + center) / (n + 1)
            volume = float(vols.sum())
            moment = (vols[:, None] * centroids).sum(axis=0)
            return _Geometry(normals, offsets, volume, moment)

        normals, offsets = _lower_dim_halfspaces(v, self._affine_dim)
        return _Geometry(normals, offsets, 0.0, np.zeros(n))

    @property
    def facet_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """단위 법선 (m, n) 과 오프셋 (m,): {x : normals·x ≤ offsets}"""
        g = self._get_geometry()
        return g.normals, g.offsets

    @property
    def facets(self) -> List[HalfSpace]:
        """면 표현 (반공간 리스트)"""
        normals, offsets = self.facet_arrays
        return [HalfSpace(a, b) for a, b in zip(normals, offsets)]

    @property
    def volume(self) -> float:
        return self._get_geometry().volume

    @property
    def moment(self) -> np.ndarray:
        return self._get_geometry().moment.copy()

    def contains(self, x, eps: float = EPS_GEO) -> bool:
        """면 검사로 멤버십 판정"""
        normals, offsets = self.facet_arrays
        x = as_vector(x, self.dim)
        scale = max(1.0, float(np.max(np.abs(offsets))) if len(offsets) else 1.0)
        return bool(np.all(normals @ x - offsets <= eps * scale))

    def __repr__(self) -> str:
        return (
            f"Polytope(n={self.dim}, 꼭짓점={len(self._vertices)}, "
            f"아핀차원={self._affine_dim})"
        )


Body = Union[Polytope, EmptySet]


def _dedupe_halfspaces(normals: np.ndarray, offsets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """단위 법선으로 정규화하고 같은 반공간을 하나로 합침"""
    norms = np.linalg.norm(normals, axis=1)
    normals = normals / norms[:, None]
    offsets = offsets / norms
    rows = np.hstack([normals, offsets[:, None]])
    scale = max(1.0, float(np.max(np.abs(offsets))))
    kept = _unique_points(rows, EPS_GEO * scale)
    return kept[:, :-1], kept[:, -1]


def _lower_dim_halfspaces(vertices: np.ndarray, affine_dim: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    저차원 다면체의 면 표현

    아핀 껍질의 등식을 반공간 쌍으로, 아핀 껍질 안의 면을 원래 공간으로 올려 표현합니다.
    """
    n = vertices.shape[1]
    center = vertices.mean(axis=0)
    _, _, vt = np.linalg.svd(vertices - center, full_matrices=True)
    basis, complement = vt[:affine_dim], vt[affine_dim:]

    normals: List[np.ndarray] = []
    offsets: List[float] = []
    for w in complement:
        normals.extend([w, -w])
        offsets.extend([w @ center, -(w @ center)])

    if affine_dim == 1:
        d = basis[0]
        t = (vertices - center) @ d
        normals.extend([d, -d])
        offsets.extend([d @ center + t.max(), -(d @ center + t.min())])
    elif affine_dim >= 2:
        coords = (vertices - center) @ basis.T
        qh = ConvexHull(coords)
        for eq in qh.equations:
            a, b = eq[:affine_dim], eq[affine_dim]
            lifted = basis.T @ a
            normals.append(lifted)
            offsets.append(-b + lifted @ center)

    if not normals:
        return np.zeros((0, n)), np.zeros(0)
    return _dedupe_halfspaces(np.asarray(normals), np.asarray(offsets))


def hull(points) -> Body:
    """
    볼록포 계산

    Args:
        points: 점 리스트 또는 (k, n) 배열

    Returns:
        극점만 가진 Polytope, 입력이 비어 있으면 EMPTY
    """
    if isinstance(points, np.ndarray):
        if points.size == 0:
            return EMPTY
        arr = np.atleast_2d(points.astype(float))
    else:
        rows = [np.asarray(p, dtype=float).reshape(-1) for p in points]
        if not rows:
            return EMPTY
        dims = {r.shape[0] for r in rows}
        if len(dims) != 1:
            raise DimensionMismatchError(f"입력 점들의 차원이 다릅니다: {sorted(dims)}")
        arr = np.vstack(rows)
    return Polytope(arr)


def support(K: Body, z) -> float:
    """지지함수 h(K, z) = max{z·x : x ∈ K}, h(∅, z) = 0"""
    if isinstance(K, EmptySet):
        return 0.0
    return float(np.max(K.vertices @ as_vector(z, K.dim)))


def support_many(K: Body, directions: np.ndarray) -> np.ndarray:
    """여러 방향 (k, n) 에 대한 지지함수 값 (k,)"""
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    if isinstance(K, EmptySet):
        return np.zeros(directions.shape[0])
    return np.max(K.vertices @ directions.T, axis=0)


def _check_same_dim(K: Polytope, L: Polytope):
    if K.dim != L.dim:
        raise DimensionMismatchError(f"차원 불일치: {K.dim} vs {L.dim}")


def minkowski_sum(K: Polytope, L: Polytope) -> Polytope:
    """민코프스키 합 K + L (꼭짓점 쌍별 합의 볼록포)"""
    _check_same_dim(K, L)
    sums = (K.vertices[:, None, :] + L.vertices[None, :, :]).reshape(-1, K.dim)
    return Polytope(sums)


def reflect(K: Polytope) -> Polytope:
    """원점 대칭 −K"""
    return Polytope._from_reduced(-K.vertices, K.affine_dim)


def difference_body(K: Polytope) -> Polytope:
    """차체 D K = K + (−K)"""
    return minkowski_sum(K, reflect(K))


def volume(K: Body) -> float:
    """n 차원 르베그 측도 (저차원이면 0)"""
    if isinstance(K, EmptySet):
        return 0.0
    return K.volume


def moment_vector(K: Body, n: Optional[int] = None) -> Vector:
    """
    모멘트 벡터 m(K) = ∫_K x dx

    Args:
        K: 다면체 또는 EMPTY
        n: K 가 EMPTY 일 때 돌려줄 영벡터의 차원
    """
    if isinstance(K, EmptySet):
        if n is None:
            raise GeometryError("공집합의 모멘트 벡터에는 차원 n 이 필요합니다.")
        return np.zeros(n)
    return K.moment


def clip_halfspace(K: Body, H: HalfSpace) -> Body:
    """
    반공간 절단 K ∩ H

    남는 꼭짓점과 초평면을 가로지르는 꼭짓점 쌍의 교점으로 다시 볼록포를 만듭니다.
    """
    if isinstance(K, EmptySet):
        return EMPTY
    v = K.vertices
    scale = np.linalg.norm(H.normal)
    s = (v @ H.normal - H.offset) / scale
    tol = EPS_GEO * max(1.0, abs(H.offset) / scale, float(np.max(np.abs(v))))
    inside = s <= tol
    if np.all(inside):
        return K
    if not np.any(inside):
        return EMPTY

    neg = np.where(s < -tol)[0]
    pos = np.where(s > tol)[0]
    pieces = [v[inside]]
    if len(neg) and len(pos):
        si = s[neg][:, None]
        sj = s[pos][None, :]
        lam = si / (si - sj)
        crossings = v[neg][:, None, :] + lam[..., None] * (v[pos][None, :, :] - v[neg][:, None, :])
        pieces.append(crossings.reshape(-1, K.dim))
    return Polytope(np.vstack(pieces))


def moment_body_support(K: Body, z) -> float:
    """
    모멘트 바디 지지함수 h(M K, z) = ∫_K |x·z| dx

    z·x = 0 초평면으로 K 를 나눈 두 조각의 모멘트 차이로 계산합니다.
    """
    if isinstance(K, EmptySet) or not K.is_full_dimensional:
        return 0.0
    z = as_vector(z, K.dim)
    upper = clip_halfspace(K, HalfSpace(-z, 0.0))
    lower = clip_halfspace(K, HalfSpace(z, 0.0))
    diff = moment_vector(upper, K.dim) - moment_vector(lower, K.dim)
    return float(diff @ z)


def point_to_body_distance(x, K: Polytope) -> float:
    """
    점과 다면체 사이의 유클리드 거리

    최소거리 계획 min |y| s.t. x + y ∈ K 를 Lawson–Hanson NNLS 로 정확히 풉니다.
    """
    x = as_vector(x, K.dim)
    normals, offsets = K.facet_arrays
    violation = normals @ x - offsets
    scale = max(1.0, float(np.max(np.abs(offsets))))
    if np.max(violation) <= EPS_GEO * scale:
        return 0.0

    # 제약 G y ≥ h 꼴: −A y ≥ A x − b
    g = -normals
    h = violation
    e = np.vstack([g.T, h[None, :]])
    f = np.zeros(K.dim + 1)
    f[-1] = 1.0
    u, _ = nnls(e, f)
    r = e @ u - f
    if abs(r[-1]) <= 1e-15:
        raise GeometryError("최소거리 계획이 비가해입니다 (면 표현 오류).")
    y = -r[:-1] / r[-1]
    return float(np.linalg.norm(y))


def hausdorff_distance(K: Body, L: Body) -> float:
    """
    하우스도르프 거리 δ(K, L)

    방향 거리 함수가 볼록이므로 최댓값은 꼭짓점에서 얻어집니다.
    한쪽만 공집합이면 inf, 둘 다 공집합이면 0 을 돌려줍니다.
    """
    if isinstance(K, EmptySet) or isinstance(L, EmptySet):
        return 0.0 if (isinstance(K, EmptySet) and isinstance(L, EmptySet)) else math.inf
    _check_same_dim(K, L)
    d_kl = max(point_to_body_distance(v, L) for v in K.vertices)
    d_lk = max(point_to_body_distance(w, K) for w in L.vertices)
    return max(d_kl, d_lk)


def linear_image(K: Polytope, phi: LinearMap) -> Polytope:
    """선형 상 φK (h(φK, z) = h(K, φᵀz))"""
    if phi.dim != K.dim:
        raise DimensionMismatchError(f"차원 불일치: 사상 {phi.dim}, 다면체 {K.dim}")
    return Polytope._from_reduced(phi.apply(K.vertices), K.affine_dim)


def translate(K: Body, x) -> Body:
    """평행이동 K + x"""
    if isinstance(K, EmptySet):
        return EMPTY
    return Polytope._from_reduced(K.vertices + as_vector(x, K.dim), K.affine_dim)


def random_sln(seed: int, k: int, n: int = 3) -> LinearMap:
    """
    결정적 SL(n) 원소: 기본 전단 I + c·e_i e_jᵀ (c ∈ [−2, 2]) k 개의 곱

    Args:
        seed: 난수 시드
        k: 전단 개수 (0 이면 항등사상)
        n: 차원
    """
    if k < 0:
        raise ParameterError(f"전단 개수는 0 이상이어야 합니다: {k}")
    rng = np.random.default_rng(seed)
    phi = LinearMap.identity(n)
    for _ in range(k):
        i, j = rng.choice(n, size=2, replace=False)
        c = rng.uniform(-2.0, 2.0)
        phi = phi.compose(LinearMap.shear(n, int(i), int(j), float(c)))
    return LinearMap(phi.matrix, det=1.0)


def vertices_from_halfspaces(normals, offsets, bounded: bool = True) -> np.ndarray:
    """
    반공간 교집합 {x : normals·x ≤ offsets} 의 꼭짓점 (H→V 변환)

    제약이 적으면 n 개 제약 조합을 벡터화해 전수 열거하고 (저차원 교집합도 정확),
    많거나 유계성이 보장되지 않으면 체비쇼프 중심 + qhull 반공간 교집합을
    절단 상자와 함께 사용합니다.

    Args:
        normals: (m, n) 법선 배열
        offsets: (m,) 오프셋 배열
        bounded: 교집합이 유계임이 보장되는지 여부

    Returns:
        꼭짓점 (k, n) 배열, 공집합이면 (0, n)
    """
    a = np.atleast_2d(np.asarray(normals, dtype=float))
    c = np.asarray(offsets, dtype=float).reshape(-1)
    n = a.shape[1]
    norms = np.linalg.norm(a, axis=1)
    zero = norms <= EPS_GEO
    if np.any(c[zero] < -EPS_GEO):
        return np.zeros((0, n))
    a = a[~zero] / norms[~zero, None]
    c = c[~zero] / norms[~zero]
    if bounded and a.shape[0] < n:
        raise GeometryError("유계 교집합에는 최소 n 개의 반공간이 필요합니다.")

    if bounded and math.comb(a.shape[0], n) <= BRUTE_FORCE_LIMIT:
        return _enumerate_vertices(a, c)
    return _qhull_vertices(a, c)


def _enumerate_vertices(a: np.ndarray, c: np.ndarray) -> np.ndarray:
    """n 개 제약 조합마다 등식계를 풀어 실현 가능한 해만 남김"""
    m, n = a.shape
    idx = np.array(list(itertools.combinations(range(m), n)))
    mats = a[idx]
    rhs = c[idx]
    sing = np.linalg.svd(mats, compute_uv=False)
    ok = sing[:, -1] > 1e-10 * sing[:, 0]
    if not np.any(ok):
        return np.zeros((0, n))
    sols = np.linalg.solve(mats[ok], rhs[ok][..., None])[..., 0]
    scale = max(1.0, float(np.max(np.abs(c))))
    feasible = np.all(sols @ a.T - c <= EPS_GEO * scale, axis=1)
    pts = sols[feasible]
    if len(pts) == 0:
        return np.zeros((0, n))
    return _unique_points(pts, EPS_GEO * max(1.0, float(np.max(np.abs(pts)))))


def _qhull_vertices(a: np.ndarray, c: np.ndarray) -> np.ndarray:
    """체비쇼프 중심을 내부점으로 qhull 반공간 교집합 계산 (절단 상자 포함)"""
    n = a.shape[1]
    box = np.vstack([np.eye(n), -np.eye(n)])
    a_all = np.vstack([a, box])
    c_all = np.concatenate([c, np.full(2 * n, BOX_RADIUS)])

    # 최대 내접구: max r s.t. a x + r ≤ c, r ≤ 1
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    a_ub = np.hstack([a_all, np.ones((a_all.shape[0], 1))])
    res = linprog(
        cost, A_ub=a_ub, b_ub=c_all,
        bounds=[(None, None)] * n + [(None, 1.0)], method="highs",
    )
    if res.status == 2:
        return np.zeros((0, n))
    if not res.success:
        raise GeometryError(f"체비쇼프 중심 LP 실패: {res.message}")
    if res.x[-1] <= EPS_GEO:
        if res.x[-1] < -EPS_GEO:
            return np.zeros((0, n))
        # 내부가 없는 (저차원) 교집합은 전수 열거로 처리
        return _enumerate_vertices(a_all, c_all)

    halfspaces = np.hstack([a_all, -c_all[:, None]])
    pts = HalfspaceIntersection(halfspaces, res.x[:-1]).intersections
    if np.any(np.abs(pts) >= BOX_RADIUS * (1.0 - EPS_GEO)):
        raise TruncationError(f"교집합이 반지름 {BOX_RADIUS:g} 절단 상자에 닿았습니다.")
    return _unique_points(pts, EPS_GEO * max(1.0, float(np.max(np.abs(pts)))))


def halfspace_intersection(normals, offsets, bounded: bool = True) -> Body:
    """반공간 교집합을 V-표현 다면체로 (공집합이면 EMPTY)"""
    pts = vertices_from_halfspaces(normals, offsets, bounded=bounded)
    if len(pts) == 0:
        return EMPTY
    return Polytope(pts)


# ---------------------------------------------------------------------------
# 자주 쓰는 다면체 생성기
# ---------------------------------------------------------------------------

def t_lambda(lam: float, n: int = 3) -> Polytope:
    """단체 T_λ = conv{0, λe₁, e₂, …, e_n}"""
    if lam <= 0:
        raise ParameterError(f"λ 는 양수여야 합니다: {lam}")
    pts = np.vstack([np.zeros(n), lam * unit_vector(n, 0)] + [unit_vector(n, i) for i in range(1, n)])
    return Polytope(pts)


def box(lows: Sequence[float], highs: Sequence[float]) -> Polytope:
    """축 정렬 상자 ∏[lows_i, highs_i] (lows_i = highs_i 이면 저차원)"""
    lows = as_vector(lows)
    highs = as_vector(highs, lows.shape[0])
    corners = np.array(list(itertools.product(*zip(lows, highs))), dtype=float)
    return Polytope(corners)


def cube(n: int = 3, lo: float = 0.0, hi: float = 1.0) -> Polytope:
    """정육면체 [lo, hi]ⁿ"""
    return box([lo] * n, [hi] * n)


def segment(a, b) -> Polytope:
    """선분 [a, b]"""
    return Polytope(np.vstack([as_vector(a), as_vector(b)]))


def point(x) -> Polytope:
    """한 점 {x}"""
    return Polytope(as_vector(x)[None, :])


def cross_polytope(n: int = 3, r: float = 1.0) -> Polytope:
    """정축체 conv{±r e_i}"""
    if r <= 0:
        raise ParameterError(f"r 은 양수여야 합니다: {r}")
    return Polytope(np.vstack([r * np.eye(n), -r * np.eye(n)]))


def direction_net(n: int, count: int = 200, seed: int = 0) -> np.ndarray:
    """
    결정적 저불일치 방향망

    ±e_i 를 먼저 넣고, 나머지는 스크램블 Halton 점을 가우스 역누적분포로 보내
    정규화한 단위 벡터입니다.

    Args:
        n: 차원
        count: 방향 개수 (≥ 2n)
        seed: Halton 스크램블 시드

    Returns:
        (count, n) 단위 벡터 배열
    """
    axes = np.vstack([np.eye(n), -np.eye(n)])
    if count <= 2 * n:
        return axes[:count]
    sampler = qmc.Halton(d=n, scramble=True, seed=seed)
    u = np.clip(sampler.random(count - 2 * n), 1e-12, 1.0 - 1e-12)
    g = norm.ppf(u)
    g /= np.linalg.norm(g, axis=1)[:, None]
    return np.vstack([axes, g])
