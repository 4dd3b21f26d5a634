"""
인증된 함수 쌍 생성기

밸류에이션 항등식 Z(f∨g) + Z(f∧g) = Z(f) + Z(g) 를 시험할 (f, g) 쌍을
결정적으로 만듭니다. 모든 쌍은 f∨g 의 로그 오목성 인증을 통과한 것만 내보내며,
극한 실험에 쓰이는 u_h 계열도 여기서 만듭니다.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .convex_fn import PLConvexFunction, cone_fn, indicator_fn, intersect_domain
from .exceptions import ParameterError
from .log_concave import (
    LogConcaveFunction,
    NotLogConcave,
    pointwise_max,
    pointwise_min,
    precompose_linear,
    scale,
    shift_exponent,
    translate,
)
from .polytope_core import (
    HalfSpace,
    Polytope,
    clip_halfspace,
    hull,
    random_sln,
    segment,
    support,
    t_lambda,
    unit_vector,
)

logger = logging.getLogger(__name__)

FAMILIES = ("cones", "indicators", "limit_c1c2", "limit_c3d4", "mixed")

# 극한 실험 기본 스케줄 h = 2^-1, …, 2^-12
DEFAULT_H_SCHEDULE = tuple(2.0 ** -k for k in range(1, 13))


@dataclass(frozen=True)
class CertifiedPair:
    """
    f∨g 가 로그 오목으로 인증된 쌍

    Attributes:
        f, g: 입력 함수
        join: f∨g
        meet: f∧g
        family: 생성 계열 이름
        index: 계열 안의 순번
        seed: 생성 시드
    """

    f: LogConcaveFunction
    g: LogConcaveFunction
    join: LogConcaveFunction
    meet: LogConcaveFunction
    family: str
    index: int
    seed: int

    def witness(self) -> dict:
        return {"family": self.family, "index": self.index, "seed": self.seed}


def certify_pair(
    f: LogConcaveFunction, g: LogConcaveFunction, family: str = "", index: int = 0, seed: int = 0
) -> Optional[CertifiedPair]:
    """f∨g 를 인증해 CertifiedPair 로 (인증 실패 시 None)"""
    join = pointwise_max(f, g)
    if isinstance(join, NotLogConcave):
        return None
    return CertifiedPair(f, g, join, pointwise_min(f, g), family, index, seed)


# ---------------------------------------------------------------------------
# 무작위 볼록체
# ---------------------------------------------------------------------------

def random_body(rng: np.random.Generator, n: int) -> Polytope:
    """원점을 내부에 포함하는 무작위 다면체"""
    count = 2 * n + 4
    g = rng.normal(size=(count, n))
    g /= np.linalg.norm(g, axis=1)[:, None]
    radii = rng.uniform(0.5, 2.0, size=count)
    core = 0.3 * np.vstack([np.eye(n), -np.eye(n)])
    return hull(np.vstack([g * radii[:, None], core]))


def split_body(rng: np.random.Generator, B: Polytope) -> Tuple[Polytope, Polytope]:
    """
    원점을 지나지 않는 두 평행 초평면으로 B 를 겹치게 자름

    K = B ∩ {w·x ≤ α}, L = B ∩ {w·x ≥ β} (β < 0 < α) 이므로 K ∪ L = B 이고
    K, L 모두 원점을 내부에 포함합니다.
    """
    n = B.dim
    w = rng.normal(size=n)
    w /= np.linalg.norm(w)
    alpha = rng.uniform(0.2, 0.6) * support(B, w)
    beta = -rng.uniform(0.2, 0.6) * support(B, -w)
    K = clip_halfspace(B, HalfSpace(w, alpha))
    L = clip_halfspace(B, HalfSpace(-w, -beta))
    return K, L


def _cone_pair(rng: np.random.Generator, n: int) -> Tuple[LogConcaveFunction, LogConcaveFunction]:
    K, L = split_body(rng, random_body(rng, n))
    p = float(rng.uniform(0.5, 2.0))
    return LogConcaveFunction(cone_fn(K), power=p), LogConcaveFunction(cone_fn(L), power=p)


def _indicator_pair(rng: np.random.Generator, n: int, index: int) -> Tuple[LogConcaveFunction, LogConcaveFunction]:
    if index == 0:
        # T₁ 을 x₁ ≤ ½, x₁ ≥ ¼ 로 자른 겹치는 두 조각
        T = t_lambda(1.0, n)
        e1 = unit_vector(n, 0)
        K = clip_halfspace(T, HalfSpace(e1, 0.5))
        L = clip_halfspace(T, HalfSpace(-e1, -0.25))
        s = 1.0
    else:
        B = random_body(rng, n)
        B = Polytope(B.vertices + rng.normal(scale=0.5, size=n))
        K, L = split_body(rng, B)
        s = float(rng.uniform(0.5, 2.0))
    return LogConcaveFunction(indicator_fn(K), scale=s), LogConcaveFunction(indicator_fn(L), scale=s)


def _mix(rng: np.random.Generator, f: LogConcaveFunction, g: LogConcaveFunction, n: int):
    """공통 평행이동·전단·지수 이동·배율 적용"""
    x = rng.normal(scale=0.5, size=n)
    phi = random_sln(int(rng.integers(0, 2 ** 31)), 2, n)
    t = float(rng.uniform(-0.5, 0.5))
    s = float(rng.uniform(0.5, 2.0))
    out = []
    for h in (f, g):
        h = scale(shift_exponent(translate(precompose_linear(h, phi), x), t), s)
        out.append(h)
    return out[0], out[1]


# ---------------------------------------------------------------------------
# 극한 실험 계열
# ---------------------------------------------------------------------------

def _first_coordinate_halfspace(n: int, sign: float, offset: float) -> HalfSpace:
    return HalfSpace(sign * unit_vector(n, 0), offset)


def segment_cone(h: float, n: int) -> PLConvexFunction:
    """ℓ_{[0, e₁/h]}"""
    if not h > 0:
        raise ParameterError(f"h 는 양수여야 합니다: {h}")
    return cone_fn(segment(np.zeros(n), unit_vector(n, 0) / h))


def u_h_segment(h: float, n: int) -> PLConvexFunction:
    """epi u_h = epi ℓ_{[0,e₁/h]} ∩ {x₁ ≤ 1}"""
    return intersect_domain(segment_cone(h, n), [_first_coordinate_halfspace(n, 1.0, 1.0)])


def ell_h_segment(h: float, n: int) -> PLConvexFunction:
    """ℓ_{[0,e₁/h]} 를 {x₁ ≥ 1} 로 제한 (u_h ∧ ℓ_h = ℓ_{[0,e₁/h]}, u_h ∨ ℓ_h = I_{e₁} + h)"""
    return intersect_domain(segment_cone(h, n), [_first_coordinate_halfspace(n, -1.0, -1.0)])


def u_h_simplex(h: float, n: int) -> PLConvexFunction:
    """{u_h ≤ s} = {ℓ_{T_{1/h}} ≤ s} ∩ {x₁ ≤ 1}"""
    return intersect_domain(cone_fn(t_lambda(1.0 / h, n)), [_first_coordinate_halfspace(n, 1.0, 1.0)])


def v_h_simplex(h: float, n: int) -> PLConvexFunction:
    """ℓ_{T_{1/h}} 를 {x₁ ≥ 1} 로 제한 (min 은 ℓ_{T_{1/h}}, max 는 x₁ = 1 면의 원뿔 함수 + h)"""
    return intersect_domain(cone_fn(t_lambda(1.0 / h, n)), [_first_coordinate_halfspace(n, -1.0, -1.0)])


# ---------------------------------------------------------------------------
# 생성기
# ---------------------------------------------------------------------------

def pair_generator(
    seed: int,
    family: str,
    n: int = 3,
    count: int = 100,
    h_schedule: Sequence[float] = DEFAULT_H_SCHEDULE,
) -> Iterator[CertifiedPair]:
    """
    결정적 인증 쌍 스트림

    Args:
        seed: 난수 시드
        family: cones | indicators | limit_c1c2 | limit_c3d4 | mixed
        n: 차원
        count: cones/indicators/mixed 의 쌍 개수
        h_schedule: 극한 계열의 h 값들

    Yields:
        CertifiedPair (인증 실패한 후보는 경고 후 건너뜀)
    """
    if family not in FAMILIES:
        raise ParameterError(f"알 수 없는 쌍 계열: {family} (가능: {', '.join(FAMILIES)})")
    rng = np.random.default_rng(seed)

    candidates: Iterator[Tuple[int, LogConcaveFunction, LogConcaveFunction]]
    if family == "cones":
        candidates = ((i, *_cone_pair(rng, n)) for i in range(count))
    elif family == "indicators":
        candidates = ((i, *_indicator_pair(rng, n, i)) for i in range(count))
    elif family == "mixed":
        def _mixed():
            for i in range(count):
                f, g = _cone_pair(rng, n) if i % 2 == 0 else _indicator_pair(rng, n, i)
                yield (i, *_mix(rng, f, g, n))
        candidates = _mixed()
    elif family == "limit_c1c2":
        candidates = (
            (i, LogConcaveFunction(u_h_segment(h, n)), LogConcaveFunction(ell_h_segment(h, n)))
            for i, h in enumerate(h_schedule)
        )
    else:
        candidates = (
            (i, LogConcaveFunction(u_h_simplex(h, n)), LogConcaveFunction(v_h_simplex(h, n)))
            for i, h in enumerate(h_schedule)
        )

    for index, f, g in candidates:
        pair = certify_pair(f, g, family, index, seed)
        if pair is None:
            logger.warning(f"인증 실패 쌍 건너뜀: 계열 {family}, 순번 {index}")
            continue
        yield pair


def take_pairs(seed: int, families: Sequence[str], n: int = 3, count: int = 100) -> List[CertifiedPair]:
    """여러 계열에서 쌍을 모아 리스트로"""
    pairs: List[CertifiedPair] = []
    for family in families:
        pairs.extend(pair_generator(seed, family, n=n, count=count))
    return pairs
