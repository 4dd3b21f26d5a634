"""
로그 오목 함수 모듈

f = s·e^{−p·u} (u 는 강제적 PL 볼록 함수) 형태로 로그 오목 함수를 보관합니다.
s·f 와 f^q 는 (s, p) 만 바꾸므로 표현이 정확하게 유지되며,
상위 레벨 집합과 격자 연산은 모두 지수 u 쪽에서 계산됩니다.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .convex_fn import (
    NotCoercive,
    NotConvex,
    PLConvexFunction,
    EpiConvergenceReport,
    add_constant,
    coercivity_check,
    cone_fn,
    epi_convergence_diagnostic,
    evaluate as evaluate_convex,
    indicator_fn,
    min_value,
    pointwise_max as convex_max,
    pointwise_min as convex_min,
    precompose_linear as convex_precompose,
    scale_values,
    sublevel_set,
    translate_fn,
)
from .exceptions import DimensionMismatchError, NotCoerciveError, ParameterError
from .polytope_core import Body, LinearMap, Polytope

logger = logging.getLogger(__name__)


class NotLogConcave:
    """
    f∨g 가 로그 오목이 아님을 나타내는 값

    Args:
        reason: 설명
        witness: 지수 쪽 NotConvex 의 위반점 (x, τ)
    """

    def __init__(self, reason: str, witness: Optional[np.ndarray] = None):
        self.reason = reason
        self.witness = witness

    def __repr__(self) -> str:
        return f"NotLogConcave({self.reason})"


class LogConcaveFunction:
    """
    로그 오목 함수 f(x) = scale · exp(−power · u(x))

    Args:
        base: 강제적 PL 볼록 함수 u
        scale: 양의 배율 s
        power: 양의 지수 p
    """

    def __init__(self, base: PLConvexFunction, scale: float = 1.0, power: float = 1.0):
        if not scale > 0:
            raise ParameterError(f"배율 s 는 양수여야 합니다: {scale}")
        if not power > 0:
            raise ParameterError(f"지수 q 는 양수여야 합니다: {power}")
        self._base = base
        self._scale = float(scale)
        self._power = float(power)

    @property
    def base(self) -> PLConvexFunction:
        return self._base

    @property
    def scale(self) -> float:
        return self._scale

    @property
    def power(self) -> float:
        return self._power

    @property
    def dim(self) -> int:
        return self._base.dim

    @cached_property
    def effective_base(self) -> PLConvexFunction:
        """f = e^{−w} 인 w = p·u − log s"""
        if self._scale == 1.0 and self._power == 1.0:
            return self._base
        w = self._base if self._power == 1.0 else scale_values(self._base, self._power)
        return add_constant(w, -math.log(self._scale)) if self._scale != 1.0 else w

    @property
    def key(self):
        return (self._base.key, self._scale, self._power)

    def __hash__(self) -> int:
        return hash(self.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, LogConcaveFunction) and self.key == other.key

    def __call__(self, x) -> float:
        return evaluate(self, x)

    def __repr__(self) -> str:
        return f"LogConcaveFunction(base={self._base!r}, s={self._scale:.6g}, p={self._power:.6g})"


# ---------------------------------------------------------------------------
# 생성과 변환
# ---------------------------------------------------------------------------

def from_convex(u: PLConvexFunction) -> LogConcaveFunction:
    """e^{−u} (u 가 강제적이지 않으면 NotCoerciveError)"""
    if not u.is_coercive:
        marker = coercivity_check(u)
        if isinstance(marker, NotCoercive):
            raise NotCoerciveError(marker)
    return LogConcaveFunction(u)


def to_convex(f: LogConcaveFunction) -> PLConvexFunction:
    """f = e^{−w} 의 지수 w"""
    return f.effective_base


def characteristic_fn(K: Polytope, s: float = 1.0) -> LogConcaveFunction:
    """s·χ_K"""
    return LogConcaveFunction(indicator_fn(K), scale=s)


def exp_cone_fn(K: Polytope, q: float = 1.0) -> LogConcaveFunction:
    """e^{−q·ℓ_K}"""
    return LogConcaveFunction(cone_fn(K), power=q)


def evaluate(f: LogConcaveFunction, x) -> float:
    value = evaluate_convex(f.base, x)
    if math.isinf(value):
        return 0.0
    return f.scale * math.exp(-f.power * value)


def scale(f: LogConcaveFunction, s: float) -> LogConcaveFunction:
    """s·f"""
    if not s > 0:
        raise ParameterError(f"배율 s 는 양수여야 합니다: {s}")
    return LogConcaveFunction(f.base, f.scale * s, f.power)


def power(f: LogConcaveFunction, q: float) -> LogConcaveFunction:
    """f^q = s^q e^{−qp·u}"""
    if not q > 0:
        raise ParameterError(f"지수 q 는 양수여야 합니다: {q}")
    return LogConcaveFunction(f.base, f.scale ** q, f.power * q)


def translate(f: LogConcaveFunction, x) -> LogConcaveFunction:
    """f∘τ_x⁻¹"""
    return LogConcaveFunction(translate_fn(f.base, x), f.scale, f.power)


def precompose_linear(f: LogConcaveFunction, phi: LinearMap) -> LogConcaveFunction:
    """f∘φ⁻¹"""
    return LogConcaveFunction(convex_precompose(f.base, phi), f.scale, f.power)


def shift_exponent(f: LogConcaveFunction, t: float) -> LogConcaveFunction:
    """e^{−(u+t)} 꼴: 지수에 t 를 더함 (f 에 e^{−pt} 를 곱함)"""
    return LogConcaveFunction(add_constant(f.base, t), f.scale, f.power)


def max_value(f: LogConcaveFunction) -> float:
    """max f = s·e^{−p·min u}"""
    return f.scale * math.exp(-f.power * min_value(f.base))


def log_max_value(f: LogConcaveFunction) -> float:
    """log max f (큰 지수에서도 넘침 없이)"""
    return math.log(f.scale) - f.power * min_value(f.base)


def superlevel_set(f: LogConcaveFunction, t: float) -> Body:
    """
    상위 레벨 집합 {f ≥ t}

    Args:
        f: 로그 오목 함수
        t: 양의 레벨 (max f 보다 크면 EMPTY)
    """
    if not t > 0:
        raise ParameterError(f"레벨 t 는 양수여야 합니다: {t}")
    return sublevel_set(f.base, (math.log(f.scale) - math.log(t)) / f.power)


def _check_pair(f: LogConcaveFunction, g: LogConcaveFunction):
    if f.dim != g.dim:
        raise DimensionMismatchError(f"차원 불일치: {f.dim} vs {g.dim}")


def pointwise_max(f: LogConcaveFunction, g: LogConcaveFunction) -> Union[LogConcaveFunction, NotLogConcave]:
    """f∨g = e^{−(u∧v)} (u∧v 가 볼록으로 인증되지 않으면 NotLogConcave)"""
    _check_pair(f, g)
    result = convex_min(f.effective_base, g.effective_base)
    if isinstance(result, NotConvex):
        return NotLogConcave(result.reason, witness=result.witness)
    return LogConcaveFunction(result)


def pointwise_min(f: LogConcaveFunction, g: LogConcaveFunction) -> LogConcaveFunction:
    """f∧g = e^{−(u∨v)} (지지 집합이 겹치지 않으면 EmptyDomainError)"""
    _check_pair(f, g)
    return LogConcaveFunction(convex_max(f.effective_base, g.effective_base))


@dataclass
class HypoConvergenceReport:
    """상위 레벨 집합 수렴 진단 (epi 진단의 표를 레벨 t 로 다시 표기)"""

    epi: EpiConvergenceReport

    @property
    def table(self):
        return self.epi.table

    @property
    def summary(self):
        return self.epi.summary

    @property
    def final_gaps(self) -> np.ndarray:
        return self.epi.final_gaps


def hypo_convergence_diagnostic(
    f_seq: Union[Sequence[LogConcaveFunction], Mapping[float, LogConcaveFunction]],
    f: LogConcaveFunction,
    t_grid: Sequence[float],
) -> HypoConvergenceReport:
    """
    f_k →hypo f 진단: 레벨 t 에서 δ({f_k ≥ t}, {f ≥ t})

    t 는 (0, max f) 안에 있고 max f 와 달라야 합니다.
    """
    for t in t_grid:
        if not t > 0:
            raise ParameterError(f"레벨 t 는 양수여야 합니다: {t}")
    levels = [-math.log(t) for t in t_grid]
    if isinstance(f_seq, Mapping):
        bases = {k: g.effective_base for k, g in f_seq.items()}
    else:
        bases = [g.effective_base for g in f_seq]
    report = epi_convergence_diagnostic(bases, f.effective_base, levels)
    back = {s: t for s, t in zip(levels, t_grid)}
    report.table["t"] = report.table["t"].map(lambda s: back.get(s, math.exp(-s)))
    report.summary["t"] = report.summary["t"].map(lambda s: back.get(s, math.exp(-s)))
    return HypoConvergenceReport(epi=report)
