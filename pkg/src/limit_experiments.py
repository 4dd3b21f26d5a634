"""
극한 실험과 미분 관계 검사

1) 선분 계열 u_h: h(Y(u_h), e₁) 를 밸류에이션 항등식으로 조립해 q·d₁ 로의 수렴을 확인
2) 단체 계열: a(1 − e^{−qh})/h² − b e^{−qh}/h 의 세 가지 극한 유형 판정
3) 실수값 밸류에이션의 ζ_n = ((−1)ⁿ/n!) ψ_n^{(n)} 관계를 중심 차분으로 확인
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.special import comb

from .convex_fn import add_constant, cone_fn, indicator_fn, translate_fn
from .exceptions import ParameterError
from .functionals import DEFAULT_CONFIG
from .layer_cake import QuadratureConfig
from .log_concave import LogConcaveFunction, translate
from .pair_families import (
    DEFAULT_H_SCHEDULE,
    ell_h_segment,
    segment_cone,
    u_h_segment,
    u_h_simplex,
    v_h_simplex,
)
from .polytope_core import cube, hull, point, t_lambda, unit_vector
from .valuation_lab import (
    MINKOWSKI,
    REAL,
    BlackBoxValuation,
    CheckReport,
    ValuationSpec,
    cone_probe_constants,
)

logger = logging.getLogger(__name__)

FINITE = "finite"
PLUS_INFINITY = "+inf"
MINUS_INFINITY = "-inf"


@dataclass
class LimitReport:
    """
    극한 실험 결과

    Attributes:
        table: h 별 값 표 (DataFrame)
        summary: 관측 수렴률, 외삽값, 극한 유형 등
    """

    name: str
    table: pd.DataFrame
    summary: Dict[str, object] = field(default_factory=dict)
    passed: bool = True

    def to_record(self) -> dict:
        record = {"experiment": self.name, "pass": self.passed}
        record.update(self.summary)
        return record


def _check_schedule(h_schedule: Sequence[float]) -> np.ndarray:
    h = np.asarray(h_schedule, dtype=float)
    if len(h) < 3:
        raise ParameterError("h 스케줄에는 최소 3 개의 값이 필요합니다.")
    if np.any(h <= 0) or np.any(np.diff(h) >= 0):
        raise ParameterError("h 스케줄은 양수이며 엄격히 감소해야 합니다.")
    return h


def _Y(Z: BlackBoxValuation, u, z: np.ndarray) -> float:
    """h(Y(u), z) where Y(u) = Z(e^{−u})"""
    return float(Z(LogConcaveFunction(u)).query_many(z[None, :])[0])


def richardson_table(h: np.ndarray, values: np.ndarray, depth: int = 3) -> np.ndarray:
    """
    h 가 절반씩 줄어드는 수열의 리처드슨 외삽표

    T[k, 0] = A(h_k), T[k, j] = (2^j T[k, j−1] − T[k−1, j−1]) / (2^j − 1)
    """
    ratios = h[:-1] / h[1:]
    if not np.allclose(ratios, 2.0):
        raise ParameterError("리처드슨 외삽에는 h_{k+1} = h_k / 2 스케줄이 필요합니다.")
    table = np.full((len(values), depth + 1), np.nan)
    table[:, 0] = values
    for j in range(1, depth + 1):
        for k in range(j, len(values)):
            table[k, j] = (2.0 ** j * table[k, j - 1] - table[k - 1, j - 1]) / (2.0 ** j - 1.0)
    return table


def observed_rate(h: np.ndarray, errors: np.ndarray) -> float:
    """log(오차) 대 log h 기울기 (오차가 0 이면 nan)"""
    mask = errors > 1e-13
    if np.sum(mask) < 2:
        return math.nan
    return float(np.polyfit(np.log(h[mask]), np.log(errors[mask]), 1)[0])


def limit_experiment_c1c2(
    spec: ValuationSpec,
    h_schedule: Sequence[float] = DEFAULT_H_SCHEDULE,
    n: int = 3,
    tol: float = 1e-6,
    config: QuadratureConfig = DEFAULT_CONFIG,
    rate_tol: float = 0.2,
) -> LimitReport:
    """
    c₁ = q·d₁ 극한 실험

    h(Y(u_h), e₁) = h(Y(ℓ_{[0,e₁/h]}), e₁) + h(Y(I_{e₁} + h), e₁) − h(Y(ℓ_h), e₁) 를
    실제 범함수 값으로 조립하고, d₁(1 − e^{−qh})/h 가 q·d₁ 로 1차 수렴하는지 봅니다.

    Args:
        rate_tol: 관측 수렴률과 1 의 허용 차이. 모든 h 에서 극한 오차가 tol 이하면
            수렴률은 보지 않습니다 (d₁ = 0).
    """
    if spec.kind != MINKOWSKI:
        raise ParameterError("극한 실험에는 민코프스키 명세가 필요합니다.")
    h = _check_schedule(h_schedule)
    Z = BlackBoxValuation.from_spec(spec, n, config)
    q = spec.q
    e1 = unit_vector(n, 0)
    d1 = cone_probe_constants(Z, lambdas=(1.0, 2.0, 4.0))["d1"]
    limit = q * d1

    rows = []
    for hk in h:
        seg = _Y(Z, segment_cone(hk, n), e1)
        apex = _Y(Z, add_constant(indicator_fn(point(e1)), hk), e1)
        ell = _Y(Z, ell_h_segment(hk, n), e1)
        assembled = seg + apex - ell
        direct = _Y(Z, u_h_segment(hk, n), e1)
        closed = d1 * (-math.expm1(-q * hk)) / hk
        rows.append({
            "h": hk,
            "assembled": assembled,
            "direct": direct,
            "closed": closed,
            "identity_residual": abs(assembled - direct),
            "closed_residual": abs(assembled - closed),
            "limit_error": abs(assembled - limit),
        })
    table = pd.DataFrame(rows)

    values = table["assembled"].to_numpy()
    depth = min(3, len(h) - 1)
    extrapolated = float(richardson_table(h, values, depth)[-1, depth])
    limit_errors = table["limit_error"].to_numpy()
    rate = observed_rate(h, limit_errors)
    rate_ok = bool(limit_errors.max() <= tol or abs(rate - 1.0) <= rate_tol)
    summary = {
        "q": q,
        "d1": d1,
        "limit": limit,
        "richardson": extrapolated,
        "richardson_error": abs(extrapolated - limit),
        "observed_rate": rate,
        "rate_ok": rate_ok,
        "max_identity_residual": float(table["identity_residual"].max()),
    }
    passed = summary["richardson_error"] <= tol and summary["max_identity_residual"] <= 1e-7 and rate_ok
    if not rate_ok:
        logger.warning(f"c1/c2 극한: 관측 수렴률 {rate:.3g} 이 1 에서 {rate_tol:g} 넘게 벗어남")
    logger.info(f"c1/c2 극한: 외삽 {extrapolated:.10g}, 기대 {limit:.10g}, 수렴률 {rate:.3g}")
    return LimitReport("limit_c1c2", table, summary, passed)


def _fit_singular_part(h: np.ndarray, values: np.ndarray) -> Tuple[float, float]:
    """values ≈ α/h + β + γh 최소제곱"""
    design = np.column_stack([1.0 / h, np.ones_like(h), h])
    coef, _, _, _ = np.linalg.lstsq(design, values, rcond=None)
    return float(coef[0]), float(coef[1])


def limit_experiment_c3d4(
    spec: ValuationSpec,
    h_schedule: Sequence[float] = DEFAULT_H_SCHEDULE,
    n: int = 3,
    perturbation: float = 0.0,
    tol: float = 1e-4,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> LimitReport:
    """
    a(1 − e^{−qh})/h² − b e^{−qh}/h 의 극한 유형 판정

    a = (d₃+d₄)/(n+1)! 는 원뿔 탐침에서, b = c₃/qⁿ 는 평행이동 차이
    h(Y(ℓ_{T_λ}∘τ_{e₁}⁻¹), e₁) − h(Y(ℓ_{T_λ}), e₁) 의 λ 기울기에서 얻습니다.
    b = qa 이면 극한은 qb/2, b < qa 이면 +∞, b > qa 이면 −∞ 입니다.

    Args:
        perturbation: b 에 곱할 (1 + perturbation) 교란
    """
    if spec.kind != MINKOWSKI:
        raise ParameterError("극한 실험에는 민코프스키 명세가 필요합니다.")
    h = _check_schedule(h_schedule)
    Z = BlackBoxValuation.from_spec(spec, n, config)
    q = spec.q
    e1 = unit_vector(n, 0)
    fact = math.factorial(n + 1)

    d = cone_probe_constants(Z, lambdas=(1.0, 2.0, 4.0))
    a = (d["d3"] + d["d4"]) / fact

    lambdas = np.array([1.0, 2.0, 4.0])
    z0 = []
    for lam in lambdas:
        f = LogConcaveFunction(cone_fn(t_lambda(float(lam), n)))
        z0.append(float(Z(translate(f, e1)).query(e1)) - float(Z(f).query(e1)))
    b = float(np.polyfit(lambdas, np.asarray(z0), 1)[0])
    b_used = b * (1.0 + perturbation)

    face = cone_fn(_face_simplex(n))
    rows = []
    for hk in h:
        closed = a * (-math.expm1(-q * hk)) / hk ** 2 - b_used * math.exp(-q * hk) / hk
        big = _Y(Z, cone_fn(t_lambda(1.0 / hk, n)), e1)
        lifted = _Y(Z, add_constant(_shift_first(face, n), hk), e1)
        partner = _Y(Z, v_h_simplex(hk, n), e1)
        direct = _Y(Z, u_h_simplex(hk, n), e1)
        assembled = big + lifted - partner
        rows.append({
            "h": hk,
            "closed": closed,
            "assembled": assembled,
            "direct": direct,
            "identity_residual": abs(assembled - direct),
        })
    table = pd.DataFrame(rows)

    values = table["closed"].to_numpy()
    tail = slice(max(0, len(h) - 6), len(h))
    alpha, beta = _fit_singular_part(h[tail], values[tail])
    scale = max(1.0, abs(b), abs(q * a))
    steps = np.diff(values[tail])
    if abs(alpha) <= 1e-7 * scale:
        case = FINITE
    elif alpha > 0:
        case = PLUS_INFINITY
    else:
        case = MINUS_INFINITY
    monotone = bool(np.all(steps > 0) or np.all(steps < 0))

    expected_finite = q * b / 2.0
    summary = {
        "q": q,
        "a": a,
        "b": b,
        "b_used": b_used,
        "qa": q * a,
        "case": case,
        "singular_coefficient": alpha,
        "limit_estimate": beta if case == FINITE else (math.inf if case == PLUS_INFINITY else -math.inf),
        "expected_finite": expected_finite,
        "finite_error": abs(beta - expected_finite) if case == FINITE else math.nan,
        "monotone": monotone,
        "d4": d["d4"],
        "max_identity_residual": float(table["identity_residual"].max()),
    }
    if perturbation == 0.0:
        passed = case == FINITE and summary["finite_error"] <= tol
    else:
        wanted = PLUS_INFINITY if b_used < q * a else MINUS_INFINITY
        passed = case == wanted and monotone
    logger.info(f"c3/d4 극한: 유형 {case}, a={a:.6g}, b={b_used:.6g}, 특이 계수 {alpha:.3e}")
    return LimitReport("limit_c3d4", table, summary, passed)


def _face_simplex(n: int):
    """x₁ = 0 면의 단체 conv{0, e₂, …, e_n}"""
    return hull([np.zeros(n)] + [unit_vector(n, i) for i in range(1, n)])


def _shift_first(u, n: int):
    """u∘τ_{e₁}⁻¹"""
    return translate_fn(u, unit_vector(n, 0))


# ---------------------------------------------------------------------------
# ζ/ψ 미분 관계
# ---------------------------------------------------------------------------

def central_difference(fn, t: float, order: int, step: float) -> float:
    """n 계 중심 차분 Σ_k (−1)^k C(n,k) F(t + (n/2 − k)δ) / δⁿ"""
    total = 0.0
    for k in range(order + 1):
        total += (-1) ** k * comb(order, k, exact=True) * fn(t + (order / 2.0 - k) * step)
    return total / step ** order


def zeta_derivative_check(
    spec: ValuationSpec,
    t_grid: Optional[Sequence[float]] = None,
    n: int = 3,
    step: float = 1e-2,
    tol: float = 1e-4,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> CheckReport:
    """
    ζ_n(t) = ((−1)ⁿ/n!) ψ_n^{(n)}(t) 검사

    ζ₀(t) = Y(I_{0} + t), ψ_n(t) = (Y(ℓ_K + t) − ζ₀(t))/V_n(K),
    ζ_n(t) = (Y(I_K + t) − ζ₀(t))/V_n(K), K = [−1, 1]ⁿ.
    오차는 max(1, |ζ_n|) 로 나눈 상대 오차입니다. extra["table"] 에 격자별 값이 있습니다.
    """
    if spec.kind != REAL:
        raise ParameterError("ζ 검사에는 실수값 명세가 필요합니다.")
    if t_grid is None:
        t_grid = np.linspace(-1.0, 3.0, 17)
    Z = BlackBoxValuation.from_spec(spec, n, config)
    K = cube(n, -1.0, 1.0)
    vol = K.volume
    cone = cone_fn(K)
    indicator = indicator_fn(K)
    origin = indicator_fn(point(np.zeros(n)))

    def Y(u) -> float:
        return float(Z(LogConcaveFunction(u)))

    def zeta0(t: float) -> float:
        return Y(add_constant(origin, t))

    def psi(t: float) -> float:
        return (Y(add_constant(cone, t)) - zeta0(t)) / vol

    def zeta_n(t: float) -> float:
        return (Y(add_constant(indicator, t)) - zeta0(t)) / vol

    sign = (-1) ** n / math.factorial(n)
    q, c0, cn = spec.q, spec.c0, spec.cn
    rows = []
    for t in t_grid:
        t = float(t)
        zn = zeta_n(t)
        derived = sign * central_difference(psi, t, n, step)
        ps = psi(t)
        rows.append({
            "t": t,
            "zeta0": zeta0(t),
            "psi": ps,
            "zeta_n": zn,
            "derivative_relation": derived,
            "relation_error": abs(derived - zn) / max(1.0, abs(zn)),
            "oracle_zeta0_error": abs(zeta0(t) - c0 * math.exp(-q * t)),
            "oracle_zeta_n_error": abs(zn - cn * math.exp(-q * t)),
            "oracle_psi_error": abs(ps - cn * math.factorial(n) / q ** n * math.exp(-q * t)) if cn else abs(ps),
        })
    table = pd.DataFrame(rows)

    psi_abs = np.abs(table["psi"].to_numpy())
    decay = float(psi_abs[-1] / psi_abs[0]) if psi_abs[0] > 0 else 0.0
    worst = float(table["relation_error"].max())
    passed = worst <= tol
    if not passed:
        logger.warning(f"ζ/ψ 관계 실패: 최대 상대 오차 {worst:.3e}")
    extra = {
        "table": table,
        "psi_decay_ratio": decay,
        "psi_decreasing": bool(np.all(np.diff(psi_abs) <= 1e-12)),
        "max_oracle_error": float(table[["oracle_zeta0_error", "oracle_zeta_n_error", "oracle_psi_error"]].to_numpy().max()),
    }
    return CheckReport(
        "zeta_derivative", len(rows), worst, tol, passed,
        witness=None if passed else {"t": float(table.loc[table["relation_error"].idxmax(), "t"]), "spec": spec.describe()},
        extra=extra,
    )
