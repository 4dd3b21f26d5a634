"""
밸류에이션 실험실

블랙박스 범함수 Z 에 대해 밸류에이션 항등식, SL(n)/평행이동 공변성,
동차성을 수치로 검사하고, 민코프스키 값/실수값 밸류에이션의 분류 상수
(c₁, c₂, c₃, q), (c₀, c_n, q) 와 원뿔 탐침 상수 d₁…d₄ 를 복원합니다.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from .exceptions import ParameterError, SpecError
from .functionals import DEFAULT_CONFIG, SupportEvaluator, V0_pow, Vn_pow, level_set_body, moment_vector_fn
from .layer_cake import QuadratureConfig
from .log_concave import (
    LogConcaveFunction,
    NotLogConcave,
    characteristic_fn,
    exp_cone_fn,
    pointwise_max,
    pointwise_min,
    precompose_linear,
    scale,
    translate,
)
from .pair_families import CertifiedPair
from .polytope_core import (
    LinearMap,
    box,
    cube,
    direction_net,
    point,
    segment,
    t_lambda,
    translate as translate_body,
    unit_vector,
)

logger = logging.getLogger(__name__)

MINKOWSKI = "minkowski"
REAL = "real"

DEFAULT_S_GRID = (0.5, 1.0, 2.0, 4.0)
HOMOGENEITY_SPREAD = 1e-6


# ---------------------------------------------------------------------------
# 밸류에이션 명세
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValuationSpec:
    """
    분류 정리의 상수 묶음

    민코프스키: Z(f) = c1[f^q] + c2(−[f^q]) + c3 m(f^q), c1, c2 ≥ 0, q > 0
    실수값: Z(f) = c0 V₀(f)^q + cn V_n(f^q), cn ≠ 0 이면 q > 0
    """

    kind: str
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c0: float = 0.0
    cn: float = 0.0
    q: float = 1.0
    name: str = ""

    def __post_init__(self):
        if self.kind == MINKOWSKI:
            if self.c1 < 0 or self.c2 < 0:
                raise SpecError(f"c1, c2 는 음수일 수 없습니다: c1={self.c1}, c2={self.c2}")
            if not self.q > 0:
                raise SpecError(f"민코프스키 밸류에이션의 q 는 양수여야 합니다: {self.q}")
        elif self.kind == REAL:
            if self.cn != 0 and not self.q > 0:
                raise SpecError(f"cn ≠ 0 이면 q 는 양수여야 합니다: q={self.q}")
        else:
            raise SpecError(f"알 수 없는 밸류에이션 종류: {self.kind}")
        for value in (self.c1, self.c2, self.c3, self.c0, self.cn, self.q):
            if not math.isfinite(value):
                raise SpecError("밸류에이션 상수는 유한해야 합니다.")

    @staticmethod
    def minkowski(c1: float, c2: float, c3: float, q: float, name: str = "") -> "ValuationSpec":
        return ValuationSpec(MINKOWSKI, c1=c1, c2=c2, c3=c3, q=q, name=name)

    @staticmethod
    def real(c0: float, cn: float, q: float, name: str = "") -> "ValuationSpec":
        return ValuationSpec(REAL, c0=c0, cn=cn, q=q, name=name)

    @property
    def constants(self) -> Dict[str, float]:
        if self.kind == MINKOWSKI:
            return {"c1": self.c1, "c2": self.c2, "c3": self.c3, "q": self.q}
        return {"c0": self.c0, "cn": self.cn, "q": self.q}

    def describe(self) -> str:
        body = ", ".join(f"{k}={v:.12g}" for k, v in self.constants.items())
        label = f"{self.name}: " if self.name else ""
        return f"{label}{self.kind}({body})"


BUILTIN_SPECS: Dict[str, ValuationSpec] = {
    "level-set-body": ValuationSpec.minkowski(1.0, 0.0, 0.0, 1.0, name="level-set-body"),
    "reflected-body": ValuationSpec.minkowski(0.0, 1.0, 0.0, 1.0, name="reflected-body"),
    "difference-body": ValuationSpec.minkowski(1.0, 1.0, 0.0, 1.0, name="difference-body"),
    "moment-vector": ValuationSpec.minkowski(0.0, 0.0, 1.0, 1.0, name="moment-vector"),
    "euler": ValuationSpec.real(1.0, 0.0, 1.0, name="euler"),
    "volume": ValuationSpec.real(0.0, 1.0, 1.0, name="volume"),
}


def evaluate_spec_valuation(
    spec: ValuationSpec, f: LogConcaveFunction, config: QuadratureConfig = DEFAULT_CONFIG
) -> Union[SupportEvaluator, float]:
    """
    명세 밸류에이션 Z(f)

    Returns:
        민코프스키: SupportEvaluator, 실수값: float
    """
    q = spec.q
    if spec.kind == REAL:
        value = spec.c0 * V0_pow(f, q) if spec.c0 != 0.0 else 0.0
        if spec.cn != 0.0:
            value += spec.cn * Vn_pow(f, q, config)
        return value

    body = level_set_body(f, q, config) if (spec.c1 or spec.c2) else None
    m = moment_vector_fn(f, q, config) if spec.c3 else None
    c1, c2, c3 = spec.c1, spec.c2, spec.c3

    def batch(d: np.ndarray) -> np.ndarray:
        total = np.zeros(d.shape[0])
        if c1:
            total += c1 * body.query_many(d)
        if c2:
            total += c2 * body.query_many(-d)
        if c3:
            total += c3 * (d @ m)
        return total

    return SupportEvaluator(
        batch, f.dim, degree=q, provenance=spec.describe(),
        diagnostics=body.diagnostics if body is not None else {},
    )


class BlackBoxValuation:
    """
    블랙박스 범함수 Z : LC(ℝⁿ) → 볼록체 (SupportEvaluator) 또는 ℝ

    Args:
        evaluate: f ↦ Z(f)
        kind: "minkowski" 또는 "real"
        dim: 공간 차원
        name: 보고용 이름
        serial: True 면 동시 평가하지 않음
        notes: 정의역 등에 대한 설명
    """

    def __init__(
        self,
        evaluate: Callable[[LogConcaveFunction], Union[SupportEvaluator, float]],
        kind: str,
        dim: int,
        name: str = "",
        serial: bool = False,
        notes: str = "",
        spec: Optional[ValuationSpec] = None,
    ):
        if kind not in (MINKOWSKI, REAL):
            raise SpecError(f"알 수 없는 밸류에이션 종류: {kind}")
        self._evaluate = evaluate
        self.kind = kind
        self.dim = dim
        self.name = name or (spec.describe() if spec else "blackbox")
        self.serial = serial
        self.notes = notes
        self.spec = spec

    @staticmethod
    def from_spec(spec: ValuationSpec, dim: int, config: QuadratureConfig = DEFAULT_CONFIG) -> "BlackBoxValuation":
        return BlackBoxValuation(
            lambda f: evaluate_spec_valuation(spec, f, config),
            spec.kind, dim, name=spec.describe(), spec=spec,
        )

    def __call__(self, f: LogConcaveFunction):
        return self._evaluate(f)

    def support_values(self, f: LogConcaveFunction, directions: np.ndarray) -> np.ndarray:
        """민코프스키면 방향별 지지함수, 실수값이면 길이 1 배열"""
        value = self._evaluate(f)
        if self.kind == REAL:
            return np.array([float(value)])
        return value.query_many(directions)

    def __repr__(self) -> str:
        return f"BlackBoxValuation(종류={self.kind}, n={self.dim}, 이름='{self.name}')"


# ---------------------------------------------------------------------------
# 보고서
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    """
    성질 검사 결과

    실패한 경우 witness 에 재현 정보 (시드, 계열, 순번, 방향, 명세) 가 들어 있습니다.
    """

    property: str
    samples: int
    max_residual: float
    tol: float
    passed: bool
    witness: Optional[dict] = None
    skipped: int = 0
    extra: Dict[str, object] = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "property": self.property,
            "samples": self.samples,
            "residual": self.max_residual,
            "tol": self.tol,
            "skipped": self.skipped,
            "pass": self.passed,
            "witness_seed": (self.witness or {}).get("seed"),
            "witness": repr(self.witness) if self.witness else "",
        }


@dataclass
class ClassifyReport:
    """분류 상수 복원 결과"""

    kind: str
    constants: Dict[str, float]
    residuals: Dict[str, float]
    cross_validation: Dict[str, float]
    d_constants: Dict[str, float] = field(default_factory=dict)
    tol: float = 1e-4
    passed: bool = True
    trivial: bool = False
    message: str = ""

    def to_record(self) -> dict:
        record = {"kind": self.kind, "pass": self.passed, "trivial": self.trivial}
        record.update(self.constants)
        record.update({f"d_{k}": v for k, v in self.d_constants.items()})
        record.update({f"residual_{k}": v for k, v in self.residuals.items()})
        record.update({f"cv_{k}": v for k, v in self.cross_validation.items()})
        if self.message:
            record["message"] = self.message
        return record

    def as_spec(self, zero_tol: float = 1e-12) -> Optional[ValuationSpec]:
        """복원 상수를 명세로 (작은 음수 c1, c2 는 0 으로)"""
        if self.trivial:
            return None
        c = self.constants
        if self.kind == MINKOWSKI:
            return ValuationSpec.minkowski(max(c["c1"], 0.0), max(c["c2"], 0.0), c["c3"], c["q"])
        cn = c["cn"] if abs(c["cn"]) > zero_tol * (1.0 + abs(c["c0"])) else 0.0
        return ValuationSpec.real(c["c0"], cn, c["q"])


# ---------------------------------------------------------------------------
# 검사기
# ---------------------------------------------------------------------------

def _default_directions(n: int, directions: Optional[np.ndarray]) -> np.ndarray:
    if directions is None:
        return direction_net(n, 200, seed=0)
    return np.atleast_2d(np.asarray(directions, dtype=float))


def _map(Z: BlackBoxValuation, fn, items: Sequence, workers: int, desc: str, show_progress: bool) -> List:
    """직렬 또는 스레드 풀로 평가 (결과 순서 유지)"""
    if workers > 1 and not Z.serial:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(fn, items)
            return list(tqdm(results, total=len(items), desc=desc, disable=not show_progress))
    return [fn(item) for item in tqdm(items, desc=desc, disable=not show_progress)]


def _as_pair(item, index: int) -> Optional[CertifiedPair]:
    if isinstance(item, CertifiedPair):
        return item
    f, g = item
    join = pointwise_max(f, g)
    if isinstance(join, NotLogConcave):
        return None
    return CertifiedPair(f, g, join, pointwise_min(f, g), "custom", index, 0)


def check_valuation_identity(
    Z: BlackBoxValuation,
    pairs: Iterable,
    tol: float = 1e-7,
    directions: Optional[np.ndarray] = None,
    workers: int = 1,
    show_progress: bool = False,
) -> CheckReport:
    """
    Z(f∨g) + Z(f∧g) = Z(f) + Z(g) 검사 (민코프스키 합은 지지함수의 합)

    Args:
        Z: 블랙박스 밸류에이션
        pairs: CertifiedPair 또는 (f, g) 튜플들 (인증 실패 쌍은 건너뛰고 셈)
        tol: 허용 잔차
        directions: 지지함수 방향 (기본: 200 개 방향망)
    """
    dirs = _default_directions(Z.dim, directions)
    certified: List[CertifiedPair] = []
    skipped = 0
    for index, item in enumerate(pairs):
        pair = _as_pair(item, index)
        if pair is None:
            skipped += 1
            logger.warning(f"인증되지 않은 쌍 건너뜀: 순번 {index}")
            continue
        certified.append(pair)

    def residual(pair: CertifiedPair) -> np.ndarray:
        lhs = Z.support_values(pair.join, dirs) + Z.support_values(pair.meet, dirs)
        rhs = Z.support_values(pair.f, dirs) + Z.support_values(pair.g, dirs)
        return np.abs(lhs - rhs)

    results = _map(Z, residual, certified, workers, "밸류에이션 항등식 검사", show_progress)
    worst, witness = 0.0, None
    for pair, res in zip(certified, results):
        k = int(np.argmax(res))
        if res[k] > worst:
            worst = float(res[k])
            witness = dict(pair.witness())
            if Z.kind == MINKOWSKI:
                witness["direction"] = dirs[k].tolist()
            witness["spec"] = Z.name

    passed = worst <= tol
    if not passed:
        logger.warning(f"밸류에이션 항등식 실패: 잔차 {worst:.3e} > {tol:.1e}, 증거 {witness}")
    report = CheckReport(
        "valuation_identity", len(certified), worst, tol, passed,
        witness=None if passed else witness, skipped=skipped,
    )
    logger.info(f"밸류에이션 항등식: 쌍 {len(certified)}개, 최대 잔차 {worst:.3e}")
    return report


def check_sln_covariance(
    Z: BlackBoxValuation,
    functions: Sequence[LogConcaveFunction],
    maps: Sequence[LinearMap],
    tol: float = 1e-8,
    directions: Optional[np.ndarray] = None,
    workers: int = 1,
    show_progress: bool = False,
) -> CheckReport:
    """
    Z(f∘φ⁻¹) = φZ(f) 검사: h(Z(f∘φ⁻¹), z) 와 h(Z(f), φᵀz) 비교

    실수값이면 SL(n) 불변성 Z(f∘φ⁻¹) = Z(f) 를 검사합니다.
    """
    dirs = _default_directions(Z.dim, directions)
    samples = [(i, j) for i in range(len(functions)) for j in range(len(maps))]

    def residual(item: Tuple[int, int]) -> np.ndarray:
        f, phi = functions[item[0]], maps[item[1]]
        moved = Z.support_values(precompose_linear(f, phi), dirs)
        if Z.kind == REAL:
            return np.abs(moved - Z.support_values(f, dirs))
        return np.abs(moved - Z.support_values(f, phi.transpose().apply(dirs)))

    results = _map(Z, residual, samples, workers, "SL(n) 공변성 검사", show_progress)
    worst, witness = 0.0, None
    for (i, j), res in zip(samples, results):
        k = int(np.argmax(res))
        if res[k] > worst:
            worst = float(res[k])
            witness = {"function": i, "map": j, "matrix": maps[j].matrix.tolist(), "spec": Z.name}
            if Z.kind == MINKOWSKI:
                witness["direction"] = dirs[k].tolist()
    passed = worst <= tol
    if not passed:
        logger.warning(f"SL(n) 공변성 실패: 잔차 {worst:.3e}, 증거 {witness}")
    return CheckReport("sln_covariance", len(samples), worst, tol, passed, witness=None if passed else witness)


def expected_translation_coefficient(spec: ValuationSpec, f: LogConcaveFunction, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """명세 밸류에이션의 Z⁰(f) = (c₁ − c₂)V₀(f)^q + c₃ V_n(f^q)"""
    value = (spec.c1 - spec.c2) * V0_pow(f, spec.q)
    if spec.c3:
        value += spec.c3 * Vn_pow(f, spec.q, config)
    return value


def check_translation_covariance(
    Z: BlackBoxValuation,
    functions: Sequence[LogConcaveFunction],
    tol: float = 1e-8,
    directions: Optional[np.ndarray] = None,
    steps: Sequence[float] = (1.0, 0.5),
    workers: int = 1,
    show_progress: bool = False,
    z0_tol: float = 1e-6,
) -> CheckReport:
    """
    Z(f∘τ_x⁻¹) = Z(f) + Z⁰(f)x 검사와 Z⁰(f) 추정

    좌표축 평행이동 t·e_i 마다 차이 h(Z(f∘τ⁻¹), z) − h(Z(f), z) 를
    Z⁰·t·z_i 에 최소제곱으로 맞추고, 두 보폭에서의 추정이 일치하는지 봅니다.
    실수값이면 평행이동 불변성을 검사합니다. extra["z0"] 에 추정값이 들어 있습니다.
    명세가 붙은 민코프스키 값이면 추정한 Z⁰ 이 (c₁ − c₂)V₀(f)^q + c₃V_n(f^q) 와
    max(tol, z0_tol) 안에서 맞아야 통과합니다.
    """
    n = Z.dim
    dirs = _default_directions(n, directions)

    def estimate(f: LogConcaveFunction) -> Tuple[float, float, List[float]]:
        base = Z.support_values(f, dirs)
        per_step = []
        worst = 0.0
        diffs, coords = [], []
        for t in steps:
            num, den = 0.0, 0.0
            for i in range(n):
                diff = Z.support_values(translate(f, t * unit_vector(n, i)), dirs) - base
                if Z.kind == REAL:
                    worst = max(worst, float(np.max(np.abs(diff))))
                    continue
                coord = t * dirs[:, i]
                num += float(diff @ coord)
                den += float(coord @ coord)
                diffs.append(diff)
                coords.append(coord)
            if Z.kind == MINKOWSKI:
                per_step.append(num / den)
        if Z.kind == REAL:
            return 0.0, worst, []
        z0 = float(np.mean(per_step))
        for diff, coord in zip(diffs, coords):
            worst = max(worst, float(np.max(np.abs(diff - z0 * coord))))
        worst = max(worst, float(np.max(per_step) - np.min(per_step)))
        return z0, worst, per_step

    results = _map(Z, estimate, list(functions), workers, "평행이동 공변성 검사", show_progress)
    worst, witness = 0.0, None
    z0_values = []
    for i, (z0, res, per_step) in enumerate(results):
        z0_values.append(z0)
        if res > worst:
            worst = res
            witness = {"function": i, "z0_per_step": per_step, "spec": Z.name}

    extra: Dict[str, object] = {"z0": z0_values}
    z0_failed = False
    if Z.spec is not None and Z.kind == MINKOWSKI:
        expected = [expected_translation_coefficient(Z.spec, f) for f in functions]
        errors = [abs(a - b) for a, b in zip(z0_values, expected)]
        extra["z0_expected"] = expected
        z0_error = max(errors) if errors else 0.0
        z0_limit = max(tol, z0_tol)
        extra["z0_error"] = z0_error
        extra["z0_tol"] = z0_limit
        if z0_error > z0_limit:
            z0_failed = True
            i = int(np.argmax(errors))
            worst = max(worst, z0_error)
            witness = {"function": i, "z0": z0_values[i], "z0_expected": expected[i], "spec": Z.spec.describe()}

    name = "translation_covariance" if Z.kind == MINKOWSKI else "translation_invariance"
    passed = worst <= tol and not z0_failed
    if not passed:
        logger.warning(f"평행이동 검사 실패: 잔차 {worst:.3e}, 증거 {witness}")
    return CheckReport(name, len(results), worst, tol, passed, witness=None if passed else witness, extra=extra)


@dataclass
class HomogeneityEstimate:
    """
    동차 차수 추정

    Attributes:
        q: 추정 차수 (자명하면 None)
        spread: 탐침 방향 간 기울기 차이
        trivial: 모든 탐침 값이 0
        slopes: 방향별 기울기
        vanishing: Z(f) 는 0 이 아닌데 어떤 배율 s 에서 탐침 값이 0 (동차가 아님)
    """

    q: Optional[float]
    spread: float
    trivial: bool
    slopes: List[float]
    vanishing: bool = False

    @property
    def consistent(self) -> bool:
        return not self.trivial and not self.vanishing and self.spread <= HOMOGENEITY_SPREAD

    @property
    def reason(self) -> str:
        if self.trivial:
            return "trivial"
        if self.vanishing:
            return "vanishing"
        return "consistent" if self.consistent else "inconsistent"


def estimate_homogeneity(
    Z: BlackBoxValuation,
    f: LogConcaveFunction,
    s_grid: Sequence[float] = DEFAULT_S_GRID,
    directions: Optional[np.ndarray] = None,
) -> HomogeneityEstimate:
    """
    Z(sf) = s^q Z(f) 의 q 를 log|h(Z(sf), z)| 대 log s 최소제곱 기울기로 추정

    |h(Z(f), z)| 가 가장 큰 세 방향을 탐침으로 씁니다.
    """
    dirs = _default_directions(Z.dim, directions)
    base = Z.support_values(f, dirs)
    scale_ref = max(1.0, float(np.max(np.abs(base))))
    if float(np.max(np.abs(base))) <= 1e-12 * scale_ref:
        return HomogeneityEstimate(None, 0.0, True, [])

    probes = np.argsort(-np.abs(base))[:3]
    probes = [k for k in probes if abs(base[k]) > 1e-12]
    log_s = np.log(np.asarray(s_grid, dtype=float))
    values = np.vstack([Z.support_values(scale(f, s), dirs)[probes] for s in s_grid])
    zero_rows = np.flatnonzero(np.any(values == 0.0, axis=1))
    if len(zero_rows):
        vanished = [float(s_grid[k]) for k in zero_rows]
        logger.warning(f"동차성 추정 불가: Z(f) ≠ 0 인데 배율 s={vanished} 에서 값이 0 입니다.")
        return HomogeneityEstimate(None, math.inf, False, [], vanishing=True)
    slopes = [float(np.polyfit(log_s, np.log(np.abs(values[:, j])), 1)[0]) for j in range(len(probes))]
    spread = max(slopes) - min(slopes)
    return HomogeneityEstimate(float(np.mean(slopes)), spread, False, slopes)


# ---------------------------------------------------------------------------
# 분류
# ---------------------------------------------------------------------------

def _h(Z: BlackBoxValuation, f: LogConcaveFunction, z: np.ndarray) -> float:
    return float(Z.support_values(f, z[None, :])[0])


def moment_body_probe(Z: BlackBoxValuation) -> float:
    """
    모멘트 바디 항 계수 c₄ 탐침

    P = [−1, 2] × [0, 1]^{n−1} 에서 (h(Z(χ_{P+e₁}),e₁) + h(Z(χ_{P−e₁}),e₁) − 2h(Z(χ_P),e₁))/2.
    K, −K, m(K) 항은 이 조합에서 소거되고 h(M·, e₁) 는 9/2 + 5/2 − 2·5/2 = 2 를 남깁니다.
    """
    n = Z.dim
    e1 = unit_vector(n, 0)
    lows = [-1.0] + [0.0] * (n - 1)
    highs = [2.0] + [1.0] * (n - 1)
    values = []
    for shift in (1.0, -1.0, 0.0):
        P = box(np.asarray(lows) + shift, np.asarray(highs) + shift) if shift else box(lows, highs)
        values.append(_h(Z, characteristic_fn(P), e1))
    return (values[0] + values[1] - 2.0 * values[2]) / 2.0


def cone_probe_constants(Z: BlackBoxValuation, lambdas: Sequence[float] = (0.5, 1.0, 2.0)) -> Dict[str, float]:
    """
    원뿔 탐침 e^{−ℓ_{T_λ}} 로 d₁…d₄ 추정

    h(Z(e^{−ℓ_{T_λ}}), e₁) = d₁λ + (d₃+d₄)λ²/(n+1)!,
    h(Z(e^{−ℓ_{T_λ}}), −e₁) = d₂λ + (d₄−d₃)λ²/(n+1)! 를 λ 에 대해 최소제곱으로 맞춥니다.
    """
    n = Z.dim
    e1 = unit_vector(n, 0)
    lam = np.asarray(lambdas, dtype=float)
    design = np.column_stack([lam, lam ** 2])
    fwd, bwd = [], []
    for value in lam:
        Zf = Z(exp_cone_fn(t_lambda(float(value), n)))
        pair = Zf.query_many(np.vstack([e1, -e1]))
        fwd.append(pair[0])
        bwd.append(pair[1])
    (d1, a), res_a, _, _ = np.linalg.lstsq(design, np.asarray(fwd), rcond=None)
    (d2, b), res_b, _, _ = np.linalg.lstsq(design, np.asarray(bwd), rcond=None)
    fact = math.factorial(n + 1)
    fit = max(
        float(np.max(np.abs(design @ np.array([d1, a]) - fwd))),
        float(np.max(np.abs(design @ np.array([d2, b]) - bwd))),
    )
    return {
        "d1": float(d1),
        "d2": float(d2),
        "d3": float((a - b) * fact / 2.0),
        "d4": float((a + b) * fact / 2.0),
        "fit": fit,
    }


def _held_out_probes(n: int) -> List[LogConcaveFunction]:
    return [
        characteristic_fn(t_lambda(2.0, n), s=1.5),
        exp_cone_fn(cube(n, -1.0, 1.0), q=0.75),
        translate(exp_cone_fn(translate_body(t_lambda(1.0, n), -0.2 * np.ones(n))), 0.25 * np.ones(n)),
    ]


def classify_mink(
    Z: BlackBoxValuation,
    tol: float = 1e-4,
    config: QuadratureConfig = DEFAULT_CONFIG,
    cv_directions: int = 20,
) -> ClassifyReport:
    """
    민코프스키 밸류에이션 상수 (c₁, c₂, c₃, q) 복원

    선분 χ_{[0,e₁]} 은 V_n = 0 이라 모멘트 항이 사라지므로 c₁, c₂ 를 직접 주고,
    단위 정육면체 (m·e₁ = ½) 가 c₃ 를 분리합니다. 원뿔 탐침으로 d₁…d₄ 를
    구해 c₁ = q d₁, c₂ = q d₂, c₃ = q^{n+1} d₃/(n+1)!, d₄ = 0 과 대조합니다.
    """
    n = Z.dim
    if n < 3:
        raise ParameterError(f"민코프스키 분류에는 n ≥ 3 이 필요합니다: n={n}")
    if Z.kind != MINKOWSKI:
        raise ParameterError("classify_mink 에는 민코프스키 값 밸류에이션이 필요합니다.")
    e1 = unit_vector(n, 0)
    chi_seg = characteristic_fn(segment(np.zeros(n), e1))
    chi_cube = characteristic_fn(cube(n))
    axes = np.vstack([e1, -e1])

    estimate = estimate_homogeneity(Z, chi_seg, directions=axes)
    if estimate.trivial:
        estimate = estimate_homogeneity(Z, chi_cube)
    if estimate.trivial:
        estimate = estimate_homogeneity(Z, exp_cone_fn(t_lambda(1.0, n)))
    if estimate.trivial:
        logger.info("모든 탐침이 0: 자명한 밸류에이션으로 보고합니다.")
        zeros = {"c1": 0.0, "c2": 0.0, "c3": 0.0, "q": math.nan}
        return ClassifyReport(MINKOWSKI, zeros, {}, {}, tol=tol, passed=True, trivial=True, message="trivial")
    if estimate.vanishing:
        unknown = {"c1": math.nan, "c2": math.nan, "c3": math.nan, "q": math.nan}
        return ClassifyReport(MINKOWSKI, unknown, {"q_spread": math.inf}, {}, tol=tol, passed=False,
                              message="어떤 배율에서 값이 0: 동차 차수를 정할 수 없음")
    q = float(estimate.q)

    seg_values = Z(chi_seg).query_many(axes)
    c1, c2 = float(seg_values[0]), float(seg_values[1])
    c3 = 2.0 * (_h(Z, chi_cube, e1) - c1)

    d = cone_probe_constants(Z)
    fact = math.factorial(n + 1)
    residuals = {
        "q_spread": estimate.spread,
        "c1_vs_qd1": abs(c1 - q * d["d1"]),
        "c2_vs_qd2": abs(c2 - q * d["d2"]),
        "c3_vs_d3": abs(c3 - q ** (n + 1) * d["d3"] / fact),
        "d4": abs(d["d4"]),
        "cone_fit": d["fit"],
        "c4": abs(moment_body_probe(Z)),
    }
    constants = {"c1": c1, "c2": c2, "c3": c3, "q": q}
    report = ClassifyReport(MINKOWSKI, constants, residuals, {}, d_constants={k: d[k] for k in ("d1", "d2", "d3", "d4")}, tol=tol)

    message = []
    if min(c1, c2) < -tol:
        message.append("c1 또는 c2 가 음수")
    if not message:
        recovered = BlackBoxValuation.from_spec(report.as_spec(), n, config)
        dirs = direction_net(n, cv_directions, seed=1)
        for i, probe in enumerate(_held_out_probes(n)):
            diff = Z(probe).query_many(dirs) - recovered(probe).query_many(dirs)
            report.cross_validation[f"probe{i}"] = float(np.max(np.abs(diff)))

    bad = [k for k, v in list(residuals.items()) + list(report.cross_validation.items()) if not v <= tol]
    if bad:
        message.append("허용오차 초과: " + ", ".join(bad))
    report.passed = not message
    report.message = "; ".join(message)
    if not report.passed:
        logger.warning(f"민코프스키 분류 실패: {report.message}")
    logger.info(f"민코프스키 분류: c1={c1:.6g}, c2={c2:.6g}, c3={c3:.6g}, q={q:.6g}")
    return report


def classify_real(
    Z: BlackBoxValuation,
    tol: float = 1e-6,
    s_grid: Sequence[float] = DEFAULT_S_GRID,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> ClassifyReport:
    """
    실수값 밸류에이션 상수 (c₀, c_n, q) 복원

    Z(s·χ_{0}) = c₀ s^q 에서 q, c₀ 를, Z(χ_Q) − c₀ (V_n(Q) = 1) 에서 c_n 을 얻습니다.
    c₀ = 0 이면 정육면체 탐침 Z(s·χ_Q) = c_n s^q 로 q 를 구합니다.
    """
    n = Z.dim
    if n < 2:
        raise ParameterError(f"실수값 분류에는 n ≥ 2 가 필요합니다: n={n}")
    if Z.kind != REAL:
        raise ParameterError("classify_real 에는 실수값 밸류에이션이 필요합니다.")
    chi_point = characteristic_fn(point(np.zeros(n)))
    chi_cube = characteristic_fn(cube(n))
    log_s = np.log(np.asarray(s_grid, dtype=float))

    def power_law(f: LogConcaveFunction) -> Tuple[Optional[float], float, float]:
        values = np.array([float(Z(scale(f, s))) for s in s_grid])
        if np.max(np.abs(values)) <= 1e-14:
            return None, 0.0, 0.0
        if np.any(values == 0.0) or np.any(np.sign(values) != np.sign(values[0])):
            return None, math.inf, 0.0
        slope, intercept = np.polyfit(log_s, np.log(np.abs(values)), 1)
        fit = float(np.max(np.abs(np.sign(values[0]) * np.exp(intercept + slope * log_s) - values)))
        return float(slope), fit, float(np.sign(values[0]) * np.exp(intercept))

    q, fit, _ = power_law(chi_point)
    if q is None:
        q, fit, _ = power_law(chi_cube)
    if q is None:
        zeros = {"c0": 0.0, "cn": 0.0, "q": math.nan}
        return ClassifyReport(REAL, zeros, {}, {}, tol=tol, passed=fit == 0.0, trivial=fit == 0.0,
                              message="trivial" if fit == 0.0 else "거듭제곱 법칙 불일치")

    c0 = float(Z(chi_point))
    cn = float(Z(chi_cube)) - c0
    constants = {"c0": c0, "cn": cn, "q": q}
    report = ClassifyReport(REAL, constants, {"power_law_fit": fit}, {}, tol=tol)

    message = []
    if abs(cn) > tol and not q > 0:
        message.append("cn ≠ 0 인데 q ≤ 0")
    else:
        recovered = report.as_spec(zero_tol=tol if q <= 0 else 1e-12)
        for i, probe in enumerate(_held_out_probes(n)):
            predicted = evaluate_spec_valuation(recovered, probe, config)
            report.cross_validation[f"probe{i}"] = abs(float(Z(probe)) - float(predicted))
    bad = [k for k, v in list(report.residuals.items()) + list(report.cross_validation.items()) if not v <= tol]
    if bad:
        message.append("허용오차 초과: " + ", ".join(bad))
    report.passed = not message
    report.message = "; ".join(message)
    logger.info(f"실수값 분류: c0={c0:.6g}, cn={cn:.6g}, q={q:.6g}")
    return report


def report_records(reports: Sequence[Union[CheckReport, ClassifyReport]]) -> List[dict]:
    """보고서 목록을 레코드 리스트로"""
    return [r.to_record() for r in reports]
