"""
명령행 인터페이스

하위 명령:
    lemma21   T_λ 의 지지함수·모멘트 표
    vn-cone   V_n(e^{−qℓ_{T_λ}}) 구적값과 닫힌 꼴 비교
    check     밸류에이션 항등식, SL(n)/평행이동 공변성, 동차성 검사
    classify  분류 상수 복원
    limits    극한 실험 (c₁ = q d₁, 세 가지 극한 유형)
    zeta      실수값 밸류에이션의 ζ/ψ 미분 관계

종료 코드: 0 모든 검사 통과, 1 검사 실패, 2 입력/설정 오류
"""

import argparse
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .convex_fn import cone_fn
from .exceptions import ConfigError, ParameterError, ValuationLabError
from .functionals import Vn_pow
from .layer_cake import QuadratureConfig
from .limit_experiments import limit_experiment_c1c2, limit_experiment_c3d4, zeta_derivative_check
from .log_concave import LogConcaveFunction, characteristic_fn, exp_cone_fn, translate
from .pair_families import DEFAULT_H_SCHEDULE, take_pairs
from .polytope_core import (
    MAX_DIM,
    MIN_DIM,
    cube,
    direction_net,
    moment_body_support,
    moment_vector,
    random_sln,
    reflect,
    support,
    t_lambda,
    unit_vector,
)
from .spec_io import builtin_spec, load_spec_file, parse_constants
from .valuation_lab import (
    MINKOWSKI,
    BlackBoxValuation,
    CheckReport,
    ValuationSpec,
    check_sln_covariance,
    check_translation_covariance,
    check_valuation_identity,
    classify_mink,
    classify_real,
    estimate_homogeneity,
)

logger = logging.getLogger(__name__)

OUT_DIR_ENV = "VALUATION_LAB_OUT_DIR"
OUTPUT_FORMATS = ("csv", "json")
PROPERTIES = ("identity", "sln", "translation", "homogeneity")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2

# 명령별 기본 허용오차
DEFAULT_TOLS = {
    "lemma21": 1e-10,
    "vn-cone": 1e-6,
    "identity": 1e-7,
    "sln": 1e-8,
    "translation": 1e-8,
    "homogeneity": 1e-6,
    "classify-minkowski": 1e-4,
    "classify-real": 1e-6,
    "limits-c1c2": 1e-6,
    "limits-c3d4": 1e-4,
    "zeta": 1e-4,
}


@dataclass(frozen=True)
class RunConfig:
    """
    실행 설정

    Args:
        dim: 공간 차원 (2..4)
        seed: 난수 시드
        rel_tol: 구적 상대 허용오차
        tol: 검사 허용오차 (None 이면 명령별 기본값)
        directions: 지지함수 방향 개수
        h_schedule: 극한 실험의 h 값들 (엄격히 감소)
        output_format: csv | json
        out: 출력 파일 경로 (None 이면 환경변수 디렉터리 또는 stdout)
        workers: 검사 스레드 수
        pair_count: 항등식 검사의 계열당 쌍 개수
        sln_maps: SL(n) 공변성 검사의 무작위 전단 곱 개수
        show_progress: 진행 표시줄
    """

    dim: int = 3
    seed: int = 0
    rel_tol: float = 1e-9
    tol: Optional[float] = None
    directions: int = 200
    h_schedule: Tuple[float, ...] = DEFAULT_H_SCHEDULE
    output_format: str = "csv"
    out: Optional[str] = None
    workers: int = 1
    pair_count: int = 100
    sln_maps: int = 50
    show_progress: bool = False

    def __post_init__(self):
        if not MIN_DIM <= self.dim <= MAX_DIM:
            raise ConfigError(f"차원은 {MIN_DIM}..{MAX_DIM} 이어야 합니다: {self.dim}")
        if not self.rel_tol > 0:
            raise ConfigError(f"rel_tol 은 양수여야 합니다: {self.rel_tol}")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError(f"tol 은 양수여야 합니다: {self.tol}")
        if self.directions < 2 * self.dim:
            raise ConfigError(f"방향 개수는 최소 2n = {2 * self.dim} 이어야 합니다: {self.directions}")
        if len(self.h_schedule) < 3 or any(h <= 0 for h in self.h_schedule):
            raise ConfigError("h 스케줄은 양수 3 개 이상이어야 합니다.")
        if any(b >= a for a, b in zip(self.h_schedule, self.h_schedule[1:])):
            raise ConfigError("h 스케줄은 엄격히 감소해야 합니다.")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"출력 형식은 {', '.join(OUTPUT_FORMATS)} 중 하나여야 합니다: {self.output_format}")
        if self.workers < 1:
            raise ConfigError(f"workers 는 1 이상이어야 합니다: {self.workers}")
        if self.pair_count < 1 or self.sln_maps < 1:
            raise ConfigError(f"쌍 개수와 전단 곱 개수는 1 이상이어야 합니다: {self.pair_count}, {self.sln_maps}")

    @staticmethod
    def from_args(args: argparse.Namespace) -> "RunConfig":
        return RunConfig(
            dim=args.dim,
            seed=args.seed,
            rel_tol=args.rel_tol,
            tol=args.tol,
            directions=args.dirs,
            h_schedule=tuple(args.h_schedule) if args.h_schedule else DEFAULT_H_SCHEDULE,
            output_format=args.format,
            out=args.out,
            workers=args.workers,
            pair_count=getattr(args, "count", 100),
            sln_maps=getattr(args, "sln_maps", 50),
            show_progress=args.progress,
        )

    @property
    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(rel_tol=self.rel_tol)

    def tolerance(self, key: str) -> float:
        return self.tol if self.tol is not None else DEFAULT_TOLS[key]

    def direction_set(self) -> np.ndarray:
        return direction_net(self.dim, self.directions, seed=self.seed)

    def require_dimension(self, spec: ValuationSpec):
        """민코프스키 명령은 n ≥ 3, 실수값 명령은 n ≥ 2"""
        if spec.kind == MINKOWSKI and self.dim < 3:
            raise ConfigError(f"민코프스키 밸류에이션 명령에는 n ≥ 3 이 필요합니다: n={self.dim}")


# ---------------------------------------------------------------------------
# 출력
# ---------------------------------------------------------------------------

def render_table(table: pd.DataFrame, output_format: str) -> str:
    """표를 CSV 또는 JSON 문자열로 (같은 입력이면 바이트 단위로 같은 출력)"""
    if output_format == "json":
        return table.to_json(orient="records", double_precision=15) + "\n"
    return table.to_csv(index=False, float_format="%.12g")


def output_path(config: RunConfig, command: str) -> Optional[Path]:
    if config.out:
        return Path(config.out)
    out_dir = os.environ.get(OUT_DIR_ENV)
    if out_dir:
        return Path(out_dir) / f"{command}.{config.output_format}"
    return None


def write_table(table: pd.DataFrame, config: RunConfig, command: str):
    text = render_table(table, config.output_format)
    path = output_path(config, command)
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"결과 저장: {path}")


# ---------------------------------------------------------------------------
# 명령
# ---------------------------------------------------------------------------

def _positive_list(values: Sequence[float], name: str) -> List[float]:
    for v in values:
        if not v > 0:
            raise ParameterError(f"{name} 값은 양수여야 합니다: {v}")
    return list(values)


def cmd_lemma21(lambdas: Sequence[float], config: RunConfig) -> Tuple[pd.DataFrame, bool]:
    """
    T_λ 표: h(T_λ,e₁), h(−T_λ,e₁), m(T_λ)·e₁, h(MT_λ,e₁) 와 (λ, 0, λ²/(n+1)!, λ²/(n+1)!)
    """
    n = config.dim
    e1 = unit_vector(n, 0)
    fact = math.factorial(n + 1)
    tol = config.tolerance("lemma21")
    rows = []
    for lam in _positive_list(lambdas, "λ"):
        T = t_lambda(lam, n)
        measured = (support(T, e1), support(reflect(T), e1), float(moment_vector(T)[0]), moment_body_support(T, e1))
        expected = (lam, 0.0, lam ** 2 / fact, lam ** 2 / fact)
        row = {"lambda": lam}
        for name, got, want in zip(("h_T", "h_minus_T", "m_e1", "h_MT"), measured, expected):
            row[name] = got
            row[f"{name}_expected"] = want
            row[f"{name}_residual"] = abs(got - want)
        rows.append(row)
    table = pd.DataFrame(rows)
    worst = float(table[[c for c in table.columns if c.endswith("_residual")]].to_numpy().max())
    return table, worst <= tol


def cmd_vn_cone(lambdas: Sequence[float], qs: Sequence[float], config: RunConfig) -> Tuple[pd.DataFrame, bool]:
    """V_n(e^{−qℓ_{T_λ}}) 구적값 대 λ/qⁿ"""
    n = config.dim
    tol = config.tolerance("vn-cone")
    rows = []
    for lam in _positive_list(lambdas, "λ"):
        f = LogConcaveFunction(cone_fn(t_lambda(lam, n)))
        for q in _positive_list(qs, "q"):
            value = Vn_pow(f, q, config.quadrature)
            closed = lam / q ** n
            rows.append({"lambda": lam, "q": q, "quadrature": value, "closed": closed,
                         "rel_error": abs(value - closed) / closed})
    table = pd.DataFrame(rows)
    return table, bool(table["rel_error"].max() <= tol)


def sample_functions(n: int) -> List[LogConcaveFunction]:
    """공변성·동차성 검사의 기본 표본 함수"""
    return [
        exp_cone_fn(t_lambda(1.0, n)),
        exp_cone_fn(cube(n, -1.0, 1.0), q=1.5),
        characteristic_fn(t_lambda(2.0, n), s=0.75),
        translate(exp_cone_fn(cube(n, -0.5, 1.0)), 0.3 * np.ones(n)),
    ]


def _homogeneity_report(Z: BlackBoxValuation, functions: Sequence[LogConcaveFunction], spec: Optional[ValuationSpec],
                        tol: float, directions: np.ndarray) -> CheckReport:
    worst, witness = 0.0, None
    estimates = []
    for i, f in enumerate(functions):
        est = estimate_homogeneity(Z, f, directions=directions)
        if est.trivial:
            continue
        if est.vanishing:
            worst, witness = math.inf, {"function": i, "reason": est.reason, "spec": Z.name}
            continue
        estimates.append(est.q)
        residual = est.spread if spec is None else max(est.spread, abs(est.q - spec.q))
        if residual > worst:
            worst, witness = residual, {"function": i, "slopes": est.slopes, "spec": Z.name}
    passed = worst <= tol
    return CheckReport("homogeneity", len(functions), worst, tol, passed,
                       witness=None if passed else witness, extra={"q": estimates})


def cmd_check(spec: ValuationSpec, functions: Sequence[LogConcaveFunction], properties: Sequence[str],
              families: Sequence[str], config: RunConfig) -> List[CheckReport]:
    """요청한 성질 검사 보고서 목록"""
    config.require_dimension(spec)
    n = config.dim
    Z = BlackBoxValuation.from_spec(spec, n, config.quadrature)
    dirs = config.direction_set()
    samples = list(functions) or sample_functions(n)
    common = dict(directions=dirs, workers=config.workers, show_progress=config.show_progress)
    reports = []
    for prop in properties:
        if prop == "identity":
            pairs = take_pairs(config.seed, families, n=n, count=config.pair_count)
            reports.append(check_valuation_identity(Z, pairs, tol=config.tolerance("identity"), **common))
        elif prop == "sln":
            maps = [random_sln(config.seed + k, 4, n) for k in range(config.sln_maps)]
            reports.append(check_sln_covariance(Z, samples, maps, tol=config.tolerance("sln"), **common))
        elif prop == "translation":
            reports.append(check_translation_covariance(Z, samples, tol=config.tolerance("translation"), **common))
        elif prop == "homogeneity":
            reports.append(_homogeneity_report(Z, samples, spec, config.tolerance("homogeneity"), dirs))
        else:
            raise ParameterError(f"알 수 없는 성질: {prop} (가능: {', '.join(PROPERTIES)})")
    return reports


def cmd_classify(spec: ValuationSpec, config: RunConfig):
    """명세 밸류에이션을 블랙박스로 보고 상수를 복원 (왕복 검사)"""
    config.require_dimension(spec)
    Z = BlackBoxValuation.from_spec(spec, config.dim, config.quadrature)
    if spec.kind == MINKOWSKI:
        report = classify_mink(Z, tol=config.tolerance("classify-minkowski"), config=config.quadrature)
    else:
        report = classify_real(Z, tol=config.tolerance("classify-real"), config=config.quadrature)
    if not report.trivial:
        errors = {k: abs(report.constants[k] - v) for k, v in spec.constants.items()}
        report.residuals.update({f"roundtrip_{k}": e for k, e in errors.items()})
        if max(errors.values()) > report.tol:
            report.passed = False
            report.message = "; ".join(filter(None, [report.message, "왕복 상수 불일치"]))
    return report


def cmd_limits(spec: ValuationSpec, experiment: str, perturbation: float, config: RunConfig):
    """극한 실험 보고서 목록"""
    if spec.kind != MINKOWSKI:
        raise ParameterError("limits 명령에는 민코프스키 밸류에이션 명세가 필요합니다.")
    config.require_dimension(spec)
    reports = []
    if experiment in ("c1c2", "all"):
        reports.append(limit_experiment_c1c2(spec, config.h_schedule, n=config.dim,
                                             tol=config.tolerance("limits-c1c2"), config=config.quadrature))
    if experiment in ("c3d4", "all"):
        reports.append(limit_experiment_c3d4(spec, config.h_schedule, n=config.dim, perturbation=perturbation,
                                             tol=config.tolerance("limits-c3d4"), config=config.quadrature))
    return reports


def cmd_zeta(spec: ValuationSpec, t_min: float, t_max: float, t_step: float, step: float, config: RunConfig) -> CheckReport:
    """ζ/ψ 미분 관계 검사"""
    if spec.kind == MINKOWSKI:
        raise ParameterError("zeta 명령에는 실수값 밸류에이션 명세가 필요합니다.")
    if not t_step > 0 or not t_max >= t_min:
        raise ParameterError("t 격자는 t_min ≤ t_max, t_step > 0 이어야 합니다.")
    count = int(round((t_max - t_min) / t_step)) + 1
    grid = np.round(t_min + t_step * np.arange(count), 12)
    return zeta_derivative_check(spec, grid, n=config.dim, step=step,
                                 tol=config.tolerance("zeta"), config=config.quadrature)


# ---------------------------------------------------------------------------
# 인자 파싱
# ---------------------------------------------------------------------------

def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"쉼표로 구분된 숫자 목록이 필요합니다: {text!r}") from exc


def _add_spec_arguments(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--spec-file", help="JSON 명세 파일 경로")
    group.add_argument("--builtin", help="내장 명세 이름 (예: difference-body, volume)")
    group.add_argument("--constants", help="인라인 상수 c1,c2,c3,q 또는 c0,cn,q")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="valuation-lab", description="로그 오목 함수 밸류에이션 실험실")
    parser.add_argument("--dim", type=int, default=3, help="공간 차원 (기본값: 3)")
    parser.add_argument("--seed", type=int, default=0, help="난수 시드 (기본값: 0)")
    parser.add_argument("--tol", type=float, default=None, help="검사 허용오차 (기본값: 명령별)")
    parser.add_argument("--rel-tol", type=float, default=1e-9, help="구적 상대 허용오차 (기본값: 1e-9)")
    parser.add_argument("--dirs", type=int, default=200, help="지지함수 방향 개수 (기본값: 200)")
    parser.add_argument("--h-schedule", type=_float_list, default=None, help="극한 실험 h 값들 (쉼표 구분)")
    parser.add_argument("--workers", type=int, default=1, help="검사 스레드 수 (기본값: 1)")
    parser.add_argument("--out", default=None, help=f"출력 파일 (기본값: ${OUT_DIR_ENV}/<명령>.<형식> 또는 stdout)")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default="csv", help="출력 형식")
    parser.add_argument("--log-level", default="WARNING", help="로그 레벨 (기본값: WARNING)")
    parser.add_argument("--progress", action="store_true", help="진행 표시줄 표시")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lemma21", help="T_λ 지지함수·모멘트 표")
    p.add_argument("--lambdas", type=_float_list, default=[0.5, 1.0, 2.0, 3.0])

    p = sub.add_parser("vn-cone", help="V_n(e^{−qℓ_{T_λ}}) = λ/qⁿ 비교")
    p.add_argument("--lambdas", type=_float_list, default=[0.5, 1.0, 2.0])
    p.add_argument("--qs", type=_float_list, default=[0.5, 1.0, 2.0])

    p = sub.add_parser("check", help="밸류에이션 성질 검사")
    _add_spec_arguments(p)
    p.add_argument("--properties", default=",".join(PROPERTIES), help="검사할 성질 (쉼표 구분)")
    p.add_argument("--families", default="cones,indicators,mixed", help="항등식 검사 쌍 계열")
    p.add_argument("--count", type=int, default=100, help="계열당 쌍 개수 (기본값: 100)")
    p.add_argument("--sln-maps", type=int, default=50, help="SL(n) 공변성 검사의 전단 곱 개수 (기본값: 50)")

    p = sub.add_parser("classify", help="분류 상수 복원")
    _add_spec_arguments(p)

    p = sub.add_parser("limits", help="극한 실험")
    _add_spec_arguments(p)
    p.add_argument("--experiment", choices=("c1c2", "c3d4", "all"), default="all")
    p.add_argument("--perturbation", type=float, default=0.0, help="b 교란 비율 (예: 0.1)")
    p.add_argument("--summary", action="store_true", help="h 별 표 대신 요약 출력")

    p = sub.add_parser("zeta", help="ζ/ψ 미분 관계 검사")
    _add_spec_arguments(p)
    p.add_argument("--t-min", type=float, default=-1.0)
    p.add_argument("--t-max", type=float, default=3.0)
    p.add_argument("--t-step", type=float, default=0.25)
    p.add_argument("--step", type=float, default=1e-2, help="중심 차분 간격 (기본값: 1e-2)")
    return parser


def resolve_spec(args: argparse.Namespace, n: int, default: str) -> Tuple[ValuationSpec, List[LogConcaveFunction]]:
    """--spec-file / --builtin / --constants 중 하나에서 명세를 얻음 (없으면 default 내장 명세)"""
    if getattr(args, "spec_file", None):
        spec, functions = load_spec_file(args.spec_file, n)
        if spec is None:
            raise ConfigError(f"명세 파일에 valuation 항목이 없습니다: {args.spec_file}")
        return spec, functions
    if getattr(args, "constants", None):
        return parse_constants(args.constants), []
    return builtin_spec(getattr(args, "builtin", None) or default), []


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    command = args.command

    if command == "lemma21":
        table, passed = cmd_lemma21(args.lambdas, config)
    elif command == "vn-cone":
        table, passed = cmd_vn_cone(args.lambdas, args.qs, config)
    elif command == "check":
        spec, functions = resolve_spec(args, config.dim, "difference-body")
        properties = [p.strip() for p in args.properties.split(",") if p.strip()]
        families = [f.strip() for f in args.families.split(",") if f.strip()]
        reports = cmd_check(spec, functions, properties, families, config)
        table = pd.DataFrame([r.to_record() for r in reports])
        passed = all(r.passed for r in reports)
    elif command == "classify":
        spec, _ = resolve_spec(args, config.dim, "difference-body")
        report = cmd_classify(spec, config)
        table = pd.DataFrame([report.to_record()])
        passed = report.passed
    elif command == "limits":
        spec, _ = resolve_spec(args, config.dim, "difference-body")
        reports = cmd_limits(spec, args.experiment, args.perturbation, config)
        if args.summary:
            table = pd.DataFrame([r.to_record() for r in reports])
        else:
            table = pd.concat([r.table.assign(experiment=r.name) for r in reports], ignore_index=True)
        passed = all(r.passed for r in reports)
    else:
        spec, _ = resolve_spec(args, config.dim, "volume")
        report = cmd_zeta(spec, args.t_min, args.t_max, args.t_step, args.step, config)
        table = report.extra["table"]
        passed = report.passed

    write_table(table, config, command)
    if not passed:
        logger.error(f"{command}: 허용오차를 넘는 검사가 있습니다.")
        return EXIT_FAILED
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return run(args)
    except (ValuationLabError, ValueError) as exc:
        logger.error(f"{args.command}: {exc}")
        print(f"오류: {exc}", file=sys.stderr)
        return EXIT_ERROR
