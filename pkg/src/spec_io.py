"""
명세 파일 입출력

JSON 명세 파일에서 밸류에이션 명세와 표본 함수들을 읽습니다.

    {"valuation": {"kind": "minkowski", "c1": 1, "c2": 0, "c3": 0, "q": 1},
     "functions": [{"kind": "cone", "body": {"builtin": "t_lambda", "lambda": 2}},
                   {"logconcave": {"kind": "indicator", "body": {"vertices": [...]}},
                    "scale": 2.0, "power": 1.5}]}

오류는 SpecParseError 로 보고하며 필드 경로 (예: functions[1].body.vertices) 와
JSON 문법 오류의 줄 번호를 담습니다.
"""

import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Tuple

import numpy as np

from .convex_fn import (
    AffinePiece,
    PLConvexFunction,
    add_constant,
    cone_fn,
    indicator_fn,
    precompose_linear,
    translate_fn,
)
from .exceptions import SpecParseError, ValuationLabError
from .log_concave import LogConcaveFunction, from_convex
from .polytope_core import LinearMap, Polytope, cross_polytope, cube, hull, point, segment, t_lambda
from .valuation_lab import BUILTIN_SPECS, MINKOWSKI, REAL, ValuationSpec

logger = logging.getLogger(__name__)

FUNCTION_KINDS = ("cone", "indicator", "pl")
BODY_BUILTINS = ("t_lambda", "cube", "cross", "segment", "point")


def _require(obj: dict, key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        raise SpecParseError("객체(JSON object)가 필요합니다.", field=path)
    if key not in obj:
        raise SpecParseError(f"필수 필드 '{key}' 가 없습니다.", field=path)
    return obj[key]


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecParseError(f"숫자가 필요합니다: {value!r}", field=path)
    return float(value)


def _vector(value: Any, n: int, path: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != n:
        raise SpecParseError(f"길이 {n} 의 숫자 배열이 필요합니다.", field=path)
    return np.array([_number(v, f"{path}[{i}]") for i, v in enumerate(value)])


def _matrix(value: Any, n: int, path: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise SpecParseError("점 배열이 필요합니다.", field=path)
    return np.vstack([_vector(row, n, f"{path}[{i}]") for i, row in enumerate(value)])


def _guarded(path: str, build):
    """라이브러리 오류를 필드 경로가 붙은 SpecParseError 로"""
    try:
        return build()
    except SpecParseError:
        raise
    except ValuationLabError as exc:
        raise SpecParseError(str(exc), field=path) from exc


# ---------------------------------------------------------------------------
# 다면체, 함수
# ---------------------------------------------------------------------------

def parse_polytope(obj: Any, n: int, path: str = "body") -> Polytope:
    """
    다면체 리터럴

    {"vertices": [[…], …]} 또는
    {"builtin": "t_lambda", "lambda": λ} | {"builtin": "cube", "lo": 0, "hi": 1} |
    {"builtin": "segment", "a": […], "b": […]} | {"builtin": "point", "x": […]} |
    {"builtin": "cross", "r": 1}
    """
    if not isinstance(obj, dict):
        raise SpecParseError("다면체 리터럴은 객체여야 합니다.", field=path)
    if "vertices" in obj:
        pts = _matrix(obj["vertices"], n, f"{path}.vertices")
        body = _guarded(path, lambda: hull(pts))
        if not isinstance(body, Polytope):
            raise SpecParseError("꼭짓점 집합이 비어 있습니다.", field=f"{path}.vertices")
        return body

    name = _require(obj, "builtin", path)
    if name == "t_lambda":
        lam = _number(obj.get("lambda", 1.0), f"{path}.lambda")
        if not lam > 0:
            raise SpecParseError(f"λ 는 양수여야 합니다: {lam}", field=f"{path}.lambda")
        return t_lambda(lam, n)
    if name == "cube":
        lo = _number(obj.get("lo", 0.0), f"{path}.lo")
        hi = _number(obj.get("hi", 1.0), f"{path}.hi")
        if not hi > lo:
            raise SpecParseError("cube 는 lo < hi 가 필요합니다.", field=path)
        return cube(n, lo, hi)
    if name == "cross":
        r = _number(obj.get("r", 1.0), f"{path}.r")
        if not r > 0:
            raise SpecParseError(f"r 은 양수여야 합니다: {r}", field=f"{path}.r")
        return cross_polytope(n, r)
    if name == "segment":
        a = _vector(_require(obj, "a", path), n, f"{path}.a")
        b = _vector(_require(obj, "b", path), n, f"{path}.b")
        return _guarded(path, lambda: segment(a, b))
    if name == "point":
        return point(_vector(_require(obj, "x", path), n, f"{path}.x"))
    raise SpecParseError(f"알 수 없는 다면체 builtin: {name!r} (가능: {', '.join(BODY_BUILTINS)})", field=f"{path}.builtin")


def _parse_domain(obj: Any, n: int, path: str):
    if isinstance(obj, dict) and "normals" in obj:
        normals = _matrix(obj["normals"], n, f"{path}.normals")
        offsets = _vector(_require(obj, "offsets", path), len(normals), f"{path}.offsets")
        return normals, offsets
    return parse_polytope(obj, n, path)


def _parse_pieces(value: Any, n: int, path: str) -> List[AffinePiece]:
    """[[a₁, …, aₙ, b], …] 행 배열 또는 {"slope": [...], "intercept": b} 객체"""
    if not isinstance(value, list) or not value:
        raise SpecParseError("pieces 는 비어 있지 않은 배열이어야 합니다.", field=path)
    pieces = []
    for i, item in enumerate(value):
        where = f"{path}[{i}]"
        if isinstance(item, list):
            row = _vector(item, n + 1, where)
            pieces.append(AffinePiece(row[:n], float(row[n])))
            continue
        slope = _vector(_require(item, "slope", where), n, f"{where}.slope")
        intercept = _number(item.get("intercept", 0.0), f"{where}.intercept")
        pieces.append(AffinePiece(slope, intercept))
    return pieces


def _index(value: Any, n: int, path: str) -> int:
    x = _number(value, path)
    if not x.is_integer() or not 0 <= x < n:
        raise SpecParseError(f"인덱스는 0..{n - 1} 의 정수여야 합니다: {value!r}", field=path)
    return int(x)


def _parse_sln(obj: Any, n: int, path: str) -> LinearMap:
    """[[…]] (행렬), {"matrix": [[…]]} 또는 {"shear": [i, j, c]}"""
    if isinstance(obj, dict) and "shear" in obj:
        spec = obj["shear"]
        where = f"{path}.shear"
        if not isinstance(spec, list) or len(spec) != 3:
            raise SpecParseError("shear 는 [i, j, c] 형식이어야 합니다.", field=where)
        i = _index(spec[0], n, f"{where}[0]")
        j = _index(spec[1], n, f"{where}[1]")
        if i == j:
            raise SpecParseError(f"전단 인덱스 i, j 는 달라야 합니다: {i}", field=where)
        c = _number(spec[2], f"{where}[2]")
        return LinearMap.shear(n, i, j, c)
    if isinstance(obj, list):
        where = path
        rows = obj
    else:
        where = f"{path}.matrix"
        rows = _require(obj, "matrix", path)
    m = _matrix(rows, n, where)
    if len(m) != n:
        raise SpecParseError(f"{n}×{n} 행렬이 필요합니다: 행 {len(m)} 개", field=where)
    phi = _guarded(where, lambda: LinearMap(m))
    if abs(phi.det - 1.0) > 1e-9:
        raise SpecParseError(f"SL(n) 원소가 아닙니다: det={phi.det:.6g}", field=where)
    return phi


def parse_convex(obj: Any, n: int, path: str = "function") -> PLConvexFunction:
    """
    PL 볼록 함수 명세

    Args:
        obj: {"kind": "cone"|"indicator"|"pl", "body" | "pieces", "domain",
              "shift", "translate", "sln"}
        n: 차원
        path: 오류 보고용 필드 경로
    """
    kind = _require(obj, "kind", path)
    if kind == "cone":
        body = parse_polytope(_require(obj, "body", path), n, f"{path}.body")
        u = _guarded(f"{path}.body", lambda: cone_fn(body))
    elif kind == "indicator":
        body = parse_polytope(_require(obj, "body", path), n, f"{path}.body")
        u = indicator_fn(body)
    elif kind == "pl":
        pieces = _parse_pieces(_require(obj, "pieces", path), n, f"{path}.pieces")
        domain = _parse_domain(obj["domain"], n, f"{path}.domain") if "domain" in obj else None
        u = _guarded(path, lambda: PLConvexFunction(pieces, domain))
    else:
        raise SpecParseError(f"알 수 없는 함수 종류: {kind!r} (가능: {', '.join(FUNCTION_KINDS)})", field=f"{path}.kind")

    if "sln" in obj:
        u = precompose_linear(u, _parse_sln(obj["sln"], n, f"{path}.sln"))
    if "translate" in obj:
        u = translate_fn(u, _vector(obj["translate"], n, f"{path}.translate"))
    if "shift" in obj:
        u = add_constant(u, _number(obj["shift"], f"{path}.shift"))
    return u


def parse_function(obj: Any, n: int, path: str = "function") -> LogConcaveFunction:
    """로그 오목 함수 명세 (감싸개 {"logconcave": …, "scale", "power"} 또는 볼록 함수 명세)"""
    if isinstance(obj, dict) and "logconcave" in obj:
        u = parse_convex(obj["logconcave"], n, f"{path}.logconcave")
        s = _number(obj.get("scale", 1.0), f"{path}.scale")
        p = _number(obj.get("power", 1.0), f"{path}.power")
    else:
        u, s, p = parse_convex(obj, n, path), 1.0, 1.0
    f = _guarded(path, lambda: from_convex(u))
    if s == 1.0 and p == 1.0:
        return f
    return _guarded(path, lambda: LogConcaveFunction(f.base, scale=s, power=p))


# ---------------------------------------------------------------------------
# 밸류에이션 명세
# ---------------------------------------------------------------------------

def parse_valuation(obj: Any, path: str = "valuation") -> ValuationSpec:
    """{"kind": "minkowski", "c1", "c2", "c3", "q"} 또는 {"kind": "real", "c0", "cn", "q"}"""
    kind = _require(obj, "kind", path)
    if kind == MINKOWSKI:
        names = ("c1", "c2", "c3")
    elif kind == REAL:
        names = ("c0", "cn")
    else:
        raise SpecParseError(f"알 수 없는 밸류에이션 종류: {kind!r}", field=f"{path}.kind")
    values = {k: _number(obj.get(k, 0.0), f"{path}.{k}") for k in names}
    q = _number(obj.get("q", 1.0), f"{path}.q")
    name = obj.get("name", "")
    return _guarded(path, lambda: ValuationSpec(kind, q=q, name=str(name), **values))


def parse_constants(text: str) -> ValuationSpec:
    """
    인라인 상수 "c1,c2,c3,q" (민코프스키) 또는 "c0,cn,q" (실수값)
    """
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise SpecParseError(f"상수 목록을 숫자로 읽을 수 없습니다: {text!r}", field="--constants") from exc
    if len(values) == 4:
        return _guarded("--constants", lambda: ValuationSpec.minkowski(*values))
    if len(values) == 3:
        return _guarded("--constants", lambda: ValuationSpec.real(*values))
    raise SpecParseError("상수는 c1,c2,c3,q 또는 c0,cn,q 형식이어야 합니다.", field="--constants")


def builtin_spec(name: str) -> ValuationSpec:
    if name not in BUILTIN_SPECS:
        raise SpecParseError(f"알 수 없는 builtin 명세: {name!r} (가능: {', '.join(BUILTIN_SPECS)})", field="--builtin")
    return BUILTIN_SPECS[name]


def parse_spec_text(text: str, n: int) -> Tuple[Optional[ValuationSpec], List[LogConcaveFunction]]:
    """
    명세 파일 내용 파싱

    Returns:
        (밸류에이션 명세 또는 None, 표본 함수 리스트)
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"JSON 문법 오류: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise SpecParseError("최상위는 객체여야 합니다.")

    spec = parse_valuation(data["valuation"]) if "valuation" in data else None
    raw = data.get("functions", [])
    if not isinstance(raw, list):
        raise SpecParseError("functions 는 배열이어야 합니다.", field="functions")
    functions = [parse_function(obj, n, f"functions[{i}]") for i, obj in enumerate(raw)]
    logger.info(f"명세 파싱 완료: 밸류에이션 {spec.describe() if spec else '없음'}, 함수 {len(functions)}개")
    return spec, functions


def load_spec_file(path, n: int) -> Tuple[Optional[ValuationSpec], List[LogConcaveFunction]]:
    """명세 파일 읽기"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecParseError(f"명세 파일을 읽을 수 없습니다: {path} ({exc.strerror})") from exc
    return parse_spec_text(text, n)

