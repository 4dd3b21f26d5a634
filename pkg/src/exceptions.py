"""
예외 클래스 모음

기하 연산, 함수 명세, 실행 설정에서 발생하는 오류를 구분합니다.
볼록성/강제성(coercivity) 실패는 예외가 아니라 값(marker)으로 반환됩니다.
"""


class ValuationLabError(Exception):
    """라이브러리 전체의 기본 예외"""


class GeometryError(ValuationLabError, ValueError):
    """기하 연산 전제 조건 위반"""


class DimensionMismatchError(GeometryError):
    """입력 점/벡터의 차원 불일치"""


class SingularMapError(GeometryError):
    """가역이 아닌 선형사상"""


class OriginNotInBodyError(GeometryError):
    """원점을 포함하지 않는 다면체로 원뿔 함수를 만들려는 경우"""


class EmptyDomainError(GeometryError):
    """정의역 교집합이 비어 함수가 proper 하지 않은 경우"""


class TruncationError(GeometryError):
    """반공간 교집합이 절단 상자(box)에 닿은 경우"""


class NotPositivelySpanningError(GeometryError):
    """방향 집합이 ℝⁿ 을 양으로 생성하지 않는 경우"""


class ParameterError(ValuationLabError, ValueError):
    """s, q, λ, t 등 스칼라 매개변수 범위 위반"""


class SpecError(ValuationLabError, ValueError):
    """ValuationSpec 상수의 부호/범위 조건 위반"""


class SpecParseError(ValuationLabError, ValueError):
    """
    함수/평가 명세 파일 파싱 오류

    Args:
        message: 오류 설명
        field: 문제가 된 필드 경로 (예: "functions[2].body.vertices")
        line: JSON 문법 오류가 난 줄 번호
    """

    def __init__(self, message: str, field: str = "", line: int = 0):
        self.field = field
        self.line = line
        location = []
        if line:
            location.append(f"line {line}")
        if field:
            location.append(f"field '{field}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")


class ConfigError(ValuationLabError, ValueError):
    """실행 설정(RunConfig) 오류"""


class NotCoerciveError(GeometryError):
    """
    강제적이지 않은 함수로 로그 오목 함수를 만들려는 경우

    Args:
        marker: coercivity_check 가 돌려준 NotCoercive 값
    """

    def __init__(self, marker):
        self.marker = marker
        super().__init__(f"강제적이지 않은 함수입니다: {marker.reason}")
