#!/usr/bin/env python3
"""
밸류에이션 실험실 실행 스크립트

인자가 있으면 명령행 인터페이스로 넘기고 (python run_lab.py check --builtin volume),
인자가 없으면 기본 재현 표 (lemma21, vn-cone) 와 내장 명세 분류를 요약해 보여줍니다.
"""

import sys

from src.cli import EXIT_FAILED, EXIT_OK, RunConfig, cmd_classify, cmd_lemma21, cmd_vn_cone, main as cli_main
from src.valuation_lab import BUILTIN_SPECS


def demo():
    """기본 재현 요약"""
    config = RunConfig()
    all_passed = True

    print("="*80)
    print("T_λ 지지함수와 모멘트 (n = 3)")
    print("="*80)
    table, passed = cmd_lemma21([0.5, 1.0, 2.0, 3.0], config)
    print(table[["lambda", "h_T", "h_minus_T", "m_e1", "h_MT"]].to_string(index=False))
    all_passed &= passed

    print("\n" + "="*80)
    print("V_n(e^{-qℓ_{T_λ}}) = λ/qⁿ")
    print("="*80)
    table, passed = cmd_vn_cone([0.5, 1.0, 2.0], [0.5, 1.0, 2.0], config)
    print(table.to_string(index=False))
    all_passed &= passed

    print("\n" + "="*80)
    print("내장 명세 분류 (왕복)")
    print("="*80)
    for name, spec in BUILTIN_SPECS.items():
        report = cmd_classify(spec, config)
        constants = ", ".join(f"{k}={v:.6g}" for k, v in report.constants.items())
        status = "통과" if report.passed else f"실패 ({report.message})"
        print(f"  {name:16s} {constants}  → {status}")
        all_passed &= report.passed

    print("\n" + "="*80)
    print("모든 검사 통과!" if all_passed else "실패한 검사가 있습니다.")
    print("="*80)
    return EXIT_OK if all_passed else EXIT_FAILED


if __name__ == '__main__':
    sys.exit(cli_main() if len(sys.argv) > 1 else demo())
