"""
밸류에이션 실험실 테스트 모듈
"""
