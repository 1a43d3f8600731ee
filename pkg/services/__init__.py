"""
서비스 레이어 모듈

스케일링 데이터셋 등 파이프라인 위의 집계 로직
"""
