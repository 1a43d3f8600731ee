"""
Worker (QUBO 컴파일 파이프라인) 모듈
"""
