"""
공통 모듈
설정, 유틸리티 등
"""
