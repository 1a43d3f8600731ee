"""
설정 관리 모듈
환경 변수 로드 및 설정 제공
"""
from pathlib import Path

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

# .env 파일 로드 (환경 변수가 이미 있으면 덮어쓰지 않음)
env_path = Path(__file__).parent.parent / ".env"
if env_path.exists():
    load_dotenv(dotenv_path=env_path, override=False)


class Settings(BaseSettings):
    """Process-wide settings read from the environment"""
    model_config = SettingsConfigDict(extra="ignore")

    log_level: str = "INFO"
    qubo_seed: int = 0
    sa_workers: int = 1  # threads used for SA restart blocks
    exhaustive_limit: int = 24


settings = Settings()
