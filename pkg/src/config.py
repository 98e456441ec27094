# src/config.py
# -*- coding: utf-8 -*-
"""
환경 설정
- .env 를 한 번 읽고 os.getenv 기본값으로 모듈 상수를 만든다
- CLI 플래그가 있으면 그 값이 우선
"""
import os
from typing import Optional

from dotenv import load_dotenv

from .errors import ConfigError

load_dotenv()

# ──────────────────────────────────────────────────────────────────────────────
# 경로/상수
# ──────────────────────────────────────────────────────────────────────────────
PROJ_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))

KB_DIR  = os.getenv("KB_DIR", os.path.join(PROJ_ROOT, "kb"))
OUT_DIR = os.getenv("OUT_DIR", os.path.join(PROJ_ROOT, "out"))

TABLE_PATH      = os.getenv("TABLE_PATH", os.path.join(KB_DIR, "h_table.txt"))
GENERATORS_PATH = os.getenv("GENERATORS_PATH", os.path.join(KB_DIR, "h_generators.txt"))
CASE1_CONFIG    = os.getenv("CASE1_CONFIG", os.path.join(KB_DIR, "case1.cfg"))
CASE2_CONFIG    = os.getenv("CASE2_CONFIG", os.path.join(KB_DIR, "case2.cfg"))


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")


JOBS              = _int_env("JOBS", 1)
PERM_CAP          = _int_env("PERM_CAP", 1_000_000)
MAX_DIXON_CLASSES = _int_env("MAX_DIXON_CLASSES", 32)
LOG_LEVEL         = os.getenv("LOG_LEVEL", "WARNING").upper()


def resolve_path(path: str, base_dir: Optional[str] = None) -> str:
    """문서 안의 상대경로는 그 문서가 있는 디렉터리 기준"""
    if os.path.isabs(path):
        return path
    return os.path.abspath(os.path.join(base_dir or PROJ_ROOT, path))
