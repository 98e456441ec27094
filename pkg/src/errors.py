# src/errors.py
# -*- coding: utf-8 -*-
"""
작업대 공통 예외
- 모든 예외는 exit_code 를 가진다 (2 = 입력 오류, 1 = 계산이 기대와 다른 결론)
- CLI 는 exit_code 만 보고 종료 코드를 정한다
"""


class WorkbenchError(Exception):
    exit_code = 1

    def __init__(self, detail: str = ""):
        super().__init__(detail)
        self.detail = detail


# ──────────────────────────────────────────────────────────────────────────────
# 입력 오류 (exit 2)
# ──────────────────────────────────────────────────────────────────────────────
class InputError(WorkbenchError):
    exit_code = 2


class ScalarSyntaxError(InputError):
    pass


class ParseError(InputError):
    pass


class StructureError(InputError):
    pass


class ConfigError(InputError):
    pass


class TableMismatch(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class CapExceeded(InputError):
    pass


# ──────────────────────────────────────────────────────────────────────────────
# 계산 오류 (exit 1)
# ──────────────────────────────────────────────────────────────────────────────
class ComputationError(WorkbenchError):
    exit_code = 1


class ZeroInverse(ComputationError, ZeroDivisionError):
    pass


class SingularMatrix(ComputationError):
    pass


class SingularBasis(ComputationError):
    pass


class NonIntegerValue(ComputationError):
    pass


class InfeasibleGram(ComputationError):
    pass


class InfeasibleInstance(ComputationError):
    pass


class UnderdeterminedSystem(ComputationError):
    pass


class ValueOutsideRing(ComputationError):
    pass
