# src/gramsearch.py
# -*- coding: utf-8 -*-
"""
Gram 행렬 제약 정수 벡터 탐색
- 목표 T (n×n 정수) 에 대해 Σ v vᵀ = T 인 0 이 아닌 정수 벡터 모임을 모두 찾는다
- 대칭: 벡터 순서 치환, 각 벡터의 부호 반전
- 좌표를 하나씩 채우는 순서 탐색(orderly search)
  · 지금까지 같은 접두를 가진 벡터 블록 안에서는 새 좌표 값이 비증가
  · 새 벡터는 양수로 시작, 새로 만드는 벡터끼리도 비증가
  · 처리한 모든 좌표에 대해 Cauchy-Schwarz 가지치기
- lumped 좌표: 노름을 다 채우지 않아도 되고(잔여는 residual), 새 벡터를 만들지 않는다
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import isqrt
from typing import List, Optional, Sequence, Set, Tuple

from .errors import DimensionMismatch

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class GramSearchSpec:
    target: Tuple[Tuple[int, ...], ...]
    order: Tuple[int, ...] = ()
    lumped: Optional[int] = None
    max_vectors: Optional[int] = None

    def __post_init__(self):
        n = len(self.target)
        if any(len(row) != n for row in self.target):
            raise DimensionMismatch("gram target must be square")
        order = self.order or tuple(range(n))
        if sorted(order) != list(range(n)):
            raise DimensionMismatch(f"coordinate order {order} is not a permutation of 0..{n - 1}")
        object.__setattr__(self, "order", tuple(order))
        if self.max_vectors is None:
            # 벡터 하나가 적어도 노름 1 을 쓴다
            object.__setattr__(self, "max_vectors", sum(max(0, self.target[i][i]) for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.target)


@dataclass(frozen=True, order=True)
class GramSolution:
    vectors: Tuple[Vector, ...]
    residual: int = 0


def normalize_vector(v: Sequence[int]) -> Vector:
    """첫 번째 0 아닌 성분이 양수가 되도록"""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def canonical_form(vectors: Sequence[Sequence[int]]) -> Tuple[Vector, ...]:
    return tuple(sorted(normalize_vector(v) for v in vectors))


def gram_of(vectors: Sequence[Sequence[int]], n: int) -> List[List[int]]:
    G = [[0] * n for _ in range(n)]
    for v in vectors:
        for i in range(n):
            if v[i]:
                for j in range(n):
                    G[i][j] += v[i] * v[j]
    return G


class _Search:
    def __init__(self, spec: GramSearchSpec, stop_at: Optional[int] = None):
        self.spec = spec
        self.T = spec.target
        self.n = spec.size
        self.order = spec.order
        self.stop_at = stop_at
        self.found: Set[GramSolution] = set()
        self.frontier: List[List[List[int]]] = []

    # ------- 진입점 -------
    def run(self, pos: int = 0, vecs: Optional[List[List[int]]] = None) -> None:
        self._descend(pos, [list(v) for v in (vecs or [])])

    # ------- 내부 -------
    def _record(self, vecs: List[List[int]]) -> None:
        residual = 0
        lumped = self.spec.lumped
        if lumped is not None:
            residual = self.T[lumped][lumped] - sum(v[lumped] ** 2 for v in vecs)
        self.found.add(GramSolution(canonical_form(vecs), residual))

    def _descend(self, pos: int, vecs: List[List[int]]) -> None:
        if self.stop_at is not None and pos == self.stop_at:
            self.frontier.append([list(v) for v in vecs])
            return
        if pos == self.n:
            self._record(vecs)
            return
        i = self.order[pos]
        prev = self.order[:pos]
        self._assign(pos, i, prev, vecs, 0, 0, [0] * len(prev))

    def _assign(self, pos: int, i: int, prev: Tuple[int, ...], vecs: List[List[int]],
                k: int, norm: int, need: List[int]) -> None:
        T = self.T
        rem = T[i][i] - norm
        if rem < 0:
            return
        for jj, j in enumerate(prev):
            gap = T[i][j] - need[jj]
            room = 0
            for v in vecs[k:]:
                room += v[j] * v[j]
            if gap * gap > rem * room:
                return
        if k == len(vecs):
            # 여기서 gap 은 모두 0 (room = 0 인 Cauchy-Schwarz)
            if i == self.spec.lumped:
                self._descend(pos + 1, vecs)
            else:
                self._spawn(pos, i, vecs, rem, rem)
            return
        bound = isqrt(rem)
        hi = bound
        v = vecs[k]
        if k > 0 and all(v[j] == vecs[k - 1][j] for j in prev):
            hi = min(hi, vecs[k - 1][i])
        for x in range(hi, -bound - 1, -1):
            v[i] = x
            if x:
                for jj, j in enumerate(prev):
                    need[jj] += x * v[j]
            self._assign(pos, i, prev, vecs, k + 1, norm + x * x, need)
            if x:
                for jj, j in enumerate(prev):
                    need[jj] -= x * v[j]
        v[i] = 0

    def _spawn(self, pos: int, i: int, vecs: List[List[int]], rem: int, cap: int) -> None:
        if rem == 0:
            self._descend(pos + 1, vecs)
            return
        if len(vecs) >= self.spec.max_vectors:
            return
        for e in range(min(cap, isqrt(rem)), 0, -1):
            fresh = [0] * self.n
            fresh[i] = e
            vecs.append(fresh)
            self._spawn(pos, i, vecs, rem - e * e, e)
            vecs.pop()


def _solve_from_state(args: Tuple[GramSearchSpec, List[List[int]]]) -> Set[GramSolution]:
    spec, vecs = args
    s = _Search(spec)
    s.run(1, vecs)
    return s.found


def search(spec: GramSearchSpec, jobs: int = 1) -> List[GramSolution]:
    """정규형 해 전체를 정렬해서 돌려준다 (병렬 여부와 무관하게 같은 결과)"""
    if spec.size == 0:
        return [GramSolution(())]
    if jobs <= 1 or spec.size == 1:
        s = _Search(spec)
        s.run()
        found = s.found
    else:
        head = _Search(spec, stop_at=1)
        head.run()
        logger.debug("gram search frontier: %d states over %d workers", len(head.frontier), jobs)
        found = set()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_solve_from_state, [(spec, st) for st in head.frontier]):
                found |= part
    out = sorted(found)
    logger.info("gram search: %d canonical solutions", len(out))
    return out
