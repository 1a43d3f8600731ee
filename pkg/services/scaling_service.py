"""
스케일링 데이터 서비스

QUBO 크기 비교 데이터셋 (clause 당 ancilla 수, HC 행렬 크기) 생성
행렬을 만들지 않고 폭 규칙만으로 계산
"""
from pathlib import Path
from typing import Optional, Tuple, Union

import pandas as pd

from worker.pipeline.config import FIGURE3_EDGE_FACTOR
from worker.pipeline.hamiltonian import dimension_for
from worker.pipeline.sat import r


class ScalingService:
    """스케일링 데이터셋 서비스"""

    def ancilla_frame(self, k_range: Tuple[int, int]) -> pd.DataFrame:
        """clause 길이 k 별 ancilla 수: chancellor = k, ours = r(k)"""
        rows = [{"k": k, "chancellor": k, "ours": r(k)} for k in range(k_range[0], k_range[1] + 1)]
        return pd.DataFrame(rows, columns=["k", "chancellor", "ours"])

    def fully_connected_frame(self, n_range: Tuple[int, int]) -> pd.DataFrame:
        """완전 그래프: |E| = N(N-1), 시작 정점에 닿는 간선 2(N-1)"""
        rows = []
        for n in range(n_range[0], n_range[1] + 1):
            edges = n * (n - 1)
            rows.append({"N": n, "lucas": n * n, "ours": dimension_for(n, edges, 2 * (n - 1))})
        return pd.DataFrame(rows, columns=["N", "lucas", "ours"])

    def linear_density_frame(self, n_range: Tuple[int, int], factor: int = FIGURE3_EDGE_FACTOR) -> pd.DataFrame:
        """|E| = factor * N; 평균 차수 정점의 간선 수 2|E|/N 을 시작 정점에 적용"""
        rows = []
        for n in range(n_range[0], n_range[1] + 1):
            edges = min(factor * n, n * (n - 1))
            start_incident = min(2 * edges // n, 2 * (n - 1))
            rows.append({"N": n, "edges": edges, "lucas": n * n,
                         "ours": dimension_for(n, edges, start_incident)})
        return pd.DataFrame(rows, columns=["N", "edges", "lucas", "ours"])

    def crossover(self, frame: pd.DataFrame) -> Optional[int]:
        """ours < lucas 가 범위 끝까지 유지되기 시작하는 가장 작은 N (없으면 None)"""
        below = (frame["ours"] < frame["lucas"]).tolist()
        if not below or not below[-1]:
            return None
        idx = len(below) - 1
        while idx > 0 and below[idx - 1]:
            idx -= 1
        return int(frame["N"].iloc[idx])

    def write_csv(self, frame: pd.DataFrame, path: Union[str, Path]) -> None:
        """결정적 CSV 출력 (index 없음, LF 줄바꿈)"""
        frame.to_csv(path, index=False, lineterminator="\n")
