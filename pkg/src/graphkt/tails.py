"""Sweeps of tail-invariance checks over several attachment points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from graphkt.graph import Graph, GraphError
from graphkt.invariants import TailInvarianceReport, tail_invariance_report

__all__ = ["TailSweepConfig", "PointReport", "SweepResult", "sweep"]


@dataclass(frozen=True)
class TailSweepConfig:
    attachment_points: tuple[str, ...]
    max_length: int
    # Tail edges always carry parity 0; kept as a field so reports record it.
    grading_policy: str = "parity0"

    def __post_init__(self):
        object.__setattr__(self, "attachment_points", tuple(self.attachment_points))
        if isinstance(self.max_length, bool) or not isinstance(self.max_length, int) or self.max_length < 1:
            raise ValueError(f"max_length must be a positive integer, got {self.max_length!r}")
        if len(set(self.attachment_points)) != len(self.attachment_points):
            raise ValueError("attachment points must be distinct")
        if self.grading_policy != "parity0":
            raise ValueError(f"unsupported grading policy {self.grading_policy!r}")


@dataclass(frozen=True)
class PointReport:
    at: str
    report: TailInvarianceReport | None = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.report is not None and self.report.passed


@dataclass(frozen=True)
class SweepResult:
    config: TailSweepConfig
    points: tuple[PointReport, ...]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.points)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def sweep(g: Graph, v_set: Iterable[str] | str, cfg: TailSweepConfig) -> SweepResult:
    """Run :func:`tail_invariance_report` at every attachment point.

    A point that violates the report's preconditions is recorded with its
    error message; the remaining points are still evaluated.
    """
    if not isinstance(v_set, str):
        v_set = tuple(v_set)
    out = []
    for at in cfg.attachment_points:
        try:
            rep = tail_invariance_report(g, v_set, at, cfg.max_length)
        except GraphError as exc:
            out.append(PointReport(at, error=str(exc)))
        else:
            out.append(PointReport(at, report=rep))
    return SweepResult(cfg, tuple(out))
