"""Convergence trace records and their CSV serialization.

One record per noteworthy engine event (construction, improvement, restart,
reheat) plus periodic ticks. Floats are written with repr so a file round
trip reproduces the in-memory records exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

CSV_COLUMNS = (
    "elapsed_ms",
    "iteration",
    "temperature",
    "best_cost",
    "best_served",
    "current_cost",
    "current_served",
    "event",
)

EVENTS = ("construct", "improve", "restart", "reheat", "tick")


@dataclass(frozen=True)
class TraceRecord:
    elapsed_ms: float
    iteration: int
    temperature: float
    best_cost: float | None
    best_served: int
    current_cost: float
    current_served: int
    event: str


def write_trace(records, fh) -> None:
    close = False
    if isinstance(fh, (str, bytes)):
        fh = open(fh, "w", encoding="utf-8", newline="")
        close = True
    try:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                (
                    repr(r.elapsed_ms),
                    r.iteration,
                    repr(r.temperature),
                    "" if r.best_cost is None else repr(r.best_cost),
                    r.best_served,
                    repr(r.current_cost),
                    r.current_served,
                    r.event,
                )
            )
    finally:
        if close:
            fh.close()


def read_trace(fh) -> list[TraceRecord]:
    close = False
    if isinstance(fh, (str, bytes)):
        fh = open(fh, "r", encoding="utf-8", newline="")
        close = True
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected trace header: {header}")
        records = []
        for row in reader:
            records.append(
                TraceRecord(
                    elapsed_ms=float(row[0]),
                    iteration=int(row[1]),
                    temperature=float(row[2]),
                    best_cost=float(row[3]) if row[3] else None,
                    best_served=int(row[4]),
                    current_cost=float(row[5]),
                    current_served=int(row[6]),
                    event=row[7],
                )
            )
        return records
    finally:
        if close:
            fh.close()
