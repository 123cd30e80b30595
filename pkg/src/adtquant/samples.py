"""CSV sample ingestion: one numeric value per line, optional header."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import AdtError


@dataclass(frozen=True)
class SampleSeries:
    values: tuple[float, ...]
    source: str | None = None

    def __post_init__(self):
        if len(self.values) < 2:
            raise AdtError(f"need at least 2 samples, got {len(self.values)}")
        if any(not math.isfinite(x) for x in self.values):
            raise AdtError("samples must be finite")


def parse_csv_samples(text: str, source: str | None = None) -> SampleSeries:
    """One value per line; a non-numeric first line is taken as a header;
    blank lines are ignored."""
    values: list[float] = []
    first_data_line = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            x = float(line)
        except ValueError:
            if first_data_line:
                first_data_line = False
                continue  # header
            raise AdtError(f"line {lineno}: non-numeric value {line!r}")
        if not math.isfinite(x):
            raise AdtError(f"line {lineno}: non-finite value {line!r}")
        first_data_line = False
        values.append(x)
    if len(values) < 2:
        raise AdtError(f"need at least 2 samples, got {len(values)}")
    return SampleSeries(tuple(values), source)
