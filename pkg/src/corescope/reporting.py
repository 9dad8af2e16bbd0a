"""Deterministic CSV/JSON emission shared by the service and CLI.

Every result file is reproducible byte-for-byte for the same inputs and
seed: CSVs carry a ``# seed=N`` comment line before the header, JSON is
dumped with sorted keys, and floats use a fixed shortest-round-trip
format.
"""

from __future__ import annotations

import json
from datetime import date

from .errors import CorescopeError


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(path, header: list[str], rows, seed: int) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# seed={seed}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    """Read a CSV written by :func:`write_csv`, skipping comment lines."""
    header = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    if header is None:
        raise CorescopeError(f"{path}: no header row")
    return header, rows


def write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def parse_time(token: str) -> float:
    """Time column of an observed series: ISO-8601 date or plain number.

    Dates become fractional days since the Unix epoch so that mixed use
    stays consistent; callers typically rebase to the first observation.
    """
    token = token.strip()
    try:
        return float(token)
    except ValueError:
        pass
    try:
        return float(date.fromisoformat(token).toordinal())
    except ValueError as exc:
        raise CorescopeError(f"cannot parse time value {token!r}") from exc


def read_observed_series(path) -> list[tuple[float, float]]:
    """Observed activity CSV with columns (date, value); values in [0, 100].

    Times are rebased so the first observation is t=0 (in days when dates
    are given).
    """
    header, rows = read_csv(path)
    if len(header) < 2:
        raise CorescopeError(f"{path}: expected columns date,value")
    series = [(parse_time(r[0]), float(r[1])) for r in rows]
    if not series:
        raise CorescopeError(f"{path}: no data rows")
    t0 = series[0][0]
    return [(t - t0, v) for t, v in series]
