"""Empirical constants behind every calibrated error envelope.

The record lives in calibration.txt next to this module as plain key=value
lines and is regenerated by ``hardyz calibrate``.  Tests read the committed
record; nothing is calibrated at import time.
"""
from __future__ import annotations

from functools import lru_cache
from pathlib import Path

RECORD_PATH = Path(__file__).with_name("calibration.txt")


def parse_record(text: str) -> dict:
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = float(value)
    return out


def format_record(values: dict, header: str = "") -> str:
    lines = [f"# {h}" for h in header.splitlines()] if header else []
    lines += [f"{k}={values[k]!r}" for k in sorted(values)]
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def _load(path: str) -> dict:
    return parse_record(Path(path).read_text())


def load(path=None) -> dict:
    return dict(_load(str(path or RECORD_PATH)))


def get(key: str) -> float:
    try:
        return _load(str(RECORD_PATH))[key]
    except KeyError:
        raise KeyError(f"calibration record {RECORD_PATH} has no entry {key!r}") from None


def write(values: dict, path=None, header: str = "") -> Path:
    path = Path(path or RECORD_PATH)
    path.write_text(format_record(values, header))
    _load.cache_clear()
    return path
