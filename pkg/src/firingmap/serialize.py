"""CSV and JSON writers with a fixed 17-significant-digit float format."""
from __future__ import annotations

import dataclasses
import enum
import json
import math

import numpy as np

from .almostperiod import AlmostPeriodScan
from .firing import DisplacementProfile, SpikeTrain


def fmt(x) -> str:
    """Round-trip float text: 17 significant digits."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def to_plain(obj):
    """Convert dataclasses, enums and numpy values into JSON-ready objects."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        for extra in ("status", "passed", "precondition_met"):
            if hasattr(type(obj), extra) and isinstance(getattr(type(obj), extra), property):
                out[extra] = to_plain(getattr(obj, extra))
        return out
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def dumps_json(obj, indent: int = 2) -> str:
    """Deterministic JSON text; floats use :func:`fmt` (non-finite as strings)."""
    return _dump(to_plain(obj), indent, 0) + "\n"


def _dump(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        text = fmt(obj)
        return text if math.isfinite(obj) else json.dumps(text)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_dump(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _dump(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_document(config: dict, result) -> str:
    return dumps_json({"config": config, "result": result})


def _header(config: dict) -> list[str]:
    lines = []
    for key, val in _flatten(to_plain(config)):
        if isinstance(val, bool):
            text = str(val).lower()
        elif isinstance(val, float):
            text = fmt(val)
        else:
            text = str(val)
        lines.append(f"# {key}={text}")
    return lines


def _flatten(obj, prefix: str = ""):
    """Yield ``(dotted.key, leaf)`` pairs; numeric lists stay whole."""
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


def csv_document(config: dict, columns: list[str], rows) -> str:
    lines = _header(config)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt(v)
    return str(v)


def spike_train_csv(train: SpikeTrain, config: dict) -> str:
    rows = [(k + 1, t, r) for k, (t, r) in enumerate(zip(train.times, train.residuals))]
    cfg = dict(config, start=train.start, requested=train.requested, truncated=train.truncated)
    return csv_document(cfg, ["index", "time", "residual"], rows)


def displacement_csv(profile: DisplacementProfile, config: dict) -> str:
    return csv_document(config, ["t", "psi"], zip(profile.grid, profile.values))


def scan_csv(scan: AlmostPeriodScan, config: dict) -> str:
    cfg = dict(config, kind=scan.kind, epsilon=scan.epsilon, tau_lo=scan.tau_range[0],
               tau_hi=scan.tau_range[1], tau_step=scan.tau_step, max_gap=scan.max_gap,
               accepted_count=len(scan.accepted))
    accepted = set(scan.accepted.tolist())
    rows = [(t, m, t in accepted) for t, m in zip(scan.taus.tolist(), scan.metrics.tolist())]
    return csv_document(cfg, ["tau", "metric", "accepted"], rows)


def record_csv(record: dict, config: dict) -> str:
    """Two-column ``field,value`` rendering of a flat result record."""
    rows = []
    for key, val in _flatten(to_plain(record)):
        if isinstance(val, list):
            val = " ".join(_cell(v) for v in val)
        rows.append((key, val))
    return csv_document(config, ["field", "value"], rows)
