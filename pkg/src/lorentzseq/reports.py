"""Run manifests and deterministic JSON / CSV emission."""

import csv
import datetime as _dt
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__, _kernels


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int = None
    argv: list = field(default_factory=list)
    tool_version: str = __version__
    backend: str = None
    timestamp: str = None

    def __post_init__(self):
        if self.backend is None:
            self.backend = _kernels.active_backend()
        if self.timestamp is None:
            self.timestamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")

    def to_dict(self):
        return {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "argv": list(self.argv),
            "tool_version": self.tool_version,
            "backend": self.backend,
            "timestamp": self.timestamp,
        }


def _fmt_float(x):
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == int(x) and abs(x) < 1e17:
        return repr(float(x))
    return format(x, ".17g")


def _encode(obj, out):
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k), ensure_ascii=False))
            out.append(": ")
            _encode(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, v in enumerate(obj.tolist() if isinstance(obj, np.ndarray) else obj):
            if i:
                out.append(", ")
            _encode(v, out)
        out.append("]")
    elif hasattr(obj, "to_dict"):
        _encode(obj.to_dict(), out)
    elif hasattr(obj, "value"):  # enums
        _encode(obj.value, out)
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj):
    """JSON text with floats at 17 significant digits; +-inf and nan become strings."""
    out = []
    _encode(obj, out)
    return "".join(out)


def make_report(manifest, result):
    return {"manifest": manifest.to_dict(), "result": result}


def payload_text(report):
    """Report text without the timestamp, for replay comparisons."""
    body = dict(report)
    body["manifest"] = {k: v for k, v in report["manifest"].items() if k != "timestamp"}
    return dumps(body)


def write_json(report, path):
    text = dumps(report) + "\n"
    if path is None or path == "-":
        return text
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    return buf.getvalue()
