"""Deterministic on-disk formats for trajectories and run summaries.

Both are JSON documents written by a custom serializer that renders every
float with 17 significant digits, which round-trips IEEE doubles exactly:
identical runs produce byte-identical files, and reloading reproduces the
recorded numbers bit for bit. Standard ``json.loads`` reads them back.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .solver import IterateRecord, SolverState

TRAJECTORY_FORMAT = "conncover-trajectory-v1"
SUMMARY_FORMAT = "conncover-summary-v1"


def _render(value, out):
    if value is None:
        out.append("null")
    elif isinstance(value, bool) or isinstance(value, np.bool_):
        out.append("true" if value else "false")
    elif isinstance(value, (int, np.integer)):
        out.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        v = float(value)
        if np.isnan(v):
            out.append("NaN")
        elif np.isinf(v):
            out.append("Infinity" if v > 0 else "-Infinity")
        else:
            text = format(v, ".17g")
            if "." not in text and "e" not in text and "E" not in text:
                text += ".0"
            out.append(text)
    elif isinstance(value, str):
        out.append(json.dumps(value))
    elif isinstance(value, np.ndarray):
        _render(value.tolist(), out)
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _render(item, out)
        out.append("]")
    elif isinstance(value, dict):
        out.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(key)))
            out.append(":")
            _render(item, out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(value):
    """Serialize to a JSON string with exact float round-tripping."""
    out = []
    _render(value, out)
    return "".join(out)


def _record_to_dict(rec):
    return {
        "t": rec.t,
        "x": rec.x,
        "coverage": rec.coverage,
        "reg": rec.reg,
        "det_m": rec.det_m,
        "max_violation": rec.max_violation,
        "slack_gap": rec.slack_gap,
        "stationarity": rec.stationarity,
        "lambda_norm": rec.lambda_norm,
        "mu_norm": rec.mu_norm,
    }


def _record_from_dict(d):
    return IterateRecord(
        t=int(d["t"]),
        x=np.asarray(d["x"], dtype=float),
        coverage=float(d["coverage"]),
        reg=float(d["reg"]),
        det_m=float(d["det_m"]),
        max_violation=float(d["max_violation"]),
        slack_gap=float(d["slack_gap"]),
        stationarity=float(d["stationarity"]),
        lambda_norm=float(d["lambda_norm"]),
        mu_norm=float(d["mu_norm"]),
    )


def thin_records(records, thin):
    """Every ``thin``-th record, always keeping the first and last."""
    if thin < 1:
        raise ValueError(f"thin must be a positive integer, got {thin}")
    if thin == 1:
        return list(records)
    kept = list(records[::thin])
    if records and records[-1].t != kept[-1].t:
        kept.append(records[-1])
    return kept


def trajectory_document(trajectory, run_id, config_echo, thin=1):
    """Build the serializable trajectory document."""
    final = trajectory.final_state
    return {
        "format": TRAJECTORY_FORMAT,
        "run_id": run_id,
        "config": config_echo,
        "termination": trajectory.termination,
        "records": [_record_to_dict(r) for r in thin_records(trajectory.records, thin)],
        "final": {
            "t": final.t,
            "x": final.x,
            "u": final.u,
            "z": final.z,
            "lambda": final.lam,
            "mu": final.mu,
        },
    }


def write_trajectory(trajectory, run_id, config_echo, path, thin=1):
    doc = trajectory_document(trajectory, run_id, config_echo, thin=thin)
    Path(path).write_text(dumps(doc) + "\n")


def read_trajectory(path):
    """Load a trajectory document back into (document, records, state).

    ``document`` is the raw parsed dict; ``records`` are reconstructed
    iterate records and ``state`` the reconstructed final state.
    """
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != TRAJECTORY_FORMAT:
        raise ValueError(f"{path}: not a trajectory file (format={doc.get('format')!r})")
    records = [_record_from_dict(d) for d in doc["records"]]
    f = doc["final"]
    state = SolverState(
        x=np.asarray(f["x"], dtype=float),
        u=np.asarray(f["u"], dtype=float),
        z=np.asarray(f["z"], dtype=float),
        lam=np.asarray(f["lambda"], dtype=float),
        mu=np.asarray(f["mu"], dtype=float),
        t=int(f["t"]),
    )
    return doc, records, state


def write_summary(summary_dict, path):
    if "format" not in summary_dict:
        summary_dict = {"format": SUMMARY_FORMAT, **summary_dict}
    Path(path).write_text(dumps(summary_dict) + "\n")


def read_summary(path):
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != SUMMARY_FORMAT:
        raise ValueError(f"{path}: not a summary file (format={doc.get('format')!r})")
    return doc
