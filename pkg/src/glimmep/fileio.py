"""Columnar text output and case files.

Snapshots and diagnostics are comma-separated text: one ``# key = value``
metadata line per field, a header row, then data rows with 17 significant
digits.  Every file is written to a temporary sibling and renamed into place,
so an aborted run never leaves a partial file behind.
"""

from __future__ import annotations

import io
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .config import tomllib
from .errors import ConfigError
from .gas import State


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % (float(v) + 0.0)   # + 0.0 folds -0 into 0


def atomic_write(path, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def _table(meta: dict, header, columns) -> str:
    out = io.StringIO()
    for k, v in meta.items():
        out.write(f"# {k} = {fmt(v)}\n")
    out.write(",".join(header) + "\n")
    for row in zip(*columns):
        out.write(",".join(fmt(v) for v in row) + "\n")
    return out.getvalue()


def snapshot_text(snap) -> str:
    return _table({"n": snap.n, "t": snap.t}, snap.COLUMNS, snap.columns())


def emit_snapshot(snap, path) -> Path:
    return atomic_write(path, snapshot_text(snap))


def diagnostics_text(reports) -> str:
    from .diagnostics import GlimmReport

    cols = GlimmReport.columns()
    rows = [r.row() for r in reports]
    return _table({}, cols, list(zip(*rows)) if rows else [[] for _ in cols])


def emit_diagnostics(reports, path) -> Path:
    return atomic_write(path, diagnostics_text(reports))


def read_table(path):
    """(metadata dict, {column: float array}) from a file written above.

    Metadata values that do not parse as numbers are kept as strings.
    """
    meta, header, rows = {}, None, []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if line.startswith("#"):
                    k, _, v = line[1:].partition("=")
                    try:
                        meta[k.strip()] = float(v)
                    except ValueError:
                        meta[k.strip()] = v.strip()
                elif header is None:
                    header = line.split(",")
                elif line:
                    rows.append([float(x) for x in line.split(",")])
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    if header is None:
        raise ValueError(f"{path}: no header row")
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return meta, {h: data[:, i] for i, h in enumerate(header)}


def _toml_value(v) -> str:
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    return _toml_value(str(v))


def witness_text(w: dict, lemma: str = "") -> str:
    """Case file for one witness; loadable by ``read_riemann_case``."""
    lines = [f"# witness {lemma}".rstrip(), f"gamma = {_toml_value(w['gamma'])}", ""]
    for side in ("left", "right"):
        rho, u = w[side]
        lines += [f"[{side}]", f"rho = {_toml_value(rho)}", f"u = {_toml_value(u)}", ""]
    meta = {k: v for k, v in w.items() if k not in ("gamma", "left", "right")}
    if lemma:
        meta = {"lemma": lemma, **meta}
    if meta:
        lines.append("[meta]")
        lines += [f"{k} = {_toml_value(v)}" for k, v in meta.items()]
    return "\n".join(lines) + "\n"


def write_witness(w: dict, path, lemma: str = "") -> Path:
    return atomic_write(path, witness_text(w, lemma))


def read_riemann_case(path):
    """(gamma, left State, right State, sample options) from a case file."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read case file {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"case file {path} is not valid TOML: {exc}") from None
    try:
        gamma = float(raw["gamma"])
        lr, lu = float(raw["left"]["rho"]), float(raw["left"]["u"])
        rr, ru = float(raw["right"]["rho"]), float(raw["right"]["u"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"case file {path} needs gamma, [left] and [right] rho/u: {exc}") from None
    if not 1.0 < gamma < 2.0:
        raise ConfigError(f"gamma must satisfy 1 < gamma < 2, got {gamma}")
    if not (lr > 0.0 and rr > 0.0):
        raise ConfigError(f"densities must be > 0 (no vacuum), got {lr}, {rr}")
    return gamma, State(lr, lu), State(rr, ru), raw.get("sample", {})
