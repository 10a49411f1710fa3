"""CSV and provenance writers.

CSV files start with ``#`` comment lines, then one header row, then data
rows. Floats are written as ``%.16e`` (17 significant digits), which
round-trips IEEE doubles exactly. Trailing ``#`` lines hold footer records.
"""

from __future__ import annotations

import csv
import json
import platform
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

FLOAT_FORMAT = "{:.16e}"


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    return FLOAT_FORMAT.format(float(x))


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence], comments: Sequence[str] = (),
              footer: Sequence[str] = ()) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(x) for x in row])
        for line in footer:
            fh.write(f"# {line}\n")
    return path


def read_csv(path):
    """Return ``(header, rows, comments)`` with numeric cells parsed as floats."""
    header = None
    rows = []
    comments = []
    with Path(path).open() as fh:
        for line in fh:
            if line.startswith("#"):
                comments.append(line[1:].strip())
                continue
            cells = next(csv.reader([line]))
            if header is None:
                header = cells
                continue
            rows.append([_parse(c) for c in cells])
    return header, rows, comments


def _parse(cell: str):
    try:
        return float(cell)
    except ValueError:
        return cell


def state_label(k: int, d: int) -> str:
    return f"rho_{k // d + 1}{k % d + 1}" if d < 10 else f"rho_{k // d + 1}_{k % d + 1}"


def write_matrix_csv(path, M: np.ndarray, part: str, comments: Sequence[str] = ()) -> Path:
    """Write the real or imaginary part of a superoperator as a labelled grid."""
    M = np.asarray(M)
    d = int(round(np.sqrt(M.shape[0])))
    values = M.real if part == "real" else M.imag
    labels = [state_label(k, d) for k in range(M.shape[0])]
    notes = list(comments) + [
        f"{part} part of a {M.shape[0]}x{M.shape[1]} superoperator acting on row-stacked density matrices",
        "ordering: " + ", ".join(labels),
    ]
    rows = ([labels[i]] + list(values[i]) for i in range(M.shape[0]))
    return write_csv(path, ["row"] + labels, rows, notes)


def write_operator(out_dir, stem: str, op: np.ndarray, comments: Sequence[str] = ()) -> list[Path]:
    """Write a d x d operator as ``<stem>_real.csv`` / ``<stem>_imag.csv`` grids (1-based labels)."""
    op = np.asarray(op)
    labels = [str(k + 1) for k in range(op.shape[0])]
    paths = []
    for part, values in (("real", op.real), ("imag", op.imag)):
        rows = ([labels[i]] + list(values[i]) for i in range(op.shape[0]))
        paths.append(write_csv(Path(out_dir) / f"{stem}_{part}.csv", ["row"] + labels, rows,
                               list(comments) + [f"{part} part of a {op.shape[0]}x{op.shape[1]} operator"]))
    return paths


def read_matrix_csv(path) -> np.ndarray:
    _, rows, _ = read_csv(path)
    return np.array([r[1:] for r in rows], dtype=float)


def write_complex_matrix(out_dir, stem: str, M: np.ndarray, comments: Sequence[str] = ()) -> list[Path]:
    out_dir = Path(out_dir)
    return [
        write_matrix_csv(out_dir / f"{stem}_real.csv", M, "real", comments),
        write_matrix_csv(out_dir / f"{stem}_imag.csv", M, "imag", comments),
    ]


def read_complex_matrix(out_dir, stem: str) -> np.ndarray:
    out_dir = Path(out_dir)
    return read_matrix_csv(out_dir / f"{stem}_real.csv") + 1j * read_matrix_csv(out_dir / f"{stem}_imag.csv")


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [[v.real, v.imag] for v in obj.ravel()] if obj.ndim == 1 else [to_jsonable(r) for r in obj]
        return obj.tolist()
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if hasattr(obj, "value") and hasattr(obj, "name"):  # enums
        return obj.value
    return obj


def versions() -> dict:
    import scipy

    from . import __version__

    return {"thermalzeno": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def write_provenance(out_dir, command: str, inputs: dict, tolerances: dict, extra: Optional[dict] = None) -> Path:
    path = Path(out_dir) / f"provenance_{command}.json"
    record = {"command": command, "inputs": inputs, "tolerances": tolerances, "versions": versions()}
    if extra:
        record.update(extra)
    path.write_text(json.dumps(to_jsonable(record), indent=2, sort_keys=True) + "\n")
    return path
