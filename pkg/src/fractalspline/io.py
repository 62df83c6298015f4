"""File formats: data CSV/JSON, model JSON, sample CSV. All writes are atomic."""

from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .data import DataSet, validate_dataset
from .errors import DataFileError
from .model import FifModel, IfsParams, SampleSet, build_model


def atomic_write_bytes(path, payload: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name, suffix=".tmp")
    try:
        umask = os.umask(0)
        os.umask(umask)
        os.fchmod(fd, 0o666 & ~umask)  # mkstemp defaults to 0600
        with os.fdopen(fd, "wb") as f:
            f.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_json(obj, path) -> None:
    atomic_write_text(path, dump_json(obj))


# ---- interpolation data -------------------------------------------------------------

def read_dataset(path) -> DataSet:
    """Read knots/values[/derivatives] from a ``.json`` or CSV file.

    CSV needs a ``x,y`` or ``x,y,d`` header row; JSON needs the keys
    ``knots``, ``values`` and optionally ``derivatives`` (may be null).
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        return _dataset_from_json(text, path)
    return _dataset_from_csv(text, path)


def _dataset_from_json(text: str, path) -> DataSet:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DataFileError(f"{path}:{e.lineno}: {e.msg}") from e
    return dataset_from_dict(raw, where=str(path))


def dataset_from_dict(raw: dict, where: str = "<data>") -> DataSet:
    try:
        knots = raw["knots"]
        values = raw["values"]
    except (KeyError, TypeError) as e:
        raise DataFileError(f"{where}: expected keys 'knots' and 'values'") from e
    derivs = raw.get("derivatives")
    return DataSet(
        np.asarray(knots, dtype=float),
        np.asarray(values, dtype=float),
        None if derivs is None else np.asarray(derivs, dtype=float),
    )


def dataset_to_dict(data: DataSet) -> dict:
    return {
        "knots": data.knots.tolist(),
        "values": data.values.tolist(),
        "derivatives": None if data.derivatives is None else data.derivatives.tolist(),
    }


def _dataset_from_csv(text: str, path) -> DataSet:
    reader = csv.reader(_io.StringIO(text))
    rows = []
    header = None
    for lineno, row in enumerate(reader, start=1):
        cells = [c.strip() for c in row if c.strip() != ""]
        if not cells:
            continue
        if header is None:
            header = [c.lower() for c in cells]
            if header not in (["x", "y"], ["x", "y", "d"]):
                raise DataFileError(
                    f"{path}:{lineno}: header must be 'x,y' or 'x,y,d', got {','.join(cells)}"
                )
            continue
        if len(cells) != len(header):
            raise DataFileError(
                f"{path}:{lineno}: expected {len(header)} columns, got {len(cells)}"
            )
        try:
            rows.append(tuple(float(c) for c in cells))
        except ValueError as e:
            raise DataFileError(f"{path}:{lineno}: {e}") from e
    if header is None:
        raise DataFileError(f"{path}:1: empty file")
    return validate_dataset(rows)


# ---- models ---------------------------------------------------------------------------

def model_to_dict(model: FifModel) -> dict:
    return {
        "data": dataset_to_dict(model.data),
        "alphas": model.params.alphas.tolist(),
        "u": model.params.u.tolist(),
        "v": model.params.v.tolist(),
        "kappa": model.params.kappa,
    }


def model_from_dict(raw: dict, where: str = "<model>") -> FifModel:
    # coefficients are always recomputed from the stored inputs
    try:
        data = dataset_from_dict(raw["data"], where)
        params = IfsParams(
            np.asarray(raw["alphas"], dtype=float),
            np.asarray(raw["u"], dtype=float),
            np.asarray(raw["v"], dtype=float),
            float(raw.get("kappa", IfsParams.__dataclass_fields__["kappa"].default)),
        )
    except (KeyError, TypeError) as e:
        raise DataFileError(f"{where}: malformed model record ({e})") from e
    return build_model(data, params)


def write_model(model: FifModel, path) -> None:
    write_json(model_to_dict(model), path)


def read_model(path) -> FifModel:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DataFileError(f"{path}:{e.lineno}: {e.msg}") from e
    return model_from_dict(raw, where=str(path))


# ---- samples ----------------------------------------------------------------------------

def samples_to_csv(samples: SampleSet) -> str:
    lines = ["x,y,d"]
    for x, y, d in zip(samples.x, samples.y, samples.d):
        lines.append(f"{float(x)!r},{float(y)!r},{float(d)!r}")
    return "\n".join(lines) + "\n"


def write_samples_csv(samples: SampleSet, path) -> None:
    atomic_write_text(path, samples_to_csv(samples))
