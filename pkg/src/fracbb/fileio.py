"""Coefficient JSON and grid CSV serialization, plus deterministic reports.

Coefficient files carry one entry per (frequency, blade) pair:

    {"dim": n, "band": N,
     "entries": [{"m": [m1, ..., mn], "alpha": [j1, ..., jk], "re": x, "im": y}]}

where ``alpha`` is the increasing Clifford basis subset (empty list = scalar
part).  Grid files are CSV, row-major over the grid, one (re, im) column pair
per Clifford basis element, with a header row naming the components.

All floating-point output uses 17 significant digits so values round-trip
bit-exactly, and entries are emitted in a canonical sorted order so identical
inputs produce identical bytes.
"""

from __future__ import annotations

import csv
import json
from typing import Iterable, Sequence

import numpy as np

from .clifford import CliffordElement, mask_to_subset, subset_to_mask
from .errors import InputError
from .spectral import GridField, SpectralField

SCHEMA_VERSION = 1


def format_float(x: float) -> str:
    """Render a float with 17 significant digits (round-trip exact)."""
    return format(float(x), ".17g")


def dumps_json(value, indent: int = 0) -> str:
    """JSON text with floats rendered via :func:`format_float`.

    Supports dict/list/str/bool/None/int/float trees; dict keys keep their
    insertion order (callers build them deterministically).
    """
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = ",\n".join(
            f"{inner}{json.dumps(str(k))}: {dumps_json(v, indent + 1)}"
            for k, v in value.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        seq = list(value)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, np.integer)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(str(int(v)) for v in seq) + "]"
        items = ",\n".join(f"{inner}{dumps_json(v, indent + 1)}" for v in seq)
        return "[\n" + items + "\n" + pad + "]"
    raise InputError(f"cannot serialize value of type {type(value).__name__}")


def write_json(path, value) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_json(value))
        fh.write("\n")


# -- coefficient files -------------------------------------------------------


def field_to_jsonable(field: SpectralField) -> dict:
    entries = []
    for m, element in field.sorted_items():
        for subset, value in element.items_by_subset():
            entries.append(
                {
                    "m": list(m),
                    "alpha": list(subset),
                    "re": float(value.real),
                    "im": float(value.imag),
                }
            )
    return {"dim": field.dim, "band": field.band, "entries": entries}


def save_coefficients(field: SpectralField, path) -> None:
    write_json(path, field_to_jsonable(field))


def field_from_jsonable(data: dict) -> SpectralField:
    try:
        dim = int(data["dim"])
        band = int(data["band"])
        raw_entries = data["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed coefficient data: {exc}") from exc
    coeffs: dict[tuple[int, ...], dict[int, complex]] = {}
    for entry in raw_entries:
        try:
            m = tuple(int(v) for v in entry["m"])
            subset = tuple(int(v) for v in entry["alpha"])
            value = complex(float(entry["re"]), float(entry["im"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed coefficient entry {entry!r}") from exc
        mask = subset_to_mask(subset, dim)
        comps = coeffs.setdefault(m, {})
        comps[mask] = comps.get(mask, 0j) + value
    return SpectralField(
        dim,
        band,
        {m: CliffordElement(dim, comps) for m, comps in coeffs.items()},
    )


def load_coefficients(path) -> SpectralField:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read coefficient file {path}: {exc}") from exc
    return field_from_jsonable(data)


# -- grid files ---------------------------------------------------------------


def blade_label(mask: int) -> str:
    subset = mask_to_subset(mask)
    return "1" if not subset else "e" + "".join(str(j) for j in subset)


def _label_to_mask(label: str, dim: int) -> int:
    if label == "1":
        return 0
    if not label.startswith("e"):
        raise InputError(f"unrecognized blade label {label!r}")
    return subset_to_mask(tuple(int(ch) for ch in label[1:]), dim)


def save_grid_csv(grid: GridField, path) -> None:
    masks = sorted(grid.comps)
    header: list[str] = []
    for mask in masks:
        label = blade_label(mask)
        header += [f"re_{label}", f"im_{label}"]
    flats = [grid.comps[mask].reshape(-1) for mask in masks]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for k in range(flats[0].size):
            row: list[str] = []
            for flat in flats:
                row += [format_float(flat[k].real), format_float(flat[k].imag)]
            writer.writerow(row)


def load_grid_csv(path, dim: int) -> GridField:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [row for row in reader if row]
    except (OSError, StopIteration, csv.Error) as exc:
        raise InputError(f"cannot read grid file {path}: {exc}") from exc
    if len(header) % 2 != 0:
        raise InputError("grid CSV must have (re, im) column pairs")
    masks = []
    for col in range(0, len(header), 2):
        re_name, im_name = header[col], header[col + 1]
        if not re_name.startswith("re_") or not im_name.startswith("im_"):
            raise InputError(f"unexpected grid CSV columns {re_name!r}, {im_name!r}")
        if re_name[3:] != im_name[3:]:
            raise InputError(f"mismatched component pair {re_name!r}, {im_name!r}")
        masks.append(_label_to_mask(re_name[3:], dim))
    count = len(rows)
    points = round(count ** (1.0 / dim))
    if points**dim != count:
        raise InputError(f"{count} grid rows do not form a cubic {dim}-D grid")
    data = np.array([[float(v) for v in row] for row in rows], dtype=float)
    if data.shape[1] != len(header):
        raise InputError("grid CSV rows have inconsistent width")
    shape = (points,) * dim
    comps = {}
    for i, mask in enumerate(masks):
        comps[mask] = (data[:, 2 * i] + 1j * data[:, 2 * i + 1]).reshape(shape)
    return GridField(dim, points, comps)


# -- tabular reports ----------------------------------------------------------


def write_csv_report(
    path, header: Sequence[str], rows: Iterable[Sequence], config: dict | None = None
) -> None:
    """CSV with leading schema/config comment lines; floats at 17 digits."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema_version={SCHEMA_VERSION}\n")
        if config is not None:
            fh.write(f"# config={json.dumps(config, sort_keys=True)}\n")
        writer = csv.writer(fh)
        writer.writerow(list(header))
        for row in rows:
            writer.writerow(
                [
                    format_float(v)
                    if isinstance(v, (float, np.floating))
                    else str(v)
                    for v in row
                ]
            )
