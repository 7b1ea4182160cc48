"""Binary indicator datasets: construction, CSV I/O, validation and the MPI index."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import numpy as np

_TRUE = {"1", "true"}
_FALSE = {"0", "false"}


class DatasetError(ValueError):
    """Raised when input cannot be turned into a valid binary dataset."""


class CellDomainError(DatasetError):
    """A cell outside {0, 1}. ``row`` and ``column`` are 0-based data coordinates."""

    def __init__(self, row, column, value):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"non-binary cell {value!r} at row {row}, column {column}")


class BinaryDataset:
    """An immutable n x d matrix of 0/1 indicators with named columns.

    Parameters
    ----------
    values : array_like
        Two-dimensional array of 0/1 (or bool) values, one row per individual.
    column_names : sequence of str, optional
        Unique, non-empty names. Defaults to ``X1..Xd``.
    """

    def __init__(self, values, column_names=None):
        arr = np.asarray(values)
        if arr.ndim != 2:
            raise DatasetError(f"expected a 2-D array, got shape {arr.shape}")
        n, d = arr.shape
        if n < 1:
            raise DatasetError("dataset has no rows")
        if d < 2:
            raise DatasetError(f"dataset needs at least 2 columns, got {d}")
        if arr.dtype != bool:
            bad = np.argwhere((arr != 0) & (arr != 1))
            if len(bad):
                r, c = bad[0]
                raise CellDomainError(int(r), int(c), arr[r, c].item())
        if column_names is None:
            column_names = [f"X{k + 1}" for k in range(d)]
        column_names = [str(c) for c in column_names]
        if len(column_names) != d:
            raise DatasetError(f"{len(column_names)} column names for {d} columns")
        problems = _name_problems(column_names)
        if problems:
            raise DatasetError("; ".join(problems))

        data = arr.astype(np.uint8)
        data.setflags(write=False)
        self._values = data
        self._names = tuple(column_names)

    @property
    def values(self) -> np.ndarray:
        """Read-only ``(n, d)`` uint8 array."""
        return self._values

    @property
    def column_names(self) -> list[str]:
        return list(self._names)

    @property
    def n(self) -> int:
        return self._values.shape[0]

    @property
    def d(self) -> int:
        return self._values.shape[1]

    def column_index(self, name_or_index) -> int:
        if isinstance(name_or_index, (int, np.integer)):
            k = int(name_or_index)
            if not 0 <= k < self.d:
                raise IndexError(f"column index {k} out of range for d={self.d}")
            return k
        try:
            return self._names.index(str(name_or_index))
        except ValueError:
            raise KeyError(f"no column named {name_or_index!r}") from None

    def select_columns(self, indices) -> BinaryDataset:
        indices = list(indices)
        return BinaryDataset(self._values[:, indices], [self._names[k] for k in indices])

    def __eq__(self, other):
        if not isinstance(other, BinaryDataset):
            return NotImplemented
        return self._names == other._names and np.array_equal(self._values, other._values)

    def __repr__(self):
        return f"BinaryDataset(n={self.n}, d={self.d})"


def _name_problems(names):
    problems = []
    seen = set()
    for k, name in enumerate(names):
        if not name.strip():
            problems.append(f"column {k} has an empty name")
        elif name in seen:
            problems.append(f"duplicate column name {name!r}")
        seen.add(name)
    return problems


def _parse_cell(text, row, column):
    t = text.strip().lower()
    if t in _TRUE:
        return 1
    if t in _FALSE:
        return 0
    raise CellDomainError(row, column, text)


def load_csv(path, has_header=True) -> BinaryDataset:
    """Read a comma-separated 0/1 file.

    Cells may be ``0``/``1`` or ``true``/``false`` (case-insensitive). Without a
    header, columns are named ``X1..Xd``. Row order follows the file.
    """
    path = os.fspath(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            records = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if not records:
        raise DatasetError(f"{path} is empty")

    names = None
    if has_header:
        names = [c.strip() for c in records[0]]
        records = records[1:]
        if not records:
            raise DatasetError(f"{path} has a header but no data rows")
    width = len(names) if names is not None else len(records[0])
    rows = []
    for r, rec in enumerate(records):
        if len(rec) != width:
            line = r + (2 if has_header else 1)
            raise DatasetError(f"{path}: line {line} has {len(rec)} fields, expected {width}")
        rows.append([_parse_cell(cell, r, c) for c, cell in enumerate(rec)])
    return BinaryDataset(np.array(rows, dtype=np.uint8), names)


def save_csv(ds: BinaryDataset, path) -> None:
    """Write ``ds`` with a header row and LF line endings."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ds.column_names)
        writer.writerows(ds.values.tolist())


@dataclass
class ValidationReport:
    constant_columns: list = field(default_factory=list)
    duplicate_name_errors: list = field(default_factory=list)
    cell_domain_errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.constant_columns or self.duplicate_name_errors or self.cell_domain_errors)


def validate(ds) -> ValidationReport:
    """Report constant columns (and, for raw arrays, name/cell problems).

    ``ds`` is usually a :class:`BinaryDataset`, whose constructor already
    enforces names and cell domain; a ``(values, names)`` tuple is also
    accepted so unchecked input can be audited without raising.
    """
    if isinstance(ds, BinaryDataset):
        values, names = ds.values, ds.column_names
    else:
        values, names = ds
        values = np.asarray(values)
    report = ValidationReport()
    report.duplicate_name_errors = _name_problems([str(x) for x in names])
    report.cell_domain_errors = [
        (int(r), int(c)) for r, c in np.argwhere((values != 0) & (values != 1))
    ]
    for k in range(values.shape[1]):
        col = values[:, k]
        if np.all(col == col[0]):
            report.constant_columns.append(k)
    return report


@dataclass(frozen=True)
class MpiResult:
    m0: float
    q0: float
    a0: float
    per_row_deprivation: np.ndarray


def mpi_index(ds, threshold: float) -> MpiResult:
    """Adjusted headcount ratio ``M0 = q0 * a0`` of a deprivation-indicator matrix.

    A row's deprivation score is its share of 1-cells; the row counts as
    deprived when the score is strictly greater than ``threshold``.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    values = ds.values if isinstance(ds, BinaryDataset) else np.asarray(ds)
    n, d = values.shape
    if d < 1:
        raise ValueError("need at least one indicator")
    scores = values.sum(axis=1) / d
    deprived = scores > threshold
    n_deprived = int(deprived.sum())
    q0 = n_deprived / n
    a0 = float(scores[deprived].mean()) if n_deprived else 0.0
    return MpiResult(m0=q0 * a0, q0=q0, a0=a0, per_row_deprivation=scores)
