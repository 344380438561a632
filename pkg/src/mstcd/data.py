"""Dataset ingestion, mean imputation, and seeded stratified fold plans."""
from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import DataFormatError, ParameterError


@dataclass(frozen=True)
class Dataset:
    """A binary-labelled point set. Missing cells are NaN until imputed.

    Labels are remapped to {0, 1} in first-seen file order; `label_names`
    records the original token for each mapped id so runs stay auditable.
    Row order is preserved from the source file.
    """

    name: str
    features: np.ndarray  # (n, d) float64
    labels: np.ndarray  # (n,) int64 in {0, 1}
    label_names: tuple[str, str]
    feature_names: tuple[str, ...] | None = None

    @property
    def sample_count(self) -> int:
        return int(self.features.shape[0])

    @property
    def feature_count(self) -> int:
        return int(self.features.shape[1])

    @property
    def missing_count(self) -> int:
        return int(np.isnan(self.features).sum())

    def class_counts(self) -> tuple[int, int]:
        return int((self.labels == 0).sum()), int((self.labels == 1).sum())


@dataclass(frozen=True)
class FoldPlan:
    """Seeded partition of sample indices into `fold_count` test folds."""

    fold_count: int
    assignments: np.ndarray  # (n,) int64, values in [0, fold_count)
    seed: int

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)


def _iter_rows(path, delimiter):
    """Yield (line_number, cells) for non-empty rows; None delimiter = any whitespace."""
    with open(path, newline="") as fh:
        if delimiter is None:
            for lineno, line in enumerate(fh, start=1):
                cells = line.split()
                if cells:
                    yield lineno, cells
        else:
            for lineno, row in enumerate(csv.reader(fh, delimiter=delimiter), start=1):
                cells = [c.strip() for c in row]
                if cells and any(c != "" for c in cells):
                    yield lineno, cells


def _cell_is_numeric(cell: str, missing_token: str) -> bool:
    if cell == missing_token or cell == "":
        return True
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _resolve_label_index(label_column, header, width, path):
    if isinstance(label_column, str):
        if header is None:
            raise ParameterError(
                f"label column {label_column!r} given by name but {path} has no header row"
            )
        try:
            return header.index(label_column)
        except ValueError:
            raise ParameterError(
                f"label column {label_column!r} not found in header of {path}"
            ) from None
    idx = int(label_column)
    if idx < 0:
        idx += width
    if not 0 <= idx < width:
        raise ParameterError(
            f"label column {label_column} is out of range for {width} columns in {path}"
        )
    return idx


def _map_labels(raw_labels, path):
    mapping: dict[str, int] = {}
    for token in raw_labels:
        if token not in mapping:
            mapping[token] = len(mapping)
    if len(mapping) > 2:
        raise DataFormatError(
            f"{path}: unsupported label cardinality, found {len(mapping)} distinct "
            f"labels {sorted(mapping)}; exactly 2 are required"
        )
    if len(mapping) < 2:
        raise DataFormatError(
            f"{path}: need exactly two classes, found only {sorted(mapping)}"
        )
    labels = np.array([mapping[t] for t in raw_labels], dtype=np.int64)
    names = tuple(sorted(mapping, key=mapping.get))
    return labels, names


def load_csv(
    path,
    label_column: int | str = -1,
    missing_token: str = "?",
    delimiter: str | None = ",",
    has_header: bool | None = None,
    name: str | None = None,
) -> Dataset:
    """Load a delimited numeric file with one label column.

    `delimiter=None` splits on any whitespace. `has_header=None` sniffs:
    the first row is a header when any of its non-label cells fails to
    parse as a number. Cells equal to `missing_token` (or empty) become
    NaN and are left for `impute_missing`.
    """
    path = Path(path)
    rows = list(_iter_rows(path, delimiter))
    if not rows:
        raise DataFormatError(f"{path}: file contains no data")
    width = len(rows[0][1])

    if isinstance(label_column, str) and has_header is False:
        raise ParameterError(
            f"label column {label_column!r} given by name requires a header row"
        )
    header = None
    if has_header or (has_header is None and isinstance(label_column, str)):
        header = rows[0][1]
        rows = rows[1:]
    elif has_header is None:
        probe_idx = _resolve_label_index(label_column, None, width, path)
        first_cells = rows[0][1]
        if any(
            not _cell_is_numeric(c, missing_token)
            for i, c in enumerate(first_cells)
            if i != probe_idx
        ):
            header = first_cells
            rows = rows[1:]
    if not rows:
        raise DataFormatError(f"{path}: no data rows after the header")

    label_idx = _resolve_label_index(label_column, header, width, path)
    samples: list[list[float]] = []
    raw_labels: list[str] = []
    for lineno, cells in rows:
        if len(cells) != width:
            raise DataFormatError(
                f"{path} line {lineno}: expected {width} columns, found {len(cells)}"
            )
        row_values = []
        for ci, cell in enumerate(cells):
            if ci == label_idx:
                continue
            if cell == missing_token or cell == "":
                row_values.append(np.nan)
                continue
            try:
                row_values.append(float(cell))
            except ValueError:
                raise DataFormatError(
                    f"{path} line {lineno}: cannot parse {cell!r} in column {ci}"
                ) from None
        samples.append(row_values)
        raw_labels.append(cells[label_idx])

    labels, label_names = _map_labels(raw_labels, path)
    feature_names = None
    if header is not None:
        feature_names = tuple(c for i, c in enumerate(header) if i != label_idx)
    return Dataset(
        name=name or path.stem,
        features=np.array(samples, dtype=np.float64),
        labels=labels,
        label_names=label_names,
        feature_names=feature_names,
    )


def load_features_and_labels(
    data_path,
    labels_path,
    missing_token: str = "?",
    delimiter: str | None = None,
    name: str | None = None,
) -> Dataset:
    """Load a dataset whose labels live in a separate one-token-per-line file."""
    data_path = Path(data_path)
    labels_path = Path(labels_path)
    samples: list[list[float]] = []
    for lineno, cells in _iter_rows(data_path, delimiter):
        row_values = []
        for ci, cell in enumerate(cells):
            if cell == missing_token or cell == "":
                row_values.append(np.nan)
                continue
            try:
                row_values.append(float(cell))
            except ValueError:
                raise DataFormatError(
                    f"{data_path} line {lineno}: cannot parse {cell!r} in column {ci}"
                ) from None
        samples.append(row_values)
    if not samples:
        raise DataFormatError(f"{data_path}: file contains no data")
    widths = {len(r) for r in samples}
    if len(widths) != 1:
        raise DataFormatError(
            f"{data_path}: inconsistent column counts {sorted(widths)}"
        )
    raw_labels = [cells[0] for _, cells in _iter_rows(labels_path, None)]
    if len(raw_labels) != len(samples):
        raise DataFormatError(
            f"{labels_path}: {len(raw_labels)} labels for {len(samples)} rows in {data_path}"
        )
    labels, label_names = _map_labels(raw_labels, labels_path)
    return Dataset(
        name=name or data_path.stem,
        features=np.array(samples, dtype=np.float64),
        labels=labels,
        label_names=label_names,
    )


def impute_missing(dataset: Dataset) -> Dataset:
    """Replace each NaN cell with its feature column's mean over observed values.

    Idempotent; a column with no observed values is an error.
    """
    feats = dataset.features
    mask = np.isnan(feats)
    if not mask.any():
        return dataset
    filled = feats.copy()
    for col in np.flatnonzero(mask.any(axis=0)):
        col_mask = mask[:, col]
        if col_mask.all():
            colname = (
                dataset.feature_names[col]
                if dataset.feature_names is not None
                else str(int(col))
            )
            raise DataFormatError(
                f"feature column {colname} has no observed values to impute from"
            )
        filled[col_mask, col] = feats[~col_mask, col].mean()
    return replace(dataset, features=filled)


def make_folds(dataset: Dataset, k: int, seed: int) -> FoldPlan:
    """Stratified fold assignment, deterministic in (seed, row order).

    Each class's rows are shuffled by the seed and dealt round-robin into
    folds; the dealing pointer continues across classes so overall fold
    sizes differ by at most one while per-fold class proportions track the
    dataset's.
    """
    n = dataset.sample_count
    if k < 2:
        raise ParameterError(f"fold count must be >= 2, got {k}")
    if k > n:
        raise ParameterError(f"fold count {k} exceeds the {n} available samples")
    rng = np.random.default_rng(seed)
    assignments = np.empty(n, dtype=np.int64)
    next_fold = 0
    for label in (0, 1):
        idx = np.flatnonzero(dataset.labels == label)
        for i in rng.permutation(idx):
            assignments[i] = next_fold
            next_fold = (next_fold + 1) % k
    return FoldPlan(fold_count=k, assignments=assignments, seed=seed)
