"""Loading, screening, and transforming defect datasets.

A dataset is a numeric feature matrix plus a binary defect label per row.
Datasets are screened on two criteria before modelling: events-per-variable
(EPV) strictly above 10, and defective rate at most 50%.
"""

import csv
import math
import os
from dataclasses import dataclass, field

import numpy as np

LABEL_ALIASES = {
    "0": 0, "1": 1,
    "false": 0, "true": 1,
    "no": 0, "yes": 1,
}

EPV_THRESHOLD = 10.0
DEFECTIVE_RATE_THRESHOLD = 0.5


@dataclass(frozen=True)
class Dataset:
    """Immutable feature matrix with binary labels.

    features is N x P float64; labels is length-N with values in {0, 1}.
    """

    name: str
    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple
    row_ids: tuple = field(default=())

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=float)
        labs = np.asarray(self.labels, dtype=int)
        if feats.ndim != 2 or feats.shape[0] < 1 or feats.shape[1] < 1:
            raise ValueError("features must be a non-empty 2-D matrix")
        if labs.shape != (feats.shape[0],):
            raise ValueError("labels length must match the number of rows")
        if not np.isfinite(feats).all():
            raise ValueError("features contain non-finite values")
        if not np.isin(labs, (0, 1)).all():
            raise ValueError("labels must be exactly 0 or 1")
        names = tuple(self.feature_names)
        if len(names) != feats.shape[1]:
            raise ValueError("feature_names length must match the number of columns")
        if any(not n for n in names):
            raise ValueError("feature names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")
        rids = tuple(self.row_ids) if self.row_ids else tuple(str(i) for i in range(feats.shape[0]))
        feats.setflags(write=False)
        labs.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "row_ids", rids)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_defective(self) -> int:
        return int(self.labels.sum())

    @property
    def defective_rate(self) -> float:
        return self.n_defective / self.n_rows

    def select_rows(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=int)
        return Dataset(
            name=self.name,
            features=self.features[idx],
            labels=self.labels[idx],
            feature_names=self.feature_names,
            row_ids=tuple(self.row_ids[i] for i in idx),
        )

    def select_columns(self, names) -> "Dataset":
        keep = list(names)
        missing = [n for n in keep if n not in self.feature_names]
        if missing:
            raise ValueError(f"unknown columns: {missing}")
        idx = [self.feature_names.index(n) for n in keep]
        return Dataset(
            name=self.name,
            features=self.features[:, idx],
            labels=self.labels,
            feature_names=tuple(keep),
            row_ids=self.row_ids,
        )


@dataclass(frozen=True)
class InclusionVerdict:
    """Outcome of the EPV / defective-rate screening of one dataset."""

    epv: float
    defective_rate: float
    passes_epv: bool
    passes_rate: bool
    included: bool


def load_dataset(path: str, label_column: str, name: str | None = None) -> Dataset:
    """Load a CSV file with a header row into a Dataset.

    The label column accepts {0, 1, true, false, yes, no} case-insensitively;
    every other column must parse as a real number. Unparseable cells are
    reported with their row and column.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"dataset file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            dupes = sorted({h for h in header if header.count(h) > 1})
            raise ValueError(f"{path}: duplicate column names: {dupes}")
        if label_column not in header:
            raise ValueError(f"{path}: label column {label_column!r} not in header {header}")
        label_idx = header.index(label_column)
        feat_names = [h for i, h in enumerate(header) if i != label_idx]
        if not feat_names:
            raise ValueError(f"{path}: no feature columns besides the label")

        rows, labels = [], []
        for rownum, cells in enumerate(reader, start=2):
            if not cells:
                continue
            if len(cells) != len(header):
                raise ValueError(
                    f"{path}: row {rownum} has {len(cells)} cells, expected {len(header)}"
                )
            raw_label = cells[label_idx].strip().lower()
            if raw_label not in LABEL_ALIASES:
                raise ValueError(
                    f"{path}: row {rownum}, column {label_column!r}: "
                    f"unparseable label {cells[label_idx]!r}"
                )
            labels.append(LABEL_ALIASES[raw_label])
            parsed = []
            for i, cell in enumerate(cells):
                if i == label_idx:
                    continue
                try:
                    value = float(cell)
                except ValueError:
                    value = math.nan
                if not math.isfinite(value):
                    colname = header[i]
                    raise ValueError(
                        f"{path}: row {rownum}, column {colname!r}: "
                        f"unparseable cell {cell!r}"
                    )
                parsed.append(value)
            rows.append(parsed)

    if not rows:
        raise ValueError(f"{path}: no data rows")
    return Dataset(
        name=name or os.path.splitext(os.path.basename(path))[0],
        features=np.array(rows, dtype=float),
        labels=np.array(labels, dtype=int),
        feature_names=tuple(feat_names),
    )


def save_dataset(d: Dataset, path: str, label_column: str = "bug") -> None:
    """Write a Dataset back to CSV at full float precision (round-trips bit-exactly)."""
    if label_column in d.feature_names:
        raise ValueError(f"label column name {label_column!r} collides with a feature")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(d.feature_names) + [label_column])
        for i in range(d.n_rows):
            writer.writerow([repr(float(v)) for v in d.features[i]] + [int(d.labels[i])])


def compute_epv(d: Dataset) -> float:
    """Events per variable: minority-class count over the number of features."""
    n_def = d.n_defective
    return min(n_def, d.n_rows - n_def) / d.n_features


def check_inclusion(d: Dataset) -> InclusionVerdict:
    epv = compute_epv(d)
    rate = d.defective_rate
    passes_epv = epv > EPV_THRESHOLD
    passes_rate = rate <= DEFECTIVE_RATE_THRESHOLD
    return InclusionVerdict(
        epv=epv,
        defective_rate=rate,
        passes_epv=passes_epv,
        passes_rate=passes_rate,
        included=passes_epv and passes_rate,
    )


def log_transform(d: Dataset) -> Dataset:
    """Replace every feature cell x by ln(x+1). Negative cells are rejected."""
    if (d.features < 0).any():
        row, col = np.argwhere(d.features < 0)[0]
        raise ValueError(
            f"negative feature value at row {d.row_ids[row]}, "
            f"column {d.feature_names[col]!r}: {d.features[row, col]}"
        )
    return Dataset(
        name=d.name,
        features=np.log1p(d.features),
        labels=d.labels,
        feature_names=d.feature_names,
        row_ids=d.row_ids,
    )
