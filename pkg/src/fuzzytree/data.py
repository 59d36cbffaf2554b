"""Benchmark data generation, CSV ingestion, normalization, splits, metrics.

Two synthetic benchmarks are built in: a nonlinear first-order plant driven
by a sinusoid (one-step-ahead prediction from the input/output pair) and
the chaotic delay-differential time series with lagged-sample patterns.
Real datasets come in through a strict comma-delimited loader.

Features are min-max normalized to [0, 1] with training-set statistics;
targets are deliberately left in original units so reported errors stay
comparable across tools.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np


class RaggedRowError(ValueError):
    """A CSV row had a different number of cells than the first row."""


class NonNumericValueError(ValueError):
    """A selected CSV cell could not be parsed as a number."""


@dataclass
class MinMaxScaler:
    """Per-feature min/max from a training set, plus target range metadata.

    Targets are never rescaled; their range is recorded for provenance
    only.  Constant features map to 0.5 everywhere; transformed values are
    clamped to [0, 1] so unseen rows outside the training range stay in
    the membership-function domain.
    """
    feature_min: np.ndarray
    feature_max: np.ndarray
    target_min: float
    target_max: float

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        span = self.feature_max - self.feature_min
        constant = span <= 0
        safe_span = np.where(constant, 1.0, span)
        scaled = (X - self.feature_min) / safe_span
        scaled = np.where(constant, 0.5, scaled)
        return np.clip(scaled, 0.0, 1.0)

    def inverse(self, Xn: np.ndarray) -> np.ndarray:
        Xn = np.asarray(Xn, dtype=float)
        span = self.feature_max - self.feature_min
        return self.feature_min + Xn * np.where(span <= 0, 0.0, span)

    def to_dict(self) -> dict:
        return {
            "feature_min": self.feature_min.tolist(),
            "feature_max": self.feature_max.tolist(),
            "target_min": self.target_min,
            "target_max": self.target_max,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "MinMaxScaler":
        return cls(
            np.asarray(doc["feature_min"], dtype=float),
            np.asarray(doc["feature_max"], dtype=float),
            float(doc["target_min"]),
            float(doc["target_max"]),
        )


@dataclass
class Dataset:
    inputs: np.ndarray
    targets: np.ndarray
    feature_names: Tuple[str, ...]
    normalization: Optional[MinMaxScaler] = None

    def __post_init__(self):
        self.inputs = np.atleast_2d(np.asarray(self.inputs, dtype=float))
        self.targets = np.asarray(self.targets, dtype=float).ravel()
        if self.inputs.shape[0] != self.targets.shape[0]:
            raise ValueError(
                f"{self.inputs.shape[0]} input rows vs {self.targets.shape[0]} targets"
            )
        if len(self.feature_names) != self.inputs.shape[1]:
            raise ValueError("one feature name per input column required")

    @property
    def n_samples(self) -> int:
        return self.inputs.shape[0]

    @property
    def n_features(self) -> int:
        return self.inputs.shape[1]

    def take(self, indices) -> "Dataset":
        return replace(
            self,
            inputs=self.inputs[indices].copy(),
            targets=self.targets[indices].copy(),
        )


# ---------------------------------------------------------------------------
# Synthetic benchmarks
# ---------------------------------------------------------------------------

def plant_input(k) -> np.ndarray:
    """Sinusoidal drive with a 100-step period."""
    return np.sin(2.0 * np.pi * np.asarray(k, dtype=float) / 100.0)


def gen_plant(n_train: int = 200, n_test: int = 200) -> Tuple[Dataset, Dataset]:
    """One-step-ahead identification data for the nonlinear plant
    y(k+1) = y(k) / (1 + y(k)^2) + u(k)^3 with y(1) = 0.

    Pattern k has inputs (u(k), y(k)) and target y(k+1); the first
    ``n_train`` patterns form the training set, the next ``n_test`` the
    test set (order preserved, as befits a time series).
    """
    if n_train < 1 or n_test < 1:
        raise ValueError("need at least one training and one test pattern")
    total = n_train + n_test
    y = np.empty(total + 2)
    y[1] = 0.0
    for k in range(1, total + 1):
        y[k + 1] = y[k] / (1.0 + y[k] ** 2) + float(plant_input(k)) ** 3
    ks = np.arange(1, total + 1)
    inputs = np.column_stack([plant_input(ks), y[1 : total + 1]])
    targets = y[2 : total + 2]
    names = ("u(k)", "y(k)")
    train = Dataset(inputs[:n_train], targets[:n_train], names)
    test = Dataset(inputs[n_train:], targets[n_train:], names)
    return train, test


def gen_plant_patterns(n_patterns: int = 400) -> Dataset:
    """The same plant trajectory as :func:`gen_plant`, as one pattern block
    (k = 1..n_patterns) for callers that split separately."""
    if n_patterns < 2:
        raise ValueError("need at least two patterns")
    train, test = gen_plant(n_patterns - 1, 1)
    inputs = np.vstack([train.inputs, test.inputs])
    targets = np.concatenate([train.targets, test.targets])
    return Dataset(inputs, targets, train.feature_names)


def _mg_rhs(x: float, x_delayed: float) -> float:
    return 0.2 * x_delayed / (1.0 + x_delayed**10) - 0.1 * x


def mackey_glass_series(
    tau: float = 30.0,
    x0: float = 1.2,
    k_end: int = 1123,
    step: float = 0.1,
) -> np.ndarray:
    """Chaotic delay-differential series sampled at integer times 0..k_end.

    dx/dk = 0.2 x(k-tau) / (1 + x(k-tau)^10) - 0.1 x(k), integrated with
    fourth-order Runge-Kutta; the delayed state between grid points comes
    from a cubic Hermite interpolant of the stored trajectory.  History is
    constant, x(t) = x0 for t <= 0.
    """
    if tau <= 17:
        raise ValueError(f"tau must exceed 17 for the chaotic regime, got {tau}")
    if k_end < 1:
        raise ValueError("k_end must be >= 1")
    per_unit = int(round(1.0 / step))
    if abs(per_unit * step - 1.0) > 1e-9:
        raise ValueError("step must divide 1 evenly (e.g. 0.1, 0.05)")
    n_steps = k_end * per_unit
    delay_steps = tau / step

    x = np.empty(n_steps + 1)
    d = np.empty(n_steps + 1)
    x[0] = x0
    d[0] = _mg_rhs(x0, x0)

    def delayed(grid_pos: float, upto: int) -> float:
        # Position in grid units; anything at or before t=0 is history.
        if grid_pos <= 1e-9:
            return x0
        j = int(math.floor(grid_pos + 1e-9))
        theta = grid_pos - j
        if theta < 1e-9:
            return float(x[min(j, upto)])
        x0_, x1_ = x[j], x[j + 1]
        d0_, d1_ = d[j], d[j + 1]
        t2 = theta * theta
        t3 = t2 * theta
        return float(
            (2 * t3 - 3 * t2 + 1) * x0_
            + (t3 - 2 * t2 + theta) * d0_ * step
            + (-2 * t3 + 3 * t2) * x1_
            + (t3 - t2) * d1_ * step
        )

    for i in range(n_steps):
        xd0 = delayed(i - delay_steps, i)
        xd_half = delayed(i + 0.5 - delay_steps, i)
        xd1 = delayed(i + 1.0 - delay_steps, i)
        k1 = _mg_rhs(x[i], xd0)
        k2 = _mg_rhs(x[i] + 0.5 * step * k1, xd_half)
        k3 = _mg_rhs(x[i] + 0.5 * step * k2, xd_half)
        k4 = _mg_rhs(x[i] + step * k3, xd1)
        x[i + 1] = x[i] + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        d[i + 1] = _mg_rhs(x[i + 1], xd1)

    return x[:: per_unit].copy()


MACKEY_GLASS_LAGS = (24, 18, 12, 6)


def mackey_glass_patterns(
    series: np.ndarray,
    k_start: int = 124,
    k_end: int = 1123,
    lags: Sequence[int] = MACKEY_GLASS_LAGS,
) -> Dataset:
    """Lagged-sample patterns [x(k-24), x(k-18), x(k-12), x(k-6); x(k)]."""
    series = np.asarray(series, dtype=float)
    if k_start < max(lags):
        raise ValueError(f"k_start must be >= {max(lags)} to cover the lags")
    if k_end >= series.size:
        raise ValueError("series too short for requested k_end")
    ks = np.arange(k_start, k_end + 1)
    inputs = np.column_stack([series[ks - lag] for lag in lags])
    names = tuple(f"x(k-{lag})" for lag in lags)
    return Dataset(inputs, series[ks], names)


def gen_mackey_glass(
    tau: float = 30.0,
    x0: float = 1.2,
    k_start: int = 124,
    k_end: int = 1123,
    noise_std: float = 0.0,
    rng: Optional[np.random.Generator] = None,
) -> Dataset:
    """Series plus pattern formation in one call (optionally noisy)."""
    series = mackey_glass_series(tau=tau, x0=x0, k_end=k_end)
    if noise_std > 0.0:
        if rng is None:
            raise ValueError("noise injection needs an rng")
        series = add_gaussian_noise(series, noise_std, rng)
    return mackey_glass_patterns(series, k_start=k_start, k_end=k_end)


def gas_furnace_patterns(u, y) -> Dataset:
    """One-step CO2 patterns from a furnace input/output series.

    Regressors are y(k-1) and u(k-4), so with 1-based series indices the
    usable patterns run k = 5..N.
    """
    u = np.asarray(u, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if u.size != y.size:
        raise ValueError(f"series length mismatch: {u.size} vs {y.size}")
    if u.size < 5:
        raise ValueError("need at least five series samples for the lags")
    ks = np.arange(4, u.size)
    inputs = np.column_stack([y[ks - 1], u[ks - 4]])
    return Dataset(inputs, y[ks], ("y(k-1)", "u(k-4)"))


def load_gas_furnace(path, u_column: int = 0, y_column: int = 1,
                     header: bool = False) -> Dataset:
    """Read a two-column furnace series file and form the lag patterns."""
    series = load_csv(path, input_columns=[u_column], target_column=y_column,
                      header=header)
    return gas_furnace_patterns(series.inputs[:, 0], series.targets)


def add_gaussian_noise(series, std: float, rng: np.random.Generator):
    """Elementwise zero-mean Gaussian corruption; std = 0 is the identity."""
    if std < 0:
        raise ValueError("std must be >= 0")
    series = np.asarray(series, dtype=float)
    if std == 0.0:
        return series.copy()
    return series + rng.normal(0.0, std, series.shape)


# ---------------------------------------------------------------------------
# CSV ingestion / export
# ---------------------------------------------------------------------------

def load_csv(
    path,
    input_columns: Sequence[int],
    target_column: int,
    header: bool = False,
    feature_names: Optional[Sequence[str]] = None,
) -> Dataset:
    """Comma-delimited numeric ingestion.

    Only the selected columns must parse as numbers, so files may carry
    categorical columns elsewhere.  Rows whose width differs from the
    first row raise :class:`RaggedRowError`; unparsable selected cells
    raise :class:`NonNumericValueError`, both naming the row.
    """
    input_columns = list(input_columns)
    if not input_columns:
        raise ValueError("need at least one input column")
    rows: List[List[str]] = []
    header_row: Optional[List[str]] = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row or all(cell.strip() == "" for cell in row):
                continue
            if header and header_row is None:
                header_row = [cell.strip() for cell in row]
                continue
            rows.append(row)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    width = len(rows[0])
    needed = input_columns + [target_column]
    if any(c < 0 or c >= width for c in needed):
        raise ValueError(f"column selection {needed} outside file width {width}")

    inputs = np.empty((len(rows), len(input_columns)))
    targets = np.empty(len(rows))
    for i, row in enumerate(rows):
        if len(row) != width:
            raise RaggedRowError(
                f"{path}: row {i} has {len(row)} cells, expected {width}"
            )
        try:
            for j, col in enumerate(input_columns):
                inputs[i, j] = float(row[col])
            targets[i] = float(row[target_column])
        except ValueError as exc:
            raise NonNumericValueError(f"{path}: row {i}: {exc}") from None

    if feature_names is not None:
        names = tuple(feature_names)
    elif header_row is not None:
        names = tuple(header_row[c] for c in input_columns)
    else:
        names = tuple(f"x{c + 1}" for c in input_columns)
    return Dataset(inputs, targets, names)


def save_csv(ds: Dataset, path, header: bool = True) -> None:
    """Export a dataset in the same comma-delimited layout the loader reads."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            writer.writerow(list(ds.feature_names) + ["target"])
        for row, t in zip(ds.inputs, ds.targets):
            writer.writerow([repr(float(v)) for v in row] + [repr(float(t))])


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

def fit_scaler(ds: Dataset) -> MinMaxScaler:
    if ds.n_samples == 0:
        raise ValueError("empty dataset")
    return MinMaxScaler(
        feature_min=ds.inputs.min(axis=0),
        feature_max=ds.inputs.max(axis=0),
        target_min=float(ds.targets.min()),
        target_max=float(ds.targets.max()),
    )


def normalize(ds: Dataset) -> Dataset:
    """Min-max scale features into [0, 1] using the dataset's own statistics
    (training-set fit); targets stay in original units."""
    scaler = fit_scaler(ds)
    return replace(ds, inputs=scaler.transform(ds.inputs), normalization=scaler)


def apply_normalization(ds: Dataset, scaler: MinMaxScaler) -> Dataset:
    """Scale with previously fitted statistics; out-of-range values clamp
    to [0, 1] (test rows may exceed the training range)."""
    return replace(ds, inputs=scaler.transform(ds.inputs), normalization=scaler)


# ---------------------------------------------------------------------------
# Splitting
# ---------------------------------------------------------------------------

def split_fixed(ds: Dataset, n_train: int) -> Tuple[Dataset, Dataset]:
    """Order-preserving prefix/suffix split (time series)."""
    if not 1 <= n_train < ds.n_samples:
        raise ValueError(f"n_train must be in [1, {ds.n_samples - 1}], got {n_train}")
    return ds.take(np.arange(n_train)), ds.take(np.arange(n_train, ds.n_samples))


def split_holdout(
    ds: Dataset, fraction: float, rng: np.random.Generator
) -> Tuple[Dataset, Dataset]:
    """Random train/test split with ``fraction`` of rows for training."""
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must be in (0, 1)")
    n_train = int(round(fraction * ds.n_samples))
    if n_train < 1 or n_train >= ds.n_samples:
        raise ValueError(f"holdout({fraction}) infeasible for N={ds.n_samples}")
    perm = rng.permutation(ds.n_samples)
    return ds.take(np.sort(perm[:n_train])), ds.take(np.sort(perm[n_train:]))


def split_kfold(
    ds: Dataset, k: int, rng: np.random.Generator
) -> List[Tuple[Dataset, Dataset]]:
    """Seeded k-fold partition; folds differ in size by at most one row and
    cover every row exactly once."""
    if not 2 <= k <= ds.n_samples:
        raise ValueError(f"kfold({k}) infeasible for N={ds.n_samples}")
    perm = rng.permutation(ds.n_samples)
    folds = np.array_split(perm, k)
    out = []
    for i in range(k):
        test_idx = np.sort(folds[i])
        train_idx = np.sort(np.concatenate([folds[j] for j in range(k) if j != i]))
        out.append((ds.take(train_idx), ds.take(test_idx)))
    return out


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

def rmse(desired, predicted) -> float:
    d = np.asarray(desired, dtype=float).ravel()
    y = np.asarray(predicted, dtype=float).ravel()
    if d.size == 0:
        raise ValueError("empty vectors")
    if d.size != y.size:
        raise ValueError(f"length mismatch: {d.size} vs {y.size}")
    return float(np.sqrt(np.mean((d - y) ** 2)))


def correlation(desired, predicted) -> float:
    """Pearson correlation; undefined (raises) for constant vectors."""
    d = np.asarray(desired, dtype=float).ravel()
    y = np.asarray(predicted, dtype=float).ravel()
    if d.size != y.size:
        raise ValueError(f"length mismatch: {d.size} vs {y.size}")
    if d.size < 2:
        raise ValueError("need at least two points")
    dc = d - d.mean()
    yc = y - y.mean()
    den = np.sqrt((dc**2).sum() * (yc**2).sum())
    if den == 0.0:
        raise ValueError("correlation undefined for constant vectors")
    return float(np.clip((dc * yc).sum() / den, -1.0, 1.0))
