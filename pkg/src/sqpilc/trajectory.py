"""Sampled trajectories and discrete derivative operators.

A trajectory is a sequence of N samples in R^d taken at a fixed rate
1/dt.  The flattened form is time-major: sample i occupies entries
[i*d, (i+1)*d), so banded operators on the time axis stay block-banded
after flattening.

The discrete derivative of order n is the n-fold first difference
scaled by dt:

    (d^1 x)(i) = (x(i+1) - x(i)) / dt,        i = 0 .. N-2
    (d^n x)(i) = (d^1 (d^(n-1) x))(i),        length N - n

Each application shortens the trajectory by one sample.  The matrix
form of the operator (needed to pose derivative bounds as linear
constraint rows) is built by composing first-difference matrices, so it
reproduces the recursion exactly up to floating-point rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Significant digits used when writing trajectory files.  17 digits
# round-trip IEEE doubles exactly, so save -> load -> save is stable.
_FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class Trajectory:
    """A length-N sequence of d-dimensional samples at fixed rate.

    Attributes:
        samples: (N, d) float array, meters per component.
        dt: sample interval in seconds, > 0.
    """

    samples: np.ndarray
    dt: float

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 2:
            raise ValueError(f"samples must be 2-D (N, d), got shape {samples.shape}")
        n, d = samples.shape
        if n < 2:
            raise ValueError(f"trajectory needs at least 2 samples, got {n}")
        if d < 1:
            raise ValueError("trajectory needs at least one axis")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not np.isfinite(samples).all():
            raise ValueError("trajectory samples must be finite")
        samples = samples.copy()
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "dt", float(self.dt))

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def n_axes(self) -> int:
        return self.samples.shape[1]

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) * self.dt

    def flatten(self) -> np.ndarray:
        """Time-major flattening: sample i contiguous at [i*d, (i+1)*d)."""
        return self.samples.reshape(-1).copy()

    @classmethod
    def from_flat(cls, vec: np.ndarray, n_axes: int, dt: float) -> "Trajectory":
        vec = np.asarray(vec, dtype=float)
        if vec.ndim != 1 or vec.size % n_axes != 0:
            raise ValueError(f"flat vector of size {vec.size} does not hold {n_axes}-axis samples")
        return cls(vec.reshape(-1, n_axes), dt)

    def with_samples(self, samples: np.ndarray) -> "Trajectory":
        return Trajectory(samples, self.dt)


@dataclass(frozen=True)
class DerivativeOperator:
    """Matrix form of the order-n discrete derivative.

    matrix maps flatten(x) of an (N, d) trajectory to
    flatten(discrete_derivative(x, order)), shape ((N-n)*d, N*d).
    """

    order: int
    dt: float
    matrix: np.ndarray

    def apply(self, x: Trajectory) -> np.ndarray:
        return self.matrix @ x.flatten()


def discrete_derivative(x: Trajectory, n: int) -> Trajectory:
    """n-fold first difference of x, scaled by dt each fold.

    The result has N - n samples.  Requires N - n >= 2 so the result is
    itself a valid trajectory.
    """
    if n < 1:
        raise ValueError(f"derivative order must be >= 1, got {n}")
    if x.n_samples - n < 2:
        raise ValueError(
            f"order-{n} derivative of a {x.n_samples}-sample trajectory "
            "leaves fewer than 2 samples"
        )
    out = x.samples
    for _ in range(n):
        out = np.diff(out, axis=0) / x.dt
    return Trajectory(out, x.dt)


def _first_difference_matrix(n_samples: int, dt: float) -> np.ndarray:
    rows = n_samples - 1
    mat = np.zeros((rows, n_samples))
    idx = np.arange(rows)
    mat[idx, idx] = -1.0 / dt
    mat[idx, idx + 1] = 1.0 / dt
    return mat


def derivative_matrix(n: int, n_samples: int, n_axes: int, dt: float) -> DerivativeOperator:
    """Matrix M with M @ flatten(x) = flatten(discrete_derivative(x, n)).

    Built by composing first-difference matrices; rows carry the
    binomial coefficient pattern scaled by dt^(-n).
    """
    if n < 1:
        raise ValueError(f"derivative order must be >= 1, got {n}")
    if n_samples <= n:
        raise ValueError(f"need more than {n} samples for an order-{n} derivative")
    if n_axes < 1:
        raise ValueError("n_axes must be >= 1")
    if not dt > 0:
        raise ValueError("dt must be positive")
    scalar = _first_difference_matrix(n_samples, dt)
    for k in range(1, n):
        scalar = _first_difference_matrix(n_samples - k, dt) @ scalar
    matrix = scalar if n_axes == 1 else np.kron(scalar, np.eye(n_axes))
    return DerivativeOperator(order=n, dt=dt, matrix=matrix)


def rms_error(p: Trajectory, target: Trajectory) -> float:
    """Root-mean-square of the per-sample Euclidean distance ||p(i) - target(i)||."""
    if p.samples.shape != target.samples.shape:
        raise ValueError(
            f"shape mismatch: {p.samples.shape} vs {target.samples.shape}"
        )
    dist_sq = np.sum((p.samples - target.samples) ** 2, axis=1)
    return math.sqrt(float(np.mean(dist_sq)))


def save_trajectory(t: Trajectory, path, comments: dict | None = None) -> None:
    """Write a trajectory as CSV: header ``t,x0,...,x{d-1}``, one row per sample.

    Optional ``comments`` are emitted as leading ``# key=value`` lines
    (used by the experiment harness to embed the run-config hash).
    """
    d = t.n_axes
    lines = []
    if comments:
        for key, value in comments.items():
            lines.append(f"# {key}={value}")
    lines.append("t," + ",".join(f"x{a}" for a in range(d)))
    for i in range(t.n_samples):
        fields = [_FLOAT_FMT % (i * t.dt)]
        fields.extend(_FLOAT_FMT % v for v in t.samples[i])
        lines.append(",".join(fields))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv_comments(path) -> dict:
    """Return the ``# key=value`` comment lines at the top of a CSV file."""
    meta: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line.startswith("#"):
                break
            body = line.lstrip("#").strip()
            if "=" in body:
                key, value = body.split("=", 1)
                meta[key.strip()] = value.strip()
    return meta


def load_trajectory(path) -> Trajectory:
    """Read a trajectory CSV written by :func:`save_trajectory`.

    Enforces the file contract: a ``t,x0,...`` header, consistent column
    counts, finite values, and a strictly increasing uniformly spaced
    time column (tolerance 1e-9 * dt).  Leading ``#`` comment lines are
    skipped.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw = [line.strip() for line in fh]
    rows = [line for line in raw if line and not line.startswith("#")]
    if not rows:
        raise ValueError(f"{path}: empty trajectory file")
    header = rows[0].split(",")
    if header[0].strip() != "t" or len(header) < 2:
        raise ValueError(f"{path}: expected header 't,x0,...', got {rows[0]!r}")
    d = len(header) - 1
    data = []
    for lineno, line in enumerate(rows[1:], start=2):
        fields = line.split(",")
        if len(fields) != d + 1:
            raise ValueError(f"{path}:{lineno}: expected {d + 1} columns, got {len(fields)}")
        try:
            values = [float(f) for f in fields]
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: malformed number: {exc}") from None
        data.append(values)
    if len(data) < 2:
        raise ValueError(f"{path}: need at least 2 samples")
    arr = np.array(data)
    if not np.isfinite(arr).all():
        raise ValueError(f"{path}: non-finite values")
    times = arr[:, 0]
    steps = np.diff(times)
    if np.any(steps <= 0):
        raise ValueError(f"{path}: time column must be strictly increasing")
    dt = float(steps[0])
    if np.max(np.abs(steps - dt)) > 1e-9 * dt:
        raise ValueError(f"{path}: time column is not uniformly spaced")
    return Trajectory(arr[:, 1:], dt)
