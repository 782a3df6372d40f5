"""Finite metric data: validation, CSV I/O, point clouds, perturbation."""
from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .errors import (
    AsymmetryBeyondTolerance,
    DimensionMismatch,
    NegativeEntry,
    NonSquare,
    NonzeroDiagonal,
    SizeMismatch,
    ValidationError,
)

SYMMETRY_TOL = 1e-12
METRICS = {"euclidean": "euclidean", "manhattan": "cityblock", "chebyshev": "chebyshev"}


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Validated square dissimilarity matrix.

    ``entries`` is a read-only float array.  Use :func:`load_distance_matrix`
    to build one from untrusted data.
    """

    entries: np.ndarray
    labels: tuple[str, ...] | None = None
    triangle_violations: tuple[tuple[int, int, int], ...] = field(default=())

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.entries, other.entries)

    def permuted(self, perm: Sequence[int]) -> "DistanceMatrix":
        """Relabel points: point ``i`` of the result is point ``perm[i]`` of ``self``."""
        perm = np.asarray(perm, dtype=int)
        labels = None if self.labels is None else tuple(self.labels[i] for i in perm)
        return DistanceMatrix(self.entries[np.ix_(perm, perm)], labels)


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray
    metric_name: str = "euclidean"

    def __post_init__(self):
        if self.metric_name not in METRICS:
            raise ValidationError(f"unknown metric {self.metric_name!r}")


@dataclass(frozen=True)
class PerturbationSpec:
    epsilon: float
    seed: int = 0

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise ValidationError(f"epsilon must be >= 0, got {self.epsilon!r}")


def _triangle_violations(a: np.ndarray, limit: int = 100) -> list[tuple[int, int, int]]:
    """Triples (i, j, k) with d(i,k) > d(i,j) + d(j,k), at most ``limit`` of them."""
    found: list[tuple[int, int, int]] = []
    n = a.shape[0]
    for j in range(n):
        slack = a[:, j][:, None] + a[j, :][None, :] - a
        bad = np.argwhere(slack < -1e-9 * max(1.0, float(a.max(initial=0.0))))
        for i, k in bad:
            found.append((int(i), j, int(k)))
            if len(found) >= limit:
                return found
    return found


def load_distance_matrix(table, labels: Sequence[str] | None = None) -> DistanceMatrix:
    """Validate a square table of dissimilarities.

    Asymmetry up to ``SYMMETRY_TOL`` is removed by averaging.  Triangle
    inequality violations are recorded and reported with a warning.
    """
    try:
        a = np.array(table, dtype=float)
    except ValueError as exc:
        raise NonSquare(f"table is not rectangular: {exc}") from None
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"expected a square table, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("table contains non-finite entries")
    diag = np.diag(a)
    if np.any(diag != 0):
        i = int(np.flatnonzero(diag)[0])
        raise NonzeroDiagonal(f"entry ({i},{i}) = {diag[i]!r}")
    if np.any(a < 0):
        i, j = np.argwhere(a < 0)[0]
        raise NegativeEntry(f"entry ({i},{j}) = {a[i, j]!r}")
    asym = np.abs(a - a.T)
    if np.any(asym > SYMMETRY_TOL):
        i, j = np.argwhere(asym > SYMMETRY_TOL)[0]
        raise AsymmetryBeyondTolerance(f"entries ({i},{j}) and ({j},{i}) differ by {asym[i, j]:.3g}")
    if np.any(asym > 0):
        a = (a + a.T) / 2
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != a.shape[0]:
            raise SizeMismatch("label count does not match matrix size")
    viol = _triangle_violations(a)
    if viol:
        warnings.warn(f"{len(viol)}{'+' if len(viol) >= 100 else ''} triangle inequality violations", stacklevel=2)
    return DistanceMatrix(a, labels, tuple(viol))


def distances_from_points(cloud: PointCloud) -> DistanceMatrix:
    pts = cloud.points
    if isinstance(pts, np.ndarray) and pts.ndim == 2:
        x = pts.astype(float)
    else:
        lengths = {len(p) for p in pts}
        if len(lengths) > 1:
            raise DimensionMismatch(f"points have differing dimensions {sorted(lengths)}")
        x = np.array(pts, dtype=float)
        if x.ndim == 1:
            x = x.reshape(len(x), -1)
    if x.shape[0] == 0:
        raise ValidationError("empty point cloud")
    if x.shape[1] < 1:
        raise DimensionMismatch("points must have at least one coordinate")
    d = cdist(x, x, metric=METRICS[cloud.metric_name])
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(d)


def perturb(D: DistanceMatrix, spec: PerturbationSpec) -> DistanceMatrix:
    """Add symmetric uniform noise on [-eps, eps] to every off-diagonal pair.

    Entries that would go negative are clipped to 0.  The result satisfies
    ``sup_deviation(D, result) <= eps`` in floating point, not only in exact
    arithmetic.
    """
    eps = float(spec.epsilon)
    base = D.entries
    if eps == 0:
        return DistanceMatrix(base.copy(), D.labels)
    n = D.n
    rng = np.random.default_rng(spec.seed)
    noise = rng.uniform(-eps, eps, size=(n, n))
    noise = np.triu(noise, 1)
    noise = noise + noise.T
    out = base + noise
    for _ in range(8):
        over = np.abs(out - base) > eps
        if not over.any():
            break
        out[over] = np.nextafter(out[over], base[over])
    out = np.maximum(out, 0.0)
    np.fill_diagonal(out, 0.0)
    return DistanceMatrix(out, D.labels)


def sup_deviation(D: DistanceMatrix, D2: DistanceMatrix) -> float:
    if D.n != D2.n:
        raise SizeMismatch(f"matrices of size {D.n} and {D2.n}")
    if D.n == 0:
        return 0.0
    return float(np.max(np.abs(D.entries - D2.entries)))


# --- CSV -------------------------------------------------------------------

def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def _rows(text: str) -> list[list[str]]:
    return [[c.strip() for c in row] for row in csv.reader(io.StringIO(text)) if any(c.strip() for c in row)]


def read_distance_csv(text: str) -> DistanceMatrix:
    """Parse a distance CSV with optional label header row and/or column."""
    rows = _rows(text)
    if not rows:
        raise NonSquare("empty distance table")
    header = None
    first = rows[0]
    if first[0] == "" or not all(_is_number(c) for c in first[1:]):
        header = first
        rows = rows[1:]
    row_labels = None
    if rows and not all(_is_number(r[0]) for r in rows):
        row_labels = [r[0] for r in rows]
        rows = [r[1:] for r in rows]
    for r in rows:
        for c in r:
            if not _is_number(c):
                raise ValidationError(f"non-numeric entry {c!r}")
    if len({len(r) for r in rows}) > 1:
        raise NonSquare("ragged distance table")
    labels = row_labels
    if header is not None:
        cols = header[1:] if len(header) == len(rows) + 1 else header
        labels = labels or cols
    table = [[float(c) for c in r] for r in rows]
    return load_distance_matrix(table, labels)


def write_distance_csv(D: DistanceMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if D.labels is not None:
        w.writerow([""] + list(D.labels))
    for i in range(D.n):
        vals = [repr(float(v)) for v in D.entries[i]]
        w.writerow(([D.labels[i]] if D.labels is not None else []) + vals)
    return buf.getvalue()


def read_points_csv(text: str, metric_name: str = "euclidean") -> PointCloud:
    rows = _rows(text)
    if rows and not all(_is_number(c) for c in rows[0]):
        rows = rows[1:]
    if not rows:
        raise ValidationError("empty point table")
    lengths = {len(r) for r in rows}
    if len(lengths) > 1:
        raise DimensionMismatch(f"rows have differing lengths {sorted(lengths)}")
    for r in rows:
        for c in r:
            if not _is_number(c):
                raise ValidationError(f"non-numeric coordinate {c!r}")
    return PointCloud(np.array([[float(c) for c in r] for r in rows]), metric_name)
