"""Seeded generation of discrete-time stochastic sequences.

A :class:`TrajectoryBatch` is the universal carrier used by every check in
the package: ``M`` independent sample paths of length ``N + 1``, stored as
an ``M x (N+1)`` matrix with column ``k`` holding time index ``k``.

Available generators:

``random_walk``
    Partial sums of i.i.d. mean-zero increments (symmetric +-1 or standard
    normal).  A martingale, hence also a demimartingale.

``associated_partial_sum``
    Partial sums of common-shock increments ``U_i + theta * V`` with
    ``U_i`` i.i.d. centered uniforms on [-1, 1] and ``V`` one centered
    uniform shock shared inside each path.  Nondecreasing functions of
    independent variables are associated, so the increments form a
    mean-zero associated family with dependence tuned by ``theta``.

``bounded_associated_partial_sum``
    Same construction with increments clipped to ``[-c, c]``.  Clipping is
    nondecreasing, so association survives, and symmetry keeps the
    increments mean zero.

``two_point_demisub``
    The two-atom sequence with rows ``(0, -1, -2)`` (probability ``p``) and
    ``(0, 1, 2)`` (probability ``1 - p``).  For ``p <= 1/2`` it satisfies
    the demisubmartingale inequality while failing the submartingale
    property.  Requests longer than two steps freeze the final value, which
    keeps both the two-atom law and the defining inequality intact.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BatchTooLarge, InvalidSpec, NonPositiveThreshold
from .rng import normal_matrix, uniform_matrix

#: Refuse to allocate batches beyond this many matrix entries (~1 GiB).
MAX_BATCH_ENTRIES = 1 << 27

_KINDS = (
    "random_walk",
    "associated_partial_sum",
    "bounded_associated_partial_sum",
    "two_point_demisub",
)


@dataclass(frozen=True, eq=False)
class TrajectoryBatch:
    """M independent discrete-time sample paths of length N + 1.

    Attributes:
        values: float matrix of shape (n_paths, n_steps + 1); row ``r``,
            column ``k`` is path ``r`` at time index ``k``.
        label: generator descriptor for reports.
        starts_at_zero: when True, column 0 is asserted to be identically 0.
    """

    values: np.ndarray
    label: str = ""
    starts_at_zero: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise InvalidSpec(f"batch values must be a 2-D M x (N+1) matrix, got shape {values.shape}")
        if not np.isfinite(values).all():
            raise InvalidSpec("batch contains non-finite entries")
        if self.starts_at_zero and np.any(values[:, 0] != 0.0):
            raise InvalidSpec("batch flagged starts_at_zero has a nonzero first column")
        object.__setattr__(self, "values", values)

    @property
    def n_paths(self) -> int:
        return self.values.shape[0]

    @property
    def n_steps(self) -> int:
        return self.values.shape[1] - 1

    def column(self, k) -> np.ndarray:
        return self.values[:, k]

    def increments(self) -> "TrajectoryBatch":
        """Batch of one-step differences (n_steps columns)."""
        return TrajectoryBatch(
            np.diff(self.values, axis=1), label=f"{self.label}-increments", starts_at_zero=False
        )

    def to_csv(self, path) -> None:
        """Dump as long-format CSV with header ``path,k,value``."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("path,k,value\n")
            for r in range(self.n_paths):
                row = self.values[r]
                for k in range(row.shape[0]):
                    fh.write(f"{r},{k},{float(row[k])!r}\n")


@dataclass(frozen=True)
class GeneratorSpec:
    """Descriptor of one path generator; use the factory classmethods."""

    kind: str
    increment: str = "pm1"  # random_walk only: "pm1" or "gauss"
    theta: float = 0.0
    prob: float = 0.5
    bound: float = 1.0
    starts_at_zero: bool = field(default=True, init=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidSpec(f"unknown generator kind {self.kind!r}")
        if self.kind == "random_walk" and self.increment not in ("pm1", "gauss"):
            raise InvalidSpec(f"random_walk increment must be 'pm1' or 'gauss', got {self.increment!r}")
        if self.kind in ("associated_partial_sum", "bounded_associated_partial_sum"):
            if not self.theta >= 0.0:
                raise InvalidSpec(f"common-shock weight theta must be >= 0, got {self.theta}")
        if self.kind == "bounded_associated_partial_sum" and not self.bound > 0.0:
            raise InvalidSpec(f"increment bound must be > 0, got {self.bound}")
        if self.kind == "two_point_demisub" and not 0.0 <= self.prob <= 1.0:
            raise InvalidSpec(f"two-point probability must lie in [0, 1], got {self.prob}")

    @classmethod
    def random_walk(cls, increment="pm1") -> "GeneratorSpec":
        return cls(kind="random_walk", increment=increment)

    @classmethod
    def associated(cls, theta) -> "GeneratorSpec":
        return cls(kind="associated_partial_sum", theta=float(theta))

    @classmethod
    def bounded_associated(cls, theta, bound) -> "GeneratorSpec":
        return cls(kind="bounded_associated_partial_sum", theta=float(theta), bound=float(bound))

    @classmethod
    def two_point(cls, prob) -> "GeneratorSpec":
        return cls(kind="two_point_demisub", prob=float(prob))

    @property
    def label(self) -> str:
        if self.kind == "random_walk":
            return f"random_walk[{self.increment}]"
        if self.kind == "associated_partial_sum":
            return f"associated_partial_sum[theta={self.theta:g}]"
        if self.kind == "bounded_associated_partial_sum":
            return f"bounded_associated_partial_sum[theta={self.theta:g},c={self.bound:g}]"
        return f"two_point_demisub[p={self.prob:g}]"


def _centered_uniform(u):
    return 2.0 * u - 1.0


def _associated_increments(theta, n_steps, n_paths, seed):
    # draw 0 per path is the shared shock V, draws 1..n are the U_i
    u = uniform_matrix(seed, n_paths, n_steps + 1)
    shock = _centered_uniform(u[:, :1])
    base = _centered_uniform(u[:, 1:])
    return base + theta * shock


def associated_increment_matrix(theta, n_steps, n_paths, seed, bound=None):
    """Mean-zero associated increments, shape ``(n_paths, n_steps)``.

    Exposed separately because several harnesses need the increments
    themselves (the associated collection) rather than their partial sums.
    """
    if theta < 0:
        raise InvalidSpec(f"theta must be >= 0, got {theta}")
    inc = _associated_increments(theta, n_steps, n_paths, seed)
    if bound is not None:
        if not bound > 0:
            raise InvalidSpec(f"increment bound must be > 0, got {bound}")
        inc = np.clip(inc, -bound, bound)
    return inc


def generate_paths(spec: GeneratorSpec, n_steps, n_paths, seed) -> TrajectoryBatch:
    """Generate ``n_paths`` seeded sample paths of ``n_steps`` steps.

    Generation is per-path deterministic: path ``r`` depends only on
    ``(seed, r)``, never on ``n_paths`` or on generation order.

    Raises:
        InvalidSpec: parameter outside its admissible range.
        BatchTooLarge: ``n_paths * (n_steps + 1)`` above the memory budget.
    """
    n_steps = int(n_steps)
    n_paths = int(n_paths)
    if n_paths < 1:
        raise InvalidSpec(f"n_paths must be >= 1, got {n_paths}")
    if n_steps < 0:
        raise InvalidSpec(f"n_steps must be >= 0, got {n_steps}")
    if n_paths * (n_steps + 1) > MAX_BATCH_ENTRIES:
        raise BatchTooLarge(
            f"{n_paths} x {n_steps + 1} entries exceed the budget of {MAX_BATCH_ENTRIES}"
        )
    label = f"{spec.label}@seed={int(seed)}"
    if n_steps == 0:
        return TrajectoryBatch(np.zeros((n_paths, 1)), label=label, starts_at_zero=True)

    if spec.kind == "random_walk":
        if spec.increment == "pm1":
            inc = np.where(uniform_matrix(seed, n_paths, n_steps) < 0.5, -1.0, 1.0)
        else:
            inc = normal_matrix(seed, n_paths, n_steps)
    elif spec.kind == "associated_partial_sum":
        inc = _associated_increments(spec.theta, n_steps, n_paths, seed)
    elif spec.kind == "bounded_associated_partial_sum":
        inc = np.clip(
            _associated_increments(spec.theta, n_steps, n_paths, seed), -spec.bound, spec.bound
        )
    else:  # two_point_demisub
        neg = uniform_matrix(seed, n_paths, 1)[:, 0] < spec.prob
        # atom paths (-1, -2) and (1, 2); beyond two steps the value freezes
        template = np.empty(n_steps)
        template[0] = 1.0
        template[1:] = 2.0
        inc = np.where(neg[:, None], -template, template)
        values = np.hstack([np.zeros((n_paths, 1)), inc])
        return TrajectoryBatch(values, label=label, starts_at_zero=True)

    values = np.hstack([np.zeros((n_paths, 1)), np.cumsum(inc, axis=1)])
    return TrajectoryBatch(values, label=label, starts_at_zero=True)


def stopped_sequence(path, threshold) -> np.ndarray:
    """Freeze a path at the last index where it sits at or above ``threshold``.

    With ``tau = max{k <= N : path[k] >= threshold}`` (and ``tau = N`` when
    the threshold is never reached, which leaves the path unchanged), the
    result is ``path[min(j, tau)]``.  The running maximum can only shrink,
    and whenever the input crosses the threshold the maximum is preserved.

    Raises:
        NonPositiveThreshold: ``threshold <= 0``.
    """
    x = float(threshold)
    if not x > 0.0:
        raise NonPositiveThreshold(f"threshold must be > 0, got {threshold}")
    path = np.asarray(path, dtype=np.float64)
    if path.ndim != 1:
        raise InvalidSpec(f"path must be 1-D, got shape {path.shape}")
    if not np.isfinite(path).all():
        raise InvalidSpec("path contains non-finite entries")
    hits = np.nonzero(path >= x)[0]
    tau = int(hits[-1]) if hits.size else path.shape[0] - 1
    out = path.copy()
    out[tau:] = path[tau]
    return out


def stopped_batch(batch: TrajectoryBatch, threshold) -> TrajectoryBatch:
    """Apply :func:`stopped_sequence` to every path of a batch."""
    x = float(threshold)
    if not x > 0.0:
        raise NonPositiveThreshold(f"threshold must be > 0, got {threshold}")
    values = batch.values
    n = batch.n_steps
    mask = values >= x
    has_hit = mask.any(axis=1)
    # last hitting index per path; paths that never hit keep tau = N
    tau = np.where(has_hit, n - np.argmax(mask[:, ::-1], axis=1), n)
    take = np.minimum(np.arange(n + 1)[None, :], tau[:, None])
    stopped = np.take_along_axis(values, take, axis=1)
    return TrajectoryBatch(
        stopped, label=f"{batch.label}-stopped[x={x:g}]", starts_at_zero=batch.starts_at_zero
    )
