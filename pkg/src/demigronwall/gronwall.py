"""Discrete stochastic Gronwall machinery and its Monte Carlo verification.

Implements, for sequences satisfying the pathwise recursion

    X_n <= F_n + S_n + sum_{k<n} G_k X_k        (S a demimartingale, S_0 = 0)

* the maximal-moment inequality
  ``E[(sup_k S_k)^p] <= (E[-inf_k S_k])^p / (1 - p)``,
* the closed-form Gronwall bound on ``E[sup_k X_k^p]`` with its Holder
  prefactor, product norm of the growth weights, and sup-moment of F,
* the discount weights ``C_k = prod_{j<=k} (1 + G_j)^{-1}`` and the
  discounted increment transform ``L_n = sum_{k<n} C_k (S_{k+1} - S_k)``
  (a demimartingale again, computed in two algebraic forms and cross
  checked), and
* harnesses that estimate both sides by Monte Carlo and compare them with
  one-sided ``3 * SE`` slack.

Verification instances are built in reverse: given X, S and G, setting
``F_n = (X_n - S_n - sum_{k<n} G_k X_k)^+`` makes the recursion hold
pathwise by construction, so no rejection sampling is needed.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (
    FormMismatch,
    HolderViolation,
    HypothesisViolated,
    NegativeBase,
    NegativeInput,
    NegativeWeights,
    NonzeroStart,
    POutOfRange,
    ShapeMismatch,
)
from .generators import TrajectoryBatch
from .reporting import VerificationReport

GRONWALL_COLUMNS = ["n", "p", "mu", "nu", "lhs", "lhs_se", "rhs", "margin", "verdict"]

#: pathwise slack when re-checking the recursion hypothesis
HYPOTHESIS_TOL = 1e-12

#: two algebraic forms of the discounted transform must agree this tightly
FORM_RTOL = 1e-12


# --------------------------------------------------------------------------
# core types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HolderPair:
    """Conjugate exponents (mu, nu) with 1/mu + 1/nu = 1 and p * nu < 1."""

    mu: float
    nu: float
    p: float

    def __post_init__(self):
        mu, nu, p = float(self.mu), float(self.nu), float(self.p)
        if not (mu >= 1.0 and nu >= 1.0):
            raise HolderViolation(f"exponents must lie in [1, inf], got mu={mu}, nu={nu}")
        inv = (0.0 if math.isinf(mu) else 1.0 / mu) + (0.0 if math.isinf(nu) else 1.0 / nu)
        if abs(inv - 1.0) > 1e-12:
            raise HolderViolation(f"1/mu + 1/nu = {inv} != 1 for mu={mu}, nu={nu}")
        if not 0.0 < p < 1.0:
            raise POutOfRange(f"p must lie in (0, 1), got {p}")
        # reject p*nu within 1e-9 of 1: the prefactor explodes there
        if math.isinf(nu) or p * nu >= 1.0 - 1e-9:
            raise HolderViolation(f"need p * nu < 1, got p={p}, nu={nu}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "p", p)

    @classmethod
    def deterministic(cls, p) -> "HolderPair":
        """The (mu, nu) = (inf, 1) pair used for deterministic weights."""
        return cls(math.inf, 1.0, p)

    @property
    def prefactor(self) -> float:
        return (1.0 + 1.0 / (1.0 - self.nu * self.p)) ** (1.0 / self.nu)


@dataclass(frozen=True)
class MomentEstimate:
    """Monte Carlo estimate of a p-th moment at time index n."""

    value: float
    stderr: float
    p: float
    n: int


@dataclass(frozen=True)
class GronwallInstance:
    """Aligned (X, F, G, S) data satisfying the recursion by construction."""

    X: TrajectoryBatch
    F: TrajectoryBatch
    G: Union[np.ndarray, TrajectoryBatch]
    S: TrajectoryBatch

    def growth_values(self) -> np.ndarray:
        """Growth weights as an array broadcastable against the paths."""
        if isinstance(self.G, TrajectoryBatch):
            return self.G.values
        return np.asarray(self.G, dtype=np.float64)[None, :]

    def weighted_history(self) -> np.ndarray:
        """``H_n = sum_{k<n} G_k X_k`` per path, shape (M, N+1)."""
        x = self.X.values
        g = self.growth_values()
        n = x.shape[1] - 1
        prods = np.broadcast_to(g[:, :n], (x.shape[0], n)) * x[:, :n]
        return np.hstack([np.zeros((x.shape[0], 1)), np.cumsum(prods, axis=1)])

    def hypothesis_gap(self) -> np.ndarray:
        """Pathwise slack ``F + S + H - X``; nonnegative when the recursion holds."""
        return self.F.values + self.S.values + self.weighted_history() - self.X.values


# --------------------------------------------------------------------------
# moment estimators and closed forms
# --------------------------------------------------------------------------

def sup_moment(batch: TrajectoryBatch, p, n=None, first=0) -> MomentEstimate:
    """Estimate ``E[(max_{first<=k<=n} path_k)^p]`` with its standard error.

    Fractional powers of a negative running maximum are rejected; for
    batches starting at zero the maximum is automatically nonnegative.
    """
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise POutOfRange(f"p must lie in (0, 1], got {p}")
    n = batch.n_steps if n is None else int(n)
    if not first <= n <= batch.n_steps:
        raise ShapeMismatch(f"need {first} <= n <= {batch.n_steps}, got n={n}")
    sups = batch.values[:, first : n + 1].max(axis=1)
    if p != 1.0 and np.any(sups < 0.0):
        raise NegativeBase(f"running maximum is negative on some path; p={p} power undefined")
    powered = sups ** p
    m = powered.shape[0]
    se = float(powered.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    return MomentEstimate(float(powered.mean()), se, p, n)


def neg_inf_mean(batch: TrajectoryBatch, n=None) -> MomentEstimate:
    """Estimate ``E[-min_{0<=k<=n} path_k]`` (requires column 0 to be zero)."""
    if np.any(batch.values[:, 0] != 0.0):
        raise NonzeroStart("negative-infimum mean requires paths starting at 0")
    n = batch.n_steps if n is None else int(n)
    if not 0 <= n <= batch.n_steps:
        raise ShapeMismatch(f"need 0 <= n <= {batch.n_steps}, got n={n}")
    vals = -batch.values[:, : n + 1].min(axis=1)
    m = vals.shape[0]
    se = float(vals.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    return MomentEstimate(float(vals.mean()), se, 1.0, n)


def maximal_moment_bound(q, p) -> float:
    """Closed form ``q^p / (1 - p)`` bounding the sup moment by the neg-inf mean."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise POutOfRange(f"p must lie in (0, 1), got {p}")
    q = float(q)
    if q < 0.0:
        raise NegativeInput(f"q must be >= 0, got {q}")
    return q ** p / (1.0 - p)


def discount_weights(growth) -> np.ndarray:
    """``C_k = prod_{j<=k} (1 + G_j)^{-1}``; positive and nonincreasing."""
    g = np.asarray(growth, dtype=np.float64)
    if np.any(g < 0.0):
        raise NegativeWeights("growth weights must be entrywise nonnegative")
    return np.cumprod(1.0 / (1.0 + g))


def discounted_transform(path, growth) -> np.ndarray:
    """``L_n = sum_{k<n} C_k (path_{k+1} - path_k)`` with ``L_0 = 0``.

    Both the telescoped form above and its summation-by-parts rewriting
    ``L_n = C_{n-1} path_n + sum_{1<=k<n} (C_{k-1} - C_k) path_k`` are
    evaluated; disagreement beyond a condition-aware 1e-12 relative
    tolerance raises :class:`FormMismatch` (it would indicate an indexing
    bug in the weights).
    """
    s = np.atleast_2d(np.asarray(path, dtype=np.float64))
    single = np.asarray(path).ndim == 1
    if np.any(s[:, 0] != 0.0):
        raise NonzeroStart("discounted transform requires paths starting at 0")
    n = s.shape[1] - 1
    g = np.asarray(growth, dtype=np.float64)
    if g.shape[0] < n:
        raise ShapeMismatch(f"need at least {n} growth weights, got {g.shape[0]}")
    c = discount_weights(g[:n])
    steps = c[None, :] * np.diff(s, axis=1)
    tele = np.hstack([np.zeros((s.shape[0], 1)), np.cumsum(steps, axis=1)])
    # summation by parts: L_n = C_{n-1} S_n + sum_{k=1}^{n-1} (C_{k-1}-C_k) S_k
    sbp = np.zeros_like(tele)
    if n >= 1:
        d = np.concatenate([[0.0], c[:-1] - c[1:]]) if n > 1 else np.zeros(1)
        inner = np.hstack([np.zeros((s.shape[0], 1)), np.cumsum(d[None, 1:] * s[:, 1:n], axis=1)]) if n > 1 else np.zeros((s.shape[0], 1))
        sbp[:, 1:] = c[None, :n] * s[:, 1:] + inner
    scale = np.maximum(1.0, np.cumsum(np.abs(steps), axis=1))
    gap = np.abs(tele[:, 1:] - sbp[:, 1:])
    if np.any(gap > FORM_RTOL * scale):
        worst = float((gap / scale).max())
        raise FormMismatch(f"transform forms disagree by relative {worst:.3e} > {FORM_RTOL}")
    return tele[0] if single else tele


def transform_batch(batch: TrajectoryBatch, growth) -> TrajectoryBatch:
    """Apply :func:`discounted_transform` to every path of a batch."""
    out = discounted_transform(batch.values, growth)
    return TrajectoryBatch(out, label=f"{batch.label}-discounted", starts_at_zero=True)


# --------------------------------------------------------------------------
# the Gronwall bound
# --------------------------------------------------------------------------

def _growth_norm(growth, pair: HolderPair, n) -> tuple:
    """(norm, stderr) of ``prod_{k<n} (1 + G_k)^p`` in the mu-norm.

    Deterministic weights give the exact value (zero error).  For random
    weights the finite-mu norm is a plug-in estimate with a delta-method
    standard error; mu = inf uses the sample maximum, which can only
    understate the essential supremum and therefore only makes the
    verification harder to pass.
    """
    p = pair.p
    if isinstance(growth, TrajectoryBatch):
        vals = growth.values
        if np.any(vals < 0.0):
            raise NegativeWeights("growth weights must be entrywise nonnegative")
        if vals.shape[1] < n:
            raise ShapeMismatch(f"need at least {n} growth columns, got {vals.shape[1]}")
        prods = np.prod(1.0 + vals[:, :n], axis=1)
        if math.isinf(pair.mu):
            return float(prods.max()) ** p, 0.0
        powered = prods ** (p * pair.mu)
        mean = float(powered.mean())
        se_mean = float(powered.std(ddof=1) / math.sqrt(powered.shape[0])) if powered.shape[0] > 1 else 0.0
        norm = mean ** (1.0 / pair.mu)
        se = se_mean * mean ** (1.0 / pair.mu - 1.0) / pair.mu if mean > 0.0 else 0.0
        return norm, se
    g = np.asarray(growth, dtype=np.float64)
    if np.any(g < 0.0):
        raise NegativeWeights("growth weights must be entrywise nonnegative")
    if g.shape[0] < n:
        raise ShapeMismatch(f"need at least {n} growth weights, got {g.shape[0]}")
    return float(np.prod(1.0 + g[:n])) ** p, 0.0


def gronwall_bound(f_sup_mean, growth, pair: HolderPair, n) -> float:
    """Right-hand side of the discrete stochastic Gronwall inequality.

    ``(1 + 1/(1 - nu p))^{1/nu} * ||prod_{k<n} (1+G_k)^p||_mu * f_sup_mean^p``
    where ``f_sup_mean`` estimates ``E[sup_{k<=n} F_k]``.  With
    deterministic weights and (mu, nu) = (inf, 1) this reproduces the
    deterministic-sequence form ``(1 + 1/(1-p)) * prod (1+G_k)^p * (...)^p``
    exactly (same code path, so equality is bitwise).
    """
    f_sup_mean = float(f_sup_mean)
    if f_sup_mean < 0.0:
        raise NegativeInput(f"sup-mean of F must be >= 0, got {f_sup_mean}")
    norm, _ = _growth_norm(growth, pair, int(n))
    return pair.prefactor * norm * f_sup_mean ** pair.p


# --------------------------------------------------------------------------
# instance construction and verification
# --------------------------------------------------------------------------

def build_instance(X: TrajectoryBatch, S: TrajectoryBatch, growth) -> GronwallInstance:
    """Reverse-construct F so the Gronwall recursion holds pathwise.

    ``F_n = max(0, X_n - S_n - sum_{k<n} G_k X_k)`` is nonnegative and makes
    ``X_n <= F_n + S_n + sum_{k<n} G_k X_k`` an identity wherever the max is
    attained and a strict inequality elsewhere.
    """
    if np.any(X.values < 0.0):
        raise NegativeInput("X must be entrywise nonnegative")
    if np.any(S.values[:, 0] != 0.0):
        raise NonzeroStart("S must start at 0 on every path")
    if X.values.shape != S.values.shape:
        raise ShapeMismatch(f"X shape {X.values.shape} != S shape {S.values.shape}")
    n = X.n_steps
    if isinstance(growth, TrajectoryBatch):
        if growth.values.shape[0] != X.n_paths or growth.values.shape[1] < n:
            raise ShapeMismatch(
                f"growth batch shape {growth.values.shape} incompatible with X shape {X.values.shape}"
            )
        if np.any(growth.values < 0.0):
            raise NegativeInput("growth weights must be entrywise nonnegative")
        g = growth
        gvals = growth.values[:, :n]
    else:
        g = np.asarray(growth, dtype=np.float64)
        if g.ndim != 1 or g.shape[0] < n:
            raise ShapeMismatch(f"need a 1-D growth vector of length >= {n}, got shape {g.shape}")
        if np.any(g < 0.0):
            raise NegativeInput("growth weights must be entrywise nonnegative")
        gvals = np.broadcast_to(g[None, :n], (X.n_paths, n))
    hist = np.hstack([np.zeros((X.n_paths, 1)), np.cumsum(gvals * X.values[:, :n], axis=1)])
    f = np.maximum(0.0, X.values - S.values - hist)
    F = TrajectoryBatch(f, label=f"reverse-F[{X.label}]")
    return GronwallInstance(X=X, F=F, G=g, S=S)


def _power_se(mean, se, power) -> float:
    """Delta-method standard error of ``mean ** power``."""
    if mean <= 0.0 or se == 0.0:
        return 0.0
    return abs(power) * mean ** (power - 1.0) * se


def verify_maximal_inequality(
    batch: TrajectoryBatch, p_grid, n=None, slack_sd=3.0, screen=True
) -> VerificationReport:
    """Check ``E[(sup S)^p] <= (E[-inf S])^p / (1-p)`` on a demimartingale batch.

    The demimartingale property itself is the caller's responsibility; when
    ``screen`` is on, a cheap mean-increment screen warns (never fails) if
    the batch looks suspicious.  Each grid point passes when
    ``lhs <= rhs + slack_sd * combined_SE`` with the right-hand error
    propagated through the power by the delta method.
    """
    n = batch.n_steps if n is None else int(n)
    if screen and batch.n_paths > 1 and n >= 1:
        diffs = np.diff(batch.values[:, : n + 1], axis=1)
        mean = diffs.mean(axis=0)
        se = diffs.std(ddof=1, axis=0) / math.sqrt(batch.n_paths)
        if np.any(mean < -4.0 * se - 1e-15):
            warnings.warn(
                f"batch {batch.label!r} has significantly negative mean increments; "
                "it may not be a demimartingale",
                stacklevel=2,
            )
    report = VerificationReport(command="gronwall-lemma", columns=GRONWALL_COLUMNS)
    q = neg_inf_mean(batch, n)
    for p in p_grid:
        lhs = sup_moment(batch, p, n)
        rhs = maximal_moment_bound(q.value, p)
        rhs_se = _power_se(q.value, q.stderr, p) / (1.0 - p)
        slack = slack_sd * math.hypot(lhs.stderr, rhs_se)
        margin = rhs + slack - lhs.value
        report.add_row(
            n=n, p=float(p), mu=None, nu=None,
            lhs=lhs.value, lhs_se=lhs.stderr, rhs=rhs, margin=margin,
            verdict="pass" if margin >= 0.0 else "fail",
        )
    return report


def verify_gronwall(instance: GronwallInstance, pair: HolderPair, n=None, slack_sd=3.0) -> VerificationReport:
    """Check the Gronwall conclusion on one instance at time index ``n``.

    Re-validates the recursion hypothesis pathwise first (raising
    :class:`HypothesisViolated` on any violation beyond 1e-12 of the data
    scale), then compares the Monte Carlo left side against the closed-form
    right side with one-sided ``slack_sd * SE`` slack.
    """
    n = instance.X.n_steps if n is None else int(n)
    gap = instance.hypothesis_gap()
    scale = max(1.0, float(np.abs(instance.X.values).max()), float(np.abs(instance.F.values).max()))
    violations = int(np.sum(gap < -HYPOTHESIS_TOL * scale))
    if violations:
        raise HypothesisViolated(
            f"{violations} path/time cells violate the recursion hypothesis beyond tolerance"
        )
    lhs = sup_moment(instance.X, pair.p, n)
    f_sups = instance.F.values[:, : n + 1].max(axis=1)
    f_mean = float(f_sups.mean())
    f_se = float(f_sups.std(ddof=1) / math.sqrt(f_sups.shape[0])) if f_sups.shape[0] > 1 else 0.0
    norm, norm_se = _growth_norm(instance.G, pair, n)
    rhs = pair.prefactor * norm * f_mean ** pair.p
    rhs_se = pair.prefactor * math.hypot(
        f_mean ** pair.p * norm_se, norm * _power_se(f_mean, f_se, pair.p)
    )
    slack = slack_sd * math.hypot(lhs.stderr, rhs_se)
    margin = rhs + slack - lhs.value
    report = VerificationReport(command="gronwall-theorem", columns=GRONWALL_COLUMNS)
    report.add_row(
        n=n, p=pair.p, mu=pair.mu, nu=pair.nu,
        lhs=lhs.value, lhs_se=lhs.stderr, rhs=rhs, margin=margin,
        verdict="pass" if margin >= 0.0 else "fail",
    )
    report.checks[f"hypothesis_holds[n={n},p={pair.p:g},mu={pair.mu:g}]"] = violations == 0
    return report
