"""L1-Caputo difference machinery and the fractional Gronwall bound.

The uniform L1 approximation of a multi-term Caputo derivative of orders
``0 < beta_0 < ... < beta_m < 1`` with positive weights ``q_r`` uses the
kernel coefficients ``a_j = (j+1)^(1-beta) - j^(1-beta)``.  The discrete
difference operator at step ``n`` has two algebraically equal forms,

    D f_n = tau^(-beta)/Gamma(2-beta) * sum_{i=1}^n a_{n-i} (f_i - f_{i-1})
          = tau^(-beta)/Gamma(2-beta) * sum_{i=0}^n b_{n-i} f_i,

with ``b_0 = a_0``, ``b_k = a_k - a_{k-1}`` for ``0 < k < n`` and
``b_n = -a_{n-1}``; every b-row sums to zero by telescoping.  Both forms
are always evaluated and cross-checked.

The fractional Gronwall bound controls ``E[sup_{1<=k<=n} X_k^p]`` for
nonnegative sequences satisfying

    sum_r q_r D^{beta_r} X_n <= F_n + Y_n + lambda1 X_n + lambda2 X_{n-1}

with ``(Y_n)`` mean-zero associated, in terms of a Mittag-Leffler growth
factor and plug-in moments of ``X_0`` and ``sup F``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz
from scipy.special import gamma as gamma_fn
from scipy.special import gammaln

from .errors import (
    AlphaOutOfRange,
    BetaOutOfRange,
    FormMismatch,
    HypothesisViolated,
    InvalidSpec,
    NegativeInput,
    SeriesNoConvergence,
    ShapeMismatch,
)
from .generators import TrajectoryBatch
from .gronwall import GRONWALL_COLUMNS, HolderPair, _power_se, sup_moment
from .reporting import VerificationReport

FORM_RTOL = 1e-12


def _check_beta(beta) -> float:
    beta = float(beta)
    if not 0.0 < beta < 1.0:
        raise BetaOutOfRange(f"fractional order must lie in (0, 1), got {beta}")
    return beta


@dataclass(frozen=True)
class FractionalModel:
    """Multi-term model: orders, weights, step size and rate constants."""

    betas: tuple
    q: tuple
    tau: float
    n_steps: int
    lambda1: float = 0.0
    lambda2: float = 0.0

    def __post_init__(self):
        betas = tuple(float(b) for b in self.betas)
        q = tuple(float(w) for w in self.q)
        if len(betas) == 0 or len(betas) != len(q):
            raise InvalidSpec("need matching, nonempty order and weight tuples")
        for b in betas:
            _check_beta(b)
        if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
            raise InvalidSpec(f"orders must be strictly increasing, got {betas}")
        if any(w <= 0.0 for w in q):
            raise InvalidSpec(f"weights must be strictly positive, got {q}")
        if not self.tau > 0.0:
            raise InvalidSpec(f"step size tau must be > 0, got {self.tau}")
        if self.n_steps < 1:
            raise InvalidSpec(f"n_steps must be >= 1, got {self.n_steps}")
        if self.lambda1 < 0.0 or self.lambda2 < 0.0:
            raise InvalidSpec("rate constants lambda1, lambda2 must be >= 0")
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "q", q)

    @property
    def beta_max(self) -> float:
        return self.betas[-1]

    @property
    def q_max(self) -> float:
        """Weight attached to the largest order."""
        return self.q[-1]

    @property
    def horizon(self) -> float:
        return self.tau * self.n_steps

    def time(self, n) -> float:
        return n * self.tau


# --------------------------------------------------------------------------
# L1 coefficients
# --------------------------------------------------------------------------

def l1_a(beta, j):
    """L1 kernel coefficient ``a_j = (j+1)^(1-beta) - j^(1-beta)``.

    ``a_0 = 1`` exactly and the sequence decreases strictly to zero.
    Accepts scalar or array ``j``.
    """
    beta = _check_beta(beta)
    j = np.asarray(j, dtype=np.float64)
    out = (j + 1.0) ** (1.0 - beta) - j ** (1.0 - beta)
    return float(out) if out.ndim == 0 else out


def l1_b_row(beta, n) -> np.ndarray:
    """History weights ``(b_0, ..., b_n)`` of the direct form at step ``n``.

    Indexed so that ``D f_n`` is ``prefactor * sum_i b_{n-i} f_i``; each row
    sums to zero by telescoping.
    """
    beta = _check_beta(beta)
    n = int(n)
    if n < 1:
        raise InvalidSpec(f"n must be >= 1, got {n}")
    a = l1_a(beta, np.arange(n))
    b = np.empty(n + 1)
    b[0] = a[0]
    b[1:n] = a[1:n] - a[: n - 1]
    b[n] = -a[n - 1]
    return b


@dataclass(frozen=True)
class CoefficientTable:
    """Precomputed a- and b-coefficients of one order up to step N."""

    beta: float
    a: np.ndarray
    b: np.ndarray

    @classmethod
    def build(cls, beta, n_steps) -> "CoefficientTable":
        beta = _check_beta(beta)
        return cls(beta=beta, a=l1_a(beta, np.arange(n_steps + 1)), b=l1_b_row(beta, n_steps))

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("j,a,b\n")
            for j in range(self.a.shape[0]):
                fh.write(f"{j},{float(self.a[j])!r},{float(self.b[j])!r}\n")


def _prefactor(beta, tau) -> float:
    return tau ** (-beta) / gamma_fn(2.0 - beta)


def caputo_l1_forms(f_seq, beta, tau, n) -> tuple:
    """Both forms of the L1 Caputo difference at step ``n`` (delta, direct)."""
    beta = _check_beta(beta)
    if not tau > 0.0:
        raise InvalidSpec(f"tau must be > 0, got {tau}")
    n = int(n)
    if n < 1:
        raise InvalidSpec(f"n must be >= 1, got {n}")
    f = np.asarray(f_seq, dtype=np.float64)
    if f.ndim != 1 or f.shape[0] < n + 1:
        raise ShapeMismatch(f"need a 1-D sequence of length >= {n + 1}, got shape {f.shape}")
    if not np.isfinite(f[: n + 1]).all():
        raise InvalidSpec("sequence contains non-finite entries")
    pref = _prefactor(beta, tau)
    a = l1_a(beta, np.arange(n))
    delta_form = pref * float(np.dot(a[::-1], np.diff(f[: n + 1])))
    b = l1_b_row(beta, n)
    direct_form = pref * float(np.dot(b[::-1], f[: n + 1]))
    return delta_form, direct_form


def caputo_l1(f_seq, beta, tau, n) -> float:
    """L1 Caputo difference ``D_tau^beta f_n``; cross-checks both forms.

    The agreement tolerance scales with the absolute size of the summed
    contributions, so large or nearly cancelling inputs are judged fairly.

    Raises:
        FormMismatch: delta- and direct-form evaluations disagree.
    """
    delta_form, direct_form = caputo_l1_forms(f_seq, beta, tau, n)
    f = np.asarray(f_seq, dtype=np.float64)[: int(n) + 1]
    pref = _prefactor(beta, tau)
    scale = max(1.0, pref * float(np.abs(l1_b_row(beta, int(n))[::-1] * f).sum()))
    if abs(delta_form - direct_form) > FORM_RTOL * scale:
        raise FormMismatch(
            f"L1 forms disagree: {delta_form!r} vs {direct_form!r} at scale {scale:g}"
        )
    return delta_form


def multi_term_caputo(model: FractionalModel, f_seq, n) -> float:
    """Weighted multi-term difference ``sum_r q_r D^{beta_r} f_n``."""
    return sum(
        w * caputo_l1(f_seq, beta, model.tau, n) for beta, w in zip(model.betas, model.q)
    )


def multi_term_table(model: FractionalModel, values) -> np.ndarray:
    """Multi-term differences of every path at every step.

    Args:
        values: path matrix of shape (M, N+1).

    Returns:
        matrix of shape (M, N); column ``n-1`` holds the operator at step n.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.n_steps + 1:
        raise ShapeMismatch(f"expected shape (M, {model.n_steps + 1}), got {x.shape}")
    n = model.n_steps
    diffs = np.diff(x, axis=1)
    out = np.zeros((x.shape[0], n))
    for beta, w in zip(model.betas, model.q):
        kernel = toeplitz(l1_a(beta, np.arange(n)), np.zeros(n))
        out += w * _prefactor(beta, model.tau) * diffs @ kernel.T
    return out


# --------------------------------------------------------------------------
# Mittag-Leffler function and rate constants
# --------------------------------------------------------------------------

def mittag_leffler(alpha, z, rel_tol=1e-12, z_max=100.0, max_terms=20000) -> float:
    """Truncated power series ``E_alpha(z) = sum_k z^k / Gamma(1 + k alpha)``.

    Terms are evaluated in log space, so large intermediate Gamma values
    cannot overflow; summation stops once three consecutive terms fall
    below ``rel_tol`` times the running sum.  Arguments are kept moderate
    by the ``z_max`` guard; asymptotic large-argument algorithms are out of
    scope here.

    Raises:
        AlphaOutOfRange: ``alpha <= 0``.
        SeriesNoConvergence: guard exceeded or series overflows.
    """
    alpha = float(alpha)
    if not alpha > 0.0:
        raise AlphaOutOfRange(f"alpha must be > 0, got {alpha}")
    z = float(z)
    if abs(z) > z_max:
        raise SeriesNoConvergence(f"|z| = {abs(z)} beyond the overflow guard {z_max}")
    if z == 0.0:
        return 1.0
    log_abs_z = math.log(abs(z))
    total = 0.0
    small_streak = 0
    for k in range(max_terms):
        log_term = k * log_abs_z - gammaln(1.0 + k * alpha)
        if log_term > 709.0:  # exp would overflow a double
            raise SeriesNoConvergence(f"series term overflows at k={k} for alpha={alpha}, z={z}")
        term = math.exp(log_term)
        if z < 0.0 and k % 2 == 1:
            term = -term
        total += term
        if abs(term) < rel_tol * max(abs(total), 1e-300):
            small_streak += 1
            if small_streak >= 3:
                return total
        else:
            small_streak = 0
    raise SeriesNoConvergence(f"no convergence within {max_terms} terms for alpha={alpha}, z={z}")


def effective_rate(lambda1, lambda2, beta_max) -> float:
    """Combined rate ``lambda1 + lambda2 / (2 - 2^(1 - beta_max))``."""
    beta_max = _check_beta(beta_max)
    lambda1, lambda2 = float(lambda1), float(lambda2)
    if lambda1 < 0.0 or lambda2 < 0.0:
        raise NegativeInput("rate constants must be >= 0")
    return lambda1 + lambda2 / (2.0 - 2.0 ** (1.0 - beta_max))


def kernel_mass(model: FractionalModel, k) -> float:
    """Cumulative kernel mass ``sum_r q_r tau^(1-beta_r)/Gamma(2-beta_r) sum_{j<=k} a_{j-1}``.

    Strictly positive and strictly increasing in ``k``.
    """
    k = int(k)
    if k < 1:
        raise InvalidSpec(f"k must be >= 1, got {k}")
    total = 0.0
    for beta, w in zip(model.betas, model.q):
        total += (
            w
            * model.tau ** (1.0 - beta)
            / gamma_fn(2.0 - beta)
            * float(l1_a(beta, np.arange(k)).sum())
        )
    return total


def ml_growth_factor(model: FractionalModel, n) -> float:
    """Growth factor ``2 E_{beta_m}(2 lambda t_n^{beta_m} / q_m)`` of the bound."""
    lam = effective_rate(model.lambda1, model.lambda2, model.beta_max)
    arg = 2.0 * lam * model.time(int(n)) ** model.beta_max / model.q_max
    return 2.0 * mittag_leffler(model.beta_max, arg)


# --------------------------------------------------------------------------
# the fractional Gronwall bound
# --------------------------------------------------------------------------

def fractional_gronwall_bound(
    model: FractionalModel, pair: HolderPair, n, x0_mean_term, f_sup_mean_term, ml_factor=None
) -> float:
    """Right-hand side of the fractional Gronwall inequality at step ``n``.

    ``prefactor(pair) * ||ml^p||_mu * (x0_term + f_term)^p`` where
    ``x0_term`` estimates ``E[tau^{beta_m}/(q_m Gamma(1+beta_m)) X_0 W]``
    and ``f_term`` estimates the matching ``sup F`` expectation.  The
    Mittag-Leffler factor defaults to the deterministic value computed from
    the model; an array may be passed for a random-coefficient variant, in
    which case its mu-norm is a plug-in estimate.
    """
    x0_mean_term = float(x0_mean_term)
    f_sup_mean_term = float(f_sup_mean_term)
    if x0_mean_term < 0.0 or f_sup_mean_term < 0.0:
        raise NegativeInput("expectation terms must be >= 0")
    if ml_factor is None:
        ml_factor = ml_growth_factor(model, n)
    ml = np.asarray(ml_factor, dtype=np.float64)
    p = pair.p
    if ml.ndim == 0:
        norm = float(ml) ** p
    elif math.isinf(pair.mu):
        norm = float(ml.max()) ** p
    else:
        norm = float((ml ** (p * pair.mu)).mean()) ** (1.0 / pair.mu)
    return pair.prefactor * norm * (x0_mean_term + f_sup_mean_term) ** p


def verify_fractional_gronwall(
    model: FractionalModel,
    X: TrajectoryBatch,
    Y,
    pair: HolderPair,
    n=None,
    slack_sd=3.0,
) -> VerificationReport:
    """Monte Carlo check of the fractional Gronwall bound.

    ``F_n = (sum_r q_r D^{beta_r} X_n - Y_n - lambda1 X_n - lambda2 X_{n-1})^+``
    is reverse-constructed so the hypothesis holds pathwise; the left side
    ``E[sup_{1<=k<=n} X_k^p]`` is then compared against
    :func:`fractional_gronwall_bound` with one-sided ``slack_sd * SE``
    slack.  ``Y`` should be a mean-zero associated family; certifying that
    (via ``check_association``) is the caller's responsibility.

    Args:
        X: nonnegative batch of shape (M, N+1).
        Y: batch or array aligned so column ``n`` (batch) or ``n-1``
            (plain (M, N) array) is ``Y_n``.
    """
    if np.any(X.values < 0.0):
        raise NegativeInput("X must be entrywise nonnegative")
    if X.n_steps != model.n_steps:
        raise ShapeMismatch(f"X has {X.n_steps} steps but the model expects {model.n_steps}")
    y = Y.values[:, 1:] if isinstance(Y, TrajectoryBatch) else np.asarray(Y, dtype=np.float64)
    if y.shape != (X.n_paths, model.n_steps):
        raise ShapeMismatch(f"Y must align to shape {(X.n_paths, model.n_steps)}, got {y.shape}")
    n = model.n_steps if n is None else int(n)
    if not 1 <= n <= model.n_steps:
        raise ShapeMismatch(f"need 1 <= n <= {model.n_steps}, got n={n}")

    d = multi_term_table(model, X.values)
    linear = y + model.lambda1 * X.values[:, 1:] + model.lambda2 * X.values[:, :-1]
    f = np.maximum(0.0, d - linear)
    gap = f + linear - d
    scale = max(1.0, float(np.abs(d).max()))
    violations = int(np.sum(gap < -1e-12 * scale))
    if violations:
        raise HypothesisViolated(f"{violations} cells violate the fractional hypothesis")

    lhs = sup_moment(X, pair.p, n, first=1)
    c_shared = 1.0 / (model.q_max * gamma_fn(1.0 + model.beta_max))
    x0_vals = model.tau ** model.beta_max * c_shared * kernel_mass(model, n) * X.values[:, 0]
    f_vals = model.time(n) ** model.beta_max * c_shared * f[:, :n].max(axis=1)
    m = X.n_paths
    x0_mean, f_mean = float(x0_vals.mean()), float(f_vals.mean())
    x0_se = float(x0_vals.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    f_se = float(f_vals.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0

    ml = ml_growth_factor(model, n)
    rhs = fractional_gronwall_bound(model, pair, n, x0_mean, f_mean, ml)
    rhs_se = pair.prefactor * ml ** pair.p * _power_se(x0_mean + f_mean, math.hypot(x0_se, f_se), pair.p)
    slack = slack_sd * math.hypot(lhs.stderr, rhs_se)
    margin = rhs + slack - lhs.value

    report = VerificationReport(command="fractional", columns=GRONWALL_COLUMNS)
    report.add_row(
        n=n, p=pair.p, mu=pair.mu, nu=pair.nu,
        lhs=lhs.value, lhs_se=lhs.stderr, rhs=rhs, margin=margin,
        verdict="pass" if margin >= 0.0 else "fail",
    )
    report.checks[f"fractional_hypothesis_holds[n={n},p={pair.p:g},mu={pair.mu:g}]"] = violations == 0
    return report
