"""Closed-form threshold, tail-bound, and counting formulas.

Every "log" here is the natural logarithm.  Binomials and matching counts
are exact big integers; floating point appears only in final probability
bounds and threshold comparisons.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from math import ceil, comb, exp, factorial, inf, log, log1p, sqrt

from .errors import RangeError


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else "-inf"
    return value


def chernoff_bound(mode, eps=None, mu=None, x=None):
    """Binomial tail bounds: 2e^(-eps^2 mu/3) for relative deviations
    up to 3/2, e^(-x) for thresholds x >= 7 mu.  Inputs outside the
    validity window raise rather than extrapolate.
    """
    if mode == "small":
        if eps is None or mu is None:
            raise RangeError("small mode needs eps and mu")
        if not 0 < eps <= 1.5:
            raise RangeError(f"eps must be in (0, 1.5], got {eps}")
        if mu < 0:
            raise RangeError(f"mu must be >= 0, got {mu}")
        return 2.0 * exp(-eps * eps * mu / 3.0)
    if mode == "large":
        if x is None or mu is None:
            raise RangeError("large mode needs x and mu")
        if x < 7 * mu:
            raise RangeError(f"x={x} is below 7*mu={7 * mu}")
        return exp(-x)
    raise RangeError(f"mode must be 'small' or 'large', got {mode!r}")


@dataclass(frozen=True)
class RegimeReport:
    """Which parameter regime (n, k, s, t, eps, p) lands in.

    The primary regime needs p >= 64ks log n / C(n-1,k-1) and
    n >= 200 k^3 s.  The tradeoff regime (when t is given) needs
    p >= 8(t+1)k^(t+1)s^t log n / C(n-1,k-1) and n within
    [56 k^(2+1/t) s, 56 k^(2+1/(t-1)) s] (upper end infinite at t=1).
    The eps regime (when eps is given) uses t = ceil(k^eps), needs
    n >= 56 e^(1/(e eps)) k^2 s and p >= 10 (ks)^(k^eps) k^(1+eps)
    / C(n-1,k-1).  The sampling window [p_low, p_high] brackets
    where nu <= s and non-triviality are both expected; the suggested
    test point is the geometric mean of its endpoints (a design choice,
    since the window is asymptotic).  p-flags are None when p is None.
    """

    n: int
    k: int
    s: int
    t: int | None
    eps: float | None
    p: float | None
    primary_p_min: float
    primary_n_min: int
    primary_p_ok: bool | None
    primary_n_ok: bool
    tradeoff_p_min: float | None
    tradeoff_n_low: float | None
    tradeoff_n_high: float | None
    tradeoff_p_ok: bool | None
    tradeoff_n_window_ok: bool | None
    eps_t: int | None
    eps_n_min: float | None
    eps_p_min: float | None
    eps_p_ok: bool | None
    eps_n_ok: bool | None
    eps_rounding_changed: bool | None
    window_low: float
    window_high: float
    window_nonempty: bool
    window_test_point: float | None

    def to_dict(self):
        return {key: _jsonable(val) for key, val in asdict(self).items()}


def _tradeoff_window(k, s, t):
    low = 56.0 * k ** (2.0 + 1.0 / t) * s
    high = inf if t <= 1 else 56.0 * k ** (2.0 + 1.0 / (t - 1.0)) * s
    return low, high


def regime_report(n, k, s, t=None, eps=None, p=None):
    """Evaluate every threshold condition at the given parameters."""
    if k < 2 or n < k:
        raise RangeError(f"need n >= k >= 2, got n={n}, k={k}")
    if s < 1:
        raise RangeError(f"s must be >= 1, got {s}")
    if t is not None and t < 1:
        raise RangeError(f"t must be >= 1, got {t}")
    if eps is not None and not 0 < eps < 1:
        raise RangeError(f"eps must be in (0, 1), got {eps}")
    if p is not None and not 0 <= p <= 1:
        raise RangeError(f"p must be in [0, 1], got {p}")

    deg = comb(n - 1, k - 1)
    log_n = log(n)
    primary_p_min = 64.0 * k * s * log_n / deg
    primary_n_min = 200 * k**3 * s

    tradeoff_p_min = tradeoff_n_low = tradeoff_n_high = None
    tradeoff_p_ok = tradeoff_n_window_ok = None
    if t is not None:
        tradeoff_p_min = 8.0 * (t + 1) * k ** (t + 1) * s**t * log_n / deg
        tradeoff_n_low, tradeoff_n_high = _tradeoff_window(k, s, t)
        tradeoff_n_window_ok = tradeoff_n_low <= n <= tradeoff_n_high
        if p is not None:
            tradeoff_p_ok = tradeoff_p_min <= p <= 1

    eps_t = eps_n_min = eps_p_min = None
    eps_p_ok = eps_n_ok = eps_rounding_changed = None
    if eps is not None:
        k_eps = k**eps
        eps_t = ceil(k_eps)
        eps_n_min = 56.0 * exp(1.0 / (math.e * eps)) * k * k * s
        eps_p_min = 10.0 * (k * s) ** k_eps * k ** (1.0 + eps) / deg
        eps_n_ok = n >= eps_n_min
        if p is not None:
            eps_p_ok = eps_p_min <= p <= 1
        lo_real, hi_real = _tradeoff_window(k, s, k_eps)
        lo_int, hi_int = _tradeoff_window(k, s, eps_t)
        eps_rounding_changed = (lo_real <= n <= hi_real) != (
            lo_int <= n <= hi_int
        )

    avoid = comb(n - s, k) if n - s >= 0 else 0
    window_low = s * log_n / avoid if avoid else inf
    window_high = exp(k * k * s / (2.0 * n)) / comb(n, k)
    window_nonempty = window_low < window_high
    test_point = sqrt(window_low * window_high) if window_nonempty else None

    return RegimeReport(
        n=n,
        k=k,
        s=s,
        t=t,
        eps=eps,
        p=p,
        primary_p_min=primary_p_min,
        primary_n_min=primary_n_min,
        primary_p_ok=(primary_p_min <= p <= 1) if p is not None else None,
        primary_n_ok=n >= primary_n_min,
        tradeoff_p_min=tradeoff_p_min,
        tradeoff_n_low=tradeoff_n_low,
        tradeoff_n_high=tradeoff_n_high,
        tradeoff_p_ok=tradeoff_p_ok,
        tradeoff_n_window_ok=tradeoff_n_window_ok,
        eps_t=eps_t,
        eps_n_min=eps_n_min,
        eps_p_min=eps_p_min,
        eps_p_ok=eps_p_ok,
        eps_n_ok=eps_n_ok,
        eps_rounding_changed=eps_rounding_changed,
        window_low=window_low,
        window_high=window_high,
        window_nonempty=window_nonempty,
        window_test_point=test_point,
    )


@dataclass(frozen=True)
class WindowDiagnostics:
    """Exact matching count and the two probability bounds at (n,k,s,p).

    matching_count is the number of (s+1)-matchings in the complete
    k-graph on [n] (unordered; zero when (s+1)k > n).  union_bound is
    min(1, count * p^(s+1)), an upper bound on the probability that a
    p-sample has nu > s.  trivial_bound is min(1, C(n,s)(1-p)^C(n-s,k)),
    an upper bound on the probability that the sample is trivial.
    """

    n: int
    k: int
    s: int
    p: float
    matching_count: int
    union_bound: float
    trivial_bound: float

    def to_dict(self):
        return asdict(self)


def matching_count(n, k, s):
    """Number of (s+1)-matchings in the complete k-graph on [n]."""
    r = (s + 1) * k
    return comb(n, r) * factorial(r) // (
        factorial(k) ** (s + 1) * factorial(s + 1)
    )


def window_diagnostics(n, k, s, p):
    if k < 1 or n < k:
        raise RangeError(f"need n >= k >= 1, got n={n}, k={k}")
    if s < 0:
        raise RangeError(f"s must be >= 0, got {s}")
    if not 0 <= p <= 1:
        raise RangeError(f"p must be in [0, 1], got {p}")

    count = matching_count(n, k, s)
    if count == 0 or p == 0:
        union = 0.0
    else:
        lg = log(count) + (s + 1) * log(p)
        union = 1.0 if lg >= 0 else exp(lg)

    stars = comb(n, s)
    exponent = comb(n - s, k) if n - s >= k else 0
    if stars == 0:
        trivial = 0.0
    elif p == 1:
        trivial = 1.0 if exponent == 0 else 0.0
    else:
        lg = log(stars) + exponent * log1p(-p)
        trivial = 1.0 if lg >= 0 else exp(lg)

    return WindowDiagnostics(
        n=n,
        k=k,
        s=s,
        p=p,
        matching_count=count,
        union_bound=union,
        trivial_bound=trivial,
    )


@dataclass(frozen=True)
class LogPowerBound:
    """The quantity f(k) = log(k)/k^eps, its universal bound 1/(e*eps),
    and the induced depth t = ceil(k^eps)."""

    eps: float
    k: int
    t: int
    f_value: float
    bound: float
    ok: bool

    def to_dict(self):
        return asdict(self)


def log_power_bound(eps, k):
    if not 0 < eps < 1:
        raise RangeError(f"eps must be in (0, 1), got {eps}")
    if k < 2:
        raise RangeError(f"k must be >= 2, got {k}")
    f_value = log(k) / k**eps
    bound = 1.0 / (math.e * eps)
    return LogPowerBound(
        eps=eps,
        k=k,
        t=ceil(k**eps),
        f_value=f_value,
        bound=bound,
        ok=f_value <= bound,
    )
