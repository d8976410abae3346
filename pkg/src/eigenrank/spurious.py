"""Monte-Carlo constructions of classically spurious correlations.

Three generators show how a shared component manufactures correlation out
of independent draws: ratios over a common denominator (the ossuary bone
indices), products with a common factor (death-rate style totals), and
journal-size metrics where article count multiplies both sides.  A fourth
demonstrates the converse trap: logistic-map iterates that are perfectly
dependent yet uncorrelated.

Each trial runs on its own RNG stream derived from (seed, trial index), so
results are reproducible regardless of execution order.
"""

from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ._util import readonly
from .errors import UndefinedCorrelationError
from .stats import pearson_r

FAMILIES = ("lognormal", "normal-truncated-positive", "uniform-positive")

# a series whose spread is this small is treated as constant (the logistic
# map near a fixed point settles into a last-ulp two-cycle, never exactly flat)
_CONSTANT_SPREAD = 1e-9


@dataclass(frozen=True)
class DistributionSpec:
    """A strictly positive sampling distribution.

    * ``lognormal``: location/scale are the underlying normal's mu/sigma.
    * ``normal-truncated-positive``: N(location, scale^2) with nonpositive
      draws rejected and redrawn.
    * ``uniform-positive``: uniform on (location - scale, location + scale),
      nonpositive draws rejected.
    """

    kind: str
    location: float
    scale: float

    def __post_init__(self):
        if self.kind not in FAMILIES:
            raise ValueError(f"unknown distribution family {self.kind!r}")
        if not self.scale > 0:
            raise ValueError("scale must be strictly positive")
        if self.kind == "normal-truncated-positive" and self.location <= 0:
            raise ValueError("truncated normal needs a positive location")
        if self.kind == "uniform-positive" and self.location + self.scale <= 0:
            raise ValueError("uniform support must reach above zero")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "lognormal":
            return rng.lognormal(self.location, self.scale, size)
        out = np.empty(size)
        filled = 0
        while filled < size:  # rejection keeps every value strictly positive
            if self.kind == "normal-truncated-positive":
                draw = rng.normal(self.location, self.scale, size - filled)
            else:
                draw = rng.uniform(self.location - self.scale,
                                   self.location + self.scale, size - filled)
            draw = draw[draw > 0]
            out[filled:filled + len(draw)] = draw
            filled += len(draw)
        return out


def lognormal_from_cv(cv: float, mean: float = 1.0) -> DistributionSpec:
    """Lognormal spec whose population coefficient of variation is ``cv``.

    cv c implies log-variance ln(1 + c^2); location is set so the
    distribution mean equals ``mean``.
    """
    if cv <= 0:
        raise ValueError("cv must be strictly positive")
    sigma2 = math.log1p(cv * cv)
    return DistributionSpec("lognormal", math.log(mean) - sigma2 / 2.0, math.sqrt(sigma2))


def spec_from_cv(family: str, cv: float, mean: float = 1.0) -> DistributionSpec:
    """Family-appropriate spec targeting the given cv (exact for lognormal;
    calibrated on the untruncated distribution for the others)."""
    if family == "lognormal":
        return lognormal_from_cv(cv, mean)
    if family == "normal-truncated-positive":
        return DistributionSpec(family, mean, cv * mean)
    if family == "uniform-positive":
        return DistributionSpec(family, mean, math.sqrt(3.0) * cv * mean)
    raise ValueError(f"unknown distribution family {family!r}")


@dataclass(frozen=True, eq=False)
class SimulationResult:
    trials: int
    rho: np.ndarray  # one correlation per trial
    mean_rho: float
    sd_rho: float
    seed: int
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "rho", readonly(self.rho))
        if len(self.rho) != self.trials:
            raise ValueError("per-trial rho length must equal trials")
        if not -1.0 <= self.mean_rho <= 1.0:
            raise ValueError("mean_rho out of [-1, 1]")


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    # counter-based split: stream t is fully determined by (seed, t)
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def _gather(rhos: list[float], seed: int, params: dict) -> SimulationResult:
    arr = np.asarray(rhos)
    sd = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return SimulationResult(trials=len(arr), rho=arr, mean_rho=float(arr.mean()),
                            sd_rho=sd, seed=seed, params=params)


def _check_counts(n: int, trials: int, seed: int, n_min: int, what: str) -> None:
    if n < n_min:
        raise ValueError(f"{what} needs at least {n_min} draws per trial, got {n}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")


# ---------------------------------------------------------------------------
# simulators
# ---------------------------------------------------------------------------

def simulate_ossuary(femur: DistributionSpec, tibia: DistributionSpec,
                     humerus: DistributionSpec, n_bones: int, trials: int,
                     seed: int) -> SimulationResult:
    """Randomly assembled bone triples: correlation of femur/humerus vs
    tibia/humerus induced purely by the shared denominator.

    With roughly equal coefficients of variation the indices correlate near
    0.5 even though all three lengths are drawn independently.
    """
    _check_counts(n_bones, trials, seed, 10, "ossuary simulation")
    rhos = []
    for t in range(trials):
        rng = _trial_rng(seed, t)
        f = femur.sample(rng, n_bones)
        ti = tibia.sample(rng, n_bones)
        h = humerus.sample(rng, n_bones)
        rhos.append(pearson_r(f / h, ti / h))
    return _gather(rhos, seed, {
        "simulation": "ossuary", "n_bones": n_bones,
        "femur": femur, "tibia": tibia, "humerus": humerus})


def simulate_yule_products(z1: DistributionSpec, z2: DistributionSpec,
                           x3: DistributionSpec, n: int, trials: int, seed: int,
                           share_z_draws: bool = False) -> SimulationResult:
    """Products with a common factor: rho(z1*x3, z2*x3) for independent draws.

    ``share_z_draws`` is a diagnostic mode that reuses the z1 draws for z2,
    making the numerators identical; it can only push the correlation up.
    """
    _check_counts(n, trials, seed, 10, "product simulation")
    rhos = []
    for t in range(trials):
        rng = _trial_rng(seed, t)
        a = z1.sample(rng, n)
        b = a if share_z_draws else z2.sample(rng, n)
        c = x3.sample(rng, n)
        rhos.append(pearson_r(a * c, b * c))
    return _gather(rhos, seed, {
        "simulation": "yule", "n": n, "share_z_draws": share_z_draws,
        "z1": z1, "z2": z2, "x3": x3})


def simulate_journal_sizes(ai_cv: float, if_cv: float, n5_cv: float,
                           n_journals: int, trials: int, seed: int) -> SimulationResult:
    """Spurious size-driven correlation between the two composite metrics.

    Draws per-article influence, per-article impact and article counts as
    independent lognormals calibrated to the given coefficients of
    variation, forms log(total influence) = log AI + log N and
    log(total cites) = log IF + log N, and correlates the logged pair.
    The expected value is the article-count share of the log variance:
    sigma_N^2 / sqrt((sigma_AI^2 + sigma_N^2)(sigma_IF^2 + sigma_N^2)).
    """
    _check_counts(n_journals, trials, seed, 10, "journal-size simulation")
    ai_spec = lognormal_from_cv(ai_cv)
    if_spec = lognormal_from_cv(if_cv)
    n5_spec = lognormal_from_cv(n5_cv)
    rhos = []
    for t in range(trials):
        rng = _trial_rng(seed, t)
        ai = ai_spec.sample(rng, n_journals)
        impact = if_spec.sample(rng, n_journals)
        n5 = n5_spec.sample(rng, n_journals)
        log_n5 = np.log(n5)
        rhos.append(pearson_r(np.log(ai) + log_n5, np.log(impact) + log_n5))
    return _gather(rhos, seed, {
        "simulation": "journal-size", "n_journals": n_journals,
        "ai_cv": ai_cv, "if_cv": if_cv, "n5_cv": n5_cv})


def logistic_map_correlation(r: float, x0: float, n: int, burn_in: int = 1000) -> float:
    """Correlation between successive logistic-map iterates.

    Iterates x <- r*x*(1-x) from ``x0``, discards ``burn_in`` steps, then
    correlates (x_k) with (x_{k+1}) over ``n`` pairs.  In the fully chaotic
    regime (r = 4) the two series are algebraically locked together yet
    their correlation is zero.  An orbit that has collapsed to a fixed
    point (or to exact zero) yields a constant series, which makes the
    correlation undefined.
    """
    if not 0.0 < r <= 4.0:
        raise ValueError("r must lie in (0, 4]")
    if not 0.0 < x0 < 1.0:
        raise ValueError("x0 must lie in (0, 1)")
    if n < 1000:
        raise ValueError("need at least 1000 iterates for a stable estimate")
    if burn_in < 0:
        raise ValueError("burn_in must be nonnegative")
    x = x0
    for _ in range(burn_in):
        x = r * x * (1.0 - x)
    xs = np.empty(n + 1)
    xs[0] = x
    for k in range(1, n + 1):
        x = r * x * (1.0 - x)
        xs[k] = x
    if float(np.ptp(xs)) <= _CONSTANT_SPREAD:
        raise UndefinedCorrelationError(
            f"orbit is constant after burn-in (converged near {xs[0]:.6g})")
    return pearson_r(xs[:-1], xs[1:])


# ---------------------------------------------------------------------------
# output files
# ---------------------------------------------------------------------------

def write_simulation_csv(result: SimulationResult) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["trial", "rho"])
    for t, rho in enumerate(result.rho):
        w.writerow([t, f"{rho:.12g}"])
    return out.getvalue()


def format_summary(result: SimulationResult) -> str:
    q = np.quantile(result.rho, [0.0, 0.25, 0.5, 0.75, 1.0])
    lines = [
        f"seed={result.seed}",
        f"trials={result.trials}",
        f"mean_rho={result.mean_rho:.6f}",
        f"sd_rho={result.sd_rho:.6f}",
        f"min={q[0]:.6f} q25={q[1]:.6f} median={q[2]:.6f} q75={q[3]:.6f} max={q[4]:.6f}",
    ]
    for key in sorted(result.params):
        lines.append(f"{key}={result.params[key]}")
    return "\n".join(lines) + "\n"
