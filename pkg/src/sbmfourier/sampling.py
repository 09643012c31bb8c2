"""Graph samplers and the signed-count hypothesis-testing harness.

Tests compare a block model against the fair coin-flip graph on the same
vertex count using one signed subgraph count, thresholded where the two
Chebyshev tail bounds balance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import counts as ct
from . import fourier as fr
from . import graphs as gr
from .sbm import SbmModel
from .streams import SeededStream


def sample_er(n: int, stream: SeededStream) -> ct.SampledGraph:
    """Uniform graph: every edge an independent fair coin."""
    if n < 1:
        raise ValueError("need n >= 1")
    rng = stream.generator()
    iu = np.triu_indices(n, 1)
    bits = rng.integers(0, 2, size=len(iu[0]), dtype=np.uint8)
    a = np.zeros((n, n), dtype=np.uint8)
    a[iu] = bits
    a += a.T
    return ct.SampledGraph(n=n, adjacency=a)


def sample_sbm(m: SbmModel, n: int, stream: SeededStream) -> ct.SampledGraph:
    """Two-step sample: labels i.i.d. from p, then each edge an
    independent coin with probability (1 + Q[x_i, x_j]) / 2."""
    if n < 1:
        raise ValueError("need n >= 1")
    rng = stream.generator()
    labels = rng.choice(m.k, size=n, p=m.p)
    iu = np.triu_indices(n, 1)
    prob = (1.0 + m.Q[labels[iu[0]], labels[iu[1]]]) / 2.0
    bits = (rng.random(len(iu[0])) < prob).astype(np.uint8)
    a = np.zeros((n, n), dtype=np.uint8)
    a[iu] = bits
    a += a.T
    return ct.SampledGraph(n=n, adjacency=a, labels=labels.astype(np.int64))


@dataclass(frozen=True)
class TestSpec:
    """A signed-count test instance with its exact or estimated moments."""

    h: gr.PatternGraph
    n: int
    model: SbmModel
    null_sigma: float
    planted_mean: float
    planted_sigma: float
    variance_exact: bool

    @property
    def threshold(self) -> float:
        """Decision point balancing the two Chebyshev tails."""
        if self.planted_mean == 0.0:
            return math.inf
        return abs(self.planted_mean) * self.null_sigma / (
            self.null_sigma + self.planted_sigma)

    @property
    def separation_ratio(self) -> float:
        if self.planted_mean == 0.0:
            return 0.0
        return abs(self.planted_mean) / max(self.null_sigma, self.planted_sigma)


@dataclass(frozen=True)
class PowerReport:
    trials: int
    type1_rate: float
    type2_rate: float
    threshold: float
    separation_ratio: float
    null_values: tuple[int, ...] | None = None
    planted_values: tuple[int, ...] | None = None


def estimate_variance_mc(m: SbmModel, h: gr.PatternGraph, n: int,
                         trials: int, stream: SeededStream) -> float:
    vals = np.array([
        ct.signed_count(sample_sbm(m, n, stream.substream(t)), h)
        for t in range(trials)
    ], dtype=float)
    return float(np.var(vals, ddof=1))


def build_test(m: SbmModel, h: gr.PatternGraph, n: int,
               variance_mode: str = "auto", trials: int = 400,
               stream: SeededStream | None = None,
               pair_budget: int = 10 ** 9) -> TestSpec:
    """Assemble a test instance.

    The planted variance is exact pair-enumeration when the overlapping
    copy-pair count fits the budget ("auto"/"exact"), otherwise a
    Monte-Carlo estimate on 2x the requested trials; ``variance_exact``
    records which was used.
    """
    if n < h.n:
        raise ValueError(f"host size {n} below shape size {h.n}")
    copies = gr.copies_in_complete(h, n)
    mean = fr.planted_mean_sc(m, h, n)
    exact = variance_mode in ("auto", "exact")
    if exact:
        try:
            var = fr.planted_variance_sc(m, h, n, budget=pair_budget)
        except fr.BudgetExceeded:
            if variance_mode == "exact":
                raise
            exact = False
    if not exact:
        if stream is None:
            raise ValueError("Monte-Carlo variance needs a stream")
        var = estimate_variance_mc(m, h, n, 2 * trials, stream.substream(0))
    var = max(var, 0.0)
    return TestSpec(
        h=h, n=n, model=m,
        null_sigma=math.sqrt(copies),
        planted_mean=mean,
        planted_sigma=math.sqrt(var),
        variance_exact=exact,
    )


def estimate_power(spec: TestSpec, trials: int, stream: SeededStream,
                   collect: bool = False) -> PowerReport:
    """Empirical error rates over `trials` null and `trials` planted samples.

    A sample is called planted when sign(planted_mean) * count reaches the
    threshold.  A zero planted mean abstains: everything is called null.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    sgn = 1.0 if spec.planted_mean >= 0 else -1.0
    tau = spec.threshold
    null_vals, planted_vals = [], []
    false_pos = false_neg = 0
    for t in range(trials):
        g0 = sample_er(spec.n, stream.substream(2 * t))
        v0 = ct.signed_count(g0, spec.h)
        null_vals.append(v0)
        g1 = sample_sbm(spec.model, spec.n, stream.substream(2 * t + 1))
        v1 = ct.signed_count(g1, spec.h)
        planted_vals.append(v1)
        if spec.planted_mean != 0.0:
            if sgn * v0 >= tau:
                false_pos += 1
            if sgn * v1 < tau:
                false_neg += 1
        else:
            false_neg += 1  # abstaining test never flags planted
    return PowerReport(
        trials=trials,
        type1_rate=false_pos / trials,
        type2_rate=false_neg / trials,
        threshold=tau,
        separation_ratio=spec.separation_ratio,
        null_values=tuple(null_vals) if collect else None,
        planted_values=tuple(planted_vals) if collect else None,
    )


def estimate_phi_mc(m: SbmModel, h: gr.PatternGraph, samples: int,
                    stream: SeededStream) -> tuple[float, float]:
    """Unbiased Monte-Carlo estimate of the coefficient of h.

    Draws labels for |V(h)| vertices and only the needed edges, averaging
    the sign product; returns (mean, standard error).
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    rng = stream.generator()
    labels = rng.choice(m.k, size=(samples, h.n), p=m.p)
    prod = np.ones(samples)
    for u, v in h.edges:
        prob = (1.0 + m.Q[labels[:, u], labels[:, v]]) / 2.0
        signs = np.where(rng.random(samples) < prob, 1.0, -1.0)
        prod *= signs
    mean = float(prod.mean())
    stderr = float(prod.std(ddof=1) / math.sqrt(samples))
    return mean, stderr
