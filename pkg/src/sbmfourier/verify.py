"""Numerical checks of the comparison inequalities, plus falsification search.

Each check evaluates one family-level inequality over supplied or randomly
generated models and a catalog of connected shapes.  Inequalities whose
derivations carry constant 1 are asserted with tiny slack; the two
families with unspecified comparison constants use bounds pinned from a
committed-seed search (observed worst ratio times a 2x safety factor), so
any regression past the pin fails loudly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fourier as fr
from . import graphs as gr
from .sbm import SbmModel, classify, make_sbm, random_sbm
from .streams import SeededStream

DEGENERATE_PSI = 1e-9
REL_SLACK = 1e-10
ABS_SLACK = 1e-12

# The two families whose comparison constants are not explicit get bounds
# pinned from a committed falsification run (seed 3, 1000 models, dmax 6,
# c = 0.2), at twice the observed worst ratio.  Observed: nonvanishing
# 1.1750294645918622, two_community 1.0.  Exceeding a pin means either a
# regression or a counterexample candidate; both deserve investigation.
COMMITTED_SEED = 3
COMMITTED_TRIALS = 1000
COMMITTED_WORST = {
    "nonvanishing": 1.1750294645918622,
    "two_community": 1.0,
}
PINNED_BOUNDS = {
    "nonvanishing": 2 * COMMITTED_WORST["nonvanishing"],
    "two_community": 2 * COMMITTED_WORST["two_community"],
}


@dataclass(frozen=True)
class VerifyReport:
    theorem: str
    trials: int
    violations: int
    worst_ratio: float
    worst_witness: tuple[SbmModel, gr.PatternGraph] | None
    constant_bound_used: float
    trial_ratios: tuple[float, ...] | None = None


def _group_by_k(models):
    groups: dict[int, list[int]] = {}
    for i, m in enumerate(models):
        groups.setdefault(m.k, []).append(i)
    out = {}
    for k, idx in groups.items():
        P = np.stack([models[i].p for i in idx])
        Q = np.stack([models[i].Q for i in idx])
        out[k] = (idx, P, Q)
    return out


def _psi_matrix(models, shapes, budget=fr.DEFAULT_BUDGET) -> np.ndarray:
    """psi[model, shape] for every model against every shape."""
    out = np.zeros((len(models), len(shapes)))
    for k, (idx, P, Q) in _group_by_k(models).items():
        for j, h in enumerate(shapes):
            vals = np.abs(fr._phi_batch_arrays(P, Q, h, budget))
            psis = np.zeros_like(vals)
            nz = vals > 0
            psis[nz] = vals[nz] ** (1.0 / h.n)
            out[idx, j] = psis
    return out


def _ratio_report(theorem, models, numerators, denominators, pairs, bound,
                  keep_ratios=False) -> VerifyReport:
    """Reduce a (models x shapes) ratio problem to a report.

    numerators: (B, S) psi values; denominators: (B,) comparison maxima;
    pairs[j] is the shape for column j.  Trials where both sides are
    degenerate are skipped.
    """
    B, S = numerators.shape
    worst = -math.inf
    witness = None
    violations = 0
    trial_ratios = []
    for i in range(B):
        den = denominators[i]
        trial_worst = -math.inf
        for j in range(S):
            num = numerators[i, j]
            if den <= DEGENERATE_PSI:
                if num <= DEGENERATE_PSI:
                    continue
                ratio = math.inf
            else:
                ratio = num / den
            ratio = float(ratio)
            if ratio > trial_worst:
                trial_worst = ratio
            if ratio > worst:
                worst = ratio
                witness = (models[i], pairs[j])
        trial_ratios.append(trial_worst)
        if trial_worst > bound * (1 + REL_SLACK) + ABS_SLACK:
            violations += 1
    return VerifyReport(
        theorem=theorem,
        trials=B,
        violations=violations,
        worst_ratio=worst if worst > -math.inf else 0.0,
        worst_witness=witness,
        constant_bound_used=bound,
        trial_ratios=tuple(trial_ratios) if keep_ratios else None,
    )


def check_diagonal(models, dmax: int = 6, keep_ratios=False) -> VerifyReport:
    """Diagonal models: psi(H) <= max(psi(edge), psi(wedge)) for connected H."""
    for m in models:
        if not classify(m).is_diagonal:
            raise ValueError("check_diagonal requires diagonal models")
    catalog = gr.connected_catalog(dmax)
    num = _psi_matrix(models, catalog)
    den = _psi_matrix(models, [gr.star(1), gr.star(2)]).max(axis=1)
    return _ratio_report("diagonal: psi(H) <= max over {edge, wedge}",
                         models, num, den, catalog, 1.0, keep_ratios)


def check_nonnegative(models, dmax: int = 6, keep_ratios=False) -> VerifyReport:
    """Non-negative models: psi(H) <= max over stars up to dmax edges."""
    for m in models:
        if not classify(m, tol=0.0).is_nonnegative:
            raise ValueError("check_nonnegative requires non-negative models")
    catalog = gr.connected_catalog(dmax)
    stars = [gr.star(t) for t in range(1, dmax + 1)]
    num = _psi_matrix(models, catalog)
    den = _psi_matrix(models, stars).max(axis=1)
    return _ratio_report("nonnegative: psi(H) <= max over stars",
                         models, num, den, catalog, 1.0, keep_ratios)


def cyc4_lower_bound_gap(models) -> np.ndarray:
    """phi(Cyc4) - (min p)^4 max Q^4 per model; the inequality holds for
    every block model, so all gaps must be >= -1e-12."""
    out = np.zeros(len(models))
    for k, (idx, P, Q) in _group_by_k(models).items():
        phi = fr._phi_batch_arrays(P, Q, gr.cycle(4), fr.DEFAULT_BUDGET)
        bound = P.min(axis=1) ** 4 * np.abs(Q).max(axis=(1, 2)) ** 4
        out[idx] = phi - bound
    return out


def check_nonvanishing(models, c: float, dmax: int = 6,
                       keep_ratios=False) -> VerifyReport:
    """Min community probability >= c: the 4-cycle, edge and wedge dominate.

    Also asserts the exact lower bound phi(Cyc4) >= (min p)^4 max Q^4;
    a trial violating it counts as a violation regardless of its ratio.
    """
    for m in models:
        if float(np.min(m.p)) < c - 1e-15:
            raise ValueError("model violates the min-probability precondition")
    catalog = gr.connected_catalog(dmax)
    num = _psi_matrix(models, catalog)
    den = _psi_matrix(models, [gr.cycle(4), gr.star(1), gr.star(2)]).max(axis=1)
    bound = PINNED_BOUNDS["nonvanishing"]
    rep = _ratio_report("nonvanishing: psi(H) <= C * max over {cyc4, edge, wedge}",
                        models, num, den, catalog, bound, keep_ratios)
    bad_lower = int(np.sum(cyc4_lower_bound_gap(models) < -ABS_SLACK))
    if bad_lower:
        rep = VerifyReport(rep.theorem, rep.trials, rep.violations + bad_lower,
                           rep.worst_ratio, rep.worst_witness,
                           rep.constant_bound_used, rep.trial_ratios)
    return rep


def two_community_cyc4_expansion(m: SbmModel) -> float:
    """Six-term closed form of phi(Cyc4) for k = 2."""
    p1, p2 = m.p
    q11, q12, q22 = m.Q[0, 0], m.Q[0, 1], m.Q[1, 1]
    return (p1 ** 4 * q11 ** 4
            + 4 * p1 ** 3 * p2 * q11 ** 2 * q12 ** 2
            + 4 * p1 ** 2 * p2 ** 2 * q11 * q12 ** 2 * q22
            + 2 * p1 ** 2 * p2 ** 2 * q12 ** 4
            + 4 * p1 * p2 ** 3 * q12 ** 2 * q22 ** 2
            + p2 ** 4 * q22 ** 4)


SANDWICH_LO = 1.0 / 16.0
SANDWICH_HI = 16.0


def two_community_sandwich_bounds(m: SbmModel) -> tuple[float, float, float]:
    """(phi(Cyc4), lower, upper) where, with the smaller community first,
    phi is within [M/16, 16M] for M = max(p1^4 Q11^4, p1^2 Q12^4, Q22^4)."""
    if m.p[0] <= m.p[1]:
        p1, p2 = m.p
        q11, q12, q22 = m.Q[0, 0], m.Q[0, 1], m.Q[1, 1]
    else:
        p2, p1 = m.p
        q22, q12, q11 = m.Q[0, 0], m.Q[0, 1], m.Q[1, 1]
    big = max(p1 ** 4 * q11 ** 4, p1 ** 2 * q12 ** 4, q22 ** 4)
    phi = two_community_cyc4_expansion(m)
    return phi, SANDWICH_LO * big, SANDWICH_HI * big


def check_two_community(models, dmax: int = 6, keep_ratios=False) -> VerifyReport:
    """Arbitrary k=2 models: 4-cycles plus stars up to dmax dominate.

    Trials additionally verify the exact 6-term expansion of phi(Cyc4)
    (to 1e-12) and the [M/16, 16M] sandwich; failures count as violations.
    """
    if dmax % 2:
        raise ValueError("dmax must be even")
    for m in models:
        if m.k != 2:
            raise ValueError("check_two_community requires k = 2")
    catalog = gr.connected_catalog(dmax)
    shapes = [gr.cycle(4)] + [gr.star(t) for t in range(1, dmax + 1)]
    num = _psi_matrix(models, catalog)
    den = _psi_matrix(models, shapes).max(axis=1)
    bound = PINNED_BOUNDS["two_community"]
    rep = _ratio_report("two_community: psi(H) <= C * max over {cyc4, stars}",
                        models, num, den, catalog, bound, keep_ratios)
    extra_bad = 0
    for m in models:
        expanded = two_community_cyc4_expansion(m)
        direct = fr.phi_label_sum(m, gr.cycle(4)).phi
        if abs(expanded - direct) > 1e-12 * max(1.0, abs(direct)):
            extra_bad += 1
            continue
        phi, lo, hi = two_community_sandwich_bounds(m)
        if phi < lo - ABS_SLACK or phi > hi + ABS_SLACK:
            extra_bad += 1
    if extra_bad:
        rep = VerifyReport(rep.theorem, rep.trials, rep.violations + extra_bad,
                           rep.worst_ratio, rep.worst_witness,
                           rep.constant_bound_used, rep.trial_ratios)
    return rep


def check_one_to_one(models, dmax: int = 6, keep_ratios=False) -> VerifyReport:
    """Model-independent single-shape comparisons.

    For every model: psi of longer cycles (5..8) never beats the 4-cycle;
    |phi(K4 minus an edge)| <= |phi(Cyc4)|; and any shape with a degree-d
    vertex has |phi| <= |phi(K_{2,d})|^(1/2).
    """
    catalog = gr.connected_catalog(dmax)
    degrees = sorted({gr.profile(h).max_degree for h in catalog})
    k2d = {d: gr.complete_bipartite(2, d) for d in degrees}
    k4m = gr.k4_minus()
    worst = -math.inf
    witness = None
    violations = 0
    trial_ratios = []
    phi_cat = np.zeros((len(models), len(catalog)))
    phi_k2d = {d: np.zeros(len(models)) for d in degrees}
    phi_k4m = np.zeros(len(models))
    for k, (idx, P, Q) in _group_by_k(models).items():
        for j, h in enumerate(catalog):
            phi_cat[idx, j] = fr._phi_batch_arrays(P, Q, h, fr.DEFAULT_BUDGET)
        for d in degrees:
            phi_k2d[d][idx] = fr._phi_batch_arrays(P, Q, k2d[d], fr.DEFAULT_BUDGET)
        phi_k4m[idx] = fr._phi_batch_arrays(P, Q, k4m, fr.DEFAULT_BUDGET)
    for i, m in enumerate(models):
        lam = fr.spectrum(m)
        psi_c = {t: abs(float(np.sum(lam ** t))) ** (1.0 / t) for t in range(4, 9)}
        checks = []
        for t in range(5, 9):
            checks.append((psi_c[t], psi_c[4], gr.cycle(t), 1e-12))
        checks.append((abs(phi_k4m[i]), abs(float(np.sum(lam ** 4))), k4m, 1e-12))
        for j, h in enumerate(catalog):
            d = gr.profile(h).max_degree
            checks.append((abs(phi_cat[i, j]), math.sqrt(abs(phi_k2d[d][i])),
                           h, 1e-10))
        bad = False
        trial_worst = -math.inf
        for num, den, shape, slack in checks:
            if num > den + slack:
                bad = True
            if den <= DEGENERATE_PSI:
                if num <= DEGENERATE_PSI:
                    continue
                ratio = math.inf
            else:
                ratio = float(num / den)
            trial_worst = max(trial_worst, ratio)
            if ratio > worst:
                worst = ratio
                witness = (m, shape)
        violations += bad
        trial_ratios.append(trial_worst)
    return VerifyReport(
        theorem="one_to_one: cycle/k4minus/degree-vertex comparisons",
        trials=len(models),
        violations=violations,
        worst_ratio=worst if worst > -math.inf else 0.0,
        worst_witness=witness,
        constant_bound_used=1.0,
        trial_ratios=tuple(trial_ratios) if keep_ratios else None,
    )


def check_norm_monotone(p, q, grid) -> bool:
    """True iff v -> (sum p_i^v q_i^(v-1))^(1/v) is non-increasing on grid."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(p <= 0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("p must be a probability vector")
    if np.any(q < 0) or np.any(q > 1):
        raise ValueError("q entries must lie in [0, 1]")
    grid = list(grid)
    if any(v < 1 for v in grid) or sorted(grid) != grid:
        raise ValueError("grid must be ascending with v >= 1")
    vals = [float(np.sum(p ** v * q ** (v - 1))) ** (1.0 / v) for v in grid]
    return all(b <= a * (1 + 1e-12) + 1e-300 for a, b in zip(vals, vals[1:]))


FAMILY_KMAX = {"diagonal": 5, "nonnegative": 5, "nonvanishing": 5,
               "two_community": 2, "arbitrary": 5}


def generate_models(family: str, budget_models: int, stream: SeededStream,
                    c: float | None = None, n_context: int = 10 ** 6):
    """Deterministic model batch for a falsification run; community counts
    cycle through the family's allowed range."""
    kmax = FAMILY_KMAX[family]
    models = []
    for t in range(budget_models):
        k = 2 if family == "two_community" else (t % kmax) + 1
        if family == "nonvanishing" and c is not None and k * c > 1:
            k = int(1 / c)
        models.append(random_sbm(family, k, n_context, stream.substream(t), c=c))
    return models


def falsify_search(family: str, dmax: int, budget_models: int,
                   stream: SeededStream, c: float = 0.2,
                   keep_ratios=False) -> VerifyReport:
    """Random sweep recording the worst ratio of psi(H) to the family's
    dominating set.  Exact families assert constant 1; pinned families
    assert the committed bound; the "arbitrary" family only reports
    against the conjectured set {stars, triangle, 4-cycle}."""
    models = generate_models(family, budget_models, stream, c=c)
    if family == "diagonal":
        return check_diagonal(models, dmax, keep_ratios)
    if family == "nonnegative":
        return check_nonnegative(models, dmax, keep_ratios)
    if family == "nonvanishing":
        return check_nonvanishing(models, c, dmax, keep_ratios)
    if family == "two_community":
        return check_two_community(models, dmax, keep_ratios)
    catalog = gr.connected_catalog(dmax)
    shapes = ([gr.star(t) for t in range(1, dmax + 1)]
              + [gr.cycle(3), gr.cycle(4)])
    num = _psi_matrix(models, catalog)
    den = _psi_matrix(models, shapes).max(axis=1)
    return _ratio_report(
        "arbitrary (conjectured set {stars, triangle, cyc4}; report only)",
        models, num, den, catalog, math.inf, keep_ratios)
