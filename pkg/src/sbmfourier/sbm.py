"""Stochastic block model parameters, family classification, and generators.

A model is a community probability vector p and a symmetric interaction
matrix Q with entries in [-1, 1]; conditioned on labels x, edge (i, j)
appears independently with probability (1 + Q[x_i, x_j]) / 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .streams import SeededStream

_P_SUM_TOL = 1e-12
_SYM_TOL = 1e-12
UNBIASED_TOL = 1e-10


class ModelError(ValueError):
    """Invalid model parameters."""


@dataclass(frozen=True)
class SbmModel:
    p: np.ndarray
    Q: np.ndarray

    @property
    def k(self) -> int:
        return len(self.p)

    def to_json(self) -> dict:
        return {"p": self.p.tolist(), "Q": self.Q.tolist()}

    @staticmethod
    def from_json(obj: dict) -> "SbmModel":
        return make_sbm(obj["p"], obj["Q"])


def make_sbm(p, Q) -> SbmModel:
    """Validate and freeze model parameters.

    Q is symmetrized by averaging when the asymmetry is within rounding
    (1e-12), rejected otherwise.
    """
    p = np.asarray(p, dtype=float).copy()
    Q = np.asarray(Q, dtype=float).copy()
    if p.ndim != 1 or len(p) < 1:
        raise ModelError("p must be a non-empty vector")
    k = len(p)
    if Q.shape != (k, k):
        raise ModelError(f"Q must be {k}x{k}, got {Q.shape}")
    if np.any(p <= 0):
        raise ModelError("community probabilities must be positive")
    if abs(p.sum() - 1.0) > _P_SUM_TOL:
        raise ModelError(f"p sums to {p.sum()!r}, not 1")
    if np.max(np.abs(Q - Q.T)) > _SYM_TOL:
        raise ModelError("Q is not symmetric")
    Q = (Q + Q.T) / 2.0
    if np.max(np.abs(Q)) > 1.0 + 1e-15:
        raise ModelError("Q entries must lie in [-1, 1]")
    np.clip(Q, -1.0, 1.0, out=Q)
    p.setflags(write=False)
    Q.setflags(write=False)
    return SbmModel(p=p, Q=Q)


def erdos_renyi_model() -> SbmModel:
    """The k=1, Q=0 model: every edge appears with probability 1/2."""
    return make_sbm([1.0], [[0.0]])


@dataclass(frozen=True)
class FamilyTags:
    is_diagonal: bool
    is_nonnegative: bool
    nonvanishing_c: float
    is_two_community: bool
    is_fully_unbiased: bool


def community_row_means(m: SbmModel) -> np.ndarray:
    """Per-community p-weighted interaction means: lam[x] = sum_y p_y Q[x, y]."""
    return m.Q @ m.p


def classify(m: SbmModel, tol: float = UNBIASED_TOL) -> FamilyTags:
    if tol < 0:
        raise ModelError("tolerance must be non-negative")
    off = m.Q - np.diag(np.diag(m.Q))
    return FamilyTags(
        is_diagonal=bool(np.max(np.abs(off), initial=0.0) <= tol),
        is_nonnegative=bool(np.min(m.Q) >= -tol),
        nonvanishing_c=float(np.min(m.p)),
        is_two_community=m.k == 2,
        is_fully_unbiased=bool(np.max(np.abs(community_row_means(m))) <= tol),
    )


def abs_model(m: SbmModel) -> SbmModel:
    """Same p, entrywise |Q|."""
    return make_sbm(m.p, np.abs(m.Q))


RANDOM_FAMILIES = ("diagonal", "nonnegative", "nonvanishing", "two_community",
                   "arbitrary")


def random_sbm(family: str, k: int, n_context: int, stream: SeededStream,
               c: float | None = None, spike_alpha: float | None = None) -> SbmModel:
    """Draw a random model within the named family constraint.

    Q magnitudes are log-uniform over [1/n_context, 1] with independent
    random signs so that polynomially small interaction scales are probed;
    p comes from a flat Dirichlet unless the family or ``spike_alpha``
    dictates otherwise.  Identical arguments give bit-identical models.
    """
    if family not in RANDOM_FAMILIES:
        raise ModelError(f"unknown family {family!r}")
    if not 1 <= k <= 8:
        raise ModelError("community count must be in [1, 8]")
    if family == "nonvanishing":
        if c is None or not 0 < c:
            raise ModelError("nonvanishing family needs c > 0")
        if c * k > 1:
            raise ModelError(f"nonvanishing c={c} infeasible for k={k}")
    if family == "two_community" and k != 2:
        raise ModelError("two_community family requires k = 2")
    rng = stream.generator()

    if family == "nonvanishing":
        w = rng.dirichlet(np.ones(k))
        p = c * np.ones(k) + (1 - k * c) * w
    elif family == "two_community":
        lo = max(n_context, 2) ** -0.9
        p1 = float(np.exp(rng.uniform(np.log(lo), np.log(0.5))))
        p = np.array([p1, 1 - p1])
    elif spike_alpha is not None:
        spike = max(n_context, 2) ** -spike_alpha
        rest = rng.dirichlet(np.ones(k - 1)) if k > 1 else np.array([])
        p = np.concatenate([[spike], (1 - spike) * rest]) if k > 1 else np.array([1.0])
    else:
        p = rng.dirichlet(np.ones(k))
        p = np.maximum(p, 1e-9)
    p = p / p.sum()

    lo = 1.0 / max(n_context, 2)
    iu = np.triu_indices(k)
    mags = np.exp(rng.uniform(np.log(lo), 0.0, size=len(iu[0])))
    signs = rng.integers(0, 2, size=len(iu[0])) * 2 - 1
    Q = np.zeros((k, k))
    Q[iu] = mags * signs
    Q = Q + np.triu(Q, 1).T
    if family == "nonnegative":
        Q = np.abs(Q)
    elif family == "diagonal":
        Q = np.diag(np.diag(Q))
    return make_sbm(p, Q)


# --- named example constructions ---

@dataclass(frozen=True)
class ExampleFamily:
    """A named model construction with its parameters."""
    name: str
    params: tuple[tuple[str, float], ...] = field(default_factory=tuple)

    def get(self, key: str, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default


EXAMPLE_FAMILIES = ("diag_pm1", "star1_dominant", "star2_dominant", "large_star",
                    "quiet_4cycle", "planted_coloring", "one_to_one_gap_1",
                    "one_to_one_gap_2")


def example(name: str, **params) -> ExampleFamily:
    if name not in EXAMPLE_FAMILIES:
        raise ModelError(f"unknown example family {name!r}")
    return ExampleFamily(name, tuple(sorted(params.items())))


def quiet_interaction(q: int) -> np.ndarray:
    """Interaction matrix on labels [q] x [q] whose sign flips under the
    coordinate-swap relabeling (a, b) -> (b, a).

    Q[(a1,b1),(a2,b2)] is +1 when a1 == a2 and b1 != b2, -1 when
    b1 == b2 and a1 != a2, else 0; labels are flattened a-major.  The
    spectrum of Q is +/-q with multiplicity q-1 each.
    """
    eye = np.eye(q)
    ring = np.ones((q, q)) - eye
    return np.kron(eye, ring) - np.kron(ring, eye)


def construct_example(f: ExampleFamily) -> SbmModel:
    """Build the exact model for a named construction.

    Ranges mirror the regimes in which each family's dominance claims
    hold: star1_dominant needs beta in (3/4, 1), star2_dominant beta in
    (2/3, 3/4), large_star D >= 3, quiet_4cycle q in [3, 32], and
    planted_coloring k >= 2 (directly or as round(n^alpha)).
    """
    name = f.name
    if name in ("diag_pm1", "one_to_one_gap_1"):
        return make_sbm([0.5, 0.5], [[1.0, -1.0], [-1.0, 1.0]])
    if name == "star1_dominant":
        n, beta = f.get("n"), f.get("beta")
        if n is None or beta is None or not 0.75 < beta < 1:
            raise ModelError("star1_dominant needs n and beta in (3/4, 1)")
        a = float(n) ** -beta
        return make_sbm([0.5, 0.5], [[a, 0.0], [0.0, a]])
    if name == "star2_dominant":
        n, beta = f.get("n"), f.get("beta")
        if n is None or beta is None or not 2 / 3 < beta < 0.75:
            raise ModelError("star2_dominant needs n and beta in (2/3, 3/4)")
        a = float(n) ** -beta
        return make_sbm([0.5, 0.5], [[a, 0.0], [0.0, -a]])
    if name == "large_star":
        n, D = f.get("n"), f.get("D")
        if n is None or D is None or D < 3:
            raise ModelError("large_star needs n and integer D >= 3")
        D = int(D)
        alpha = 0.75
        beta = (2 * D - 1) / (4 * D) - 1 / (8 * D * (D - 1))
        p1 = float(n) ** -alpha
        b = float(n) ** -beta
        return make_sbm([p1, 1 - p1], [[0.0, b], [b, 0.0]])
    if name == "quiet_4cycle":
        q = f.get("q")
        if q is None or not 3 <= q <= 32:
            raise ModelError("quiet_4cycle needs q in [3, 32]")
        q = int(q)
        k = q * q
        return make_sbm(np.full(k, 1.0 / k), quiet_interaction(q))
    if name == "planted_coloring":
        k = f.get("k")
        if k is None:
            n, alpha = f.get("n"), f.get("alpha")
            if n is None or alpha is None:
                raise ModelError("planted_coloring needs k or (n, alpha)")
            k = round(float(n) ** alpha)
        k = int(k)
        if k < 2:
            raise ModelError("planted_coloring needs k >= 2")
        Q = -np.full((k, k), 1.0 / (k - 1))
        np.fill_diagonal(Q, 1.0)
        return make_sbm(np.full(k, 1.0 / k), Q)
    if name == "one_to_one_gap_2":
        n, alpha = f.get("n"), f.get("alpha")
        if n is None or alpha is None or not 0 < alpha < 1:
            raise ModelError("one_to_one_gap_2 needs n and alpha in (0, 1)")
        p1 = float(n) ** -alpha
        return make_sbm([p1, 1 - p1], [[0.0, 1.0], [1.0, 0.0]])
    raise ModelError(f"unknown example family {name!r}")
