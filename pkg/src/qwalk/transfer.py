"""Perfect state transfer certificates, Q-graph no-PST verdicts and pretty-good-transfer time search."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy.optimize import minimize_scalar

from . import arithmetic as ar
from .errors import PreconditionError
from .graph_core import Graph, is_connected, regularity, signless_laplacian
from .spectra import (
    COSPECTRAL_TOL,
    SUPPORT_TOL,
    SpectralDecomposition,
    decompose,
    strong_cospectrality,
    support,
)
from .walk import amplitude, qgraph_amplitude

__all__ = [
    "PSTCertificate",
    "PGSTWitness",
    "PGSTFailure",
    "QGraphVerdict",
    "certify_pst",
    "qgraph_no_pst_verdict",
    "search_pgst_time",
    "diophantine_residuals",
]

NOT_STRONGLY_COSPECTRAL = "not_strongly_cospectral"
MIXED_INTEGRALITY = "mixed_integrality"
PARITY_CONDITION_FAILED = "parity_condition_failed"
TRIVIAL_SUPPORT = "trivial_support"

NO_PST_ANYWHERE = "NO_PST_ANYWHERE"
NO_PST_FROM_VERTICES = "NO_PST_FROM_VERTICES"
UNDECIDED = "UNDECIDED_BY_THEOREM"

FIDELITY_HIT = 1e-9


def _cplx(z: complex | None):
    return None if z is None else [float(z.real), float(z.imag)]


@dataclass(frozen=True)
class PSTCertificate:
    """Outcome of the perfect-state-transfer test between ``u`` and ``v``.

    When ``holds``: the first transfer time is ``tau0 = pi / (g sqrt(delta))``, transfer recurs
    at odd multiples of ``tau0`` and ``phase = exp(-i tau0 q0)``.
    """

    u: int
    v: int
    holds: bool
    failure_reason: str | None = None
    delta: int | None = None
    g: int | None = None
    tau0: float | None = None
    phase: complex | None = None
    q0: float | None = None
    support: tuple[float, ...] = ()
    S_plus: tuple[float, ...] = ()
    S_minus: tuple[float, ...] = ()
    forms: dict[float, ar.QuadraticForm] = field(default_factory=dict, repr=False)
    amplitude_at_tau0: complex | None = None
    tolerances: dict[str, float] = field(default_factory=dict, repr=False)

    @property
    def fidelity_at_tau0(self) -> float | None:
        return None if self.amplitude_at_tau0 is None else abs(self.amplitude_at_tau0) ** 2

    def to_dict(self) -> dict:
        return {
            "u": self.u,
            "v": self.v,
            "holds": self.holds,
            "failure_reason": self.failure_reason,
            "delta": self.delta,
            "g": self.g,
            "tau0": self.tau0,
            "phase": _cplx(self.phase),
            "q0": self.q0,
            "support": list(self.support),
            "S_plus": [q for q in self.S_plus if q in self.support],
            "S_minus": [q for q in self.S_minus if q in self.support],
            "amplitude_at_tau0": _cplx(self.amplitude_at_tau0),
            "fidelity_at_tau0": self.fidelity_at_tau0,
            "tolerances": dict(self.tolerances),
        }


def _support_forms(values, snapped, tol) -> tuple[int, dict] | None:
    """Common ``(delta, {q: form})`` writing every ``q`` as ``(a + b_q sqrt(delta))/2`` with one ``a``."""
    ints = [q for q, s in zip(values, snapped) if s]
    irr = sorted((q for q, s in zip(values, snapped) if not s), reverse=True)
    if not irr:
        return 1, {q: ar.QuadraticForm(int(round(2 * q)), 0, 1) for q in ints}
    forms: dict[float, ar.QuadraticForm] = {}
    pending = list(irr)
    while pending:
        q = pending.pop(0)
        for k, p in enumerate(pending):
            pair = ar.recognize_quadratic_pair(q, p, tol)
            if pair is not None and pair.plus.delta > 1:
                forms[q], forms[p] = pair.plus, pair.minus
                del pending[k]
                break
        else:
            return None
    a_vals = {f.a for f in forms.values()}
    deltas = {f.delta for f in forms.values()}
    if len(a_vals) != 1 or len(deltas) != 1:
        return None
    a, delta = a_vals.pop(), deltas.pop()
    for q in ints:
        if int(round(2 * q)) != a:
            return None
        forms[q] = ar.QuadraticForm(a, 0, 1)
    if not all(f.is_algebraic_integer for f in forms.values()):
        return None
    return delta, forms


def certify_pst(
    sd: SpectralDecomposition,
    u: int,
    v: int,
    *,
    support_tol: float = SUPPORT_TOL,
    cospectral_tol: float = COSPECTRAL_TOL,
    integer_tol: float = ar.INTEGER_TOL,
) -> PSTCertificate:
    """Decide perfect state transfer between ``u`` and ``v`` from a spectral decomposition.

    The three conditions are checked in order: strong cospectrality; every supported
    eigenvalue of the form ``(a + b_q sqrt(delta))/2`` with common ``a`` and ``delta`` (plain
    integers when ``delta = 1``); and, with ``g`` the gcd of ``(q0 - q)/sqrt(delta)``,
    ``q`` in S+ exactly when ``(q0 - q)/(g sqrt(delta))`` is even. Failures are verdicts.
    """
    tols = {"support_tol": support_tol, "cospectral_tol": cospectral_tol, "integer_tol": integer_tol}
    report = strong_cospectrality(sd, u, v, cospectral_tol)
    supp = support(sd, u, support_tol)
    common = dict(u=u, v=v, support=supp.eigenvalues, S_plus=report.S_plus, S_minus=report.S_minus, tolerances=tols)
    if not report.strongly_cospectral:
        return PSTCertificate(holds=False, failure_reason=NOT_STRONGLY_COSPECTRAL, **common)
    if len(supp.eigenvalues) < 2:
        return PSTCertificate(holds=False, failure_reason=TRIVIAL_SUPPORT, **common)

    snapped = [sd.snapped[i] if sd.snapped else False for i in supp.indices]
    recognised = _support_forms(supp.eigenvalues, snapped, integer_tol)
    if recognised is None:
        return PSTCertificate(holds=False, failure_reason=MIXED_INTEGRALITY, **common)
    delta, forms = recognised
    q0 = max(supp.eigenvalues)
    common.update(delta=delta, q0=q0, forms=forms)

    # (q0 - q)/sqrt(delta) = (b_q0 - b_q)/2 for delta > 1 and q0 - q for delta = 1
    if delta == 1:
        diffs = {q: (forms[q0].a - forms[q].a) // 2 for q in supp.eigenvalues}
    else:
        halves = {q: forms[q0].b - forms[q].b for q in supp.eigenvalues}
        if any(h % 2 for h in halves.values()):
            return PSTCertificate(holds=False, failure_reason=PARITY_CONDITION_FAILED, **common)
        diffs = {q: h // 2 for q, h in halves.items()}
    g = reduce(math.gcd, (abs(k) for k in diffs.values() if k))
    common["g"] = g
    plus = set(report.S_plus)
    if any(((diffs[q] // g) % 2 == 0) != (q in plus) for q in supp.eigenvalues):
        return PSTCertificate(holds=False, failure_reason=PARITY_CONDITION_FAILED, **common)

    tau0 = math.pi / (g * math.sqrt(delta))
    phase = complex(np.exp(-1j * tau0 * q0))
    amp = amplitude(sd, u, v, tau0)
    return PSTCertificate(holds=True, tau0=tau0, phase=phase, amplitude_at_tau0=amp, **common)


# ---------------------------------------------------------------------------
# Q-graph verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QGraphVerdict:
    verdict: str
    reason: str
    per_vertex: dict[int, str]
    scans: dict[tuple[int, int], float]  # pair -> max sampled |amplitude|**2 on the Q-graph
    t_max: float
    step: float

    @property
    def contradicted(self) -> bool:
        return self.verdict != UNDECIDED and any(f >= 1 - FIDELITY_HIT for f in self.scans.values())

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "per_vertex": {str(k): v for k, v in sorted(self.per_vertex.items())},
            "scan": {
                "t_max": self.t_max,
                "step": self.step,
                "conclusive": False,
                "max_fidelity": {f"{a}-{b}": f for (a, b), f in sorted(self.scans.items())},
                "contradicted": self.contradicted,
            },
        }


def _regular_info(g: Graph):
    info = regularity(g)
    if not info.is_regular:
        raise PreconditionError("graph is not regular")
    if not is_connected(g):
        raise PreconditionError("graph is not connected")
    if info.degree < 2 or g.n < 2:
        raise PreconditionError("need degree >= 2")
    return info


def qgraph_no_pst_verdict(
    g: Graph,
    base: SpectralDecomposition | None = None,
    pairs=None,
    t_max: float = 50.0,
    step: float = 1e-3,
    support_tol: float = SUPPORT_TOL,
) -> QGraphVerdict:
    """Rule out perfect state transfer in the Q-graph of a regular graph from base integrality.

    All base eigenvalues integral rules out transfer anywhere in the Q-graph; an integral
    support at ``u`` rules it out from ``u``. Anything else is left undecided. Each verdict
    carries a sampled scan of the listed original-vertex ``pairs`` (default ``(0, v)`` for all
    ``v``); a scan can contradict but never prove a verdict.
    """
    _regular_info(g)
    if base is None:
        base = decompose(signless_laplacian(g))
    per_vertex: dict[int, str] = {}
    if base.all_integral:
        verdict = NO_PST_ANYWHERE
        reason = "every signless Laplacian eigenvalue of the base graph is an integer"
        per_vertex = {x: f"NO_PST_FROM_{x}" for x in range(g.n)}
    else:
        for x in range(g.n):
            s = support(base, x, support_tol)
            integral = all(base.snapped[i] for i in s.indices)
            per_vertex[x] = f"NO_PST_FROM_{x}" if integral else UNDECIDED
        if any(val != UNDECIDED for val in per_vertex.values()):
            verdict = NO_PST_FROM_VERTICES
            reason = "these base vertices have an all-integer eigenvalue support"
        else:
            verdict = UNDECIDED
            reason = "no base vertex has an all-integer eigenvalue support"
    if pairs is None:
        pairs = [(0, x) for x in range(1, g.n)]
    times = np.arange(int(math.floor(t_max / step + 1e-9)) + 1) * step
    scans = {}
    for a, b in pairs:
        amp = qgraph_amplitude(g, base, a, b, times)
        scans[(a, b)] = float((np.abs(amp) ** 2).max())
    return QGraphVerdict(verdict, reason, per_vertex, scans, t_max, step)


# ---------------------------------------------------------------------------
# pretty good state transfer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PGSTWitness:
    """A time ``t_star = (4 alpha + 2/g) pi`` at which the Q-graph walk nearly transfers ``u`` to ``v``."""

    u: int
    v: int
    t_star: float
    fidelity: float  # |amplitude| at t_star
    alpha: int
    g: int
    per_eigenvalue_errors: dict[float, float]
    c: dict[float, int]
    b: dict[float, int]
    residual: float  # max of per_eigenvalue_errors
    best_residual: float  # smallest residual over the whole sweep
    alpha_max: int
    r_divisible_by_g: bool
    bipartite: bool
    refined_time: float
    refined_fidelity: float
    epsilon: float

    @property
    def meets_threshold(self) -> bool:
        return self.fidelity > 1 - self.epsilon

    def to_dict(self) -> dict:
        return {
            "u": self.u,
            "v": self.v,
            "t_star": self.t_star,
            "modulus": self.fidelity,
            "fidelity_squared": self.fidelity**2,
            "alpha": self.alpha,
            "g": self.g,
            "per_eigenvalue_errors": {repr(q): e for q, e in self.per_eigenvalue_errors.items()},
            "c": {repr(q): k for q, k in self.c.items()},
            "b": {repr(q): k for q, k in self.b.items()},
            "residual": self.residual,
            "best_residual": self.best_residual,
            "alpha_max": self.alpha_max,
            "r_divisible_by_g": self.r_divisible_by_g,
            "bipartite": self.bipartite,
            "refined_time": self.refined_time,
            "refined_modulus": self.refined_fidelity,
            "epsilon": self.epsilon,
            "meets_threshold": self.meets_threshold,
        }


@dataclass(frozen=True)
class PGSTFailure:
    """No swept ``alpha`` reached ``|amplitude| > 1 - epsilon``; ``best`` is the closest candidate."""

    best: PGSTWitness
    epsilon: float
    reason: str

    def to_dict(self) -> dict:
        return {"found": False, "reason": self.reason, "epsilon": self.epsilon, "best": self.best.to_dict()}


def diophantine_residuals(alphas: np.ndarray, roots: np.ndarray, g: int) -> np.ndarray:
    """Distance of ``alpha sqrt(b) + sqrt(b)/(2g)`` to the nearest integer, maximised over the roots."""
    x = np.multiply.outer(alphas.astype(float), roots) + roots / (2 * g)
    return np.abs(x - np.rint(x)).max(axis=1)


def _sweep(roots: np.ndarray, g: int, alpha_max: int, workers: int, chunk: int = 1 << 18) -> np.ndarray:
    starts = list(range(1, alpha_max + 1, chunk))

    def part(s):
        return diophantine_residuals(np.arange(s, min(s + chunk, alpha_max + 1)), roots, g)

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pieces = list(pool.map(part, starts))
    else:
        pieces = [part(s) for s in starts]
    return np.concatenate(pieces)


def search_pgst_time(
    g: Graph,
    u: int,
    v: int,
    epsilon: float = 0.01,
    alpha_max: int = 10**6,
    *,
    base: SpectralDecomposition | None = None,
    workers: int = 1,
    support_tol: float = SUPPORT_TOL,
) -> PGSTWitness | PGSTFailure:
    """Look for a near-perfect transfer time between original vertices of the Q-graph of ``g``.

    ``g`` must have perfect state transfer between ``u`` and ``v``. For each nonzero supported
    base eigenvalue ``q_j`` write ``(q_j + r - 2)**2 + 4 q_j = a_j**2 b_j`` with ``b_j`` square-free;
    the sweep over ``alpha = 1..alpha_max`` scores how close every ``alpha sqrt(b_j) + sqrt(b_j)/(2g)``
    is to an integer ``c_j``. At ``t = (4 alpha + 2/g) pi`` each pair then rotates by nearly a full
    turn and the walk inherits the base graph's transfer.

    Among the ``alpha`` that set a new best score during the sweep, the one with the largest
    ``|amplitude|`` is returned (smallest ``alpha`` on ties), so the result can only improve as
    ``alpha_max`` grows.

    Raises
    ------
    PreconditionError
        If ``g`` lacks perfect state transfer between ``u`` and ``v``, or ``g`` is bipartite and
        its degree is not divisible by ``g``.
    """
    info = _regular_info(g)
    if alpha_max < 1:
        raise PreconditionError("alpha_max must be at least 1")
    if base is None:
        base = decompose(signless_laplacian(g))
    cert = certify_pst(base, u, v, support_tol=support_tol)
    if not cert.holds:
        raise PreconditionError(f"base graph has no perfect state transfer between {u} and {v} ({cert.failure_reason})")
    if cert.delta != 1:
        raise PreconditionError("base transfer with an irrational support is outside this construction")
    r, gg = info.degree, cert.g
    divisible = r % gg == 0
    if info.is_bipartite and not divisible:
        raise PreconditionError(f"bipartite base graph needs its degree {r} divisible by g={gg}")

    qs = [q for q in cert.support if q != 0]
    b_of = {q: ar.squarefree_decompose(int(round((q + r - 2) ** 2 + 4 * q)))[1] for q in qs}
    distinct_b = sorted(set(b_of.values()))
    roots = np.sqrt(np.array(distinct_b, dtype=float))

    scores = _sweep(roots, gg, alpha_max, max(1, workers))
    running = np.minimum.accumulate(scores)
    records = np.flatnonzero(np.r_[True, running[1:] < running[:-1]])

    def fidelity_at(alpha: int) -> float:
        t = (4 * alpha + 2 / gg) * math.pi
        return abs(qgraph_amplitude(g, base, u, v, t))

    best_alpha, best_fid = None, -1.0
    for idx in records:
        alpha = int(idx) + 1
        fid = fidelity_at(alpha)
        if fid > best_fid:
            best_alpha, best_fid = alpha, fid

    alpha = best_alpha
    t_star = (4 * alpha + 2 / gg) * math.pi
    errs, cs = {}, {}
    for q in qs:
        sb = math.sqrt(b_of[q])
        x = alpha * sb + sb / (2 * gg)
        cs[q] = int(round(x))
        errs[q] = abs(x - cs[q])

    top = max(qs) if qs else 1.0
    half_width = 0.25 / (3 * r + top)
    res = minimize_scalar(
        lambda t: -abs(qgraph_amplitude(g, base, u, v, t)),
        bounds=(t_star - half_width, t_star + half_width),
        method="bounded",
        options={"xatol": 1e-10 * t_star},
    )
    refined_t, refined_f = (float(res.x), float(-res.fun)) if -res.fun > best_fid else (t_star, best_fid)

    witness = PGSTWitness(
        u=u,
        v=v,
        t_star=t_star,
        fidelity=best_fid,
        alpha=alpha,
        g=gg,
        per_eigenvalue_errors=errs,
        c=cs,
        b=b_of,
        residual=float(scores[alpha - 1]),
        best_residual=float(running[-1]),
        alpha_max=alpha_max,
        r_divisible_by_g=divisible,
        bipartite=info.is_bipartite,
        refined_time=refined_t,
        refined_fidelity=refined_f,
        epsilon=epsilon,
    )
    if witness.meets_threshold:
        return witness
    return PGSTFailure(witness, epsilon, f"no alpha <= {alpha_max} reached |amplitude| > {1 - epsilon}")
