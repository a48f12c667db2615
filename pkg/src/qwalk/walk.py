"""Continuous-time quantum walk amplitudes ``e_v^T exp(-itM) e_u`` (hbar = 1, dimensionless time).

Three independent routes:

* :func:`amplitude` sums ``exp(-itq) f_q[v, u]`` over a spectral decomposition;
* :func:`qgraph_amplitude` evaluates the Q-graph amplitude between two original vertices from
  the base graph's decomposition alone, never forming the Q-graph matrix;
* :func:`amplitude_oracle` is a scaled-and-squared Taylor series of the full matrix. It shares
  no code with the other two and is what they are tested against.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InputError, PreconditionError
from .graph_core import Graph, is_connected, regularity, signless_laplacian
from .spectra import SpectralDecomposition, decompose

__all__ = [
    "ScanResult",
    "amplitude",
    "amplitude_oracle",
    "propagator_oracle",
    "qgraph_amplitude",
    "fidelity_scan",
    "default_step",
    "write_scan_csv",
]

TAYLOR_RTOL = 1e-16


@dataclass(frozen=True)
class ScanResult:
    times: np.ndarray = field(repr=False)
    fidelities: np.ndarray = field(repr=False)  # |amplitude|**2
    peak_time: float
    peak_fidelity: float

    @property
    def peak_modulus(self) -> float:
        return math.sqrt(self.peak_fidelity)

    def to_dict(self) -> dict:
        return {
            "samples": int(self.times.size),
            "peak_time": self.peak_time,
            "peak_fidelity": self.peak_fidelity,
            "peak_modulus": self.peak_modulus,
            "max_sample_fidelity": float(self.fidelities.max()),
        }


def _check_vertex(x: int, dim: int) -> None:
    if not 0 <= x < dim:
        raise InputError(f"vertex {x} out of range for dimension {dim}")


def amplitude(sd: SpectralDecomposition, u: int, v: int, t):
    """``sum_i exp(-i t q_i) f_i[v, u]``; ``t`` may be a scalar or an array."""
    _check_vertex(u, sd.dim)
    _check_vertex(v, sd.dim)
    t = np.asarray(t, dtype=float)
    q = np.asarray(sd.eigenvalues, dtype=float)
    w = np.array([f[v, u] for f in sd.projectors])
    out = np.exp(-1j * np.multiply.outer(t, q)) @ w
    return complex(out) if out.ndim == 0 else out


def propagator_oracle(M, t: float) -> np.ndarray:
    """``exp(-itM)`` by scaling and squaring a truncated Taylor series.

    The argument is scaled by ``2**-s`` until its 1-norm is at most 1/2; terms are added until
    one falls below ``1e-16`` of the running sum (in 1-norm).
    """
    M = np.asarray(M, dtype=float)
    X = -1j * float(t) * M
    norm = np.abs(X).sum(axis=0).max() if X.size else 0.0
    s = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    X = X / 2.0**s
    dim = M.shape[0]
    E = np.eye(dim, dtype=complex)
    term = np.eye(dim, dtype=complex)
    k = 0
    while True:
        k += 1
        term = term @ X / k
        E = E + term
        if np.abs(term).sum(axis=0).max() <= TAYLOR_RTOL * np.abs(E).sum(axis=0).max():
            break
    for _ in range(s):
        E = E @ E
    return E


def amplitude_oracle(M, u: int, v: int, t: float) -> complex:
    """Entry ``v`` of ``exp(-itM) e_u`` via :func:`propagator_oracle`."""
    dim = np.asarray(M).shape[0]
    _check_vertex(u, dim)
    _check_vertex(v, dim)
    return complex(propagator_oracle(M, t)[v, u])


def qgraph_amplitude(g: Graph, base_sd: SpectralDecomposition | None, u: int, v: int, t):
    """Amplitude between original vertices ``u`` and ``v`` of the Q-graph of a regular graph.

    With ``s = q + r - 2`` and ``D = sqrt(s**2 + 4q)`` each base eigenvalue ``q`` contributes

        exp(-it(3r - 2 + q)/2) * f_q[v, u] * (cos(D t / 2) + i (s / D) sin(D t / 2)),

    and for bipartite ``g`` the eigenvalue ``0`` contributes ``exp(-itr) f_0[v, u]`` instead.
    Edge-vertices are not covered; use :func:`amplitude` on the Q-graph decomposition for those.
    """
    info = regularity(g)
    if not info.is_regular or not is_connected(g) or info.degree < 2:
        raise PreconditionError("Q-graph amplitude needs a connected regular graph with degree >= 2")
    for x in (u, v):
        if not 0 <= x < g.n:
            raise PreconditionError(f"vertex {x} is not an original vertex (n={g.n})")
    if base_sd is None:
        base_sd = decompose(signless_laplacian(g))
    r = info.degree
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    for q, f in zip(base_sd.eigenvalues, base_sd.projectors):
        w = f[v, u]
        if info.is_bipartite and abs(q) <= 1e-9:
            out += np.exp(-1j * r * t) * w
            continue
        s = q + r - 2
        d = math.sqrt(s * s + 4 * q)
        half = d * t / 2
        out += np.exp(-0.5j * (3 * r - 2 + q) * t) * w * (np.cos(half) + 1j * (s / d) * np.sin(half))
    return complex(out) if out.ndim == 0 else out


def default_step(sd: SpectralDecomposition) -> float:
    qmax = max(abs(q) for q in sd.eigenvalues) or 1.0
    return 1e-3 * 2 * math.pi / qmax


def fidelity_scan(sd, u: int, v: int, t_max: float, step: float | None = None, amplitude_fn=None) -> ScanResult:
    """Sample ``|amplitude|**2`` on ``[0, t_max]`` and refine the best sample.

    The refinement maximises over the two grid cells around the best sample with a bounded
    scalar minimiser, to a time resolution of ``1e-10 * max(1, t)``. ``amplitude_fn`` (a vectorised
    ``t -> amplitude``) overrides the decomposition route, e.g. for :func:`qgraph_amplitude`.
    """
    if amplitude_fn is None:
        if sd is None:
            raise InputError("fidelity_scan needs a decomposition or an amplitude function")

        def amplitude_fn(t):
            return amplitude(sd, u, v, t)

    if step is None:
        step = default_step(sd)
    if step <= 0:
        raise InputError("scan step must be positive")
    if t_max < 0:
        raise InputError("t_max must be non-negative")
    count = int(math.floor(t_max / step + 1e-9)) + 1
    times = np.arange(count) * step
    fids = np.abs(amplitude_fn(times)) ** 2
    best = int(np.argmax(fids))
    peak_t, peak_f = float(times[best]), float(fids[best])
    lo = times[best - 1] if best > 0 else times[best]
    hi = times[best + 1] if best + 1 < count else min(times[best] + step, t_max)
    if hi > lo:
        res = minimize_scalar(
            lambda x: -abs(amplitude_fn(x)) ** 2,
            bounds=(float(lo), float(hi)),
            method="bounded",
            options={"xatol": 1e-10 * max(1.0, peak_t)},
        )
        if -res.fun > peak_f:
            peak_t, peak_f = float(res.x), float(-res.fun)
    return ScanResult(times, fids, peak_t, peak_f)


def write_scan_csv(scan: ScanResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "fidelity"])
        for t, f in zip(scan.times, scan.fidelities):
            writer.writerow([repr(float(t)), repr(float(f))])
