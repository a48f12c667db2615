"""Closed-form signless-Laplacian spectrum and eigenprojectors of the Q-graph of a regular graph.

For an ``r``-regular connected graph ``G`` with ``r >= 2`` and base eigenvalue ``q`` the Q-graph
has the pair

    q_pm = (3r + q - 2 +- sqrt((q + r - 2)**2 + 4q)) / 2,

each with the multiplicity of ``q``, plus ``2r - 2`` on the null space of the incidence matrix.
When ``G`` is bipartite its eigenvalue ``0`` contributes only ``r`` (the other root coincides
with ``2r - 2``). Projectors are assembled from the base projectors and the incidence matrix,
never from eigenvectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .errors import PreconditionError
from .graph_core import Graph, incidence, is_connected, q_graph, regularity, signless_laplacian
from .spectra import SNAP_TOL, SpectralDecomposition, decompose

__all__ = [
    "Entry",
    "QGraphSpectrum",
    "qpm",
    "pair_gap",
    "kernel_basis",
    "closed_form_spectrum",
    "edge_support_check",
    "merged_values",
]

KERNEL_RTOL = 1e-10


@dataclass(frozen=True)
class Entry:
    value: float
    multiplicity: int
    kind: str  # "plus", "minus", "kernel" or "bipartite_r"
    base_index: int | None
    projector: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class QGraphSpectrum:
    r: int
    n: int
    m: int
    bipartite: bool
    base: SpectralDecomposition
    entries: tuple[Entry, ...]
    kernel_basis: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.n + self.m

    @property
    def raw_values(self) -> np.ndarray:
        vals = np.concatenate([np.full(e.multiplicity, e.value) for e in self.entries])
        return np.sort(vals)[::-1]

    def as_decomposition(self, merge_tol: float = 1e-9) -> SpectralDecomposition:
        """Merge entries whose values coincide (e.g. ``r == 2r - 2`` at ``r = 2``) into one decomposition."""
        groups = merged_values(self, merge_tol)
        values, snaps = [], []
        for v, _, _ in groups:
            near = round(v)
            snaps.append(abs(v - near) <= SNAP_TOL)
            values.append(float(near) if snaps[-1] else v)
        return SpectralDecomposition(
            self.dim,
            tuple(values),
            tuple(k for _, k, _ in groups),
            tuple(p for _, _, p in groups),
            tuple(snaps),
        )

    def to_dict(self, include_projectors: bool = False) -> dict:
        out = {
            "r": self.r,
            "n": self.n,
            "m": self.m,
            "bipartite": self.bipartite,
            "entries": [],
        }
        for e in self.entries:
            item = {"value": e.value, "multiplicity": e.multiplicity, "kind": e.kind, "base_index": e.base_index}
            if include_projectors:
                item["projector"] = e.projector.tolist()
            out["entries"].append(item)
        return out


def pair_gap(r: int, q: float) -> float:
    """``sqrt((q + r - 2)**2 + 4q)``, the splitting of the pair built on ``q``."""
    return sqrt((q + r - 2) ** 2 + 4 * q)


def qpm(r: int, q: float) -> tuple[float, float]:
    """The two Q-graph eigenvalues generated by base eigenvalue ``q`` of an ``r``-regular graph."""
    if r < 2:
        raise PreconditionError(f"degree must be at least 2, got {r}")
    if not -1e-9 <= q <= 2 * r + 1e-9:
        raise PreconditionError(f"base eigenvalue {q} outside [0, {2 * r}]")
    q = min(max(q, 0.0), 2.0 * r)
    mid = 3 * r + q - 2
    d = pair_gap(r, q)
    return (mid + d) / 2, (mid - d) / 2


def kernel_basis(R) -> np.ndarray:
    """Orthonormal basis (as columns) of ``{y : R y = 0}``, from the SVD of ``R``."""
    R = np.asarray(R, dtype=float)
    n, m = R.shape
    if m == 0:
        return np.zeros((0, 0))
    _, s, vt = np.linalg.svd(R, full_matrices=True)
    thresh = KERNEL_RTOL * max(1.0, float(s[0]) if s.size else 0.0)
    rank = int((s > thresh).sum())
    return vt[rank:].T.copy()


def _check_regular(g: Graph):
    info = regularity(g)
    if not info.is_regular:
        raise PreconditionError("graph is not regular")
    if not is_connected(g):
        raise PreconditionError("graph is not connected")
    if info.degree < 2:
        raise PreconditionError(
            "degree must be at least 2; for K2 the Q-graph is P3, which is handled numerically only"
        )
    return info


def _pair_block(q_i: float, q_pm: float, r: int, f: np.ndarray, fR: np.ndarray, RfR: np.ndarray) -> np.ndarray:
    c = q_pm + 2 - 2 * r - q_i
    return np.block([[c * c * f, c * fR], [c * fR.T, RfR]]) / (c * c + q_i)


def closed_form_spectrum(g: Graph, base: SpectralDecomposition | None = None) -> QGraphSpectrum:
    """Eigenvalues and projectors of the Q-graph signless Laplacian, built from those of ``g``.

    Parameters
    ----------
    g : Graph
        Connected ``r``-regular graph with ``r >= 2``.
    base : SpectralDecomposition, optional
        Decomposition of ``signless_laplacian(g)``; computed when omitted.
    """
    info = _check_regular(g)
    r = info.degree
    n, m = g.n, g.m
    R = incidence(g).astype(float)
    if base is None:
        base = decompose(signless_laplacian(g))

    entries: list[Entry] = []
    for i, (q, l, f) in enumerate(zip(base.eigenvalues, base.multiplicities, base.projectors)):
        if info.is_bipartite and abs(q) <= 1e-9:
            continue
        fR = f @ R
        RfR = R.T @ fR
        hi, lo = qpm(r, q)
        entries.append(Entry(hi, l, "plus", i, _pair_block(q, hi, r, f, fR, RfR)))
        entries.append(Entry(lo, l, "minus", i, _pair_block(q, lo, r, f, fR, RfR)))

    Y = kernel_basis(R)
    k = Y.shape[1]
    if k:
        F = np.zeros((n + m, n + m))
        F[n:, n:] = Y @ Y.T
        entries.append(Entry(float(2 * r - 2), k, "kernel", None, F))

    if info.is_bipartite:
        i0 = base.index_of(0.0, tol=1e-9)
        F = np.zeros((n + m, n + m))
        F[:n, :n] = base.projectors[i0]
        entries.append(Entry(float(r), base.multiplicities[i0], "bipartite_r", i0, F))

    for e in entries:
        e.projector.setflags(write=False)
    entries.sort(key=lambda e: -e.value)
    total = sum(e.multiplicity for e in entries)
    if total != n + m:
        raise AssertionError(f"closed-form multiplicities sum to {total}, expected {n + m}")
    return QGraphSpectrum(r, n, m, info.is_bipartite, base, tuple(entries), Y)


def merged_values(spec: QGraphSpectrum, tol: float = 1e-9) -> list[tuple[float, int, np.ndarray]]:
    """(value, multiplicity, summed projector) with numerically equal entries combined, decreasing."""
    groups: list[list[Entry]] = []
    for e in spec.entries:  # already sorted decreasing
        if groups and groups[-1][-1].value - e.value <= tol:
            groups[-1].append(e)
        else:
            groups.append([e])
    out = []
    for grp in groups:
        mult = sum(e.multiplicity for e in grp)
        value = sum(e.value * e.multiplicity for e in grp) / mult
        out.append((value, mult, sum(e.projector for e in grp)))
    return out


def edge_support_check(g: Graph, base: SpectralDecomposition | None = None, tol: float = 1e-7) -> list[set[int]]:
    """For each edge ``k``, the interior base eigenvalue indices ``i`` with ``f_i R e_k != 0``.

    Interior means excluding the largest eigenvalue ``2r`` and, for bipartite graphs, the
    eigenvalue ``0``. Every returned set is expected to be nonempty.
    """
    info = _check_regular(g)
    if base is None:
        base = decompose(signless_laplacian(g))
    R = incidence(g).astype(float)
    d = len(base.eigenvalues) - 1
    last = d - 1 if info.is_bipartite else d
    hits: list[set[int]] = [set() for _ in range(g.m)]
    for i in range(1, last + 1):
        norms = np.linalg.norm(base.projectors[i] @ R, axis=0)
        for k in np.flatnonzero(norms > tol):
            hits[k].add(i)
    return hits


def numeric_qgraph_decomposition(g: Graph) -> SpectralDecomposition:
    """Dense-eigensolver decomposition of the Q-graph signless Laplacian (the cross-check path)."""
    return decompose(signless_laplacian(q_graph(g).graph))
