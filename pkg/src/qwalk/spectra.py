"""Distinct eigenvalues and eigenprojectors of real symmetric matrices.

Only projectors leave this module. Eigenvectors inside a repeated eigenspace are an
arbitrary basis choice of the solver, so they are summed into ``V V^T`` immediately.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

__all__ = [
    "CLUSTER_TOL",
    "SUPPORT_TOL",
    "COSPECTRAL_TOL",
    "SNAP_TOL",
    "SpectralDecomposition",
    "SupportSet",
    "CospectralReport",
    "decompose",
    "support",
    "strong_cospectrality",
]

CLUSTER_TOL = 1e-8
SUPPORT_TOL = 1e-7
COSPECTRAL_TOL = 1e-7
SNAP_TOL = 1e-7


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues (strictly decreasing), multiplicities and orthogonal projectors."""

    dim: int
    eigenvalues: tuple[float, ...]
    multiplicities: tuple[int, ...]
    projectors: tuple[np.ndarray, ...] = field(repr=False)
    snapped: tuple[bool, ...] = ()

    @property
    def raw_values(self) -> np.ndarray:
        """Eigenvalues repeated by multiplicity, decreasing."""
        return np.repeat(np.asarray(self.eigenvalues, dtype=float), self.multiplicities)

    def index_of(self, q: float, tol: float = 1e-7) -> int:
        hits = [i for i, x in enumerate(self.eigenvalues) if abs(x - q) <= tol]
        if not hits:
            raise KeyError(f"{q} is not an eigenvalue")
        return hits[0]

    def projector(self, q: float) -> np.ndarray:
        return self.projectors[self.index_of(q)]

    def reconstruct(self) -> np.ndarray:
        return sum(q * f for q, f in zip(self.eigenvalues, self.projectors))

    @property
    def all_integral(self) -> bool:
        return all(self.snapped)

    def to_dict(self, include_projectors: bool = False) -> dict:
        out = {
            "dim": self.dim,
            "eigenvalues": [float(q) for q in self.eigenvalues],
            "multiplicities": list(self.multiplicities),
            "snapped": list(self.snapped),
        }
        if include_projectors:
            out["projectors"] = [f.tolist() for f in self.projectors]
        return out


@dataclass(frozen=True)
class SupportSet:
    vertex: int
    eigenvalues: tuple[float, ...]
    indices: tuple[int, ...]
    weights: tuple[float, ...]  # ||f_q e_u||^2 per supported eigenvalue


@dataclass(frozen=True)
class CospectralReport:
    u: int
    v: int
    strongly_cospectral: bool
    S_plus: tuple[float, ...]
    S_minus: tuple[float, ...]
    residuals: dict[float, tuple[float, float]]  # q -> (||f e_u - f e_v||, ||f e_u + f e_v||)
    offending: tuple[float, ...] = ()


def decompose(M, cluster_tol: float = CLUSTER_TOL, snap_tol: float = SNAP_TOL) -> SpectralDecomposition:
    """Cluster the spectrum of a symmetric matrix into distinct eigenvalues and their projectors.

    Two consecutive sorted solver eigenvalues join the same cluster when their gap is at most
    ``cluster_tol * max(1, ||M||_inf)``. The reported value is the cluster mean, replaced by the
    nearest integer when it lies within ``snap_tol`` of one (recorded in ``snapped``).

    A ``cluster_tol`` above half the smallest true gap silently merges distinct eigenvalues;
    that cannot be detected from the solver output alone.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError(f"expected a square matrix, got shape {M.shape}")
    scale = max(1.0, float(np.abs(M).sum(axis=1).max())) if M.size else 1.0
    if M.size and np.abs(M - M.T).max() > 1e-12 * scale:
        raise InputError("matrix is not symmetric")
    dim = M.shape[0]
    w, V = np.linalg.eigh((M + M.T) / 2)
    order = np.argsort(-w, kind="stable")
    w, V = w[order], V[:, order]

    gap = cluster_tol * scale
    groups: list[list[int]] = []
    for k in range(dim):
        if groups and w[groups[-1][-1]] - w[k] <= gap:
            groups[-1].append(k)
        else:
            groups.append([k])

    values, mults, projs, snaps = [], [], [], []
    for idx in groups:
        q = float(w[idx].mean())
        near = round(q)
        snapped = abs(q - near) <= snap_tol
        values.append(float(near) if snapped else q)
        snaps.append(snapped)
        mults.append(len(idx))
        X = V[:, idx]
        P = X @ X.T
        P.setflags(write=False)
        projs.append(P)
    return SpectralDecomposition(dim, tuple(values), tuple(mults), tuple(projs), tuple(snaps))


def support(sd: SpectralDecomposition, u: int, support_tol: float = SUPPORT_TOL) -> SupportSet:
    """Eigenvalues ``q`` with ``||f_q e_u|| > support_tol``."""
    if not 0 <= u < sd.dim:
        raise InputError(f"vertex {u} out of range for dimension {sd.dim}")
    vals, idx, wts = [], [], []
    for i, (q, f) in enumerate(zip(sd.eigenvalues, sd.projectors)):
        norm = float(np.linalg.norm(f[:, u]))
        if norm > support_tol:
            vals.append(q)
            idx.append(i)
            wts.append(norm**2)
    return SupportSet(u, tuple(vals), tuple(idx), tuple(wts))


def strong_cospectrality(
    sd: SpectralDecomposition, u: int, v: int, tol: float = COSPECTRAL_TOL
) -> CospectralReport:
    """Sort every eigenvalue into S+ (``f e_u = f e_v``) and/or S- (``f e_u = -f e_v``).

    An eigenvalue outside both supports lands in both sets; one that is supported but matches
    neither sign makes the pair not strongly cospectral.
    """
    if u == v:
        raise InputError("strong cospectrality needs two distinct vertices")
    for x in (u, v):
        if not 0 <= x < sd.dim:
            raise InputError(f"vertex {x} out of range for dimension {sd.dim}")
    plus, minus, bad = [], [], []
    residuals = {}
    for q, f in zip(sd.eigenvalues, sd.projectors):
        a, b = f[:, u], f[:, v]
        dp = float(np.linalg.norm(a - b))
        dm = float(np.linalg.norm(a + b))
        residuals[q] = (dp, dm)
        if dp <= tol:
            plus.append(q)
        if dm <= tol:
            minus.append(q)
        if dp > tol and dm > tol:
            bad.append(q)
    return CospectralReport(u, v, not bad, tuple(plus), tuple(minus), residuals, tuple(bad))
