"""Frame analysis of filter banks: bounds, tightness, Riesz bases, canonical duals.

An analysis bank h_1..h_K over a lattice M corresponds to the shift system
{T_m f_k : m in M, k = 1..K} with f_k the involution of h_k.  Its optimal frame
bounds are the extreme eigenvalues of H*(gamma) H(gamma) over the dual of M,
and the canonical dual's synthesis matrix is the pseudoinverse of H(gamma).

On finite groups every dual point is enumerated, so all verdicts are exact up
to floating point.  On Z^d the bounds are extremised over a uniform torus
grid; such reports carry ``method = "torus-grid(R)"``.  Perfect
reconstruction on Z^d is still decided exactly (Laurent identity).
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np

from .errors import BackendError, FilterBankError, NonFIRDualError, NotAFrameError
from .groups import involution
from .lattice import FiniteLattice
from .polyphase import (
    PR_TOL,
    FilterBank,
    analysis_matrix,
    apply_filter_bank,
    pr_residual,
    synthesis_filters_from_matrix,
    synthesis_matrix,
)

RANK_RTOL = 1e-10      # singular values below RANK_RTOL * sigma_max count as zero
FRAME_ATOL = 1e-12     # A must exceed this to declare a frame
TIGHT_TOL = 1e-10
RIESZ_TOL = 1e-10
DEFAULT_GRID = 64
ORACLE_MAX_SIZE = 4096


@dataclass(frozen=True)
class FrameReport:
    """Frame-theoretic verdicts for an analysis bank."""

    is_bessel: bool
    is_frame: bool
    is_tight: bool
    is_riesz: bool
    A: float
    B: float
    argmin_gamma: tuple
    argmax_gamma: tuple
    method: str
    K: int
    L: int
    tight_deviation: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["argmin_gamma"] = list(self.argmin_gamma)
        d["argmax_gamma"] = list(self.argmax_gamma)
        return d


@dataclass(frozen=True)
class DualityReport:
    is_dual: bool
    residual: float
    A_g: float
    B_g: float
    method: str

    def to_dict(self) -> dict:
        return asdict(self)


def torus_grid(resolution: int, dim: int) -> np.ndarray:
    """All points k / resolution in [0, 1)^dim, shape (resolution**dim, dim)."""
    axis = np.arange(resolution) / resolution
    return np.array(list(itertools.product(axis, repeat=dim)), dtype=float).reshape(-1, dim)


def sampled_analysis_matrix(bank: FilterBank, grid: int = DEFAULT_GRID) -> tuple[np.ndarray, list, str]:
    """H sampled over the dual of M: (samples, dual points, method tag)."""
    H = analysis_matrix(bank)
    if bank.is_finite:
        return H, list(bank.lattice.dual_reps), "exact-enumeration"
    pts = torus_grid(grid, bank.group.dim)
    return H.eval_grid(pts), [tuple(float(v) for v in p) for p in pts], f"torus-grid({grid})"


def _gram_eigs(H: np.ndarray) -> np.ndarray:
    """Eigenvalues of H*(gamma) H(gamma), ascending, shape (points, L).

    Taken as squared singular values of H rather than eigenvalues of the Gram
    matrix: the small end is then accurate to eps * sqrt(B / A) relative
    instead of eps * B / A, which matters for 1/A on badly conditioned banks.
    """
    L = H.shape[2]
    sv = np.linalg.svd(H, compute_uv=False)[:, ::-1] ** 2
    if sv.shape[1] < L:  # fewer channels than cosets: the Gram matrix is singular
        sv = np.concatenate([np.zeros((sv.shape[0], L - sv.shape[1])), sv], axis=1)
    return sv


def _full_rank(H: np.ndarray, L: int) -> bool:
    if H.shape[1] < L:
        return False
    sv = np.linalg.svd(H, compute_uv=False)
    smax = sv[:, :1]
    if np.any(smax == 0):
        return False
    return bool(np.all(np.sum(sv > RANK_RTOL * smax, axis=1) == L))


def frame_bounds(bank: FilterBank, grid: int = DEFAULT_GRID, tol: float = TIGHT_TOL) -> FrameReport:
    """Optimal frame bounds A = min lambda_min, B = max lambda_max of H* H.

    Also decides the frame property (H full column rank at every dual point),
    tightness, and the Riesz property when K = L.
    """
    H, points, method = sampled_analysis_matrix(bank, grid)
    L = bank.L
    eigs = _gram_eigs(H)
    lo, hi = eigs[:, 0], eigs[:, -1]
    i_min, i_max = int(np.argmin(lo)), int(np.argmax(hi))
    full = _full_rank(H, L)
    A = float(max(lo[i_min], 0.0)) if full else 0.0
    B = float(max(hi[i_max], 0.0))
    is_frame = full and A > FRAME_ATOL
    dev, tight = _tightness(H, tol)
    return FrameReport(
        is_bessel=True,
        is_frame=is_frame,
        is_tight=is_frame and tight,
        is_riesz=is_frame and bank.K == L,
        A=A,
        B=B,
        argmin_gamma=tuple(points[i_min]),
        argmax_gamma=tuple(points[i_max]),
        method=method,
        K=bank.K,
        L=L,
        tight_deviation=dev,
    )


def _tightness(H: np.ndarray, tol: float) -> tuple[float, bool]:
    gram = np.conj(np.swapaxes(H, 1, 2)) @ H
    a = float(np.mean(np.real(np.diagonal(gram, axis1=1, axis2=2))))
    dev = float(np.max(np.abs(gram - a * np.eye(gram.shape[-1]))))
    return dev, a > 0 and dev <= tol * max(1.0, a)


def is_tight(obj, tol: float = TIGHT_TOL, grid: int = DEFAULT_GRID) -> bool:
    """Tight-frame verdict: H*(gamma) H(gamma) = A I with A > 0 at every gamma.

    ``obj`` is a :class:`FrameReport` or a :class:`FilterBank`.
    """
    if isinstance(obj, FrameReport):
        return obj.is_tight
    return frame_bounds(obj, grid=grid, tol=tol).is_tight


def is_riesz_basis(bank: FilterBank, tol: float = RIESZ_TOL, grid: int = DEFAULT_GRID) -> bool:
    """Riesz verdict for maximally decimated banks: |det H(gamma)| > tol everywhere."""
    if bank.K != bank.L:
        raise FilterBankError(f"Riesz test needs K = L, got K={bank.K}, L={bank.L}")
    H, _, _ = sampled_analysis_matrix(bank, grid)
    return bool(np.min(np.abs(np.linalg.det(H))) > tol)


def canonical_dual(bank: FilterBank, grid: int = DEFAULT_GRID) -> FilterBank:
    """Fill in synthesis filters with the canonical dual frame.

    The synthesis matrix is G = (H* H)^{-1} H*, the pseudoinverse of H.  On Z^d
    this is only a finite filter when det(E* E) is constant; otherwise
    :class:`NonFIRDualError` is raised (embed the taps in a finite group).
    """
    report = frame_bounds(bank, grid=grid)
    if not report.is_frame:
        raise NotAFrameError(f"analysis bank is not a frame (A = {report.A:.3g}); no canonical dual")
    if bank.is_finite:
        # (H* H)^{-1} H* is the pseudoinverse; the SVD route avoids squaring cond(H)
        G = np.linalg.pinv(analysis_matrix(bank), rcond=0.0)
        return bank.with_synthesis(synthesis_filters_from_matrix(bank.lattice, G))
    E = analysis_matrix(bank)
    Es = E.adjoint()
    gram = Es @ E
    coeffs, adj = gram.charpoly_and_adjugate()
    det = coeffs[0] * ((-1) ** bank.L)
    c = det.constant_term
    if not det.is_constant(tol=1e-10 * max(1.0, abs(c))) or abs(c) <= FRAME_ATOL:
        raise NonFIRDualError(
            "det(E* E) is not constant on the torus, so the canonical dual is not FIR; "
            "embed the bank in a finite group to compute it")
    R = (adj @ Es) * (1.0 / c)
    return bank.with_synthesis(synthesis_filters_from_matrix(bank.lattice, R))


def check_dual_frames(bank: FilterBank, tol: float = PR_TOL, grid: int = DEFAULT_GRID) -> DualityReport:
    """Duality verdict (G H = I) plus synthesis-side bounds from G(gamma) G*(gamma)."""
    residual = pr_residual(bank)
    G = synthesis_matrix(bank)
    if bank.is_finite:
        method = "exact-enumeration"
    else:
        G = G.eval_grid(torus_grid(grid, bank.group.dim))
        method = f"torus-grid({grid})"
    eigs = _gram_eigs(np.conj(np.swapaxes(G, 1, 2)))
    return DualityReport(
        is_dual=residual <= tol,
        residual=float(residual),
        A_g=float(max(eigs[:, 0].min(), 0.0)),
        B_g=float(eigs[:, -1].max()),
        method=method,
    )


def frame_operator_oracle(bank: FilterBank) -> np.ndarray:
    """Brute-force frame operator S = sum_{k, m in M} (T_m f_k)(T_m f_k)*.

    Rows/columns follow the C-order flattening of the group's array shape.
    Independent of the polyphase machinery; finite groups up to 4096 elements.
    """
    if not bank.is_finite:
        raise BackendError("the frame-operator oracle needs a finite group")
    size = bank.group.size
    if size > ORACLE_MAX_SIZE:
        raise FilterBankError(f"group of size {size} exceeds the oracle cap {ORACLE_MAX_SIZE}")
    lattice: FiniteLattice = bank.lattice
    axes = tuple(range(bank.group.dim))
    shifts = lattice.elements()
    rows = []
    for h in bank.analysis:
        f = involution(h).to_array()
        rows.extend(np.roll(f, m, axis=axes).ravel() for m in shifts)
    V = np.array(rows)
    return V.T @ np.conj(V)


def analysis_energy(x, bank: FilterBank) -> float:
    """sum_k sum_{m in M} |<x, T_m f_k>|^2, computed from the subbands."""
    subbands, _ = apply_filter_bank(x, FilterBank(bank.lattice, bank.analysis))
    return float(sum(c.norm() ** 2 for c in subbands))
