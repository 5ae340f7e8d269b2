"""Polyphase representation of filter banks and perfect-reconstruction checks.

For a lattice M with transversal l_0..l_{L-1} the polyphase components are

    x_l(m) = x(m + l),   h_{k,l}(m) = h_k(m - l),   g_{l,k}(m) = g_k(m + l),

for m in M (note the deliberate sign asymmetry between analysis and
synthesis).  Their M-Fourier transforms assemble into the analysis matrix
H(gamma) (K x L) and the synthesis matrix G(gamma) (L x K), and the bank maps
the polyphase vector X(gamma) of the input to G(gamma) H(gamma) X(gamma).

Finite backend: functions on the dual of M are stored as dense samples at the
lattice's dual representatives (``lattice.dual_reps``); matrices have shape
``(N, rows, cols)`` with N = |M|.

Integer backend: polyphase entries are Laurent polynomials, with the dual of
M parametrised by z in T^d through gamma = z^A, i.e.

    E_{k,l}(z) = sum_n h_k(A n - l) z^{-n},   R_{l,k}(z) = sum_n g_k(A n + l) z^{-n}.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BackendError, FilterBankError, GroupMismatchError, LatticeError
from .groups import Group, Signal, character_matrix, convolve, translate
from .laurent import LaurentMatrix, LaurentPoly
from .lattice import FiniteLattice, Lattice, downsample, expand

PR_TOL = 1e-10


@dataclass(frozen=True)
class FilterBank:
    """K analysis filters, optionally K synthesis filters, and a lattice."""

    lattice: Lattice
    analysis: tuple[Signal, ...]
    synthesis: tuple[Signal, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "analysis", tuple(self.analysis))
        if self.synthesis is not None:
            object.__setattr__(self, "synthesis", tuple(self.synthesis))
        if not self.analysis:
            raise FilterBankError("a filter bank needs at least one analysis filter")
        for f in self.analysis + (self.synthesis or ()):
            if not isinstance(f, Signal):
                raise TypeError(f"filters must be Signal instances, got {type(f).__name__}")
            if f.group != self.lattice.group:
                raise GroupMismatchError(f"filter on {f.group}, lattice in {self.lattice.group}")
        if self.synthesis is not None and len(self.synthesis) != len(self.analysis):
            raise FilterBankError(
                f"{len(self.analysis)} analysis filters but {len(self.synthesis)} synthesis filters")

    @property
    def group(self) -> Group:
        return self.lattice.group

    @property
    def K(self) -> int:
        return len(self.analysis)

    @property
    def L(self) -> int:
        return self.lattice.index

    @property
    def is_finite(self) -> bool:
        return self.group.is_finite

    def with_synthesis(self, synthesis: Sequence[Signal]) -> "FilterBank":
        return FilterBank(self.lattice, self.analysis, tuple(synthesis))

    def scaled(self, c: complex) -> "FilterBank":
        """All analysis filters multiplied by c (synthesis dropped)."""
        return FilterBank(self.lattice, tuple(h * c for h in self.analysis))


@dataclass(frozen=True)
class PolyphaseVector:
    """Polyphase transform of a signal.

    ``entries`` is an (L, N) array of M-Fourier samples on the finite backend
    and a tuple of L Laurent polynomials on the integer backend.
    """

    lattice: Lattice
    entries: np.ndarray | tuple[LaurentPoly, ...]


def _require_synthesis(bank: FilterBank):
    if bank.synthesis is None:
        raise FilterBankError("this operation needs synthesis filters")


def _check_group(x: Signal, lattice: Lattice):
    if x.group != lattice.group:
        raise GroupMismatchError(f"signal on {x.group}, lattice in {lattice.group}")


def _shifted_stack(x: Signal, shifts: Sequence[tuple]) -> np.ndarray:
    arr = x.to_array()
    axes = tuple(range(arr.ndim))
    return np.stack([np.roll(arr, s, axis=axes) for s in shifts])


# -- polyphase transform ---------------------------------------------------------

def polyphase_forward(x: Signal, lattice: Lattice) -> PolyphaseVector:
    """X_l = M-Fourier transform of m -> x(m + l), for each l in the transversal."""
    _check_group(x, lattice)
    if isinstance(lattice, FiniteLattice):
        G = lattice.group
        stack = _shifted_stack(x, [G.neg(l) for l in lattice.transversal])
        return PolyphaseVector(lattice, lattice.m_fourier_batch(stack))
    terms: list[dict] = [{} for _ in range(lattice.index)]
    for n, v in x.items():
        i, m = lattice.decompose(n)
        k = tuple(-c for c in lattice.coords(m))
        terms[i][k] = terms[i].get(k, 0j) + v
    d = lattice.group.dim
    return PolyphaseVector(lattice, tuple(LaurentPoly(d, t) for t in terms))


def polyphase_inverse(X: PolyphaseVector) -> Signal:
    """Inverse of :func:`polyphase_forward`."""
    lattice = X.lattice
    if isinstance(lattice, FiniteLattice):
        entries = np.asarray(X.entries, dtype=complex)
        if entries.shape != (lattice.index, lattice.n_dual):
            raise LatticeError(f"polyphase vector must have shape {(lattice.index, lattice.n_dual)}, "
                               f"got {entries.shape}")
        out = np.zeros(lattice.group.orders, dtype=complex)
        axes = tuple(range(lattice.group.dim))
        for l, row in zip(lattice.transversal, entries):
            comp = lattice.m_fourier_inverse(row).to_array()
            out += np.roll(comp, l, axis=axes)
        return Signal(lattice.group, array=out)
    if len(X.entries) != lattice.index:
        raise LatticeError(f"expected {lattice.index} Laurent entries, got {len(X.entries)}")
    terms = {}
    for l, poly in zip(lattice.transversal, X.entries):
        for k, c in poly.terms.items():
            n = lattice.group.add(lattice.point(tuple(-v for v in k)), l)
            terms[n] = terms.get(n, 0j) + c
    return Signal(lattice.group, terms=terms)


def polyphase_inner(X: PolyphaseVector, Y: PolyphaseVector) -> complex:
    """Inner product of polyphase vectors under the unit-mass Haar measure on the dual of M."""
    if X.lattice != Y.lattice:
        raise LatticeError("polyphase vectors over different lattices")
    if isinstance(X.lattice, FiniteLattice):
        return complex(np.vdot(Y.entries, X.entries) / X.lattice.n_dual)
    total = 0j
    for p, q in zip(X.entries, Y.entries):
        for k, c in p.terms.items():
            total += c * np.conj(q.terms.get(k, 0j))
    return total


# -- polyphase matrices -----------------------------------------------------------

def analysis_matrix(bank: FilterBank) -> np.ndarray | LaurentMatrix:
    """H(gamma) with H_{k,l} = M-Fourier of m -> h_k(m - l).

    Finite backend: array of shape (N, K, L).  Integer backend: the K x L
    Laurent matrix E(z).
    """
    lattice = bank.lattice
    if isinstance(lattice, FiniteLattice):
        stack = np.concatenate([_shifted_stack(h, lattice.transversal) for h in bank.analysis])
        vals = lattice.m_fourier_batch(stack)
        return vals.reshape(bank.K, bank.L, -1).transpose(2, 0, 1)
    d = lattice.group.dim
    rows = []
    for h in bank.analysis:
        row = [{} for _ in range(bank.L)]
        for p, v in h.items():
            for j, l in enumerate(lattice.transversal):
                m = lattice.group.add(p, l)
                if lattice.contains(m):
                    k = tuple(-c for c in lattice.coords(m))
                    row[j][k] = row[j].get(k, 0j) + v
                    break
        rows.append([LaurentPoly(d, t) for t in row])
    return LaurentMatrix(rows, d)


def synthesis_matrix(bank: FilterBank) -> np.ndarray | LaurentMatrix:
    """G(gamma) with G_{l,k} = M-Fourier of m -> g_k(m + l).

    Finite backend: array of shape (N, L, K).  Integer backend: the L x K
    Laurent matrix R(z).
    """
    _require_synthesis(bank)
    lattice = bank.lattice
    if isinstance(lattice, FiniteLattice):
        G = lattice.group
        shifts = [G.neg(l) for l in lattice.transversal]
        stack = np.concatenate([_shifted_stack(g, shifts) for g in bank.synthesis])
        vals = lattice.m_fourier_batch(stack)
        return vals.reshape(bank.K, bank.L, -1).transpose(2, 1, 0)
    d = lattice.group.dim
    cols = []
    for g in bank.synthesis:
        col = [{} for _ in range(bank.L)]
        for p, v in g.items():
            for j, l in enumerate(lattice.transversal):
                m = lattice.group.sub(p, l)
                if lattice.contains(m):
                    k = tuple(-c for c in lattice.coords(m))
                    col[j][k] = col[j].get(k, 0j) + v
                    break
        cols.append([LaurentPoly(d, t) for t in col])
    return LaurentMatrix([[cols[k][j] for k in range(bank.K)] for j in range(bank.L)], d)


def synthesis_filters_from_matrix(lattice: Lattice, G) -> tuple[Signal, ...]:
    """Recover synthesis filters from a synthesis polyphase matrix.

    Inverts g_{l,k}(m) = g_k(m + l): each column of G is the polyphase vector
    of one filter.  ``G`` is an (N, L, K) array or an L x K Laurent matrix.
    """
    if isinstance(lattice, FiniteLattice):
        G = np.asarray(G, dtype=complex)
        K = G.shape[2]
        return tuple(polyphase_inverse(PolyphaseVector(lattice, G[:, :, k].T)) for k in range(K))
    L, K = G.shape
    out = []
    for k in range(K):
        terms = {}
        for j, l in enumerate(lattice.transversal):
            for e, c in G[j, k].terms.items():
                n = lattice.group.add(lattice.point(tuple(-v for v in e)), l)
                terms[n] = terms.get(n, 0j) + c
        out.append(Signal(lattice.group, terms=terms))
    return tuple(out)


# -- running the bank ------------------------------------------------------------

def apply_filter_bank(x: Signal, bank: FilterBank) -> tuple[list[Signal], Signal | None]:
    """Run the bank in the time domain.

    Returns the subbands c_k = downsample(x * h_k) (signals supported on M) and
    the output y = sum_k expand(c_k) * g_k, or ``None`` for y when the bank
    has no synthesis filters.
    """
    _check_group(x, bank.lattice)
    subbands = [downsample(convolve(x, h), bank.lattice) for h in bank.analysis]
    if bank.synthesis is None:
        return subbands, None
    y = Signal.zeros(bank.group)
    for c, g in zip(subbands, bank.synthesis):
        y = y + convolve(expand(c, bank.lattice), g)
    return subbands, y


def filter_bank_spectral(x: Signal, bank: FilterBank) -> tuple[np.ndarray, Signal]:
    """Polyphase-domain evaluation: C = H X and y = P^{-1}(G H X) (finite backend).

    Returns the subband M-Fourier samples, shape (K, N), and the output signal.
    """
    if not bank.is_finite:
        raise BackendError("spectral evaluation is for finite groups")
    _require_synthesis(bank)
    X = polyphase_forward(x, bank.lattice).entries
    H = analysis_matrix(bank)
    G = synthesis_matrix(bank)
    C = np.einsum("gkl,lg->kg", H, X)
    Y = np.einsum("glk,kg->lg", G, C)
    return C, polyphase_inverse(PolyphaseVector(bank.lattice, Y))


def pr_residual(bank: FilterBank) -> float:
    """Distance of G H from the identity.

    Finite backend: max entrywise modulus of G(gamma) H(gamma) - I over every
    dual point.  Integer backend: largest coefficient of R(z) E(z) - I.
    """
    _require_synthesis(bank)
    if bank.is_finite:
        GH = synthesis_matrix(bank) @ analysis_matrix(bank)
        return float(np.max(np.abs(GH - np.eye(bank.L))))
    return (synthesis_matrix(bank) @ analysis_matrix(bank)).identity_residual()


def check_perfect_reconstruction(bank: FilterBank, tol: float = PR_TOL) -> bool:
    """True iff G(gamma) H(gamma) = I_L for every gamma.

    On finite groups every dual point is checked.  On Z^d the identity is
    checked as a Laurent polynomial identity, which certifies it on the whole
    torus rather than on samples.
    """
    return pr_residual(bank) <= tol


def pr_counterexample(bank: FilterBank) -> Signal:
    """A unit-norm input that the bank reconstructs worst (finite backend).

    Places the top right-singular vector of G H - I at the worst dual point and
    zero elsewhere, then inverts the polyphase transform.  By unitarity,
    ||y - x|| equals that singular value.
    """
    if not bank.is_finite:
        raise BackendError("counterexamples are built on finite groups")
    GH = synthesis_matrix(bank) @ analysis_matrix(bank)
    err = GH - np.eye(bank.L)
    norms = np.linalg.norm(err, ord=2, axis=(1, 2))
    g = int(np.argmax(norms))
    _, _, vh = np.linalg.svd(err[g])
    X = np.zeros((bank.L, bank.lattice.n_dual), dtype=complex)
    X[:, g] = np.conj(vh[0])
    x = polyphase_inverse(PolyphaseVector(bank.lattice, X))
    return x / x.norm()


def fourier_from_polyphase(X: PolyphaseVector, xi) -> complex:
    """X(xi) = p(xi)^T X(xi + M^perp) with p(xi) = [conj <l, xi>]_l (finite backend)."""
    lattice = X.lattice
    if not isinstance(lattice, FiniteLattice):
        raise BackendError("fourier_from_polyphase needs a finite group")
    G = lattice.group
    xi = G.dual_point(xi)
    gamma = int(lattice.dual_class[xi])
    p = np.conj(character_matrix(G, lattice.transversal, [xi])[:, 0])
    return complex(p @ np.asarray(X.entries)[:, gamma])


# -- quincunx ----------------------------------------------------------------------

def quincunx_lambda(x: Signal) -> np.ndarray:
    """The Lambda transform on Z_2P x Z_2Q, sampled on the full (2P, 2Q) grid.

    [Lambda x](n, m) = DFT[x_0](n, m) + W_2P^{-n} W_2Q^{-m} DFT[x_1](n, m)
    with x_0(u, v) = x(2u, 2v), x_1(u, v) = x(2u+1, 2v+1) and the (P, Q)-point
    DFT.  It equals the M-Fourier transform of the restriction of x to the
    quincunx lattice.
    """
    G = x.group
    if not G.is_finite or G.dim != 2 or G.orders[0] % 2 or G.orders[1] % 2:
        raise BackendError(f"Lambda transform needs Z_2P x Z_2Q, got {G}")
    P, Q = G.orders[0] // 2, G.orders[1] // 2
    a = x.to_array()
    X0 = np.fft.fft2(a[0::2, 0::2])
    X1 = np.fft.fft2(a[1::2, 1::2])
    n = np.arange(2 * P)[:, None]
    m = np.arange(2 * Q)[None, :]
    X0 = X0[n % P, m % Q]
    X1 = X1[n % P, m % Q]
    return X0 + np.exp(-2j * np.pi * n / (2 * P)) * np.exp(-2j * np.pi * m / (2 * Q)) * X1


def quincunx_polyphase(bank: FilterBank) -> tuple[np.ndarray, np.ndarray | None]:
    """E(n, m) = [Lambda h_{k,l}] and R(n, m) = [Lambda g_{l,k}] on Z_2P x Z_Q.

    Returns arrays of shape (2P, Q, K, 2) and (2P, Q, 2, K).  Requires the
    quincunx lattice with transversal {(0,0), (1,0)}.
    """
    lattice = bank.lattice
    if lattice.kind != "quincunx":
        raise LatticeError("quincunx_polyphase needs a quincunx lattice")
    G = lattice.group
    Q = G.orders[1] // 2
    E = np.stack([np.stack([quincunx_lambda(downsample(translate(h, l), lattice))
                            for l in lattice.transversal], axis=-1) for h in bank.analysis], axis=-2)
    E = E[:, :Q]
    R = None
    if bank.synthesis is not None:
        R = np.stack([np.stack([quincunx_lambda(downsample(translate(g, G.neg(l)), lattice))
                                for l in lattice.transversal], axis=-1) for g in bank.synthesis],
                     axis=-1)
        R = R[:, :Q]
    return E, R
