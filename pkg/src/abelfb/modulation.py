"""Modulation (alias-component) representation on finite groups.

The modulation matrix collects the full-group spectra of the analysis filters
at the L alias offsets of the annihilator,

    H_mod(xi) = [H_k(xi + eta)]_{k, eta in M^perp},

and is tied to the polyphase matrix by H_mod(xi) = H(xi + M^perp) D(xi) W with
W = [<l_i, eta>] and D(xi) = diag(<l_i, xi>).  Everything here is enumerated
over the whole dual group, so it is available for finite groups only.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BackendError, FilterBankError
from .groups import Signal, character_matrix, fourier, phase_matrix
from .lattice import FiniteLattice, downsample
from .polyphase import FilterBank, analysis_matrix

ALIAS_TOL = 1e-10


def _finite(lattice) -> FiniteLattice:
    if not isinstance(lattice, FiniteLattice):
        raise BackendError("modulation analysis is only available on finite groups")
    return lattice


def _all_dual(lattice: FiniteLattice) -> np.ndarray:
    """Every dual point, in C order of the group's array shape, shape (|G|, d)."""
    G = lattice.group
    return np.array(np.unravel_index(np.arange(G.size), G.orders)).T


def _alias_index(lattice: FiniteLattice) -> np.ndarray:
    """Flat index of xi + eta_j for every xi (rows) and annihilator element j."""
    G = lattice.group
    orders = np.asarray(G.orders)
    xi = _all_dual(lattice)
    ann = np.asarray(lattice.annihilator)
    shifted = (xi[:, None, :] + ann[None, :, :]) % orders
    return np.ravel_multi_index(tuple(np.moveaxis(shifted, -1, 0)), G.orders)


@dataclass(frozen=True)
class ModulationData:
    """Modulation matrix of an analysis bank, sampled at every xi in the dual group.

    ``H_mod`` has shape (|G|, K, L) with xi in C order of ``group.orders``.
    ``W`` is the constant L x L matrix [<l_i, eta_j>].
    """

    lattice: FiniteLattice
    H_mod: np.ndarray
    W: np.ndarray

    def at(self, xi) -> np.ndarray:
        G = self.lattice.group
        return self.H_mod[np.ravel_multi_index(G.dual_point(xi), G.orders)]

    def D(self, xi) -> np.ndarray:
        """diag(<l_0, xi>, ..., <l_{L-1}, xi>)."""
        G = self.lattice.group
        return np.diag(character_matrix(G, self.lattice.transversal, [G.dual_point(xi)])[:, 0])

    def x_mod(self, x: Signal, xi) -> np.ndarray:
        """[X(xi + eta)]_{eta in M^perp}."""
        G = self.lattice.group
        X = fourier(x)
        xi = G.dual_point(xi)
        return np.array([X[G.add(xi, eta)] for eta in self.lattice.annihilator])


def decimation_sides(x: Signal, lattice: FiniteLattice, xi) -> tuple[complex, complex]:
    """Both sides of the decimation identity at xi.

    Returns (direct, alias) where direct = sum_{m in M} x(m) conj<m, xi> is
    computed by enumerating M and alias = (1/L) sum_{eta in M^perp} X(xi + eta).
    """
    lattice = _finite(lattice)
    G = lattice.group
    xi = G.dual_point(xi)
    elems = lattice.elements()
    vals = np.array([x[m] for m in elems])
    direct = complex(vals @ np.exp(-2j * np.pi * phase_matrix(G, elems, [xi])[:, 0]))
    X = fourier(x)
    alias = complex(sum(X[G.add(xi, eta)] for eta in lattice.annihilator) / lattice.index)
    return direct, alias


def decimation_spectrum(x: Signal, lattice: FiniteLattice, xi, tol: float = ALIAS_TOL) -> complex:
    """M-Fourier transform of the restriction of x to M, evaluated at xi + M^perp.

    Computes it both directly and as the alias average of the full spectrum and
    raises if the two disagree by more than ``tol`` (scaled by ||x||_1).
    """
    direct, alias = decimation_sides(x, lattice, xi)
    if abs(direct - alias) > tol * max(1.0, x.norm(1)):
        raise FilterBankError(f"decimation identity violated at {xi}: {direct} vs {alias}")
    return direct


def alias_identity_residual(x: Signal, lattice: FiniteLattice) -> float:
    """Max over all xi of |direct - alias| for the decimation identity (vectorised)."""
    lattice = _finite(lattice)
    X = fourier(x).ravel()
    alias = X[_alias_index(lattice)].sum(axis=1) / lattice.index
    direct = np.fft.fftn(downsample(x, lattice).to_array()).ravel()
    return float(np.max(np.abs(direct - alias)))


def modulation_matrix(bank: FilterBank) -> ModulationData:
    """Assemble H_mod from the full-group spectra of the analysis filters."""
    lattice = _finite(bank.lattice)
    G = lattice.group
    spectra = np.stack([fourier(h).ravel() for h in bank.analysis])  # (K, |G|)
    idx = _alias_index(lattice)                                       # (|G|, L)
    H_mod = np.transpose(spectra[:, idx], (1, 0, 2))
    W = character_matrix(G, lattice.transversal, lattice.annihilator)
    return ModulationData(lattice, H_mod, W)


def modulation_subbands(bank: FilterBank, x: Signal) -> np.ndarray:
    """Subband spectra (1/L) H_mod(xi) x_mod(xi) at each dual representative; shape (K, N)."""
    data = modulation_matrix(bank)
    lattice = data.lattice
    G = lattice.group
    X = fourier(x).ravel()
    reps = np.ravel_multi_index(tuple(np.asarray(lattice.dual_reps).T), G.orders)
    xmod = X[_alias_index(lattice)[reps]]                              # (N, L)
    return np.einsum("gkl,gl->kg", data.H_mod[reps], xmod) / lattice.index


def modulation_output(bank: FilterBank, x: Signal) -> np.ndarray:
    """Output spectrum Y(xi) = (1/L) [G_1 .. G_K](xi) H_mod(xi) x_mod(xi), shape ``orders``."""
    if bank.synthesis is None:
        raise FilterBankError("output spectrum needs synthesis filters")
    data = modulation_matrix(bank)
    lattice = data.lattice
    X = fourier(x).ravel()
    xmod = X[_alias_index(lattice)]                                    # (|G|, L)
    Gk = np.stack([fourier(g).ravel() for g in bank.synthesis], axis=1)  # (|G|, K)
    Y = np.einsum("gk,gkl,gl->g", Gk, data.H_mod, xmod) / lattice.index
    return Y.reshape(lattice.group.orders)


def mod_polyphase_residuals(bank: FilterBank) -> tuple[float, float]:
    """Residuals of H_mod = H D W and of H = (1/L) H_mod W* conj(D), max over all xi."""
    data = modulation_matrix(bank)
    lattice = data.lattice
    G = lattice.group
    H = analysis_matrix(bank)[lattice.dual_class.ravel()]             # (|G|, K, L)
    D = character_matrix(G, lattice.transversal, _all_dual(lattice)).T  # (|G|, L)
    forward = (H * D[:, None, :]) @ data.W
    res_fwd = float(np.max(np.abs(data.H_mod - forward)))
    back = (data.H_mod @ np.conj(data.W).T) * np.conj(D)[:, None, :] / lattice.index
    res_back = float(np.max(np.abs(H - back)))
    return res_fwd, res_back


def check_mod_polyphase_relation(bank: FilterBank) -> float:
    """Largest residual over both directions of the modulation/polyphase factorisation."""
    return max(mod_polyphase_residuals(bank))


def w_orthogonality_residual(lattice: FiniteLattice) -> float:
    """max |W W* - L I|."""
    lattice = _finite(lattice)
    W = character_matrix(lattice.group, lattice.transversal, lattice.annihilator)
    return float(np.max(np.abs(W @ np.conj(W).T - lattice.index * np.eye(lattice.index))))


def expander_periodicity_residual(c: Signal, lattice: FiniteLattice) -> float:
    """max over xi, eta of |(expand c)^(xi + eta) - C(xi + M^perp)| for c supported on M."""
    lattice = _finite(lattice)
    spec = fourier(c).ravel()
    C = lattice.m_fourier(c)[lattice.dual_class.ravel()]
    return float(np.max(np.abs(spec[_alias_index(lattice)] - C[:, None])))

