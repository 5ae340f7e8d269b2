"""Finite-index subgroups (lattices) of discrete abelian groups.

A :class:`Lattice` bundles a subgroup M of index L with a transversal
``[l_0, ..., l_{L-1}]`` (one representative per coset, ``l_0 = 0``) and, on
finite groups, its annihilator M^perp and a fixed enumeration of the dual of
M as representatives of G^/M^perp.

Signals "on M" are represented as ordinary :class:`~abelfb.groups.Signal`
objects on the ambient group whose support lies in M.  With that convention
:func:`downsample` zeroes everything off M and :func:`expand` only checks the
support.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BackendError, GroupMismatchError, LatticeError
from .groups import Group, Signal, colex_key, phase_matrix

TRANSVERSAL_CONVENTIONS = ("lex", "negative")


# -- exact integer linear algebra ------------------------------------------------

def int_det(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    m = [[int(v) for v in row] for row in a]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def int_adjugate(a: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact adjugate, so that adj(A) @ A = det(A) * I."""
    n = len(a)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(a) if k != i]
            adj[j][i] = (-1) ** (i + j) * int_det(minor)
    return adj


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hermite_normal_form(a: Sequence[Sequence[int]]) -> list[list[int]]:
    """Column-style Hermite normal form H = A U with U unimodular.

    H is lower triangular with positive diagonal and ``0 <= H[i][j] < H[i][i]``
    for ``j < i``; the columns of H generate the same lattice as those of A.
    """
    h = [[int(v) for v in row] for row in a]
    n = len(h)
    for i in range(n):
        for j in range(i + 1, n):
            if h[i][j] == 0:
                continue
            g, s, t = _xgcd(h[i][i], h[i][j])
            p, q = h[i][i] // g, h[i][j] // g
            for r in range(n):
                ci, cj = h[r][i], h[r][j]
                h[r][i], h[r][j] = s * ci + t * cj, -q * ci + p * cj
        if h[i][i] == 0:
            raise LatticeError("matrix is singular")
        if h[i][i] < 0:
            for r in range(n):
                h[r][i] = -h[r][i]
        for j in range(i):
            q = h[i][j] // h[i][i]
            if q:
                for r in range(n):
                    h[r][j] -= q * h[r][i]
    return h


def hnf_reduce(h: Sequence[Sequence[int]], n: Sequence[int]) -> tuple[tuple, tuple]:
    """Digit expansion n = H q + r with 0 <= r_i < H[i][i].

    Returns ``(q, r)``; n lies in the lattice H Z^d iff r is zero.
    """
    rest = [int(v) for v in n]
    d = len(rest)
    q = [0] * d
    for i in range(d):
        q[i], r_i = divmod(rest[i], h[i][i])
        for r in range(i, d):
            rest[r] -= q[i] * h[r][i]
        assert rest[i] == r_i
    return tuple(q), tuple(rest)


# -- the lattice type ------------------------------------------------------------

class Lattice:
    """A subgroup M of finite index L in a discrete abelian group.

    Build instances with :func:`lattice_from_generators`,
    :func:`lattice_from_matrix` or :func:`quincunx`.
    """

    def __init__(self, group: Group, kind: str, params: dict, transversal: Sequence[tuple],
                 convention: str = "lex"):
        self.group = group
        self.kind = kind
        self.params = params
        self.convention = convention
        self.transversal = tuple(tuple(t) for t in transversal)
        self.index = len(self.transversal)
        self.annihilator: tuple[tuple, ...] | None = None

    def _key(self):
        return (self.group, self.kind, repr(self.params), self.convention)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"Lattice({self.group}, {self.kind}={self.params}, L={self.index}, "
                f"transversal={list(self.transversal)})")

    @property
    def is_finite(self) -> bool:
        return self.group.is_finite

    def contains(self, n) -> bool:
        raise NotImplementedError

    def coset_of(self, n) -> int:
        """Index i of the coset with n - l_i in M."""
        return self.decompose(n)[0]

    def decompose(self, n) -> tuple[int, tuple]:
        """Write n = l_i + m with m in M; returns (i, m)."""
        raise NotImplementedError


class FiniteLattice(Lattice):
    """Subgroup of a finite group; everything is enumerated explicitly."""

    def __init__(self, group: Group, kind: str, params: dict, generators: Sequence[tuple],
                 convention: str = "lex"):
        if convention not in TRANSVERSAL_CONVENTIONS:
            raise LatticeError(f"unknown transversal convention {convention!r}")
        G = group
        orders = np.asarray(G.orders, dtype=np.int64)
        gens = [G.element(g) for g in generators]

        # closure: M <- M + {0, g, 2g, ...} until k*g falls back into M
        mask = np.zeros(G.orders, dtype=bool)
        mask[G.zero] = True
        elems = np.zeros((1, G.dim), dtype=np.int64)
        for g in gens:
            g = np.asarray(g, dtype=np.int64)
            blocks = [elems]
            k = 1
            while True:
                shift = (k * g) % orders
                if mask[tuple(shift)]:
                    break
                blocks.append((elems + shift) % orders)
                k += 1
            elems = np.concatenate(blocks)
            mask[tuple(elems.T)] = True
        size_m = len(elems)
        L = G.size // size_m

        # colex-minimal representative of each coset, zero first
        colex_flat = np.ravel_multi_index(np.unravel_index(np.arange(G.size), G.orders, order="F"),
                                          G.orders)
        coset = np.full(G.size, -1, dtype=np.int64)
        reps = []
        for flat in colex_flat:
            if coset[flat] >= 0:
                continue
            n = np.array(np.unravel_index(flat, G.orders), dtype=np.int64)
            members = np.ravel_multi_index(tuple(((elems + n) % orders).T), G.orders)
            coset[members] = len(reps)
            reps.append(tuple(int(v) for v in n))
        if convention == "negative":
            reps = [G.neg(r) for r in reps]
        coset = np.full(G.size, -1, dtype=np.int64)
        for i, r in enumerate(reps):
            members = np.ravel_multi_index(tuple(((elems + np.asarray(r)) % orders).T), G.orders)
            coset[members] = i

        super().__init__(group, kind, params, reps, convention)
        self.generators = tuple(gens)
        self.mask = mask
        self.mask.setflags(write=False)
        self._elements = elems
        self._coset = coset.reshape(G.orders)
        self.n_dual = size_m

        # annihilator: dual points with <g, xi> = 1 for every generator
        all_xi = np.array(np.unravel_index(colex_flat, G.orders)).T
        if gens:
            ph = phase_matrix(G, gens, all_xi)
            ann = all_xi[np.all(ph == 0, axis=0)]
        else:
            ann = all_xi
        self.annihilator = tuple(tuple(int(v) for v in xi) for xi in ann)
        if len(self.annihilator) != L:
            raise AssertionError("annihilator size differs from the index")

        # dual of M: colex-minimal representative of each class xi + M^perp
        dual_class = np.full(G.size, -1, dtype=np.int64)
        dual_reps = []
        ann_arr = np.asarray(ann, dtype=np.int64).reshape(L, G.dim)
        for flat in colex_flat:
            if dual_class[flat] >= 0:
                continue
            xi = np.array(np.unravel_index(flat, G.orders), dtype=np.int64)
            members = np.ravel_multi_index(tuple(((ann_arr + xi) % orders).T), G.orders)
            dual_class[members] = len(dual_reps)
            dual_reps.append(tuple(int(v) for v in xi))
        self.dual_class = dual_class.reshape(G.orders)
        self.dual_class.setflags(write=False)
        self.dual_reps = tuple(dual_reps)
        self._dual_rep_flat = np.ravel_multi_index(tuple(np.asarray(dual_reps).T), G.orders)

    def elements(self) -> list[tuple]:
        """Elements of M in colex order."""
        return sorted((tuple(int(v) for v in e) for e in self._elements), key=colex_key)

    def contains(self, n) -> bool:
        return bool(self.mask[self.group.element(n)])

    def decompose(self, n) -> tuple[int, tuple]:
        n = self.group.element(n)
        i = int(self._coset[n])
        return i, self.group.sub(n, self.transversal[i])

    def coset_array(self) -> np.ndarray:
        """Array over G holding the coset index of every element."""
        return self._coset.copy()

    def m_fourier(self, c: Signal | np.ndarray) -> np.ndarray:
        """M-Fourier transform C(gamma) = sum_{m in M} c(m) conj(<m, xi_gamma>).

        ``c`` is a signal (or dense array) on G; only its values on M are used.
        Returns the vector of values at the dual representatives, in order.
        """
        arr = c.to_array() if isinstance(c, Signal) else np.asarray(c, dtype=complex)
        spec = np.fft.fftn(np.where(self.mask, arr, 0))
        return spec.ravel()[self._dual_rep_flat]

    def m_fourier_batch(self, arrays: np.ndarray) -> np.ndarray:
        """M-Fourier transform of a stack of dense arrays (leading axis = batch)."""
        arrays = np.asarray(arrays, dtype=complex)
        axes = tuple(range(1, arrays.ndim))
        spec = np.fft.fftn(np.where(self.mask, arrays, 0), axes=axes)
        return spec.reshape(len(arrays), -1)[:, self._dual_rep_flat]

    def m_fourier_inverse(self, values: Sequence[complex]) -> Signal:
        """Inverse M-Fourier transform; the result is a signal supported on M.

        Uses c(m) = (1/N) sum_gamma C(gamma) <m, xi_gamma> with N = |M|.
        """
        values = np.asarray(values, dtype=complex)
        if values.shape != (self.n_dual,):
            raise LatticeError(f"expected {self.n_dual} dual samples, got shape {values.shape}")
        arr = np.fft.ifftn(values[self.dual_class])
        return Signal(self.group, array=np.where(self.mask, arr, 0))


class IntegerLattice(Lattice):
    """The lattice M = A Z^d in Z^d for an integer matrix A with det A > 0."""

    def __init__(self, matrix: Sequence[Sequence[int]], convention: str = "lex"):
        if convention not in TRANSVERSAL_CONVENTIONS:
            raise LatticeError(f"unknown transversal convention {convention!r}")
        mat = [[int(v) for v in row] for row in matrix]
        d = len(mat)
        if d == 0 or any(len(row) != d for row in mat):
            raise LatticeError("lattice matrix must be square and non-empty")
        det = int_det(mat)
        if det <= 0:
            raise LatticeError(f"lattice matrix must have positive determinant, got {det}")
        self.matrix = tuple(tuple(row) for row in mat)
        self.det = det
        self.adjugate = tuple(tuple(row) for row in int_adjugate(mat))
        self.hnf = tuple(tuple(row) for row in hermite_normal_form(mat))

        # box digits of the HNF enumerate coset representatives; fold each
        # into the half-open parallelepiped A[0,1)^d
        diag = [self.hnf[i][i] for i in range(d)]
        points = set()
        for box in np.ndindex(*diag):
            points.add(self._fold(box))
        reps = sorted(points, key=lambda p: (any(p), colex_key(p)))
        if len(reps) != det:
            raise AssertionError("parallelepiped enumeration missed cosets")
        if convention == "negative":
            reps = [tuple(-v for v in p) for p in reps]
        super().__init__(Group.integer(d), "matrix", {"matrix": [list(r) for r in mat]},
                         reps, convention)
        self._rep_index = {self._fold(r): i for i, r in enumerate(self.transversal)}

    def _fold(self, n) -> tuple:
        """Representative of n + M inside A[0,1)^d (exact integer arithmetic)."""
        k = self.lattice_coords_floor(n)
        return tuple(int(v) - sum(a * q for a, q in zip(row, k)) for v, row in zip(n, self.matrix))

    def lattice_coords_floor(self, n) -> tuple:
        """floor(A^{-1} n) componentwise."""
        return tuple(sum(a * int(v) for a, v in zip(row, n)) // self.det for row in self.adjugate)

    def contains(self, n) -> bool:
        n = self.group.element(n)
        return all(sum(a * v for a, v in zip(row, n)) % self.det == 0 for row in self.adjugate)

    def contains_hnf(self, n) -> bool:
        """Membership decided by HNF digit expansion (independent of the adjugate route)."""
        return not any(hnf_reduce(self.hnf, self.group.element(n))[1])

    def coords(self, m) -> tuple:
        """The integer vector k with m = A k; m must lie in M."""
        m = self.group.element(m)
        num = [sum(a * v for a, v in zip(row, m)) for row in self.adjugate]
        if any(v % self.det for v in num):
            raise LatticeError(f"{m} is not in the lattice")
        return tuple(v // self.det for v in num)

    def point(self, k) -> tuple:
        """The lattice point A k."""
        return tuple(sum(a * int(v) for a, v in zip(row, k)) for row in self.matrix)

    def decompose(self, n) -> tuple[int, tuple]:
        n = self.group.element(n)
        i = self._rep_index[self._fold(n)]
        return i, self.group.sub(n, self.transversal[i])

    def torus_annihilator(self) -> list[tuple[float, ...]]:
        """The L offsets A^{-T} k, k in N(A^T), representing M^perp inside [0,1)^d."""
        d = self.group.dim
        at = [[self.matrix[j][i] for j in range(d)] for i in range(d)]
        adj_t = [[self.adjugate[j][i] for j in range(d)] for i in range(d)]
        dual = IntegerLattice(at)
        out = []
        for k in dual.transversal:
            out.append(tuple(float(Fraction(sum(a * v for a, v in zip(row, k)), self.det) % 1)
                             for row in adj_t))
        return out


# -- constructors ----------------------------------------------------------------

def lattice_from_generators(group: Group, generators: Iterable, convention: str = "lex") -> FiniteLattice:
    """The subgroup of a finite group generated by ``generators``."""
    if not group.is_finite:
        raise BackendError("generator lattices are for finite groups; use lattice_from_matrix on Z^d")
    gens = [group.element(g) for g in generators]
    return FiniteLattice(group, "generators", {"generators": [list(g) for g in gens]}, gens, convention)


def lattice_from_matrix(matrix, convention: str = "lex") -> IntegerLattice:
    """The lattice A Z^d of Z^d with transversal N(A) = A[0,1)^d intersected with Z^d."""
    if isinstance(matrix, (int, np.integer)):
        matrix = [[int(matrix)]]
    return IntegerLattice(matrix, convention)


def quincunx(P: int, Q: int, convention: str = "lex") -> FiniteLattice:
    """Quincunx lattice in Z_2P x Z_2Q: pairs whose coordinates share parity."""
    if P < 1 or Q < 1:
        raise LatticeError(f"quincunx needs P, Q >= 1, got {P}, {Q}")
    G = Group.finite(2 * P, 2 * Q)
    return FiniteLattice(G, "quincunx", {"P": int(P), "Q": int(Q)}, [(1, 1), (2, 0)], convention)


def downsample(x: Signal, lattice: Lattice) -> Signal:
    """Restriction to M (the result is zero off M)."""
    if x.group != lattice.group:
        raise GroupMismatchError(f"signal on {x.group}, lattice in {lattice.group}")
    if isinstance(lattice, FiniteLattice) and x.is_dense:
        return Signal(x.group, array=np.where(lattice.mask, x.to_array(), 0))
    return Signal(x.group, terms={n: v for n, v in x.items() if lattice.contains(n)})


def expand(c: Signal, lattice: Lattice) -> Signal:
    """Zero-fill a signal on M to the whole group; rejects support off M."""
    if c.group != lattice.group:
        raise GroupMismatchError(f"signal on {c.group}, lattice in {lattice.group}")
    if isinstance(lattice, FiniteLattice) and c.is_dense:
        if np.any(c.to_array()[~lattice.mask] != 0):
            raise LatticeError("expand input is supported off the lattice")
        return c
    off = [n for n, _ in c.items() if not lattice.contains(n)]
    if off:
        raise LatticeError(f"expand input is supported off the lattice, e.g. at {off[0]}")
    return c


def coset_of(n, lattice: Lattice) -> int:
    """Index i of the transversal element with n - l_i in M."""
    return lattice.coset_of(n)
