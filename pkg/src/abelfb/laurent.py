"""Multivariate Laurent polynomials and matrices over the torus T^d.

These give the exact spectral representation of finite filters on Z^d: the
polyphase entries E_{k,l}(z) and R_{l,k}(z) are Laurent polynomials in
z = (z_1, ..., z_d), and perfect reconstruction becomes the polynomial
identity R(z) E(z) = I, which can be checked coefficient by coefficient.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

PRUNE_TOL = 1e-12
"""Coefficients with modulus at or below this are dropped."""

IDENTITY_TOL = 1e-10


class LaurentPoly:
    """A finite sum of terms c * z^k with integer exponent vectors k."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping | Iterable = ()):
        self.dim = int(dim)
        acc: dict[tuple, complex] = {}
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        for k, c in pairs:
            k = tuple(int(v) for v in k)
            if len(k) != self.dim:
                raise ValueError(f"exponent {k} does not have {self.dim} components")
            acc[k] = acc.get(k, 0j) + complex(c)
        self.terms = {k: c for k, c in acc.items() if abs(c) > PRUNE_TOL}

    @classmethod
    def constant(cls, dim: int, c: complex) -> "LaurentPoly":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def monomial(cls, exponent: Sequence[int], c: complex = 1.0) -> "LaurentPoly":
        return cls(len(exponent), {tuple(exponent): c})

    @classmethod
    def var(cls, dim: int, j: int) -> "LaurentPoly":
        """The coordinate z_{j+1}."""
        k = [0] * dim
        k[j] = 1
        return cls(dim, {tuple(k): 1.0})

    def _check(self, other: "LaurentPoly"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return LaurentPoly.constant(self.dim, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0j) + c
        return LaurentPoly(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.dim, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = complex(other)
            return LaurentPoly(self.dim, {k: c * v for k, v in self.terms.items()})
        self._check(other)
        out: dict[tuple, complex] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0j) + c1 * c2
        return LaurentPoly(self.dim, out)

    __rmul__ = __mul__

    def adjoint(self) -> "LaurentPoly":
        """c z^k -> conj(c) z^{-k}: the pointwise complex conjugate on |z| = 1."""
        return LaurentPoly(self.dim, {tuple(-v for v in k): np.conj(c) for k, c in self.terms.items()})

    def __call__(self, theta) -> complex:
        return complex(self.eval_grid(np.atleast_2d(np.asarray(theta, dtype=float)))[0])

    def eval_grid(self, thetas: np.ndarray) -> np.ndarray:
        """Evaluate at z = exp(2 pi i theta) for each row of ``thetas``."""
        thetas = np.asarray(thetas, dtype=float).reshape(-1, self.dim)
        if not self.terms:
            return np.zeros(len(thetas), dtype=complex)
        exps = np.array(list(self.terms), dtype=float)
        coefs = np.array(list(self.terms.values()), dtype=complex)
        return np.exp(2j * np.pi * thetas @ exps.T) @ coefs

    def max_coef(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def is_zero(self, tol: float = PRUNE_TOL) -> bool:
        return self.max_coef() <= tol

    def is_constant(self, tol: float = PRUNE_TOL) -> bool:
        zero = (0,) * self.dim
        return all(abs(c) <= tol for k, c in self.terms.items() if k != zero)

    @property
    def constant_term(self) -> complex:
        return self.terms.get((0,) * self.dim, 0j)

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = LaurentPoly.constant(self.dim, other)
        if not isinstance(other, LaurentPoly) or other.dim != self.dim:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda e: tuple(reversed(e))):
            mono = "*".join(f"z{j + 1}^{e}" for j, e in enumerate(k) if e)
            parts.append(f"({self.terms[k]:.6g})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


class LaurentMatrix:
    """A rectangular grid of Laurent polynomials sharing one dimension."""

    __slots__ = ("dim", "entries")

    def __init__(self, entries: Sequence[Sequence[LaurentPoly]], dim: int | None = None):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            if dim is None:
                raise ValueError("cannot infer dimension of an empty matrix")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged LaurentMatrix")
        dims = {p.dim for r in rows for p in r}
        if dim is not None:
            dims.add(dim)
        if len(dims) != 1:
            raise ValueError(f"entries have mixed dimensions {dims}")
        self.dim = dims.pop()
        self.entries = tuple(tuple(r) for r in rows)

    @classmethod
    def zeros(cls, rows: int, cols: int, dim: int) -> "LaurentMatrix":
        return cls([[LaurentPoly(dim) for _ in range(cols)] for _ in range(rows)], dim)

    @classmethod
    def identity(cls, n: int, dim: int) -> "LaurentMatrix":
        return cls.from_constant(np.eye(n), dim)

    @classmethod
    def from_constant(cls, array, dim: int) -> "LaurentMatrix":
        array = np.atleast_2d(np.asarray(array, dtype=complex))
        return cls([[LaurentPoly.constant(dim, v) for v in row] for row in array], dim)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), (len(self.entries[0]) if self.entries else 0)

    def __getitem__(self, ij) -> LaurentPoly:
        i, j = ij
        return self.entries[i][j]

    def _same_shape(self, other: "LaurentMatrix"):
        if self.dim != other.dim or self.shape != other.shape:
            raise ValueError(f"shape/dim mismatch: {self.shape}/{self.dim} vs {other.shape}/{other.dim}")

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._same_shape(other)
        return LaurentMatrix([[a + b for a, b in zip(ra, rb)]
                              for ra, rb in zip(self.entries, other.entries)], self.dim)

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._same_shape(other)
        return LaurentMatrix([[a - b for a, b in zip(ra, rb)]
                              for ra, rb in zip(self.entries, other.entries)], self.dim)

    def __neg__(self):
        return self * -1

    def __mul__(self, c) -> "LaurentMatrix":
        if isinstance(c, LaurentMatrix):
            raise TypeError("use @ for matrix products")
        return LaurentMatrix([[p * c for p in row] for row in self.entries], self.dim)

    __rmul__ = __mul__

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        (r, n), (n2, c) = self.shape, other.shape
        if n != n2 or self.dim != other.dim:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(r):
            row = []
            for j in range(c):
                acc = LaurentPoly(self.dim)
                for k in range(n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return LaurentMatrix(out, self.dim)

    def adjoint(self) -> "LaurentMatrix":
        """Conjugate transpose on the unit torus."""
        r, c = self.shape
        return LaurentMatrix([[self.entries[i][j].adjoint() for i in range(r)] for j in range(c)],
                             self.dim)

    def trace(self) -> LaurentPoly:
        acc = LaurentPoly(self.dim)
        for i in range(min(self.shape)):
            acc = acc + self.entries[i][i]
        return acc

    def eval(self, theta) -> np.ndarray:
        """Entrywise evaluation at z = exp(2 pi i theta)."""
        theta = np.asarray(theta, dtype=float).reshape(1, -1)
        if theta.shape[1] != self.dim:
            raise ValueError(f"theta has {theta.shape[1]} components, matrix has dim {self.dim}")
        return self.eval_grid(theta)[0]

    def eval_grid(self, thetas: np.ndarray) -> np.ndarray:
        """Evaluate at many torus points; returns shape (points, rows, cols)."""
        thetas = np.asarray(thetas, dtype=float).reshape(-1, self.dim)
        r, c = self.shape
        out = np.empty((len(thetas), r, c), dtype=complex)
        for i in range(r):
            for j in range(c):
                out[:, i, j] = self.entries[i][j].eval_grid(thetas)
        return out

    def identity_residual(self) -> float:
        """Largest coefficient modulus of self - I (square matrices)."""
        r, c = self.shape
        if r != c:
            raise ValueError(f"identity check needs a square matrix, got {self.shape}")
        diff = self - LaurentMatrix.identity(r, self.dim)
        return max((p.max_coef() for row in diff.entries for p in row), default=0.0)

    def charpoly_and_adjugate(self) -> tuple[list[LaurentPoly], "LaurentMatrix"]:
        """Faddeev-LeVerrier: characteristic coefficients c_0..c_n and adj(A).

        det(lambda I - A) = sum_k c_k lambda^k.  Only divisions by integers
        occur, so the result stays within Laurent polynomials.
        """
        n, c = self.shape
        if n != c:
            raise ValueError("adjugate needs a square matrix")
        ident = LaurentMatrix.identity(n, self.dim)
        coeffs = [LaurentPoly(self.dim)] * (n + 1)
        coeffs[n] = LaurentPoly.constant(self.dim, 1.0)
        m = LaurentMatrix.zeros(n, n, self.dim)
        for k in range(1, n + 1):
            m = self @ m + _scalar_diag(ident, coeffs[n - k + 1])
            coeffs[n - k] = (self @ m).trace() * (-1.0 / k)
        adj = m * ((-1) ** (n + 1))
        return coeffs, adj

    def det(self) -> LaurentPoly:
        coeffs, _ = self.charpoly_and_adjugate()
        return coeffs[0] * ((-1) ** self.shape[0])

    def adjugate(self) -> "LaurentMatrix":
        return self.charpoly_and_adjugate()[1]

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        if self.shape != other.shape or self.dim != other.dim:
            return False
        return all(a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))

    __hash__ = None

    def __repr__(self):
        rows = ",\n ".join("[" + ", ".join(repr(p) for p in row) + "]" for row in self.entries)
        return f"LaurentMatrix(dim={self.dim}, [\n {rows}])"


def _scalar_diag(ident: LaurentMatrix, p: LaurentPoly) -> LaurentMatrix:
    n = ident.shape[0]
    return LaurentMatrix([[p if i == j else LaurentPoly(p.dim) for j in range(n)] for i in range(n)], p.dim)


def lp_add(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    return a + b


def lp_mul(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    return a @ b


def lp_conjugate_transpose(a: LaurentMatrix) -> LaurentMatrix:
    return a.adjoint()


def lp_eval(a: LaurentMatrix, theta) -> np.ndarray:
    return a.eval(theta)


def lp_is_identity(a: LaurentMatrix, tol: float = IDENTITY_TOL) -> bool:
    """Exact polynomial test of A(z) = I, valid for every z on the torus at once."""
    return a.identity_residual() <= tol
