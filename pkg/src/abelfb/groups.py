"""Discrete abelian groups, signals on them, characters and Fourier analysis.

Two backends are supported:

* ``Group.finite(s_1, ..., s_d)`` -- the product Z_{s_1} x ... x Z_{s_d}.  Its
  dual group is again Z_{s_1} x ... x Z_{s_d}; dual points are integer tuples.
* ``Group.integer(d)`` -- the lattice Z^d.  Its dual group is the torus T^d;
  dual points are real tuples ``theta`` in [0, 1)^d standing for
  ``z = exp(2 pi i theta)``.

Group elements are plain tuples of ints.  Whenever an ordering of elements is
needed (transversals, dual representatives, serialisation) we use the
colexicographic order, i.e. the last coordinate is the most significant one.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import BackendError, GroupMismatchError

DENSE_LIMIT = 2**20
"""Finite signals on groups up to this cardinality are stored as dense arrays."""

# Below this many nonzeros, dense convolution is done by shift-and-add
# (exact up to one rounding per tap); above it, by FFT.
_SHIFT_ADD_TAPS = 64

Element = tuple


def colex_key(n: Sequence[int]) -> tuple:
    """Sort key for the colexicographic order (last coordinate most significant)."""
    return tuple(reversed(tuple(n)))


@dataclass(frozen=True)
class Group:
    """A finite product of cyclic groups or the integer lattice Z^d."""

    orders: tuple[int, ...] | None = None
    rank: int | None = None

    def __post_init__(self):
        if (self.orders is None) == (self.rank is None):
            raise ValueError("give exactly one of `orders` (finite) or `rank` (integer)")
        if self.orders is not None:
            orders = tuple(int(s) for s in self.orders)
            if not orders or any(s < 1 for s in orders):
                raise ValueError(f"cyclic orders must be positive, got {self.orders}")
            object.__setattr__(self, "orders", orders)
        elif int(self.rank) < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")

    @classmethod
    def finite(cls, *orders: int) -> "Group":
        if len(orders) == 1 and not isinstance(orders[0], (int, np.integer)):
            orders = tuple(orders[0])
        return cls(orders=tuple(orders))

    @classmethod
    def integer(cls, rank: int) -> "Group":
        return cls(rank=int(rank))

    @property
    def is_finite(self) -> bool:
        return self.orders is not None

    @property
    def dim(self) -> int:
        return len(self.orders) if self.is_finite else self.rank

    @property
    def size(self) -> int | None:
        """Cardinality |G|, or None for Z^d."""
        return math.prod(self.orders) if self.is_finite else None

    @property
    def shape(self) -> tuple[int, ...]:
        if not self.is_finite:
            raise BackendError("Z^d has no finite array shape")
        return self.orders

    @property
    def zero(self) -> Element:
        return (0,) * self.dim

    def __str__(self):
        if self.is_finite:
            return " x ".join(f"Z_{s}" for s in self.orders)
        return f"Z^{self.rank}"

    # -- element arithmetic -------------------------------------------------

    def element(self, n: Iterable[int]) -> Element:
        """Validate and canonicalise a group element (reduces mod orders)."""
        n = tuple(int(v) for v in (n if isinstance(n, Iterable) else (n,)))
        if len(n) != self.dim:
            raise GroupMismatchError(f"element {n} has length {len(n)}, group {self} has dim {self.dim}")
        if self.is_finite:
            return tuple(v % s for v, s in zip(n, self.orders))
        return n

    def add(self, a, b) -> Element:
        return self.element(u + v for u, v in zip(a, b))

    def sub(self, a, b) -> Element:
        return self.element(u - v for u, v in zip(a, b))

    def neg(self, a) -> Element:
        return self.element(-u for u in a)

    def elements(self) -> Iterator[Element]:
        """All elements in colex order (finite groups only)."""
        if not self.is_finite:
            raise BackendError("cannot enumerate Z^d")
        for rev in itertools.product(*(range(s) for s in reversed(self.orders))):
            yield tuple(reversed(rev))

    def dual_elements(self) -> Iterator[tuple]:
        """All dual points in colex order; the dual of Z_s is Z_s."""
        return self.elements()

    def dual_point(self, xi: Iterable) -> tuple:
        """Canonicalise a dual point: reduce mod orders, or mod 1 on the torus."""
        xi = tuple(xi if isinstance(xi, Iterable) else (xi,))
        if len(xi) != self.dim:
            raise GroupMismatchError(f"dual point {xi} does not match {self}")
        if self.is_finite:
            return tuple(int(v) % s for v, s in zip(xi, self.orders))
        return tuple(float(v) % 1.0 for v in xi)

    def phase(self, n, xi) -> float:
        """The real number t in [0, 1) with <n, xi> = exp(2 pi i t)."""
        n = self.element(n)
        xi = self.dual_point(xi)
        if self.is_finite:
            # exact integer arithmetic over the common denominator
            big = math.lcm(*self.orders)
            num = sum(a * b * (big // s) for a, b, s in zip(n, xi, self.orders))
            return (num % big) / big
        return math.fsum(a * t for a, t in zip(n, xi)) % 1.0


def character(group: Group, n, xi) -> complex:
    """Evaluate the character pairing <n, xi>.

    On Z_{s_1} x ... x Z_{s_d} this is prod_j exp(2 pi i n_j xi_j / s_j); on Z^d
    with xi = theta it is z^n for z = exp(2 pi i theta).
    """
    t = group.phase(n, xi)
    return complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t))


def phase_matrix(group: Group, ns: Sequence, xis: Sequence) -> np.ndarray:
    """Matrix of phases t[i, j] with <ns[i], xis[j]> = exp(2 pi i t[i, j])."""
    ns = np.asarray(ns, dtype=np.int64).reshape(len(ns), group.dim)
    if group.is_finite:
        orders = np.asarray(group.orders, dtype=np.int64)
        big = math.lcm(*group.orders)
        xis = np.asarray(xis, dtype=np.int64).reshape(len(xis), group.dim)
        num = (ns % orders) @ ((xis % orders) * (big // orders)).T
        return (num % big) / big
    xis = np.asarray(xis, dtype=float).reshape(len(xis), group.dim)
    return (ns @ xis.T) % 1.0


def character_matrix(group: Group, ns: Sequence, xis: Sequence) -> np.ndarray:
    """Matrix [<ns[i], xis[j]>]."""
    return np.exp(2j * np.pi * phase_matrix(group, ns, xis))


class Signal:
    """A complex-valued, finitely supported function on a group.

    Signals on finite groups with at most ``DENSE_LIMIT`` elements are stored
    as a dense array of shape ``group.orders``; everything else is stored as a
    dictionary from element to value with zero entries dropped.  Both forms
    have the same semantics.  Instances are immutable.
    """

    __slots__ = ("group", "_array", "_terms")

    def __init__(self, group: Group, terms: Mapping | None = None, array=None):
        self.group = group
        self._array = None
        self._terms = None
        if array is not None:
            if not group.is_finite:
                raise BackendError("dense arrays are only meaningful on finite groups")
            arr = np.array(array, dtype=complex)
            if arr.shape != group.orders:
                raise GroupMismatchError(f"array shape {arr.shape} does not match {group}")
            if group.size <= DENSE_LIMIT:
                arr.setflags(write=False)
                self._array = arr
            else:
                idx = np.argwhere(arr != 0)
                self._terms = {tuple(int(v) for v in i): complex(arr[tuple(i)]) for i in idx}
            return
        acc: dict[Element, complex] = {}
        for n, v in (terms or {}).items():
            n = group.element(n)
            acc[n] = acc.get(n, 0j) + complex(v)
        if group.is_finite and group.size <= DENSE_LIMIT:
            arr = np.zeros(group.orders, dtype=complex)
            for n, v in acc.items():
                arr[n] = v
            arr.setflags(write=False)
            self._array = arr
        else:
            self._terms = {n: v for n, v in acc.items() if v != 0}

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_terms(cls, group: Group, terms: Mapping | Iterable) -> "Signal":
        if not isinstance(terms, Mapping):
            pairs = list(terms)
            terms = {}
            for n, v in pairs:
                n = group.element(n)
                terms[n] = terms.get(n, 0j) + v
        return cls(group, terms=terms)

    @classmethod
    def from_array(cls, group: Group, array) -> "Signal":
        return cls(group, array=array)

    @classmethod
    def delta(cls, group: Group, n=None, value: complex = 1.0) -> "Signal":
        return cls(group, terms={group.zero if n is None else group.element(n): value})

    @classmethod
    def zeros(cls, group: Group) -> "Signal":
        return cls(group, terms={})

    # -- access -------------------------------------------------------------

    @property
    def is_dense(self) -> bool:
        return self._array is not None

    def __getitem__(self, n) -> complex:
        n = self.group.element(n)
        if self._array is not None:
            return complex(self._array[n])
        return self._terms.get(n, 0j)

    def items(self) -> list[tuple[Element, complex]]:
        """Nonzero (element, value) pairs in colex order."""
        if self._array is not None:
            idx = np.argwhere(self._array != 0)
            out = [(tuple(int(v) for v in i), complex(self._array[tuple(i)])) for i in idx]
        else:
            out = list(self._terms.items())
        out.sort(key=lambda p: colex_key(p[0]))
        return out

    @property
    def support(self) -> list[Element]:
        return [n for n, _ in self.items()]

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.items()], dtype=complex)

    @property
    def nnz(self) -> int:
        if self._array is not None:
            return int(np.count_nonzero(self._array))
        return len(self._terms)

    def to_array(self) -> np.ndarray:
        """Dense copy over a finite group, indexed by element coordinates."""
        if not self.group.is_finite:
            raise BackendError("Z^d signals have no dense array form")
        if self._array is not None:
            return self._array.copy()
        arr = np.zeros(self.group.orders, dtype=complex)
        for n, v in self._terms.items():
            arr[n] = v
        return arr

    def norm(self, p: float = 2) -> float:
        vals = np.abs(self._array).ravel() if self._array is not None else np.abs(
            np.fromiter(self._terms.values(), dtype=complex, count=len(self._terms)))
        if p == np.inf:
            return float(vals.max(initial=0.0))
        return float(np.sum(vals**p) ** (1.0 / p))

    def inner(self, other: "Signal") -> complex:
        """<self, other> = sum_n self(n) conj(other(n))."""
        _check_same(self, other)
        if self._array is not None and other._array is not None:
            return complex(np.vdot(other._array, self._array))
        return complex(sum(v * np.conj(other[n]) for n, v in self.items()))

    # -- arithmetic ---------------------------------------------------------

    def _combine(self, other: "Signal", a: complex, b: complex) -> "Signal":
        _check_same(self, other)
        if self._array is not None and other._array is not None:
            return Signal(self.group, array=a * self._array + b * other._array)
        terms = {n: a * v for n, v in self.items()}
        for n, v in other.items():
            terms[n] = terms.get(n, 0j) + b * v
        return Signal(self.group, terms=terms)

    def __add__(self, other):
        return self._combine(other, 1, 1)

    def __sub__(self, other):
        return self._combine(other, 1, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, c):
        c = complex(c)
        if self._array is not None:
            return Signal(self.group, array=c * self._array)
        return Signal(self.group, terms={n: c * v for n, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / complex(c))

    def conj(self) -> "Signal":
        if self._array is not None:
            return Signal(self.group, array=np.conj(self._array))
        return Signal(self.group, terms={n: np.conj(v) for n, v in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Signal):
            return NotImplemented
        return self.group == other.group and self.items() == other.items()

    __hash__ = None

    def allclose(self, other: "Signal", atol: float = 1e-12) -> bool:
        return (self - other).norm(np.inf) <= atol

    def __repr__(self):
        items = self.items()
        shown = ", ".join(f"{n}: {v:.6g}" for n, v in items[:6])
        more = ", ..." if len(items) > 6 else ""
        return f"Signal({self.group}, {{{shown}{more}}})"


def _check_same(x: Signal, y: Signal) -> None:
    if x.group != y.group:
        raise GroupMismatchError(f"signals live on different groups: {x.group} vs {y.group}")


def translate(x: Signal, m) -> Signal:
    """(T_m x)(n) = x(n - m)."""
    G = x.group
    m = G.element(m)
    if x.is_dense:
        return Signal(G, array=np.roll(x._array, m, axis=tuple(range(G.dim))))
    return Signal(G, terms={G.add(n, m): v for n, v in x.items()})


def involution(x: Signal) -> Signal:
    """The involution x~(n) = conj(x(-n))."""
    G = x.group
    if x.is_dense:
        axes = tuple(range(G.dim))
        return Signal(G, array=np.roll(np.flip(np.conj(x._array), axis=axes), 1, axis=axes))
    return Signal(G, terms={G.neg(n): np.conj(v) for n, v in x.items()})


def convolve(x: Signal, y: Signal) -> Signal:
    """(x * y)(m) = sum_n x(n) y(m - n); indices wrap on finite groups."""
    _check_same(x, y)
    G = x.group
    if x.nnz > y.nnz:
        x, y = y, x
    if x.is_dense and y.is_dense:
        axes = tuple(range(G.dim))
        if x.nnz <= _SHIFT_ADD_TAPS:
            out = np.zeros(G.orders, dtype=complex)
            for n, v in x.items():
                out += v * np.roll(y._array, n, axis=axes)
            return Signal(G, array=out)
        out = np.fft.ifftn(np.fft.fftn(x._array) * np.fft.fftn(y._array))
        return Signal(G, array=out)
    terms: dict[Element, complex] = {}
    y_items = y.items()
    for n, v in x.items():
        for k, w in y_items:
            key = G.add(n, k)
            terms[key] = terms.get(key, 0j) + v * w
    return Signal(G, terms=terms)


def fourier(x: Signal) -> np.ndarray:
    """Full-group Fourier transform X(xi) = sum_n x(n) conj(<n, xi>).

    Returns an array of shape ``group.orders`` indexed by the dual point xi.
    Only available on finite groups; use :func:`fourier_at` on Z^d.
    """
    if not x.group.is_finite:
        raise BackendError("dense spectra exist only for finite groups; use fourier_at")
    return np.fft.fftn(x.to_array())


def inverse_fourier(group: Group, spectrum) -> Signal:
    """x(n) = (1/|G|) sum_xi X(xi) <n, xi>  (Haar measure of total mass 1)."""
    if not group.is_finite:
        raise BackendError("dense spectra exist only for finite groups")
    spectrum = np.asarray(spectrum, dtype=complex)
    if spectrum.shape != group.orders:
        raise GroupMismatchError(f"spectrum shape {spectrum.shape} does not match {group}")
    return Signal(group, array=np.fft.ifftn(spectrum))


def fourier_at(x: Signal, xi) -> complex:
    """Evaluate the Fourier transform at one dual point (any backend).

    On Z^d this is the z-transform sum_n x(n) z^{-n} at z = exp(2 pi i theta).
    """
    items = x.items()
    if not items:
        return 0j
    xi = x.group.dual_point(xi)
    t = phase_matrix(x.group, [n for n, _ in items], [xi])[:, 0]
    vals = np.array([v for _, v in items])
    return complex(np.sum(vals * np.exp(-2j * np.pi * t)))
