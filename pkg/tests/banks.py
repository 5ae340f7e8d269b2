"""Fixture banks and random generators shared by the test modules."""
import numpy as np

from abelfb import FilterBank, Group, Signal, involution, lattice_from_generators, lattice_from_matrix
from abelfb.lattice import quincunx

S2 = 1 / np.sqrt(2)


def delta(group, *n):
    return Signal.delta(group, n)


def z4():
    G = Group.finite(4)
    return G, lattice_from_generators(G, [(2,)])


def lazy_bank():
    G, M = z4()
    return FilterBank(M, [delta(G, 0), delta(G, 3)], [delta(G, 0), delta(G, 1)])


def haar_analysis(G):
    return [(delta(G, 0) + delta(G, -1)) * S2, (delta(G, 0) - delta(G, -1)) * S2]


def haar_bank(group=None, lattice=None):
    if group is None:
        group, lattice = z4()
    h = haar_analysis(group)
    return FilterBank(lattice, h, [involution(f) for f in h])


def corrupted_haar_bank():
    bank = haar_bank()
    g1, g2 = bank.synthesis
    return bank.with_synthesis([g1, -g2])


def k3_bank():
    G, M = z4()
    return FilterBank(M, [delta(G, 0), delta(G, 3), (delta(G, 0) + delta(G, 3)) * S2])


def repeated_bank():
    G, M = z4()
    return FilterBank(M, [delta(G, 0), delta(G, 0)])


def integer_haar_1d():
    Z = Group.integer(1)
    return haar_bank(Z, lattice_from_matrix([[2]]))


def separable_haar_taps():
    """Tensor products of the 1-D Haar low/high pair, as {(n1, n2): value} dicts."""
    lo = {0: S2, -1: S2}
    hi = {0: S2, -1: -S2}
    return [{(a, b): u * v for a, u in p.items() for b, v in q.items()}
            for p in (lo, hi) for q in (lo, hi)]


def separable_haar_2d(group=None):
    if group is None:
        group = Group.integer(2)
        lattice = lattice_from_matrix([[2, 0], [0, 2]])
    else:
        lattice = lattice_from_generators(group, [(2, 0), (0, 2)])
    h = [Signal.from_terms(group, t) for t in separable_haar_taps()]
    return FilterBank(lattice, h, [involution(f) for f in h])


def quincunx_lazy_bank(P=2, Q=2):
    """Two-channel lazy splitting on the quincunx lattice of Z_2P x Z_2Q."""
    M = quincunx(P, Q)
    G = M.group
    return FilterBank(M, [delta(G, 0, 0), delta(G, -1, 0)], [delta(G, 0, 0), delta(G, 1, 0)])


def fixture_banks():
    """All finite fixture banks, by name."""
    return {
        "lazy": lazy_bank(),
        "haar": haar_bank(),
        "k3": k3_bank(),
        "repeated": repeated_bank(),
        "corrupted_haar": corrupted_haar_bank(),
        "quincunx_lazy": quincunx_lazy_bank(),
        "separable_haar_z16": separable_haar_2d(Group.finite(16, 16)),
    }


def random_signal(rng, group):
    shape = group.orders
    return Signal.from_array(group, rng.normal(size=shape) + 1j * rng.normal(size=shape))


def random_group(rng, max_size=512):
    while True:
        d = int(rng.integers(1, 4))
        orders = tuple(int(s) for s in rng.integers(1, 13, size=d))
        if 2 <= int(np.prod(orders)) <= max_size:
            return Group.finite(*orders)


def random_lattice(rng, group):
    """A sublattice generated by divisor multiples of the axes plus an optional random element."""
    gens = []
    for j, s in enumerate(group.orders):
        divisors = [q for q in range(1, s + 1) if s % q == 0]
        e = [0] * group.dim
        e[j] = int(rng.choice(divisors))
        gens.append(tuple(e))
    if rng.random() < 0.5:
        gens.append(tuple(int(rng.integers(0, s)) for s in group.orders))
    return lattice_from_generators(group, gens)


def random_filter(rng, group, max_taps=5):
    taps = {}
    for _ in range(int(rng.integers(1, max_taps + 1))):
        n = tuple(int(rng.integers(0, s)) for s in group.orders)
        taps[n] = complex(rng.normal(), rng.normal())
    return Signal.from_terms(group, taps)


def random_bank(rng, max_size=512):
    group = random_group(rng, max_size)
    lattice = random_lattice(rng, group)
    K = int(rng.integers(max(1, lattice.index - 1), lattice.index + 3))
    return FilterBank(lattice, [random_filter(rng, group) for _ in range(K)])


ACCEPTANCE_LINES: list = []
