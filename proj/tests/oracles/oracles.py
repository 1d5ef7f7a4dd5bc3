"""Independent reference values frozen into the C++ tests.

Weingarten: exact inverse of the Gram matrix G[s][t] = N^cycles(s t^-1) over S4.
Two-qubit moments: for the spectrum {1, -1} every local observable is n.sigma
with n on the unit sphere and Haar averaging is the uniform sphere average.
The skew information is quadratic in n, so a Gauss-Legendre x trapezoid
product rule integrates its square exactly.
"""
from fractions import Fraction
from itertools import permutations

import numpy as np
from scipy.linalg import sqrtm


def cycles(p):
    seen, c = set(), 0
    for i in range(len(p)):
        if i not in seen:
            c += 1
            j = i
            while j not in seen:
                seen.add(j)
                j = p[j]
    return c


def weingarten(n):
    perms = list(permutations(range(4)))
    inv = lambda p: tuple(sorted(range(4), key=lambda i: p[i]))
    comp = lambda a, b: tuple(a[b[i]] for i in range(4))
    g = [[Fraction(n) ** cycles(comp(s, inv(t))) for t in perms] for s in perms]
    size = len(perms)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(g)]
    for col in range(size):
        piv = next(r for r in range(col, size) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    ident = perms.index((0, 1, 2, 3))
    out = {}
    for k, p in enumerate(perms):
        key = tuple(sorted(len_cycle for len_cycle in cycle_type(p)))
        out.setdefault(key, aug[ident][size + k])
    return out


def cycle_type(p):
    seen, out = set(), []
    for i in range(len(p)):
        if i not in seen:
            j, length = i, 0
            while j not in seen:
                seen.add(j)
                j = p[j]
                length += 1
            out.append(length)
    return out


PAULI = [np.array([[0, 1], [1, 0]], complex), np.array([[0, -1j], [1j, 0]]),
         np.array([[1, 0], [0, -1]], complex)]


def sphere_moments(rho, order=12):
    s = sqrtm(rho)
    x, w = np.polynomial.legendre.leggauss(order)
    phis = np.arange(2 * order) * np.pi / order
    m1 = m2 = 0.0
    for ct, wt in zip(x, w):
        st = np.sqrt(1 - ct * ct)
        for ph in phis:
            n = (st * np.cos(ph), st * np.sin(ph), ct)
            h = np.kron(sum(c * p for c, p in zip(n, PAULI)), np.eye(2))
            val = np.trace(rho @ h @ h).real - np.trace(s @ h @ s @ h).real
            weight = wt / 2 / (2 * order)
            m1 += weight * val
            m2 += weight * val * val
    return m1, m2 - m1 * m1


def states():
    """Fixed two-qubit states with simple entries (mirrored in test_moments.cpp)."""
    a = np.array([[0.4, 0.1, 0.0, 0.05j],
                  [0.1, 0.3, 0.02, 0.0],
                  [0.0, 0.02, 0.2, 0.03],
                  [-0.05j, 0.0, 0.03, 0.1]], complex)
    b = np.diag([0.5, 0.25, 0.15, 0.1]).astype(complex)
    b[0, 3] = b[3, 0] = 0.2
    c = np.full((4, 4), 0.0, complex)
    psi = np.array([0.6, 0.0, 0.0, 0.8])
    c += 0.7 * np.outer(psi, psi) + 0.3 * np.eye(4) / 4
    return {"mixed_a": a, "x_state": b, "noisy_schmidt": c}


if __name__ == "__main__":
    for n in (4, 5, 7):
        print("N =", n, {k: str(v) for k, v in sorted(weingarten(n).items())})
    for name, rho in states().items():
        assert np.all(np.linalg.eigvalsh(rho) > -1e-12), name
        m, v = sphere_moments(rho)
        print(f"{name}: mean={m:.17g} variance={v:.17g}")
