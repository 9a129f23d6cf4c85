"""Exact linear algebra over the integers and over Z/p^N.

Matrices are plain nested sequences of Python ints on the way in. The Smith
normal form and the modular solvers run on numpy arrays, using ``int64``
only when no intermediate product can overflow and ``object`` (Python ints)
otherwise, so every result is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

Matrix = Sequence[Sequence[int]]


def valuation(x: int, p: int) -> int | None:
    """p-adic valuation of an integer; ``None`` for zero."""
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def shape(A: Matrix, cols: int | None = None) -> tuple[int, int]:
    rows = len(A)
    if rows:
        return rows, len(A[0])
    return 0, cols or 0


def _dtype(modulus: int, size: int):
    # int64 is safe when a length-`size` dot product of residues cannot overflow
    if (size + 2) * modulus * modulus < 2**62:
        return np.int64
    return object


def _as_array(A: Matrix, rows: int, cols: int, modulus: int, dtype) -> np.ndarray:
    out = np.zeros((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = int(A[i][j]) % modulus
    return out.astype(dtype) if dtype is not object else out


def _identity(n: int, dtype) -> np.ndarray:
    out = np.zeros((n, n), dtype=dtype)
    for i in range(n):
        out[i, i] = 1
    return out


def to_lists(a: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in row] for row in a]


@dataclass(frozen=True)
class SmithForm:
    """Smith normal form ``left @ A @ right == diag(p**exponents)`` mod p^N.

    ``exponents`` has ``min(rows, cols)`` entries; an exponent equal to ``N``
    stands for a diagonal entry that is zero modulo p^N (value unknown beyond
    the working precision). ``left_inverse`` is only filled when requested.
    """

    p: int
    N: int
    rows: int
    cols: int
    exponents: tuple[int, ...]
    left: tuple[tuple[int, ...], ...] | None
    right: tuple[tuple[int, ...], ...] | None
    left_inverse: tuple[tuple[int, ...], ...] | None = None

    @property
    def modulus(self) -> int:
        return self.p**self.N

    @property
    def saturated(self) -> bool:
        return any(a == self.N for a in self.exponents)

    def diagonal(self) -> list[list[int]]:
        m = self.modulus
        D = [[0] * self.cols for _ in range(self.rows)]
        for k, a in enumerate(self.exponents):
            D[k][k] = pow(self.p, a) % m
        return D


def _snf_arrays(A: Matrix, p: int, N: int, cols: int | None, want_left: bool,
                want_right: bool, want_left_inverse: bool):
    rows, cols = shape(A, cols)
    m = p**N
    dt = _dtype(m, max(rows, cols))
    M = _as_array(A, rows, cols, m, dt)
    L = _identity(rows, dt) if want_left else None
    Linv = _identity(rows, dt) if want_left_inverse else None
    R = _identity(cols, dt) if want_right else None
    powers = [p**v for v in range(N + 1)]
    exps: list[int] = []
    for k in range(min(rows, cols)):
        sub = M[k:, k:]
        if not sub.any():
            break
        # pivot: minimal valuation, ties broken by (row, col) lexicographically
        for v in range(N):
            mask = (sub % powers[v + 1]) != 0
            if mask.any():
                break
        i, j = divmod(int(np.argmax(mask)), sub.shape[1])
        i += k
        j += k
        if i != k:
            M[[k, i]] = M[[i, k]]
            if L is not None:
                L[[k, i]] = L[[i, k]]
            if Linv is not None:
                Linv[:, [k, i]] = Linv[:, [i, k]]
        if j != k:
            M[:, [k, j]] = M[:, [j, k]]
            if R is not None:
                R[:, [k, j]] = R[:, [j, k]]
        pv = powers[v]
        unit = (int(M[k, k]) // pv) % m
        unit_inv = pow(unit, -1, m)
        M[k] = (M[k] * unit_inv) % m
        if L is not None:
            L[k] = (L[k] * unit_inv) % m
        if Linv is not None:
            Linv[:, k] = (Linv[:, k] * unit) % m
        c = M[k + 1:, k] // pv
        if c.any():
            M[k + 1:] = (M[k + 1:] - c[:, None] * M[k][None, :]) % m
            if L is not None:
                L[k + 1:] = (L[k + 1:] - c[:, None] * L[k][None, :]) % m
            if Linv is not None:
                Linv[:, k] = (Linv[:, k] + Linv[:, k + 1:] @ c) % m
        c = M[k, k + 1:] // pv
        if c.any():
            M[k, k + 1:] = 0
            if R is not None:
                R[:, k + 1:] = (R[:, k + 1:] - R[:, k][:, None] * c[None, :]) % m
        exps.append(v)
    exps.extend([N] * (min(rows, cols) - len(exps)))
    return rows, cols, tuple(exps), L, R, Linv


def _frozen(a: np.ndarray | None):
    if a is None:
        return None
    return tuple(tuple(int(x) for x in row) for row in a)


def snf_mod_prime_power(A: Matrix, p: int, N: int, *, cols: int | None = None,
                        left: bool = True, right: bool = True,
                        left_inverse: bool = False) -> SmithForm:
    """Smith normal form of ``A`` over Z/p^N.

    ``cols`` only matters for matrices with zero rows. Transform matrices can
    be skipped when the caller does not need them.
    """
    if N < 1:
        raise ValueError("precision N must be at least 1")
    rows, cols, exps, L, R, Linv = _snf_arrays(A, p, N, cols, left, right, left_inverse)
    return SmithForm(p, N, rows, cols, exps, _frozen(L), _frozen(R), _frozen(Linv))


def rank_exact(A: Matrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    M = [[int(x) for x in row] for row in A]
    rows, cols = shape(M)
    rank = 0
    prev = 1
    for c in range(cols):
        if rank == rows:
            break
        piv = next((i for i in range(rank, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        top = M[rank]
        a = top[c]
        for i in range(rank + 1, rows):
            row = M[i]
            b = row[c]
            for j in range(c, cols):
                row[j] = (a * row[j] - b * top[j]) // prev
        prev = a
        rank += 1
    return rank


@dataclass(frozen=True)
class LinearSolution:
    """Solution set ``particular + <kernel>`` of a system over Z/p^t.

    Each kernel generator comes with the exponent ``a`` of its order p^a; the
    generators are independent, so the kernel is the direct sum of the cyclic
    groups they span.
    """

    modulus: int
    particular: tuple[int, ...]
    kernel: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def kernel_exponents(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.kernel)


def _kernel_from(snf: SmithForm, t: int):
    p, m = snf.p, snf.modulus
    R = snf.right
    gens = []
    for k in range(snf.cols):
        a = snf.exponents[k] if k < len(snf.exponents) else t
        if a == 0:
            continue
        scale = p ** (t - a)
        gens.append((tuple((R[i][k] * scale) % m for i in range(snf.cols)), a))
    return tuple(gens)


def kernel_mod(A: Matrix, p: int, t: int, cols: int | None = None):
    """Generators of ``{x : A x = 0 mod p^t}`` with their order exponents."""
    if t == 0:
        return ()
    snf = snf_mod_prime_power(A, p, t, cols=cols, left=False)
    return _kernel_from(snf, t)


def solve_linear_mod(A: Matrix, b: Sequence[int], p: int, t: int,
                     cols: int | None = None) -> LinearSolution | None:
    """All solutions of ``A x = b`` modulo p^t, or ``None`` if there are none."""
    rows, cols = shape(A, cols)
    if len(b) != rows:
        raise ValueError("right-hand side length does not match the matrix")
    m = p**t
    if t == 0:
        return LinearSolution(1, (0,) * cols, ())
    snf = snf_mod_prime_power(A, p, t, cols=cols)
    L, R = snf.left, snf.right
    Lb = [sum(L[i][j] * b[j] for j in range(rows)) % m for i in range(rows)]
    z = [0] * cols
    for k in range(rows):
        a = snf.exponents[k] if k < len(snf.exponents) else t
        if Lb[k] % p**a != 0:
            return None
        if a < t:
            z[k] = Lb[k] // p**a
    x = tuple(sum(R[i][k] * z[k] for k in range(cols)) % m for i in range(cols))
    return LinearSolution(m, x, _kernel_from(snf, t))


def mat_mul(A: Matrix, B: Matrix, modulus: int | None = None) -> list[list[int]]:
    inner = len(B)
    cols = len(B[0]) if inner else 0
    out = []
    for row in A:
        new = [sum(row[k] * B[k][j] for k in range(inner)) for j in range(cols)]
        if modulus is not None:
            new = [x % modulus for x in new]
        out.append(new)
    return out


def mat_vec(A: Matrix, x: Sequence[int], modulus: int | None = None) -> list[int]:
    out = [sum(a * b for a, b in zip(row, x)) for row in A]
    if modulus is not None:
        out = [v % modulus for v in out]
    return out


def transpose(A: Matrix, cols: int | None = None) -> list[list[int]]:
    rows, cols = shape(A, cols)
    return [[A[i][j] for i in range(rows)] for j in range(cols)]


def subgroup_exponents(vectors: Sequence[Sequence[int]], divisors: Sequence[int],
                       p: int) -> tuple[int, ...]:
    """Cyclic decomposition of the subgroup of ``⊕ Z/p^{e_i}`` spanned by ``vectors``.

    Uses ``|p^j H| = |G| / |G / p^j H|`` for every j; the quotient orders come
    from Smith forms of ``[p^j V | diag(p^e)]``, which are exact at precision
    ``max(e) + 1`` because the quotient is killed by ``p^max(e)``.
    """
    k = len(divisors)
    if k == 0 or not vectors:
        return ()
    top = max(divisors)
    total = sum(divisors)
    N = top + 1
    orders = []
    for j in range(top + 1):
        cols = [[(p**j) * v[i] for i in range(k)] for v in vectors]
        cols += [[p**e if i == r else 0 for i in range(k)] for r, e in enumerate(divisors)]
        A = transpose(cols, k)
        exps = snf_mod_prime_power(A, p, N, left=False, right=False).exponents
        orders.append(total - sum(exps))
    orders.append(0)
    out: list[int] = []
    for j in range(top + 1):
        # summands of order >= p^(j+1) minus those of order >= p^(j+2)
        at_least = orders[j] - orders[j + 1]
        nxt = orders[j + 1] - orders[j + 2] if j + 2 < len(orders) else 0
        out.extend([j + 1] * (at_least - nxt))
    return tuple(sorted(out))
