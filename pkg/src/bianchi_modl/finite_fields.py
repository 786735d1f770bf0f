"""Small extensions F_{p^k} of a prime field, realised as F_p[x]/(f).

Elements are integer codes ``sum c_i p^i`` over the power basis ``1, x, ...,
x^{k-1}``; ``f`` is the least monic irreducible polynomial of degree ``k`` in
the order of its coefficient list, so the model (and every printed value) is
deterministic.  Polynomial factorisation over F_p is delegated to sympy.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np
from sympy import ZZ
from sympy.polys.galoistools import gf_factor, gf_irreducible_p

from . import linalg


def factor_poly(coeffs_high_first, p: int) -> list[tuple[tuple[int, ...], int]]:
    """Monic irreducible factors with multiplicities, sorted (degree, coefficients)."""
    c = [int(x) % p for x in coeffs_high_first]
    while c and c[0] == 0:
        c = c[1:]
    if len(c) <= 1:
        return []
    _, facs = gf_factor(c, p, ZZ)
    out = [(tuple(int(x) for x in f), e) for f, e in facs]
    return sorted(out, key=lambda fe: (len(fe[0]), fe[0]))


@lru_cache(maxsize=None)
def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Least monic irreducible of degree k (high degree first), lexicographic in the tail."""
    if k == 1:
        return (1, 0)
    for tail in product(range(p), repeat=k):
        f = [1, *tail]
        if f[-1] and gf_irreducible_p(f, p, ZZ):
            return tuple(f)
    raise ValueError("no irreducible polynomial")  # pragma: no cover


class GF:
    """F_{p^k}; codes in ``[0, p^k)``, prime-field elements have codes ``< p``."""

    def __init__(self, p: int, k: int):
        self.p, self.k = p, k
        self.q = p**k
        self.modulus = least_irreducible(p, k)
        # multiplication-by-x matrix on coefficient rows (low degree first)
        f_low = list(reversed(self.modulus))  # f_0 ... f_k with f_k = 1
        X = np.zeros((k, k), dtype=np.int64)
        for i in range(k - 1):
            X[i, i + 1] = 1
        X[k - 1, :] = [(-c) % p for c in f_low[:k]]
        self._X = X
        powers = [np.eye(k, dtype=np.int64)]
        for _ in range(k - 1):
            powers.append(linalg.matmul(powers[-1], X, p))
        self._powers = np.array(powers)  # (k, k, k)

    def __repr__(self):
        return "GF(%d^%d)" % (self.p, self.k)

    # --- conversions
    def coeffs(self, code: int) -> np.ndarray:
        out = np.zeros(self.k, dtype=np.int64)
        for i in range(self.k):
            code, out[i] = divmod(code, self.p)
        return out

    def code(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + int(c) % self.p
        return v

    def all_coeffs(self) -> np.ndarray:
        codes = np.arange(self.q, dtype=np.int64)
        out = np.zeros((self.q, self.k), dtype=np.int64)
        for i in range(self.k):
            codes, out[:, i] = np.divmod(codes, self.p)
        return out

    def mult_matrix(self, code: int) -> np.ndarray:
        """Matrix of ``v -> v * a`` on coefficient rows."""
        c = self.coeffs(code)
        return np.tensordot(c, self._powers, axes=1) % self.p

    # --- arithmetic on codes
    def mul(self, a: int, b: int) -> int:
        return self.code(linalg.matmul(self.coeffs(a)[None, :], self.mult_matrix(b), self.p)[0])

    def add(self, a: int, b: int) -> int:
        return self.code((self.coeffs(a) + self.coeffs(b)) % self.p)

    def neg(self, a: int) -> int:
        return self.code((-self.coeffs(a)) % self.p)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 1 if e == 0 else 0
        r, base = 1, a
        e %= self.q - 1
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            e >>= 1
        return r

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p) if a else 0

    def from_prime_field(self, x: int) -> int:
        return int(x) % self.p

    def is_prime_field(self, a: int) -> bool:
        return a < self.p

    def roots(self, poly_high_first) -> list[int]:
        """All roots in F_q of a polynomial with F_p coefficients (brute force, vectorised)."""
        stack = self._mult_stack(self.all_coeffs())
        acc = np.zeros((self.q, self.k), dtype=np.int64)
        for c in poly_high_first:
            # Horner step acc <- acc * x + c, for every field element x at once
            acc = np.einsum("ej,ejl->el", acc, stack) % self.p
            acc[:, 0] = (acc[:, 0] + int(c)) % self.p
        return [int(e) for e in np.flatnonzero(~acc.any(axis=1))]

    def _mult_stack(self, P: np.ndarray) -> np.ndarray:
        # (q, k, k) multiplication matrices of every element
        return np.einsum("ei,ijl->ejl", P, self._powers) % self.p

    def format(self, a: int) -> str:
        """``3``, ``2+5a``, ``a^2+1`` style rendering with generator ``a``."""
        if a < self.p:
            return str(a)
        c = self.coeffs(a)
        terms = []
        for i in range(self.k - 1, -1, -1):
            ci = int(c[i])
            if not ci:
                continue
            mono = "" if i == 0 else ("a" if i == 1 else "a^%d" % i)
            if not mono:
                terms.append(str(ci))
            elif ci == 1:
                terms.append(mono)
            else:
                terms.append("%d%s" % (ci, mono))
        return "+".join(terms)

    def embed_matrix(self, A) -> np.ndarray:
        """n x n matrix over F_p viewed as an F_p-linear map on F_q^n = F_p^{nk}."""
        A = linalg.as_mod(A, self.p)
        return np.kron(A, np.eye(self.k, dtype=np.int64))

    def scalar_matrix(self, n: int, code: int) -> np.ndarray:
        return np.kron(np.eye(n, dtype=np.int64), self.mult_matrix(code))


@lru_cache(maxsize=None)
def field(p: int, k: int) -> GF:
    return GF(p, k)


def embed_code(small: GF, big: GF, code: int) -> int:
    """Image of an element of ``small`` in ``big`` (k_small | k_big), via a root of its modulus."""
    if small.k == 1 or code < small.p:
        return code
    if big.k % small.k:
        raise ValueError("F_%d^%d does not embed in F_%d^%d" % (small.p, small.k, big.p, big.k))
    g = min(big.roots(small.modulus))
    c = small.coeffs(code)
    out, pw = 0, 1
    for ci in c:
        out = big.add(out, big.mul(int(ci), pw))
        pw = big.mul(pw, g)
    return out
