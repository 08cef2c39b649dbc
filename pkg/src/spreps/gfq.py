"""Finite fields F_q of odd order, with quadratic and additive characters.

Field elements are plain ints in [0, q).  For q = p^d the integer encodes
the coefficient vector of a polynomial of degree < d over F_p in base p
(little-endian), reduced modulo a fixed monic irreducible modulus.  The
modulus is the lexicographically least irreducible choice and is recorded
in report headers, so results are reproducible bit for bit.

All arithmetic is table-driven and exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .exactnum import CycloNum


def _factor_prime_power(q: int):
    for p in range(2, q + 1):
        if q % p == 0:
            d = 0
            m = q
            while m % p == 0:
                m //= p
                d += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, d
    raise ValueError(f"bad field order {q}")


def _poly_mul_mod(a, b, modulus, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    # reduce by the monic modulus
    d = len(modulus) - 1
    for i in range(len(out) - 1, d - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(d):
                out[i - d + j] = (out[i - d + j] - c * modulus[j]) % p
    out = out[:d]
    while len(out) < d:
        out.append(0)
    return out


def _is_irreducible(coeffs, p):
    """Trial division of the monic polynomial (low-to-high coeffs) over F_p."""
    d = len(coeffs) - 1
    if coeffs[0] == 0:
        return False

    def mod_reduce(poly, mod):
        poly = poly[:]
        dm = len(mod) - 1
        for i in range(len(poly) - 1, dm - 1, -1):
            c = poly[i]
            if c:
                lead_inv = pow(mod[-1], -1, p)
                f = (c * lead_inv) % p
                for j in range(dm + 1):
                    poly[i - dm + j] = (poly[i - dm + j] - f * mod[j]) % p
        while len(poly) > 1 and poly[-1] == 0:
            poly.pop()
        return poly

    for deg in range(1, d // 2 + 1):
        for enc in range(p ** deg):
            div = []
            e = enc
            for _ in range(deg):
                div.append(e % p)
                e //= p
            div.append(1)  # monic
            rem = mod_reduce(coeffs[:], div)
            if rem == [0]:
                return False
    return True


def _least_irreducible(p: int, d: int):
    """Lexicographically least monic irreducible of degree d over F_p."""
    if d == 1:
        return [0, 1]
    for enc in range(p ** d):
        coeffs = []
        e = enc
        for _ in range(d):
            coeffs.append(e % p)
            e //= p
        coeffs.append(1)
        if _is_irreducible(coeffs, p):
            return coeffs
    raise RuntimeError("no irreducible polynomial found")


class GF:
    """The field F_q, q an odd prime power; elements are ints in [0, q)."""

    def __init__(self, q: int):
        p, d = _factor_prime_power(q)
        if p == 2:
            raise ValueError("only odd characteristic is supported")
        self.q = q
        self.p = p
        self.d = d
        self.modulus = _least_irreducible(p, d)
        self._build_tables()

    def _decode(self, x: int):
        out = []
        for _ in range(self.d):
            out.append(x % self.p)
            x //= self.p
        return out

    def _encode(self, poly) -> int:
        x = 0
        for c in reversed(poly[: self.d]):
            x = x * self.p + (c % self.p)
        return x

    def _build_tables(self):
        q, p, d = self.q, self.p, self.d
        self.add_t = [[0] * q for _ in range(q)]
        self.mul_t = [[0] * q for _ in range(q)]
        polys = [self._decode(x) for x in range(q)]
        for a in range(q):
            pa = polys[a]
            for b in range(a, q):
                pb = polys[b]
                s = self._encode([(x + y) % p for x, y in zip(pa, pb)])
                self.add_t[a][b] = s
                self.add_t[b][a] = s
                m = self._encode(_poly_mul_mod(pa, pb, self.modulus, p))
                self.mul_t[a][b] = m
                self.mul_t[b][a] = m
        self.neg_t = [0] * q
        for a in range(q):
            self.neg_t[a] = self._encode([(-c) % p for c in polys[a]])
        self.inv_t = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul_t[a][b] == 1:
                    self.inv_t[a] = b
                    break
        # trace to the prime field: Tr(x) = sum of Frobenius images
        self.trace_t = [0] * q
        for a in range(q):
            acc = 0
            x = a
            for _ in range(d):
                acc = self.add_t[acc][x]
                x = self.pow(x, p)
            self.trace_t[a] = acc  # lies in the prime field: encoding < p
        # quadratic character: 0 on 0, else x^((q-1)/2) read as +-1
        self.chi_t = [0] * q
        for a in range(1, q):
            s = self.pow(a, (q - 1) // 2)
            self.chi_t[a] = 1 if s == 1 else -1
        self.half = self.inv_t[2 % q]
        self.non_square = next(a for a in range(1, q) if self.chi_t[a] == -1)

    # -- basic operations ---------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return self.add_t[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_t[a][self.neg_t[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_t[a][b]

    def neg(self, a: int) -> int:
        return self.neg_t[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero in GF")
        return self.inv_t[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        out = 1
        while e:
            if e & 1:
                out = self.mul_t[out][a]
            a = self.mul_t[a][a]
            e >>= 1
        return out

    def trace(self, a: int) -> int:
        """Trace to the prime field, returned as an int in [0, p)."""
        return self.trace_t[a]

    def quadratic_character(self, a: int) -> int:
        """+1 on nonzero squares, -1 on non-squares, 0 on zero."""
        return self.chi_t[a]

    def additive_character(self, a: int, x: int) -> CycloNum:
        """psi_a(x) = zeta_p^Tr(a x); trivial character when a = 0."""
        return CycloNum.root_of_unity(self.p, self.trace_t[self.mul_t[a][x]])

    def psi_exponent(self, a: int, x: int) -> int:
        """Exponent t with psi_a(x) = zeta_p^t (fast path)."""
        return self.trace_t[self.mul_t[a][x]]

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def vectors(self, n: int):
        """All n-tuples over the field, in lexicographic order."""
        import itertools
        return itertools.product(range(self.q), repeat=n)

    def primitive_element(self) -> int:
        for a in range(2, self.q):
            seen = set()
            x = 1
            for _ in range(self.q - 1):
                x = self.mul_t[x][a]
                seen.add(x)
            if len(seen) == self.q - 1:
                return a
        raise RuntimeError("no primitive element found")

    def describe(self) -> str:
        """Header string 'p^d/modulus-coefficients'."""
        coeffs = ",".join(str(c) for c in self.modulus)
        return f"{self.p}^{self.d}/[{coeffs}]"

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


def gauss_sum(fld: GF, bmat, a: int = 1) -> CycloNum:
    """Quadratic Gauss sum gamma(B, psi_a) = sum_y psi_a(-1/2 B(y,y)).

    ``bmat`` is a symmetric invertible n x n matrix (rows of field ints).
    The result lies in Z[zeta_p] and satisfies gamma * conj(gamma) = q^n.
    """
    n = len(bmat)
    if _det(fld, bmat) == 0:
        raise ValueError("degenerate form")
    mhalf = fld.neg(fld.half)
    counts = [0] * fld.p
    for y in fld.vectors(n):
        v = _eval_form(fld, bmat, y, y)
        counts[fld.psi_exponent(a, fld.mul(mhalf, v))] += 1
    return CycloNum(fld.p, {e: Fraction(c) for e, c in enumerate(counts) if c})


def _eval_form(fld: GF, bmat, y, z) -> int:
    acc = 0
    for i, yi in enumerate(y):
        if yi:
            row = bmat[i]
            s = 0
            for j, zj in enumerate(z):
                if zj:
                    s = fld.add(s, fld.mul(row[j], zj))
            acc = fld.add(acc, fld.mul(yi, s))
    return acc


def _det(fld: GF, mat) -> int:
    m = [list(r) for r in mat]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = fld.neg(det)
        det = fld.mul(det, m[c][c])
        ipiv = fld.inv(m[c][c])
        for r in range(c + 1, n):
            if m[r][c]:
                f = fld.mul(m[r][c], ipiv)
                for k in range(c, n):
                    m[r][k] = fld.sub(m[r][k], fld.mul(f, m[c][k]))
    return det
