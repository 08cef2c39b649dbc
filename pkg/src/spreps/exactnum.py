"""Exact cyclotomic arithmetic.

Scalars live in cyclotomic fields Q(zeta_m).  Values are kept in a canonical
form (power basis 1, z, ..., z^(phi(m)-1), reduced modulo the m-th cyclotomic
polynomial) so that equality of values is equality of representations.
Rational numbers are ``fractions.Fraction`` throughout.

``CycloMatrix`` is the fast carrier for representation matrices: entries in
(1/den) * Z[zeta_p] for a prime p, stored as stacked numpy integer arrays.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from sympy import Symbol, cyclotomic_poly

_X = Symbol("x")

Rational = Fraction


@lru_cache(maxsize=None)
def _reduction_table(m: int):
    """For each e in [0, m) the canonical coefficients of zeta_m^e.

    Returned as a tuple of dicts {exponent: int coefficient} with exponents
    in [0, phi(m)).  Computed by reducing x^e modulo the m-th cyclotomic
    polynomial over Z.
    """
    if m == 1:
        return ({0: 1},)
    phi_coeffs = [int(c) for c in reversed(cyclotomic_poly(m, _X, polys=True).all_coeffs())]
    deg = len(phi_coeffs) - 1  # = phi(m), monic
    table = []
    cur = [0] * deg
    if deg > 0:
        cur[0] = 1
    for _ in range(m):
        table.append({i: c for i, c in enumerate(cur) if c})
        # multiply by x, reduce the overflow coefficient against phi
        top = cur[deg - 1]
        cur = [0] + cur[: deg - 1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi_coeffs[i]
    return tuple(table)


class CycloNum:
    """An element of Q(zeta_m), in canonical reduced form.

    ``coeffs`` maps exponents in [0, phi(m)) to nonzero Fractions; zero is
    the empty map.  Instances are immutable and hashable.
    """

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs=None, _canonical=False):
        self.order = int(order)
        if coeffs is None:
            coeffs = {}
        if _canonical:
            self.coeffs = coeffs
        else:
            red = _reduction_table(self.order)
            acc: dict[int, Fraction] = {}
            for e, c in coeffs.items():
                c = Fraction(c)
                if not c:
                    continue
                for i, r in red[e % self.order].items():
                    acc[i] = acc.get(i, Fraction(0)) + c * r
            self.coeffs = {i: c for i, c in sorted(acc.items()) if c}
        self._hash = None

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero(order: int = 1) -> "CycloNum":
        return CycloNum(order, {}, _canonical=True)

    @staticmethod
    def from_rational(x, order: int = 1) -> "CycloNum":
        x = Fraction(x)
        return CycloNum(order, {0: x} if x else {})

    @staticmethod
    def root_of_unity(order: int, exp: int = 1, coeff=1) -> "CycloNum":
        return CycloNum(order, {exp % order: Fraction(coeff)})

    # -- order embedding ---------------------------------------------------
    def in_order(self, m: int) -> "CycloNum":
        """Re-embed into Q(zeta_m); requires order | m."""
        if m == self.order:
            return self
        if m % self.order:
            raise ValueError(f"order {self.order} does not divide {m}")
        k = m // self.order
        # canonical exponents of the smaller field are plain powers of zeta
        return CycloNum(m, {e * k: c for e, c in self.coeffs.items()})

    @staticmethod
    def _common(a: "CycloNum", b: "CycloNum"):
        m = math.lcm(a.order, b.order)
        return a.in_order(m), b.in_order(m), m

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        other = _coerce(other, self.order)
        a, b, m = CycloNum._common(self, other)
        acc = dict(a.coeffs)
        for e, c in b.coeffs.items():
            s = acc.get(e, Fraction(0)) + c
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        return CycloNum(m, acc, _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.order, {e: -c for e, c in self.coeffs.items()},
                        _canonical=True)

    def __sub__(self, other):
        return self + (-_coerce(other, self.order))

    def __rsub__(self, other):
        return _coerce(other, self.order) + (-self)

    def __mul__(self, other):
        other = _coerce(other, self.order)
        a, b, m = CycloNum._common(self, other)
        red = _reduction_table(m)
        acc: dict[int, Fraction] = {}
        for e1, c1 in a.coeffs.items():
            for e2, c2 in b.coeffs.items():
                c = c1 * c2
                for i, r in red[(e1 + e2) % m].items():
                    acc[i] = acc.get(i, Fraction(0)) + c * r
        return CycloNum(m, {i: c for i, c in sorted(acc.items()) if c},
                        _canonical=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                raise ZeroDivisionError("division by zero")
            return CycloNum(self.order,
                            {e: c / q for e, c in self.coeffs.items()},
                            _canonical=True)
        return NotImplemented

    def conj(self) -> "CycloNum":
        """Complex conjugation, zeta_m -> zeta_m^(m-1)."""
        return self.galois(self.order - 1)

    def galois(self, t: int) -> "CycloNum":
        """The automorphism zeta_m -> zeta_m^t, gcd(t, m) = 1."""
        m = self.order
        if math.gcd(t, m) != 1:
            raise ValueError(f"galois exponent {t} not coprime to {m}")
        return CycloNum(m, {(e * t) % m: c for e, c in self.coeffs.items()})

    def norm_square(self) -> Fraction:
        """x * conj(x), which must be rational here (abs value squared)."""
        return (self * self.conj()).as_fraction()

    # -- predicates and conversions ----------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {0}

    def as_fraction(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        if set(self.coeffs) != {0}:
            raise ValueError(f"not rational: {self}")
        return self.coeffs[0]

    def is_integer(self) -> bool:
        return self.is_rational() and self.as_fraction().denominator == 1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNum.from_rational(other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        a, b, _ = CycloNum._common(self, other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            # hash through a minimal-order canonical key so that equal values
            # of different declared orders collide
            key = _minimal_key(self)
            self._hash = hash(key)
        return self._hash

    # -- output -------------------------------------------------------------
    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.coeffs.items():
            if e == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"z^{e}")
            else:
                parts.append(f"{c}*z^{e}")
        return " + ".join(parts)

    def __repr__(self):
        return f"CycloNum(m={self.order}, {self})"

    def complex_value(self, precision: int = 53) -> complex:
        return embed_complex(self, precision)


def _coerce(x, order: int) -> CycloNum:
    if isinstance(x, CycloNum):
        return x
    if isinstance(x, (int, Fraction)):
        return CycloNum.from_rational(x, 1)
    raise TypeError(f"cannot coerce {type(x)} to CycloNum")


def _minimal_key(x: CycloNum):
    """Order-independent canonical key: coefficients at the minimal order."""
    if x.is_rational():
        return (1, ((0, x.coeffs.get(0, Fraction(0))),) if x.coeffs else ())
    m = x.order
    for d in sorted(_divisors(m)):
        if d == m:
            break
        try:
            y = _try_in_smaller(x, d)
        except ValueError:
            continue
        if y is not None:
            return (d, tuple(y.coeffs.items()))
    return (m, tuple(x.coeffs.items()))


def _divisors(m: int):
    out = []
    for d in range(1, int(math.isqrt(m)) + 1):
        if m % d == 0:
            out.append(d)
            if d * d != m:
                out.append(m // d)
    return sorted(out)


def _try_in_smaller(x: CycloNum, d: int):
    """Return x as an order-d value if it lies in Q(zeta_d), else None.

    Embeds each basis monomial of Q(zeta_d) into Q(zeta_m) and solves the
    resulting exact linear system for the coordinates of x.
    """
    deg_d = _phi_deg(d)
    cols = []
    for e in range(deg_d):
        img = CycloNum(d, {e: 1}).in_order(x.order)
        cols.append(img.coeffs)
    deg_m = _phi_deg(x.order)
    A = [[Fraction(cols[j].get(i, 0)) for j in range(deg_d)] for i in range(deg_m)]
    b = [Fraction(x.coeffs.get(i, 0)) for i in range(deg_m)]
    sol = _solve_exact(A, b)
    if sol is None:
        return None
    return CycloNum(d, {e: c for e, c in enumerate(sol) if c}, _canonical=False)


@lru_cache(maxsize=None)
def _phi_deg(m: int) -> int:
    if m == 1:
        return 1
    return int(cyclotomic_poly(m, _X, polys=True).degree())


def _solve_exact(A, b):
    """Solve A x = b over Q (A tall, full column rank); None if inconsistent."""
    rows = len(A)
    if rows == 0:
        return []
    cols = len(A[0])
    M = [A[i][:] + [b[i]] for i in range(rows)]
    piv_rows = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if M[i][c]), None)
        if pr is None:
            return None
        M[r], M[pr] = M[pr], M[r]
        pv = M[r][c]
        M[r] = [v / pv for v in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [vi - f * vr for vi, vr in zip(M[i], M[r])]
        piv_rows.append(r)
        r += 1
    for i in range(r, rows):
        if M[i][cols]:
            return None
    return [M[i][cols] for i in range(cols)]


def cyclo_arith(a: CycloNum, b: CycloNum, op: str) -> CycloNum:
    """Dispatch form of the basic field operations (add, mul, conj)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "conj":
        return a.conj()
    raise ValueError(f"unknown op {op!r}")


def embed_complex(x: CycloNum, precision: int = 53) -> complex:
    """Floating approximation of x, for report emission only."""
    if precision < 53:
        raise ValueError("precision must be at least 53 bits")
    with mpmath.workprec(precision + 10):
        m = x.order
        acc = mpmath.mpc(0)
        for e, c in x.coeffs.items():
            acc += mpmath.mpf(c.numerator) / c.denominator * mpmath.e ** (
                2j * mpmath.pi * e / m)
        return complex(acc)


# ---------------------------------------------------------------------------
# fast exact matrices over (1/den) Z[zeta_p], p prime
# ---------------------------------------------------------------------------

_INT_GUARD = 2**62


class CycloMatrix:
    """Square matrix over Q(zeta_p) (p prime), exactly.

    Stored as ``comps``: an int64 array of shape (p-1, n, n) holding the
    coordinates on the basis 1, z, ..., z^(p-2), and a positive integer
    denominator.  zeta^(p-1) is reduced via 1 + z + ... + z^(p-1) = 0.
    All operations are exact; overflow is guarded.
    """

    __slots__ = ("p", "comps", "den")

    def __init__(self, p: int, comps: np.ndarray, den: int = 1):
        self.p = p
        self.comps = comps
        self.den = den
        if den <= 0:
            raise ValueError("denominator must be positive")

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zeros(p: int, n: int) -> "CycloMatrix":
        return CycloMatrix(p, np.zeros((p - 1, n, n), dtype=np.int64), 1)

    @staticmethod
    def identity(p: int, n: int) -> "CycloMatrix":
        m = CycloMatrix.zeros(p, n)
        m.comps[0] = np.eye(n, dtype=np.int64)
        return m

    @staticmethod
    def from_exponents(p: int, exps: np.ndarray, signs=None,
                       mask=None) -> "CycloMatrix":
        """Matrix with entries sign * zeta_p^exps, optionally masked.

        ``exps`` is an integer array (n, n) taken mod p; ``signs`` an array
        or scalar in {+1, -1}; ``mask`` selects the nonzero entries.
        """
        exps = np.asarray(exps, dtype=np.int64) % p
        n = exps.shape[0]
        if signs is None:
            signs = np.ones_like(exps)
        else:
            signs = np.broadcast_to(np.asarray(signs, dtype=np.int64),
                                    exps.shape)
        if mask is None:
            mask = np.ones_like(exps, dtype=bool)
        comps = np.zeros((p - 1, n, n), dtype=np.int64)
        for e in range(p - 1):
            comps[e][(exps == e) & mask] = signs[(exps == e) & mask]
        top = (exps == p - 1) & mask
        if top.any():
            # zeta^(p-1) = -(1 + z + ... + z^(p-2))
            for e in range(p - 1):
                comps[e][top] -= signs[top]
        return CycloMatrix(p, comps, 1)

    # -- helpers -------------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.comps.shape[1]

    def _normalized(self) -> "CycloMatrix":
        g = int(np.gcd.reduce(np.abs(self.comps), axis=None))
        g = math.gcd(g, self.den)
        if g > 1:
            return CycloMatrix(self.p, self.comps // g, self.den // g)
        return self

    def copy(self) -> "CycloMatrix":
        return CycloMatrix(self.p, self.comps.copy(), self.den)

    # -- arithmetic ----------------------------------------------------------
    def _row_monomial(self):
        """(col_index, coeff) arrays if each row has at most one nonzero
        column position across all components, else None."""
        nz = (self.comps != 0).any(axis=0)
        counts = nz.sum(axis=1)
        if (counts > 1).any():
            return None
        n = self.dim
        idx = np.where(counts == 1, nz.argmax(axis=1), -1)
        coeff = np.zeros((self.p - 1, n), dtype=np.int64)
        rows_with = np.nonzero(idx >= 0)[0]
        coeff[:, rows_with] = self.comps[:, rows_with, idx[rows_with]]
        return idx, coeff

    def __matmul__(self, other: "CycloMatrix") -> "CycloMatrix":
        if self.p != other.p:
            raise ValueError("mixed cyclotomic orders")
        p = self.p
        n = self.dim
        amax = int(np.abs(self.comps).max(initial=0))
        bmax = int(np.abs(other.comps).max(initial=0))
        if amax and bmax and amax * bmax * n * (p - 1) >= _INT_GUARD:
            raise OverflowError("CycloMatrix product would overflow int64")
        full = np.zeros((2 * p - 3, n, n), dtype=np.int64)
        mono_a = self._row_monomial() if n >= 16 else None
        mono_b = other._row_monomial() if (n >= 16 and mono_a is None) else None
        if mono_a is not None:
            # row i of the product is A[i, idx_i] times row idx_i of B
            idx, coeff = mono_a
            safe = np.where(idx >= 0, idx, 0)
            gathered = other.comps[:, safe, :]
            gathered[:, idx < 0, :] = 0
            for e1 in range(p - 1):
                ce = coeff[e1]
                if not ce.any():
                    continue
                full[e1: e1 + p - 1] += ce[None, :, None] * gathered
        elif mono_b is not None:
            # column t_j of the product is B[j, t_j] times column j of A
            idx, coeff = mono_b
            live = np.nonzero(idx >= 0)[0]
            tgt = idx[live]
            if len(set(tgt.tolist())) != len(tgt):
                mono_b = None
            else:
                for e1 in range(p - 1):
                    ce = coeff[e1][live]
                    if not ce.any():
                        continue
                    full[e1: e1 + p - 1][:, :, tgt] += \
                        self.comps[:, :, live] * ce[None, None, :]
        if mono_a is None and mono_b is None:
            # convolution over the power basis
            for i in range(p - 1):
                ai = self.comps[i]
                if not ai.any():
                    continue
                for j in range(p - 1):
                    bj = other.comps[j]
                    if not bj.any():
                        continue
                    full[i + j] += ai @ bj
        comps = full[: p - 1].copy()
        for m in range(p - 1, 2 * p - 3):
            block = full[m]
            if not block.any():
                continue
            r = m % p
            if r == p - 1:
                for e in range(p - 1):
                    comps[e] -= block
            else:
                comps[r] += block
        return CycloMatrix(p, comps, self.den * other.den)._normalized()

    def __add__(self, other: "CycloMatrix") -> "CycloMatrix":
        if self.p != other.p:
            raise ValueError("mixed cyclotomic orders")
        g = math.gcd(self.den, other.den)
        la, lb = other.den // g, self.den // g
        comps = self.comps * la + other.comps * lb
        return CycloMatrix(self.p, comps, self.den * la)._normalized()

    def __sub__(self, other: "CycloMatrix") -> "CycloMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "CycloMatrix":
        c = Fraction(c)
        return CycloMatrix(self.p, self.comps * c.numerator,
                           self.den * c.denominator)._normalized()

    def scale_cyclo(self, x: CycloNum) -> "CycloMatrix":
        """Multiply by a scalar from Q(zeta_p)."""
        x = x.in_order(self.p) if x.order != self.p else x
        p, n = self.p, self.dim
        den = 1
        for c in x.coeffs.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        acc = np.zeros((2 * p - 3, n, n), dtype=np.int64)
        for e, c in x.coeffs.items():
            k = int(c * den)
            for i in range(p - 1):
                acc[i + e] += k * self.comps[i]
        comps = acc[: p - 1].copy()
        for m in range(p - 1, 2 * p - 3):
            block = acc[m]
            if not block.any():
                continue
            r = m % p
            if r == p - 1:
                for e in range(p - 1):
                    comps[e] -= block
            else:
                comps[r] += block
        return CycloMatrix(p, comps, self.den * den)._normalized()

    def conj(self) -> "CycloMatrix":
        p, n = self.p, self.dim
        comps = np.zeros_like(self.comps)
        for e in range(p - 1):
            block = self.comps[e]
            if not block.any():
                continue
            t = (-e) % p
            if t == p - 1:
                for k in range(p - 1):
                    comps[k] -= block
            else:
                comps[t] += block
        return CycloMatrix(p, comps, self.den)

    def transpose(self) -> "CycloMatrix":
        return CycloMatrix(self.p, np.swapaxes(self.comps, 1, 2), self.den)

    # -- queries -------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, CycloMatrix):
            return NotImplemented
        if self.p != other.p or self.dim != other.dim:
            return False
        a = self._normalized()
        b = other._normalized()
        return a.den == b.den and np.array_equal(a.comps, b.comps)

    def is_identity(self) -> bool:
        return self == CycloMatrix.identity(self.p, self.dim)

    def is_unitary(self) -> bool:
        return (self @ self.conj().transpose()).is_identity()

    def trace(self) -> CycloNum:
        d = self.den
        coeffs = {}
        for e in range(self.p - 1):
            t = int(np.trace(self.comps[e]))
            if t:
                coeffs[e] = Fraction(t, d)
        return CycloNum(self.p, coeffs)

    def entry(self, i: int, j: int) -> CycloNum:
        coeffs = {}
        for e in range(self.p - 1):
            v = int(self.comps[e, i, j])
            if v:
                coeffs[e] = Fraction(v, self.den)
        return CycloNum(self.p, coeffs)

    def __repr__(self):
        return f"CycloMatrix(p={self.p}, dim={self.dim}, den={self.den})"


def trace_product(a: CycloMatrix, b: CycloMatrix) -> CycloNum:
    """tr(a @ b) in O(dim^2) without forming the product."""
    if a.p != b.p:
        raise ValueError("mixed cyclotomic orders")
    p = a.p
    raw = {}
    for e1 in range(p - 1):
        if not a.comps[e1].any():
            continue
        for e2 in range(p - 1):
            if not b.comps[e2].any():
                continue
            v = int((a.comps[e1] * b.comps[e2].T).sum())
            if v:
                raw[e1 + e2] = raw.get(e1 + e2, 0) + v
    den = a.den * b.den
    return CycloNum(p, {e: Fraction(v, den) for e, v in raw.items() if v})
