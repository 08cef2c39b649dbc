"""The Heisenberg group H = V x F_q and its irreducible representations.

Group law (v, z)(v', z') = (v + v', z + z' + <v,v'>/2) with the symplectic
pairing of the ambient space.  For each nonzero central parameter a the
induced model realizes the unique q^n-dimensional irreducible on functions
over a Lagrangian (X or Y), with matrices over Z[zeta_p].
"""

from __future__ import annotations

import itertools

import numpy as np

from .exactnum import CycloMatrix, CycloNum
from .gfq import GF
from .symplin import Mat


class Heisenberg:
    """H(V) for V = F_q^2n with the standard pairing (X first, then Y)."""

    def __init__(self, fld: GF, n: int):
        self.fld = fld
        self.n = n
        self.order = fld.q ** (2 * n + 1)

    def pairing(self, v, w) -> int:
        """<v, w> = x.y' - x'.y with v = (x, y), w = (x', y')."""
        fld, n = self.fld, self.n
        acc = 0
        for i in range(n):
            acc = fld.add(acc, fld.mul(v[i], w[n + i]))
            acc = fld.sub(acc, fld.mul(w[i], v[n + i]))
        return acc

    def mul(self, a, b):
        (v, z), (w, y) = a, b
        fld = self.fld
        vw = tuple(fld.add(x1, x2) for x1, x2 in zip(v, w))
        zz = fld.add(fld.add(z, y), fld.mul(fld.half, self.pairing(v, w)))
        return (vw, zz)

    def inverse(self, a):
        (v, z) = a
        fld = self.fld
        return (tuple(fld.neg(x) for x in v), fld.neg(z))

    @property
    def identity(self):
        return ((0,) * (2 * self.n), 0)

    def elements(self):
        q, n = self.fld.q, self.n
        for v in itertools.product(range(q), repeat=2 * n):
            for z in range(q):
                yield (v, z)

    def commutator(self, a, b):
        ab = self.mul(a, b)
        return self.mul(ab, self.mul(self.inverse(a), self.inverse(b)))

    def apply_sp(self, g: Mat, h):
        """The Sp action g(v, z) = (gv, z)."""
        (v, z) = h
        return (g.mul_vec(v), z)


class HeisenbergRep:
    """Induced irreducible of H with central character psi_a, a != 0.

    ``lagrangian`` chooses the realization: 'Y' acts on functions on Y
    (coset representatives of the X-extension), 'X' on functions on X.
    Basis vectors are ordered lexicographically.
    """

    def __init__(self, heis: Heisenberg, a: int, lagrangian: str = "Y"):
        if a == 0:
            raise ValueError("central character trivial")
        if lagrangian not in ("X", "Y"):
            raise ValueError("lagrangian must be 'X' or 'Y'")
        self.heis = heis
        self.a = a
        self.lagrangian = lagrangian
        fld, n = heis.fld, heis.n
        self.dim = fld.q ** n
        self.basis = list(itertools.product(range(fld.q), repeat=n))
        self.basis_index = {v: i for i, v in enumerate(self.basis)}

    def matrix(self, h) -> CycloMatrix:
        """pi(h) in the delta-function basis.

        Y-model: (pi(h) f)(y) = psi_a(z - xh.y - xh.yh/2) f(y + yh)
        X-model: (pi(h) f)(x) = psi_a(z + x.yh + xh.yh/2) f(x + xh)
        """
        fld, n = self.heis.fld, self.heis.n
        (vh, z) = h
        xh, yh = vh[:n], vh[n:]
        dim = self.dim
        exps = np.zeros((dim, dim), dtype=np.int64)
        mask = np.zeros((dim, dim), dtype=bool)
        dot = _dot_factory(fld)
        half = fld.half
        if self.lagrangian == "Y":
            shift = yh
            const = fld.sub(z, fld.mul(half, dot(xh, yh)))
            for i, y in enumerate(self.basis):
                tgt = tuple(fld.add(c, s) for c, s in zip(y, shift))
                j = self.basis_index[tgt]
                val = fld.sub(const, dot(xh, y))
                exps[i, j] = fld.psi_exponent(self.a, val)
                mask[i, j] = True
        else:
            shift = xh
            const = fld.add(z, fld.mul(half, dot(xh, yh)))
            for i, x in enumerate(self.basis):
                tgt = tuple(fld.add(c, s) for c, s in zip(x, shift))
                j = self.basis_index[tgt]
                val = fld.add(const, dot(x, yh))
                exps[i, j] = fld.psi_exponent(self.a, val)
                mask[i, j] = True
        return CycloMatrix.from_exponents(fld.p, exps, mask=mask)

    def character(self, h) -> CycloNum:
        """q^n psi_a(z) on the center, zero elsewhere (closed form)."""
        (v, z) = h
        fld = self.heis.fld
        if any(v):
            return CycloNum.zero(fld.p)
        return self.dim * fld.additive_character(self.a, z)

    def character_by_trace(self, h) -> CycloNum:
        return self.matrix(h).trace()

    def central_parameter(self) -> int:
        """Recover a from the constructed matrices at (0, 1)."""
        fld = self.heis.fld
        m = self.matrix(((0,) * (2 * self.heis.n), 1))
        val = m.entry(0, 0)
        for a in fld.units():
            if fld.additive_character(a, 1) == val:
                return a
        raise RuntimeError("central character not of the expected shape")


def _dot_factory(fld: GF):
    def dot(u, v):
        acc = 0
        for a, b in zip(u, v):
            if a and b:
                acc = fld.add(acc, fld.mul(a, b))
        return acc
    return dot


def character_self_inner(rep: HeisenbergRep) -> CycloNum:
    """<chi, chi> over H, from the closed-form character."""
    from fractions import Fraction
    heis = rep.heis
    fld = heis.fld
    acc = CycloNum.zero(fld.p)
    for z in range(fld.q):
        val = rep.character(((0,) * (2 * heis.n), z))
        acc = acc + val * val.conj()
    # the character vanishes off the center, so the z-sum is the whole sum
    return acc * Fraction(1, heis.order)


def character_self_inner_by_trace(rep: HeisenbergRep) -> CycloNum:
    """<chi, chi> over H by brute traces (oracle for the closed form)."""
    from fractions import Fraction
    heis = rep.heis
    acc = CycloNum.zero(heis.fld.p)
    for h in heis.elements():
        val = rep.character_by_trace(h)
        acc = acc + val * val.conj()
    return acc * Fraction(1, heis.order)


def irrep_census(fld: GF, n: int):
    """Census of Irr(H): q^2n linear characters + (q-1) of dimension q^n.

    Verifies the sum-of-squares count against |H| and returns the report
    row; the big representations are spot-constructed through
    ``HeisenbergRep`` by the callers that need matrices.
    """
    q = fld.q
    order = q ** (2 * n + 1)
    if order > 1_000_000:
        raise RuntimeError("census limit exceeded")
    linear = q ** (2 * n)
    big = q - 1
    big_dim = q ** n
    total = linear * 1 + big * big_dim ** 2
    return {
        "q": q,
        "n": n,
        "linear": linear,
        "big": big,
        "big_dim": big_dim,
        "sum_of_squares": total,
        "order": order,
        "consistent": total == order,
    }
