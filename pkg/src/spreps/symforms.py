"""Symmetric bilinear forms over F_q: rank/discriminant classification,
orbit cardinalities, the characters psi_B of the Siegel unipotent N, and
the pullback form beta_T.

A form is carried by its symmetric matrix (a ``Mat``).  The orbit label is
(rank, type) with type +1 for square-class discriminant, -1 for non-square,
and None at rank 0.  Labels are always computed from the discriminant,
never assumed from a chosen representative.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple, Optional

from .exactnum import CycloNum
from .gfq import GF
from .symplin import Mat, gl_order, grassmannian_count, o_order

ENUM_LIMIT = 10_000_000


class OrbitLabel(NamedTuple):
    rank: int
    type: Optional[int]  # +1 square disc, -1 non-square, None at rank 0

    def pretty(self) -> str:
        if self.rank == 0:
            return "0"
        return f"{self.rank}{'+' if self.type == 1 else '-'}"


def classify(form: Mat) -> OrbitLabel:
    """Rank and discriminant type by symmetric Gaussian elimination.

    Simultaneous row/column operations keep the matrix symmetric; q odd
    guarantees every nonzero symmetric matrix has a nonzero diagonal after
    at most one clearing step.
    """
    fld = form.fld
    m = [list(r) for r in form.rows]
    n = len(m)
    diag = []
    todo = list(range(n))
    while todo:
        # find a pivot with nonzero diagonal among remaining indices
        piv = next((i for i in todo if m[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in todo for j in todo
                         if j > i and m[i][j]), None)
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            # row/col addition makes m[i][i] = 2 m[i][j] != 0 (char != 2)
            for k in range(n):
                m[i][k] = fld.add(m[i][k], m[j][k])
            for k in range(n):
                m[k][i] = fld.add(m[k][i], m[k][j])
            piv = i
        d = m[piv][piv]
        diag.append(d)
        todo.remove(piv)
        dinv = fld.inv(d)
        for r in todo:
            if m[r][piv]:
                f = fld.mul(m[r][piv], dinv)
                for k in range(n):
                    m[r][k] = fld.sub(m[r][k], fld.mul(f, m[piv][k]))
                for k in range(n):
                    m[k][r] = fld.sub(m[k][r], fld.mul(f, m[k][piv]))
    rank = len(diag)
    if rank == 0:
        return OrbitLabel(0, None)
    disc = 1
    for d in diag:
        disc = fld.mul(disc, d)
    return OrbitLabel(rank, fld.quadratic_character(disc))


def _classify_fast3(fld: GF, a, b, c, d, e, f) -> OrbitLabel:
    """Label of [[a,d,e],[d,b,f],[e,f,c]] via principal minors (n = 3).

    A symmetric matrix of rank r over odd characteristic always has an
    invertible principal r x r block, and all such blocks share one
    discriminant class.
    """
    mul, sub = fld.mul, fld.sub
    ab = sub(mul(a, b), mul(d, d))
    ac = sub(mul(a, c), mul(e, e))
    bc = sub(mul(b, c), mul(f, f))
    det = fld.add(fld.add(mul(a, bc),
                          fld.neg(mul(d, sub(mul(d, c), mul(f, e))))),
                  mul(e, sub(mul(d, f), mul(b, e))))
    if det:
        return OrbitLabel(3, fld.quadratic_character(det))
    for minor in (ab, ac, bc):
        if minor:
            return OrbitLabel(2, fld.quadratic_character(minor))
    for entry in (a, b, c):
        if entry:
            return OrbitLabel(1, fld.quadratic_character(entry))
    return OrbitLabel(0, None)


def orbit_card(n: int, r: int, type_sign: Optional[int], q: int) -> int:
    """#(forms of rank r, given type) = #Gr_{n,r} * #GL_r / #O_{r,type}."""
    if r == 0:
        return 1
    num = grassmannian_count(n, r, q) * gl_order(r, q)
    den = o_order(r, type_sign == 1, q)
    assert num % den == 0
    return num // den


def orbit_card_approx(n: int, r: int, q: int):
    """The first-order approximation q^(r(n - (r-1)/2)) / 2 as a Fraction."""
    from fractions import Fraction
    e = r * (2 * n - (r - 1))
    assert e % 2 == 0
    return Fraction(q ** (e // 2), 2)


def all_labels(n: int):
    out = [OrbitLabel(0, None)]
    for r in range(1, n + 1):
        out.append(OrbitLabel(r, 1))
        out.append(OrbitLabel(r, -1))
    return out


def enumerate_orbits(fld: GF, n: int, with_forms: bool = False):
    """Partition all symmetric n x n matrices into orbit labels.

    Returns {label: count}, or {label: list of Mat} when ``with_forms``.
    Uses the principal-minor classifier at n <= 3 (cross-checked against
    the eliminating classifier in the tests).
    """
    total = fld.q ** (n * (n + 1) // 2)
    if total > ENUM_LIMIT:
        raise RuntimeError(f"enumeration limit exceeded: {total}")
    buckets = {lab: ([] if with_forms else 0) for lab in all_labels(n)}
    if n == 3 and not with_forms:
        rng = range(fld.q)
        for a, b, c, d, e, f in itertools.product(rng, repeat=6):
            lab = _classify_fast3(fld, a, b, c, d, e, f)
            buckets[lab] += 1
        return buckets
    for form in _symmetric_mats(fld, n):
        lab = classify(form)
        if with_forms:
            buckets[lab].append(form)
        else:
            buckets[lab] += 1
    return buckets


def _symmetric_mats(fld: GF, n: int):
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    for vals in itertools.product(range(fld.q), repeat=len(idx)):
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in zip(idx, vals):
            rows[i][j] = v
            rows[j][i] = v
        yield Mat(fld, rows)


def canonical_rep(fld: GF, label: OrbitLabel, n: int) -> Mat:
    """diag(1, ..., 1, delta, 0, ..., 0) with delta fixing the type."""
    entries = [0] * n
    for i in range(label.rank):
        entries[i] = 1
    if label.rank and label.type == -1:
        entries[label.rank - 1] = fld.non_square
    return Mat.diag(fld, entries)


def gl_action(c: Mat, form: Mat) -> Mat:
    """The standard GL action B -> C B C^t on forms."""
    return c * form * c.transpose()


def form_character(fld: GF, b: Mat, scale: int):
    """psi_B on N: A -> psi(scale * Tr(B A)); scale is a field element.

    Returns a function on symmetric matrices A.  The default convention
    everywhere in this package is scale = 1/2, which makes the diagonal
    N-eigenvalues of the oscillator models land on the labels used here.
    """
    def chi(a: Mat) -> CycloNum:
        return fld.additive_character(scale, _trace_prod(fld, b, a))
    return chi


def form_character_exponent(fld: GF, b: Mat, scale: int, a: Mat) -> int:
    """Exponent t with psi_B(A) = zeta_p^t (fast path)."""
    return fld.psi_exponent(scale, _trace_prod(fld, b, a))


def _trace_prod(fld: GF, b: Mat, a: Mat) -> int:
    acc = 0
    for i, brow in enumerate(b.rows):
        for j, bv in enumerate(brow):
            if bv and a.rows[j][i]:
                acc = fld.add(acc, fld.mul(bv, a.rows[j][i]))
    return acc


def beta_T(t: Mat, beta: Mat) -> Mat:
    """Pullback form beta_T(x, x') = beta(Tx, Tx'), i.e. T^t beta T."""
    return t.transpose() * beta * t
