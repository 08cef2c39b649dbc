"""Matrices over F_q and the matrix groups of the symplectic world.

Provides the symplectic space V = X + Y with Gram [[0, I], [-I, 0]]
(X coordinates first), the groups Sp(V), the Siegel parabolic P = N x GL(X),
orthogonal groups O_beta, the tensor embedding Sp x O_beta -> Sp(V tensor U),
breadth-first enumeration, and conjugacy classes.

Matrices are immutable and hashable; all arithmetic is table-driven exact
field arithmetic.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

from .gfq import GF, field

DEFAULT_ENUM_LIMIT = 200_000


class Mat:
    """Immutable matrix over a GF field; rows is a tuple of tuples of ints."""

    __slots__ = ("fld", "rows", "_hash")

    def __init__(self, fld: GF, rows):
        self.fld = fld
        self.rows = tuple(tuple(r) for r in rows)
        self._hash = hash((fld.q, self.rows))

    # -- constructors -------------------------------------------------------
    @staticmethod
    def identity(fld: GF, n: int) -> "Mat":
        return Mat(fld, tuple(tuple(1 if i == j else 0 for j in range(n))
                              for i in range(n)))

    @staticmethod
    def zeros(fld: GF, nrows: int, ncols: int) -> "Mat":
        return Mat(fld, tuple((0,) * ncols for _ in range(nrows)))

    @staticmethod
    def from_rows(fld: GF, rows) -> "Mat":
        return Mat(fld, rows)

    @staticmethod
    def diag(fld: GF, entries) -> "Mat":
        n = len(entries)
        return Mat(fld, tuple(tuple(entries[i] if i == j else 0
                                    for j in range(n)) for i in range(n)))

    @staticmethod
    def block2(tl: "Mat", tr: "Mat", bl: "Mat", br: "Mat") -> "Mat":
        fld = tl.fld
        rows = [r1 + r2 for r1, r2 in zip(tl.rows, tr.rows)]
        rows += [r1 + r2 for r1, r2 in zip(bl.rows, br.rows)]
        return Mat(fld, rows)

    # -- shape ---------------------------------------------------------------
    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Mat":
        return Mat(self.fld, tuple(row[c0:c1] for row in self.rows[r0:r1]))

    # -- arithmetic ----------------------------------------------------------
    def __mul__(self, other: "Mat") -> "Mat":
        fld = self.fld
        mul_t, add_t = fld.mul_t, fld.add_t
        bcols = tuple(zip(*other.rows))
        out = []
        for arow in self.rows:
            orow = []
            for bcol in bcols:
                acc = 0
                for a, b in zip(arow, bcol):
                    if a and b:
                        acc = add_t[acc][mul_t[a][b]]
                orow.append(acc)
            out.append(tuple(orow))
        return Mat(fld, out)

    def __add__(self, other: "Mat") -> "Mat":
        add_t = self.fld.add_t
        return Mat(self.fld, tuple(tuple(add_t[a][b] for a, b in zip(r1, r2))
                                   for r1, r2 in zip(self.rows, other.rows)))

    def __neg__(self) -> "Mat":
        neg_t = self.fld.neg_t
        return Mat(self.fld, tuple(tuple(neg_t[a] for a in r)
                                   for r in self.rows))

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, c: int) -> "Mat":
        mul_t = self.fld.mul_t
        return Mat(self.fld, tuple(tuple(mul_t[c][a] for a in r)
                                   for r in self.rows))

    def transpose(self) -> "Mat":
        return Mat(self.fld, tuple(zip(*self.rows)))

    def mul_vec(self, v):
        fld = self.fld
        mul_t, add_t = fld.mul_t, fld.add_t
        out = []
        for row in self.rows:
            acc = 0
            for a, x in zip(row, v):
                if a and x:
                    acc = add_t[acc][mul_t[a][x]]
            out.append(acc)
        return tuple(out)

    def det(self) -> int:
        fld = self.fld
        m = [list(r) for r in self.rows]
        n = self.nrows
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

    def inv(self) -> "Mat":
        fld = self.fld
        n = self.nrows
        m = [list(r) + [1 if i == j else 0 for j in range(n)]
             for i, r in enumerate(self.rows)]
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c]), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            m[c], m[piv] = m[piv], m[c]
            ipiv = fld.inv(m[c][c])
            m[c] = [fld.mul(ipiv, v) for v in m[c]]
            for r in range(n):
                if r != c and m[r][c]:
                    f = m[r][c]
                    m[r] = [fld.sub(vr, fld.mul(f, vc))
                            for vr, vc in zip(m[r], m[c])]
        return Mat(fld, tuple(tuple(row[n:]) for row in m))

    def rank(self) -> int:
        fld = self.fld
        m = [list(r) for r in self.rows]
        nr, nc = self.nrows, self.ncols
        rank = 0
        for c in range(nc):
            piv = next((r for r in range(rank, nr) if m[r][c]), None)
            if piv is None:
                continue
            m[rank], m[piv] = m[piv], m[rank]
            ipiv = fld.inv(m[rank][c])
            for r in range(rank + 1, nr):
                if m[r][c]:
                    f = fld.mul(m[r][c], ipiv)
                    for k in range(c, nc):
                        m[r][k] = fld.sub(m[r][k], fld.mul(f, m[rank][k]))
            rank += 1
            if rank == nr:
                break
        return rank

    def is_zero(self) -> bool:
        return all(all(v == 0 for v in r) for r in self.rows)

    def is_symmetric(self) -> bool:
        return self.rows == self.transpose().rows

    def order(self) -> int:
        ident = Mat.identity(self.fld, self.nrows)
        x = self
        k = 1
        while x != ident:
            x = x * self
            k += 1
            if k > 10_000_000:
                raise RuntimeError("element order runaway")
        return k

    def kron(self, other: "Mat") -> "Mat":
        """Kronecker product, blocks indexed (i, a) lexicographically."""
        fld = self.fld
        mul_t = fld.mul_t
        rows = []
        for arow in self.rows:
            for brow in other.rows:
                rows.append(tuple(mul_t[a][b] for a in arow for b in brow))
        return Mat(fld, rows)

    # -- comparisons ---------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Mat) and self.rows == other.rows \
            and self.fld.q == other.fld.q

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Mat") -> bool:
        return self.rows < other.rows

    def __repr__(self):
        return f"Mat({self.fld.q}, {self.rows})"

    def literal(self):
        """Row-major integer list for report emission."""
        return [list(r) for r in self.rows]


# ---------------------------------------------------------------------------
# closed-form orders
# ---------------------------------------------------------------------------

def sp_order(n: int, q: int) -> int:
    """|Sp_2n(F_q)| = q^(n^2) * prod_(i=1..n) (q^(2i) - 1)."""
    out = q ** (n * n)
    for i in range(1, n + 1):
        out *= q ** (2 * i) - 1
    return out


def gl_order(r: int, q: int) -> int:
    out = 1
    for i in range(r):
        out *= q ** r - q ** i
    return out


def o_order(r: int, disc_square: bool, q: int) -> int:
    """Order of the isometry group of a nondegenerate symmetric form.

    The form is identified by the square class of its discriminant; for
    even rank the group is split exactly when (-1)^m * disc is a square.
    """
    if r == 0:
        return 1
    if r % 2 == 1:
        m = (r - 1) // 2
        out = 2 * q ** (m * m)
        for i in range(1, m + 1):
            out *= q ** (2 * i) - 1
        return out
    m = r // 2
    fld = field(q)
    disc = 1 if disc_square else fld.non_square
    sign_elt = fld.mul(fld.pow(fld.neg(1), m), disc)
    eps = fld.quadratic_character(sign_elt)  # +1 = split
    out = 2 * q ** (m * (m - 1)) * (q ** m - eps)
    for i in range(1, m):
        out *= q ** (2 * i) - 1
    return out


def grassmannian_count(n: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of F_q^n (Gaussian binomial)."""
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def n_order(n: int, q: int) -> int:
    return q ** (n * (n + 1) // 2)


def group_order(kind: str, q: int, n: int = 0, r: int = 0) -> int:
    """Closed-form order dispatcher: Sp, GL, O+, O-, N, Gr."""
    if kind == "Sp":
        return sp_order(n, q)
    if kind == "GL":
        return gl_order(r, q)
    if kind == "O+":
        return o_order(r, True, q)
    if kind == "O-":
        return o_order(r, False, q)
    if kind == "N":
        return n_order(n, q)
    if kind == "Gr":
        return grassmannian_count(n, r, q)
    raise ValueError(f"unknown group kind {kind!r}")


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------

class EnumerationLimit(RuntimeError):
    pass


def closure(gens, limit: int = DEFAULT_ENUM_LIMIT):
    """Breadth-first closure of a generating set under multiplication.

    Deterministic: seeds sorted, queue processed in order.  Raises
    EnumerationLimit beyond ``limit`` elements.
    """
    gens = sorted(set(gens))
    if not gens:
        raise ValueError("empty generating set")
    ident = Mat.identity(gens[0].fld, gens[0].nrows)
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    new.append(y)
                    if len(seen) > limit:
                        raise EnumerationLimit(
                            f"enumeration limit {limit} exceeded")
        frontier = new
    return seen


class FiniteMatrixGroup:
    """A fully enumerable matrix group with conjugacy-class machinery."""

    def __init__(self, name: str, gens, expected_order=None,
                 membership=None, limit: int = DEFAULT_ENUM_LIMIT):
        self.name = name
        self.gens = sorted(set(gens))
        self.fld = self.gens[0].fld
        self.dim = self.gens[0].nrows
        self.membership = membership
        elems = closure(self.gens, limit=limit)
        if expected_order is not None and len(elems) != expected_order:
            raise RuntimeError(
                f"{name}: enumerated order {len(elems)} != "
                f"closed form {expected_order}")
        self.elements = sorted(elems)
        self.order = len(self.elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.identity = Mat.identity(self.fld, self.dim)
        if membership is not None:
            for g in self.gens:
                if not membership(g):
                    raise RuntimeError(f"{name}: generator fails membership")
        self._classes = None
        self._class_of = None
        self._inverses = None

    def __contains__(self, g: Mat) -> bool:
        return g in self.index

    def __len__(self) -> int:
        return self.order

    def inverse(self, g: Mat) -> Mat:
        if self._inverses is None:
            self._inverses = {}
        got = self._inverses.get(g)
        if got is None:
            got = g.inv()
            self._inverses[g] = got
        return got

    def random_element(self, rng) -> Mat:
        return self.elements[rng.randrange(self.order)]

    # -- conjugacy classes ---------------------------------------------------
    def conjugacy_classes(self):
        """Classes as lists of elements; representative = minimal element.

        Identity class first, then ascending (size, representative).  The
        orbit sweep conjugates by the generators only, scanning seeds in
        the fixed total order, so the partition is deterministic.
        """
        if self._classes is not None:
            return self._classes
        gen_pairs = [(g, self.inverse(g)) for g in self.gens]
        assigned = [False] * self.order
        classes = []
        for i, seed in enumerate(self.elements):
            if assigned[i]:
                continue
            orbit = {seed}
            frontier = [seed]
            assigned[i] = True
            while frontier:
                new = []
                for x in frontier:
                    for g, gi in gen_pairs:
                        y = g * x * gi
                        if y not in orbit:
                            orbit.add(y)
                            new.append(y)
                            assigned[self.index[y]] = True
                frontier = new
            members = sorted(orbit)
            classes.append(members)
        classes.sort(key=lambda cl: (cl[0] != self.identity,
                                     len(cl), cl[0].rows))
        self._classes = classes
        self._class_of = {}
        for ci, members in enumerate(classes):
            for g in members:
                self._class_of[g] = ci
        total = sum(len(c) for c in classes)
        if total != self.order:
            raise RuntimeError("class sizes do not sum to the group order")
        return classes

    def class_of(self, g: Mat) -> int:
        if self._class_of is None:
            self.conjugacy_classes()
        return self._class_of[g]

    def class_reps(self):
        return [c[0] for c in self.conjugacy_classes()]

    def class_sizes(self):
        return [len(c) for c in self.conjugacy_classes()]

    def exponent(self) -> int:
        e = 1
        for rep in self.class_reps():
            e = math.lcm(e, rep.order())
        return e

    def __repr__(self):
        return f"FiniteMatrixGroup({self.name}, order={self.order})"


# ---------------------------------------------------------------------------
# the symplectic space and its subgroups
# ---------------------------------------------------------------------------

class SympSpace:
    """V = X + Y of dimension 2n with Gram [[0, I], [-I, 0]]."""

    def __init__(self, n: int, fld: GF):
        self.n = n
        self.fld = fld
        ident = Mat.identity(fld, n)
        zero = Mat.zeros(fld, n, n)
        self.gram = Mat.block2(zero, ident, -ident, zero)

    def contains(self, g: Mat) -> bool:
        if g.nrows != 2 * self.n or g.ncols != 2 * self.n:
            raise ValueError("dimension mismatch")
        return g.transpose() * self.gram * g == self.gram

    # block builders, X coordinates first
    def u(self, a: Mat) -> Mat:
        """Upper unipotent [[I, A], [0, I]], A symmetric."""
        ident = Mat.identity(self.fld, self.n)
        zero = Mat.zeros(self.fld, self.n, self.n)
        return Mat.block2(ident, a, zero, ident)

    def m(self, c: Mat) -> Mat:
        """Levi element [[C, 0], [0, C^-T]] for C in GL(X)."""
        ident0 = Mat.zeros(self.fld, self.n, self.n)
        return Mat.block2(c, ident0, ident0, c.inv().transpose())

    def lower(self, s: Mat) -> Mat:
        """Lower unipotent [[I, 0], [-S, I]] = J u(S) J^-1."""
        ident = Mat.identity(self.fld, self.n)
        zero = Mat.zeros(self.fld, self.n, self.n)
        return Mat.block2(ident, zero, -s, ident)

    @property
    def j(self) -> Mat:
        ident = Mat.identity(self.fld, self.n)
        zero = Mat.zeros(self.fld, self.n, self.n)
        return Mat.block2(zero, ident, -ident, zero)

    def blocks(self, g: Mat):
        n = self.n
        return (g.block(0, n, 0, n), g.block(0, n, n, 2 * n),
                g.block(n, 2 * n, 0, n), g.block(n, 2 * n, n, 2 * n))

    def transvection(self) -> Mat:
        """u(E_11), the transvection with maximal centralizer."""
        e11 = [[0] * self.n for _ in range(self.n)]
        e11[0][0] = 1
        return self.u(Mat(self.fld, e11))


def symplectic_membership(g: Mat, sp: SympSpace) -> bool:
    return sp.contains(g)


def symmetric_basis(fld: GF, n: int):
    """Basis matrices E_ii and E_ij + E_ji of the symmetric n x n matrices."""
    out = []
    for i in range(n):
        for j in range(i, n):
            rows = [[0] * n for _ in range(n)]
            rows[i][j] = 1
            rows[j][i] = 1
            out.append(Mat(fld, rows))
    return out


def symmetric_matrices(fld: GF, n: int):
    """All symmetric n x n matrices, in lexicographic order of free entries."""
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    for vals in itertools.product(range(fld.q), repeat=len(idx)):
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in zip(idx, vals):
            rows[i][j] = v
            rows[j][i] = v
        yield Mat(fld, rows)


def gl_generators(fld: GF, n: int):
    """Standard generators of GL_n: elementary transvections + a scalar."""
    gens = []
    ident = Mat.identity(fld, n)
    for i in range(n):
        for j in range(n):
            if i != j:
                rows = [list(r) for r in ident.rows]
                rows[i][j] = 1
                gens.append(Mat(fld, rows))
    prim = fld.primitive_element()
    rows = [list(r) for r in ident.rows]
    rows[0][0] = prim
    gens.append(Mat(fld, rows))
    return gens


def sp_generators(sp: SympSpace):
    """Generators of Sp: u(A) over a basis of Sym, Levi generators, and J."""
    fld, n = sp.fld, sp.n
    gens = [sp.u(a) for a in symmetric_basis(fld, n)]
    gens += [sp.m(c) for c in gl_generators(fld, n)]
    gens.append(sp.j)
    return gens


@lru_cache(maxsize=None)
def sp_group(n: int, q: int, limit: int = DEFAULT_ENUM_LIMIT) -> FiniteMatrixGroup:
    """Fully enumerated Sp_2n(F_q), order cross-checked against closed form."""
    fld = field(q)
    sp = SympSpace(n, fld)
    return FiniteMatrixGroup(
        f"Sp{2 * n}(F{q})", sp_generators(sp),
        expected_order=sp_order(n, q),
        membership=lambda g: sp.contains(g),
        limit=limit)


@lru_cache(maxsize=None)
def gl_group(n: int, q: int, limit: int = DEFAULT_ENUM_LIMIT) -> FiniteMatrixGroup:
    fld = field(q)
    return FiniteMatrixGroup(
        f"GL{n}(F{q})", gl_generators(fld, n),
        expected_order=gl_order(n, q),
        membership=lambda g: g.det() != 0,
        limit=limit)


def build_subgroups(sp: SympSpace):
    """The Siegel parabolic pieces: N, the Levi GL(X), P, and the center.

    N and the center are returned with full element lists; GL_Levi and P as
    generator lists (they can be closed on demand).
    """
    fld, n = sp.fld, sp.n
    n_elements = [sp.u(a) for a in symmetric_matrices(fld, n)]
    levi_gens = [sp.m(c) for c in gl_generators(fld, n)]
    p_gens = [sp.u(a) for a in symmetric_basis(fld, n)] + levi_gens
    center = [Mat.identity(fld, 2 * n), -Mat.identity(fld, 2 * n)]
    return {
        "N": n_elements,
        "GL_Levi_gens": levi_gens,
        "P_gens": p_gens,
        "center": center,
    }


# ---------------------------------------------------------------------------
# orthogonal groups
# ---------------------------------------------------------------------------

def orthogonal_gram(k: int, plus_type: bool, fld: GF) -> Mat:
    """diag(1,...,1) or diag(1,...,1,eps) with eps the fixed non-square."""
    entries = [1] * k
    if not plus_type:
        entries[-1] = fld.non_square
    return Mat.diag(fld, entries)


def _reflections(beta: Mat):
    """All reflections x -> x - 2 beta(x,v)/beta(v,v) v, v anisotropic."""
    fld = beta.fld
    k = beta.nrows
    out = []
    seen_dirs = set()
    for v in itertools.product(range(fld.q), repeat=k):
        if all(c == 0 for c in v):
            continue
        first = next(c for c in v if c)
        unit = tuple(fld.mul(fld.inv(first), c) for c in v)
        if unit in seen_dirs:
            continue
        seen_dirs.add(unit)
        bv = beta.mul_vec(unit)
        norm = 0
        for c, b in zip(unit, bv):
            norm = fld.add(norm, fld.mul(c, b))
        if norm == 0:
            continue
        f = fld.mul(2 % fld.q, fld.inv(norm))
        rows = []
        for i in range(k):
            row = []
            for j in range(k):
                val = 1 if i == j else 0
                val = fld.sub(val, fld.mul(f, fld.mul(unit[i], bv[j])))
                row.append(val)
            rows.append(tuple(row))
        out.append(Mat(fld, rows))
    return out


class OrthogonalGroup(FiniteMatrixGroup):
    """Isometry group of a chosen symmetric Gram form."""

    def __init__(self, k: int, plus_type: bool, q: int,
                 limit: int = DEFAULT_ENUM_LIMIT):
        fld = field(q)
        beta = orthogonal_gram(k, plus_type, fld)
        self.beta = beta
        self.k = k
        disc = 1 if plus_type else fld.non_square
        self.disc_square = fld.quadratic_character(disc) == 1
        expected = o_order(k, self.disc_square, q)
        refl = _reflections(beta)
        # greedy reduction: a small generating set keeps class sweeps cheap
        gens = []
        size = 0
        for r in refl:
            gens.append(r)
            size = len(closure(gens, limit=limit))
            if size == expected:
                break
        membership = (lambda g, b=beta:
                      g.transpose() * b * g == b)
        super().__init__(f"O{k}{'+' if plus_type else '-'}(F{q})", gens,
                         expected_order=expected, membership=membership,
                         limit=limit)


@lru_cache(maxsize=None)
def orthogonal_group(k: int, plus_type: bool, q: int) -> OrthogonalGroup:
    return OrthogonalGroup(k, plus_type, q)


# ---------------------------------------------------------------------------
# tensor embedding  Sp(V) x O_beta -> Sp(V tensor U)
# ---------------------------------------------------------------------------

class TensorSpace:
    """V tensor U with form <,> tensor beta; X tensor U coordinates first.

    In the product basis the Gram is [[0, I_n kron beta], [-I_n kron beta, 0]];
    ``to_standard`` conjugates into the standard Gram [[0, I], [-I, 0]].
    """

    def __init__(self, sp: SympSpace, beta: Mat):
        self.sp = sp
        self.beta = beta
        self.fld = sp.fld
        self.n = sp.n
        self.k = beta.nrows
        fld = self.fld
        nk = self.n * self.k
        s = Mat.identity(fld, self.n).kron(beta)
        zero = Mat.zeros(fld, nk, nk)
        self.gram = Mat.block2(zero, s, -s, zero)
        self._basechange = Mat.block2(s, zero, zero, Mat.identity(fld, nk))
        self._basechange_inv = self._basechange.inv()

    def embed_sp(self, g: Mat) -> Mat:
        """g tensor I_k, block by block."""
        a, b, c, d = self.sp.blocks(g)
        ik = Mat.identity(self.fld, self.k)
        return Mat.block2(a.kron(ik), b.kron(ik), c.kron(ik), d.kron(ik))

    def embed_o(self, r: Mat) -> Mat:
        """I_2n tensor r."""
        i_n = Mat.identity(self.fld, self.n)
        nk = self.n * self.k
        zero = Mat.zeros(self.fld, nk, nk)
        e = i_n.kron(r)
        return Mat.block2(e, zero, zero, e)

    def contains(self, g: Mat) -> bool:
        return g.transpose() * self.gram * g == self.gram

    def to_standard(self, g: Mat) -> Mat:
        """Conjugate a <,> tensor beta isometry into standard Sp_2nk."""
        return self._basechange * g * self._basechange_inv


def tensor_embed(sp: SympSpace, beta: Mat, g: Mat = None, r: Mat = None) -> Mat:
    """Image of g in Sp (as g tensor I) or r in O_beta (as I tensor r)."""
    space = TensorSpace(sp, beta)
    if (g is None) == (r is None):
        raise ValueError("pass exactly one of g, r")
    return space.embed_sp(g) if g is not None else space.embed_o(r)
