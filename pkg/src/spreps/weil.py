"""The oscillator representation of Sp_2n(F_q) in the Schroedinger model,
and the tensor model on functions over Hom(X, U) with its commuting
Sp x O_beta actions.

The three generator formulas on L^2(Y):

    u(A):  (w f)(y) = psi_a(A(y,y)/2) f(y)
    b(B):  (w f)(y) = gamma(B)^-1 sum_y' psi_a(B(y,y')) f(y')
    m(C):  (w f)(y) = legendre(det C) f(C^t y)

with gamma the quadratic Gauss sum; J is the b-token with B = I.  A general
group element is factored into at most 7 tokens by symplectic elimination,
and its operator is *defined* as the word product.  Multiplicativity of the
result is asserted by the test suite, never assumed.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exactnum import CycloMatrix, CycloNum
from .gfq import GF, field, gauss_sum
from .symplin import Mat, SympSpace, symmetric_matrices

Token = tuple


# ---------------------------------------------------------------------------
# factorization into u / m / J words
# ---------------------------------------------------------------------------

def factor_sp(sp: SympSpace, g: Mat, variant: int = 0):
    """Write g in Sp as a product of at most 7 u(A), m(C), J tokens.

    Tokens are ('u', A), ('m', C), ('j',); the product of their matrices in
    list order equals g (asserted).  ``variant`` = 1 prefers the route
    through g*J when available, producing a different word for the
    factorization-independence checks.
    """
    if not sp.contains(g):
        raise ValueError("input is not symplectic")
    word = _factor(sp, g, variant)
    word = [t for t in word if not _is_identity_token(sp, t)]
    if not word:
        word = [("u", Mat.zeros(sp.fld, sp.n, sp.n))]
    check = token_product(sp, word)
    if check != g:
        raise AssertionError("factorization does not multiply back")
    return word


def _factor(sp: SympSpace, g: Mat, variant: int):
    a, b, c, d = sp.blocks(g)
    n, fld = sp.n, sp.fld
    if variant == 1 and c.det() and d.det():
        return _factor_via_j(sp, g)
    if c.is_zero():
        # g = u(B A^t) m(A)
        return [("u", b * a.transpose()), ("m", a)]
    if c.det():
        return _factor_invertible_c(sp, g)
    if d.det():
        return _factor_via_j(sp, g)
    # both C and D singular: right-multiply by a lower unipotent to make
    # the lower-left block invertible, then undo it with J u(-S) J
    for s in symmetric_matrices(fld, n):
        if (c - d * s).det():
            g2 = g * sp.lower(s)
            w = _factor_invertible_c(sp, g2)
            u1, j1, u2, (_, c2) = w
            return [u1, j1, u2, ("m", -c2), ("j",), ("u", -s), ("j",)]
    raise AssertionError("no lower-unipotent move fixes the corner block")


def _factor_invertible_c(sp: SympSpace, g: Mat):
    a, b, c, d = sp.blocks(g)
    s1 = a * c.inv()
    s2 = d * c.transpose()
    return [("u", s1), ("j",), ("u", s2), ("m", -c)]


def _factor_via_j(sp: SympSpace, g: Mat):
    w = _factor_invertible_c(sp, g * sp.j)
    u1, j1, u2, (_, c2) = w
    return [u1, j1, u2, ("m", -c2), ("j",)]


def _is_identity_token(sp: SympSpace, t: Token) -> bool:
    if t[0] == "u":
        return t[1].is_zero()
    if t[0] == "m":
        return t[1] == Mat.identity(sp.fld, sp.n)
    return False


def token_matrix(sp: SympSpace, t: Token) -> Mat:
    if t[0] == "u":
        return sp.u(t[1])
    if t[0] == "m":
        return sp.m(t[1])
    if t[0] == "j":
        return sp.j
    if t[0] == "b":
        bi = t[1].inv()
        return Mat.block2(Mat.zeros(sp.fld, sp.n, sp.n), t[1],
                          -bi, Mat.zeros(sp.fld, sp.n, sp.n))
    raise ValueError(f"unknown token {t[0]!r}")


def token_product(sp: SympSpace, word) -> Mat:
    out = Mat.identity(sp.fld, 2 * sp.n)
    for t in word:
        out = out * token_matrix(sp, t)
    return out


# ---------------------------------------------------------------------------
# the Schroedinger model
# ---------------------------------------------------------------------------

def _psi_exponent_table(fld: GF, a: int):
    return [fld.psi_exponent(a, x) for x in range(fld.q)]


class SchrodingerModel:
    """omega_psi_a of Sp_2n(F_q) on functions on Y = F_q^n.

    Basis vectors of Y in lexicographic order.  Operator matrices are exact
    CycloMatrix values over Q(zeta_p); the per-element cache is bounded.
    """

    def __init__(self, n: int, q: int, a: int = 1, cache_limit: int = 100_000):
        self.fld = field(q)
        if a == 0:
            raise ValueError("central character must be nontrivial")
        self.n = n
        self.a = a
        self.sp = SympSpace(n, self.fld)
        self.dim = q ** n
        self.basis = list(itertools.product(range(q), repeat=n))
        self.basis_index = {v: i for i, v in enumerate(self.basis)}
        self._cache = {}
        self._cache_limit = cache_limit
        self._token_cache = {}

    # -- token operators -----------------------------------------------------
    def op_u(self, a_mat: Mat) -> CycloMatrix:
        fld = self.fld
        dim = self.dim
        exps = np.zeros((dim, dim), dtype=np.int64)
        mask = np.eye(dim, dtype=bool)
        half = fld.half
        for i, y in enumerate(self.basis):
            v = _form_value(fld, a_mat, y)
            exps[i, i] = fld.psi_exponent(self.a, fld.mul(half, v))
        return CycloMatrix.from_exponents(fld.p, exps, mask=mask)

    def op_m(self, c_mat: Mat) -> CycloMatrix:
        fld = self.fld
        if c_mat.det() == 0:
            raise ValueError("Levi token requires invertible C")
        sgn = fld.quadratic_character(c_mat.det())
        ct = c_mat.transpose()
        dim = self.dim
        exps = np.zeros((dim, dim), dtype=np.int64)
        mask = np.zeros((dim, dim), dtype=bool)
        for i, y in enumerate(self.basis):
            j = self.basis_index[ct.mul_vec(y)]
            mask[i, j] = True
        return CycloMatrix.from_exponents(fld.p, exps, signs=sgn, mask=mask)

    def op_b(self, b_mat: Mat) -> CycloMatrix:
        """The Fourier-type token [[0, B], [-B^-1, 0]], B invertible."""
        fld = self.fld
        if b_mat.det() == 0:
            raise ValueError("degenerate form")
        gamma = gauss_sum(fld, b_mat.rows, self.a)
        dim = self.dim
        exps = np.zeros((dim, dim), dtype=np.int64)
        for i, y in enumerate(self.basis):
            by = b_mat.mul_vec(y)
            for j, y2 in enumerate(self.basis):
                acc = 0
                for c1, c2 in zip(by, y2):
                    if c1 and c2:
                        acc = fld.add(acc, fld.mul(c1, c2))
                exps[i, j] = fld.psi_exponent(self.a, acc)
        kernel = CycloMatrix.from_exponents(fld.p, exps)
        return kernel.scale_cyclo(gamma.conj()).scale(
            Fraction(1, fld.q ** self.n))

    def op_j(self) -> CycloMatrix:
        return self.op_b(Mat.identity(self.fld, self.n))

    def token_op(self, t: Token) -> CycloMatrix:
        key = (t[0],) + (t[1].rows,) if len(t) > 1 else (t[0],)
        got = self._token_cache.get(key)
        if got is None:
            if t[0] == "u":
                got = self.op_u(t[1])
            elif t[0] == "m":
                got = self.op_m(t[1])
            elif t[0] == "j":
                got = self.op_j()
            elif t[0] == "b":
                got = self.op_b(t[1])
            else:
                raise ValueError(f"unknown token {t[0]!r}")
            self._token_cache[key] = got
        return got

    # -- the representation ---------------------------------------------------
    def omega(self, g: Mat, variant: int = 0) -> CycloMatrix:
        if variant == 0 and g in self._cache:
            return self._cache[g]
        word = factor_sp(self.sp, g, variant=variant)
        out = None
        for t in word:
            op = self.token_op(t)
            out = op if out is None else out @ op
        if variant == 0 and len(self._cache) < self._cache_limit:
            self._cache[g] = out
        return out

    def character(self, g: Mat) -> CycloNum:
        return self.omega(g).trace()

    def minus_identity_op(self) -> CycloMatrix:
        return self.op_m(-Mat.identity(self.fld, self.n))

    # -- even/odd decomposition ------------------------------------------------
    def even_odd_dims(self):
        """Dimensions of the +1/-1 eigenspaces of omega(-I)."""
        m = self.minus_identity_op()
        if not (m @ m).is_identity():
            raise AssertionError("omega(-I)^2 is not the identity")
        tr = m.trace().as_fraction()
        assert tr.denominator == 1
        t = int(tr)
        dim_plus = (self.dim + t) // 2
        return dim_plus, self.dim - dim_plus

    def even_odd_characters(self, elements):
        """chi_+ and chi_- at the given group elements (exact)."""
        m = self.minus_identity_op()
        plus, minus = [], []
        for g in elements:
            w = self.omega(g)
            t0 = w.trace()
            t1 = (w @ m).trace()
            plus.append((t0 + t1) / 2)
            minus.append((t0 - t1) / 2)
        return plus, minus

    # -- N-spectrum of the full model (structural, no table needed) -----------
    def n_support_census(self, scale: int = None):
        """m_B = #{y : B_y = B} where B_y is the label form of delta_y.

        With psi_B(A) = psi(scale Tr(BA)) the diagonal u(A)-eigenvalue at y
        is psi_B_y(A) for B_y = (a/(2 scale)) y y^t.
        """
        fld = self.fld
        if scale is None:
            scale = fld.half
        factor = fld.mul(self.a, fld.mul(fld.half, fld.inv(scale)))
        census = {}
        for y in self.basis:
            rows = tuple(tuple(fld.mul(factor, fld.mul(yi, yj)) for yj in y)
                         for yi in y)
            census[rows] = census.get(rows, 0) + 1
        return {Mat(fld, rows): c for rows, c in census.items()}


def _form_value(fld: GF, mat: Mat, y) -> int:
    acc = 0
    for i, yi in enumerate(y):
        if yi:
            row = mat.rows[i]
            s = 0
            for j, yj in enumerate(y):
                if yj and row[j]:
                    s = fld.add(s, fld.mul(row[j], yj))
            acc = fld.add(acc, fld.mul(yi, s))
    return acc


def twist_equivalent(n: int, q: int, a1: int, a2: int, elements) -> bool:
    """Whether omega_a1 and omega_a2 have equal characters on ``elements``."""
    m1 = schrodinger_model(n, q, a1)
    m2 = schrodinger_model(n, q, a2)
    return all(m1.character(g) == m2.character(g) for g in elements)


@lru_cache(maxsize=None)
def schrodinger_model(n: int, q: int, a: int = 1) -> SchrodingerModel:
    return SchrodingerModel(n, q, a)


# ---------------------------------------------------------------------------
# the tensor model on L^2(Hom(X, U))
# ---------------------------------------------------------------------------

class TensorModel:
    """The oscillator representation of Sp(V tensor U) restricted to the
    dual pair, realized on functions on Hom(X, U).

    Basis: all k x n matrices T, ordered lexicographically by the
    column-stacked coordinate tuple (matching the lexicographic Y-basis of
    the standard model of Sp_2nk under the canonical identification).

        N of Sp:   (w f)(T) = psi_a(Tr(beta_T A)/2) f(T)
        GL of Sp:  (w f)(T) = legendre(det C)^k f(T C)
        J of Sp:   kernel psi_a(Tr(T'^t beta T)) / gamma
        r in O:    (w f)(T) = legendre(det r)^n f(r^-1 T)
    """

    def __init__(self, n: int, k: int, q: int, beta: Mat, a: int = 1):
        self.fld = field(q)
        self.n = n
        self.k = k
        self.a = a
        self.beta = beta
        self.sp = SympSpace(n, self.fld)
        self.dim = q ** (n * k)
        fld = self.fld
        self.basis = []
        self.basis_index = {}
        for flat in itertools.product(range(q), repeat=n * k):
            # column-major: entry (b, j) = flat[j*k + b]
            rows = tuple(tuple(flat[j * k + b] for j in range(n))
                         for b in range(k))
            t = Mat(fld, rows)
            self.basis_index[t] = len(self.basis)
            self.basis.append(t)
        self._beta_t = [t.transpose() * beta * t for t in self.basis]
        self._token_cache = {}
        self._cache = {}

    # -- token operators -------------------------------------------------------
    def op_u(self, a_mat: Mat) -> CycloMatrix:
        fld = self.fld
        dim = self.dim
        half = fld.half
        exps = np.zeros((dim, dim), dtype=np.int64)
        mask = np.eye(dim, dtype=bool)
        for i, bt in enumerate(self._beta_t):
            tr = _trace_prod(fld, bt, a_mat)
            exps[i, i] = fld.psi_exponent(self.a, fld.mul(half, tr))
        return CycloMatrix.from_exponents(fld.p, exps, mask=mask)

    def op_m(self, c_mat: Mat) -> CycloMatrix:
        fld = self.fld
        if c_mat.det() == 0:
            raise ValueError("Levi token requires invertible C")
        sgn = fld.quadratic_character(c_mat.det()) ** self.k
        dim = self.dim
        exps = np.zeros((dim, dim), dtype=np.int64)
        mask = np.zeros((dim, dim), dtype=bool)
        for i, t in enumerate(self.basis):
            j = self.basis_index[t * c_mat]
            mask[i, j] = True
        return CycloMatrix.from_exponents(fld.p, exps, signs=sgn, mask=mask)

    def op_j(self) -> CycloMatrix:
        fld = self.fld
        dim = self.dim
        # gamma for the big form Tr(T^t beta T), nondegenerate since beta is
        mhalf = fld.neg(fld.half)
        counts = [0] * fld.p
        for bt, t in zip(self._beta_t, self.basis):
            tr = _trace_of(fld, bt)
            counts[fld.psi_exponent(self.a, fld.mul(mhalf, tr))] += 1
        gamma = CycloNum(fld.p, {e: Fraction(c)
                                 for e, c in enumerate(counts) if c})
        if fld.d == 1:
            exps = self._kernel_exponents_prime()
        else:
            exps = np.zeros((dim, dim), dtype=np.int64)
            for i, t in enumerate(self.basis):
                bt = self.beta * t
                for j, t2 in enumerate(self.basis):
                    acc = 0
                    for col1, col2 in zip(zip(*bt.rows), zip(*t2.rows)):
                        for c1, c2 in zip(col1, col2):
                            if c1 and c2:
                                acc = fld.add(acc, fld.mul(c1, c2))
                    exps[j, i] = fld.psi_exponent(self.a, acc)
        kernel = CycloMatrix.from_exponents(fld.p, exps)
        return kernel.scale_cyclo(gamma.conj()).scale(Fraction(1, dim))

    def _kernel_exponents_prime(self) -> np.ndarray:
        """psi-exponents of Tr(T'^t beta T), vectorized for prime q."""
        p = self.fld.p
        nk = self.n * self.k
        vecs = np.zeros((self.dim, nk), dtype=np.int64)
        for i, t in enumerate(self.basis):
            cols = [t.rows[b][j] for j in range(self.n) for b in range(self.k)]
            vecs[i] = cols
        kron = np.zeros((nk, nk), dtype=np.int64)
        for j in range(self.n):
            for a_ in range(self.k):
                for b_ in range(self.k):
                    kron[j * self.k + a_, j * self.k + b_] = \
                        self.beta.rows[a_][b_]
        prod = (vecs @ kron @ vecs.T) % p
        return (self.a * prod) % p

    def op_r(self, r: Mat) -> CycloMatrix:
        """Action of an isometry r of beta."""
        fld = self.fld
        if r.transpose() * self.beta * r != self.beta:
            raise ValueError("not an isometry of beta")
        sgn = fld.quadratic_character(r.det()) ** self.n
        ri = r.inv()
        dim = self.dim
        exps = np.zeros((dim, dim), dtype=np.int64)
        mask = np.zeros((dim, dim), dtype=bool)
        for i, t in enumerate(self.basis):
            j = self.basis_index[ri * t]
            mask[i, j] = True
        return CycloMatrix.from_exponents(fld.p, exps, signs=sgn, mask=mask)

    def token_op(self, t: Token) -> CycloMatrix:
        key = (t[0],) + (t[1].rows,) if len(t) > 1 else (t[0],)
        got = self._token_cache.get(key)
        if got is None:
            if t[0] == "u":
                got = self.op_u(t[1])
            elif t[0] == "m":
                got = self.op_m(t[1])
            elif t[0] == "j":
                got = self.op_j()
            else:
                raise ValueError(f"unknown token {t[0]!r} in tensor model")
            self._token_cache[key] = got
        return got

    def sp_action(self, g: Mat) -> CycloMatrix:
        """Operator of g in Sp_2n via its u/m/J word."""
        if g in self._cache:
            return self._cache[g]
        word = factor_sp(self.sp, g)
        out = None
        for t in word:
            op = self.token_op(t)
            out = op if out is None else out @ op
        if len(self._cache) < 20_000:
            self._cache[g] = out
        return out

    def sp_character(self, g: Mat) -> CycloNum:
        return self.sp_action(g).trace()

    # -- N-spectrum structure ---------------------------------------------------
    def label_form(self, idx: int, scale: int = None) -> Mat:
        """The form B with delta_T an eigenvector of character psi_B."""
        fld = self.fld
        if scale is None:
            scale = fld.half
        factor = fld.mul(self.a, fld.mul(fld.half, fld.inv(scale)))
        bt = self._beta_t[idx]
        return Mat(fld, tuple(tuple(fld.mul(factor, v) for v in row)
                              for row in bt.rows))

    def n_support_census(self, scale: int = None):
        census = {}
        for i in range(self.dim):
            b = self.label_form(i, scale)
            census[b] = census.get(b, 0) + 1
        return census

    def tensor_rank(self, scale: int = None):
        """Top rank and type of the N-spectrum; rank k exactly when the
        census contains pullbacks of onto maps."""
        from .symforms import classify
        census = self.n_support_census(scale)
        best = (0, None)
        top_labels = set()
        for b in census:
            lab = classify(b)
            if lab.rank > best[0]:
                best = (lab.rank, lab.type)
                top_labels = {lab}
            elif lab.rank == best[0]:
                top_labels.add(lab)
        if len(top_labels) > 1:
            raise AssertionError("top-rank part is not a single type")
        return best

    def eigenspace_indices(self, form: Mat, scale: int = None):
        """Indices of basis vectors in the psi_form character subspace."""
        return [i for i in range(self.dim)
                if self.label_form(i, scale) == form]


def _trace_prod(fld: GF, b: Mat, a: Mat) -> int:
    acc = 0
    for i, brow in enumerate(b.rows):
        for j, bv in enumerate(brow):
            if bv and a.rows[j][i]:
                acc = fld.add(acc, fld.mul(bv, a.rows[j][i]))
    return acc


def _trace_of(fld: GF, m: Mat) -> int:
    acc = 0
    for i in range(m.nrows):
        acc = fld.add(acc, m.rows[i][i])
    return acc
