"""Exact class functions, character tables by the modular eigenvector
method, and the N-spectrum / rank machinery for symplectic groups.

The table algorithm: over a prime field F_l with l = 1 mod exp(G) and
l > 2 sqrt(|G|), the normalized common eigenvectors of the class
multiplication matrices are the central characters; degrees come from the
orthogonality relation and a square root mod l, character values from
discrete Fourier inversion along power maps.  Both orthogonality relations
are re-verified exactly in cyclotomic arithmetic afterwards; any failure is
a hard error.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from sympy import isprime, primitive_root, sqrt_mod

from .exactnum import CycloNum
from .gfq import field
from .symforms import OrbitLabel, all_labels, classify, form_character_exponent
from .symplin import FiniteMatrixGroup, Mat, SympSpace, sp_group, \
    symmetric_matrices


class ClassFunction:
    """Exact class function on a FiniteMatrixGroup with computed classes."""

    def __init__(self, group: FiniteMatrixGroup, values):
        self.group = group
        self.values = list(values)
        if len(self.values) != len(group.conjugacy_classes()):
            raise ValueError("one value per class required")

    def at_class(self, j: int) -> CycloNum:
        return self.values[j]

    def __call__(self, g: Mat) -> CycloNum:
        return self.values[self.group.class_of(g)]

    @property
    def dim(self) -> CycloNum:
        return self.values[0]

    def dim_int(self) -> int:
        v = self.values[0].as_fraction()
        assert v.denominator == 1
        return int(v)

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        self._check(other)
        return ClassFunction(self.group,
                             [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        self._check(other)
        return ClassFunction(self.group,
                             [a - b for a, b in zip(self.values, other.values)])

    def scale(self, c) -> "ClassFunction":
        return ClassFunction(self.group, [v * c for v in self.values])

    def _check(self, other):
        if self.group is not other.group:
            raise ValueError("class functions on different groups")

    def key(self):
        """Deterministic sort key through canonical string forms."""
        return tuple(str(v) for v in self.values)

    def __eq__(self, other):
        return isinstance(other, ClassFunction) and \
            self.group is other.group and \
            all(a == b for a, b in zip(self.values, other.values))


def inner_product(f: ClassFunction, g: ClassFunction) -> CycloNum:
    """<f, g> = |G|^-1 sum over classes of size * f * conj(g), exact."""
    if f.group is not g.group:
        raise ValueError("class functions on different groups")
    sizes = f.group.class_sizes()
    acc = CycloNum.zero(1)
    for s, a, b in zip(sizes, f.values, g.values):
        acc = acc + a * b.conj() * s
    return acc * Fraction(1, f.group.order)


def regular_character(group: FiniteMatrixGroup) -> ClassFunction:
    vals = [CycloNum.from_rational(group.order)] + \
        [CycloNum.zero(1)] * (len(group.conjugacy_classes()) - 1)
    return ClassFunction(group, vals)


def trivial_character(group: FiniteMatrixGroup) -> ClassFunction:
    n = len(group.conjugacy_classes())
    return ClassFunction(group, [CycloNum.from_rational(1)] * n)


# ---------------------------------------------------------------------------
# the modular table algorithm
# ---------------------------------------------------------------------------

class _ModLin:
    """Tiny dense linear algebra over F_l."""

    def __init__(self, l: int):
        self.l = l

    def solve(self, a, b):
        """Solve A x = b; A square invertible (lists of lists)."""
        l = self.l
        n = len(a)
        m = [row[:] + [bv] for row, bv in zip(a, b)]
        for c in range(n):
            piv = next(r for r in range(c, n) if m[r][c] % l)
            m[c], m[piv] = m[piv], m[c]
            inv = pow(m[c][c], -1, l)
            m[c] = [(v * inv) % l for v in m[c]]
            for r in range(n):
                if r != c and m[r][c]:
                    f = m[r][c]
                    m[r] = [(vr - f * vc) % l for vr, vc in zip(m[r], m[c])]
        return [m[i][n] for i in range(n)]

    def kernel(self, a):
        """Basis of the null space of A (square)."""
        l = self.l
        n = len(a)
        m = [row[:] for row in a]
        pivots = []
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, n) if m[i][c] % l), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = pow(m[r][c], -1, l)
            m[r] = [(v * inv) % l for v in m[r]]
            for i in range(n):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [(vi - f * vc) % l for vi, vc in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        free = [c for c in range(n) if c not in pivots]
        out = []
        for fc in free:
            v = [0] * n
            v[fc] = 1
            for ri, pc in enumerate(pivots):
                v[pc] = (-m[ri][fc]) % l
            out.append(v)
        return out

    def det(self, a):
        l = self.l
        n = len(a)
        m = [row[:] for row in a]
        det = 1
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c] % l), None)
            if piv is None:
                return 0
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = (-det) % l
            det = (det * m[c][c]) % l
            inv = pow(m[c][c], -1, l)
            for r in range(c + 1, n):
                if m[r][c]:
                    f = (m[r][c] * inv) % l
                    m[r] = [(vr - f * vc) % l for vr, vc in zip(m[r], m[c])]
        return det

    def charpoly_roots(self, a):
        """Distinct roots in F_l of det(A - x I), by interpolation + scan."""
        l = self.l
        n = len(a)
        pts = list(range(n + 1))
        vals = []
        for t in pts:
            m = [[(a[i][j] - (t if i == j else 0)) % l for j in range(n)]
                 for i in range(n)]
            vals.append(self.det(m))
        coeffs = self._interpolate(pts, vals)
        roots = []
        for x in range(l):
            acc = 0
            for c in reversed(coeffs):
                acc = (acc * x + c) % l
            if acc == 0:
                roots.append(x)
        return roots

    def _interpolate(self, xs, ys):
        """Coefficients (low to high) of the Lagrange interpolant."""
        l = self.l
        n = len(xs)
        coeffs = [0] * n
        for i in range(n):
            num = [1]
            den = 1
            for j in range(n):
                if j == i:
                    continue
                num = self._polymul(num, [(-xs[j]) % l, 1])
                den = (den * (xs[i] - xs[j])) % l
            f = (ys[i] * pow(den, -1, l)) % l
            for k, c in enumerate(num):
                coeffs[k] = (coeffs[k] + f * c) % l
        return coeffs

    def _polymul(self, a, b):
        l = self.l
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % l
        return out


class CharacterTable:
    """Complete table of irreducible characters with verified orthogonality."""

    def __init__(self, group: FiniteMatrixGroup, irreducibles):
        self.group = group
        self.irreducibles = list(irreducibles)
        self.degrees = [chi.dim_int() for chi in self.irreducibles]
        self.verify()

    def verify(self):
        """Both orthogonality relations and the degree sum, exactly."""
        group = self.group
        n_cls = len(group.conjugacy_classes())
        if len(self.irreducibles) != n_cls:
            raise RuntimeError("wrong number of irreducibles")
        if sum(d * d for d in self.degrees) != group.order:
            raise RuntimeError("degree squares do not sum to |G|")
        for i, chi in enumerate(self.irreducibles):
            for j in range(i, len(self.irreducibles)):
                val = inner_product(chi, self.irreducibles[j])
                want = 1 if i == j else 0
                if val != want:
                    raise RuntimeError(
                        f"row orthogonality fails at ({i},{j}): {val}")
        sizes = group.class_sizes()
        for j in range(n_cls):
            for k in range(j, n_cls):
                acc = CycloNum.zero(1)
                for chi in self.irreducibles:
                    acc = acc + chi.values[j] * chi.values[k].conj()
                want = Fraction(group.order, sizes[j]) if j == k else 0
                if acc != want:
                    raise RuntimeError(
                        f"column orthogonality fails at ({j},{k})")

    def decompose(self, cf: ClassFunction):
        """Multiplicities <cf, chi_i>, asserted non-negative integers."""
        out = []
        for chi in self.irreducibles:
            m = inner_product(cf, chi)
            if not m.is_rational():
                raise RuntimeError("non-rational multiplicity")
            frac = m.as_fraction()
            if frac.denominator != 1 or frac < 0:
                raise RuntimeError(f"bad multiplicity {frac}")
            out.append(int(frac))
        return out

    def index_of_trivial(self) -> int:
        for i, chi in enumerate(self.irreducibles):
            if all(v == 1 for v in chi.values):
                return i
        raise RuntimeError("trivial character missing")


def dixon_character_table(group: FiniteMatrixGroup,
                          prime_cap: int = 10_000_000) -> CharacterTable:
    """Character table via class-matrix eigenvectors over F_l.

    Deterministic: class matrices are consumed in ascending class size.
    """
    classes = group.conjugacy_classes()
    r = len(classes)
    reps = group.class_reps()
    sizes = group.class_sizes()
    order = group.order

    rep_orders = [rep.order() for rep in reps]
    exponent = math.lcm(*rep_orders)
    l = _dixon_prime(order, exponent, prime_cap)
    lin = _ModLin(l)

    # power maps: pm[j][s] = class of reps[j]^s for 0 <= s < ord(reps[j])
    pm = []
    for j, rep in enumerate(reps):
        row = []
        x = group.identity
        for _ in range(rep_orders[j]):
            row.append(group.class_of(x))
            x = x * rep
        pm.append(row)
    inv_map = [pm[j][-1] if rep_orders[j] > 1 else pm[j][0]
               for j in range(r)]

    # split the commuting family, smallest classes first
    spaces = [[_unit(r, i) for i in range(r)]]
    class_order = sorted(range(1, r), key=lambda i: (sizes[i], i))
    for ci in class_order:
        if all(len(sp) == 1 for sp in spaces):
            break
        m_ci = _class_matrix(group, classes, reps, ci)
        new_spaces = []
        for basis in spaces:
            if len(basis) == 1:
                new_spaces.append(basis)
                continue
            new_spaces.extend(_split_space(lin, m_ci, basis, l))
        spaces = new_spaces
    if not all(len(sp) == 1 for sp in spaces):
        raise RuntimeError("class matrices failed to split the center")

    # normalize eigenvectors: coordinate at the identity class is 1
    omegas = []
    for basis in spaces:
        v = basis[0]
        if v[0] % l == 0:
            raise RuntimeError("eigenvector vanishes at the identity class")
        inv0 = pow(v[0], -1, l)
        omegas.append([(x * inv0) % l for x in v])

    # degrees from the orthogonality relation, then values mod l
    isz = [pow(s, -1, l) for s in sizes]
    degrees = []
    for v in omegas:
        t = sum(v[j] * v[inv_map[j]] * isz[j] for j in range(r)) % l
        d2 = (order * pow(t, -1, l)) % l
        root = sqrt_mod(d2, l)
        if root is None:
            raise RuntimeError("degree square has no modular square root")
        d = min(root, l - root)
        if d == 0 or d > math.isqrt(order):
            raise RuntimeError(f"implausible degree {d}")
        degrees.append(d)
    if sum(d * d for d in degrees) != order:
        raise RuntimeError("modular degrees do not sum to |G|")

    theta = pow(primitive_root(l), (l - 1) // exponent, l)
    irreducibles = []
    for v, d in zip(omegas, degrees):
        chi_mod = [(d * v[j] * isz[j]) % l for j in range(r)]
        values = []
        for j in range(r):
            o = rep_orders[j]
            theta_o = pow(theta, exponent // o, l)
            io = pow(o, -1, l)
            coeffs = {}
            for t in range(o):
                c = 0
                tho = pow(theta_o, (-t) % (l - 1), l)
                acc = 0
                power = 1
                for s in range(o):
                    acc = (acc + chi_mod[pm[j][s]] * power) % l
                    power = (power * tho) % l
                c = (acc * io) % l
                if c:
                    if c > d:
                        raise RuntimeError("eigenvalue multiplicity overflow")
                    coeffs[t] = Fraction(c)
            values.append(CycloNum(o, coeffs))
        irreducibles.append(ClassFunction(group, values))

    # canonical row order: trivial first, then by degree and value key
    def sort_key(chi):
        return (chi.dim_int(), chi.key())
    irreducibles.sort(key=sort_key)
    triv = next(i for i, chi in enumerate(irreducibles)
                if all(v == 1 for v in chi.values))
    irreducibles.insert(0, irreducibles.pop(triv))
    return CharacterTable(group, irreducibles)


def _dixon_prime(order: int, exponent: int, cap: int) -> int:
    # smallest prime l = 1 mod exponent with l > 2 sqrt(|G|), so that the
    # degrees (at most sqrt(|G|)) are determined by their residues
    l = max(math.isqrt(4 * order) + 1, exponent + 1)
    l += (exponent - (l - 1) % exponent) % exponent
    while l <= cap:
        if isprime(l):
            return l
        l += exponent
    raise RuntimeError(f"no splitting prime below {cap}")


def _unit(r: int, i: int):
    v = [0] * r
    v[i] = 1
    return v


def _class_matrix(group, classes, reps, i):
    """(M_i)[k][j] = #{(x, y) in C_i x C_k : x y = g_j}."""
    r = len(classes)
    m = [[0] * r for _ in range(r)]
    inv_x = [group.inverse(x) for x in classes[i]]
    for j in range(r):
        gj = reps[j]
        col = [0] * r
        for xi in inv_x:
            col[group.class_of(xi * gj)] += 1
        for k in range(r):
            m[k][j] = col[k]
    return m


def _split_space(lin: _ModLin, m, basis, l: int):
    """Split span(basis) into eigenspaces of the class matrix m."""
    d = len(basis)
    r = len(m)
    # restricted operator R with M b_t = sum_s R[s][t] b_s
    cols = []
    bt = [[basis[s][i] for s in range(d)] for i in range(r)]  # r x d
    # pick d independent coordinate rows of the basis matrix to solve against
    piv_rows = _pivot_rows(bt, d, l)
    bsq = [[bt[i][s] for s in range(d)] for i in piv_rows]
    for t in range(d):
        w = [sum(m[i][j] * basis[t][j] for j in range(r)) % l for i in range(r)]
        rhs = [w[i] for i in piv_rows]
        cols.append(lin.solve([row[:] for row in bsq], rhs))
    rmat = [[cols[t][s] for t in range(d)] for s in range(d)]
    out = []
    for lam in lin.charpoly_roots(rmat):
        shifted = [[(rmat[i][j] - (lam if i == j else 0)) % l
                    for j in range(d)] for i in range(d)]
        for kv in lin.kernel(shifted):
            vec = [sum(kv[s] * basis[s][i] for s in range(d)) % l
                   for i in range(r)]
            out.append(vec)
    # regroup kernel vectors by eigenvalue into eigenspace bases
    grouped = {}
    for vec in out:
        w = [sum(m[i][j] * vec[j] for j in range(r)) % l for i in range(r)]
        nz = next(i for i in range(r) if vec[i] % l)
        lam = (w[nz] * pow(vec[nz], -1, l)) % l
        grouped.setdefault(lam, []).append(vec)
    if sum(len(g) for g in grouped.values()) != d:
        raise RuntimeError("eigenspace dimensions do not add up")
    return [grouped[lam] for lam in sorted(grouped)]


def _pivot_rows(bt, d, l):
    """Indices of d linearly independent rows of the r x d matrix bt."""
    r = len(bt)
    m = [row[:] for row in bt]
    chosen = []
    col = 0
    used = set()
    for col in range(d):
        piv = None
        for i in range(r):
            if i in used:
                continue
            if m[i][col] % l:
                piv = i
                break
        if piv is None:
            raise RuntimeError("basis matrix is rank deficient")
        used.add(piv)
        chosen.append(piv)
        inv = pow(m[piv][col], -1, l)
        for i in range(r):
            if i != piv and m[i][col]:
                f = (m[i][col] * inv) % l
                m[i] = [(vi - f * vp) % l for vi, vp in zip(m[i], m[piv])]
    return chosen


# ---------------------------------------------------------------------------
# N-spectrum, rank, and type
# ---------------------------------------------------------------------------

class NSpectrum:
    """Multiplicities m_B over all symmetric forms plus orbit aggregation."""

    def __init__(self, full: dict, by_orbit: dict, dim: int):
        self.full = full
        self.by_orbit = by_orbit
        self.dim = dim

    def rank_and_type(self):
        """Top rank present and its type; 'both' listed explicitly."""
        top = 0
        types = set()
        for lab, m in self.by_orbit.items():
            if m and lab.rank > top:
                top = lab.rank
                types = {lab.type}
            elif m and lab.rank == top and lab.rank > 0:
                types.add(lab.type)
        if top == 0:
            return 0, "none"
        if types == {1}:
            return top, "plus"
        if types == {-1}:
            return top, "minus"
        return top, "both"


class SpContext:
    """Sp_2n(F_q) with its Siegel unipotent indexed by symmetric forms."""

    def __init__(self, n: int, q: int):
        self.n = n
        self.q = q
        self.fld = field(q)
        self.space = SympSpace(n, self.fld)
        self.group = sp_group(n, q)
        self.sym_mats = list(symmetric_matrices(self.fld, n))
        self.u_class = [self.group.class_of(self.space.u(a))
                        for a in self.sym_mats]
        self.labels = {b: classify(b) for b in self.sym_mats}
        self.scale = self.fld.half

    def orbit_sizes(self):
        sizes = {}
        for lab in self.labels.values():
            sizes[lab] = sizes.get(lab, 0) + 1
        return sizes


@lru_cache(maxsize=None)
def sp_context(n: int, q: int) -> SpContext:
    return SpContext(n, q)


@lru_cache(maxsize=None)
def sp_character_table(n: int, q: int) -> CharacterTable:
    return dixon_character_table(sp_group(n, q))


def n_spectrum(ctx: SpContext, cf: ClassFunction, scale: int = None) -> NSpectrum:
    """Fourier coefficients of cf restricted to N over the characters psi_B.

    m_B = |N|^-1 sum_A cf(u(A)) conj(psi_B(A)); every m_B must come out a
    non-negative integer or the conventions are inconsistent (hard error).
    """
    fld = ctx.fld
    if scale is None:
        scale = ctx.scale
    p = fld.p
    n_size = len(ctx.sym_mats)
    chi_at = [cf.at_class(c) for c in ctx.u_class]
    full = {}
    by_orbit = {lab: None for lab in all_labels(ctx.n)}
    for b in ctx.sym_mats:
        acc = CycloNum.zero(p)
        for a_mat, chi in zip(ctx.sym_mats, chi_at):
            e = form_character_exponent(fld, b, scale, a_mat)
            acc = acc + chi * CycloNum.root_of_unity(p, (-e) % p)
        acc = acc * Fraction(1, n_size)
        if not acc.is_rational():
            raise RuntimeError(f"non-rational N-multiplicity at {b.rows}")
        val = acc.as_fraction()
        if val.denominator != 1 or val < 0:
            raise RuntimeError(f"bad N-multiplicity {val} at {b.rows}")
        m = int(val)
        full[b] = m
        lab = ctx.labels[b]
        if by_orbit[lab] is None:
            by_orbit[lab] = m
        elif by_orbit[lab] != m:
            raise RuntimeError(f"N-spectrum not constant on orbit {lab}")
    by_orbit = {lab: (m if m is not None else 0)
                for lab, m in by_orbit.items()}
    dim = cf.dim_int()
    if sum(full.values()) != dim:
        raise RuntimeError("N-multiplicities do not sum to the dimension")
    return NSpectrum(full, by_orbit, dim)


def rank_table(ctx: SpContext, table: CharacterTable, scale: int = None):
    """One row per irreducible: dimension, orbit multiplicities, rank, type."""
    rows = []
    for idx, chi in enumerate(table.irreducibles):
        spec = n_spectrum(ctx, chi, scale)
        rank, typ = spec.rank_and_type()
        rows.append({
            "irrep": idx,
            "dim": chi.dim_int(),
            "mults": dict(spec.by_orbit),
            "rank": rank,
            "type": typ,
        })
    rows.sort(key=lambda r: (r["dim"], r["rank"], r["type"],
                             table.irreducibles[r["irrep"]].key()))
    return rows


def rank_census(rows):
    counts = {}
    for r in rows:
        key = (r["rank"], r["type"])
        counts[key] = counts.get(key, 0) + 1
    return counts
