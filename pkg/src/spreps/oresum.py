"""Commutator-count statistics: the brute-force oracle, the character-sum
formula #[,]_g / |G| = 1 + sum over nontrivial irreducibles of
chi(g)/dim, character ratios, and the uniformity-deviation report.

The oracle and the character sum are compared exactly wherever both run;
floats appear only in emitted reports.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .chartab import CharacterTable
from .exactnum import CycloNum, embed_complex
from .symplin import FiniteMatrixGroup, Mat

ALL_PAIRS_LIMIT = 1_000
CENTRALIZER_LIMIT = 100_000


def commutator_counts_all(group: FiniteMatrixGroup):
    """#{(x, y) : [x, y] = g} for every g, by the all-pairs oracle."""
    if group.order > ALL_PAIRS_LIMIT:
        raise RuntimeError("group too large for the all-pairs oracle")
    counts = {}
    elems = group.elements
    invs = {x: group.inverse(x) for x in elems}
    for x in elems:
        xi = invs[x]
        for y in elems:
            c = x * y * xi * invs[y]
            counts[c] = counts.get(c, 0) + 1
    return counts


def commutator_count(group: FiniteMatrixGroup, g: Mat) -> int:
    """#{(x, y) : [x, y] = g} via centralizer orders and a conjugacy test.

    For fixed x, the y with y x^-1 y^-1 = x^-1 g number |C(x)| when
    x^-1 g is conjugate to x^-1, else zero.
    """
    if group.order > CENTRALIZER_LIMIT:
        raise RuntimeError("group too large for the centralizer path")
    sizes = group.class_sizes()
    total = 0
    for x in group.elements:
        xi = group.inverse(x)
        if group.class_of(xi * g) == group.class_of(xi):
            total += group.order // sizes[group.class_of(x)]
    return total


def frobenius_count(table: CharacterTable, class_index: int) -> Fraction:
    """1 + sum over nontrivial chi of chi(g)/dim(chi), exact and rational."""
    triv = table.index_of_trivial()
    acc = CycloNum.from_rational(1)
    for i, chi in enumerate(table.irreducibles):
        if i == triv:
            continue
        acc = acc + chi.at_class(class_index) * Fraction(1, chi.dim_int())
    if not acc.is_rational():
        raise RuntimeError("commutator density is not rational")
    return acc.as_fraction()


def deviation(table: CharacterTable, class_index: int) -> CycloNum:
    """sum over nontrivial chi of chi(g)/dim(chi) (exact, rational here)."""
    triv = table.index_of_trivial()
    acc = CycloNum.zero(1)
    for i, chi in enumerate(table.irreducibles):
        if i == triv:
            continue
        acc = acc + chi.at_class(class_index) * Fraction(1, chi.dim_int())
    return acc


def log_q_bucket(dim: int, q: int) -> int:
    """Nearest integer to log_q(dim): the m with q^(2m-1) <= dim^2 < q^(2m+1)."""
    m = 0
    while q ** (2 * m + 1) <= dim * dim:
        m += 1
    return m


def transvection_class(group: FiniteMatrixGroup, space) -> int:
    return group.class_of(space.transvection())


def uniformity_report(group: FiniteMatrixGroup, table: CharacterTable,
                      space, q: int, with_brute: bool = None):
    """Per-class commutator densities and per-irrep transvection ratios.

    Returns (per_class rows, per_irrep rows).  The brute-force column is
    filled whenever the oracle is feasible (or as requested).
    """
    classes = group.conjugacy_classes()
    sizes = group.class_sizes()
    if with_brute is None:
        with_brute = group.order <= ALL_PAIRS_LIMIT
    brute = None
    if with_brute:
        brute = commutator_counts_all(group)
    per_class = []
    for j, members in enumerate(classes):
        frob = frobenius_count(table, j)
        dev = frob - 1
        row = {
            "class": j,
            "size": sizes[j],
            "rep": classes[j][0].literal(),
            "frobenius": frob,
            "deviation": dev,
            "deviation_float": float(dev),
        }
        if brute is not None:
            cnt = brute.get(classes[j][0], 0)
            row["brute_count"] = cnt
            if Fraction(cnt, group.order) != frob:
                raise RuntimeError(
                    f"oracle and character sum disagree on class {j}")
        per_class.append(row)
    tclass = transvection_class(group, space)
    per_irrep = []
    for i, chi in enumerate(table.irreducibles):
        d = chi.dim_int()
        val = chi.at_class(tclass)
        ratio = val * Fraction(1, d)
        per_irrep.append({
            "irrep": i,
            "dim": d,
            "bucket": log_q_bucket(d, q),
            "ratio": str(ratio),
            "ratio_float": _real_float(ratio),
        })
    return per_class, per_irrep, tclass


def _real_float(x: CycloNum) -> float:
    z = embed_complex(x)
    return z.real if abs(z.imag) < 1e-9 else float("nan")


def schur_column_bound(group: FiniteMatrixGroup, table: CharacterTable,
                       class_index: int) -> bool:
    """|deviation|^2 <= (#classes - 1)(|C(g)| - 1), exactly.

    Cauchy-Schwarz against the column orthogonality relation
    sum_chi |chi(g)|^2 = |C(g)|.
    """
    dev = deviation(table, class_index)
    lhs = (dev * dev.conj()).as_fraction()
    n_cls = len(group.conjugacy_classes())
    cent = group.order // group.class_sizes()[class_index]
    return lhs <= (n_cls - 1) * (cent - 1)
