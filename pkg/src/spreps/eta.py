"""The eta correspondence: isotypic decomposition of the tensor-model
oscillator representation under Sp x O_beta, extraction of the unique
top-rank constituent eta(tau), the table-free multiplicity-space checks,
the exhaustion census, and the dimension estimates.

Two verification paths are provided on purpose: (a) through the Sp
character table (feasible at n = 2, k = 1), and (b) through the
N-eigenspace and commutant structure on the tensor model itself (feasible
at n = 3, k = 2, where no Sp_6 table is within desk scale).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .chartab import CharacterTable, ClassFunction, NSpectrum, SpContext, \
    inner_product, n_spectrum
from .exactnum import CycloNum, trace_product
from .gfq import field
from .symforms import OrbitLabel, classify, orbit_card
from .symplin import FiniteMatrixGroup, Mat, OrthogonalGroup
from .weil import TensorModel


@dataclass
class EtaRecord:
    """One row of the correspondence for a fixed beta."""
    n: int
    k: int
    q: int
    beta_label: OrbitLabel
    tau_index: int
    dim_tau: int
    dim_theta: int
    dim_eta: Optional[int]
    mult_top: Optional[int]
    ratio: Fraction
    bound: Fraction
    estimate_pass: bool
    eta_index: Optional[int] = None


def theta_of_tau(model: TensorModel, o_group: OrthogonalGroup,
                 o_table: CharacterTable, tau_index: int,
                 sp_group_: FiniteMatrixGroup) -> ClassFunction:
    """chi_Theta(g) = |O|^-1 sum_r tr(w(g) w(r)) conj(chi_tau(r))."""
    tau = o_table.irreducibles[tau_index]
    reps = sp_group_.class_reps()
    r_ops = [model.op_r(r) for r in o_group.elements]
    tau_conj = [tau.at_class(o_group.class_of(r)).conj()
                for r in o_group.elements]
    values = []
    for g in reps:
        wg = model.sp_action(g)
        acc = CycloNum.zero(model.fld.p)
        for op, tv in zip(r_ops, tau_conj):
            acc = acc + trace_product(wg, op) * tv
        acc = acc * Fraction(1, o_group.order)
        values.append(acc)
    cf = ClassFunction(sp_group_, values)
    d = cf.dim
    if not d.is_rational() or d.as_fraction().denominator != 1 \
            or d.as_fraction() < 0:
        raise RuntimeError("Theta(tau) has a bad dimension")
    return cf


def eta_of_tau(theta: ClassFunction, sp_table: CharacterTable,
               ranks_by_irrep, k: int):
    """The unique rank-k constituent of Theta(tau).

    Decomposes by exact inner products; exactly one constituent may have
    rank k, it must occur with multiplicity one, and every other
    constituent must have lower rank.  Violations are hard errors.
    """
    mults = sp_table.decompose(theta)
    top = [i for i, m in enumerate(mults) if m and ranks_by_irrep[i] == k]
    if len(top) != 1:
        raise RuntimeError(
            f"expected a unique rank-{k} constituent, found {len(top)}")
    if mults[top[0]] != 1:
        raise RuntimeError("top-rank constituent has multiplicity != 1")
    for i, m in enumerate(mults):
        if m and ranks_by_irrep[i] > k:
            raise RuntimeError("constituent of rank above k present")
    return top[0], sp_table.irreducibles[top[0]], mults


def eta_records_table_path(n: int, k: int, q: int, plus_type: bool,
                           ctx: SpContext, sp_table: CharacterTable,
                           a: int = 1):
    """Path (a): full decomposition through the Sp character table."""
    from .chartab import rank_table
    from .symplin import orthogonal_group, sp_group

    o_group = orthogonal_group(k, plus_type, q)
    from .chartab import dixon_character_table
    o_table = _o_table(k, plus_type, q)
    model = TensorModel(n, k, q, o_group.beta, a=a)
    group = ctx.group
    rows = rank_table(ctx, sp_table)
    ranks_by_irrep = [None] * len(sp_table.irreducibles)
    for r in rows:
        ranks_by_irrep[r["irrep"]] = r["rank"]
    beta_label = classify(o_group.beta)
    top_label = OrbitLabel(k, beta_label.type)
    card = orbit_card(n, k, top_label.type, q)
    records = []
    for ti, tau in enumerate(o_table.irreducibles):
        theta = theta_of_tau(model, o_group, o_table, ti, group)
        eta_idx, eta_chi, _ = eta_of_tau(theta, sp_table, ranks_by_irrep, k)
        spec = n_spectrum(ctx, eta_chi)
        mult_top = spec.by_orbit[top_label]
        dim_tau = tau.dim_int()
        if mult_top != dim_tau:
            raise RuntimeError(
                f"orbit multiplicity {mult_top} != dim tau {dim_tau}")
        dim_eta = eta_chi.dim_int()
        ratio, bound, ok = dim_estimate(dim_eta, dim_tau, card, n, k, q)
        records.append(EtaRecord(
            n=n, k=k, q=q, beta_label=beta_label, tau_index=ti,
            dim_tau=dim_tau, dim_theta=theta.dim_int(), dim_eta=dim_eta,
            mult_top=mult_top, ratio=ratio, bound=bound, estimate_pass=ok,
            eta_index=eta_idx))
    return records


def _o_table(k: int, plus_type: bool, q: int) -> CharacterTable:
    from .chartab import dixon_character_table
    from .symplin import orthogonal_group
    return dixon_character_table(orthogonal_group(k, plus_type, q))


def theta_completeness(model: TensorModel, o_group: OrthogonalGroup,
                       o_table: CharacterTable, elements) -> bool:
    """sum_tau dim(tau) chi_Theta = full tensor character at ``elements``."""
    r_ops = [model.op_r(r) for r in o_group.elements]
    for g in elements:
        wg = model.sp_action(g)
        total = CycloNum.zero(model.fld.p)
        for ti, tau in enumerate(o_table.irreducibles):
            tau_conj = [tau.at_class(o_group.class_of(r)).conj()
                        for r in o_group.elements]
            acc = CycloNum.zero(model.fld.p)
            for op, tv in zip(r_ops, tau_conj):
                acc = acc + trace_product(wg, op) * tv
            total = total + acc * Fraction(tau.dim_int(), o_group.order)
        if total != wg.trace():
            return False
    return True


# ---------------------------------------------------------------------------
# path (b): N-eigenspace and commutant checks, no Sp table required
# ---------------------------------------------------------------------------

@dataclass
class MultiplicitySpaceReport:
    eigenspace_dim: int
    o_order: int
    free_orbit: bool
    regular_decomposition: bool
    stabilizer_order: int
    per_tau: list  # (tau_index, dim_tau, mult_in_regular, dim_mult_space,
    #                irreducible_over_stabilizer)


def multiplicity_space_check(model: TensorModel, t_map: Mat,
                             o_group: OrthogonalGroup,
                             o_table: CharacterTable) -> MultiplicitySpaceReport:
    """Verify the commutant mechanics on the psi_{beta_T} eigenspace.

    For an onto T: (i) the eigenspace has dimension |O_beta| and the O-orbit
    of T fills it; (ii) O_beta acts on it by the regular representation;
    (iii) for each tau the multiplicity space is an irreducible module of
    dimension dim(tau) for the GL(X)-stabilizer of beta_T.
    """
    fld = model.fld
    n, k = model.n, model.k
    if t_map.rank() != k:
        raise ValueError("beta_T degenerate: T is not onto")
    beta_t = t_map.transpose() * model.beta * t_map
    idx_of_t = model.basis_index[t_map]
    label = model.label_form(idx_of_t)
    eig = model.eigenspace_indices(label)
    eig_set = {model.basis[i]: pos for pos, i in enumerate(eig)}
    dim_e = len(eig)

    # (i) the orbit {r o T} covers the eigenspace exactly once each
    orbit = {o_group.inverse(r) * t_map for r in o_group.elements}
    free_orbit = len(orbit) == o_group.order and \
        set(orbit) == set(eig_set.keys())

    # joint signed-permutation action on the eigenspace
    def joint_character(r: Mat, c: Mat) -> CycloNum:
        sgn_r = fld.quadratic_character(r.det()) ** n
        sgn_c = fld.quadratic_character(c.det()) ** k
        ri = o_group.inverse(r)
        ci = c.inv()
        fixed = 0
        for t0 in eig_set:
            if ri * t0 * ci == t0:
                fixed += 1
        return CycloNum.from_rational(sgn_r * sgn_c * fixed)

    ident_n = Mat.identity(fld, n)
    # (ii) O-character equals the regular character
    reg_ok = True
    for r in o_group.elements:
        want = o_group.order if r == o_group.identity else 0
        if joint_character(r, ident_n) != want:
            reg_ok = False
            break

    # stabilizer of beta_T inside GL(X), by brute filtering
    stab = []
    for rows in itertools.product(
            itertools.product(range(fld.q), repeat=n), repeat=n):
        c = Mat(fld, rows)
        if c.det() and c.transpose() * beta_t * c == beta_t:
            stab.append(c)
    stab_order = len(stab)

    # (iii) multiplicity-space characters and their irreducibility
    per_tau = []
    o_elems = o_group.elements
    chi_e = {}
    for c in stab:
        for r in o_elems:
            chi_e[(r, c)] = joint_character(r, c)
    for ti, tau in enumerate(o_table.irreducibles):
        dim_tau = tau.dim_int()
        tau_conj = {r: tau.at_class(o_group.class_of(r)).conj()
                    for r in o_elems}
        # chi of the tau-multiplicity space as a G_{beta_T} function
        chi_m = {}
        for c in stab:
            acc = CycloNum.zero(fld.p)
            for r in o_elems:
                acc = acc + chi_e[(r, c)] * tau_conj[r]
            chi_m[c] = acc * Fraction(1, o_group.order)
        dim_m = chi_m[ident_n]
        norm = CycloNum.zero(fld.p)
        for c in stab:
            norm = norm + chi_m[c] * chi_m[c].conj()
        irr = norm == stab_order
        mult_reg = dim_tau  # by (ii); re-derived below from the eigenspace
        acc = CycloNum.zero(fld.p)
        for r in o_elems:
            acc = acc + joint_character(r, ident_n) * tau_conj[r]
        acc = acc * Fraction(1, o_group.order)
        per_tau.append({
            "tau": ti,
            "dim_tau": dim_tau,
            "mult_in_regular": int(acc.as_fraction()),
            "dim_mult_space": int(dim_m.as_fraction()),
            "irreducible_over_stabilizer": bool(irr),
        })
    return MultiplicitySpaceReport(
        eigenspace_dim=dim_e,
        o_order=o_group.order,
        free_orbit=free_orbit,
        regular_decomposition=reg_ok,
        stabilizer_order=stab_order,
        per_tau=per_tau,
    )


def onto_map(fld, k: int, n: int) -> Mat:
    """The projection [I_k | 0] as a canonical onto map X -> U."""
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(k)]
    return Mat(fld, rows)


# ---------------------------------------------------------------------------
# exhaustion census and dimension estimates
# ---------------------------------------------------------------------------

def class_count_identity(k: int, q: int):
    """Observed and expected total class counts of O_{k+} u O_{k-}."""
    from .symplin import orthogonal_group
    plus = len(orthogonal_group(k, True, q).conjugacy_classes())
    minus = len(orthogonal_group(k, False, q).conjugacy_classes())
    expected = {1: 4, 2: q + 6, 3: 4 * (q + 2)}.get(k)
    return {
        "k": k,
        "q": q,
        "classes_plus": plus,
        "classes_minus": minus,
        "total": plus + minus,
        "expected_total": expected,
        "matches": expected is None or plus + minus == expected,
    }


def exhaustion_check(n: int, k: int, q: int, rank_rows=None):
    """Report (never assert) the exhaustion count at rank k.

    LHS: number of rank-k irreducibles of Sp_2n(F_q) from the rank table
    (when available).  RHS: #Irr(O_{k+}) + #Irr(O_{k-}) = total class count.
    """
    if not k < n:
        raise ValueError("exhaustion census is stated for k < n")
    counts = class_count_identity(k, q)
    rhs = counts["total"]
    lhs = None
    if rank_rows is not None:
        lhs = sum(1 for r in rank_rows if r["rank"] == k)
    return {
        "n": n,
        "k": k,
        "q": q,
        "rank_k_irreps": lhs,
        "irr_o_plus_plus_minus": rhs,
        "agrees": None if lhs is None else lhs == rhs,
        "class_count_identity": counts,
    }


def dim_estimate(dim_eta: int, dim_tau: int, card: int,
                 n: int, k: int, q: int):
    """ratio = dim eta / (dim tau * #O_k) against 1 + (2 + 2/q + 4/q^2)/q^(n-k+1)."""
    ratio = Fraction(dim_eta, dim_tau * card)
    eps = Fraction(2, q) + Fraction(4, q * q)
    bound = 1 + (2 + eps) / Fraction(q ** (n - k + 1))
    return ratio, bound, 1 <= ratio <= bound


def compatibility_report(rank_rows, n: int, q: int):
    """Max dimension at rank k vs min dimension at rank k+1 in the regime
    k < 2 sqrt(n) - 1, i.e. (k+1)^2 < 4n."""
    by_rank = {}
    for r in rank_rows:
        by_rank.setdefault(r["rank"], []).append(r["dim"])
    out = []
    for k in sorted(by_rank):
        if (k + 1) ** 2 >= 4 * n:
            continue
        if k + 1 not in by_rank:
            continue
        mx = max(by_rank[k])
        mn = min(by_rank[k + 1])
        out.append({
            "n": n,
            "q": q,
            "k": k,
            "max_dim_rank_k": mx,
            "min_dim_rank_k1": mn,
            "ordered": mx < mn,
        })
    return out
