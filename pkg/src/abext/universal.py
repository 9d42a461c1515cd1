"""Universal extensions and co-extensions with verified certificates.

The canonical universal extension of B by A takes X = Ext^1(B, A) (the full
lexicographic enumeration of classes) and realizes the class whose pullback
along each inclusion μ_x is the x-th class; dually for co-extensions with
the diagonal and projections.  A certificate records the sequence plus
independent verdicts for the three equivalent defining conditions:

  (a) Ext^1(B, u) is zero,
  (b) Ext^1(B, p) is injective,
  (c) the connecting morphism δ : Hom(B, B^(X)) → Ext^1(B, A) is surjective,

and their duals for co-extensions.  Any disagreement between the verdicts is
a build failure.

Two construction paths produce equivalent certificates.  The small path is
the literal pushout (resp. pullback) of the coproduct of realizations along
the codiagonal (resp. of the diagonal and the product map).  Past a size
threshold the same class is realized directly from stacked coordinates —
Ext over a finite coproduct is blockwise — and repeated twists with equal
coordinates are split off as free Z(d) summands before canonicalization,
which keeps the core presentation tiny even when |X| runs into the
hundreds.  Both paths machine-check the componentwise pullback/pushout
identities on the result.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BudgetExceeded, DomainError, UnsupportedInstance
from .intlin import IntMatrix, solve_mod
from .abgroup import (
    AbMap,
    FinGenAb,
    SumDiagram,
    ZERO_GROUP,
    canonicalize,
    direct_sum,
    is_epi,
    is_mono,
    mod_quotient,
    pullback,
    pushout,
)
from .homext import (
    ExtClass,
    ExtGroup,
    ShortExactSeq,
    classify,
    connecting_hom,
    connecting_hom_dual,
    ext_covariant_map,
    ext_contravariant_map,
    ext_group,
    hom_group,
    pullback_action,
    pushout_action,
    realize,
    ses_direct_sum,
)

STRUCTURED_THRESHOLD = 36
# End(B^(X)) has dim^2 generating pieces; beyond this the dense hom-group
# bookkeeping stops being reasonable and the check refuses rather than crawl.
CYCLIC_CHECK_BUDGET = 1024


# ---------------------------------------------------------------------------
# Psi / Phi comparison maps


@dataclass(frozen=True)
class PsiMap:
    """Ψ : Ext^1(⊕A_i, B) → ∏ Ext^1(A_i, B), ε ↦ (ε·μ_i)."""

    summands: Tuple[FinGenAb, ...]
    B: FinGenAb
    domain: ExtGroup
    codomain: SumDiagram
    matrix: AbMap
    injective: bool
    bijective: bool


@dataclass(frozen=True)
class PhiMap:
    """Φ : Ext^1(B, ∏A_i) → ∏ Ext^1(B, A_i), ε ↦ (π_i·ε)."""

    summands: Tuple[FinGenAb, ...]
    B: FinGenAb
    domain: ExtGroup
    codomain: SumDiagram
    matrix: AbMap
    injective: bool
    bijective: bool


def psi(A_list: Sequence[FinGenAb], B: FinGenAb) -> PsiMap:
    summands = tuple(A_list)
    ds = direct_sum(summands)
    dom = ext_group(ds.total, B)
    pieces = [ext_group(Ai, B) for Ai in summands]
    cod = direct_sum([pc.carrier for pc in pieces])
    mat = AbMap.zero(dom.carrier, cod.total)
    for i, pc in enumerate(pieces):
        cols = []
        for cls in dom.basis_classes():
            cols.append(pc.to_carrier(pullback_action(cls, ds.injections[i])))
        block = IntMatrix.from_rows(
            [[cols[c][r] for c in range(len(cols))] for r in range(pc.carrier.dim)],
            ncols=dom.carrier.dim,
        )
        mat = mat + cod.injections[i] @ AbMap(dom.carrier, pc.carrier, block)
    inj = is_mono(mat)
    bij = inj and is_epi(mat)
    return PsiMap(summands, B, dom, cod, mat, inj, bij)


def phi(A_list: Sequence[FinGenAb], B: FinGenAb) -> PhiMap:
    summands = tuple(A_list)
    ds = direct_sum(summands)
    dom = ext_group(B, ds.total)
    pieces = [ext_group(B, Ai) for Ai in summands]
    cod = direct_sum([pc.carrier for pc in pieces])
    mat = AbMap.zero(dom.carrier, cod.total)
    for i, pc in enumerate(pieces):
        cols = []
        for cls in dom.basis_classes():
            cols.append(pc.to_carrier(pushout_action(cls, ds.projections[i])))
        block = IntMatrix.from_rows(
            [[cols[c][r] for c in range(len(cols))] for r in range(pc.carrier.dim)],
            ncols=dom.carrier.dim,
        )
        mat = mat + cod.injections[i] @ AbMap(dom.carrier, pc.carrier, block)
    inj = is_mono(mat)
    bij = inj and is_epi(mat)
    return PhiMap(summands, B, dom, cod, mat, inj, bij)


def psi_inverse_via_colim(classes: Sequence[ExtClass]) -> ShortExactSeq:
    """Ψ^{-1}((η_i)) = ∇·(⊕η_i): pushout of the coproduct along the codiagonal.

    All classes must share their sub end A.  The result is machine-checked:
    pulling back along each μ_i reproduces the input classes.
    """
    classes = list(classes)
    if not classes:
        raise DomainError("psi_inverse_via_colim needs at least one class")
    A = classes[0].B
    if any(c.B != A for c in classes):
        raise DomainError("classes must share their sub end")
    seqs = [realize(c) for c in classes]
    big, ds_sub, _ds_mid, ds_quot = ses_direct_sum(seqs)
    nabla = ds_sub.projections[0]
    for pi in ds_sub.projections[1:]:
        nabla = nabla + pi
    po = pushout(big.f, nabla)
    g_eta = po.mediator(big.g, AbMap.zero(A, big.quot))
    seq = ShortExactSeq(po.right, g_eta)
    got = classify(seq)
    for i, c in enumerate(classes):
        if pullback_action(got, ds_quot.injections[i]) != c:
            raise DomainError("Ψ of the constructed sequence does not reproduce the inputs")
    return seq


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class ConditionReport:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class UniversalCertificate:
    """Constructed (co)extension plus verdicts for the defining conditions."""

    direction: str  # "extension" | "coextension"
    B: FinGenAb
    A: FinGenAb
    X: Tuple[ExtClass, ...]
    sequence: ShortExactSeq
    canonical_class: Optional[ExtClass]
    degenerate: bool
    condition_a: ConditionReport
    condition_b: ConditionReport
    condition_c: ConditionReport

    @property
    def all_pass(self) -> bool:
        return self.condition_a.passed and self.condition_b.passed and self.condition_c.passed

    def conditions_agree(self) -> bool:
        return self.condition_a.passed == self.condition_b.passed == self.condition_c.passed

    def to_json(self, include_sequence: bool = False) -> dict:
        out = {
            "direction": self.direction,
            "B": self.B.to_json(),
            "A": self.A.to_json(),
            "X_size": len(self.X),
            "middle": self.sequence.middle.to_json(),
            "degenerate": self.degenerate,
            "conditions": {
                r.name: {"passed": r.passed, "detail": r.detail}
                for r in (self.condition_a, self.condition_b, self.condition_c)
            },
        }
        if include_sequence:
            out["sequence"] = self.sequence.to_json()
            if self.canonical_class is not None:
                out["class"] = self.canonical_class.to_json()
        return out


def _require_finite_ext(ext: ExtGroup):
    if any(g == 0 for g in ext.piece_mods):
        raise UnsupportedInstance("Ext group has an infinite carrier")


def verify_extension_conditions(seq: ShortExactSeq, B: FinGenAb):
    """Generic verdicts for Def. of universal extension on A ↪ E ↠ B^(X)."""
    u, p = seq.f, seq.g
    ma = ext_covariant_map(B, u)
    ra = ConditionReport("a", ma.is_zero(), "Ext^1(B,u) on Ext^1(B,A) basis")
    mb = ext_covariant_map(B, p)
    rb = ConditionReport("b", is_mono(mb), "Ext^1(B,p) kernel triviality")
    delta = connecting_hom(seq, B)
    rc = ConditionReport("c", is_epi(delta), "connecting δ: Hom(B,B^(X)) → Ext^1(B,A)")
    return ra, rb, rc


def verify_coextension_conditions(seq: ShortExactSeq, B: FinGenAb):
    """Generic verdicts for the dual conditions on B^X ↪ E ↠ A."""
    p, u = seq.f, seq.g
    ma = ext_contravariant_map(u, B)
    ra = ConditionReport("a", ma.is_zero(), "Ext^1(u,B) on Ext^1(A,B) basis")
    mb = ext_contravariant_map(p, B)
    rb = ConditionReport("b", is_mono(mb), "Ext^1(p,B) kernel triviality")
    delta = connecting_hom_dual(seq, B)
    rc = ConditionReport("c", is_epi(delta), "connecting δ: Hom(B^X,B) → Ext^1(A,B)")
    return ra, rb, rc


def _degenerate_certificate(direction: str, B: FinGenAb, A: FinGenAb) -> UniversalCertificate:
    # Ext vanishes; Def 5.6 insists on non-empty X, so we flag rather than guess.
    if direction == "extension":
        seq = ShortExactSeq(AbMap.identity(A), AbMap.zero(A, ZERO_GROUP))
    else:
        seq = ShortExactSeq(AbMap.zero(ZERO_GROUP, A), AbMap.identity(A))
    note = "Ext group is trivial; vacuously universal (degenerate)"
    rep = lambda n: ConditionReport(n, True, note)  # noqa: E731
    return UniversalCertificate(
        direction, B, A, (), seq, None, True, rep("a"), rep("b"), rep("c")
    )


def _finalize(direction, B, A, X, seq, cls, reports) -> UniversalCertificate:
    ra, rb, rc = reports
    cert = UniversalCertificate(direction, B, A, tuple(X), seq, cls, False, ra, rb, rc)
    if not cert.conditions_agree():
        raise DomainError(
            f"universal {direction} verdicts disagree: "
            f"a={ra.passed} b={rb.passed} c={rc.passed}"
        )
    if not cert.all_pass:
        raise DomainError(f"universal {direction} construction failed its own verification")
    return cert


def build_universal_extension(B: FinGenAb, A: FinGenAb, force_path: Optional[str] = None) -> UniversalCertificate:
    """Canonical universal extension A ↪ E ↠ B^(X) with X = Ext^1(B, A)."""
    ext = ext_group(B, A)
    _require_finite_ext(ext)
    if ext.order() == 1:
        return _degenerate_certificate("extension", B, A)
    X = list(ext.classes())
    size = A.dim + len(X) * B.dim
    structured = size > STRUCTURED_THRESHOLD and A.is_finite() and B.is_finite()
    if force_path == "generic":
        structured = False
    elif force_path == "structured":
        if not (A.is_finite() and B.is_finite()):
            raise UnsupportedInstance("structured path needs finite groups")
        structured = True
    if structured:
        try:
            return _build_extension_structured(B, A, ext, X)
        except _ChainFallback:
            pass
    seq = psi_inverse_via_colim(X)
    cls = classify(seq)
    reports = verify_extension_conditions(seq, B)
    return _finalize("extension", B, A, X, seq, cls, reports)


def build_universal_coextension(B: FinGenAb, A: FinGenAb, force_path: Optional[str] = None) -> UniversalCertificate:
    """Canonical universal co-extension B^X ↪ E ↠ A with X = Ext^1(A, B)."""
    ext = ext_group(A, B)
    _require_finite_ext(ext)
    if ext.order() == 1:
        return _degenerate_certificate("coextension", B, A)
    X = list(ext.classes())
    size = B.dim * len(X) + A.dim
    structured = size > STRUCTURED_THRESHOLD and A.is_finite() and B.is_finite()
    if force_path == "generic":
        structured = False
    elif force_path == "structured":
        if not (A.is_finite() and B.is_finite()):
            raise UnsupportedInstance("structured path needs finite groups")
        structured = True
    if structured:
        try:
            return _build_coextension_structured(B, A, ext, X)
        except _ChainFallback:
            pass
    seqs = [realize(c) for c in X]
    big, ds_sub, _ds_mid, ds_quot = ses_direct_sum(seqs)
    delta_map = ds_quot.injections[0]
    for mu in ds_quot.injections[1:]:
        delta_map = delta_map + mu
    pb = pullback(big.g, delta_map)
    fprime = pb.mediator(big.f, AbMap.zero(big.sub, A))
    seq = ShortExactSeq(fprime, pb.right)
    cls = classify(seq)
    for i, c in enumerate(X):
        if pushout_action(cls, ds_sub.projections[i]) != c:
            raise DomainError("Φ of the constructed sequence does not reproduce the inputs")
    reports = verify_coextension_conditions(seq, B)
    return _finalize("coextension", B, A, X, seq, cls, reports)


# ---------------------------------------------------------------------------
# Structured large-scale constructions


class _ChainFallback(Exception):
    """Merged factor multiset is not a divisibility chain; use the slow path."""


def _power_group(B: FinGenAb, n: int):
    """B^(n) canonically, with slot (copy x, generator j) → coordinate index.

    Slot ordering matches direct_sum([B]*n): stable sort of concatenated
    slots by invariant factor, so certificates agree across build paths.
    """
    kB = B.torsion_count
    dB = B.dim
    slots = [(x, j) for x in range(n) for j in range(kB)]
    order = sorted(range(len(slots)), key=lambda t: (B.invariant_factors[slots[t][1]], slots[t][0] * dB + slots[t][1]))
    factors = tuple(B.invariant_factors[slots[t][1]] for t in order)
    group = FinGenAb(0, factors)
    index = {slots[t]: pos for pos, t in enumerate(order)}
    return group, index


def _merge_factor_positions(core_factors, split_factors):
    """Stable merge of two factor multisets; raises unless the result chains."""
    entries = [(f, 0, i) for i, f in enumerate(core_factors)]
    entries += [(f, 1, t) for t, f in enumerate(split_factors)]
    entries.sort(key=lambda e: (e[0], e[1], e[2]))
    factors = [e[0] for e in entries]
    for a, b in zip(factors, factors[1:]):
        if b % a:
            raise _ChainFallback()
    core_pos = {}
    split_pos = {}
    for pos, (f, kind, idx) in enumerate(entries):
        if kind == 0:
            core_pos[idx] = pos
        else:
            split_pos[idx] = pos
    return tuple(factors), core_pos, split_pos


def _build_extension_structured(B, A, ext: ExtGroup, X: List[ExtClass]) -> UniversalCertificate:
    nX = len(X)
    dA = A.dim
    kB = B.torsion_count
    BX, slot_index = _power_group(B, nX)
    if B.free_rank:
        raise _ChainFallback()
    # Twist relations d_j t_{x,j} = b; identical (d, b) twists differ by a
    # generator of order d, so only the first of each kind stays in the core.
    key_first: Dict[tuple, tuple] = {}
    key_order: List[tuple] = []
    slot_key = {}
    for x in range(nX):
        for j in range(kB):
            key = (B.invariant_factors[j], X[x].block(j))
            if key not in key_first:
                key_first[key] = (x, j)
                key_order.append(key)
            slot_key[(x, j)] = key
    splits = [
        (x, j) for x in range(nX) for j in range(kB) if key_first[slot_key[(x, j)]] != (x, j)
    ]
    nk = len(key_order)
    key_col = {key: dA + k for k, key in enumerate(key_order)}
    rows = []
    for i, m in enumerate(A.moduli()):
        if m:
            rows.append([m if t == i else 0 for t in range(dA + nk)])
    for k, (d, b) in enumerate(key_order):
        rows.append([-b[i] for i in range(dA)] + [d if t == k else 0 for t in range(nk)])
    core, projc, liftc = canonicalize(IntMatrix.from_rows(rows, ncols=dA + nk))
    if core.free_rank != A.free_rank:
        raise _ChainFallback()
    factors, core_pos, split_pos = _merge_factor_positions(
        core.invariant_factors, [slot_key[s][0] for s in splits]
    )
    E = FinGenAb(A.free_rank, factors)
    dE = E.dim
    # Free generators of the core (none unless A has free rank) sit last.
    free_base = len(factors)
    for ci in range(core.torsion_count, core.dim):
        core_pos[ci] = free_base
        free_base += 1

    # u : A → E through the core.
    ucore = projc.select_columns(list(range(dA)))
    urows = [[0] * dA for _ in range(dE)]
    for ci in range(core.dim):
        row = ucore.rows[ci]
        trow = urows[core_pos[ci]]
        for a in range(dA):
            trow[a] = row[a]
    u = AbMap(A, E, IntMatrix.from_rows(urows, ncols=dA))

    # p : E → B^(X).
    prow_data = [[0] * dE for _ in range(BX.dim)]
    for ci in range(core.dim):
        col = core_pos[ci]
        for t in range(nk):
            v = liftc.rows[dA + t][ci]
            if v:
                prow_data[slot_index[key_first[key_order[t]]]][col] += v
    for t, (x, j) in enumerate(splits):
        col = split_pos[t]
        prow_data[slot_index[(x, j)]][col] += 1
        prow_data[slot_index[key_first[slot_key[(x, j)]]]][col] -= 1
    p = AbMap(E, BX, IntMatrix.from_rows(prow_data, ncols=dE))
    seq = ShortExactSeq(u, p)

    # Componentwise Ψ check with explicit lifts: for every slot the lift of
    # its generator is t_{x,j}, and d_j · t_{x,j} must equal u(b) exactly.
    emods = E.moduli()
    core_t_coords = {}
    for t in range(nk):
        vec = projc.apply([1 if q == dA + t else 0 for q in range(dA + nk)])
        w = [0] * dE
        for ci in range(core.dim):
            w[core_pos[ci]] = vec[ci]
        core_t_coords[t] = w
    pcols_core = {}
    for t in range(nk):
        w = core_t_coords[t]
        acc = [0] * BX.dim
        for cidx, val in enumerate(w):
            if val:
                for r in range(BX.dim):
                    pv = p.matrix.rows[r][cidx]
                    if pv:
                        acc[r] += val * pv
        pcols_core[t] = acc
    big_coords = [0] * (BX.torsion_count * dA)
    for (x, j), pos in slot_index.items():
        blk = X[x].block(j)
        big_coords[pos * dA : (pos + 1) * dA] = list(blk)
    big_class = ExtClass(BX, A, tuple(big_coords))
    split_idx = {s: t for t, s in enumerate(splits)}
    for x in range(nX):
        for j in range(kB):
            key = slot_key[(x, j)]
            t = key_col[key] - dA
            w = list(core_t_coords[t])
            target = list(pcols_core[t])
            if key_first[key] != (x, j):
                sidx = split_idx[(x, j)]
                w[split_pos[sidx]] += 1
                target[slot_index[(x, j)]] += 1
                target[slot_index[key_first[key]]] -= 1
            expect = [0] * BX.dim
            expect[slot_index[(x, j)]] = 1
            if BX.reduce(target) != tuple(expect):
                raise DomainError("structured extension: lift fails to hit its slot")
            d = B.invariant_factors[j]
            dv = [d * wi for wi in w]
            ub = u.matrix.apply(list(X[x].block(j)))
            if E.reduce(dv) != E.reduce(ub):
                raise DomainError("structured extension: twist relation violated")

    # Condition (a): Ext^1(B, u) kills every basis class of Ext^1(B, A).
    ok_a = True
    for cls in ext.basis_classes():
        for j in range(kB):
            img = u.matrix.apply(list(cls.block(j)))
            d = B.invariant_factors[j]
            for i, m in enumerate(emods):
                g = math.gcd(d, m) if m else d
                if g and img[i] % g:
                    ok_a = False
    ra = ConditionReport("a", ok_a, "pushout of Ext^1(B,A) basis along u lands in d·E")

    # Condition (b): per distinct invariant factor d of B, the reduction of p
    # must be injective from E/dE to B^(X)/d·B^(X).
    ok_b = True
    for d in sorted(set(B.invariant_factors)):
        QE, _pE, keptE = mod_quotient(E, d)
        QT, _pT, keptT = mod_quotient(BX, d)
        mat = IntMatrix.from_rows(
            [[p.matrix.rows[i][j] for j in keptE] for i in keptT], ncols=len(keptE)
        )
        if not is_mono(AbMap(QE, QT, mat)):
            ok_b = False
    rb = ConditionReport("b", ok_b, "blockwise kernel of Ext^1(B,p)")

    # Condition (c): δ on the generating pieces of Hom(B, B^(X)).
    rc = ConditionReport(
        "c", _delta_surjective_ext(B, BX, big_class, ext), "δ image saturates Ext^1(B,A)"
    )
    return _finalize("extension", B, A, X, seq, big_class, (ra, rb, rc))


def _delta_surjective_ext(B, BX, big_class: ExtClass, ext: ExtGroup) -> bool:
    """Surjectivity of δ(h) = η·h over the cyclic pieces of Hom(B, B^(X))."""
    dA = big_class.B.dim
    bmods = B.moduli()
    cols = []
    col_mods = []
    for j_src, dsrc in enumerate(B.invariant_factors):
        for i_tgt, Dtgt in enumerate(BX.invariant_factors):
            g = math.gcd(dsrc, Dtgt)
            if g <= 1:
                continue
            coeff = dsrc // g
            blk = big_class.block(i_tgt)
            flat = [0] * (B.torsion_count * dA)
            for t in range(dA):
                flat[j_src * dA + t] = coeff * blk[t]
            cls = ExtClass(B, big_class.B, tuple(flat))
            cols.append(ext.to_carrier(cls))
            col_mods.append(g)
    order = sorted(range(len(cols)), key=lambda t: col_mods[t])
    src = FinGenAb(0, tuple(col_mods[t] for t in order))
    mat = IntMatrix.from_rows(
        [[cols[t][r] for t in order] for r in range(ext.carrier.dim)], ncols=len(cols)
    )
    return is_epi(AbMap(src, ext.carrier, mat))


def _build_coextension_structured(B, A, ext: ExtGroup, X: List[ExtClass]) -> UniversalCertificate:
    nX = len(X)
    dA, dB = A.dim, B.dim
    kA = A.torsion_count
    if B.free_rank or A.free_rank:
        raise _ChainFallback()
    BX, slot_index = _power_group(B, nX)
    # Twist vectors v_j = Σ_x μ_x(c_x.block(j)) in B^X.
    v = [[0] * BX.dim for _ in range(kA)]
    for x in range(nX):
        for j in range(kA):
            blk = X[x].block(j)
            for i in range(dB):
                v[j][slot_index[(x, i)]] = blk[i]
    # Merge B^X generators with equal modulus and twist pattern: the sum of
    # each class stays in the core, the rest split off as Z(m) summands.
    key_members: Dict[tuple, List[int]] = {}
    key_order: List[tuple] = []
    slot_mod = BX.moduli()
    for s in range(BX.dim):
        key = (slot_mod[s], tuple(v[j][s] % slot_mod[s] for j in range(kA)))
        if key not in key_members:
            key_members[key] = []
            key_order.append(key)
        key_members[key].append(s)
    nk = len(key_order)
    rows = []
    for k, (m, pat) in enumerate(key_order):
        rows.append([m if t == k else 0 for t in range(nk + dA)])
    for j, d in enumerate(A.invariant_factors):
        row = [-key_order[k][1][j] for k in range(nk)] + [
            d if t == j else 0 for t in range(dA)
        ]
        rows.append(row)
    core, projc, liftc = canonicalize(IntMatrix.from_rows(rows, ncols=nk + dA))
    split_factors = []
    split_slots = []
    for key in key_order:
        members = key_members[key]
        for s in members[1:]:
            split_factors.append(key[0])
            split_slots.append(s)
    factors, core_pos, split_pos = _merge_factor_positions(core.invariant_factors, split_factors)
    E = FinGenAb(0, factors)
    dE = E.dim

    # p : B^X → E.  Slot s in a key with members [s0, s1, ...]: the sum goes
    # to the core generator H, the basis change is s0 = H - s1 - ... - sr.
    core_H = {}
    for k, key in enumerate(key_order):
        vec = projc.apply([1 if q == k else 0 for q in range(nk + dA)])
        w = [0] * dE
        for ci in range(core.dim):
            w[core_pos[ci]] += vec[ci]
        core_H[k] = w
    slot_split_idx = {s: t for t, s in enumerate(split_slots)}
    prows = [[0] * BX.dim for _ in range(dE)]
    for k, key in enumerate(key_order):
        members = key_members[key]
        first = members[0]
        H = core_H[k]
        for r in range(dE):
            if H[r]:
                prows[r][first] += H[r]
        for s in members[1:]:
            prows[split_pos[slot_split_idx[s]]][first] -= 1
            prows[split_pos[slot_split_idx[s]]][s] += 1
    p = AbMap(BX, E, IntMatrix.from_rows(prows, ncols=BX.dim))

    # u : E → A through the core lift.
    urows = [[0] * dE for _ in range(dA)]
    for ci in range(core.dim):
        pos = core_pos[ci]
        for j in range(dA):
            urows[j][pos] = liftc.rows[nk + j][ci]
    u = AbMap(E, A, IntMatrix.from_rows(urows, ncols=dE))
    seq = ShortExactSeq(p, u)

    big_coords: List[int] = []
    for j in range(kA):
        big_coords.extend(v[j])
    big_class = ExtClass(A, BX, tuple(big_coords))

    # Componentwise Φ check: the lift of e_j is T_j, with d_j T_j = p(v_j).
    for j, d in enumerate(A.invariant_factors):
        vec = projc.apply([1 if q == nk + j else 0 for q in range(nk + dA)])
        w = [0] * dE
        for ci in range(core.dim):
            w[core_pos[ci]] += vec[ci]
        if A.reduce(u.matrix.apply(w)) != tuple(1 if t == j else 0 for t in range(dA)):
            raise DomainError("structured coextension: lift fails to hit e_j")
        pv = p.matrix.apply(v[j])
        if E.reduce([d * wi for wi in w]) != E.reduce(pv):
            raise DomainError("structured coextension: twist relation violated")
    for x in range(nX):
        got = [0] * (kA * dB)
        for j in range(kA):
            for i in range(dB):
                got[j * dB + i] = v[j][slot_index[(x, i)]]
        if ExtClass(A, B, tuple(got)) != X[x]:
            raise DomainError("structured coextension: Φ does not reproduce inputs")

    # Condition (a*): pullback along u kills Ext^1(A, B).
    ok_a = True
    for cls in ext.basis_classes():
        for jp, dp in enumerate(E.invariant_factors):
            acc = [0] * dB
            for i, di in enumerate(A.invariant_factors):
                wgt = dp * u.matrix.rows[i][jp]
                if wgt % di:
                    raise DomainError("pullback weight not integral")
                c = wgt // di
                if c:
                    blk = cls.block(i)
                    for t in range(dB):
                        acc[t] += c * blk[t]
            for t, m in enumerate(B.moduli()):
                g = math.gcd(dp, m) if m else dp
                if g and acc[t] % g:
                    ok_a = False
    ra = ConditionReport("a", ok_a, "pullback of Ext^1(A,B) basis along u vanishes")

    # Condition (b*): pullback along p injective, blockwise per B generator.
    ok_b = True
    efacts = E.invariant_factors
    bxfacts = BX.invariant_factors
    for m_t in sorted(set(B.invariant_factors)):
        src_keep = [jp for jp, dpr in enumerate(efacts) if math.gcd(dpr, m_t) > 1]
        tgt_keep = [jq for jq, dq in enumerate(bxfacts) if math.gcd(dq, m_t) > 1]
        src_sorted = sorted(src_keep, key=lambda jp: math.gcd(efacts[jp], m_t))
        src = FinGenAb(0, tuple(math.gcd(efacts[jp], m_t) for jp in src_sorted))
        tgt_sorted = sorted(tgt_keep, key=lambda jq: math.gcd(bxfacts[jq], m_t))
        tgt = FinGenAb(0, tuple(math.gcd(bxfacts[jq], m_t) for jq in tgt_sorted))
        mat_rows = []
        for jq in tgt_sorted:
            dq = bxfacts[jq]
            row = []
            for jp in src_sorted:
                wgt = dq * p.matrix.rows[jp][jq]
                if wgt % efacts[jp]:
                    raise DomainError("pullback weight not integral")
                row.append(wgt // efacts[jp])
            mat_rows.append(row)
        mat = IntMatrix.from_rows(mat_rows, ncols=len(src_sorted))
        if not is_mono(AbMap(src, tgt, mat)):
            ok_b = False
    rb = ConditionReport("b", ok_b, "blockwise kernel of Ext^1(p,B)")

    # Condition (c*): δ(h) = h·γ over the cyclic pieces of Hom(B^X, B).
    cols = []
    col_mods = []
    extAB = ext
    for j_src, Dsrc in enumerate(BX.invariant_factors):
        for i_tgt, m_tgt in enumerate(B.moduli()):
            g = math.gcd(Dsrc, m_tgt) if m_tgt else Dsrc
            if g <= 1:
                continue
            entry = (m_tgt // g) if m_tgt else 1
            flat = [0] * (kA * dB)
            for j in range(kA):
                flat[j * dB + i_tgt] = entry * v[j][j_src]
            cols.append(extAB.to_carrier(ExtClass(A, B, tuple(flat))))
            col_mods.append(g)
    order = sorted(range(len(cols)), key=lambda t: col_mods[t])
    src = FinGenAb(0, tuple(col_mods[t] for t in order))
    mat = IntMatrix.from_rows(
        [[cols[t][r] for t in order] for r in range(extAB.carrier.dim)], ncols=len(cols)
    )
    ok_c = is_epi(AbMap(src, extAB.carrier, mat))
    rc = ConditionReport("c", ok_c, "δ image saturates Ext^1(A,B)")
    return _finalize("coextension", B, A, X, seq, big_class, (ra, rb, rc))


# ---------------------------------------------------------------------------
# Cyclic generation and the sufficient condition


@dataclass(frozen=True)
class CyclicGenerationResult:
    passed: bool
    detail: str
    witnesses: Tuple[Tuple[ExtClass, AbMap], ...]


def cyclic_generation_check(
    cert: UniversalCertificate, samples: int = 5, seed: int = 0
) -> CyclicGenerationResult:
    """Ext^1(B^(X), A) as a cyclic right End(B^(X))-module generated by η̄.

    Builds the additive map γ ↦ η·γ over the generating pieces of
    End(B^(X)) (matrix units composed with the cyclic generators) and
    decides surjectivity; on success returns explicit γ witnesses for
    sampled target classes, each re-verified by recomputing η·γ.
    """
    if cert.direction != "extension":
        raise DomainError("cyclic generation check applies to extension certificates")
    if cert.degenerate:
        return CyclicGenerationResult(True, "Ext^1(B,A) trivial; vacuous", ())
    eta = cert.canonical_class
    BX = cert.sequence.quot
    ext_big = ext_group(BX, cert.A)
    if BX.dim * BX.dim > CYCLIC_CHECK_BUDGET:
        raise BudgetExceeded("End(B^(X)) generating set too large for the check")
    H = hom_group(BX, BX)
    cols = []
    for b in H.basis:
        cols.append(ext_big.to_carrier(pullback_action(eta, b)))
    mat = IntMatrix.from_rows(
        [[cols[c][r] for c in range(len(cols))] for r in range(ext_big.carrier.dim)],
        ncols=H.carrier.dim,
    )
    m = AbMap(H.carrier, ext_big.carrier, mat)
    if not is_epi(m):
        return CyclicGenerationResult(False, "η·End(B^(X)) is a proper subgroup", ())
    rng = random.Random(seed)
    witnesses = []
    carrier_mods = list(ext_big.carrier.moduli())
    for _ in range(samples):
        target = tuple(rng.randrange(md) if md else rng.randrange(-9, 10) for md in carrier_mods)
        x = solve_mod(m.matrix, list(target), carrier_mods)
        if x is None:
            return CyclicGenerationResult(False, "no γ for a sampled class", ())
        gamma = H.recompose([xi for xi in x])
        got = ext_big.to_carrier(pullback_action(eta, gamma))
        want = ext_big.carrier.reduce(list(target))
        if got != want:
            raise DomainError("cyclic generation witness failed re-verification")
        witnesses.append((ext_big.from_carrier(target), gamma))
    return CyclicGenerationResult(True, "η generates Ext^1(B^(X),A) over End(B^(X))", tuple(witnesses))


@dataclass(frozen=True)
class SufficientConditionReport:
    X_size: int
    monic: bool
    certificate_exists: bool
    consistent: bool


def sufficient_condition_check(A: FinGenAb, B: FinGenAb, check_certificate: bool = True) -> SufficientConditionReport:
    """⊕f_x monic over a complete set of representatives of Ext^1(B, A).

    The coproduct of the inclusions of all realizations is monic in Ab for
    finite X; the report records this together with the success of the
    universal-extension construction (the lemma's (b) ⇒ (c) direction).
    """
    ext = ext_group(B, A)
    _require_finite_ext(ext)
    X = list(ext.classes())
    if not X or ext.order() == 1:
        cert_ok = True
        if check_certificate:
            cert_ok = build_universal_extension(B, A).conditions_agree()
        return SufficientConditionReport(len(X), True, cert_ok, cert_ok)
    seqs = [realize(c) for c in X]
    if A.dim + len(X) * max(s.middle.dim for s in seqs) <= STRUCTURED_THRESHOLD * 4:
        big, _s, _m, _q = ses_direct_sum(seqs)
        monic = is_mono(big.f)
    else:
        # ⊕f_x is block diagonal, so monic iff every block is.
        monic = all(is_mono(s.f) for s in seqs)
    cert_ok = True
    if check_certificate:
        cert = build_universal_extension(B, A)
        cert_ok = cert.all_pass
    return SufficientConditionReport(len(X), monic, cert_ok, monic == cert_ok)
