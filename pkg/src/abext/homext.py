"""Hom and Ext^1 groups, extension classes, Baer sums, and the δ map.

Ext^1(A, B) is coordinatized against the canonical free resolution
``0 → Z^k --diag(d)--> Z^k ⊕ Z^r → A → 0`` of the quotient end A: a class is
a tuple of elements b_j ∈ B, one per invariant factor d_j of A, with the
coordinate over the i-th generator of B well defined modulo gcd(d_j, m_i)
(and modulo d_j over free generators).  In this normal form the Baer sum is
literally vector addition, equality is O(1) after reduction, and the split
class is the zero vector.

The pullback action η·h and pushout action k·η are computed directly on
coordinates (lifting h to a map of resolutions); geometric pullback/pushout
of realized sequences exist alongside and the two routes are cross-checked
in the test suite.

Ab is hereditary, so Ext^2 and higher vanish and are not represented.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import DomainError, EndpointMismatch, NotExactSequence
from .intlin import IntMatrix, solve_mod
from .abgroup import (
    AbMap,
    FinGenAb,
    canonicalize,
    direct_sum,
    is_epi,
    is_mono,
    kernel,
    pullback,
    pushout,
)


# ---------------------------------------------------------------------------
# Hom groups


@dataclass(frozen=True)
class HomGroup:
    """Hom(A, B) with a generating basis and coordinate maps.

    ``pieces`` lists the nontrivial cyclic pieces as tuples
    (source_gen, target_gen, piece_modulus, generator_entry); the carrier is
    their canonical form.  ``decompose`` and ``recompose`` are mutually
    inverse between maps and carrier coordinates.
    """

    source: FinGenAb
    target: FinGenAb
    pieces: Tuple[Tuple[int, int, int, int], ...]
    carrier: FinGenAb
    proj: IntMatrix
    lift: IntMatrix

    @property
    def basis(self) -> Tuple[AbMap, ...]:
        return tuple(self.recompose(unit) for unit in _units(self.carrier.dim))

    def decompose(self, f: AbMap) -> Tuple[int, ...]:
        if f.source != self.source or f.target != self.target:
            raise EndpointMismatch("map does not belong to this Hom group")
        raw = []
        for (j, i, g, entry) in self.pieces:
            v = f.matrix.rows[i][j]
            c = v // entry
            raw.append(c % g if g else c)
        return self.carrier.reduce(self.proj.apply(raw))

    def recompose(self, coords: Sequence[int]) -> AbMap:
        raw = self.lift.apply(list(coords))
        rows = [[0] * self.source.dim for _ in range(self.target.dim)]
        for (j, i, g, entry), c in zip(self.pieces, raw):
            rows[i][j] += c * entry
        return AbMap(self.source, self.target, IntMatrix.from_rows(rows, ncols=self.source.dim))


def _units(n: int):
    for k in range(n):
        yield tuple(1 if t == k else 0 for t in range(n))


def hom_group(A: FinGenAb, B: FinGenAb) -> HomGroup:
    """Hom(A, B) ≅ ⊕ over generator pairs of cyclic pieces."""
    pieces = []
    for j, mj in enumerate(A.moduli()):
        for i, ni in enumerate(B.moduli()):
            if mj == 0 and ni == 0:
                pieces.append((j, i, 0, 1))
            elif mj == 0:
                pieces.append((j, i, ni, 1))
            elif ni == 0:
                continue  # Hom(Z(d), Z) = 0
            else:
                g = math.gcd(mj, ni)
                if g > 1:
                    pieces.append((j, i, g, ni // g))
    rel = IntMatrix.from_rows(
        [[g if t == k else 0 for t in range(len(pieces))] for k, (_, _, g, _) in enumerate(pieces) if g],
        ncols=len(pieces),
    )
    carrier, proj, lift = canonicalize(rel)
    return HomGroup(A, B, tuple(pieces), carrier, proj, lift)


def hom_postcompose(h: AbMap, T: FinGenAb) -> AbMap:
    """Hom(T, h): Hom(T, source) → Hom(T, target), f ↦ h ∘ f."""
    HS = hom_group(T, h.source)
    HT = hom_group(T, h.target)
    cols = [HT.decompose(h @ b) for b in HS.basis]
    mat = IntMatrix.from_rows(
        [[cols[c][r] for c in range(len(cols))] for r in range(HT.carrier.dim)],
        ncols=HS.carrier.dim,
    )
    return AbMap(HS.carrier, HT.carrier, mat)


# ---------------------------------------------------------------------------
# Ext groups and classes


@dataclass(frozen=True)
class ExtGroup:
    """Ext^1(A, B) with indexing data for normal-form coordinates.

    Flat coordinates have one slot per (torsion factor d_j of A, generator i
    of B); slot modulus is gcd(d_j, m_i), with gcd(d, 0) read as d.  The
    carrier is the canonical form of the direct sum of the slots.
    """

    A: FinGenAb
    B: FinGenAb
    piece_mods: Tuple[int, ...]
    carrier: FinGenAb
    proj: IntMatrix
    lift: IntMatrix

    @property
    def group(self) -> FinGenAb:
        return self.carrier

    def order(self) -> int:
        return math.prod(self.piece_mods) if self.piece_mods else 1

    def zero(self) -> "ExtClass":
        return ExtClass(self.A, self.B, (0,) * len(self.piece_mods))

    def reduce(self, flat: Sequence[int]) -> Tuple[int, ...]:
        return tuple(v % g if g else v for v, g in zip(flat, self.piece_mods))

    def to_carrier(self, cls: "ExtClass") -> Tuple[int, ...]:
        return self.carrier.reduce(self.proj.apply(list(cls.coords)))

    def from_carrier(self, coords: Sequence[int]) -> "ExtClass":
        return ExtClass(self.A, self.B, self.reduce(self.lift.apply(list(coords))))

    def classes(self) -> Iterator["ExtClass"]:
        """All classes, lexicographic on normal-form coordinates."""
        for combo in itertools.product(*(range(max(g, 1)) for g in self.piece_mods)):
            yield ExtClass(self.A, self.B, combo)

    def basis_classes(self) -> List["ExtClass"]:
        return [self.from_carrier(u) for u in _units(self.carrier.dim)]


def ext_pieces(A: FinGenAb, B: FinGenAb) -> Tuple[int, ...]:
    mods = []
    for d in A.invariant_factors:
        for m in B.moduli():
            mods.append(math.gcd(d, m) if m else d)
    return tuple(mods)


def ext_group(A: FinGenAb, B: FinGenAb) -> ExtGroup:
    """Ext^1(A, B) = ⊕_j B/d_jB over the invariant factors of A."""
    mods = ext_pieces(A, B)
    rel = IntMatrix.from_rows(
        [[g if t == k else 0 for t in range(len(mods))] for k, g in enumerate(mods)],
        ncols=len(mods),
    )
    carrier, proj, lift = canonicalize(rel)
    return ExtGroup(A, B, mods, carrier, proj, lift)


@dataclass(frozen=True)
class ExtClass:
    """Element of Ext^1(A, B) in normal form (split class = all zeros)."""

    A: FinGenAb
    B: FinGenAb
    coords: Tuple[int, ...]

    def __post_init__(self):
        mods = ext_pieces(self.A, self.B)
        if len(self.coords) != len(mods):
            raise DomainError("ExtClass coordinate length mismatch")
        object.__setattr__(
            self, "coords", tuple(v % g if g else v for v, g in zip(self.coords, mods))
        )

    def block(self, j: int) -> Tuple[int, ...]:
        """Coordinates of the j-th twist, an element of B."""
        n = self.B.dim
        return self.coords[j * n : (j + 1) * n]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "ExtClass") -> "ExtClass":
        if self.A != other.A or self.B != other.B:
            raise EndpointMismatch("Baer sum endpoint mismatch")
        return ExtClass(self.A, self.B, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "ExtClass":
        return ExtClass(self.A, self.B, tuple(-c for c in self.coords))

    def __sub__(self, other: "ExtClass") -> "ExtClass":
        return self + (-other)

    def to_json(self) -> dict:
        return {
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "coords": [str(c) for c in self.coords],
        }

    @staticmethod
    def from_json(data: dict) -> "ExtClass":
        return ExtClass(
            FinGenAb.from_json(data["A"]),
            FinGenAb.from_json(data["B"]),
            tuple(int(c) for c in data["coords"]),
        )


def baer_sum(c1: ExtClass, c2: ExtClass) -> ExtClass:
    return c1 + c2


def negate(c: ExtClass) -> ExtClass:
    return -c


# ---------------------------------------------------------------------------
# Short exact sequences


@dataclass(frozen=True)
class ShortExactSeq:
    """B ↪ E ↠ A with exactness machine-checked at construction.

    For finite groups exactness is decided as: g∘f = 0, f mono, g epi and
    |E| = |A|·|B| (these force im f = ker g); when free rank is present the
    image/kernel lattices are compared directly.
    """

    f: AbMap
    g: AbMap

    def __post_init__(self):
        f, g = self.f, self.g
        if f.target != g.source:
            raise NotExactSequence("middle objects disagree")
        if not (g @ f).is_zero():
            raise NotExactSequence("g ∘ f is not zero")
        if not is_mono(f):
            raise NotExactSequence("f is not a monomorphism")
        if not is_epi(g):
            raise NotExactSequence("g is not an epimorphism")
        B, E, A = f.source, f.target, g.target
        if B.is_finite() and E.is_finite() and A.is_finite():
            if E.order() != A.order() * B.order():
                raise NotExactSequence("middle order is not |A|·|B|")
        else:
            K, incl = kernel(g)
            emods = list(E.moduli())
            for j in range(B.dim):
                col = [f.matrix.rows[i][j] for i in range(E.dim)]
                if solve_mod(incl.matrix, col, emods) is None:
                    raise NotExactSequence("image of f not contained in kernel of g")
            for j in range(K.dim):
                col = [incl.matrix.rows[i][j] for i in range(E.dim)]
                if solve_mod(f.matrix, col, emods) is None:
                    raise NotExactSequence("kernel of g not contained in image of f")

    @property
    def sub(self) -> FinGenAb:
        return self.f.source

    @property
    def middle(self) -> FinGenAb:
        return self.f.target

    @property
    def quot(self) -> FinGenAb:
        return self.g.target

    def to_json(self) -> dict:
        return {"f": self.f.to_json(), "g": self.g.to_json()}

    @staticmethod
    def from_json(data: dict) -> "ShortExactSeq":
        return ShortExactSeq(AbMap.from_json(data["f"]), AbMap.from_json(data["g"]))


def split_sequence(A: FinGenAb, B: FinGenAb) -> ShortExactSeq:
    ds = direct_sum([B, A])
    return ShortExactSeq(ds.injections[0], ds.projections[1])


def realize(c: ExtClass) -> ShortExactSeq:
    """An explicit B ↪ E ↠ A whose class is c.

    E is presented on B's generators plus one lift generator per generator
    of A, with the torsion lifts twisted by the class coordinates.
    """
    A, B = c.A, c.B
    nB, nA = B.dim, A.dim
    rows = []
    for i, m in enumerate(B.moduli()):
        if m:
            rows.append([m if t == i else 0 for t in range(nB + nA)])
    for j, d in enumerate(A.invariant_factors):
        b = c.block(j)
        row = [-b[i] for i in range(nB)] + [d if t == j else 0 for t in range(nA)]
        rows.append(row)
    E, proj, lift = canonicalize(IntMatrix.from_rows(rows, ncols=nB + nA))
    fmat = proj.select_columns(list(range(nB)))
    gmat = lift.select_rows(list(range(nB, nB + nA)))
    f = AbMap(B, E, fmat)
    g = AbMap(E, A, gmat)
    return ShortExactSeq(f, g)


def classify(s: ShortExactSeq) -> ExtClass:
    """Normal-form class of a short exact sequence (inverse of realize)."""
    if not isinstance(s, ShortExactSeq):
        raise NotExactSequence("classify expects a validated ShortExactSeq")
    B, E, A = s.sub, s.middle, s.quot
    amods = list(A.moduli())
    emods = list(E.moduli())
    coords: List[int] = []
    for j, d in enumerate(A.invariant_factors):
        target = [1 if t == j else 0 for t in range(A.dim)]
        x = solve_mod(s.g.matrix, target, amods)
        if x is None:
            raise NotExactSequence("quotient map is not surjective")
        v = [d * xi for xi in x]
        b = solve_mod(s.f.matrix, v, emods)
        if b is None:
            raise NotExactSequence("d·lift does not land in the subobject")
        coords.extend(b)
    return ExtClass(A, B, tuple(coords))


# ---------------------------------------------------------------------------
# Actions on classes


def pullback_action(c: ExtClass, h: AbMap) -> ExtClass:
    """η·h for h : A' → A, computed by lifting h to the resolutions."""
    if h.target != c.A:
        raise EndpointMismatch("pullback action endpoint mismatch")
    A, Ap, B = c.A, h.source, c.B
    nB = B.dim
    out: List[int] = []
    for jp, dp in enumerate(Ap.invariant_factors):
        acc = [0] * nB
        for i, d in enumerate(A.invariant_factors):
            w = dp * h.matrix.rows[i][jp]
            if w % d:
                raise DomainError("map fails well-definedness against resolution")
            coeff = w // d
            if coeff:
                blk = c.block(i)
                for t in range(nB):
                    acc[t] += coeff * blk[t]
        out.extend(acc)
    return ExtClass(Ap, B, tuple(out))


def pushout_action(c: ExtClass, k: AbMap) -> ExtClass:
    """k·η for k : B → B'."""
    if k.source != c.B:
        raise EndpointMismatch("pushout action endpoint mismatch")
    Bp = k.target
    out: List[int] = []
    for j in range(c.A.torsion_count):
        out.extend(k.matrix.apply(list(c.block(j))))
    return ExtClass(c.A, Bp, tuple(out))


def seq_pullback(s: ShortExactSeq, h: AbMap) -> ShortExactSeq:
    """Geometric pullback of B ↪ E ↠ A along h : A' → A."""
    if h.target != s.quot:
        raise EndpointMismatch("sequence pullback endpoint mismatch")
    pb = pullback(s.g, h)
    zero = AbMap.zero(s.sub, h.source)
    fprime = pb.mediator(s.f, zero)
    return ShortExactSeq(fprime, pb.right)


def seq_pushout(s: ShortExactSeq, k: AbMap) -> ShortExactSeq:
    """Geometric pushout of B ↪ E ↠ A along k : B → B'."""
    if k.source != s.sub:
        raise EndpointMismatch("sequence pushout endpoint mismatch")
    po = pushout(s.f, k)
    zero = AbMap.zero(k.target, s.quot)
    gprime = po.mediator(s.g, zero)
    return ShortExactSeq(po.right, gprime)


def ses_direct_sum(seqs: Sequence[ShortExactSeq]):
    """⊕ of sequences, with the three biproduct diagrams."""
    ds_sub = direct_sum([s.sub for s in seqs])
    ds_mid = direct_sum([s.middle for s in seqs])
    ds_quot = direct_sum([s.quot for s in seqs])
    f = AbMap.zero(ds_sub.total, ds_mid.total)
    g = AbMap.zero(ds_mid.total, ds_quot.total)
    for i, s in enumerate(seqs):
        f = f + ds_mid.injections[i] @ s.f @ ds_sub.projections[i]
        g = g + ds_quot.injections[i] @ s.g @ ds_mid.projections[i]
    return ShortExactSeq(f, g), ds_sub, ds_mid, ds_quot


# ---------------------------------------------------------------------------
# Connecting morphism and induced maps


def connecting_hom(s: ShortExactSeq, T: FinGenAb) -> AbMap:
    """δ : Hom(T, A) → Ext^1(T, B) for B ↪ E ↠ A, δ(h) = classify(s)·h."""
    cls = classify(s)
    H = hom_group(T, s.quot)
    X = ext_group(T, s.sub)
    cols = [X.to_carrier(pullback_action(cls, b)) for b in H.basis]
    mat = IntMatrix.from_rows(
        [[cols[c][r] for c in range(len(cols))] for r in range(X.carrier.dim)],
        ncols=H.carrier.dim,
    )
    return AbMap(H.carrier, X.carrier, mat)


def connecting_hom_dual(s: ShortExactSeq, T: FinGenAb) -> AbMap:
    """δ : Hom(B, T) → Ext^1(A, T) for B ↪ E ↠ A, δ(h) = h·classify(s)."""
    cls = classify(s)
    H = hom_group(s.sub, T)
    X = ext_group(s.quot, T)
    cols = [X.to_carrier(pushout_action(cls, b)) for b in H.basis]
    mat = IntMatrix.from_rows(
        [[cols[c][r] for c in range(len(cols))] for r in range(X.carrier.dim)],
        ncols=H.carrier.dim,
    )
    return AbMap(H.carrier, X.carrier, mat)


def ext_covariant_map(T: FinGenAb, h: AbMap) -> AbMap:
    """Ext^1(T, h) : Ext^1(T, B) → Ext^1(T, B') on carriers, for h : B → B'."""
    XS = ext_group(T, h.source)
    XT = ext_group(T, h.target)
    cols = [XT.to_carrier(pushout_action(c, h)) for c in XS.basis_classes()]
    mat = IntMatrix.from_rows(
        [[cols[c][r] for c in range(len(cols))] for r in range(XT.carrier.dim)],
        ncols=XS.carrier.dim,
    )
    return AbMap(XS.carrier, XT.carrier, mat)


def ext_contravariant_map(h: AbMap, T: FinGenAb) -> AbMap:
    """Ext^1(h, T) : Ext^1(A, T) → Ext^1(A', T) on carriers, for h : A' → A."""
    XS = ext_group(h.target, T)
    XT = ext_group(h.source, T)
    cols = [XT.to_carrier(pullback_action(c, h)) for c in XS.basis_classes()]
    mat = IntMatrix.from_rows(
        [[cols[c][r] for c in range(len(cols))] for r in range(XT.carrier.dim)],
        ncols=XS.carrier.dim,
    )
    return AbMap(XS.carrier, XT.carrier, mat)


def induced_ext_map(h: AbMap, T: FinGenAb, variable: str) -> AbMap:
    """Dispatcher for the two Ext functorialities: 'sub' or 'quot' variable."""
    if variable == "sub":
        return ext_covariant_map(T, h)
    if variable == "quot":
        return ext_contravariant_map(h, T)
    raise DomainError("variable must be 'sub' or 'quot'")


# ---------------------------------------------------------------------------
# Equivalence of sequences


def find_equivalence(s1: ShortExactSeq, s2: ShortExactSeq) -> Optional[AbMap]:
    """Middle iso commuting with both legs, found by solving a linear system.

    By the five lemma any commuting middle map between sequences with the
    same ends is an isomorphism, so only existence is searched.
    """
    if s1.sub != s2.sub or s1.quot != s2.quot:
        return None
    E1, E2 = s1.middle, s2.middle
    n1, n2 = E1.dim, E2.dim
    mods1 = E1.moduli()
    mods2 = E2.moduli()
    amods = s1.quot.moduli()
    nvars = n1 * n2

    def var(i, j):
        return i * n1 + j

    rows, rhs, rmods = [], [], []
    for j in range(n1):
        mj = mods1[j]
        if not mj:
            continue
        for i in range(n2):
            row = [0] * nvars
            row[var(i, j)] = mj
            rows.append(row)
            rhs.append(0)
            rmods.append(mods2[i])
    for b in range(s1.sub.dim):
        for i in range(n2):
            row = [0] * nvars
            for j in range(n1):
                if s1.f.matrix.rows[j][b]:
                    row[var(i, j)] = s1.f.matrix.rows[j][b]
            rows.append(row)
            rhs.append(s2.f.matrix.rows[i][b])
            rmods.append(mods2[i])
    for j in range(n1):
        for a in range(s1.quot.dim):
            row = [0] * nvars
            for i in range(n2):
                if s2.g.matrix.rows[a][i]:
                    row[var(i, j)] = s2.g.matrix.rows[a][i]
            rows.append(row)
            rhs.append(s1.g.matrix.rows[a][j])
            rmods.append(amods[a])
    sol = solve_mod(IntMatrix.from_rows(rows, ncols=nvars), rhs, rmods)
    if sol is None:
        return None
    phi = AbMap(
        E1, E2, IntMatrix.from_rows([[sol[var(i, j)] for j in range(n1)] for i in range(n2)], ncols=n1)
    )
    if not (is_mono(phi) and is_epi(phi)):
        raise DomainError("commuting middle map is not an isomorphism")
    return phi


def ses_equivalent(s1: ShortExactSeq, s2: ShortExactSeq) -> bool:
    return find_equivalence(s1, s2) is not None
