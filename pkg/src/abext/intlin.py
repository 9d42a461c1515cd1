"""Exact integer linear algebra: Smith/Hermite normal forms and solvers.

Everything here works over plain Python ints (arbitrary precision), with
matrices stored immutably.  This is the computational bedrock for the group
machinery: canonical forms come from SNF, morphism equations are solved as
integer linear systems with per-row cyclic moduli, and surjectivity mod
moduli is decided from the SNF of an augmented relation matrix.

No floats anywhere.  Unimodular transforms are accumulated explicitly so
``U * M * V == D`` holds exactly; only ``D`` is canonical, ``U`` and ``V``
depend on pivot choices (smallest absolute value, first in row-major order).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class DimensionMismatch(ValueError):
    """Raised when matrix/vector shapes are inconsistent."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major tuple of tuples."""

    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(int(x) for x in r) for r in self.rows))
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise DimensionMismatch("ragged rows")

    @staticmethod
    def from_rows(rows: Iterable[Iterable[int]], ncols: Optional[int] = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if not rows and ncols is None:
            ncols = 0
        if not rows:
            m = IntMatrix(())
            object.__setattr__(m, "_ncols_empty", ncols)
            return m
        return IntMatrix(rows)

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "IntMatrix":
        m = IntMatrix(tuple((0,) * ncols for _ in range(nrows)))
        if nrows == 0:
            object.__setattr__(m, "_ncols_empty", ncols)
        return m

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def diagonal(entries: Sequence[int], nrows: Optional[int] = None, ncols: Optional[int] = None) -> "IntMatrix":
        k = len(entries)
        nrows = k if nrows is None else nrows
        ncols = k if ncols is None else ncols
        rows = [[0] * ncols for _ in range(nrows)]
        for i, d in enumerate(entries):
            rows[i][i] = int(d)
        m = IntMatrix(tuple(tuple(r) for r in rows))
        if nrows == 0:
            object.__setattr__(m, "_ncols_empty", ncols)
        return m

    @staticmethod
    def column(entries: Sequence[int]) -> "IntMatrix":
        return IntMatrix(tuple((int(x),) for x in entries))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        if self.rows:
            return len(self.rows[0])
        return getattr(self, "_ncols_empty", 0) or 0

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(zip(*self.rows), ncols=self.nrows) if self.rows else IntMatrix.zeros(self.ncols, 0)

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.ncols
        orows = other.rows
        out = []
        for r in self.rows:
            acc = [0] * ocols
            for k, a in enumerate(r):
                if a == 0:
                    continue
                orow = orows[k]
                if a == 1:
                    for j, b in enumerate(orow):
                        if b:
                            acc[j] += b
                else:
                    for j, b in enumerate(orow):
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        m = IntMatrix(tuple(out))
        if not out:
            object.__setattr__(m, "_ncols_empty", ocols)
        return m

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch("shape mismatch in addition")
        m = IntMatrix(tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.rows, other.rows)))
        if self.nrows == 0:
            object.__setattr__(m, "_ncols_empty", self.ncols)
        return m

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        m = IntMatrix(tuple(tuple(-a for a in r) for r in self.rows))
        if self.nrows == 0:
            object.__setattr__(m, "_ncols_empty", self.ncols)
        return m

    def scale(self, c: int) -> "IntMatrix":
        m = IntMatrix(tuple(tuple(c * a for a in r) for r in self.rows))
        if self.nrows == 0:
            object.__setattr__(m, "_ncols_empty", self.ncols)
        return m

    def apply(self, vec: Sequence[int]) -> list:
        if len(vec) != self.ncols:
            raise DimensionMismatch("vector length mismatch")
        return [sum(a * x for a, x in zip(r, vec) if a) for r in self.rows]

    def select_columns(self, idx: Sequence[int]) -> "IntMatrix":
        m = IntMatrix(tuple(tuple(r[j] for j in idx) for r in self.rows))
        if self.nrows == 0:
            object.__setattr__(m, "_ncols_empty", len(idx))
        return m

    def select_rows(self, idx: Sequence[int]) -> "IntMatrix":
        m = IntMatrix(tuple(self.rows[i] for i in idx))
        if not idx:
            object.__setattr__(m, "_ncols_empty", self.ncols)
        return m

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in r) for r in self.rows)

    def to_json(self) -> list:
        return [[str(a) for a in r] for r in self.rows]

    @staticmethod
    def from_json(data, ncols: Optional[int] = None) -> "IntMatrix":
        return IntMatrix.from_rows([[int(x) for x in r] for r in data], ncols=ncols)


def hstack(left: IntMatrix, right: IntMatrix) -> IntMatrix:
    if left.nrows != right.nrows:
        raise DimensionMismatch("hstack row mismatch")
    m = IntMatrix(tuple(l + r for l, r in zip(left.rows, right.rows)))
    if left.nrows == 0:
        object.__setattr__(m, "_ncols_empty", left.ncols + right.ncols)
    return m


def vstack(top: IntMatrix, bottom: IntMatrix) -> IntMatrix:
    if top.ncols != bottom.ncols:
        raise DimensionMismatch("vstack col mismatch")
    return IntMatrix.from_rows(top.rows + bottom.rows, ncols=top.ncols)


def block_diag(blocks: Sequence[IntMatrix]) -> IntMatrix:
    total_r = sum(b.nrows for b in blocks)
    total_c = sum(b.ncols for b in blocks)
    rows = [[0] * total_c for _ in range(total_r)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.nrows):
            br = b.rows[i]
            row = rows[r0 + i]
            for j in range(b.ncols):
                row[c0 + j] = br[j]
        r0 += b.nrows
        c0 += b.ncols
    out = IntMatrix(tuple(tuple(r) for r in rows))
    if total_r == 0:
        object.__setattr__(out, "_ncols_empty", total_c)
    return out


def det(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = M.nrows
    if n != M.ncols:
        raise DimensionMismatch("determinant of non-square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in M.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SnfDecomposition:
    """U*M*V = D with U, V unimodular and D in Smith normal form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    def diagonal(self) -> list:
        n = min(self.D.nrows, self.D.ncols)
        return [self.D.entry(i, i) for i in range(n)]


def _snf_inplace(a, m, n, with_transforms=True):
    # Returns (U_rows, V_rows) as lists of lists; a is mutated to D.
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if with_transforms else None
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if with_transforms else None
    t = 0
    while t < m and t < n:
        # Pivot: smallest nonzero absolute value in the trailing submatrix,
        # first such entry in row-major order.  Keeps coefficient growth down.
        piv = None
        best = None
        for i in range(t, m):
            ai = a[i]
            for j in range(t, n):
                v = ai[j]
                if v:
                    av = abs(v)
                    if best is None or av < best:
                        best = av
                        piv = (i, j)
                        if av == 1:
                            break
            if best == 1:
                break
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
            if U is not None:
                U[t], U[pi] = U[pi], U[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
            if V is not None:
                for row in V:
                    row[t], row[pj] = row[pj], row[t]
        while True:
            # Clear column t below the pivot.
            restart = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        ai, at = a[i], a[t]
                        for j in range(t, n):
                            ai[j] -= q * at[j]
                        if U is not None:
                            ui, ut = U[i], U[t]
                            for j in range(m):
                                ui[j] -= q * ut[j]
                    if a[i][t]:
                        # Remainder is a smaller pivot; swap it up and restart.
                        a[t], a[i] = a[i], a[t]
                        if U is not None:
                            U[t], U[i] = U[i], U[t]
                        restart = True
                        break
            if restart:
                continue
            # Clear row t to the right of the pivot.
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        for row in a:
                            row[j] -= q * row[t]
                        if V is not None:
                            for row in V:
                                row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        if V is not None:
                            for row in V:
                                row[t], row[j] = row[j], row[t]
                        restart = True
                        break
            if restart:
                continue
            # Divisibility fix-up: pivot must divide every trailing entry.
            done = True
            for i in range(t + 1, m):
                ai = a[i]
                bad = None
                for j in range(t + 1, n):
                    if ai[j] % a[t][t]:
                        bad = j
                        break
                if bad is not None:
                    at = a[t]
                    for j in range(t, n):
                        at[j] += ai[j]
                    if U is not None:
                        ut, ui = U[t], U[i]
                        for j in range(m):
                            ut[j] += ui[j]
                    done = False
                    break
            if done:
                break
        if a[t][t] < 0:
            for j in range(t, n):
                a[t][j] = -a[t][j]
            if U is not None:
                for j in range(m):
                    U[t][j] = -U[t][j]
        t += 1
    return U, V


def snf(M: IntMatrix) -> SnfDecomposition:
    """Smith normal form with transforms: U*M*V = D.

    D is diagonal with nonnegative entries satisfying D[i,i] | D[i+1,i+1].
    Deterministic for identical inputs.  Works for any shape including empty.
    """
    m, n = M.shape
    a = [list(r) for r in M.rows]
    U, V = _snf_inplace(a, m, n, with_transforms=True)
    D = IntMatrix.from_rows(a, ncols=n)
    Um = IntMatrix.from_rows(U, ncols=m)
    Vm = IntMatrix.from_rows(V, ncols=n)
    return SnfDecomposition(U=Um, D=D, V=Vm)


def snf_diagonal(M: IntMatrix) -> list:
    """Just the diagonal of the Smith form (no transform bookkeeping)."""
    m, n = M.shape
    a = [list(r) for r in M.rows]
    _snf_inplace(a, m, n, with_transforms=False)
    return [a[i][i] for i in range(min(m, n))]


def hnf(M: IntMatrix):
    """Row-style Hermite normal form: returns (H, U) with H = U*M.

    U unimodular; H is an upper staircase with positive pivots and entries
    above each pivot reduced to [0, pivot).
    """
    m, n = M.shape
    a = [list(r) for r in M.rows]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        # Euclid down column c among rows >= r.
        while True:
            nz = [i for i in range(r, m) if a[i][c]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(a[i][c]))
            i0 = nz[0]
            for i in nz[1:]:
                q = a[i][c] // a[i0][c]
                for j in range(n):
                    a[i][j] -= q * a[i0][j]
                for j in range(m):
                    U[i][j] -= q * U[i0][j]
        nz = [i for i in range(r, m) if a[i][c]]
        if not nz:
            continue
        i0 = nz[0]
        if i0 != r:
            a[r], a[i0] = a[i0], a[r]
            U[r], U[i0] = U[i0], U[r]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                for j in range(n):
                    a[i][j] -= q * a[r][j]
                for j in range(m):
                    U[i][j] -= q * U[r][j]
        r += 1
    return IntMatrix.from_rows(a, ncols=n), IntMatrix.from_rows(U, ncols=m)


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Basis of the integer kernel {x : M x = 0}, as columns."""
    dec = snf(M)
    diag = dec.diagonal()
    n = M.ncols
    free = [j for j in range(n) if j >= len(diag) or diag[j] == 0]
    return dec.V.select_columns(free)


def solve(M: IntMatrix, b: Sequence[int]):
    """One integer solution of M x = b, or None if none exists."""
    if len(b) != M.nrows:
        raise DimensionMismatch("rhs length mismatch")
    dec = snf(M)
    c = dec.U.apply(list(b))
    diag = dec.diagonal()
    n = M.ncols
    w = [0] * n
    for i in range(M.nrows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            if i < n:
                w[i] = c[i] // d
    return dec.V.apply(w)


def solve_mod(M: IntMatrix, b: Sequence[int], moduli: Sequence[int]):
    """Solve M x ≡ b componentwise mod the given per-row moduli.

    A modulus of 0 means that row is an exact equation over Z.  Returns one
    solution vector or None when the system has no solution.
    """
    m, n = M.shape
    if len(b) != m or len(moduli) != m:
        raise DimensionMismatch("solve_mod shape mismatch")
    slack_cols = [i for i in range(m) if moduli[i] != 0]
    aug_rows = []
    for i in range(m):
        row = list(M.rows[i]) if m else []
        for k in slack_cols:
            row.append(moduli[i] if k == i else 0)
        aug_rows.append(row)
    aug = IntMatrix.from_rows(aug_rows, ncols=n + len(slack_cols))
    z = solve(aug, b)
    if z is None:
        return None
    return z[:n]


def is_surjective_mod(M: IntMatrix, moduli: Sequence[int]) -> bool:
    """Whether x ↦ M x is onto the product of Z/moduli[i] (0 meaning Z)."""
    m, n = M.shape
    if len(moduli) != m:
        raise DimensionMismatch("moduli length mismatch")
    rows = []
    for i in range(m):
        row = list(M.rows[i]) if m else []
        for k in range(m):
            row.append(moduli[i] if k == i else 0)
        rows.append(row)
    diag = snf_diagonal(IntMatrix.from_rows(rows, ncols=n + m))
    ones = sum(1 for d in diag if abs(d) == 1)
    return ones == m


def rank_gf2(rows: list) -> int:
    """Rank over F_2 of rows given as Python-int bitmasks."""
    pivots = []
    rank = 0
    for r in rows:
        for p in pivots:
            low = p & -p
            if r & low:
                r ^= p
        if r:
            pivots.append(r)
            rank += 1
    return rank


def rank_mod_p(rows: list, ncols: int, p: int) -> int:
    """Rank over F_p of dense integer rows (entries reduced mod p here)."""
    if p == 2:
        bit_rows = []
        for r in rows:
            acc = 0
            for j, v in enumerate(r):
                if v & 1:
                    acc |= 1 << j
            bit_rows.append(acc)
        return rank_gf2(bit_rows)
    work = [[v % p for v in r] for r in rows]
    rank = 0
    col = 0
    nrows = len(work)
    while rank < nrows and col < ncols:
        piv = None
        for i in range(rank, nrows):
            if work[i][col]:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][col], -1, p)
        work[rank] = [(v * inv) % p for v in work[rank]]
        prow = work[rank]
        for i in range(nrows):
            if i != rank and work[i][col]:
                c = work[i][col]
                work[i] = [(v - c * w) % p for v, w in zip(work[i], prow)]
        rank += 1
        col += 1
    return rank
