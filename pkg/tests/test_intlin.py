import itertools
import math
import random

import pytest

from abext.intlin import (
    DimensionMismatch,
    IntMatrix,
    det,
    hnf,
    is_surjective_mod,
    kernel_basis,
    rank_mod_p,
    snf,
    solve,
    solve_mod,
)


def entries_gcd(M):
    g = 0
    for row in M.rows:
        for v in row:
            g = math.gcd(g, v)
    return g


def test_snf_spec_example():
    M = IntMatrix.from_rows([[2, 4], [6, 8]])
    dec = snf(M)
    assert dec.diagonal() == [2, 4]
    assert (dec.U * M * dec.V).rows == dec.D.rows
    assert det(dec.U) in (1, -1) and det(dec.V) in (1, -1)
    # d1 is the gcd of all entries, d1*d2 = |det M|
    assert dec.diagonal()[0] == entries_gcd(M)
    assert dec.diagonal()[0] * dec.diagonal()[1] == abs(det(M))


def test_snf_empty_and_identity():
    dec = snf(IntMatrix.zeros(0, 0))
    assert dec.D.shape == (0, 0)
    dec = snf(IntMatrix.identity(3))
    assert dec.diagonal() == [1, 1, 1]


def test_snf_zero_rows_cols():
    dec = snf(IntMatrix.zeros(3, 2))
    assert dec.D.rows == IntMatrix.zeros(3, 2).rows
    dec = snf(IntMatrix.from_rows([], ncols=4))
    assert dec.D.shape == (0, 4)


def test_snf_random_properties():
    rng = random.Random(7)
    for _ in range(120):
        m = rng.randint(0, 6)
        n = rng.randint(0, 6)
        M = IntMatrix.from_rows(
            [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)], ncols=n
        )
        dec = snf(M)
        assert (dec.U * M * dec.V).rows == dec.D.rows
        assert det(dec.U) in (1, -1)
        assert det(dec.V) in (1, -1)
        diag = dec.diagonal()
        for a, b in zip(diag, diag[1:]):
            assert a >= 0 and b >= 0
            if a:
                assert b % a == 0
            else:
                assert b == 0
        # off-diagonal zero
        for i in range(dec.D.nrows):
            for j in range(dec.D.ncols):
                if i != j:
                    assert dec.D.entry(i, j) == 0
        # determinism
        again = snf(M)
        assert again.U.rows == dec.U.rows and again.V.rows == dec.V.rows


def test_solve_mod_examples():
    assert solve_mod(IntMatrix.from_rows([[2]]), [1], [4]) is None
    assert solve_mod(IntMatrix.from_rows([[1]]), [7], [0]) == [7]
    x = solve_mod(IntMatrix.from_rows([[2, 0], [0, 3]]), [2, 3], [4, 9])
    assert x is not None
    assert (2 * x[0]) % 4 == 2 and (3 * x[1]) % 9 == 3


def test_solve_mod_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_mod(IntMatrix.from_rows([[1, 2]]), [1, 2], [3])


def _exhaustive_solvable(M, b, moduli):
    # Solutions are periodic modulo the lcm of the row moduli.
    L = math.lcm(*moduli)
    n = M.ncols
    for x in itertools.product(range(L), repeat=n):
        vals = M.apply(list(x))
        if all((v - t) % m == 0 for v, t, m in zip(vals, b, moduli)):
            return True
    return False


def test_solve_mod_against_exhaustive_search():
    rng = random.Random(5)
    for _ in range(80):
        m = rng.randint(1, 2)
        n = rng.randint(1, 2)
        M = IntMatrix.from_rows([[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)])
        moduli = [rng.choice([2, 3, 4, 5, 6]) for _ in range(m)]
        b = [rng.randint(0, 5) for _ in range(m)]
        got = solve_mod(M, b, moduli)
        brute = _exhaustive_solvable(M, b, moduli)
        if got is None:
            assert not brute
        else:
            assert brute
            vals = M.apply(got)
            for v, t, md in zip(vals, b, moduli):
                assert (v - t) % md == 0


def test_is_surjective_mod_examples():
    assert is_surjective_mod(IntMatrix.from_rows([[1]]), [5])
    assert not is_surjective_mod(IntMatrix.from_rows([[2]]), [4])
    # Z -> Z/4 + Z/9 via (2,3): image generated by an element of order 6 < 36
    M = IntMatrix.from_rows([[2], [3]])
    assert not is_surjective_mod(M, [4, 9])
    reachable = {(2 * x % 4, 3 * x % 9) for x in range(36)}
    assert len(reachable) < 36


def test_is_surjective_mod_against_enumeration():
    rng = random.Random(11)
    for _ in range(60):
        m = rng.randint(1, 2)
        n = rng.randint(1, 2)
        M = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)])
        moduli = [rng.choice([2, 3, 4]) for _ in range(m)]
        total = math.prod(moduli)
        L = math.lcm(*moduli)
        image = set()
        for x in itertools.product(range(L), repeat=n):
            vals = M.apply(list(x))
            image.add(tuple(v % md for v, md in zip(vals, moduli)))
        assert is_surjective_mod(M, moduli) == (len(image) == total)


def test_solve_plain():
    M = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert solve(M, [4, 9]) == [2, 3]
    assert solve(M, [1, 0]) is None


def test_kernel_basis():
    M = IntMatrix.from_rows([[1, 2, 3]])
    K = kernel_basis(M)
    assert K.ncols == 2
    for j in range(K.ncols):
        col = [K.entry(i, j) for i in range(3)]
        assert sum(a * b for a, b in zip([1, 2, 3], col)) == 0


def test_hnf_properties():
    rng = random.Random(3)
    for _ in range(40):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        M = IntMatrix.from_rows([[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)])
        H, U = hnf(M)
        assert (U * M).rows == H.rows
        assert det(U) in (1, -1)
        pivots = []
        for i in range(m):
            nz = [j for j in range(n) if H.entry(i, j)]
            if nz:
                assert H.entry(i, nz[0]) > 0
                pivots.append(nz[0])
        assert pivots == sorted(pivots)


def test_rank_mod_p():
    rows = [[1, 0, 1], [0, 1, 1], [1, 1, 0]]
    assert rank_mod_p(rows, 3, 2) == 2
    assert rank_mod_p(rows, 3, 3) == 3
    assert rank_mod_p([], 3, 2) == 0


def test_matrix_json_roundtrip():
    M = IntMatrix.from_rows([[10 ** 30, -2], [0, 7]])
    assert IntMatrix.from_json(M.to_json()).rows == M.rows
