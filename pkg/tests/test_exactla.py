import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from detgb.exactla import (
    BlockSplit,
    DenseMatrix,
    OpCounter,
    SingularError,
    StructureError,
    echelonize,
    matmul,
    mul,
    rref,
    structured_rref,
    trsm,
)

P = 2147483647


def rand(rng, r, c, p=P):
    return rng.integers(0, p, size=(r, c), dtype=np.int64)


def obj_matmul(a, b, p):
    return (np.asarray(a, dtype=object).dot(np.asarray(b, dtype=object)) % p).astype(np.int64)


def naive_rref(rows, p):
    """Textbook Gauss-Jordan on Python ints."""
    a = [[int(x) % p for x in r] for r in rows]
    piv, r = [], 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        k = next((i for i in range(r, len(a)) if a[i][c]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
    return a[:r], piv


def test_mul_identity_and_errors():
    rng = np.random.default_rng(0)
    b = DenseMatrix(rand(rng, 5, 3), P)
    assert mul(DenseMatrix.identity(5, P), b) == b
    with pytest.raises(ValueError):
        mul(DenseMatrix(rand(rng, 2, 3), P), DenseMatrix(rand(rng, 2, 2), P))


@pytest.mark.parametrize("p", [7, 65521, P, 4611686018427387847])
def test_matmul_matches_object_oracle(p):
    rng = np.random.default_rng(p % 1000)
    hi = min(p, 2**62)
    a = rng.integers(0, hi, size=(37, 70), dtype=np.int64) % p
    b = rng.integers(0, hi, size=(70, 23), dtype=np.int64) % p
    c = matmul(a, b, p, OpCounter())
    assert np.array_equal(np.asarray(c, dtype=object) % p, obj_matmul(a, b, p).astype(object))


def test_strassen_equals_classical():
    rng = np.random.default_rng(1)
    a, b = rand(rng, 20, 20), rand(rng, 20, 20)
    c1, c2 = OpCounter(), OpCounter()
    assert np.array_equal(matmul(a, b, P, c1), matmul(a, b, P, c2, strassen=4))
    assert c1.mul == 20**3
    a, b = rand(rng, 130, 97), rand(rng, 97, 140)
    assert np.array_equal(matmul(a, b, P, OpCounter(), strassen=64), obj_matmul(a, b, P))


def test_rref_examples():
    e = rref(DenseMatrix.from_rows([[0, 1], [1, 0]], 7))
    assert e.matrix.tolist() == [[1, 0], [0, 1]] and list(e.pivots) == [0, 1] and e.zero_rows == 0
    e = rref(DenseMatrix.from_rows([[1, 2], [2, 4]], 7))
    assert e.matrix.tolist() == [[1, 2]] and list(e.pivots) == [0] and e.zero_rows == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32), st.sampled_from([5, 7, 101]))
def test_rref_matches_naive_and_is_idempotent(r, c, seed, p):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(r, c), dtype=np.int64)
    a[rng.random(a.shape) < 0.4] = 0
    e = rref(DenseMatrix(a, p))
    rows, piv = naive_rref(a.tolist(), p)
    assert e.matrix.tolist() == rows and list(e.pivots) == piv
    assert e.zero_rows == r - len(piv)
    again = rref(e.matrix) if len(piv) else e
    assert again.matrix == e.matrix


def test_echelonize_large_against_naive():
    rng = np.random.default_rng(3)
    p = 101
    a = rng.integers(0, p, size=(60, 40), dtype=np.int64)
    a[30:] = (a[:30] * 3 + a[:30][::-1]) % p
    rows, piv, origin = echelonize(a, p, OpCounter())
    ref, rpiv = naive_rref(a.tolist(), p)
    assert rows.tolist() == ref and list(piv) == rpiv
    assert len(set(origin)) == len(origin) == 30


def test_echelonize_origin_is_row_by_row():
    # the second row duplicates the first, so the survivors are rows 0 and 2
    a = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]], dtype=np.int64)
    _, piv, origin = echelonize(a, 7, OpCounter())
    assert sorted(origin) == [0, 2]


def test_trsm_examples():
    u = DenseMatrix.from_rows([[1, 1], [0, 1]], 7)
    v = DenseMatrix.from_rows([[1], [1]], 7)
    assert trsm(u, v).tolist() == [[0], [1]]
    assert trsm(DenseMatrix.identity(3, 7), DenseMatrix.from_rows([[1, 2], [3, 4], [5, 6]], 7)).tolist() == [
        [1, 2], [3, 4], [5, 6]
    ]
    with pytest.raises(SingularError):
        trsm(DenseMatrix.from_rows([[1, 1], [0, 0]], 7), v)


@pytest.mark.parametrize("shape", [(16, 4), (4, 16), (70, 9), (33, 80)])
def test_trsm_random_against_rref(shape):
    n, q = shape
    rng = np.random.default_rng(n * q)
    u = np.triu(rand(rng, n, n))
    np.fill_diagonal(u, rng.integers(1, P, size=n))
    v = rand(rng, n, q)
    x = trsm(DenseMatrix(u, P), DenseMatrix(v, P))
    assert np.array_equal(obj_matmul(u, x.data, P), v)
    aug = rref(DenseMatrix(np.hstack([u, v]), P))
    assert np.array_equal(aug.matrix.data[:, n:], x.data)


def _structured_case(rng, alpha, beta, gamma):
    t = np.triu(rand(rng, beta, beta))
    np.fill_diagonal(t, rng.integers(1, P, size=beta))
    x = rand(rng, beta, gamma)
    a = rand(rng, alpha, beta)
    y = rand(rng, alpha, gamma)
    return np.vstack([np.hstack([t, x]), np.hstack([a, y])])


@pytest.mark.parametrize("alpha,beta,gamma", [(3, 7, 4), (0, 6, 5), (5, 40, 12), (12, 90, 30)])
def test_structured_equals_plain(alpha, beta, gamma):
    rng = np.random.default_rng(alpha + beta)
    m = _structured_case(rng, alpha, beta, gamma)
    s = structured_rref(DenseMatrix(m, P), BlockSplit(alpha, beta, gamma))
    e = rref(DenseMatrix(m, P))
    assert s.matrix == e.matrix and list(s.pivots) == list(e.pivots)


def test_structured_reports_zero_rows():
    rng = np.random.default_rng(9)
    m = _structured_case(rng, 2, 6, 3)
    m[7] = (m[0] * 5 + m[6]) % P  # lower row dependent on the others
    s = structured_rref(DenseMatrix(m, P), BlockSplit(2, 6, 3))
    assert s.zero_rows == 1
    assert s.matrix == rref(DenseMatrix(m, P)).matrix


def test_structured_rejects_bad_block():
    m = np.array([[0, 1, 1], [1, 0, 1]], dtype=np.int64)
    with pytest.raises(StructureError):
        structured_rref(DenseMatrix(m, 7), BlockSplit(1, 1, 2))
    with pytest.raises(ValueError):
        BlockSplit(-1, 2, 2)


def test_counters_deterministic():
    rng = np.random.default_rng(5)
    a = rand(rng, 50, 60)
    c1, c2 = OpCounter(), OpCounter()
    echelonize(a, P, c1)
    echelonize(a.copy(), P, c2)
    assert (c1.mul, c1.add) == (c2.mul, c2.add) and c1.mul > 0
