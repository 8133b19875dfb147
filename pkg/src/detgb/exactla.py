"""Dense exact linear algebra over F_p with operation counting.

Entries are numpy int64 residues when p < 2**31.5 (so a single product fits in
a signed 64-bit word) and Python ints in object arrays otherwise.  Products of
int64 matrices go through float64 BLAS on 16-bit limbs, which is exact as long
as every partial sum stays below 2**53.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

INT64_SAFE = 3037000499  # floor(sqrt(2**63 - 1))
STRASSEN_THRESHOLD = 64
_LIMB_BITS = 16
_ROW_CHUNK = 1024


class SingularError(ArithmeticError):
    pass


class StructureError(ValueError):
    """The block layout assumed by :func:`structured_rref` does not hold."""


@dataclass
class OpCounter:
    mul: int = 0
    add: int = 0
    fallbacks: int = 0

    def snapshot(self) -> tuple[int, int]:
        return self.mul, self.add


def dtype_for(p: int):
    return np.int64 if p <= INT64_SAFE else object


def asmod(a, p: int) -> np.ndarray:
    arr = np.array(a, dtype=object) % p
    return arr.astype(dtype_for(p)) if dtype_for(p) is np.int64 else arr


def zeros(shape, p: int) -> np.ndarray:
    if dtype_for(p) is np.int64:
        return np.zeros(shape, dtype=np.int64)
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


@dataclass
class DenseMatrix:
    data: np.ndarray
    p: int
    counter: OpCounter = field(default_factory=OpCounter)

    @classmethod
    def from_rows(cls, rows, p: int, counter: OpCounter | None = None) -> "DenseMatrix":
        rows = list(rows)
        ncols = len(rows[0]) if rows else 0
        data = asmod(rows, p).reshape(len(rows), ncols)
        return cls(data, p, counter or OpCounter())

    @classmethod
    def identity(cls, n: int, p: int) -> "DenseMatrix":
        d = zeros((n, n), p)
        for i in range(n):
            d[i, i] = 1
        return cls(d, p)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.data]

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.p == other.p and self.data.shape == other.data.shape and bool(np.all(self.data == other.data))


@dataclass(frozen=True)
class BlockSplit:
    alpha: int
    beta: int
    gamma: int

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("block sizes must be nonnegative")


class Echelon(NamedTuple):
    matrix: DenseMatrix
    pivots: list[int]
    zero_rows: int
    origin: list[int]  # input row index of each output row


# ---------------------------------------------------------------- products


def _matmul_raw(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    m, k = a.shape
    n = b.shape[1]
    if m == 0 or n == 0 or k == 0:
        return zeros((m, n), p)
    if a.dtype == object or b.dtype == object or p > INT64_SAFE:
        return (a.astype(object) @ b.astype(object)) % p
    if (p - 1) ** 2 * k < 2**53:
        out = np.empty((m, n), dtype=np.int64)
        bf = b.astype(np.float64)
        for s in range(0, m, _ROW_CHUNK):
            out[s : s + _ROW_CHUNK] = (a[s : s + _ROW_CHUNK].astype(np.float64) @ bf).astype(np.int64) % p
        return out
    if k >= 1 << _LIMB_BITS:
        # keep every limb partial sum below 2**49
        out = _matmul_raw(a[:, : 1 << (_LIMB_BITS - 1)], b[: 1 << (_LIMB_BITS - 1)], p)
        return (out + _matmul_raw(a[:, 1 << (_LIMB_BITS - 1) :], b[1 << (_LIMB_BITS - 1) :], p)) % p
    mask = (1 << _LIMB_BITS) - 1
    b_st = np.hstack([b & mask, b >> _LIMB_BITS]).astype(np.float64)
    base = float(1 << _LIMB_BITS)
    out = np.empty((m, n), dtype=np.int64)
    for s in range(0, m, _ROW_CHUNK):
        blk = a[s : s + _ROW_CHUNK]
        r = blk.shape[0]
        a_st = np.vstack([blk & mask, blk >> _LIMB_BITS]).astype(np.float64)
        prod = a_st @ b_st
        # Horner in the limb base; every intermediate is an integer below 2**53
        t = _fmod(prod[r:, n:], p) * base + prod[:r, n:] + prod[r:, :n]
        t = _fmod(t, p) * base + prod[:r, :n]
        out[s : s + r] = _fmod(t, p)
    return out


def _fmod(t: np.ndarray, p: int) -> np.ndarray:
    """t mod p for integer-valued float64 arrays below 2**53."""
    q = np.floor(t * (1.0 / p))
    r = t - q * p
    r[r < 0] += p
    r[r >= p] -= p
    return r


def _classical(a, b, p, counter: OpCounter):
    m, k = a.shape
    n = b.shape[1]
    counter.mul += m * k * n
    counter.add += m * n * max(k - 1, 0)
    return _matmul_raw(a, b, p)


def _strassen(a, b, p, counter: OpCounter, threshold: int):
    m, k = a.shape
    n = b.shape[1]
    if min(m, k, n) <= threshold:
        return _classical(a, b, p, counter)
    m2, k2, n2 = (m + 1) // 2, (k + 1) // 2, (n + 1) // 2
    ap = zeros((2 * m2, 2 * k2), p)
    ap[:m, :k] = a
    bp = zeros((2 * k2, 2 * n2), p)
    bp[:k, :n] = b
    a11, a12, a21, a22 = ap[:m2, :k2], ap[:m2, k2:], ap[m2:, :k2], ap[m2:, k2:]
    b11, b12, b21, b22 = bp[:k2, :n2], bp[:k2, n2:], bp[k2:, :n2], bp[k2:, n2:]

    def add(x, y):
        counter.add += x.size
        return (x + y) % p

    def sub(x, y):
        counter.add += x.size
        return (x - y) % p

    def rec(x, y):
        return _strassen(x, y, p, counter, threshold)

    m1 = rec(add(a11, a22), add(b11, b22))
    m2_ = rec(add(a21, a22), b11)
    m3 = rec(a11, sub(b12, b22))
    m4 = rec(a22, sub(b21, b11))
    m5 = rec(add(a11, a12), b22)
    m6 = rec(sub(a21, a11), add(b11, b12))
    m7 = rec(sub(a12, a22), add(b21, b22))
    c = zeros((2 * m2, 2 * n2), p)
    c[:m2, :n2] = add(sub(add(m1, m4), m5), m7)
    c[:m2, n2:] = add(m3, m5)
    c[m2:, :n2] = add(m2_, m4)
    c[m2:, n2:] = add(add(sub(m1, m2_), m3), m6)
    return c[:m, :n]


def matmul(a: np.ndarray, b: np.ndarray, p: int, counter: OpCounter, strassen: int | None = None) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch {a.shape} x {b.shape}")
    if strassen is not None:
        return _strassen(a, b, p, counter, strassen)
    return _classical(a, b, p, counter)


def mul(a: DenseMatrix, b: DenseMatrix, strassen: int | None = None) -> DenseMatrix:
    """Exact product a*b; ``strassen`` is the size below which recursion stops."""
    if a.p != b.p:
        raise ValueError("matrices over different fields")
    return DenseMatrix(matmul(a.data, b.data, a.p, a.counter, strassen), a.p, a.counter)


# ---------------------------------------------------------------- echelon forms


_ECH_BASE = 16


def _echelon_base(blk, p, counter):
    ncols = blk.shape[1]
    cols: list[int] = []
    idx: list[int] = []
    for i in range(blk.shape[0]):
        nz = np.flatnonzero(blk[i])
        if nz.size == 0:
            continue
        c = int(nz[0])
        lead = int(blk[i, c])
        if lead != 1:
            blk[i, c:] = blk[i, c:] * pow(lead, -1, p) % p
            counter.mul += ncols - c
        col = blk[:, c].copy()
        col[i] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            blk[hit, c:] = (blk[hit, c:] - col[hit, None] * blk[i, c:][None, :]) % p
            counter.mul += hit.size * (ncols - c)
            counter.add += hit.size * (ncols - c)
        cols.append(c)
        idx.append(i)
    return blk[idx], cols, idx


def _echelon_rec(a, p, counter, strassen):
    nrows = a.shape[0]
    if nrows <= _ECH_BASE:
        return _echelon_base(a.copy(), p, counter)
    h = nrows // 2
    top, tcols, tidx = _echelon_rec(a[:h], p, counter, strassen)
    bot = a[h:]
    if tcols:
        tc = np.asarray(tcols)
        bot = (bot - matmul(bot[:, tc], top, p, counter, strassen)) % p
        counter.add += bot.size
        bot[:, tc] = 0
    low, bcols, bidx = _echelon_rec(bot, p, counter, strassen)
    if bcols and tcols:
        bc = np.asarray(bcols)
        top = (top - matmul(top[:, bc], low, p, counter, strassen)) % p
        counter.add += top.size
        top[:, bc] = 0
    return np.vstack([top, low]), tcols + bcols, tidx + [h + i for i in bidx]


def echelonize(a: np.ndarray, p: int, counter: OpCounter, strassen: int | None = None):
    """Row-by-row reduced echelon form, computed by recursive halving.

    Rows are taken in order; each is reduced by the pivots found so far and,
    if nonzero, claims its leading column.  Returns ``(rows, pivots, origin)``
    sorted by pivot column, where ``origin[i]`` is the input row that claimed
    pivot ``pivots[i]``.
    """
    if a.shape[0] == 0:
        return a[:0].copy(), [], []
    rows, cols, idx = _echelon_rec(a, p, counter, strassen)
    order = np.argsort(cols, kind="stable")
    return rows[order], [cols[i] for i in order], [idx[i] for i in order]


def rref(a: DenseMatrix, strassen: int | None = None) -> Echelon:
    """Reduced row echelon form; zero rows are counted and dropped."""
    rows, piv, origin = echelonize(a.data, a.p, a.counter, strassen)
    return Echelon(DenseMatrix(rows, a.p, a.counter), piv, a.rows - len(piv), origin)


# ---------------------------------------------------------------- triangular solve

_TRSM_BASE = 32


def _trsm_base(u, v, p, counter):
    n = u.shape[0]
    x = v.copy()
    q = x.shape[1]
    for i in range(n - 1, -1, -1):
        d = int(u[i, i])
        if d == 0:
            raise SingularError(f"zero diagonal entry at {i}")
        if d != 1:
            x[i] = x[i] * pow(d, -1, p) % p
            counter.mul += q
        if i:
            col = u[:i, i]
            hit = np.flatnonzero(col)
            if hit.size:
                x[hit] = (x[hit] - col[hit, None] * x[i][None, :]) % p
                counter.mul += hit.size * q
                counter.add += hit.size * q
    return x


def _trsm(u, v, p, counter, strassen):
    n, q = u.shape[0], v.shape[1]
    if n <= _TRSM_BASE or q == 0:
        return _trsm_base(u, v, p, counter)
    if q > n:
        h = q // 2
        return np.hstack([_trsm(u, v[:, :h], p, counter, strassen), _trsm(u, v[:, h:], p, counter, strassen)])
    h = (n + 1) // 2
    x2 = _trsm(u[h:, h:], v[h:], p, counter, strassen)
    v1 = (v[:h] - matmul(u[:h, h:], x2, p, counter, strassen)) % p
    counter.add += v1.size
    x1 = _trsm(u[:h, :h], v1, p, counter, strassen)
    return np.vstack([x1, x2])


def trsm(u: DenseMatrix, v: DenseMatrix, strassen: int | None = None) -> DenseMatrix:
    """Solve u*x = v for upper triangular invertible u."""
    if u.rows != u.cols or u.rows != v.rows:
        raise ValueError("trsm needs square u with as many rows as v")
    if np.any(np.tril(u.data, -1)):
        raise ValueError("u is not upper triangular")
    return DenseMatrix(_trsm(u.data, v.data, u.p, u.counter, strassen), u.p, u.counter)


def structured_rref(m: DenseMatrix, split: BlockSplit, strassen: int | None = None) -> Echelon:
    """rref of [[T, X], [A, Y]] with T the leading beta x beta upper triangular block.

    Triangular solve on the top block, Schur update of the bottom block,
    echelon form of the Schur complement, then back-substitution of the new
    pivot columns into the top block.
    """
    p, cnt = m.p, m.counter
    a_, b_ = split.alpha, split.beta
    if a_ + b_ != m.rows or b_ > m.cols:
        raise StructureError(f"split {split} does not fit a {m.rows}x{m.cols} matrix")
    t = m.data[:b_, :b_]
    if np.any(np.tril(t, -1)) or (b_ and np.any(np.diagonal(t) == 0)):
        raise StructureError("top-left block is not invertible upper triangular")
    x = _trsm(t, m.data[:b_, b_:], p, cnt, strassen) if b_ else m.data[:0, b_:]
    low_a, low_y = m.data[b_:, :b_], m.data[b_:, b_:]
    schur = (low_y - matmul(low_a, x, p, cnt, strassen)) % p
    cnt.add += schur.size
    s_rows, s_piv, s_origin = echelonize(schur, p, cnt, strassen)
    if s_piv:
        sp = np.asarray(s_piv)
        x = (x - matmul(x[:, sp], s_rows, p, cnt, strassen)) % p
        cnt.add += x.size
        x[:, sp] = 0
    ncols = m.cols
    out = zeros((b_ + len(s_piv), ncols), p)
    piv = list(range(b_)) + [b_ + c for c in s_piv]
    origin = list(range(b_)) + [b_ + i for i in s_origin]
    out[:b_, :b_] = np.eye(b_, dtype=np.int64) if out.dtype != object else np.eye(b_, dtype=int).astype(object)
    out[:b_, b_:] = x
    out[b_:, b_:] = s_rows
    order = np.argsort(piv, kind="stable")
    return Echelon(
        DenseMatrix(out[order], p, cnt),
        [piv[i] for i in order],
        a_ - len(s_piv),
        [origin[i] for i in order],
    )
