"""Cofactors and Gulliksen-Negard syzygy data for an n x n matrix of linear forms.

Positions of R^{n^2} are row-major: entry (i, j) is position (i-1)*n + j.
The module E1 = ker(pi) / <(I, I)> carries the basis

    (E_ij, 0) for i != j, then (0, E_ij) for i != j, then (E_ii, E_11) for
    i = 1..n, then (0, E_ii - E_11) for i = 2..n-1,

all row-major, 2n^2 - 2 elements in total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations

import numpy as np

from .ff import DEFAULT_PRIME, FieldSpec
from .ring import ModuleElement, Polynomial, enumerate_degree, num_monomials, shift_map


@dataclass(frozen=True)
class LinearMatrix:
    """n x n matrix whose (i, j) entry is sum_v entries[i][j][v] * x_{v+1}."""

    n: int
    p: int
    entries: tuple

    def __post_init__(self):
        FieldSpec(self.p)
        if self.n < 2:
            raise ValueError("matrix size must be at least 2")
        ent = tuple(tuple(tuple(int(c) % self.p for c in e) for e in row) for row in self.entries)
        if len(ent) != self.n or any(len(r) != self.n or any(len(e) != 4 for e in r) for r in ent):
            raise ValueError("entries must be an n x n array of 4-coefficient linear forms")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def random(cls, n: int, p: int = DEFAULT_PRIME, seed: int = 0) -> "LinearMatrix":
        """Coefficients drawn row-major from numpy's PCG64 seeded with ``seed``."""
        FieldSpec(p)
        rng = np.random.Generator(np.random.PCG64(seed))
        coeffs = rng.integers(0, p, size=(n, n, 4), dtype=np.int64)
        return cls(n, p, coeffs.tolist())

    def coeff_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def poly(self, i: int, j: int) -> Polynomial:
        return Polynomial.linear(self.entries[i][j], self.p)

    def polys(self) -> list[list[Polynomial]]:
        return [[self.poly(i, j) for j in range(self.n)] for i in range(self.n)]

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "entries": [[list(e) for e in row] for row in self.entries]}

    @classmethod
    def from_json(cls, obj: dict) -> "LinearMatrix":
        m = cls(int(obj["n"]), int(obj["p"]), obj["entries"])
        for row in obj["entries"]:
            for e in row:
                if any(not 0 <= int(c) < m.p for c in e):
                    raise ValueError("coefficients must be residues in [0, p)")
        return m

    def dumps(self) -> str:
        return json.dumps(self.to_json())


# ------------------------------------------------------------ polynomial matrices


def _mul_linear(mats: np.ndarray, lin: np.ndarray, d: int, p: int) -> np.ndarray:
    """Left-multiply a matrix of degree-d slices by a matrix of linear forms.

    ``mats`` has shape (n, n, N_d), ``lin`` shape (n, n, 4); the result holds
    degree-(d+1) slices.
    """
    n = mats.shape[0]
    out = np.zeros((n, n, num_monomials(d + 1, 4)), dtype=object if p > 3037000499 else np.int64)
    for v in range(4):
        shifted = np.zeros_like(out)
        shifted[:, :, shift_map(d, v)] = mats
        for l in range(n):
            out = (out + lin[:, l, v][:, None, None] * shifted[l][None, :, :]) % p
    return out


def _slice_poly(vec, d: int, p: int) -> Polynomial:
    mons = enumerate_degree(d, 4)
    return Polynomial({mons[t]: int(c) for t, c in enumerate(vec) if c}, p)


def _faddeev_leverrier(m: LinearMatrix):
    """Adjugate and determinant as dense slices; needs p > n."""
    n, p = m.n, m.p
    lin = m.coeff_array()
    dt = object if p > 3037000499 else np.int64
    if dt is object:
        lin = lin.astype(object)
    # M_1 = I (degree 0), c_{n-1} = -tr(A)
    mk = np.zeros((n, n, 1), dtype=dt)
    for i in range(n):
        mk[i, i, 0] = 1
    deg = 0
    det = None
    for k in range(1, n + 1):
        am = _mul_linear(mk, lin, deg, p)  # degree deg+1
        tr = np.zeros(am.shape[2], dtype=dt)
        for i in range(n):
            tr = (tr + am[i, i]) % p
        c = (-tr * pow(k, -1, p)) % p  # c_{n-k}, degree k
        if k == n:
            det = c * (1 if n % 2 == 0 else p - 1) % p
            break
        mk = am.copy()
        for i in range(n):
            mk[i, i] = (mk[i, i] + c) % p
        deg += 1
    sign = 1 if (n + 1) % 2 == 0 else p - 1
    return mk * sign % p, det, n - 1


def _adjugate_minors(m: LinearMatrix) -> list[list[Polynomial]]:
    """Brute-force Leibniz expansion of every (n-1)-minor."""
    n, p = m.n, m.p
    polys = m.polys()
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows = [r for r in range(n) if r != i]
            cols = [c for c in range(n) if c != j]
            acc = Polynomial.zero(p)
            for perm in permutations(range(n - 1)):
                sgn = _perm_sign(perm)
                term = Polynomial({(0, 0, 0, 0): 1}, p)
                for a, b in enumerate(perm):
                    term = term * polys[rows[a]][cols[b]]
                acc = acc + (term if sgn > 0 else -term)
            if (i + j) % 2:
                acc = -acc
            adj[j][i] = acc
    return adj


def _perm_sign(perm) -> int:
    sgn, seen = 1, [False] * len(perm)
    for s in range(len(perm)):
        if seen[s]:
            continue
        j, length = s, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sgn = -sgn
    return sgn


def adjugate(m: LinearMatrix) -> list[list[Polynomial]]:
    """adj(M), so that M * adj(M) = det(M) * I."""
    if m.p <= m.n:
        return _adjugate_minors(m)
    adj, _, d = _faddeev_leverrier(m)
    return [[_slice_poly(adj[i, j], d, m.p) for j in range(m.n)] for i in range(m.n)]


def determinant(m: LinearMatrix) -> Polynomial:
    if m.p <= m.n:
        adj = _adjugate_minors(m)
        polys = m.polys()
        acc = Polynomial.zero(m.p)
        for j in range(m.n):
            acc = acc + polys[0][j] * adj[j][0]
        return acc
    _, det, _ = _faddeev_leverrier(m)
    return _slice_poly(det, m.n, m.p)


def cofactor_system(m: LinearMatrix) -> list[Polynomial]:
    """Cofactors C_ij = (-1)^(i+j) minor_ij at position (i-1)*n + j."""
    adj = adjugate(m)
    n = m.n
    return [adj[j][i] for i in range(n) for j in range(n)]


# ------------------------------------------------------------ E1 coordinates


def _matmul_poly(a, b):
    n = len(a)
    p = a[0][0].p
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = Polynomial.zero(p)
            for l in range(n):
                if not a[i][l].is_zero() and not b[l][j].is_zero():
                    acc = acc + a[i][l] * b[l][j]
            row.append(acc)
        out.append(row)
    return out


def _elementary(n: int, u: int, v: int, p: int):
    one = Polynomial({(0, 0, 0, 0): 1}, p)
    zero = Polynomial.zero(p)
    return [[one if (i, j) == (u, v) else zero for j in range(n)] for i in range(n)]


def e1_basis_labels(n: int) -> list[tuple]:
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    return (
        [("u", i, j) for i, j in off]
        + [("v", i, j) for i, j in off]
        + [("diag", i) for i in range(n)]
        + [("vdiag", i) for i in range(1, n - 1)]
    )


def e1_coordinates(u, v) -> list[Polynomial]:
    """Coordinates of the class of (u, v) in E1; requires trace(u) = trace(v)."""
    n = len(u)
    p = u[0][0].p
    tu = Polynomial.zero(p)
    tv = Polynomial.zero(p)
    for i in range(n):
        tu = tu + u[i][i]
        tv = tv + v[i][i]
    if tu != tv:
        raise ValueError("(u, v) is not in the kernel of the trace difference")
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    vnn = v[n - 1][n - 1]
    return (
        [u[i][j] for i, j in off]
        + [v[i][j] for i, j in off]
        + [u[i][i] - vnn for i in range(n)]
        + [v[i][i] - vnn for i in range(1, n - 1)]
    )


def e1_element(label: tuple, n: int, p: int):
    """The representative pair (N1, N2) of an E1 basis element."""
    zero = Polynomial.zero(p)
    one = Polynomial({(0, 0, 0, 0): 1}, p)
    n1 = [[zero] * n for _ in range(n)]
    n2 = [[zero] * n for _ in range(n)]
    n1 = [list(r) for r in n1]
    n2 = [list(r) for r in n2]
    kind = label[0]
    if kind == "u":
        n1[label[1]][label[2]] = one
    elif kind == "v":
        n2[label[1]][label[2]] = one
    elif kind == "diag":
        n1[label[1]][label[1]] = one
        n2[0][0] = one
    else:
        n2[label[1]][label[1]] = one
        n2[0][0] = -one
    return n1, n2


def syz1_generators(m: LinearMatrix) -> list[ModuleElement]:
    """Images N1*M - M*N2 of the E1 basis, flattened row-major into R^{n^2}."""
    n, p = m.n, m.p
    mp = m.polys()
    out = []
    for label in e1_basis_labels(n):
        n1, n2 = e1_element(label, n, p)
        a = _matmul_poly(n1, mp)
        b = _matmul_poly(mp, n2)
        out.append(ModuleElement.from_entries([a[i][j] - b[i][j] for i in range(n) for j in range(n)], p))
    return out


def syz2_generators(m: LinearMatrix) -> list[ModuleElement]:
    """E1 coordinates of (M*E_uv, E_uv*M) for every elementary matrix, row-major."""
    n, p = m.n, m.p
    mp = m.polys()
    out = []
    for a in range(n):
        for b in range(n):
            e = _elementary(n, a, b, p)
            out.append(ModuleElement.from_entries(e1_coordinates(_matmul_poly(mp, e), _matmul_poly(e, mp)), p))
    return out


@dataclass
class GNData:
    matrix: LinearMatrix

    @cached_property
    def adjugate(self) -> list[list[Polynomial]]:
        return adjugate(self.matrix)

    @cached_property
    def generators(self) -> list[Polynomial]:
        n = self.matrix.n
        return [self.adjugate[j][i] for i in range(n) for j in range(n)]

    @cached_property
    def syz1(self) -> list[ModuleElement]:
        return syz1_generators(self.matrix)

    @cached_property
    def syz2(self) -> list[ModuleElement]:
        return syz2_generators(self.matrix)
