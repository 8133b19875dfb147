"""Closed-form Hilbert, size and cost formulas, plus empirical structure checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exactla import BlockSplit, OpCounter, echelonize
from .ring import Polynomial, enumerate_degree, mono_mul, num_monomials, rank_in_degree


def binom(a: int, r: int) -> int:
    """Binomial coefficient with C(a, r) = 0 whenever a < r or r < 0."""
    if r < 0 or a < r:
        return 0
    return math.comb(a, r)


def _check_n(n: int) -> None:
    if n < 3:
        raise ValueError("n must be at least 3")


# ------------------------------------------------------------------ Hilbert functions


def hf_ideal(n: int, D: int, d: int) -> int:
    """dim I_d for the ideal of (n-1)-minors of a generic n x n matrix of degree-D forms."""
    _check_n(n)
    if D < 1 or d < 0:
        raise ValueError("need D >= 1 and d >= 0")
    return (
        n * n * binom(3 + d - D * (n - 1), 3)
        - (2 * n * n - 2) * binom(3 + d - D * n, 3)
        + n * n * binom(3 + d - D * (n + 1), 3)
        - binom(3 + d - 2 * D * n, 3)
    )


def hf_quotient(n: int, D: int, d: int) -> int:
    return binom(d + 3, 3) - hf_ideal(n, D, d)


@dataclass(frozen=True)
class HilbertData:
    n: int
    D: int = 1

    def hf_ideal(self, d: int) -> int:
        return hf_ideal(self.n, self.D, d)

    def hf_quotient(self, d: int) -> int:
        return hf_quotient(self.n, self.D, d)

    def socle_degree(self) -> int:
        """Last degree where the quotient is nonzero."""
        d = 0
        top = 2 * self.D * self.n + 4
        last = 0
        while d <= top:
            if self.hf_quotient(d):
                last = d
            d += 1
        return last

    def quotient_series(self) -> list[int]:
        return [self.hf_quotient(d) for d in range(self.socle_degree() + 1)]

    def is_symmetric(self) -> bool:
        h = self.quotient_series()
        return h == h[::-1]


def hf_closed_form(n: int, d: int) -> int:
    """Cubic closed form of hf_ideal(n, 1, d) valid for n-1 <= d <= 2n-3."""
    _check_n(n)
    if not n - 1 <= d <= 2 * n - 3:
        raise ValueError(f"degree {d} outside [{n - 1}, {2 * n - 3}]")
    num = (2 + d - n) * (d * d + (-2 * n + 4) * d + 4 * n * n - 4 * n + 3)
    assert num % 3 == 0
    return num // 3


# ------------------------------------------------------------------ staircase and sizes


def staircase_ell(h_d: int, d: int, k: int = 4) -> int:
    """Largest l in [0, k] with C(l+d-1, l-1) < h_d."""
    ell = 0
    while ell < k and binom(ell + d, ell) < h_d:
        ell += 1
    return ell


def staircase_growth_general(k: int, h_d: int, h_d1: int, d: int) -> int:
    """Number of new leading monomials in degree d+1 of a revlex ideal with dims h_d, h_{d+1}."""
    ell = staircase_ell(h_d, d, k)
    tail = sum(binom(j + d - 2, j - 1) * (j - 1) for j in range(1, ell + 1))
    return h_d1 + (ell - k) * h_d + tail - ell * binom(ell + d - 1, ell - 1)


def _check_range(n: int, d: int) -> None:
    _check_n(n)
    if not n - 1 <= d < 2 * n - 3:
        raise ValueError(f"degree {d} outside [{n - 1}, {2 * n - 3})")


def gb_new_lm_count(n: int, d: int) -> int:
    """New Groebner basis leading monomials appearing in degree d+1."""
    _check_range(n, d)
    return (d - 2 * n + 3) * (d - 2 * n + 2) // 2


def gb_degree_counts(n: int) -> dict[int, int]:
    out = {n - 1: n * n}
    for d in range(n - 1, 2 * n - 3):
        c = gb_new_lm_count(n, d)
        if c:
            out[d + 1] = c
    return out


def gb_size(n: int) -> int:
    return n * (n + 1) * (n + 2) // 6


def block_dims(n: int, d: int) -> BlockSplit:
    """(alpha, beta, gamma) of the degree-(d+1) Macaulay matrix."""
    _check_range(n, d)
    alpha = gb_new_lm_count(n, d)
    beta = hf_ideal(n, 1, d + 1) - alpha
    gamma = binom(4 + d, 3) - beta
    return BlockSplit(alpha, beta, gamma)


# ------------------------------------------------------------------ cost model


@dataclass
class CostTerm:
    degree: int
    split: BlockSplit
    trsm: Fraction | float
    update: Fraction | float

    @property
    def total(self):
        return self.trsm + self.update


@dataclass
class CostModel:
    n: int
    omega: float
    terms: list[CostTerm] = field(default_factory=list)

    @property
    def total(self):
        return sum((t.total for t in self.terms), Fraction(0) if self.exact else 0.0)

    @property
    def exact(self) -> bool:
        return float(self.omega).is_integer()


def cost_model(n: int, omega: float = 3) -> CostModel:
    """Per-degree terms beta^2 alpha^(w-2) and alpha^(w-2) beta gamma, d = n-1 .. 2n-4."""
    _check_n(n)
    if not 2 <= omega <= 3:
        raise ValueError("omega must lie in [2, 3]")
    exact = float(omega).is_integer()
    e = int(omega) - 2 if exact else omega - 2
    model = CostModel(n, omega)
    for d in range(n - 1, 2 * n - 3):
        s = block_dims(n, d)
        a = Fraction(s.alpha) ** e if exact else float(s.alpha) ** e
        model.terms.append(CostTerm(d + 1, s, s.beta * s.beta * a, a * s.beta * s.gamma))
    return model


OMEGA2_POLY = (
    Fraction(619, 1260),
    Fraction(-341, 360),
    Fraction(-7, 360),
    Fraction(7, 36),
    Fraction(-169, 360),
    Fraction(-89, 360),
    Fraction(-1, 420),
    Fraction(0),
)

DENSE_POLY = (
    Fraction(1, 72),
    Fraction(13, 120),
    Fraction(-4, 9),
    Fraction(13, 24),
    Fraction(31, 72),
    Fraction(7, 20),
    Fraction(0),
)


def _horner(coeffs: Sequence[Fraction], n: int) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * n + c
    return acc


def omega2_polynomial(n: int) -> Fraction:
    """Printed degree-7 polynomial for sum(beta*gamma + beta^2)."""
    return _horner(OMEGA2_POLY, n)


# Printed leading constants c with f_w(n) ~ c n^(2w+3).
TABLE1 = {
    3.0: 401 / 18144,
    2.7: 2**0.7 * 76533282553747476335323 / 2761171875000000000000000,
    2.5: 29 * math.sqrt(2) / 10080,
    2.38: 2**0.38 * 3808710545424609640564981876343720387 / 41658431291580200195312500000000000000,
    2.0: 619 / 1260,
}


def asymptotic_constant(omega: float) -> float:
    """lim f_w(n) / n^(2w+3), as an integral over t = d/n in [1, 2].

    alpha ~ n^2 (2-t)^2 / 2, beta ~ n^3 (t-1)(t^2-2t+4)/3 and beta + gamma ~ n^3 t^3 / 6.
    """
    from scipy.integrate import quad

    def g(t):
        return 0.5 ** (omega - 2) * (t - 1) * (t * t - 2 * t + 4) / 3 * t**3 / 6

    val, _ = quad(g, 1.0, 2.0, weight="alg", wvar=(0.0, 2 * (omega - 2)), epsabs=0.0, epsrel=1e-13)
    return val


def cost_ratio(n: int, omega: float) -> float:
    return float(cost_model(n, omega).total) / n ** (2 * omega + 3)


# ------------------------------------------------------------------ dense output size


def dense_coeff_count(n: int, mode: str = "direct") -> int | Fraction:
    """Stored coefficients of the dense reduced basis.

    ``printed`` evaluates the printed sextic; ``direct`` sums, per element of
    degree e, the C(3+e,3) - dim I_e standard monomials plus the leading one.
    """
    _check_n(n)
    if mode == "printed":
        v = _horner(DENSE_POLY, n)
        return int(v) if v.denominator == 1 else v
    if mode != "direct":
        raise ValueError(f"unknown mode {mode!r}")
    return sum(c * (binom(3 + e, 3) - hf_ideal(n, 1, e) + 1) for e, c in gb_degree_counts(n).items())


def stored_coefficients(polys: Sequence[Polynomial]) -> int:
    return sum(len(f.terms) for f in polys)


# ------------------------------------------------------------------ empirical checks


def revlex_check(pivot_columns: Sequence[int], h_d: int) -> bool:
    return list(pivot_columns) == list(range(h_d))


class QuotientDegree:
    """Normal-form projection of degree-d forms onto standard monomials."""

    def __init__(self, gb_polys: Sequence[Polynomial], d: int, p: int):
        self.d, self.p = d, p
        ncols = num_monomials(d, 4)
        rows = []
        for g in gb_polys:
            e = d - g.degree
            if e < 0:
                continue
            for t in enumerate_degree(e):
                row = np.zeros(ncols, dtype=np.int64)
                for mon, c in g.as_dict().items():
                    row[rank_in_degree(mono_mul(mon, t))] = c
                rows.append(row)
        if rows:
            ech, piv, _ = echelonize(np.array(rows, dtype=np.int64), p, OpCounter())
        else:
            ech, piv = np.zeros((0, ncols), dtype=np.int64), []
        self.pivots = list(piv)
        self.standard = [c for c in range(ncols) if c not in set(piv)]
        self._red = ech[:, self.standard] if len(piv) else ech[:, :0]

    @property
    def dim(self) -> int:
        return len(self.standard)

    def project(self, vecs: np.ndarray) -> np.ndarray:
        """Standard-monomial coordinates of the rows of ``vecs`` modulo I."""
        out = vecs[:, self.standard] % self.p
        if self.pivots:
            out = (out - (vecs[:, self.pivots] % self.p).astype(object).dot(self._red.astype(object))) % self.p
        return np.asarray(out, dtype=np.int64)


def _rank_mod(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(echelonize(np.asarray(a, dtype=np.int64), p, OpCounter())[1])


def _power_dense(ell: Sequence[int], s: int, p: int) -> dict:
    f = Polynomial.linear(ell, p)
    out = Polynomial({(0, 0, 0, 0): 1}, p)
    for _ in range(s):
        out = out * f
    return out.as_dict()


@dataclass
class LefschetzEntry:
    s: int
    degree: int
    rank: int
    expected: int
    ok: bool


def lefschetz_check(
    gb_polys: Sequence[Polynomial], hilb: HilbertData, ell: Sequence[int], smax: int, p: int | None = None
) -> list[LefschetzEntry]:
    """Ranks of x l^s : (R/I)_{d-s} -> (R/I)_d against min(HF(d-s), HF(d)).

    That equality is the statement HF_{R/(I+l^s)}(d) = max(HF(d) - HF(d-s), 0).
    """
    gb_polys = list(gb_polys)
    p = p or gb_polys[0].p
    top = hilb.socle_degree()
    quot = {d: QuotientDegree(gb_polys, d, p) for d in range(top + 1)}
    out = []
    for s in range(1, smax + 1):
        ls = _power_dense(ell, s, p)
        for d in range(s, top + 1):
            src, dst = quot[d - s], quot[d]
            vecs = np.zeros((src.dim, num_monomials(d, 4)), dtype=np.int64)
            mons = enumerate_degree(d - s)
            for r, c in enumerate(src.standard):
                for lm, lc in ls.items():
                    vecs[r, rank_in_degree(mono_mul(mons[c], lm))] = lc
            rank = _rank_mod(dst.project(vecs), p) if src.dim and dst.dim else 0
            h_src, h_dst = hilb.hf_quotient(d - s), hilb.hf_quotient(d)
            expected = min(h_src, h_dst)
            out.append(LefschetzEntry(s, d, rank, expected, rank == expected))
    return out
