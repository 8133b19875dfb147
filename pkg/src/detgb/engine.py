"""Signature-based degree-by-degree Groebner bases (modgb, detgb) and a Lazard oracle.

Modules R^m are graded by entry degree.  In degree e the columns of a
Macaulay matrix are the module monomials (pos, mon) with deg(mon) = e, in
TOP-descending order: column ``rank(mon) * m + (m - pos)``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import exactla
from .exactla import BlockSplit, DenseMatrix, OpCounter, StructureError, echelonize, structured_rref
from .gncomplex import GNData, LinearMatrix
from .ring import (
    Monomial,
    ModuleElement,
    ModuleMonomial,
    Polynomial,
    divides,
    enumerate_degree,
    grevlex_key,
    last_var,
    mono_div,
    mono_mul,
    num_monomials,
    rank_in_degree,
    shift_map,
    variable,
)
from .stats import StatsRecord

K = 4


@dataclass(frozen=True, order=True)
class Signature:
    gen: int
    mult: Monomial

    def top_key(self) -> tuple:
        return (grevlex_key(self.mult), self.gen)


class ZSet:
    """Leading module monomials of known syzygies, queried by divisibility."""

    def __init__(self, lms: Iterable[ModuleMonomial] = ()):
        self._by_deg: dict[int, set[tuple[int, Monomial]]] = {}
        self._closure: dict[int, set[tuple[int, Monomial]]] = {}
        for lm in lms:
            self.add(lm)

    def add(self, lm) -> None:
        pos, mon = lm
        self._by_deg.setdefault(sum(mon), set()).add((pos, tuple(mon)))
        self._closure.clear()

    def __len__(self):
        return sum(len(s) for s in self._by_deg.values())

    def __iter__(self):
        for d in sorted(self._by_deg):
            for pos, mon in sorted(self._by_deg[d]):
                yield ModuleMonomial(pos, mon)

    def closure(self, d: int) -> set[tuple[int, Monomial]]:
        """All (pos, mon) of degree d divisible by some element of the set."""
        if d in self._closure:
            return self._closure[d]
        if not self._by_deg or d < min(self._by_deg):
            out: set = set()
        else:
            prev = self.closure(d - 1)
            out = {(pos, mono_mul(mon, variable(v + 1))) for pos, mon in prev for v in range(K)}
            out |= self._by_deg.get(d, set())
        self._closure[d] = out
        return out

    def divides(self, pos: int, mon: Monomial) -> bool:
        return (pos, tuple(mon)) in self.closure(sum(mon))


@dataclass
class MacaulayMatrix:
    degree: int
    m: int
    signatures: list[Signature]
    data: np.ndarray

    @property
    def columns(self) -> list[ModuleMonomial]:
        mons = enumerate_degree(self.degree, K)
        return [ModuleMonomial(self.m - q, mon) for mon in mons for q in range(self.m)]


@dataclass
class GroebnerBasis:
    """Per-degree reduced, monic elements; Polynomials when the rank is 1."""

    p: int
    m: int = 1
    by_degree: dict[int, list] = field(default_factory=dict)

    def elements(self) -> list:
        out = []
        for d in sorted(self.by_degree):
            out.extend(sorted(self.by_degree[d], key=_lm_sort_key, reverse=True))
        return out

    def __len__(self):
        return sum(len(v) for v in self.by_degree.values())

    def lms(self) -> list:
        return [g.lm() for g in self.elements()]

    def counts(self) -> dict[int, int]:
        return {d: len(v) for d, v in sorted(self.by_degree.items()) if v}

    def maxdeg(self) -> int:
        return max((d for d, v in self.by_degree.items() if v), default=-1)

    def to_json(self, n: int | None = None) -> dict:
        return {
            "p": self.p,
            "n": n,
            "maxdeg": self.maxdeg(),
            "polys": [g.to_json() for g in self.elements()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GroebnerBasis":
        p = int(obj["p"])
        gb = cls(p)
        for t in obj["polys"]:
            f = Polynomial.from_json(t, p)
            gb.by_degree.setdefault(f.degree, []).append(f)
        return gb

    def as_set(self) -> set:
        return set(self.elements())


def _lm_sort_key(g):
    lm = g.lm()
    if isinstance(lm, ModuleMonomial):
        return (grevlex_key(lm.mon), lm.pos)
    return grevlex_key(lm)


# ------------------------------------------------------------------ dense helpers


def _col_shift(e: int, m: int, v: int) -> np.ndarray:
    """Column map from entry degree e to e+1 for multiplication by x_{v+1}."""
    base = shift_map(e, v, K)
    return (base[:, None] * m + np.arange(m)[None, :]).ravel()


def _col_mul(e: int, m: int, t: Monomial) -> np.ndarray:
    """Column map from entry degree e to e + deg(t) for multiplication by t."""
    cols = np.arange(num_monomials(e, K) * m)
    deg = e
    for v in range(K):
        for _ in range(t[v]):
            cols = _col_shift(deg, m, v)[cols]
            deg += 1
    return cols


def _to_dense(g, e: int, m: int, p: int) -> np.ndarray:
    row = exactla.zeros(num_monomials(e, K) * m, p)
    if isinstance(g, Polynomial):
        for mon, c in g.as_dict().items():
            row[rank_in_degree(mon)] = c
    else:
        for (pos, mon), c in g.as_dict().items():
            row[rank_in_degree(mon) * m + (m - pos)] = c
    return row


def _col_label(c: int, e: int, m: int) -> ModuleMonomial:
    mon = enumerate_degree(e, K)[c // m]
    return ModuleMonomial(m - c % m, mon)


def _from_dense(row, e: int, m: int, p: int, poly: bool):
    nz = np.flatnonzero(row)
    mons = enumerate_degree(e, K)
    if poly:
        return Polynomial({mons[c]: int(row[c]) for c in nz}, p)
    return ModuleElement({(m - c % m, mons[c // m]): int(row[c]) for c in nz}, m, p)


def _leading_cols(data: np.ndarray) -> np.ndarray:
    nz = data != 0
    lead = np.argmax(nz, axis=1)
    lead[~nz.any(axis=1)] = data.shape[1]
    return lead


# ------------------------------------------------------------------ modgb


@dataclass
class ModgbResult:
    basis: GroebnerBasis
    stats: list[StatsRecord]
    pivots: dict[int, list[int]]
    macaulay: dict[int, MacaulayMatrix] = field(default_factory=dict)
    signatures_created: list[Signature] = field(default_factory=list)


def _arrange(data: np.ndarray, sigs: list[Signature]):
    """Order rows by leading column, ties by signature; split into T and A."""
    lead = _leading_cols(data)
    order = sorted(range(len(sigs)), key=lambda r: (int(lead[r]), sigs[r].top_key()))
    t_rows, a_rows, seen = [], [], set()
    for r in order:
        if lead[r] < data.shape[1] and lead[r] not in seen:
            seen.add(int(lead[r]))
            t_rows.append(r)
        else:
            a_rows.append(r)
    return t_rows, a_rows, lead


def modgb(
    gens: Sequence,
    z: ZSet | None = None,
    dmax: int = 0,
    *,
    structured: bool = False,
    strassen: int | None = None,
    stage: str = "ideal",
    keep_matrices: bool = False,
) -> ModgbResult:
    """Reduced dmax-truncated TOP Groebner basis of the module generated by ``gens``.

    Each degree-d matrix is built from the echelonized degree-(d-1) rows: a
    row with signature (i, tau) is multiplied by x_j for every j at least the
    index of the smallest variable of tau, and products whose signature lies
    in the monomial module generated by ``z`` are never formed.  With
    ``structured`` set, degrees above the generator degree are echelonized
    through the triangular-block path.
    """
    if not gens:
        raise ValueError("no generators")
    poly = isinstance(gens[0], Polynomial)
    p = gens[0].p
    m = 1 if poly else gens[0].m
    if any(g.k != K for g in gens):
        raise ValueError("the engine works in four variables")
    degs = {g.degree for g in gens if not g.is_zero()}
    if len(degs) > 1:
        raise ValueError(f"generators of mixed degrees {sorted(degs)}")
    d0 = degs.pop() if degs else 0
    z = z or ZSet()
    basis = GroebnerBasis(p, m)
    result = ModgbResult(basis, [], {})
    if dmax < d0:
        return result

    counter = OpCounter()
    lm_closure: set = set()
    prev_rows = None
    prev_sigs: list[Signature] = []
    one = (0,) * K
    for d in range(d0, dmax + 1):
        t0 = time.perf_counter_ns()
        e = d - d0
        rec = StatsRecord(stage=stage, degree=d, p=p)
        ncols = num_monomials(d, K) * m
        if d == d0:
            sigs = [Signature(i + 1, one) for i in range(len(gens))]
            data = np.array([_to_dense(g, d, m, p) for g in gens]).reshape(len(gens), ncols)
            rec.redundant_skipped = 0
        else:
            built: dict[int, list[tuple[int, Signature]]] = {}
            sigs = []
            pruned = 0
            for r, sig in enumerate(prev_sigs):
                lo = max(last_var(sig.mult), 1) - 1
                for v in range(lo, K):
                    mult = mono_mul(sig.mult, variable(v + 1))
                    if z.divides(sig.gen, mult):
                        pruned += 1
                        continue
                    built.setdefault(v, []).append((r, Signature(sig.gen, mult)))
            data = exactla.zeros((sum(len(b) for b in built.values()), ncols), p)
            at = 0
            for v in sorted(built):
                src = [r for r, _ in built[v]]
                block = exactla.zeros((len(src), ncols), p)
                block[:, _col_shift(d - 1, m, v)] = prev_rows[src]
                data[at : at + len(src)] = block
                sigs.extend(s for _, s in built[v])
                at += len(src)
            rec.pruned = pruned
            rec.redundant_skipped = K * len(prev_sigs) - len(sigs)
        result.signatures_created.extend(sigs)
        if keep_matrices:
            result.macaulay[d] = MacaulayMatrix(e if not poly else d, m, list(sigs), data.copy())

        t_rows, a_rows, lead = _arrange(data, sigs)
        alpha, beta = len(a_rows), len(t_rows)
        rec.rows, rec.cols = len(sigs), ncols
        rec.alpha, rec.beta, rec.gamma = alpha, beta, ncols - beta
        rec.collisions = alpha
        order = t_rows + a_rows
        arranged = data[order] if order else data
        t_cols = [int(lead[r]) for r in t_rows]
        if alpha and beta:
            a_block = arranged[beta:][:, t_cols]
            rec.a_block_density = float(np.count_nonzero(a_block)) / a_block.size
        mul0, add0 = counter.snapshot()
        use_structured = structured and d > d0 and beta > 0
        ech = None
        if use_structured:
            rest = sorted(set(range(ncols)) - set(t_cols))
            perm = np.asarray(t_cols + rest, dtype=np.int64)
            try:
                ech = structured_rref(
                    DenseMatrix(arranged[:, perm], p, counter), BlockSplit(alpha, beta, ncols - beta), strassen
                )
            except StructureError:
                counter.fallbacks += 1
                ech = None
            if ech is not None:
                rows_out = exactla.zeros(ech.matrix.data.shape, p)
                rows_out[:, perm] = ech.matrix.data
                piv = [int(perm[c]) for c in ech.pivots]
                srt = np.argsort(piv, kind="stable")
                rows_out = rows_out[srt]
                origin = [ech.origin[i] for i in srt]
                piv = [piv[i] for i in srt]
        if ech is None:
            rows_out, piv, origin = echelonize(arranged, p, counter, strassen)
        rec.structured = bool(use_structured and ech is not None)
        mul1, add1 = counter.snapshot()
        rec.mul_count, rec.add_count = mul1 - mul0, add1 - add0
        rank = len(piv)
        rec.zero_reductions = len(sigs) - rank
        rec.new_pivots = sum(1 for o in origin if o >= beta)
        new_sigs = [sigs[order[o]] for o in origin]
        result.pivots[d] = list(piv)

        # leading monomials divisible by lower-degree basis elements
        if d > d0:
            lm_closure = {(pos, mono_mul(mon, variable(v + 1))) for pos, mon in lm_closure for v in range(K)}
        fresh = []
        for i, c in enumerate(piv):
            lab = _col_label(c, d, m)
            if (lab.pos, lab.mon) not in lm_closure:
                fresh.append(i)
        for i in fresh:
            lab = _col_label(piv[i], d, m)
            lm_closure.add((lab.pos, lab.mon))
        if fresh:
            basis.by_degree[d] = [_from_dense(rows_out[i], d, m, p, poly) for i in fresh]
        rec.gb_new = len(fresh)
        rec.wall_ns = time.perf_counter_ns() - t0
        result.stats.append(rec)
        prev_rows, prev_sigs = rows_out, new_sigs
    return result


# ------------------------------------------------------------------ detgb


@dataclass
class DetGBResult:
    basis: GroebnerBasis
    stats: list[StatsRecord]
    ideal: ModgbResult
    z_syz1: ZSet
    z_syz2: ZSet


def syzygy_leading_monomials(gens: Sequence[Polynomial], emax: int, strassen: int | None = None) -> ZSet:
    """Leading TOP monomials of the syzygies of ``gens`` up to multiplier degree emax.

    tau*e_i is such a monomial exactly when tau*f_i lies in the span of the
    products sigma*f_j with sigma*e_j smaller in TOP order; this is read off
    the row rank profile of the products sorted TOP-ascending.  Products
    already divisible by a known leading monomial are dependent and skipped.
    """
    p = gens[0].p
    d0 = gens[0].degree
    z = ZSet()
    counter = OpCounter()
    alive = [(i + 1, (0,) * K) for i in range(len(gens))]
    dense = [_to_dense(g, d0, 1, p) for g in gens]
    for e in range(1, emax + 1):
        clos = z.closure(e)
        cand = {(pos, mono_mul(mon, variable(v + 1))) for pos, mon in alive for v in range(K)}
        cand = sorted((c for c in cand if c not in clos), key=lambda c: (grevlex_key(c[1]), c[0]))
        ncols = num_monomials(d0 + e, K)
        data = exactla.zeros((len(cand), ncols), p)
        for r, (pos, mon) in enumerate(cand):
            data[r, _col_mul(d0, 1, mon)] = dense[pos - 1]
        _, _, origin = echelonize(data, p, counter, strassen)
        keep = set(origin)
        alive = [c for r, c in enumerate(cand) if r in keep]
        for r, c in enumerate(cand):
            if r not in keep:
                z.add(ModuleMonomial(*c))
    return z


def detgb(
    matrix: LinearMatrix,
    *,
    structured: bool = True,
    strassen: int | None = None,
    z_source: str = "gn",
    gn: GNData | None = None,
) -> DetGBResult:
    """Reduced grevlex basis of the ideal of (n-1)-minors, complete to degree 2n-3.

    ``z_source="gn"`` prunes with the Gulliksen-Negard syzygy runs;
    ``"rankprofile"`` obtains the same leading monomials from the ideal side.
    """
    n = matrix.n
    if n < 3:
        raise ValueError("detgb needs n >= 3")
    gn = gn or GNData(matrix)
    stats: list[StatsRecord] = []
    if z_source == "gn":
        l2 = modgb(gn.syz2, ZSet(), n - 3, stage="syz2", strassen=strassen)
        z2 = ZSet(l2.basis.lms())
        l1 = modgb(gn.syz1, z2, n - 2, stage="syz1", strassen=strassen)
        z1 = ZSet(l1.basis.lms())
        stats += l2.stats + l1.stats
    elif z_source == "rankprofile":
        z2 = ZSet()
        z1 = syzygy_leading_monomials(gn.generators, n - 2, strassen)
    else:
        raise ValueError(f"unknown syzygy source {z_source!r}")
    top = modgb(gn.generators, z1, 2 * n - 3, structured=structured, strassen=strassen, stage="ideal")
    stats += top.stats
    for s in stats:
        s.n = n
        s.p = matrix.p
    return DetGBResult(top.basis, stats, top, z1, z2)


# ------------------------------------------------------------------ oracle and normal forms


def lazard_oracle(gens: Sequence[Polynomial], dmax: int) -> GroebnerBasis:
    """Full Macaulay matrices of all monomial multiples, plain rref, no signatures."""
    p = gens[0].p
    d0 = gens[0].degree
    basis = GroebnerBasis(p)
    counter = OpCounter()
    closure: set = set()
    for d in range(d0, dmax + 1):
        mults = enumerate_degree(d - d0, K)
        dense = [_to_dense(g, d0, 1, p) for g in gens]
        data = exactla.zeros((len(mults) * len(gens), num_monomials(d, K)), p)
        r = 0
        for t in mults:
            cmap = _col_mul(d0, 1, t)
            for g in dense:
                data[r, cmap] = g
                r += 1
        rows, piv, _ = echelonize(data, p, counter)
        if d > d0:
            closure = {mono_mul(mon, variable(v + 1)) for mon in closure for v in range(K)}
        mons = enumerate_degree(d, K)
        fresh = [i for i, c in enumerate(piv) if mons[c] not in closure]
        closure |= {mons[piv[i]] for i in fresh}
        if fresh:
            basis.by_degree[d] = [_from_dense(rows[i], d, 1, p, True) for i in fresh]
    return basis


def normal_form(g: Polynomial, basis: GroebnerBasis | Sequence[Polynomial]) -> Polynomial:
    """Remainder of multivariate division of g by the basis elements."""
    elems = basis.elements() if isinstance(basis, GroebnerBasis) else list(basis)
    elems = [b.monic() for b in elems if not b.is_zero()]
    p = g.p
    work = g.as_dict()
    rem: dict[Monomial, int] = {}
    while work:
        mon = max(work, key=grevlex_key)
        c = work[mon]
        red = next((b for b in elems if divides(b.lm(), mon)), None)
        if red is None:
            rem[mon] = c
            del work[mon]
            continue
        t = mono_div(mon, red.lm())
        for bm, bc in red.as_dict().items():
            key = mono_mul(bm, t)
            v = (work.get(key, 0) - c * bc) % p
            if v:
                work[key] = v
            else:
                work.pop(key, None)
    return Polynomial(rem, p, g.k)


def spair_check(basis: GroebnerBasis | Sequence[Polynomial]) -> list[tuple[int, int]]:
    """Buchberger criterion: index pairs whose S-polynomial does not reduce to zero."""
    elems = basis.elements() if isinstance(basis, GroebnerBasis) else list(basis)
    elems = [b.monic() for b in elems]
    bad = []
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            a, b = elems[i].lm(), elems[j].lm()
            lcm = tuple(max(x, y) for x, y in zip(a, b))
            if all(x + y == z for x, y, z in zip(a, b, lcm)):
                continue  # coprime leading monomials
            s = elems[i].mul_monomial(mono_div(lcm, a)) - elems[j].mul_monomial(mono_div(lcm, b))
            if not normal_form(s, elems).is_zero():
                bad.append((i, j))
    return bad


def revlex_failures(result: ModgbResult, hilbert) -> list[int]:
    """Degrees whose pivot columns are not the leftmost dim I_d columns."""
    from .analytics import revlex_check

    return [d for d, piv in sorted(result.pivots.items()) if not revlex_check(piv, hilbert(d))]
