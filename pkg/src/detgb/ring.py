"""Monomials, homogeneous polynomials and module elements under grevlex / TOP.

Monomials are plain tuples of exponents, variables ordered x1 > x2 > ... > xk.
Module monomials are ``(pos, mon)`` pairs with 1-based positions.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, NamedTuple

Monomial = tuple[int, ...]


def grevlex_key(a: Monomial) -> tuple:
    """Sort key: ``grevlex_key(a) > grevlex_key(b)`` iff a > b in grevlex."""
    return (sum(a), tuple(-e for e in reversed(a)))


def grevlex_cmp(a: Monomial, b: Monomial) -> int:
    if len(a) != len(b):
        raise ValueError("monomials in different numbers of variables")
    ka, kb = grevlex_key(a), grevlex_key(b)
    return (ka > kb) - (ka < kb)


class ModuleMonomial(NamedTuple):
    pos: int
    mon: Monomial


def top_key(a: ModuleMonomial) -> tuple:
    # monomial first, then the larger position wins
    return (grevlex_key(a.mon), a.pos)


def top_cmp(a: ModuleMonomial, b: ModuleMonomial) -> int:
    ka, kb = top_key(a), top_key(b)
    return (ka > kb) - (ka < kb)


def num_monomials(d: int, k: int) -> int:
    return comb(k + d - 1, k - 1) if d >= 0 else 0


@lru_cache(maxsize=None)
def enumerate_degree(d: int, k: int = 4) -> tuple[Monomial, ...]:
    """All monomials of degree d in k variables, grevlex-descending."""
    if d < 0 or k < 1:
        return ()

    def comps(total, nvars):
        if nvars == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in comps(total - first, nvars - 1):
                yield (first,) + rest

    return tuple(sorted(comps(d, k), key=grevlex_key, reverse=True))


@lru_cache(maxsize=None)
def _rank_table(d: int, k: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(enumerate_degree(d, k))}


def rank_in_degree(m: Monomial) -> int:
    return _rank_table(sum(m), len(m))[tuple(m)]


def unrank(r: int, d: int, k: int = 4) -> Monomial:
    return enumerate_degree(d, k)[r]


@lru_cache(maxsize=None)
def shift_map(d: int, var: int, k: int = 4):
    """Index map from degree-d ranks to degree-(d+1) ranks for multiplication by x_{var+1}."""
    import numpy as np

    table = _rank_table(d + 1, k)
    out = []
    for m in enumerate_degree(d, k):
        e = list(m)
        e[var] += 1
        out.append(table[tuple(e)])
    return np.asarray(out, dtype=np.int64)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def variable(i: int, k: int = 4) -> Monomial:
    """x_i as a monomial (1-based i)."""
    return tuple(int(j == i - 1) for j in range(k))


def last_var(m: Monomial) -> int:
    """1-based index of the smallest variable dividing m; 0 for the constant monomial."""
    for j in range(len(m) - 1, -1, -1):
        if m[j]:
            return j + 1
    return 0


class Polynomial:
    """Homogeneous polynomial over F_p with terms kept grevlex-descending."""

    __slots__ = ("p", "k", "_terms", "_sorted")

    def __init__(self, terms: Mapping[Monomial, int] | Iterable, p: int, k: int = 4):
        self.p = p
        self.k = k
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, int] = {}
        deg = None
        for mon, c in items:
            mon = tuple(mon)
            if len(mon) != k:
                raise ValueError(f"monomial {mon} not in {k} variables")
            c = (acc.get(mon, 0) + int(c)) % p
            if deg is None:
                deg = sum(mon)
            elif sum(mon) != deg:
                raise ValueError("polynomial is not homogeneous")
            acc[mon] = c
        self._terms = {m: c for m, c in acc.items() if c}
        self._sorted = None

    @classmethod
    def zero(cls, p: int, k: int = 4) -> "Polynomial":
        return cls({}, p, k)

    @classmethod
    def linear(cls, coeffs, p: int) -> "Polynomial":
        k = len(coeffs)
        return cls({variable(i + 1, k): c for i, c in enumerate(coeffs)}, p, k)

    @property
    def terms(self) -> list[tuple[Monomial, int]]:
        if self._sorted is None:
            self._sorted = sorted(self._terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)
        return self._sorted

    def coeff(self, mon: Monomial) -> int:
        return self._terms.get(tuple(mon), 0)

    def as_dict(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int | None:
        for m in self._terms:
            return sum(m)
        return None

    def lm(self) -> Monomial:
        return self.terms[0][0]

    def lc(self) -> int:
        return self.terms[0][1]

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.p == other.p and self._terms == other._terms

    def __hash__(self):
        return hash((self.p, frozenset(self._terms.items())))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = (out.get(m, 0) + c) % self.p
        return Polynomial(out, self.p, self.k)

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms.items()}, self.p, self.k)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c: int) -> "Polynomial":
        return Polynomial({m: v * c for m, v in self._terms.items()}, self.p, self.k)

    def mul_monomial(self, t: Monomial) -> "Polynomial":
        return Polynomial({mono_mul(m, t): c for m, c in self._terms.items()}, self.p, self.k)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if isinstance(other, int):
            return self.scale(other)
        out: dict[Monomial, int] = {}
        p = self.p
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return Polynomial(out, p, self.k)

    __rmul__ = __mul__

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(pow(self.lc(), -1, self.p))

    def to_json(self) -> dict:
        return {
            "degree": self.degree if self._terms else 0,
            "terms": [{"exp": list(m), "coeff": c} for m, c in self.terms],
        }

    @classmethod
    def from_json(cls, obj: dict, p: int) -> "Polynomial":
        terms = [(tuple(t["exp"]), t["coeff"]) for t in obj["terms"]]
        k = len(terms[0][0]) if terms else 4
        poly = cls(terms, p, k)
        if poly.terms and poly.degree != obj.get("degree", poly.degree):
            raise ValueError("degree field disagrees with terms")
        return poly

    def __repr__(self):
        if not self._terms:
            return "0"

        def mono(m):
            parts = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e]
            return "*".join(parts) or "1"

        return " + ".join(f"{c}*{mono(m)}" for m, c in self.terms)


class ModuleElement:
    """Homogeneous element of R^m; terms TOP-descending."""

    __slots__ = ("p", "m", "k", "_terms", "_sorted")

    def __init__(self, terms: Mapping[ModuleMonomial, int] | Iterable, m: int, p: int, k: int = 4):
        self.p, self.m, self.k = p, m, k
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[ModuleMonomial, int] = {}
        deg = None
        for key, c in items:
            pos, mon = key
            if not 1 <= pos <= m:
                raise ValueError(f"position {pos} outside [1, {m}]")
            key = ModuleMonomial(pos, tuple(mon))
            if deg is None:
                deg = sum(key.mon)
            elif sum(key.mon) != deg:
                raise ValueError("module element is not homogeneous")
            acc[key] = (acc.get(key, 0) + int(c)) % p
        self._terms = {t: c for t, c in acc.items() if c}
        self._sorted = None

    @classmethod
    def from_entries(cls, entries: list[Polynomial], p: int) -> "ModuleElement":
        terms = []
        for i, poly in enumerate(entries, start=1):
            terms.extend(((i, mon), c) for mon, c in poly.as_dict().items())
        k = entries[0].k if entries else 4
        return cls(terms, len(entries), p, k)

    def entries(self) -> list[Polynomial]:
        buckets: list[dict] = [{} for _ in range(self.m)]
        for (pos, mon), c in self._terms.items():
            buckets[pos - 1][mon] = c
        return [Polynomial(b, self.p, self.k) for b in buckets]

    @property
    def terms(self) -> list[tuple[ModuleMonomial, int]]:
        if self._sorted is None:
            self._sorted = sorted(self._terms.items(), key=lambda t: top_key(t[0]), reverse=True)
        return self._sorted

    def as_dict(self) -> dict[ModuleMonomial, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int | None:
        for t in self._terms:
            return sum(t.mon)
        return None

    def lm(self) -> ModuleMonomial:
        return self.terms[0][0]

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return self.p == other.p and self.m == other.m and self._terms == other._terms

    def __hash__(self):
        return hash((self.p, self.m, frozenset(self._terms.items())))

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        out = dict(self._terms)
        for t, c in other._terms.items():
            out[t] = (out.get(t, 0) + c) % self.p
        return ModuleElement(out, self.m, self.p, self.k)

    def scale(self, c: int) -> "ModuleElement":
        return ModuleElement({t: v * c for t, v in self._terms.items()}, self.m, self.p, self.k)

    def mul_monomial(self, t: Monomial) -> "ModuleElement":
        return ModuleElement(
            {(key.pos, mono_mul(key.mon, t)): c for key, c in self._terms.items()}, self.m, self.p, self.k
        )

    def __len__(self):
        return len(self._terms)


def mul_monomial(f, t: Monomial):
    """Multiply a Polynomial or ModuleElement by the monomial t."""
    return f.mul_monomial(t)


def dot(vec: ModuleElement | list[Polynomial], gens: list[Polynomial]) -> Polynomial:
    """sum_l vec_l * gens_l, with vec given as module element or entry list."""
    entries = vec.entries() if isinstance(vec, ModuleElement) else vec
    p = gens[0].p
    acc: dict[Monomial, int] = {}
    for a, g in zip(entries, gens):
        for m1, c1 in a.as_dict().items():
            for m2, c2 in g.as_dict().items():
                m = mono_mul(m1, m2)
                acc[m] = (acc.get(m, 0) + c1 * c2) % p
    return Polynomial(acc, p, gens[0].k)
