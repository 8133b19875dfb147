"""Prime field arithmetic for a modulus chosen at runtime."""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_PRIME = 2147483647


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin, valid for all p < 3.3e24."""
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field F_p. ``p`` must be an odd prime below 2**62."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not (2 < self.p < 2**62) or not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not an odd prime below 2**62")

    def __call__(self, value: int) -> "Fel":
        return Fel(value % self.p, self)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)


@dataclass(frozen=True)
class Fel:
    value: int
    field: FieldSpec

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise ValueError(f"{self.value} is not a canonical residue mod {self.field.p}")

    def _other(self, other) -> int:
        if isinstance(other, Fel):
            if other.field.p != self.field.p:
                raise TypeError("field elements over different moduli")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def _wrap(self, v: int) -> "Fel":
        return Fel(v % self.field.p, self.field)

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.value + b)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.value - b)

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(b - self.value)

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.value * b)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def inv(self) -> "Fel":
        return Fel(self.field.inv(self.value), self.field)

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return self * self.field.inv(b)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fel({self.value} mod {self.field.p})"
