"""Exact half-integer arithmetic.

Indices produced by this package are half-integers and must never pass
through floating point.  A HalfInteger stores twice its value as an int,
so sums, negations and comparisons stay exact.
"""

from __future__ import annotations


class HalfInteger:
    """A number p/2 with p an integer, stored exactly."""

    __slots__ = ("_twice",)

    def __init__(self, twice: int):
        if not isinstance(twice, (int,)):
            raise TypeError("twice must be an int (twice the value)")
        self._twice = int(twice)

    @classmethod
    def from_int(cls, value: int) -> "HalfInteger":
        return cls(2 * int(value))

    @classmethod
    def from_signatures(cls, start_sig: int, interior_sigs, end_sig: int) -> "HalfInteger":
        """Half the endpoint signatures plus the full interior ones."""
        return cls(int(start_sig) + 2 * sum(int(s) for s in interior_sigs) + int(end_sig))

    @property
    def twice(self) -> int:
        return self._twice

    def is_integer(self) -> bool:
        return self._twice % 2 == 0

    def as_int(self) -> int:
        if self._twice % 2 != 0:
            raise ValueError(f"{self} is not an integer")
        return self._twice // 2

    def __float__(self) -> float:
        return self._twice / 2.0

    def __add__(self, other):
        if isinstance(other, HalfInteger):
            return HalfInteger(self._twice + other._twice)
        if isinstance(other, int):
            return HalfInteger(self._twice + 2 * other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, HalfInteger):
            return HalfInteger(self._twice - other._twice)
        if isinstance(other, int):
            return HalfInteger(self._twice - 2 * other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return HalfInteger(2 * other - self._twice)
        return NotImplemented

    def __neg__(self):
        return HalfInteger(-self._twice)

    def __mul__(self, other):
        if isinstance(other, int):
            return HalfInteger(self._twice * other)
        return NotImplemented

    __rmul__ = __mul__

    def _cmp_key(self, other):
        if isinstance(other, HalfInteger):
            return other._twice
        if isinstance(other, int):
            return 2 * other
        return None

    def __eq__(self, other):
        key = self._cmp_key(other)
        return NotImplemented if key is None else self._twice == key

    def __lt__(self, other):
        key = self._cmp_key(other)
        return NotImplemented if key is None else self._twice < key

    def __le__(self, other):
        key = self._cmp_key(other)
        return NotImplemented if key is None else self._twice <= key

    def __gt__(self, other):
        key = self._cmp_key(other)
        return NotImplemented if key is None else self._twice > key

    def __ge__(self, other):
        key = self._cmp_key(other)
        return NotImplemented if key is None else self._twice >= key

    def __hash__(self):
        return hash(("HalfInteger", self._twice))

    def __str__(self) -> str:
        # canonical exact form, always over 2
        return f"{self._twice}/2"

    def __repr__(self) -> str:
        return f"HalfInteger({self._twice})"
