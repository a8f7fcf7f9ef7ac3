"""Mixed-radix arithmetic on a bounded Vilenkin group.

A bounded Vilenkin group is the direct product of cyclic groups Z_{m_k}.
Points are digit vectors, frequencies are non-negative integers written in
the mixed-radix number system with scales M_0 = 1, M_{k+1} = m_k M_k.

Phases of characters are accumulated as exact integers modulo
L = lcm(m_0, m_1, ...) and converted to a complex number once, through a
root-of-unity table that is exact at the quarter points. For the Walsh case
this means every character value is exactly +1 or -1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "RadixSequence",
    "GroupPoint",
    "VilenkinInterval",
    "SpectralIndex",
    "IndexLike",
    "as_index",
    "scale",
    "to_digits",
    "from_digits",
    "oplus",
    "digit_complement",
    "group_add",
    "group_negate",
    "rademacher",
    "character",
]


def _root_table(order: int) -> tuple[complex, ...]:
    roots = []
    for t in range(order):
        if 4 * t % order == 0:
            roots.append((1 + 0j, 1j, -1 + 0j, -1j)[4 * t // order])
        else:
            roots.append(cmath.exp(2j * math.pi * t / order))
    return tuple(roots)


@dataclass(frozen=True)
class RadixSequence:
    """Generating sequence m = (m_0, m_1, ...) stored as ``prefix`` + repeating ``period``.

    ``m_k = prefix[k]`` for ``k < len(prefix)``, afterwards the period repeats.
    """

    period: tuple[int, ...] = (2,)
    prefix: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "period", tuple(int(m) for m in self.period))
        object.__setattr__(self, "prefix", tuple(int(m) for m in self.prefix))
        if not self.period:
            raise ValueError("period must contain at least one radix")
        bad = [m for m in self.prefix + self.period if m < 2]
        if bad:
            raise ValueError(f"every radix must be >= 2, got {bad}")

    @classmethod
    def walsh(cls) -> "RadixSequence":
        return cls(period=(2,))

    @classmethod
    def constant(cls, m: int) -> "RadixSequence":
        return cls(period=(m,))

    @property
    def bound(self) -> int:
        return max(self.prefix + self.period)

    @property
    def is_walsh(self) -> bool:
        return self.bound == 2

    @cached_property
    def phase_modulus(self) -> int:
        """lcm of all radices; every character phase lives in (1/L)Z/Z."""
        return math.lcm(*(self.prefix + self.period))

    @cached_property
    def roots(self) -> tuple[complex, ...]:
        return _root_table(self.phase_modulus)

    @cached_property
    def _prefix_products(self) -> tuple[int, ...]:
        out = [1]
        for m in self.prefix:
            out.append(out[-1] * m)
        return tuple(out)

    @cached_property
    def _period_products(self) -> tuple[int, ...]:
        out = [1]
        for m in self.period:
            out.append(out[-1] * m)
        return tuple(out)

    def __getitem__(self, k: int) -> int:
        if k < 0:
            raise IndexError("radix positions are non-negative")
        if k < len(self.prefix):
            return self.prefix[k]
        return self.period[(k - len(self.prefix)) % len(self.period)]

    def radices(self, n: int) -> tuple[int, ...]:
        """First ``n`` radices m_0, ..., m_{n-1}."""
        return tuple(self[k] for k in range(n))

    def scale(self, k: int) -> int:
        """M_k exactly."""
        if k < 0:
            raise ValueError("scale index must be non-negative")
        if k <= len(self.prefix):
            return self._prefix_products[k]
        q, r = divmod(k - len(self.prefix), len(self.period))
        return self._prefix_products[-1] * self._period_products[-1] ** q * self._period_products[r]

    def level_of(self, size: int) -> int:
        """The N with M_N == size, or ValueError."""
        k, M = 0, 1
        while M < size:
            M *= self[k]
            k += 1
        if M != size:
            raise ValueError(f"{size} is not a scale M_N of this radix sequence")
        return k

    def measure(self, depth: int) -> Fraction:
        return Fraction(1, self.scale(depth))

    def index(self, n: "IndexLike") -> "SpectralIndex":
        return as_index(self, n)

    def to_json(self) -> dict:
        return {"prefix": list(self.prefix), "period": list(self.period)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "RadixSequence":
        unknown = set(obj) - {"prefix", "period"}
        if unknown:
            raise ValueError(f"unknown radix fields: {sorted(unknown)}")
        return cls(period=tuple(obj["period"]), prefix=tuple(obj.get("prefix", ())))


class SpectralIndex:
    """A frequency n together with its sparse mixed-radix digit view.

    The digit view (``digits``: sorted ``(position, digit)`` pairs, nonzero
    digits only) is what character evaluation reads, so the cost of
    evaluating psi_n does not depend on the size of n.
    """

    __slots__ = ("value", "digits", "radix")

    def __init__(self, value: int, digits: Sequence[tuple[int, int]], radix: RadixSequence):
        self.value = value
        self.digits = tuple(digits)
        self.radix = radix

    @classmethod
    def from_int(cls, n: int, radix: RadixSequence) -> "SpectralIndex":
        return cls(int(n), to_digits(radix, n), radix)

    @classmethod
    def from_digit_map(cls, digits: Mapping[int, int], radix: RadixSequence) -> "SpectralIndex":
        return cls(from_digits(radix, digits), _canonical(radix, digits), radix)

    @property
    def digit_map(self) -> dict[int, int]:
        return dict(self.digits)

    @property
    def top(self) -> int:
        """Position of the highest nonzero digit (-1 for zero)."""
        return self.digits[-1][0] if self.digits else -1

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, SpectralIndex):
            return self.value == other.value and self.radix == other.radix
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        return self.value < int(other)

    def __le__(self, other):
        return self.value <= int(other)

    def __gt__(self, other):
        return self.value > int(other)

    def __ge__(self, other):
        return self.value >= int(other)

    def __repr__(self):
        return f"SpectralIndex({self.value})"

    def __str__(self):
        return str(self.value)


IndexLike = Union[int, SpectralIndex]


def as_index(radix: RadixSequence, n: IndexLike) -> SpectralIndex:
    if isinstance(n, SpectralIndex):
        if n.radix != radix:
            raise ValueError("index belongs to a different radix sequence")
        return n
    return SpectralIndex.from_int(int(n), radix)


def _canonical(radix: RadixSequence, digits: Mapping[int, int]) -> tuple[tuple[int, int], ...]:
    out = []
    for pos, d in sorted(digits.items()):
        if not 0 <= d < radix[pos]:
            raise ValueError(f"digit {d} out of range at position {pos} (radix {radix[pos]})")
        if d:
            out.append((pos, d))
    return tuple(out)


def scale(radix: RadixSequence, k: int) -> int:
    return radix.scale(k)


def to_digits(radix: RadixSequence, n: int) -> tuple[tuple[int, int], ...]:
    """Sparse digit expansion ``n = sum n_j M_j`` as ``(j, n_j)`` pairs with n_j != 0."""
    n = int(n)
    if n < 0:
        raise ValueError("only non-negative integers have a digit expansion")
    out = []
    pos = 0
    while n:
        n, d = divmod(n, radix[pos])
        if d:
            out.append((pos, d))
        pos += 1
    return tuple(out)


def from_digits(radix: RadixSequence, digits: Union[Mapping[int, int], Iterable[tuple[int, int]]]) -> int:
    items = digits.items() if isinstance(digits, Mapping) else digits
    total = 0
    for pos, d in items:
        if not 0 <= d < radix[pos]:
            raise ValueError(f"digit {d} out of range at position {pos}")
        total += d * radix.scale(pos)
    return total


def oplus(radix: RadixSequence, n: IndexLike, k: IndexLike) -> SpectralIndex:
    """Digitwise sum modulo m_j."""
    a = as_index(radix, n).digit_map
    for pos, d in as_index(radix, k).digits:
        a[pos] = (a.get(pos, 0) + d) % radix[pos]
    return SpectralIndex.from_digit_map(a, radix)


def digit_complement(radix: RadixSequence, n: IndexLike) -> SpectralIndex:
    """The index n* with n ⊕ n* = 0, i.e. psi_{n*} = conj(psi_n)."""
    return SpectralIndex.from_digit_map(
        {pos: radix[pos] - d for pos, d in as_index(radix, n).digits}, radix
    )


@dataclass(frozen=True)
class GroupPoint:
    """Truncated group element; digits past ``level`` are 0."""

    radix: RadixSequence
    digits: tuple[int, ...] = field(default=())

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        object.__setattr__(self, "digits", digits)
        for k, d in enumerate(digits):
            if not 0 <= d < self.radix[k]:
                raise ValueError(f"digit {d} out of range at position {k} (radix {self.radix[k]})")

    @classmethod
    def zero(cls, radix: RadixSequence, level: int = 0) -> "GroupPoint":
        return cls(radix, (0,) * level)

    @classmethod
    def from_cell(cls, radix: RadixSequence, t: int, level: int) -> "GroupPoint":
        """The point whose first ``level`` digits are the mixed-radix digits of cell ``t``."""
        digits = []
        for k in range(level):
            t, d = divmod(t, radix[k])
            digits.append(d)
        if t:
            raise ValueError("cell index exceeds M_level")
        return cls(radix, tuple(digits))

    @property
    def level(self) -> int:
        return len(self.digits)

    def digit(self, k: int) -> int:
        return self.digits[k] if k < len(self.digits) else 0

    def padded(self, level: int) -> tuple[int, ...]:
        return self.digits[:level] + (0,) * max(0, level - len(self.digits))

    def cell(self, level: int) -> int:
        """Canonical cell index of this point at ``level`` (inverse of ``from_cell``)."""
        t = 0
        for k in reversed(range(level)):
            t = t * self.radix[k] + self.digit(k)
        return t

    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        return group_add(self, other)

    def __neg__(self) -> "GroupPoint":
        return group_negate(self)


def group_add(x: GroupPoint, y: GroupPoint) -> GroupPoint:
    if x.radix != y.radix:
        raise ValueError("points belong to different groups")
    n = max(x.level, y.level)
    return GroupPoint(x.radix, tuple((x.digit(k) + y.digit(k)) % x.radix[k] for k in range(n)))


def group_negate(x: GroupPoint) -> GroupPoint:
    return GroupPoint(x.radix, tuple(-d % x.radix[k] for k, d in enumerate(x.digits)))


@dataclass(frozen=True)
class VilenkinInterval:
    """The cylinder I_n(y): points agreeing with ``anchor`` in the first ``depth`` digits."""

    anchor: GroupPoint
    depth: int

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        # canonical anchor: exactly `depth` digits
        object.__setattr__(self, "anchor", GroupPoint(self.anchor.radix, self.anchor.padded(self.depth)))

    @property
    def radix(self) -> RadixSequence:
        return self.anchor.radix

    @property
    def measure(self) -> Fraction:
        return Fraction(1, self.radix.scale(self.depth))

    def contains(self, x: GroupPoint) -> bool:
        return all(x.digit(k) == d for k, d in enumerate(self.anchor.digits))

    def __contains__(self, x: GroupPoint) -> bool:
        return self.contains(x)

    def includes(self, other: "VilenkinInterval") -> bool:
        """True when ``other`` is a subset of this interval."""
        return other.depth >= self.depth and other.anchor.digits[: self.depth] == self.anchor.digits

    def to_json(self) -> dict:
        return {"anchor": list(self.anchor.digits), "depth": self.depth}


def rademacher(k: int, x: GroupPoint) -> complex:
    """r_k(x) = exp(2 pi i x_k / m_k)."""
    radix = x.radix
    L = radix.phase_modulus
    return radix.roots[x.digit(k) * (L // radix[k]) % L]


def character(n: IndexLike, x: GroupPoint) -> complex:
    """psi_n(x), the product of r_k(x)^{n_k} over the nonzero digits of n."""
    radix = x.radix
    L = radix.phase_modulus
    phase = 0
    for pos, d in as_index(radix, n).digits:
        if pos < len(x.digits):
            m = radix[pos]
            phase += (d * x.digits[pos] % m) * (L // m)
    return radix.roots[phase % L]
