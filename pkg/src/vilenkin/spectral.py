"""Fourier analysis on the level-N truncation of a Vilenkin group.

Samples at level N are stored in canonical cell order: cell t holds the
value at the point whose first N digits are the mixed-radix digits of t.
Coefficient k of a dense spectrum is the coefficient of psi_k, k < M_N.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .core import (
    GroupPoint,
    IndexLike,
    RadixSequence,
    SpectralIndex,
    as_index,
    character,
)

__all__ = [
    "SampledFunction",
    "SparseSpectrum",
    "SummationGuardError",
    "SUMMATION_GUARD",
    "ORACLE_GUARD",
    "PRUNE_TOL",
    "phase_table",
    "character_table",
    "characters_below",
    "forward",
    "inverse_array",
    "inverse",
    "naive_forward",
    "dirichlet",
    "paley_dirichlet",
    "fejer_kernel",
    "partial_sum",
    "fejer_mean",
    "fejer_mean_oracle",
    "maximal_truncated",
    "lp_norm",
]

SUMMATION_GUARD = 10**6
ORACLE_GUARD = 10**4
PRUNE_TOL = 1e-14


class SummationGuardError(ValueError):
    """A literal kernel sum was requested past its size guard."""


@dataclass(frozen=True)
class SampledFunction:
    radix: RadixSequence
    level: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.radix.scale(self.level),):
            raise ValueError(
                f"level {self.level} needs {self.radix.scale(self.level)} samples, got shape {values.shape}"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, radix: RadixSequence, level: int, func) -> "SampledFunction":
        M = radix.scale(level)
        return cls(radix, level, [func(GroupPoint.from_cell(radix, t, level)) for t in range(M)])

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def integral(self) -> complex:
        return complex(self.values.sum() / self.size)

    def points(self) -> Iterator[GroupPoint]:
        for t in range(self.size):
            yield GroupPoint.from_cell(self.radix, t, self.level)


def _digit_matrix(radix: RadixSequence, level: int) -> np.ndarray:
    """digits[t, k] = k-th digit of cell t, shape (M_N, N)."""
    M = radix.scale(level)
    t = np.arange(M, dtype=np.int64)
    cols = []
    for k in range(level):
        m = radix[k]
        cols.append(t % m)
        t = t // m
    return np.stack(cols, axis=1) if cols else np.zeros((M, 0), dtype=np.int64)


def phase_table(radix: RadixSequence, level: int, rows: int | None = None) -> np.ndarray:
    """Integer phases P[k, t] with psi_k(x_t) = roots[P[k, t]] for k < rows, t < M_N."""
    L = radix.phase_modulus
    D = _digit_matrix(radix, level)
    K = D if rows is None else D[:rows]
    P = np.zeros((K.shape[0], D.shape[0]), dtype=np.int64)
    for k in range(level):
        m = radix[k]
        P += (np.outer(K[:, k], D[:, k]) % m) * (L // m)
    return P % L


def character_table(radix: RadixSequence, level: int) -> np.ndarray:
    """Dense matrix T[k, t] = psi_k(x_t) over the level-N truncation."""
    roots = np.asarray(radix.roots)
    return roots[phase_table(radix, level)]


def _dft_matrix(radix: RadixSequence, m: int, conjugate: bool) -> np.ndarray:
    L = radix.phase_modulus
    a = np.arange(m)
    P = (np.outer(a, a) % m) * (L // m)
    if conjugate:
        P = (-P) % L
    return np.asarray(radix.roots)[P]


def _butterflies(x: np.ndarray, radix: RadixSequence, level: int, conjugate: bool) -> np.ndarray:
    # one radix-m_k stage per digit position, decimation in time over k = 0..N-1
    lead = x.shape[:-1]
    M = x.shape[-1]
    inner = 1
    for k in range(level):
        m = radix[k]
        W = _dft_matrix(radix, m, conjugate)
        y = x.reshape(lead + (M // (inner * m), m, inner))
        x = np.einsum("ab,...cbd->...cad", W, y).reshape(lead + (M,))
        inner *= m
    return x


def forward(f: SampledFunction | np.ndarray, radix: RadixSequence | None = None) -> np.ndarray:
    """Vilenkin-Fourier coefficients c_k = (1/M_N) sum_x f(x) conj(psi_k(x)), k < M_N.

    Accepts a :class:`SampledFunction` or a raw array whose last axis has
    length M_N (``radix`` is then required). Cost is O(M_N * sum_k m_k).
    """
    if isinstance(f, SampledFunction):
        radix, values = f.radix, f.values
    else:
        if radix is None:
            raise ValueError("radix is required for raw arrays")
        values = np.asarray(f, dtype=complex)
    level = radix.level_of(values.shape[-1])
    return _butterflies(values, radix, level, conjugate=True) / values.shape[-1]


def inverse(coeffs: np.ndarray, radix: RadixSequence) -> SampledFunction:
    """Synthesis f(x) = sum_k c_k psi_k(x); adjoint-inverse of :func:`forward`."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.ndim != 1:
        raise ValueError("inverse expects a single coefficient vector")
    level = radix.level_of(coeffs.shape[0])
    return SampledFunction(radix, level, _butterflies(coeffs, radix, level, conjugate=False))


def inverse_array(coeffs: np.ndarray, radix: RadixSequence) -> np.ndarray:
    """Batched :func:`inverse` over the last axis."""
    coeffs = np.asarray(coeffs, dtype=complex)
    level = radix.level_of(coeffs.shape[-1])
    return _butterflies(coeffs, radix, level, conjugate=False)


def naive_forward(f: SampledFunction) -> np.ndarray:
    """Quadratic reference transform, summed literally cell by cell."""
    M = f.size
    out = np.zeros(M, dtype=complex)
    pts = list(f.points())
    for k in range(M):
        idx = f.radix.index(k)
        acc = 0j
        for t, x in enumerate(pts):
            acc += f.values[t] * character(idx, x).conjugate()
        out[k] = acc / M
    return out


class SparseSpectrum(Mapping):
    """Finite map frequency -> nonzero complex amplitude.

    Keys are stored as :class:`SpectralIndex`; lookups accept plain ints.
    """

    def __init__(self, radix: RadixSequence, entries: Mapping[IndexLike, complex] | Iterable = ()):
        self.radix = radix
        items = entries.items() if isinstance(entries, Mapping) else entries
        data: dict[SpectralIndex, complex] = {}
        for k, a in items:
            a = complex(a)
            if a == 0:
                continue
            key = as_index(radix, k)
            if key in data:
                raise ValueError(f"duplicate spectrum key {key.value}")
            data[key] = a
        self._order = sorted(data, key=int)
        self._values = [k.value for k in self._order]
        self._data = data

    def __getitem__(self, k):
        return self._data[k]

    def __iter__(self):
        return iter(self._order)

    def __len__(self):
        return len(self._order)

    def __repr__(self):
        return f"SparseSpectrum({len(self)} entries)"

    @property
    def support(self) -> list[SpectralIndex]:
        return list(self._order)

    def below(self, n: int) -> list[SpectralIndex]:
        """Keys strictly less than n, ascending."""
        return self._order[: bisect.bisect_left(self._values, n)]

    def between(self, lo: int, hi: int) -> list[SpectralIndex]:
        return self._order[bisect.bisect_left(self._values, lo) : bisect.bisect_left(self._values, hi)]

    def evaluate(self, x: GroupPoint) -> complex:
        return sum((a * character(k, x) for k, a in self.items()), 0j)

    def l1(self) -> float:
        return float(sum(abs(a) for a in self._data.values()))

    @classmethod
    def from_dense(cls, coeffs: Sequence[complex], radix: RadixSequence, tol: float = PRUNE_TOL) -> "SparseSpectrum":
        coeffs = np.asarray(coeffs, dtype=complex)
        return cls(radix, ((k, complex(c)) for k, c in enumerate(coeffs) if abs(c) >= tol))

    def to_dense(self, level: int) -> np.ndarray:
        M = self.radix.scale(level)
        out = np.zeros(M, dtype=complex)
        for k, a in self.items():
            if k.value >= M:
                raise ValueError(f"key {k.value} does not fit at level {level}")
            out[k.value] = a
        return out

    def sample(self, level: int) -> SampledFunction:
        return inverse(self.to_dense(level), self.radix)


def _check_guard(n: int, guard: int):
    if n > guard:
        raise SummationGuardError(f"literal sum over {n} terms exceeds guard {guard}")


def characters_below(n: int, x: GroupPoint) -> np.ndarray:
    """psi_k(x) for k = 0..n-1 as an array."""
    radix = x.radix
    L = radix.phase_modulus
    k = np.arange(n, dtype=np.int64)
    phase = np.zeros(n, dtype=np.int64)
    pos = 0
    while True:
        m = radix[pos]
        digit = k % m
        phase += (digit * x.digit(pos) % m) * (L // m)
        k = k // m
        pos += 1
        if not k.any():
            break
    return np.asarray(radix.roots)[phase % L]


def dirichlet(n: IndexLike, x: GroupPoint) -> complex:
    """D_n(x) = sum_{k<n} psi_k(x), summed literally."""
    n = int(n)
    if n < 1:
        raise ValueError("D_n is defined for n >= 1")
    _check_guard(n, SUMMATION_GUARD)
    return complex(characters_below(n, x).sum())


def paley_dirichlet(depth: int, x: GroupPoint) -> complex:
    """Closed form D_{M_n}(x) = M_n [x in I_n]."""
    if all(x.digit(k) == 0 for k in range(depth)):
        return complex(x.radix.scale(depth))
    return 0j


def fejer_kernel(n: IndexLike, x: GroupPoint) -> complex:
    """K_n(x) = sum_{k<n} (1 - k/n) psi_k(x), summed literally."""
    n = int(n)
    if n < 1:
        raise ValueError("K_n is defined for n >= 1")
    _check_guard(n, SUMMATION_GUARD)
    weights = (n - np.arange(n)) / n
    return complex((weights * characters_below(n, x)).sum())


def partial_sum(f: SparseSpectrum, n: IndexLike, x: GroupPoint) -> complex:
    """S_n f(x) = sum over spectrum keys k < n of f^(k) psi_k(x)."""
    n = int(n)
    return sum((f[k] * character(k, x) for k in f.below(n)), 0j)


def fejer_mean(f: SparseSpectrum, n: IndexLike, x: GroupPoint) -> complex:
    """sigma_n f(x) = sum over keys k < n of (1 - k/n) f^(k) psi_k(x).

    ``(n - k) / n`` is Python int true division, which is correctly rounded,
    so each weight is the exact rational rounded once however large n is.
    """
    n = int(n)
    if n < 1:
        raise ValueError("sigma_n is defined for n >= 1")
    return sum((((n - k.value) / n) * f[k] * character(k, x) for k in f.below(n)), 0j)


def fejer_mean_oracle(f: SparseSpectrum, n: int, x: GroupPoint) -> complex:
    """(1/n) sum_{k=1}^{n} S_k f(x), the literal average of partial sums."""
    n = int(n)
    if n < 1:
        raise ValueError("sigma_n is defined for n >= 1")
    _check_guard(n, ORACLE_GUARD)
    return sum((partial_sum(f, k, x) for k in range(1, n + 1)), 0j) / n


def maximal_truncated(
    f: SparseSpectrum, x: GroupPoint, indices: Sequence[IndexLike], kind: str = "fejer"
) -> float:
    """max over the given n of |sigma_n f(x)| (``kind="fejer"``) or |S_n f(x)| (``kind="partial"``)."""
    if not indices:
        raise ValueError("maximal operator needs at least one index")
    op = {"fejer": fejer_mean, "partial": partial_sum}[kind]
    return max(abs(op(f, n, x)) for n in indices)


def lp_norm(f: SampledFunction, p: float) -> float:
    if p < 1:
        raise ValueError("lp_norm needs p >= 1")
    return float(np.mean(np.abs(f.values) ** p) ** (1.0 / p))
