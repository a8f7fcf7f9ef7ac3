"""Explicit L_p function whose Fejer means diverge on a prescribed null set.

Pipeline::

    NullSetSpec --build_cover--> CoverSchedule      (intervals I_k, blocks n_j)
                --flat_polynomial per block--> P_0, ..., P_J   (fixes alphas)
                --select_exponents--> ExponentPlan  (betas)
                --assemble--> f = sum_{j>=1} psi_{M_beta_{j+1}} P_j
                --divergence_gap per stage/point--> DivergenceReport

A finite set of points stands in for the null set E. Stages are numbered
so that ``stages = J`` produces J divergence stages j = 1..J; the cover
therefore holds J + 1 blocks A_0..A_J, P_0 only fixes alpha_1 and is not
part of f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import (
    GroupPoint,
    IndexLike,
    RadixSequence,
    SpectralIndex,
    VilenkinInterval,
    as_index,
    character,
    oplus,
)
from .spectral import (
    PRUNE_TOL,
    SparseSpectrum,
    fejer_mean,
    lp_norm,
    partial_sum,
    phase_table,
)

__all__ = [
    "ConstructionError",
    "CoverError",
    "ExponentError",
    "CertificateError",
    "PointRule",
    "NullSetSpec",
    "CoverSchedule",
    "FlatPolynomial",
    "ExponentPlan",
    "DivergenceReport",
    "ConstructionResult",
    "build_cover",
    "select_blocks",
    "merge_intervals",
    "indicator_spectrum",
    "flat_polynomial",
    "chain_holds",
    "next_beta",
    "select_exponents",
    "assemble",
    "coefficient_case_split",
    "divergence_gap",
    "run_pipeline",
    "certify",
    "verify_divergence",
]

MAX_DEPTH = 4096


class ConstructionError(ValueError):
    """A pipeline stage could not produce its output; ``stage`` names it."""

    def __init__(self, message: str, stage: str = ""):
        super().__init__(f"[{stage}] {message}" if stage else message)
        self.stage = stage


class CoverError(ConstructionError):
    def __init__(self, message: str):
        super().__init__(message, "cover")


class ExponentError(ConstructionError):
    def __init__(self, message: str):
        super().__init__(message, "exponents")


class CertificateError(ConstructionError):
    def __init__(self, failures: Sequence[str]):
        super().__init__("; ".join(failures), "certificate")
        self.failures = list(failures)


@dataclass(frozen=True)
class PointRule:
    """Eventually periodic digit sequence: ``prefix`` then ``period`` forever (zeros if empty)."""

    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(d) for d in self.prefix))
        object.__setattr__(self, "period", tuple(int(d) for d in self.period))
        if any(d < 0 for d in self.prefix + self.period):
            raise ValueError("digits must be non-negative")

    def digit(self, k: int) -> int:
        if k < len(self.prefix):
            return self.prefix[k]
        if not self.period:
            return 0
        return self.period[(k - len(self.prefix)) % len(self.period)]

    def digits(self, level: int) -> tuple[int, ...]:
        return tuple(self.digit(k) for k in range(level))

    def point(self, radix: RadixSequence, level: int) -> GroupPoint:
        return GroupPoint(radix, self.digits(level))

    def horizon(self, other_period: int = 1) -> int:
        """Number of leading digits after which the sequence (jointly with a period) repeats."""
        return len(self.prefix) + math.lcm(max(len(self.period), 1), other_period)

    def to_json(self):
        if not self.period:
            return list(self.prefix)
        return {"prefix": list(self.prefix), "period": list(self.period)}

    @classmethod
    def from_json(cls, obj) -> "PointRule":
        if isinstance(obj, Mapping):
            unknown = set(obj) - {"prefix", "period"}
            if unknown:
                raise ValueError(f"unknown point fields: {sorted(unknown)}")
            return cls(tuple(obj.get("prefix", ())), tuple(obj.get("period", ())))
        return cls(tuple(obj))


@dataclass(frozen=True)
class NullSetSpec:
    radix: RadixSequence
    points: tuple[PointRule, ...]
    stages: int

    def __post_init__(self):
        pts = tuple(p if isinstance(p, PointRule) else PointRule.from_json(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if self.stages < 1:
            raise ValueError("the horizon J must be at least 1")
        for i, p in enumerate(pts):
            n = len(self.radix.prefix) + p.horizon(len(self.radix.period))
            for k in range(n):
                if p.digit(k) >= self.radix[k]:
                    raise ValueError(f"point {i}: digit {p.digit(k)} at position {k} exceeds radix {self.radix[k]}")
        for i in range(len(pts)):
            for j in range(i):
                n = max(len(pts[i].prefix), len(pts[j].prefix)) + math.lcm(
                    max(len(pts[i].period), 1), max(len(pts[j].period), 1)
                )
                if pts[i].digits(n) == pts[j].digits(n):
                    raise ValueError(f"points {j} and {i} are the same digit sequence")

    def contains(self, rule: PointRule) -> int | None:
        """Index of ``rule`` in E, or None."""
        for i, p in enumerate(self.points):
            n = max(len(p.prefix), len(rule.prefix)) + math.lcm(max(len(p.period), 1), max(len(rule.period), 1))
            if p.digits(n) == rule.digits(n):
                return i
        return None


@dataclass(frozen=True)
class CoverSchedule:
    """Intervals I_0, I_1, ... grouped into blocks A_j = I_{n_j} u ... u I_{n_{j+1}-1}."""

    intervals: tuple[VilenkinInterval, ...]
    blocks: tuple[int, ...]

    @property
    def radix(self) -> RadixSequence:
        return self.intervals[0].radix

    @property
    def n_blocks(self) -> int:
        return len(self.blocks) - 1

    def block(self, j: int) -> tuple[VilenkinInterval, ...]:
        return self.intervals[self.blocks[j] : self.blocks[j + 1]]

    def total_measure(self) -> Fraction:
        return sum((I.measure for I in self.intervals), Fraction(0))

    def tail(self, start: int) -> Fraction:
        return sum((I.measure for I in self.intervals[start:]), Fraction(0))

    def block_measure(self, j: int) -> Fraction:
        """mu(A_j), after merging overlapping intervals."""
        return sum((I.measure for I in merge_intervals(self.block(j))), Fraction(0))

    def check(self, points: Sequence[PointRule] = ()) -> list[str]:
        """Violated invariants, as messages (empty when valid)."""
        bad = []
        radix = self.radix
        if self.total_measure() >= 1:
            bad.append(f"total cover measure {self.total_measure()} is not < 1")
        if list(self.blocks) != sorted(set(self.blocks)) or self.blocks[0] != 0 or self.blocks[-1] != len(self.intervals):
            bad.append(f"blocks {self.blocks} are not strictly increasing from 0 to {len(self.intervals)}")
            return bad
        for j in range(self.n_blocks):
            if self.tail(self.blocks[j]) >= Fraction(1, radix.scale(j)):
                bad.append(f"tail condition fails at block {j}")
            for i, p in enumerate(points):
                x = p.point(radix, max(I.depth for I in self.block(j)))
                if not any(I.contains(x) for I in self.block(j)):
                    bad.append(f"point {i} not covered by block {j}")
        return bad

    def to_json(self) -> dict:
        return {"intervals": [I.to_json() for I in self.intervals], "blocks": list(self.blocks)}

    @classmethod
    def from_json(cls, obj: Mapping, radix: RadixSequence) -> "CoverSchedule":
        intervals = tuple(VilenkinInterval(GroupPoint(radix, tuple(I["anchor"])), int(I["depth"])) for I in obj["intervals"])
        return cls(intervals, tuple(int(b) for b in obj["blocks"]))


def select_blocks(
    measures: Sequence[Fraction],
    radix: RadixSequence,
    n_blocks: int,
    candidates: Iterable[int] | None = None,
) -> tuple[int, ...]:
    """Greedy block boundaries n_0 = 0 < n_1 < ... < n_{n_blocks} = len(measures).

    Each n_j (1 <= j < n_blocks) is the smallest allowed cut above n_{j-1}
    whose tail sum is below 1/M_j; allowed cuts default to every position.
    """
    measures = [Fraction(m) for m in measures]
    total = len(measures)
    tails = [Fraction(0)] * (total + 1)
    for i in reversed(range(total)):
        tails[i] = tails[i + 1] + measures[i]
    if total == 0:
        raise CoverError("no intervals to split into blocks")
    if tails[0] >= 1:
        raise CoverError(f"cover measure {tails[0]} is not < 1")
    cuts = sorted(set(range(1, total)) if candidates is None else {c for c in candidates if 0 < c < total})
    blocks = [0]
    for j in range(1, n_blocks):
        bound = Fraction(1, radix.scale(j))
        nxt = next((c for c in cuts if c > blocks[-1] and tails[c] < bound), None)
        if nxt is None:
            raise CoverError(f"no cut leaves a non-empty tail below 1/M_{j} for block {j}")
        blocks.append(nxt)
    blocks.append(total)
    return tuple(blocks)


def _stage_intervals(spec: NullSetSpec, depth: int) -> list[VilenkinInterval]:
    seen: dict[tuple[int, ...], VilenkinInterval] = {}
    for p in spec.points:
        I = VilenkinInterval(p.point(spec.radix, depth), depth)
        seen.setdefault(I.anchor.digits, I)
    return list(seen.values())


def build_cover(spec: NullSetSpec) -> CoverSchedule:
    """Cover E once per block, with the smallest depths meeting the tail conditions.

    Depths are chosen from the last block backwards: d_j is the least depth
    for which mu(block j) + tail(j+1) < 1/M_j, evaluated exactly.
    """
    if not spec.points:
        raise CoverError("the null set is empty; there is nothing to cover")
    radix = spec.radix
    n_blocks = spec.stages + 1
    stage_lists: list[list[VilenkinInterval]] = [[] for _ in range(n_blocks)]
    tail = Fraction(0)
    for j in reversed(range(n_blocks)):
        bound = Fraction(1, radix.scale(j))
        for d in range(1, MAX_DEPTH):
            cand = _stage_intervals(spec, d)
            mass = sum((I.measure for I in cand), Fraction(0))
            if mass + tail < bound:
                break
        else:
            raise CoverError(f"no depth below {MAX_DEPTH} satisfies the tail condition at block {j}")
        stage_lists[j] = cand
        tail += mass
    intervals = [I for lst in stage_lists for I in lst]
    starts, pos = [], 0
    for lst in stage_lists:
        starts.append(pos)
        pos += len(lst)
    blocks = select_blocks([I.measure for I in intervals], radix, n_blocks, candidates=starts)
    cover = CoverSchedule(tuple(intervals), blocks)
    problems = cover.check(spec.points)
    if problems:
        raise CoverError("; ".join(problems))
    return cover


def merge_intervals(intervals: Iterable[VilenkinInterval]) -> list[VilenkinInterval]:
    """Drop duplicates and intervals contained in others; the result is pairwise disjoint."""
    out: list[VilenkinInterval] = []
    for I in sorted(intervals, key=lambda I: (I.depth, I.anchor.digits)):
        if not any(J.includes(I) for J in out):
            out.append(I)
    return out


def indicator_spectrum(intervals: Sequence[VilenkinInterval]) -> dict[int, complex]:
    """Coefficients of chi_A for a disjoint union A, via chi_{I_n(y)} = D_{M_n}(. - y) / M_n."""
    coeffs: dict[int, complex] = {}
    for I in intervals:
        radix = I.radix
        M = radix.scale(I.depth)
        # conj(psi_k(y)) for k < M_n
        row = phase_table(radix, I.depth)[:, I.anchor.cell(I.depth)]
        vals = np.asarray(radix.roots)[(-row) % radix.phase_modulus] / M
        for k, v in enumerate(vals):
            coeffs[k] = coeffs.get(k, 0j) + complex(v)
    return {k: a for k, a in coeffs.items() if abs(a) >= PRUNE_TOL}


@dataclass(frozen=True)
class FlatPolynomial:
    """P = chi_A psi_s: modulus 1 on A, 0 off A, spectrum in [M_lo, M_hi)."""

    spectrum: SparseSpectrum
    support: tuple[VilenkinInterval, ...]
    shift: int
    window: tuple[int, int]  # exponents (lo, hi)
    stage: int | None = None

    @property
    def radix(self) -> RadixSequence:
        return self.spectrum.radix

    @property
    def measure(self) -> Fraction:
        return sum((I.measure for I in self.support), Fraction(0))

    def contains(self, x: GroupPoint) -> bool:
        return any(I.contains(x) for I in self.support)

    def __call__(self, x: GroupPoint) -> complex:
        return self.spectrum.evaluate(x)


def flat_polynomial(A: Iterable[VilenkinInterval], lower: int, stage: int | None = None) -> FlatPolynomial:
    """Unimodular-on-A polynomial with spectrum above M_lower."""
    support = merge_intervals(A)
    if not support:
        raise ConstructionError("cannot build a flat polynomial on an empty set", "flat_polynomial")
    radix = support[0].radix
    top = max(lower, max(I.depth for I in support))
    s = radix.index(radix.scale(top))
    entries = {}
    for k, a in indicator_spectrum(support).items():
        key = oplus(radix, s, k)
        if key.value != s.value + k:
            raise ConstructionError(f"shift {s.value} and key {k} overlap in digits", "flat_polynomial")
        entries[key] = a
    return FlatPolynomial(SparseSpectrum(radix, entries), tuple(support), s.value, (lower, top + 1), stage)


def chain_holds(radix: RadixSequence, a0: int, b0: int, a1: int, b1: int) -> list[bool]:
    """The chain
    M_b0^3 < (M_a0 + M_b0)^3 < M_a0 + M_b1 < M_a1 + M_b1 < 2 M_b1, exactly."""
    Ma0, Mb0, Ma1, Mb1 = (radix.scale(e) for e in (a0, b0, a1, b1))
    return [
        Mb0**3 < (Ma0 + Mb0) ** 3,
        (Ma0 + Mb0) ** 3 < Ma0 + Mb1,
        Ma0 + Mb1 < Ma1 + Mb1,
        Ma1 + Mb1 < 2 * Mb1,
    ]


def next_beta(radix: RadixSequence, alpha: int, beta: int, alpha_next: int, limit: int = MAX_DEPTH) -> int:
    """Least beta' > max(beta, alpha_next) completing the chain from (alpha, beta)."""
    if not alpha < beta:
        raise ExponentError(f"need alpha < beta, got alpha={alpha}, beta={beta}")
    if not alpha < alpha_next:
        raise ExponentError(f"alphas must increase, got {alpha} then {alpha_next}")
    for b in range(max(beta, alpha_next) + 1, limit):
        if all(chain_holds(radix, alpha, beta, alpha_next, b)):
            return b
    raise ExponentError(f"no beta below {limit} satisfies the chain after alpha={alpha}, beta={beta}")


@dataclass(frozen=True)
class ExponentPlan:
    radix: RadixSequence
    alphas: tuple[int, ...]
    betas: tuple[int, ...]

    def check(self) -> list[str]:
        bad = []
        if len(self.alphas) != len(self.betas) or not self.alphas:
            return [f"alphas/betas length mismatch ({len(self.alphas)} vs {len(self.betas)})"]
        if self.alphas[0] != 0:
            bad.append("alpha_0 must be 0")
        for j, (a, b) in enumerate(zip(self.alphas, self.betas)):
            if not a < b:
                bad.append(f"alpha_{j}={a} is not < beta_{j}={b}")
        for j in range(len(self.alphas) - 1):
            if not (self.alphas[j] < self.alphas[j + 1] and self.betas[j] < self.betas[j + 1]):
                bad.append(f"exponents do not increase at {j}")
            for i, ok in enumerate(chain_holds(self.radix, self.alphas[j], self.betas[j], self.alphas[j + 1], self.betas[j + 1])):
                if not ok:
                    bad.append(f"chain comparison {i + 1} fails at j={j}")
        return bad

    def M_alpha(self, j: int) -> int:
        return self.radix.scale(self.alphas[j])

    def M_beta(self, j: int) -> int:
        return self.radix.scale(self.betas[j])

    def modulated_window(self, l: int) -> tuple[int, int]:
        """[M_beta_{l+1} + M_alpha_l, M_beta_{l+1} + M_alpha_{l+1})."""
        return self.M_beta(l + 1) + self.M_alpha(l), self.M_beta(l + 1) + self.M_alpha(l + 1)

    def n_lo(self, j: int) -> int:
        return self.M_alpha(j) + self.M_beta(j + 1)

    def n_hi(self, j: int) -> int:
        return (self.M_alpha(j + 1) + self.M_beta(j + 1)) ** 3

    def to_json(self) -> dict:
        return {"alphas": list(self.alphas), "betas": list(self.betas)}


def select_exponents(alphas: Sequence[int], radix: RadixSequence, beta0: int | None = None) -> ExponentPlan:
    """Greedy betas: beta_0 = alpha_0 + 1, then each beta_{j+1} minimal for the chain."""
    alphas = tuple(int(a) for a in alphas)
    if not alphas:
        raise ExponentError("no alphas given")
    betas = [alphas[0] + 1 if beta0 is None else int(beta0)]
    for j in range(len(alphas) - 1):
        betas.append(next_beta(radix, alphas[j], betas[j], alphas[j + 1]))
    plan = ExponentPlan(radix, alphas, tuple(betas))
    problems = plan.check()
    if problems:
        raise ExponentError("; ".join(problems))
    return plan


def _stage_polys(polys: Sequence[FlatPolynomial]) -> range:
    return range(1, len(polys))


def assemble(plan: ExponentPlan, polys: Sequence[FlatPolynomial]) -> SparseSpectrum:
    """Spectrum of f = sum_{l>=1} psi_{M_beta_{l+1}} P_l; ``polys[l]`` is P_l."""
    radix = plan.radix
    if len(plan.alphas) < len(polys) + 1:
        raise ConstructionError("plan is too short for the given polynomials", "assemble")
    windows = []
    entries: dict[SpectralIndex, complex] = {}
    for l in _stage_polys(polys):
        P = polys[l]
        shift = radix.index(plan.M_beta(l + 1))
        lo, hi = plan.modulated_window(l)
        for k, a in P.spectrum.items():
            key = oplus(radix, shift, k)
            if key.value != shift.value + k.value:
                raise ConstructionError(f"stage {l}: modulation overlaps digits of key {k.value}", "assemble")
            if not lo <= key.value < hi:
                raise ConstructionError(f"stage {l}: key {key.value} outside its window", "assemble")
            entries[key] = a
        windows.append((lo, hi, l))
    windows.sort()
    for (lo0, hi0, l0), (lo1, hi1, l1) in zip(windows, windows[1:]):
        if hi0 > lo1:
            raise ConstructionError(f"windows of stages {l0} and {l1} collide", "assemble")
    return SparseSpectrum(radix, entries)


def coefficient_case_split(k: IndexLike, plan: ExponentPlan, polys: Sequence[FlatPolynomial]) -> complex:
    """f^(k) by the closed form: c^l_{k - M_beta_{l+1}} inside stage l's window, else 0."""
    k = int(k)
    for l in _stage_polys(polys):
        lo, hi = plan.modulated_window(l)
        if lo <= k < hi:
            return polys[l].spectrum.get(k - plan.M_beta(l + 1), 0j)
    return 0j


@dataclass(frozen=True)
class DivergenceReport:
    stage: int
    point: int
    n_lo: int
    n_hi: int
    term_I: complex
    term_II: complex
    term_III: complex
    bound_II: float
    bound_III: float
    sigma_lo: complex
    sigma_hi: complex
    partial_sum_gap: complex
    in_block: bool

    @property
    def gap(self) -> float:
        return abs(self.sigma_hi - self.sigma_lo)

    @property
    def residual(self) -> float:
        return abs((self.sigma_hi - self.sigma_lo) - (self.term_I - self.term_II + self.term_III))

    @property
    def lower_bound(self) -> float:
        return 1.0 - self.bound_II - self.bound_III

    def row(self) -> dict:
        return {
            "stage": self.stage,
            "point": self.point,
            "n_lo": str(self.n_lo),
            "n_hi": str(self.n_hi),
            "abs_I": repr(abs(self.term_I)),
            "abs_II": repr(abs(self.term_II)),
            "abs_III": repr(abs(self.term_III)),
            "bound_II": repr(self.bound_II),
            "bound_III": repr(self.bound_III),
            "gap": repr(self.gap),
        }


def _rounding_slack(bound: float, n_terms: int) -> float:
    # the bound is attained when all phases align; allow for float accumulation
    # over n_terms products of a weight, an amplitude and a character
    return bound * (1 + 4 * (n_terms + 2) * 2.0**-53)


def divergence_gap(
    f: SparseSpectrum,
    plan: ExponentPlan,
    polys: Sequence[FlatPolynomial],
    j: int,
    x: GroupPoint,
    point: int = -1,
) -> DivergenceReport:
    """sigma_{n_hi} f(x) - sigma_{n_lo} f(x) split as I - II + III, with tail bounds.

    The sigma values come from :func:`fejer_mean` on ``f`` and are independent
    of the three terms, which are summed from the per-stage polynomials.
    """
    if not 1 <= j < len(polys):
        raise ConstructionError(f"stage {j} outside 1..{len(polys) - 1}", "divergence_gap")
    radix = plan.radix
    n_lo, n_hi = plan.n_lo(j), plan.n_hi(j)
    shift = plan.M_beta(j + 1)

    term_I = character(radix.index(shift), x) * polys[j](x)
    term_II = 0j
    l1_j, kmax_j = 0.0, 0
    lo_j, hi_j = plan.modulated_window(j)
    for key in f.between(lo_j, hi_j):
        a = f[key]
        term_II += (key.value / n_hi) * a * character(key, x)
        l1_j += abs(a)
        kmax_j = max(kmax_j, key.value)
    term_III = 0j
    l1_prev, kmax_prev = 0.0, 0
    num = n_hi - n_lo
    den = n_lo * n_hi
    n_prev = 0
    for l in range(1, j):
        lo, hi = plan.modulated_window(l)
        n_prev += len(f.between(lo, hi))
        for key in f.between(lo, hi):
            a = f[key]
            term_III += ((key.value * num) / den) * a * character(key, x)
            l1_prev += abs(a)
            kmax_prev = max(kmax_prev, key.value)

    bound_II = _rounding_slack(l1_j * (kmax_j / n_hi), len(f.between(lo_j, hi_j)))
    bound_III = _rounding_slack(l1_prev * ((kmax_prev * num) / den), n_prev)
    return DivergenceReport(
        stage=j,
        point=point,
        n_lo=n_lo,
        n_hi=n_hi,
        term_I=term_I,
        term_II=term_II,
        term_III=term_III,
        bound_II=bound_II,
        bound_III=bound_III,
        sigma_lo=fejer_mean(f, n_lo, x),
        sigma_hi=fejer_mean(f, n_hi, x),
        partial_sum_gap=partial_sum(f, hi_j, x) - partial_sum(f, lo_j, x),
        in_block=polys[j].contains(x),
    )


@dataclass
class ConstructionResult:
    spec: NullSetSpec
    cover: CoverSchedule
    polys: list[FlatPolynomial]
    plan: ExponentPlan
    spectrum: SparseSpectrum
    reports: list[DivergenceReport] = field(default_factory=list)

    @property
    def eval_level(self) -> int:
        """Deepest window exponent; every P_j is exact on this level's cells."""
        return self.plan.alphas[-1]

    @property
    def point_level(self) -> int:
        """Digits needed at E's points so every key of f sees its true digit."""
        return max((k.top for k in self.spectrum), default=0) + 1

    def plan_json(self) -> dict:
        out = {"radix": self.plan.radix.to_json(), "stages": self.spec.stages}
        out.update(self.plan.to_json())
        out.update(self.cover.to_json())
        return out


def _polynomials(cover: CoverSchedule) -> list[FlatPolynomial]:
    polys = []
    lower = 0
    for j in range(cover.n_blocks):
        P = flat_polynomial(cover.block(j), lower, stage=j)
        polys.append(P)
        lower = P.window[1]
    return polys


def evaluate_reports(result: ConstructionResult) -> list[DivergenceReport]:
    level = result.point_level
    radix = result.plan.radix
    reports = []
    for i, p in enumerate(result.spec.points):
        x = p.point(radix, level)
        for j in range(1, len(result.polys)):
            reports.append(divergence_gap(result.spectrum, result.plan, result.polys, j, x, point=i))
    reports.sort(key=lambda r: (r.stage, r.point))
    return reports


def run_pipeline(spec: NullSetSpec) -> ConstructionResult:
    """cover -> blocks -> polynomials -> exponents -> assemble -> per-stage reports."""
    cover = build_cover(spec)
    polys = _polynomials(cover)
    alphas = [0] + [P.window[1] for P in polys]
    plan = select_exponents(alphas, spec.radix)
    spectrum = assemble(plan, polys)
    result = ConstructionResult(spec, cover, polys, plan, spectrum)
    result.reports = evaluate_reports(result)
    return result


def rebuild(spec: NullSetSpec, cover: CoverSchedule, plan: ExponentPlan, spectrum: SparseSpectrum | None = None) -> ConstructionResult:
    """Reconstruct a result from stored plan data (no greedy choices re-made)."""
    polys = _polynomials(cover)
    if spectrum is None:
        spectrum = assemble(plan, polys)
    result = ConstructionResult(spec, cover, polys, plan, spectrum)
    result.reports = evaluate_reports(result)
    return result


def certify(result: ConstructionResult, tol: float = 1e-9, ps: Sequence[float] = (1.0, 2.0, 4.0)) -> list[str]:
    """Every certificate the construction promises; returns failure messages."""
    failures = []
    radix = result.plan.radix
    failures += [f"cover: {m}" for m in result.cover.check(result.spec.points)]
    failures += [f"plan: {m}" for m in result.plan.check()]
    alphas = [0] + [P.window[1] for P in result.polys]
    if list(result.plan.alphas) != alphas:
        failures.append(f"plan: alphas {list(result.plan.alphas)} do not match polynomial windows {alphas}")
        return failures
    level = result.eval_level
    for j, P in enumerate(result.polys):
        if P.measure > Fraction(1, radix.scale(j)):
            failures.append(f"stage {j}: mu(A_j) = {P.measure} exceeds 1/M_{j}")
        lo, hi = radix.scale(P.window[0]), radix.scale(P.window[1])
        if any(not lo <= k.value < hi for k in P.spectrum):
            failures.append(f"stage {j}: spectrum leaves [M_{P.window[0]}, M_{P.window[1]})")
        samples = P.spectrum.sample(level)
        inside = np.array([P.contains(x) for x in samples.points()])
        mod = np.abs(samples.values)
        if inside.any() and np.max(np.abs(mod[inside] - 1)) > tol:
            failures.append(f"stage {j}: |P_j| deviates from 1 on A_j")
        if (~inside).any() and np.max(mod[~inside]) > tol:
            failures.append(f"stage {j}: P_j does not vanish off A_j")
        for p in ps:
            if abs(lp_norm(samples, p) ** p - float(P.measure)) > tol:
                failures.append(f"stage {j}: ||P_j||_{p:g}^{p:g} != mu(A_j)")
    try:
        spectrum = assemble(result.plan, result.polys)
    except ConstructionError as exc:
        failures.append(str(exc))
    else:
        if set(spectrum) != set(result.spectrum) or any(abs(spectrum[k] - result.spectrum[k]) > tol for k in spectrum):
            failures.append("spectrum does not match the plan and polynomials")
    for r in result.reports:
        where = f"stage {r.stage}, point {r.point}"
        if not r.in_block:
            failures.append(f"{where}: point is not in A_j")
        if abs(abs(r.term_I) - 1) > tol:
            failures.append(f"{where}: |I| = {abs(r.term_I)!r}")
        if abs(r.term_II) > r.bound_II:
            failures.append(f"{where}: |II| exceeds its bound")
        if abs(r.term_III) > r.bound_III:
            failures.append(f"{where}: |III| exceeds its bound")
        if r.residual > tol:
            failures.append(f"{where}: decomposition residual {r.residual:.3g}")
        if not r.gap >= r.lower_bound:
            failures.append(f"{where}: gap {r.gap!r} below 1 - bounds {r.lower_bound!r}")
        if abs(abs(r.partial_sum_gap) - 1) > tol:
            failures.append(f"{where}: partial-sum jump {abs(r.partial_sum_gap)!r} is not 1")
    return failures


def verify_divergence(spec: NullSetSpec) -> list[DivergenceReport]:
    """Run the whole construction and raise :class:`CertificateError` unless every certificate holds."""
    result = run_pipeline(spec)
    failures = certify(result)
    if failures:
        raise CertificateError(failures)
    return result.reports
