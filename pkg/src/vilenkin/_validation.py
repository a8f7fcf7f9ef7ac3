"""Input validation shared by the estimators and the CLI."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .construction import PointRule
from .core import GroupPoint, RadixSequence


def check_radix(radix) -> RadixSequence:
    """Coerce ``None`` (Walsh), an int, a period list or a JSON-style dict."""
    if radix is None:
        return RadixSequence.walsh()
    if isinstance(radix, RadixSequence):
        return radix
    if isinstance(radix, int):
        return RadixSequence.constant(radix)
    if isinstance(radix, dict):
        return RadixSequence.from_json(radix)
    return RadixSequence(period=tuple(radix))


def check_samples(X, radix: RadixSequence) -> tuple[np.ndarray, int]:
    """2-D complex array whose row length is a scale M_N; returns (X, N)."""
    X = np.asarray(X, dtype=complex)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D array of samples, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("samples contain NaN or infinity")
    return X, radix.level_of(X.shape[1])


def check_point_rules(X: Iterable) -> list[PointRule]:
    rules = []
    for p in X:
        if isinstance(p, PointRule):
            rules.append(p)
        elif isinstance(p, GroupPoint):
            rules.append(PointRule(p.digits))
        else:
            rules.append(PointRule.from_json(p if isinstance(p, dict) else [int(d) for d in p]))
    if not rules:
        raise ValueError("at least one point is required")
    return rules


def check_stage_count(stages) -> int:
    if isinstance(stages, bool) or not isinstance(stages, (int, np.integer)) or stages < 1:
        raise ValueError(f"stages must be a positive integer, got {stages!r}")
    return int(stages)


def check_exponent(p: float) -> float:
    p = float(p)
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return p


def as_points(rules: Sequence[PointRule], radix: RadixSequence, level: int) -> list[GroupPoint]:
    return [r.point(radix, level) for r in rules]
