"""scikit-learn compatible front ends.

``VilenkinTransformer`` is the dense transform as a transformer (rows are
functions sampled on the level-N cells). ``FejerDivergenceConstruction``
fits the divergence construction to a finite point set and transforms
arbitrary points into their per-stage Fejer-mean gaps.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import _validation as v
from .construction import NullSetSpec, certify, run_pipeline
from .spectral import fejer_mean, forward, inverse_array, partial_sum


class VilenkinTransformer(TransformerMixin, BaseEstimator):
    """Vilenkin-Fourier coefficients of each row.

    Parameters
    ----------
    radix : RadixSequence, int, sequence of int or None
        Generating sequence; ``None`` is the Walsh case m = 2.
    """

    def __init__(self, radix=None):
        self.radix = radix

    def fit(self, X, y=None):
        self.radix_ = v.check_radix(self.radix)
        X, self.level_ = v.check_samples(X, self.radix_)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "level_")
        X, level = v.check_samples(X, self.radix_)
        if level != self.level_:
            raise ValueError(f"fitted on level {self.level_}, got rows of level {level}")
        return forward(X, self.radix_)

    def inverse_transform(self, X):
        check_is_fitted(self, "level_")
        X, level = v.check_samples(X, self.radix_)
        if level != self.level_:
            raise ValueError(f"fitted on level {self.level_}, got rows of level {level}")
        return inverse_array(X, self.radix_)


class FejerDivergenceConstruction(BaseEstimator):
    """Builds f in L_p whose Fejer means fail to converge on the fitted points.

    After ``fit(E)``: ``cover_``, ``polynomials_``, ``plan_``, ``spectrum_``
    and ``reports_`` hold the construction; ``certificate_failures_`` is
    empty when every certificate holds.
    """

    def __init__(self, radix=None, stages=2, p=1.0):
        self.radix = radix
        self.stages = stages
        self.p = p

    def fit(self, X, y=None):
        radix = v.check_radix(self.radix)
        rules = v.check_point_rules(X)
        p = v.check_exponent(self.p)
        spec = NullSetSpec(radix, tuple(rules), v.check_stage_count(self.stages))
        result = run_pipeline(spec)
        self.radix_ = radix
        self.result_ = result
        self.cover_ = result.cover
        self.polynomials_ = result.polys
        self.plan_ = result.plan
        self.spectrum_ = result.spectrum
        self.reports_ = result.reports
        self.certificate_failures_ = certify(result, ps=sorted({1.0, 2.0, 4.0, p}))
        return self

    def _points(self, X):
        check_is_fitted(self, "result_")
        rules = v.check_point_rules(X)
        return v.as_points(rules, self.radix_, self.result_.point_level)

    def transform(self, X):
        """Array (n_points, stages) of |sigma_{n_hi} f(x) - sigma_{n_lo} f(x)|."""
        points = self._points(X)
        plan = self.plan_
        out = []
        for x in points:
            out.append([
                abs(fejer_mean(self.spectrum_, plan.n_hi(j), x) - fejer_mean(self.spectrum_, plan.n_lo(j), x))
                for j in range(1, len(self.polynomials_))
            ])
        return np.array(out)

    def partial_sum_jumps(self, X):
        """Array (n_points, stages) of |S_hi f(x) - S_lo f(x)| across each modulated window."""
        out = []
        for x in self._points(X):
            row = []
            for j in range(1, len(self.polynomials_)):
                lo, hi = self.plan_.modulated_window(j)
                row.append(abs(partial_sum(self.spectrum_, hi, x) - partial_sum(self.spectrum_, lo, x)))
            out.append(row)
        return np.array(out)
