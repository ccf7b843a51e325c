"""
Convergence tables and log-log slope fits.

A fit is emitted only when at least MIN_RESOLUTIONS points sit above the
solver floor and the errors decrease monotonically with h; otherwise the
table row is flagged and carries no slope.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import stats

logger = logging.getLogger(__name__)

MIN_RESOLUTIONS = 4
FLOOR_FACTOR = 100.0
CONFIDENCE = 0.95


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    stderr: float
    band: Tuple[float, float]
    r_value: float
    curvature: float
    points: int

    def to_dict(self) -> Dict[str, object]:
        return {
            'slope': self.slope,
            'intercept': self.intercept,
            'stderr': self.stderr,
            'band': list(self.band),
            'r_value': self.r_value,
            'curvature': self.curvature,
            'points': self.points,
        }


@dataclass(frozen=True)
class Expectation:
    target: Optional[float] = None
    tolerance: float = 0.25
    minimum: Optional[float] = None

    def accepts(self, slope: float) -> bool:
        if self.minimum is not None and slope < self.minimum:
            return False
        if self.target is not None and abs(slope - self.target) > self.tolerance:
            return False
        return True

    def describe(self) -> str:
        if self.target is not None:
            return f"{self.target:g} +/- {self.tolerance:g}"
        return f">= {self.minimum:g}"


def fit_slope(h: np.ndarray, errors: np.ndarray) -> RateFit:
    """Least-squares slope of log(error) against log(h) with its 95% band."""
    logh, loge = np.log(np.asarray(h, dtype=float)), np.log(np.asarray(errors, dtype=float))
    result = stats.linregress(logh, loge)
    n = logh.size
    half = float(stats.t.ppf(0.5 + CONFIDENCE / 2.0, n - 2) * result.stderr) if n > 2 else np.inf
    curvature = float(np.polyfit(logh, loge, 2)[0]) if n > 2 else 0.0
    return RateFit(slope=float(result.slope), intercept=float(result.intercept),
                   stderr=float(result.stderr), band=(result.slope - half, result.slope + half),
                   r_value=float(result.rvalue), curvature=curvature, points=n)


@dataclass
class ConvergenceTable:
    family: str
    label: str = ''
    floor: float = 0.0
    resolutions: List[int] = field(default_factory=list)
    h: List[float] = field(default_factory=list)
    errors: Dict[str, List[float]] = field(default_factory=dict)
    expectations: Dict[str, Expectation] = field(default_factory=dict)

    def add(self, n: int, h: float, **errors: float) -> None:
        self.resolutions.append(int(n))
        self.h.append(float(h))
        for name, value in errors.items():
            self.errors.setdefault(name, []).append(float(value))

    def expect(self, norm: str, target: Optional[float] = None, tolerance: float = 0.25,
               minimum: Optional[float] = None) -> None:
        self.expectations[norm] = Expectation(target, tolerance, minimum)

    @property
    def norms(self) -> List[str]:
        return list(self.errors)

    def _ordered(self, norm: str) -> Tuple[np.ndarray, np.ndarray]:
        h = np.asarray(self.h)
        e = np.asarray(self.errors[norm])
        order = np.argsort(-h)
        return h[order], e[order]

    def usable(self, norm: str) -> np.ndarray:
        """Mask (coarse to fine) of resolutions whose error clears the floor."""
        _, e = self._ordered(norm)
        return (e >= FLOOR_FACTOR * self.floor) & (e > 0.0) & np.isfinite(e)

    def monotone(self, norm: str) -> bool:
        _, e = self._ordered(norm)
        e = e[self.usable(norm)]
        return bool(np.all(np.diff(e) < 0.0))

    def fit(self, norm: str) -> Optional[RateFit]:
        h, e = self._ordered(norm)
        mask = self.usable(norm)
        if mask.sum() < MIN_RESOLUTIONS:
            logger.warning("[WARNING] %s/%s: only %d of %d resolutions above the floor %.1e; no fit",
                           self.label, norm, int(mask.sum()), mask.size, self.floor)
            return None
        if not self.monotone(norm):
            logger.warning("[WARNING] %s/%s: non-monotone error sequence; no fit", self.label, norm)
            return None
        return fit_slope(h[mask], e[mask])

    def flags(self, norm: str) -> List[str]:
        out = []
        mask = self.usable(norm)
        if (~mask).any():
            out.append('floor')
        if mask.sum() < MIN_RESOLUTIONS:
            out.append('too_few_points')
        if not self.monotone(norm):
            out.append('non_monotone')
        return out

    def summary(self) -> Dict[str, object]:
        report: Dict[str, object] = {'family': self.family, 'label': self.label, 'floor': self.floor,
                                     'resolutions': list(self.resolutions), 'norms': {}}
        for norm in self.norms:
            fit = self.fit(norm)
            entry: Dict[str, object] = {'fit': fit.to_dict() if fit else None, 'flags': self.flags(norm)}
            expectation = self.expectations.get(norm)
            if expectation is not None:
                entry['expected'] = expectation.describe()
                entry['passed'] = bool(fit is not None and expectation.accepts(fit.slope))
                tag = "|-- [OK]" if entry['passed'] else "|-- [X]"
                slope = f"{fit.slope:.3f}" if fit else "n/a"
                logger.info("%s %s/%s slope %s (expected %s)", tag, self.label, norm, slope,
                            expectation.describe())
            report['norms'][norm] = entry
        return report

    def rows(self) -> List[Dict[str, object]]:
        out = []
        for i, (n, h) in enumerate(zip(self.resolutions, self.h)):
            for norm in self.norms:
                out.append({'family': self.family, 'label': self.label, 'norm': norm,
                            'n': n, 'h': h, 'error': self.errors[norm][i]})
        return out
