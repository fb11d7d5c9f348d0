"""
Error-trace analytics: oscillation peaks and step-response metrics.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.signal import find_peaks


class ErrorTrace(BaseModel):
    """Error sampled once per control period, starting at ``t0``."""

    model_config = ConfigDict(frozen=True)

    dt: float = Field(gt=0.0)
    errors: Tuple[float, ...]
    t0: float = 0.0

    @classmethod
    def from_samples(cls, times: Sequence[float], errors: Sequence[float]) -> "ErrorTrace":
        """Build a trace from explicit sample times, which must be uniform."""
        if len(times) != len(errors):
            raise ValueError("times and errors differ in length")
        if len(times) < 2:
            raise ValueError("need at least two samples to infer the sampling step")
        steps = np.diff(np.asarray(times, dtype=float))
        dt = float(steps[0])
        if dt <= 0.0 or not np.allclose(steps, dt, rtol=1e-6, atol=0.0):
            raise ValueError("sample times must be strictly increasing and uniform")
        return cls(dt=dt, errors=tuple(float(e) for e in errors), t0=float(times[0]))

    def __len__(self) -> int:
        return len(self.errors)

    @property
    def values(self) -> np.ndarray:
        return np.asarray(self.errors, dtype=float)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.errors))


class OscillationAnalysis(BaseModel):
    """
    Peaks of an error trace and what they say about the loop.

    ``amplitudes[i]`` is the drop from peak ``i`` to the lowest sample before
    the next peak (or the end of the trace for the last peak).
    """

    peak_times: List[float] = Field(default_factory=list)
    peak_values: List[float] = Field(default_factory=list)
    amplitudes: List[float] = Field(default_factory=list)
    period: Optional[float] = None
    decay_ratio: Optional[float] = None
    sustained: bool = False


class ResponseMetrics(BaseModel):
    """Step-response figures; ``None`` marks a metric the trace never reaches."""

    rise_time: Optional[float] = None
    overshoot: float = 0.0
    settling_time: Optional[float] = None
    steady_state_error: float = 0.0


def analyze_oscillation(
    t: ErrorTrace,
    distance: int = 3,
    prominence: float = 0.01,
    band: Tuple[float, float] = (0.9, 1.1),
) -> OscillationAnalysis:
    """
    Find the local maxima of the error and measure their decay.

    Peaks must be at least ``distance`` samples apart and stand out by
    ``prominence`` times the largest absolute error. The decay ratio compares
    the first two amplitudes. The oscillation counts as sustained when there
    are at least three peaks and the ratios of the leading complete amplitudes
    all fall inside ``band``.
    """
    if len(t) < 3:
        raise ValueError(f"need at least 3 samples, got {len(t)}")
    e = t.values
    times = t.times
    peaks, _ = find_peaks(e, distance=distance, prominence=prominence * float(np.max(np.abs(e))))

    amplitudes = []
    for i, p in enumerate(peaks):
        end = peaks[i + 1] + 1 if i + 1 < len(peaks) else len(e)
        amplitudes.append(float(e[p] - np.min(e[p:end])))

    result = OscillationAnalysis(
        peak_times=[float(times[p]) for p in peaks],
        peak_values=[float(e[p]) for p in peaks],
        amplitudes=amplitudes,
    )
    if len(peaks) >= 2:
        result.period = float(np.mean(np.diff(times[peaks])))
        if amplitudes[0] > 0.0:
            result.decay_ratio = amplitudes[1] / amplitudes[0]
    if len(peaks) >= 3:
        complete = amplitudes[:-1]
        ratios = [b / a for a, b in zip(complete, complete[1:]) if a > 0.0][:2]
        result.sustained = bool(ratios) and all(band[0] <= r <= band[1] for r in ratios)
    return result


def response_metrics(
    t: ErrorTrace, setpoint: float, band: float = 0.02, tail: float = 0.1
) -> ResponseMetrics:
    """
    Rise time (10 to 90 percent), overshoot, settling time and steady-state
    error of the output ``setpoint - error``.

    Settling time is the time of the sample after the last one outside the
    ``band`` around the setpoint. It is ``None`` unless the output then stays
    in band for at least the final ``tail`` of the trace, so an oscillation
    that merely crosses the band near the end never counts as settled.
    Steady-state error is the mean error over the final ``tail`` of the trace.
    """
    if len(t) == 0:
        raise ValueError("empty trace")
    if setpoint == 0.0:
        raise ValueError("setpoint must be nonzero")
    e = t.values
    times = t.times
    y = (setpoint - e) / setpoint

    def first_reach(level: float) -> Optional[float]:
        hits = np.flatnonzero(y >= level)
        return float(times[hits[0]]) if hits.size else None

    t10, t90 = first_reach(0.1), first_reach(0.9)
    rise = t90 - t10 if t10 is not None and t90 is not None else None

    n_tail = max(1, int(len(e) * tail))
    outside = np.flatnonzero(np.abs(y - 1.0) > band)
    if outside.size == 0:
        settling: Optional[float] = float(times[0])
    elif len(e) - 1 - outside[-1] < n_tail:
        settling = None
    else:
        settling = float(times[outside[-1] + 1])

    return ResponseMetrics(
        rise_time=rise,
        overshoot=max(0.0, float(np.max(y)) - 1.0),
        settling_time=settling,
        steady_state_error=abs(float(np.mean(e[-n_tail:]))),
    )
