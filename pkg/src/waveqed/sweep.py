"""Grid sweeps of the interferometer closed form, written out as CSV."""

from __future__ import annotations

import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularDenominator
from .interferometer import InterferometerPoint, closed_form

AXIS_NAMES = ("phi", "theta", "re_gamma", "im_gamma")
DEFAULT_POINT = {"phi": 0.0, "theta": math.pi / 2, "re_gamma": 1.0, "im_gamma": 0.0}
OUTPUTS = ("t1", "t2", "r1", "r2")

# below this many points a process pool costs more than it saves
PARALLEL_MIN_POINTS = 4096


class SweepError(ValueError):
    pass


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise SweepError(f"unknown axis {self.name!r}; expected one of {', '.join(AXIS_NAMES)}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise SweepError(f"axis {self.name}: bounds must be finite")
        degenerate = self.steps == 1 and self.start == self.stop
        if not degenerate:
            if self.steps < 2:
                raise SweepError(f"axis {self.name}: steps must be >= 2")
            if not self.start < self.stop:
                raise SweepError(f"axis {self.name}: 'from' must be < 'to'")

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.steps)

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """``name:from:to:steps``, e.g. ``phi:0:6.283:101``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise SweepError(f"axis {text!r}: expected name:from:to:steps")
        name, a, b, n = parts
        try:
            return cls(name, float(a), float(b), int(n))
        except ValueError as e:
            if isinstance(e, SweepError):
                raise
            raise SweepError(f"axis {text!r}: {e}") from None


@dataclass(frozen=True)
class SweepSpec:
    axis1: Axis
    axis2: Axis | None = None
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise SweepError(f"duplicate axis name {self.axis1.name!r}")
        swept = {a.name for a in self.axes}
        for name, value in self.fixed.items():
            if name not in AXIS_NAMES:
                raise SweepError(f"unknown fixed parameter {name!r}")
            if name in swept:
                raise SweepError(f"parameter {name!r} is both swept and fixed")
            if not math.isfinite(value):
                raise SweepError(f"fixed parameter {name!r} must be finite")

    @property
    def axes(self) -> tuple[Axis, ...]:
        return (self.axis1,) if self.axis2 is None else (self.axis1, self.axis2)

    def grid(self) -> list[tuple[float, ...]]:
        """Axis values for every point, row-major with axis1 outermost."""
        v1 = self.axis1.values()
        if self.axis2 is None:
            return [(float(a),) for a in v1]
        v2 = self.axis2.values()
        return [(float(a), float(b)) for a in v1 for b in v2]

    def point(self, axis_values) -> InterferometerPoint:
        params = dict(DEFAULT_POINT)
        params.update(self.fixed)
        for axis, value in zip(self.axes, axis_values):
            params[axis.name] = value
        return InterferometerPoint(
            theta=params["theta"],
            phi=params["phi"],
            gamma=complex(params["re_gamma"], params["im_gamma"]),
        )


@dataclass(frozen=True)
class SweepRow:
    axis_values: tuple[float, ...]
    outputs: tuple[complex, ...] | None
    flux: float
    singular: bool


def _evaluate(spec: SweepSpec, axis_values) -> SweepRow:
    try:
        out = closed_form(spec.point(axis_values))
    except SingularDenominator:
        return SweepRow(tuple(axis_values), None, math.nan, True)
    return SweepRow(tuple(axis_values), (out.t1, out.t2, out.r1, out.r2), out.flux, False)


def _evaluate_chunk(args) -> list[SweepRow]:
    spec, chunk = args
    return [_evaluate(spec, v) for v in chunk]


def default_workers() -> int:
    """Worker cap from WAVEQED_WORKERS, else the number of usable CPUs."""
    env = os.environ.get("WAVEQED_WORKERS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            n = 0
        if n < 1:
            raise SweepError(f"WAVEQED_WORKERS must be a positive integer, got {env!r}")
        return n
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRow]:
    """Evaluate the closed form on every grid point, in grid order.

    Singular points are flagged in their row and never abort the sweep.
    """
    grid = spec.grid()
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(grid) < PARALLEL_MIN_POINTS:
        return [_evaluate(spec, v) for v in grid]

    n_chunks = workers * 4
    bounds = np.linspace(0, len(grid), n_chunks + 1).astype(int)
    chunks = [(spec, grid[lo:hi]) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    rows: list[SweepRow] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves submission order, so rows stay in grid order
        for part in pool.map(_evaluate_chunk, chunks):
            rows.extend(part)
    return rows


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def csv_header(two_d: bool) -> list[str]:
    cols = ["axis1"] + (["axis2"] if two_d else [])
    for name in OUTPUTS:
        cols += [f"re_{name}", f"im_{name}", f"abs_{name}"]
    return cols + ["flux", "singular"]


def format_csv(rows: list[SweepRow]) -> str:
    if not rows:
        raise SweepError("no rows to write")
    two_d = len(rows[0].axis_values) == 2
    lines = [",".join(csv_header(two_d))]
    nan = _fmt(math.nan)
    for row in rows:
        cells = [_fmt(v) for v in row.axis_values]
        if row.singular:
            cells += [nan] * (3 * len(OUTPUTS)) + [nan, "1"]
        else:
            for z in row.outputs:
                cells += [_fmt(z.real), _fmt(z.imag), _fmt(abs(z))]
            cells += [_fmt(row.flux), "0"]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_csv(rows: list[SweepRow], destination) -> None:
    """Write rows to a path, an open text stream, or '-' for stdout."""
    text = format_csv(rows)
    if destination == "-" or destination is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
