"""Network description: domain types, the gamma parameter, and the JSON file format.

Units are hbar = v = 1 throughout, so the photon energy equals its wavenumber k
and gamma is dimensionless.

Network file (strict, unknown keys rejected)::

    {"modes": 2, "k": 1.0,
     "qubits": [{"omega10": 1.0, "Gamma": 0.0, "g": 1.0, "gamma": [1, 0]}, ...],
     "segments": [{"lengths": [1.57, 1.57], "extra_phases": [0, 0.3]}, ...],
     "drive": {"mode": 1, "direction": "right", "amplitude": [1, 0]}}

``gamma`` on a qubit is optional and replaces the physical (omega10, Gamma, g)
triple when present. ``drive`` is optional and defaults to unit amplitude
entering mode 1 from the left, travelling right.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from .errors import ParseError, ValidationError

RIGHT = "right"
LEFT = "left"


def _finite(x: float, path: str) -> None:
    if not math.isfinite(x):
        raise ValidationError(path, f"must be finite, got {x!r}")


def _finite_complex(z: complex, path: str) -> None:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError(path, f"must be finite, got {z!r}")


@dataclass(frozen=True)
class QubitParams:
    omega10: float
    Gamma: float
    g: float
    gamma_override: complex | None = None

    def __post_init__(self):
        _finite(self.omega10, "omega10")
        _finite(self.Gamma, "Gamma")
        _finite(self.g, "g")
        if self.omega10 < 0:
            raise ValidationError("omega10", "must be >= 0")
        if self.Gamma < 0:
            raise ValidationError("Gamma", "must be >= 0")
        if self.g <= 0:
            raise ValidationError("g", "must be > 0")
        if self.gamma_override is not None:
            z = complex(self.gamma_override)
            object.__setattr__(self, "gamma_override", z)
            _finite_complex(z, "gamma")
            if z.real < 0:
                raise ValidationError("gamma", "real part must be >= 0 (no gain)")


@dataclass(frozen=True)
class SegmentParams:
    """Path between two consecutive qubits, one entry per mode."""

    lengths: tuple[float, ...]
    extra_phases: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(float(x) for x in self.lengths))
        object.__setattr__(self, "extra_phases", tuple(float(x) for x in self.extra_phases))
        for i, x in enumerate(self.lengths):
            _finite(x, f"lengths[{i}]")
            if x < 0:
                raise ValidationError(f"lengths[{i}]", "must be >= 0")
        for i, x in enumerate(self.extra_phases):
            _finite(x, f"extra_phases[{i}]")

    def check_modes(self, M: int) -> None:
        if len(self.lengths) != M:
            raise ValidationError("lengths", f"expected {M} entries, got {len(self.lengths)}")
        if len(self.extra_phases) != M:
            raise ValidationError(
                "extra_phases", f"expected {M} entries, got {len(self.extra_phases)}"
            )


@dataclass(frozen=True)
class DriveSpec:
    mode: int = 1
    direction: str = RIGHT
    amplitude: complex = 1 + 0j

    def __post_init__(self):
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        if self.direction not in (RIGHT, LEFT):
            raise ValidationError("direction", f"must be 'right' or 'left', got {self.direction!r}")
        _finite_complex(self.amplitude, "amplitude")
        if self.amplitude == 0:
            raise ValidationError("amplitude", "must be nonzero")


@dataclass(frozen=True)
class NetworkSpec:
    """A chain of N qubits threaded by M modes, with N-1 segments between them."""

    modes: int
    k: float
    qubits: tuple[QubitParams, ...]
    segments: tuple[SegmentParams, ...] = ()
    drive: DriveSpec = field(default_factory=DriveSpec)

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.modes < 1:
            raise ValidationError("modes", "must be >= 1")
        _finite(self.k, "k")
        if self.k <= 0:
            raise ValidationError("k", "must be > 0")
        if len(self.qubits) < 1:
            raise ValidationError("qubits", "at least one qubit is required")
        if len(self.segments) != len(self.qubits) - 1:
            raise ValidationError(
                "segments",
                f"expected {len(self.qubits) - 1} segments for {len(self.qubits)} qubits, "
                f"got {len(self.segments)}",
            )
        for i, seg in enumerate(self.segments):
            try:
                seg.check_modes(self.modes)
            except ValidationError as e:
                raise e.prefixed(f"segments[{i}]") from None
        if not 1 <= self.drive.mode <= self.modes:
            raise ValidationError("drive.mode", f"must be in [1, {self.modes}]")

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)


def compute_gamma(q: QubitParams, k: float) -> complex:
    """Dimensionless node parameter: Gamma/(2 g^2) - i (k - omega10)/g^2.

    A qubit's ``gamma_override`` is returned unchanged.
    """
    if q.gamma_override is not None:
        return q.gamma_override
    g2 = q.g * q.g
    return complex(q.Gamma / (2.0 * g2), -(k - q.omega10) / g2)


# --- JSON format -----------------------------------------------------------

def _expect_keys(obj: Any, path: str, required: set[str], optional: set[str] = frozenset()):
    if not isinstance(obj, dict):
        raise ParseError(path, "expected an object")
    unknown = set(obj) - required - optional
    if unknown:
        raise ParseError(path, f"unknown key(s): {', '.join(sorted(unknown))}")
    missing = required - set(obj)
    if missing:
        key = sorted(missing)[0]
        raise ParseError(f"{path}.{key}" if path else key, "missing required field")


def _number(x: Any, path: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(path, f"expected a number, got {type(x).__name__}")
    return float(x)


def _integer(x: Any, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(path, f"expected an integer, got {type(x).__name__}")
    return x


def _complex(x: Any, path: str) -> complex:
    if not isinstance(x, list) or len(x) != 2:
        raise ParseError(path, "expected a complex number as [re, im]")
    return complex(_number(x[0], f"{path}[0]"), _number(x[1], f"{path}[1]"))


def _number_list(x: Any, path: str) -> list[float]:
    if not isinstance(x, list):
        raise ParseError(path, "expected an array of numbers")
    return [_number(v, f"{path}[{i}]") for i, v in enumerate(x)]


def parse_network(text: bytes | str) -> NetworkSpec:
    """Parse and validate a network document.

    Raises ParseError for malformed input and ValidationError for values that
    violate an invariant; both carry the offending field path in ``.path``.
    """
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ParseError("", f"invalid JSON: {e}") from None

    _expect_keys(doc, "", {"modes", "k", "qubits", "segments"}, {"drive"})
    modes = _integer(doc["modes"], "modes")
    k = _number(doc["k"], "k")

    if not isinstance(doc["qubits"], list):
        raise ParseError("qubits", "expected an array")
    qubits = []
    for i, qd in enumerate(doc["qubits"]):
        path = f"qubits[{i}]"
        _expect_keys(qd, path, {"omega10", "Gamma", "g"}, {"gamma"})
        override = _complex(qd["gamma"], f"{path}.gamma") if "gamma" in qd else None
        try:
            qubits.append(
                QubitParams(
                    omega10=_number(qd["omega10"], f"{path}.omega10"),
                    Gamma=_number(qd["Gamma"], f"{path}.Gamma"),
                    g=_number(qd["g"], f"{path}.g"),
                    gamma_override=override,
                )
            )
        except ValidationError as e:
            raise e.prefixed(path) from None

    if not isinstance(doc["segments"], list):
        raise ParseError("segments", "expected an array")
    segments = []
    for i, sd in enumerate(doc["segments"]):
        path = f"segments[{i}]"
        _expect_keys(sd, path, {"lengths", "extra_phases"})
        try:
            segments.append(
                SegmentParams(
                    lengths=_number_list(sd["lengths"], f"{path}.lengths"),
                    extra_phases=_number_list(sd["extra_phases"], f"{path}.extra_phases"),
                )
            )
        except ValidationError as e:
            raise e.prefixed(path) from None

    drive = DriveSpec()
    if "drive" in doc:
        dd = doc["drive"]
        _expect_keys(dd, "drive", set(), {"mode", "direction", "amplitude"})
        direction = dd.get("direction", RIGHT)
        if not isinstance(direction, str):
            raise ParseError("drive.direction", "expected a string")
        try:
            drive = DriveSpec(
                mode=_integer(dd.get("mode", 1), "drive.mode"),
                direction=direction,
                amplitude=_complex(dd["amplitude"], "drive.amplitude")
                if "amplitude" in dd
                else 1 + 0j,
            )
        except ValidationError as e:
            raise e.prefixed("drive") from None

    return NetworkSpec(modes=modes, k=k, qubits=qubits, segments=segments, drive=drive)


def network_to_dict(net: NetworkSpec) -> dict:
    qubits = []
    for q in net.qubits:
        d = {"omega10": q.omega10, "Gamma": q.Gamma, "g": q.g}
        if q.gamma_override is not None:
            d["gamma"] = [q.gamma_override.real, q.gamma_override.imag]
        qubits.append(d)
    return {
        "modes": net.modes,
        "k": net.k,
        "qubits": qubits,
        "segments": [
            {"lengths": list(s.lengths), "extra_phases": list(s.extra_phases)}
            for s in net.segments
        ],
        "drive": {
            "mode": net.drive.mode,
            "direction": net.drive.direction,
            "amplitude": [net.drive.amplitude.real, net.drive.amplitude.imag],
        },
    }


def serialize_network(net: NetworkSpec) -> bytes:
    return json.dumps(network_to_dict(net), indent=2).encode("utf-8")
