"""
Artificial concept drift.

TargetShift adds a constant to every target from at_t on. CoefficientRotation
rotates the shared ground truth by `magnitude` degrees in a seeded random plane
of the feature weights and regenerates the targets from at_t on; it needs the
synthetic ground truth. Samples before at_t are never touched.
"""

from dataclasses import replace

import numpy as np

from core.enums import DriftKind
from utils.errors import ConfigurationError, UnsupportedDriftError

from .synthetic import targets
from .types import DeviceStream, DriftSpec


def rotation_plane(d: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Two orthonormal vectors in R^d spanning the rotation plane."""
    if d < 2:
        raise ConfigurationError(f"CoefficientRotation needs d >= 2, got {d}")
    rng = np.random.default_rng([seed, 2])
    a = rng.standard_normal(d)
    a /= np.linalg.norm(a)
    b = rng.standard_normal(d)
    b -= np.dot(a, b) * a
    b /= np.linalg.norm(b)
    return a, b


def rotate(w: np.ndarray, degrees: float, plane: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    """Rotate the feature weights w[1:] within `plane`; the bias is kept."""
    a, b = plane
    theta = np.deg2rad(degrees)
    v = w[1:]
    pa, pb = np.dot(a, v), np.dot(b, v)
    rotated = (
        v
        + (np.cos(theta) - 1.0) * (pa * a + pb * b)
        + np.sin(theta) * (pa * b - pb * a)
    )
    return np.concatenate([[w[0]], rotated])


def inject_drift(streams: list[DeviceStream], drift: DriftSpec, seed: int = 0) -> list[DeviceStream]:
    """
    Apply `drift` to every stream and return new streams.

    Raises:
        ConfigurationError: If at_t lies beyond the end of every stream
        UnsupportedDriftError: CoefficientRotation on streams without ground truth
    """
    if not streams:
        return []
    if all(len(s) == 0 or drift.at_t > int(s.t[-1]) for s in streams):
        raise ConfigurationError(f"drift at t={drift.at_t} lies beyond the end of every stream")
    if drift.magnitude == 0.0:
        return [s.slice(0, len(s)) for s in streams]

    if drift.kind is DriftKind.TARGET_SHIFT:
        drifted = []
        for s in streams:
            y = s.y.copy()
            mask = s.t >= drift.at_t
            y[mask] = np.clip(y[mask] + drift.magnitude, 0.0, 1.0)
            drifted.append(replace(s, y=y))
        return drifted

    missing = [s.device_id for s in streams if s.truth is None]
    if missing:
        raise UnsupportedDriftError(
            "CoefficientRotation needs synthetic ground truth; "
            f"device(s) {missing[:5]} were ingested from a file"
        )
    plane = rotation_plane(streams[0].d, seed)
    drifted = []
    for s in streams:
        truth = s.truth
        assert truth is not None
        w_rotated = rotate(truth.w_global, drift.magnitude, plane) + truth.offset
        y = s.y.copy()
        mask = s.t >= drift.at_t
        y[mask] = targets(w_rotated, s.X[mask], truth.noise[mask])
        drifted.append(replace(s, y=y))
    return drifted
