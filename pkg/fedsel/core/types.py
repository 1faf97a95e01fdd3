"""
Typed structures shared by every module.

Sample is the unit of observation flowing from a device stream into models,
windows and metrics. It is immutable: a Sample built directly copies its
feature vector, and one handed out by a DeviceStream is a read-only view of the
stream's storage, so windows never see a mutable source.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class Sample:
    """
    One timestamped observation at an edge device.

    t: discrete step index within the device stream
    x: d features (in [0,1] after normalization)
    y: target (in [0,1] after normalization)
    xa: the bias-augmented input [1, x], used by the SGD kernel
    """
    t: int
    x: np.ndarray
    y: float
    xa: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        xa = augment(np.asarray(self.x, dtype=float).reshape(-1))
        object.__setattr__(self, "xa", xa)
        object.__setattr__(self, "x", xa[1:])
        object.__setattr__(self, "y", float(self.y))

    @classmethod
    def from_row(cls, t: int, xa_row: np.ndarray, y: float) -> "Sample":
        """Sample over one read-only row [1, x] of an augmented matrix; nothing is copied."""
        s = object.__new__(cls)
        object.__setattr__(s, "t", t)
        object.__setattr__(s, "x", xa_row[1:])
        object.__setattr__(s, "y", y)
        object.__setattr__(s, "xa", xa_row)
        return s

    @property
    def d(self) -> int:
        return int(self.x.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sample):
            return NotImplemented
        return self.t == other.t and self.y == other.y and np.array_equal(self.x, other.x)

    def to_dict(self) -> dict:
        return {"t": self.t, "x": self.x.tolist(), "y": self.y}

    @classmethod
    def from_dict(cls, data: dict) -> "Sample":
        return cls(t=data["t"], x=np.asarray(data["x"], dtype=float), y=data["y"])


def augment(X: np.ndarray) -> np.ndarray:
    """Read-only copy of X with a leading column (or entry) of ones."""
    X = np.asarray(X, dtype=float)
    out = np.empty(X.shape[:-1] + (X.shape[-1] + 1,))
    out[..., 0] = 1.0
    out[..., 1:] = X
    out.setflags(write=False)
    return out
