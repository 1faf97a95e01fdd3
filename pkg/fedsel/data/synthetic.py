"""
Synthetic non-IID device streams.

Every device k has a ground truth w_k = w_global + heterogeneity * u_k with u_k
a seeded unit vector (bias included). Features follow a smooth periodic signal
plus AR(1) noise, clipped to [0, 1]; targets are clamp(w_k . [1, x] + noise).
w_global is scaled so its outputs stay inside [0.1, 0.9] on the unit cube.
"""

import numpy as np
from scipy.signal import lfilter

from utils.errors import ConfigurationError

from .types import DeviceStream, SyntheticTruth

# Sum of |feature weights| of w_global
_WEIGHT_MASS = 0.8
_AR_COEF = 0.9
_AR_SCALE = 0.05
_AMPLITUDE = 0.35
_PERIOD_RANGE = (50, 1000)


def _global_truth(d: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng([seed, 0])
    raw = rng.uniform(-1.0, 1.0, size=d)
    weights = _WEIGHT_MASS * raw / np.abs(raw).sum()
    bias = 0.5 - 0.5 * weights.sum()
    return np.concatenate([[bias], weights])


def _unit_vector(rng: np.random.Generator, size: int) -> np.ndarray:
    v = rng.standard_normal(size)
    return v / np.linalg.norm(v)


def _features(rng: np.random.Generator, T: int, d: int) -> np.ndarray:
    steps = np.arange(T)[:, None]
    periods = rng.uniform(*_PERIOD_RANGE, size=d)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=d)
    signal = 0.5 + _AMPLITUDE * np.sin(2.0 * np.pi * steps / periods + phases)
    ar_noise = lfilter([1.0], [1.0, -_AR_COEF], rng.standard_normal((T, d)) * _AR_SCALE, axis=0)
    return np.clip(signal + ar_noise, 0.0, 1.0)


def targets(w: np.ndarray, X: np.ndarray, noise: np.ndarray) -> np.ndarray:
    """clamp(w . [1, x] + noise, 0, 1) row-wise."""
    return np.clip(w[0] + X @ w[1:] + noise, 0.0, 1.0)


def synth_generate(
    K: int,
    T: int,
    d: int,
    noise_sigma: float,
    heterogeneity: float,
    seed: int,
) -> list[DeviceStream]:
    """
    Generate K streams of T samples each; bit-for-bit reproducible from the arguments.

    Raises:
        ConfigurationError: On non-positive counts or negative noise/heterogeneity
    """
    if K <= 0 or T <= 0 or d <= 0:
        raise ConfigurationError(f"K, T and d must be positive (K={K}, T={T}, d={d})")
    if noise_sigma < 0 or heterogeneity < 0:
        raise ConfigurationError(
            f"noise_sigma and heterogeneity must be >= 0 (noise_sigma={noise_sigma}, heterogeneity={heterogeneity})"
        )
    w_global = _global_truth(d, seed)
    streams = []
    for k in range(K):
        rng = np.random.default_rng([seed, 1, k])
        offset = heterogeneity * _unit_vector(rng, d + 1)
        w_device = w_global + offset
        X = _features(rng, T, d)
        noise = rng.normal(0.0, noise_sigma, size=T) if noise_sigma > 0 else np.zeros(T)
        streams.append(DeviceStream(
            device_id=k,
            t=np.arange(T, dtype=np.int64),
            X=X,
            y=targets(w_device, X, noise),
            label=str(k),
            truth=SyntheticTruth(w_global=w_global, offset=offset, w_device=w_device, noise=noise),
        ))
    return streams
