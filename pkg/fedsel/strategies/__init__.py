"""
Per-device policies.

Every strategy is a step function over a DeviceState: observe x, emit a
prediction, observe y, update. Epoch handling is two-phase: device_on_epoch
(contribute) and device_receive (take the merged model).
"""

from .device import DeviceState, create_device
from .policies import device_on_epoch, device_receive, device_step

__all__ = [
    "DeviceState",
    "create_device",
    "device_on_epoch",
    "device_receive",
    "device_step",
]
