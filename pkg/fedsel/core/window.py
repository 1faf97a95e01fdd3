"""
Bounded FIFO windows.

SlidingWindow stores the most recent `capacity` items, oldest first. Devices
keep one window of Samples (capacity M) and, for ASM/SM, one RewardWindow of
binary rewards (capacity U). Windows are single-owner: a device mutates its own
window in place; copy() is used when state is frozen for checkpoint evaluation.
"""

from collections import deque
from typing import Generic, Iterator, TypeVar

from utils.errors import ConfigurationError, InsufficientHistoryError

Item = TypeVar("Item")


class SlidingWindow(Generic[Item]):
    """FIFO of at most `capacity` items; pushing into a full window evicts the oldest."""

    def __init__(self, capacity: int, items: list[Item] | None = None):
        if capacity < 1:
            raise ConfigurationError(f"window capacity must be positive, got {capacity}")
        self.capacity = capacity
        self._items: deque[Item] = deque(maxlen=capacity)
        for item in items or []:
            self.push(item)

    def push(self, item: Item) -> "SlidingWindow[Item]":
        self._items.append(item)
        return self

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[Item]:
        return iter(self._items)

    @property
    def is_full(self) -> bool:
        return len(self._items) == self.capacity

    def items(self) -> list[Item]:
        """Contents oldest-to-newest."""
        return list(self._items)

    def copy(self) -> "SlidingWindow[Item]":
        clone = SlidingWindow(self.capacity)
        clone._items = self._items.copy()
        return clone

    def __repr__(self) -> str:
        return f"<SlidingWindow(capacity={self.capacity}, len={len(self)})>"


class RewardWindow(SlidingWindow[int]):
    """
    Window of binary rewards with an O(1) running mean.

    Rewards are stored as ints 0/1 so the mean is a plain sum / length.
    """

    def __init__(self, capacity: int, items: list[int] | None = None):
        self._total = 0
        super().__init__(capacity, items)

    def push(self, item: int) -> "RewardWindow":
        reward = int(item)
        if reward not in (0, 1):
            raise ConfigurationError(f"reward must be 0 or 1, got {item!r}")
        if len(self._items) == self.capacity:
            self._total -= self._items[0]
        self._items.append(reward)
        self._total += reward
        return self

    @property
    def total(self) -> int:
        return self._total

    def mean(self) -> float:
        if not self._items:
            raise InsufficientHistoryError("reward window is empty")
        return self._total / len(self._items)

    def copy(self) -> "RewardWindow":
        clone = RewardWindow(self.capacity)
        clone._items = self._items.copy()
        clone._total = self._total
        return clone


def window_push(window: SlidingWindow[Item], item: Item) -> SlidingWindow[Item]:
    """Push `item` as the newest element, evicting the oldest when full."""
    return window.push(item)


def window_mean(window: SlidingWindow[int]) -> float:
    """
    Arithmetic mean of a window of 0/1 rewards.

    Raises:
        InsufficientHistoryError: If the window is empty
    """
    if isinstance(window, RewardWindow):
        return window.mean()
    values = window.items()
    if not values:
        raise InsufficientHistoryError("window is empty")
    return sum(int(v) for v in values) / len(values)
