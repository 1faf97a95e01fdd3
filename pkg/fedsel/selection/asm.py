"""
Adaptive smoothing (ASM).

Every step the device compares the absolute errors of its federated and local
models. The federated model earns theta = 1 when it is at least as good. The
share of ones over the last U steps is alpha, and the prediction is
alpha * yhat_FL + (1 - alpha) * yhat_L.
"""

from dataclasses import dataclass

from core.window import RewardWindow
from utils.errors import ConfigurationError


@dataclass
class AsmState:
    """Reward window O of the most recent <= U thetas, oldest first."""
    reward_window: RewardWindow

    @classmethod
    def empty(cls, U: int) -> "AsmState":
        return cls(reward_window=RewardWindow(U))

    def copy(self) -> "AsmState":
        return AsmState(reward_window=self.reward_window.copy())


def local_error(y: float, yhat: float) -> float:
    """|y - yhat|; used for both the local and the federated model."""
    return abs(y - yhat)


def reward_theta(eps_L: float, eps_FL: float) -> int:
    """1 if the federated model is at least as good (eps_FL <= eps_L), else 0."""
    return 1 if eps_FL <= eps_L else 0


def asm_alpha(state: AsmState) -> float:
    """
    Mean of the reward window.

    An empty window yields 1.0: at cold start the local model is the received
    federated model, so the choice is value-neutral.
    """
    if len(state.reward_window) == 0:
        return 1.0
    return state.reward_window.mean()


def asm_observe(state: AsmState, eps_L: float, eps_FL: float) -> float:
    """Push this step's theta and return the updated alpha."""
    state.reward_window.push(reward_theta(eps_L, eps_FL))
    return asm_alpha(state)


def asm_predict(alpha: float, yhat_FL: float, yhat_L: float) -> float:
    """alpha * yhat_FL + (1 - alpha) * yhat_L; exact at alpha 0 and 1."""
    if not 0.0 <= alpha <= 1.0:
        raise ConfigurationError(f"alpha must be in [0, 1], got {alpha}")
    if alpha == 1.0:
        return yhat_FL
    if alpha == 0.0:
        return yhat_L
    return alpha * yhat_FL + (1.0 - alpha) * yhat_L
