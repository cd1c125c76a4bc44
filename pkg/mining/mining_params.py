# mining/mining_params.py
# Parameter lingkungan attacker & figur profitabilitas per strategi.

from __future__ import annotations

from dataclasses import dataclass

from core.errors import DomainError


@dataclass(frozen=True)
class MiningParams:
    """
    q           : hashrate relatif attacker (0 <= q < 1/2; q = 0 hanya untuk HM)
    gamma       : fraksi honest network yang menambang di atas fork attacker saat tie
    block_reward: b
    tau0        : rata-rata waktu antar blok seluruh network
    """

    q: float
    gamma: float = 0.0
    block_reward: float = 1.0
    tau0: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.q < 0.5):
            raise DomainError(f"MiningParams: butuh 0 <= q < 1/2, dapat q={self.q}")
        if not (0.0 <= self.gamma <= 1.0):
            raise DomainError(f"MiningParams: butuh 0 <= gamma <= 1, dapat gamma={self.gamma}")
        if not self.block_reward > 0:
            raise DomainError(f"MiningParams: block_reward harus > 0, dapat {self.block_reward}")
        if not self.tau0 > 0:
            raise DomainError(f"MiningParams: tau0 harus > 0, dapat {self.tau0}")

    @property
    def p(self) -> float:
        return 1.0 - self.q

    def require_attacker(self, what: str) -> None:
        # strategi deviant tidak terdefinisi tanpa hashrate attacker
        if self.q <= 0.0:
            raise DomainError(f"{what}: butuh q > 0 (q = 0 hanya valid untuk HM)")


@dataclass(frozen=True)
class StrategyMetrics:
    """
    revenue_ratio           : Gamma = E[R] / E[tau]
    delta                   : faktor update difficulty
    apparent_hashrate       : q~ = Gamma * delta * tau0 / b
    expected_cycle_duration : E[tau_strategi]
    expected_cycle_revenue  : E[R]
    """

    revenue_ratio: float
    delta: float
    apparent_hashrate: float
    expected_cycle_duration: float
    expected_cycle_revenue: float

    @property
    def adjusted_revenue_ratio(self) -> float:
        # revenue ratio setelah difficulty adjustment
        return self.revenue_ratio * self.delta
