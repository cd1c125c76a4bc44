# race/strategies.py
# Daftar strategi mining yang dibandingkan.

from __future__ import annotations

from enum import Enum

from core.errors import DomainError


class StrategyKind(Enum):
    HONEST = "hm"
    SELFISH = "sm"
    LEAD_STUBBORN = "lsm"
    EQUAL_FORK_STUBBORN = "efsm"

    @property
    def label(self) -> str:
        return self.value.upper()

    @classmethod
    def from_flag(cls, name: str) -> "StrategyKind":
        key = name.strip().lower()
        for kind in cls:
            if kind.value == key:
                return kind
        raise DomainError(f"strategi tidak dikenal: {name!r} (pilih: hm | sm | lsm | efsm)")


# urutan dari yang paling tidak deviant; dipakai untuk tie-break & urutan kolom
STRATEGY_ORDER = (
    StrategyKind.HONEST,
    StrategyKind.SELFISH,
    StrategyKind.LEAD_STUBBORN,
    StrategyKind.EQUAL_FORK_STUBBORN,
)
