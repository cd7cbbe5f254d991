"""Background regimes gating the geometric rewrite rules, plus the P₀H_F convention."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..expr.coeff import CoeffElem, I


class Regime(str, Enum):
    GENERIC = "generic"
    MINKOWSKI = "minkowski"
    MAXIMALLY_SYMMETRIC = "maximally-symmetric"


class Convention(str, Enum):
    DELTA = "delta"
    I_DELTA = "i-delta"


@dataclass(frozen=True)
class BackgroundDescriptor:
    regime: Regime = Regime.MINKOWSKI
    convention: Convention = Convention.DELTA

    def __post_init__(self) -> None:
        object.__setattr__(self, "regime", Regime(self.regime))
        object.__setattr__(self, "convention", Convention(self.convention))

    @property
    def flat(self) -> bool:
        return self.regime is Regime.MINKOWSKI

    @property
    def constant_curvature(self) -> bool:
        return self.regime is not Regime.GENERIC

    @property
    def feynman_factor(self) -> CoeffElem:
        """c in P₀H_F = c δ."""

        return CoeffElem.of(1 if self.convention is Convention.DELTA else I)

    @property
    def anti_feynman_factor(self) -> CoeffElem:
        return self.feynman_factor.conjugate()


MINKOWSKI = BackgroundDescriptor(Regime.MINKOWSKI)
GENERIC = BackgroundDescriptor(Regime.GENERIC)
MAXIMALLY_SYMMETRIC = BackgroundDescriptor(Regime.MAXIMALLY_SYMMETRIC)


def parse_background(regime: str, convention: str = Convention.DELTA.value) -> BackgroundDescriptor:
    try:
        return BackgroundDescriptor(Regime(regime), Convention(convention))
    except ValueError as exc:
        raise ValueError(f"Unknown background {regime!r} or convention {convention!r}") from exc
