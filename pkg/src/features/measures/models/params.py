from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict


class ScaleParams(BaseModel):
    """Scale-dependent constants of the thick-point and avoided-point normalizations at scale N."""

    model_config = ConfigDict(frozen=True)

    N: int
    lam: Optional[float] = None
    theta: Optional[float] = None
    g: float
    c0: float
    alpha: float
    m_N: float
    # thick points (need lam)
    a_N: Optional[float] = None
    K_N: Optional[float] = None
    c_hat: Optional[float] = None
    # avoided and light points (need theta)
    t_N: Optional[float] = None
    hatK_N: Optional[float] = None

    def rows(self) -> tuple[list[str], list[tuple]]:
        return ["name", "value"], [
            (name, value) for name, value in self.model_dump().items() if value is not None
        ]
