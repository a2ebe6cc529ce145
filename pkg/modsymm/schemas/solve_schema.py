import enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from modsymm.bie.trig import TrigPoly
from modsymm.core.exceptions import ConfigurationError


class MethodKind(str, enum.Enum):
    LS = "LS"
    DLS = "DLS"
    BG = "BG"
    GC = "GC"

    @classmethod
    def parse(cls, text: str) -> "MethodKind":
        try:
            return cls(text.strip().upper())
        except ValueError as e:
            raise ConfigurationError(
                f"Unknown method '{text}'. Choose from {', '.join(m.value for m in cls)}."
            ) from e

    def __str__(self) -> str:
        return self.value


class SolveReport(BaseModel):
    """
    Outcome of one discrete solve.

    ``r`` is only set when the exact density is known.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    method: MethodKind
    n: int = Field(ge=1, description="Degree of the trial space X_n")
    density: TrigPoly = Field(exclude=True)
    residual: float = Field(ge=0, description="||S0^(n) Psi_n - g^delta|| in L^2")
    condition: float = Field(description="2-norm condition number of the solved system")
    elapsed: float = Field(ge=0, description="Wall seconds")
    r: Optional[float] = Field(default=None, ge=0, description="||Psi_n - Psi|| in L^2")
