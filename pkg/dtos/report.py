from fractions import Fraction
from typing import Any, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .params import Rational

REPORT_FIELDS = (
    "instance_id",
    "n",
    "r",
    "min_degree",
    "alpha",
    "mode",
    "covered",
    "weight",
    "factor",
    "seed",
    "note",
)
TIMING_FIELD = "wall_ms"


class ExperimentConfig(BaseModel):
    """Everything one command run depends on; serialized into every output header."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: str = Field(..., min_length=1)
    seed: int = Field(0, ge=0)
    guard_nodes: int = Field(100_000_000, ge=1)
    guard_cliques: int = Field(200_000, ge=1)
    workers: int = Field(1, ge=1)
    out: Optional[str] = None
    params: dict[str, str] = Field(default_factory=dict)

    @field_validator("command")
    @classmethod
    def validate_command(cls, v):
        v = v.strip().lower()
        if not v:
            raise ValueError("command must not be blank")
        return v

    @classmethod
    def resolve(
        cls,
        command: str,
        flags: Mapping[str, Any],
        file_values: Optional[Mapping[str, Any]] = None,
        defaults: Optional[Mapping[str, Any]] = None,
    ) -> "ExperimentConfig":
        """Merge defaults, then a config file, then flags; later sources win.

        Keys that are not top-level fields land in ``params`` as strings.
        ``None`` values never override.
        """
        merged: dict[str, Any] = {}
        params: dict[str, str] = {}
        for source in (defaults or {}, file_values or {}, flags):
            for key, value in source.items():
                if value is None:
                    continue
                key = key.strip().lower().replace("-", "_")
                if key in cls.model_fields and key not in ("command", "params"):
                    merged[key] = value
                else:
                    params[key] = str(value)
        return cls(command=command, params=params, **merged)

    def metadata(self) -> dict[str, Any]:
        return self.model_dump()


class ReportRow(BaseModel):
    """One CSV row per (instance, mode)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    instance_id: str
    n: int = Field(..., ge=0)
    r: int = Field(..., ge=1)
    min_degree: Optional[int] = None
    alpha: Optional[int] = None
    mode: str
    covered: Optional[int] = None
    weight: Optional[Rational] = None
    factor: Optional[bool] = None
    wall_ms: Optional[int] = None
    seed: Optional[int] = None
    note: str = ""

    @staticmethod
    def header(timing: bool = False) -> list[str]:
        return list(REPORT_FIELDS) + ([TIMING_FIELD] if timing else [])

    def csv_fields(self, timing: bool = False) -> list[str]:
        """Cells in ``header`` order; rationals as ``p/q``, verdicts as yes/no."""
        cells = []
        for name in self.header(timing):
            value = getattr(self, name)
            if value is None:
                cells.append("")
            elif isinstance(value, bool):
                cells.append("yes" if value else "no")
            elif isinstance(value, Fraction):
                cells.append(f"{value.numerator}/{value.denominator}")
            else:
                cells.append(str(value))
        return cells
