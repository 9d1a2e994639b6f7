from fractions import Fraction
from typing import Annotated, Any, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, field_validator, model_validator


def parse_rational(value: Any) -> Fraction:
    """Exact rational from ``"1/8"``, ``"0.125"``, ints, floats or Fractions."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("expected a rational number, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # via str so 0.1 means one tenth, not its binary expansion
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a rational number: {value!r}") from None
    raise ValueError(f"not a rational number: {value!r}")


Rational = Annotated[Fraction, BeforeValidator(parse_rational)]


class ParamsBase(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True, extra="forbid")


def _open_unit(name: str, value: Fraction) -> Fraction:
    if not 0 < value < 1:
        raise ValueError(f"{name} must lie strictly between 0 and 1, got {value}")
    return value


class ThresholdParams(ParamsBase):
    """Degree and independence thresholds for a K_r-factor: δ(G) ≥ (1 − 2/r + μ)n and α(G) < γn."""

    r: int = Field(..., ge=2)
    mu: Rational
    gamma: Rational

    @field_validator("gamma")
    @classmethod
    def validate_gamma(cls, v):
        return _open_unit("gamma", v)

    @model_validator(mode="after")
    def validate_mu(self):
        if not 0 < self.mu < Fraction(2, self.r):
            raise ValueError(f"mu must lie in (0, 2/r) = (0, {Fraction(2, self.r)}), got {self.mu}")
        return self


class AugmentParams(ParamsBase):
    """Parameters of the K_r → K_{r+1} enlargement loop and the blow-up iteration."""

    r: int = Field(..., ge=3)
    eta: Rational = Fraction(1, 10)
    mu: Rational = Fraction(1, 10)
    rho: Optional[Rational] = None
    gamma: Rational = Fraction(1, 10)
    max_rounds: int = Field(3, ge=0, description="blow-up rounds of the fractional iteration")
    max_vertices: int = Field(4096, ge=1, description="largest blown-up graph the iteration builds")
    widen_pool: bool = Field(True, description="retry with every uncovered vertex when the degree-filtered pool is stuck")

    @field_validator("eta", "mu", "gamma")
    @classmethod
    def validate_unit(cls, v, info):
        return _open_unit(info.field_name, v)

    @field_validator("rho")
    @classmethod
    def validate_rho(cls, v):
        return v if v is None else _open_unit("rho", v)


class RegularityParams(ParamsBase):
    """Thresholds of the two-level reduced multigraph."""

    eps: Rational
    beta: Rational

    @model_validator(mode="after")
    def validate_order(self):
        if not 0 < self.eps < self.beta < Fraction(1, 2):
            raise ValueError(f"need 0 < eps < beta < 1/2, got eps={self.eps}, beta={self.beta}")
        return self


class AbsorberParams(ParamsBase):
    """Absorber sizes and budgets; ``t`` defaults to 6r + 1."""

    r: int = Field(..., ge=2)
    t: Optional[int] = Field(None, ge=1)
    phi: Rational = Fraction(1, 10)
    xi: Rational = Fraction(1, 10)
    gem_size: Optional[int] = Field(None, ge=1, description="clique size hung between spine vertices; default r - 1")
    max_path_len: int = Field(7, ge=2)
    max_attempts: int = Field(64, ge=1, description="sampled S-sets per absorbing-set build")
    certify_limit: int = Field(1_000_000, ge=0, description="largest number of leftover sets checked exhaustively")

    @field_validator("xi")
    @classmethod
    def validate_xi(cls, v):
        return _open_unit("xi", v)

    @field_validator("phi")
    @classmethod
    def validate_phi(cls, v):
        # zero budget means no absorbing set at all
        if not 0 <= v < 1:
            raise ValueError(f"phi must lie in [0, 1), got {v}")
        return v

    @model_validator(mode="after")
    def fill_defaults(self):
        if self.t is None:
            object.__setattr__(self, "t", 6 * self.r + 1)
        if self.gem_size is None:
            object.__setattr__(self, "gem_size", self.r - 1)
        return self

    @property
    def body_size(self) -> int:
        return self.r * self.t

    def phi_bound(self, mu) -> Fraction:
        """Largest φ the assembly allows for minimum-degree slack ``mu``: μ / 14r²."""
        return parse_rational(mu) / (14 * self.r**2)


class SphereParams(ParamsBase):
    """Two-part sphere construction; thresholds are compared on squared distances."""

    dim: int = Field(..., ge=4)
    points_per_side: int = Field(..., ge=10)
    zeta: Rational = Fraction(1, 8)
    inner_threshold_sq: Optional[Rational] = None
    cross_threshold_sq: Optional[Rational] = None

    @field_validator("zeta")
    @classmethod
    def validate_zeta(cls, v):
        if not 0 < v < Fraction(1, 2):
            raise ValueError(f"zeta must lie in (0, 1/2), got {v}")
        return v

    @model_validator(mode="after")
    def fill_thresholds(self):
        if self.inner_threshold_sq is None:
            object.__setattr__(self, "inner_threshold_sq", 4 - self.zeta**2)
        if self.cross_threshold_sq is None:
            object.__setattr__(self, "cross_threshold_sq", 2 * (1 - self.zeta / 4) ** 2)
        if self.inner_threshold_sq <= 2:
            raise ValueError(f"inner threshold must exceed sqrt(2), got sqrt({self.inner_threshold_sq})")
        if self.cross_threshold_sq >= 2:
            raise ValueError(f"cross threshold must be below sqrt(2), got sqrt({self.cross_threshold_sq})")
        return self
