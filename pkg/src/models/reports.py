"""Pydantic models for verification reports and check-suite results.

These are the structured records the CLI prints and the suites return.
"""

from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field


# ============================================================================
# Phase and residual reports
# ============================================================================

class EikonalReport(BaseModel):
    """Residuals of the eikonal pair |grad psi|^2 = |grad phi|^2, grad phi . grad psi = 0."""

    res_norm: float = Field(..., ge=0, description="| |grad psi|^2 - |grad phi|^2 |")
    res_orth: float = Field(..., ge=0, description="|grad phi . grad psi|")

    model_config = ConfigDict(frozen=True, json_schema_extra={"example": {"res_norm": 1e-12, "res_orth": 3e-13}})

    @property
    def worst(self) -> float:
        return max(self.res_norm, self.res_orth)


class ResidualReport(BaseModel):
    """Pointwise time-harmonic Maxwell residuals at one point."""

    r_faraday: float = Field(..., ge=0, description="max |curl E - i omega mu H|")
    r_ampere: float = Field(..., ge=0, description="max |curl H + i omega gamma E|")
    r_div_e: float = Field(..., ge=0, description="|div(gamma E)|")
    r_div_h: float = Field(..., ge=0, description="|div(mu H)|")
    field_scale: float = Field(..., ge=0, description="Largest balanced term magnitude")
    relative: Optional[float] = Field(None, ge=0, description="Largest per-equation relative residual")
    degenerate: bool = Field(default=False, description="True when every term scale vanished")
    point: Tuple[float, float, float] = Field(..., description="Evaluation point")

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "r_faraday": 0.02,
                "r_ampere": 0.02,
                "r_div_e": 0.01,
                "r_div_h": 0.01,
                "field_scale": 3.1,
                "relative": 0.0065,
                "degenerate": False,
                "point": [0.0, 1.2, 0.4],
            }
        },
    )

    @property
    def max_absolute(self) -> float:
        return max(self.r_faraday, self.r_ampere, self.r_div_e, self.r_div_h)


# ============================================================================
# Scaling studies
# ============================================================================

class ScalingRow(BaseModel):
    """Relative-residual statistics for one tau over a seeded sample set."""

    tau: float = Field(..., gt=0)
    median_relative: float = Field(..., ge=0)
    p90_relative: float = Field(..., ge=0)
    n_samples: int = Field(..., ge=1, description="Samples that produced a report")
    n_failed: int = Field(default=0, ge=0, description="Samples excluded after evaluation errors")


class ScalingStudy(BaseModel):
    """Rows sorted by tau plus the fitted log-log slope of median_relative."""

    family: str
    rows: List[ScalingRow]
    slope: float = Field(..., description="d log(median_relative) / d log(tau)")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "family": "cyl",
                "rows": [{"tau": 10, "median_relative": 0.05, "p90_relative": 0.09, "n_samples": 40}],
                "slope": -0.98,
            }
        }
    )

    def ratio(self, tau_num: float, tau_den: float) -> float:
        """median_relative(tau_num) / median_relative(tau_den)."""
        by_tau = {row.tau: row.median_relative for row in self.rows}
        return by_tau[tau_num] / by_tau[tau_den]

    def table(self) -> str:
        lines = [f"{'tau':>10} {'median':>14} {'p90':>14} {'n':>5} {'failed':>7}"]
        for row in self.rows:
            lines.append(
                f"{row.tau:>10.4g} {row.median_relative:>14.6e} {row.p90_relative:>14.6e} "
                f"{row.n_samples:>5d} {row.n_failed:>7d}"
            )
        lines.append(f"fitted log-log slope: {self.slope:.4f}")
        return "\n".join(lines)


class IntensityProfile(BaseModel):
    """Field modulus along a trajectory with summary statistics."""

    arc: List[float] = Field(..., description="Arc-length (or angle) parameter per sample")
    values: List[float] = Field(..., description="|field| per sample")
    max_relative_deviation: float = Field(..., ge=0, description="(max - min) / max of values")
    increasing: bool
    decreasing: bool


# ============================================================================
# Check suites
# ============================================================================

class CheckResult(BaseModel):
    """One named check inside a suite."""

    name: str
    passed: bool
    value: Optional[float] = Field(None, description="Measured quantity")
    threshold: Optional[str] = Field(None, description="Acceptance condition, e.g. '< 1e-7'")
    detail: Optional[str] = None


class SuiteReport(BaseModel):
    """Outcome of a named verification suite."""

    suite: str
    seed: int
    checks: List[CheckResult] = Field(default_factory=list)
    elapsed_s: float = Field(default=0.0, ge=0)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def as_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


__all__ = [
    "EikonalReport",
    "ResidualReport",
    "ScalingRow",
    "ScalingStudy",
    "IntensityProfile",
    "CheckResult",
    "SuiteReport",
]
