"""
Report Schemas
"""
from datetime import datetime
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.models.types import InequalityCheck
from src.schemas.experiment import ExperimentConfig


class InequalityRecord(BaseModel):
    """A checked inequality; passed requires lhs ≤ rhs and oracle agreement"""
    model_config = ConfigDict(ser_json_inf_nan="constants")

    name: str
    lhs: float
    rhs: float
    passed: bool
    oracle_delta: Optional[float] = None

    @classmethod
    def from_check(cls, check: InequalityCheck, tolerance: Optional[float] = None) -> "InequalityRecord":
        passed = check.passed
        if tolerance is not None and check.oracle_delta is not None:
            passed = passed and check.oracle_delta <= tolerance
        return cls(name=check.name, lhs=check.lhs, rhs=check.rhs, passed=passed, oracle_delta=check.oracle_delta)


class InstanceRecord(BaseModel):
    """One ensemble instance"""
    model_config = ConfigDict(ser_json_inf_nan="constants")

    instance: int
    seed: int
    values: Dict[str, float] = Field(default_factory=dict)
    checks: List[InequalityRecord] = Field(default_factory=list)
    flags: List[str] = Field(default_factory=list)


class AcceptanceCheck(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class ConstantRecord(BaseModel):
    """Measured constant (maximum over the ensemble) and its baseline comparison"""
    model_config = ConfigDict(ser_json_inf_nan="constants")

    name: str
    value: float
    baseline: Optional[float] = None
    slack: Optional[float] = None
    status: Literal["pinned-ok", "pinned-fail", "unpinned"] = "unpinned"


class ExperimentRecord(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    name: str
    status: Literal["completed", "failed"] = "completed"
    error: Optional[str] = None
    instances: List[InstanceRecord] = Field(default_factory=list)
    constants: Dict[str, float] = Field(default_factory=dict)
    diagnostics: Dict[str, float] = Field(default_factory=dict)
    acceptance: List[AcceptanceCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "completed" and all(a.passed for a in self.acceptance)


class RunMeta(BaseModel):
    """Run facts that legitimately differ between identical runs"""
    version: str
    started_at: datetime
    elapsed_sec: float = 0.0
    jobs: int = 1
    verify_oracles: bool = False


class Report(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    config: ExperimentConfig
    experiments: List[ExperimentRecord] = Field(default_factory=list)
    constants: List[ConstantRecord] = Field(default_factory=list)
    passed: bool = False
    meta: Optional[RunMeta] = None

    def body_json(self) -> str:
        """The deterministic part of the report (everything except meta)"""
        return self.model_dump_json(exclude={"meta"}, indent=2)
