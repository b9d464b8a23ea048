"""
Pydantic Schemas
"""
from src.schemas.experiment import ExperimentConfig, GridConfig, UniverseConfig, EnsembleSizes
from src.schemas.report import (
    AcceptanceCheck, ConstantRecord, ExperimentRecord, InequalityRecord, InstanceRecord, Report, RunMeta
)
from src.schemas.certificate import CertificateSchema, LevelSchema

__all__ = [
    "ExperimentConfig", "GridConfig", "UniverseConfig", "EnsembleSizes",
    "AcceptanceCheck", "ConstantRecord", "ExperimentRecord", "InequalityRecord",
    "InstanceRecord", "Report", "RunMeta",
    "CertificateSchema", "LevelSchema",
]
