"""
Decomposition Certificate Schemas
"""
from typing import List

from pydantic import BaseModel, Field

from src.schemas.report import InequalityRecord
from src.utils.tilecode import format_tile, format_tiles


class LevelSchema(BaseModel):
    j: int
    case: str
    tiles: List[str] = Field(default_factory=list)
    tops: List[str] = Field(default_factory=list)
    energy: float = 0.0
    mass: float = 0.0
    residual_energy: float = 0.0
    residual_mass: float = 0.0
    sum_tops: float = 0.0
    passes: List[str] = Field(default_factory=list)
    checks: List[InequalityRecord] = Field(default_factory=list)


class CertificateSchema(BaseModel):
    dim: int
    m0: int
    c0: float
    c1: float
    c2: float
    chain_sum: float
    partition_ok: bool
    passed: bool
    failures: List[str] = Field(default_factory=list)
    levels: List[LevelSchema] = Field(default_factory=list)

    @classmethod
    def from_certificate(cls, cert) -> "CertificateSchema":
        """Serialize a DecompositionCertificate with tiles in text form"""
        levels = [
            LevelSchema(
                j=level.j,
                case=level.case,
                tiles=list(format_tiles(level.tiles)),
                tops=[format_tile(t.top) for t in level.trees],
                energy=level.energy,
                mass=level.mass,
                residual_energy=level.residual_energy,
                residual_mass=level.residual_mass,
                sum_tops=level.sum_tops,
                passes=list(level.passes),
                checks=[InequalityRecord.from_check(c) for c in level.checks],
            )
            for level in cert.levels
        ]
        return cls(
            dim=cert.dim,
            m0=cert.m0,
            c0=cert.c0,
            c1=cert.c1,
            c2=cert.c2,
            chain_sum=cert.chain_sum,
            partition_ok=cert.partition_ok,
            passed=cert.passed,
            failures=cert.failures(),
            levels=levels,
        )
