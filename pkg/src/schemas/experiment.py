"""
Experiment Config Schemas
"""
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from src.utils.tilecode import TileCodecError, parse_cube

EXPERIMENTS = (
    "counting-mass",
    "counting-energy",
    "decompose",
    "tree-inequality",
    "bessel",
    "weak-l2",
    "sjolin",
    "claim1",
)


class GridConfig(BaseModel):
    """Box side L = 2^log2_length with 2^log2_points points per axis"""
    log2_length: int = Field(..., ge=1, le=12)
    log2_points: int = Field(..., ge=2, le=12)


class UniverseConfig(BaseModel):
    """Scales k_min..k_max inside time_box × freq_box (cubes in "k:(m1,…,mn)" form)"""
    k_min: int
    k_max: int
    time_box: str
    freq_box: str

    @field_validator("time_box", "freq_box")
    @classmethod
    def _cube_text(cls, value: str) -> str:
        try:
            parse_cube(value)
        except TileCodecError as e:
            raise ValueError(str(e)) from e
        return value

    @property
    def time_cube(self):
        return parse_cube(self.time_box)

    @property
    def freq_cube(self):
        return parse_cube(self.freq_box)


class EnsembleSizes(BaseModel):
    """Instances per experiment"""
    counting_mass: int = Field(100, ge=0)
    counting_energy: int = Field(100, ge=0)
    decompose: int = Field(50, ge=0)
    tree_inequality: int = Field(200, ge=0)
    bessel: int = Field(100, ge=0)
    weak_l2: int = Field(100, ge=0)
    sjolin: int = Field(50, ge=0)
    claim1: int = Field(50, ge=0)

    def size(self, experiment: str) -> int:
        return getattr(self, experiment.replace("-", "_"))


class ExperimentConfig(BaseModel):
    """Everything a run needs; the CLI loads it from a JSON document"""
    dim: int = Field(..., ge=1, le=3, description="Dimension n")
    grid: GridConfig
    universe: UniverseConfig
    ensemble: EnsembleSizes = Field(default_factory=EnsembleSizes)
    tile_count: int = Field(16, ge=0, description="Tiles per random tile set")
    tree_max_tiles: int = Field(30, ge=1)
    seed: int = Field(0, ge=0)
    r: int = Field(2, ge=2, description="Semitile index of the energy trees and of N")
    multiplier: str = "riesz_1"
    nu: int = Field(5, ge=0, description="Decay exponent of the packet profile check")
    mass_exponent: Optional[float] = Field(None, gt=0, description="Mass kernel exponent (default 10n)")
    zeta_refinement: int = Field(2, ge=0, description="Finest refinement level of the ζ grid")
    sjolin_zeta_per_axis: int = Field(4, ge=1)
    target_measure: float = Field(0.5, gt=0, le=1)
    test_function: str = "smooth-noise"
    persist_fields: bool = False
    oracle_tolerance: float = Field(1e-8, gt=0)
    baseline: Dict[str, float] = Field(default_factory=dict)

    @field_validator("test_function")
    @classmethod
    def _known_kind(cls, value: str) -> str:
        from src.services.analysis.signals import KINDS
        if value not in KINDS:
            raise ValueError(f"Unknown test function kind: {value}")
        return value

    def experiments(self, which: str) -> List[str]:
        """Expand "all" into the experiment list"""
        if which == "all":
            return list(EXPERIMENTS)
        if which not in EXPERIMENTS:
            raise ValueError(f"Unknown experiment: {which}")
        return [which]
