"""
Run Storage Service

Handles file operations for one run directory: sampled fields, the JSON
report, per-instance tables, decomposition certificates and plot data.
"""
import csv
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.config import get_settings
from src.models.grid import DirectionField, Grid, GridFunction, SetIndicator
from src.schemas.report import Report

logger = logging.getLogger(__name__)

Field = Union[GridFunction, SetIndicator, DirectionField]


class StorageService:
    """
    File storage for a run directory

    Directory structure:
    - <base>/report.json: Run report
    - <base>/fields/: Sampled fields (.bin samples + .json header)
    - <base>/tables/: Per-instance CSV rows
    - <base>/certificates/: Decomposition certificates
    - <base>/plots/: Two-column plot-data files
    """

    def __init__(self, base_dir: Union[str, Path]):
        self.base_path = Path(base_dir)
        self.fields_path = self.base_path / "fields"
        self.tables_path = self.base_path / "tables"
        self.plots_path = self.base_path / "plots"
        self.certificates_path = self.base_path / "certificates"

        self._ensure_directories()

    def _ensure_directories(self):
        """Create run directories if they don't exist"""
        for path in [self.base_path, self.fields_path, self.tables_path, self.plots_path, self.certificates_path]:
            path.mkdir(parents=True, exist_ok=True)

    def get_file_path(self, filename: str, file_type: str = "field") -> Path:
        """
        Get full path for a file

        Args:
            filename: Name of the file
            file_type: "field", "table", "plot", "certificate" or "report"

        Raises:
            ValueError: If file_type is invalid
        """
        if file_type == "field":
            return self.fields_path / filename
        elif file_type == "table":
            return self.tables_path / filename
        elif file_type == "plot":
            return self.plots_path / filename
        elif file_type == "certificate":
            return self.certificates_path / filename
        elif file_type == "report":
            return self.base_path / filename
        else:
            raise ValueError(f"Invalid file_type: {file_type}")

    def save_field(self, name: str, field: Field) -> Path:
        """
        Write a field as <name>.bin (C-order samples) next to <name>.json

        Returns:
            Path of the .bin file

        Raises:
            OSError: If writing fails
        """
        if isinstance(field, GridFunction):
            kind, data, extra = "grid_function", field.samples, {"domain": field.domain}
        elif isinstance(field, SetIndicator):
            kind, data, extra = "set_indicator", field.member.astype(np.uint8), {}
        elif isinstance(field, DirectionField):
            kind, data, extra = "direction_field", field.value, {}
        else:
            raise ValueError(f"Cannot store {type(field).__name__}")
        header = {
            "kind": kind,
            "dtype": str(data.dtype),
            "shape": list(data.shape),
            "grid": {"dim": field.grid.dim, "log2_length": field.grid.log2_length, "log2_points": field.grid.log2_points},
            **extra,
        }
        bin_path = self.get_file_path(f"{name}.bin")
        try:
            np.ascontiguousarray(data).tofile(bin_path)
            self.get_file_path(f"{name}.json").write_text(json.dumps(header, indent=2))
        except Exception as e:
            raise OSError(f"Failed to save field {name}: {str(e)}")
        return bin_path

    def load_field(self, name: str) -> Field:
        """
        Read a field written by save_field

        Raises:
            FileNotFoundError: If the header or samples are missing
            ValueError: If the header names an unknown kind
        """
        header_path = self.get_file_path(f"{name}.json")
        if not header_path.exists():
            raise FileNotFoundError(f"Field header not found: {header_path}")
        header = json.loads(header_path.read_text())
        grid = Grid(**header["grid"])
        data = np.fromfile(self.get_file_path(f"{name}.bin"), dtype=np.dtype(header["dtype"]))
        data = data.reshape(header["shape"])
        if header["kind"] == "grid_function":
            return GridFunction(grid, data, header["domain"])
        if header["kind"] == "set_indicator":
            return SetIndicator(grid, data.astype(bool))
        if header["kind"] == "direction_field":
            return DirectionField(grid, data)
        raise ValueError(f"Unknown field kind: {header['kind']}")

    def save_report(self, report: Report, filename: str = "report.json") -> Path:
        path = self.get_file_path(filename, "report")
        path.write_text(report.model_dump_json(indent=2))
        return path

    def load_report(self, filename: str = "report.json") -> Report:
        return Report.model_validate_json(self.get_file_path(filename, "report").read_text())

    def save_json(self, filename: str, payload: Union[dict, str], file_type: str = "table") -> Path:
        path = self.get_file_path(filename, file_type)
        path.write_text(payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True))
        return path

    def save_table(self, filename: str, rows: Sequence[Dict[str, object]]) -> Path:
        """
        Write rows as CSV with the union of their keys as columns (first-seen order)

        Returns:
            Path of the CSV file
        """
        columns: List[str] = []
        for row in rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
        path = self.get_file_path(filename, "table")
        with open(path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=columns, restval="")
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
        return path

    def save_plot_data(self, filename: str, points: Sequence[Tuple[float, float]], header: Tuple[str, str] = ("x", "y")) -> Path:
        """Two whitespace-separated columns with a commented header line"""
        path = self.get_file_path(filename, "plot")
        lines = [f"# {header[0]} {header[1]}"] + [f"{x:.17g} {y:.17g}" for x, y in points]
        path.write_text("\n".join(lines) + "\n")
        return path

    def load_plot_data(self, filename: str) -> np.ndarray:
        return np.loadtxt(self.get_file_path(filename, "plot"), comments="#", ndmin=2)

    def file_exists(self, filename: str, file_type: str = "field") -> bool:
        return self.get_file_path(filename, file_type).exists()


def get_storage_service(out_dir: Optional[Union[str, Path]] = None) -> StorageService:
    """
    Get a storage service for a run directory

    Args:
        out_dir: Run directory (default: settings.output_dir)
    """
    return StorageService(out_dir if out_dir is not None else get_settings().output_dir)
