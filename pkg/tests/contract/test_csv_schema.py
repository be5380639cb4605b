"""Contract tests for the raster CSV export.

These tests verify the CSV contract:
- Provenance comment lines come before a fixed header
- One data row per grid point in row-major order, %.17g values
- Missing points are written as nan and read back as missing
- Too many missing points fail with the most frequent violation
"""

import numpy as np
import pytest

from src.lib.fieldcore import cart_cyl
from src.models.error_types import DomainError, ExportError, ParameterError, SamplingError
from src.models.params import AnnulusGrid, PlaneGrid
from src.services.sampling import CSV_HEADER, export_csv, is_close_raster, read_csv, sample_grid


def _wave(x):
    return np.array([np.exp(1j * x[1]), x[2] + 0.1j, 1.0 / 3.0])


@pytest.fixture
def small_raster():
    """2 x 2 plane raster of a smooth field."""
    grid = PlaneGrid(axis=0, offset=0.5, u_range=(-1.0, 1.0), v_range=(0.0, 2.0), n_u=2, n_v=2)
    return sample_grid(grid, _wave, meta={"preset": "demo", "seed": 0})


class TestCsvContract:
    """Contract tests for export_csv and read_csv."""

    def test_header_and_row_count(self, small_raster, tmp_path):
        """Test comment lines, the header and one row per point."""
        path = export_csv(small_raster, tmp_path / "demo.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        body = [line for line in lines if not line.startswith("#")]

        assert lines[0] == '# format: "beams-raster/1"'
        assert len(body) == 5
        assert body[0].split(",") == CSV_HEADER
        assert any(line.startswith("# meta:") and '"preset": "demo"' in line for line in lines)

    def test_row_major_order(self, small_raster, tmp_path):
        """Test rows run over v fastest."""
        body = [line for line in export_csv(small_raster, tmp_path / "d.csv").read_text().splitlines() if not line.startswith("#")]
        uv = [tuple(float(t) for t in row.split(",")[:2]) for row in body[1:]]

        assert uv == [(-1.0, 0.0), (-1.0, 2.0), (1.0, 0.0), (1.0, 2.0)]

    def test_round_trip_is_exact(self, small_raster, tmp_path):
        """Test %.17g values read back bit for bit."""
        back = read_csv(export_csv(small_raster, tmp_path / "demo.csv"))

        assert np.array_equal(back.values, small_raster.values)
        assert np.array_equal(back.points, small_raster.points)
        assert back.grid == small_raster.grid
        assert back.meta == {"preset": "demo", "seed": 0}

    def test_missing_points(self, tmp_path):
        """Test a point on the axis is written as nan and read back as missing."""
        grid = PlaneGrid(axis=0, u_range=(0.0, 1.0), v_range=(0.0, 1.0), n_u=2, n_v=2)
        raster = sample_grid(grid, lambda x: cart_cyl(x).r, missing_limit=0.5)

        assert raster.missing[0, 0]
        assert raster.violations == {"r > r_min": 1}
        text = export_csv(raster, tmp_path / "m.csv").read_text()
        assert "# missing: 1" in text
        assert "nan" in text
        back = read_csv(tmp_path / "m.csv")
        assert back.missing.tolist() == [[True, False], [False, False]]

    def test_sampling_error_names_worst_constraint(self):
        """Test exceeding the missing limit raises SamplingError."""

        def guarded(x):
            raise DomainError("theta in (0, pi)", x)

        grid = AnnulusGrid(r_range=(1.0, 2.0), n_u=2, n_v=4)
        with pytest.raises(SamplingError) as exc_info:
            sample_grid(grid, guarded)

        assert exc_info.value.worst_constraint == "theta in (0, pi)"
        assert exc_info.value.missing_fraction == 1.0

    def test_workers_do_not_change_output(self, tmp_path):
        """Test 1 and 4 workers write identical files."""
        grid = PlaneGrid(n_u=5, n_v=7)
        one = export_csv(sample_grid(grid, _wave, workers=1), tmp_path / "one.csv")
        four = export_csv(sample_grid(grid, _wave, workers=4), tmp_path / "four.csv")

        assert one.read_bytes() == four.read_bytes()
        assert is_close_raster(read_csv(one), read_csv(four), rel=0.0)

    def test_unwritable_destination(self, small_raster, tmp_path):
        """Test a directory as destination raises ExportError."""
        with pytest.raises(ExportError) as exc_info:
            export_csv(small_raster, tmp_path)

        assert exc_info.value.destination == str(tmp_path)

    def test_wrong_header(self, tmp_path):
        """Test a foreign CSV is rejected."""
        path = tmp_path / "foreign.csv"
        path.write_text("# shape: [1, 1]\na,b,c\n1,2,3\n", encoding="utf-8")

        with pytest.raises(ParameterError):
            read_csv(path)

    def test_missing_shape_line(self, small_raster, tmp_path):
        """Test the shape provenance line is required."""
        path = export_csv(small_raster, tmp_path / "demo.csv")
        text = "\n".join(line for line in path.read_text().splitlines() if not line.startswith("# shape")) + "\n"
        path.write_text(text)

        with pytest.raises(ParameterError):
            read_csv(path)
