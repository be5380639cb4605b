"""Contract tests for P6 pixmap rendering.

These tests verify the pixmap contract:
- Binary P6 header "P6\\n<width> <height>\\n255\\n" followed by width*height*3 bytes
- Rows are grid u, columns grid v
- Missing pixels are gray; an all-missing raster cannot be rendered
- A YAML sidecar with bounds, colormap and provenance sits next to the image
"""

import numpy as np
import pytest
import yaml

from src.models.error_types import ParameterError, RenderError
from src.models.params import PlaneGrid
from src.services.render import colormap_table, read_pixmap, render_pixmap
from src.services.sampling import FieldRaster, sample_grid

SIDECAR_KEYS = {
    "image",
    "quantity",
    "component",
    "normalization",
    "log_floor",
    "colormap",
    "bounds",
    "data_range",
    "missing_pixels",
    "provenance",
    "assumed",
}


def _raster(fn, n_u=3, n_v=5):
    grid = PlaneGrid(axis=0, u_range=(0.5, 1.5), v_range=(-2.0, 2.0), n_u=n_u, n_v=n_v)
    return sample_grid(grid, fn, meta={"preset": "demo"})


def _all_missing():
    values = np.full((2, 2, 3), np.nan + 0j)
    return FieldRaster(
        grid=None,
        u=np.arange(2.0),
        v=np.arange(2.0),
        points=np.zeros((2, 2, 3)),
        values=values,
        missing=np.ones((2, 2), dtype=bool),
    )


class TestPixmapContract:
    """Contract tests for render_pixmap."""

    def test_header_and_size(self, tmp_path):
        """Test the P6 header and the byte count."""
        render_pixmap(_raster(lambda x: x), tmp_path / "img.ppm")
        data = (tmp_path / "img.ppm").read_bytes()

        assert data.startswith(b"P6\n5 3\n255\n")
        assert len(data) == len(b"P6\n5 3\n255\n") + 5 * 3 * 3

    def test_read_back_shape(self, tmp_path):
        """Test read_pixmap returns (height=n_u, width=n_v, 3)."""
        render_pixmap(_raster(lambda x: x), tmp_path / "img.ppm")

        assert read_pixmap(tmp_path / "img.ppm").shape == (3, 5, 3)

    def test_constant_raster_is_uniform(self, tmp_path):
        """Test a constant modulus maps to the top of the colormap everywhere."""
        render_pixmap(_raster(lambda x: 2.0), tmp_path / "flat.ppm")
        pixels = read_pixmap(tmp_path / "flat.ppm")

        assert np.all(pixels == colormap_table("viridis")[255])

    def test_sidecar(self, tmp_path):
        """Test the sidecar path, its keys and its content."""
        returned = render_pixmap(_raster(lambda x: x), tmp_path / "img.ppm", assumed=["grid chosen for the test"])
        on_disk = yaml.safe_load((tmp_path / "img.yaml").read_text(encoding="utf-8"))

        assert set(on_disk) == SIDECAR_KEYS
        assert on_disk == returned
        assert on_disk["image"] == {"path": "img.ppm", "format": "P6", "width": 5, "height": 3, "maxval": 255}
        assert on_disk["provenance"] == {"preset": "demo"}
        assert on_disk["assumed"] == ["grid chosen for the test"]
        assert on_disk["colormap"] == "viridis"

    def test_signed_quantity_is_symmetric(self, tmp_path):
        """Test re/im use a diverging map with bounds [-max, max]."""
        sidecar = render_pixmap(_raster(lambda x: x), tmp_path / "re.ppm", quantity="re", component=2)

        assert sidecar["colormap"] == "RdBu_r"
        assert sidecar["bounds"] == [-2.0, 2.0]
        assert sidecar["data_range"] == [-2.0, 2.0]

    def test_log_normalization(self, tmp_path):
        """Test log bounds span log10(floor * max) to log10(max)."""
        sidecar = render_pixmap(_raster(lambda x: x), tmp_path / "log.ppm", component="norm", normalization="log", log_floor=1e-3)
        top = sidecar["data_range"][1]

        assert sidecar["bounds"] == pytest.approx([np.log10(1e-3 * top), np.log10(top)])
        assert sidecar["log_floor"] == 1e-3

    def test_missing_pixels_are_gray(self, tmp_path):
        """Test masked points render as (128, 128, 128)."""
        raster = _raster(lambda x: x)
        raster.missing[1, 2] = True
        sidecar = render_pixmap(raster, tmp_path / "hole.ppm")
        pixels = read_pixmap(tmp_path / "hole.ppm")

        assert sidecar["missing_pixels"] == 1
        assert pixels[1, 2].tolist() == [128, 128, 128]

    def test_all_missing_raster(self, tmp_path):
        """Test that a raster without finite pixels raises RenderError."""
        with pytest.raises(RenderError):
            render_pixmap(_all_missing(), tmp_path / "none.ppm")

        assert not (tmp_path / "none.ppm").exists()

    def test_bad_options(self, tmp_path):
        """Test unknown normalization and colormap names."""
        raster = _raster(lambda x: x)
        with pytest.raises(ParameterError):
            render_pixmap(raster, tmp_path / "a.ppm", normalization="sqrt")
        with pytest.raises(ParameterError):
            render_pixmap(raster, tmp_path / "b.ppm", colormap="not-a-colormap")

    def test_deterministic_bytes(self, tmp_path):
        """Test rendering the same raster twice gives identical files."""
        raster = _raster(lambda x: np.exp(1j * x))
        render_pixmap(raster, tmp_path / "one.ppm", quantity="im", component=1)
        render_pixmap(raster, tmp_path / "two.ppm", quantity="im", component=1)

        assert (tmp_path / "one.ppm").read_bytes() == (tmp_path / "two.ppm").read_bytes()
