import pytest

from matterwave.utils.data_loader import MeasurementLoader
from matterwave.utils.errors import DataFormatError


def write(tmp_path, text):
    path = tmp_path / "data.csv"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_load_with_comments_and_sigma(tmp_path):
    path = write(tmp_path, "# 电子束测量\nscreen_distance_m,ratio,sigma\n1e-3,0.5,0.01\n\n# 第二点\n2e-3,0.25,\n")
    data = MeasurementLoader(path).load_measurements()
    assert len(data) == 2
    assert data[0].screen_distance == 1e-3 and data[0].sigma == 0.01
    assert data[1].ratio == 0.25 and data[1].sigma is None


def test_load_without_sigma_column(tmp_path):
    path = write(tmp_path, "screen_distance_m,ratio\n1e-3,0.5\n")
    frame = MeasurementLoader(path).load_data()
    assert list(frame.columns) == ["screen_distance_m", "ratio", "sigma", "line"]
    assert frame["line"].tolist() == [2]


def test_bad_header(tmp_path):
    path = write(tmp_path, "distance,ratio\n1e-3,0.5\n")
    with pytest.raises(DataFormatError) as info:
        MeasurementLoader(path).load_data()
    assert info.value.line == 1


def test_wrong_field_count_names_line(tmp_path):
    path = write(tmp_path, "# 注释\nscreen_distance_m,ratio\n1e-3,0.5\n2e-3,0.4,0.1\n")
    with pytest.raises(DataFormatError) as info:
        MeasurementLoader(path).load_data()
    assert info.value.line == 4
    assert "第4行" in str(info.value)


def test_non_numeric_value_names_line(tmp_path):
    path = write(tmp_path, "screen_distance_m,ratio\n1e-3,0.5\n2e-3,abc\n")
    with pytest.raises(DataFormatError) as info:
        MeasurementLoader(path).load_data()
    assert info.value.line == 3


def test_out_of_range_ratio_names_line(tmp_path):
    path = write(tmp_path, "screen_distance_m,ratio\n1e-3,1.5\n")
    with pytest.raises(DataFormatError) as info:
        MeasurementLoader(path).load_measurements()
    assert info.value.line == 2


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        MeasurementLoader(str(tmp_path / "missing.csv")).load_data()
