import json

import numpy as np
import pandas as pd
import pytest

from exit_spectra.dataclass_models import SPECTRUM_COLUMNS, SpectrumRow, to_plain
from exit_spectra.enums import Provenance, ReportTypes
from exit_spectra.exceptions import ValidationError
from exit_spectra.factories import ReportFactory
from exit_spectra.utils import (
    CustomWarning,
    Utilities,
    WarningManager,
    resolve_worker_count,
    rows_to_records,
)


@pytest.fixture
def utilities() -> Utilities:
    return Utilities()


def spectrum_rows():
    values = [np.tanh(0.5), 1 / 3, 2.0 ** -40]
    return [
        ReportFactory.get_report(
            ReportTypes.SPECTRUM_ROW,
            model_id="Q_-1",
            b_or_custom="-1",
            m=2,
            R=1.0,
            k=k,
            A_hat_k=value,
            A_raw_k=value * 7.38,
            tol=1e-10,
            provenance=Provenance.QUADRATURE,
        )
        for k, value in enumerate(values)
    ]


def test_report_factory_builds_rows():
    row = spectrum_rows()[0]
    assert isinstance(row, SpectrumRow)
    record = row.to_dict()
    assert list(record) == SPECTRUM_COLUMNS
    assert record["provenance"] == "quadrature"
    assert isinstance(record["A_hat_k"], float)
    assert ReportFactory.is_registered(ReportTypes.MESH_REPORT)


def test_set_params_ignores_none_and_unknown_keys():
    report = ReportFactory.get_report(
        ReportTypes.INTRINSIC_REPORT, direction="le", passed=None, colour="red"
    )
    assert report.direction == "le"
    assert report.passed is False
    assert not hasattr(report, "colour")
    assert report.to_dict(exclude_keys=["verdicts"]).keys() == {
        "schema_version",
        "inputs",
        "direction",
        "curvature_margin",
        "passed",
    }


def test_to_plain():
    plain = to_plain({"a": np.float64(0.5), "b": np.arange(2), "c": (Provenance.MESH, np.bool_(True))})
    assert plain == {"a": 0.5, "b": [0, 1], "c": ["mesh", True]}
    assert type(plain["b"][0]) is int


def test_csv_round_trip_is_exact(tmp_path, utilities):
    rows = rows_to_records(spectrum_rows())
    path = utilities.write_csv(rows, tmp_path / "out" / "spectrum.csv", SPECTRUM_COLUMNS)
    frame = Utilities.read_report(path)
    assert isinstance(frame, pd.DataFrame)
    assert list(frame.columns) == SPECTRUM_COLUMNS
    assert frame["A_hat_k"].tolist() == [row["A_hat_k"] for row in rows]
    assert frame["A_raw_k"].tolist() == [row["A_raw_k"] for row in rows]
    assert not list(path.parent.glob(".*.tmp"))


def test_json_reports(tmp_path, utilities):
    report = ReportFactory.get_report(ReportTypes.SUITE_REPORT, quick=True, passed=True).to_dict()
    path = utilities.write_json(report, tmp_path / "suite.json")
    assert Utilities.read_report(path) == report
    assert json.loads(path.read_text())["schema_version"] == "1"


def test_read_report_rejects_unknown_files(tmp_path):
    plain = tmp_path / "plain.json"
    plain.write_text('{"a": 1}')
    with pytest.raises(ValidationError, match="schema_version"):
        Utilities.read_report(plain)
    other = tmp_path / "table.txt"
    other.write_text("x")
    with pytest.raises(ValidationError):
        Utilities.read_report(other)


def test_atomic_write_replaces_existing(tmp_path):
    path = tmp_path / "file.txt"
    path.write_text("old")
    Utilities.atomic_write_text(path, "new")
    assert path.read_text() == "new"
    assert [p.name for p in tmp_path.iterdir()] == ["file.txt"]


def test_worker_count(monkeypatch):
    monkeypatch.delenv("EXITSPEC_THREADS", raising=False)
    assert resolve_worker_count(3) == 3
    assert resolve_worker_count(0) == 1
    monkeypatch.setenv("EXITSPEC_THREADS", "2")
    assert resolve_worker_count(8) == 2
    assert resolve_worker_count(1) == 1
    assert resolve_worker_count() <= 2


@pytest.mark.parametrize("value", ["zero", "0", "-3"])
def test_invalid_thread_variable(monkeypatch, value):
    monkeypatch.setenv("EXITSPEC_THREADS", value)
    with pytest.raises(ValidationError):
        resolve_worker_count(4)


def test_warning_manager():
    manager = WarningManager()
    with pytest.warns(CustomWarning, match="coarse"):
        warning = manager.log_warning("time_step", "coarse step", "run-1")
    with pytest.warns(CustomWarning):
        manager.log_warning("mesh_quality", "obtuse triangles")
        manager.log_warning("time_step", "still coarse")
    assert warning.category == "time_step"
    assert manager.warning_count == 3
    assert manager.by_category() == {"time_step": 2, "mesh_quality": 1}
    assert manager.summary()[0] == {
        "category": "time_step",
        "message": "coarse step",
        "entry_id": "run-1",
    }
