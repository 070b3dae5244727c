import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any

import pytest

from openmap.cli import Outcome, build_parser, load_json, main, parse_box, parse_closed_ball
from openmap.const import EXIT_NOT_YET, EXIT_OK, EXIT_PARSE_ERROR, EXIT_REFUSED
from openmap.exact.geometry import ClosedBall
from openmap.exact.interval import IntervalBox
from openmap.exact.rational import parse_rat
from openmap.semialgebraic.formula import holds_at, parse_formula

F = Fraction
SMALL = ["--prefix", "64", "--depth", "4", "--prec", "20"]


def run_json(capsys: pytest.CaptureFixture[str], argv: list[str], status: int = EXIT_OK) -> dict[str, Any]:
    assert main(argv) == status
    return json.loads(capsys.readouterr().out)


# --------------------------------------------------------------------------- #
#  Input parsing                                                               #
# --------------------------------------------------------------------------- #


class TestInputs:
    def test_box(self) -> None:
        assert parse_box("[0,1]x[-1/2, 1/2]") == IntervalBox.of((0, 1), (F(-1, 2), F(1, 2)))

    @pytest.mark.parametrize("text", ["", "[0,1]y[0,1]", "[0,1,2]", "[1,0]", "0,1"])
    def test_invalid_box(self, text: str) -> None:
        with pytest.raises(ValueError):
            parse_box(text)

    def test_interval_ball(self) -> None:
        assert parse_closed_ball("[1,2]") == ClosedBall((F(3, 2),), F(1, 2))

    def test_centered_ball(self) -> None:
        assert parse_closed_ball("(0, 1/2)@1/4") == ClosedBall((F(0), F(1, 2)), F(1, 4))

    def test_invalid_ball(self) -> None:
        with pytest.raises(ValueError, match="Invalid ball"):
            parse_closed_ball("(0, 1)")
        with pytest.raises(ValueError, match="Invalid ball"):
            parse_closed_ball("[0,1]x[0,1]")

    def test_json_sources(self, tmp_path: Path, unit_interval_json: dict[str, Any]) -> None:
        path = tmp_path / "set.json"
        path.write_text(json.dumps(unit_interval_json), encoding="utf-8")
        assert load_json(str(path)) == unit_interval_json
        assert load_json(json.dumps(unit_interval_json)) == unit_interval_json
        assert load_json(unit_interval_json) is unit_interval_json

    def test_every_command_registered(self) -> None:
        args = build_parser().parse_args(["zero", "--f", "x1", "--ball", "[0,1]"])
        assert args.command == "zero"
        assert args.function == "x1"

    def test_unknown_command(self) -> None:
        with pytest.raises(SystemExit):
            build_parser().parse_args(["wander"])


# --------------------------------------------------------------------------- #
#  Jobs                                                                        #
# --------------------------------------------------------------------------- #


class TestCommands:
    def test_moc(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run_json(capsys, ["moc", "--f", "2*x1", "--x", "0", "--k", "3", *SMALL]) == {"k": 3, "ell": 5}

    def test_zero(self, capsys: pytest.CaptureFixture[str]) -> None:
        data = run_json(capsys, ["zero", "--f", "x1^3 - 2", "--ball", "[1,2]", "--prec", "20"])
        assert data["precision"] == 20
        (value,) = (parse_rat(c) for c in data["zero"])
        assert abs(value**3 - 2) < F(1, 1 << 17)

    def test_qe(self, capsys: pytest.CaptureFixture[str]) -> None:
        data = run_json(capsys, ["qe", "--formula", "exists y. x = y*y"])
        assert data["variables"] == ["x"]
        result = parse_formula(data["formula"], names=data["variables"])
        assert holds_at(result, (F(4),))
        assert not holds_at(result, (F(-1),))

    def test_cover_check(self, capsys: pytest.CaptureFixture[str], unit_interval_json: dict[str, Any]) -> None:
        data = run_json(capsys, ["cover-check", "--set", json.dumps(unit_interval_json), "--ball", "[1/4,3/4]"])
        assert data["verdict"] == "yes"

    def test_cover_check_not_yet(self, capsys: pytest.CaptureFixture[str], unit_interval_json: dict[str, Any]) -> None:
        argv = ["cover-check", "--set", json.dumps(unit_interval_json), "--ball", "[0,1]", *SMALL]
        assert run_json(capsys, argv, EXIT_NOT_YET)["verdict"] == "not_yet"

    def test_pole_not_yet(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["moc", "--f", "1/x1", "--x", "0", "--k", "0", "--prefix", "16", "--depth", "3", "--prec", "12"]
        assert run_json(capsys, argv, EXIT_NOT_YET)["verdict"] == "not_yet"

    def test_csv_rows(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["sa-enum", "--formula", "x^2 + y^2 < 1", "--bound", "[-1,1]x[-1,1]", "--format", "csv"]
        assert main([*argv, "--prefix", "21", "--depth", "4"]) == EXIT_OK
        rows = capsys.readouterr().out.splitlines()
        assert rows
        for row in rows:
            cx, cy, r = (float(part) for part in row.split(","))
            assert (cx * cx + cy * cy) ** 0.5 + r <= 1 + 1e-9

    def test_output_file(self, tmp_path: Path) -> None:
        out = tmp_path / "results" / "moc.json"
        assert main(["moc", "--f", "2*x1", "--x", "0", "--k", "1", *SMALL, "--out", str(out)]) == EXIT_OK
        assert json.loads(out.read_text(encoding="utf-8")) == {"k": 1, "ell": 3}

    def test_job_file_with_flag_override(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        job = tmp_path / "job.json"
        job.write_text(
            json.dumps({"function": "2*x1", "x": "0", "k": 1, "max_prefix": 64, "max_depth": 4, "max_precision": 20}),
            encoding="utf-8",
        )
        assert run_json(capsys, ["moc", "--job", str(job), "--k", "2"]) == {"k": 2, "ell": 4}


class TestExitStatus:
    def test_parse_error(self, caplog: pytest.LogCaptureFixture) -> None:
        with caplog.at_level(logging.ERROR):
            assert main(["moc", "--f", "sin(x1)", "--x", "0"]) == EXIT_PARSE_ERROR
        assert "invalid moc job" in caplog.text

    def test_constant_division_by_zero(self, caplog: pytest.LogCaptureFixture) -> None:
        with caplog.at_level(logging.ERROR):
            assert main(["moc", "--f", "1/0", "--x", "0"]) == EXIT_PARSE_ERROR
        assert "division by zero" in caplog.text

    def test_missing_flag(self, caplog: pytest.LogCaptureFixture) -> None:
        with caplog.at_level(logging.ERROR):
            assert main(["moc", "--f", "2*x1"]) == EXIT_PARSE_ERROR
        assert "needs --x" in caplog.text

    def test_csv_needs_balls(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["moc", "--f", "2*x1", "--x", "0", *SMALL, "--format", "csv"]) == EXIT_PARSE_ERROR
        assert capsys.readouterr().out == ""

    def test_refused(self) -> None:
        assert main(["zero", "--f", "x1^2 + 1", "--ball", "[-1,1]", "--prec", "10"]) == EXIT_REFUSED

    def test_limits_refused(self) -> None:
        assert main(["qe", "--formula", "exists y. x = y^5"]) == EXIT_REFUSED

    def test_invalid_job_file(self, tmp_path: Path) -> None:
        job = tmp_path / "job.json"
        job.write_text("[1, 2]", encoding="utf-8")
        assert main(["moc", "--job", str(job)]) == EXIT_PARSE_ERROR

    def test_invalid_method(self) -> None:
        assert main(["moo", "--f", "2*x1", "--x", "0", "--method", "guess"]) == EXIT_PARSE_ERROR

    def test_dispatch_uses_handler(self, mocker: Any, capsys: pytest.CaptureFixture[str]) -> None:
        handler = mocker.Mock(return_value=Outcome({"ok": True}))
        mocker.patch.dict("openmap.cli._HANDLERS", {"moc": handler})
        assert run_json(capsys, ["moc", "--f", "x1", "--x", "0"]) == {"ok": True}
        handler.assert_called_once()
