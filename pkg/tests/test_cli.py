"""
Tests for src/main.py (the typer CLI)
"""
import json
import math

import pytest
from typer.testing import CliRunner

from src.config import config as app_config
from src.main import app

runner = CliRunner()


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, mocker):
    """Defaults restored after every test; config writes land in tmp_path."""
    mocker.patch('src.config.Config._get_config_path', return_value=tmp_path / "config.json")
    for key, value in {"default_format": "plain", "default_stencil_order": 2, "dealias": True, "blowup_threshold": 1e6}.items():
        mocker.patch.object(app_config, key, value)


def run_json(tmp_path, *args):
    out = tmp_path / "out.json"
    result = runner.invoke(app, [*args, "--format", "json", "--out", str(out)])
    assert result.exit_code == 0, result.output
    return json.loads(out.read_text())


class TestSymbolicCommands:
    def test_classify_json(self, tmp_path):
        data = run_json(tmp_path, "classify", "--n", "1", "--deg-t", "1", "--deg-x", "1", "--deg-y", "3")
        assert data["schema"] == 1
        assert data["dimension"] == 8
        assert data["expected_dimension"] == 8
        assert data["family_in_span"] is True
        assert data["all_verified"] is True
        assert all(entry["verified"] for entry in data["basis"])

    def test_classify_with_jets(self, tmp_path):
        data = run_json(tmp_path, "classify", "--deg-t", "1", "--deg-x", "0", "--deg-y", "1", "--jet-deg", "1")
        assert data["spec"]["jet_vars"] == ["u", "u_t", "u_x", "u_y1"]
        assert data["jet_dependent"] == 0
        assert data["dimension"] == 4

    def test_classify_csv(self):
        result = runner.invoke(app, ["classify", "--deg-t", "1", "--deg-x", "0", "--deg-y", "0", "--format", "csv"])
        assert result.exit_code == 0
        assert "index,chi,verified" in result.output
        assert '2,"t",true' in result.output

    def test_verify_non_characteristic(self):
        """A nonzero residual is a result, not an error."""
        result = runner.invoke(app, ["verify", "--chi", "t*x"])
        assert result.exit_code == 0
        assert "residual = 1" in result.output
        assert "verified: false" in result.output

    def test_verify_family_member(self, tmp_path):
        data = run_json(tmp_path, "verify", "--chi", "t*x - 1/4*y1^2", "--b", "2")
        assert data["verified"] is True
        assert data["residual"]["terms"] == []

    def test_fluxes_latex(self):
        result = runner.invoke(app, ["fluxes", "--chi", "t", "--format", "latex"])
        assert result.exit_code == 0
        assert "\\begin{aligned}" in result.output
        assert "residual = 0" in result.output

    def test_fluxes_json(self, tmp_path):
        data = run_json(tmp_path, "fluxes", "--chi", "x*t", "--a", "2", "--b", "-1")
        assert data["conserved"] is False
        assert len(data["zeta"]) == 1
        assert len(data["residual"]["terms"]) == 1

    def test_derive_adjoint(self):
        result = runner.invoke(app, ["derive-adjoint"])
        assert result.exit_code == 0
        for piece in ["chi_tx", "f1*chi_tt", "a*chi_ttt", "b*chi_y1y1"]:
            assert piece in result.output

    def test_derive_adjoint_substituted(self):
        result = runner.invoke(app, ["derive-adjoint", "--n", "2", "--a", "2", "--b", "3"])
        assert result.exit_code == 0
        assert "2*chi_ttt" in result.output
        assert "3*chi_y2y2" in result.output

    def test_derive_adjoint_split(self, tmp_path):
        data = run_json(tmp_path, "derive-adjoint", "--split")
        assert {"adjoint", "coefficient_f1", "f_free", "phi_t0", "phi_t1"} <= set(data)

    def test_n1_family(self):
        result = runner.invoke(app, ["n1-family", "--xi0", "x", "--b", "2"])
        assert result.exit_code == 0
        assert "chi = -1/4*y1^2 + t*x" in result.output
        assert "verified: true" in result.output

    def test_deterministic_output(self, tmp_path):
        outputs = []
        for name in ("first.txt", "second.txt"):
            out = tmp_path / name
            result = runner.invoke(app, ["classify", "--deg-x", "2", "--deg-y", "2", "--out", str(out)])
            assert result.exit_code == 0
            outputs.append(out.read_text())
        assert outputs[0] == outputs[1]


class TestUsageErrors:
    @pytest.mark.parametrize(
        "args",
        [
            ["classify", "--b", "0"],
            ["verify", "--chi", "t", "--a", "0.5"],
            ["verify", "--chi", "y3", "--n", "2"],
            ["verify", "--chi", "t +"],
            ["n1-family", "--eta0", "t"],
            ["classify", "--format", "yaml"],
            ["convergence", "--target", "nope"],
            ["fd-check", "--stencil-order", "3"],
        ],
    )
    def test_exit_code_two(self, args):
        result = runner.invoke(app, args)
        assert result.exit_code == 2

    def test_domain_error_exit_code_one(self):
        """Jet content in a flux characteristic is a domain error."""
        result = runner.invoke(app, ["fluxes", "--chi", "u_t"])
        assert result.exit_code == 1
        assert "Error" in result.output


class TestNumericCommands:
    def test_fd_check(self, tmp_path):
        data = run_json(tmp_path, "fd-check", "--chi", "t")
        assert set(data) == {"schema", "h", "max_norm", "l2_norm"}
        assert 0 < data["max_norm"] < 1

    def test_fd_check_closed_form(self, tmp_path):
        data = run_json(tmp_path, "fd-check", "--chi", "x*t", "--closed-form")
        assert data["max_norm"] < 1

    def test_solve_manufactured_and_reload(self, tmp_path):
        field = tmp_path / "field.csv"
        data = run_json(
            tmp_path, "solve", "--manufactured", "--nt", "16", "--ny", "17", "--nx", "11",
            "--ly", "3", "--lx", "0.5", "--field-out", str(field),
        )
        assert data["error_max"] < 1e-4
        assert field.exists()

        check = run_json(tmp_path, "fd-check", "--field", str(field), "--chi", "t")
        assert check["h"] == pytest.approx(2 * math.pi / 16)

    def test_convergence_csv(self, tmp_path):
        out = tmp_path / "conv.csv"
        result = runner.invoke(
            app, ["convergence", "--target", "fd", "--nt", "8", "--ny", "9", "--nx", "9", "--levels", "3", "--out", str(out)]
        )
        assert result.exit_code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "level,h,max_norm,l2_norm,observed_order"
        assert len(lines) == 4


    @pytest.mark.parametrize("target", ["fd", "solve", "mms"])
    def test_convergence_default_flags(self, tmp_path, target):
        """Every target runs to completion on its own default grid."""
        data = run_json(tmp_path, "convergence", "--target", target)
        assert data["target"] == target
        assert len(data["rows"]) == 3
        assert data["rows"][-1]["max_norm"] < data["rows"][0]["max_norm"]

    def test_convergence_fd_order(self, tmp_path):
        data = run_json(tmp_path, "convergence", "--target", "fd", "--chi", "t*x - 1/2*y1^2", "--ny", "25")
        assert 1.8 <= data["rows"][-1]["observed_order"] <= 2.2


class TestConfigCommand:
    def test_show(self):
        result = runner.invoke(app, ["config"])
        assert result.exit_code == 0
        assert "Current Configuration" in result.output

    def test_update(self, tmp_path):
        result = runner.invoke(app, ["config", "--format", "json", "--no-dealias"])
        assert result.exit_code == 0
        saved = json.loads((tmp_path / "config.json").read_text())
        assert saved["default_format"] == "json"
        assert saved["dealias"] is False

    def test_invalid_value(self):
        result = runner.invoke(app, ["config", "--stencil-order", "6"])
        assert result.exit_code == 2
