import json
import math

import numpy as np
import pytest

from gauss_reduce.bogoliubov import GaussianTransform, random_transform, transform_distance
from gauss_reduce.builtins import d2_circuit, qnd_circuit
from gauss_reduce.cli import main
from gauss_reduce.elements import Circuit, compile_circuit
from gauss_reduce.reduction import BlochMessiahForm, recompose
from gauss_reduce.serialization import (
    circuit_from_dict,
    circuit_to_dict,
    decode_complex,
    form_from_dict,
    transform_to_dict,
)

from conftest import haar


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


class TestValidate:
    def test_empty_circuit(self, tmp_path, capsys):
        code, out = run_json(capsys, "validate", write(tmp_path, "e.json", {"n_modes": 2, "elements": []}))
        assert code == 0 and out["valid"] and out["max_residual"] == 0

    def test_non_symplectic(self, tmp_path, capsys):
        bad = {"n_modes": 1, "A": [[[1.0, 0.0]]], "B": [[[1.0, 0.0]]]}
        code, out = run_json(capsys, "validate", write(tmp_path, "bad.json", bad))
        assert code == 1 and not out["valid"]

    def test_qnd_file(self, tmp_path, capsys):
        code, _ = run_json(capsys, "validate", write(tmp_path, "q.json", circuit_to_dict(qnd_circuit())))
        assert code == 0

    def test_parse_error(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{")
        assert main(["validate", str(path)]) == 2
        assert "error" in capsys.readouterr().err

    def test_bad_element(self, tmp_path, capsys):
        doc = {"n_modes": 2, "elements": [{"kind": "squeezer", "modes": [5], "params": {"r": 0.1}}]}
        assert main(["validate", write(tmp_path, "x.json", doc)]) == 2

    def test_unknown_command(self, capsys):
        assert main(["explode"]) == 2

    def test_missing_input(self, capsys):
        assert main(["validate"]) == 2


class TestReduce:
    def test_qnd(self, capsys):
        code, out = run_json(capsys, "reduce", "--builtin", "qnd")
        assert code == 0
        assert len(out["squeezers"]) == 2
        for sq in out["squeezers"]:
            assert sq["db"] == pytest.approx(4.18, abs=0.005)

    def test_d2(self, capsys):
        code, out = run_json(capsys, "reduce", "--builtin", "d2")
        assert code == 0 and np.allclose(out["r"], [0.5, 0.5], atol=1e-12)

    def test_passive(self, tmp_path, capsys):
        c = Circuit(3).append("multiport", [0, 1, 2], unitary=haar(3, 0))
        code, out = run_json(capsys, "reduce", write(tmp_path, "p.json", circuit_to_dict(c)))
        assert code == 0 and out["squeezers"] == []

    def test_json_round_trips_through_recompose(self, tmp_path, capsys):
        T = random_transform(4, 1.0, 5)
        code, out = run_json(capsys, "reduce", write(tmp_path, "t.json", transform_to_dict(T)))
        assert code == 0
        assert transform_distance(recompose(form_from_dict(out)), T) <= max(out["residual"], 1e-15) * 1.0001

    def test_db_convention(self, capsys):
        _, out = run_json(capsys, "reduce", "--builtin", "d2")
        assert out["db"][0] == pytest.approx(10 * math.log10(math.exp(1.0)))

    def test_text_output(self, capsys):
        assert main(["reduce", "--builtin", "qnd"]) == 0
        assert "4.180 dB" in capsys.readouterr().out

    def test_invalid_input_exits_1(self, tmp_path, capsys):
        bad = {"A": [[2.0]], "B": [[0.0]]}
        assert main(["reduce", write(tmp_path, "bad.json", bad)]) == 1


class TestSynthesize:
    def test_identity(self, tmp_path, capsys):
        code, out = run_json(capsys, "synthesize", write(tmp_path, "i.json", {"n_modes": 3, "elements": []}))
        assert code == 0 and out["circuit"]["elements"] == []

    def test_qnd(self, capsys):
        code, out = run_json(capsys, "synthesize", "--builtin", "qnd")
        kinds = [el["kind"] for el in out["circuit"]["elements"]]
        assert code == 0 and kinds.count("squeezer") == 2 and "beamsplitter" in kinds
        recompiled = compile_circuit(circuit_from_dict(out["circuit"]))
        assert transform_distance(recompiled, compile_circuit(qnd_circuit())) < 1e-9

    def test_random_six_mode(self, tmp_path, capsys):
        T = random_transform(6, 1.0, 9)
        code, out = run_json(capsys, "synthesize", write(tmp_path, "r.json", transform_to_dict(T)))
        assert code == 0 and out["recompile_distance"] < 1e-9
        assert transform_distance(compile_circuit(circuit_from_dict(out["circuit"])), T) < 1e-9


class TestEquiv:
    def test_same_file(self, tmp_path, capsys):
        p = write(tmp_path, "d.json", circuit_to_dict(d2_circuit()))
        code, out = run_json(capsys, "equiv", p, p)
        assert code == 0 and out["distance"] == 0

    def test_fig2_exact(self, capsys):
        code, out = run_json(capsys, "equiv", "--builtin", "fig2")
        assert code == 0 and out["distance"] < 1e-12

    def test_fig3_spectrum(self, capsys):
        code, out = run_json(capsys, "equiv", "--builtin", "fig3", "--mode", "spectrum")
        assert code == 0
        assert np.allclose(out["spectrum_a"], [0.5] * 4) and np.allclose(out["spectrum_b"], [0.5] * 4)

    def test_fig3_not_exact(self, capsys):
        assert main(["equiv", "--builtin", "fig3"]) == 1

    def test_different(self, tmp_path, capsys):
        a = write(tmp_path, "a.json", circuit_to_dict(d2_circuit(0.5)))
        b = write(tmp_path, "b.json", circuit_to_dict(d2_circuit(0.6)))
        assert main(["equiv", a, b]) == 1
        assert main(["equiv", a, b, "--mode", "spectrum"]) == 1

    def test_mode_mismatch(self, tmp_path, capsys):
        a = write(tmp_path, "a.json", {"n_modes": 2, "elements": []})
        b = write(tmp_path, "b.json", {"n_modes": 3, "elements": []})
        assert main(["equiv", a, b]) == 2


class TestSpectrum:
    def test_e4(self, capsys):
        code, out = run_json(capsys, "spectrum", "--builtin", "e4")
        assert code == 0 and out["squeezer_count"] == 4


class TestNogo:
    def test_weak_downconverter(self, tmp_path, capsys):
        p = write(tmp_path, "w.json", circuit_to_dict(d2_circuit(0.05)))
        code, out = run_json(capsys, "nogo", p, "--click", "1")
        assert code == 0 and out["confirmed"]
        assert out["one_photon_weight"] > 0.99
        assert decode_complex(out["coeffs"], 1)[0] == pytest.approx(math.tanh(0.05))

    def test_passive_null(self, tmp_path, capsys):
        c = Circuit(2).append("beamsplitter", [0, 1], theta=0.4)
        code, out = run_json(capsys, "nogo", write(tmp_path, "p.json", circuit_to_dict(c)))
        assert code == 0 and out["null"]

    def test_random_seed_7(self, capsys):
        code, out = run_json(capsys, "nogo", "--builtin", "random", "--seed", "7", "--vacuum", "1,2", "--click", "3")
        assert code == 0 and out["confirmed"] and out["discrepancy"] < 1e-6

    def test_displaced_circuit_rejected(self, tmp_path, capsys):
        c = d2_circuit().append("displacement", [0], beta=[0.5])
        assert main(["nogo", write(tmp_path, "d.json", circuit_to_dict(c))]) == 2

    def test_bad_vacuum_list(self, capsys):
        assert main(["nogo", "--builtin", "d2", "--vacuum", "a,b"]) == 2

    def test_negative_cutoff(self, capsys):
        assert main(["nogo", "--builtin", "d2", "--cutoff", "-1"]) == 2


class TestQndDemo:
    def test_numbers(self, capsys):
        code, out = run_json(capsys, "qnd-demo")
        assert code == 0
        assert math.degrees(out["theta"]) == pytest.approx(31.72, abs=0.01)
        assert sorted(out["transmissions"]) == pytest.approx([0.2764, 0.7236], abs=1e-4)
        assert all(v < 1e-12 for v in out["residuals"].values())
        assert out["db"] == pytest.approx([4.18, 4.18], abs=0.005)

    def test_text_in_degrees(self, capsys):
        assert main(["qnd-demo"]) == 0
        assert "31.7175 deg" in capsys.readouterr().out


class TestTolerance:
    def test_env_override_changes_verdict(self, tmp_path, capsys, monkeypatch):
        # residual ~1e-9: invalid at the default tolerance, valid at 1e-6
        T = GaussianTransform(np.array([[1 + 1e-9]]), np.zeros((1, 1)), None)
        p = write(tmp_path, "near.json", transform_to_dict(T))
        assert main(["validate", p]) == 1
        monkeypatch.setenv("GAUSS_REDUCE_TOL", "1e-6")
        assert main(["validate", p]) == 0
        assert main(["validate", p, "--tol", "1e-12"]) == 1

    def test_nonpositive_tol(self, capsys):
        assert main(["validate", "--builtin", "qnd", "--tol", "0"]) == 2

    def test_bad_env(self, capsys, monkeypatch):
        monkeypatch.setenv("GAUSS_REDUCE_TOL", "nope")
        assert main(["validate", "--builtin", "qnd"]) == 2


def test_json_outputs_parse_with_loaders(capsys):
    # reduce output loads as a form, synthesize output as a circuit
    _, red = run_json(capsys, "reduce", "--builtin", "e4")
    assert isinstance(form_from_dict(red), BlochMessiahForm)
    _, syn = run_json(capsys, "synthesize", "--builtin", "e4")
    assert isinstance(circuit_from_dict(syn["circuit"]), Circuit)
