import json
import subprocess
import sys

import numpy as np
import pytest

from capt import serialization as ser
from capt.channels import random_channel
from capt.cli import construct_bundle, main
from capt.states import (
    classical_quantum_qubit_state,
    maximally_entangled_state,
    maximally_mixed,
    product_state,
    random_density_matrix,
)
from capt.tomography import run_experiment


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_osd_bell(tmp_path, capsys):
    f = _write(tmp_path / "bell.json", ser.state_to_dict(maximally_entangled_state(2)))
    code, out = _run(capsys, "osd", f)
    assert code == 0 and out["osr"] == 4 and out["seed"] == 0


def test_osd_product(tmp_path, capsys):
    rho = product_state(random_density_matrix(2, 0), random_density_matrix(3, 1))
    code, out = _run(capsys, "osd", _write(tmp_path / "p.json", ser.state_to_dict(rho)))
    assert code == 0 and out["osr"] == 1


def test_osd_malformed(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text("{not json")
    assert main(["osd", str(f)]) == 2
    assert main(["osd", str(tmp_path / "missing.json")]) == 2


def test_osd_invalid_state(tmp_path):
    f = _write(tmp_path / "neg.json", {"dims": [2, 2], "matrix": ser.encode_array(np.diag([1.5, -0.5, 0, 0]))})
    assert main(["osd", f]) == 3


def test_parse_errors_exit_2():
    with pytest.raises(SystemExit) as e:
        main(["construct", "theorem9"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["construct", "sigma", "--d", "1"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["osd", "x.json", "--tol", "0"])
    assert e.value.code == 2


def test_construct_block_unitaries(capsys):
    code, out = _run(capsys, "construct", "theorem3", "--d", "4", "--k", "2")
    assert code == 0
    assert len(out["unitaries"]) == 4 and out["report"]["faithful"]
    assert out["scheme"] == "CAPT" and out["construction"] == "theorem3"


def test_construct_sigma(capsys):
    code, out = _run(capsys, "construct", "sigma", "--d", "3")
    assert code == 0 and len(out["unitaries"]) == 2 and out["state"]["dims"] == [3, 3]


def test_construct_generic_unitaries_forbidden(tmp_path):
    rho = product_state(maximally_mixed(2), random_density_matrix(2, 0))
    f = _write(tmp_path / "mm.json", ser.state_to_dict(rho))
    assert main(["construct", "theorem2", "--state", f]) == 4


def test_construct_discord_rejects_classical(tmp_path):
    f = _write(tmp_path / "cq.json", ser.state_to_dict(classical_quantum_qubit_state(2)))
    assert main(["construct", "discord", "--state", f]) == 5


def test_construct_missing_params():
    assert main(["construct", "theorem1", "--d", "2"]) == 2


@pytest.mark.parametrize("scheme,args", [
    ("theorem1", ["--d", "3", "--k", "2"]),
    ("theorem2", ["--d", "2"]),
    ("theorem3", ["--d", "3", "--k", "2"]),
    ("discord", []),
    ("sigma", ["--d", "3"]),
])
def test_construct_pipes_into_run(scheme, args, tmp_path, capsys):
    plan = tmp_path / "plan.json"
    assert main(["construct", scheme, *args, "--seed", "3", "--out", str(plan)]) == 0
    code, out = _run(capsys, "run", str(plan), "--random-channel", "7")
    assert code == 0 and out["exact"] and out["choi_error"] < 1e-8
    # bit-identical to the library call on the same plan
    lib = run_experiment(ser.plan_from_dict(ser.load(plan)), random_channel(out["estimated"]["dim_in"], 7, 2))
    assert np.array_equal(ser.decode_array(out["estimated"]["choi"]), lib.estimated.choi)


def test_bundle_seed_deterministic():
    assert construct_bundle("theorem2", d=2, seed=4) == construct_bundle("theorem2", d=2, seed=4)


def test_run_non_faithful_exits_1(tmp_path, capsys):
    bundle = construct_bundle("theorem3", d=4, k=2)
    bundle["unitaries"] = bundle["unitaries"][:2]
    f = _write(tmp_path / "nf.json", bundle)
    code, out = _run(capsys, "run", f)
    assert code == 1 and out["determined_dim"] < 16


def test_run_with_channel_file(tmp_path, capsys):
    plan = _write(tmp_path / "p.json", construct_bundle("sigma", d=3))
    ch = _write(tmp_path / "c.json", ser.channel_to_dict(random_channel(3, 2)))
    code, out = _run(capsys, "run", plan, "--channel", ch)
    assert code == 0 and out["choi_error"] < 1e-8


def test_run_dimension_mismatch(tmp_path):
    plan = _write(tmp_path / "p.json", construct_bundle("sigma", d=3))
    ch = _write(tmp_path / "c.json", ser.channel_to_dict(random_channel(2, 2)))
    assert main(["run", plan, "--channel", ch]) == 3


def test_run_with_shots_honours_tol(tmp_path, capsys):
    plan = _write(tmp_path / "p.json", construct_bundle("theorem3", d=2, k=1))
    code, out = _run(capsys, "run", plan, "--shots", "100000", "--tol", "0.5")
    assert out["choi_error"] > 0 and out["shots"] == 100000
    assert code == (0 if out["choi_error"] <= 0.5 else 1)
    code, out = _run(capsys, "run", plan, "--shots", "100000", "--tol", "1e-6")
    assert code == 1


def test_faithful_check(tmp_path, capsys):
    f = _write(tmp_path / "s.json", {"states": [ser.state_to_dict(maximally_entangled_state(2))]})
    code, out = _run(capsys, "faithful-check", f)
    assert code == 0 and out["span_dim"] == 4 and "frame" in out
    rho = product_state(random_density_matrix(2, 0), random_density_matrix(2, 1))
    f = _write(tmp_path / "p.json", [ser.state_to_dict(rho)])
    code, out = _run(capsys, "faithful-check", f)
    assert code == 1 and out["span_dim"] == 1
    plan = _write(tmp_path / "plan.json", construct_bundle("sigma", d=3))
    assert _run(capsys, "faithful-check", plan)[0] == 0


def test_batch(tmp_path, capsys):
    exps = [{"plan": construct_bundle("sigma", d=3), "random_channel": {"seed": s}} for s in range(3)]
    cfg = _write(tmp_path / "cfg.json", {"experiments": exps})
    out = tmp_path / "res.jsonl"
    assert main(["batch", cfg, "--workers", "2", "--out", str(out)]) == 0
    lines = [json.loads(x) for x in out.read_text().splitlines()]
    assert len(lines) == 3 and all(r["exact"] for r in lines)


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "capt.cli", "construct", "theorem3", "--d", "2", "--k", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["report"]["faithful"]
