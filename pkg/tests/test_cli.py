import json
import os
import subprocess
import sys

import numpy as np
import pytest

from oneshot_secrecy.channel import bundled_path, channel_to_document, load_channel

CHAN = str(bundled_path("diag_deterministic.json"))
DIST = str(bundled_path("uniform_t1.json"))
XOR = str(bundled_path("xor_split.json"))
HKDIST = str(bundled_path("uniform_hk.json"))


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "oneshot_secrecy", *args],
        capture_output=True,
        text=True,
        env=full_env,
    )


def test_oracle_np_prints_divergence():
    out = run_cli("oracle-np", "--p", "0.5,0.5", "--q", "0.9,0.1", "--eps", "0.5")
    assert out.returncode == 0
    assert out.stdout.strip().startswith("3.321928094")


def test_validate_ok_and_broken(tmp_path):
    ok = run_cli("validate", CHAN, "--dist", DIST)
    assert ok.returncode == 0 and "OK" in ok.stdout
    doc = channel_to_document(load_channel(CHAN))
    doc["states"]["0,0"]["re"] = (0.98 * np.array(doc["states"]["0,0"]["re"])).tolist()
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(doc), encoding="utf-8")
    res = run_cli("validate", str(broken))
    assert res.returncode == 1
    assert "0,0" in res.stderr and "trace deviation" in res.stderr
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{oops", encoding="utf-8")
    assert run_cli("validate", str(garbled)).returncode == 2
    assert run_cli("validate", str(tmp_path / "missing.json")).returncode == 2


def test_region_writes_expected_corner(tmp_path):
    out_json = tmp_path / "r.json"
    out_csv = tmp_path / "v.csv"
    res = run_cli(
        "region", "--channel", CHAN, "--dist", DIST, "--theorem", "t1",
        "--eps", "0.25", "--penalties", "off",
        "--out", str(out_json), "--csv", str(out_csv),
    )
    assert res.returncode == 0
    assert "0.415037499279" in out_csv.read_text()
    report = json.loads(out_json.read_text())
    assert report["flags"]["degenerate"] is False
    assert report["params"]["eps"] == 0.25
    assert report["penalties"]["mode"] == "off"
    assert len(report["rows"]) == 3
    assert report["secrecy"]["pass"] is True


def test_region_determinism(tmp_path):
    paths = []
    for tag in ("a", "b"):
        oj, oc = tmp_path / f"{tag}.json", tmp_path / f"{tag}.csv"
        res = run_cli(
            "region", "--channel", XOR, "--dist", HKDIST, "--theorem", "conjecture",
            "--eps", "0.25", "--penalties", "paper",
            "--out", str(oj), "--csv", str(oc),
        )
        assert res.returncode == 0
        paths.append((oj.read_bytes(), oc.read_bytes()))
    assert paths[0] == paths[1]


def test_quantities_table():
    res = run_cli(
        "quantities", "--channel", CHAN, "--dist", DIST,
        "--grouping", "X1:X2,Y1|Q", "--grouping", "X1:Z",
        "--eps", "0.25",
    )
    assert res.returncode == 0
    assert "ht_mutual_info" in res.stdout
    assert "1.41503749928" in res.stdout  # I_H(X1 : X2 Y1 | Q)
    assert "binary_entropy" in res.stdout


def test_fm_command(tmp_path):
    doc = {
        "variables": ["R1", "R10", "R11"],
        "rows": [
            {"coeffs": {"R10": 1.0}, "bound": 2.0},
            {"coeffs": {"R11": 1.0}, "bound": 3.0},
            {"coeffs": {"R10": 1.0, "R11": 1.0}, "bound": 4.0},
        ],
        "equalities": [{"coeffs": {"R1": 1.0, "R10": -1.0, "R11": -1.0}, "value": 0.0}],
    }
    src = tmp_path / "poly.json"
    src.write_text(json.dumps(doc), encoding="utf-8")
    out = tmp_path / "projected.json"
    res = run_cli("fm", "--input", str(src), "--eliminate", "R10,R11", "--out", str(out))
    assert res.returncode == 0
    projected = json.loads(out.read_text())
    assert projected["variables"] == ["R1"]
    bounds = [r["bound"] / r["coeffs"]["R1"] for r in projected["rows"] if r["coeffs"].get("R1", 0) > 0]
    assert min(bounds) == pytest.approx(4.0, abs=1e-9)


def test_sweep_thread_determinism(tmp_path):
    outputs = []
    for threads in ("1", "8"):
        csv = tmp_path / f"front_{threads}.csv"
        res = run_cli(
            "sweep", "--channel", CHAN, "--theorem", "t1", "--grid", "3",
            "--eps", "0.25", "--penalties", "off", "--csv", str(csv),
            env={"ONESHOT_THREADS": threads},
        )
        assert res.returncode == 0
        outputs.append(csv.read_bytes())
    assert outputs[0] == outputs[1]
    header = outputs[0].decode().splitlines()[0]
    assert header == "direction,R1,R2"


def test_unknown_flags_exit_2():
    assert run_cli("region", "--bogus").returncode == 2
