import json
import re
import shutil
import subprocess
import sys

import pytest

from stability_forge import corpus
from stability_forge.algebra import format_rational, parse_rational
from stability_forge.cli import main
from stability_forge.runner import InputError, JobSpec, dumps, run, validate

CONIC = {"variables": 3, "generators": ["x0*x2 - x1^2"], "weight": [1, -1, 0], "tasks": ["futaki", "lu"]}
CUBIC = {"variables": 4, "generators": ["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"],
         "weight": [3, 1, -1, -3], "tasks": ["hilbert"]}


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def test_conic_futaki_and_lu():
    report = run(JobSpec.from_dict(CONIC))
    assert report["F1"] == "3/8"
    assert report["hypersurface"]["lu_slope"] == "3/2"
    assert report["hypersurface"]["multiplicity_free"] is True


def test_twisted_cubic_hilbert():
    h = run(JobSpec.from_dict(CUBIC))["hilbert"]
    assert (h["P"], h["n"], h["d"], h["mu"]) == ("3*m + 1", 1, 3, "2/3")


def test_empty_tasks_exit_one(tmp_path, capsys):
    path = write(tmp_path, "job.json", dict(CONIC, tasks=[]))
    assert main(["run", str(path)]) == 1
    out, err = capsys.readouterr()
    assert out == ""
    payload = json.loads(err)["error"]
    assert set(payload) == {"module", "message", "fragment", "exit_code"}
    assert payload["exit_code"] == 1


def test_budget_exhaustion_exit_two(tmp_path, capsys):
    path = write(tmp_path, "job.json", CUBIC)
    assert main(["run", str(path), "--budget", "1"]) == 2
    out, err = capsys.readouterr()
    assert out == "" and json.loads(err)["error"]["module"] == "groebner-engine"


def test_budget_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("STABILITY_FORGE_BUDGET", "1")
    assert main(["run", str(write(tmp_path, "job.json", CUBIC))]) == 2


def test_regularity_cap_exit_two(tmp_path, capsys):
    job = {"variables": 2, "generators": ["x0^12"], "weight": [1, -1], "tasks": ["hilbert"]}
    assert main(["run", str(write(tmp_path, "job.json", job)), "--m-cap", "8"]) == 2


def test_malformed_json_and_schema(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", str(bad)]) == 1
    assert main(["run", str(write(tmp_path, "s.json", {"variables": 3}))]) == 1
    assert main(["run", str(tmp_path / "missing.json")]) == 1


def test_parse_error_reports_fragment(tmp_path, capsys):
    job = dict(CONIC, generators=["x0*x2 - x1^^2"])
    assert main(["run", str(write(tmp_path, "job.json", job))]) == 1
    err = json.loads(capsys.readouterr().err)["error"]
    assert err["fragment"] == "x0*x2 - x1^^2"
    assert "offset" in err["message"]


# -- validate ----------------------------------------------------------------

def test_validate_non_traceless_weight():
    diags = validate(JobSpec.from_dict(dict(CONIC, weight=[1, 0, 0])))
    assert len(diags) == 1 and diags[0]["level"] == "warning"
    msg = diags[0]["message"]
    assert "non-traceless" in msg and "-1/3" in msg and "(2,-1,-1)" in msg and "rescaled by 3" in msg


def test_validate_clean_input_is_silent():
    assert validate(JobSpec.from_dict(CONIC)) == []


def test_validate_non_homogeneous(tmp_path, capsys):
    job = dict(CONIC, generators=["x0 + x1^2"])
    diags = validate(JobSpec.from_dict(job))
    assert [d["message"] for d in diags] == ["non-homogeneous generator at index 0"]
    assert main(["validate", str(write(tmp_path, "j.json", job))]) == 1


def test_validate_trivial_ideals():
    diags = validate(JobSpec.from_dict(dict(CONIC, generators=["3"])))
    assert any("trivial ideal" in d["message"] and d["level"] == "error" for d in diags)
    diags = validate(JobSpec.from_dict(dict(CONIC, generators=["x0 - x0"])))
    assert any("trivial ideal" in d["message"] and d["level"] == "warning" for d in diags)


def test_validate_never_raises():
    odd = JobSpec(variables=3, generators=[None], weight=["a"], tasks=["bogus"])
    diags = validate(odd)
    assert diags and all(d["level"] in {"error", "warning", "info"} for d in diags)


# -- determinism and serialization ------------------------------------------

def test_byte_determinism_across_runs_and_task_order(tmp_path, capsys):
    job = dict(CUBIC, tasks=["hilbert", "futaki", "chow", "constants"])
    outs = []
    for tasks in (job["tasks"], list(reversed(job["tasks"])), job["tasks"]):
        assert main(["run", str(write(tmp_path, "j.json", dict(job, tasks=tasks)))]) == 0
        out = capsys.readouterr().out
        outs.append(json.loads(out))
        outs[-1]["job"].pop("tasks")
    assert outs[0] == outs[1] == outs[2]


RATIONAL = re.compile(r"^-?[0-9]+(/[0-9]+)?$")


def _strings(node):
    if isinstance(node, dict):
        for v in node.values():
            yield from _strings(v)
    elif isinstance(node, list):
        for v in node:
            yield from _strings(v)
    elif isinstance(node, str):
        yield node


@pytest.mark.parametrize("entry", corpus.entries(), ids=lambda e: e.name)
def test_rationals_round_trip(entry):
    report = run(entry.job())
    for s in _strings(report):
        if RATIONAL.match(s):
            assert format_rational(parse_rational(s)) == s
    assert dumps(report) == dumps(run(entry.job()))


def test_fd_slope_override(tmp_path, capsys):
    job = dict(CUBIC, tasks=["report"])
    assert main(["run", str(write(tmp_path, "j.json", job)), "--fd-slope", "5/2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdicts"]["fd_slope"] == "5/2"


# -- corpus ------------------------------------------------------------------

def test_corpus_list(capsys):
    assert main(["corpus", "list"]) == 0
    names = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
    assert set(names) == {"conic_e1", "conic_e2", "conic_e3", "twisted_cubic",
                          "fermat_cubic_surface", "nodal_plane_cubic"}


def test_corpus_run_all_passes(capsys):
    assert main(["corpus", "run-all"]) == 0
    out = capsys.readouterr().out
    assert out.strip().endswith("0 failed")


def test_tampered_golden_names_field(tmp_path, capsys):
    target = tmp_path / "corpus"
    shutil.copytree(corpus.corpus_dir(), target)
    golden = target / "conic_e1.golden.json"
    data = json.loads(golden.read_text())
    data["F1"] = "1/8"
    golden.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n")
    assert main(["corpus", "run-all", "--corpus-dir", str(target)]) == 1
    out = capsys.readouterr().out
    assert "FAIL  conic_e1" in out
    assert 'F1: expected "1/8", actual "3/8"' in out


def test_console_script_entry_point(tmp_path):
    path = write(tmp_path, "job.json", CONIC)
    proc = subprocess.run([sys.executable, "-m", "stability_forge.cli", "run", str(path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["F1"] == "3/8"


def test_lu_on_non_hypersurface_is_input_error():
    with pytest.raises(InputError):
        run(JobSpec.from_dict(dict(CUBIC, tasks=["lu"])))
