import io
import json

import pytest

from contextuality import scenarios
from contextuality.cli import main
from contextuality.coupling import identity_coupling, maximal_coupling
from contextuality.cyclic import AnalysisReport, analyze
from contextuality.schema import connections_to_json, dumps, expectations_to_json, load_system
from contextuality.systems import MarginalSummary, PairDistribution


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def write(tmp_path, name, document):
    path = tmp_path / name
    path.write_text(dumps(document) if not isinstance(document, str) else document)
    return str(path)


@pytest.fixture
def generated(tmp_path):
    def make(*argv):
        code, text = run("generate", *argv)
        assert code == 0
        return write(tmp_path, f"{'_'.join(argv)}.json", text)
    return make


def test_analyze_pr_box(generated):
    code, text = run("analyze", generated("pr-box"))
    assert code == 0
    assert "CNTX = 1.000000000, contextual" in text


def test_analyze_all_correlated(generated):
    code, text = run("analyze", generated("all-correlated"))
    assert code == 0
    assert "CNTX = 0, noncontextual" in text


@pytest.mark.parametrize("scenario", ["pr-box", "tsirelson", "kcbs-quantum", "specker", "all-correlated"])
def test_bundled_scenarios_never_disagree(generated, scenario):
    code, text = run("analyze", generated(scenario))
    assert code == 0, text
    assert "oracle:" in text


def test_malformed_json(tmp_path, capsys):
    code, _ = run("analyze", write(tmp_path, "bad.json", '{"type": "cyclic",\n  "n": }'))
    assert code == 1
    assert "line 2" in capsys.readouterr().err


def test_invalid_system_lists_violations(tmp_path, capsys):
    doc = {"type": "cyclic", "n": 3, "pairs": [{"i": i, "pp": 0.7, "pm": 0.7, "mp": 0, "mm": 0} for i in (1, 2, 3)]}
    code, _ = run("analyze", write(tmp_path, "sum.json", doc))
    assert code == 1
    assert "pmf does not sum to 1" in capsys.readouterr().err


def test_missing_file():
    assert run("analyze", "/nonexistent/system.json")[0] == 1


def test_generate_tsirelson_digits():
    code, text = run("generate", "tsirelson")
    doc = json.loads(text)
    assert doc["vw"] == [0.7071067811865476] * 3 + [-0.7071067811865476]


def test_generate_specker():
    doc = json.loads(run("generate", "specker")[1])
    assert doc["type"] == "generic"
    for bunch in doc["bunches"]:
        assert bunch["pmf"] == {"++": 0.0, "+-": 0.5, "-+": 0.5, "--": 0.0}


def test_generate_random_deterministic():
    assert run("generate", "random", "--n", "5", "--seed", "7") == run("generate", "random", "--n", "5", "--seed", "7")


@pytest.mark.parametrize(
    "argv",
    [
        ("generate", "random", "--n", "5"),
        ("generate", "random", "--n", "2", "--seed", "1"),
        ("generate", "random", "--n", "13", "--seed", "1"),
        ("generate", "random", "--n", "4", "--seed", str(2**64)),
        ("generate", "nonsense"),
        ("frobnicate",),
    ],
)
def test_generate_bad_flags(argv):
    assert run(*argv)[0] == 1


def test_round_trip_1000_seeds(tmp_path):
    path = tmp_path / "system.json"
    for seed in range(1000):
        n = 3 + seed % 10
        code, text = run("generate", "random", "--n", str(n), "--seed", str(seed))
        assert code == 0
        path.write_text(text)
        flags = () if n <= 4 else ("--no-lp",)
        code, report = run("analyze", str(path), *flags)
        assert code == 0, (seed, report)


def test_json_report_round_trip(generated):
    path = generated("tsirelson")
    code, text = run("analyze", path, "--json")
    assert code == 0
    doc = json.loads(text)
    assert doc["system"] == "cyclic"
    assert all(v["agreement"] for v in doc["oracle"])
    parsed = AnalysisReport.from_dict(doc["report"])
    with open(path) as fh:
        expected = analyze(load_system(json.load(fh)))
    assert parsed == expected
    assert "delta_min" in doc["report"]["certificates"]


def test_tolerance_env(generated, monkeypatch):
    monkeypatch.setenv("CBD_TOLERANCE", "0.5")
    code, text = run("analyze", generated("tsirelson"))
    assert code == 0
    assert "CNTX = 0.414213562, noncontextual" in text
    assert "lp      contextual" in text
    monkeypatch.setenv("CBD_TOLERANCE", "abc")
    assert run("analyze", generated("tsirelson"))[0] == 1


def test_compat_specker(tmp_path, generated):
    connections = write(tmp_path, "ids.json", connections_to_json([identity_coupling(0.0)] * 3))
    code, text = run("compat", generated("specker"), connections)
    assert code == 0
    assert "s_odd = 6 > 4 : incompatible" in text
    assert "LP cross-check: infeasible (certificate verified)" in text


def test_compat_independent(tmp_path):
    system = write(tmp_path, "ind.json", expectations_to_json(MarginalSummary((0.0,) * 4, (0.0,) * 4, (0.0,) * 4)))
    connections = write(tmp_path, "c.json", connections_to_json([PairDistribution(0.25, 0.25, 0.25, 0.25)] * 4))
    code, text = run("compat", system, connections, "--json")
    assert code == 0
    doc = json.loads(text)
    assert doc["compatible"] and doc["lp_feasible"] and doc["lp_certificate_verified"]


def test_compat_marginal_mismatch(tmp_path, generated, capsys):
    connections = write(tmp_path, "m.json", connections_to_json([maximal_coupling(0.9, 0.5)] * 4))
    code, _ = run("compat", generated("tsirelson"), connections)
    assert code == 1
    assert "connection 1" in capsys.readouterr().err


def test_scenarios_constant_matches_cli():
    assert set(scenarios.SCENARIOS) == {"pr-box", "tsirelson", "kcbs-quantum", "specker", "all-correlated", "random"}
