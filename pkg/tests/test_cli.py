import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from votelab import Digraph, Profile, Ranking, WeightedProfile, X3CInstance
from votelab.cli import main
from votelab import io as vio

SCHEMAS = Path(__file__).resolve().parent.parent / "src" / "votelab" / "schemas"


def load_schema(name):
    return json.loads((SCHEMAS / name).read_text())


@pytest.fixture
def unanimous(tmp_path):
    path = tmp_path / "una.profile"
    vio.write_profile(Profile.of([[0, 1, 2]] * 3), path)
    return str(path)


@pytest.fixture
def cycle_graph(tmp_path):
    path = tmp_path / "cycle.digraph"
    vio.write_digraph(Digraph.of(3, [(0, 1), (1, 2), (2, 0)]), path)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip()
    return code, json.loads(out) if out else None


class TestRoundTrips:
    def test_profile(self, tmp_path):
        p = Profile.of([[2, 0, 1], [1, 2, 0]])
        path = tmp_path / "p.profile"
        vio.write_profile(p, path)
        assert vio.read_profile(path) == p

    def test_weighted_profile(self, tmp_path):
        from fractions import Fraction

        p = WeightedProfile(
            ((Ranking.of([0, 1, 2]), Fraction(1, 2)), (Ranking.of([2, 1, 0]), Fraction(3)))
        )
        path = tmp_path / "p.wprofile"
        vio.write_weighted_profile(p, path)
        assert vio.read_weighted_profile(path) == p
        assert vio.read_any_profile(path) == p

    def test_digraph(self, tmp_path):
        g = Digraph.of(4, [(0, 1), (2, 3)])
        path = tmp_path / "g.digraph"
        vio.write_digraph(g, path)
        assert vio.read_digraph(path) == g

    def test_x3c(self, tmp_path):
        inst = X3CInstance.of(6, [[0, 1, 2], [3, 4, 5]])
        path = tmp_path / "i.x3c"
        vio.write_x3c(inst, path)
        assert vio.read_x3c(path) == inst

    def test_malformed_profile_rejected(self, tmp_path):
        path = tmp_path / "bad.profile"
        path.write_text("3 2\n0 1 2\n")
        with pytest.raises(ValueError):
            vio.read_profile(path)


class TestScoreCommand:
    def test_dodgson_unanimous(self, capsys, unanimous):
        code, result = run_cli(capsys, "score", "dodgson", "--profile", unanimous, "--alt", "0")
        assert code == 0
        assert result == {"score": 0}
        jsonschema.validate(result, load_schema("score_result.schema.json"))

    def test_kemeny_with_threshold(self, capsys, unanimous):
        code, result = run_cli(
            capsys, "score", "kemeny", "--profile", unanimous, "--threshold", "4"
        )
        assert code == 0
        assert result["decision"] == "yes"
        assert result["min_score"] == 0
        jsonschema.validate(result, load_schema("score_result.schema.json"))

    def test_greedy_maybe_exits_zero(self, capsys, tmp_path):
        path = tmp_path / "maybe.profile"
        vio.write_profile(Profile.of([[1, 2, 0], [1, 2, 0], [0, 1, 2]]), path)
        code, result = run_cli(
            capsys, "score", "greedy-dodgson", "--profile", str(path),
            "--alt", "0", "--threshold", "1",
        )
        assert code == 0
        assert result["certainty"] == "maybe"
        assert result["decision"] == "failure"
        jsonschema.validate(result, load_schema("score_result.schema.json"))

    def test_young_and_committees(self, capsys, unanimous):
        code, result = run_cli(capsys, "score", "young", "--profile", unanimous, "--alt", "0")
        assert (code, result["score"]) == (0, 3)
        code, result = run_cli(
            capsys, "score", "cc", "--profile", unanimous, "--committee", "0,1"
        )
        assert code == 0 and result["score"] == -3
        code, result = run_cli(
            capsys, "score", "monroe", "--profile", unanimous, "--k", "1",
            "--threshold", "-3",
        )
        assert code == 0 and result["decision"] == "yes"


class TestExitCodes:
    def test_missing_file_is_input_error(self, capsys):
        assert main(["score", "dodgson", "--profile", "/nonexistent", "--alt", "0"]) == 1

    def test_budget_exceeded(self, capsys, tmp_path):
        path = tmp_path / "wide.profile"
        vio.write_profile(Profile.of([tuple(range(5))]), path)
        code = main(["score", "kemeny", "--profile", str(path), "--budget", "4"])
        assert code == 2

    def test_env_var_sets_default_budget(self, capsys, tmp_path, monkeypatch):
        path = tmp_path / "wide.profile"
        vio.write_profile(Profile.of([tuple(range(5))]), path)
        monkeypatch.setenv("VOTELAB_BUDGET", "4")
        assert main(["score", "kemeny", "--profile", str(path)]) == 2
        monkeypatch.setenv("VOTELAB_BUDGET", "8")
        assert main(["score", "kemeny", "--profile", str(path)]) == 0

    def test_construction_error(self, capsys, tmp_path):
        path = tmp_path / "twocycle.digraph"
        vio.write_digraph(Digraph.of(3, [(0, 1), (1, 0)]), path)
        code = main(["reduce", "mcgarvey", "--input", str(path), "--out", str(tmp_path / "o")])
        assert code == 3

    def test_verdict_failure(self, capsys, tmp_path):
        # per-agent break probability 1/K = 1: preservation rate 0 < 1/2
        config = {
            "claim": "top_preservation",
            "trials": 20,
            "seed": 1,
            "instance": {"q": 3, "subsets": [[0, 1, 2]]},
            "model": {"model": "top_break", "K": 1},
            "pad": 2,
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(config))
        code = main(["experiment", "--config", str(cfg_path), "--out-dir", str(tmp_path)])
        assert code == 4

    def test_unknown_flag_rejected_as_input_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["score", "dodgson", "--bogus", "1"])
        assert exc.value.code == 1


class TestSampleCommand:
    def _params(self, tmp_path):
        path = tmp_path / "params.wprofile"
        from fractions import Fraction

        wp = WeightedProfile(
            ((Ranking.of([0, 1, 2]), Fraction(2)), (Ranking.of([2, 1, 0]), Fraction(1)))
        )
        vio.write_weighted_profile(wp, path)
        return str(path)

    def test_point_mass_reproduces_parameters(self, capsys, tmp_path):
        params = self._params(tmp_path)
        out = tmp_path / "sampled.profile"
        code, result = run_cli(
            capsys, "sample", "--model", '{"model": "alpha_ic", "alpha": "0"}',
            "--params", params, "--out", str(out), "--seed", "3",
        )
        assert code == 0
        sampled = vio.read_profile(out)
        assert sampled == Profile.of([[0, 1, 2], [0, 1, 2], [2, 1, 0]])
        sidecar = json.loads(Path(result["sidecar"]).read_text())
        assert sidecar["seed"] == 3

    def test_same_seed_identical_files(self, capsys, tmp_path):
        params = self._params(tmp_path)
        outs = []
        for name in ("a", "b"):
            out = tmp_path / f"{name}.profile"
            run_cli(
                capsys, "sample", "--model", '{"model": "partial_alt", "K": 1}',
                "--params", params, "--out", str(out), "--seed", "99",
            )
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_partial_alt_full_width_is_identity(self, capsys, tmp_path):
        params = self._params(tmp_path)
        out = tmp_path / "id.profile"
        code, _ = run_cli(
            capsys, "sample", "--model", '{"model": "partial_alt", "K": 3}',
            "--params", params, "--out", str(out), "--seed", "1",
        )
        assert code == 0
        assert vio.read_profile(out) == Profile.of([[0, 1, 2], [0, 1, 2], [2, 1, 0]])


class TestReduceCommand:
    def test_x3c_dodgson_writes_artifacts(self, capsys, tmp_path):
        inst_path = tmp_path / "i.x3c"
        vio.write_x3c(X3CInstance.of(3, [[0, 1, 2]]), inst_path)
        prefix = tmp_path / "red"
        code, result = run_cli(
            capsys, "reduce", "x3c-dodgson", "--input", str(inst_path),
            "--out-prefix", str(prefix),
        )
        assert code == 0
        layout = json.loads(Path(result["layout"]).read_text())
        jsonschema.validate(layout, load_schema("reduction_layout.schema.json"))
        assert layout["m1"] == 8
        profile = vio.read_profile(result["profile"])
        assert profile.m == 8

    def test_mcgarvey_empty_graph(self, capsys, tmp_path):
        g_path = tmp_path / "empty.digraph"
        vio.write_digraph(Digraph.of(3, []), g_path)
        out = tmp_path / "mc.profile"
        code, _ = run_cli(capsys, "reduce", "mcgarvey", "--input", str(g_path), "--out", str(out))
        assert code == 0
        from votelab import wmg

        graph = wmg(vio.read_profile(out))
        assert all(graph.margin(a, b) == 0 for a in range(3) for b in range(3))

    def test_efas_check(self, capsys, cycle_graph):
        code, result = run_cli(
            capsys, "reduce", "efas-check", "--input", cycle_graph, "--threshold", "1"
        )
        assert (code, result) == (0, {"decision": "yes"})
        code, result = run_cli(
            capsys, "reduce", "efas-check", "--input", cycle_graph, "--threshold", "0"
        )
        assert (code, result) == (0, {"decision": "no"})


class TestExperimentCommand:
    def test_summary_validates_and_passes(self, capsys, tmp_path):
        config = {
            "claim": "top_preservation",
            "trials": 25,
            "seed": 8,
            "instance": {"q": 3, "subsets": [[0, 1, 2]]},
            "model": {"model": "partial_alt", "K": "m1"},
            "pad": 2,
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(config))
        jsonschema.validate(config, load_schema("experiment_config.schema.json"))
        code, result = run_cli(
            capsys, "experiment", "--config", str(cfg_path), "--out-dir", str(tmp_path)
        )
        assert code == 0
        assert result["all_pass"] is True
        summary = json.loads(Path(result["json"]).read_text())
        jsonschema.validate(summary, load_schema("experiment_summary.schema.json"))

    def test_malformed_config_is_input_error(self, capsys, tmp_path):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text('{"claim": "definitely_rate"')
        assert main(["experiment", "--config", str(cfg_path)]) == 1


class TestConsoleEntryPoint:
    def test_module_invocation(self, tmp_path):
        path = tmp_path / "p.profile"
        vio.write_profile(Profile.of([[0, 1, 2]]), path)
        proc = subprocess.run(
            [sys.executable, "-m", "votelab.cli", "score", "dodgson",
             "--profile", str(path), "--alt", "0"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout) == {"score": 0}
