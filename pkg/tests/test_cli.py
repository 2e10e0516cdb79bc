"""Command-line surface: subcommands, artifacts and exit codes."""

import json
from pathlib import Path

import pytest

from src.exceptions import (
    ConfigurationError,
    CorruptHeaderError,
    NonFiniteValueError,
    ObjectiveEvaluationError,
    PoolManifestError,
    SoupAbortedError,
    UnknownTensorError,
)
from src.main import EXIT_DATA, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, exit_code_for, main
from src.models import ModelPool
from src.soups import soup_seed
from src.soups.manifold_soup import ManifoldMixSoup
from src.tensor_store import load_checkpoint, mean
from src.utils.pipeline_persistence import load_pool, save_pool


def _write_json(path: Path, data) -> str:
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Task bundle and a three-model pool built through the CLI once per module."""
    root = tmp_path_factory.mktemp("cli")
    task_config = _write_json(
        root / "task.json",
        {
            "format_version": 1,
            "task": {
                "input_dim": 4,
                "num_classes": 3,
                "n_train": 240,
                "n_val": 90,
                "n_test": 120,
                "seed": 3,
                "shifts": [
                    {"shift_id": "noise", "kind": "noise", "magnitude": 0.5},
                    {"shift_id": "rotation", "kind": "rotation", "magnitude": 20},
                ],
            },
        },
    )
    grid = _write_json(
        root / "grid.json",
        {
            "format_version": 1,
            "configs": [
                {"config_id": f"cfg-{i}", "hidden_sizes": [8, 8], "learning_rate": lr,
                 "epochs": 4, "batch_size": 16, "seed": i}
                for i, lr in enumerate((0.02, 0.05, 0.1))
            ],
        },
    )
    assert main(["make-task", "--config", task_config, "--out", str(root / "task")]) == EXIT_OK
    assert main(
        ["train-pool", "--task", str(root / "task"), "--grid", grid, "--out", str(root / "pool"), "--quiet"]
    ) == EXIT_OK
    return {
        "root": root,
        "task_config": task_config,
        "grid": grid,
        "task": root / "task",
        "pool": root / "pool",
    }


# ===== make-task / train-pool =====


def test_make_task_is_reproducible(workspace, tmp_path, capsys):
    out = tmp_path / "again"
    assert main(["make-task", "--config", workspace["task_config"], "--out", str(out)]) == EXIT_OK
    assert str(out / "bundle.json") in capsys.readouterr().out
    for original in workspace["task"].iterdir():
        assert (out / original.name).read_bytes() == original.read_bytes()


def test_make_task_seed_override_changes_data(workspace, tmp_path):
    out = tmp_path / "seeded"
    assert main(
        ["make-task", "--config", workspace["task_config"], "--seed", "4", "--out", str(out)]
    ) == EXIT_OK
    assert (out / "train.ckpt").read_bytes() != (workspace["task"] / "train.ckpt").read_bytes()


def _pool_bytes(directory: Path) -> dict[str, bytes]:
    return {path.name: path.read_bytes() for path in sorted(directory.glob("*.ckpt"))}


def test_train_pool_seed_fans_out_to_every_config(workspace, tmp_path):
    def train(seed: str, name: str) -> Path:
        out = tmp_path / name
        code = main(
            ["train-pool", "--task", str(workspace["task"]), "--grid", workspace["grid"],
             "--seed", seed, "--out", str(out), "--quiet"]
        )
        assert code == EXIT_OK
        return out

    first, again, other = train("11", "a"), train("11", "b"), train("12", "c")
    assert _pool_bytes(first) == _pool_bytes(again)
    assert (first / "pool.json").read_bytes() == (again / "pool.json").read_bytes()
    for name, data in _pool_bytes(other).items():
        assert data != _pool_bytes(first)[name]
        assert data != (workspace["pool"] / name).read_bytes()


def test_experiment_seed_matches_the_subcommands(workspace, tmp_path):
    seed = "21"
    out = tmp_path / "experiment"
    code = main(
        ["experiment", "--task-config", workspace["task_config"], "--grid", workspace["grid"],
         "--variants", "2", "--budget", "10", "--seed", seed, "--out", str(out), "--quiet"]
    )
    assert code == EXIT_OK

    task_dir, pool_dir = tmp_path / "task", tmp_path / "pool"
    assert main(
        ["make-task", "--config", workspace["task_config"], "--seed", seed, "--out", str(task_dir)]
    ) == EXIT_OK
    assert main(
        ["train-pool", "--task", str(task_dir), "--grid", workspace["grid"], "--seed", seed,
         "--out", str(pool_dir), "--quiet"]
    ) == EXIT_OK
    assert (out / "01_task" / "train.ckpt").read_bytes() == (task_dir / "train.ckpt").read_bytes()
    assert _pool_bytes(out / "02_pool") == _pool_bytes(pool_dir)
    assert _pool_bytes(out / "02_pool") != _pool_bytes(workspace["pool"])

    report = json.loads((out / "03_soups" / "manifold-m2" / "soup_report.json").read_text(encoding="utf-8"))
    assert report["seed"] == soup_seed(int(seed))


def test_pool_manifest(workspace):
    manifest = json.loads((workspace["pool"] / "pool.json").read_text(encoding="utf-8"))
    assert manifest["format_version"] == 1
    assert [m["id"] for m in manifest["members"]] == ["cfg-0", "cfg-1", "cfg-2"]
    assert all((workspace["pool"] / m["checkpoint"]).is_file() for m in manifest["members"])


def test_train_pool_rejects_empty_grid(workspace, tmp_path):
    grid = _write_json(tmp_path / "empty.json", {"format_version": 1, "configs": []})
    code = main(["train-pool", "--task", str(workspace["task"]), "--grid", grid, "--out", str(tmp_path / "p")])
    assert code == EXIT_USAGE


def test_unversioned_config_is_a_usage_error(tmp_path):
    config = _write_json(tmp_path / "task.json", {"task": {}})
    assert main(["make-task", "--config", config, "--out", str(tmp_path / "t")]) == EXIT_USAGE


# ===== soup =====


def test_uniform_soup_matches_independent_average(workspace, tmp_path):
    out = tmp_path / "uniform"
    assert main(["soup", "--pool", str(workspace["pool"]), "--method", "uniform", "--out", str(out)]) == EXIT_OK
    fused = load_checkpoint(out / "fused.ckpt")
    assert fused.params == mean(load_pool(workspace["pool"]).params())
    assert fused.metadata["method"] == "uniform"

    report = json.loads((out / "soup_report.json").read_text(encoding="utf-8"))
    assert report["final"]["k"] == 3
    assert report["final"]["val_acc"] is None


def test_manifold_soup_needs_a_partition_source(workspace, tmp_path):
    base = ["soup", "--pool", str(workspace["pool"]), "--task", str(workspace["task"])]
    assert main(base + ["--method", "manifold", "--out", str(tmp_path / "a")]) == EXIT_USAGE
    # --partition and --auto are mutually exclusive
    with pytest.raises(SystemExit) as excinfo:
        main(base + ["--method", "manifold", "--partition", "p.json", "--auto", "2", "--out", str(tmp_path / "b")])
    assert excinfo.value.code == EXIT_USAGE


def test_manifold_soup_without_task_is_a_usage_error(workspace, tmp_path):
    code = main(
        ["soup", "--pool", str(workspace["pool"]), "--method", "manifold", "--auto", "2", "--out", str(tmp_path / "x")]
    )
    assert code == EXIT_USAGE


def test_manifold_soup_echoes_parameters(workspace, tmp_path):
    out = tmp_path / "manifold"
    code = main(
        [
            "soup", "--pool", str(workspace["pool"]), "--task", str(workspace["task"]),
            "--method", "manifold", "--auto", "4:by-name-prefix",
            "--tau", "0.99", "--budget", "20", "--seed", "5", "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    report = json.loads((out / "soup_report.json").read_text(encoding="utf-8"))
    assert (report["tau"], report["budget"], report["seed"], report["solver"]) == (
        0.99, 20, soup_seed(5), "cobyla"
    )
    assert report["partition_m"] == 4
    assert report["final"]["checkpoint_path"] == str(out / "fused.ckpt")

    best_val = max(m["val_acc"] for m in json.loads((workspace["pool"] / "pool.json").read_text())["members"])
    assert report["final"]["val_acc"] >= best_val
    assert report["evaluations"]["total"] == sum(
        v for k, v in report["evaluations"].items() if k != "total"
    )


def test_single_model_pool_has_no_candidates(workspace, tmp_path):
    pool = load_pool(workspace["pool"])
    save_pool(ModelPool(pool.members[:1]), tmp_path / "one")
    out = tmp_path / "soup"
    code = main(
        ["soup", "--pool", str(tmp_path / "one"), "--task", str(workspace["task"]), "--method", "greedy", "--out", str(out)]
    )
    assert code == EXIT_OK
    report = json.loads((out / "soup_report.json").read_text(encoding="utf-8"))
    assert report["candidates"] == []
    assert report["final"]["k"] == 1
    assert load_checkpoint(out / "fused.ckpt").params == pool.members[0].params


@pytest.mark.parametrize("value", ["high", "2", "-0.1"])
def test_invalid_environment_override(workspace, tmp_path, monkeypatch, value):
    monkeypatch.setenv("SOUPKIT_TAU", value)
    code = main(["soup", "--pool", str(workspace["pool"]), "--method", "uniform", "--out", str(tmp_path / "u")])
    assert code == EXIT_USAGE


@pytest.mark.parametrize(
    "flags",
    [["--tau", "1.5"], ["--tau", "-0.1"], ["--tau", "nan"], ["--budget", "0"]],
    ids=["tau-above-one", "negative-tau", "nan-tau", "zero-budget"],
)
@pytest.mark.parametrize("command", ["soup", "experiment"])
def test_out_of_range_soup_flags_are_usage_errors(workspace, tmp_path, command, flags):
    if command == "soup":
        argv = ["soup", "--pool", str(workspace["pool"]), "--task", str(workspace["task"]),
                "--method", "manifold", "--auto", "2"]
    else:
        argv = ["experiment", "--task-config", workspace["task_config"], "--grid", workspace["grid"]]
    with pytest.raises(SystemExit) as excinfo:
        main(argv + flags + ["--out", str(tmp_path / "out")])
    assert excinfo.value.code == EXIT_USAGE
    assert not (tmp_path / "out").exists()


def test_manifold_flags_on_other_methods_are_reported(workspace, tmp_path, caplog):
    out = tmp_path / "uniform"
    with caplog.at_level("WARNING", logger="soupkit"):
        code = main(
            ["soup", "--pool", str(workspace["pool"]), "--method", "uniform",
             "--solver", "nelder-mead", "--tau", "0.9", "--out", str(out)]
        )
    assert code == EXIT_OK
    warnings = [r for r in caplog.records if r.name == "soupkit.cli" and r.levelname == "WARNING"]
    assert len(warnings) == 1
    assert "--tau, --solver ignored by the uniform soup" in warnings[0].getMessage()

    caplog.clear()
    with caplog.at_level("WARNING", logger="soupkit"):
        assert main(["soup", "--pool", str(workspace["pool"]), "--method", "uniform",
                     "--out", str(tmp_path / "plain")]) == EXIT_OK
    assert not [r for r in caplog.records if r.name == "soupkit.cli"]


# ===== eval / report =====


def test_eval_matches_recorded_validation_accuracy(workspace, tmp_path):
    out = tmp_path / "cfg-1.json"
    code = main(["eval", str(workspace["pool"] / "cfg-1.ckpt"), "--task", str(workspace["task"]), "--out", str(out)])
    assert code == EXIT_OK
    result = json.loads(out.read_text(encoding="utf-8"))
    manifest = json.loads((workspace["pool"] / "pool.json").read_text(encoding="utf-8"))
    recorded = next(m["val_acc"] for m in manifest["members"] if m["id"] == "cfg-1")
    assert result["val_acc"] == pytest.approx(recorded, abs=1e-9)
    assert result["label"] == "cfg-1"
    assert result["kind"] == "model"
    assert list(result["shift_accs"]) == ["noise", "rotation"]


def test_eval_of_corrupt_checkpoint_is_a_data_error(workspace, tmp_path):
    bad = tmp_path / "bad.ckpt"
    bad.write_bytes(b"not a checkpoint")
    assert main(["eval", str(bad), "--task", str(workspace["task"])]) == EXIT_DATA


def test_report_outputs(workspace, tmp_path, capsys):
    paths = []
    for member_id in ("cfg-0", "cfg-1", "cfg-2"):
        path = tmp_path / "eval" / f"{member_id}.json"
        path.parent.mkdir(exist_ok=True)
        assert main(["eval", str(workspace["pool"] / f"{member_id}.ckpt"), "--task", str(workspace["task"]),
                     "--out", str(path)]) == EXIT_OK
        paths.append(str(path))

    out = tmp_path / "report"
    assert main(["report", *paths, "--format", "json", "--out", str(out), "--chart", str(out / "chart.png")]) == EXIT_OK
    data = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert [row["label"] for row in data["rows"]] == ["cfg-0", "cfg-1", "cfg-2"]
    assert data["reference"] in {"cfg-0", "cfg-1", "cfg-2"}
    assert (out / "chart.png").is_file()

    capsys.readouterr()
    assert main(["report", *paths, "--reference", "cfg-0"]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "| Method" in printed and "Avg OOD" in printed

    assert main(["report", *paths, "--reference", "nobody"]) == EXIT_USAGE


def test_report_with_missing_input(tmp_path):
    assert main(["report", str(tmp_path / "missing.json")]) == EXIT_DATA


# ===== exit codes =====


def test_exit_code_mapping():
    assert exit_code_for(ConfigurationError("x")) == EXIT_USAGE
    assert exit_code_for(CorruptHeaderError("x")) == EXIT_DATA
    assert exit_code_for(UnknownTensorError("w")) == EXIT_DATA
    assert exit_code_for(PoolManifestError("x")) == EXIT_DATA
    assert exit_code_for(OSError("x")) == EXIT_DATA
    assert exit_code_for(NonFiniteValueError("w")) == EXIT_NUMERIC
    assert exit_code_for(ObjectiveEvaluationError("x", 3)) == EXIT_NUMERIC

    aborted = SoupAbortedError("stopped")
    assert exit_code_for(aborted) == EXIT_DATA
    aborted.__cause__ = ObjectiveEvaluationError("x", 3)
    assert exit_code_for(aborted) == EXIT_NUMERIC


def test_aborted_manifold_variant_fails_the_experiment(workspace, tmp_path, monkeypatch, capsys):
    def diverge(self, pool, report):
        raise NonFiniteValueError("mixing.lambda")

    monkeypatch.setattr(ManifoldMixSoup, "_run", diverge)
    out = tmp_path / "experiment"
    code = main(
        ["experiment", "--task-config", workspace["task_config"], "--grid", workspace["grid"],
         "--variants", "2", "--budget", "10", "--out", str(out), "--quiet"]
    )
    assert code == EXIT_NUMERIC
    assert "soup stage partial" in capsys.readouterr().err
    # The surviving soups are still written and reported
    assert (out / "03_soups" / "uniform" / "fused.ckpt").is_file()
    assert not (out / "03_soups" / "manifold-m2").exists()
    assert (out / "05_report" / "report.json").is_file()


def test_unknown_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["bake"])
    assert excinfo.value.code == EXIT_USAGE
