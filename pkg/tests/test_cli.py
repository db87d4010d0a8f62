import json

import numpy as np
import pytest

from esnbench.activations import ActivationFn, get_activation, register, _REGISTRY
from esnbench.cli import main


def write_cfg(tmp_path, **fields):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(fields))
    return str(path)


def tiny_fields(out_dir):
    return dict(
        task="logistic",
        activations=["tanh"],
        sizes=[6],
        trials=2,
        washout=10,
        train_len=100,
        test_len=50,
        seed=3,
        out_dir=str(out_dir),
    )


def test_run_writes_outputs_and_exits_zero(tmp_path, capsys):
    cfg = write_cfg(tmp_path, **tiny_fields(tmp_path / "out"))
    assert main(["run", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "median logNMSE" in out
    for name in ("records.csv", "medians.csv", "accuracy_vs_size.svg"):
        assert (tmp_path / "out" / name).exists()


def test_cli_overrides_take_precedence(tmp_path):
    cfg = write_cfg(tmp_path, **tiny_fields(tmp_path / "ignored"))
    out = tmp_path / "flag_out"
    code = main(["run", "--config", cfg, "--out", str(out), "--trials", "1",
                 "--activation", "sinc", "--sizes", "4,5"])
    assert code == 0
    lines = (out / "records.csv").read_text().strip().splitlines()
    assert len(lines) == 2 + 1  # 1 activation x 2 sizes x 1 trial
    assert all(",sinc," in line for line in lines[1:])


def test_unknown_config_key_exits_one(tmp_path, capsys):
    cfg = write_cfg(tmp_path, task="logistic", mystery=5)
    assert main(["run", "--config", cfg]) == 1
    assert "config error" in capsys.readouterr().err


def test_invalid_json_exits_one(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["run", "--config", str(path)]) == 1
    assert "config error" in capsys.readouterr().err


def test_unknown_activation_exits_one_and_lists_names(tmp_path, capsys):
    fields = tiny_fields(tmp_path / "out")
    fields["activations"] = ["softplus"]
    cfg = write_cfg(tmp_path, **fields)
    assert main(["run", "--config", cfg]) == 1
    err = capsys.readouterr().err
    assert "softplus" in err and "mexican_hat" in err


def test_bad_sizes_flag_exits_one(tmp_path, capsys):
    cfg = write_cfg(tmp_path, **tiny_fields(tmp_path / "out"))
    assert main(["run", "--config", cfg, "--sizes", "ten,20"]) == 1
    assert "sizes" in capsys.readouterr().err


def test_bad_flag_value_exits_one(capsys):
    assert main(["run", "--task", "lorenz"]) == 1
    assert "config error" in capsys.readouterr().err


def test_unwritable_output_directory_exits_two(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a directory")
    fields = tiny_fields(blocker / "out")
    cfg = write_cfg(tmp_path, **fields)
    assert main(["run", "--config", cfg]) == 2
    assert "I/O error" in capsys.readouterr().err


def test_all_trials_diverged_exits_three(tmp_path, capsys):
    """Exercises the sweep-survival path with a runaway custom activation."""
    exploding = ActivationFn("runaway_gain", lambda x: x * 1e6, "odd", True)
    register(exploding)
    try:
        fields = dict(
            task="mge_free_running",
            activations=["runaway_gain"],
            sizes=[5],
            trials=2,
            washout=10,
            train_len=100,
            test_len=440,
            horizon=430,
            wasserstein_m=300,
            seed=2,
            out_dir=str(tmp_path / "out"),
        )
        cfg = write_cfg(tmp_path, **fields)
        assert main(["run", "--config", cfg]) == 3
        assert "diverged" in capsys.readouterr().err
        records = (tmp_path / "out" / "records.csv").read_text().splitlines()
        assert all(",inf," in line for line in records[1:])
    finally:
        _REGISTRY.pop("runaway_gain", None)
    with pytest.raises(ValueError):
        get_activation("runaway_gain")
