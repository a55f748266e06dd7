import json
from pathlib import Path

import numpy as np
import pytest

from conic_laguerre import cli
from conic_laguerre import experiments as E

ROOT = Path(__file__).resolve().parents[1]


def test_rel_err():
    assert E.rel_err(1.1, 1.0) == pytest.approx(0.1)
    assert E.rel_err(1e-3, 0.0) == pytest.approx(1e-3)


def test_regimes():
    assert E.cesaro_regime(0.5, 0.0) == ("power", 1.5)
    assert E.cesaro_regime(0.5, 1.5) == ("log", 0.0)
    assert E.cesaro_regime(0.5, 2.5) == ("bounded", 0.0)


def test_last_quarter_variation():
    assert E.last_quarter_variation([5, 1, 1, 1, 2, 2, 2, 2, 2]) == 0.0
    assert E.last_quarter_variation([1, 2]) == pytest.approx(0.5)


def test_grid_order_and_kappa():
    params = dict(E.KINDS["kernel-compare"].defaults)
    params.update(d=[2, 3], kappa=[(0.5,)], n=[1, 2], domain=["surface"])
    cases = E.expand_grid("kernel-compare", params)
    assert [(c["d"], c["n"]) for c in cases] == [(2, 1), (2, 2), (3, 1), (3, 2)]
    assert cases[2]["kappa"] == (0.5, 0.5, 0.5)
    with pytest.raises(ValueError):
        E.broadcast_kappa((0.5, 0.5), 3)


def test_samplers(rng):
    x, t = E.sample_surface(rng, 3, 50)
    np.testing.assert_allclose(np.linalg.norm(x, axis=1), t, rtol=1e-13)
    x, t = E.sample_solid(rng, 2, 50)
    assert np.all(np.linalg.norm(x, axis=1) <= t)


def test_cesaro_slope_d3(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[experiment:c]\nkind = cesaro-scan\nd = 3\nkappa = 0\ndelta = 0\n")
    assert cli.main(["run", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    summ = json.loads((tmp_path / "summary.json").read_text())
    fit = summ["experiments"][0]["fits"][0]
    assert fit["slope"] == pytest.approx(1.5, abs=0.15)


def test_smoke_config(tmp_path):
    code = cli.main(["run", "--config", str(ROOT / "configs" / "smoke.ini"), "--out", str(tmp_path)])
    summ = json.loads((tmp_path / "summary.json").read_text())
    assert code == 0 and summ["all_passed"]
    assert {e["kind"] for e in summ["experiments"]} == set(E.KINDS)
