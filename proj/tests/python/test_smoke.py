import json

import numpy as np
import pytest

import mrcwpt


@pytest.fixture
def fig2():
    return mrcwpt.bundled_scenario("paper-fig2")


@pytest.fixture
def fig3():
    return mrcwpt.bundled_scenario("paper-fig3").with_p_min(2, 30.0)


def test_closed_form_matches_linear_solve(fig2):
    x = [7.5, 7.5, 7.5]
    a = mrcwpt.solve_closed_form(fig2, x)
    b = mrcwpt.solve_oracle(fig2, x)
    assert a.p_tx == pytest.approx(125.63094653146919, rel=1e-12)
    assert a.p == pytest.approx(b.p, rel=1e-9)
    assert a.p_sum < a.p_tx
    m = mrcwpt.impedance_matrix(fig2, x)
    assert m.shape == (4, 4)
    assert mrcwpt.impedance_determinant(fig2, x) == pytest.approx(abs(np.linalg.det(m)), rel=1e-12)


def test_peak_and_sweep(fig2):
    x = fig2.nominal_loads()
    peak = mrcwpt.peak_load(fig2, x, 0)
    assert peak == pytest.approx(15.8, abs=0.1)
    assert mrcwpt.sum_peak_load(fig2, x, 0) is None
    grid = np.linspace(0.1, 100.0, 1000)
    table = mrcwpt.sweep(fig2, x, 0, grid)
    assert table.shape == (1000, 6)
    assert abs(grid[np.argmax(table[:, 2])] - peak) <= 0.1


def test_optimize(fig3):
    r = mrcwpt.minimize_ptx(fig3, 1e-3)
    assert r.optimal
    assert r.p_tx == pytest.approx(440.32195708367703, rel=1e-9)
    assert all(p >= floor for p, floor in zip(r.report.p, [250.0, 50.0, 30.0]))
    assert mrcwpt.check_feasibility(fig3, r.z_star).feasible


def test_protocol(fig3):
    trace = mrcwpt.run_protocol(fig3, mrcwpt.ProtocolConfig(seed=2))
    assert trace.iterations > 0
    assert set(trace.cases) <= {1, 2, 3, 4, 5}
    assert mrcwpt.audit_violations(fig3, trace) == 0
    summary = mrcwpt.batch_run(fig3, mrcwpt.ProtocolConfig(seed=0), 2, until_feasible=True)
    assert summary.feasible == 2


def test_verify_and_errors(fig2):
    report = json.loads(mrcwpt.verify(fig2, trials=50))
    assert report["pass"]
    with pytest.raises(ValueError):
        mrcwpt.parse_scenario("{}")
    with pytest.raises(ValueError):
        mrcwpt.solve_closed_form(fig2, [1.0])
    with pytest.raises(ValueError):
        mrcwpt.verify(fig2, trials=0)
