import numpy as np
import pytest

from cxsplit import bench
from cxsplit.errors import InsufficientData, NotInCatalog
from cxsplit.schemes import serialize_scheme, builtin_scheme


@pytest.mark.parametrize("name,stages", sorted(bench.METHOD_STAGES.items()))
def test_resolve_method_stage_counts(name, stages):
    fn, a_stages = bench.resolve_method(name)
    assert callable(fn)
    assert a_stages == stages


def test_resolve_method_from_file(tmp_path):
    path = tmp_path / "s62.txt"
    path.write_text(serialize_scheme(builtin_scheme("S62")))
    fn, a_stages = bench.resolve_method(str(path))
    assert a_stages == 3


def test_resolve_method_unknown():
    with pytest.raises(NotInCatalog):
        bench.resolve_method("no-such-scheme")


def test_sweep_spec_rejects_unordered_grid():
    with pytest.raises(ValueError):
        bench.SweepSpec(problem="osc", methods=["strang"], n_steps_grid=[8, 4])
    with pytest.raises(ValueError):
        bench.SweepSpec(problem="osc", methods=["strang"], n_steps_grid=[4, 4])


def test_run_point_records_error_and_cost(osc_ref):
    problem, reference = osc_ref
    record = bench.run_point(problem, "sm4", 16, reference)
    assert record.method == "sm4"
    assert record.n_steps == 16
    assert record.a_flow_evals == 64
    assert np.isfinite(record.error_l2) and record.error_l2 > 0.0
    assert not record.failed


def test_sweep_rows_sorted_and_csv_shape(osc_ref):
    spec = bench.SweepSpec(problem="osc", methods=["s62", "strang"],
                           n_steps_grid=[8, 16])
    records = bench.sweep(spec)
    keys = [(r.method, r.n_steps) for r in records]
    assert keys == sorted(keys)
    text = bench.records_to_csv(records)
    lines = text.strip().splitlines()
    assert lines[0] == bench.CSV_HEADER
    assert len(lines) == 5
    assert all(len(line.split(",")) == 8 for line in lines)


def test_write_csv(tmp_path, osc_ref):
    problem, reference = osc_ref
    records = [bench.run_point(problem, "strang", 8, reference)]
    out = tmp_path / "sweep.csv"
    bench.write_csv(records, out)
    assert out.read_text().startswith(bench.CSV_HEADER)


def test_fit_order_recovers_known_slope():
    h = np.array([0.1, 0.05, 0.025, 0.0125])
    errors = 3.0 * h ** 4
    slope, resid = bench.fit_order(h, errors)
    assert slope == pytest.approx(4.0, abs=1e-12)
    assert resid < 1e-12


def test_fit_order_excludes_noise_floor():
    h = [0.1, 0.05, 0.025, 0.0125]
    errors = [1e-3, 1e-5, 5e-9, 4e-9]       # last two under the 1e-8 floor
    with pytest.raises(InsufficientData):
        bench.fit_order(h, errors)


def test_fit_order_skips_nan():
    h = [0.1, 0.05, 0.025, 0.0125]
    errors = [1e-2, 1e-3, float("nan"), 1e-5]
    slope, _ = bench.fit_order(h, errors)
    assert np.isfinite(slope)


def test_converge_needs_four_points():
    with pytest.raises(InsufficientData):
        bench.converge("osc", "strang", [8, 16, 32])


def test_converge_strang_on_oscillator(osc_ref):
    slope, resid, records = bench.converge("osc", "strang", [64, 128, 256, 512])
    assert slope == pytest.approx(2.0, abs=0.2)
    assert len(records) == 4


def test_self_converge_needs_three_points(osc_ref):
    problem, _ = osc_ref
    with pytest.raises(InsufficientData):
        bench.self_converge(problem, "strang", [8, 16])
