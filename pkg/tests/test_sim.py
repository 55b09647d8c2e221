import json

import numpy as np
import pytest
from scipy.special import ndtri

from swinfer.sim import (SimulationPlan, _replication_streams, histogram,
                         result_csv_text, result_json_text, run_plan)


def tiny_plan(**overrides):
    base = dict(d=2, n=25, m=20, k_values=(4,), h_values=(0.0,),
                delta=1.0, replications=3, master_seed=99)
    base.update(overrides)
    return SimulationPlan(**base)


def test_plan_validation():
    with pytest.raises(ValueError):
        tiny_plan(replications=0)
    with pytest.raises(ValueError):
        tiny_plan(level=1.0)
    with pytest.raises(ValueError):
        tiny_plan(k_values=())
    with pytest.raises(ValueError):
        tiny_plan(k_values=(1,))
    with pytest.raises(ValueError):
        tiny_plan(h_values=())
    with pytest.raises(ValueError):
        tiny_plan(n=1)
    with pytest.raises(ValueError):
        tiny_plan(d=0)


def test_plan_cell_ordering():
    plan = tiny_plan(k_values=(2, 8), h_values=(0.0, 0.5))
    assert plan.cells == [(2, 0.0), (2, 0.5), (8, 0.0), (8, 0.5)]


def test_histogram_examples():
    edges, counts = histogram([0.0, 0.0, 0.0], 1)
    assert counts.tolist() == [3]
    assert len(edges) == 2
    edges, counts = histogram([0.0, 1.0], 2)
    assert counts.tolist() == [1, 1]
    assert edges[0] == 0.0 and edges[-1] == 1.0
    with pytest.raises(ValueError):
        histogram([], 4)
    with pytest.raises(ValueError):
        histogram([1.0], 0)


def test_stream_layout_has_no_collisions():
    plan = tiny_plan(k_values=(2, 4), h_values=(0.0, 0.3), replications=5)
    seen = []
    for ci in range(len(plan.cells)):
        for ri in range(plan.replications):
            sx, sy, sd = _replication_streams(plan, ci, ri)
            seen.extend([sx, sy, sd])
    assert len(seen) == len(set(seen))
    assert min(seen) >= 16


def test_stream_layout_reuse_shares_directions_within_cell():
    plan = tiny_plan(k_values=(2, 4), replications=4, reuse_directions=True)
    per_cell = []
    all_xy = []
    for ci in range(len(plan.cells)):
        dirs_ids = set()
        for ri in range(plan.replications):
            sx, sy, sd = _replication_streams(plan, ci, ri)
            dirs_ids.add(sd)
            all_xy.extend([sx, sy])
        per_cell.append(dirs_ids)
    assert all(len(ids) == 1 for ids in per_cell)
    assert per_cell[0] != per_cell[1]
    assert len(all_xy) == len(set(all_xy))
    assert not (per_cell[0] | per_cell[1]) & set(all_xy)


def test_single_replication_cell():
    result = run_plan(tiny_plan(replications=1))
    cell = result.cells[0]
    assert cell.statistics.shape == (1,)
    assert cell.rejection_rate in (0.0, 1.0)
    assert cell.excluded == 0
    assert int(cell.hist_counts.sum()) == 1


def test_rejection_rate_recomputable_from_statistics():
    plan = tiny_plan(replications=40, level=0.9)
    result = run_plan(plan)
    q = ndtri(0.5 + 0.5 * plan.level)
    for cell in result.cells:
        assert cell.rejection_rate == np.mean(np.abs(cell.statistics) > q)
        assert int(cell.hist_counts.sum()) == cell.statistics.size


def test_thread_count_does_not_change_output_text():
    plan = tiny_plan(k_values=(3, 6), h_values=(0.0, 0.4), replications=6)
    serial = run_plan(plan, threads=1)
    pooled = run_plan(plan, threads=4)
    assert result_csv_text(serial) == result_csv_text(pooled)
    assert result_json_text(serial) == result_json_text(pooled)


def test_rerun_is_reproducible():
    plan = tiny_plan(replications=5)
    assert result_csv_text(run_plan(plan)) == result_csv_text(run_plan(plan))


def test_fresh_and_reused_directions_differ():
    fresh = run_plan(tiny_plan(replications=4))
    reused = run_plan(tiny_plan(replications=4, reuse_directions=True))
    assert (fresh.cells[0].statistics != reused.cells[0].statistics).any()


def test_null_cell_statistics_look_standard_normal():
    # needs n and k large enough that the studentizer has settled; tiny
    # direction budgets give visibly t-like tails
    plan = tiny_plan(d=4, n=400, m=400, k_values=(64,), replications=200,
                     master_seed=3)
    result = run_plan(plan, threads=4)
    stats = result.cells[0].statistics
    assert result.cells[0].excluded == 0
    assert abs(stats.mean()) <= 0.35
    assert 0.6 <= stats.var() <= 1.5
    assert result.cells[0].rejection_rate <= 0.13


def test_csv_text_round_trips():
    plan = tiny_plan(replications=4, level=0.9)
    result = run_plan(plan)
    text = result_csv_text(result)
    lines = text.strip().split("\n")
    assert lines[0] == "k,h,replication,statistic,reject"
    assert len(lines) == 1 + 4
    q = ndtri(0.5 + 0.5 * plan.level)
    for row, t in zip(lines[1:], result.cells[0].statistics):
        k, h, ri, stat, flag = row.split(",")
        assert int(k) == 4
        assert float(h) == 0.0
        assert float(stat) == t  # 17 significant digits survive the trip
        assert int(flag) == int(abs(t) > q)


def test_json_text_parses_and_echoes_plan():
    plan = tiny_plan(k_values=(3, 5), replications=4)
    result = run_plan(plan)
    doc = json.loads(result_json_text(result))
    assert doc["plan"]["n"] == plan.n
    assert doc["plan"]["k_values"] == [3, 5]
    assert doc["plan"]["master_seed"] == plan.master_seed
    assert len(doc["cells"]) == 2
    for cell_doc, cell in zip(doc["cells"], result.cells):
        assert cell_doc["k"] == cell.k
        assert cell_doc["rejection_rate"] == cell.rejection_rate
        assert sum(cell_doc["histogram"]["counts"]) == cell.statistics.size


def test_run_plan_requires_quadratic_cost():
    with pytest.raises(ValueError):
        run_plan(tiny_plan(p=1.5))
