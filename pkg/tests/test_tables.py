import json
from importlib import resources

import pytest

from jamming.tables import TABLE_IDS, CellResult, compute_table, load_targets

DETERMINISTIC = [t for t in TABLE_IDS if t != "ansatz-comparison"]


def test_targets_file_lists_every_table():
    targets = load_targets()
    assert set(targets["tables"]) == set(TABLE_IDS)
    raw = resources.files("jamming.data").joinpath("targets.json").read_text(encoding="utf-8")
    assert json.loads(raw)["version"] == 1


@pytest.mark.parametrize("table_id", DETERMINISTIC)
def test_deterministic_cells_match(table_id):
    cells = compute_table(table_id, include_optimized=False)
    assert cells
    bad = [c.to_record() for c in cells if not c.passed]
    assert not bad


def test_frame_comparison_key_cells():
    cells = {(c.key["n"], c.key["d"], c.column): c for c in compute_table("frame-comparison", include_optimized=False)}
    assert round(cells[(7, 6, "alltop")].computed, 4) == 0.2097
    assert cells[(7, 6, "simplex")].computed < cells[(7, 6, "omega_c")].computed


def test_ratio_from_rounded_values_rule():
    strict = CellResult("t", {"d": 4}, "ratio", 1.048, 1.047496, 3, 0.0005 + 1e-12, False)
    assert not strict.passed
    lenient = CellResult("t", {"d": 4}, "ratio", 1.048, 1.047496, 3, 0.0005 + 1e-12, False, 0.1296 / 0.1237)
    assert lenient.passed


def test_unknown_table():
    with pytest.raises(ValueError):
        compute_table("nope")
