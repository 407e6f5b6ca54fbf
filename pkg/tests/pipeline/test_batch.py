import pytest

from app.etale.curve import Curve
from app.models.config import SampleConfig, SearchBounds
from app.models.report import ClassificationResult
from app.pipeline import batch
from app.pipeline.batch import aggregate, emit_report, load_results, run_batch
from app.pipeline.stages import model_to_point


def _result(category, index=None):
    return ClassificationResult(curve=[1, 0, 0, 0, 0, 0, 1], genus=2, category=category, index=index)


def test_aggregate_empty():
    summary = aggregate([])
    assert set(summary) == {"NotLocallySoluble", "BrauerManinObstructed", "HasRationalPoint", "Undecided"}
    assert all(row == {"count": 0, "percent": 0.0} for row in summary.values())


def test_aggregate_percentages():
    results = [_result("HasRationalPoint")] * 3 + [_result("NotLocallySoluble")]
    summary = aggregate(results)
    assert summary["HasRationalPoint"] == {"count": 3, "percent": 75.0}
    assert summary["NotLocallySoluble"] == {"count": 1, "percent": 25.0}
    assert summary["Undecided"]["count"] == 0


def test_emit_report_writes_json_lines(tmp_path):
    path = tmp_path / "out.jsonl"
    table = emit_report([_result("Undecided", 0), _result("HasRationalPoint", 1)], path, title="demo")
    assert table.splitlines()[0] == "demo"
    assert "total" in table
    loaded = load_results(path)
    assert sorted(loaded) == [0, 1]
    assert loaded[0].category == "Undecided"


def test_torn_line_is_skipped(tmp_path):
    path = tmp_path / "out.jsonl"
    emit_report([_result("Undecided", 0)], path)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write('{"curve": [1, 0')
    assert list(load_results(path)) == [0]


def _fake_classify(curve, config, index=None):
    return ClassificationResult(curve=curve.leading_first(), genus=curve.genus, category="Undecided", index=index)


def test_resume_skips_done_indices(tmp_path, monkeypatch):
    calls = []

    def fake(curve, config, index=None):
        calls.append(index)
        return _fake_classify(curve, config, index)

    monkeypatch.setattr(batch, "classify_curve", fake)
    config = SampleConfig(genus=2, bound=5, sample_size=4, seed=3)
    path = tmp_path / "run.jsonl"

    first = run_batch(config, path)
    assert [r.index for r in first] == [0, 1, 2, 3]
    assert calls == [0, 1, 2, 3]

    lines = path.read_text(encoding="utf-8").splitlines()
    path.write_text("\n".join(lines[:2]) + "\n", encoding="utf-8")
    calls.clear()
    resumed = run_batch(config, path)
    assert calls == [2, 3]
    assert [r.curve for r in resumed] == [r.curve for r in first]

    calls.clear()
    run_batch(config, path, resume=False)
    assert calls == [0, 1, 2, 3]
    assert len(path.read_text(encoding="utf-8").splitlines()) == 4


@pytest.mark.slow
def test_genus_two_sample_proportions(tmp_path):
    config = SampleConfig(genus=2, bound=10, sample_size=300, seed=0, workers=4)
    results = run_batch(config, tmp_path / "g2.jsonl")
    summary = aggregate(results)
    assert len(results) == 300
    assert 11.8 <= summary["NotLocallySoluble"]["percent"] <= 23.8
    assert 40.0 <= summary["HasRationalPoint"]["percent"] <= 53.0
    assert summary["BrauerManinObstructed"]["percent"] >= 15.0


def test_small_genus_two_sample(tmp_path):
    search = SearchBounds(degree=1, coeff_bound=2, linear_bound=6, relation_pool=40, max_relations=4, max_candidates=8)
    config = SampleConfig(genus=2, bound=10, sample_size=40, seed=1, workers=1, height_bound=100, search=search)
    results = run_batch(config, tmp_path / "small.jsonl")
    summary = aggregate(results)
    assert len(results) == 40
    assert 2.5 <= summary["NotLocallySoluble"]["percent"] <= 40.0
    assert 25.0 <= summary["HasRationalPoint"]["percent"] <= 72.5
    assert summary["Undecided"]["percent"] <= 50.0
    for result in results:
        assert result.diagnostics.get("error_type") != "PointOutsideSurvivorsError"
        if result.category == "HasRationalPoint":
            curve = Curve.from_coefficients(result.curve)
            assert curve.is_point(*model_to_point(result.point))
