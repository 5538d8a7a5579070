import json

import pytest

from src.graph.families import FamilyKind, GraphFamily, generate
from src.orchestrator.verification_pipeline import SUITES, VerificationPipeline, run_verification_pipeline

SMALL = {
    "cheeger": 3,
    "strong": 3,
    "coarea": 10,
    "curvature_chains": 5,
    "potentials": 3,
    "form_trials": 5,
    "upper": 5,
    "determinism": 2,
}


def small_pipeline(**kwargs):
    return VerificationPipeline(seed=7, counts=SMALL, verbose=False, **kwargs)


def test_random_suites_pass():
    report = small_pipeline().run(["strong", "coarea", "upper", "potentials"])
    assert report["status"] == "PASS"
    assert [h["suite"] for h in report["history"]] == ["strong", "coarea", "upper", "potentials"]
    assert report["suites"]["coarea"]["decision"] == "SUCCESS"
    assert len(report["suites"]["coarea"]["records"]) == 10
    json.dumps(report)


def test_strong_suite_contains_the_equality_fixture():
    records = small_pipeline().strong_suite()
    fixture = records[-2]
    assert fixture.lhs == pytest.approx(1.0)
    assert fixture.context["strong_applicable"]
    assert records[-1].passed


def test_counterexample_suite():
    records = small_pipeline().counterexample_suite()
    assert all(r.passed for r in records)
    ratios = [r for r in records if r.claim.startswith("|dB_r|")]
    assert len(ratios) == 5


def test_curvature_suite_has_exact_tree_values():
    records = small_pipeline().curvature_suite()
    exact = [r for r in records if r.claim.startswith("k_lower = ")]
    assert [r.rhs for r in exact] == [1 / 3, 1 / 2, 3 / 5]
    assert all(r.passed for r in records)


def test_cheeger_suite_with_an_input_graph():
    graph = generate(GraphFamily(FamilyKind.K_REGULAR_TREE, radius=4, k=2))
    pipeline = small_pipeline(input_graph=graph)
    records = pipeline.cheeger_suite()
    assert all(r.passed is not False for r in records)
    assert records[-1].context["U_size"] == 15


def test_determinism_suite():
    records = small_pipeline().determinism_suite()
    assert [r.context["suite"] for r in records] == ["cheeger", "coarea", "potentials"]
    assert all(r.passed for r in records)


def test_unknown_suite_is_rejected():
    with pytest.raises(ValueError):
        small_pipeline().run(["cheeger", "nonsense"])


def test_helper_runs_and_logs(isolated_log):
    report = run_verification_pipeline(["upper"], seed=3, counts=SMALL, verbose=False)
    assert report["seed"] == 3
    assert report["success"]
    entries = json.loads(isolated_log.read_text(encoding="utf-8"))
    assert entries[-1]["agent"] == "VerificationPipeline"
    assert entries[-1]["action"] == "VALIDATION"
    assert "growth" in SUITES
