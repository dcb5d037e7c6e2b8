from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corpusgen import demo_corpus  # noqa: E402

from chronolex.pipeline import PipelineConfig, run_build  # noqa: E402
from chronolex.store import ModelStore  # noqa: E402


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when == "call" and "test_acceptance" in report.nodeid:
        status = "PASS" if report.passed else ("FAIL" if report.failed else "SKIP")
        name = report.nodeid.split("::")[-1]
        print(f"\nACCEPTANCE {status}: {name}", flush=True)


@pytest.fixture(scope="session")
def demo_build(tmp_path_factory) -> tuple[Path, PipelineConfig]:
    """One shared demo store built through the full pipeline."""
    root = tmp_path_factory.mktemp("demo_corpus")
    manifest, seeds_csv = demo_corpus(root / "corpus")
    config = PipelineConfig(
        manifest=str(manifest),
        seed_lexicon=str(seeds_csv),
        store=str(root / "demo.store"),
        d=20,
        p=0.5,
        min_count=5,
        svd_seed=3,
    )
    run_build(config)
    return Path(config.store), config


@pytest.fixture(scope="session")
def demo_store(demo_build) -> ModelStore:
    path, _ = demo_build
    return ModelStore.load(path)
