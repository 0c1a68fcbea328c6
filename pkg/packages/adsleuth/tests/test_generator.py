"""Tests for adsleuth.sim.generator: the labelled benchmark."""

from __future__ import annotations

from collections import Counter

import pytest

from adsleuth.exceptions import BenchmarkError
from adsleuth.models import FraudType
from adsleuth.rules import check_all
from adsleuth.sim.explorer import explore
from adsleuth.sim.generator import (
    DEFAULT_DISTRIBUTION,
    even_distribution,
    exploration_suite,
    generate_benchmark,
)
from adsleuth.sim.model import dump_model


class TestDistribution:
    def test_default_benchmark(self) -> None:
        models = generate_benchmark()
        assert len(models) == 100
        labels = [m.meta.label for m in models]
        assert all(label is not None for label in labels)
        fraudulent = [label for label in labels if label and label.frauds]
        assert len(fraudulent) == 50
        per_type = Counter(f for label in fraudulent for f in label.frauds)
        assert set(per_type) == set(FraudType)
        assert min(per_type.values()) >= 2
        assert sum(len(label.frauds) == 2 for label in fraudulent) == 4
        assert sum(DEFAULT_DISTRIBUTION.values()) == 50

    def test_behaviors_match_labels(self) -> None:
        for app in generate_benchmark(9, 0, seed=3):
            assert app.meta.label is not None
            assert app.ad_behaviors == tuple(f.value for f in app.meta.label.frauds)

    def test_clean_only(self) -> None:
        models = generate_benchmark(0, 10, {}, seed=4)
        assert len(models) == 10
        assert all(m.meta.label is not None and not m.meta.label.frauds for m in models)

    def test_even_distribution(self) -> None:
        spread = even_distribution(20)
        assert sum(spread.values()) == 20
        assert max(spread.values()) - min(spread.values()) <= 1

    def test_packages_unique(self) -> None:
        packages = [m.package for m in generate_benchmark()]
        assert len(set(packages)) == len(packages)

    def test_exploration_suite(self) -> None:
        suite = exploration_suite()
        assert len(suite) == 30
        assert sum(bool(m.meta.label and m.meta.label.frauds) for m in suite) == 21


class TestDeterminism:
    def test_same_seed_same_bytes(self) -> None:
        first = [dump_model(m) for m in generate_benchmark(9, 3, seed=17)]
        second = [dump_model(m) for m in generate_benchmark(9, 3, seed=17)]
        assert first == second

    def test_seed_matters(self) -> None:
        first = [dump_model(m) for m in generate_benchmark(9, 3, seed=17)]
        assert first != [dump_model(m) for m in generate_benchmark(9, 3, seed=18)]


class TestErrors:
    def test_sum_mismatch(self) -> None:
        with pytest.raises(BenchmarkError, match="sums to 3"):
            generate_benchmark(4, 0, {FraudType.SIZE: 3})

    def test_negative_count(self) -> None:
        with pytest.raises(BenchmarkError, match="negative"):
            generate_benchmark(0, 0, {FraudType.SIZE: -1, FraudType.HIDDEN: 1})

    def test_negative_apps(self) -> None:
        with pytest.raises(BenchmarkError):
            generate_benchmark(0, -1, {})


class TestScriptedFrauds:
    @pytest.mark.parametrize("fraud", list(FraudType))
    def test_single_fraud_is_exactly_detected(self, fraud: FraudType) -> None:
        for app in generate_benchmark(2, 0, {fraud: 2}, seed=12, multi=0):
            report = check_all(explore(app))
            assert report.fraud_types == frozenset({fraud}), (app.package, report.fraud_types)

    def test_clean_apps_have_no_findings(self) -> None:
        for app in generate_benchmark(0, 10, {}, seed=12):
            assert check_all(explore(app)).findings == ()
