import numpy as np
import pytest

from ringqed.errors import EnsembleError
from ringqed.stats import EnsembleStats, StreamingStats, histogram_edges


def test_streaming_matches_batch():
    rng = np.random.default_rng(7)
    for size in (2, 17, 1000):
        data = rng.lognormal(mean=-1.0, sigma=2.0, size=size)
        st = StreamingStats()
        for x in data:
            st.add(x)
        assert st.count == size
        assert st.mean == pytest.approx(np.mean(data), rel=1e-12)
        assert st.variance == pytest.approx(np.var(data, ddof=1), rel=1e-12)
        assert st.sem == pytest.approx(
            np.std(data, ddof=1) / np.sqrt(size), rel=1e-12
        )


def test_streaming_order_independent_to_rounding():
    rng = np.random.default_rng(8)
    data = rng.normal(size=500)
    a = StreamingStats()
    b = StreamingStats()
    for x in data:
        a.add(x)
    for x in data[::-1]:
        b.add(x)
    assert a.mean == pytest.approx(b.mean, abs=1e-13)
    assert a.variance == pytest.approx(b.variance, rel=1e-12)


def test_undefined_samples_excluded():
    st = StreamingStats()
    st.add(1.0)
    st.add(None)
    st.add(float("nan"))
    st.add(float("inf"))
    st.add(3.0)
    assert st.count == 2
    assert st.undefined == 3
    assert st.mean == pytest.approx(2.0)


def test_empty_stats_are_nan():
    st = StreamingStats()
    assert np.isnan(st.mean)
    assert np.isnan(st.variance)
    st.add(5.0)
    assert st.mean == 5.0
    assert np.isnan(st.variance)  # one sample has no spread estimate


def test_histogram_accounting():
    edges = histogram_edges(1.0, bins=4)
    st = StreamingStats(bin_edges=edges)
    for x in (0.1, 0.3, 0.3, 0.9, 2.5, -0.2):
        st.add(x)
    assert st.bin_counts.tolist() == [1, 2, 0, 1]
    assert st.out_of_range == 2
    assert st.histogram_mass == st.count == 6
    # outliers still shape the moments
    assert st.mean == pytest.approx(np.mean([0.1, 0.3, 0.3, 0.9, 2.5, -0.2]))


def test_histogram_right_edge_inclusive():
    st = StreamingStats(bin_edges=histogram_edges(1.0, bins=2))
    st.add(1.0)
    assert st.bin_counts.tolist() == [0, 1]
    assert st.out_of_range == 0


def test_ensemble_accounting():
    ens = EnsembleStats(("a", "b"))
    ens.add_trial({"a": 1.0, "b": 2.0})
    ens.add_trial({"a": 3.0})  # b undefined for this trial
    ens.exclude_trial("near_coincidence")
    ens.exclude_trial("near_coincidence")
    ens.exclude_trial("dark_pole")
    assert ens.requested == 5
    assert ens.accepted == 2
    assert ens.excluded_total == 3
    assert ens.excluded == {"near_coincidence": 2, "dark_pole": 1}
    assert ens.metrics["b"].count == 1
    assert ens.metrics["b"].undefined == 1
    ens.validate()
    summary = ens.summary()
    assert summary["requested"] == 5
    assert summary["partial"] is False
    assert summary["metrics"]["a"]["mean"] == pytest.approx(2.0)


def test_ensemble_validate_catches_broken_accounting():
    ens = EnsembleStats(("a",))
    ens.add_trial({"a": 1.0})
    ens.requested += 1  # simulate a lost trial
    with pytest.raises(EnsembleError):
        ens.validate()


def test_ensemble_validate_catches_histogram_mismatch():
    ens = EnsembleStats(("a",), bin_edges={"a": histogram_edges(1.0, bins=2)})
    ens.add_trial({"a": 0.4})
    ens.metrics["a"].bin_counts[0] = 0  # corrupt the histogram
    with pytest.raises(EnsembleError):
        ens.validate()


def test_ensemble_all_excluded_rejected():
    ens = EnsembleStats(("a",))
    for _ in range(4):
        ens.exclude_trial("defective")
    with pytest.raises(EnsembleError):
        ens.validate()


def test_ensemble_empty_run_is_valid():
    EnsembleStats(("a",)).validate()


def test_histogram_edges_guard():
    edges = histogram_edges(3.0, bins=6)
    assert edges.shape == (7,)
    assert edges[0] == 0.0 and edges[-1] == 3.0
    with pytest.raises(ValueError):
        histogram_edges(0.0)
    with pytest.raises(ValueError):
        histogram_edges(1.0, lower=2.0)
