"""Acceptance suite: one test per release criterion.

Each test enforces its criterion at the stated tolerance and, where given,
the runtime budget.  Run with ``pytest -v`` to get one pass/fail line per
criterion.  Criterion 2 is conditional on a vendored reference record and is
skipped (waived) when the record is absent.
"""

import csv
import itertools
import json
import math
import os
import time
from pathlib import Path

import numpy as np
import pytest

from tsforge import (
    CSVImporter,
    FeatureSet,
    Record,
    WindowSpec,
    rolling_windows,
    run_plan,
    write_feature_csv,
)
from tsforge.cli import main
from tsforge.features.entropy import perm_entropy, sample_entropy
from tsforge.features.freqdomain import band_features, mdf, mnf, peaks, psr, stdf
from tsforge.features.timedomain import basic_stats, zcr
from tsforge.features.wavelet import swt, swt_features, wavelet_filters
from tsforge.ingest.csvio import read_csv
from tsforge.ingest.wfdb import decode_dat, parse_wfdb_header
from tsforge.preprocess import butter_design
from tsforge.spectral import periodogram, welch
from conftest import encode_212, make_wfdb_fixture, write_csv_record
from test_fetch import _FixtureServer


# --- criterion 1: sampling-rate scaling of spectral moments -----------------

def test_criterion_01_fs_scaling():
    """mnf and stdf at fs=125 are exactly 125x their fs=1 values (rel 1e-12),
    for any fixed sample array.  Budget: < 1 s."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(20260819)
    sizes = [1250] + [int(rng.integers(64, 2048)) for _ in range(9)]
    for n in sizes:
        x = rng.standard_normal(n)
        hi = periodogram(x, fs=125.0)
        lo = periodogram(x, fs=1.0)
        assert mnf(hi) == pytest.approx(125.0 * mnf(lo), rel=1e-12)
        assert stdf(hi) == pytest.approx(125.0 * stdf(lo), rel=1e-12)
    assert time.perf_counter() - t0 < 1.0


# --- criterion 2: conditional reference-record reproduction -----------------

_EXPECT_ABP_STATS = {
    "mean": 72.385,
    "max": 107.03125,
    "min": 53.125,
    "median": 69.53125,
    "skewness": 0.9154627781784881,
    "kurtosis": -0.15299373030467667,
    "std": 13.268216310510619,
    "p2p": 53.90625,
}

_EXPECT_ECG_FREQ = {
    "mnf": 9.857968968908676,
    "mdf": 9.0,
    "stdf": 6.657686374206612,
    "psr_0.01": 0.1086823980353686,
    "peak_freq_1": 3.90625,
    "peak_height_1": 0.0009058970155242925,
    "peak_width_1": 4.386465062242469,
    "power_[1,7]Hz": 0.3921784430303598,
    "mnf_[1,7]Hz": 4.277888519896743,
}

_EXPECT_MULTI_UNNORMALIZED = {
    # reference outputs for the shared-feature example were produced on an
    # unnormalized frequency axis (fs=1)
    "ECG_std": 0.0912508348533301,
    "ECG_mnf": 0.0788637517512694,
    "ECG_stdf": 0.053261490993652905,
    "ABP_std": 13.268216310510619,
    "ABP_mnf": 0.01604557934763282,
    "ABP_stdf": 0.012480758701313835,
}


def _reference_record():
    candidates = []
    env = os.environ.get("TSFORGE_SAMPLE_RECORD")
    if env:
        candidates.append(Path(env))
    candidates.append(Path(__file__).parent / "data" / "ecg_abp_sample.csv")
    for p in candidates:
        if p.is_file():
            return read_csv(p, fs=125.0)
    return None


def test_criterion_02_reference_record_values():
    """Reproduce the published reference values (1e-9 relative) on the bundled
    ECG+ABP sample record, when vendored."""
    record = _reference_record()
    if record is None:
        pytest.skip(
            "reference sample record not vendored (expected "
            "tests/data/ecg_abp_sample.csv or $TSFORGE_SAMPLE_RECORD); "
            "criterion waived"
        )
    ecg, abp = record.channels["ECG"], record.channels["ABP"]

    stats = basic_stats(abp)
    for key, expected in _EXPECT_ABP_STATS.items():
        assert stats[key] == pytest.approx(expected, rel=1e-9), key
    assert zcr(abp, center=True) == 42

    ps = periodogram(ecg, 125.0)
    w = welch(ecg, 125.0)
    assert mnf(ps) == pytest.approx(_EXPECT_ECG_FREQ["mnf"], rel=1e-9)
    assert mdf(ps) == pytest.approx(_EXPECT_ECG_FREQ["mdf"], rel=1e-9)
    assert stdf(ps) == pytest.approx(_EXPECT_ECG_FREQ["stdf"], rel=1e-9)
    assert psr(w, int_limit_ratio=0.01) == pytest.approx(
        _EXPECT_ECG_FREQ["psr_0.01"], rel=1e-9
    )
    pk = peaks(w, n_peaks=1, height=True, width=True)
    assert pk["peak_freq_1"] == pytest.approx(_EXPECT_ECG_FREQ["peak_freq_1"], rel=1e-9)
    assert pk["peak_height_1"] == pytest.approx(
        _EXPECT_ECG_FREQ["peak_height_1"], rel=1e-9
    )
    assert pk["peak_width_1"] == pytest.approx(
        _EXPECT_ECG_FREQ["peak_width_1"], rel=1e-9
    )
    band = band_features(ps, 1, 7)
    assert band["power_[1,7]Hz"] == pytest.approx(
        _EXPECT_ECG_FREQ["power_[1,7]Hz"], rel=1e-9
    )
    assert band["mnf_[1,7]Hz"] == pytest.approx(
        _EXPECT_ECG_FREQ["mnf_[1,7]Hz"], rel=1e-9
    )

    assert mnf(periodogram(abp, 125.0)) == pytest.approx(2.0056974184541025, rel=1e-9)
    assert float(np.quantile(abp, 0.1)) == pytest.approx(-13.79125, rel=1e-9)
    assert float(np.quantile(abp, 0.9)) == pytest.approx(23.70875, rel=1e-9)

    for channel, values in (("ECG", ecg), ("ABP", abp)):
        s1 = periodogram(values, 1.0)
        stats1 = basic_stats(values)
        assert stats1["std"] == pytest.approx(
            _EXPECT_MULTI_UNNORMALIZED[f"{channel}_std"], rel=1e-9
        )
        assert mnf(s1) == pytest.approx(
            _EXPECT_MULTI_UNNORMALIZED[f"{channel}_mnf"], rel=1e-9
        )
        assert stdf(s1) == pytest.approx(
            _EXPECT_MULTI_UNNORMALIZED[f"{channel}_stdf"], rel=1e-9
        )


# --- criterion 3: Parseval ----------------------------------------------------

def test_criterion_03_parseval():
    """sum(power)*df equals the signal variance within 1e-9 relative for the
    periodogram and for a single-full-segment Welch estimate, on 100 random
    signals with N in 64..4096.  Budget: < 5 s."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    for _ in range(100):
        n = int(rng.integers(64, 4097))
        fs = float(rng.uniform(1.0, 500.0))
        x = rng.standard_normal(n) * float(rng.uniform(0.1, 10.0))
        var = float(np.var(x))
        for spec in (
            periodogram(x, fs),
            welch(x, fs, nperseg=n, overlap_ratio=0.0, window="rectangular"),
        ):
            df = spec.freqs[1] - spec.freqs[0]
            assert float(np.sum(spec.power) * df) == pytest.approx(var, rel=1e-9)
    assert time.perf_counter() - t0 < 5.0


# --- criterion 4: Butterworth design -------------------------------------------

def _freq_response(coeffs, f, fs):
    z = np.exp(-2j * np.pi * np.asarray(f, dtype=float) / fs)
    return np.polyval(coeffs.b[::-1], z) / np.polyval(coeffs.a[::-1], z)


def test_criterion_04_butterworth():
    """-3.01 +/- 0.02 dB at the cutoff and unity DC gain within 1e-12 for
    orders 1..10; order-2 coefficients match the hand bilinear-transform
    formulas to 1e-12."""
    fs, fc = 250.0, 30.0
    half_power_db = 20.0 * math.log10(1.0 / math.sqrt(2.0))
    for order in range(1, 11):
        c = butter_design(order, fc, "lowpass", fs)
        dc = abs(_freq_response(c, 0.0, fs))
        assert abs(dc - 1.0) <= 1e-12
        cutoff_db = 20.0 * math.log10(abs(_freq_response(c, fc, fs)))
        assert cutoff_db == pytest.approx(half_power_db, abs=0.02)

    for fc2, fs2 in ((10.0, 100.0), (3.0, 50.0), (40.0, 360.0), (0.5, 8.0)):
        k = math.tan(math.pi * fc2 / fs2)
        norm = 1.0 + math.sqrt(2.0) * k + k * k
        b_ref = np.array([k * k, 2 * k * k, k * k]) / norm
        a_ref = np.array(
            [1.0, 2.0 * (k * k - 1.0) / norm, (1.0 - math.sqrt(2.0) * k + k * k) / norm]
        )
        c = butter_design(2, fc2, "lowpass", fs2)
        np.testing.assert_allclose(c.b, b_ref, atol=1e-12, rtol=0.0)
        np.testing.assert_allclose(c.a, a_ref, atol=1e-12, rtol=0.0)


# --- criterion 5: sample entropy vs brute force ----------------------------------

def _sampen_oracle(u, m, r):
    n = len(u)
    count_m = 0
    count_m1 = 0
    for i in range(n - m):
        for j in range(i + 1, n - m):
            d = max(abs(u[i + k] - u[j + k]) for k in range(m))
            if d <= r:
                count_m += 1
                if abs(u[i + m] - u[j + m]) <= r:
                    count_m1 += 1
    if count_m == 0 or count_m1 == 0:
        return float("nan")
    return -math.log(count_m1 / count_m)


def test_criterion_05_sample_entropy():
    """Exact agreement (tolerance 0) with a quadratic brute-force oracle on 50
    random arrays N <= 300; constant input gives 0; no-match input gives NaN."""
    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(10, 301))
        x = rng.standard_normal(n)
        m = int(rng.integers(1, 4))
        r = float(rng.uniform(0.1, 0.5)) * float(np.std(x))
        got = sample_entropy(x, m=m, r=r)
        expect = _sampen_oracle(list(x), m, r)
        if math.isnan(expect):
            assert math.isnan(got)
        else:
            assert got == expect

    assert sample_entropy(np.full(50, 3.7), m=2, r=0.2) == 0.0
    # spread points: no m+1 template pair ever matches
    spread = np.array([0.0, 0.05, 10.0, 20.0, 20.03, 40.0])
    assert math.isnan(sample_entropy(spread, m=1, r=0.1))


# --- criterion 6: permutation entropy ---------------------------------------------

def _perm_oracle(x, order, delay):
    n = len(x)
    patterns = {}
    count = 0
    for i in range(n - (order - 1) * delay):
        w = [x[i + k * delay] for k in range(order)]
        ranks = []
        for p in range(order):
            rank = sum(1 for q in range(order) if w[q] < w[p]) + sum(
                1 for q in range(p) if w[q] == w[p]
            )
            ranks.append(rank)
        patterns[tuple(ranks)] = patterns.get(tuple(ranks), 0) + 1
        count += 1
    h = 0.0
    for c in patterns.values():
        p = c / count
        h -= p * math.log2(p)
    return h


def test_criterion_06_permutation_entropy():
    """[4,7,9,10,6,11,3] at order 2 gives 0.918296 bits within 1e-6 (4 rising
    vs 2 falling pairs); monotone input gives 0; exhaustive-oracle agreement
    for N <= 500, order <= 4."""
    x = np.array([4.0, 7.0, 9.0, 10.0, 6.0, 11.0, 3.0])
    assert perm_entropy(x, order=2) == pytest.approx(0.918296, abs=1e-6)

    assert perm_entropy(np.arange(40.0), order=3) == 0.0

    rng = np.random.default_rng(6)
    for _ in range(15):
        n = int(rng.integers(20, 501))
        order = int(rng.integers(2, 5))
        delay = int(rng.integers(1, 3))
        y = rng.standard_normal(n)
        assert perm_entropy(y, order=order, delay=delay) == pytest.approx(
            _perm_oracle(list(y), order, delay), rel=1e-12
        )


# --- criterion 7: stationary wavelet transform --------------------------------------

def _atrous_oracle(a, c, dilation):
    n = len(a)
    out = [0.0] * n
    for i in range(n):
        acc = 0.0
        for t, coef in enumerate(c):
            acc += coef * a[(i - t * dilation) % n]
        out[i] = acc
    return np.array(out)


def test_criterion_07_swt():
    """Constant-input detail coefficients are exactly zero; haar level-2
    coefficients on length-8 inputs match the circular a-trous oracle within
    1e-12; nse values sum to 1 within 1e-12; circular shift covariance is
    exact."""
    dec = swt(np.full(64, 2.5), wavelet="haar", levels=3)
    for d in dec.detail:
        assert np.all(d == 0.0)

    h, g = wavelet_filters("haar")
    rng = np.random.default_rng(7)
    for _ in range(10):
        x = rng.standard_normal(8)
        dec = swt(x, wavelet="haar", levels=2)
        a1 = _atrous_oracle(list(x), list(h), 1)
        d1 = _atrous_oracle(list(x), list(g), 1)
        a2 = _atrous_oracle(list(a1), list(h), 2)
        d2 = _atrous_oracle(list(a1), list(g), 2)
        np.testing.assert_allclose(dec.detail[0], d1, atol=1e-12, rtol=0.0)
        np.testing.assert_allclose(dec.detail[1], d2, atol=1e-12, rtol=0.0)
        np.testing.assert_allclose(dec.approx[1], a2, atol=1e-12, rtol=0.0)

    x = rng.standard_normal(512)
    values = swt_features(x, fs=100.0, wavelet="db4", levels=4, selected=("nse",))
    assert abs(sum(values.values()) - 1.0) <= 1e-12

    x = rng.standard_normal(64)
    shift = 11
    base = swt(x, wavelet="db2", levels=2)
    rolled = swt(np.roll(x, shift), wavelet="db2", levels=2)
    for a, b in zip(base.detail, rolled.detail):
        assert np.array_equal(np.roll(a, shift), b)
    for a, b in zip(base.approx, rolled.approx):
        assert np.array_equal(np.roll(a, shift), b)


# --- criterion 8: WFDB codec -----------------------------------------------------

def test_criterion_08_wfdb_codec():
    """The three specified format-212 frames decode to (0,0), (1000,0), (-1,0);
    encode-decode on 1e5 random 12-bit samples is the identity; the classic
    record line parses to (100, 2 signals, 360 Hz, 650000 samples)."""
    np.testing.assert_array_equal(
        decode_dat(bytes([0x00, 0x00, 0x00]), fmt=212, n_sig=1)[0], [0, 0]
    )
    np.testing.assert_array_equal(
        decode_dat(bytes([0xE8, 0x03, 0x00]), fmt=212, n_sig=1)[0], [1000, 0]
    )
    np.testing.assert_array_equal(
        decode_dat(bytes([0xFF, 0x0F, 0x00]), fmt=212, n_sig=1)[0], [-1, 0]
    )

    rng = np.random.default_rng(8)
    samples = rng.integers(-2048, 2048, size=100_000)
    np.testing.assert_array_equal(
        decode_dat(encode_212(samples), fmt=212, n_sig=1)[0], samples
    )

    header = parse_wfdb_header(
        "100 2 360 650000\n"
        "100.dat 212 200/mV 11 1024 995 -22131 0 MLII\n"
        "100.dat 212 200/mV 11 1024 1011 20052 0 V5\n"
    )
    assert header.record_name == "100"
    assert header.n_sig == 2
    assert header.fs == 360.0
    assert header.n_samples == 650000


# --- criterion 9: rolling-window count law ------------------------------------------

def test_criterion_09_window_count_law():
    """floor((N - length)/step) + 1 windows, on 1000 randomized cases."""
    rng = np.random.default_rng(9)
    for _ in range(1000):
        n = int(rng.integers(1, 500))
        length = int(rng.integers(1, n + 1))
        step = int(rng.integers(1, 60))
        rec = Record(id="r", fs=1.0, channels={"x": np.zeros(n)})
        wins = rolling_windows(rec, WindowSpec(length=length, step=step))
        assert len(wins) == (n - length) // step + 1


# --- criterion 10: pipeline determinism ----------------------------------------------

def test_criterion_10_pipeline_determinism(tmp_path):
    """200 synthetic records produce byte-identical CSVs for n_jobs 1, 4, 8;
    a fault injected into one record corrupts exactly that row.
    Budget: < 30 s."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    data_dir = tmp_path / "corpus"
    data_dir.mkdir()
    for i in range(200):
        write_csv_record(
            data_dir / f"rec{i:03d}.csv",
            {
                "ECG": rng.standard_normal(128),
                "ABP": rng.standard_normal(128) + 80.0,
            },
        )
    fset = FeatureSet()
    fset.add("mean")
    fset.add("std")
    fset.add("mnf")
    channels = ["ECG", "ABP"]

    def run_to_bytes(n_jobs: int) -> bytes:
        imp = CSVImporter(str(data_dir / "*.csv"), fs=100.0, channels=channels)
        result = run_plan(
            imp.jobs(), fset, channel_names=channels, n_jobs=n_jobs
        )
        out = tmp_path / f"out_{n_jobs}.csv"
        write_feature_csv(out, result.keys, result.rows)
        return out.read_bytes()

    outputs = {n_jobs: run_to_bytes(n_jobs) for n_jobs in (1, 4, 8)}
    assert outputs[1] == outputs[4] == outputs[8]

    clean_lines = outputs[1].decode().splitlines()
    (data_dir / "rec117.csv").write_text("ECG,ABP\n1,2\n3,broken\n")
    faulted = run_to_bytes(4).decode().splitlines()
    assert len(faulted) == len(clean_lines) == 201
    diffs = [i for i, (a, b) in enumerate(zip(clean_lines, faulted)) if a != b]
    assert diffs == [118]  # header + 117 preceding rows
    cells = faulted[118].split(",")
    assert cells[0] == "rec117"
    assert all(c == "" for c in cells[1:])
    assert time.perf_counter() - t0 < 30.0


# --- criterion 11: scaled replay over WFDB fixtures -----------------------------------

def test_criterion_11_scaled_wfdb_replay(tmp_path):
    """10 local WFDB fixture records through the full declarative pipeline
    (lowpass 60 Hz; mnf, mdf, psr, stdf, one welch peak with nperseg=512, six
    welch band powers) produce 10 rows and 11 feature columns per channel.
    Budget: < 10 s, fully offline."""
    t0 = time.perf_counter()
    srv = _FixtureServer(tmp_path / "served")
    try:
        rng = np.random.default_rng(11)
        names = [f"rec{i:02d}" for i in range(10)]
        for name in names:
            make_wfdb_fixture(
                srv.root / "ecgdb" / "1.0.0",
                name,
                fs=500.0,
                channels={
                    "II": rng.integers(-2048, 2048, size=2048),
                    "V1": rng.integers(-2048, 2048, size=2048),
                },
            )
        manifest = tmp_path / "records.txt"
        manifest.write_text("".join(f"ecgdb/1.0.0 {n}\n" for n in names))
        out = tmp_path / "features.csv"
        bands = [(0.6, 2), (2, 4), (4, 6), (6, 10), (10, 15), (15, 30)]
        doc = {
            "importer": {
                "kind": "wfdb-manifest",
                "manifest": str(manifest),
                "channels": ["II", "V1"],
                "base_url": srv.base_url,
            },
            "filters": [
                {"name": "butter_filter", "params": {"cutoff": 60, "btype": "lowpass"}}
            ],
            "features": [
                "mnf",
                "mdf",
                "psr",
                "stdf",
                {
                    "name": "peaks",
                    "params": {
                        "n_peaks": 1,
                        "spectrum": "welch",
                        "height": False,
                        "width": False,
                        "nperseg": 512,
                    },
                },
                *(
                    {
                        "name": "band_power",
                        "params": {"low": low, "high": high, "spectrum": "welch"},
                    }
                    for low, high in bands
                ),
            ],
            "run": {"output": str(out), "cache_dir": str(tmp_path / "cache")},
        }
        cfg = tmp_path / "config.json"
        cfg.write_text(json.dumps(doc, indent=2))
        assert main(["run", str(cfg)]) == 0
    finally:
        srv.close()

    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 11  # header + 10 records
    per_channel = ["mnf", "mdf", "psr_0.01", "stdf", "peak_freq_1"] + [
        f"power_[{low},{high}]Hz" for low, high in bands
    ]
    assert len(per_channel) == 11
    expected_header = ["id"] + [
        f"{ch}_{key}" for ch in ("II", "V1") for key in per_channel
    ]
    assert rows[0] == expected_header
    for name, cells in zip(names, rows[1:]):
        assert cells[0] == name
        assert len(cells) == 23
        assert all(c != "" for c in cells[1:])  # every feature defined
    report = json.loads(out.with_suffix(".report.json").read_text())
    assert report["records_total"] == 10
    assert report["n_failures"] == 0
    assert time.perf_counter() - t0 < 10.0


# --- criterion 12: validate -> run implication -----------------------------------------

def _fuzz_fragments(tmp_path):
    data_dir = tmp_path / "fuzz_data"
    data_dir.mkdir()
    rng = np.random.default_rng(121)
    for i in range(3):
        write_csv_record(
            data_dir / f"r{i}.csv",
            {"u": rng.standard_normal(64), "v": rng.standard_normal(64)},
        )
    glob_pattern = str(data_dir / "*.csv")
    importers = [
        {"kind": "csv-glob", "paths": [glob_pattern], "fs": 100, "channels": ["u", "v"]},
        {"kind": "csv-glob", "paths": [str(data_dir / "r0.csv")], "fs": 100,
         "channels": ["u", "v"]},
        {"kind": "csv-glob", "paths": [glob_pattern], "fs": 100,
         "channels": ["u", "v"], "window": {"length": 32, "step": 16}},
        {"kind": "csv-glob", "paths": [str(tmp_path / "none" / "*.csv")],
         "fs": 100, "channels": ["u"]},
        {"kind": "csv-glob", "paths": [glob_pattern], "channels": ["u"]},
        {"kind": "wfdb-manifest", "manifest": str(tmp_path / "no_manifest.txt"),
         "channels": ["II"]},
    ]
    filters = [
        None,
        None,
        [{"name": "butter_filter", "params": {"cutoff": 20}}],
        [{"name": "rm_outlier", "params": {"low": -5, "high": 5}}, "interpolate"],
        [{"name": "butter_filter", "params": {"cutoff": 90}}],
        ["rm_outliers"],
    ]
    features = [
        ["mean", "std"],
        ["mnf", {"name": "band_power", "params": {"low": 2, "high": 8,
                                                  "spectrum": "welch"}}],
        {"shared": ["mean"], "per_channel": {"v": ["mnf"]}},
        ["mnff"],
        [{"name": "band_power", "params": {"low": 10, "high": 80}}],
        [],
    ]
    runs = [None, {"n_jobs": 2}, {"format": "jsonl"}, {"n_jobs": 0}]
    return importers, filters, features, runs


def test_criterion_12_validate_run_implication(tmp_path):
    """On a config fuzz corpus, a passing validate is never followed by a
    config-classified run failure (exit code 1)."""
    importers, filters, features, runs = _fuzz_fragments(tmp_path)
    rng = np.random.default_rng(12)
    combos = list(itertools.product(range(len(importers)), range(len(filters)),
                                    range(len(features)), range(len(runs))))
    picks = [combos[i] for i in rng.choice(len(combos), size=80, replace=False)]
    # make sure the implication is never vacuous: pin known-good combos
    picks[:3] = [(0, 0, 0, 0), (1, 2, 1, 1), (2, 3, 2, 2)]

    n_valid = 0
    n_invalid = 0
    for idx, (ii, fi, gi, ri) in enumerate(picks):
        doc = {"importer": importers[ii], "features": features[gi]}
        if filters[fi] is not None:
            doc["filters"] = filters[fi]
        run_section = dict(runs[ri]) if runs[ri] is not None else {}
        run_section["output"] = str(tmp_path / f"out{idx}.csv")
        doc["run"] = run_section
        cfg = tmp_path / f"cfg{idx}.json"
        cfg.write_text(json.dumps(doc))
        rc_validate = main(["validate", str(cfg)])
        if rc_validate == 0:
            n_valid += 1
            rc_run = main(["run", str(cfg)])
            assert rc_run != 1, f"config {idx} passed validate but run exited 1"
        else:
            n_invalid += 1
    assert n_valid >= 5
    assert n_invalid >= 20
