import itertools

import numpy as np
import pytest

from mvinfo import kernels, measures as M, pid as P
from mvinfo.dist import DiscreteDistribution

COL = {name: i for i, name in enumerate(kernels.COLUMNS)}


def brute_counts(bins):
    n_ch, T = bins.shape
    out = []
    for i, j in itertools.combinations(range(n_ch), 2):
        row = []
        for y in range(n_ch):
            code = 4 * bins[i, :-1].astype(int) + 2 * bins[j, :-1] + bins[y, 1:]
            row.append(np.bincount(code, minlength=8))
        out.append(row)
    return np.array(out)


def general_row(pmf):
    d = DiscreteDistribution(("x1", "x2", "y"), (2, 2, 2),
                             {(a >> 2, (a >> 1) & 1, a & 1): p for a, p in enumerate(pmf)})
    r = P.decompose(d)
    return {
        "h_y": M.entropy(d, 2),
        "mi_x1": M.mutual_information(d, 0, 2),
        "mi_x2": M.mutual_information(d, 1, 2),
        "mi_joint": M.mutual_information(d, (0, 1), 2),
        "ii": M.interaction_information(d),
        "ci": M.co_information(d),
        "tc": M.total_correlation(d),
        "dtc": M.dual_total_correlation(d),
        "delta_i": M.delta_i(d),
        "mi_delta_gap": M.mi_delta_gap(d),
        "rsi": M.redundancy_synergy_index(d),
        "vs": M.varadan_synergy(d),
        "pid_red": r.redundancy,
        "pid_unq1": r.unique(1),
        "pid_unq2": r.unique(2),
        "pid_syn": r.synergy,
    }


def random_pmfs(n, seed=0):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.full(8, 0.6), size=n)
    p[rng.random(p.shape) < 0.25] = 0.0
    p[p.sum(axis=1) == 0, 0] = 1.0
    return p / p.sum(axis=1, keepdims=True)


def test_backend_selected():
    assert kernels.BACKEND in kernels.available_backends()
    assert "python" in kernels.available_backends()


@pytest.mark.parametrize("shape", [(3, 2), (4, 63), (5, 64), (6, 65), (7, 200), (3, 1000)])
def test_counts_match_bincount(backend, shape):
    rng = np.random.default_rng(shape[1])
    bins = (rng.random(shape) < 0.3).astype(np.uint8)
    got = kernels.triplet_counts(bins, backend)
    assert got.dtype == np.int64
    assert np.array_equal(got, brute_counts(bins))


def test_counts_edge_patterns(backend):
    for fill in (0, 1):
        bins = np.full((3, 130), fill, dtype=np.uint8)
        got = kernels.triplet_counts(bins, backend)
        assert np.array_equal(got, brute_counts(bins))


def test_measures_match_general_path(backend):
    pmfs = random_pmfs(200)
    table = kernels.binary_measures(pmfs, backend)
    for row, pmf in zip(table, pmfs):
        ref = general_row(pmf)
        for name, v in ref.items():
            assert row[COL[name]] == pytest.approx(v, abs=1e-12), name


def test_degenerate_pmfs(backend):
    eye = np.eye(8)
    table = kernels.binary_measures(eye, backend)
    assert np.all(table == 0.0)
    uniform = kernels.binary_measures(np.full((1, 8), 1 / 8), backend)[0]
    assert uniform[COL["h_y"]] == pytest.approx(1.0)
    assert np.allclose(uniform[1:], 0.0, atol=1e-15)


def test_backends_agree():
    names = kernels.available_backends()
    if len(names) < 2:
        pytest.skip("compiled extension not built")
    pmfs = random_pmfs(2000, seed=5)
    a = kernels.binary_measures(pmfs, names[0])
    b = kernels.binary_measures(pmfs, names[1])
    assert np.max(np.abs(a - b)) < 1e-12
    bins = (np.random.default_rng(2).random((9, 777)) < 0.2).astype(np.uint8)
    assert np.array_equal(kernels.triplet_counts(bins, names[0]), kernels.triplet_counts(bins, names[1]))


def test_finalize_clamps_and_raises():
    raw = np.zeros((2, len(kernels.COLUMNS)))
    raw[0, COL["mi_x1"]] = -1e-14
    raw[0, COL["pid_syn"]] = -1e-11
    raw[0, COL["ii"]] = -0.5
    out = kernels.finalize(raw)
    assert out[0, COL["mi_x1"]] == 0.0
    assert out[0, COL["pid_syn"]] == 0.0
    assert out[0, COL["ii"]] == -0.5
    raw[1, COL["pid_red"]] = -1e-6
    with pytest.raises(P.DecompositionError):
        kernels.finalize(raw)


def test_too_short(backend):
    with pytest.raises(ValueError):
        kernels.triplet_counts(np.zeros((3, 1), dtype=np.uint8), backend)


def test_benchmark_script_runs(capsys):
    import runpy
    from pathlib import Path

    script = Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"
    bench = runpy.run_path(str(script))
    bench["main"](["--channels", "5", "--bins", "300", "--repeat", "1"])
    out = capsys.readouterr().out
    assert "30 triplets" in out and "sweep s" in out


def test_env_forces_numpy_backend():
    import os
    import subprocess
    import sys

    env = dict(os.environ, MVINFO_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from mvinfo import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    ).stdout.strip()
    assert out == "python"
