import json

import numpy as np
import pytest

from sdnoise.experiment import (ExperimentSpec, RunReport, emit_report,
                                load_report, load_spec, make_noisy_pairs,
                                materialize_dataset, output_dir, run,
                                spec_from_dict, sweep_noise, sweep_samples,
                                write_plot_data)
from sdnoise.data import SplitSpec, split
from sdnoise.models import TrainConfig
from sdnoise.noise import LabelingNoise, PairingNoise

FAST_TRAIN = {"epochs": 3, "batch_size": 64}


def gaussian_cfg(method, **overrides):
    cfg = {
        "dataset": {"kind": "gaussian", "n": 400, "pi": 0.3,
                    "mean_pos": [1.5], "mean_neg": [-1.5], "seed": 0},
        "noise": {"model": "pairing", "rates": [0.2, 0.2]},
        "method": method,
        "n_pairs": 300,
        "repeats": 2,
        "seed": 0,
        "train": FAST_TRAIN,
    }
    cfg.update(overrides)
    return cfg


class TestSpec:
    def test_from_dict_round_trip(self):
        spec = spec_from_dict(gaussian_cfg("t_loss"))
        assert spec.method == "t_loss"
        assert spec.noise == PairingNoise(0.2, 0.2)
        assert spec.train == TrainConfig(epochs=3, batch_size=64)
        assert spec.repeats == 2

    def test_labeling_noise_parsed(self):
        spec = spec_from_dict(gaussian_cfg(
            "weighted", noise={"model": "labeling", "rates": [0.1, 0.3]}))
        assert spec.noise == LabelingNoise(0.1, 0.3)

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError):
            spec_from_dict(gaussian_cfg("boost"))

    def test_bad_repeats_rejected(self):
        with pytest.raises(ValueError):
            spec_from_dict(gaussian_cfg("t_loss", repeats=0))

    def test_bad_n_pairs_rejected(self):
        with pytest.raises(ValueError):
            spec_from_dict(gaussian_cfg("t_loss", n_pairs=0))

    def test_load_spec_from_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(gaussian_cfg("km")))
        spec = load_spec(path)
        assert spec.method == "km"

    def test_cv_grid_normalized_to_tuples(self):
        spec = spec_from_dict(gaussian_cfg(
            "t_loss", cv_grid=[[0.1, 0.1], [0.2, 0.2]]))
        assert spec.cv_grid == ((0.1, 0.1), (0.2, 0.2))


class TestMaterializeDataset:
    def test_gaussian(self):
        ds = materialize_dataset(gaussian_cfg("km")["dataset"])
        assert ds.n == 400 and ds.d == 1

    def test_csv(self, tmp_path):
        path = tmp_path / "tiny.csv"
        path.write_text("a,b,label\n1.0,2.0,yes\n0.0,1.0,no\n2.0,0.0,yes\n")
        ds = materialize_dataset({"kind": "csv", "path": str(path),
                                  "label_column": "label",
                                  "positive_value": "yes"})
        assert ds.n == 3 and ds.d == 2
        assert int(np.sum(ds.y == 1)) == 2

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            materialize_dataset({"kind": "sql"})


class TestMakeNoisyPairs:
    def test_default_pair_count_is_ten_x_train(self):
        spec = spec_from_dict(gaussian_cfg("t_loss", n_pairs=None))
        ds = materialize_dataset(spec.dataset)
        train, _ = split(ds, SplitSpec(spec.train_fraction, 0))
        pairs = make_noisy_pairs(train, spec, 0)
        assert pairs.n == 10 * train.n

    def test_determinism_and_repeat_variation(self):
        spec = spec_from_dict(gaussian_cfg("t_loss"))
        ds = materialize_dataset(spec.dataset)
        train, _ = split(ds, SplitSpec(spec.train_fraction, 0))
        a = make_noisy_pairs(train, spec, 0)
        b = make_noisy_pairs(train, spec, 0)
        c = make_noisy_pairs(train, spec, 1)
        np.testing.assert_array_equal(a.X, b.X)
        np.testing.assert_array_equal(a.q, b.q)
        assert not np.array_equal(a.q, c.q) or not np.allclose(a.X, c.X)

    def test_labeling_model_supported(self):
        spec = spec_from_dict(gaussian_cfg(
            "t_loss", noise={"model": "labeling", "rates": [0.2, 0.1]}))
        ds = materialize_dataset(spec.dataset)
        train, _ = split(ds, SplitSpec(spec.train_fraction, 0))
        pairs = make_noisy_pairs(train, spec, 0)
        assert pairs.n == 300
        assert set(np.unique(pairs.q)) <= {-1, 1}


class TestRun:
    @pytest.mark.parametrize("method", ["t_loss", "sd_loss_clean", "weighted",
                                        "unweighted", "km", "km_cop"])
    def test_every_method_completes(self, method):
        report = run(spec_from_dict(gaussian_cfg(method)))
        assert not report.partial
        assert len(report.accuracies) == 2
        assert all(0.0 <= a <= 1.0 for a in report.accuracies)

    def test_determinism(self):
        spec = spec_from_dict(gaussian_cfg("t_loss"))
        a, b = run(spec), run(spec)
        assert a.accuracies == b.accuracies
        assert a.seeds == b.seeds

    def test_mean_and_std_match_accuracies(self):
        report = run(spec_from_dict(gaussian_cfg("weighted")))
        assert report.mean == pytest.approx(float(np.mean(report.accuracies)))
        assert report.std == pytest.approx(float(np.std(report.accuracies)))

    def test_seeds_are_base_plus_repeat(self):
        report = run(spec_from_dict(gaussian_cfg("km", seed=7, repeats=3)))
        assert report.seeds == (7, 8, 9)

    def test_unweighted_equals_weighted_under_symmetric_noise(self):
        # symmetric rates give alpha = 1/2, which is exactly the
        # unweighted loss; the derived seeds coincide so the reports do too
        a = run(spec_from_dict(gaussian_cfg("weighted")))
        b = run(spec_from_dict(gaussian_cfg("unweighted")))
        assert a.accuracies == b.accuracies

    def test_corrected_beats_uncorrected_at_heavy_noise(self):
        # pi=0.3 with heavy symmetric pairing noise: the uncorrected
        # objective pushes everything to the majority Dissimilar tag
        cfg = dict(n_pairs=2000, repeats=3,
                   noise={"model": "pairing", "rates": [0.35, 0.35]},
                   train={"epochs": 15, "batch_size": 64})
        t = run(spec_from_dict(gaussian_cfg("t_loss", **cfg)))
        assert t.mean > 0.9

    def test_partial_report_on_single_class_data(self, tmp_path):
        # every sampled pair is Similar, so the prior estimate (and thus
        # the training stage) fails in every repeat
        path = tmp_path / "mono.csv"
        rows = "".join(f"{x:.3f},pos\n" for x in np.linspace(-1, 1, 40))
        path.write_text("f,label\n" + rows)
        cfg = gaussian_cfg("t_loss", dataset={
            "kind": "csv", "path": str(path), "label_column": "label",
            "positive_value": "pos"}, arch="linear")
        report = run(spec_from_dict(cfg))
        assert report.partial
        assert report.mean is None
        assert len(report.errors) == 2
        assert "stage 'train'" in report.errors[0]

    def test_cv_selection_recorded(self):
        cfg = gaussian_cfg("weighted", cv_grid=[0.4, 0.5], cv_folds=2,
                           n_pairs=120)
        report = run(spec_from_dict(cfg))
        assert report.selected_params
        assert all(s in (0.4, 0.5) for s in report.selected_params)


class TestSweeps:
    def test_sweep_noise_shape_and_order(self):
        spec = spec_from_dict(gaussian_cfg("t_loss", repeats=1))
        rows = sweep_noise(spec, [0.0, 0.2])
        assert [r for r, _ in rows] == [0.0, 0.2]
        assert all(0.0 <= m <= 1.0 for _, m in rows)

    def test_sweep_noise_unsorted_rejected(self):
        spec = spec_from_dict(gaussian_cfg("t_loss"))
        with pytest.raises(ValueError):
            sweep_noise(spec, [0.2, 0.0])

    def test_sweep_samples(self):
        spec = spec_from_dict(gaussian_cfg("t_loss", repeats=1))
        rows = sweep_samples(spec, [50, 150])
        assert [n for n, _ in rows] == [50, 150]

    def test_sweep_samples_validation(self):
        spec = spec_from_dict(gaussian_cfg("t_loss"))
        with pytest.raises(ValueError):
            sweep_samples(spec, [100, 50])
        with pytest.raises(ValueError):
            sweep_samples(spec, [0, 50])

    def test_sweep_writes_plot_data(self, tmp_path):
        spec = spec_from_dict(gaussian_cfg("km", repeats=1))
        out = tmp_path / "sweep.dat"
        rows = sweep_noise(spec, [0.0, 0.1], output=out)
        loaded = np.loadtxt(out)
        np.testing.assert_allclose(loaded, np.array(rows))


class TestReportsAndOutput:
    def _report(self):
        return RunReport("t_loss", (0.9, 0.95), 0.925, 0.025, (None, None),
                         1.5, (0, 1))

    def test_json_lines_round_trip(self, tmp_path):
        path = tmp_path / "report.json"
        emit_report(self._report(), "json-lines", path)
        loaded = load_report(path)
        assert loaded == self._report()

    def test_table_format(self, tmp_path):
        path = tmp_path / "report.txt"
        emit_report(self._report(), "table", path)
        text = path.read_text()
        assert "method: t_loss" in text
        assert "mean 0.9250" in text

    def test_plot_data_format(self, tmp_path):
        path = tmp_path / "report.dat"
        emit_report(self._report(), "plot-data", path)
        data = np.loadtxt(path)
        np.testing.assert_allclose(data[:, 1], [0.9, 0.95])

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            emit_report(self._report(), "xml", tmp_path / "r")

    def test_partial_property(self):
        assert not self._report().partial
        failed = RunReport("km", (), None, None, (), 0.1, (0,),
                           errors=("stage 'km' failed",))
        assert failed.partial

    def test_output_dir_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SDNOISE_OUTDIR", str(tmp_path))
        assert output_dir() == tmp_path
        out = write_plot_data([(1, 0.5)], "nested/plot.dat")
        assert out == tmp_path / "nested" / "plot.dat"
        assert out.exists()

    def test_absolute_path_ignores_outdir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SDNOISE_OUTDIR", str(tmp_path / "elsewhere"))
        target = tmp_path / "direct.dat"
        out = write_plot_data([(0, 1.0)], target)
        assert out == target
