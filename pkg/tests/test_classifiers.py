import numpy as np
import pytest

from dptune.classifiers import (
    CLASSIFIER_IDS,
    ParameterSetting,
    ParameterSpec,
    default_setting,
    parameter_space,
    predict_proba,
    train,
)
from dptune.classifiers import forest
from dptune.classifiers._tree import TreeConfig, fit_tree
from dptune.dataset import Dataset
from dptune.synth import make_separable_dataset


def toy_dataset(n=60, p=3, seed=0, margin=2.5):
    rng = np.random.default_rng(seed)
    labels = (rng.random(n) < 0.4).astype(int)
    features = rng.normal(0, 1, (n, p))
    features[:, 0] += margin * labels
    features = features - features.min() + 0.1  # keep metric-like positivity
    return Dataset(
        name="toy",
        features=features,
        labels=labels,
        feature_names=tuple(f"f{i}" for i in range(p)),
    )


class TestParameterSpaces:
    def test_boost_space_matches_tuning_table(self):
        space = parameter_space("boost")
        by_name = {s.name: s for s in space.specs}
        assert by_name["n_iterations"].candidates == (1, 10, 20, 30, 40)
        assert by_name["n_iterations"].default == 1
        assert by_name["winnow"].candidates == (False, True)
        assert by_name["winnow"].default is False
        assert by_name["model_type"].candidates == ("rules", "tree")
        assert by_name["model_type"].default == "rules"
        assert space.size == 5 * 2 * 2 == 20

    def test_rf_space(self):
        space = parameter_space("rf")
        assert space.specs[0].candidates == (10, 20, 30, 40, 50)
        assert space.specs[0].default == 10

    def test_glm_space_empty(self):
        space = parameter_space("glm")
        assert space.specs == ()
        assert space.size == 1
        assert dict(default_setting("glm")) == {}

    def test_defaults(self):
        assert default_setting("cart")["complexity"] == 0.01
        assert default_setting("knn")["n_neighbors"] == 1
        nnet = default_setting("nnet")
        assert nnet["n_hidden"] == 1
        assert nnet["weight_decay"] == 0
        nb = default_setting("nb")
        assert nb["laplace"] == 0
        assert nb["kernel_density"] is False

    def test_unknown_classifier(self):
        with pytest.raises(ValueError, match="unknown classifier"):
            parameter_space("svm")

    def test_spec_invariants(self):
        with pytest.raises(ValueError, match="default"):
            ParameterSpec("p", "numeric", 3, (1, 2))
        with pytest.raises(ValueError, match="strictly increase"):
            ParameterSpec("p", "numeric", 1, (1, 3, 2))
        with pytest.raises(ValueError, match="duplicate"):
            ParameterSpec("p", "factor", "a", ("a", "a"))

    def test_setting_validation(self):
        space = parameter_space("boost")
        with pytest.raises(ValueError, match="do not match"):
            space.validate(ParameterSetting(n_iterations=10))
        with pytest.raises(ValueError, match="expects"):
            space.validate(ParameterSetting(n_iterations=10, winnow="yes", model_type="tree"))

    def test_setting_is_hashable_mapping(self):
        s1 = ParameterSetting(a=1, b=True)
        s2 = ParameterSetting({"b": True, "a": 1})
        assert s1 == s2
        assert hash(s1) == hash(s2)
        assert dict(s1) == {"a": 1, "b": True}


class TestTrainPredict:
    def test_knn_k1_memorizes_training_rows(self):
        d = toy_dataset()
        m = train("knn", ParameterSetting(n_neighbors=1), d, seed=0)
        probs = predict_proba(m, d.features)
        assert np.array_equal(probs, d.labels.astype(float))

    def test_knn_probs_are_multiples_of_k(self):
        d = toy_dataset(n=80)
        k = 5
        m = train("knn", ParameterSetting(n_neighbors=k), d, seed=0)
        probs = predict_proba(m, d.features[:20])
        assert np.allclose(probs * k, np.round(probs * k))

    def test_boost_one_round_equals_base_learner(self):
        d = toy_dataset(n=100, seed=2)
        m = train(
            "boost",
            ParameterSetting(n_iterations=1, winnow=False, model_type="rules"),
            d, seed=0,
        )
        stump = fit_tree(
            d.features, d.labels,
            config=TreeConfig(max_depth=1, min_split=2, min_bucket=1, complexity=0.0),
        )
        assert np.array_equal(predict_proba(m, d.features), stump.predict_proba(d.features))

    def test_rf_vote_fraction_quantization(self):
        d = toy_dataset(n=100, seed=3)
        m = train("rf", ParameterSetting(n_trees=10), d, seed=5)
        probs = predict_proba(m, d.features[:30])
        assert np.allclose(probs * 10, np.round(probs * 10))

    def test_rf_single_tree_equals_bootstrap_cart(self):
        d = toy_dataset(n=90, seed=4)
        m = train("rf", ParameterSetting(n_trees=10), d, seed=11)
        # with full feature sampling, one forest tree is exactly one
        # bootstrap-resampled tree grown with the forest's tree config
        single = forest.fit(
            d.features, d.labels, ParameterSetting(n_trees=1), seed=11,
            mtry=d.n_features,
        )
        rng = forest.tree_rng(11, 0)
        rows = rng.integers(0, d.n_rows, size=d.n_rows)
        manual = fit_tree(d.features[rows], d.labels[rows], config=forest._TREE_CONFIG)
        assert np.array_equal(
            single.predict_proba(d.features), (manual.predict_proba(d.features) > 0.5).astype(float)
        )
        assert m is not None  # the 10-tree model trains alongside

    @pytest.mark.parametrize("cid", CLASSIFIER_IDS)
    def test_determinism(self, cid):
        d = toy_dataset(n=70, seed=5)
        setting = default_setting(cid)
        p1 = predict_proba(train(cid, setting, d, seed=9), d.features)
        p2 = predict_proba(train(cid, setting, d, seed=9), d.features)
        assert np.array_equal(p1, p2)

    @pytest.mark.parametrize("cid", CLASSIFIER_IDS)
    def test_probabilities_in_unit_interval(self, cid):
        d = toy_dataset(n=60, seed=6)
        m = train(cid, default_setting(cid), d, seed=1)
        probs = predict_proba(m, d.features)
        assert probs.shape == (60,)
        assert (probs >= 0).all() and (probs <= 1).all()

    @pytest.mark.parametrize("cid", CLASSIFIER_IDS)
    def test_empty_rows_empty_output(self, cid):
        d = toy_dataset(n=40, seed=7)
        m = train(cid, default_setting(cid), d, seed=1)
        out = predict_proba(m, np.empty((0, d.n_features)))
        assert out.shape == (0,)

    def test_glm_orders_by_separating_direction(self):
        rng = np.random.default_rng(8)
        x = np.sort(rng.random(40))[:, None] * 10
        labels = (x[:, 0] > 5).astype(int)
        d = Dataset(name="sep", features=x, labels=labels, feature_names=("x",))
        m = train("glm", ParameterSetting(), d, seed=0)
        probs = predict_proba(m, x)
        assert (np.diff(probs) >= -1e-12).all()  # monotone in the feature
        assert probs[-1] > 0.9 and probs[0] < 0.1

    def test_nb_kernel_mode_trains(self):
        d = toy_dataset(n=80, seed=9)
        m = train("nb", ParameterSetting(laplace=0, kernel_density=True), d, seed=0)
        probs = predict_proba(m, d.features)
        assert (probs >= 0).all() and (probs <= 1).all()
        # kernel and gaussian modes should disagree somewhere
        g = train("nb", ParameterSetting(laplace=0, kernel_density=False), d, seed=0)
        assert not np.array_equal(probs, predict_proba(g, d.features))

    def test_single_class_training_rejected(self):
        d = toy_dataset(n=30, seed=10)
        all_clean = Dataset(
            name="t", features=d.features, labels=np.zeros(30, dtype=int),
            feature_names=d.feature_names,
        )
        with pytest.raises(ValueError, match="single outcome class"):
            train("glm", ParameterSetting(), all_clean, seed=0)

    def test_column_count_mismatch_rejected(self):
        d = toy_dataset()
        m = train("knn", default_setting("knn"), d, seed=0)
        with pytest.raises(ValueError, match="column mismatch"):
            predict_proba(m, np.ones((3, d.n_features + 1)))

    def test_column_name_mismatch_rejected(self):
        d = toy_dataset()
        m = train("knn", default_setting("knn"), d, seed=0)
        with pytest.raises(ValueError, match="column mismatch"):
            predict_proba(m, d.features, feature_names=("a", "b", "c"))

    def test_setting_space_mismatch_rejected(self):
        d = toy_dataset()
        with pytest.raises(ValueError, match="do not match"):
            train("rf", ParameterSetting(n_neighbors=1), d, seed=0)


class TestWinnow:
    def test_winnow_drops_gainless_features(self):
        from dptune.classifiers.boost import winnow_features

        d = make_separable_dataset(n_rows=300, n_informative=2, n_noise=1, seed=12)
        # a constant column has zero univariate gain: below 1% of any best
        X = np.column_stack([d.features, np.full(d.n_rows, 3.0)])
        kept = winnow_features(X, d.labels)
        assert 0 in kept and 1 in kept  # informative columns survive
        assert X.shape[1] - 1 not in kept  # the gainless column goes

    def test_winnow_keeps_all_when_nothing_splits(self):
        from dptune.classifiers.boost import winnow_features

        X = np.ones((10, 3))
        y = np.array([0, 1] * 5)
        assert winnow_features(X, y) == [0, 1, 2]


class TestNnet:
    def test_seed_changes_initialization(self):
        d = toy_dataset(n=60, seed=13)
        setting = default_setting("nnet")
        p1 = predict_proba(train("nnet", setting, d, seed=1), d.features)
        p2 = predict_proba(train("nnet", setting, d, seed=2), d.features)
        assert not np.array_equal(p1, p2)

    def test_decay_shrinks_confidence(self):
        d = toy_dataset(n=120, seed=14, margin=4.0)
        sharp = train("nnet", ParameterSetting(n_hidden=3, weight_decay=0), d, seed=3)
        damped = train("nnet", ParameterSetting(n_hidden=3, weight_decay=0.1), d, seed=3)
        p_sharp = predict_proba(sharp, d.features)
        p_damped = predict_proba(damped, d.features)
        assert np.abs(p_damped - 0.5).mean() < np.abs(p_sharp - 0.5).mean()

    def test_learns_separable_problem(self):
        d = toy_dataset(n=150, seed=15, margin=3.5)
        m = train("nnet", ParameterSetting(n_hidden=3, weight_decay=0.0001), d, seed=4)
        probs = predict_proba(m, d.features)
        accuracy = np.mean((probs > 0.5) == (d.labels == 1))
        assert accuracy > 0.85
