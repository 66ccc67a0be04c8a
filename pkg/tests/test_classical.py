import numpy as np
import pytest

from qdrbench import classical
from qdrbench.classical import (
    ModelError,
    smo_solve,
    train_cart,
    train_knn,
    train_logistic,
    train_nb,
    train_svm,
)
from qdrbench.synth import separable_blobs


class TestLogistic:
    def test_separable_1d(self):
        x = np.array([[-2.0], [-1.0], [1.0], [2.0]])
        y = np.array([0, 0, 1, 1])
        model = train_logistic(x, y, max_iter=2000)
        assert model.coef[0] > 0
        assert np.array_equal(model.predict(x), y)

    def test_probability_half_at_zero_logit(self):
        model = classical.LogisticModel(
            coef=np.array([1.0]), intercept=0.0, n_iter=0, loss=0.0
        )
        assert model.predict_proba(np.array([[0.0]]))[0] == pytest.approx(0.5)
        assert model.predict(np.array([[0.0]]))[0] == 1  # >= 0.5 maps to 1

    def test_single_class_rejected(self):
        with pytest.raises(ModelError):
            train_logistic(np.ones((4, 1)), np.zeros(4))

    def test_matches_scipy_optimizer(self):
        from scipy.optimize import minimize

        rng = np.random.default_rng(0)
        x = rng.standard_normal((60, 2))
        y = (x @ np.array([1.0, -2.0]) + 0.3 * rng.standard_normal(60) > 0).astype(int)
        # flip some labels so the data is not separable and the unregularized
        # optimum is finite
        flip = rng.random(60) < 0.2
        y[flip] = 1 - y[flip]

        def loss(params):
            z = x @ params[:2] + params[2]
            return np.mean(np.log1p(np.exp(-np.abs(z))) + np.maximum(z, 0) - y * z)

        ref = minimize(loss, np.zeros(3), method="BFGS").x
        model = train_logistic(x, y, max_iter=20_000)
        assert np.allclose(model.coef, ref[:2], atol=2e-2)
        assert model.intercept == pytest.approx(ref[2], abs=2e-2)

    def test_first_order_optimality(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((80, 3))
        y = (rng.random(80) < 0.4).astype(int)
        model = train_logistic(x, y, max_iter=20_000)
        p = model.predict_proba(x)
        grad = np.concatenate([x.T @ (p - y) / 80, [(p - y).mean()]])
        assert np.linalg.norm(grad) < 1e-4

    def test_dimension_mismatch_rejected(self):
        x, y = separable_blobs(40, seed=0)
        model = train_logistic(x, y)
        with pytest.raises(ModelError):
            model.predict(np.ones((2, 3)))


class TestKnn:
    def test_query_on_training_point_k1(self):
        x = np.array([[0.0, 0.0], [5.0, 5.0]])
        y = np.array([0, 1])
        model = train_knn(x, y, k=1)
        assert model.predict(np.array([[5.0, 5.0]]))[0] == 1

    def test_global_vote(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((9, 2))
        y = np.array([1, 1, 1, 1, 1, 0, 0, 0, 0])
        model = train_knn(x, y, k=9)
        assert np.all(model.predict(rng.standard_normal((5, 2))) == 1)

    def test_matches_bruteforce_oracle(self):
        rng = np.random.default_rng(3)
        x, y = separable_blobs(60, seed=4, gap=1.5)
        model = train_knn(x, y, k=7)
        queries = rng.standard_normal((25, 2)) * 2.0
        got = model.predict(queries)
        for q, g in zip(queries, got):
            order = np.argsort(np.sum((x - q) ** 2, axis=1), kind="stable")[:7]
            votes = y[order].sum()
            assert g == (1 if 2 * votes > 7 else 0)

    def test_invalid_k(self):
        x, y = separable_blobs(10, seed=0)
        with pytest.raises(ModelError):
            train_knn(x, y, k=0)
        with pytest.raises(ModelError):
            train_knn(x, y, k=11)


class TestCart:
    def test_xor_solved(self):
        x = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
        y = np.array([0, 0, 1, 1])
        model = train_cart(x, y)
        assert np.array_equal(model.predict(x), y)

    def test_pure_input_single_leaf(self):
        model = train_cart(np.arange(8.0).reshape(4, 2), np.ones(4, int))
        assert model.root.is_leaf
        assert model.root.prob == 1.0

    def test_uniform_entropy_is_one_bit(self):
        counts = np.array([2.0, 2.0])
        assert classical._impurity(counts, 4, "entropy") == pytest.approx(1.0)

    def test_training_accuracy_nondecreasing_in_depth(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal((120, 3))
        y = (rng.random(120) < 0.4).astype(int)
        accs = []
        for depth in (1, 2, 4, 8, None):
            model = train_cart(x, y, max_depth=depth)
            accs.append(np.mean(model.predict(x) == y))
        assert all(b >= a - 1e-12 for a, b in zip(accs, accs[1:]))

    def test_gini_matches_sklearn_style_split(self):
        # one clean threshold: feature 0 at 0.5
        x = np.array([[0.0, 9.0], [0.2, -3.0], [0.9, 4.0], [1.0, 0.0]])
        y = np.array([0, 0, 1, 1])
        model = train_cart(x, y, criterion="gini", max_depth=1)
        assert model.root.feature == 0
        assert model.root.threshold == pytest.approx(0.55)

    def test_bad_criterion(self):
        with pytest.raises(ModelError):
            train_cart(np.ones((2, 1)), np.array([0, 1]), criterion="mse")


class TestNaiveBayes:
    def test_symmetric_tie_goes_to_class_zero(self):
        x = np.array([[-1.0], [-1.2], [-0.8], [1.0], [1.2], [0.8]])
        y = np.array([0, 0, 0, 1, 1, 1])
        model = train_nb(x, y)
        assert model.predict(np.array([[0.0]]))[0] == 0

    def test_query_at_class_mean(self):
        x = np.vstack([
            np.random.default_rng(6).standard_normal((20, 2)) - 5.0,
            np.random.default_rng(7).standard_normal((20, 2)) + 5.0,
        ])
        y = np.array([0] * 20 + [1] * 20)
        model = train_nb(x, y)
        assert model.predict(x[y == 1].mean(axis=0))[0] == 1
        assert model.predict(x[y == 0].mean(axis=0))[0] == 0

    def test_matches_bayes_oracle(self):
        rng = np.random.default_rng(8)
        x = rng.standard_normal((50, 2)) + rng.integers(0, 2, 50)[:, None]
        y = (rng.random(50) < 0.3).astype(int)
        if y.sum() in (0, 50):
            y[0] = 1 - y[0]
        model = train_nb(x, y)
        q = rng.standard_normal((10, 2))
        lp = model.log_posterior(q)
        for c in (0, 1):
            mu = x[y == c].mean(axis=0)
            var = np.maximum(x[y == c].var(axis=0), 1e-9)
            prior = np.mean(y == c)
            ref = np.log(prior) + np.sum(
                -0.5 * np.log(2 * np.pi * var) - (q - mu) ** 2 / (2 * var),
                axis=1,
            )
            assert np.allclose(lp[:, c], ref, atol=1e-10)


def qp_oracle(gram, y_signed, c, iters=200_000, lr=1e-3):
    """Projected-gradient solver for the SVM dual (equality via projection)."""
    n = y_signed.size
    q = gram * np.outer(y_signed, y_signed)
    alpha = np.full(n, 0.0)
    for _ in range(iters):
        g = q @ alpha - 1.0
        alpha = alpha - lr * g
        # project onto the y^T alpha = 0 hyperplane, then the box
        alpha = alpha - (alpha @ y_signed) / n * y_signed
        alpha = np.clip(alpha, 0.0, c)
    return 0.5 * alpha @ q @ alpha - alpha.sum()


class TestSvm:
    def test_separable_linear(self):
        x, y = separable_blobs(40, seed=9)
        model = train_svm(x, y, kernel="linear")
        assert np.array_equal(model.predict(x), y)
        assert model.objective < 0.0

    def test_contradictory_points_no_crash(self):
        x = np.array([[1.0, 1.0], [1.0, 1.0], [0.0, 0.0], [0.0, 0.0]])
        y = np.array([0, 1, 0, 1])
        model = train_svm(x, y, kernel="rbf")
        assert np.isfinite(model.objective)

    def test_dual_feasibility(self):
        x, y = separable_blobs(50, seed=10, gap=1.0)
        model = train_svm(x, y, kernel="rbf", c=1.0)
        assert np.all(model.alpha >= -1e-12)
        assert np.all(model.alpha <= 1.0 + 1e-12)
        assert abs(model.alpha @ model.y_signed) < 1e-6

    def test_objective_matches_qp_oracle(self):
        rng = np.random.default_rng(11)
        x = rng.standard_normal((40, 2))
        y = (rng.random(40) < 0.5).astype(int)
        if y.sum() in (0, 40):
            y[0] = 1 - y[0]
        model = train_svm(x, y, kernel="rbf", c=1.0)
        gram = classical._kernel_matrix(x, x, "rbf", model.gamma)
        ref = qp_oracle(gram, model.y_signed, 1.0)
        assert model.objective <= ref + 1e-3

    def test_precomputed_equals_direct(self):
        x, y = separable_blobs(30, seed=12, gap=1.2)
        direct = train_svm(x, y, kernel="linear")
        gram = x @ x.T
        pre = train_svm(None, y, kernel="precomputed", gram=gram)
        test_gram = x @ x.T
        assert np.array_equal(pre.predict(test_gram), direct.predict(x))

    def test_non_psd_gram_rejected(self):
        gram = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues 3, -1
        with pytest.raises(ModelError):
            train_svm(None, np.array([0, 1]), kernel="precomputed", gram=gram)

    def test_smo_kkt_stopping(self):
        x, y = separable_blobs(60, seed=13, gap=1.0)
        model = train_svm(x, y, kernel="rbf", c=1.0, tol=1e-3)
        gram = classical._kernel_matrix(x, x, "rbf", model.gamma)
        q = gram * np.outer(model.y_signed, model.y_signed)
        grad = q @ model.alpha - 1.0
        yg = -model.y_signed * grad
        up = (model.y_signed > 0) & (model.alpha < 1.0) | (
            (model.y_signed < 0) & (model.alpha > 0)
        )
        low = (model.y_signed > 0) & (model.alpha > 0) | (
            (model.y_signed < 0) & (model.alpha < 1.0)
        )
        assert yg[up].max() - yg[low].min() <= 1e-3 + 1e-9

    def test_smo_iteration_cap(self):
        x, y = separable_blobs(40, seed=14, gap=0.5)
        with pytest.raises(classical.SmoConvergenceError):
            gram = x @ x.T
            smo_solve(gram, np.where(y == 1, 1.0, -1.0), c=1.0, max_iter=3)
