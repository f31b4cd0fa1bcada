"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Criterion 5's far-query barycenter clause is asserted exactly as
specified and is a known failure: under the barycentric projection formula,
far queries concentrate weight on the directional extreme atom instead of
collapsing to the v-weighted barycenter (see the repository notes).
"""

import time
from contextlib import contextmanager

import numpy as np
import pytest

import vecuq
from vecuq import (
    AnchorConfig,
    Beta,
    Exponential,
    ReferenceCloud,
    fit,
    fit_coupling,
    project,
    rank_score,
    roc_auc,
    stack,
)
from vecuq.cli import main
from vecuq.model_io import read_scores_csv, write_scores_csv
from vecuq.synth import softmax_gradients, toy_experiment_report


@contextmanager
def reported(number, description):
    outcome = {"ok": False}
    try:
        yield outcome
        outcome["ok"] = True
    finally:
        status = "PASS" if outcome["ok"] else "FAIL"
        print(f"\n[acceptance] criterion {number:02d} {status}: {description}")


def binary_labels(rng, n):
    labels = rng.integers(0, 2, n)
    while labels.sum() in (0, n):
        labels = rng.integers(0, 2, n)
    return labels


def test_criterion_01_sinkhorn_feasibility():
    with reported(1, "marginal residual <= 1e-6 within 10000 iterations, <= 5 s/instance"):
        rng = np.random.default_rng(101)
        epsilons = [0.1, 0.5, 2.0]
        for trial in range(50):
            p = int(rng.integers(1, 301))
            q = int(rng.integers(1, 301))
            m = int(rng.integers(1, 6))
            eps = epsilons[trial % 3]
            source = rng.random((p, m)) * 2
            target = rng.random((q, m)) * 2
            a = rng.random(p) + 0.05
            a /= a.sum()
            b = rng.random(q) + 0.05
            b /= b.sum()
            start = time.perf_counter()
            coupling = fit_coupling(source, a, ReferenceCloud(target, b), epsilon=eps)
            elapsed = time.perf_counter() - start
            assert coupling.marginal_residual <= 1e-6, (trial, eps, coupling.marginal_residual)
            assert coupling.iterations_run <= 10000
            assert elapsed <= 5.0, (trial, elapsed)


def test_criterion_02_single_component_identity():
    with reported(2, "1-d rank scores reproduce the raw ROC-AUC exactly"):
        rng = np.random.default_rng(202)
        for _ in range(20):
            n = int(rng.integers(40, 200))
            raw = rng.random(n) * rng.uniform(0.5, 25)
            labels = binary_labels(rng, n)
            cal = stack([raw], ["score"])
            scores = rank_score(fit(cal), cal)
            assert np.array_equal(np.argsort(raw), np.argsort(scores))
            assert roc_auc(scores, labels) == roc_auc(raw, labels)


def test_criterion_03_duplicated_measure_identity():
    with reported(3, "stacking one measure 5x leaves the ROC-AUC unchanged exactly"):
        rng = np.random.default_rng(303)
        for _ in range(20):
            n = int(rng.integers(40, 150))
            raw = rng.random(n) * rng.uniform(0.5, 10)
            labels = binary_labels(rng, n)
            cal = stack([raw] * 5, [f"m{i}" for i in range(5)])
            scores = rank_score(fit(cal), cal)
            assert roc_auc(scores, labels) == roc_auc(raw, labels)


def test_criterion_04_constant_coordinate_invariance():
    with reported(4, "five constant columns leave the informative ROC-AUC unchanged exactly"):
        rng = np.random.default_rng(404)
        for _ in range(20):
            n = int(rng.integers(40, 150))
            raw = rng.random(n) * rng.uniform(0.5, 10)
            labels = binary_labels(rng, n)
            constants = [np.full(n, c) for c in rng.random(5) * 9]
            cal = stack([raw] + constants, [f"m{i}" for i in range(6)])
            scores = rank_score(fit(cal), cal)
            assert roc_auc(scores, labels) == roc_auc(raw, labels)


def test_criterion_05_hull_containment():
    with reported(5, "projections stay inside the reference bounding box"):
        rng = np.random.default_rng(505)
        for gamma in (0.0, 5.0):
            cal = stack([rng.random(80) * 3, rng.random(80) * 40], ["a", "b"])
            model = fit(cal, anchor_config=AnchorConfig(gamma))
            queries = stack(
                [np.concatenate([rng.random(60) * 3, [0.0, 30.0, 3e6]]),
                 np.concatenate([rng.random(60) * 40, [0.0, 400.0, 4e7]])],
                ["a", "b"],
            )
            projected = project(model, queries)
            lo = model.reference.atoms.min(axis=0)
            hi = model.reference.atoms.max(axis=0)
            assert (projected >= lo - 1e-12).all()
            assert (projected <= hi + 1e-12).all()


def test_criterion_05_barycenter_collapse():
    # Known failure (spec defect; see notes): the projection weights
    # w_j proportional to v_j * exp(-|s - atom_j|^2 / eps) concentrate on the
    # directional extreme atom as |s| grows, so the far query lands on the
    # hull boundary rather than the v-weighted barycenter.
    with reported(5, "gamma=0 far query projects onto the v-weighted barycenter (1e-6)"):
        rng = np.random.default_rng(506)
        cal = stack([rng.random(80), rng.random(80)], ["a", "b"])
        model = fit(cal, anchor_config=AnchorConfig(0.0))
        far = stack(
            [[1e6 * cal.values[:, 0].max()], [1e6 * cal.values[:, 1].max()]], ["a", "b"]
        )
        projected = project(model, far)[0]
        v = np.exp(model.coupling.log_v)
        barycenter = (v[:, None] * model.reference.atoms).sum(axis=0) / v.sum()
        assert np.linalg.norm(projected - barycenter) <= 1e-6


def test_criterion_06_toy_experiment_bands():
    with reported(6, "two-Gaussian experiment bands hold for 5 seeds within 60 s"):
        start = time.perf_counter()
        for seed in range(5):
            aucs = toy_experiment_report(seed)["aucs"]
            msp, mah, ours = aucs["one_minus_msp"], aucs["mahalanobis"], aucs["vecuq"]
            assert mah["ood"] >= 0.99, (seed, mah)
            assert msp["ood"] <= 0.30, (seed, msp)
            assert msp["miscls"] >= 0.65, (seed, msp)
            assert ours["ood"] >= 0.95, (seed, ours)
            assert ours["miscls"] >= 0.60, (seed, ours)
            combined_worst = min(ours["miscls"], ours["ood"])
            single_worst = max(
                min(msp["miscls"], msp["ood"]), min(mah["miscls"], mah["ood"])
            )
            assert combined_worst > single_worst, (seed, combined_worst, single_worst)
        assert time.perf_counter() - start <= 60.0


def pairwise_auc(scores, labels):
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    wins = (pos[:, None] > neg[None, :]).sum() + 0.5 * (pos[:, None] == neg[None, :]).sum()
    return wins / (pos.size * neg.size)


def test_criterion_07_metric_oracles():
    with reported(7, "metrics match their brute-force oracles"):
        rng = np.random.default_rng(707)

        for _ in range(20):
            n = int(rng.integers(20, 501))
            scores = np.round(rng.random(n), 2)
            labels = binary_labels(rng, n)
            assert abs(vecuq.roc_auc(scores, labels) - pairwise_auc(scores, labels)) <= 1e-12

        for _ in range(20):
            n = int(rng.integers(5, 200))
            unc = np.round(rng.random(n), 1)
            correct = rng.integers(0, 2, n)
            order = np.argsort(unc, kind="stable")
            flags = correct[order].astype(float)
            expected = float(np.mean([flags[: i + 1].mean() for i in range(n)]))
            assert vecuq.accuracy_coverage_auc(unc, correct) == expected

        for _ in range(20):
            quality = rng.random(int(rng.integers(10, 200)))
            assert vecuq.prr(-quality, quality) == 1.0
        for _ in range(20):
            quality = rng.random(10000)
            uncertainty = rng.random(10000)
            assert abs(vecuq.prr(uncertainty, quality)) < 0.05

        for _ in range(50):
            n_methods = int(rng.integers(2, 8))
            n_tasks = int(rng.integers(2, 6))
            table = np.round(rng.random((n_methods, n_tasks)), 1)
            shares = np.zeros(n_methods)
            pairs = [(a, b) for a in range(n_tasks) for b in range(a + 1, n_tasks)]
            for a, b in pairs:
                for i in range(n_methods):
                    dominated = any(
                        j != i
                        and table[j, a] >= table[i, a]
                        and table[j, b] >= table[i, b]
                        and (table[j, a] > table[i, a] or table[j, b] > table[i, b])
                        for j in range(n_methods)
                    )
                    shares[i] += not dominated
            assert np.array_equal(vecuq.pareto_front_share(table), shares / len(pairs))


def test_criterion_08_gradient_check():
    with reported(8, "softmax gradients match central differences within 1e-5 relative"):
        h = 1e-6
        for seed in range(5):
            rng = np.random.default_rng(808 + seed)
            X = rng.standard_normal((10, 2))
            y = rng.integers(0, 3, 10)
            y[:3] = [0, 1, 2]
            weights = rng.standard_normal((3, 2)) * 0.7
            biases = rng.standard_normal(3) * 0.7

            def loss(w, b):
                logits = X @ w.T + b
                shifted = logits - logits.max(axis=1, keepdims=True)
                probs = np.exp(shifted) / np.exp(shifted).sum(axis=1, keepdims=True)
                return -np.log(probs[np.arange(y.size), y]).mean()

            grad_w, grad_b = softmax_gradients(weights, biases, X, y)
            num_w = np.zeros_like(weights)
            for idx in np.ndindex(weights.shape):
                bump = np.zeros_like(weights)
                bump[idx] = h
                num_w[idx] = (loss(weights + bump, biases) - loss(weights - bump, biases)) / (2 * h)
            num_b = np.zeros_like(biases)
            for i in range(biases.size):
                bump = np.zeros_like(biases)
                bump[i] = h
                num_b[i] = (loss(weights, biases + bump) - loss(weights, biases - bump)) / (2 * h)

            scale = max(np.abs(num_w).max(), np.abs(num_b).max())
            assert np.abs(grad_w - num_w).max() / scale < 1e-5
            assert np.abs(grad_b - num_b).max() / scale < 1e-5


def test_criterion_09_ablation_surface():
    with reported(9, "target x scaling x gamma grid is finite; beta/featurewise near best"):
        ood_by_cell = {}
        for family_name, family in (("beta", Beta()), ("exp", Exponential())):
            for scaling in ("featurewise", "global", "identity"):
                for gamma in (0.0, 2.0, 5.0):
                    report = toy_experiment_report(
                        0,
                        scaling_kind=scaling,
                        reference_family=family,
                        gamma=gamma,
                        train_per_class=800,
                        test_per_class=800,
                        ood_count=800,
                        calibration_size=300,
                    )
                    for method_aucs in report["aucs"].values():
                        assert np.isfinite(list(method_aucs.values())).all()
                    for split in ("test_scores", "ood_scores"):
                        for values in report[split].values():
                            assert np.isfinite(values).all()
                    ood_by_cell[(family_name, scaling, gamma)] = report["aucs"]["vecuq"]["ood"]
        best = max(ood_by_cell.values())
        assert best - ood_by_cell[("beta", "featurewise", 5.0)] <= 0.05


def test_criterion_10_csv_ingestion_flow(tmp_path, capsys):
    with reported(10, "external score columns flow through fit -> rank -> eval unchanged"):
        rng = np.random.default_rng(1010)
        columns = {"external_a": rng.random(120) * 7, "external_b": rng.random(120) * 0.2}
        labels = binary_labels(rng, 120)

        scores_path = tmp_path / "external_scores.csv"
        write_scores_csv(scores_path, list(columns), list(columns.values()))
        labels_path = tmp_path / "labels.csv"
        write_scores_csv(labels_path, ["label"], [labels])

        names, parsed = read_scores_csv(scores_path)
        assert names == tuple(columns)
        for j, original in enumerate(columns.values()):
            assert np.array_equal(parsed[:, j], original)

        model_path = tmp_path / "model.json"
        ranks_path = tmp_path / "ranks.csv"
        assert main(["fit", str(scores_path), "--out", str(model_path)]) == 0
        assert main(["rank", str(model_path), str(scores_path), "--out", str(ranks_path)]) == 0

        cal = stack(list(columns.values()), list(columns))
        expected_ranks = rank_score(fit(cal), cal)
        _, rank_rows = read_scores_csv(ranks_path, require_nonnegative=False)
        assert np.array_equal(rank_rows[:, 1], expected_ranks)

        capsys.readouterr()
        assert main(["eval", str(ranks_path), str(labels_path), "--metric", "roc_auc"]) == 0
        machine_line = [
            line for line in capsys.readouterr().out.splitlines() if line.startswith("roc_auc,")
        ][0]
        cli_value = float(machine_line.split(",", 1)[1])
        assert cli_value == roc_auc(expected_ranks, labels)
