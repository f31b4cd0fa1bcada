"""Tour of the evaluation metrics on hand-built score sets.

Covers detection ROC-AUC, the accuracy-coverage area for selective
prediction, the prediction rejection ratio for selective generation, and
Pareto-front shares for comparing methods across task pairs.
"""

import numpy as np

import vecuq

rng = np.random.default_rng(0)

# --- ROC-AUC: probability a positive outranks a negative -------------------
n = 2000
labels = rng.integers(0, 2, n)
informative = labels * 1.0 + rng.standard_normal(n)
print(f"roc_auc, informative scores: {vecuq.roc_auc(informative, labels):.3f}")
print(f"roc_auc, pure noise:         {vecuq.roc_auc(rng.random(n), labels):.3f}")

# --- accuracy-coverage: admit samples from most to least confident ----------
correct = rng.random(n) < 0.85
good_uncertainty = np.where(correct, rng.random(n), rng.random(n) + 0.7)
print(f"\naccuracy-coverage area, useful uncertainty: "
      f"{vecuq.accuracy_coverage_auc(good_uncertainty, correct):.3f}")
print(f"accuracy-coverage area, random uncertainty: "
      f"{vecuq.accuracy_coverage_auc(rng.random(n), correct):.3f}")
print(f"overall accuracy (coverage 1.0):            {correct.mean():.3f}")

# --- prediction rejection ratio at 50% rejection ----------------------------
quality = rng.random(n)
noisy_proxy = -quality + 0.4 * rng.standard_normal(n)
print(f"\nprr, oracle ordering:  {vecuq.prr(-quality, quality):.3f}")
print(f"prr, noisy proxy:      {vecuq.prr(noisy_proxy, quality):.3f}")
print(f"prr, independent:      {vecuq.prr(rng.random(n), quality):.3f}")
print(f"prr, inverted proxy:   {vecuq.prr(quality, quality):.3f}")

# --- Pareto-front share across task pairs -----------------------------------
methods = ["combined", "specialist_a", "specialist_b", "mediocre"]
table = np.array(
    [
        [0.90, 0.91, 0.89],  # strong everywhere
        [0.97, 0.70, 0.72],  # wins task 0 only
        [0.71, 0.96, 0.70],  # wins task 1 only
        [0.80, 0.80, 0.80],  # dominated somewhere on every pair
    ]
)
shares = vecuq.pareto_front_share(table)
print("\npareto-front share over task pairs:")
for method, share in zip(methods, shares):
    print(f"  {method:>12}: {share:.2f}")
