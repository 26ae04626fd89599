"""Compare ablation arms and test the difference for statistical significance.

Runs the detector with and without user-profile features on the same
synthetic corpus, then feeds the per-repeat F1 scores to the two built-in
two-sample tests (Welch's t and exact Mann-Whitney U). Covers carry injected
style signatures the content embedding alone cannot see, so the user-feature
arm should win and the tests should flag the gap.
"""

from stegoscope import ExperimentConfig, DatasetSpec, TrainConfig, run_experiment
from stegoscope import mann_whitney_u, welch_t
from stegoscope.harness import EmbeddingConfig, LdaConfig
from stegoscope.synth import make_user_corpus

covers, stegos = make_user_corpus("U1", n_covers=500, n_stegos=160, seed=21)


def run_arm(use_user_features: bool) -> list[float]:
    config = ExperimentConfig(
        dataset=DatasetSpec(ratio=20),
        embedding=EmbeddingConfig(dim=32),
        lda=LdaConfig(topics=2, alpha=0.5, iterations=80, infer_iterations=20),
        train=TrainConfig(learning_rate=3e-3, epochs=50, batch_size=32, hidden=16),
        repeats=4,
        use_user_features=use_user_features,
    )
    report = run_experiment(covers, stegos, config)
    label = "user+content" if use_user_features else "content-only"
    print(f"{label:13s}: mean f1 = {report['mean_f1']:.3f} +- {report['std_f1']:.3f}")
    return [r["f1"] for r in report["repeats"]]


print("=== ablation arms (20:1 training imbalance) ===")
with_user = run_arm(True)
without_user = run_arm(False)

print("\n=== significance of the per-repeat F1 gap ===")
t_stat, t_p = welch_t(with_user, without_user)
u_stat, u_p = mann_whitney_u(with_user, without_user)
print(f"Welch t-test     : t = {t_stat:+.3f}, p = {t_p:.4f}")
print(f"Mann-Whitney U   : U = {u_stat:.1f}, p = {u_p:.4f} (exact, n+m <= 20)")
print("\nsmall p-values indicate the user-profile features carry real signal")
