"""Run the ratio-controlled detection experiment end to end on synthetic data.

Builds one user's corpus (covers carry style signatures, stegos do not),
splits covers 6:2:2 with a 10:1 training imbalance and a balanced 1:1 test
set, fuses user features with hashed content embeddings via scaled
cross-attention, trains the focal-loss classifier, and repeats three times
with different seeds to report mean +- std accuracy and F1.
"""

from stegoscope import ExperimentConfig, DatasetSpec, TrainConfig, run_experiment
from stegoscope.harness import EmbeddingConfig, LdaConfig, report_json
from stegoscope.synth import make_user_corpus

covers, stegos = make_user_corpus("U1", n_covers=400, n_stegos=120, seed=11)
print(f"corpus: {len(covers)} covers, {len(stegos)} stegos")
print("example cover:", covers[0].text)
print("example stego:", stegos[0].text)

config = ExperimentConfig(
    dataset=DatasetSpec(ratio=10),
    embedding=EmbeddingConfig(dim=32),
    lda=LdaConfig(topics=2, alpha=0.5, iterations=80, infer_iterations=20),
    train=TrainConfig(learning_rate=3e-3, epochs=40, batch_size=32, hidden=16),
    repeats=3,
)
report = run_experiment(covers, stegos, config)

print("\n=== per-repeat results (balanced 1:1 test set) ===")
for r in report["repeats"]:
    c = r["confusion"]
    print(f"repeat {r['repeat']} (seed {r['seed']}): acc={r['acc']:.3f} f1={r['f1']:.3f} "
          f"tp={c['tp']} fp={c['fp']} tn={c['tn']} fn={c['fn']}")
print(f"\nmean acc = {report['mean_acc']:.3f} +- {report['std_acc']:.3f}")
print(f"mean f1  = {report['mean_f1']:.3f} +- {report['std_f1']:.3f}")

# identical configuration -> byte-identical report
again = run_experiment(covers, stegos, config)
print("\nreport reproducible byte-for-byte:",
      report_json(report) == report_json(again))
