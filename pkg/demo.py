"""
Demo script voor UCD

Draait de complete pijplijn op een klein synthetisch corpus, zonder bestanden te schrijven
"""
import sys
from dataclasses import replace

import numpy as np

from src.models.config import SynthSpec, TrainConfig
from src.models.session import SessionLabel
from src.services.baseline_service import kmeans_baseline, raw_features
from src.services.dataset_service import DatasetService
from src.services.evaluation_service import EvaluationService
from src.services.synthetic_service import SyntheticCorpusGenerator
from src.services.training_service import TrainingService


# klein genoeg voor een laptop, groot genoeg om iets te zien
DEMO_SPEC = SynthSpec(n_sessions=300, vocab_size=120, profane_vocab_size=15, n_users=60, min_comments=4,
                      max_comments=10, min_words=3, max_words=10, seed=7)
DEMO_CONFIG = TrainConfig(embedding_dim=16, word_hidden=16, comment_hidden=16, social_dim=4, graph_hidden=16,
                          graph_dim=8, membership_hidden=8, temporal_hidden=16, max_words=10, max_comments=10,
                          n_components=3, epochs=10, covariance_jitter=1e-4, seed=0)


def demo_synthetic_corpus():
    """Demo: Synthetisch corpus met bekende labels"""
    print("=" * 70)
    print("DEMO 1: Synthetisch Corpus")
    print("=" * 70)

    corpus = SyntheticCorpusGenerator().generate(DEMO_SPEC)
    labels = corpus.labels()
    n_bullying = sum(label is SessionLabel.BULLYING for label in labels)

    print(f"\nSessions: {len(corpus)} ({n_bullying} bullying)")
    print(f"Vocabulary: {len(corpus.vocabulary)} tokens (incl. OOV)")
    print(f"Graph: {corpus.graph.n_users} users, {corpus.graph.adjacency.nnz} edges")

    session = corpus.sessions[0]
    print(f"\nEerste sessie {session.session_id} (owner {session.owner_id}):")
    for comment in session.comments[:3]:
        print(f"  t={comment.timestamp:8.1f}s  {comment.author_id}: {comment.text}")
    return corpus


def demo_training(corpus):
    """Demo: Training met een observer per epoch"""
    print("\n" + "=" * 70)
    print("DEMO 2: Training (Observer Pattern)")
    print("=" * 70)

    class ConsoleObserver:
        """Observer die de losses print"""
        def update(self, event_type, data):
            if event_type == "epoch_complete":
                report = data["report"]
                print(f"  epoch {data['epoch']:>2}: J={report.total_J:10.4f}  time={report.time_term:9.4f}  "
                      f"energy={report.energy_term:9.4f}  graph={report.graph_term:8.4f}")

    train, test = DatasetService().split_corpus(corpus, DEMO_CONFIG.train_fraction, DEMO_CONFIG.seed)
    service = TrainingService()
    service.add_observer(ConsoleObserver())

    print(f"\nTraining op {len(train)} sessies, d={DEMO_CONFIG.representation_dim()}, K={DEMO_CONFIG.K}")
    result = service.train(train, DEMO_CONFIG)
    print(f"\n[OK] Training klaar in {result.wall_time:.1f}s")
    return result, train, test


def demo_detection(result, test):
    """Demo: Energieen, threshold en metrics"""
    print("\n" + "=" * 70)
    print("DEMO 3: Detectie en Evaluatie")
    print("=" * 70)

    scores = result.detector().score(test)
    labels = list(zip(test.session_ids, test.labels()))
    report = EvaluationService().evaluate(scores.as_pairs(), labels, DEMO_CONFIG.tau, scores.predictions)

    print(f"\nThreshold (tau={DEMO_CONFIG.tau}): {scores.threshold:.4f}")
    print(f"Labeled bullying: {scores.n_bullying}/{len(test)}")
    print()
    print(report.format_table())

    order = np.argsort(-scores.energies)[:3]
    print("\nHoogste energieen:")
    for index in order:
        print(f"  {scores.session_ids[index]}: E={scores.energies[index]:.3f} "
              f"(label: {test.sessions[index].label.value})")
    return report


def demo_attention(result, test):
    """Demo: Attention gewichten van de hoogst scorende sessie"""
    print("\n" + "=" * 70)
    print("DEMO 4: Attention Case Study")
    print("=" * 70)

    detector = result.detector()
    scores = detector.score(test)
    top = int(np.argmax(scores.energies))
    record = detector.attention(test.subset([top]))[0]

    print(f"\nSessie {record['session_id']}:")
    for comment in record["comments"]:
        words = " ".join(f"{token}({weight:.2f})" for token, weight in zip(comment["tokens"], comment["word_attention"]))
        print(f"  [{comment['comment_attention']:.2f}] {words}")


def demo_ablations(train, test):
    """Demo: Ablatie varianten naast elkaar"""
    print("\n" + "=" * 70)
    print("DEMO 5: Ablaties")
    print("=" * 70)

    labels = list(zip(test.session_ids, test.labels()))
    evaluation = EvaluationService()
    print(f"\n{'variant':<10} {'d':>4} {'auroc':>8} {'f1':>8}")
    for variant in ("UCD", "UCDXtext", "UCDXtime", "UCDXgraph"):
        config = replace(DEMO_CONFIG, epochs=3).with_variant(variant)
        scores = TrainingService().train(train, config).detector().score(test)
        report = evaluation.evaluate(scores.as_pairs(), labels, config.tau, scores.predictions)
        print(f"{variant:<10} {config.representation_dim():>4} {report.auroc:>8.4f} {report.f1:>8.4f}")


def demo_baseline(test):
    """Demo: k-means baseline op ruwe features"""
    print("\n" + "=" * 70)
    print("DEMO 6: k-means Baseline")
    print("=" * 70)

    baseline = kmeans_baseline(raw_features(test), seed=DEMO_CONFIG.seed, n_init=10)
    labels = list(zip(test.session_ids, test.labels()))
    report = EvaluationService().evaluate(
        list(zip(test.session_ids, baseline.scores.tolist())), labels, DEMO_CONFIG.tau, baseline.labels
    )
    print(f"\nCluster sizes: {np.bincount(baseline.assignments, minlength=2).tolist()}")
    print(report.format_table())


def main():
    """Run all demos"""
    print("\n")
    print("=" * 70)
    print(" " * 15 + "UCD: UNSUPERVISED CYBERBULLYING DETECTION")
    print(" " * 20 + "Complete System Demonstration")
    print("=" * 70)

    try:
        corpus = demo_synthetic_corpus()
        result, train, test = demo_training(corpus)
        demo_detection(result, test)
        demo_attention(result, test)
        demo_ablations(train, test)
        demo_baseline(test)

        print("\n" + "=" * 70)
        print("SUCCESS: ALL DEMOS COMPLETED")
        print("=" * 70)

        print("\nNext steps:")
        print("1. Run tests: pytest -m \"not slow\"")
        print("2. Genereer data: python main.py generate --out-dir data")
        print("3. Train: python main.py train --sessions data/sessions.jsonl --graph data/graph.txt")
        print("4. Acceptatie: python scripts/run_acceptance.py")

    except Exception as e:
        print(f"\n[FAIL] Error: {e}")
        import traceback
        traceback.print_exc()
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
