"""
Script om UCD te testen op een synthetisch acceptatie corpus

Traint het volledige model en de drie ablaties over meerdere seeds met de
standaard hyperparameters en vergelijkt met de k-means baseline op ruwe features.
Schrijft een JSON rapport en print [OK]/[FAIL] per criterium.
"""
import argparse
import json
import logging
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.models.config import TrainConfig
from src.services.acceptance_service import AcceptanceService, acceptance_spec


def main():
    """Main functie"""
    parser = argparse.ArgumentParser(description="Synthetische acceptatie run voor UCD")
    parser.add_argument("--seeds", type=int, default=5)
    parser.add_argument("--n-sessions", type=int, default=1000)
    parser.add_argument("--skip-ablations", action="store_true", help="Alleen UCD en de baseline")
    parser.add_argument("--out", type=Path, default=Path("runs/acceptance.json"))
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args()

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    print("=" * 70)
    print("UCD Synthetic Acceptance Run")
    print("=" * 70)

    report = AcceptanceService().run(
        acceptance_spec(args.n_sessions),
        TrainConfig(),
        list(range(args.seeds)),
        with_ablations=not args.skip_ablations,
    )
    print(report.format_table())

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", encoding="utf-8") as handle:
        json.dump(report.to_dict(), handle, indent=2, sort_keys=True)
    print(f"\nReport written to {args.out}")

    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
