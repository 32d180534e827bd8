import argparse
import sys
import traceback

# Import configurations and validate
import config
try:
    config.validate_config()
except ValueError as e:
    print(f"[ERROR] Configuration validation failed: {e}")
    sys.exit(2)

# Import core components
from reviewers import FixtureReviewer
from storage import CertificateStorage
from utils import load_ring_fixture
from workflow import EXIT_MISMATCH, EXIT_USAGE, CertificateWorkflow


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="certify",
        description="Certify that K(R) for C(so5, 3/2)_ad has no pseudounitary categorification.",
    )
    parser.add_argument("--stage", default="all", choices=("all",) + config.STAGES,
                        help="run a single stage; the others are reported as skipped")
    parser.add_argument("--jobs", type=int, default=config.JOBS, help="worker processes for the census and center stages")
    parser.add_argument("--smoke", action="store_true",
                        help="restrict the center search to CERT_SMOKE_ORBITS")
    parser.add_argument("--fixtures", default=config.FIXTURES_DIR, help="golden fixture directory")
    parser.add_argument("--out", default=config.OUTPUT_DIR, help="certificate output directory")
    parser.add_argument("--format", default=config.REPORT_FORMAT, choices=config.REPORT_FORMATS)
    parser.add_argument("--audit", action="store_true",
                        help="report literal lemma readings, fractional-only triples and the other rank-24 target")
    parser.add_argument("--ring", default=None, metavar="FILE.fring",
                        help="ring for the ring-generic stages (ring, obstruction)")
    parser.add_argument("--rank24-target", default=config.RANK24_TARGET, choices=config.RANK24_TARGETS)
    return parser


def main(argv=None) -> int:
    """Parses the command line, runs the pipeline and writes the certificate."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0
    if args.jobs < 1:
        print("[ERROR] --jobs must be at least 1.")
        return EXIT_USAGE

    print("\n[INFO] === Starting Certificate Pipeline ===")

    try:
        # 1. Initialize Services
        print("[INFO] Initializing services...")
        ring = None
        if args.ring:
            ring = load_ring_fixture(args.ring)
            if ring is None:
                return EXIT_USAGE
        smoke_orbits = config.parse_orbit_list(config.SMOKE_ORBITS) if args.smoke else None
        reviewer = FixtureReviewer()
        storage = CertificateStorage(output_dir=args.out)

        # 2. Initialize Workflow
        print("[INFO] Initializing workflow...")
        certificate_workflow = CertificateWorkflow(
            reviewer=reviewer,
            storage=storage,
            fixtures_dir=args.fixtures,
            jobs=args.jobs,
            smoke_orbits=smoke_orbits,
            audit=args.audit,
            rank24_target=args.rank24_target,
            initial_precision=config.INITIAL_PRECISION,
            ring=ring,
            ring_path=args.ring,
        )

        # 3. Run and report
        stages = config.STAGES if args.stage == "all" else (args.stage,)
        report = certificate_workflow.run_pipeline(stages)
        certificate_workflow.emit_report(report, args.format)
        return report['exit_code']

    except OSError as e:
        print(f"\n[ERROR] Could not write the certificate: {e}")
        traceback.print_exc()
        return EXIT_MISMATCH
    except Exception as e:
        print(f"\n[ERROR] An unexpected error occurred during setup or execution: {e}")
        traceback.print_exc()
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
