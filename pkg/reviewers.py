import difflib
import hashlib
from typing import Any, Dict


class FixtureReviewer:
    """Compares a produced rendering against its golden fixture."""

    def __init__(self, context_lines: int = 2):
        self.context_lines = context_lines

    def review(self, name: str, produced: str, expected: str) -> Dict[str, Any]:
        """
        Exact comparison of two renderings.

        Args:
            name: Fixture name used in the diff header (e.g. 'figure3.tsv').
            produced: Text rendered from the computation.
            expected: Fixture text with its provenance header stripped.

        Returns:
            A dictionary with 'approved' (bool) and 'feedback' (digests and a unified diff).
        """
        approved = produced == expected
        feedback = {
            'fixture': name,
            'sha256': hashlib.sha256(expected.encode('utf-8')).hexdigest(),
            'produced_sha256': hashlib.sha256(produced.encode('utf-8')).hexdigest(),
            'diff': '',
        }
        if not approved:
            diff = difflib.unified_diff(
                expected.splitlines(keepends=True),
                produced.splitlines(keepends=True),
                fromfile=f"fixtures/{name}",
                tofile=f"produced/{name}",
                n=self.context_lines,
            )
            feedback['diff'] = ''.join(diff)
            print(f"[WARN] Fixture {name} differs from the computed value.")
        else:
            print(f"[INFO] Fixture {name} matches (sha256 {feedback['sha256'][:12]}).")
        return {'approved': approved, 'feedback': feedback}
