"""
Workflow Tests

Stage selection, fixture review, exit codes and certificate rendering.  The center
stage runs on the smoke orbit vectors.

Run with:
    pytest tests/test_workflow.py -v
"""

import os
import shutil

import pytest

import config
import workflow as workflow_module
from main import build_parser, main
from reviewers import FixtureReviewer
from storage import CertificateStorage, format_value
from workflow import EXIT_FIXTURE_MISSING, EXIT_MISMATCH, EXIT_OK, CertificateWorkflow

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def _workflow(tmp_path, fixtures_dir=FIXTURES, **kwargs):
    storage = CertificateStorage(output_dir=str(tmp_path / "out"))
    return CertificateWorkflow(reviewer=FixtureReviewer(), storage=storage, fixtures_dir=fixtures_dir, **kwargs)


@pytest.fixture
def fixtures_copy(tmp_path):
    target = tmp_path / "fixtures"
    shutil.copytree(FIXTURES, target)
    return target


@pytest.fixture(scope="module")
def center_report(tmp_path_factory):
    tmp_path = tmp_path_factory.mktemp("center")
    workflow = _workflow(tmp_path, smoke_orbits=config.parse_orbit_list(config.SMOKE_ORBITS))
    return workflow, workflow.run_pipeline(("center", "subcat"))


# ---------------------------------------------------------------------------
# Tests: Reviewer and Storage
# ---------------------------------------------------------------------------


class TestReviewerAndStorage:
    """Fixture comparison and the certificate renderings."""

    def test_reviewer_approves_identical_text(self):
        review = FixtureReviewer().review("x.tsv", "a\tb\n", "a\tb\n")
        assert review['approved']
        assert review['feedback']['diff'] == ''
        assert review['feedback']['sha256'] == review['feedback']['produced_sha256']

    def test_reviewer_reports_unified_diff(self):
        review = FixtureReviewer().review("x.tsv", "1\n2\n", "1\n3\n")
        assert not review['approved']
        assert "--- fixtures/x.tsv" in review['feedback']['diff']
        assert "+2" in review['feedback']['diff']

    def test_format_value(self):
        assert format_value(True) == 'true'
        assert format_value(None) == 'none'
        assert format_value({'b': [1, 2], 'a': 0}) == '{"a":0,"b":[1,2]}'
        assert format_value(36) == '36'

    def test_save_report_writes_both_formats(self, tmp_path):
        storage = CertificateStorage(output_dir=str(tmp_path))
        report = {'sections': {'verdict': {'status': 'pass', 'exit_code': 0}},
                  'tables': {'t': {'title': 'tiny', 'columns': ['a'], 'rows': [[1]]}}}
        paths = storage.save_report(report, 'both')
        assert [os.path.basename(p) for p in paths] == ["certificate.txt", "certificate.md"]
        with open(paths[0], encoding='utf-8') as f:
            text = f.read()
        assert "verdict.exit_code = 0" in text
        assert "[table t]" in text
        with open(paths[1], encoding='utf-8') as f:
            assert "**Verdict:** pass" in f.read()

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            CertificateStorage(output_dir=str(tmp_path)).save_report({'sections': {}}, 'pdf')


# ---------------------------------------------------------------------------
# Tests: Stage Selection and Exit Codes
# ---------------------------------------------------------------------------


class TestStages:
    """Single stages, missing and tampered fixtures."""

    def test_obstruction_only(self, tmp_path):
        report = _workflow(tmp_path).run_pipeline(("obstruction",))
        sections = report['sections']
        assert report['exit_code'] == EXIT_OK
        assert sections['obstruction']['status'] == 'pass'
        assert sections['obstruction']['counts'] == [297, 2, 0]
        for name in ("cyclotomic", "ring", "census", "center", "subcat"):
            assert sections[name] == {'status': 'skipped'}
        assert sections['fixtures'] == {}

    def test_ring_stage_matches_fixture(self, tmp_path):
        report = _workflow(tmp_path).run_pipeline(("cyclotomic", "ring"))
        assert report['exit_code'] == EXIT_OK
        assert report['sections']['ring']['positive_characters'] == [0]
        assert report['sections']['ring']['z3_dim_is_printed_label'] is False
        assert report['sections']['fixtures']['kr.fring.match'] is True

    def test_missing_fixture_exit_code(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        report = _workflow(tmp_path, fixtures_dir=str(empty)).run_pipeline(("ring",))
        assert report['exit_code'] == EXIT_FIXTURE_MISSING
        assert report['sections']['ring']['status'] == 'error'

    def test_tampered_fixture_fails_with_diff(self, tmp_path, fixtures_copy):
        path = fixtures_copy / "kr.fring"
        text = path.read_text(encoding='utf-8')
        path.write_text(text.replace("\n1 0 0 0 0 0\n", "\n2 0 0 0 0 0\n", 1), encoding='utf-8')
        report = _workflow(tmp_path, fixtures_dir=str(fixtures_copy)).run_pipeline(("ring",))
        fixtures = report['sections']['fixtures']
        assert report['exit_code'] == EXIT_MISMATCH
        assert fixtures['kr.fring.match'] is False
        assert "+1 0 0 0 0 0" in fixtures['kr.fring.diff']

    def test_tampered_figure3_fails_with_diff(self, tmp_path, fixtures_copy):
        path = fixtures_copy / "figure3.tsv"
        text = path.read_text(encoding='utf-8')
        original = "12\t4\tu2^2\t1\t1\t1\t0\n"
        assert original in text
        path.write_text(text.replace(original, "12\t4\tu2^2\t1\t1\t0\t0\n", 1), encoding='utf-8')
        report = _workflow(tmp_path, fixtures_dir=str(fixtures_copy)).run_pipeline(("census",))
        fixtures = report['sections']['fixtures']
        assert report['exit_code'] == EXIT_MISMATCH
        assert fixtures['figure3.tsv.match'] is False
        assert "+12\t4\tu2^2\t1\t1\t1\t0" in fixtures['figure3.tsv.diff']
        assert report['sections']['verdict']['status'] == 'fail'

    def test_refused_obstruction_fails_the_verdict(self, tmp_path, monkeypatch):
        refused = {'status': 'refused', 'feedback': 'Dimension vector is not a character of the ring.'}
        monkeypatch.setattr(workflow_module, 'run_obstruction', lambda *args, **kwargs: refused)
        report = _workflow(tmp_path).run_pipeline(("obstruction",))
        assert report['sections']['obstruction']['status'] == 'fail'
        assert report['exit_code'] == EXIT_MISMATCH

    def test_subcat_reads_figure2_fixture(self, tmp_path):
        report = _workflow(tmp_path).run_pipeline(("subcat",))
        section = report['sections']['subcat']
        assert report['exit_code'] == EXIT_OK
        assert section['verified'] is True
        assert section['swapped_assignment_verified'] is False

    def test_unknown_stage_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            _workflow(tmp_path).run_pipeline(("bogus",))


# ---------------------------------------------------------------------------
# Tests: Center and Certificate
# ---------------------------------------------------------------------------


class TestCenterCertificate:
    """The smoke center run and its certificate text."""

    def test_center_and_subcat_pass(self, center_report):
        _, report = center_report
        center = report['sections']['center']
        assert report['exit_code'] == EXIT_OK, report['sections']['verdict']['failures']
        assert center['final_rank'] == 36
        assert center['ranks'] == [24, 36]
        assert center['rank24.eliminated'] is True
        assert report['sections']['subcat']['verified'] is True

    def test_fixture_digests_recorded(self, center_report):
        _, report = center_report
        fixtures = report['sections']['fixtures']
        for name in ("constants.tsv", "orbit45.tsv", "figure2.tsv"):
            assert fixtures[f"{name}.match"] is True
            assert len(fixtures[f"{name}.sha256"]) == 64

    def test_rendering_is_deterministic(self, center_report):
        workflow, report = center_report
        first = workflow.storage.render_text(report)
        assert first == workflow.storage.render_text(report)
        assert "center.final_rank = 36" in first
        assert "verdict.exit_code = 0" in first
        assert "[table figure2]" in first

    def test_default_target_carries_warning(self, center_report):
        workflow, report = center_report
        warning = report['sections']['center']['rank24.warning']
        assert "(2, 4, 2, 5, 2, 1)" in warning
        assert "(2, 4, 2, 5, 3, 1)" in warning
        assert "center.rank24.warning = " in workflow.storage.render_text(report)

    def test_certificate_bytes_do_not_depend_on_jobs(self, tmp_path):
        smoke = config.parse_orbit_list(config.SMOKE_ORBITS)
        certificates = []
        for jobs in (1, 2):
            workflow = _workflow(tmp_path / f"jobs{jobs}", jobs=jobs, smoke_orbits=smoke)
            paths = workflow.emit_report(workflow.run_pipeline(("center",)), 'both')
            certificates.append([open(p, 'rb').read() for p in paths])
        assert certificates[0] == certificates[1]

    def test_config_echo_omits_jobs(self, center_report):
        _, report = center_report
        assert 'jobs' not in report['sections']['config']
        assert report['sections']['config']['smoke'] is True


# ---------------------------------------------------------------------------
# Tests: Command Line
# ---------------------------------------------------------------------------


class TestCommandLine:
    """Argument handling and exit codes of main()."""

    def test_parser_defaults(self):
        args = build_parser().parse_args([])
        assert args.stage == "all"
        assert not args.smoke
        assert args.rank24_target == config.RANK24_TARGET

    def test_bad_jobs(self, tmp_path):
        assert main(["--jobs", "0", "--out", str(tmp_path)]) == 2

    def test_unknown_stage(self, tmp_path):
        assert main(["--stage", "bogus", "--out", str(tmp_path)]) == 2

    def test_missing_ring_file(self, tmp_path):
        assert main(["--ring", str(tmp_path / "absent.fring"), "--out", str(tmp_path)]) == 2

    def test_obstruction_stage_writes_certificate(self, tmp_path):
        out = tmp_path / "out"
        assert main(["--stage", "obstruction", "--fixtures", FIXTURES, "--out", str(out), "--format", "text"]) == 0
        text = (out / "certificate.txt").read_text(encoding='utf-8')
        assert "obstruction.status = pass" in text
        assert "census.status = skipped" in text
