import os
import time
import traceback
from typing import Any, Dict, List, Optional, Sequence, Tuple

# Configuration and Utilities
import config
from config import FIXTURE_FILES, TOOL_VERSION
from utils import (
    figure2_tsv,
    fixture_body,
    load_constants_fixture,
    load_figure2_fixture,
    load_figure3_fixture,
    orbit_vectors_tsv,
)

# Stages
from cyclotomic import GALOIS_GROUP, U1, U2, format_cyc, galois_apply, self_test, sigma, twist_galois
from fusion_ring import (
    FusionRing, builtin_R, center_unit_dims_R, dump_fring, formal_codegrees_R, fpdim_data_R, is_builtin_R,
    is_positive_character, ring_characters_R, ring_summary,
)
from modular_obstruction import run_obstruction
from dnumber_census import (
    build_figure3, enumerate_candidate_squared_dims, figure3_tsv, is_orbit_max, log_orbit_max_oracle,
    divides_center_dimension, orbit_sizes, profile_equation_holds, smallest_center_dimensions, verify_gaal,
)
from center_search import compare_center_table, compare_constants, run_center_search, verify_subcategory

# Services
from reviewers import FixtureReviewer
from storage import CertificateStorage

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_FIXTURE_MISSING = 3

# 1 -> X0, A1 -> X1, A2 -> X5, A3 -> X2, B -> X3, C -> X4
SWAPPED_ASSIGNMENT = (0, 1, 5, 2, 3, 4)


class FixtureMissingError(Exception):
    """A golden fixture the selected stages need is not on disk."""


def _strip_comments(text: str) -> str:
    return "\n".join(line for line in text.splitlines() if line.strip() and not line.startswith('#')) + "\n"


def _constants_tsv(matrices) -> str:
    rows = [('ir33', matrices.ir33.tolist()), ('ir44', matrices.ir44.tolist()), ('rhs', matrices.rhs.tolist())]
    rows.extend((f"K{i}", row) for i, row in enumerate(matrices.K.tolist()))
    return "\n".join("\t".join([name] + [str(v) for v in values]) for name, values in rows) + "\n"


class CertificateWorkflow:
    """Runs the certificate stages in order and collects one report."""

    def __init__(self,
                 reviewer: FixtureReviewer,
                 storage: CertificateStorage,
                 fixtures_dir: str = config.FIXTURES_DIR,
                 jobs: int = config.JOBS,
                 smoke_orbits: Optional[Sequence[Tuple[int, ...]]] = None,
                 audit: bool = False,
                 rank24_target: str = config.RANK24_TARGET,
                 initial_precision: int = config.INITIAL_PRECISION,
                 ring: Optional[FusionRing] = None,
                 ring_path: Optional[str] = None
                 ):
        self.reviewer = reviewer
        self.storage = storage
        self.fixtures_dir = fixtures_dir
        self.jobs = jobs
        self.smoke_orbits = [tuple(o) for o in smoke_orbits] if smoke_orbits is not None else None
        self.audit = audit
        self.rank24_target = rank24_target
        self.initial_precision = initial_precision
        self.ring = ring
        self.ring_path = ring_path
        self._figure3 = None
        self._center_table = None
        print(f"[INFO] CertificateWorkflow initialized.")
        print(f"[INFO]   Fixtures: {self.fixtures_dir}")
        print(f"[INFO]   Jobs: {self.jobs}")
        print(f"[INFO]   Smoke Orbits: {self.smoke_orbits if self.smoke_orbits is not None else 'off (full search)'}")
        print(f"[INFO]   Audit Mode: {self.audit}")
        print(f"[INFO]   Rank-24 Target: {self.rank24_target}")

    # --------------------------------------------------------------------------
    # Private Helper Methods
    # --------------------------------------------------------------------------

    def _fixture_path(self, key: str) -> str:
        path = os.path.join(self.fixtures_dir, FIXTURE_FILES[key])
        if not os.path.exists(path):
            raise FixtureMissingError(f"Fixture '{FIXTURE_FILES[key]}' not found at {path}")
        return path

    def _review_fixture(self, step_result: Dict[str, Any], key: str, produced: str) -> bool:
        path = self._fixture_path(key)
        expected = fixture_body(path)
        if expected is None:
            raise ValueError(f"Fixture {path} could not be read")
        review = self.reviewer.review(FIXTURE_FILES[key], produced, expected)
        step_result['fixtures'][FIXTURE_FILES[key]] = review
        return review['approved']

    @staticmethod
    def _new_step_result() -> Dict[str, Any]:
        return {'status': 'error', 'feedback': 'Unknown error', 'section': {}, 'fixtures': {}, 'tables': {},
                'missing_fixture': False}

    @staticmethod
    def _error_result(step_result: Dict[str, Any], stage: str, e: Exception) -> Dict[str, Any]:
        if isinstance(e, FixtureMissingError):
            print(f"[ERROR]  {e}")
            step_result['missing_fixture'] = True
        else:
            print(f"[ERROR]  Critical error during {stage} step: {e}")
            traceback.print_exc()
        step_result['status'] = 'error'
        step_result['feedback'] = f"{type(e).__name__}: {e}"
        return step_result

    def _ring(self) -> FusionRing:
        return self.ring if self.ring is not None else builtin_R()

    # --------------------------------------------------------------------------
    # Stage Steps
    # --------------------------------------------------------------------------

    def _run_cyclotomic_step(self) -> Dict[str, Any]:
        print("\n[WORKFLOW] --- Step: Cyclotomic Kernel Self-Test ---")
        step_result = self._new_step_result()
        try:
            failures = self_test()
            s = sigma()
            step_result['section'] = {
                'self_test_failures': failures,
                'galois_group_order': len(GALOIS_GROUP),
                'sigma': f"zeta -> zeta^{s.k}",
                'twist_galois': f"zeta -> zeta^{twist_galois().k}",
                'sigma_u1': format_cyc(galois_apply(s, U1)),
                'sigma_u2': format_cyc(galois_apply(s, U2)),
            }
            step_result['status'] = 'pass' if not failures else 'fail'
            step_result['feedback'] = ("all kernel identities hold" if not failures
                                       else f"failing identities: {', '.join(failures)}")
            print(f"[INFO]   {step_result['feedback']}")
            return step_result
        except Exception as e:
            return self._error_result(step_result, 'cyclotomic', e)

    def _run_ring_step(self) -> Dict[str, Any]:
        print("\n[WORKFLOW] --- Step: Fusion Ring Validation ---")
        step_result = self._new_step_result()
        try:
            ring = self._ring()
            summary = ring_summary(ring)
            section: Dict[str, Any] = {
                'source': self.ring_path or 'builtin',
                'rank': summary['rank'],
                'valid': summary['valid'],
                'violations': summary['violations'][:10],
                'commutative': summary['commutative'],
                'builtin_R': is_builtin_R(ring),
            }
            ok = summary['valid']
            if is_builtin_R(ring):
                d, total = fpdim_data_R()
                positive = [n for n, chi in enumerate(ring_characters_R()) if is_positive_character(chi)]
                section['fpdims'] = [format_cyc(x) for x in d]
                section['fpdim_total'] = format_cyc(total)
                section['formal_codegrees'] = [format_cyc(x) for x in formal_codegrees_R()]
                section['positive_characters'] = positive
                # dim(Z_3) = dim(C) / codegree(X_3) = u1^2 u2^2, not u2^4
                z3 = center_unit_dims_R()[3]
                section['center_unit_dims'] = [format_cyc(x) for x in center_unit_dims_R()]
                section['z3_dim'] = format_cyc(z3)
                section['z3_dim_is_printed_label'] = z3 == U2 ** 4
                ok = ok and positive == [0]
            if self.ring is None:
                ok = self._review_fixture(step_result, 'ring', _strip_comments(dump_fring(ring))) and ok
            else:
                print(f"[INFO]   Ring loaded from {self.ring_path}; skipping the kr.fring comparison.")
            step_result['section'] = section
            step_result['status'] = 'pass' if ok else 'fail'
            step_result['feedback'] = (f"rank {ring.rank} ring valid" if summary['valid']
                                       else f"{len(summary['violations'])} violations; first: {summary['violations'][0]}")
            print(f"[INFO]   {step_result['feedback']}")
            return step_result
        except Exception as e:
            return self._error_result(step_result, 'ring', e)

    def _run_obstruction_step(self) -> Dict[str, Any]:
        print("\n[WORKFLOW] --- Step: Modular Obstruction ---")
        step_result = self._new_step_result()
        try:
            result = run_obstruction(self._ring(), full_audit=self.audit)
            section = {key: value for key, value in result.items() if key not in ('status', 'feedback')}
            if 'counts' in section:
                section['counts'] = list(section['counts'])
            step_result['section'] = section
            step_result['status'] = 'fail' if result['status'] == 'refused' else result['status']
            step_result['feedback'] = result['feedback']
            print(f"[INFO]   {result['feedback']}")
            return step_result
        except Exception as e:
            return self._error_result(step_result, 'obstruction', e)

    def _run_census_step(self) -> Dict[str, Any]:
        print("\n[WORKFLOW] --- Step: d-Number Census ---")
        step_result = self._new_step_result()
        try:
            census = enumerate_candidate_squared_dims(self.jobs, self.initial_precision)
            print(f"[INFO]   {len(census)} candidate squared dimensions in the census.")
            rows = build_figure3(census, self.jobs, self.initial_precision)
            self._figure3 = rows
            oracle_disagreements = [n.as_tuple() for n in census if is_orbit_max(n) != log_orbit_max_oracle(n)]
            problems: List[str] = []
            if len(rows) != 21:
                problems.append(f"{len(rows)} profile rows, expected 21")
            if not all(profile_equation_holds(r) for r in rows):
                problems.append("a profile does not add up to its dimension")
            if not all(divides_center_dimension(r) for r in rows):
                problems.append("a squared dimension does not divide 81 u2^4")
            if not all(verify_gaal(n) for n in census):
                problems.append("hat sigma conjugates disagree with the unit formulas")
            if oracle_disagreements:
                problems.append(f"orbit-maximality oracle disagrees on {oracle_disagreements}")
            matches = self._review_fixture(step_result, 'figure3', figure3_tsv(rows))
            step_result['section'] = {
                'candidates': [n.as_tuple() for n in census],
                'candidate_count': len(census),
                'rows': len(rows),
                'orbit_sizes': orbit_sizes(rows),
                'smallest_dimensions': [format_cyc(x) for x in smallest_center_dimensions()],
                'oracle_disagreements': oracle_disagreements,
                'problems': problems,
            }
            step_result['tables']['figure3'] = {
                'title': 'candidate dimensions and forgetful profiles',
                'columns': ['label', 'orbit', 'dim', 'X0', 'X1+X2+X5', 'X3', 'X4'],
                'rows': [line.split('\t') for line in figure3_tsv(rows).splitlines()],
            }
            step_result['status'] = 'pass' if not problems and matches else 'fail'
            step_result['feedback'] = "; ".join(problems) if problems else f"{len(rows)} rows in {len(orbit_sizes(rows))} orbits"
            print(f"[INFO]   {step_result['feedback']}")
            return step_result
        except Exception as e:
            return self._error_result(step_result, 'census', e)

    def _run_center_step(self) -> Dict[str, Any]:
        print("\n[WORKFLOW] --- Step: Center Search ---")
        step_result = self._new_step_result()
        try:
            figure3 = self._figure3
            if figure3 is None:
                print("[INFO]   Census stage not run; reading the profile table from its fixture.")
                figure3 = load_figure3_fixture(self._fixture_path('figure3'))
                if figure3 is None:
                    raise ValueError("Figure-3 fixture could not be parsed")
            literals = load_constants_fixture(self._fixture_path('constants'))
            if literals is None:
                raise ValueError("Constants fixture could not be parsed")

            result = run_center_search(figure3, builtin_R(), jobs=self.jobs, orbit_filter=self.smoke_orbits,
                                       audit=self.audit, rank24_target=self.rank24_target,
                                       initial_precision=self.initial_precision)
            matrices = result['matrices']
            constant_problems = compare_constants(matrices, literals)
            ok = result['status'] == 'pass' and not constant_problems
            ok = self._review_fixture(step_result, 'constants', _constants_tsv(matrices)) and ok
            ok = self._review_fixture(step_result, 'orbit45', orbit_vectors_tsv(result['orbit_vectors'])) and ok

            section: Dict[str, Any] = {
                'smoke': result['smoke'],
                'slots': [s.name for s in matrices.slots],
                'orbit_vector_count': result['orbit_vector_count'],
                'absent_orbits': list(result['absent_orbits']),
                'solutions': [{'orbit': list(s.orbit), 'rank': s.rank, 'triple': [list(v) for v in s.triple]}
                              for s in result['solutions']],
                'solution_count': len(result['solutions']),
                'ranks': result['ranks'],
                'global_dimension_ok': result['global_dimension_ok'],
                'note_warnings': result['note_warnings'],
                'constant_problems': constant_problems,
                'problems': result['problems'],
            }
            rank24 = result['rank24']
            if rank24 is not None:
                section['rank24.target_name'] = rank24['target_name']
                section['rank24.target'] = list(rank24['target'])
                section['rank24.targets'] = {k: {'profile': list(v['profile']), 'dim': v['dim']}
                                             for k, v in rank24['targets'].items()}
                section['rank24.summands'] = rank24['summands']
                section['rank24.attempts'] = rank24.get('attempts', [])
                section['rank24.eliminated'] = rank24['eliminated']
                section['rank24.feedback'] = rank24['feedback']
                if rank24.get('warning'):
                    section['rank24.warning'] = rank24['warning']
                    print(f"[WARN]   Rank-24 {rank24['warning']}")
            if self.audit:
                section['audit.literal_disagreements'] = sum(len(r['literal_disagreements']) for r in result['per_orbit'])
                section['audit.fractional_only'] = sum(len(r['fractional_only']) for r in result['per_orbit'])
                alternate = result.get('rank24_alternate')
                if alternate is not None:
                    section['audit.rank24_alternate.target_name'] = alternate['target_name']
                    section['audit.rank24_alternate.eliminated'] = alternate['eliminated']
                    section['audit.rank24_alternate.feedback'] = alternate['feedback']

            final = result['final']
            section['final_rank'] = final['rank'] if final else None
            if final is not None:
                self._center_table = final['table']
                section['final_orbit'] = list(final['solution'].orbit)
                expected = load_figure2_fixture(self._fixture_path('figure2'))
                if expected is None:
                    raise ValueError("Figure-2 fixture could not be parsed")
                section['figure2_problems'] = compare_center_table(final['table'], expected)
                ok = self._review_fixture(step_result, 'figure2', figure2_tsv(final['table'])) and ok
                step_result['tables']['figure2'] = {
                    'title': 'simples of Z(C) by forgetful image',
                    'columns': ['orbit', 'X0', 'X1', 'X2', 'X3', 'X4', 'X5'],
                    'rows': [[orbit] + list(column) for orbit, column in final['table']],
                }

            step_result['tables']['orbit_vectors'] = {
                'title': 'orbit vectors',
                'columns': [f"o{k}" for k in range(9)],
                'rows': [list(o) for o in result['orbit_vectors']],
            }
            step_result['tables']['per_orbit'] = {
                'title': 'per-orbit search counts',
                'columns': ['orbit', 'candidates', 'triples', 'note_warnings', 'survivors'],
                'rows': [[",".join(str(v) for v in r['orbit']), r['candidates'], r['triples'],
                          r['note_warnings'], len(r['survivors'])] for r in result['per_orbit']],
            }
            step_result['section'] = section
            step_result['status'] = 'pass' if ok else 'fail'
            step_result['feedback'] = "; ".join(constant_problems) if constant_problems else result['feedback']
            print(f"[INFO]   {step_result['feedback']}")
            return step_result
        except Exception as e:
            return self._error_result(step_result, 'center', e)

    def _run_subcat_step(self) -> Dict[str, Any]:
        print("\n[WORKFLOW] --- Step: Subcategory Verification ---")
        step_result = self._new_step_result()
        try:
            table = self._center_table
            if table is None:
                print("[INFO]   Center stage not run; reading the center table from its fixture.")
                table = load_figure2_fixture(self._fixture_path('figure2'))
                if table is None:
                    raise ValueError("Figure-2 fixture could not be parsed")
            columns = [column for _, column in table]
            result = verify_subcategory(columns, builtin_R())
            swapped = verify_subcategory(columns, builtin_R(), assignment=SWAPPED_ASSIGNMENT)
            step_result['section'] = {
                'verified': result['verified'],
                'failure': result['failure'],
                'assignment': result['assignment'],
                'hom_counts': result['hom_counts'],
                'swapped_assignment_verified': swapped['verified'],
                'swapped_assignment_failure': swapped['failure'],
            }
            step_result['status'] = 'pass' if result['verified'] else 'fail'
            step_result['feedback'] = "subcategory rules match K(R)" if result['verified'] else result['failure']
            print(f"[INFO]   {step_result['feedback']}")
            return step_result
        except Exception as e:
            return self._error_result(step_result, 'subcat', e)

    # --------------------------------------------------------------------------
    # Public Method to Run the Pipeline
    # --------------------------------------------------------------------------

    def run_pipeline(self, stages: Sequence[str] = config.STAGES) -> Dict[str, Any]:
        """Runs the selected stages in the fixed order; returns the report with its exit code."""
        steps = {
            'cyclotomic': self._run_cyclotomic_step,
            'ring': self._run_ring_step,
            'obstruction': self._run_obstruction_step,
            'census': self._run_census_step,
            'center': self._run_center_step,
            'subcat': self._run_subcat_step,
        }
        unknown = [s for s in stages if s not in steps]
        if unknown:
            raise ValueError(f"Unknown stage(s): {unknown}")

        sections: Dict[str, Any] = {
            'tool': {'version': TOOL_VERSION},
            'config': {
                'stages': [s for s in config.STAGES if s in stages],
                'smoke': self.smoke_orbits is not None,
                'smoke_orbits': [list(o) for o in self.smoke_orbits] if self.smoke_orbits is not None else [],
                'audit': self.audit,
                'rank24_target': self.rank24_target,
                'initial_precision': self.initial_precision,
                'ring': self.ring_path or 'builtin',
            },
        }
        tables: Dict[str, Any] = {}
        fixtures: Dict[str, Any] = {}
        failures: List[str] = []
        missing_fixture = False

        for name in config.STAGES:
            if name not in stages:
                sections[name] = {'status': 'skipped'}
                continue
            started = time.perf_counter()
            step_result = steps[name]()
            print(f"[INFO]   Stage '{name}' finished in {time.perf_counter() - started:.2f}s "
                  f"(status: {step_result['status']}).")
            sections[name] = dict(step_result['section'], status=step_result['status'],
                                  feedback=step_result['feedback'])
            tables.update(step_result['tables'])
            missing_fixture = missing_fixture or step_result['missing_fixture']
            for fixture_name, review in step_result['fixtures'].items():
                fixtures[fixture_name] = review
                if not review['approved']:
                    failures.append(f"fixture {fixture_name} differs")
            if step_result['status'] not in ('pass', 'inapplicable'):
                failures.append(f"{name}: {step_result['feedback']}")

        sections['fixtures'] = {}
        for fixture_name in sorted(fixtures):
            feedback = fixtures[fixture_name]['feedback']
            sections['fixtures'][f"{fixture_name}.match"] = fixtures[fixture_name]['approved']
            sections['fixtures'][f"{fixture_name}.sha256"] = feedback['sha256']
            if feedback['diff']:
                sections['fixtures'][f"{fixture_name}.diff"] = feedback['diff']

        if missing_fixture:
            exit_code = EXIT_FIXTURE_MISSING
        elif failures:
            exit_code = EXIT_MISMATCH
        else:
            exit_code = EXIT_OK
        sections['verdict'] = {
            'status': 'pass' if exit_code == EXIT_OK else 'fail',
            'failures': failures,
            'exit_code': exit_code,
        }
        if failures:
            for failure in failures:
                print(f"[ERROR] {failure}")
        print(f"\n[INFO] Verdict: {sections['verdict']['status']} (exit code {exit_code})")
        return {'sections': sections, 'tables': tables, 'exit_code': exit_code}

    def emit_report(self, report: Dict[str, Any], fmt: str = config.REPORT_FORMAT) -> List[str]:
        return self.storage.save_report(report, fmt)
