import os
import re
from typing import Any, Dict, List, Optional, Tuple

from dnumber_census import DimMonomial, ForgetfulProfile
from fusion_ring import FusionRing, FusionRingError, load_fring

_DIM_FACTOR = re.compile(r'^(3|u1|u2|beta)(?:\^(-?\d+))?$')


def read_fixture_lines(filepath: str) -> Optional[List[List[str]]]:
    """Reads a tab-separated fixture, skipping the '#' provenance header and blank lines."""
    # print(f"[DEBUG] Reading fixture: {filepath}")
    try:
        with open(filepath, 'r', encoding='utf-8') as f:
            rows = []
            for line in f:
                line = line.rstrip('\n')
                if not line.strip() or line.startswith('#'):
                    continue
                rows.append(line.split('\t'))
        return rows
    except FileNotFoundError:
        print(f"[ERROR] Fixture file not found at {filepath}")
        return None
    except Exception as e:
        print(f"[ERROR] Unexpected error reading fixture {filepath}: {e}")
        return None


def fixture_body(filepath: str) -> Optional[str]:
    """The fixture text without its provenance header, as compared against produced output."""
    rows = read_fixture_lines(filepath)
    if rows is None:
        return None
    return "\n".join("\t".join(row) for row in rows) + "\n"


def parse_dim_label(text: str) -> DimMonomial:
    """'3*u1^-1*u2^3' -> DimMonomial(1, -1, 3, 0); '1' is the unit."""
    exponents = {'3': 0, 'u1': 0, 'u2': 0, 'beta': 0}
    if text != '1':
        for factor in text.split('*'):
            match = _DIM_FACTOR.match(factor)
            if not match:
                raise ValueError(f"Unrecognized dimension factor '{factor}' in '{text}'")
            exponents[match.group(1)] += int(match.group(2) or 1)
    return DimMonomial(exponents['3'], exponents['u1'], exponents['u2'], exponents['beta'])


def _int_row(row: List[str], width: int, filepath: str) -> Tuple[int, ...]:
    if len(row) != width:
        raise ValueError(f"Expected {width} columns, got {len(row)}: {row} in {filepath}")
    return tuple(int(v) for v in row)


def load_figure3_fixture(filepath: str) -> Optional[List[ForgetfulProfile]]:
    """label, orbit, dim, [X0], [X1+X2+X5], [X3], [X4] per row."""
    rows = read_fixture_lines(filepath)
    if rows is None:
        return None
    try:
        profiles = []
        for row in rows:
            if len(row) != 7:
                raise ValueError(f"Expected 7 columns, got {len(row)}: {row}")
            label, orbit = int(row[0]), int(row[1])
            m0, m125, m3, m4 = (int(v) for v in row[3:])
            profiles.append(ForgetfulProfile(label, orbit, parse_dim_label(row[2]), m0, m125, m3, m4))
        return profiles
    except ValueError as e:
        print(f"[ERROR] Invalid Figure-3 fixture format in {filepath}: {e}")
        return None


def load_figure2_fixture(filepath: str) -> Optional[List[Tuple[int, Tuple[int, ...]]]]:
    """orbit followed by [X0 .. X5] of F(X), one simple of Z(C) per row."""
    rows = read_fixture_lines(filepath)
    if rows is None:
        return None
    try:
        table = []
        for row in rows:
            values = _int_row(row, 7, filepath)
            table.append((values[0], values[1:]))
        return table
    except ValueError as e:
        print(f"[ERROR] Invalid Figure-2 fixture format in {filepath}: {e}")
        return None


def load_orbit45_fixture(filepath: str) -> Optional[List[Tuple[int, ...]]]:
    rows = read_fixture_lines(filepath)
    if rows is None:
        return None
    try:
        return [_int_row(row, 9, filepath) for row in rows]
    except ValueError as e:
        print(f"[ERROR] Invalid orbit-vector fixture format in {filepath}: {e}")
        return None


def load_constants_fixture(filepath: str) -> Optional[Dict[str, Any]]:
    """Rows 'ir33', 'ir44', 'rhs' and 'K0'..'K3', each a name followed by integers."""
    rows = read_fixture_lines(filepath)
    if rows is None:
        return None
    try:
        named = {}
        for row in rows:
            if len(row) < 2:
                raise ValueError(f"Row without values: {row}")
            named[row[0]] = [int(v) for v in row[1:]]
        missing = [key for key in ('ir33', 'ir44', 'rhs', 'K0', 'K1', 'K2', 'K3') if key not in named]
        if missing:
            raise ValueError(f"Missing rows {missing}")
        return {
            'ir33': named['ir33'],
            'ir44': named['ir44'],
            'rhs': named['rhs'],
            'K': [named[f"K{i}"] for i in range(4)],
        }
    except ValueError as e:
        print(f"[ERROR] Invalid constants fixture format in {filepath}: {e}")
        return None


def load_ring_fixture(filepath: str) -> Optional[FusionRing]:
    if not os.path.exists(filepath):
        print(f"[ERROR] Ring file not found at {filepath}")
        return None
    try:
        return load_fring(filepath)
    except FusionRingError as e:
        print(f"[ERROR] Invalid ring file {filepath}: {e}")
        return None


def figure2_tsv(table: List[Tuple[int, Tuple[int, ...]]]) -> str:
    return "\n".join("\t".join(str(v) for v in (orbit,) + tuple(column)) for orbit, column in table) + "\n"


def orbit_vectors_tsv(vectors: List[Tuple[int, ...]]) -> str:
    return "\n".join("\t".join(str(v) for v in o) for o in vectors) + "\n"
