"""Simples of Z(C): induction-restriction counts, the triple search, lemma filters and the subcategory D.

Slots, the K matrix and the ir rows are all derived from the Figure-3 profile table; the printed
constants are only compared against, never used.
"""
import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from cyclotomic import CertifiedSignContext, CycNum, certified_floor_ratio, format_cyc
from dnumber_census import GLOBAL_DIM_Z, ForgetfulProfile
from fusion_ring import FusionRing, builtin_R, fpdim_data_R

OrbitVector = Tuple[int, ...]
Vector = Tuple[int, ...]
Triple = Tuple[Vector, Vector, Vector]
Column = Tuple[int, ...]  # [X0, X1, X2, X3, X4, X5] of F(X)

# Orbit counts fixed before the search: the unit orbit and Z1, Z2, Z5
FORCED_ORBITS = {0: 1, 4: 3}
FREE_ORBITS = (1, 2, 3, 5, 6, 7, 8)
ABSENT_ORBITS = (6,)

# Figure-3 labels the Note and the lemmas talk about
NOTE_LABELS = (1, 2)
LABEL_SIMPLE = 3       # F(X) = X_j
LABEL_J34 = 4          # F(X) = X_j + X_3 + X_4
LABEL_J2 = 5           # two of X_1, X_2, X_5 plus X_3 + X_4
LABEL_J3 = 9           # F(X) = X_j + X_3
LABEL_BETA2 = 10
LABEL_BETA3 = 11
LABEL_J4 = 13          # F(X) = X_j + X_4

DISPLAYED_RANK24_TARGET: Column = (2, 4, 2, 5, 2, 1)
UNIT_COLUMN: Column = (1, 0, 0, 0, 0, 0)


class CenterSearchError(Exception):
    """The search data is inconsistent (derived constants, ambiguous tables, missing slots)."""


@dataclass(frozen=True)
class Slot:
    """n_{label, mult, j}: simples of this label carrying X_j with multiplicity mult."""
    label: int
    mult: int
    orbit: int
    m0: int
    m125: int
    m3: int
    m4: int

    @property
    def name(self) -> str:
        return f"n{self.label},{self.mult}"


@dataclass(frozen=True, eq=False)
class ConstraintMatrices:
    slots: Tuple[Slot, ...]
    ir33: np.ndarray
    ir44: np.ndarray
    ir_targets: Tuple[int, int]
    K: np.ndarray
    rhs: np.ndarray
    budget: np.ndarray
    budget_target: int
    absent_orbits: Tuple[int, ...]

    def index(self, label: int, mult: int) -> Optional[int]:
        for idx, slot in enumerate(self.slots):
            if slot.label == label and slot.mult == mult:
                return idx
        return None

    def labels(self) -> List[int]:
        return sorted({s.label for s in self.slots})


@dataclass(frozen=True)
class CenterSolution:
    orbit: OrbitVector
    triple: Triple
    rank: int


# --- induction ---

def induction_image(ring: FusionRing, j: int) -> Tuple[int, ...]:
    """[X_k, F(I(X_j))] with F(I(X)) = sum_Y Y (x) X (x) Y*."""
    N = np.array(ring.N, dtype=np.int64)
    total = np.zeros(ring.rank, dtype=np.int64)
    for y in range(ring.rank):
        total += N[y, j] @ N[:, ring.dual[y], :]
    return tuple(int(v) for v in total)


# --- constraint matrices ---

def orbit_members(figure3: Sequence[ForgetfulProfile]) -> Dict[int, List[ForgetfulProfile]]:
    members: Dict[int, List[ForgetfulProfile]] = {}
    for row in figure3:
        members.setdefault(row.orbit, []).append(row)
    return members


def orbit_square_sums(figure3: Sequence[ForgetfulProfile]) -> Dict[int, CycNum]:
    sums = {}
    for orbit, rows in orbit_members(figure3).items():
        total = CycNum.from_scalar(0)
        for row in rows:
            dim = row.dim_value()
            total = total + dim * dim
        sums[orbit] = total
    return sums


def derive_slots(figure3: Sequence[ForgetfulProfile], absent_orbits: Sequence[int] = ABSENT_ORBITS) -> Tuple[Slot, ...]:
    slots = []
    for row in sorted(figure3, key=lambda r: r.label):
        if row.orbit in absent_orbits:
            continue
        for mult in range(1, row.m125 + 1):
            slots.append(Slot(row.label, mult, row.orbit, row.m0, row.m125, row.m3, row.m4))
    return tuple(slots)


def derive_constraint_matrices(figure3: Sequence[ForgetfulProfile], ring: Optional[FusionRing] = None,
                               absent_orbits: Sequence[int] = ABSENT_ORBITS) -> ConstraintMatrices:
    """ir33, ir44, K and the right-hand sides, read off the profile table and F(I(X_j))."""
    ring = ring or builtin_R()
    members = orbit_members(figure3)
    orbit_count = max(members) + 1
    ir33 = np.array([sum(r.m3 ** 2 for r in members.get(o, [])) for o in range(orbit_count)], dtype=np.int64)
    ir44 = np.array([sum(r.m4 ** 2 for r in members.get(o, [])) for o in range(orbit_count)], dtype=np.int64)

    images = {j: induction_image(ring, j) for j in range(ring.rank)}
    rhs = np.array([images[1][1], images[1][2] + images[1][5], images[1][3], images[1][4]], dtype=np.int64)
    # The search is shared by j = 1, 2, 5, so their induced counts must agree
    for j, (k, l) in ((2, (1, 5)), (5, (1, 2))):
        other = np.array([images[j][j], images[j][k] + images[j][l], images[j][3], images[j][4]], dtype=np.int64)
        if not np.array_equal(other, rhs):
            raise CenterSearchError(f"F(I(X{j})) is not a relabelling of F(I(X1)): {other.tolist()} vs {rhs.tolist()}")

    slots = derive_slots(figure3, absent_orbits)
    K = np.array([
        [s.mult ** 2 for s in slots],
        [s.mult * (s.m125 - s.mult) for s in slots],
        [s.mult * s.m3 for s in slots],
        [s.mult * s.m4 for s in slots],
    ], dtype=np.int64)
    budget = np.array([s.mult * s.m0 for s in slots], dtype=np.int64)
    return ConstraintMatrices(
        slots=slots, ir33=ir33, ir44=ir44, ir_targets=(images[3][3], images[4][4]),
        K=K, rhs=rhs, budget=budget, budget_target=images[0][1], absent_orbits=tuple(absent_orbits),
    )


def compare_constants(matrices: ConstraintMatrices, literals: Dict[str, Any]) -> List[str]:
    """Mismatches between the derived constants and the printed ones (ir33, ir44, K, rhs)."""
    derived = {
        'ir33': matrices.ir33.tolist(),
        'ir44': matrices.ir44.tolist(),
        'K': matrices.K.tolist(),
        'rhs': matrices.rhs.tolist(),
    }
    problems = []
    for key, value in derived.items():
        expected = literals.get(key)
        if expected is None:
            problems.append(f"{key}: no printed value to compare against")
        elif [list(r) if isinstance(r, (list, tuple)) else r for r in expected] != value:
            problems.append(f"{key}: derived {value} != printed {expected}")
    return problems


# --- orbit vectors ---

def orbit_vector_bounds(figure3: Sequence[ForgetfulProfile],
                        ctx: Optional[CertifiedSignContext] = None) -> Dict[int, int]:
    """Exclusive upper bound floor(B / orbit square sum) + 1 for every free orbit type."""
    sums = orbit_square_sums(figure3)
    budget = GLOBAL_DIM_Z
    for orbit, count in FORCED_ORBITS.items():
        budget = budget - count * sums[orbit]
    return {o: certified_floor_ratio(budget, sums[o], ctx) + 1 for o in FREE_ORBITS}


def enumerate_orbit_vectors(figure3: Sequence[ForgetfulProfile], matrices: ConstraintMatrices,
                            ctx: Optional[CertifiedSignContext] = None) -> List[OrbitVector]:
    """Orbit vectors with [X3, F(I(X3))] = 24 and [X4, F(I(X4))] = 33, in lexicographic order."""
    bounds = orbit_vector_bounds(figure3, ctx)
    grids = np.meshgrid(*[np.arange(bounds[o], dtype=np.int32) for o in FREE_ORBITS], indexing='ij')
    full = np.zeros((grids[0].size, len(matrices.ir33)), dtype=np.int32)
    for orbit, count in FORCED_ORBITS.items():
        full[:, orbit] = count
    for col, orbit in enumerate(FREE_ORBITS):
        full[:, orbit] = grids[col].ravel()
    del grids
    t33, t44 = matrices.ir_targets
    mask = (full @ matrices.ir33.astype(np.int32) == t33) & (full @ matrices.ir44.astype(np.int32) == t44)
    return [tuple(int(v) for v in row) for row in full[mask]]


def rank_of(o: OrbitVector, figure3: Sequence[ForgetfulProfile]) -> int:
    members = orbit_members(figure3)
    return sum(count * len(members.get(orbit, [])) for orbit, count in enumerate(o))


def global_dimension_audit(o: OrbitVector, figure3: Sequence[ForgetfulProfile]) -> bool:
    """Sum of squared dimensions over all simples equals 81 u2^4."""
    sums = orbit_square_sums(figure3)
    total = CycNum.from_scalar(0)
    for orbit, count in enumerate(o):
        if count:
            total = total + count * sums[orbit]
    return total == GLOBAL_DIM_Z


# --- single vectors and triples ---

def enumerate_single_vectors(o: OrbitVector, matrices: ConstraintMatrices) -> List[Vector]:
    """Vectors n with K n = rhs, the orbit-0/4 budget and per-label capacities, in lexicographic order."""
    slots = matrices.slots
    K = matrices.K.tolist()
    rhs = matrices.rhs.tolist()
    budget = matrices.budget.tolist()
    rows = len(rhs)
    capacity = {s.label: o[s.orbit] for s in slots}
    vec = [0] * len(slots)
    partial = [0] * rows
    results: List[Vector] = []

    def place(idx: int, spent: int) -> None:
        if idx == len(slots):
            if spent == matrices.budget_target and partial == rhs:
                results.append(tuple(vec))
            return
        label = slots[idx].label
        for value in range(capacity[label] + 1):
            new_spent = spent + budget[idx] * value
            if new_spent > matrices.budget_target:
                break
            if any(partial[r] + K[r][idx] * value > rhs[r] for r in range(rows)):
                break
            for r in range(rows):
                partial[r] += K[r][idx] * value
            capacity[label] -= value
            vec[idx] = value
            place(idx + 1, new_spent)
            vec[idx] = 0
            capacity[label] += value
            for r in range(rows):
                partial[r] -= K[r][idx] * value

    place(0, 0)
    return results


def _consistency_system(o: OrbitVector, matrices: ConstraintMatrices) -> Tuple[np.ndarray, np.ndarray]:
    """Per label: sum_m s(n_{label,m}) / (M - m + 1) = o[orbit], scaled to integers."""
    labels = matrices.labels()
    scale = math.lcm(*range(1, max(s.m125 for s in matrices.slots) + 1))
    W = np.zeros((len(labels), len(matrices.slots)), dtype=np.int64)
    targets = np.zeros(len(labels), dtype=np.int64)
    for idx, slot in enumerate(matrices.slots):
        row = labels.index(slot.label)
        W[row, idx] = scale // (slot.m125 - slot.mult + 1)
        targets[row] = scale * o[slot.orbit]
    return W, targets


def enumerate_triplets(o: OrbitVector, matrices: ConstraintMatrices,
                       candidates: Optional[List[Vector]] = None) -> List[Triple]:
    """Triples z <= y <= x of candidate vectors whose per-label counts agree with o."""
    if candidates is None:
        candidates = enumerate_single_vectors(o, matrices)
    if not candidates:
        return []
    W, targets = _consistency_system(o, matrices)
    signatures = np.array(candidates, dtype=np.int64) @ W.T
    by_signature: Dict[Tuple[int, ...], List[int]] = {}
    for idx, sig in enumerate(signatures):
        by_signature.setdefault(tuple(sig.tolist()), []).append(idx)

    triples: List[Triple] = []
    for i in range(len(candidates)):
        for j in range(i + 1):
            need = tuple((targets - signatures[i] - signatures[j]).tolist())
            for k in by_signature.get(need, []):
                if k > j:
                    break
                triples.append((candidates[i], candidates[j], candidates[k]))
    return sorted(triples)


def note_assumption_check(triple: Triple, matrices: ConstraintMatrices) -> str:
    """'verified' when every component has n_{1,1} = n_{2,1} = 1, otherwise 'warning'."""
    indices = [matrices.index(label, 1) for label in NOTE_LABELS]
    if any(idx is None for idx in indices):
        return 'warning'
    for vec in triple:
        product = 1
        for idx in indices:
            product *= vec[idx]
        if product != 1:
            return 'warning'
    return 'verified'


def _count(vec: Vector, matrices: ConstraintMatrices, label: int, mult: int = 1) -> int:
    idx = matrices.index(label, mult)
    return 0 if idx is None else vec[idx]


def _component_lemmas(o: OrbitVector, vec: Vector, matrices: ConstraintMatrices) -> Dict[str, bool]:
    n3 = _count(vec, matrices, LABEL_SIMPLE)
    n4 = _count(vec, matrices, LABEL_J34)
    n5 = _count(vec, matrices, LABEL_J2)
    n9 = _count(vec, matrices, LABEL_J3)
    n10 = _count(vec, matrices, LABEL_BETA2)
    n11_2 = _count(vec, matrices, LABEL_BETA3, 2)
    n13 = _count(vec, matrices, LABEL_J4)
    return {
        'simple_count': (n3 < 3
                         and (n3 != 1 or (n9 > 0 and n13 > 0))
                         and (n3 != 2 or (n4 > 0 and n13 > 0) or n11_2 > 0)),
        'z5_split': n3 == 0 or (n13 > 0 and n5 > 0) or (n4 > 0 and n10 > 0),
        'pair_orbit2': n3 < 2 or n9 + o[2] >= 2,
    }


def _missing_component_lemma(triple: Triple, matrices: ConstraintMatrices, literal: bool) -> bool:
    n3 = [_count(v, matrices, LABEL_SIMPLE) for v in triple]
    n9 = [_count(v, matrices, LABEL_J3) for v in triple]
    if literal:
        # Only the last component is tested, and only when the first two hold exactly one each
        return n3[0] * n3[1] != 1 or n3[2] != 0 or n9[2] > 0
    for k in range(3):
        i, j = [c for c in range(3) if c != k]
        if n3[i] > 0 and n3[j] > 0 and n3[k] == 0 and n9[k] == 0:
            return False
    return True


def lemma_outcomes(o: OrbitVector, triple: Triple, matrices: ConstraintMatrices,
                   literal: bool = False) -> Dict[str, bool]:
    outcomes = {'simple_count': True, 'z5_split': True, 'pair_orbit2': True}
    for vec in triple:
        for name, ok in _component_lemmas(o, vec, matrices).items():
            outcomes[name] = outcomes[name] and ok
    outcomes['missing_component'] = _missing_component_lemma(triple, matrices, literal)
    return outcomes


def lemma_filters(o: OrbitVector, triple: Triple, matrices: ConstraintMatrices, literal: bool = False) -> bool:
    return all(lemma_outcomes(o, triple, matrices, literal).values())


# --- explicit simple-by-simple assignments ---

def _compositions(total: int) -> List[Tuple[int, int, int]]:
    return [c for c in itertools.product(range(total + 1), repeat=3) if sum(c) == total]


def label_realizations(counts: Sequence[Sequence[int]], m125: int, size: int) -> List[Tuple[Tuple[int, int, int], ...]]:
    """Multisets of `size` splits (a1, a2, a5) of m125 whose counts of a_j = m equal counts[j][m - 1]."""
    comps = _compositions(m125)
    need = [list(row) for row in counts]
    chosen: List[Tuple[int, int, int]] = []
    found = []

    def visit(start: int, left: int) -> None:
        if left == 0:
            if not any(v for row in need for v in row):
                found.append(tuple(chosen))
            return
        for idx in range(start, len(comps)):
            comp = comps[idx]
            if any(a and need[c][a - 1] == 0 for c, a in enumerate(comp)):
                continue
            for c, a in enumerate(comp):
                if a:
                    need[c][a - 1] -= 1
            chosen.append(comp)
            visit(idx, left - 1)
            chosen.pop()
            for c, a in enumerate(comp):
                if a:
                    need[c][a - 1] += 1

    visit(0, size)
    return found


def _label_counts(triple: Triple, matrices: ConstraintMatrices, label: int, m125: int) -> List[List[int]]:
    return [[_count(vec, matrices, label, m) for m in range(1, m125 + 1)] for vec in triple]


def explicit_assignments(o: OrbitVector, triple: Triple,
                         matrices: ConstraintMatrices) -> Dict[int, List[Tuple[Tuple[int, int, int], ...]]]:
    """Every way to split X1 + X2 + X5 simple by simple, per label."""
    realizations = {}
    for label in matrices.labels():
        slot = next(s for s in matrices.slots if s.label == label)
        counts = _label_counts(triple, matrices, label, slot.m125)
        realizations[label] = label_realizations(counts, slot.m125, o[slot.orbit])
    return realizations


def has_explicit_assignment(o: OrbitVector, triple: Triple, matrices: ConstraintMatrices) -> bool:
    return all(explicit_assignments(o, triple, matrices).values())


def _column(row: ForgetfulProfile, split: Tuple[int, int, int]) -> Column:
    a1, a2, a5 = split
    return (row.m0, a1, a2, row.m3, row.m4, a5)


def solution_columns(o: OrbitVector, triple: Triple, figure3: Sequence[ForgetfulProfile],
                     matrices: ConstraintMatrices) -> List[Tuple[int, int, Column]]:
    """(orbit, label, column) for every simple; the split of each label must be unique."""
    realizations = explicit_assignments(o, triple, matrices)
    columns = []
    for row in sorted(figure3, key=lambda r: r.label):
        count = o[row.orbit]
        if not count:
            continue
        if row.label in realizations:
            options = realizations[row.label]
            if len(options) != 1:
                raise CenterSearchError(f"Label {row.label} has {len(options)} simple-by-simple splits.")
            splits = options[0]
        else:
            splits = ((0, 0, 0),) * count
        columns.extend((row.orbit, row.label, _column(row, split)) for split in splits)
    return columns


def emit_center_table(o: OrbitVector, triple: Triple, figure3: Sequence[ForgetfulProfile],
                      matrices: ConstraintMatrices) -> List[Tuple[int, Column]]:
    """Figure-2 columns grouped by orbit; each block lists its columns in descending order."""
    columns = solution_columns(o, triple, figure3, matrices)
    return sorted(((orbit, col) for orbit, _, col in columns), key=lambda e: (e[0], tuple(-v for v in e[1])))


def compare_center_table(produced: Sequence[Tuple[int, Column]], expected: Sequence[Tuple[int, Column]]) -> List[str]:
    """Per-orbit multiset differences between two Figure-2 tables."""
    problems = []
    blocks = sorted({orbit for orbit, _ in produced} | {orbit for orbit, _ in expected})
    for orbit in blocks:
        a = Counter(col for o, col in produced if o == orbit)
        b = Counter(col for o, col in expected if o == orbit)
        if a != b:
            problems.append(f"orbit {orbit}: produced {sorted(a.elements())} expected {sorted(b.elements())}")
    return problems


# --- rank 24 ---

def rank24_targets(ring: Optional[FusionRing] = None) -> Dict[str, Column]:
    """F(X (x) Z_1) for F(X) = X1 + X3 and F(Z_1) = X0 + X1 + X3: as printed and as multiplied out."""
    ring = ring or builtin_R()
    derived = [0] * ring.rank
    for a in (1, 3):
        for b in (0, 1, 3):
            for k, v in enumerate(ring.product(a, b)):
                derived[k] += v
    return {'display': DISPLAYED_RANK24_TARGET, 'derived': tuple(derived)}


def column_dimension(column: Column) -> CycNum:
    d, _ = fpdim_data_R()
    total = CycNum.from_scalar(0)
    for count, dim in zip(column, d):
        total = total + count * dim
    return total


def cover_search(target: Column, available: Sequence[Tuple[str, Column]]) -> Tuple[Optional[List[Tuple[str, Column]]], int]:
    """A multiset of available columns summing to target exactly; also the number of nodes visited."""
    options = sorted(set(available), key=lambda e: tuple(-v for v in e[1]))
    nodes = 0

    def visit(start: int, rest: List[int], chosen: List[Tuple[str, Column]]):
        nonlocal nodes
        nodes += 1
        if not any(rest):
            return list(chosen)
        for idx in range(start, len(options)):
            col = options[idx][1]
            if all(c <= r for c, r in zip(col, rest)):
                chosen.append(options[idx])
                found = visit(idx, [r - c for r, c in zip(rest, col)], chosen)
                if found is not None:
                    return found
                chosen.pop()
        return None

    return visit(0, list(target), []), nodes


def _compatible_splits(counts: Sequence[Sequence[int]], m125: int) -> List[Tuple[int, int, int]]:
    return [comp for comp in _compositions(m125)
            if all(a == 0 or counts[c][a - 1] > 0 for c, a in enumerate(comp))]


def available_columns(o: OrbitVector, triple: Triple, figure3: Sequence[ForgetfulProfile],
                      matrices: ConstraintMatrices, orientation: Tuple[int, int, int]) -> List[Tuple[str, Column]]:
    """Non-unit F(Y) of the solution with components (c, p, q) read as (X1, X2, X5)."""
    realizations = explicit_assignments(o, triple, matrices)
    available = []
    for row in figure3:
        if not o[row.orbit]:
            continue
        if row.label in realizations:
            splits = {s for option in realizations[row.label] for s in option}
            if not splits:
                counts = _label_counts(triple, matrices, row.label, row.m125)
                splits = set(_compatible_splits(counts, row.m125))
        else:
            splits = {(0, 0, 0)}
        for split in splits:
            oriented = tuple(split[c] for c in orientation)
            column = _column(row, oriented)
            if column != UNIT_COLUMN:
                available.append((f"L{row.label}", column))
    return sorted(set(available))


def summand_count(vec: Vector, matrices: ConstraintMatrices) -> int:
    """Number of simple summands of I(X_j), counted with multiplicity."""
    return sum(slot.mult * vec[idx] for idx, slot in enumerate(matrices.slots))


def eliminate_rank24(o: OrbitVector, triple: Triple, figure3: Sequence[ForgetfulProfile],
                     matrices: ConstraintMatrices, ring: Optional[FusionRing] = None,
                     target: str = 'display') -> Dict[str, Any]:
    """Cover search for F(X (x) Z_1) where F(X) = X_j + X_3; eliminated iff no orientation has a cover."""
    targets = rank24_targets(ring)
    if target not in targets:
        raise ValueError(f"Unknown rank-24 target '{target}'")
    components = [c for c in range(3) if _count(triple[c], matrices, LABEL_J3) > 0]
    result: Dict[str, Any] = {
        'applicable': bool(components),
        'target_name': target,
        'target': targets[target],
        'targets': {name: {'profile': t, 'dim': format_cyc(column_dimension(t))} for name, t in targets.items()},
        'summands': [summand_count(v, matrices) for v in triple],
    }
    if targets['display'] != targets['derived']:
        result['warning'] = (f"displayed target {targets['display']} differs from the ring product "
                             f"{targets['derived']}; the verdict uses the '{target}' target")
    if not components:
        result.update({'eliminated': False, 'feedback': 'No simple with F(X) = X_j + X_3; not applicable.'})
        return result

    attempts = []
    witness = None
    for c in components:
        p, q = [k for k in range(3) if k != c]
        for orientation in ((c, p, q), (c, q, p)):
            available = available_columns(o, triple, figure3, matrices, orientation)
            cover, nodes = cover_search(targets[target], available)
            attempts.append({'component': c, 'orientation': orientation, 'profiles': len(available),
                             'nodes': nodes, 'covered': cover is not None})
            if cover is not None and witness is None:
                witness = {'orientation': orientation, 'cover': cover}
    result.update({
        'components': components,
        'attempts': attempts,
        'witness': witness,
        'eliminated': witness is None,
        'feedback': (f"No cover of {targets[target]} in {len(attempts)} orientation(s)" if witness is None
                     else f"Cover of {targets[target]}: " + " + ".join(name for name, _ in witness['cover'])),
    })
    return result


# --- the subcategory D ---

SUBCAT_OBJECTS = ('1', 'A1', 'A2', 'A3', 'B', 'C')
# 1 -> X0, A1 -> X1, A2 -> X2, A3 -> X5, B -> X3, C -> X4
DEFAULT_ASSIGNMENT = (0, 1, 2, 5, 3, 4)


def subcategory_rules() -> List[List[List[int]]]:
    """Fusion table on {1, A1, A2, A3, B, C}, indices of A taken mod 3."""
    unit, B, C = 0, 4, 5
    A = lambda j: 1 + (j - 1) % 3
    table = [[[0] * 6 for _ in range(6)] for _ in range(6)]

    def put(x: int, y: int, terms: Dict[int, int]) -> None:
        for target, mult in terms.items():
            table[x][y][target] += mult
            if x != y:
                table[y][x][target] += mult

    for x in range(6):
        put(unit, x, {x: 1})
    all_a = {A(1): 1, A(2): 1, A(3): 1}
    for j in (1, 2, 3):
        put(A(j), A(j), {unit: 1, A(j + 1): 1, B: 1})
        put(A(j), A(j + 1), {A(j): 1, C: 1})
        put(A(j), B, {A(j): 1, B: 1, C: 1})
        put(A(j), C, {A(j + 1): 1, A(j + 2): 1, B: 1, C: 1})
    put(B, B, {unit: 1, **all_a, B: 1, C: 1})
    put(B, C, {**all_a, B: 1, C: 2})
    put(C, C, {unit: 1, **all_a, B: 2, C: 2})
    return table


def _hom(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y))


def subcategory_hom_counts(table: Sequence[Sequence[Sequence[int]]]) -> Dict[str, int]:
    """Hom dimensions used while pinning down the rules; all objects are self-dual."""
    A1, A2, A3, B, C = 1, 2, 3, 4, 5
    return {
        '[A1A2, A1A2]': _hom(table[A1][A2], table[A1][A2]),
        '[A2A3, A2A3]': _hom(table[A2][A3], table[A2][A3]),
        '[A1B, A1B]': _hom(table[A1][B], table[A1][B]),
        '[A1B, A2B]': _hom(table[A1][B], table[A2][B]),
        '[A1A2, A1C]': _hom(table[A1][A2], table[A1][C]),
        '[A1B, BC]': _hom(table[A1][B], table[B][C]),
        '[A1A2, CC]': _hom(table[A1][A2], table[C][C]),
    }


EXPECTED_HOM_COUNTS = {
    '[A1A2, A1A2]': 2, '[A2A3, A2A3]': 2, '[A1B, A1B]': 3, '[A1B, A2B]': 2,
    '[A1A2, A1C]': 1, '[A1B, BC]': 4, '[A1A2, CC]': 3,
}


def verify_subcategory(columns: Sequence[Column], ring: Optional[FusionRing] = None,
                       table: Optional[Sequence[Sequence[Sequence[int]]]] = None,
                       assignment: Sequence[int] = DEFAULT_ASSIGNMENT) -> Dict[str, Any]:
    """Check D's rules against K(R) under the assignment, against the survivor's profiles and the Hom counts."""
    ring = ring or builtin_R()
    table = table if table is not None else subcategory_rules()
    names = SUBCAT_OBJECTS
    hom_counts = subcategory_hom_counts(table)
    result = {'verified': False, 'failure': None, 'hom_counts': hom_counts, 'assignment': list(assignment)}

    profiles = []
    for x in range(6):
        profile = tuple(1 if k == assignment[x] else 0 for k in range(ring.rank))
        if profile not in set(columns):
            result['failure'] = f"No simple of Z(C) with F({names[x]}) = X{assignment[x]}"
            return result
        profiles.append(profile)

    for x in range(6):
        for y in range(x, 6):
            produced = [sum(table[x][y][z] * profiles[z][k] for z in range(6)) for k in range(ring.rank)]
            expected = list(ring.product(assignment[x], assignment[y]))
            if produced != expected:
                result['failure'] = (f"{names[x]}*{names[y]}: forgetful image {produced} differs from "
                                     f"X{assignment[x]}*X{assignment[y]} = {expected}")
                return result

    for key, value in EXPECTED_HOM_COUNTS.items():
        if hom_counts[key] != value:
            result['failure'] = f"{key} = {hom_counts[key]}, expected {value}"
            return result
    result['verified'] = True
    return result


# --- driver ---

def search_orbit(o: OrbitVector, matrices: ConstraintMatrices, audit: bool = False) -> Dict[str, Any]:
    """Candidates, triples, Note check and lemma filters for one orbit vector."""
    candidates = enumerate_single_vectors(o, matrices)
    triples = enumerate_triplets(o, matrices, candidates)
    warnings = 0
    unfiltered: List[Triple] = []
    survivors: List[Triple] = []
    for triple in triples:
        if note_assumption_check(triple, matrices) != 'verified':
            warnings += 1
            continue
        unfiltered.append(triple)
        if lemma_filters(o, triple, matrices):
            survivors.append(triple)
    result: Dict[str, Any] = {
        'orbit': o,
        'candidates': len(candidates),
        'triples': len(triples),
        'note_warnings': warnings,
        'unfiltered': unfiltered,
        'survivors': survivors,
    }
    if audit:
        literal = [t for t in unfiltered if lemma_filters(o, t, matrices, literal=True)]
        result['literal_disagreements'] = [t for t in unfiltered if (t in survivors) != (t in literal)]
        result['fractional_only'] = [t for t in triples if not has_explicit_assignment(o, t, matrices)]
    return result


def _search_orbit_worker(args: Tuple[OrbitVector, ConstraintMatrices, bool]) -> Dict[str, Any]:
    o, matrices, audit = args
    return search_orbit(o, matrices, audit)


def run_center_search(figure3: Sequence[ForgetfulProfile], ring: Optional[FusionRing] = None,
                      jobs: int = 1, orbit_filter: Optional[Sequence[OrbitVector]] = None,
                      audit: bool = False, rank24_target: str = 'display',
                      initial_precision: int = 64) -> Dict[str, Any]:
    """Orbit vectors, triple search, the rank-24 elimination and the surviving Figure-2 table."""
    ring = ring or builtin_R()
    ctx = CertifiedSignContext(initial_precision)
    matrices = derive_constraint_matrices(figure3, ring)
    orbit_vectors = enumerate_orbit_vectors(figure3, matrices, ctx)
    absent = tuple(orbit for orbit in range(len(matrices.ir33))
                   if all(o[orbit] == 0 for o in orbit_vectors))
    report: Dict[str, Any] = {
        'orbit_vectors': orbit_vectors,
        'orbit_vector_count': len(orbit_vectors),
        'absent_orbits': absent,
        'o6_absent': all(o[6] == 0 for o in orbit_vectors),
        'matrices': matrices,
        'smoke': orbit_filter is not None,
    }
    if absent != matrices.absent_orbits:
        raise CenterSearchError(f"Orbit types absent from every vector are {absent}, slots assume {matrices.absent_orbits}")

    wanted = None if orbit_filter is None else {tuple(o) for o in orbit_filter}
    searched = [o for o in orbit_vectors if wanted is None or o in wanted]
    work = [(o, matrices, audit) for o in searched]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_orbit = list(pool.map(_search_orbit_worker, work))
    else:
        per_orbit = [_search_orbit_worker(item) for item in work]
    report['per_orbit'] = sorted(per_orbit, key=lambda r: r['orbit'])

    solutions = [CenterSolution(r['orbit'], t, rank_of(r['orbit'], figure3))
                 for r in report['per_orbit'] for t in r['survivors']]
    report['solutions'] = solutions
    report['ranks'] = sorted(s.rank for s in solutions)
    report['global_dimension_ok'] = all(global_dimension_audit(s.orbit, figure3) for s in solutions)
    report['note_warnings'] = sum(r['note_warnings'] for r in per_orbit)

    remaining = []
    report['rank24'] = None
    for s in solutions:
        elimination = eliminate_rank24(s.orbit, s.triple, figure3, matrices, ring, rank24_target)
        if elimination['applicable']:
            report['rank24'] = elimination
            if audit:
                other = 'derived' if rank24_target == 'display' else 'display'
                report['rank24_alternate'] = eliminate_rank24(s.orbit, s.triple, figure3, matrices, ring, other)
            if elimination['eliminated']:
                continue
        remaining.append(s)
    report['remaining'] = remaining

    report['final'] = None
    if len(remaining) == 1:
        final = remaining[0]
        table = emit_center_table(final.orbit, final.triple, figure3, matrices)
        report['final'] = {'solution': final, 'table': table, 'rank': final.rank}

    problems = []
    if orbit_filter is None and len(orbit_vectors) != 45:
        problems.append(f"{len(orbit_vectors)} orbit vectors, expected 45")
    if not report['o6_absent']:
        problems.append("an orbit vector contains orbit type 6")
    if report['ranks'] != [24, 36]:
        problems.append(f"surviving ranks {report['ranks']}, expected [24, 36]")
    if not report['global_dimension_ok']:
        problems.append("a solution fails the global dimension audit")
    if report['rank24'] is None or not report['rank24']['eliminated']:
        problems.append("the rank-24 solution is not eliminated")
    if report['final'] is None or report['final']['rank'] != 36:
        problems.append("no unique rank-36 survivor")
    report['problems'] = problems
    report['status'] = 'pass' if not problems else 'fail'
    report['feedback'] = ("; ".join(problems) if problems else
                          f"{len(orbit_vectors)} orbit vectors -> {len(solutions)} solutions "
                          f"(ranks {report['ranks']}) -> rank {report['final']['rank']}")
    return report
