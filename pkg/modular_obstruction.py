"""No braided pseudounitary categorification of K(R): twists, Gauss sums, S-matrices, Verlinde."""
import itertools
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from cyclotomic import (
    CONJUGATION, CycNum, ONE, ZERO,
    format_cyc, galois_apply, is_root_of_unity, root_of_unity, twist_galois,
)
from fusion_ring import FusionRing, builtin_R, check_dim_hom, fpdim_data_R, global_dimension, is_builtin_R

SMatrix = List[List[CycNum]]

# Primitive exponents of the ninth roots used for the (t1, t2, t5) chains
PRIMITIVE_EXPONENTS = (1, 2, 4, 5, 7, 8)


@dataclass(frozen=True)
class TwistTuple:
    """Normalized twists t_0..t_5; gamma = t_0^-1 and theta_j = t_j gamma."""
    t: Tuple[CycNum, ...]

    @property
    def gamma(self) -> CycNum:
        return self.t[0].inverse()

    @property
    def theta(self) -> Tuple[CycNum, ...]:
        g = self.gamma
        return tuple(tj * g for tj in self.t)


def _coherent_triple(root: CycNum) -> Tuple[CycNum, CycNum, CycNum]:
    g = twist_galois()
    g2 = g.compose(g)
    return (root, galois_apply(g, root), galois_apply(g2, root))


def _assemble(x: Sequence[CycNum], y: Sequence[CycNum]) -> TwistTuple:
    # x = (t0, t3, t4), y = (t1, t2, t5)
    return TwistTuple((x[0], y[0], y[1], x[1], x[2], y[2]))


def enumerate_twist_tuples() -> List[TwistTuple]:
    """9 coherent (t0, t3, t4) triples times 6 primitive chains plus 27 cube-root triples: 297 tuples."""
    first = [_coherent_triple(root_of_unity(a)) for a in range(9)]
    second = [_coherent_triple(root_of_unity(a)) for a in PRIMITIVE_EXPONENTS]
    second += [(root_of_unity(3 * x), root_of_unity(3 * y), root_of_unity(3 * z))
               for x in range(3) for y in range(3) for z in range(3)]
    return [_assemble(x, y) for x in first for y in second]


def _is_coherent_exponents(e: Sequence[int], k: int) -> bool:
    e0, e1, e2, e3, e4, e5 = e
    chained = lambda a, b, c: b == (k * a) % 9 and c == (k * b) % 9 and a == (k * c) % 9
    cube = lambda *vals: all(v % 3 == 0 for v in vals)
    return chained(e0, e3, e4) and (chained(e1, e2, e5) or cube(e1, e2, e5))


def enumerate_twist_tuples_full() -> List[TwistTuple]:
    """Audit path: scan all 9^6 tuples of ninth roots and keep the Galois-coherent ones."""
    k = twist_galois().k
    roots = [root_of_unity(a) for a in range(9)]
    tuples = []
    for e in itertools.product(range(9), repeat=6):
        if _is_coherent_exponents(e, k):
            tuples.append(TwistTuple(tuple(roots[v] for v in e)))
    return tuples


def gauss_sum(theta: Sequence[CycNum], d: Sequence[CycNum], sign: int = 1) -> CycNum:
    total = ZERO
    for dj, tj in zip(d, theta):
        total = total + dj * dj * (tj if sign > 0 else tj.inverse())
    return total


def _theta_key(tt: TwistTuple) -> Tuple:
    return tuple(tuple(x.coeffs) for x in tt.theta)


def gauss_filter(tuples: Sequence[TwistTuple], d: Sequence[CycNum]) -> List[TwistTuple]:
    """Tuples with tau+ tau- = dim(C), deduplicated on theta and sorted canonically."""
    target = global_dimension(d)
    survivors: Dict[Tuple, TwistTuple] = {}
    for tt in tuples:
        g = gauss_sum(tt.theta, d)
        if g * galois_apply(CONJUGATION, g) == target:
            survivors.setdefault(_theta_key(tt), tt)
    return [survivors[key] for key in sorted(survivors)]


def balancing_s_matrix(theta: Sequence[CycNum], d: Sequence[CycNum], ring: FusionRing) -> SMatrix:
    """S_ij = theta_i^-1 theta_j^-1 sum_k (N_i)_{j,k} d_k theta_k."""
    r = range(ring.rank)
    inv = [t.inverse() for t in theta]
    S = []
    for i in r:
        row = []
        for j in r:
            acc = ZERO
            for k in r:
                if ring.N[i][j][k]:
                    acc = acc + ring.N[i][j][k] * d[k] * theta[k]
            row.append(inv[i] * inv[j] * acc)
        S.append(row)
    return S


def is_symmetric(S: SMatrix) -> bool:
    n = len(S)
    return all(S[i][j] == S[j][i] for i in range(n) for j in range(n))


def _verlinde_weights(S: SMatrix, D: CycNum) -> List[CycNum]:
    return [(S[0][l] * D).inverse() for l in range(len(S))]


def verlinde_value(S: SMatrix, D: CycNum, i: int, j: int, k: int,
                   weights: Optional[List[CycNum]] = None) -> CycNum:
    """(1/D) sum_l S_il S_jl S_kl / S_0l."""
    w = weights if weights is not None else _verlinde_weights(S, D)
    total = ZERO
    for l in range(len(S)):
        total = total + S[i][l] * S[j][l] * S[k][l] * w[l]
    return total


def verlinde_residuals(S: SMatrix, ring: FusionRing, d: Sequence[CycNum]) -> Dict[str, Any]:
    """All triples (i, j, k) where the Verlinde sum differs from (N_i)_{j,k}."""
    zero_columns = [l for l in range(ring.rank) if S[0][l].is_zero()]
    if zero_columns:
        return {'structural_failure': True, 'zero_columns': zero_columns, 'mismatches': []}
    D = global_dimension(d)
    weights = _verlinde_weights(S, D)
    mismatches = []
    r = range(ring.rank)
    for i in r:
        for j in r:
            for k in r:
                value = verlinde_value(S, D, i, j, k, weights)
                expected = ring.N[i][j][k]
                if value != expected:
                    mismatches.append({'triple': (i, j, k), 'computed': value, 'expected': expected})
    return {'structural_failure': False, 'zero_columns': [], 'mismatches': mismatches}


def witness_of(residuals: Dict[str, Any]) -> Optional[Dict[str, Any]]:
    """(1,1,1) when it fails, otherwise the first mismatch in index order."""
    mismatches = residuals['mismatches']
    for m in mismatches:
        if m['triple'] == (1, 1, 1):
            return m
    return mismatches[0] if mismatches else None


def central_charge_data(tt: TwistTuple, d: Sequence[CycNum]) -> Dict[str, CycNum]:
    theta = tt.theta
    return {'gamma': tt.gamma, 'tau_plus': gauss_sum(theta, d, 1), 'tau_minus': gauss_sum(theta, d, -1)}


def run_obstruction(ring: Optional[FusionRing] = None, d: Optional[Sequence[CycNum]] = None,
                    full_audit: bool = False) -> Dict[str, Any]:
    """Twist enumeration, Gauss filter and Verlinde check for every survivor."""
    if ring is None:
        ring = builtin_R()
    if ring.rank == 1:
        return {'status': 'inapplicable', 'feedback': 'Rank-1 ring: Verlinde holds vacuously with S = (1).'}
    if not is_builtin_R(ring):
        return {'status': 'inapplicable', 'feedback': 'Twist enumeration is specific to K(R).'}
    if d is None:
        d, _ = fpdim_data_R()
    if not check_dim_hom(ring, d):
        return {'status': 'refused', 'feedback': 'Dimension vector is not a character of the ring.'}

    tuples = enumerate_twist_tuples()
    bad_roots = [n for n, tt in enumerate(tuples) if not all(is_root_of_unity(x) for x in tt.t)]
    survivors = gauss_filter(tuples, d)
    report: Dict[str, Any] = {
        'tuple_count': len(tuples),
        'non_root_tuples': bad_roots,
        'survivor_count': len(survivors),
        'survivors': [],
    }

    satisfying = 0
    for tt in survivors:
        S = balancing_s_matrix(tt.theta, d, ring)
        residuals = verlinde_residuals(S, ring, d)
        ok = not residuals['structural_failure'] and not residuals['mismatches']
        if ok:
            satisfying += 1
        witness = witness_of(residuals)
        entry = {
            'theta': [format_cyc(x) for x in tt.theta],
            'symmetric': is_symmetric(S),
            'row0_is_dims': all(S[0][j] == d[j] for j in range(ring.rank)),
            'structural_failure': residuals['structural_failure'],
            'mismatch_count': len(residuals['mismatches']),
            'witness': None if witness is None else {
                'triple': witness['triple'],
                'computed': format_cyc(witness['computed']),
                'expected': witness['expected'],
            },
        }
        entry.update({k: format_cyc(v) for k, v in central_charge_data(tt, d).items()})
        report['survivors'].append(entry)
    report['verlinde_count'] = satisfying

    conj_closed = {_theta_key(TwistTuple(tuple(galois_apply(CONJUGATION, x) for x in tt.theta)))
                   for tt in survivors} == {_theta_key(tt) for tt in survivors}
    report['conjugation_closed'] = conj_closed

    if full_audit:
        full = enumerate_twist_tuples_full()
        report['full_space_count'] = len(full)
        report['full_space_survivors'] = len(gauss_filter(full, d))

    report['counts'] = (report['tuple_count'], report['survivor_count'], satisfying)
    report['status'] = 'pass' if satisfying == 0 and not bad_roots else 'fail'
    report['feedback'] = (f"{report['tuple_count']} tuples -> {report['survivor_count']} survivors -> "
                          f"{satisfying} satisfy Verlinde")
    return report
