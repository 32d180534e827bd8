"""Fusion rings: data model, axiom checks, dimension characters and K(R)."""
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from cyclotomic import (
    CycNum, Automorphism, ONE, U1, U2, ZERO,
    POSITIVE, certified_sign, galois_apply, is_totally_positive, sigma,
)

DimVector = List[CycNum]


class FusionRingError(Exception):
    """Invalid ring data, a malformed .fring file, or an ambiguous Galois matching."""


@dataclass(frozen=True)
class FusionRing:
    """N[i][j][k] is the multiplicity of X_k in X_i (x) X_j."""
    rank: int
    labels: Tuple[str, ...]
    N: Tuple[Tuple[Tuple[int, ...], ...], ...]
    dual: Tuple[int, ...]

    @classmethod
    def from_tables(cls, tables: Sequence[Sequence[Sequence[int]]], dual: Optional[Sequence[int]] = None,
                    labels: Optional[Sequence[str]] = None) -> 'FusionRing':
        rank = len(tables)
        return cls(
            rank=rank,
            labels=tuple(labels) if labels else tuple(f"X{i}" for i in range(rank)),
            N=tuple(tuple(tuple(int(v) for v in row) for row in table) for table in tables),
            dual=tuple(dual) if dual is not None else tuple(range(rank)),
        )

    def product(self, i: int, j: int) -> Tuple[int, ...]:
        """Multiplicity vector of X_i (x) X_j."""
        return self.N[i][j]

    def is_commutative(self) -> bool:
        r = range(self.rank)
        return all(self.N[i][j][k] == self.N[j][i][k] for i in r for j in r for k in r)


def validate(ring: FusionRing) -> List[str]:
    """Returns every violated ring identity, with indices; an empty list means valid."""
    violations: List[str] = []
    r = range(ring.rank)
    N, dual = ring.N, ring.dual

    if len(N) != ring.rank or any(len(t) != ring.rank or any(len(row) != ring.rank for row in t) for t in N):
        return [f"shape: expected {ring.rank}^3 tensor"]
    if len(dual) != ring.rank or sorted(dual) != list(r):
        return [f"duality: dual {list(dual)} is not a permutation of 0..{ring.rank - 1}"]

    for i in r:
        for j in r:
            for k in r:
                if N[i][j][k] < 0:
                    violations.append(f"nonnegativity: (N{i})[{j},{k}] = {N[i][j][k]}")
    for j in r:
        for k in r:
            expected = 1 if j == k else 0
            if N[0][j][k] != expected:
                violations.append(f"unit: (N0)[{j},{k}] = {N[0][j][k]}, expected {expected}")
            if N[j][0][k] != expected:
                violations.append(f"unit: (N{j})[0,{k}] = {N[j][0][k]}, expected {expected}")

    if dual[0] != 0:
        violations.append(f"duality: dual(0) = {dual[0]}")
    for i in r:
        if dual[dual[i]] != i:
            violations.append(f"duality: dual is not an involution at {i}")
        for j in r:
            expected = 1 if j == dual[i] else 0
            if N[i][j][0] != expected:
                violations.append(f"duality: (N{i})[{j},0] = {N[i][j][0]}, expected {expected}")
            for k in r:
                # [X_k, X_i X_j] = [X_j, X_i* X_k]
                if N[i][j][k] != N[dual[i]][k][j]:
                    violations.append(f"reciprocity: (N{i})[{j},{k}] = {N[i][j][k]} != "
                                      f"(N{dual[i]})[{k},{j}] = {N[dual[i]][k][j]}")
                if N[i][j][k] != N[j][i][k]:
                    violations.append(f"commutativity: (N{i})[{j},{k}] != (N{j})[{i},{k}]")

    for i in r:
        for j in r:
            for k in r:
                for l in r:
                    lhs = sum(N[i][j][m] * N[m][k][l] for m in r)
                    rhs = sum(N[j][k][m] * N[i][m][l] for m in r)
                    if lhs != rhs:
                        violations.append(f"associativity: (i,j,k,l) = ({i},{j},{k},{l}): {lhs} != {rhs}")
    return violations


# --- built-in rings ---

_R_TABLES = (
    ((1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0), (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)),
    ((0, 1, 0, 0, 0, 0), (1, 0, 1, 1, 0, 0), (0, 1, 0, 0, 1, 0), (0, 1, 0, 1, 1, 0), (0, 0, 1, 1, 1, 1), (0, 0, 0, 0, 1, 1)),
    ((0, 0, 1, 0, 0, 0), (0, 1, 0, 0, 1, 0), (1, 0, 0, 1, 0, 1), (0, 0, 1, 1, 1, 0), (0, 1, 0, 1, 1, 1), (0, 0, 1, 0, 1, 0)),
    ((0, 0, 0, 1, 0, 0), (0, 1, 0, 1, 1, 0), (0, 0, 1, 1, 1, 0), (1, 1, 1, 1, 1, 1), (0, 1, 1, 1, 2, 1), (0, 0, 0, 1, 1, 1)),
    ((0, 0, 0, 0, 1, 0), (0, 0, 1, 1, 1, 1), (0, 1, 0, 1, 1, 1), (0, 1, 1, 1, 2, 1), (1, 1, 1, 2, 2, 1), (0, 1, 1, 1, 1, 0)),
    ((0, 0, 0, 0, 0, 1), (0, 0, 0, 0, 1, 1), (0, 0, 1, 0, 1, 0), (0, 0, 0, 1, 1, 1), (0, 1, 1, 1, 1, 0), (1, 1, 0, 1, 0, 0)),
)


def builtin_R() -> FusionRing:
    """K(C(so5, 3/2)_ad), self-dual, in the order X0..X5."""
    ring = FusionRing.from_tables(_R_TABLES)
    violations = validate(ring)
    if violations:
        raise FusionRingError(f"Built-in K(R) tables violate {len(violations)} identities; first: {violations[0]}")
    return ring


def trivial_ring() -> FusionRing:
    return FusionRing.from_tables((((1,),),))


def is_builtin_R(ring: FusionRing) -> bool:
    return ring.N == _R_TABLES and ring.dual == tuple(range(6))


# --- dimensions ---

def check_dim_hom(ring: FusionRing, d: Sequence[CycNum]) -> bool:
    """True when d_i d_j = sum_k (N_i)_{j,k} d_k for all i, j."""
    if len(d) != ring.rank or d[0] != ONE:
        return False
    r = range(ring.rank)
    for i in r:
        for j in r:
            rhs = ZERO
            for k in r:
                if ring.N[i][j][k]:
                    rhs = rhs + ring.N[i][j][k] * d[k]
            if d[i] * d[j] != rhs:
                return False
    return True


def is_positive_character(d: Sequence[CycNum]) -> bool:
    """Every value positive at the identity embedding and every squared value totally positive.

    FP dimensions need not be totally positive themselves: sigma(u1 u2) < 0.
    """
    return all(certified_sign(x) == POSITIVE and is_totally_positive(x * x) for x in d)


def global_dimension(d: Sequence[CycNum]) -> CycNum:
    total = ZERO
    for x in d:
        total = total + x * x
    return total


def fpdim_data_R() -> Tuple[DimVector, CycNum]:
    """FP dimensions (1, u2, u2, u1 u2, u1^-1 u2^2, u2) and their square sum 9 u2^2, both verified."""
    d = [ONE, U2, U2, U1 * U2, U1 ** -1 * U2 ** 2, U2]
    ring = builtin_R()
    if not check_dim_hom(ring, d):
        raise FusionRingError("Claimed FP dimensions are not a character of K(R).")
    if not is_positive_character(d):
        raise FusionRingError("Claimed FP dimensions are not positive with totally positive squares.")
    total = global_dimension(d)
    if total != 9 * U2 ** 2:
        raise FusionRingError("FPdim(R) is not 9 u2^2.")
    return d, total


def formal_codegrees_R() -> List[CycNum]:
    """dim(C)/d_i^2 per simple: 9u2^2, 9, 9, 9u1^-2, 9u1^2u2^-2, 9."""
    d, total = fpdim_data_R()
    return [total / (x * x) for x in d]


def center_unit_dims_R() -> List[CycNum]:
    """dim(Z_j) = dim(C)/codegree_j for the six center simples pinned by the codegrees."""
    _, total = fpdim_data_R()
    return [total / f for f in formal_codegrees_R()]


def ring_characters_R() -> List[DimVector]:
    """All six characters of K(R): the Galois orbit of the FP character and a second orbit
    with chi(X3) = 1, chi(X4) = -1 and chi(X1) a root of t^3 - 3t + 1."""
    d, _ = fpdim_data_R()
    x1 = U1
    x2 = 1 - U1 ** -1
    x5 = x2 * x2 - 2
    chi = [ONE, x1, x2, ONE, -ONE, x5]
    s = sigma()
    characters: List[DimVector] = []
    for base in (d, chi):
        for e in range(3):
            g = s.power(e)
            characters.append([galois_apply(g, v) for v in base])
    ring = builtin_R()
    for c in characters:
        if not check_dim_hom(ring, c):
            raise FusionRingError("Computed character fails the dimension homomorphism check.")
    return characters


def product_ring(a: FusionRing, b: FusionRing) -> FusionRing:
    for name, ring in (('A', a), ('B', b)):
        violations = validate(ring)
        if violations:
            raise FusionRingError(f"product_ring: ring {name} is invalid ({violations[0]}).")
    rb = b.rank
    rank = a.rank * rb
    pairs = [(i, j) for i in range(a.rank) for j in range(rb)]
    tables = [[[a.N[i1][j1][k1] * b.N[i2][j2][k2] for (k1, k2) in pairs]
               for (j1, j2) in pairs]
              for (i1, i2) in pairs]
    dual = [a.dual[i1] * rb + b.dual[i2] for (i1, i2) in pairs]
    labels = [f"{a.labels[i1]}*{b.labels[i2]}" for (i1, i2) in pairs]
    ring = FusionRing.from_tables(tables, dual, labels)
    violations = validate(ring)
    if violations:
        raise FusionRingError(f"product_ring: product is invalid ({violations[0]}).")
    return ring


def product_dims(da: Sequence[CycNum], db: Sequence[CycNum]) -> DimVector:
    return [x * y for x in da for y in db]


def galois_perm_on_simples(d: Sequence[CycNum], g: Automorphism,
                           global_dim: Optional[CycNum] = None) -> List[int]:
    """Permutation i -> hat g(i) matching g(d_i^2) D / g(D) to the unique simple of that squared dimension.

    A simple whose normalized dimension is its own keeps its place when several simples
    share that dimension; any other ambiguity is an error.
    """
    D = global_dim if global_dim is not None else global_dimension(d)
    ratio = D / galois_apply(g, D)
    squares = [x * x for x in d]
    perm: List[int] = []
    for i, sq in enumerate(squares):
        target = galois_apply(g, sq) * ratio
        matches = [j for j, other in enumerate(squares) if other == target]
        if not matches:
            raise FusionRingError(f"No simple has the Galois-twisted dimension of X{i}.")
        if len(matches) > 1:
            if i not in matches:
                raise FusionRingError(f"Galois image of X{i} is ambiguous among {matches}.")
            perm.append(i)
        else:
            perm.append(matches[0])
    if sorted(perm) != list(range(len(d))):
        raise FusionRingError(f"Galois matching {perm} is not a permutation.")
    return perm


# --- .fring format ---

def parse_fring(text: str) -> FusionRing:
    """Parses `rank r`, `dual p0 .. p(r-1)`, then r blocks of r rows; `#` starts a comment."""
    rows: List[List[str]] = []
    for raw in text.splitlines():
        line = raw.split('#', 1)[0].strip()
        if line:
            rows.append(line.split())
    if len(rows) < 2 or rows[0][0] != 'rank' or rows[1][0] != 'dual':
        raise FusionRingError("Expected 'rank r' and 'dual ...' header lines.")
    try:
        rank = int(rows[0][1])
        dual = [int(v) for v in rows[1][1:]]
        body = [[int(v) for v in row] for row in rows[2:]]
    except (IndexError, ValueError) as e:
        raise FusionRingError(f"Non-integer entry in .fring data: {e}")
    if rank < 1 or len(dual) != rank:
        raise FusionRingError(f"Header declares rank {rank} with {len(dual)} dual entries.")
    if len(body) != rank * rank or any(len(row) != rank for row in body):
        raise FusionRingError(f"Expected {rank * rank} rows of {rank} integers.")
    tables = [body[i * rank:(i + 1) * rank] for i in range(rank)]
    return FusionRing.from_tables(tables, dual)


def load_fring(path: str) -> FusionRing:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise FusionRingError(f"Cannot read ring file {path}: {e}")
    return parse_fring(text)


def dump_fring(ring: FusionRing, header: Optional[List[str]] = None) -> str:
    lines = [f"# {h}" for h in (header or [])]
    lines.append(f"rank {ring.rank}")
    lines.append("dual " + " ".join(str(p) for p in ring.dual))
    for i in range(ring.rank):
        lines.append(f"# N{i}")
        for row in ring.N[i]:
            lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def ring_summary(ring: FusionRing) -> Dict[str, Any]:
    violations = validate(ring)
    return {'rank': ring.rank, 'valid': not violations, 'violations': violations,
            'commutative': ring.is_commutative()}
