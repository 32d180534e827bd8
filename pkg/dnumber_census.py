"""Totally positive d-numbers of norm 3^n in Q(zeta_9)^+ and the candidate dimensions of Z(C).

A squared dimension is written 3^a (u1^b u2^c)^2 beta^d.  Every comparison below is a
certified sign decision on exact values; the logarithmic form of orbit maximality is
kept only as an independent cross-check.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import mpmath

from cyclotomic import (
    BETA, CycNum, ONE, U1, U2, ZERO,
    CertifiedSignContext, certified_compare, certified_floor_ratio, default_context,
    format_cyc, galois_apply, is_real_integral, is_totally_positive, norm_real, sigma,
)

# Upper and lower bounds on squared dimensions of simples in Z(C)
SQUARED_DIM_UPPER = 3938
SQUARED_DIM_LOWER = 49

# Labels whose profile carries the unit X0: Z0, Z3, Z4 and the u2^2 object Z1/Z2/Z5
M0_LABELS = (0, 1, 2, 12)

# Basis of F(X) dimensions besides the unit: [X1+X2+X5], [X3], [X4]
W125 = U2
W3 = U1 * U2
W4 = U1 ** -1 * U2 ** 2

GLOBAL_DIM_Z = 81 * U2 ** 4


class CensusError(Exception):
    """Two independent classifications of the same d-number disagree."""


@lru_cache(maxsize=None)
def _monomial(three: int, p: int, q: int, r: int) -> CycNum:
    return 3 ** three * U1 ** p * U2 ** q * BETA ** r


@dataclass(frozen=True, order=True)
class DNumber:
    """Exponents of 3^a (u1^b u2^c)^2 beta^d."""
    a: int
    b: int
    c: int
    d: int

    def value(self) -> CycNum:
        return _monomial(self.a, 2 * self.b, 2 * self.c, self.d)

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class DimMonomial:
    """A dimension 3^three u1^p u2^q beta^r, kept symbolic for printing."""
    three: int
    p: int
    q: int
    r: int

    def value(self) -> CycNum:
        return _monomial(self.three, self.p, self.q, self.r)

    def label(self) -> str:
        parts = []
        for name, e in (('3', self.three), ('u1', self.p), ('u2', self.q), ('beta', self.r)):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class ForgetfulProfile:
    """One Figure-3 row: label, orbit, dim and ([X0], [X1+X2+X5], [X3], [X4]) of F(X)."""
    label: int
    orbit: int
    dim: DimMonomial
    m0: int
    m125: int
    m3: int
    m4: int

    @property
    def counts(self) -> Tuple[int, int, int, int]:
        return (self.m0, self.m125, self.m3, self.m4)

    def dim_value(self) -> CycNum:
        return self.dim.value()

    def to_tsv(self) -> str:
        return "\t".join(str(v) for v in (self.label, self.orbit, self.dim.label(),
                                          self.m0, self.m125, self.m3, self.m4))


# --- units ---

def unit_conjugate_exponents(sign: int, x: int, y: int) -> List[Tuple[int, int, int]]:
    """Conjugates of sign * u1^x u2^y under 1, sigma, sigma^2 as (sign, x, y) triples.

    sigma(u1^x u2^y) = (-1)^x u1^(-x-y) u2^x and sigma^2(u1^x u2^y) = (-1)^y u1^y u2^(-x-y).
    """
    images = [(sign, x, y),
              (sign * (-1) ** (x % 2), -x - y, x),
              (sign * (-1) ** (y % 2), y, -x - y)]
    s = sigma()
    value = sign * U1 ** x * U2 ** y
    for e, (sg, px, py) in enumerate(images):
        if galois_apply(s.power(e), value) != sg * U1 ** px * U2 ** py:
            raise CensusError(f"Unit conjugation formula fails for ({sign}, {x}, {y}) at sigma^{e}.")
    return images


def totally_positive_unit_classify(sign: int, x: int, y: int,
                                   ctx: Optional[CertifiedSignContext] = None) -> bool:
    """True iff sign * u1^x u2^y is totally positive, by the parity rule and by certified signs."""
    by_parity = sign > 0 and x % 2 == 0 and y % 2 == 0
    by_signs = is_totally_positive(sign * U1 ** x * U2 ** y, ctx)
    if by_parity != by_signs:
        raise CensusError(f"Parity rule and certified signs disagree on {sign:+d} u1^{x} u2^{y}.")
    return by_parity


def cube_root_cases(n: int, span: int = 2) -> List[Tuple[int, int]]:
    """Pairs (x, y) in [-span, span]^2 with n u1^x u2^y a cube in Q(zeta_9)^+.

    Roots are searched among unit multiples of beta (n = 3) or beta^2 (n = 9).
    """
    if n not in (3, 9):
        raise ValueError(f"cube_root_cases handles n = 3 or 9, got {n}")
    base = BETA if n == 3 else BETA ** 2
    cubes = {}
    for sign in (1, -1):
        for p in range(-span - 2, span + 3):
            for q in range(-span - 2, span + 3):
                root = sign * U1 ** p * U2 ** q * base
                cubes[root ** 3] = root
    cases = []
    for x in range(-span, span + 1):
        for y in range(-span, span + 1):
            if n * U1 ** x * U2 ** y in cubes:
                cases.append((x, y))
    return cases


# --- orbits ---

def orbit_conjugates(n: DNumber) -> Tuple[DNumber, DNumber, DNumber]:
    """Galois orbit of the value of n, listed as n, sigma(n), sigma^2(n)."""
    s = n.b + n.c + n.d
    orbit = (n, DNumber(n.a, -s, n.b, n.d), DNumber(n.a, n.c, -s, n.d))
    sg = sigma()
    value = n.value()
    for e, m in enumerate(orbit):
        if galois_apply(sg.power(e), value) != m.value():
            raise CensusError(f"Orbit formula fails for {n.as_tuple()} at sigma^{e}.")
    return orbit


def gaal_conjugates(n: DNumber) -> Tuple[DNumber, DNumber, DNumber]:
    """Squared dimensions of X, hat sigma(X), hat sigma^2(X) in Z(C).

    dim(hat sigma X)^2 = sigma(dim X^2) dim Z(C) / sigma(dim Z(C)).
    """
    s = n.b + n.c + n.d
    return (n, DNumber(n.a, 2 - s, n.b + 2, n.d), DNumber(n.a, n.c - 2, 4 - s, n.d))


def verify_gaal(n: DNumber) -> bool:
    sg = sigma()
    orbit = gaal_conjugates(n)
    for e in (1, 2):
        g = sg.power(e)
        expected = galois_apply(g, n.value()) * GLOBAL_DIM_Z / galois_apply(g, GLOBAL_DIM_Z)
        if expected != orbit[e].value():
            return False
    return True


def is_orbit_max(n: DNumber, ctx: Optional[CertifiedSignContext] = None) -> bool:
    value = n.value()
    _, c1, c2 = orbit_conjugates(n)
    return certified_compare(value, c1.value(), ctx) >= 0 and certified_compare(value, c2.value(), ctx) >= 0


def _log_constants(dps: int):
    with mpmath.workdps(dps):
        l1 = mpmath.log(2 * mpmath.cos(2 * mpmath.pi / 9))
        l2 = mpmath.log(1 + 2 * mpmath.cos(mpmath.pi / 9))
        z = l1 + l2
        x1 = (l2 - 2 * l1) / z
        x2 = (l1 - 2 * l2) / z
        return l1, l2, z, x1, x2


def log_orbit_max_oracle(n: DNumber, dps: int = 50) -> bool:
    """Orbit maximality through c/x1 + y1d/x1 >= b >= c x2 - y2d, evaluated in mpmath."""
    l1, l2, z, x1, x2 = _log_constants(dps)
    with mpmath.workdps(dps):
        eps = mpmath.mpf(10) ** (-(dps // 2))
        y1 = n.d * l1 / z
        y2 = n.d * l2 / z
        upper = (n.c + y1) / x1
        lower = n.c * x2 - y2
        return bool(upper >= n.b - eps and n.b >= lower - eps)


def inew_thresholds(dps: int = 50) -> List:
    """Right-hand sides (y2d + y1d/x1) / (x2 - 1/x1) for d = 0, 1, 2; they equal 0, -1/3, -2/3."""
    l1, l2, z, x1, x2 = _log_constants(dps)
    values = []
    with mpmath.workdps(dps):
        for d in range(3):
            y1, y2 = d * l1 / z, d * l2 / z
            values.append((y2 + y1 / x1) / (x2 - 1 / x1))
    return values


# --- squares ---

def is_perfect_square(n: DNumber) -> bool:
    return (n.a - n.d) % 2 == 0


def square_root(n: DNumber) -> Optional[DimMonomial]:
    """Root of n, using sqrt(3 beta) = u1^-1 u2^-1 beta^2 when d is odd."""
    if not is_perfect_square(n):
        return None
    if n.d % 2 == 0:
        return DimMonomial(n.a // 2, n.b, n.c, n.d // 2)
    # d = 1 and a odd
    return DimMonomial((n.a - 1) // 2, n.b - 1, n.c - 1, 2)


# --- census ---

def census_grid() -> List[DNumber]:
    return [DNumber(a, b, c, d)
            for a in range(5) for b in range(-2, 5) for c in range(7) for d in range(3)
            if (a - d) % 2 == 0]


def _within_bounds(orbit: Sequence[DNumber], ctx: CertifiedSignContext) -> bool:
    values = [m.value() for m in orbit]
    return (all(ctx.compare(v, CycNum.from_scalar(SQUARED_DIM_UPPER)) < 0 for v in values)
            and all(ctx.compare(v, CycNum.from_scalar(SQUARED_DIM_LOWER)) > 0 for v in values))


def _census_slice(a: int, initial_precision: int = 64) -> List[Tuple[int, int, int, int]]:
    """Worker: census candidates with the given power of 3."""
    ctx = CertifiedSignContext(initial_precision)
    found = []
    for n in census_grid():
        if n.a != a:
            continue
        orbit = gaal_conjugates(n)
        if not all(is_orbit_max(m, ctx) for m in orbit):
            continue
        if _within_bounds(orbit, ctx):
            found.append(n.as_tuple())
    return found


def enumerate_candidate_squared_dims(jobs: int = 1, initial_precision: int = 64) -> List[DNumber]:
    """Grid points whose three gaal conjugates are orbit-maximal and lie strictly in (49, 3938)."""
    powers = list(range(5))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            slices = list(pool.map(_census_slice, powers, [initial_precision] * len(powers)))
    else:
        slices = [_census_slice(a, initial_precision) for a in powers]
    return sorted(DNumber(*t) for part in slices for t in part)


# --- profiles ---

def profile_solutions(dim: CycNum, allow_m0: bool,
                      ctx: Optional[CertifiedSignContext] = None) -> List[Tuple[int, int, int, int]]:
    """All (m0, x, y, z) with dim = m0 + x u2 + y u1u2 + z u1^-1 u2^2 and x, y, z >= 0."""
    solutions = []
    for m0 in ((0, 1) if allow_m0 else (0,)):
        rest = dim - m0
        if rest.is_zero():
            solutions.append((m0, 0, 0, 0))
            continue
        if certified_compare(rest, ZERO, ctx) < 0:
            continue
        for z in range(certified_floor_ratio(rest, W4, ctx) + 1):
            after_z = rest - z * W4
            for y in range(certified_floor_ratio(after_z, W3, ctx) + 1):
                x_value = (after_z - y * W3) / W125
                if not x_value.is_rational():
                    continue
                x = x_value.rational_value()
                if x.denominator == 1 and x >= 0:
                    solutions.append((m0, int(x), y, z))
    return sorted(solutions)


def small_dimension_scan(limit: int = 2) -> List[Tuple[CycNum, Tuple[int, int, int]]]:
    """Dims x u2 + y u1u2 + z u1^-1 u2^2 (0 <= x, y, z <= limit) of norm a power of 3, ascending."""
    found = []
    for x in range(limit + 1):
        for y in range(limit + 1):
            for z in range(limit + 1):
                if x == y == z == 0:
                    continue
                dim = x * W125 + y * W3 + z * W4
                norm = norm_real(dim)
                if norm.denominator == 1 and _is_power_of_three(norm.numerator):
                    found.append((dim, (x, y, z)))
    ctx = default_context()
    # Insertion sort on certified comparisons; the list is tiny
    ordered: List[Tuple[CycNum, Tuple[int, int, int]]] = []
    for item in found:
        pos = len(ordered)
        while pos > 0 and ctx.compare(item[0], ordered[pos - 1][0]) < 0:
            pos -= 1
        if pos > 0 and ordered[pos - 1][0] == item[0]:
            continue
        ordered.insert(pos, item)
    return ordered


def smallest_center_dimensions(count: int = 4) -> List[CycNum]:
    """u2, u1u2, u1^-1 u2^2 and u1^-1 u2 beta."""
    return [dim for dim, _ in small_dimension_scan()[:count]]


def _is_power_of_three(n: int) -> bool:
    if n < 1:
        return False
    while n % 3 == 0:
        n //= 3
    return n == 1


@lru_cache(maxsize=1)
def _squared_dim_index() -> Dict[CycNum, DNumber]:
    index = {}
    for a in range(5):
        for b in range(-6, 7):
            for c in range(-6, 9):
                for d in range(3):
                    n = DNumber(a, b, c, d)
                    index.setdefault(n.value(), n)
    return index


def dnumber_of_square(value: CycNum) -> DNumber:
    n = _squared_dim_index().get(value)
    if n is None:
        raise CensusError(f"{format_cyc(value)} is not a tabulated squared dimension.")
    return n


def _orbit_key(n: DNumber) -> FrozenSet[DNumber]:
    return frozenset(gaal_conjugates(n))


def _ordered_orbit(n: DNumber, ctx: CertifiedSignContext) -> List[DNumber]:
    """Distinct orbit members starting from the smallest, then its hat sigma and hat sigma^2 images."""
    members = list(dict.fromkeys(gaal_conjugates(n)))
    smallest = members[0]
    for m in members[1:]:
        if ctx.compare(m.value(), smallest.value()) < 0:
            smallest = m
    return list(dict.fromkeys(gaal_conjugates(smallest)))


def build_figure3(census: Optional[List[DNumber]] = None, jobs: int = 1,
                  initial_precision: int = 64) -> List[ForgetfulProfile]:
    """Candidate dimensions of simples of Z(C), grouped by dimensional Galois orbit."""
    ctx = CertifiedSignContext(initial_precision)
    if census is None:
        census = enumerate_candidate_squared_dims(jobs, initial_precision)

    # (first member, carries the unit)
    seeds: List[Tuple[DNumber, bool]] = [(DNumber(0, 0, 0, 0), True)]
    for dim in smallest_center_dimensions():
        seeds.append((dnumber_of_square(dim * dim), False))
    seeds.append((dnumber_of_square(U2 ** 4), True))
    seeds.extend((n, False) for n in census)

    orbits: List[Tuple[List[DNumber], bool, List[Tuple[int, int, int, int]]]] = []
    seen = set()
    for n, with_unit in seeds:
        key = (_orbit_key(n), with_unit)
        if key in seen:
            continue
        seen.add(key)
        members = _ordered_orbit(n, ctx)
        profiles = []
        for m in members:
            root = square_root(m)
            if root is None:
                break
            matches = [s for s in profile_solutions(root.value(), with_unit, ctx) if s[0] == int(with_unit)]
            if len(matches) != 1:
                break
            profiles.append(matches[0])
        if len(profiles) != len(members):
            # print(f"[DEBUG] Dropping orbit of {n.as_tuple()}: no unique profile")
            continue
        orbits.append((members, with_unit, profiles))

    def sort_key(entry):
        return entry[0][0].value()

    ordered = []
    for entry in orbits:
        pos = len(ordered)
        while pos > 0:
            other = ordered[pos - 1]
            cmp = ctx.compare(sort_key(entry), sort_key(other))
            if cmp > 0 or (cmp == 0 and not (entry[1] and not other[1])):
                break
            pos -= 1
        ordered.insert(pos, entry)

    rows: List[ForgetfulProfile] = []
    for orbit_index, (members, _, profiles) in enumerate(ordered):
        for m, (m0, x, y, z) in zip(members, profiles):
            rows.append(ForgetfulProfile(label=len(rows), orbit=orbit_index, dim=square_root(m),
                                         m0=m0, m125=x, m3=y, m4=z))
    return rows


def figure3_tsv(rows: Sequence[ForgetfulProfile]) -> str:
    return "\n".join(row.to_tsv() for row in rows) + "\n"


def orbit_sizes(rows: Sequence[ForgetfulProfile]) -> List[int]:
    sizes: Dict[int, int] = {}
    for row in rows:
        sizes[row.orbit] = sizes.get(row.orbit, 0) + 1
    return [sizes[k] for k in sorted(sizes)]


def profile_equation_holds(row: ForgetfulProfile) -> bool:
    return row.m0 * ONE + row.m125 * W125 + row.m3 * W3 + row.m4 * W4 == row.dim_value()


def divides_center_dimension(row: ForgetfulProfile) -> bool:
    """81 u2^4 / dim^2 is an algebraic integer."""
    dim = row.dim_value()
    return is_real_integral(GLOBAL_DIM_Z / (dim * dim))


def norm_is_power_of_three(n: DNumber) -> bool:
    norm = norm_real(n.value())
    return norm.denominator == 1 and _is_power_of_three(norm.numerator)

