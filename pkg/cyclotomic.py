"""Exact arithmetic in Q(zeta_9) and its real cubic subfield.

Elements are stored as six rational coordinates in the power basis
1, z, z^2, ..., z^5 and kept reduced modulo x^6 + x^3 + 1.  Signs of real
elements are certified with mpmath interval arithmetic; zero is always
decided from the coordinates.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy
from mpmath.ctx_iv import MPIntervalContext

DEGREE = 6
ORDER = 9

Scalar = Union[int, Fraction]


class CyclotomicError(Exception):
    """Base error for the cyclotomic kernel."""


class FieldDivisionError(CyclotomicError, ZeroDivisionError):
    pass


class NotRealError(CyclotomicError):
    """Raised when a real-subfield operation receives a non-real element."""


class GaloisValidationError(CyclotomicError):
    """Raised when the chosen Galois generator does not act on u1, u2 as expected."""


def _reduce(coeffs: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    c = list(coeffs)
    # z^k = -z^(k-3) - z^(k-6) for k >= 6
    for k in range(len(c) - 1, DEGREE - 1, -1):
        if c[k]:
            c[k - 3] -= c[k]
            c[k - 6] -= c[k]
    c = c[:DEGREE] + [Fraction(0)] * (DEGREE - len(c))
    return tuple(Fraction(v) for v in c)


_X = sympy.Symbol('x')
_PHI9 = sympy.Poly(_X ** 6 + _X ** 3 + 1, _X, domain=sympy.QQ)


@dataclass(frozen=True)
class CycNum:
    """An element sum(c_i z^i) of Q(zeta_9), canonical and immutable."""
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != DEGREE:
            object.__setattr__(self, 'coeffs', _reduce([Fraction(c) for c in self.coeffs]))
        else:
            object.__setattr__(self, 'coeffs', tuple(Fraction(c) for c in self.coeffs))

    # --- construction ---

    @classmethod
    def from_scalar(cls, value: Scalar) -> 'CycNum':
        return cls((Fraction(value),) + (Fraction(0),) * (DEGREE - 1))

    @classmethod
    def from_powers(cls, terms: Dict[int, Scalar]) -> 'CycNum':
        """Builds sum(coefficient * z^power) for arbitrary integer powers."""
        c = [Fraction(0)] * ORDER
        for power, coefficient in terms.items():
            c[power % ORDER] += Fraction(coefficient)
        return cls(_reduce(c))

    @staticmethod
    def _coerce(other) -> Optional['CycNum']:
        if isinstance(other, CycNum):
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.from_scalar(other)
        return None

    # --- predicates ---

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise CyclotomicError(f"Element {format_cyc(self)} is not rational.")
        return self.coeffs[0]

    def is_real(self) -> bool:
        return galois_apply(CONJUGATION, self) == self

    # Integers and fractions compare as the corresponding constants
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # --- arithmetic ---

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycNum(tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycNum(tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational():
            r = o.coeffs[0]
            return CycNum(tuple(a * r for a in self.coeffs))
        product = [Fraction(0)] * (2 * DEGREE - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    product[i + j] += a * b
        return CycNum(_reduce(product))

    __rmul__ = __mul__

    def inverse(self) -> 'CycNum':
        if self.is_zero():
            raise FieldDivisionError("Division by zero in Q(zeta_9).")
        if self.is_rational():
            return CycNum.from_scalar(1 / self.coeffs[0])
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)],
                          _X, domain=sympy.QQ)
        inv = poly.invert(_PHI9)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
        return CycNum(tuple(coeffs) + (Fraction(0),) * (DEGREE - len(coeffs)))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        n = abs(exponent)
        result = ONE
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        return f"CycNum({format_cyc(self)})"


def format_cyc(x: CycNum) -> str:
    """Debug printer: exact coordinates c0..c5 in the power basis."""
    return "[" + ", ".join(str(c) for c in x.coeffs) + "]"


def field_arithmetic(x: CycNum, y: CycNum, op: str) -> CycNum:
    if op == 'add':
        return x + y
    if op == 'sub':
        return x - y
    if op == 'mul':
        return x * y
    if op == 'div':
        return x / y
    raise ValueError(f"Unknown field operation '{op}'.")


# --- Galois group ---

@dataclass(frozen=True)
class Automorphism:
    """z -> z^k for k coprime to 9."""
    k: int

    def __post_init__(self):
        k = self.k % ORDER
        if gcd(k, ORDER) != 1:
            raise CyclotomicError(f"Exponent {self.k} is not coprime to {ORDER}.")
        object.__setattr__(self, 'k', k)

    def compose(self, other: 'Automorphism') -> 'Automorphism':
        return Automorphism(self.k * other.k)

    def power(self, n: int) -> 'Automorphism':
        return Automorphism(pow(self.k, n % 6, ORDER))

    def __call__(self, x: CycNum) -> CycNum:
        return galois_apply(self, x)


IDENTITY = Automorphism(1)
CONJUGATION = Automorphism(8)
GENERATOR = Automorphism(2)
GALOIS_GROUP = tuple(Automorphism(k) for k in (1, 2, 4, 5, 7, 8))


def galois_apply(g: Automorphism, x: CycNum) -> CycNum:
    if g.k == 1:
        return x
    return CycNum.from_powers({i * g.k: c for i, c in enumerate(x.coeffs) if c})


# --- distinguished elements ---

ZERO = CycNum.from_scalar(0)
ONE = CycNum.from_scalar(1)
ZETA = CycNum.from_powers({1: 1})
ZETA3 = CycNum.from_powers({3: 1})
A = CycNum.from_powers({4: -1, 5: -1})            # 2cos(pi/9), root of t^3 - 3t - 1
U1 = CycNum.from_powers({1: 1, 2: -1, 5: -1})
U2 = CycNum.from_powers({0: 1, 4: -1, 5: -1})
BETA = CycNum.from_powers({0: 2, 4: -1, 5: -1})    # cube root of 3 u1^2 u2^2


def root_of_unity(k: int) -> CycNum:
    return CycNum.from_powers({k: 1})


def is_root_of_unity(x: CycNum, n: int = ORDER) -> bool:
    return x ** n == ONE


def sigma() -> Automorphism:
    """Generator of Gal(Q(zeta_9)^+/Q), the square of the full-group generator z -> z^2.

    Checked against sigma(u1) = -u1^-1 u2 and sigma(u2) = u1^-1.
    """
    s = GENERATOR.compose(GENERATOR)
    if galois_apply(s, U1) != -(U1.inverse() * U2) or galois_apply(s, U2) != U1.inverse():
        raise GaloisValidationError(f"z -> z^{s.k} does not satisfy sigma(u1) = -u1^-1 u2, sigma(u2) = u1^-1.")
    return s


def twist_galois() -> Automorphism:
    """Square of a lift of sigma to Q(zeta_9); it moves normalized twists along the orbit."""
    s = sigma()
    return s.compose(s)


# --- real subfield ---

def real_coordinates(x: CycNum) -> Tuple[Fraction, Fraction, Fraction]:
    """Coordinates (r0, r1, r2) with x = r0 + r1 a + r2 a^2, a = 2cos(pi/9)."""
    if not x.is_real():
        raise NotRealError(f"Element {format_cyc(x)} is not fixed by complex conjugation.")
    c = x.coeffs
    return (c[0] - 2 * c[1], -c[4], c[1])


def from_real_coordinates(r0: Scalar, r1: Scalar, r2: Scalar) -> CycNum:
    return r0 * ONE + r1 * A + r2 * (A * A)


def is_real_integral(x: CycNum) -> bool:
    """True when x lies in Z[a], the ring of integers of the real subfield."""
    return all(r.denominator == 1 for r in real_coordinates(x))


def norm_real(x: CycNum) -> Fraction:
    if not x.is_real():
        raise NotRealError(f"norm_real needs a real element, got {format_cyc(x)}.")
    s = sigma()
    product = x * galois_apply(s, x) * galois_apply(s.compose(s), x)
    if not product.is_rational():
        raise CyclotomicError(f"Norm of {format_cyc(x)} is not rational: {format_cyc(product)}.")
    return product.rational_value()


# --- certified signs ---

NEGATIVE, ZERO_SIGN, POSITIVE = -1, 0, 1

# Real embeddings, named by the exponent k of z -> z^k; k = 4 and 7 are sigma and sigma^2.
REAL_EMBEDDINGS = (1, 4, 7)

# Rational brackets of the conjugate of a under each embedding; t^3 - 3t - 1 changes sign on each.
_A_BRACKETS = {1: (Fraction(1), Fraction(2)), 4: (Fraction(-1), Fraction(0)), 7: (Fraction(-2), Fraction(-1))}


def _a_minpoly(t: Fraction) -> Fraction:
    return t * t * t - 3 * t - 1


class CertifiedSignContext:
    """Per-worker state for sign decisions: isolating intervals and an mpmath interval context."""

    def __init__(self, initial_precision: int = 64, max_precision: int = 1 << 16):
        self.initial_precision = initial_precision
        self.max_precision = max_precision
        self.iv = MPIntervalContext()
        self._brackets: Dict[int, Tuple[Fraction, Fraction]] = dict(_A_BRACKETS)

    def isolating_interval(self, embedding: int, bits: int) -> Tuple[Fraction, Fraction]:
        """Refines the bracket of the conjugate of a until its width is at most 2^-bits."""
        lo, hi = self._brackets[embedding]
        width = Fraction(1, 1 << bits)
        f_lo = _a_minpoly(lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            f_mid = _a_minpoly(mid)
            if f_mid == 0:
                lo = hi = mid
                break
            if (f_mid > 0) == (f_lo > 0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        self._brackets[embedding] = (lo, hi)
        return lo, hi

    def _fraction(self, q: Fraction):
        return self.iv.mpf(q.numerator) / self.iv.mpf(q.denominator)

    def enclose(self, x: CycNum, embedding: int = 1, precision: Optional[int] = None):
        """mpmath interval containing the image of the real element x under the embedding."""
        if embedding not in _A_BRACKETS:
            raise CyclotomicError(f"Unknown real embedding {embedding}; expected one of {REAL_EMBEDDINGS}.")
        prec = precision or self.initial_precision
        r0, r1, r2 = real_coordinates(x)
        lo, hi = self.isolating_interval(embedding, prec)
        self.iv.prec = prec
        a_iv = self.iv.mpf((self._fraction(lo), self._fraction(hi)))
        return self._fraction(r0) + self._fraction(r1) * a_iv + self._fraction(r2) * a_iv * a_iv

    def sign(self, x: CycNum, embedding: int = 1) -> int:
        if not x.is_real():
            raise NotRealError(f"certified_sign needs a real element, got {format_cyc(x)}.")
        if x.is_zero():
            return ZERO_SIGN
        prec = self.initial_precision
        while prec <= self.max_precision:
            value = self.enclose(x, embedding, prec)
            if (value > 0) is True:
                return POSITIVE
            if (value < 0) is True:
                return NEGATIVE
            prec *= 2
        raise CyclotomicError(f"Sign of {format_cyc(x)} undecided at {self.max_precision} bits.")

    def is_totally_positive(self, x: CycNum) -> bool:
        return all(self.sign(x, e) == POSITIVE for e in REAL_EMBEDDINGS)

    def compare(self, x: CycNum, y: CycNum) -> int:
        return self.sign(x - y)

    def floor_ratio(self, x: CycNum, y: CycNum) -> int:
        if y.is_zero():
            raise FieldDivisionError("certified_floor_ratio: division by zero.")
        # Floors are taken under the identity embedding, so only the sign there matters
        if self.sign(y) != POSITIVE:
            raise CyclotomicError(f"certified_floor_ratio needs a positive divisor, got {format_cyc(y)}.")
        q = x / y
        if q.is_rational():
            v = q.rational_value()
            return v.numerator // v.denominator
        n = int(self.enclose(q, 1, self.initial_precision).mid)
        # q - n is zero only if q is rational, so these signs never need the exact fallback here
        while self.sign(q - n) == NEGATIVE:
            n -= 1
        while self.sign(q - (n + 1)) != NEGATIVE:
            n += 1
        return n


_default_context: Optional[CertifiedSignContext] = None


def default_context() -> CertifiedSignContext:
    """The calling worker's sign context, created on first use."""
    global _default_context
    if _default_context is None:
        _default_context = CertifiedSignContext()
    return _default_context


def certified_sign(x: CycNum, embedding: int = 1, ctx: Optional[CertifiedSignContext] = None) -> int:
    return (ctx or default_context()).sign(x, embedding)


def certified_compare(x: CycNum, y: CycNum, ctx: Optional[CertifiedSignContext] = None) -> int:
    return (ctx or default_context()).compare(x, y)


def certified_floor_ratio(x: CycNum, y: CycNum, ctx: Optional[CertifiedSignContext] = None) -> int:
    return (ctx or default_context()).floor_ratio(x, y)


def is_totally_positive(x: CycNum, ctx: Optional[CertifiedSignContext] = None) -> bool:
    return (ctx or default_context()).is_totally_positive(x)


def self_test() -> List[str]:
    """Kernel identities checked before any stage runs; returns the failing ones."""
    failures = []
    s = sigma()
    checks = {
        'phi9(zeta) = 0': ZETA ** 6 + ZETA ** 3 + 1 == ZERO,
        'zeta^9 = 1': ZETA ** 9 == ONE,
        'zeta^3 != 1': ZETA3 != ONE,
        'a^3 - 3a - 1 = 0': A ** 3 - 3 * A - 1 == ZERO,
        'u1 = a^2 - 2': U1 == A * A - 2,
        'sigma(u1) = -u1^-1 u2': galois_apply(s, U1) == -(U1 ** -1) * U2,
        'sigma(u2) = u1^-1': galois_apply(s, U2) == U1 ** -1,
        'beta^3 = 3 u1^2 u2^2': BETA ** 3 == 3 * U1 ** 2 * U2 ** 2,
        'sqrt(3 beta) = u1^-1 u2^-1 beta^2': (U1 ** -1 * U2 ** -1 * BETA ** 2) ** 2 == 3 * BETA,
        'norm(beta) = 3': norm_real(BETA) == 3,
    }
    for name, ok in checks.items():
        if not ok:
            failures.append(name)
    return failures
