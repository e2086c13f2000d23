"""Exact arithmetic kernel: rational polynomials, Sturm root isolation and real algebraic numbers.

Polynomials wrap ``sympy.Poly`` over QQ in the variable ``t``. Real algebraic
numbers carry an irreducible minimal polynomial, the index of the root among
its real roots (ascending) and a rational isolating interval that is tightened
in place; the identified root never changes.
"""

import logging
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Poly, QQ, Rational, Symbol
from sympy import resultant as sym_resultant

from cremona.core.errors import ArithmeticDomainError, ZeroPolynomial

logger = logging.getLogger(__name__)

T = Symbol("t")
_S = Symbol("s")

# Degree of the zero polynomial
ZERO_DEGREE = -1


def to_fraction(value) -> Fraction:
    """Coerce an int, Fraction or sympy rational to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"not an exact rational: {value!r}")


def _sign(value) -> int:
    return (value > 0) - (value < 0)


class RatPoly:
    """Dense univariate polynomial with rational coefficients, constant term first."""

    __slots__ = ("coeffs", "_sym")

    def __init__(self, coeffs: Iterable = ()):
        values = [to_fraction(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(values)
        self._sym: Optional[Poly] = None

    # === CONSTRUCTORS ===

    @classmethod
    def constant(cls, value) -> "RatPoly":
        return cls([value])

    @classmethod
    def variable(cls) -> "RatPoly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "RatPoly":
        """Monic polynomial with the given rational roots."""
        result = cls([1])
        for r in roots:
            result = result * cls([-to_fraction(r), 1])
        return result

    @classmethod
    def from_sympy(cls, poly: Poly) -> "RatPoly":
        return cls(reversed([to_fraction(c) for c in poly.all_coeffs()]))

    @classmethod
    def from_expr(cls, expr) -> "RatPoly":
        return cls.from_sympy(Poly(expr, T, domain=QQ))

    @property
    def sym(self) -> Poly:
        if self._sym is None:
            if self.coeffs:
                dense = [Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)]
                self._sym = Poly(dense, T, domain=QQ)
            else:
                self._sym = Poly(0, T, domain=QQ)
        return self._sym

    def to_expr(self, var=T):
        return self.sym.as_expr().subs(T, var) if var is not T else self.sym.as_expr()

    # === BASIC PROPERTIES ===

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def sign_at_infinity(self, side: int = 1) -> int:
        """Sign of p(t) for t -> +inf (side=1) or t -> -inf (side=-1)."""
        if self.is_zero:
            return 0
        s = _sign(self.lc)
        return s if side > 0 or self.degree % 2 == 0 else -s

    # === ARITHMETIC ===

    @staticmethod
    def _coerce(other) -> "RatPoly":
        if isinstance(other, RatPoly):
            return other
        return RatPoly([other])

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "RatPoly":
        return RatPoly.from_sympy(self.sym + self._coerce(other).sym)

    __radd__ = __add__

    def __sub__(self, other) -> "RatPoly":
        return RatPoly.from_sympy(self.sym - self._coerce(other).sym)

    def __rsub__(self, other) -> "RatPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return RatPoly.from_sympy(self.sym * self._coerce(other).sym)

    __rmul__ = __mul__

    def __neg__(self) -> "RatPoly":
        return self.scale(-1)

    def __pow__(self, n: int) -> "RatPoly":
        return RatPoly.from_sympy(self.sym ** n)

    def scale(self, c) -> "RatPoly":
        c = to_fraction(c)
        return RatPoly([c * a for a in self.coeffs])

    def divmod(self, other: "RatPoly") -> Tuple["RatPoly", "RatPoly"]:
        if other.is_zero:
            raise ZeroPolynomial("division by the zero polynomial")
        q, r = self.sym.div(other.sym)
        return RatPoly.from_sympy(q), RatPoly.from_sympy(r)

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[1]

    def divides(self, other: "RatPoly") -> bool:
        """True if self divides other."""
        return (other % self).is_zero

    def exquo(self, other: "RatPoly") -> "RatPoly":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise ArithmeticDomainError(f"{other} does not divide {self}")
        return q

    def invert_mod(self, modulus: "RatPoly") -> "RatPoly":
        """Inverse of self modulo a coprime modulus."""
        if self.gcd(modulus).degree > 0:
            raise ArithmeticDomainError(f"{self} is not invertible modulo {modulus}")
        return RatPoly.from_sympy(self.sym.invert(modulus.sym))

    def gcd(self, other: "RatPoly") -> "RatPoly":
        """Monic greatest common divisor."""
        return RatPoly.from_sympy(self.sym.gcd(other.sym))

    def derivative(self) -> "RatPoly":
        return RatPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def evaluate(self, x) -> Fraction:
        """Horner evaluation at a rational point."""
        x = to_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    __call__ = evaluate

    def compose(self, inner: "RatPoly") -> "RatPoly":
        """self(inner(t))."""
        return RatPoly.from_sympy(self.sym.compose(inner.sym))

    def shift(self, r) -> "RatPoly":
        """p(t + r)."""
        return self.compose(RatPoly([r, 1]))

    def rescale(self, r) -> "RatPoly":
        """p(r t)."""
        r = to_fraction(r)
        return RatPoly(c * r ** k for k, c in enumerate(self.coeffs))

    def reflect(self) -> "RatPoly":
        """p(-t)."""
        return self.rescale(-1)

    def reversed_poly(self, degree: Optional[int] = None) -> "RatPoly":
        """t^d p(1/t) for the declared degree d (default: the degree)."""
        d = self.degree if degree is None else degree
        padded = list(self.coeffs) + [Fraction(0)] * (d + 1 - len(self.coeffs))
        return RatPoly(reversed(padded))

    # === NORMALIZATION ===

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if self.is_zero:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.coeffs:
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    def normalized(self) -> "RatPoly":
        """Integer coefficients with content 1, sign of the leading coefficient kept."""
        if self.is_zero:
            return self
        return self.scale(1 / self.content())

    def monic(self) -> "RatPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.lc)

    def factor_list(self) -> Tuple[Fraction, List[Tuple["RatPoly", int]]]:
        """Leading coefficient and monic irreducible factors with multiplicities."""
        if self.is_zero:
            raise ZeroPolynomial("cannot factor the zero polynomial")
        _, factors = self.sym.factor_list()
        monic = [(RatPoly.from_sympy(f).monic(), k) for f, k in factors]
        monic.sort(key=lambda item: (item[0].degree, item[0].coeffs, item[1]))
        return self.lc, monic

    def sqf_list(self) -> Tuple[Fraction, List[Tuple["RatPoly", int]]]:
        """Leading coefficient and monic square-free factors grouped by multiplicity."""
        if self.is_zero:
            raise ZeroPolynomial("cannot decompose the zero polynomial")
        _, factors = self.sym.sqf_list()
        return self.lc, [(RatPoly.from_sympy(f).monic(), k) for f, k in factors]

    # === TEXT ===

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                body = str(c)
            else:
                power = "t" if k == 1 else f"t^{k}"
                if c == 1:
                    body = power
                elif c == -1:
                    body = f"-{power}"
                else:
                    body = f"{c}*{power}"
            if not terms:
                terms.append(body)
            elif body.startswith("-"):
                terms.append(f"- {body[1:]}")
            else:
                terms.append(f"+ {body}")
        return " ".join(terms)

    def __repr__(self) -> str:
        return f"RatPoly('{self}')"


def as_poly(value) -> RatPoly:
    return value if isinstance(value, RatPoly) else RatPoly([value])


# === SQUARE-FREE MACHINERY ===

def square_free_part(p: RatPoly) -> RatPoly:
    """p / gcd(p, p'), integer content 1, leading sign kept."""
    if p.is_zero:
        raise ZeroPolynomial("square-free part of the zero polynomial")
    if p.degree == 0:
        return RatPoly([_sign(p.lc)])
    return p.exquo(p.gcd(p.derivative())).normalized()


def is_square_free(p: RatPoly) -> bool:
    if p.is_zero:
        raise ZeroPolynomial("square-freeness of the zero polynomial")
    return p.gcd(p.derivative()).degree == 0


def square_class(p: RatPoly) -> RatPoly:
    """Signed square-free kernel of p: the representative of p modulo squares in R(t)."""
    if p.is_zero:
        raise ZeroPolynomial("square class of the zero polynomial")
    lc, factors = p.sqf_list()
    kernel = RatPoly([_sign(lc)])
    for f, k in factors:
        if k % 2 == 1:
            kernel = kernel * f
    return kernel.normalized()


def is_square(p: RatPoly) -> bool:
    """True if p is a square in R(t)."""
    return square_class(p) == RatPoly([1])


def resultant(p: RatPoly, q: RatPoly) -> Fraction:
    """Sylvester resultant of p and q."""
    if p.is_zero or q.is_zero:
        raise ZeroPolynomial("resultant with the zero polynomial")
    return to_fraction(p.sym.resultant(q.sym))


def discriminant(p: RatPoly) -> Fraction:
    return to_fraction(p.sym.discriminant())


# === STURM SEQUENCES ===

def sturm_sequence(p: RatPoly) -> List[RatPoly]:
    if p.is_zero:
        raise ZeroPolynomial("Sturm sequence of the zero polynomial")
    return [RatPoly.from_sympy(s) for s in p.sym.sturm()]


def _variations(seq: Sequence[RatPoly], x: Fraction) -> int:
    signs = [s for s in (_sign(f.evaluate(x)) for f in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def root_bound(p: RatPoly) -> Fraction:
    """Cauchy bound: every complex root has absolute value below it."""
    if p.degree < 1:
        return Fraction(1)
    lc = abs(p.lc)
    return 1 + max(abs(c) / lc for c in p.coeffs[:-1])


def sturm_count(p: RatPoly, lo, hi) -> int:
    """Number of distinct real roots of p in (lo, hi]; lo must not be a root."""
    seq = sturm_sequence(p)
    return _variations(seq, to_fraction(lo)) - _variations(seq, to_fraction(hi))


def real_root_count(p: RatPoly) -> int:
    """Number of distinct real roots."""
    if p.degree < 1:
        return 0
    b = root_bound(p)
    return sturm_count(p, -b, b)


def _isolate_irreducible(f: RatPoly) -> List[Tuple[Fraction, Fraction]]:
    seq = sturm_sequence(f)
    bound = root_bound(f)
    intervals = []
    # Rational midpoints are never roots of an irreducible f of degree >= 2
    stack = [(-bound, bound, _variations(seq, -bound) - _variations(seq, bound))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            intervals.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        left = _variations(seq, lo) - _variations(seq, mid)
        stack.append((mid, hi, n - left))
        stack.append((lo, mid, left))
    intervals.sort()
    return intervals


def _roots_of_irreducible(f: RatPoly) -> List["AlgReal"]:
    f = f.normalized()
    if f.lc < 0:
        f = -f
    if f.degree == 1:
        return [AlgReal.rational(-f.coeffs[0] / f.coeffs[1])]
    return [AlgReal(f, lo, hi, k) for k, (lo, hi) in enumerate(_isolate_irreducible(f))]


def isolate_real_roots(p: RatPoly) -> List["AlgReal"]:
    """One AlgReal per distinct real root, sorted increasingly."""
    if p.is_zero:
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    if p.degree < 1:
        return []
    roots: List[AlgReal] = []
    _, factors = p.factor_list()
    for f, _ in factors:
        roots.extend(_roots_of_irreducible(f))
    roots.sort()
    return roots


def rational_roots(p: RatPoly) -> List[Fraction]:
    if p.degree < 1:
        return []
    _, factors = p.factor_list()
    return sorted(-f.coeffs[0] for f, _ in factors if f.degree == 1)


def nonreal_factors(p: RatPoly) -> List[RatPoly]:
    """Monic irreducible factors without real roots, one per distinct factor."""
    if p.degree < 1:
        return []
    _, factors = p.factor_list()
    return [f for f, _ in factors if f.degree >= 2 and real_root_count(f) == 0]


# === INTERVAL HELPERS ===

def _interval_mul(a: Tuple[Fraction, Fraction], b: Tuple[Fraction, Fraction]) -> Tuple[Fraction, Fraction]:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def interval_evaluate(p: RatPoly, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    """Enclosure of p over [lo, hi] by interval Horner evaluation."""
    if p.is_zero:
        return Fraction(0), Fraction(0)
    acc = (p.lc, p.lc)
    for c in reversed(p.coeffs[:-1]):
        prod = _interval_mul(acc, (lo, hi))
        acc = (prod[0] + c, prod[1] + c)
    return acc


def _sqrt_bounds(q: Fraction, bits: int) -> Tuple[Fraction, Fraction]:
    scale = 4 ** bits
    r = isqrt(q.numerator * scale // q.denominator)
    return Fraction(r, 2 ** bits), Fraction(r + 1, 2 ** bits)


# === REAL ALGEBRAIC NUMBERS ===

class AlgReal:
    """Real algebraic number: (irreducible minpoly, root index, isolating interval).

    The value is fixed by the minimal polynomial and the root index; equality
    and hashing use only those. The isolating interval is a refinement cache:
    ``refine`` narrows it in place and never changes which root is meant.
    """

    __slots__ = ("minpoly", "index", "_lo", "_hi", "_sign_lo")

    def __init__(self, minpoly: RatPoly, lo, hi, index: int):
        self.minpoly = minpoly
        self.index = index
        self._lo = to_fraction(lo)
        self._hi = to_fraction(hi)
        self._sign_lo = _sign(minpoly.evaluate(self._lo)) if self._lo != self._hi else 0

    @classmethod
    def rational(cls, value) -> "AlgReal":
        q = to_fraction(value)
        return cls(RatPoly([-q, 1]).normalized(), q, q, 0)

    @classmethod
    def root_of(cls, p: RatPoly, k: int) -> "AlgReal":
        """The k-th real root of p in increasing order."""
        return isolate_real_roots(p)[k]

    @classmethod
    def sqrt(cls, value) -> "Exact":
        """Nonnegative square root of a nonnegative exact number."""
        value = simplify(value)
        if sign(value) < 0:
            raise ArithmeticDomainError("square root of a negative number")
        if isinstance(value, Fraction):
            rn, rd = isqrt(value.numerator), isqrt(value.denominator)
            if rn * rn == value.numerator and rd * rd == value.denominator:
                return Fraction(rn, rd)
            value = cls.rational(value)
        x = value
        target = x.minpoly.compose(RatPoly([0, 0, 1]))
        state = {"bits": 4}

        def enclosure():
            state["bits"] += 2
            lo = max(x._lo, Fraction(0))
            return _sqrt_bounds(lo, state["bits"])[0], _sqrt_bounds(x._hi, state["bits"])[1]

        return select_root(target, enclosure, [x])

    # === INTERVALS ===

    @property
    def interval(self) -> Tuple[Fraction, Fraction]:
        return self._lo, self._hi

    @property
    def is_rational(self) -> bool:
        return self.minpoly.degree == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ArithmeticDomainError(f"{self!r} is irrational")
        return -self.minpoly.coeffs[0] / self.minpoly.coeffs[1]

    def refine(self) -> None:
        """Halve the isolating interval in place; the value is unchanged."""
        if self._lo == self._hi:
            return
        mid = (self._lo + self._hi) / 2
        if _sign(self.minpoly.evaluate(mid)) == self._sign_lo:
            self._lo = mid
        else:
            self._hi = mid

    def refine_to(self, width: Fraction) -> "AlgReal":
        while self._hi - self._lo > width:
            self.refine()
        return self

    def canonical_interval(self, width: Fraction = Fraction(1, 1024)) -> Tuple[Fraction, Fraction]:
        """Isolating interval recomputed from scratch, independent of refinement history."""
        if self.is_rational:
            q = self.to_fraction()
            return q, q
        fresh = _roots_of_irreducible(self.minpoly)[self.index]
        fresh.refine_to(width)
        return fresh.interval

    def __float__(self) -> float:
        if self.is_rational:
            return float(self.to_fraction())
        self.refine_to(Fraction(1, 2 ** 60))
        return float((self._lo + self._hi) / 2)

    # === COMPARISON ===

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgReal):
            return self.minpoly == other.minpoly and self.index == other.index
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.to_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.to_fraction())
        return hash((self.minpoly.coeffs, self.index))

    def _cmp(self, other) -> int:
        if isinstance(other, (int, Fraction)):
            q = to_fraction(other)
            if self.is_rational:
                return _sign(self.to_fraction() - q)
            while True:
                if q <= self._lo:
                    return 1
                if q >= self._hi:
                    return -1
                self.refine()
        if not isinstance(other, AlgReal):
            return NotImplemented
        if self == other:
            return 0
        if other.is_rational:
            return self._cmp(other.to_fraction())
        if self.is_rational:
            return -other._cmp(self.to_fraction())
        while True:
            if self._hi <= other._lo:
                return -1
            if other._hi <= self._lo:
                return 1
            self.refine()
            other.refine()

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    @property
    def sign(self) -> int:
        return self._cmp(0)

    # === FIELD ARITHMETIC ===

    def __neg__(self) -> "Exact":
        if self.is_rational:
            return -self.to_fraction()
        x = self
        return select_root(self.minpoly.reflect(), lambda: (-x._hi, -x._lo), [x])

    def __add__(self, other) -> "Exact":
        if isinstance(other, (int, Fraction)):
            q = to_fraction(other)
            if self.is_rational:
                return self.to_fraction() + q
            if q == 0:
                return self
            x = self
            return select_root(self.minpoly.shift(-q), lambda: (x._lo + q, x._hi + q), [x])
        if not isinstance(other, AlgReal):
            return NotImplemented
        if other.is_rational:
            return self + other.to_fraction()
        if self.is_rational:
            return other + self.to_fraction()
        x, y = self, other
        f = x.minpoly.to_expr(_S)
        g = y.minpoly.sym.as_expr().subs(T, T - _S)
        target = RatPoly.from_expr(sym_resultant(f, g, _S))
        return select_root(target, lambda: (x._lo + y._lo, x._hi + y._hi), [x, y])

    __radd__ = __add__

    def __sub__(self, other) -> "Exact":
        return self + (-other)

    def __rsub__(self, other) -> "Exact":
        return (-self) + other

    def __mul__(self, other) -> "Exact":
        if isinstance(other, (int, Fraction)):
            q = to_fraction(other)
            if self.is_rational:
                return self.to_fraction() * q
            if q == 0:
                return Fraction(0)
            if q == 1:
                return self
            x = self
            return select_root(
                self.minpoly.rescale(1 / q),
                lambda: _interval_mul((x._lo, x._hi), (q, q)),
                [x],
            )
        if not isinstance(other, AlgReal):
            return NotImplemented
        if other.is_rational:
            return self * other.to_fraction()
        if self.is_rational:
            return other * self.to_fraction()
        x, y = self, other
        m = y.minpoly.degree
        f = x.minpoly.to_expr(_S)
        g = sum(c.numerator * T ** k * _S ** (m - k) / c.denominator for k, c in enumerate(y.minpoly.coeffs))
        target = RatPoly.from_expr(sym_resultant(f, g, _S))
        return select_root(target, lambda: _interval_mul((x._lo, x._hi), (y._lo, y._hi)), [x, y])

    __rmul__ = __mul__

    def inverse(self) -> "Exact":
        if self.is_rational:
            q = self.to_fraction()
            if q == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / q
        while self._lo < 0 < self._hi:
            self.refine()
        x = self
        return select_root(self.minpoly.reversed_poly(), lambda: (1 / x._hi, 1 / x._lo), [x])

    def __truediv__(self, other) -> "Exact":
        return self * inverse(other)

    def __rtruediv__(self, other) -> "Exact":
        return self.inverse() * other

    def __pow__(self, n: int) -> "Exact":
        result: Exact = Fraction(1)
        for _ in range(n):
            result = result * self
        return result

    def __repr__(self) -> str:
        if self.is_rational:
            return f"AlgReal({self.to_fraction()})"
        return f"AlgReal({self.minpoly}, [{self._lo}, {self._hi}], #{self.index})"


Exact = Union[Fraction, AlgReal]


def select_root(p: RatPoly, enclosure: Callable[[], Tuple[Fraction, Fraction]], operands: List[AlgReal]) -> Exact:
    """Pick the real root of p inside a shrinking enclosure of the target value."""
    candidates = isolate_real_roots(p)
    while True:
        lo, hi = enclosure()
        hits = [c for c in candidates if c._lo <= hi and c._hi >= lo]
        if len(hits) == 1:
            return simplify(hits[0])
        if not hits:
            raise ArithmeticDomainError("root selection lost track of the target value")
        for x in operands:
            x.refine()
        for c in hits:
            c.refine()
        candidates = hits


def simplify(x) -> Exact:
    """Collapse rational AlgReals and ints to Fraction."""
    if isinstance(x, AlgReal) and x.is_rational:
        return x.to_fraction()
    if isinstance(x, int):
        return Fraction(x)
    return x


def as_algreal(x) -> AlgReal:
    return x if isinstance(x, AlgReal) else AlgReal.rational(x)


def sign(x) -> int:
    if isinstance(x, AlgReal):
        return x.sign
    return _sign(x)


def inverse(x) -> Exact:
    if isinstance(x, AlgReal):
        return x.inverse()
    x = to_fraction(x)
    if x == 0:
        raise ZeroDivisionError("inverse of zero")
    return 1 / x


def sign_at(q: RatPoly, x) -> int:
    """Exact sign of q at a rational or real algebraic point."""
    if not isinstance(x, AlgReal):
        return _sign(q.evaluate(x))
    if x.is_rational:
        return _sign(q.evaluate(x.to_fraction()))
    if q.is_zero:
        return 0
    if q.gcd(x.minpoly).degree >= 1:
        return 0
    while True:
        lo, hi = interval_evaluate(q, x._lo, x._hi)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        x.refine()


def lower_rational(x) -> Fraction:
    """A rational number strictly below x."""
    if isinstance(x, AlgReal) and not x.is_rational:
        return x._lo
    return to_fraction(simplify(x)) - 1


def upper_rational(x) -> Fraction:
    """A rational number strictly above x."""
    if isinstance(x, AlgReal) and not x.is_rational:
        return x._hi
    return to_fraction(simplify(x)) + 1


def rational_between(x, y) -> Fraction:
    """A rational number strictly between x < y."""
    x, y = simplify(x), simplify(y)
    while True:
        a = x._hi if isinstance(x, AlgReal) else x
        b = y._lo if isinstance(y, AlgReal) else y
        if a < b:
            return (a + b) / 2
        if isinstance(x, AlgReal):
            x.refine()
        if isinstance(y, AlgReal):
            y.refine()
        if not isinstance(x, AlgReal) and not isinstance(y, AlgReal):
            raise ArithmeticDomainError(f"empty interval between {x} and {y}")


def rational_sqrt(q) -> Optional[Fraction]:
    """Nonnegative rational square root of q, or None if q is not a rational square."""
    q = to_fraction(q)
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def region_samples(breakpoints: Sequence) -> List[Fraction]:
    """One rational point in each open interval cut out by sorted breakpoints, outer rays included."""
    if not breakpoints:
        return [Fraction(0)]
    samples = [lower_rational(breakpoints[0])]
    for a, b in zip(breakpoints, breakpoints[1:]):
        samples.append(rational_between(a, b))
    samples.append(upper_rational(breakpoints[-1]))
    return samples


def evaluate_exact(p: RatPoly, x) -> Exact:
    """p(x) as an exact number, for rational or algebraic x."""
    x = simplify(x)
    if not isinstance(x, AlgReal):
        return p.evaluate(x)
    acc: Exact = Fraction(0)
    for c in reversed(p.coeffs):
        acc = simplify(acc * x + c)
    return acc


class _Infinity:
    """The point at infinity of the real projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
