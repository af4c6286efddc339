"""Exact coefficient arithmetic.

Everything in the package is computed over the field Q(q^{1/L}) of rational
functions with integer coefficients, together with formal phases (-1)^r for
rational r.  The three layers are

QRat
    a reduced rational function in a fractional power of q;
Scalar
    a QRat times a Phase;
Series
    a truncated Laurent series in one formal variable with rational exponents
    and Scalar coefficients.
"""

from fractions import Fraction
from math import gcd, inf

import flint

_ONE_POLY = flint.fmpz_poly([1])
_ZERO_POLY = flint.fmpz_poly([])


class DomainError(ArithmeticError):
    """Operation outside the domain of the function (k = 0, 1/0, poles)."""


class PhaseSumError(ArithmeticError):
    """Sum of two scalars carrying different fractional phases."""


def _lcm(a, b):
    return a * b // gcd(a, b)


def _valuation(p):
    """Index of the lowest nonzero coefficient of a nonzero polynomial."""
    i = 0
    while p[i] == 0:
        i += 1
    return i


def _deflation(p):
    """Largest m with p(t) = r(t^m); 0 stands for 'any m' (constants)."""
    if p.degree() <= 0:
        return 0
    return p.deflation()[1]


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational number, got {x!r}")


class QRat:
    """Reduced rational function ``q^(shift/scale) * num(t) / den(t)``, t = q^(1/scale).

    The denominator has a nonzero constant term and a positive leading
    coefficient, numerator and denominator are coprime, and ``scale`` is as
    small as possible.  With these rules every value has exactly one
    representation, so equality is a field-by-field comparison.
    """

    __slots__ = ("num", "den", "shift", "scale", "_hash")

    def __init__(self, num, den=_ONE_POLY, shift=0, scale=1):
        # raw constructor; callers go through _make unless already normal
        self.num = num
        self.den = den
        self.shift = shift
        self.scale = scale
        self._hash = None

    # construction -----------------------------------------------------

    @staticmethod
    def _make(num, den, shift, scale):
        if num.is_zero():
            return ZERO
        if den.is_zero():
            raise DomainError("division by zero")
        v = _valuation(num)
        if v:
            num = num.right_shift(v)
            shift += v
        v = _valuation(den)
        if v:
            den = den.right_shift(v)
            shift -= v
        if not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num = num // g
                den = den // g
            if den.leading_coefficient() < 0:
                num = -num
                den = -den
        if scale > 1:
            d = gcd(scale, shift)
            if d > 1:
                d = gcd(d, _deflation(num))
                if d > 1 and not den.is_one():
                    d = gcd(d, _deflation(den))
                if d > 1:
                    num = num.deflate(d)
                    if not den.is_one():
                        den = den.deflate(d)
                    shift //= d
                    scale //= d
        return QRat(num, den, shift, scale)

    @classmethod
    def from_int(cls, c):
        c = int(c)
        if c == 0:
            return ZERO
        return QRat(flint.fmpz_poly([c]))

    @classmethod
    def from_fraction(cls, c):
        c = _as_fraction(c)
        if c.denominator == 1:
            return cls.from_int(c.numerator)
        return cls.from_int(c.numerator) / cls.from_int(c.denominator)

    @classmethod
    def q_power(cls, e, coeff=1):
        """``coeff * q^e`` for rational e."""
        if coeff == 0:
            return ZERO
        e = _as_fraction(e)
        return QRat(flint.fmpz_poly([coeff]), _ONE_POLY, e.numerator, e.denominator)

    @classmethod
    def laurent(cls, terms):
        """Laurent polynomial from a mapping ``{exponent: integer coefficient}``."""
        terms = {_as_fraction(e): c for e, c in terms.items() if c}
        if not terms:
            return ZERO
        scale = 1
        for e in terms:
            scale = _lcm(scale, e.denominator)
        ints = {int(e * scale): c for e, c in terms.items()}
        lo = min(ints)
        coeffs = [0] * (max(ints) - lo + 1)
        for e, c in ints.items():
            coeffs[e - lo] = c
        return QRat._make(flint.fmpz_poly(coeffs), _ONE_POLY, lo, scale)

    # predicates -------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.shift == 0 and self.num.is_one() and self.den.is_one()

    def is_laurent(self):
        return self.den.is_one()

    def is_monomial(self):
        return self.den.is_one() and self.num.degree() == 0

    # arithmetic -------------------------------------------------------

    def _aligned(self, other):
        """Numerators/denominators of both operands over a common scale."""
        if self.scale == other.scale:
            return (self.num, self.den, self.shift, other.num, other.den,
                    other.shift, self.scale)
        L = _lcm(self.scale, other.scale)
        a, b = L // self.scale, L // other.scale
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if a > 1:
            n1, d1 = n1.inflate(a), d1.inflate(a)
        if b > 1:
            n2, d2 = n2.inflate(b), d2.inflate(b)
        return n1, d1, self.shift * a, n2, d2, other.shift * b, L

    def __add__(self, other):
        if not isinstance(other, QRat):
            if isinstance(other, (int, Fraction)):
                other = QRat.from_fraction(other)
            else:
                return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        n1, d1, s1, n2, d2, s2, L = self._aligned(other)
        m = min(s1, s2)
        if s1 > m:
            n1 = n1.left_shift(s1 - m)
        if s2 > m:
            n2 = n2.left_shift(s2 - m)
        if d1 == d2:
            num, den = n1 + n2, d1
        else:
            num, den = n1 * d2 + n2 * d1, d1 * d2
        return QRat._make(num, den, m, L)

    __radd__ = __add__

    def __neg__(self):
        if self.num.is_zero():
            return self
        return QRat(-self.num, self.den, self.shift, self.scale)

    def __sub__(self, other):
        if not isinstance(other, QRat):
            if isinstance(other, (int, Fraction)):
                other = QRat.from_fraction(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QRat):
            if isinstance(other, int):
                if other == 0 or self.num.is_zero():
                    return ZERO
                return QRat(self.num * other, self.den, self.shift, self.scale)
            if isinstance(other, Fraction):
                return self * QRat.from_fraction(other)
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        n1, d1, s1, n2, d2, s2, L = self._aligned(other)
        if d1.is_one() and d2.is_one():
            return QRat._make_scaled(n1 * n2, _ONE_POLY, s1 + s2, L)
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 // g, d2 // g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 // g, d1 // g
        num, den = n1 * n2, d1 * d2
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return QRat._make_scaled(num, den, s1 + s2, L)

    __rmul__ = __mul__

    @staticmethod
    def _make_scaled(num, den, shift, scale):
        # num, den already coprime with nonzero constant terms
        if scale > 1:
            d = gcd(scale, shift)
            if d > 1:
                d = gcd(d, _deflation(num))
                if d > 1 and not den.is_one():
                    d = gcd(d, _deflation(den))
                if d > 1:
                    num = num.deflate(d)
                    if not den.is_one():
                        den = den.deflate(d)
                    shift //= d
                    scale //= d
        return QRat(num, den, shift, scale)

    def inv(self):
        if self.num.is_zero():
            raise DomainError("inverse of zero")
        num, den = self.den, self.num
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return QRat(num, den, -self.shift, self.scale)

    def __truediv__(self, other):
        if not isinstance(other, QRat):
            if isinstance(other, (int, Fraction)):
                other = QRat.from_fraction(other)
            else:
                return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("integer exponents only")
        if k < 0:
            return self.inv() ** (-k)
        if self.is_monomial():
            c = self.num[0] ** k
            return QRat(flint.fmpz_poly([c]), _ONE_POLY, self.shift * k, self.scale)
        r = ONE
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def subs_power(self, m):
        """The function f(q^m) for a positive integer m."""
        if m == 1 or self.num.is_zero():
            return self
        return QRat._make(self.num.inflate(m), self.den.inflate(m),
                          self.shift * m, self.scale)

    # comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, QRat):
            return (self.shift == other.shift and self.scale == other.scale
                    and self.num == other.num and self.den == other.den)
        if isinstance(other, (int, Fraction)):
            return self == QRat.from_fraction(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(int(c) for c in self.num.coeffs()),
                               tuple(int(c) for c in self.den.coeffs()),
                               self.shift, self.scale))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    # conversion -------------------------------------------------------

    def num_terms(self):
        """Numerator as ``[(q-exponent, integer coefficient)]``, ascending."""
        out = []
        for i, c in enumerate(self.num.coeffs()):
            if c:
                out.append((Fraction(self.shift + i, self.scale), int(c)))
        return out

    def den_terms(self):
        out = []
        for i, c in enumerate(self.den.coeffs()):
            if c:
                out.append((Fraction(i, self.scale), int(c)))
        return out

    def to_sympy(self, q=None):
        import sympy
        if q is None:
            q = sympy.Symbol("q")
        num = sum(c * q ** e for e, c in self.num_terms())
        den = sum(c * q ** e for e, c in self.den_terms())
        return num / den

    def q_expansion(self, order):
        """Power series in q^(1/scale): ``{exponent: int}`` for exponents < order.

        Requires a denominator with constant term +-1, which holds for all
        products of factors (1 - q^m) that arise in practice.
        """
        d0 = int(self.den[0])
        if d0 not in (1, -1):
            raise DomainError("q-adic expansion needs a unit constant term")
        L = self.scale
        nmax = int((Fraction(order) - Fraction(self.shift, L)) * L) + 1
        if nmax <= 0:
            return {}
        num = [int(c) for c in self.num.coeffs()]
        den = [int(c) for c in self.den.coeffs()]
        out = []
        for k in range(nmax):
            s = num[k] if k < len(num) else 0
            for i in range(1, min(k, len(den) - 1) + 1):
                s -= den[i] * out[k - i]
            out.append(s * d0)
        res = {}
        for k, c in enumerate(out):
            e = Fraction(self.shift + k, L)
            if c and e < order:
                res[e] = c
        return res

    def _poly_text(self, terms):
        return "+".join(f"{c}*q^{_frac_text(e)}" for e, c in terms)

    def dump(self):
        """``num_poly / den_poly`` in the series dump monomial syntax."""
        if self.num.is_zero():
            return "0*q^0 / 1*q^0"
        return f"{self._poly_text(self.num_terms())} / {self._poly_text(self.den_terms())}"

    def __repr__(self):
        if self.num.is_zero():
            return "0"
        return str(self.to_sympy())

    __str__ = __repr__


def _frac_text(e):
    e = Fraction(e)
    return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"


ZERO = QRat(_ZERO_POLY, _ONE_POLY, 0, 1)
ONE = QRat(flint.fmpz_poly([1]))
Q = QRat.q_power(1)


def q_pow(e, coeff=1):
    return QRat.q_power(e, coeff)


def qint(k):
    """Symmetric q-integer (q^k - q^-k)/(q - q^-1)."""
    if not isinstance(k, int):
        raise TypeError("qint takes an integer")
    if k == 0:
        raise DomainError("[0] is not a unit; qint(0) is undefined")
    if k < 0:
        return -qint(-k)
    return _QINT_CACHE.get(k) or _QINT_CACHE.setdefault(
        k, QRat.laurent({e: 1 for e in range(-(k - 1), k, 2)}))


_QINT_CACHE = {}


# phases -------------------------------------------------------------------


def _reduce_phase(r):
    r = _as_fraction(r)
    return r - 2 * (r.numerator // (2 * r.denominator))


class Phase:
    """The formal root of unity (-1)^r, r in Q/2Z."""

    __slots__ = ("r",)

    def __init__(self, r=0):
        self.r = _reduce_phase(r)

    def __mul__(self, other):
        return Phase(self.r + other.r)

    def inv(self):
        return Phase(-self.r)

    def is_trivial(self):
        return self.r == 0

    def __eq__(self, other):
        return isinstance(other, Phase) and self.r == other.r

    def __hash__(self):
        return hash(("phase", self.r))

    def __repr__(self):
        return f"(-1)^({self.r})"


class Scalar:
    """A QRat times a phase (-1)^r.

    Integer parts of r are folded into the sign of the QRat, so a stored
    phase is either 0 or lies strictly between 0 and 1.  This makes the
    representation unique: (-1)^{3/2} x is stored as (-1)^{1/2} (-x).
    Sums are only defined between equal phases.
    """

    __slots__ = ("value", "r")

    def __init__(self, value=None, r=0):
        if value is None:
            value = ONE
        elif not isinstance(value, QRat):
            value = QRat.from_fraction(value)
        if isinstance(r, Phase):
            r = r.r
        if r:
            r = _reduce_phase(r)
            if r >= 1:
                value = -value
                r -= 1
        if value.num.is_zero():
            r = 0
        self.value = value
        self.r = r

    @staticmethod
    def _raw(value, r):
        s = Scalar.__new__(Scalar)
        s.value = value
        s.r = r
        return s

    @classmethod
    def q_power(cls, e, coeff=1, phase=0):
        return cls(QRat.q_power(e, coeff), phase)

    @property
    def phase(self):
        return Phase(self.r)

    def is_zero(self):
        return self.value.num.is_zero()

    def __bool__(self):
        return not self.value.num.is_zero()

    def __add__(self, other):
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if other.value.num.is_zero():
            return self
        if self.value.num.is_zero():
            return other
        if self.r != other.r:
            raise PhaseSumError(f"cannot add phases {self.r} and {other.r}")
        v = self.value + other.value
        return Scalar._raw(v, self.r if v else 0)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.value, self.r)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if not self.r and not other.r:
            return Scalar._raw(self.value * other.value, 0)
        return Scalar(self.value * other.value, self.r + other.r)

    __rmul__ = __mul__

    def inv(self):
        return Scalar(self.value.inv(), -self.r)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k):
        return Scalar(self.value ** k, self.r * k)

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self.r == other.r and self.value == other.value

    def __hash__(self):
        return hash((self.value, self.r))

    def dump(self):
        return f"(-1)^{_frac_text(self.r)} | {self.value.dump()}"

    def __repr__(self):
        if self.r:
            return f"(-1)^({self.r})*({self.value!r})"
        return repr(self.value)


def _coerce(x):
    if isinstance(x, QRat):
        return Scalar._raw(x, 0)
    if isinstance(x, (int, Fraction)):
        return Scalar._raw(QRat.from_fraction(x), 0)
    return None


def scalar(x):
    """Coerce an int, Fraction, QRat or Scalar to a Scalar."""
    if isinstance(x, Scalar):
        return x
    s = _coerce(x)
    if s is None:
        raise TypeError(f"cannot make a Scalar from {x!r}")
    return s


S_ZERO = Scalar(ZERO)
S_ONE = Scalar(ONE)


def scalar_arith(op, a, b=None):
    a = scalar(a)
    if op == "add":
        return a + scalar(b)
    if op == "mul":
        return a * scalar(b)
    if op == "inv":
        return a.inv()
    if op == "neg":
        return -a
    if op == "eq":
        return a == scalar(b)
    raise ValueError(f"unknown scalar operation {op!r}")


# series -------------------------------------------------------------------


class Series:
    """Truncated Laurent series ``sum c_e x^e + O(x^order)`` with rational e.

    ``order`` may be ``math.inf`` for exact (finite) expansions.
    """

    __slots__ = ("var", "terms", "order")

    def __init__(self, terms=None, order=inf, var="x"):
        self.var = var
        self.order = order if order == inf else Fraction(order)
        clean = {}
        for e, c in (terms or {}).items():
            e = _as_fraction(e)
            c = scalar(c)
            if c and e < self.order:
                clean[e] = c
        self.terms = clean

    @classmethod
    def monomial(cls, e, c=1, order=inf, var="x"):
        return cls({e: c}, order, var)

    def valuation(self):
        if not self.terms:
            return self.order
        return min(self.terms)

    def coeff(self, e):
        e = _as_fraction(e)
        if e >= self.order:
            raise DomainError(f"coefficient of x^{e} lies beyond O(x^{self.order})")
        return self.terms.get(e, S_ZERO)

    def _check(self, other):
        if not isinstance(other, Series):
            raise TypeError("series arithmetic needs two Series")
        if other.var != self.var:
            raise ValueError(f"variables differ: {self.var} vs {other.var}")

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series({0: scalar(other)}, var=self.var)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return Series(terms, min(self.order, other.order), self.var)

    __radd__ = __add__

    def __neg__(self):
        return Series({e: -c for e, c in self.terms.items()}, self.order, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Series):
            c = scalar(other)
            return Series({e: v * c for e, v in self.terms.items()}, self.order, self.var)
        self._check(other)
        order = min(self.order + other.valuation(), other.order + self.valuation())
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e < order:
                    p = c1 * c2
                    terms[e] = terms[e] + p if e in terms else p
        return Series(terms, order, self.var)

    __rmul__ = __mul__

    def shift(self, e):
        """Multiply by x^e."""
        e = _as_fraction(e)
        return Series({k + e: c for k, c in self.terms.items()}, self.order + e, self.var)

    def _step(self):
        den = 1
        for e in self.terms:
            den = _lcm(den, e.denominator)
        if self.order != inf:
            den = _lcm(den, self.order.denominator)
        return Fraction(1, den)

    def inv(self, order=None):
        """Multiplicative inverse; exact series need an explicit ``order``."""
        if not self.terms:
            raise DomainError("inverse of a series with no known nonzero term")
        v = self.valuation()
        lead = self.terms[v].inv()
        rel = self.order - v
        if rel == inf:
            if order is None:
                if len(self.terms) == 1:
                    return Series({-v: lead}, inf, self.var)
                raise DomainError("inverse of an exact series needs an order")
            rel = Fraction(order) + v
        elif order is not None:
            rel = min(rel, Fraction(order) + v)
        step = self._step()
        nsteps = int(rel / step)
        if nsteps * step < rel:
            nsteps += 1
        u = {int((e - v) / step): c * lead for e, c in self.terms.items()}
        out = [S_ONE]
        for k in range(1, nsteps):
            s = S_ZERO
            for i, c in u.items():
                if 0 < i <= k:
                    s = s + c * out[k - i]
            out.append(-s)
        terms = {k * step - v: c * lead for k, c in enumerate(out) if c}
        return Series(terms, rel - v, self.var)

    def truncate(self, order):
        return Series(self.terms, min(self.order, Fraction(order)), self.var)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.var == other.var and self.order == other.order
                and self.terms == other.terms)

    def agrees(self, other, order=None):
        """Equal coefficients below ``order`` (default: both known orders)."""
        o = min(self.order, other.order)
        if order is not None:
            o = min(o, Fraction(order))
        keys = {e for e in self.terms if e < o} | {e for e in other.terms if e < o}
        return all(self.terms.get(e, S_ZERO) == other.terms.get(e, S_ZERO) for e in keys)

    def dump(self):
        lines = []
        for e in sorted(self.terms):
            c = self.terms[e]
            lines.append(f"{e.numerator}/{e.denominator} | (-1)^{Fraction(c.r).numerator}/"
                         f"{Fraction(c.r).denominator} | {c.value.dump()}")
        o = "inf" if self.order == inf else _frac_text(self.order)
        lines.append(f"O({self.var}^{o})")
        return "\n".join(lines)

    def __repr__(self):
        parts = [f"({self.terms[e]!r})*{self.var}^{e}" for e in sorted(self.terms)]
        if self.order != inf:
            parts.append(f"O({self.var}^{self.order})")
        return " + ".join(parts) if parts else "0"


def series_arith(op, A, B=None):
    if op == "add":
        return A + B
    if op == "mul":
        return A * B
    if op == "inv":
        return A.inv()
    raise ValueError(f"unknown series operation {op!r}")


def _poly_dict(p, var_scalar=False):
    """Normalize a polynomial given as {exp: coeff} to {int: Scalar}."""
    out = {}
    for e, c in p.items():
        e = _as_fraction(e)
        if e.denominator != 1:
            raise ValueError("rational functions take integer exponents")
        c = scalar(c)
        if c:
            out[int(e)] = c
    return out


def expand_rational(num, den, direction="at_zero", order=4, var="x"):
    """Laurent expansion of num(x)/den(x).

    ``num`` and ``den`` map integer exponents to coefficients.  At zero the
    result is a series in ``var``; at infinity it is a series in ``1/var``,
    i.e. the expansion of num(1/y)/den(1/y) in y.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    num, den = _poly_dict(num), _poly_dict(den)
    if not den:
        raise DomainError("zero denominator")
    if direction == "at_infinity":
        num = {-e: c for e, c in num.items()}
        den = {-e: c for e, c in den.items()}
        var = f"1/{var}"
    elif direction != "at_zero":
        raise ValueError(f"unknown direction {direction!r}")
    if not num:
        return Series({}, order, var)
    vd, vn = min(den), min(num)
    base = vn - vd
    coeffs = rational_coefficients(
        {e - vn: c for e, c in num.items()}, {e - vd: c for e, c in den.items()},
        order - base)
    return Series({base + k: c for k, c in enumerate(coeffs)}, order, var)


def rational_coefficients(num, den, n):
    """First n Taylor coefficients of num/den with den[0] != 0 (integer exponents >= 0)."""
    d0 = den.get(0)
    if d0 is None or not d0:
        raise DomainError("pole at the expansion point")
    d0i = d0.inv()
    out = []
    dens = sorted((e, c) for e, c in den.items() if e > 0)
    for k in range(max(n, 0)):
        s = num.get(k, S_ZERO)
        for e, c in dens:
            if e > k:
                break
            s = s - c * out[k - e]
        out.append(s * d0i)
    return out


class RationalCoefficients:
    """Lazily grown Taylor coefficients of a rational function at 0."""

    def __init__(self, num, den):
        self.num = _poly_dict(num)
        self.den = _poly_dict(den)
        if min(self.num, default=0) < 0 or min(self.den) != 0:
            raise DomainError("pole at the expansion point")
        self._d0i = self.den[0].inv()
        self._dens = sorted((e, c) for e, c in self.den.items() if e > 0)
        self._c = []

    def __call__(self, k):
        if k < 0:
            return S_ZERO
        c = self._c
        while len(c) <= k:
            m = len(c)
            s = self.num.get(m, S_ZERO)
            for e, d in self._dens:
                if e > m:
                    break
                s = s - d * c[m - e]
            c.append(s * self._d0i)
        return c[k]


def pochhammer_series(a, p, order, var="x", inverse=False):
    """Expansion of (a*x; p)_inf, or its reciprocal, in x up to O(x^order).

    Uses the exact Euler identities

        (ax;p)_inf   = sum_k (-1)^k p^{k(k-1)/2} a^k x^k / (p;p)_k,
        1/(ax;p)_inf = sum_k a^k x^k / (p;p)_k,

    which hold as formal power series in x over Q(q) (|p| < 1 q-adically).
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    a = scalar(a)
    p = p.value if isinstance(p, Scalar) else p
    if not isinstance(p, QRat) or not p.is_monomial() or p.shift <= 0 or not p.num.is_one():
        raise ValueError("the modulus must be a positive power q^m")
    terms = {}
    pp = ONE
    ak = S_ONE
    for k in range(int(order)):
        if k:
            pp = pp * (ONE - p ** k)
            ak = ak * a
        if not ak:
            break
        if inverse:
            c = ak * Scalar(pp.inv())
        else:
            c = ak * Scalar(p ** (k * (k - 1) // 2) / pp)
            if k % 2:
                c = -c
        terms[k] = c
    return Series(terms, order, var)


def pochhammer_product(a, p, factors, order, var="x", inverse=False):
    """Finite product prod_{m<factors}(1 - a p^m x), expanded to O(x^order).

    Oracle for pochhammer_series: the two agree q-adically up to the first
    omitted factor.
    """
    a = scalar(a)
    one = Series({0: S_ONE}, order, var)
    prod = one
    for m in range(factors):
        f = Series({0: S_ONE, 1: -a * Scalar(p ** m)}, order, var)
        prod = prod * (f.inv(order) if inverse else f)
    return prod
