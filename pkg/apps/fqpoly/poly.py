import math

from apps.ffield.field import FieldElem

from .dense import (
    PolynomialError,
    gf_add,
    gf_deriv,
    gf_discriminant,
    gf_divmod,
    gf_ddf_degrees,
    gf_eval,
    gf_gcd,
    gf_is_irreducible,
    gf_is_squarefree,
    gf_monic,
    gf_mul,
    gf_neg,
    gf_powmod,
    gf_radical,
    gf_resultant,
    gf_strip,
    gf_sub,
    gf_taylor_shift,
)

# Degree of the zero polynomial. Compares below every integer degree and
# absorbs addition, so deg(f*g) = deg f + deg g holds for zero too.
DEG_ZERO = -math.inf


class FieldMismatchError(PolynomialError):
    """Operands live over different fields."""


class Poly:
    """Immutable dense univariate polynomial over a Field.

    ``coeffs[i]`` is the field code of the coefficient of x^i. The variable
    name is cosmetic and only chosen when formatting.
    """

    __slots__ = ('field', 'coeffs')

    def __init__(self, field, coeffs=()):
        self.field = field
        self.coeffs = tuple(gf_strip(list(coeffs)))

    @classmethod
    def from_ints(cls, field, ints):
        """Coefficients given as integers, reduced into the prime subfield."""
        return cls(field, [field.reduce_int(c) for c in ints])

    @classmethod
    def from_elems(cls, field, elems):
        return cls(field, [field.element(e).code for e in elems])

    @classmethod
    def constant(cls, field, value):
        return cls(field, [field.element(value).code])

    @classmethod
    def t(cls, field):
        return cls(field, [0, 1])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def lc(self):
        return FieldElem(self.field, self.coeffs[-1] if self.coeffs else 0)

    @property
    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def coeff(self, i):
        return FieldElem(self.field, self.coeffs[i] if 0 <= i < len(self.coeffs) else 0)

    def monic(self):
        return Poly(self.field, gf_monic(self.field, list(self.coeffs)))

    def derivative(self):
        return Poly(self.field, gf_deriv(self.field, list(self.coeffs)))

    def shift(self, c):
        """f(t + c)."""
        code = self.field.element(c).code
        return Poly(self.field, gf_taylor_shift(self.field, list(self.coeffs), code))

    def __call__(self, x):
        code = self.field.element(x).code
        return FieldElem(self.field, gf_eval(self.field, self.coeffs, code))

    def _coerce(self, other):
        if isinstance(other, Poly):
            _same_field(self, other)
            return list(other.coeffs)
        if isinstance(other, (int, FieldElem)):
            return gf_strip([self.field.element(other).code])
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Poly(self.field, gf_add(self.field, list(self.coeffs), b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, gf_neg(self.field, list(self.coeffs)))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Poly(self.field, gf_sub(self.field, list(self.coeffs), b))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Poly(self.field, gf_mul(self.field, list(self.coeffs), b))

    __rmul__ = __mul__

    def __divmod__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        quo, rem = gf_divmod(self.field, list(self.coeffs), b)
        return Poly(self.field, quo), Poly(self.field, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e):
        result = Poly(self.field, [1])
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, FieldElem)):
            return self.coeffs == tuple(gf_strip([self.field.element(other).code]))
        return NotImplemented

    def __hash__(self):
        return hash((self.field.label, self.coeffs))

    def __repr__(self):
        return f"Poly({self.field.label}, {self})"

    def __str__(self):
        from .parsing import poly_format
        return poly_format(self)


def _same_field(f, g):
    if f.field is not g.field:
        raise FieldMismatchError(f"polynomials over {f.field} and {g.field}")


def poly_gcd(f, g):
    _same_field(f, g)
    return Poly(f.field, gf_gcd(f.field, f.coeffs, g.coeffs))


def poly_powmod(base, e, modulus):
    _same_field(base, modulus)
    if e < 0:
        raise PolynomialError("negative exponent")
    if modulus.degree < 1:
        raise PolynomialError("modulus must have degree >= 1")
    return Poly(base.field, gf_powmod(base.field, list(base.coeffs), e, list(modulus.coeffs)))


def resultant(f, g):
    _same_field(f, g)
    return FieldElem(f.field, gf_resultant(f.field, f.coeffs, g.coeffs))


def discriminant(f):
    return FieldElem(f.field, gf_discriminant(f.field, list(f.coeffs)))


def is_squarefree(f):
    return gf_is_squarefree(f.field, list(f.coeffs))


def is_irreducible(f):
    if f.is_zero:
        raise PolynomialError("irreducibility of the zero polynomial")
    return gf_is_irreducible(f.field, list(f.coeffs))


def radical(f):
    return Poly(f.field, gf_radical(f.field, list(f.coeffs)))


def factor_degrees(f, radical_first=False):
    """Irreducible factor degrees of a square-free polynomial, ascending.

    With ``radical_first`` a non-square-free input is replaced by its radical;
    otherwise it is rejected.
    """
    if f.degree < 1:
        raise PolynomialError("factor degrees of a constant polynomial")
    if not is_squarefree(f):
        if not radical_first:
            raise PolynomialError(f"{f} is not square-free")
        f = radical(f)
    return gf_ddf_degrees(f.field, list(f.coeffs))
