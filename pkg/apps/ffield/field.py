"""
Finite fields F_p and F_{p^k}.

Elements are handled in two layers. Hot loops (polynomial arithmetic,
exhaustive enumeration) work on integer *codes*: the residue itself for a
prime field, and for an extension the base-p integer sum(c_i * p^i) of the
coefficient vector over the defining modulus. Code order is therefore the
lexicographic order of (c_{k-1}, ..., c_0), which is the canonical residue
order used everywhere for ranking. ``FieldElem`` wraps a code for the public
API.
"""
import functools
import logging
import re
from dataclasses import dataclass

from django.conf import settings
from sympy import factorint, isprime

logger = logging.getLogger(__name__)

WORD_LIMIT = 2**31

LABEL_RE = re.compile(r'^\s*(\d+)\s*(?:\^\s*(\d+)\s*)?$')


class FieldError(ValueError):
    """Invalid field construction or an undefined field operation."""


def _table_limit():
    return getattr(settings, 'HLLAB_TABLE_LIMIT', 2**20)


class Field:
    """The finite field with q = p^k elements.

    Build instances with :func:`field_make`; the constructor does no checks.
    """

    __slots__ = ('p', 'k', 'q', 'modulus', '_exp', '_log', '_zech', '_chi', '__weakref__')

    def __init__(self, p, k, modulus):
        self.p = p
        self.k = k
        self.q = p**k
        # Coefficients over F_p, low degree first, monic; None for prime fields.
        self.modulus = modulus
        self._exp = None
        self._log = None
        self._zech = None
        self._chi = None

    def __reduce__(self):
        return field_make, (self.p, self.k)

    def __repr__(self):
        return f"Field({self.label})"

    def __str__(self):
        return f"F_{self.label}"

    @property
    def label(self):
        return str(self.p) if self.k == 1 else f"{self.p}^{self.k}"

    @property
    def is_prime_field(self):
        return self.k == 1

    @property
    def is_odd(self):
        return self.p != 2

    # -- codes -----------------------------------------------------------

    def digits(self, a):
        """Coefficient vector (c_0, ..., c_{k-1}) of code ``a``."""
        p = self.p
        out = []
        for _ in range(self.k):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_digits(self, digits):
        code = 0
        for c in reversed(digits):
            code = code * self.p + c
        return code

    def reduce_int(self, n):
        """Image of the integer ``n`` in the prime subfield, as a code."""
        return n % self.p

    def add(self, a, b):
        if self.k == 1:
            s = a + b
            return s - self.p if s >= self.p else s
        if not a:
            return b
        if not b:
            return a
        if self._ensure_tables():
            log, q1 = self._log, self.q - 1
            i = log[a]
            z = self._zech[(log[b] - i) % q1]
            return 0 if z < 0 else self._exp[(i + z) % q1]
        p = self.p
        return self.from_digits([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        if self.k == 1:
            return (self.p - a) % self.p
        p = self.p
        return self.from_digits([(p - x) % p for x in self.digits(a)])

    def sub(self, a, b):
        if self.k == 1:
            d = a - b
            return d + self.p if d < 0 else d
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.k == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        if self._ensure_tables():
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_digits(a, b)

    def inv(self, a):
        if not a:
            raise FieldError(f"zero has no inverse in {self}")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self._ensure_tables():
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        """a^e by square-and-multiply; 0^0 is 1."""
        if e < 0:
            raise FieldError("negative exponent")
        if e == 0:
            return 1
        if not a:
            return 0
        if self.k == 1:
            return pow(a, e, self.p)
        if self._ensure_tables():
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._slow_pow(a, e)

    def character(self, a):
        """Quadratic character of code ``a``: 0, +1 or -1."""
        if not self.is_odd:
            raise FieldError(f"quadratic character undefined in even characteristic ({self})")
        if not a:
            return 0
        if self._chi is not None:
            return self._chi[a]
        if self.k == 1:
            return 1 if pow(a, (self.p - 1) // 2, self.p) == 1 else -1
        if self._ensure_tables():
            return -1 if self._log[a] & 1 else 1
        v = self.pow(a, (self.q - 1) // 2)
        return 1 if v == 1 else -1

    def character_table(self):
        """List ``chi`` with chi[a] the quadratic character of code ``a``.

        Built once per field; only for q within the table limit.
        """
        if self._chi is None:
            if not self.is_odd:
                raise FieldError(f"quadratic character undefined in even characteristic ({self})")
            if self.q > _table_limit():
                raise FieldError(f"{self} is beyond the table limit {_table_limit()}")
            chi = [-1] * self.q
            chi[0] = 0
            for x in range(1, self.q):
                chi[self.mul(x, x)] = 1
            self._chi = chi
        return self._chi

    # -- extension-field internals ---------------------------------------

    def _mul_digits(self, a, b):
        p, k = self.p, self.k
        x, y = self.digits(a), self.digits(b)
        prod = [0] * (2 * k - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        mod = self.modulus
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                for i in range(k):
                    prod[d - k + i] -= c * mod[i]
            prod[d] = 0
        return self.from_digits([c % p for c in prod[:k]])

    def _ensure_tables(self):
        if self._exp is not None:
            return True
        if self.q > _table_limit():
            return False
        self._build_tables()
        return True

    def _build_tables(self):
        q1 = self.q - 1
        primes = list(factorint(q1))
        gen = None
        for g in range(2, self.q):
            if all(self._slow_pow(g, q1 // ell) != 1 for ell in primes):
                gen = g
                break
        exp = [0] * q1
        log = [0] * self.q
        x = 1
        for i in range(q1):
            exp[i] = x
            log[x] = i
            x = self._mul_digits(x, gen)
        # zech[m] = log(1 + g^m), or -1 when 1 + g^m = 0
        p = self.p
        one = self.digits(1)
        zech = [0] * q1
        for m in range(q1):
            s = self.from_digits([(u + v) % p for u, v in zip(one, self.digits(exp[m]))])
            zech[m] = log[s] if s else -1
        self._exp, self._log, self._zech = exp, log, zech
        logger.debug(f"Built log tables for {self} with generator code {gen}")

    def _slow_pow(self, a, e):
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_digits(result, base)
            e >>= 1
            if e:
                base = self._mul_digits(base, base)
        return result

    # -- public element API ----------------------------------------------

    def element(self, value):
        """FieldElem from an int (reduced mod p into the prime subfield for
        extensions) or a coefficient sequence (c_0, ..., c_{k-1})."""
        if isinstance(value, FieldElem):
            if value.field is not self:
                raise FieldError(f"element of {value.field} used in {self}")
            return value
        if isinstance(value, int):
            return FieldElem(self, self.reduce_int(value))
        coeffs = list(value)
        if len(coeffs) > self.k:
            raise FieldError(f"{len(coeffs)} coordinates given for {self}")
        coeffs += [0] * (self.k - len(coeffs))
        return FieldElem(self, self.from_digits([c % self.p for c in coeffs]))

    def from_code(self, code):
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} out of range for {self}")
        return FieldElem(self, code)

    @property
    def zero(self):
        return FieldElem(self, 0)

    @property
    def one(self):
        return FieldElem(self, 1)

    def elements(self):
        for code in range(self.q):
            yield FieldElem(self, code)

    def format_code(self, code):
        """Text form of a coefficient: the residue, or "(c_{k-1},...,c_0)".

        Prime-subfield elements of an extension print as plain residues.
        """
        if code < self.p:
            return str(code)
        return '(' + ','.join(str(c) for c in reversed(self.digits(code))) + ')'


@dataclass(frozen=True, slots=True)
class FieldElem:
    field: Field
    code: int

    @property
    def repr(self):
        """Canonical residue: an int for prime fields, else (c_0, ..., c_{k-1})."""
        if self.field.k == 1:
            return self.code
        return tuple(self.field.digits(self.code))

    def _other(self, other):
        if isinstance(other, int):
            return self.field.reduce_int(other)
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise FieldError(f"cannot combine elements of {self.field} and {other.field}")
            return other.code
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.sub(b, self.code))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.div(self.code, b))

    def __pow__(self, e):
        return field_pow(self, e)

    def __bool__(self):
        return self.code != 0

    def __str__(self):
        return self.field.format_code(self.code)


def _check_word_range(p, k):
    if not isinstance(p, int) or not isinstance(k, int):
        raise FieldError("p and k must be integers")
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    if p < 2 or not isprime(p):
        raise FieldError(f"{p} is not prime")
    if p**k > WORD_LIMIT:
        raise FieldError(f"{p}^{k} exceeds the supported range 2^31")


def _least_irreducible(p, k):
    """Lexicographically least monic irreducible of degree k over F_p,
    ranking (c_{k-1}, ..., c_0) as a base-p integer."""
    from apps.fqpoly.poly import Poly, is_irreducible

    base = field_make(p, 1)
    for rank in range(p**k):
        low = []
        r = rank
        for _ in range(k):
            r, c = divmod(r, p)
            low.append(c)
        candidate = low + [1]
        if is_irreducible(Poly(base, candidate)):
            return tuple(candidate)
    raise FieldError(f"no irreducible of degree {k} over F_{p}")


def field_make(p, k=1):
    """The field F_{p^k}; identical (p, k) always give the same object and modulus."""
    return _field_make(p, k)


@functools.cache
def _field_make(p, k):
    _check_word_range(p, k)
    if k == 1:
        return Field(p, 1, None)
    modulus = _least_irreducible(p, k)
    logger.debug(f"Constructed F_{p}^{k} with modulus {modulus}")
    return Field(p, k, modulus)


def field_parse(label):
    """Field from a label "p" or "p^k"."""
    m = LABEL_RE.match(label or '')
    if not m:
        raise FieldError(f"malformed field label {label!r}; expected 'p' or 'p^k'")
    p = int(m.group(1))
    k = int(m.group(2)) if m.group(2) else 1
    return field_make(p, k)


def field_from_order(q):
    """Field with q elements, q a prime power."""
    factors = factorint(q) if q > 1 else {}
    if len(factors) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, k), = factors.items()
    return field_make(p, k)


def field_pow(x, e):
    """x^e by square-and-multiply; 0^0 is 1."""
    return FieldElem(x.field, x.field.pow(x.code, e))


def quadratic_character(x):
    """0 for zero, +1 for nonzero squares, -1 otherwise (odd q only)."""
    return x.field.character(x.code)
