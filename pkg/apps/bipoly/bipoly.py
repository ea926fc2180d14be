"""
Polynomials in t whose coefficients are polynomials in U over F_q.

Only what the discriminant lemma needs: the family
t^n + u_1 t^{n-1} + ... + u_{n-1} t + U + a(t) with the last coefficient left
free, and its discriminant in t as a polynomial in U.
"""
import logging

from apps.fqpoly.dense import gf_add, gf_divmod, gf_eval, gf_mul, gf_scale, gf_sub
from apps.fqpoly.parsing import poly_format
from apps.fqpoly.poly import Poly

logger = logging.getLogger(__name__)


class BiPolyError(ValueError):
    """Invalid family specialisation or discriminant request."""


class BiPoly:
    """``coeffs_in_t[i]`` is the Poly in U multiplying t^i."""

    __slots__ = ('field', 'coeffs_in_t')

    def __init__(self, field, coeffs_in_t):
        coeffs = list(coeffs_in_t)
        while coeffs and coeffs[-1].is_zero:
            coeffs.pop()
        self.field = field
        self.coeffs_in_t = tuple(coeffs)

    @property
    def degree_t(self):
        return len(self.coeffs_in_t) - 1

    @property
    def is_monic_t(self):
        return bool(self.coeffs_in_t) and self.coeffs_in_t[-1].coeffs == (1,)

    def __eq__(self, other):
        return (isinstance(other, BiPoly) and self.field is other.field
                and self.coeffs_in_t == other.coeffs_in_t)

    def __hash__(self):
        return hash(self.coeffs_in_t)

    def __str__(self):
        terms = []
        for i in range(self.degree_t, -1, -1):
            c = self.coeffs_in_t[i]
            if c.is_zero:
                continue
            text = poly_format(c, var='U')
            if c.degree > 0:
                text = f"({text})"
            if i == 0:
                terms.append(text)
            else:
                power = 't' if i == 1 else f"t^{i}"
                terms.append(power if c.coeffs == (1,) else f"{text}*{power}")
        return '+'.join(terms) or '0'

    def __repr__(self):
        return f"BiPoly({self.field.label}, {self})"


def specialize_family(u, a, n):
    """t^n + u_1 t^{n-1} + ... + u_{n-1} t + U + a(t)."""
    field = a.field
    u = [field.element(x).code for x in u]
    if len(u) != n - 1:
        raise BiPolyError(f"expected {n - 1} specialised coefficients, got {len(u)}")
    if a.degree >= n:
        raise BiPolyError(f"offset {a} has degree >= {n}")
    # family coefficient of t^i is u_{n-i} for 1 <= i <= n-1
    rows = [[0] for _ in range(n + 1)]
    rows[n] = [1]
    rows[0] = [0, 1]
    for i in range(1, n):
        rows[i] = [u[n - 1 - i]]
    for i, c in enumerate(a.coeffs):
        rows[i] = gf_add(field, rows[i], [c] if c else [])
    return BiPoly(field, [Poly(field, r) for r in rows])


def evaluate_at_U(F, c):
    """The polynomial in t obtained by setting U := c."""
    field = F.field
    code = field.element(c).code
    return Poly(field, [gf_eval(field, p.coeffs, code) for p in F.coeffs_in_t])


def _bareiss_det(field, M):
    """Determinant of a square matrix over F_q[U] by fraction-free elimination."""
    N = len(M)
    sign = 1
    prev = [1]
    for k in range(N - 1):
        if not M[k][k]:
            for i in range(k + 1, N):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return []
        pivot = M[k][k]
        for i in range(k + 1, N):
            for j in range(k + 1, N):
                num = gf_sub(field, gf_mul(field, M[i][j], pivot), gf_mul(field, M[i][k], M[k][j]))
                quo, rem = gf_divmod(field, num, prev)
                if rem:
                    raise BiPolyError("inexact division in Bareiss elimination")
                M[i][j] = quo
            M[i][k] = []
        prev = pivot
    det = M[N - 1][N - 1]
    return gf_scale(field, det, field.neg(1)) if sign < 0 else det


def disc_in_t(F):
    """Discriminant in t of a monic BiPoly, as a Poly in U."""
    n = F.degree_t
    if n < 2:
        raise BiPolyError(f"degree in t must be >= 2, got {n}")
    if not F.is_monic_t:
        raise BiPolyError(f"{F} is not monic in t")
    field = F.field
    f = [list(c.coeffs) for c in F.coeffs_in_t]
    df = [gf_scale(field, f[i], field.reduce_int(i)) for i in range(1, n + 1)]
    size = 2 * n - 1
    M = [[[] for _ in range(size)] for _ in range(size)]
    for r in range(n - 1):
        for j in range(n + 1):
            M[r][r + j] = list(f[n - j])
    for r in range(n):
        for j in range(n):
            M[n - 1 + r][r + j] = list(df[n - 1 - j])
    det = _bareiss_det(field, M)
    if (n * (n - 1) // 2) % 2:
        det = gf_scale(field, det, field.neg(1))
    return Poly(field, det)
