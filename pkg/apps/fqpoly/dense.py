"""
Dense polynomial kernels over a Field.

Polynomials are lists of field codes, lowest degree first, with no trailing
zeros; ``[]`` is the zero polynomial. Prime fields take inline integer
paths, everything else goes through the Field code API. These functions are
what the counting loops call directly; ``apps.fqpoly.poly`` wraps them.
"""
import functools

from sympy import primefactors


class PolynomialError(ValueError):
    """Invalid polynomial argument (zero/constant where forbidden, etc.)."""


def gf_strip(a):
    while a and not a[-1]:
        a.pop()
    return a


def gf_degree(a):
    return len(a) - 1


def gf_add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    if F.k == 1:
        p = F.p
        out = [(x + y) % p for x, y in zip(a, b)]
    else:
        add = F.add
        out = [add(x, y) for x, y in zip(a, b)]
    out.extend(a[len(b):])
    return gf_strip(out)


def gf_neg(F, a):
    if F.k == 1:
        p = F.p
        return [(p - x) % p for x in a]
    return [F.neg(x) for x in a]


def gf_sub(F, a, b):
    return gf_add(F, a, gf_neg(F, b))


def gf_scale(F, a, c):
    if not c:
        return []
    if F.k == 1:
        p = F.p
        return [x * c % p for x in a]
    return [F.mul(x, c) for x in a]


def gf_mul(F, a, b):
    if not a or not b:
        return []
    if F.k == 1:
        p = F.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return gf_strip([c % p for c in out])
    add, mul = F.add, F.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return gf_strip(out)


def gf_divmod(F, a, b):
    if not b:
        raise PolynomialError("division by the zero polynomial")
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], list(a)
    r = list(a)
    inv = F.inv(b[-1])
    quo = [0] * (len(a) - db)
    if F.k == 1:
        p = F.p
        for i in range(len(a) - 1 - db, -1, -1):
            c = r[i + db] * inv % p
            if c:
                quo[i] = c
                for j in range(db + 1):
                    r[i + j] = (r[i + j] - c * b[j]) % p
    else:
        sub, mul = F.sub, F.mul
        for i in range(len(a) - 1 - db, -1, -1):
            c = mul(r[i + db], inv)
            if c:
                quo[i] = c
                for j in range(db + 1):
                    r[i + j] = sub(r[i + j], mul(c, b[j]))
    return gf_strip(quo), gf_strip(r[:db])


def gf_rem(F, a, b):
    if not b:
        raise PolynomialError("division by the zero polynomial")
    db = len(b) - 1
    if len(a) - 1 < db:
        return list(a)
    r = list(a)
    if F.k == 1:
        p = F.p
        inv = pow(b[-1], p - 2, p) if b[-1] != 1 else 1
        for i in range(len(a) - 1, db - 1, -1):
            c = r[i] * inv % p
            if c:
                base = i - db
                for j in range(db):
                    r[base + j] = (r[base + j] - c * b[j]) % p
            r[i] = 0
    else:
        inv = F.inv(b[-1])
        sub, mul = F.sub, F.mul
        for i in range(len(a) - 1, db - 1, -1):
            c = mul(r[i], inv)
            if c:
                base = i - db
                for j in range(db):
                    r[base + j] = sub(r[base + j], mul(c, b[j]))
            r[i] = 0
    return gf_strip(r[:db])


def gf_monic(F, a):
    if not a or a[-1] == 1:
        return list(a)
    return gf_scale(F, a, F.inv(a[-1]))


def gf_gcd(F, a, b):
    """Monic gcd; ``[]`` when both inputs are zero."""
    a, b = list(a), list(b)
    while b:
        a, b = b, gf_rem(F, a, b)
    return gf_monic(F, a)


def gf_powmod(F, base, e, m):
    if len(m) < 2:
        raise PolynomialError("modulus must have degree >= 1")
    result = [1]
    base = gf_rem(F, base, m)
    while e:
        if e & 1:
            result = gf_rem(F, gf_mul(F, result, base), m)
        e >>= 1
        if e:
            base = gf_rem(F, gf_mul(F, base, base), m)
    return result


def gf_deriv(F, a):
    if F.k == 1:
        p = F.p
        return gf_strip([i * a[i] % p for i in range(1, len(a))])
    return gf_strip([F.mul(F.reduce_int(i), a[i]) for i in range(1, len(a))])


def gf_eval(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def gf_taylor_shift(F, a, c):
    """a(t + c)."""
    out = []
    lin = gf_strip([c, 1])
    for coeff in reversed(a):
        out = gf_add(F, gf_mul(F, out, lin), [coeff] if coeff else [])
    return out


def gf_pth_root(F, a):
    """g with g^p = a, for a whose derivative vanishes."""
    p = F.p
    e = F.q // p
    return gf_strip([F.pow(a[i], e) for i in range(0, len(a), p)])


def gf_is_squarefree(F, a):
    if not a:
        raise PolynomialError("square-free test of the zero polynomial")
    if len(a) == 1:
        return True
    d = gf_deriv(F, a)
    if not d:
        return False
    return len(gf_gcd(F, a, d)) == 1


def gf_radical(F, a):
    """Product of the distinct monic irreducible factors of a."""
    if not a:
        raise PolynomialError("radical of the zero polynomial")
    a = gf_monic(F, a)
    if len(a) == 1:
        return [1]
    d = gf_deriv(F, a)
    if not d:
        return gf_radical(F, gf_pth_root(F, a))
    g = gf_gcd(F, a, d)
    w = gf_divmod(F, a, g)[0]
    if len(g) == 1:
        return w
    rg = gf_radical(F, g)
    return gf_divmod(F, gf_mul(F, w, rg), gf_gcd(F, w, rg))[0]


@functools.lru_cache(maxsize=None)
def _rabin_checkpoints(n):
    return frozenset({n // ell for ell in primefactors(n)} | {1})


def gf_is_irreducible(F, f):
    """Rabin's test: t^{q^n} = t mod f and gcd(t^{q^{n/l}} - t, f) = 1 for
    every prime l | n. A root check at d = 1 rejects early; it is implied by
    the criterion and never changes the verdict."""
    n = len(f) - 1
    if n < 1:
        raise PolynomialError("irreducibility of a constant polynomial")
    if n == 1:
        return True
    f = gf_monic(F, f)
    q = F.q
    t = [0, 1]
    checkpoints = _rabin_checkpoints(n)
    h = t
    for d in range(1, n + 1):
        h = gf_powmod(F, h, q, f)
        if d in checkpoints and d < n:
            if len(gf_gcd(F, f, gf_sub(F, h, t))) > 1:
                return False
    return h == t


def gf_ddf_degrees(F, f):
    """Degrees of the irreducible factors of a monic square-free f, ascending."""
    g = gf_monic(F, f)
    q = F.q
    t = [0, 1]
    degrees = []
    h = t
    d = 1
    while 2 * d <= len(g) - 1:
        h = gf_powmod(F, h, q, g)
        gd = gf_gcd(F, g, gf_sub(F, h, t))
        if len(gd) > 1:
            degrees.extend([d] * ((len(gd) - 1) // d))
            g = gf_divmod(F, g, gd)[0]
            h = gf_rem(F, h, g) if len(g) > 1 else []
        d += 1
    if len(g) > 1:
        degrees.append(len(g) - 1)
    return tuple(degrees)


def gf_resultant(F, a, b):
    """Resultant w.r.t. the actual degrees, by the Euclidean recurrence
    Res(a, b) = (-1)^{deg a deg b} lc(b)^{deg a - deg r} Res(b, r)."""
    if not a or not b:
        raise PolynomialError("resultant with the zero polynomial")
    a, b = list(a), list(b)
    res = 1
    while True:
        m, n = len(a) - 1, len(b) - 1
        if m == 0:
            return F.mul(res, F.pow(a[0], n))
        if n == 0:
            return F.mul(res, F.pow(b[0], m))
        r = gf_rem(F, a, b)
        if not r:
            return 0
        if m * n % 2:
            res = F.neg(res)
        res = F.mul(res, F.pow(b[-1], m - (len(r) - 1)))
        a, b = b, r


def gf_discriminant(F, f):
    """(-1)^{n(n-1)/2} Res(f, f') of the monic normalisation of f."""
    n = len(f) - 1
    if n < 1:
        raise PolynomialError("discriminant of a constant polynomial")
    f = gf_monic(F, f)
    if n == 1:
        return 1
    d = gf_deriv(F, f)
    if not d:
        return 0
    res = gf_resultant(F, f, d)
    if (n * (n - 1) // 2) % 2:
        res = F.neg(res)
    return res


def gf_sqf_list(F, f):
    """Square-free decomposition of the monic normalisation of f.

    Returns [(g, e), ...] with g monic square-free, pairwise coprime, and
    f = lc * prod g^e.
    """
    if not f:
        raise PolynomialError("square-free decomposition of the zero polynomial")
    f = gf_monic(F, f)
    factors = []
    mult = 1
    while len(f) > 1:
        d = gf_deriv(F, f)
        if d:
            g = gf_gcd(F, f, d)
            h = gf_divmod(F, f, g)[0]
            i = 1
            while len(h) > 1:
                G = gf_gcd(F, g, h)
                H = gf_divmod(F, h, G)[0]
                if len(H) > 1:
                    factors.append((H, i * mult))
                g = gf_divmod(F, g, G)[0]
                h = G
                i += 1
            f = g
        if len(f) > 1:
            f = gf_pth_root(F, f)
            mult *= F.p
    return factors


def gf_odd_part(F, f):
    """Product of the irreducible factors of odd multiplicity in f, monic."""
    out = [1]
    for g, e in gf_sqf_list(F, f):
        if e % 2:
            out = gf_mul(F, out, g)
    return out
