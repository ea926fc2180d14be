"""
Text form of polynomials.

    term := coeff | coeff "*" var "^" exp | var "^" exp | coeff "*" var | var
    poly := term (("+" | "-") term)*

``var`` is "t" or "U" (one per polynomial); ``coeff`` is a nonnegative
decimal reduced into the field, or for extension fields a tuple
"(c_{k-1},...,c_0)" over F_p. Blanks between tokens are ignored.
"""
from .dense import PolynomialError
from .poly import Poly

VARIABLES = ('t', 'U')


class PolynomialSyntaxError(PolynomialError):
    def __init__(self, message, text, position):
        super().__init__(f"{message} at offset {position} in {text!r}")
        self.text = text
        self.position = position


class _Parser:
    def __init__(self, text, field):
        self.text = text
        self.field = field
        self.pos = 0
        self.var = None

    def error(self, message, position=None):
        return PolynomialSyntaxError(message, self.text, self.pos if position is None else position)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in ' \t':
            self.pos += 1

    def number(self):
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a number")
        return int(self.text[start:self.pos])

    def coefficient(self):
        F = self.field
        if self.peek() != '(':
            return F.reduce_int(self.number())
        start = self.pos
        self.pos += 1
        parts = []
        while True:
            self.skip_ws()
            parts.append(self.number())
            self.skip_ws()
            ch = self.peek()
            if ch == ',':
                self.pos += 1
            elif ch == ')':
                self.pos += 1
                break
            else:
                raise self.error("expected ',' or ')'")
        if F.k == 1 or len(parts) > F.k:
            raise PolynomialError(
                f"coefficient {self.text[start:self.pos]!r} is not reducible into {F}")
        return F.from_digits([c % F.p for c in reversed(parts)])

    def variable(self):
        ch = self.peek()
        if ch not in VARIABLES or not ch:
            raise self.error("expected variable 't' or 'U'")
        if self.var is not None and ch != self.var:
            raise self.error(f"variable {ch!r} mixed with {self.var!r}")
        self.var = ch
        self.pos += 1
        self.skip_ws()
        if self.peek() != '^':
            return 1
        self.pos += 1
        self.skip_ws()
        return self.number()

    def term(self):
        ch = self.peek()
        if ch.isdigit() or ch == '(':
            coeff = self.coefficient()
            self.skip_ws()
            if self.peek() != '*':
                return 0, coeff
            self.pos += 1
            self.skip_ws()
            return self.variable(), coeff
        if ch and ch in VARIABLES:
            return self.variable(), 1
        raise self.error("expected a coefficient or variable")

    def parse(self):
        F = self.field
        terms = {}
        negate = False
        self.skip_ws()
        if not self.peek():
            raise self.error("empty polynomial")
        while True:
            exp, coeff = self.term()
            if negate:
                coeff = F.neg(coeff)
            terms[exp] = F.add(terms.get(exp, 0), coeff)
            self.skip_ws()
            ch = self.peek()
            if not ch:
                break
            if ch not in '+-':
                raise self.error("expected '+' or '-'")
            negate = ch == '-'
            self.pos += 1
            self.skip_ws()
        coeffs = [0] * (max(terms) + 1)
        for exp, code in terms.items():
            coeffs[exp] = code
        return Poly(F, coeffs)


def poly_parse(text, field):
    """Parse ``text`` into a Poly over ``field``."""
    return _Parser(text, field).parse()


def poly_format(f, var='t'):
    """Canonical text: descending exponents, no zero terms, "0" for zero."""
    if f.is_zero:
        return '0'
    F = f.field
    terms = []
    for exp in range(len(f.coeffs) - 1, -1, -1):
        code = f.coeffs[exp]
        if not code:
            continue
        coeff = F.format_code(code)
        if exp == 0:
            terms.append(coeff)
            continue
        power = var if exp == 1 else f"{var}^{exp}"
        terms.append(power if code == 1 else f"{coeff}*{power}")
    return '+'.join(terms)
