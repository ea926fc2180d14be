import hashlib
import json
from dataclasses import dataclass

from apps.ffield.field import field_parse
from apps.fqpoly.parsing import poly_format, poly_parse


class TupleSpecError(ValueError):
    """A TupleSpec failed validation; ``violations`` lists every problem."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__('; '.join(self.violations))


@dataclass(frozen=True)
class TupleSpec:
    field: object
    n: int
    offsets: tuple
    allow_even_q: bool = False

    @property
    def q(self):
        return self.field.q

    @property
    def r(self):
        return len(self.offsets)

    @property
    def offset_texts(self):
        return [poly_format(a) for a in self.offsets]

    @property
    def outside_hypotheses(self):
        return not self.field.is_odd

    def canonical(self):
        return {
            'field': self.field.label,
            'n': self.n,
            'offsets': self.offset_texts,
            'allow_even_q': self.allow_even_q,
        }

    def digest(self):
        payload = json.dumps(self.canonical(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()

    def short_circuit_order(self):
        """Offsets by ascending degree, then lexicographic coefficients."""
        return sorted(self.offsets, key=lambda a: (len(a.coeffs), tuple(reversed(a.coeffs))))

    def __str__(self):
        return f"pi({self.field.label}, {self.n}; {', '.join(self.offset_texts)})"


def split_offsets(text):
    """Split comma-separated polynomial texts, keeping "(c1,c0)" tuples whole."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        if ch == ',' and depth == 0:
            parts.append(''.join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append(''.join(cur).strip())
    return [p for p in parts if p]


def build_tuple_spec(field_label, n, offsets, allow_even_q=False):
    """TupleSpec from text: a field label and offsets as a comma-separated
    string or a list of polynomial texts."""
    field = field_parse(field_label)
    if isinstance(offsets, str):
        offsets = split_offsets(offsets)
    polys = tuple(poly_parse(text, field) for text in offsets)
    return TupleSpec(field=field, n=int(n), offsets=polys, allow_even_q=allow_even_q)


def validate_tuple(spec):
    """Every violated TupleSpec invariant, as messages; empty when valid."""
    violations = []
    if not spec.field.is_odd and not spec.allow_even_q:
        violations.append(f"q = {spec.q} is even; the counting theorem needs odd q "
                          f"(use the even-q override to explore)")
    if spec.n < 1:
        violations.append(f"n must be >= 1, got {spec.n}")
    if spec.r < 1:
        violations.append("at least one offset is required")
    seen = set()
    for a in spec.offsets:
        if a.field is not spec.field:
            violations.append(f"offset {a} is over {a.field}, not {spec.field}")
            continue
        if a.degree >= spec.n:
            violations.append(f"offset {a} has degree {a.degree} >= n = {spec.n}")
        if a in seen:
            violations.append(f"offset {a} is duplicated")
        seen.add(a)
    return violations


def ensure_valid(spec):
    violations = validate_tuple(spec)
    if violations:
        raise TupleSpecError(violations)
    return spec
