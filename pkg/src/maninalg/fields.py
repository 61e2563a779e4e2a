"""Exact scalar arithmetic over Q and over univariate rational-function fields Q(t).

A scalar is a ``FieldElement``: a pair of polynomials num/den with Fraction
coefficients, kept in canonical form at all times:

  * den is nonzero and monic, gcd(num, den) = 1, zero is 0/1;
  * over Q both polynomials are constants, so den = 1 and num is a Fraction.

Polynomials are dense little-endian coefficient tuples with no trailing
zeros; the empty tuple is the zero polynomial.  Everything here is exact:
no floats anywhere, and canonical forms make equality a structural check.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional


class FieldError(ValueError):
    """Raised on field mismatches, bad grammar or division by zero."""


# ---------------------------------------------------------------------------
# dense polynomial helpers (tuples of Fraction, little-endian, no top zeros)
# ---------------------------------------------------------------------------

P_ZERO: tuple[Fraction, ...] = ()
P_ONE: tuple[Fraction, ...] = (Fraction(1),)


def _ptrim(cs: list[Fraction]) -> tuple[Fraction, ...]:
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _padd(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                   for i in range(n)])


def _pneg(a):
    return tuple(-c for c in a)


def _psub(a, b):
    return _padd(a, _pneg(b))


def _pmul(a, b):
    if not a or not b:
        return P_ZERO
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _ptrim(out)


def _pscale(a, c: Fraction):
    if c == 0:
        return P_ZERO
    return tuple(x * c for x in a)


def _pdivmod(a, b):
    """Polynomial division over Q; b must be nonzero."""
    if not b:
        raise FieldError("polynomial division by zero")
    rem = list(a)
    quo = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for k in range(len(a) - len(b), -1, -1):
        coeff = rem[k + len(b) - 1] * inv_lead
        if coeff != 0:
            quo[k] = coeff
            for j, cb in enumerate(b):
                rem[k + j] -= coeff * cb
    return _ptrim(quo), _ptrim(rem)


def _pgcd(a, b):
    """Monic gcd over Q; gcd(0, 0) = 0."""
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if not a:
        return P_ZERO
    return _pscale(a, 1 / a[-1])


def _pstr(a, var: str) -> str:
    """Print a polynomial in the scalar grammar (highest degree first)."""
    if not a:
        return "0"
    parts: list[str] = []
    for d in range(len(a) - 1, -1, -1):
        c = a[d]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if d == 0:
            body = str(c)
        else:
            x = var if d == 1 else f"{var}^{d}"
            body = x if c == 1 else f"{c}*{x}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


# ---------------------------------------------------------------------------
# field descriptors and elements
# ---------------------------------------------------------------------------

class Field:
    """Descriptor of the coefficient field: Q, or Q(variable)."""

    __slots__ = ("kind", "variable")

    def __init__(self, kind: str, variable: Optional[str] = None):
        if kind not in ("rational", "ratfunc"):
            raise FieldError(f"unknown field kind {kind!r}")
        if kind == "ratfunc":
            if not variable or not variable.isidentifier():
                raise FieldError("ratfunc field needs an identifier variable name")
        elif variable is not None:
            raise FieldError("rational field takes no variable")
        self.kind = kind
        self.variable = variable

    def __eq__(self, other):
        return (isinstance(other, Field) and self.kind == other.kind
                and self.variable == other.variable)

    def __hash__(self):
        return hash((self.kind, self.variable))

    def __repr__(self):
        return "QQ" if self.kind == "rational" else f"QQ({self.variable})"

    # -- constructors -------------------------------------------------------

    def zero(self) -> "FieldElement":
        return FieldElement(self, P_ZERO, P_ONE)

    def one(self) -> "FieldElement":
        return FieldElement(self, P_ONE, P_ONE)

    def from_fraction(self, q) -> "FieldElement":
        q = Fraction(q)
        return FieldElement(self, P_ZERO if q == 0 else (q,), P_ONE)

    def from_int(self, n: int) -> "FieldElement":
        return self.from_fraction(n)

    def gen(self) -> "FieldElement":
        """The field variable as an element (ratfunc fields only)."""
        if self.kind != "ratfunc":
            raise FieldError("rational field has no variable")
        return FieldElement(self, (Fraction(0), Fraction(1)), P_ONE)

    def element(self, num: Iterable, den: Iterable = (1,)) -> "FieldElement":
        num = tuple(Fraction(c) for c in num)
        den = tuple(Fraction(c) for c in den)
        return _canon(self, num, den)

    def parse(self, text: str) -> "FieldElement":
        return parse_scalar(text, self)

    def random_element(self, rng, max_degree: int = 1, span: int = 3) -> "FieldElement":
        """Small random element, used by the randomized property suites."""
        def rand_poly(deg):
            return tuple(Fraction(rng.randint(-span, span)) for _ in range(deg + 1))
        if self.kind == "rational":
            return self.from_fraction(Fraction(rng.randint(-span, span),
                                               rng.randint(1, span)))
        num = rand_poly(rng.randint(0, max_degree))
        den = P_ZERO
        while not den:
            den = _ptrim(list(rand_poly(rng.randint(0, max_degree))))
        return _canon(self, _ptrim(list(num)), den)


QQ = Field("rational")


def ratfunc_field(variable: str) -> Field:
    return Field("ratfunc", variable)


def _canon(field: Field, num, den) -> "FieldElement":
    num = _ptrim(list(num))
    den = _ptrim(list(den))
    if not den:
        raise FieldError("zero denominator")
    if not num:
        return FieldElement(field, P_ZERO, P_ONE)
    if field.kind == "rational":
        if len(num) > 1 or len(den) > 1:
            raise FieldError("polynomial value in a rational field")
        return FieldElement(field, (num[0] / den[0],), P_ONE)
    if len(den) == 1:
        c = den[0]
        return FieldElement(field, num if c == 1 else _pscale(num, 1 / c), P_ONE)
    if len(num) > 1:
        g = _pgcd(num, den)
        if len(g) > 1:
            num = _pdivmod(num, g)[0]
            den = _pdivmod(den, g)[0]
            if len(den) == 1:
                c = den[0]
                return FieldElement(field, num if c == 1 else _pscale(num, 1 / c),
                                    P_ONE)
    lead = den[-1]
    if lead != 1:
        num = _pscale(num, 1 / lead)
        den = _pscale(den, 1 / lead)
    return FieldElement(field, num, den)


class FieldElement:
    """Canonical exact scalar.  Immutable; safe to share across threads."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: Field, num: tuple, den: tuple):
        self.field = field
        self.num = num
        self.den = den

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == P_ONE and self.den == P_ONE

    def as_fraction(self) -> Fraction:
        if self.den != P_ONE or len(self.num) > 1:
            raise FieldError("not a rational constant")
        return self.num[0] if self.num else Fraction(0)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "FieldElement"):
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other):
        self._check(other)
        if self.den == P_ONE and other.den == P_ONE:
            return FieldElement(self.field, _padd(self.num, other.num), P_ONE)
        num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return _canon(self.field, num, _pmul(self.den, other.den))

    def __sub__(self, other):
        self._check(other)
        if self.den == P_ONE and other.den == P_ONE:
            return FieldElement(self.field, _psub(self.num, other.num), P_ONE)
        num = _psub(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return _canon(self.field, num, _pmul(self.den, other.den))

    def __neg__(self):
        return FieldElement(self.field, _pneg(self.num), self.den)

    def __mul__(self, other):
        self._check(other)
        if self.den == P_ONE and other.den == P_ONE:
            return FieldElement(self.field, _pmul(self.num, other.num), P_ONE)
        return _canon(self.field, _pmul(self.num, other.num),
                      _pmul(self.den, other.den))

    def __truediv__(self, other):
        self._check(other)
        if other.is_zero():
            raise FieldError("division by zero")
        return _canon(self.field, _pmul(self.num, other.den),
                      _pmul(self.den, other.num))

    def inv(self) -> "FieldElement":
        if self.is_zero():
            raise FieldError("division by zero")
        return _canon(self.field, self.den, self.num)

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        return (isinstance(other, FieldElement) and self.field == other.field
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.field, self.num, self.den))

    # -- printing ------------------------------------------------------------

    def __str__(self):
        if self.field.kind == "rational":
            return str(self.as_fraction())
        var = self.field.variable
        if self.den == P_ONE:
            return _pstr(self.num, var)
        return f"({_pstr(self.num, var)})/({_pstr(self.den, var)})"

    def __repr__(self):
        return f"<{self}>"


# ---------------------------------------------------------------------------
# scalar grammar: integers, the field variable, + - * / ^, parentheses
# ---------------------------------------------------------------------------

class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise FieldError(f"scalar syntax error at position {self.pos}: {message} "
                         f"(in {self.text!r})")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self):
        ch = self.peek()
        self.pos += 1
        return ch

    def take_int(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected integer")
        return int(self.text[start:self.pos])

    def take_name(self) -> str:
        self.skip_ws()
        start = self.pos
        while (self.pos < len(self.text)
               and (self.text[self.pos].isalnum() or self.text[self.pos] == "_")):
            self.pos += 1
        return self.text[start:self.pos]


def parse_scalar(text: str, field: Field) -> FieldElement:
    """Parse a scalar in the grammar; parse -> print -> parse is a fixed point."""
    toks = _Tokens(text)
    value = _parse_expr(toks, field)
    toks.skip_ws()
    if toks.pos != len(toks.text):
        toks.error("unexpected trailing input")
    return value


def _parse_expr(toks: _Tokens, field: Field) -> FieldElement:
    value = _parse_term(toks, field)
    while toks.peek() in ("+", "-"):
        op = toks.take()
        rhs = _parse_term(toks, field)
        value = value + rhs if op == "+" else value - rhs
    return value


def _parse_term(toks: _Tokens, field: Field) -> FieldElement:
    value = _parse_factor(toks, field)
    while toks.peek() in ("*", "/"):
        op = toks.take()
        rhs = _parse_factor(toks, field)
        if op == "*":
            value = value * rhs
        else:
            if rhs.is_zero():
                toks.error("zero denominator")
            value = value / rhs
    return value


def _parse_factor(toks: _Tokens, field: Field) -> FieldElement:
    sign = 1
    while toks.peek() in ("+", "-"):
        if toks.take() == "-":
            sign = -sign
    value = _parse_power(toks, field)
    return value if sign == 1 else -value


def _parse_power(toks: _Tokens, field: Field) -> FieldElement:
    value = _parse_atom(toks, field)
    if toks.peek() == "^":
        toks.take()
        exponent = toks.take_int()
        value = value ** exponent
    return value


def _parse_atom(toks: _Tokens, field: Field) -> FieldElement:
    ch = toks.peek()
    if ch == "(":
        toks.take()
        value = _parse_expr(toks, field)
        if toks.peek() != ")":
            toks.error("expected ')'")
        toks.take()
        return value
    if ch.isdigit():
        return field.from_int(toks.take_int())
    if ch.isalpha() or ch == "_":
        name = toks.take_name()
        if field.kind == "ratfunc" and name == field.variable:
            return field.gen()
        toks.error(f"unknown variable {name!r}")
    toks.error("expected integer, variable or '('")


def apply_op(op: str, a: FieldElement, b: Optional[FieldElement] = None):
    """Generic dispatcher over the scalar operations (used by the CLI)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    if op == "eq":
        return a == b
    raise FieldError(f"unknown scalar operation {op!r}")
