"""Expression grammar for polynomials in s and t, tuples, and bases.

Grammar (whitespace insignificant):

    tuple  := "(" expr "," expr "," expr "," expr ")"
    expr   := [sign] term { sign term }
    term   := factor { ["*"] factor }        (implicit multiplication: "2s")
    factor := rational | variable ["^" natural]
    rational := natural ["/" natural]

Only the variables s and t are admitted; exponents must be non-negative
integers; "**" is rejected.  str(Poly) produces the canonical form (terms
in grevlex-descending order, coefficients in lowest terms, explicit signs)
and parsing it back returns the same polynomial.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import VARS_ST, Poly
from .errors import ParseError


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self.skip_ws()
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def take(self) -> str:
        ch = self.peek()
        if ch is None:
            self.error("unexpected end of input")
        self.pos += 1
        return ch

    def expect(self, ch: str):
        got = self.peek()
        if got != ch:
            self.error(f"expected {ch!r}" + (f", found {got!r}" if got else ""))
        self.pos += 1

    def natural(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected a number")
        return int(self.text[start:self.pos])


def _parse_factor(tk: _Tokenizer):
    """Returns ('coeff', Fraction) or ('var', name, exponent)."""
    ch = tk.peek()
    if ch is None:
        tk.error("unexpected end of input")
    if ch.isdigit():
        num = tk.natural()
        if tk.peek() == "/":
            tk.take()
            nxt = tk.peek()
            if nxt is None or not nxt.isdigit():
                tk.error("expected an integer denominator")
            den = tk.natural()
            if den == 0:
                tk.error("zero denominator")
            return ("coeff", Fraction(num, den))
        return ("coeff", Fraction(num))
    if ch.isalpha():
        tk.take()
        if ch not in VARS_ST:
            tk.pos -= 1
            tk.error(f"variable {ch!r} not allowed; expected s or t")
        exp = 1
        if tk.peek() == "^":
            tk.take()
            nxt = tk.peek()
            if nxt is None or not nxt.isdigit():
                tk.error("exponent must be a non-negative integer")
            exp = tk.natural()
        return ("var", ch, exp)
    tk.error(f"unexpected character {ch!r}")


_TERM_STARTERS = set("0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")


def _parse_term(tk: _Tokenizer) -> Poly:
    coeff = Fraction(1)
    exps = {"s": 0, "t": 0}
    saw_factor = False
    while True:
        ch = tk.peek()
        if ch == "*":
            tk.take()
            if tk.peek() == "*":
                tk.error("'**' is not supported; use '^' for powers")
            if not saw_factor:
                tk.error("unexpected '*'")
        elif not saw_factor or (ch is not None and ch in _TERM_STARTERS):
            pass  # implicit multiplication or first factor
        else:
            break
        fac = _parse_factor(tk)
        saw_factor = True
        if fac[0] == "coeff":
            coeff *= fac[1]
        else:
            _, name, exp = fac
            exps[name] += exp
    return Poly(VARS_ST, {(exps["s"], exps["t"]): coeff})


def _parse_expr(tk: _Tokenizer) -> Poly:
    total = Poly.zero(VARS_ST)
    sign = 1
    ch = tk.peek()
    if ch in ("+", "-"):
        tk.take()
        sign = -1 if ch == "-" else 1
    while True:
        term = _parse_term(tk)
        total = total + term * sign
        ch = tk.peek()
        if ch == "+":
            tk.take()
            sign = 1
        elif ch == "-":
            tk.take()
            sign = -1
        else:
            return total


def parse_polynomial(text: str) -> Poly:
    """Parse one expression; the whole string must be consumed."""
    tk = _Tokenizer(text)
    p = _parse_expr(tk)
    if tk.peek() is not None:
        tk.error(f"unexpected {tk.peek()!r}")
    return p


def _parse_tuple4(tk: _Tokenizer) -> tuple[Poly, Poly, Poly, Poly]:
    tk.expect("(")
    polys = [_parse_expr(tk)]
    for _ in range(3):
        tk.expect(",")
        polys.append(_parse_expr(tk))
    tk.expect(")")
    return tuple(polys)


def parse_tuple(text: str) -> tuple[Poly, Poly, Poly, Poly]:
    """Parse a parenthesized 4-tuple of expressions."""
    tk = _Tokenizer(text)
    out = _parse_tuple4(tk)
    if tk.peek() is not None:
        tk.error(f"unexpected {tk.peek()!r}")
    return out


def parse_basis(text: str):
    """Parse three 4-tuples (optionally separated by ',' or ';')."""
    tk = _Tokenizer(text)
    vectors = []
    for i in range(3):
        vectors.append(_parse_tuple4(tk))
        if i < 2 and tk.peek() in (",", ";"):
            tk.take()
    if tk.peek() is not None:
        tk.error(f"unexpected {tk.peek()!r}")
    return tuple(vectors)


def poly_to_string(p: Poly) -> str:
    """Canonical textual form (round-trips through parse_polynomial)."""
    return str(p)


def tuple_to_string(polys) -> str:
    return "(" + ", ".join(str(p) for p in polys) + ")"
