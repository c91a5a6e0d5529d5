"""Unimodularity testing and certified unimodular completion over Q[s,t].

complete_columns finds, for a unimodular m x n matrix F (m > n), a square
unimodular M with M F = [I_n; 0], and returns it with its exact inverse as a
certificate that is re-verified before being handed out.

The strategy is layered.  Elementary paths (constant pivots, mutual
reduction of entries against each other, Bezout for two surviving entries,
a rank-one update built from a left inverse) dispatch almost every input.
When they stall, the general route runs: make an entry monic in t by a
linear change of variables, trivialize the row locally (a constructive
Horrocks loop whose "units" are tracked by gcds against a squarefree
modulus, splitting the modulus instead of factoring), patch the local
solutions into a polynomial matrix along a Bezout partition of t, and
finish over the principal ideal domain Q[s].
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .arith import (
    NEG_INF,
    VARS_ST,
    Poly,
    PolyMatrix,
    exact_div,
    gcd_many,
    mat_inverse,
)
from .errors import CompletionError, InternalError
from .grobner import buchberger, lift_coefficients, make_lifter, reduce_with_certificate

# ---------------------------------------------------------------------------
# Degree bound
# ---------------------------------------------------------------------------


def degree_bound_for_D(D: int) -> int:
    """2D(1+2D)(1+D^4)(1+D)^4 for D >= 1, exactly."""
    D = int(D)
    if D < 1:
        raise ValueError("D must be at least 1")
    return 2 * D * (1 + 2 * D) * (1 + D**4) * (1 + D) ** 4


def qs_degree_bound(n_or_m: int, deg_f: int) -> int:
    """Published degree bound for completing a unimodular matrix over two
    variables, with D = n_or_m * (1 + deg_f)."""
    if n_or_m < 1 or deg_f < 0:
        raise ValueError("need n_or_m >= 1 and deg_f >= 0")
    return degree_bound_for_D(n_or_m * (1 + deg_f))


# ---------------------------------------------------------------------------
# Unimodularity and left inverses
# ---------------------------------------------------------------------------


def is_unimodular(f: PolyMatrix) -> bool:
    """True when the ideal of maximal minors of f (m x n, m >= n) is (1)."""
    m, n = f.rows, f.cols
    if m < n:
        raise ValueError("expected at least as many rows as columns")
    minors = []
    for rows in combinations(range(m), n):
        d = f.submatrix(rows, range(n)).det()
        if not d.is_zero():
            minors.append(d)
    if not minors:
        return False
    return buchberger(minors).contains_constant()


def left_inverse(f: PolyMatrix) -> PolyMatrix:
    """An n x m matrix H with H f = I_n, for unimodular f."""
    if not is_unimodular(f):
        raise ValueError("matrix is not unimodular")
    m, n = f.rows, f.cols
    rows = [tuple(f.row(i)) for i in range(m)]
    lifter = make_lifter(rows)
    zero = Poly.zero(f.vars)
    one = Poly.const(f.vars, 1)
    h_rows = []
    for i in range(n):
        target = tuple(one if j == i else zero for j in range(n))
        coeffs = lifter(target)
        if coeffs is None:
            raise InternalError("unimodular matrix rows failed to generate a unit vector")
        h_rows.append(coeffs)
    h = PolyMatrix(h_rows)
    if h * f != PolyMatrix.identity(n, f.vars):
        raise InternalError("left inverse verification failed")
    return h


# ---------------------------------------------------------------------------
# Univariate helpers over Q[s] (elements are VARS_ST polys free of the
# other variable)
# ---------------------------------------------------------------------------


def _uses_var(p: Poly, vi: int) -> bool:
    return any(m[vi] for m in p.terms)


def _primitive_scale(polys) -> Fraction:
    """Constant c > 0 making the coefficients of c * polys coprime integers."""
    from math import gcd, lcm

    coeffs = [c for p in polys for c in p.terms.values()]
    if not coeffs:
        return Fraction(1)
    den = 1
    num = 0
    for c in coeffs:
        den = lcm(den, c.denominator)
        num = gcd(num, abs(c.numerator))
    return Fraction(den, num if num else 1)


def _uni_coeffs(p: Poly, vi: int) -> list[Fraction]:
    if p.is_zero():
        return []
    deg = max(m[vi] for m in p.terms)
    out = [Fraction(0)] * (deg + 1)
    for m, c in p.terms.items():
        if sum(m) != m[vi]:
            raise ValueError("polynomial is not univariate in the requested variable")
        out[m[vi]] += c
    return out


def _uni_from_coeffs(cs, vi: int, vars=VARS_ST) -> Poly:
    terms = {}
    for k, c in enumerate(cs):
        if c:
            mono = [0] * len(vars)
            mono[vi] = k
            terms[tuple(mono)] = c
    return Poly(vars, terms)


def _uni_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - len(b)
        f = a[-1] / b[-1]
        q[k] = f
        for i, bc in enumerate(b):
            a[i + k] -= f * bc
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _uni_xgcd(a: Poly, b: Poly, vi: int):
    """(g, u, v) with u a + v b = g, g monic (or constant 1), over Q[x_vi]."""
    ca, cb = _uni_coeffs(a, vi), _uni_coeffs(b, vi)
    r0, r1 = ca, cb
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]

    def sub_scaled(x, q, y):
        out = list(x) + [Fraction(0)] * max(0, len(y) + len(q) - 1 - len(x))
        for i, qc in enumerate(q):
            if qc == 0:
                continue
            for j, yc in enumerate(y):
                out[i + j] -= qc * yc
        while out and out[-1] == 0:
            out.pop()
        return out

    while r1:
        q, r = _uni_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub_scaled(s0, q, s1)
        t0, t1 = t1, sub_scaled(t0, q, t1)
    if not r0:
        raise ValueError("xgcd of zero polynomials")
    lead = r0[-1]
    r0 = [c / lead for c in r0]
    s0 = [c / lead for c in s0]
    t0 = [c / lead for c in t0]
    return (_uni_from_coeffs(r0, vi), _uni_from_coeffs(s0, vi), _uni_from_coeffs(t0, vi))


def _squarefree_part(g: Poly, vi: int) -> Poly:
    """g / gcd(g, g'), monic; g univariate in x_vi."""
    cs = _uni_coeffs(g, vi)
    if len(cs) <= 1:
        return Poly.const(g.vars, 1)
    deriv = _uni_from_coeffs([c * k for k, c in enumerate(cs)][1:], vi)
    common = gcd_many([g, deriv])
    out = exact_div(g, common)
    return out.monic()


# ---------------------------------------------------------------------------
# Rational functions over Q[s] and polynomials in t above them
# ---------------------------------------------------------------------------

_S = 0  # variable indices into VARS_ST
_T = 1


class _RatFunc:
    """num/den with num, den in Q[s]; den monic, gcd-reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.const(VARS_ST, 1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num = num
            self.den = Poly.const(VARS_ST, 1)
            return
        g = gcd_many([num, den])
        if not g.is_constant():
            num = exact_div(num, g)
            den = exact_div(den, g)
        lc = den.leading_coefficient()
        if lc != 1:
            inv = Fraction(1) / lc
            num, den = num * inv, den * inv
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c) -> "_RatFunc":
        return cls(Poly.const(VARS_ST, c))

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num == self.den

    def is_polynomial(self):
        return self.den.is_constant()

    def __add__(self, o):
        return _RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o):
        return _RatFunc(self.num * o.den - o.num * self.den, self.den * o.den)

    def __mul__(self, o):
        return _RatFunc(self.num * o.num, self.den * o.den)

    def __neg__(self):
        return _RatFunc(-self.num, self.den)

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError
        return _RatFunc(self.den, self.num)

    def __eq__(self, o):
        return isinstance(o, _RatFunc) and self.num == o.num and self.den == o.den


class _TPoly:
    """Polynomial in t with _RatFunc coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict):
        self.coeffs = {e: c for e, c in coeffs.items() if not c.is_zero()}

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def one(cls):
        return cls({0: _RatFunc.const(1)})

    @classmethod
    def from_poly(cls, p: Poly) -> "_TPoly":
        buckets: dict[int, dict] = {}
        for (a, b), c in p.terms.items():
            buckets.setdefault(b, {})[(a, 0)] = c
        return cls({e: _RatFunc(Poly(VARS_ST, t)) for e, t in buckets.items()})

    def to_poly(self) -> Poly | None:
        """Back to Q[s,t]; None when a denominator survives."""
        acc = Poly.zero(VARS_ST)
        t = Poly.variable(VARS_ST, "t")
        for e, c in self.coeffs.items():
            if not c.is_polynomial():
                return None
            scaled = c.num * (Fraction(1) / c.den.constant_value())
            acc = acc + scaled * t**e
        return acc

    def is_zero(self):
        return not self.coeffs

    @property
    def deg(self):
        return max(self.coeffs) if self.coeffs else -1

    def coeff(self, e: int) -> _RatFunc:
        return self.coeffs.get(e, _RatFunc.const(0))

    def __add__(self, o):
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return _TPoly(out)

    def __sub__(self, o):
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            out[e] = out[e] - c if e in out else -c
        return _TPoly(out)

    def __mul__(self, o):
        out: dict[int, _RatFunc] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in o.coeffs.items():
                e = e1 + e2
                p = c1 * c2
                out[e] = out[e] + p if e in out else p
        return _TPoly(out)

    def scale(self, c: _RatFunc):
        return _TPoly({e: v * c for e, v in self.coeffs.items()})

    def shift(self, k: int):
        return _TPoly({e + k: v for e, v in self.coeffs.items()})

    def divmod_monic(self, g: "_TPoly"):
        """(q, r) with self = q g + r, deg r < deg g; g has lead coeff 1."""
        q = _TPoly.zero()
        r = self
        dg = g.deg
        while not r.is_zero() and r.deg >= dg:
            e = r.deg
            c = r.coeff(e)
            term = _TPoly({e - dg: c})
            q = q + term
            r = r - term * g
        return q, r

    def subst_t(self, b: "_TPoly") -> "_TPoly":
        out = _TPoly.zero()
        power = _TPoly.one()
        for e in range(self.deg + 1):
            c = self.coeff(e)
            if not c.is_zero():
                out = out + power.scale(c)
            if e < self.deg:
                power = power * b
        return out

    def at_t_zero(self) -> _RatFunc:
        return self.coeff(0)


def _tp_identity(m: int) -> list[list[_TPoly]]:
    return [[_TPoly.one() if i == j else _TPoly.zero() for j in range(m)] for i in range(m)]


def _tp_mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = [[_TPoly.zero() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for l in range(k):
            if a[i][l].is_zero():
                continue
            for j in range(m):
                if not b[l][j].is_zero():
                    out[i][j] = out[i][j] + a[i][l] * b[l][j]
    return out


def _tp_mat_det(a) -> _TPoly:
    n = len(a)
    memo: dict[tuple, _TPoly] = {}

    def rec(rows: tuple) -> _TPoly:
        col = n - len(rows)
        if not rows:
            return _TPoly.one()
        if rows in memo:
            return memo[rows]
        acc = _TPoly.zero()
        for pos, i in enumerate(rows):
            x = a[i][col]
            if x.is_zero():
                continue
            term = x * rec(rows[:pos] + rows[pos + 1:])
            acc = acc + term if pos % 2 == 0 else acc - term
        memo[rows] = acc
        return acc

    return rec(tuple(range(n)))


def _tp_mat_adjugate(a):
    n = len(a)
    if n == 1:
        return [[_TPoly.one()]]
    out = [[None] * n for _ in range(n)]
    idx = range(n)
    for i in range(n):
        for j in range(n):
            sub = [[a[r][c] for c in idx if c != i] for r in idx if r != j]
            cof = _tp_mat_det(sub)
            out[i][j] = cof if (i + j) % 2 == 0 else _TPoly.zero() - cof
    return out


def _tp_mat_inverse(a):
    """Inverse of a matrix whose determinant is a t-free unit."""
    det = _tp_mat_det(a)
    if det.is_zero() or det.deg > 0:
        raise InternalError("local completion matrix has a non-unit determinant")
    dinv = det.coeff(0).inv()
    adj = _tp_mat_adjugate(a)
    return [[x.scale(dinv) for x in row] for row in adj]


def _tp_subst_matrix(a, b: _TPoly):
    return [[x.subst_t(b) for x in row] for row in a]


# ---------------------------------------------------------------------------
# Local Horrocks loop
# ---------------------------------------------------------------------------


def _horrocks_local(row_polys: list[Poly], gamma: Poly | None):
    """Trivialize a unimodular row over a chart of Spec Q[s].

    row_polys: length >= 3, entry 0 monic in t with constant lead coefficient.
    gamma: squarefree monic modulus describing the chart V(gamma), or None
    for the dense chart where any nonzero element counts as a unit.

    Returns (E, denom, spawned, gamma_final): a matrix over Q[s]_denom[t]
    with row * E = e1, the accumulated denominator, split-off moduli that
    still need their own charts, and the possibly shrunken modulus.
    """
    m = len(row_polys)
    if m < 3:
        raise InternalError("local trivialization needs at least three entries")
    h = [_TPoly.from_poly(p) for p in row_polys]
    E = _tp_identity(m)
    denom = Poly.const(VARS_ST, 1)
    spawned: list[Poly] = []

    def colop(i, j, factor: _TPoly):
        h[i] = h[i] + factor * h[j]
        for r in range(m):
            E[r][i] = E[r][i] + factor * E[r][j]

    def colscale(i, c: _RatFunc):
        h[i] = h[i].scale(c)
        for r in range(m):
            E[r][i] = E[r][i].scale(c)

    def colswap(i, j):
        h[i], h[j] = h[j], h[i]
        for r in range(m):
            E[r][i], E[r][j] = E[r][j], E[r][i]

    def residue_class(x: _RatFunc) -> str:
        """'unit', 'zero', or 'split' relative to the current chart."""
        nonlocal gamma
        if x.is_zero():
            return "zero"
        if gamma is None:
            return "unit"
        g = gcd_many([x.num, gamma])
        if g.is_constant():
            return "unit"
        if exact_div(gamma, g).is_constant():
            return "zero"
        spawned.append(g)
        gamma = exact_div(gamma, g).monic()
        return "unit"

    guard = 0
    while True:
        guard += 1
        if guard > 200:
            raise InternalError("local trivialization did not terminate")
        lc = h[0].coeff(h[0].deg)
        if residue_class(lc) != "unit":
            raise InternalError("pivot column lost its unit lead coefficient")
        if not lc.is_one():
            colscale(0, lc.inv())
            denom = (denom * lc.num).monic()
        D = h[0].deg
        if D == 0:
            for i in range(1, m):
                if not h[i].is_zero():
                    colop(i, 0, _TPoly.zero() - h[i])
            break
        for i in range(1, m):
            if h[i].is_zero() or h[i].deg < D:
                continue
            q, r = h[i].divmod_monic(h[0])
            colop(i, 0, _TPoly.zero() - q)
        # pick a coefficient that is a unit on (a shrunken piece of) the chart
        pick = None
        for i in range(1, m):
            if h[i].is_zero():
                continue
            for e in range(h[i].deg, -1, -1):
                c = h[i].coeff(e)
                if c.is_zero():
                    continue
                if residue_class(c) == "unit":
                    pick = (i, e)
                    break
            if pick:
                break
        if pick is None:
            raise CompletionError("completion failed (row is not unimodular on a chart)")
        i0, ebar = pick
        shift = D - 1 - ebar
        w = h[i0].shift(shift)
        qw, w_red = w.divmod_monic(h[0])
        lead = w_red.coeff(D - 1)
        if residue_class(lead) != "unit":
            raise InternalError("reduced pivot candidate lost its unit coefficient")
        target = next(j for j in range(1, m) if j != i0)
        limit = 3 if gamma is None else max(mo[0] for mo in gamma.terms) + 2
        chosen = None
        for cval in range(1, limit + 2):
            cand = h[target].coeff(D - 1) + _RatFunc.const(cval) * lead
            if cand.is_zero():
                continue
            if gamma is None or gcd_many([cand.num, gamma]).is_constant():
                chosen = cval
                break
        if chosen is None:
            raise InternalError("no scalar kept the new lead coefficient invertible")
        cpoly = _TPoly({shift: _RatFunc.const(chosen)})
        colop(target, i0, cpoly)
        if not qw.is_zero():
            colop(target, 0, _TPoly.zero() - qw.scale(_RatFunc.const(chosen)))
        if h[target].deg != D - 1:
            raise InternalError("pivot construction produced the wrong degree")
        colswap(0, target)
    return E, denom, spawned, gamma


def _eliminate_t_monic(row_polys: list[Poly]) -> PolyMatrix:
    """For a unimodular row whose first entry is monic in t (constant lead
    coefficient), build a polynomial M with row * M = row(t := 0)."""
    m = len(row_polys)
    charts = []  # (denominator, E) with row(t) * E(t) = e1 over Q[s]_den[t]
    worklist: list[Poly | None] = [None]
    seen_guard = 0
    while worklist:
        seen_guard += 1
        if seen_guard > 60:
            raise CompletionError("completion failed (chart splitting did not stop)")
        gamma = worklist.pop()
        if gamma is not None and gamma.is_constant():
            continue
        E, denom, spawned, _ = _horrocks_local(row_polys, gamma)
        worklist.extend(spawned)
        if gamma is None and not denom.is_constant():
            # the dense chart misses V(denom); cover it with its own charts
            worklist.append(_squarefree_part(denom, _S))
        charts.append((denom, E))
    dens = [c for c, _ in charts]
    if not gcd_many(dens).is_constant():
        raise CompletionError("completion failed (charts do not cover the line)")

    t_var = Poly.variable(VARS_ST, "t")
    for e in (1, 2, 4, 8, 16, 32):
        weights = _bezout_powers(dens, e)
        if weights is None:
            continue
        factors = []
        b_prev = _TPoly.zero()
        ok = True
        for (den, emat), w in zip(charts, weights):
            # row(x) E(x) = e1 for every substitution x, so the patch
            # E(b_next) E(b_prev)^-1 carries row(b_next) to row(b_prev)
            delta = _TPoly.from_poly(t_var * w * den**e)
            b_next = b_prev + delta
            patched = _tp_mat_mul(_tp_subst_matrix(emat, b_next),
                                  _tp_mat_inverse(_tp_subst_matrix(emat, b_prev)))
            rows = []
            for prow in patched:
                out_row = []
                for x in prow:
                    poly = x.to_poly()
                    if poly is None:
                        ok = False
                        break
                    out_row.append(poly)
                if not ok:
                    break
                rows.append(out_row)
            if not ok:
                break
            factors.append(PolyMatrix(rows))
            b_prev = b_next
        if not ok:
            continue
        total = factors[-1]
        for f in reversed(factors[:-1]):
            total = total * f
        expected = [p.set_var("t", 0) for p in row_polys]
        got = [Poly.zero(VARS_ST)] * m
        for j in range(m):
            acc = Poly.zero(VARS_ST)
            for i in range(m):
                acc = acc + row_polys[i] * total[i, j]
            got[j] = acc
        if got == expected:
            return total
        raise InternalError("patched elimination matrix failed verification")
    raise CompletionError("completion failed (no denominator exponent cleared the patch)")


def _bezout_powers(dens: list[Poly], e: int):
    """Weights w_k with sum w_k den_k^e = 1, or None when gcd is not 1."""
    powers = [d**e for d in dens]
    g = powers[0]
    coeffs = [Poly.const(VARS_ST, 1)]
    for nxt in powers[1:]:
        gg, u, v = _uni_xgcd(g, nxt, _S)
        coeffs = [c * u for c in coeffs] + [v]
        g = gg
    if not g.is_constant() or g.is_zero():
        return None
    inv = Fraction(1) / g.constant_value()
    return [c * inv for c in coeffs]


# ---------------------------------------------------------------------------
# Row completion
# ---------------------------------------------------------------------------


class _RowCompleter:
    """Builds E with row * E = e1 for a unimodular row over Q[s,t]."""

    def __init__(self, row, rng: random.Random, use_heuristics=True):
        self.vars = VARS_ST
        self.work = [p for p in row]
        self.m = len(row)
        self.E = [[Poly.const(VARS_ST, 1) if i == j else Poly.zero(VARS_ST)
                   for j in range(self.m)] for i in range(self.m)]
        self.rng = rng
        self.use_heuristics = use_heuristics

    # column operations applied simultaneously to the working row and E

    def colop(self, i, j, factor: Poly):
        if factor.is_zero():
            return
        self.work[i] = self.work[i] + factor * self.work[j]
        for r in range(self.m):
            self.E[r][i] = self.E[r][i] + factor * self.E[r][j]

    def colscale(self, i, c: Fraction):
        self.work[i] = self.work[i] * c
        for r in range(self.m):
            self.E[r][i] = self.E[r][i] * c

    def colswap(self, i, j):
        if i == j:
            return
        self.work[i], self.work[j] = self.work[j], self.work[i]
        for r in range(self.m):
            self.E[r][i], self.E[r][j] = self.E[r][j], self.E[r][i]

    def apply_matrix(self, b: PolyMatrix):
        """work <- work * b, E <- E * b."""
        self.work = [sum((self.work[k] * b[k, j] for k in range(self.m)),
                         Poly.zero(self.vars)) for j in range(self.m)]
        e = PolyMatrix(self.E) * b
        self.E = e.entries

    def constant_index(self):
        for j, p in enumerate(self.work):
            if not p.is_zero() and p.is_constant():
                return j
        return None

    def finish_with_pivot(self, j):
        c = self.work[j].constant_value()
        for i in range(self.m):
            if i != j and not self.work[i].is_zero():
                self.colop(i, j, self.work[i] * (Fraction(-1) / c))
        self.colscale(j, Fraction(1) / c)
        self.colswap(0, j)

    def run(self) -> PolyMatrix:
        if self.m == 1:
            p = self.work[0]
            if p.is_zero() or not p.is_constant():
                raise CompletionError("completion failed (length-one row is not a unit)")
            self.colscale(0, Fraction(1) / p.constant_value())
            return PolyMatrix(self.E)
        if self.use_heuristics:
            self._heuristic_phase()
        j = self.constant_index()
        if j is None:
            self._general_phase()
            j = self.constant_index()
            if j is None:
                raise CompletionError("completion failed")
        self.finish_with_pivot(j)
        if self.work != [Poly.const(self.vars, 1)] + [Poly.zero(self.vars)] * (self.m - 1):
            raise InternalError("row completion did not reach a unit vector")
        return PolyMatrix(self.E)

    # heuristic layer ---------------------------------------------------

    def _normalize_columns(self):
        for j, p in enumerate(self.work):
            if p.is_zero():
                continue
            scale = _primitive_scale([p])
            if scale != 1:
                self.colscale(j, scale)

    def _heuristic_phase(self):
        for attempt in range(4):
            self._normalize_columns()
            self._reduction_rounds()
            if self.constant_index() is not None:
                return
            self._left_inverse_trick()
            if self.constant_index() is not None:
                return
            if attempt < 3:
                self._random_shear()

    def _reduction_rounds(self):
        for _ in range(40):
            if self.constant_index() is not None:
                return
            nz = [i for i, p in enumerate(self.work) if not p.is_zero()]
            if len(nz) <= 1:
                return  # single non-constant entry cannot be unimodular
            if len(nz) == 2:
                if self._bezout_pair(*nz):
                    continue
                return
            if not self._mutual_reduction_pass(nz):
                return

    def _random_shear(self):
        """Constant elementary operations to unstick mutual reduction."""
        nz = [i for i, p in enumerate(self.work) if not p.is_zero()]
        if len(nz) < 2:
            return
        for _ in range(3):
            i, j = self.rng.sample(nz, 2)
            c = self.rng.choice([1, -1, 2, -2])
            self.colop(i, j, Poly.const(self.vars, c))

    def _bezout_pair(self, a, b) -> bool:
        one = Poly.const(self.vars, 1)
        wa, wb = self.work[a], self.work[b]
        coeffs = lift_coefficients(one, [wa, wb])
        if coeffs is None:
            return False
        u, v = coeffs
        block = PolyMatrix.identity(self.m, self.vars)
        block.entries[a][a] = u
        block.entries[b][a] = v
        block.entries[a][b] = -wb
        block.entries[b][b] = wa
        self.apply_matrix(block)
        return True

    def _mutual_reduction_pass(self, nz) -> bool:
        changed = False
        for i in nz:
            others = [j for j in nz if j != i and not self.work[j].is_zero()]
            if not others or self.work[i].is_zero():
                continue
            rem, coeffs = reduce_with_certificate(self.work[i],
                                                  [self.work[j] for j in others])
            if rem == self.work[i]:
                continue
            for j, c in zip(others, coeffs):
                if not c.is_zero():
                    self.colop(i, j, -c)
            if self.work[i] != rem:
                raise InternalError("mutual reduction bookkeeping drifted")
            changed = True
        return changed

    def _left_inverse_trick(self):
        one = Poly.const(self.vars, 1)
        h = lift_coefficients(one, self.work)
        if h is None:
            raise CompletionError("completion failed (row is not unimodular)")
        pivot = None
        for i, hi in enumerate(h):
            if not hi.is_zero() and hi.is_constant():
                pivot = i
                break
        if pivot is None:
            return
        # rank-one update: B = I + h^T (e_pivot - work); then work B = e_pivot
        # because work h^T = 1, and det B = h_pivot is a nonzero constant
        zero = Poly.zero(self.vars)
        b = [[None] * self.m for _ in range(self.m)]
        for i in range(self.m):
            for j in range(self.m):
                base = one if i == j else zero
                b[i][j] = base + h[i] * ((one if j == pivot else zero) - self.work[j])
        self.apply_matrix(PolyMatrix(b))

    # general layer -----------------------------------------------------

    def _general_phase(self):
        nz = [i for i, p in enumerate(self.work) if not p.is_zero()]
        if len(nz) == 2:
            if not self._bezout_pair(*nz):
                raise CompletionError("completion failed (pair is not unimodular)")
            return
        if len(nz) < 2:
            raise CompletionError("completion failed (row is not unimodular)")
        uses_s = any(_uses_var(p, _S) for p in self.work)
        uses_t = any(_uses_var(p, _T) for p in self.work)
        if not (uses_s and uses_t):
            vi = _S if uses_s else _T
            self._pid_phase(vi)
            return
        lam = self._monicize()
        elim = _eliminate_t_monic(self.work)
        self.apply_matrix(elim)
        self._pid_phase(_S)
        self._unsubstitute(lam)

    def _monicize(self) -> Fraction:
        """Apply s -> s + lam*t so some entry gets a constant t-lead coefficient,
        and move that entry to position 0.  Returns lam."""
        s = Poly.variable(self.vars, "s")
        t = Poly.variable(self.vars, "t")
        pool = [0]
        for k in range(1, 40):
            pool.extend([k, -k])
        for lam in pool:
            for idx, p in enumerate(self.work):
                if p.is_zero() or p.is_constant():
                    continue
                d = int(p.degree)
                top = Poly(self.vars, {m: c for m, c in p.terms.items() if sum(m) == d})
                val = top.set_var("s", lam).set_var("t", 1)
                if not val.is_zero():
                    if lam:
                        sub = {"s": s + t * Fraction(lam)}
                        self.work = [w.substitute(sub) for w in self.work]
                        self.E = [[x.substitute(sub) for x in row] for row in self.E]
                    self.colswap(0, idx)
                    return Fraction(lam)
        raise CompletionError("completion failed (no change of variables made a monic entry)")

    def _unsubstitute(self, lam: Fraction):
        if lam == 0:
            return
        s = Poly.variable(self.vars, "s")
        t = Poly.variable(self.vars, "t")
        sub = {"s": s - t * lam}
        self.work = [w.substitute(sub) for w in self.work]
        self.E = [[x.substitute(sub) for x in row] for row in self.E]

    def _pid_phase(self, vi: int):
        """Completion of a univariate unimodular row by a Bezout chain."""
        nz = [i for i, p in enumerate(self.work) if not p.is_zero()]
        if not nz:
            raise CompletionError("completion failed (zero row)")
        lead = nz[0]
        if lead != 0:
            self.colswap(0, lead)
        for i in range(1, self.m):
            if self.work[i].is_zero():
                continue
            a, b = self.work[0], self.work[i]
            g, u, v = _uni_xgcd(a, b, vi)
            qa = exact_div(a, g)
            qb = exact_div(b, g)
            block = PolyMatrix.identity(self.m, self.vars)
            block.entries[0][0] = u
            block.entries[i][0] = v
            block.entries[0][i] = -qb
            block.entries[i][i] = qa
            self.apply_matrix(block)
        if not self.work[0].is_constant() or self.work[0].is_zero():
            raise CompletionError("completion failed (univariate row has a common factor)")


def _complete_row(row, rng, use_heuristics=True) -> PolyMatrix:
    e = _RowCompleter(list(row), rng, use_heuristics).run()
    return e


def _complete_rows(f: PolyMatrix, rng, use_heuristics=True) -> PolyMatrix:
    """M (cols x cols, unimodular) with f M = [I_n, 0] for row-unimodular f."""
    n, m = f.rows, f.cols
    if n > m:
        raise ValueError("expected at least as many columns as rows")
    e1 = _complete_row(f.row(0), rng, use_heuristics)
    fe = f * e1
    if n == 1:
        return e1
    # rescale the untouched columns to primitive integer content; the scales
    # are units, so e1 stays unimodular and row 0 of fe stays (1, 0, ..., 0)
    for j in range(1, m):
        scale = _primitive_scale([fe[i, j] for i in range(n)])
        if scale != 1:
            for i in range(n):
                fe.entries[i][j] = fe.entries[i][j] * scale
            for i in range(m):
                e1.entries[i][j] = e1.entries[i][j] * scale
    sub = fe.submatrix(range(1, n), range(1, m))
    mp = _complete_rows(sub, rng, use_heuristics)
    zero = Poly.zero(f.vars)
    one = Poly.const(f.vars, 1)
    diag = PolyMatrix([[one if (i == 0 and j == 0) else
                        (mp[i - 1, j - 1] if i > 0 and j > 0 else zero)
                        for j in range(m)] for i in range(m)])
    # Y carries the row-clearing matrix L = [[1,0],[-c,I]] in its leading block
    y = PolyMatrix.identity(m, f.vars)
    for i in range(1, n):
        y.entries[i][0] = -fe[i, 0]
    total = e1 * diag * y
    check = f * total
    expected = PolyMatrix([[one if i == j else zero for j in range(m)] for i in range(n)])
    if check != expected:
        raise InternalError("row completion product check failed")
    return total


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


@dataclass
class CompletionCertificate:
    """Verified completion data: m unimodular, m * f = [I_n; 0]."""

    M: PolyMatrix
    M_inv: PolyMatrix
    det: Fraction
    deg_M: int
    bound: int
    within_bound: bool


def _target_block(n: int, m: int, vars) -> PolyMatrix:
    one, zero = Poly.const(vars, 1), Poly.zero(vars)
    return PolyMatrix([[one if i == j else zero for j in range(n)] for i in range(m)])


def _constant_minor_completion(f: PolyMatrix) -> PolyMatrix | None:
    """Fast path: when some maximal minor of f is a nonzero constant, the
    matrix [f | unit columns on the complementary rows] is invertible and
    its inverse is a completion."""
    m, n = f.rows, f.cols
    zero = Poly.zero(f.vars)
    one = Poly.const(f.vars, 1)
    for rows in combinations(range(m), n):
        d = f.submatrix(rows, range(n)).det()
        if d.is_zero() or not d.is_constant():
            continue
        complement = [i for i in range(m) if i not in rows]
        # place each unit column at its own index when that slot is free,
        # so e.g. completing a lone unit column yields a plain transposition
        slots = list(range(n, m))
        placement = {}
        for i in complement:
            if i in slots:
                placement[i] = i
                slots.remove(i)
        for i in complement:
            if i not in placement:
                placement[i] = slots.pop(0)
        ncols = [f.column(j) for j in range(n)] + [None] * (m - n)
        for i, slot in placement.items():
            ncols[slot] = [one if r == i else zero for r in range(m)]
        nmat = PolyMatrix.from_columns(ncols)
        try:
            inv, _ = mat_inverse(nmat)
        except ValueError:
            continue
        return inv
    return None


def complete_columns(f: PolyMatrix, seed: int = 0,
                     use_heuristics: bool = True) -> CompletionCertificate:
    """Complete a unimodular m x n matrix (m > n) to M with M f = [I_n; 0].

    The certificate (M inverse, constant determinant, exact product) is
    verified before returning; failure raises CompletionError rather than
    ever producing an unverified answer.
    """
    m, n = f.rows, f.cols
    if m <= n:
        raise ValueError("expected strictly more rows than columns")
    if not is_unimodular(f):
        raise ValueError("matrix is not unimodular")
    rng = random.Random(seed)
    big = _constant_minor_completion(f) if use_heuristics else None
    if big is None:
        mt = _complete_rows(f.transpose(), rng, use_heuristics)
        big = mt.transpose()
    try:
        inv, det = mat_inverse(big)
    except ValueError as exc:
        raise CompletionError(f"completion failed ({exc})") from exc
    if big * f != _target_block(n, m, f.vars):
        raise CompletionError("completion failed (certificate product check)")
    deg_f = 0 if f.degree == NEG_INF else int(f.degree)
    bound = qs_degree_bound(n, deg_f)
    deg_m = 0 if big.degree == NEG_INF else int(big.degree)
    return CompletionCertificate(M=big, M_inv=inv, det=det, deg_M=deg_m,
                                 bound=bound, within_bound=deg_m <= bound)


def variable_elimination_step(f: PolyMatrix, var: str, seed: int = 0) -> PolyMatrix:
    """For row-unimodular f (n x m, n <= m): unimodular M with f M = f|_{var:=0}."""
    if var not in f.vars:
        raise ValueError(f"unknown variable {var!r}")
    if not is_unimodular(f.transpose()):
        raise ValueError("matrix is not unimodular")
    n, m = f.rows, f.cols
    specialized = f.map_entries(lambda p: p.set_var(var, 0))
    if specialized == f:
        return PolyMatrix.identity(m, f.vars)
    if n == 1:
        row = f.row(0)
        const_j = next((j for j, p in enumerate(row)
                        if not p.is_zero() and p.is_constant()), None)
        if const_j is not None:
            c = row[const_j].constant_value()
            out = PolyMatrix.identity(m, f.vars)
            for i in range(m):
                if i == const_j:
                    continue
                diff = row[i].set_var(var, 0) - row[i]
                if not diff.is_zero():
                    out.entries[const_j][i] = diff * (Fraction(1) / c)
            _check_elimination(f, out, specialized)
            return out
    rng = random.Random(seed)
    m1 = _complete_rows(f, rng)
    m2 = _complete_rows(specialized, rng)
    m2_inv, _ = mat_inverse(m2)
    out = m1 * m2_inv
    _check_elimination(f, out, specialized)
    return out


def _check_elimination(f, m, specialized):
    if f * m != specialized:
        raise InternalError("variable elimination product check failed")
    mat_inverse(m)  # raises unless unimodular
