"""End-to-end computation of a mu-basis for P(s,t) = (a1, a2, a3, a4).

The pipeline homogenizes the parametrization, builds the graded free
resolution of the homogenized ideal keeping the four given generators as
the first map, and then branches: when the syzygy module of the homogenized
ideal is free its dehomogenized minimal generators already form a basis;
otherwise the dehomogenized presentation is split by a certified unimodular
completion and the basis is read off the last three columns.  Every result
is verified (moving-plane identities, outer-product proportionality, module
equality with the full syzygy module) before being returned.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    NEG_INF,
    VARS_ST,
    Poly,
    PolyMatrix,
    dehomogenize,
    exact_div,
    gcd_many,
    homogenize,
)
from .bounds import BoundsReport, report_for_resolution
from .errors import InternalError, ValidationError, VerificationError
from .grobner import buchberger, free_resolution, syzygy_generators
from .quillen_suslin import complete_columns


@dataclass(frozen=True)
class Parametrization:
    """Validated input data: four polynomials in (s,t) with trivial gcd."""

    a: tuple
    d: int
    warnings: tuple = ()


@dataclass
class MuBasis:
    """Three moving planes forming a basis of the syzygy module."""

    p: tuple
    q: tuple
    r: tuple
    alpha: Fraction
    degrees: tuple
    degree_sum: int

    @property
    def vectors(self):
        return (self.p, self.q, self.r)


@dataclass
class PipelineReport:
    branch: str
    d: int
    beta2: int
    gamma1: int | None
    gamma2: int | None
    shifts_first: tuple
    shifts_middle: tuple
    shifts_last: tuple
    mu: tuple | None
    completion: dict | None
    bounds: BoundsReport
    seed: int
    warnings: tuple
    timings: dict


def validate(polys) -> Parametrization:
    """Check the defining conditions; degenerate geometry warns, bad gcd fails."""
    polys = list(polys)
    if len(polys) != 4:
        raise ValidationError("a parametrization needs exactly four polynomials")
    for p in polys:
        if not isinstance(p, Poly) or p.vars != VARS_ST:
            raise ValidationError("parametrization components must live in Q[s,t]")
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        raise ValidationError("all four polynomials are zero")
    g = gcd_many(nonzero)
    if not g.is_constant():
        raise ValidationError(f"components share the common factor {g}")
    warnings = []
    if len(nonzero) < 4:
        warnings.append("some components are zero (degenerate geometry)")
    d = max(int(p.degree) for p in nonzero)
    if d == 0:
        warnings.append("all components are constant (degenerate geometry)")
    return Parametrization(a=tuple(polys), d=d, warnings=tuple(warnings))


def homogenize_ideal(par: Parametrization):
    """Homogenized generators (b1..b4, d); their gcd is asserted trivial."""
    b = tuple(homogenize(p, par.d) for p in par.a)
    nonzero = [x for x in b if not x.is_zero()]
    if not gcd_many(nonzero).is_constant():
        raise InternalError("homogenized generators acquired a common factor")
    return b, par.d


def outer_product(p, q, r):
    """Signed 3x3-determinant 4-vector of three 4-vectors (signs +,-,+,-)."""
    rows = [tuple(p), tuple(q), tuple(r)]
    if any(len(v) != 4 for v in rows):
        raise ValueError("outer product needs three 4-vectors")
    comps = []
    for k in range(4):
        cols = [j for j in range(4) if j != k]
        det = PolyMatrix([[rows[i][j] for j in cols] for i in range(3)]).det()
        comps.append(det if k % 2 == 0 else -det)
    return tuple(comps)


def verify_mu_basis(basis, par: Parametrization) -> Fraction:
    """Three-stage verification; returns the proportionality constant alpha.

    (1) each vector is a moving plane; (2) the outer product is a nonzero
    constant multiple alpha of the parametrization; (3) the vectors generate
    the full syzygy module (double Groebner reduction).
    """
    basis = [tuple(v) for v in basis]
    if len(basis) != 3 or any(len(v) != 4 for v in basis):
        raise VerificationError("a candidate basis must consist of three 4-vectors")
    for v in basis:
        acc = Poly.zero(VARS_ST)
        for comp, ai in zip(v, par.a):
            if not comp.is_zero() and not ai.is_zero():
                acc = acc + comp * ai
        if not acc.is_zero():
            raise VerificationError("not a syzygy")
    outer = outer_product(*basis)
    if all(c.is_zero() for c in outer):
        raise VerificationError("alpha = 0 (degenerate triple)")
    alpha = None
    for oc, ai in zip(outer, par.a):
        if ai.is_zero():
            continue
        quot = exact_div(oc, ai)
        if quot is None or not quot.is_constant():
            raise VerificationError("outer product not proportional")
        alpha = quot.constant_value()
        break
    if alpha is None or alpha == 0:
        raise VerificationError("outer product not proportional")
    for oc, ai in zip(outer, par.a):
        if oc != ai * alpha:
            raise VerificationError("outer product not proportional")
    syz = syzygy_generators(list(par.a))
    basis_gb = buchberger(basis)
    for w in syz:
        if not basis_gb.contains(w):
            raise VerificationError("does not generate Syz")
    syz_gb = buchberger(syz)
    for v in basis:
        if not syz_gb.contains(v):
            raise VerificationError("does not generate Syz")
    return alpha


def extract_basis(g_mat: PolyMatrix, n_mat: PolyMatrix, n: int):
    """Basis columns of G N at positions n+1, n+2, n+3 (1-based).

    Requires the first n columns of G N to vanish (they span ker G).
    """
    if g_mat.rows != 4 or n_mat.rows != n_mat.cols or g_mat.cols != n_mat.rows:
        raise ValueError("expected G (4 x m) and square N (m x m)")
    if n != g_mat.cols - 3:
        raise ValueError("expected n = m - 3")
    gn = g_mat * n_mat
    for j in range(n):
        if any(not gn[i, j].is_zero() for i in range(4)):
            raise ValueError("kernel columns of G*N are not zero")
    return tuple(tuple(gn.column(j)) for j in range(n, n + 3))


def _vector_degree(vec) -> int:
    degs = [int(p.degree) for p in vec if not p.is_zero()]
    return max(degs) if degs else 0


def _interreduce(basis):
    """Best-effort degree lowering: reduce each vector modulo the other two.

    Elementary operations only, so the span and the outer product (hence
    alpha) are unchanged; a vector is replaced only when its degree drops.
    """
    vecs = [tuple(v) for v in basis]
    for _ in range(4):
        changed = False
        for i in range(3):
            others = [vecs[j] for j in range(3) if j != i]
            gb = buchberger(others)
            nf = tuple(gb.normal_form(vecs[i]))
            if all(p.is_zero() for p in nf):
                continue
            if _vector_degree(nf) < _vector_degree(vecs[i]):
                vecs[i] = nf
                changed = True
        if not changed:
            break
    return tuple(vecs)


def compute_mu_basis(par: Parametrization, seed: int = 0):
    """Run the full pipeline; returns (MuBasis, PipelineReport).

    The returned basis always passes verify_mu_basis; a verification
    failure downstream of a successful completion is an internal error.
    """
    timings = {}
    t0 = time.perf_counter()
    b, d = homogenize_ideal(par)
    res = free_resolution(list(b), fixed_first_map=True)
    timings["resolution"] = time.perf_counter() - t0

    completion = None
    mu = None
    if res.ranks[2] == 0:
        branch = "pd1"
        if res.ranks[1] != 3:
            raise InternalError("free syzygy module does not have rank 3")
        basis = tuple(tuple(dehomogenize(e) for e in col) for col in res.d1.columns())
        mu = tuple(qi - d for qi in res.q)
        if sum(mu) != d:
            raise InternalError("free-branch shifts do not sum to the input degree")
        if any(_vector_degree(v) > d for v in basis):
            raise InternalError("free-branch basis exceeds the degree-d bound")
    else:
        branch = "pd2"
        t1 = time.perf_counter()
        g_mat = res.d1.map_entries(dehomogenize)
        f_mat = res.d2.map_entries(dehomogenize)
        if g_mat.degree != NEG_INF and g_mat.degree > 2 * d - 1:
            raise InternalError("presentation entries exceed the 2d-1 degree bound")
        if f_mat.degree != NEG_INF and f_mat.degree > 2 * d:
            raise InternalError("relation entries exceed the 2d degree bound")
        cert = complete_columns(f_mat, seed=seed)
        timings["completion"] = time.perf_counter() - t1
        n = res.ranks[2]
        basis = extract_basis(g_mat, cert.M_inv, n)
        completion = {
            "deg_M": cert.deg_M,
            "bound": cert.bound,
            "within_bound": cert.within_bound,
            "det": cert.det,
        }
    t2 = time.perf_counter()
    basis = _interreduce(basis)
    try:
        alpha = verify_mu_basis(basis, par)
    except VerificationError as exc:
        raise InternalError(f"pipeline produced an invalid basis: {exc}") from exc
    timings["verification"] = time.perf_counter() - t2

    t3 = time.perf_counter()
    bounds_report = report_for_resolution(res, d, 4)
    timings["bounds"] = time.perf_counter() - t3
    timings["total"] = time.perf_counter() - t0

    degrees = tuple(_vector_degree(v) for v in basis)
    mb = MuBasis(p=basis[0], q=basis[1], r=basis[2], alpha=alpha,
                 degrees=degrees, degree_sum=sum(degrees))
    bounds_report.observed["basis_degrees"] = degrees
    bounds_report.observed["basis_degree_max"] = max(degrees)
    report = PipelineReport(
        branch=branch,
        d=d,
        beta2=res.ranks[2],
        gamma1=int(res.d1.degree) if res.d1 is not None else None,
        gamma2=int(res.d2.degree) if res.d2 is not None else None,
        shifts_first=tuple(res.shifts0),
        shifts_middle=tuple(res.q),
        shifts_last=tuple(res.p),
        mu=mu,
        completion=completion,
        bounds=bounds_report,
        seed=seed,
        warnings=par.warnings,
        timings=timings,
    )
    return mb, report
