import random
from fractions import Fraction

import pytest

from mubasis.arith import VARS_ST, Poly, PolyMatrix, gcd_many
from mubasis.errors import ValidationError, VerificationError
from mubasis.grobner import modules_equal
from mubasis.pipeline import (
    compute_mu_basis,
    extract_basis,
    homogenize_ideal,
    outer_product,
    validate,
    verify_mu_basis,
)
from helpers import random_poly

S = Poly.variable(VARS_ST, "s")
T = Poly.variable(VARS_ST, "t")
ONE = Poly.const(VARS_ST, 1)
ZERO = Poly.zero(VARS_ST)


def reference_input():
    return [S**2, T**2, S**2 - 1, S**2 + 1]


def reference_basis():
    """The published basis for the reference surface; alpha = -1 was frozen
    from a by-hand expansion of the four signed 3x3 determinants."""
    return (
        (-(T**2), ONE, T**2, ZERO),
        (Poly.const(VARS_ST, -2), ZERO, ONE, ONE),
        (ONE - S**2, ZERO, S**2, ZERO),
    )


class TestValidate:
    def test_reference(self):
        par = validate(reference_input())
        assert par.d == 2 and par.warnings == ()

    def test_common_factor(self):
        with pytest.raises(ValidationError, match="common factor s"):
            validate([S, S, S, S])

    def test_degenerate_unit(self):
        par = validate([ONE, ZERO, ZERO, ZERO])
        assert par.d == 0
        assert len(par.warnings) == 2

    def test_all_zero(self):
        with pytest.raises(ValidationError, match="zero"):
            validate([ZERO, ZERO, ZERO, ZERO])


class TestHomogenizeIdeal:
    def test_reference(self):
        par = validate(reference_input())
        b, d = homogenize_ideal(par)
        assert d == 2
        from mubasis.arith import VARS_STU

        s3 = Poly.variable(VARS_STU, "s")
        t3 = Poly.variable(VARS_STU, "t")
        u3 = Poly.variable(VARS_STU, "u")
        assert b == (s3**2, t3**2, s3**2 - u3**2, s3**2 + u3**2)

    def test_equal_degree_homogeneous_fixed_point(self):
        par = validate([S**2, S * T, T**2, S**2 + T**2])
        b, d = homogenize_ideal(par)
        assert all(bi.is_homogeneous() and int(bi.degree) == 2 for bi in b)

    def test_linear_with_constants(self):
        par = validate([S, T, ONE, ONE])
        b, d = homogenize_ideal(par)
        assert d == 1
        from mubasis.arith import VARS_STU

        u3 = Poly.variable(VARS_STU, "u")
        assert b[2] == u3 and b[3] == u3


class TestOuterProduct:
    def test_unit_vectors(self):
        e = [tuple(ONE if i == j else ZERO for j in range(4)) for i in range(4)]
        out = outer_product(e[0], e[1], e[2])
        assert out == (ZERO, ZERO, ZERO, -ONE)

    def test_repeated_row_vanishes(self):
        p = (S, T, ONE, ZERO)
        r = (T, S, ZERO, ONE)
        assert all(c.is_zero() for c in outer_product(p, p, r))

    def test_reference_basis_gives_minus_input(self):
        p, q, r = reference_basis()
        out = outer_product(p, q, r)
        a = reference_input()
        assert list(out) == [-x for x in a]

    def test_multilinearity_in_first_slot(self):
        rng = random.Random(3)
        p = tuple(random_poly(rng, VARS_ST, 1) for _ in range(4))
        q = tuple(random_poly(rng, VARS_ST, 1) for _ in range(4))
        r = tuple(random_poly(rng, VARS_ST, 1) for _ in range(4))
        doubled = outer_product(tuple(2 * x for x in p), q, r)
        single = outer_product(p, q, r)
        assert list(doubled) == [2 * c for c in single]


class TestVerify:
    def test_reference_basis_alpha(self):
        par = validate(reference_input())
        alpha = verify_mu_basis(reference_basis(), par)
        assert alpha == Fraction(-1)

    def test_scaled_basis(self):
        par = validate(reference_input())
        p, q, r = reference_basis()
        scaled = (tuple(2 * x for x in p), q, r)
        assert verify_mu_basis(scaled, par) == Fraction(-2)

    def test_degenerate_triple(self):
        par = validate(reference_input())
        p, q, r = reference_basis()
        with pytest.raises(VerificationError, match="degenerate triple"):
            verify_mu_basis((p, p, r), par)

    def test_not_a_syzygy(self):
        par = validate(reference_input())
        p, q, r = reference_basis()
        bad = ((ONE, ZERO, ZERO, ZERO), q, r)
        with pytest.raises(VerificationError, match="not a syzygy"):
            verify_mu_basis(bad, par)

    def test_not_generating(self):
        # (s, t, 1, 1): the triple below consists of honest syzygies whose
        # outer product is proportional, but they span a proper submodule
        par = validate([S, T, ONE, ONE])
        p = (ONE, ZERO, -S, ZERO)
        q = (ZERO, ONE, -T, ZERO)
        r = (ZERO, ZERO, ONE, -ONE)
        scaled = (tuple(S * x for x in p), q, r)
        with pytest.raises(VerificationError):
            verify_mu_basis(scaled, par)


class TestExtractBasis:
    def test_reference_matrices_give_published_basis(self):
        par = validate(reference_input())
        g = PolyMatrix([
            [Poly.const(VARS_ST, -2), -(T**2), -(T**2), ONE - S**2],
            [ZERO, ONE, S**2, ZERO],
            [ONE, T**2, ZERO, S**2],
            [ONE, ZERO, ZERO, ZERO],
        ])
        # completed matrix: first column is the unimodular relation column
        n = PolyMatrix([
            [ZERO, ZERO, ONE, ZERO],
            [S**2, ONE, ZERO, ZERO],
            [-ONE, ZERO, ZERO, ZERO],
            [-(T**2), ZERO, ZERO, ONE],
        ])
        basis = extract_basis(g, n, 1)
        assert basis == reference_basis()

    def test_identity_with_n_zero(self):
        g = PolyMatrix([
            [S, T, ONE],
            [ZERO, S, T],
            [ONE, ZERO, S],
            [T, ONE, ZERO],
        ])
        basis = extract_basis(g, PolyMatrix.identity(3, VARS_ST), 0)
        assert basis == tuple(tuple(g.column(j)) for j in range(3))

    def test_kernel_column_check(self):
        g = PolyMatrix([
            [ONE, ZERO, ZERO, ZERO],
            [ZERO, ONE, ZERO, ZERO],
            [ZERO, ZERO, ONE, ZERO],
            [ZERO, ZERO, ZERO, ONE],
        ])
        with pytest.raises(ValueError, match="kernel columns"):
            extract_basis(g, PolyMatrix.identity(4, VARS_ST), 1)


class TestComputeMuBasis:
    def test_reference_end_to_end(self):
        par = validate(reference_input())
        mb, report = compute_mu_basis(par, seed=0)
        assert report.branch == "pd2"
        assert mb.alpha != 0
        assert report.beta2 == 1
        assert report.gamma1 == 2 and report.gamma2 == 2
        assert modules_equal(list(mb.vectors), list(reference_basis()))

    def test_bilinear_patch(self):
        par = validate([ONE, S, T, S * T])
        mb, report = compute_mu_basis(par, seed=0)
        assert max(mb.degrees) <= 1
        expected = [
            (-S, ONE, ZERO, ZERO),
            (-T, ZERO, ONE, ZERO),
            (ZERO, -T, ZERO, ONE),
        ]
        assert modules_equal(list(mb.vectors), expected)

    def test_unit_component(self):
        par = validate([ONE, ZERO, ZERO, ZERO])
        mb, report = compute_mu_basis(par, seed=0)
        assert report.branch == "pd1"
        assert abs(mb.alpha) == 1
        e = [tuple(ONE if i == j else ZERO for j in range(4)) for i in range(4)]
        assert modules_equal(list(mb.vectors), e[1:])

    def test_free_branch_monomial_curve_style(self):
        # four coprime binary cubics: the homogenized ideal is perfect of
        # height 2, so its syzygy module is free and mu degrees sum to d
        par = validate([S**3, S**2 * T, S * T**2, T**3])
        mb, report = compute_mu_basis(par, seed=0)
        assert report.branch == "pd1"
        assert report.mu is not None and sum(report.mu) == 3
        assert max(mb.degrees) <= 3

    def test_scaling_invariance_of_alpha(self):
        par = validate(reference_input())
        mb, _ = compute_mu_basis(par, seed=0)
        scaled = (tuple(3 * x for x in mb.p), mb.q, mb.r)
        assert verify_mu_basis(scaled, par) == 3 * mb.alpha

    def test_random_small_inputs_verified(self):
        rng = random.Random(61)
        done = 0
        while done < 6:
            polys = [random_poly(rng, VARS_ST, rng.randint(1, 2), coeff_bound=3)
                     for _ in range(4)]
            nz = [p for p in polys if not p.is_zero()]
            if not nz or not gcd_many(nz).is_constant():
                continue
            if max(int(p.degree) for p in nz) < 1:
                continue
            par = validate(polys)
            mb, report = compute_mu_basis(par, seed=done)
            assert len(mb.vectors) == 3
            assert mb.alpha != 0
            if report.branch == "pd1":
                assert max(mb.degrees) <= par.d
            done += 1
