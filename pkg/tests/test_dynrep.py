from fractions import Fraction

import pytest

from dynrx import linalg
from dynrx.dynrep import (
    DiffOp,
    antipode_generator,
    counit_generator,
    dmat_mul,
    dmat_sub,
    dmat_zero_at,
    morphism_rigidity_check,
    pi_generator,
    verify_antipode,
    verify_coproduct_compat,
    verify_product_relation,
    verify_rll,
)
from dynrx.lam import SampledLambda
from dynrx.liealg import cg_decompose, irrep_sl2, tensor, trivial_rep, vector_rep_gln
from dynrx.scalars import QParam, classical_q, random_regular_point


def sampled(spec, seed, bits=8):
    return SampledLambda(spec, random_regular_point(spec.qp, spec.ncoords, seed=seed, bits=bits))


def test_diffop_composition_shifts(qp4):
    # (f T_b)(g T_d) = f g(.-b) T_{b+d}: check against hand substitution
    V = irrep_sl2(Fraction(1, 2), qp4)
    lam = sampled(V.spec, 0)

    def fco(lh):
        return [[lh.simple_qpow(0), Fraction(0)], [Fraction(0), Fraction(1)]]

    A = DiffOp(V, {(2,): fco})
    B = DiffOp(V, {(-2,): fco})
    C = A.compose(B)
    assert set(C.terms) == {(0,)}
    got = C.terms[(0,)](lam)
    x = lam.simple_qpow(0)
    xs = lam.shifted((2,)).simple_qpow(0)
    assert got[0][0] == x * xs and got[1][1] == 1


def test_diffop_associativity(qp4):
    V = irrep_sl2(Fraction(1, 2), qp4)
    lam = sampled(V.spec, 1)
    LV = pi_generator(V, V)
    ops = [LV[0][0], LV[0][1], LV[1][0]]
    lhs = ops[0].compose(ops[1]).compose(ops[2])
    rhs = ops[0].compose(ops[1].compose(ops[2]))
    assert lhs.equals_at(rhs, lam)


def test_bigrading_relations(qp4):
    # f(lambda^1) L_ab = L_ab f(lambda^1 + alpha) and the lambda^2 analogue
    V = irrep_sl2(Fraction(1, 2), qp4)
    U = irrep_sl2(1, qp4)
    lam = sampled(V.spec, 2)
    LV = pi_generator(V, U)

    def f(lh):
        return lh.simple_qpow(0) + 3  # an arbitrary rational function of lambda

    for a in range(2):
        for b in range(2):
            alpha, beta = V.weights[a], V.weights[b]
            op = LV[a][b]
            lhs = op.scale_left_h(f)
            # right multiplication by f(lambda^1 + alpha): End(U)-diagonal at shifted arg
            def f_shift(lh, alpha=alpha):
                return f(lh.shifted(tuple(-x for x in alpha)))
            rhs_r = DiffOp(U, {tuple([0]): (lambda lh: [[f_shift(lh.shifted(U.weights[r])) if r == c else Fraction(0) for c in range(U.dim)] for r in range(U.dim)])})
            rhs = op.compose(rhs_r)
            assert lhs.equals_at(rhs, lam), (a, b, "lambda1")
            lhs2 = op.scale_plain(f)
            def f_shift2(lh, beta=beta):
                return f(lh.shifted(tuple(-x for x in beta)))
            rhs2 = op.compose(DiffOp(U, {tuple([0]): (lambda lh: linalg.mat_scale(linalg.eye(U.dim), f_shift2(lh)))}))
            assert lhs2.equals_at(rhs2, lam), (a, b, "lambda2")


def test_counit_is_pi_trivial(qp4):
    V = irrep_sl2(1, qp4)
    triv = trivial_rep(V.spec)
    lam = sampled(V.spec, 3)
    assert dmat_zero_at(dmat_sub(pi_generator(V, triv), counit_generator(V, triv)), lam) is None


def test_trivial_v_is_unit(qp4):
    U = irrep_sl2(Fraction(1, 2), qp4)
    T = trivial_rep(U.spec)
    lam = sampled(U.spec, 4)
    [op] = [x for row in pi_generator(T, U) for x in row]
    assert op.equals_at(DiffOp.identity(U), lam)


@pytest.mark.parametrize("case", ["sl2-half", "sl2-one", "gl2"])
def test_relations(case, qp4):
    if case == "sl2-half":
        V = W = U = irrep_sl2(Fraction(1, 2), qp4)
    elif case == "sl2-one":
        V = irrep_sl2(Fraction(1, 2), qp4)
        W = U = irrep_sl2(1, qp4)
    else:
        V = W = U = vector_rep_gln(2, qp4)
    lams = [sampled(V.spec, s) for s in range(3)]
    assert verify_rll(V, W, U, lams).passed
    assert verify_product_relation(V, W, U, lams).passed
    assert verify_coproduct_compat(V, W, U, lams).passed
    assert verify_antipode(V, U, lams).passed


def test_rll_trivial_u_reduces_to_counit(qp4):
    V = W = irrep_sl2(Fraction(1, 2), qp4)
    T = trivial_rep(V.spec)
    lams = [sampled(V.spec, 9)]
    assert verify_rll(V, W, T, lams).passed


def test_product_trivial_v(qp4):
    # V trivial: both sides are (L^W)^{13}
    W = irrep_sl2(Fraction(1, 2), qp4)
    T = trivial_rep(W.spec)
    lams = [sampled(W.spec, 10)]
    assert verify_product_relation(T, W, W, lams).passed


def test_antipode_via_kprime_matches(qp4):
    V = U = irrep_sl2(Fraction(1, 2), qp4)
    lam = sampled(V.spec, 11)
    A = antipode_generator(V, U, "verma", "K")
    B = antipode_generator(V, U, "verma", "Kprime")
    assert dmat_zero_at(dmat_sub(A, B), lam) is None


def test_morphism_rigidity(qp4, qpc):
    for qp in (qp4, qpc):
        A = irrep_sl2(Fraction(1, 2), qp)
        T = tensor(A, A)
        lams = [sampled(A.spec, s) for s in range(2)]
        Vs = [A]
        assert morphism_rigidity_check(T, T, linalg.eye(T.dim), Vs, lams).passed
        U3, tau, taubar = next(s for s in cg_decompose(A, A) if s[0].dim == 3)
        proj = linalg.mat_mul(tau, taubar)
        assert morphism_rigidity_check(T, T, proj, Vs, lams).passed
        bad = [[Fraction(1 if (r, c) == (0, 0) else 0) for c in range(T.dim)]
               for r in range(T.dim)]
        assert not morphism_rigidity_check(T, T, bad, Vs, lams).passed


def test_diffop_json_and_str(qp4):
    V = irrep_sl2(Fraction(1, 2), qp4)
    lam = sampled(V.spec, 12)
    op = pi_generator(V, V)[0][0]
    js = op.to_json(lam)
    assert js[0]["coefficient"]["rows"] == 2
    assert "T^-1" in str(op)
