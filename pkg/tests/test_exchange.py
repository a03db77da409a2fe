import itertools
from fractions import Fraction

import pytest

from dynrx import linalg
from dynrx.exchange import (
    NotUnipotent,
    asymptotic_alcove,
    asymptotic_leading,
    closed_form_gln,
    exchange_matrix,
    fusion_matrix,
    fusion_matrix_abrr,
    hecke_report,
    invert_unipotent,
    kmat,
    kprime,
    ktilde,
    r00_block,
    r00_cross_check,
    r00_scalar_check,
    two_point,
    verify_cocycle,
    verify_qdyb,
)
from dynrx.lam import SampledLambda, SymbolicLambda
from dynrx.liealg import (
    dual_rep,
    irrep_sl2,
    tensor,
    trivial_rep,
    vector_rep_gln,
)
from dynrx.scalars import QParam, RatFunc, classical_q, random_regular_point


def sampled(spec, seed, bits=10):
    return SampledLambda(spec, random_regular_point(spec.qp, spec.ncoords, seed=seed, bits=bits))


def mats_equal(A, B):
    return all(
        RatFunc.coerce(a) == RatFunc.coerce(b) if isinstance(a, RatFunc) or isinstance(b, RatFunc)
        else a == b
        for ra, rb in zip(A, B) for a, b in zip(ra, rb)
    )


def test_fusion_trivial_slots(qp4):
    V = irrep_sl2(1, qp4)
    T = trivial_rep(V.spec)
    lam = sampled(V.spec, 0)
    assert linalg.mat_eq(fusion_matrix(T, V, lam), linalg.eye(3))
    assert linalg.mat_eq(fusion_matrix(V, T, lam), linalg.eye(3))


def test_fusion_unipotent_and_weight_zero(qp4):
    V = irrep_sl2(Fraction(1, 2), qp4)
    W = irrep_sl2(1, qp4)
    lam = sampled(V.spec, 1)
    J = fusion_matrix(W, V, lam)
    d = W.dim * V.dim
    for r in range(d):
        for c in range(d):
            rw, rv = divmod(r, V.dim)
            cw, cv = divmod(c, V.dim)
            if r == c:
                assert J[r][c] == 1
            elif J[r][c] != 0:
                # strictly lower first-slot degree, same total weight
                assert W.zdeg[rw] < W.zdeg[cw]
                assert (
                    W.weights[rw][0] + V.weights[rv][0]
                    == W.weights[cw][0] + V.weights[cv][0]
                )


def test_closed_form_symbolic_gl2(qp4, qpc):
    for qp in (qp4, qpc):
        W = vector_rep_gln(2, qp)
        lam = SymbolicLambda(W.spec)
        assert mats_equal(fusion_matrix(W, W, lam), closed_form_gln(2, qp, "J").matrix("symbolic"))
        assert mats_equal(exchange_matrix(W, W, lam), closed_form_gln(2, qp, "R").matrix("symbolic"))


def test_closed_form_gl3_samples(qp4, qpc):
    for qp in (qp4, qpc):
        W = vector_rep_gln(3, qp)
        for seed in range(5):
            lam = sampled(W.spec, seed)
            assert linalg.mat_eq(
                exchange_matrix(W, W, lam), closed_form_gln(3, qp, "R").matrix(lam.point)
            )
            assert linalg.mat_eq(
                fusion_matrix(W, W, lam), closed_form_gln(3, qp, "J").matrix(lam.point)
            )


def test_two_method_agreement_symbolic(qp4):
    spins = [Fraction(1, 2), Fraction(1), Fraction(3, 2)]
    lam = SymbolicLambda(irrep_sl2(0, qp4).spec)
    for sa, sb in itertools.product(spins, repeat=2):
        A, B = irrep_sl2(sa, qp4), irrep_sl2(sb, qp4)
        assert mats_equal(fusion_matrix(A, B, lam), fusion_matrix_abrr(A, B, lam))


def test_abrr_trivial_and_classical_rejection(qp4, qpc):
    V = irrep_sl2(1, qp4)
    T = trivial_rep(V.spec)
    lam = sampled(V.spec, 4)
    assert linalg.mat_eq(fusion_matrix_abrr(T, V, lam), linalg.eye(3))
    with pytest.raises(ValueError):
        Vc = irrep_sl2(1, qpc)
        fusion_matrix_abrr(Vc, Vc, sampled(Vc.spec, 0))


def test_invert_unipotent(qp4):
    W = vector_rep_gln(2, qp4)
    lam = SymbolicLambda(W.spec)
    J = fusion_matrix(W, W, lam)
    Ji = invert_unipotent(J, W, W)
    # rank-one nilpotent: J^{-1} = 2 Id - J entrywise
    N = linalg.mat_sub(J, linalg.eye(4))
    assert mats_equal(Ji, linalg.mat_sub(linalg.eye(4), N))
    assert mats_equal(linalg.mat_mul(J, Ji), linalg.eye(4))
    # evaluated check on a bigger pair
    A = irrep_sl2(Fraction(1, 2), qp4)
    B = irrep_sl2(1, qp4)
    lam2 = sampled(A.spec, 5)
    J2 = fusion_matrix(A, B, lam2)
    assert linalg.mat_eq(linalg.mat_mul(J2, invert_unipotent(J2, A, B)), linalg.eye(6))
    with pytest.raises(NotUnipotent):
        invert_unipotent(linalg.mat_scale(linalg.eye(4), Fraction(2)), W, W)


def test_exchange_weight_zero_invariant(qp4):
    V = irrep_sl2(Fraction(1, 2), qp4)
    W = irrep_sl2(1, qp4)
    lam = sampled(V.spec, 6)
    R = exchange_matrix(V, W, lam)
    from dynrx.liealg import coproduct_op

    DK = coproduct_op(V, W, 0, "K")
    assert linalg.mat_eq(linalg.mat_mul(R, DK), linalg.mat_mul(DK, R))


def test_hecke_spectrum(qp4, qpc):
    for qp in (qp4, qpc):
        for N in (2, 3):
            W = vector_rep_gln(N, qp)
            for seed in range(3 if N == 3 else 1):
                lam = sampled(W.spec, seed)
                R = exchange_matrix(W, W, lam)
                assert hecke_report(R, W, qp).passed


def test_cocycle_qdyb_trivial_slot(qp4):
    V = irrep_sl2(Fraction(1, 2), qp4)
    T = trivial_rep(V.spec)
    lams = [sampled(V.spec, 7)]
    assert verify_cocycle(V, V, T, lams).passed
    assert verify_qdyb(V, T, V, lams).passed


def test_cocycle_qdyb_symbolic_gl2(qp4):
    W = vector_rep_gln(2, qp4)
    lam = SymbolicLambda(W.spec)
    assert verify_cocycle(W, W, W, [lam]).passed
    assert verify_qdyb(W, W, W, [lam]).passed


def test_qdyb_mixed_sl2_triple(qp4):
    A = irrep_sl2(Fraction(1, 2), qp4)
    B = irrep_sl2(1, qp4)
    lams = [sampled(A.spec, s) for s in range(3)]
    assert verify_qdyb(A, A, B, lams).passed
    assert verify_cocycle(A, B, A, lams).passed


def test_k_matrices(qp4):
    for spin in (Fraction(1, 2), Fraction(1)):
        V = irrep_sl2(spin, qp4)
        lam = SymbolicLambda(V.spec)
        K, Kp, B = kmat(V, lam), kprime(V, lam), two_point(V, lam)
        assert mats_equal(K, Kp)
        assert mats_equal(B, Kp)
        T = trivial_rep(V.spec)
        lam0 = sampled(V.spec, 8)
        assert linalg.mat_eq(ktilde(T, lam0), linalg.eye(1))
        assert linalg.mat_eq(kprime(T, lam0), linalg.eye(1))
        assert linalg.mat_eq(two_point(T, lam0), linalg.eye(1))
        for seed in range(3):
            lam1 = sampled(V.spec, seed + 20)
            assert linalg.mat_eq(kmat(V, lam1), kprime(V, lam1))
            assert linalg.mat_det(two_point(V, lam1)) != 0


def test_two_point_classical_limit():
    # B_{t rho, V} approaches the canonical pairing as t grows: entries differ
    # from delta by O(1/t)
    qp = classical_q()
    V = irrep_sl2(Fraction(1, 2), qp)
    spec = V.spec
    from dynrx.scalars import SamplePoint

    prev = None
    for t in (40, 80, 160):
        lam = SampledLambda(spec, SamplePoint(qp, (Fraction(t),)))
        B = two_point(V, lam)
        dev = max(abs(B[i][j] - (1 if i == j else 0)) for i in range(2) for j in range(2))
        if prev is not None:
            assert dev <= prev / Fraction(3, 2)
        prev = dev


def test_r00(qp4, qpc):
    A = irrep_sl2(Fraction(1, 2), qp4)
    W = irrep_sl2(1, qp4)
    lams = [sampled(A.spec, s) for s in range(3)]
    assert r00_scalar_check(A, W, lams).passed
    T = tensor(A, A)
    assert r00_cross_check(A, W, T, lams).passed
    # classical: R00 = Id
    Ac = irrep_sl2(Fraction(1, 2), qpc)
    Wc = irrep_sl2(1, qpc)
    lamc = sampled(Ac.spec, 0)
    assert linalg.mat_eq(r00_block(Ac, Wc, lamc), linalg.eye(3))
    # trivial W: scalar 1
    assert linalg.mat_eq(r00_block(A, trivial_rep(A.spec), lams[0]), linalg.eye(1))


def test_asymptotic_leading_classical(qpc):
    A = irrep_sl2(Fraction(1, 2), qpc)
    B = irrep_sl2(1, qpc)
    assert asymptotic_leading(A, A).passed
    assert asymptotic_leading(A, B).passed
    Wg = vector_rep_gln(2, qpc)
    assert asymptotic_leading(Wg, Wg).passed
    with pytest.raises(ValueError):
        asymptotic_leading(irrep_sl2(1, QParam(Fraction(2))), irrep_sl2(1, QParam(Fraction(2))))


def test_asymptotic_alcove(qp_half):
    A = irrep_sl2(Fraction(1, 2), qp_half)
    for direction in ("positive", "negative"):
        assert asymptotic_alcove(A, A, direction, range(5, 12)).passed
    W = vector_rep_gln(2, qp_half)
    assert asymptotic_alcove(W, W, "positive", range(5, 10)).passed
    with pytest.raises(ValueError):
        asymptotic_alcove(irrep_sl2(1, QParam(Fraction(2))), irrep_sl2(1, QParam(Fraction(2))),
                          "positive", range(5, 8))


def test_lambda_matrix_wrapper(qp4):
    from dynrx.exchange import closed_form_fn, exchange_matrix_fn, fusion_matrix_fn

    W = vector_rep_gln(2, qp4)
    lam = sampled(W.spec, 30)
    F = fusion_matrix_fn(W, W)
    assert F.method == "verma-fusion"
    assert linalg.mat_eq(F.evaluate(lam), fusion_matrix(W, W, lam))
    assert linalg.mat_eq(F.evaluate(lam.point), fusion_matrix(W, W, lam))
    E = exchange_matrix_fn(W, W)
    C = closed_form_fn(2, qp4, "R")
    assert linalg.mat_eq(E.evaluate(lam), C.evaluate(lam))
    assert mats_equal(E.symbolic(), C.symbolic())
    js = E.to_json(lam)
    assert js["rows"] == 4 and js["method"] == "exchange"
