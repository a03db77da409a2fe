"""Dynamical representations by difference operators, and in-representation
verification of the algebroid relations (RLL, the product relation through
Clebsch-Gordan data, coproduct compatibility, the antipode through K-matrices).

A DiffOp on a module W is a finite sum of terms (coefficient function of
lambda, valued in End(W)) composed with an inverse lattice shift T_beta^{-1}.
Composition shifts the right coefficient: (f T_b^{-1})(g T_d^{-1}) =
f . g(lambda - b) . T_{b+d}^{-1}.

Moment maps inside normal-ordered expressions: a function tagged lambda^1
multiplies on the left as the weight-diagonal operator f(lambda - h); a
function tagged lambda^2 multiplies as the plain scalar f(lambda).  (This is
forced by the bigrading relations: with it, the RLL relation in a
representation is literally the QDYB equation.)
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .liealg import FinRep, dual_rep, tensor, wt_add
from .lam import LambdaHandle
from .exchange import (
    Report,
    exchange_matrix,
    fusion_inverse,
    fusion_matrix,
    kmat,
    kprime,
)
from .liealg import cg_decompose


class DiffOp:
    """terms: dict shift-weight beta -> coefficient closure (LambdaHandle -> End(W) matrix),
    meaning sum_beta coeff_beta(lambda) T_beta^{-1}."""

    def __init__(self, W: FinRep, terms: dict | None = None):
        self.W = W
        self.terms = dict(terms or {})

    @staticmethod
    def identity(W: FinRep) -> "DiffOp":
        z = tuple([0] * len(W.weights[0]))
        return DiffOp(W, {z: lambda lam: linalg.eye(W.dim)})

    @staticmethod
    def zero(W: FinRep) -> "DiffOp":
        return DiffOp(W, {})

    def add(self, other: "DiffOp") -> "DiffOp":
        out = dict(self.terms)
        for b, g in other.terms.items():
            if b in out:
                f = out[b]
                out[b] = lambda lam, f=f, g=g: linalg.mat_add(f(lam), g(lam))
            else:
                out[b] = g
        return DiffOp(self.W, out)

    def neg(self) -> "DiffOp":
        return DiffOp(self.W, {
            b: (lambda lam, f=f: linalg.mat_scale(f(lam), Fraction(-1)))
            for b, f in self.terms.items()
        })

    def sub(self, other: "DiffOp") -> "DiffOp":
        return self.add(other.neg())

    def compose(self, other: "DiffOp") -> "DiffOp":
        out: dict = {}
        for b1, f in self.terms.items():
            for b2, g in other.terms.items():
                bsum = wt_add(b1, b2)
                def term(lam, f=f, g=g, b1=b1):
                    return linalg.mat_mul(f(lam), g(lam.shifted(b1)))
                if bsum in out:
                    prev = out[bsum]
                    out[bsum] = lambda lam, p=prev, t=term: linalg.mat_add(p(lam), t(lam))
                else:
                    out[bsum] = term
        return DiffOp(self.W, out)

    def scale_left_h(self, entry_fn) -> "DiffOp":
        """Multiply on the left by the lambda^1-function f(lambda - h):
        the weight-diagonal End(W) operator built from a scalar entry function."""
        W = self.W

        def dmat(lam):
            return [[entry_fn(lam.shifted(W.weights[r])) if r == c else Fraction(0)
                     for c in range(W.dim)] for r in range(W.dim)]

        return DiffOp(W, {
            b: (lambda lam, f=f: linalg.mat_mul(dmat(lam), f(lam)))
            for b, f in self.terms.items()
        })

    def scale_plain(self, entry_fn) -> "DiffOp":
        """Multiply the coefficient by the lambda^2-scalar f(lambda) (normal ordered:
        the argument is not shifted by this operator's own T factors)."""
        return DiffOp(self.W, {
            b: (lambda lam, f=f: linalg.mat_scale(f(lam), entry_fn(lam)))
            for b, f in self.terms.items()
        })

    def eval_coeffs(self, lam: LambdaHandle) -> dict:
        return {b: f(lam) for b, f in self.terms.items()}

    def to_json(self, lam: LambdaHandle) -> list:
        """Evaluated presentation sum_beta f_beta(lambda) T_beta^{-1}."""
        from .scalars import RatFunc, scalar_to_str

        out = []
        for b in sorted(self.terms):
            M = self.terms[b](lam)
            ent = [[x.to_json() if isinstance(x, RatFunc) else scalar_to_str(x) for x in row]
                   for row in M]
            out.append({"shift": list(b),
                        "coefficient": {"rows": len(M), "cols": len(M[0]) if M else 0,
                                        "basis": [str(i) for i in range(self.W.dim)],
                                        "entries": ent}})
        return out

    def __str__(self):
        return " + ".join(f"f_{list(b)}(lambda) T^-1_{list(b)}" for b in sorted(self.terms)) or "0"

    def is_zero_at(self, lam: LambdaHandle) -> bool:
        return all(linalg.mat_is_zero(M) for M in self.eval_coeffs(lam).values())

    def equals_at(self, other: "DiffOp", lam: LambdaHandle) -> bool:
        return self.sub(other).is_zero_at(lam)


def dmat_mul(A: list, B: list) -> list:
    """Product of matrices of DiffOps."""
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for r in range(n):
        row = []
        for c in range(m):
            acc = None
            for p in range(k):
                t = A[r][p].compose(B[p][c])
                acc = t if acc is None else acc.add(t)
            row.append(acc)
        out.append(row)
    return out


def dmat_sub(A: list, B: list) -> list:
    return [[a.sub(b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def dmat_zero_at(A: list, lam: LambdaHandle):
    for r, row in enumerate(A):
        for c, op in enumerate(row):
            if not op.is_zero_at(lam):
                return (r, c)
    return None


# ---------------------------------------------------------------------------
# the representation pi_W


def pi_generator(V: FinRep, W: FinRep, method: str = "verma") -> list:
    """Matrix over V-indices of DiffOps on W: pi(L^V_ab) = (R_{V,W}(lambda) block ab) T^{-1}_{wt b}."""
    dV, dW = V.dim, W.dim

    def block(a, b):
        def coeff(lam, a=a, b=b):
            R = exchange_matrix(V, W, lam, method)
            return [[R[a * dW + y][b * dW + x] for x in range(dW)] for y in range(dW)]
        return coeff

    out = []
    for a in range(dV):
        row = []
        for b in range(dV):
            row.append(DiffOp(W, {V.weights[b]: block(a, b)}))
        out.append(row)
    return out


def counit_generator(V: FinRep, W: FinRep) -> list:
    """The counit image: pi_trivial-like operator, per matrix element of V."""
    out = []
    for a in range(V.dim):
        row = []
        for b in range(V.dim):
            if a == b:
                row.append(DiffOp(W, {V.weights[b]: (lambda lam: linalg.eye(W.dim))}))
            else:
                row.append(DiffOp.zero(W))
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# relation suites


def verify_rll(V: FinRep, W: FinRep, U: FinRep, lams, method: str = "verma") -> Report:
    """R12_{V,W}(lambda^1) L^V13 L^W23 = :L^W23 L^V13 R12_{V,W}(lambda^2): in pi_U."""
    rep = Report("rll", {"V": V.name, "W": W.name, "U": U.name, "method": method})
    dV, dW = V.dim, W.dim
    d = dV * dW
    for idx, lam in enumerate(lams):
        LV = pi_generator(V, U, method)
        LW = pi_generator(W, U, method)
        prod = [[LV[a][b].compose(LW[c][dd]) for (b, dd) in _pairs(dV, dW)]
                for (a, c) in _pairs(dV, dW)]
        lhs = [[DiffOp.zero(U) for _ in range(d)] for _ in range(d)]
        rhs = [[DiffOp.zero(U) for _ in range(d)] for _ in range(d)]

        def Rentry(r, c):
            def fn(lh, r=r, c=c):
                return exchange_matrix(V, W, lh, method)[r][c]
            return fn

        prod2 = [[LW[c][dd].compose(LV[a][b]) for (b, dd) in _pairs(dV, dW)]
                 for (a, c) in _pairs(dV, dW)]
        for r in range(d):
            for p in range(d):
                e = Rentry(r, p)
                lhs[r] = [lhs[r][c].add(prod[p][c].scale_left_h(e)) for c in range(d)]
        for q in range(d):
            for c in range(d):
                e = Rentry(q, c)
                for r in range(d):
                    rhs[r][c] = rhs[r][c].add(prod2[r][q].scale_plain(e))
        bad = dmat_zero_at(dmat_sub(lhs, rhs), lam)
        if bad is not None:
            rep.fail(sample=idx, entry=bad)
    return rep


def _pairs(d1, d2):
    return [(a, b) for a in range(d1) for b in range(d2)]


def verify_product_relation(V: FinRep, W: FinRep, U0: FinRep, lams, method: str = "verma") -> Report:
    """(L^V)^23 (L^W)^13 = :(J12_{W,V}(l^1))^{-1} sum_Y tau (Id (x) L^Y) taubar J12_{W,V}(l^2):
    evaluated in pi_{U0}, with the Y-sum over the summands of W (x) V."""
    rep = Report("product", {"V": V.name, "W": W.name, "U": U0.name, "method": method})
    dV, dW = V.dim, W.dim
    d = dW * dV
    summands = cg_decompose(W, V)
    for idx, lam in enumerate(lams):
        LV = pi_generator(V, U0, method)
        LW = pi_generator(W, U0, method)
        lhs = [[LV[i][j].compose(LW[k][l])
                for (l, j) in _pairs(dW, dV)] for (k, i) in _pairs(dW, dV)]
        mid = [[DiffOp.zero(U0) for _ in range(d)] for _ in range(d)]
        for Y, tau, taubar in summands:
            LY = pi_generator(Y, U0, method)
            for r in range(d):
                for c in range(d):
                    acc = mid[r][c]
                    for s in range(Y.dim):
                        if tau[r][s] == 0:
                            continue
                        for t in range(Y.dim):
                            if taubar[t][c] == 0:
                                continue
                            term = LY[s][t]
                            cst = tau[r][s] * taubar[t][c]
                            acc = acc.add(DiffOp(U0, {
                                b: (lambda lh, f=f, cst=cst: linalg.mat_scale(f(lh), cst))
                                for b, f in term.terms.items()
                            }))
                    mid[r][c] = acc

        def Jinv_entry(r, c):
            def fn(lh, r=r, c=c):
                return fusion_inverse(W, V, lh, method)[r][c]
            return fn

        def J_entry(r, c):
            def fn(lh, r=r, c=c):
                return fusion_matrix(W, V, lh, method)[r][c]
            return fn

        rhs = [[DiffOp.zero(U0) for _ in range(d)] for _ in range(d)]
        # left factor (lambda^1, h-shifted), then middle, then right factor (lambda^2, plain)
        tmp = [[DiffOp.zero(U0) for _ in range(d)] for _ in range(d)]
        for r in range(d):
            for p in range(d):
                e = Jinv_entry(r, p)
                tmp[r] = [tmp[r][c].add(mid[p][c].scale_left_h(e)) for c in range(d)]
        for q in range(d):
            for c in range(d):
                e = J_entry(q, c)
                for r in range(d):
                    rhs[r][c] = rhs[r][c].add(tmp[r][q].scale_plain(e))
        bad = dmat_zero_at(dmat_sub(lhs, rhs), lam)
        if bad is not None:
            rep.fail(sample=idx, entry=bad)
    return rep


def pi_tensor_barred(V: FinRep, W: FinRep, U: FinRep, method: str = "verma") -> list:
    """pi_{W (x) U} of L^V through the barred tensor product of the two factor
    representations: coefficient sum_b R^{VW}_{ab}(lambda - h^{(U)}) (x)-placed
    R^{VU}_{bc}(lambda), shift T^{-1}_{wt c}."""
    dV, dW, dU = V.dim, W.dim, U.dim
    WU_dim = dW * dU

    def coeff(a, c):
        def fn(lam, a=a, c=c):
            RU = exchange_matrix(V, U, lam, method)
            out = [[Fraction(0)] * WU_dim for _ in range(WU_dim)]
            shifted = {}
            for u in range(dU):
                mu = U.weights[u]
                if mu not in shifted:
                    shifted[mu] = exchange_matrix(V, W, lam.shifted(mu), method)
            for b in range(dV):
                for w1 in range(dW):
                    for u1 in range(dU):
                        for w2 in range(dW):
                            # A_b block: R^{VW}_{ab}(lambda - wt(u1)) entry (w1, w2)
                            Ab = shifted[U.weights[u1]][a * dW + w1][b * dW + w2]
                            if Ab == 0:
                                continue
                            for u2 in range(dU):
                                Bb = RU[b * dU + u1][c * dU + u2]
                                if Bb == 0:
                                    continue
                                out[w1 * dU + u1][w2 * dU + u2] += Ab * Bb
            return out
        return fn

    out = []
    for a in range(dV):
        row = []
        for c in range(dV):
            row.append(DiffOp(tensor(W, U), {V.weights[c]: coeff(a, c)}))
        out.append(row)
    return out


def verify_coproduct_compat(V: FinRep, W: FinRep, U: FinRep, lams, method: str = "verma") -> Report:
    """J_{W,U}(lambda) intertwines the barred product of pi_W and pi_U with the
    representation on the tensor module W (x) U."""
    rep = Report("coproduct", {"V": V.name, "W": W.name, "U": U.name, "method": method})
    WU = tensor(W, U)
    for idx, lam in enumerate(lams):
        barred = pi_tensor_barred(V, W, U, method)
        module = pi_generator(V, WU, method)
        Jop = DiffOp(WU, {tuple([0] * len(WU.weights[0])):
                          (lambda lh: fusion_matrix(W, U, lh, method))})
        for a in range(V.dim):
            for c in range(V.dim):
                lhs = Jop.compose(barred[a][c])
                rhs = module[a][c].compose(Jop)
                if not lhs.equals_at(rhs, lam):
                    rep.fail(sample=idx, entry=(a, c))
    return rep


def antipode_generator(V: FinRep, U: FinRep, method: str = "verma", which: str = "K") -> list:
    """pi_U of the antipode image of L^V:
    Lbar^V = (:K^(1)(l^1) L^{*V} (K^(1)(l^2))^{-1}:)^{t1}, K from the fused
    K-matrix (which='K') or K' (which='Kprime')."""
    sV = dual_rep(V)
    LsV = pi_generator(sV, U, method)
    dV = V.dim

    def Kfn(lh):
        return kmat(V, lh, method) if which == "K" else kprime(V, lh, method)

    def Kentry(i, c):
        def fn(lh, i=i, c=c):
            return Kfn(lh)[i][c]
        return fn

    def Kinv_entry(dd, j):
        def fn(lh, dd=dd, j=j):
            return linalg.mat_inv(Kfn(lh))[dd][j]
        return fn

    X = [[DiffOp.zero(U) for _ in range(dV)] for _ in range(dV)]
    for i in range(dV):
        for j in range(dV):
            acc = DiffOp.zero(U)
            for c in range(dV):
                for dd in range(dV):
                    t = LsV[c][dd].scale_left_h(Kentry(i, c)).scale_plain(Kinv_entry(dd, j))
                    acc = acc.add(t)
            X[i][j] = acc
    # t1-transposition in the V matrix slot
    return [[X[j][i] for j in range(dV)] for i in range(dV)]


def verify_antipode(V: FinRep, U: FinRep, lams, method: str = "verma") -> Report:
    """pi(L^V) pi(S L^V) = Id (x) 1 = pi(S L^V) pi(L^V), with S L^V built from the
    K-matrix; also checks the K'-built variant gives the same operator."""
    rep = Report("antipode", {"V": V.name, "U": U.name, "method": method})
    LV = pi_generator(V, U, method)
    ident = [[DiffOp.identity(U) if a == b else DiffOp.zero(U) for b in range(V.dim)]
             for a in range(V.dim)]
    for idx, lam in enumerate(lams):
        Lbar = antipode_generator(V, U, method, "K")
        for label, prod in (("L.SL", dmat_mul(LV, Lbar)), ("SL.L", dmat_mul(Lbar, LV))):
            bad = dmat_zero_at(dmat_sub(prod, ident), lam)
            if bad is not None:
                rep.fail(sample=idx, order=label, entry=bad)
        Lhat = antipode_generator(V, U, method, "Kprime")
        bad = dmat_zero_at(dmat_sub(Lbar, Lhat), lam)
        if bad is not None:
            rep.fail(sample=idx, order="K vs K'", entry=bad)
    return rep


def morphism_rigidity_check(W: FinRep, U: FinRep, b, Vs, lams, method: str = "verma") -> Report:
    """Necessary conditions for b(lambda): W -> U to be a morphism of dynamical
    representations: it intertwines the highest-component difference operators
    (forcing lambda-independence), and classically it intertwines the e/f
    action extracted from the first-order asymptotics."""
    rep = Report("morphism", {"W": W.name, "U": U.name})
    bmat = b if callable(b) else (lambda lh, b=b: b)
    for idx, lam in enumerate(lams):
        for V in Vs:
            top = max(range(V.dim), key=lambda i: V.zdeg[i])
            wt0 = V.weights[top]
            from .exchange import r00_block

            B1 = r00_block(V, W, lam, method)
            B2 = r00_block(V, U, lam, method)
            lhsM = linalg.mat_mul(bmat(lam), B1)
            rhsM = linalg.mat_mul(B2, bmat(lam.shifted(wt0)))
            if not linalg.mat_eq(lhsM, rhsM):
                rep.fail(sample=idx, V=V.name, condition="L00 intertwining")
            # full generator-block intertwining (necessary for any morphism):
            # b(lambda) R^{V,W}_{ab}(lambda) = R^{V,U}_{ab}(lambda) b(lambda - wt_V(b))
            RW = exchange_matrix(V, W, lam, method)
            RU = exchange_matrix(V, U, lam, method)
            for a in range(V.dim):
                for bb in range(V.dim):
                    blkW = [[RW[a * W.dim + y][bb * W.dim + x] for x in range(W.dim)]
                            for y in range(W.dim)]
                    blkU = [[RU[a * U.dim + y][bb * U.dim + x] for x in range(U.dim)]
                            for y in range(U.dim)]
                    lhsM = linalg.mat_mul(bmat(lam), blkW)
                    rhsM = linalg.mat_mul(blkU, bmat(lam.shifted(V.weights[bb])))
                    if not linalg.mat_eq(lhsM, rhsM):
                        rep.fail(sample=idx, V=V.name, block=(a, bb),
                                 condition="generator-block intertwining")
                        break
                else:
                    continue
                break
    if W.spec.qp.classical:
        for i in range(W.spec.nsimple):
            for X_W, X_U, nm in ((W.e[i], U.e[i], "e"), (W.f[i], U.f[i], "f")):
                lhsM = linalg.mat_mul(bmat(lams[0]), X_W)
                rhsM = linalg.mat_mul(X_U, bmat(lams[0]))
                if not linalg.mat_eq(lhsM, rhsM):
                    rep.fail(condition=f"classical {nm}-intertwining", index=i)
    return rep
