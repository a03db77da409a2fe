"""Intertwining operators Phi^v_lambda : M_lambda -> M_mu (x) V and their compositions.

Phi is pinned down by: (i) leading term v_mu (x) v, (ii) annihilation by every
raising generator through the coproduct.  The solve proceeds degree by degree;
the degree-k linear system is invertible exactly when the level-k Shapovalov
determinant is nonzero at mu.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from . import linalg
from .liealg import AlgebraSpec, FinRep, Weight, wt_add, wt_sub
from .lam import LambdaHandle
from .scalars import NonGenericLambda
from .verma import VermaSlice, Word


def vector_weight(V: FinRep, vec: list) -> Weight:
    """Weight of a homogeneous vector; raises if mixed."""
    wts = {V.weights[i] for i, c in enumerate(vec) if not linalg.is_zero_elem(c)}
    if len(wts) != 1:
        raise ValueError("vector is not weight-homogeneous")
    return wts.pop()


def _solve_depth(V: FinRep, wt_v: Weight, spec: AlgebraSpec) -> int:
    """Largest simple-root height by which a V-weight exceeds wt_v."""
    best = 0
    for nu in V.weights:
        try:
            h = spec.height(wt_sub(nu, wt_v))
        except ValueError:
            continue
        if h > best and _in_positive_cone(spec, wt_sub(nu, wt_v)):
            best = h
    return best


def _in_positive_cone(spec: AlgebraSpec, beta: Weight) -> bool:
    if spec.kind == "sl2":
        return beta[0] >= 0 and beta[0] % 2 == 0
    acc = 0
    for a in range(spec.n - 1):
        acc += beta[a]
        if acc < 0:
            return False
    return acc + beta[-1] == 0


@dataclass
class IntertwinerExpansion:
    """terms[(word, j)] = coefficient of (word . v_mu) (x) x_j in Phi^v_lambda v_lambda."""

    spec: AlgebraSpec
    lam: LambdaHandle
    V: FinRep
    v: list
    wt_v: Weight
    mu: LambdaHandle          # handle for lambda - wt(v)
    verma: VermaSlice         # slice at mu
    terms: dict = field(default_factory=dict)

    def to_json(self) -> list:
        from .scalars import RatFunc, scalar_to_str

        out = []
        for (w, j), c in sorted(self.terms.items(), key=lambda kv: (len(kv[0][0]), kv[0])):
            val = c.to_json() if isinstance(c, RatFunc) else scalar_to_str(c)
            out.append({"word": list(w), "v_index": j, "coeff": val})
        return out


def solve_intertwiner(lam: LambdaHandle, v: list, V: FinRep) -> IntertwinerExpansion:
    """The unique expansion with leading term v_mu (x) v killed by all D(e_i)."""
    spec = V.spec
    wt_v = vector_weight(V, v)
    mu = lam.shifted(wt_v)
    depth = _solve_depth(V, wt_v, spec)
    verma = VermaSlice(spec, mu, depth)
    zero, one = lam.zero(), lam.one()
    terms: dict[tuple[Word, int], object] = {}
    for j, c in enumerate(v):
        if not linalg.is_zero_elem(c):
            terms[((), j)] = c + zero
    prev: dict[tuple[Word, int], object] = dict(terms)
    for k in range(1, depth + 1):
        unknowns = []
        for w in verma.basis(k):
            bw = verma.word_weight(w)
            target = wt_add(wt_v, bw)
            for j in range(V.dim):
                if V.weights[j] == target:
                    unknowns.append((w, j))
        if not unknowns:
            prev = {}
            continue
        # residual rows are indexed by (i, word at level k-1, V-index)
        rows: dict[tuple, list] = {}
        rhs: dict[tuple, object] = {}

        def row_of(key):
            if key not in rows:
                rows[key] = [zero] * len(unknowns)
                rhs[key] = zero
            return rows[key]

        for col, (w, j) in enumerate(unknowns):
            kq = spec.qp.qpow(spec.cartan_int(0, V.weights[j])) if False else None
            for i in range(spec.nsimple):
                eimg = verma._e_on_word(i, w)
                if not eimg:
                    continue
                if spec.qp.classical:
                    kscale = one
                else:
                    kscale = lam.scalar(spec.qp.qpow(spec.cartan_int(i, V.weights[j])))
                for w2, c2 in eimg.items():
                    row_of((i, w2, j))[col] = row_of((i, w2, j))[col] + c2 * kscale
        for (w2, j0), c in prev.items():
            for i in range(spec.nsimple):
                col_e = V.e[i]
                for j1 in range(V.dim):
                    if not linalg.is_zero_elem(col_e[j1][j0]):
                        key = (i, w2, j1)
                        row_of(key)
                        rhs[key] = rhs[key] - c * col_e[j1][j0]
        keys = sorted(rows.keys())
        A = [rows[kk] for kk in keys]
        B = [[rhs[kk]] for kk in keys]
        try:
            sol = linalg.solve_linear(A, B)
        except linalg.SingularMatrixError as exc:
            raise NonGenericLambda(
                f"intertwiner solve singular at level {k} (Shapovalov determinant D_{k} vanishes)"
            ) from exc
        prev = {}
        for col, (w, j) in enumerate(unknowns):
            val = sol[col][0]
            if not linalg.is_zero_elem(val):
                terms[(w, j)] = val
                prev[(w, j)] = val
    return IntertwinerExpansion(spec, lam, V, list(v), wt_v, mu, verma, terms)


def raising_residual(exp: IntertwinerExpansion) -> dict:
    """D(e_i) applied to the expansion, per generator: must be exactly empty."""
    spec = exp.spec
    out = {}
    for i in range(spec.nsimple):
        res: dict[tuple[Word, int], object] = {}
        for (w, j), c in exp.terms.items():
            eimg = exp.verma._e_on_word(i, w)
            if spec.qp.classical:
                kscale = exp.lam.one()
            else:
                kscale = exp.lam.scalar(spec.qp.qpow(spec.cartan_int(i, exp.V.weights[j])))
            for w2, c2 in eimg.items():
                key = (w2, j)
                res[key] = res.get(key, exp.lam.zero()) + c * c2 * kscale
            for j1 in range(exp.V.dim):
                if not linalg.is_zero_elem(exp.V.e[i][j1][j]):
                    key = (w, j1)
                    res[key] = res.get(key, exp.lam.zero()) + c * exp.V.e[i][j1][j]
        res = {k: v for k, v in res.items() if not linalg.is_zero_elem(v)}
        if res:
            out[i] = res
    return out


@dataclass
class Composition:
    """Expansion of Phi^{w,v}_lambda v_lambda in M_nu (x) W (x) V:
    terms[(word, jW, jV)] = coefficient."""

    spec: AlgebraSpec
    lam: LambdaHandle
    W: FinRep
    V: FinRep
    nu: LambdaHandle
    terms: dict

    def degree0(self) -> dict:
        return {(jW, jV): c for (wd, jW, jV), c in self.terms.items() if wd == ()}


def compose_intertwiners(lam: LambdaHandle, W: FinRep, w: list, V: FinRep, v: list) -> Composition:
    """(Phi^w_{lambda - wt v} (x) 1) Phi^v_lambda applied to v_lambda."""
    spec = V.spec
    inner = solve_intertwiner(lam, v, V)
    mu = inner.mu
    outer = solve_intertwiner(mu, w, W)
    nu = mu.shifted(outer.wt_v)
    # depth needed for Delta(f_word) applications: inner words have height <= depth_inner
    depth = _solve_depth(V, inner.wt_v, spec) + _solve_depth(W, outer.wt_v, spec)
    bigv = VermaSlice(spec, nu, depth)
    # group inner terms by word
    by_word: dict[Word, dict[int, object]] = {}
    for (wd, jV), c in inner.terms.items():
        by_word.setdefault(wd, {})[jV] = c
    # cache Delta(f)-applications of outer expansion per inner word
    out_terms: dict[tuple[Word, int, int], object] = {}
    base = {(wd, jW): c for (wd, jW), c in outer.terms.items()}
    applied_cache: dict[Word, dict] = {(): base}

    def apply_word(u: Word) -> dict:
        """Delta(f_{u_1}) ... Delta(f_{u_k}) applied to the outer expansion, in M_nu (x) W."""
        if u in applied_cache:
            return applied_cache[u]
        head, rest = u[0], u[1:]
        cur = apply_word(rest)
        nxt: dict[tuple[Word, int], object] = {}
        i = head
        for (wd, jW), c in cur.items():
            # f_i (x) 1
            for w2, c2 in bigv.wb.reduce_word((i,) + wd).items():
                key = (w2, jW)
                nxt[key] = nxt.get(key, lam.zero()) + c * c2
            # K_i^{-1} (x) f_i   (1 (x) f_i classically)
            if spec.qp.classical:
                kfac = lam.one()
            else:
                kfac = bigv.k_eigen(i, wd, -1)
            for j2 in range(W.dim):
                if not linalg.is_zero_elem(W.f[i][j2][jW]):
                    key = (wd, j2)
                    nxt[key] = nxt.get(key, lam.zero()) + c * kfac * W.f[i][j2][jW]
        nxt = {k: v for k, v in nxt.items() if not linalg.is_zero_elem(v)}
        applied_cache[u] = nxt
        return nxt

    for u, vparts in by_word.items():
        img = apply_word(u)
        for (wd, jW), c in img.items():
            for jV, cv in vparts.items():
                key = (wd, jW, jV)
                val = out_terms.get(key, lam.zero()) + c * cv
                out_terms[key] = val
    out_terms = {k: v for k, v in out_terms.items() if not linalg.is_zero_elem(v)}
    return Composition(spec, lam, W, V, nu, out_terms)
