"""Finite-dimensional representations of U_q(sl2) and U_q(gl_N) with exact matrices.

Coproduct convention, fixed once for the whole package:
    D(e_i) = e_i (x) K_i + 1 (x) e_i,
    D(f_i) = f_i (x) 1 + K_i^{-1} (x) f_i,
    D(K_i) = K_i (x) K_i,
antipode S(e_i) = -e_i K_i^{-1}, S(f_i) = -K_i f_i, S(K_i) = K_i^{-1}.
Everything downstream (universal R, fusion, exchange) is consistent with this
choice; consistency is enforced by tests, not trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .linalg import Matrix, kron, mat_mul, mat_sub, mat_is_zero, eye, zeros
from .scalars import QParam

Weight = tuple  # integer tuples; length 1 for sl2 (h-eigenvalue), N for gl_N (eps basis)

MAX_GLN = 4


def wt_add(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def wt_sub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def wt_neg(a: Weight) -> Weight:
    return tuple(-x for x in a)


@dataclass(frozen=True)
class AlgebraSpec:
    """kind 'sl2' or 'gln'; for gln, n is N (2 <= N <= 4)."""

    kind: str
    n: int
    qp: QParam

    def __post_init__(self):
        if self.kind == "sl2":
            if self.n != 1:
                raise ValueError("sl2 has rank 1")
        elif self.kind == "gln":
            if not 2 <= self.n <= MAX_GLN:
                raise ValueError(f"gl_N supported only for 2 <= N <= {MAX_GLN}")
        else:
            raise ValueError(f"unknown algebra kind {self.kind!r}")

    @property
    def nsimple(self) -> int:
        return 1 if self.kind == "sl2" else self.n - 1

    @property
    def ncoords(self) -> int:
        """Number of lambda-torus coordinates."""
        return 1 if self.kind == "sl2" else self.n

    def simple_root(self, i: int) -> Weight:
        if self.kind == "sl2":
            return (2,)
        r = [0] * self.n
        r[i], r[i + 1] = 1, -1
        return tuple(r)

    def cartan_int(self, i: int, mu: Weight) -> int:
        """<mu, alpha_i^vee> (simply laced, so = (mu, alpha_i))."""
        if self.kind == "sl2":
            return mu[0]
        return mu[i] - mu[i + 1]

    def pairing2(self, mu: Weight, nu: Weight) -> int:
        """2*(mu, nu) under the standard invariant form; always an integer."""
        if self.kind == "sl2":
            return mu[0] * nu[0]  # (mu,nu) = m n / 2
        return 2 * sum(a * b for a, b in zip(mu, nu))

    def rho2(self) -> Weight:
        """2*rho in the weight coordinates."""
        if self.kind == "sl2":
            return (2,)
        return tuple(self.n + 1 - 2 * a for a in range(1, self.n + 1))

    def rho_pairing2(self, beta: Weight) -> int:
        """2*(rho, beta); integer for beta in the root lattice."""
        return self.pairing2(self.rho2(), beta) // 2

    def height(self, beta: Weight) -> int:
        """Number of simple roots summing to beta (beta in the positive cone)."""
        if self.kind == "sl2":
            if beta[0] % 2:
                raise ValueError("not in the root lattice")
            return beta[0] // 2
        # beta = sum n_i alpha_i: n_i = beta_1 + ... + beta_i partial sums
        ns = []
        acc = 0
        for a in range(self.n - 1):
            acc += beta[a]
            ns.append(acc)
        if acc + beta[-1] != 0:
            raise ValueError("not in the root lattice")
        return sum(ns)


class FinRep:
    """Weight-graded module with exact generator matrices.

    e[i], f[i] are dim x dim matrices (Fraction entries) for each simple root;
    K_i^{+-1} act diagonally through the weights.  zdeg is the Z-grading
    (deg e_i = +1), used for triangularity of fusion matrices.
    """

    def __init__(self, spec: AlgebraSpec, weights, zdeg, e, f, name=""):
        self.spec = spec
        self.dim = len(weights)
        self.weights = [tuple(w) for w in weights]
        self.zdeg = list(zdeg)
        self.e = e
        self.f = f
        self.name = name

    def K_diag(self, i: int, sign: int = 1):
        qp = self.spec.qp
        return [qp.qpow(sign * self.spec.cartan_int(i, w)) for w in self.weights]

    def K_mat(self, i: int, sign: int = 1) -> Matrix:
        d = self.K_diag(i, sign)
        return [[d[r] if r == c else Fraction(0) for c in range(self.dim)] for r in range(self.dim)]

    def h_diag(self, i: int):
        return [Fraction(self.spec.cartan_int(i, w)) for w in self.weights]

    def weight_spaces(self) -> dict:
        out: dict[Weight, list[int]] = {}
        for idx, w in enumerate(self.weights):
            out.setdefault(w, []).append(idx)
        return out

    def depth(self) -> int:
        return max(self.zdeg) - min(self.zdeg) if self.dim else 0

    def to_json(self) -> dict:
        from .scalars import scalar_to_str

        mats = {}
        for i in range(self.spec.nsimple):
            mats[f"e_{i+1}"] = [[scalar_to_str(x) for x in row] for row in self.e[i]]
            mats[f"f_{i+1}"] = [[scalar_to_str(x) for x in row] for row in self.f[i]]
            mats[f"K_{i+1}"] = [[scalar_to_str(x) for x in row] for row in self.K_mat(i)]
        return {"dim": self.dim, "weights": [list(w) for w in self.weights], "matrices": mats}


def trivial_rep(spec: AlgebraSpec) -> FinRep:
    z = (0,) * (1 if spec.kind == "sl2" else spec.n)
    zero = [[Fraction(0)]]
    return FinRep(spec, [z], [0], [zero] * spec.nsimple, [zero] * spec.nsimple, name="triv")


def irrep_sl2(spin, qp: QParam, max_dim: int = 64) -> FinRep:
    """The (2a+1)-dimensional irreducible of U_q(sl2): basis v_n = f^n v (n = 0..2a),
    e v_n = [n][2a-n+1] v_{n-1}, K v_n = q^{2a-2n} v_n."""
    a2 = Fraction(spin) * 2
    if a2.denominator != 1 or a2 < 0:
        raise ValueError("spin must be a nonnegative half-integer")
    a2 = int(a2)
    dim = a2 + 1
    if dim > max_dim:
        raise ValueError(f"spin {spin} exceeds the configured dimension bound")
    spec = AlgebraSpec("sl2", 1, qp)
    weights = [(a2 - 2 * n,) for n in range(dim)]
    zdeg = [-n for n in range(dim)]
    f = zeros(dim, dim)
    e = zeros(dim, dim)
    for n in range(dim - 1):
        f[n + 1][n] = Fraction(1)
    for n in range(1, dim):
        e[n - 1][n] = qp.qnum(n) * qp.qnum(a2 - n + 1)
    return FinRep(spec, weights, zdeg, [e], [f], name=f"V_{Fraction(spin)}")


def vector_rep_gln(N: int, qp: QParam) -> FinRep:
    """The N-dimensional vector representation: f_i v_i = v_{i+1}, e_i v_{i+1} = v_i,
    k_a v_b = q^{delta_ab} v_b (weight of v_a is eps_a)."""
    spec = AlgebraSpec("gln", N, qp)
    weights = [tuple(1 if b == a else 0 for b in range(N)) for a in range(N)]
    zdeg = [-a for a in range(N)]
    es, fs = [], []
    for i in range(N - 1):
        e = zeros(N, N)
        f = zeros(N, N)
        e[i][i + 1] = Fraction(1)
        f[i + 1][i] = Fraction(1)
        es.append(e)
        fs.append(f)
    return FinRep(spec, weights, zdeg, es, fs, name=f"vec_gl{N}")


def tensor(V: FinRep, W: FinRep) -> FinRep:
    """V (x) W with the fixed coproduct; basis index (i,j) -> i*dim(W)+j."""
    if V.spec != W.spec:
        raise ValueError("mismatched algebras")
    spec = V.spec
    weights = [wt_add(v, w) for v in V.weights for w in W.weights]
    zdeg = [dv + dw for dv in V.zdeg for dw in W.zdeg]
    es, fs = [], []
    idV, idW = eye(V.dim), eye(W.dim)
    for i in range(spec.nsimple):
        es.append(linalg.mat_add(kron(V.e[i], W.K_mat(i)), kron(idV, W.e[i])))
        fs.append(linalg.mat_add(kron(V.f[i], idW), kron(V.K_mat(i, -1), W.f[i])))
    return FinRep(spec, weights, zdeg, es, fs, name=f"{V.name}(x){W.name}")


def dual_rep(V: FinRep) -> FinRep:
    """Left dual *V on V^*: x . phi = phi(S^{-1}(x) .), so the canonical pairing
    <v, phi> = phi(v) is a module map V (x) *V -> C."""
    spec = V.spec
    qp = spec.qp
    weights = [wt_neg(w) for w in V.weights]
    zdeg = [-d for d in V.zdeg]
    es, fs = [], []
    for i in range(spec.nsimple):
        if qp.classical:
            Sie = linalg.mat_scale(V.e[i], Fraction(-1))          # S^{-1}(e) = -e
            Sif = linalg.mat_scale(V.f[i], Fraction(-1))
        else:
            Sie = linalg.mat_scale(mat_mul(V.K_mat(i, -1), V.e[i]), Fraction(-1))  # -K^{-1} e
            Sif = linalg.mat_scale(mat_mul(V.f[i], V.K_mat(i, 1)), Fraction(-1))   # -f K
        es.append(linalg.mat_transpose(Sie))
        fs.append(linalg.mat_transpose(Sif))
    return FinRep(spec, weights, zdeg, es, fs, name=f"*{V.name}")


def flip_matrix(dV: int, dW: int) -> Matrix:
    """P: V (x) W -> W (x) V on flattened indices."""
    P = zeros(dW * dV, dV * dW)
    for i in range(dV):
        for j in range(dW):
            P[j * dV + i][i * dW + j] = Fraction(1)
    return P


def chevalley_residuals(V: FinRep) -> list:
    """Exact residual matrices of the Chevalley and Serre relations; all must be zero."""
    spec, qp = V.spec, V.spec.qp
    out = []
    r = spec.nsimple
    for i in range(r):
        for j in range(r):
            # K_i e_j K_i^{-1} = q^{a_ij} e_j
            aij = spec.cartan_int(i, spec.simple_root(j))
            lhs = mat_mul(V.K_mat(i), mat_mul(V.e[j], V.K_mat(i, -1)))
            out.append(mat_sub(lhs, linalg.mat_scale(V.e[j], qp.qpow(aij))))
            lhs = mat_mul(V.K_mat(i), mat_mul(V.f[j], V.K_mat(i, -1)))
            out.append(mat_sub(lhs, linalg.mat_scale(V.f[j], qp.qpow(-aij))))
            # [e_i, f_j] = delta_ij (K_i - K_i^{-1})/(q - q^{-1})   (= delta_ij h_i at q=1)
            comm = mat_sub(mat_mul(V.e[i], V.f[j]), mat_mul(V.f[j], V.e[i]))
            if i == j:
                if qp.classical:
                    h = V.h_diag(i)
                    tgt = [[h[a] if a == b else Fraction(0) for b in range(V.dim)] for a in range(V.dim)]
                else:
                    dK = V.K_diag(i)
                    dKi = V.K_diag(i, -1)
                    c = qp.q - 1 / qp.q
                    tgt = [[(dK[a] - dKi[a]) / c if a == b else Fraction(0) for b in range(V.dim)]
                           for a in range(V.dim)]
                comm = mat_sub(comm, tgt)
            out.append(comm)
            # Serre relations
            if i != j:
                if abs(i - j) >= 2:
                    out.append(mat_sub(mat_mul(V.e[i], V.e[j]), mat_mul(V.e[j], V.e[i])))
                    out.append(mat_sub(mat_mul(V.f[i], V.f[j]), mat_mul(V.f[j], V.f[i])))
                else:
                    two = qp.qnum(2)
                    for X in (V.e, V.f):
                        s = mat_sub(
                            linalg.mat_add(
                                mat_mul(X[i], mat_mul(X[i], X[j])),
                                mat_mul(X[j], mat_mul(X[i], X[i])),
                            ),
                            linalg.mat_scale(mat_mul(X[i], mat_mul(X[j], X[i])), two),
                        )
                        out.append(s)
    return out


def coproduct_op(V: FinRep, W: FinRep, i: int, gen: str, opposite: bool = False) -> Matrix:
    """Matrix of D(e_i)/D(f_i)/D(K_i) (or the opposite coproduct) on V (x) W."""
    idV, idW = eye(V.dim), eye(W.dim)
    if gen == "K":
        return kron(V.K_mat(i), W.K_mat(i))
    if gen == "e":
        if opposite:
            return linalg.mat_add(kron(V.K_mat(i), W.e[i]), kron(V.e[i], idW))
        return linalg.mat_add(kron(V.e[i], W.K_mat(i)), kron(idV, W.e[i]))
    if gen == "f":
        if opposite:
            return linalg.mat_add(kron(V.f[i], W.K_mat(i, -1)), kron(idV, W.f[i]))
        return linalg.mat_add(kron(V.f[i], idW), kron(V.K_mat(i, -1), W.f[i]))
    raise ValueError(gen)


# ---------------------------------------------------------------------------
# universal R-matrix


class UnsupportedPair(ValueError):
    pass


def _gln_vector_r(N: int, qp: QParam) -> Matrix:
    q = qp.q
    d = N * N
    R = zeros(d, d)
    for a in range(N):
        for b in range(N):
            R[a * N + b][a * N + b] = q if a == b else Fraction(1)
    for a in range(N):
        for b in range(a + 1, N):
            # (q - q^-1) E_ab (x) E_ba maps v_b (x) v_a -> v_a (x) v_b
            R[a * N + b][b * N + a] = q - 1 / q
    return R


def _is_vector_rep(V: FinRep) -> bool:
    N = V.spec.n
    return (
        V.spec.kind == "gln"
        and V.dim == N
        and all(V.weights[a] == tuple(1 if b == a else 0 for b in range(N)) for a in range(N))
    )


def _q_cartan_factor(V: FinRep, W: FinRep) -> Matrix:
    """Diagonal factor q^{sum x_i (x) x_i}: s^{2(mu,nu)} on the (mu,nu) weight pair."""
    spec = V.spec
    qp = spec.qp
    d = V.dim * W.dim
    Q = zeros(d, d)
    for i, mu in enumerate(V.weights):
        for j, nu in enumerate(W.weights):
            Q[i * W.dim + j][i * W.dim + j] = qp.spow(spec.pairing2(mu, nu))
    return Q


def universal_r(V: FinRep, W: FinRep) -> Matrix:
    """The universal R-matrix restricted to V (x) W.

    classical: identity.  gl_N, N >= 3: vector pair closed form.  sl2 and gl2
    (single simple root, e/f nilpotent): R = (sum_n c_n e^n (x) f^n) Q with Q
    the Cartan factor and c_n solved from R D(x) = D^op(x) R, degree by degree;
    the solve removes any transcription risk in the series coefficients.
    """
    spec = V.spec
    if spec != W.spec:
        raise ValueError("mismatched algebras")
    qp = spec.qp
    if qp.classical:
        return eye(V.dim * W.dim)
    if spec.kind == "gln" and spec.n >= 3:
        if _is_vector_rep(V) and _is_vector_rep(W):
            return _gln_vector_r(spec.n, qp)
        raise UnsupportedPair("gl_N (N>=3) universal R implemented for the vector pair only")
    # single simple root: ansatz solve with R = Q (sum_n c_n e^n (x) f^n),
    # c_0 = 1; the Cartan factor sits on the left of the nilpotent series
    Q = _q_cartan_factor(V, W)
    eV, fW = V.e[0], W.f[0]
    terms = [Q]
    En, Fn = eye(V.dim), eye(W.dim)
    while True:
        En = mat_mul(En, eV)
        Fn = mat_mul(Fn, fW)
        if mat_is_zero(En) or mat_is_zero(Fn):
            break
        terms.append(mat_mul(Q, kron(En, Fn)))
    nun = len(terms) - 1
    if nun == 0:
        R = Q
    else:
        rows, rhs = [], []
        d = V.dim * W.dim
        for gen in ("e", "f"):
            D = coproduct_op(V, W, 0, gen)
            Dop = coproduct_op(V, W, 0, gen, opposite=True)
            mats = [mat_sub(mat_mul(T, D), mat_mul(Dop, T)) for T in terms]
            for r in range(d):
                for c in range(d):
                    row = [mats[n][r][c] for n in range(1, nun + 1)]
                    if any(x != 0 for x in row) or mats[0][r][c] != 0:
                        rows.append(row)
                        rhs.append([-mats[0][r][c]])
        sol = linalg.solve_linear(rows, rhs)
        R = terms[0]
        for n in range(1, nun + 1):
            R = linalg.mat_add(R, linalg.mat_scale(terms[n], sol[n - 1][0]))
    # exact sanity: QTS axiom and invertibility
    for gen in ("e", "f", "K"):
        D = coproduct_op(V, W, 0, gen) if spec.nsimple == 1 else None
        if D is None:
            break
        Dop = coproduct_op(V, W, 0, gen, opposite=True)
        if not mat_is_zero(mat_sub(mat_mul(R, D), mat_mul(Dop, R))):
            raise ArithmeticError("universal R solve failed the QTS axiom")
    if linalg.mat_det(R) == 0:
        raise ArithmeticError("universal R not invertible")
    return R


def r_zero_part(V: FinRep, W: FinRep) -> Matrix:
    """R_0 = R Q^{-1}, the unipotent factor of R = R_0 Q."""
    R = universal_r(V, W)
    Q = _q_cartan_factor(V, W)
    d = len(Q)
    Qinv = [[1 / Q[i][i] if i == j else Fraction(0) for j in range(d)] for i in range(d)]
    return mat_mul(R, Qinv)


# ---------------------------------------------------------------------------
# Clebsch-Gordan decomposition


class SubspaceBasis:
    """Incremental row-reduced basis with coordinate extraction."""

    def __init__(self, ambient_dim: int):
        self.m = ambient_dim
        self.rows: list[list] = []
        self.piv: list[int] = []
        self.raw: list[list] = []  # original added vectors (basis of the span, in order)
        self._expr: list[list] = []  # reduced rows expressed in terms of raw vectors

    def _reduce(self, v):
        v = list(v)
        coeffs = [Fraction(0)] * len(self.raw)
        for k, (row, p) in enumerate(zip(self.rows, self.piv)):
            if not linalg.is_zero_elem(v[p]):
                c = v[p]
                v = [x - c * y for x, y in zip(v, row)]
                for t, e in enumerate(self._expr[k]):
                    coeffs[t] += c * e
        return v, coeffs

    def add(self, v) -> bool:
        red, coeffs = self._reduce(v)
        p = next((j for j in range(self.m) if not linalg.is_zero_elem(red[j])), None)
        if p is None:
            return False
        lead = red[p]
        self.raw.append(list(v))
        expr = [-c / lead for c in coeffs] + [1 / lead]
        red = [x / lead for x in red]
        self.rows.append(red)
        self.piv.append(p)
        for k in range(len(self._expr)):
            self._expr[k].append(Fraction(0))
        self._expr.append(expr)
        return True

    def coords(self, v):
        """Coordinates of v in terms of the raw added vectors, or None if outside."""
        red, coeffs = self._reduce(v)
        if any(not linalg.is_zero_elem(x) for x in red):
            return None
        return coeffs

    @property
    def dim(self):
        return len(self.raw)


class NotCompletelyReducible(ValueError):
    pass


def highest_weight_vectors(T: FinRep) -> list[list]:
    """Basis of the joint kernel of all raising operators, grouped deterministically."""
    out = []
    byw = T.weight_spaces()
    # deterministic order: weights sorted descending lexicographically
    for w in sorted(byw, reverse=True):
        idxs = byw[w]
        rows = []
        for i in range(T.spec.nsimple):
            for r in range(T.dim):
                row = [T.e[i][r][c] for c in idxs]
                if any(x != 0 for x in row):
                    rows.append(row)
        if rows:
            null = linalg.nullspace(rows)
        else:
            null = [[Fraction(1) if k == t else Fraction(0) for t in range(len(idxs))]
                    for k in range(len(idxs))]
        for vec in null:
            full = [Fraction(0)] * T.dim
            for c, idx in zip(vec, idxs):
                full[idx] = c
            out.append(full)
    return out


def generate_subrep(T: FinRep, hw: list, name="") -> tuple[FinRep, Matrix]:
    """Submodule generated by a highest-weight vector hw inside T.

    Returns (U, tau) where tau (dim T x dim U) has the chosen basis vectors of U
    as columns; the basis is the f-word orbit of hw in BFS order, so the first
    basis vector is hw itself.
    """
    sb = SubspaceBasis(T.dim)
    sb.add(hw)
    frontier = [hw]
    order = [list(hw)]
    while frontier:
        new = []
        for v in frontier:
            for i in range(T.spec.nsimple):
                img = [sum(T.f[i][r][c] * v[c] for c in range(T.dim)) for r in range(T.dim)]
                if any(x != 0 for x in img) and sb.add(img):
                    new.append(img)
                    order.append(img)
        frontier = new
    dimU = len(order)
    tau = [[order[k][r] for k in range(dimU)] for r in range(T.dim)]
    # action matrices in the generated basis
    es, fs = [], []
    for i in range(T.spec.nsimple):
        ecols, fcols = [], []
        for v in order:
            for X, cols in ((T.e[i], ecols), (T.f[i], fcols)):
                img = [sum(X[r][c] * v[c] for c in range(T.dim)) for r in range(T.dim)]
                co = sb.coords(img)
                if co is None:
                    raise NotCompletelyReducible("generated subspace not e/f-stable")
                cols.append(list(co))
        es.append(linalg.mat_transpose(ecols))
        fs.append(linalg.mat_transpose(fcols))
    weights = []
    zdeg = []
    for v in order:
        sup = next(c for c in range(T.dim) if v[c] != 0)
        weights.append(T.weights[sup])
        zdeg.append(T.zdeg[sup])
    U = FinRep(T.spec, weights, zdeg, es, fs, name=name)
    return U, tau


def cg_decompose(V: FinRep, W: FinRep) -> list[tuple[FinRep, Matrix, Matrix]]:
    """Isotypic decomposition of V (x) W into (U, tau_U, taubar_U) triples with
    taubar_U tau_U = Id_U and sum_U tau_U taubar_U = Id."""
    T = tensor(V, W)
    return cg_decompose_rep(T)


def cg_decompose_rep(T: FinRep) -> list[tuple[FinRep, Matrix, Matrix]]:
    hws = highest_weight_vectors(T)
    summands = []
    total = 0
    for k, hw in enumerate(hws):
        U, tau = generate_subrep(T, hw, name=f"U{k}")
        summands.append((U, tau))
        total += U.dim
    if total != T.dim:
        raise NotCompletelyReducible(
            f"summand dimensions {total} != {T.dim}; non-generic q?"
        )
    # stack all bases; invert once to get all projections
    S = [[Fraction(0)] * T.dim for _ in range(T.dim)]
    col = 0
    for U, tau in summands:
        for k in range(U.dim):
            for r in range(T.dim):
                S[r][col] = tau[r][k]
            col += 1
    Sinv = linalg.mat_inv(S)
    out = []
    row = 0
    for U, tau in summands:
        taubar = [Sinv[row + k] for k in range(U.dim)]
        out.append((U, tau, [list(r) for r in taubar]))
        row += U.dim
    return out
