"""Height-by-height construction of the contragredient algebra g(A).

Given a Cartan matrix A and a parity vector over GF(p^k), the algebra is
generated by e_i, f_i, h_i with [e_i,f_j] = delta_ij h_i and
[h_i,e_j] = A_ij e_j.  The positive part is grown one height at a time:
candidates at weight alpha are the vectors [e_i, v] for each basis vector v
at alpha - alpha_i (plus, in characteristic 2, squares v^[2] of odd basis
vectors at alpha/2).  The joint kernel of all lowering maps ad(f_j) is the
radical slice at that weight and is quotiented away; surviving candidates
(greedy pivot order) form the basis.  The negative side is built by the
mirrored recursion so that mixed brackets (needed for isotropy and odd
reflections) terminate in explicit Cartan elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .catalog import ConcreteCartan

POS, NEG = 1, -1


class BuildLimitError(RuntimeError):
    """Construction exceeded max-height or max-mult (non-finite-dimensional

    algebra or a mis-entered matrix)."""


@dataclass(frozen=True)
class BasisVector:
    kind: str            # "gen" | "cand" | "sq"
    i: int               # generator index for gen/cand; unused for sq
    src_weight: tuple[int, ...] | None  # weight of the source basis vector
    src: int             # index into the basis at src_weight (cand/sq)


@dataclass
class RootSpace:
    weight: tuple[int, ...]
    side: int
    basis: list[BasisVector]
    lower: dict[int, np.ndarray] = dc_field(default_factory=dict)
    # lower[j]: mult x mult(weight - alpha_j) matrix; the action of ad(f_j)
    # on the positive side, ad(e_j) on the negative side.

    @property
    def mult(self) -> int:
        return len(self.basis)


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if t == i else 0 for t in range(n))


def weight_parity(weight, parities) -> int:
    return sum(abs(k) * p for k, p in zip(weight, parities)) % 2


class AlgebraModel:
    """The built algebra: root spaces, lowering/raising maps, Cartan data."""

    def __init__(self, cc: ConcreteCartan, max_height: int, max_mult: int):
        self.cc = cc
        self.field = cc.field
        self.n = cc.n
        self.limits = {"max_height": max_height, "max_mult": max_mult}
        self.spaces = {POS: {}, NEG: {}}   # weight -> RootSpace
        self.raises = {POS: {}, NEG: {}}   # (weight, i) -> mult(w) x mult(w+e_i)
        F = self.field
        self.rank_a = F.rank(cc.A)
        self.dim_h = 2 * self.n - self.rank_a
        self.corank = self.n - self.rank_a
        self.truncated = False
        self._ops: dict = {}  # pairing-operator cache

    # -- queries ------------------------------------------------------------

    @property
    def roots(self) -> list[tuple[int, ...]]:
        return sorted(self.spaces[POS], key=lambda w: (sum(w), w))

    def mult(self, weight, side=POS) -> int:
        sp = self.spaces[side].get(tuple(weight))
        return sp.mult if sp else 0

    def parity(self, weight) -> int:
        return weight_parity(weight, self.cc.parities)

    def weight_eval(self, weight, i: int) -> int:
        """alpha(h_i) = sum_j k_j A_ij as a field element (signed k allowed)."""
        F = self.field
        acc = 0
        for j, k in enumerate(weight):
            acc = F.add(acc, F.mul(F.lift(k), int(self.cc.A[i, j])))
        return acc

    # -- elements and generator actions -------------------------------------
    # An element is (wkey, coords): wkey a signed weight tuple (all-zero =
    # Cartan, coords over h_1..h_n), or None for zero.

    def zero(self):
        return (None, None)

    def _kind(self, wkey):
        if wkey is None:
            return "zero"
        if all(c == 0 for c in wkey):
            return "cartan"
        if all(c >= 0 for c in wkey):
            return "pos"
        if all(c <= 0 for c in wkey):
            return "neg"
        return "void"

    def space_dim(self, wkey) -> int:
        kind = self._kind(wkey)
        if kind == "cartan":
            return self.n
        if kind == "pos":
            return self.mult(wkey, POS)
        if kind == "neg":
            return self.mult(tuple(-c for c in wkey), NEG)
        return 0

    def gen_matrix(self, gen: tuple[str, int], wkey):
        """Matrix of ad(e_i) or ad(f_i) on the space at wkey.

        Returns (target_wkey, matrix) with row-vector convention
        out = coords @ matrix, or (None, None) when the image is zero.
        """
        F, n, A, par = self.field, self.n, self.cc.A, self.cc.parities
        s, i = gen
        kind = self._kind(wkey)
        if kind in ("zero", "void") or self.space_dim(wkey) == 0:
            return self.zero()
        if kind == "cartan":
            # [e_i, h_m] = -A_mi e_i ; [f_i, h_m] = A_mi f_i
            tgt = _unit(n, i) if s == "e" else tuple(-c for c in _unit(n, i))
            m = F.zeros(n, 1)
            for mm in range(n):
                v = int(A[mm, i])
                m[mm, 0] = F.neg(v) if s == "e" else v
            return (tgt, m)
        if kind == "pos":
            w = tuple(wkey)
            if s == "e":
                mat = self.raises[POS].get((w, i))
                if mat is None:
                    return self.zero()
                return (tuple(c + (1 if t == i else 0) for t, c in enumerate(w)), mat)
            # f_i on the positive side
            if sum(w) == 1:
                m_idx = w.index(1)
                if m_idx != i:
                    return self.zero()
                mat = F.zeros(1, n)
                mat[0, m_idx] = F.lift(-((-1) ** par[m_idx]))  # [f_i, e_i] = -(-1)^{p_i} h_i... sign
                # [f_i, e_m] = -(-1)^{p_m} delta_im h_m
                return ((0,) * n, mat)
            tgt = tuple(c - (1 if t == i else 0) for t, c in enumerate(w))
            if any(c < 0 for c in tgt):
                return self.zero()
            sp = self.spaces[POS].get(w)
            mat = sp.lower.get(i)
            if mat is None or mat.shape[1] == 0:
                return self.zero()
            return (tgt, mat)
        # negative side; delta = mirror weight
        delta = tuple(-c for c in wkey)
        if s == "f":
            mat = self.raises[NEG].get((delta, i))
            if mat is None:
                return self.zero()
            return (tuple(-(c + (1 if t == i else 0)) for t, c in enumerate(delta)), mat)
        if sum(delta) == 1:
            m_idx = delta.index(1)
            if m_idx != i:
                return self.zero()
            mat = F.zeros(1, n)
            mat[0, i] = 1  # [e_i, f_i] = h_i
            return ((0,) * n, mat)
        tgt = tuple(c - (1 if t == i else 0) for t, c in enumerate(delta))
        if any(c < 0 for c in tgt):
            return self.zero()
        sp = self.spaces[NEG].get(delta)
        mat = sp.lower.get(i)
        if mat is None or mat.shape[1] == 0:
            return self.zero()
        return (tuple(-c for c in tgt), mat)

    def gen_apply(self, gen, elem):
        wkey, coords = elem
        if wkey is None:
            return self.zero()
        tgt, mat = self.gen_matrix(gen, wkey)
        if tgt is None:
            return self.zero()
        out = self.field.vecmat(coords, mat)
        if not out.any():
            return self.zero()
        return (tgt, out)

    # -- pairing operators ---------------------------------------------------
    # op(node, wkey) is the matrix of y -> [x, y] restricted to the space at
    # wkey, where x is the basis vector identified by node = (side, weight,
    # index).  Memoized; recursion follows the provenance chain of x.

    def _node_gen_side(self, side) -> str:
        return "e" if side == POS else "f"

    def op(self, node, wkey):
        key = (node, wkey)
        if key in self._ops:
            return self._ops[key]
        res = self._op_compute(node, wkey)
        self._ops[key] = res
        return res

    def _op_compute(self, node, wkey):
        if self.space_dim(wkey) == 0:
            return self.zero()
        F = self.field
        side, w, idx = node
        bv = self.spaces[side][w].basis[idx]
        gs = self._node_gen_side(side)
        if bv.kind == "gen":
            return self.gen_matrix((gs, bv.i), wkey)
        if bv.kind == "sq":
            v = (side, bv.src_weight, bv.src)
            t1, m1 = self.op(v, wkey)
            if t1 is None:
                return self.zero()
            t2, m2 = self.op(v, t1)
            if t2 is None:
                return self.zero()
            return (t2, F.matmul(m1, m2))
        # cand: x = [g, z] with g = e_i (or f_i), z the source basis vector
        g = (gs, bv.i)
        z = (side, bv.src_weight, bv.src)
        p_g = self.cc.parities[bv.i]
        p_z = weight_parity(bv.src_weight, self.cc.parities)
        sgn = F.pow_minus_one(p_g * p_z)
        # term 1: g . (z . y)
        tgt1 = mat1 = None
        tz, mz = self.op(z, wkey)
        if tz is not None:
            tg, mg = self.gen_matrix(g, tz)
            if tg is not None:
                tgt1, mat1 = tg, F.matmul(mz, mg)
        # term 2: -sgn * z . (g . y)
        tgt2 = mat2 = None
        tg, mg = self.gen_matrix(g, wkey)
        if tg is not None:
            tz2, mz2 = self.op(z, tg)
            if tz2 is not None:
                tgt2, mat2 = tz2, F.matmul(mg, mz2)
        if mat1 is None and mat2 is None:
            return self.zero()
        if mat2 is not None:
            mat2 = F.smul(F.mul(sgn, F.lift(-1)), mat2)
        if mat1 is None:
            return (tgt2, mat2)
        if mat2 is None:
            return (tgt1, mat1)
        assert tgt1 == tgt2
        return (tgt1, F.madd(mat1, mat2))

    def pair(self, node, elem):
        """[x_node, elem] as an element."""
        wkey, coords = elem
        if wkey is None:
            return self.zero()
        tgt, mat = self.op(node, wkey)
        if tgt is None:
            return self.zero()
        out = self.field.vecmat(coords, mat)
        if not out.any():
            return self.zero()
        return (tgt, out)


# -- the construction -------------------------------------------------------


def _candidates(model: AlgebraModel, alpha: tuple[int, ...], side: int):
    """Deterministic candidate list at a weight: raises first, then squares."""
    n, p = model.n, model.cc.field.p
    cands: list[BasisVector] = []
    for i in range(n):
        if alpha[i] == 0:
            continue
        beta = tuple(c - (1 if t == i else 0) for t, c in enumerate(alpha))
        sp = model.spaces[side].get(beta)
        if sp is None:
            continue
        for s in range(sp.mult):
            cands.append(BasisVector("cand", i, beta, s))
    if p == 2 and all(c % 2 == 0 for c in alpha):
        half = tuple(c // 2 for c in alpha)
        sp = model.spaces[side].get(half)
        if sp is not None and model.parity(half) == 1:
            for s in range(sp.mult):
                cands.append(BasisVector("sq", -1, half, s))
    return cands


def _lower_candidate(model: AlgebraModel, side: int, alpha, cand: BasisVector, j: int):
    """Coordinates of ad(f_j) [pos] / ad(e_j) [neg] applied to a candidate.

    Returns a vector over the basis at alpha - alpha_j, or None when that
    space is absent / the result is structurally zero.
    """
    F, n, A, par = model.field, model.n, model.cc.A, model.cc.parities
    tau = tuple(c - (1 if t == j else 0) for t, c in enumerate(alpha))
    if any(c < 0 for c in tau):
        return None
    dim_tau = model.mult(tau, side)
    if dim_tau == 0:
        return None
    res = F.zeros(dim_tau)

    if cand.kind == "sq":
        beta, s = cand.src_weight, cand.src
        if sum(beta) == 1:
            # [f_j, e_m^[2]] = delta_jm A_mm e_m (and mirrored)
            m_idx = beta.index(1)
            if j == m_idx:
                res[0] = int(A[m_idx, m_idx])
            return res if res.any() else res
        sp = model.spaces[side][beta]
        low = sp.lower.get(j)
        if low is None:
            return res
        w = low[s]
        if not w.any():
            return res
        # [f_j, v^2] = [[f_j,v], v] = [v, w] in char 2
        src_wkey = tuple((1 if side == POS else -1) * c for c in
                         (beta[t] - (1 if t == j else 0) for t in range(n)))
        out = model.pair((side, beta, s), (src_wkey, w))
        if out[0] is not None:
            res = F.madd(res, out[1])
        return res

    i, beta, s = cand.i, cand.src_weight, cand.src
    # term 1 (only when i == j): coefficient * z itself; tau == beta then
    if i == j:
        coef = model.weight_eval(beta, i)
        if side == POS:
            coef = F.mul(coef, F.lift(-((-1) ** par[i])))
        else:
            coef = F.neg(coef)
        res[s] = F.add(int(res[s]), coef)
    sgn = F.pow_minus_one(par[i] * par[j])
    if sum(beta) == 1:
        m_idx = beta.index(1)
        if j == m_idx:
            # through the Cartan.  Positive side: [f_j, e_m] = -(-1)^{p_m} d_jm h_m
            # and [e_i, h_m] = -A_mi e_i, so the coefficient is (-1)^{p_m} A_mi.
            # Negative side: [e_j, f_m] = d_jm h_m and [f_i, h_m] = A_mi f_i.
            val = int(A[m_idx, i])
            if side == POS:
                val = F.mul(F.pow_minus_one(par[m_idx]), val)
            term = F.mul(sgn, val)
            # target tau must equal alpha_i here
            gen_sp = model.spaces[side].get(_unit(n, i))
            if gen_sp is not None and tau == _unit(n, i):
                res[0] = F.add(int(res[0]), term)
        return res
    sp = model.spaces[side][beta]
    low = sp.lower.get(j)
    if low is not None:
        w = low[s]
        if w.any():
            gamma = tuple(beta[t] - (1 if t == j else 0) for t in range(n))
            rmat = model.raises[side].get((gamma, i))
            if rmat is not None:
                res = F.madd(res, F.smul(sgn, F.vecmat(w, rmat)))
    return res


def _build_space(model: AlgebraModel, alpha, side, forced_pivots=None):
    """Quotient the radical at one weight; returns chosen pivot indices."""
    F = model.field
    cands = _candidates(model, alpha, side)
    if not cands:
        return None
    cols = []
    col_slices = {}
    pos = 0
    n = model.n
    for j in range(n):
        tau = tuple(c - (1 if t == j else 0) for t, c in enumerate(alpha))
        if any(c < 0 for c in tau):
            continue
        d = model.mult(tau, side)
        if d == 0:
            continue
        block = F.zeros(len(cands), d)
        for r, cand in enumerate(cands):
            v = _lower_candidate(model, side, alpha, cand, j)
            if v is not None:
                block[r] = v
        cols.append(block)
        col_slices[j] = (pos, pos + d)
        pos += d
    if not cols:
        return None
    L = np.concatenate(cols, axis=1)
    if forced_pivots is None:
        _, _, pivot_rows = F.rref(L)
        pivot_rows = sorted(pivot_rows)
    else:
        pivot_rows = forced_pivots
    mult = len(pivot_rows)
    if mult == 0:
        return None
    if mult > model.limits["max_mult"]:
        raise BuildLimitError(
            f"multiplicity {mult} at weight {alpha} exceeds max-mult {model.limits['max_mult']}"
        )
    basis_rows = L[pivot_rows]
    if forced_pivots is not None and F.rank(basis_rows) != mult:
        raise RuntimeError(f"mirror pivot mismatch at weight {alpha}")
    X = F.solve_rows(basis_rows, L)  # every candidate in terms of the basis
    space = RootSpace(tuple(alpha), side, [cands[r] for r in pivot_rows])
    for j, (a, b) in col_slices.items():
        space.lower[j] = basis_rows[:, a:b]
    model.spaces[side][tuple(alpha)] = space
    # raising maps: expansion of [e_i, v_s] rows grouped per generator i
    by_i: dict[int, list[tuple[int, int]]] = {}
    for r, cand in enumerate(cands):
        if cand.kind == "cand":
            by_i.setdefault(cand.i, []).append((cand.src, r))
    for i, pairs in by_i.items():
        src_w = tuple(c - (1 if t == i else 0) for t, c in enumerate(alpha))
        mat = F.zeros(model.mult(src_w, side), mult)
        for s, r in pairs:
            mat[s] = X[r]
        model.raises[side][(src_w, i)] = mat
    return pivot_rows


def build(cc: ConcreteCartan, max_height: int = 64, max_mult: int = 16,
          on_limit: str = "raise") -> AlgebraModel:
    """Construct g(A) and return the model.

    ``on_limit``: "raise" aborts with BuildLimitError when max_height is hit
    with growth still pending; "truncate" returns the partial model with
    ``model.truncated`` set (used by oracle comparisons at fixed height).
    """
    model = AlgebraModel(cc, max_height, max_mult)
    n, p = cc.n, cc.field.p
    for i in range(n):
        u = _unit(n, i)
        for side in (POS, NEG):
            model.spaces[side][u] = RootSpace(u, side, [BasisVector("gen", i, None, 0)])
    for h in range(2, max_height + 1):
        weights = set()
        for w in model.spaces[POS]:
            if sum(w) == h - 1:
                for i in range(n):
                    weights.add(tuple(c + (1 if t == i else 0) for t, c in enumerate(w)))
        if p == 2 and h % 2 == 0:
            for w in model.spaces[POS]:
                if sum(w) == h // 2 and model.parity(w) == 1:
                    weights.add(tuple(2 * c for c in w))
        if not weights:
            if p == 2 and any(
                model.parity(w) == 1 and 2 * sum(w) > h for w in model.spaces[POS]
            ):
                continue
            break
        for alpha in sorted(weights):
            piv = _build_space(model, alpha, POS)
            if piv is not None:
                _build_space(model, alpha, NEG, forced_pivots=piv)
    else:
        # growth might still be pending past max_height
        frontier = [w for w in model.spaces[POS] if sum(w) == max_height]
        pending_sq = p == 2 and any(
            model.parity(w) == 1 and 2 * sum(w) > max_height for w in model.spaces[POS]
        )
        if frontier or pending_sq:
            if on_limit == "raise":
                raise BuildLimitError(
                    f"no stabilization by max-height {max_height}; "
                    "matrix may define a non-finite-dimensional algebra"
                )
            model.truncated = True
    return model


# -- public bracket / dims helpers ------------------------------------------


def lower(model: AlgebraModel, j: int, weight, index: int = 0):
    """ad(f_j) of a positive basis vector; height-1 input returns the Cartan

    flag ("h", i) when i == j, else None."""
    w = tuple(weight)
    if sum(w) == 1:
        i = w.index(1)
        return ("h", i) if i == j else None
    sp = model.spaces[POS][w]
    mat = sp.lower.get(j)
    if mat is None:
        tau = tuple(c - (1 if t == j else 0) for t, c in enumerate(w))
        return (tau, model.field.zeros(model.mult(tau, POS)))
    tau = tuple(c - (1 if t == j else 0) for t, c in enumerate(w))
    return (tau, mat[index].copy())


def bracket(model: AlgebraModel, x, y):
    """[x, y] for element references.

    References: ("pos", weight, index), ("neg", weight, index) with weight a
    nonnegative tuple, or ("h", coords) with coords over h_1..h_n.  Returns
    an element (wkey, coords) with wkey signed, or (None, None) for zero.
    """
    F, n = model.field, model.n

    def as_elem(ref):
        kind = ref[0]
        if kind == "h":
            return ((0,) * n, F.mat(list(ref[1])).reshape(-1) if not isinstance(ref[1], np.ndarray) else ref[1])
        w = tuple(ref[1])
        d = model.mult(w, POS if kind == "pos" else NEG)
        if ref[2] >= d:
            raise IndexError(f"basis index {ref[2]} out of range at weight {w}")
        coords = F.zeros(d)
        coords[ref[2]] = 1
        wkey = w if kind == "pos" else tuple(-c for c in w)
        return (wkey, coords)

    if x[0] in ("pos", "neg"):
        node = (POS if x[0] == "pos" else NEG, tuple(x[1]), x[2])
        return model.pair(node, as_elem(y))
    # x is a Cartan element: [h, y] = (wt y)(h) * y
    ykey, ycoords = as_elem(y)
    if all(c == 0 for c in ykey):
        return model.zero()
    coef = 0
    hcoords = as_elem(x)[1]
    for i in range(n):
        coef = F.add(coef, F.mul(int(hcoords[i]), model.weight_eval(ykey, i)))
    if coef == 0:
        return model.zero()
    return (ykey, F.smul(coef, ycoords))


def cartan_dims(cc: ConcreteCartan) -> tuple[int, int, int, int]:
    """(n, rank A, dim h = 2n - rank, corank = n - rank)."""
    rank = cc.field.rank(cc.A)
    return (cc.n, rank, 2 * cc.n - rank, cc.n - rank)
