"""Odd reflections of bases, canonical forms of Cartan matrices, and bounded
enumeration of the reflection orbit.

A base is reflected at an odd simple root alpha_i with A_ii = 0.  The new
simple roots are r_i(alpha_i) = -alpha_i and r_i(alpha_j) = alpha_j + alpha_i
when i and j are connected (A_ij != 0 or A_ji != 0), else alpha_j.  The new
Cartan matrix is read off the constructed algebra: the new positive
generators are e'_i = f_i and e'_j = [e_j, e_i] (or e_j when disconnected),
mirrored on the negative side; h'_j = [e'_j, f'_j] and A'_jk = alpha'_k(h'_j).
Rows are then rescaled to a fixed convention so reflected matrices compare
deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .builder import NEG, POS, AlgebraModel, build, weight_parity
from .catalog import ConcreteCartan


class ReflectionError(ValueError):
    """Raised when the pivot is not an odd root with zero diagonal."""


@dataclass(frozen=True)
class BaseState:
    cartan: ConcreteCartan
    simple_roots: tuple[tuple[int, ...], ...]  # in the original base's coords
    chain: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.cartan.n

    def reflectable(self) -> list[int]:
        A, par = self.cartan.A, self.cartan.parities
        return [i for i in range(self.n) if par[i] == 1 and int(A[i, i]) == 0]


def initial_state(cc: ConcreteCartan) -> BaseState:
    n = cc.n
    units = tuple(tuple(1 if t == i else 0 for t in range(n)) for i in range(n))
    return BaseState(cc, units, ())


def _elem_bracket(model: AlgebraModel, x, y):
    """[x, y] for generic elements with x in the positive part."""
    F = model.field
    xkey, xcoords = x
    acc = (None, None)
    for s in range(len(xcoords)):
        c = int(xcoords[s])
        if c == 0:
            continue
        out = model.pair((POS, tuple(xkey), s), y)
        if out[0] is None:
            continue
        piece = (out[0], F.smul(c, out[1]))
        if acc[0] is None:
            acc = piece
        else:
            if acc[0] != piece[0]:
                raise RuntimeError("inconsistent bracket targets")
            acc = (acc[0], F.madd(acc[1], piece[1]))
    if acc[0] is not None and not acc[1].any():
        return model.zero()
    return acc


def _signed_weight_eval(model: AlgebraModel, hcoords, weight) -> int:
    """alpha(h) for h = sum c_i h_i and a signed weight alpha."""
    F = model.field
    val = 0
    for i in range(model.n):
        c = int(hcoords[i])
        if c == 0:
            continue
        val = F.add(val, F.mul(c, model.weight_eval(weight, i)))
    return val


def normalize_rows(cc: ConcreteCartan) -> ConcreteCartan:
    """Rescale rows to the fixed convention.

    Zero diagonal: first nonzero entry becomes 1.  Nonzero diagonal: the
    diagonal becomes 2 mod p for an even vertex, 1 for an odd one; when
    2 mod p is unreachable (p = 2, nonzero diagonal) it becomes 1.
    """
    F = cc.field
    A = cc.A.copy()
    n = cc.n
    for i in range(n):
        d = int(A[i, i])
        if d != 0:
            target = F.lift(2) if cc.parities[i] == 0 else 1
            if target == 0:
                target = 1
            lam = F.div(target, d)
        else:
            nz = [int(A[i, j]) for j in range(n) if int(A[i, j]) != 0]
            if not nz:
                continue
            lam = F.inv(nz[0])
        if lam != 1:
            for j in range(n):
                A[i, j] = F.mul(lam, int(A[i, j]))
    return cc.with_matrix(A, cc.parities)


def odd_reflect(state: BaseState, model: AlgebraModel, i: int) -> BaseState:
    """Reflect the base at pivot i; model must be built from state.cartan."""
    cc = state.cartan
    F, n, A = cc.field, cc.n, cc.A
    if cc.parities[i] != 1 or int(A[i, i]) != 0:
        raise ReflectionError(
            f"pivot {i} is not an odd simple root with zero diagonal"
        )
    unit = lambda t: tuple(1 if s == t else 0 for s in range(n))
    # new simple roots in the current base's coordinates
    new_in_cur = []
    for j in range(n):
        if j == i:
            new_in_cur.append(tuple(-c for c in unit(i)))
        elif int(A[i, j]) != 0 or int(A[j, i]) != 0:
            new_in_cur.append(tuple(a + b for a, b in zip(unit(j), unit(i))))
        else:
            new_in_cur.append(unit(j))
    # transported generator pairs and their Cartan elements
    hs = []
    for j in range(n):
        if j == i:
            # e'_i = f_i, f'_i = e_i, so h'_i = [f_i, e_i] (= h_i for odd i)
            coords = F.zeros(1)
            coords[0] = 1
            h = model.pair((NEG, unit(i), 0), (unit(i), coords))
        elif new_in_cur[j] == unit(j):
            epos = (unit(j), F.zeros(1))
            epos[1][0] = 1
            eneg = (tuple(-c for c in unit(j)), epos[1].copy())
            h = _elem_bracket(model, epos, eneg)
        else:
            w = tuple(abs(c) for c in new_in_cur[j])
            epos = _elem_bracket_refs(model, ("pos", unit(j), 0), ("pos", unit(i), 0))
            eneg = _elem_bracket_refs(model, ("neg", unit(j), 0), ("neg", unit(i), 0))
            if epos[0] is None or eneg[0] is None:
                raise ReflectionError(
                    f"transported generator at {w} vanishes; base is degenerate"
                )
            h = _elem_bracket(model, epos, eneg)
        if h[0] is not None and any(c != 0 for c in h[0]):
            raise RuntimeError("h' is not a Cartan element")
        hs.append(F.zeros(n) if h[0] is None else h[1])
    newA = F.zeros(n, n)
    for j in range(n):
        for k in range(n):
            newA[j, k] = _signed_weight_eval(model, hs[j], new_in_cur[k])
    new_parities = tuple(
        weight_parity(w, cc.parities) for w in new_in_cur
    )
    # express the new simple roots in the original base's coordinates
    new_orig = []
    for j in range(n):
        acc = [0] * n
        for m, km in enumerate(new_in_cur[j]):
            for t in range(n):
                acc[t] += km * state.simple_roots[m][t]
        new_orig.append(tuple(acc))
    new_cc = normalize_rows(
        cc.with_matrix(newA, new_parities, name=cc.name)
    )
    return BaseState(new_cc, tuple(new_orig), state.chain + (i,))


def _elem_bracket_refs(model: AlgebraModel, x, y):
    from .builder import bracket
    return bracket(model, x, y)


# -- canonical form ----------------------------------------------------------


_PERMS: dict[int, np.ndarray] = {}


def _perm_table(n: int) -> np.ndarray:
    if n not in _PERMS:
        _PERMS[n] = np.array(list(permutations(range(n))), dtype=np.intp)
    return _PERMS[n]


def canonical_form(cc: ConcreteCartan) -> tuple:
    """Minimal (parities, row-major entries) over simultaneous row+column
    permutations, with rows rescaled per the fixed convention after
    permuting (so the key is invariant under admissible rescalings)."""
    F = cc.field
    n = cc.n
    A = cc.A
    par = np.array(cc.parities, dtype=np.uint8)
    perms = _perm_table(n)
    P = par[perms]  # (m, n)
    # only permutations realizing the minimal parity prefix can win
    pbytes = np.frombuffer(np.ascontiguousarray(P).tobytes(), dtype=f"S{n}")
    perms = perms[pbytes == np.sort(pbytes)[0]]
    P = par[perms]
    B = A[perms[:, :, None], perms[:, None, :]].astype(np.uint8)  # (m, n, n)
    m = B.shape[0]
    MUL, INV = F.MUL, F.INV
    two = F.lift(2)
    for i in range(n):
        d = B[:, i, i]
        target = np.where(P[:, i] == 0, two if two != 0 else 1, 1).astype(np.uint8)
        nz_mask = B[:, i, :] != 0
        has_nz = nz_mask.any(axis=1)
        first = np.where(has_nz, nz_mask.argmax(axis=1), 0)
        first_val = B[np.arange(m), i, first]
        pivot = np.where(d != 0, d, np.where(has_nz, first_val, 1)).astype(np.uint8)
        goal = np.where(d != 0, target, 1).astype(np.uint8)
        lam = MUL[goal, INV[pivot]]
        B[:, i, :] = MUL[lam[:, None], B[:, i, :]]
    keys = np.concatenate([P, B.reshape(m, n * n)], axis=1)
    kbytes = np.frombuffer(np.ascontiguousarray(keys).tobytes(), dtype=f"S{n + n * n}")
    best = keys[np.where(kbytes == np.sort(kbytes)[0])[0][0]]
    return tuple(int(v) for v in best)


# -- orbit enumeration -------------------------------------------------------


@dataclass
class OrbitNode:
    key: tuple
    cartan: ConcreteCartan
    chain: tuple[int, ...]


@dataclass
class OrbitGraph:
    nodes: dict          # canonical key -> OrbitNode
    edges: list          # (from_key, to_key, pivot)
    limited: bool        # True when the class limit cut the search short

    def to_json_dict(self) -> dict:
        index = {key: i for i, key in enumerate(self.nodes)}
        F = next(iter(self.nodes.values())).cartan.field if self.nodes else None
        nodes = []
        for key, node in self.nodes.items():
            cc = node.cartan
            nodes.append({
                "id": index[key],
                "key": list(key),
                "matrix": [[F.fmt(int(cc.A[i, j])) for j in range(cc.n)]
                           for i in range(cc.n)],
                "parities": list(cc.parities),
                "chain": list(node.chain),
            })
        edges = [
            {"from": index[a], "to": index[b], "pivot": piv}
            for a, b, piv in self.edges
        ]
        return {"nodes": nodes, "edges": edges, "limited": self.limited}

    def to_dot(self) -> str:
        index = {key: i for i, key in enumerate(self.nodes)}
        out = ["digraph orbit {"]
        for key, node in self.nodes.items():
            label = ",".join(str(i) for i in node.chain) or "seed"
            out.append(f'  n{index[key]} [label="{label}"];')
        for a, b, piv in self.edges:
            out.append(f'  n{index[a]} -> n{index[b]} [label="r{piv}"];')
        out.append("}")
        return "\n".join(out)


def enumerate_bases(cc: ConcreteCartan, limit: int = 512,
                    max_depth: int | None = None) -> OrbitGraph:
    """BFS over odd reflections, deduplicated by canonical form."""
    seed = initial_state(normalize_rows(cc))
    skey = canonical_form(seed.cartan)
    nodes = {skey: OrbitNode(skey, seed.cartan, ())}
    edges = []
    seen_edges = set()
    frontier = [(seed, skey)]
    limited = False
    while frontier:
        nxt = []
        for state, key in frontier:
            if max_depth is not None and len(state.chain) >= max_depth:
                continue
            pivots = state.reflectable()
            if not pivots:
                continue
            model = build(state.cartan)
            for i in pivots:
                new_state = odd_reflect(state, model, i)
                nkey = canonical_form(new_state.cartan)
                if (key, nkey, i) not in seen_edges:
                    seen_edges.add((key, nkey, i))
                    edges.append((key, nkey, i))
                if nkey in nodes:
                    continue
                if len(nodes) >= limit:
                    limited = True
                    continue
                nodes[nkey] = OrbitNode(nkey, new_state.cartan, new_state.chain)
                nxt.append((new_state, nkey))
        frontier = nxt
    return OrbitGraph(nodes, edges, limited)
