"""Arithmetic and exact linear algebra over small finite fields GF(p^k).

Supported fields: p in {2, 3, 5, 7}, k in {1, 2} (field order capped at 256).
Elements are integer codes in [0, q).  For k=1 the code is the residue
itself; for k=2 the code ``a*p + b`` denotes ``a*w + b`` where ``w`` is a
root of the chosen degree-2 modulus.  The modulus is the lexicographically
smallest monic irreducible quadratic ``x^2 + c1*x + c0`` over GF(p),
ordering by the coefficient tuple ``(c1, c0)``.

Vectors and matrices are numpy arrays of element codes; all row operations
go through precomputed addition/multiplication tables so every computation
is exact.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

SUPPORTED_PRIMES = (2, 3, 5, 7)
MAX_ORDER = 256


class FieldError(ValueError):
    """Raised for unsupported field parameters or illegal element ops."""


def _smallest_irreducible_quadratic(p: int) -> tuple[int, int]:
    """Return (c1, c0) for the lex-smallest monic irreducible x^2+c1*x+c0."""
    for c1 in range(p):
        for c0 in range(p):
            # irreducible over GF(p) iff no root in GF(p)
            if all((x * x + c1 * x + c0) % p != 0 for x in range(p)):
                return (c1, c0)
    raise FieldError(f"no irreducible quadratic over GF({p})")  # pragma: no cover


class Field:
    """The finite field GF(p^k) with table-based exact arithmetic."""

    def __init__(self, p: int, k: int = 1):
        if p not in SUPPORTED_PRIMES:
            raise FieldError(f"unsupported characteristic p={p}; p must be one of {SUPPORTED_PRIMES}")
        if k not in (1, 2):
            raise FieldError(f"unsupported extension degree k={k}; k must be 1 or 2")
        q = p**k
        if q > MAX_ORDER:
            raise FieldError(f"field order {q} exceeds cap {MAX_ORDER}")
        self.p = p
        self.k = k
        self.q = q
        self.modulus = _smallest_irreducible_quadratic(p) if k == 2 else None
        self._build_tables()

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        codes = np.arange(q, dtype=np.int64)
        if k == 1:
            add = (codes[:, None] + codes[None, :]) % p
            mul = (codes[:, None] * codes[None, :]) % p
        else:
            c1, c0 = self.modulus
            a1, a0 = codes // p, codes % p
            # (a1 w + a0) + (b1 w + b0)
            add = ((a1[:, None] + a1[None, :]) % p) * p + (a0[:, None] + a0[None, :]) % p
            # (a1 w + a0)(b1 w + b0) with w^2 = -c1 w - c0
            hi = a1[:, None] * a1[None, :]
            mid = a1[:, None] * a0[None, :] + a0[:, None] * a1[None, :]
            lo = a0[:, None] * a0[None, :]
            r1 = (mid - c1 * hi) % p
            r0 = (lo - c0 * hi) % p
            mul = r1 * p + r0
        self.ADD = add.astype(np.uint8)
        self.MUL = mul.astype(np.uint8)
        neg = np.zeros(q, dtype=np.uint8)
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(q):
            row = self.ADD[a]
            neg[a] = int(np.nonzero(row == 0)[0][0])
            if a:
                inv[a] = int(np.nonzero(self.MUL[a] == 1)[0][0])
        self.NEG = neg
        self.INV = inv

    # -- scalar ops ---------------------------------------------------------

    def lift(self, z: int) -> int:
        """Embed an integer into the prime subfield."""
        return z % self.p

    def add(self, a: int, b: int) -> int:
        return int(self.ADD[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.ADD[a, self.NEG[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.MUL[a, b])

    def neg(self, a: int) -> int:
        return int(self.NEG[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("division by zero")
        return int(self.INV[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow_minus_one(self, e: int) -> int:
        """(-1)^e as a field element."""
        return self.lift(-1) if e % 2 else 1

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Polynomial coefficients of an element code, high to low degree."""
        if self.k == 1:
            return (a,)
        return (a // self.p, a % self.p)

    def fmt(self, a: int) -> str:
        """Canonical printing: decimal for k=1, ``a*w+b`` for k=2."""
        if self.k == 1:
            return str(a)
        hi, lo = self.coeffs(a)
        return f"{hi}*w+{lo}"

    def parse(self, tok: str) -> int:
        """Parse an element token: a signed integer or the generator ``a``."""
        tok = tok.strip()
        if tok == "a":
            if self.k != 2:
                raise FieldError("token 'a' requires a degree-2 field")
            return self.p  # the element w
        try:
            z = int(tok)
        except ValueError as exc:
            raise FieldError(f"bad field element token {tok!r}") from exc
        return self.lift(z)

    @property
    def name(self) -> str:
        return f"GF({self.q})"

    def __repr__(self) -> str:
        return f"Field(p={self.p}, k={self.k})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self) -> int:
        return hash((self.p, self.k))

    # -- vector / matrix ops (numpy code arrays) ----------------------------

    def zeros(self, *shape: int) -> np.ndarray:
        return np.zeros(shape, dtype=np.uint8)

    def mat(self, rows) -> np.ndarray:
        """Lift a nested list of integers to a code matrix."""
        arr = np.asarray(rows, dtype=np.int64)
        return (arr % self.p).astype(np.uint8)

    def madd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.ADD[a, b]

    def msub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.ADD[a, self.NEG[b]]

    def mneg(self, a: np.ndarray) -> np.ndarray:
        return self.NEG[a]

    def smul(self, c: int, a: np.ndarray) -> np.ndarray:
        return self.MUL[c, a]

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Exact matrix product of code matrices (2-d each)."""
        n, m = a.shape
        m2, r = b.shape
        if m != m2:
            raise FieldError(f"shape mismatch {a.shape} @ {b.shape}")
        out = self.zeros(n, r)
        for t in range(m):
            out = self.ADD[out, self.MUL[a[:, t][:, None], b[t, :][None, :]]]
        return out

    def vecmat(self, v: np.ndarray, m: np.ndarray) -> np.ndarray:
        return self.matmul(v.reshape(1, -1), m)[0]

    def rref(self, mat: np.ndarray) -> tuple[np.ndarray, list[int], list[int]]:
        """Reduced row echelon form.

        Returns ``(R, pivot_cols, pivot_rows)`` where ``pivot_rows[t]`` is the
        original row index that supplied the pivot for ``pivot_cols[t]``
        (greedy, first nonzero row in original order).
        """
        m = mat.astype(np.uint8).copy()
        nrows, ncols = m.shape
        order = list(range(nrows))  # original index of each current row
        pivot_cols: list[int] = []
        pivot_rows: list[int] = []
        r = 0
        for c in range(ncols):
            if r >= nrows:
                break
            nz = np.nonzero(m[r:, c])[0]
            if nz.size == 0:
                continue
            s = r + int(nz[0])
            if s != r:
                m[[r, s]] = m[[s, r]]
                order[r], order[s] = order[s], order[r]
            m[r] = self.MUL[self.INV[m[r, c]], m[r]]
            col = m[:, c].copy()
            col[r] = 0
            rows = np.nonzero(col)[0]
            if rows.size:
                m[rows] = self.ADD[m[rows], self.MUL[self.NEG[col[rows]][:, None], m[r][None, :]]]
            pivot_cols.append(c)
            pivot_rows.append(order[r])
            r += 1
        return m, pivot_cols, pivot_rows

    def rank(self, mat: np.ndarray) -> int:
        if mat.size == 0:
            return 0
        return len(self.rref(mat)[1])

    def nullspace(self, mat: np.ndarray) -> np.ndarray:
        """Rows spanning the right kernel {x : mat @ x = 0}."""
        nrows, ncols = mat.shape
        if ncols == 0:
            return self.zeros(0, 0)
        r, piv, _ = self.rref(mat)
        free = [c for c in range(ncols) if c not in piv]
        basis = self.zeros(len(free), ncols)
        for t, fc in enumerate(free):
            basis[t, fc] = 1
            for prow, pc in enumerate(piv):
                basis[t, pc] = self.NEG[r[prow, fc]]
        return basis

    def left_nullspace(self, mat: np.ndarray) -> np.ndarray:
        """Rows y with y @ mat = 0."""
        return self.nullspace(mat.T)

    def solve_rows(self, basis: np.ndarray, rows: np.ndarray) -> np.ndarray:
        """Solve X @ basis = rows for X, given full-row-rank ``basis``.

        Raises FieldError if some row is not in the row span.
        """
        nb, ncols = basis.shape
        aug = np.concatenate([basis.T, rows.T], axis=1)
        r, piv, _ = self.rref(aug)
        nr = rows.shape[0]
        # consistency: no pivot may land in the augmented columns
        if any(c >= nb for c in piv):
            raise FieldError("solve_rows: inconsistent system")
        x = self.zeros(nr, nb)
        for prow, pc in enumerate(piv):
            x[:, pc] = r[prow, nb:]
        return x


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> Field:
    """Construct (and cache) GF(p^k)."""
    return Field(p, k)
