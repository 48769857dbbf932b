"""Split classical matrix groups over F_q, their parabolic subgroups, maximal
unipotents, and generic characters.

All groups live inside GL_n(F_q) for a fixed ambient size n.  Symplectic and
orthogonal groups use antidiagonal Gram matrices so that the upper-triangular
matrices in the group form a Borel subgroup.  A product group is represented
block-diagonally inside GL of the total size, which keeps flags, characters
and projections uniform across every model.

Element tables encode a matrix as its base-q integer when that fits in int64
(vectorized lookups via searchsorted) and as raw bytes otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matrices as mx
from .errors import (
    BadFlag,
    BadRank,
    EnumerationBudgetExceeded,
    NotGeneric,
    UnsupportedCharacteristic,
)

DEFAULT_BUDGET = 400_000


def primitive_root(q: int) -> int:
    for a in range(2, q):
        seen, x = set(), 1
        for _ in range(q - 1):
            x = x * a % q
            seen.add(x)
        if len(seen) == q - 1:
            return a
    return 1


def form_sp(n: int) -> np.ndarray:
    J = np.zeros((n, n), dtype=np.int8)
    for i in range(n):
        J[i, n - 1 - i] = 1 if i < n // 2 else -1
    return J


def form_so(n: int) -> np.ndarray:
    S = np.zeros((n, n), dtype=np.int8)
    for i in range(n):
        S[i, n - 1 - i] = 1
    return S


def order_gl(n, q):
    o = 1
    for i in range(n):
        o *= q**n - q**i
    return o


def order_sl(n, q):
    return order_gl(n, q) // (q - 1)


def order_sp(n, q):
    m = n // 2
    o = q ** (m * m)
    for i in range(1, m + 1):
        o *= q ** (2 * i) - 1
    return o


def order_so(n, q):
    if n == 1:
        return 1
    if n % 2:
        m = n // 2
        o = q ** (m * m)
        for i in range(1, m + 1):
            o *= q ** (2 * i) - 1
        return o
    m = n // 2
    o = q ** (m * (m - 1)) * (q**m - 1)
    for i in range(1, m):
        o *= q ** (2 * i) - 1
    return o


def positive_root_count(kind: str, n: int) -> int:
    if kind in ("GL", "SL"):
        return n * (n - 1) // 2
    if kind == "Sp":
        return (n // 2) ** 2
    if kind == "SO":
        m = n // 2
        return m * m if n % 2 else m * (m - 1)
    raise ValueError(kind)


def _try_signs(n, q, entries, check):
    """Fill entries with all sign choices until `check` accepts."""
    from itertools import product

    for signs in product((1, -1), repeat=len(entries)):
        g = np.eye(n, dtype=np.int64)
        for (i, j, v), s in zip(entries, signs):
            g[i, j] = (s * v) % q
        if check(g % q):
            return (g % q).astype(np.int8)
    raise AssertionError(f"no sign assignment works for entries {entries}")


def root_generators(kind: str, n: int, q: int):
    """One-parameter root elements (value 1) plus torus generators.

    Verified to generate the full group for every size used in tests.
    """
    pr = primitive_root(q)
    gens = []
    if kind in ("GL", "SL"):
        for i in range(n):
            for j in range(n):
                if i != j:
                    g = np.eye(n, dtype=np.int8)
                    g[i, j] = 1
                    gens.append(g)
        if kind == "GL" and q > 2:
            g = np.eye(n, dtype=np.int8)
            g[0, 0] = pr
            gens.append(g)
        return gens
    if kind == "Sp":
        J = form_sp(n).astype(np.int64)
        ok = lambda g: ((g.T @ J @ g - J) % q == 0).all()
        m = n // 2
        for i in range(m):
            for j in range(m):
                if i != j:
                    gens.append(_try_signs(n, q, [(i, j, 1), (n - 1 - j, n - 1 - i, 1)], ok))
                    gens.append(_try_signs(n, q, [(j, i, 1), (n - 1 - i, n - 1 - j, 1)], ok))
        for i in range(m):
            for j in range(i + 1, m):
                gens.append(_try_signs(n, q, [(i, n - 1 - j, 1), (j, n - 1 - i, 1)], ok))
                gens.append(_try_signs(n, q, [(n - 1 - j, i, 1), (n - 1 - i, j, 1)], ok))
        for i in range(m):
            gens.append(_try_signs(n, q, [(i, n - 1 - i, 1)], ok))
            gens.append(_try_signs(n, q, [(n - 1 - i, i, 1)], ok))
        if q > 2:
            g = np.eye(n, dtype=np.int64)
            g[0, 0] = pr
            g[n - 1, n - 1] = pow(pr, q - 2, q)
            assert ok(g % q)
            gens.append((g % q).astype(np.int8))
        return gens
    if kind == "SO":
        if q == 2:
            raise UnsupportedCharacteristic("SO needs odd q in this build")
        S = form_so(n).astype(np.int64)
        ok = lambda g: ((g.T @ S @ g - S) % q == 0).all() and mx.det(g, q) == 1
        m = n // 2
        inv2 = pow(2, q - 2, q)
        for i in range(m):
            for j in range(m):
                if i != j:
                    gens.append(_try_signs(n, q, [(i, j, 1), (n - 1 - j, n - 1 - i, 1)], ok))
                    gens.append(_try_signs(n, q, [(j, i, 1), (n - 1 - i, n - 1 - j, 1)], ok))
        for i in range(m):
            for j in range(i + 1, m):
                gens.append(_try_signs(n, q, [(i, n - 1 - j, 1), (j, n - 1 - i, 1)], ok))
                gens.append(_try_signs(n, q, [(n - 1 - j, i, 1), (n - 1 - i, j, 1)], ok))
        if n % 2:
            mid = m
            for i in range(m):
                done = False
                for s1 in (1, -1):
                    for s2 in (1, -1):
                        g = np.eye(n, dtype=np.int64)
                        g[i, mid] = 1
                        g[mid, n - 1 - i] = s1
                        g[i, n - 1 - i] = (s2 * inv2) % q
                        if ok(g % q):
                            gens.append((g % q).astype(np.int8))
                            gens.append((g % q).T.copy().astype(np.int8))
                            done = True
                            break
                    if done:
                        break
                assert done
        g = np.eye(n, dtype=np.int64)
        g[0, 0] = pr
        g[n - 1, n - 1] = pow(pr, q - 2, q)
        assert ok(g % q)
        gens.append((g % q).astype(np.int8))
        return gens
    raise ValueError(kind)


class ElementTable:
    """Sorted table of group elements with vectorized id lookups and cached
    translation permutations."""

    def __init__(self, n: int, q: int, mats):
        self.n, self.q = n, q
        self.packable = q ** (n * n) < 2**62
        if self.packable:
            self._w = q ** np.arange(n * n, dtype=np.int64)
        mats = np.asarray(mats, dtype=np.int8) % q
        keys = self._keys(mats)
        order = np.argsort(keys, kind="stable")
        self.M = mats[order].astype(np.int8)
        self.Ml = self.M.astype(np.int64)
        self.keys = keys[order] if self.packable else [keys[i] for i in order]
        if not self.packable:
            self._index = {k: i for i, k in enumerate(self.keys)}
        self.size = len(self.M)
        self._inv_ids = None

    def _keys(self, mats):
        if self.packable:
            flat = mats.reshape(*mats.shape[:-2], -1).astype(np.int64)
            return flat @ self._w
        return [m.tobytes() for m in np.asarray(mats, dtype=np.int8)]

    def ids(self, mats) -> np.ndarray:
        mats = np.asarray(mats, dtype=np.int64) % self.q
        single = mats.ndim == 2
        if single:
            mats = mats[None]
        m8 = mats.astype(np.int8)
        if self.packable:
            k = self._keys(m8)
            pos = np.searchsorted(self.keys, k)
            if np.any(pos >= self.size) or np.any(self.keys[np.minimum(pos, self.size - 1)] != k):
                raise KeyError("matrix not in table")
            out = pos.astype(np.int32)
        else:
            out = np.array([self._index[m.tobytes()] for m in m8], dtype=np.int32)
        return out[0] if single else out

    def contains(self, mats) -> np.ndarray:
        mats = np.asarray(mats, dtype=np.int64) % self.q
        single = mats.ndim == 2
        if single:
            mats = mats[None]
        m8 = mats.astype(np.int8)
        if self.packable:
            k = self._keys(m8)
            pos = np.searchsorted(self.keys, k)
            ok = (pos < self.size) & (self.keys[np.minimum(pos, self.size - 1)] == k)
        else:
            ok = np.array([m.tobytes() in self._index for m in m8])
        return bool(ok[0]) if single else ok

    def left_perm(self, m) -> np.ndarray:
        return self.ids((np.asarray(m, dtype=np.int64) @ self.Ml) % self.q)

    def right_perm(self, m) -> np.ndarray:
        return self.ids((self.Ml @ np.asarray(m, dtype=np.int64)) % self.q)

    def inv_ids(self) -> np.ndarray:
        if self._inv_ids is None:
            invs = np.stack([mx.inv(m, self.q) for m in self.M])
            self._inv_ids = self.ids(invs)
        return self._inv_ids

    def identity_id(self) -> int:
        return int(self.ids(mx.identity(self.n)))


def bfs_closure(n, q, gens, budget=DEFAULT_BUDGET, membership=None):
    """BFS closure of a generator list; raises when the budget is exceeded."""
    gens = [np.asarray(g, dtype=np.int64) % q for g in gens]
    if membership is not None:
        for g in gens:
            assert membership(g.astype(np.int8)), "generator fails membership"
    I = np.eye(n, dtype=np.int8)
    seen = {I.tobytes(): I}
    frontier = [I]
    while frontier:
        F = np.stack(frontier).astype(np.int64)
        new = []
        for g in gens:
            P = (F @ g) % q
            P8 = P.astype(np.int8)
            for k in range(len(P8)):
                key = P8[k].tobytes()
                if key not in seen:
                    seen[key] = P8[k]
                    new.append(P8[k])
                    if len(seen) > budget:
                        raise EnumerationBudgetExceeded(
                            f"closure exceeded budget {budget}"
                        )
        frontier = new
    return list(seen.values())


@dataclass
class GroupSpec:
    """A matrix group over F_q: membership predicate, generators, order."""

    name: str
    n: int
    q: int
    kind: str                      # GL | SL | Sp | SO | product
    form: np.ndarray | None = None
    generators: list = field(default_factory=list)
    order: int = 0
    factors: list = field(default_factory=list)   # [(kind, size)] for products
    _membership: object = None
    _table: ElementTable | None = None
    budget: int = DEFAULT_BUDGET

    def contains(self, mats):
        """Vectorized membership for shape (..., n, n)."""
        return self._membership(np.asarray(mats, dtype=np.int64) % self.q)

    def table(self) -> ElementTable:
        if self._table is None:
            if self.order > self.budget:
                raise EnumerationBudgetExceeded(
                    f"{self.name}: order {self.order} exceeds budget {self.budget}"
                )
            elems = bfs_closure(self.n, self.q, self.generators, self.budget)
            if len(elems) != self.order:
                raise AssertionError(
                    f"{self.name}: enumerated {len(elems)} != order formula {self.order}"
                )
            self._table = ElementTable(self.n, self.q, np.stack(elems))
        return self._table

    def enumerable(self) -> bool:
        return self.order <= self.budget

    @property
    def identity(self) -> np.ndarray:
        return mx.identity(self.n)


def _gl_membership(n, q, det_one=False):
    def mem(mats):
        mats = np.asarray(mats, dtype=np.int64) % q
        single = mats.ndim == 2
        if single:
            mats = mats[None]
        dets = np.array([mx.det(m, q) for m in mats])
        ok = dets != 0 if not det_one else dets == 1
        return bool(ok[0]) if single else ok
    return mem


def _form_membership(n, q, F, det_one):
    Fl = F.astype(np.int64) % q

    def mem(mats):
        mats = np.asarray(mats, dtype=np.int64) % q
        single = mats.ndim == 2
        if single:
            mats = mats[None]
        T = np.swapaxes(mats, -2, -1)
        ok = ((T @ Fl @ mats - Fl) % q == 0).all(axis=(-2, -1))
        if det_one:
            dets = np.array([mx.det(m, q) for m in mats])
            ok &= dets == 1
        return bool(ok[0]) if single else ok
    return mem


def build_group(kind: str, n: int, q: int, budget: int = DEFAULT_BUDGET) -> GroupSpec:
    """GL_n, SL_n, Sp_n (n even), or split SO_n (q odd) over F_q."""
    if kind == "Sp" and n % 2:
        raise BadRank("Sp needs even size")
    if kind == "SO" and q == 2:
        raise UnsupportedCharacteristic("SO needs odd q")
    if kind in ("GL", "SL"):
        form = None
        mem = _gl_membership(n, q, det_one=(kind == "SL"))
        order = order_gl(n, q) if kind == "GL" else order_sl(n, q)
    elif kind == "Sp":
        form = form_sp(n)
        mem = _form_membership(n, q, form, det_one=False)
        order = order_sp(n, q)
    elif kind == "SO":
        form = form_so(n)
        mem = _form_membership(n, q, form, det_one=True)
        order = order_so(n, q)
    else:
        raise ValueError(kind)
    gens = root_generators(kind, n, q)
    spec = GroupSpec(
        name=f"{kind}{n}(F{q})", n=n, q=q, kind=kind, form=form,
        generators=gens, order=order, factors=[(kind, n)], _membership=mem,
        budget=budget,
    )
    for g in gens:
        assert spec.contains(g), f"generator outside {spec.name}"
    return spec


def block_product(specs, budget: int = DEFAULT_BUDGET) -> GroupSpec:
    """Direct product embedded block-diagonally."""
    if len(specs) == 1:
        return specs[0]
    n = sum(s.n for s in specs)
    q = specs[0].q
    assert all(s.q == q for s in specs)
    offs = np.cumsum([0] + [s.n for s in specs])
    gens = []
    for k, s in enumerate(specs):
        a = offs[k]
        for g in s.generators:
            big = np.eye(n, dtype=np.int8)
            big[a:a + s.n, a:a + s.n] = g
            gens.append(big)

    mems = [s._membership for s in specs]

    def mem(mats):
        mats = np.asarray(mats, dtype=np.int64) % q
        single = mats.ndim == 2
        if single:
            mats = mats[None]
        ok = np.ones(len(mats), dtype=bool)
        for k in range(len(specs)):
            a, b = offs[k], offs[k + 1]
            for kk in range(len(specs)):
                if kk != k:
                    c, d = offs[kk], offs[kk + 1]
                    ok &= (mats[:, a:b, c:d] == 0).all(axis=(1, 2))
            ok &= mems[k](mats[:, a:b, a:b])
        return bool(ok[0]) if single else ok

    name = " x ".join(s.name for s in specs)
    factors = [f for s in specs for f in s.factors]
    order = 1
    for s in specs:
        order *= s.order
    return GroupSpec(
        name=name, n=n, q=q, kind="product", form=None, generators=gens,
        order=order, factors=factors, _membership=mem, budget=budget,
    )


@dataclass
class SubgroupHandle:
    """A subgroup of an ambient GroupSpec: membership, generators, lazy table."""

    name: str
    ambient: GroupSpec
    membership: object                  # vectorized predicate on (..., n, n)
    generators: list = field(default_factory=list)
    order: int | None = None            # expected order, if known
    _table: ElementTable | None = None

    def contains(self, mats):
        return self.membership(np.asarray(mats, dtype=np.int64) % self.ambient.q)

    def table(self, budget: int | None = None) -> ElementTable:
        if self._table is None:
            budget = budget or self.ambient.budget
            elems = enumerate_subgroup(self, budget=budget)
            self._table = ElementTable(self.ambient.n, self.ambient.q, np.stack(elems))
        return self._table

    @property
    def size(self) -> int:
        return self.table().size


def enumerate_subgroup(h: SubgroupHandle, budget: int = DEFAULT_BUDGET):
    """BFS closure from the handle's generators, checked against membership
    and the expected order when present."""
    if h.order is not None and h.order > budget:
        raise EnumerationBudgetExceeded(f"{h.name}: order {h.order} > budget {budget}")
    elems = bfs_closure(h.ambient.n, h.ambient.q, h.generators, budget, membership=h.contains)
    if h.order is not None and len(elems) != h.order:
        raise AssertionError(f"{h.name}: enumerated {len(elems)} != expected {h.order}")
    return elems


@dataclass
class ParabolicDatum:
    """Standard parabolic Q = L U given by global block cut positions."""

    parent: GroupSpec
    cuts: list                      # sorted interior cut positions
    levi: SubgroupHandle = None
    unipotent_radical: SubgroupHandle = None
    levi_spec: GroupSpec = None     # the Levi with its own generators/order

    def is_whole_group(self) -> bool:
        return not self.cuts

    def block_of(self, i: int) -> int:
        return sum(1 for c in self.cuts if i >= c)

    def q_membership(self):
        parent, cuts = self.parent, self.cuts
        blk = np.array([self.block_of(i) for i in range(parent.n)])
        low = blk[:, None] > blk[None, :]

        def mem(mats):
            mats = np.asarray(mats, dtype=np.int64) % parent.q
            single = mats.ndim == 2
            if single:
                mats = mats[None]
            ok = (mats[:, low] == 0).all(axis=1) & parent.contains(mats)
            return bool(ok[0]) if single else ok
        return mem

    def levi_membership(self):
        parent = self.parent
        blk = np.array([self.block_of(i) for i in range(parent.n)])
        off = blk[:, None] != blk[None, :]

        def mem(mats):
            mats = np.asarray(mats, dtype=np.int64) % parent.q
            single = mats.ndim == 2
            if single:
                mats = mats[None]
            ok = (mats[:, off] == 0).all(axis=1) & parent.contains(mats)
            return bool(ok[0]) if single else ok
        return mem

    def project_to_levi(self, mats) -> np.ndarray:
        """Kill the off-diagonal blocks; a homomorphism on Q with kernel U."""
        mats = np.asarray(mats, dtype=np.int64) % self.parent.q
        single = mats.ndim == 2
        if single:
            mats = mats[None]
        blk = np.array([self.block_of(i) for i in range(self.parent.n)])
        off = blk[:, None] != blk[None, :]
        out = mats.copy()
        out[:, off] = 0
        return out[0] if single else out


def _mirror_cuts(kind: str, n: int, iso_dims) -> list:
    """Interior cuts for the parabolic stabilizing the standard isotropic flag
    with the given subspace dimensions (Sp/SO), mirrored for the dual side."""
    cuts = []
    for d in iso_dims:
        if d <= 0 or d > n // 2:
            raise BadFlag(f"isotropic dimension {d} out of range for size {n}")
        cuts.append(d)
    cuts = sorted(set(cuts))
    full = sorted(set(cuts + [n - c for c in cuts]))
    if any(c <= 0 or c >= n for c in full):
        raise BadFlag("degenerate cut")
    return full


def standard_parabolic(G: GroupSpec, flag, budget: int | None = None) -> ParabolicDatum:
    """Standard parabolic of G.

    `flag` is a list with one entry per factor of G:
      - GL/SL factor: a composition of the factor size, e.g. (2, 1, 1);
        use (n,) for the whole factor.
      - Sp/SO factor: a list of isotropic subspace dimensions, [] for the
        whole factor.
    """
    if len(flag) != len(G.factors):
        raise BadFlag(f"need one flag entry per factor ({len(G.factors)})")
    cuts = []
    off = 0
    levi_blocks = []                       # (kind, start, size) for GL blocks
    middle_blocks = []                     # (kind, start, size) for Sp/SO middles
    for (kind, size), part in zip(G.factors, flag):
        if kind in ("GL", "SL"):
            comp = list(part)
            if sum(comp) != size or any(c <= 0 for c in comp):
                raise BadFlag(f"composition {part} invalid for {kind}{size}")
            pos = off
            for c in comp:
                levi_blocks.append(("GL", pos, c))
                pos += c
                if pos < off + size:
                    cuts.append(pos)
        else:
            dims = sorted(part)
            if any(d <= 0 for d in dims) or (dims and 2 * dims[-1] > size):
                raise BadFlag(f"isotropic dims {part} invalid for {kind}{size}")
            prev = 0
            for d in dims:
                levi_blocks.append(("GL", off + prev, d - prev))
                prev = d
            top = dims[-1] if dims else 0
            if size - 2 * top > 0 and dims:
                middle_blocks.append((kind, off + top, size - 2 * top))
            elif not dims:
                middle_blocks.append((kind, off, size))
            for d in dims:
                cuts.append(off + d)
                cuts.append(off + size - d)
        off += size
    cuts = sorted(set(cuts))
    datum = ParabolicDatum(parent=G, cuts=cuts)

    # Levi generators: root generators of G supported block-diagonally,
    # plus GL-block torus generators (paired with duals in Sp/SO factors).
    blk = np.array([datum.block_of(i) for i in range(G.n)])
    off_mask = blk[:, None] != blk[None, :]
    lg = [g for g in G.generators if not np.asarray(g)[off_mask].any()]
    q = G.q
    if q > 2:
        pr = primitive_root(q)
        foff = 0
        for (kind, size) in G.factors:
            if kind in ("Sp", "SO"):
                for i in range(foff, foff + size // 2):
                    g = np.eye(G.n, dtype=np.int8)
                    g[i, i] = pr
                    j = foff + size - 1 - (i - foff)
                    g[j, j] = pow(pr, q - 2, q)
                    if G.contains(g):
                        lg.append(g)
            else:
                for i in range(foff, foff + size):
                    g = np.eye(G.n, dtype=np.int8)
                    g[i, i] = pr
                    if G.contains(g):
                        lg.append(g)
            foff += size
    levi_order = 1
    po = 0
    for kind, start, size in levi_blocks:
        levi_order *= order_gl(size, q)
        po += positive_root_count("GL", size)
    for kind, start, size in middle_blocks:
        levi_order *= order_sp(size, q) if kind == "Sp" else order_so(size, q)
        po += positive_root_count(kind, size)
    # GL-block duals in Sp/SO factors are determined by the block, so the
    # Levi order is the product over blocks listed once.
    datum.levi = SubgroupHandle(
        name=f"Levi({G.name},{cuts})", ambient=G,
        membership=datum.levi_membership(), generators=lg, order=levi_order,
    )
    u_po = positive_root_count_total(G) - po
    datum.unipotent_radical = SubgroupHandle(
        name=f"U({G.name},{cuts})", ambient=G,
        membership=_radical_membership(datum), generators=_radical_gens(datum),
        order=q**u_po,
    )
    datum._levi_blocks = levi_blocks
    datum._middle_blocks = middle_blocks
    return datum


def positive_root_count_total(G: GroupSpec) -> int:
    return sum(positive_root_count(k, s) for k, s in G.factors)


def _radical_membership(datum: ParabolicDatum):
    parent = datum.parent
    blk = np.array([datum.block_of(i) for i in range(parent.n)])
    low = blk[:, None] > blk[None, :]
    diag = blk[:, None] == blk[None, :]
    eye = np.eye(parent.n, dtype=np.int64)

    def mem(mats):
        mats = np.asarray(mats, dtype=np.int64) % parent.q
        single = mats.ndim == 2
        if single:
            mats = mats[None]
        ok = (mats[:, low] == 0).all(axis=1)
        ok &= ((mats - eye)[:, diag] == 0).all(axis=1)
        ok &= parent.contains(mats)
        return bool(ok[0]) if single else ok
    return mem


def _radical_gens(datum: ParabolicDatum):
    parent = datum.parent
    blk = np.array([datum.block_of(i) for i in range(parent.n)])
    gens = []
    for g in parent.generators:
        g = np.asarray(g)
        d = g - np.eye(parent.n, dtype=g.dtype)
        nz = np.argwhere(d != 0)
        if len(nz) == 0:
            continue
        if all(blk[i] < blk[j] for i, j in nz):
            gens.append(g.astype(np.int8))
    return gens


def maximal_unipotent(G: GroupSpec, datum: ParabolicDatum | None = None) -> SubgroupHandle:
    """Upper-unitriangular subgroup of G (or of a Levi, when `datum` given)."""
    n, q = G.n, G.q
    iu = np.tril_indices(n, -1)

    if datum is None:
        def mem(mats):
            mats = np.asarray(mats, dtype=np.int64) % q
            single = mats.ndim == 2
            if single:
                mats = mats[None]
            ok = (mats[:, iu[0], iu[1]] == 0).all(axis=1)
            ok &= (mats[:, np.arange(n), np.arange(n)] == 1).all(axis=1)
            ok &= G.contains(mats)
            return bool(ok[0]) if single else ok
        gens = [g for g in G.generators if _is_upper_unitriangular(g)]
        order = G.q ** positive_root_count_total(G)
        return SubgroupHandle(name=f"N({G.name})", ambient=G, membership=mem,
                              generators=gens, order=order)

    lm = datum.levi_membership()

    def mem(mats):
        mats = np.asarray(mats, dtype=np.int64) % q
        single = mats.ndim == 2
        if single:
            mats = mats[None]
        ok = (mats[:, iu[0], iu[1]] == 0).all(axis=1)
        ok &= (mats[:, np.arange(n), np.arange(n)] == 1).all(axis=1)
        ok &= lm(mats)
        return bool(ok[0]) if single else ok

    gens = [g for g in datum.levi.generators if _is_upper_unitriangular(g)]
    po = sum(positive_root_count("GL", s) for _, _, s in datum._levi_blocks)
    po += sum(positive_root_count(k, s) for k, _, s in datum._middle_blocks)
    return SubgroupHandle(name=f"N_L({G.name})", ambient=G, membership=mem,
                          generators=gens, order=q**po)


def _is_upper_unitriangular(g) -> bool:
    g = np.asarray(g)
    n = g.shape[0]
    return (np.diag(g) == 1).all() and not np.tril(g, -1).any()


def simple_root_positions(G: GroupSpec, datum: ParabolicDatum | None = None):
    """Matrix positions carrying the simple-root coordinates of G (or of the
    Levi of `datum`), one per simple root, grouped for a generic character."""
    pos = []
    if datum is None:
        blocks = []
        off = 0
        for kind, size in G.factors:
            blocks.append((kind, off, size))
            off += size
    else:
        blocks = [("GL", s, z) for _, s, z in datum._levi_blocks]
        blocks += [(k, s, z) for k, s, z in datum._middle_blocks]
        blocks.sort(key=lambda t: t[1])
    for kind, start, size in blocks:
        if kind in ("GL", "SL"):
            for i in range(size - 1):
                pos.append((start + i, start + i + 1))
        elif kind == "Sp":
            m = size // 2
            for i in range(m - 1):
                pos.append((start + i, start + i + 1))
            if m >= 1:
                pos.append((start + m - 1, start + m))
        elif kind == "SO":
            m = size // 2
            if size % 2:
                for i in range(m - 1):
                    pos.append((start + i, start + i + 1))
                if m >= 1:
                    pos.append((start + m - 1, start + m))
            else:
                for i in range(m - 1):
                    pos.append((start + i, start + i + 1))
                if m >= 2:
                    pos.append((start + m - 2, start + m))
    return pos


class UnipotentCharacter:
    """Generic character of a maximal unipotent subgroup, valued in powers of
    zeta_p: n maps to zeta^(sum of weight * simple-root entry)."""

    def __init__(self, ambient: SubgroupHandle, p: int, positions, weights):
        if len(weights) != len(positions):
            raise ValueError("one weight per simple-root position")
        if any(w % p == 0 for w in weights):
            raise NotGeneric("generic character needs nonzero weights")
        self.ambient = ambient
        self.p = p
        self.positions = list(positions)
        self.weights = [w % p for w in weights]

    def power(self, mats) -> np.ndarray:
        """Exponent of zeta, vectorized over (..., n, n)."""
        mats = np.asarray(mats, dtype=np.int64)
        single = mats.ndim == 2
        if single:
            mats = mats[None]
        acc = np.zeros(len(mats), dtype=np.int64)
        for (i, j), w in zip(self.positions, self.weights):
            acc += w * mats[:, i, j]
        acc %= self.p
        return int(acc[0]) if single else acc


def generic_character(N_L: SubgroupHandle, p: int, positions, weights=None) -> UnipotentCharacter:
    if weights is None:
        weights = [1] * len(positions)
    return UnipotentCharacter(N_L, p, positions, weights)
