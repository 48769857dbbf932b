"""Catalog of the supported spherical pairs (G, H) with Levi data (L, H_L).

Each catalog row builds, over a chosen prime field, the ambient group G
(a single classical group or a block-diagonal product), the standard
parabolic Q = LU singled out by the row, the subgroup H assembled from
"pieces" (blocks, coupled diagonal copies, duals of isotropic pairs), the
Levi subgroup H_L = H intersect L, the maximal unipotents N and N_L, and a
generic character of N_L extended trivially across U.

Pieces act on coordinate index sets, so membership predicates reduce to
zero patterns plus submatrix conditions and stay fully vectorized.  Every
embedding is validated at construction: generator membership, restricted
Gram matrices, order formulas, and the parabolic factorization of H cap Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matrices as mx
from .errors import BadModelParams, EnumerationBudgetExceeded
from .groups import (
    DEFAULT_BUDGET,
    ElementTable,
    GroupSpec,
    ParabolicDatum,
    SubgroupHandle,
    UnipotentCharacter,
    block_product,
    build_group,
    form_so,
    form_sp,
    maximal_unipotent,
    order_gl,
    order_so,
    order_sp,
    primitive_root,
    root_generators,
    simple_root_positions,
    standard_parabolic,
)

SUPPORTED_MODELS = list(range(1, 10)) + list(range(15, 28))

# Models where the cuspidal hypothesis can be dropped (all non-main orbits
# fail temperedness): 3, 4 with k=0, 5..9 of the classical rows, 17, 18, 20,
# 23..27.  Checked per instance in `cuspidal_condition_removable`.
_CUSP_FREE = {3, 5, 6, 7, 8, 9, 17, 18, 20, 23, 24, 25, 26, 27}


# --------------------------------------------------------------------------
# subgroup pieces


@dataclass
class Piece:
    kind: str                 # GL | SL | Sp | SO | fixed | torus_pair | fix_vector
    copies: list              # list of index lists (same length); one per copy
    det_one: bool = False
    vector: np.ndarray | None = None   # for fix_vector

    def dim(self):
        return len(self.copies[0])


def _restricted_gram(form, idx, q):
    if form is None:
        return None
    F = np.asarray(form, dtype=np.int64) % q
    return F[np.ix_(idx, idx)] % q


def _piece_order(piece: Piece, q: int) -> int:
    z = piece.dim()
    if piece.kind == "GL":
        return order_gl(z, q)
    if piece.kind in ("SL", "Sp"):
        return order_sp(z, q) if piece.kind == "Sp" else order_gl(z, q) // (q - 1)
    if piece.kind == "SO":
        return order_so(z, q)
    if piece.kind == "torus_pair":
        return q - 1
    return 1   # fixed / fix_vector


def _small_generators(piece: Piece, q: int):
    if piece.kind in ("fixed", "fix_vector"):
        return []
    if piece.kind == "torus_pair":
        pr = primitive_root(q)
        g = np.eye(2, dtype=np.int8)
        g[0, 0] = pr
        g[1, 1] = pow(pr, q - 2, q)
        return [g] if q > 2 else []
    kind = "Sp" if piece.kind == "SL" else piece.kind
    if kind == "GL":
        return root_generators("GL", piece.dim(), q)
    return root_generators(kind, piece.dim(), q)


def _standard_small_form(piece: Piece, q: int):
    if piece.kind in ("Sp", "SL"):
        return form_sp(piece.dim()) if piece.kind == "Sp" or piece.dim() == 2 else None
    if piece.kind == "SO":
        return form_so(piece.dim())
    return None


class SubgroupAssembly:
    """H (or similar) assembled from pieces inside an ambient product group.

    Index sets of all pieces and their copies must partition {0..n-1}.
    GL pieces in a formed ambient come as (rows, dual_rows) pairs handled by
    the caller through two entries in `gl_dual`:  the action on the dual rows
    is determined by the form, so membership only needs preservation.
    """

    def __init__(self, name, G: GroupSpec, pieces, gl_dual=None, expected_order=None):
        self.name = name
        self.G = G
        self.pieces = pieces
        self.gl_dual = gl_dual or []       # [(rows, dual_rows)] pairs
        self.expected_order = expected_order
        n, q = G.n, G.q
        covered = []
        for p in self.pieces:
            for c in p.copies:
                covered += list(c)
        for rows, duals in self.gl_dual:
            covered += list(rows) + list(duals)
        assert sorted(covered) == list(range(n)), f"{name}: pieces must partition indices"
        self._build_masks()
        self.generators = self._build_generators()

    def _build_masks(self):
        n, q = self.G.n, self.G.q
        allowed = np.zeros((n, n), dtype=bool)
        groups = []
        for p in self.pieces:
            for c in p.copies:
                groups.append(list(c))
        for rows, duals in self.gl_dual:
            groups.append(list(rows))
            groups.append(list(duals))
        for gset in groups:
            allowed[np.ix_(gset, gset)] = True
        self._forbidden = ~allowed
        # per-piece validated structure
        self._equalities = []          # (idxA, idxB) submatrix equality
        self._identities = []          # idx: submatrix == I
        self._diagonal = []            # idx: submatrix diagonal (torus pairs)
        self._dets = []                # idx: det(submatrix) == 1
        self._forms = []               # (idx, gram): submatrix preserves gram
        self._fix_vectors = []         # v: g v == v
        ambient_form = _ambient_form(self.G)
        for p in self.pieces:
            if p.kind == "fix_vector":
                self._fix_vectors.append(np.asarray(p.vector, dtype=np.int64) % q)
                continue
            if p.kind == "fixed":
                for c in p.copies:
                    self._identities.append(np.array(c))
                continue
            if p.kind == "torus_pair":
                self._diagonal.append(np.array(p.copies[0]))
                continue
            base = p.copies[0]
            if p.kind in ("SO", "SL") or p.det_one:
                for c in p.copies:
                    self._dets.append(np.array(c))
            if p.kind in ("Sp", "SO", "SL"):
                small = _standard_small_form(p, q)
                for c in p.copies:
                    R = _restricted_gram(ambient_form, c, q)
                    if R is None or not R.any():
                        # formless context (GL factor): enforce the form here
                        self._forms.append((np.array(c), np.asarray(small, dtype=np.int64) % q))
            for c in p.copies[1:]:
                self._equalities.append((np.array(base), np.array(c)))

    def membership(self):
        G = self.G
        q = G.q
        forb = self._forbidden
        eqs = self._equalities
        idents = self._identities
        diags = self._diagonal
        dets = self._dets
        forms = self._forms
        fixv = self._fix_vectors

        def sub(mats, c):
            return mats[:, c[:, None], c[None, :]]

        def mem(mats):
            mats = np.asarray(mats, dtype=np.int64) % q
            single = mats.ndim == 2
            if single:
                mats = mats[None]
            ok = (mats[:, forb] == 0).all(axis=1)
            ok &= G.contains(mats)
            for a, b in eqs:
                ok &= (sub(mats, a) == sub(mats, b)).all(axis=(1, 2))
            for c in idents:
                ok &= (sub(mats, c) == np.eye(len(c), dtype=np.int64)).all(axis=(1, 2))
            for c in diags:
                offmask = ~np.eye(len(c), dtype=bool)
                ok &= (sub(mats, c)[:, offmask] == 0).all(axis=1)
            for c, F in forms:
                s = sub(mats, c)
                ok &= ((np.swapaxes(s, 1, 2) @ F @ s - F) % q == 0).all(axis=(1, 2))
            for v in fixv:
                ok &= ((mats @ v) % q == v).all(axis=1)
            if dets:
                sel = np.nonzero(ok)[0]
                for c in dets:
                    for i in sel:
                        if ok[i] and mx.det(mats[i][np.ix_(c, c)], q) != 1:
                            ok[i] = False
            return bool(ok[0]) if single else ok
        return mem

    def _place(self, small, idx):
        g = np.eye(self.G.n, dtype=np.int8)
        small = np.asarray(small, dtype=np.int64) % self.G.q
        g[np.ix_(idx, idx)] = small.astype(np.int8)
        return g

    def _build_generators(self):
        G, q = self.G, self.G.q
        gens = []
        for p in self.pieces:
            if p.kind in ("fixed", "fix_vector"):
                continue
            small_form = _standard_small_form(p, q)
            if small_form is not None:
                for c in p.copies:
                    R = _restricted_gram(_ambient_form(G), c, q)
                    if R is not None and R.any():
                        # copies inside formless GL factors restrict to zero
                        assert (R == np.asarray(small_form, dtype=np.int64) % q).all(), (
                            f"{self.name}: piece rows {c} misaligned with standard form"
                        )
            for s in _small_generators(p, q):
                g = np.eye(G.n, dtype=np.int8)
                for c in p.copies:
                    gsmall = np.asarray(s, dtype=np.int64) % q
                    g[np.ix_(c, c)] = gsmall.astype(np.int8)
                assert G.contains(g), f"{self.name}: generator escapes ambient group"
                gens.append(g)
        for rows, duals in self.gl_dual:
            F = _ambient_form(self.G)
            P = (np.asarray(F, dtype=np.int64)[np.ix_(rows, duals)]) % q
            assert mx.det(P, q) != 0, f"{self.name}: rows/duals are not dual under the form"
            Pinv = mx.inv(P, q).astype(np.int64)
            for s in root_generators("GL", len(rows), q):
                A = np.asarray(s, dtype=np.int64) % q
                C = (Pinv.T @ mx.inv(A, q).astype(np.int64).T @ P.T) % q
                g = np.eye(self.G.n, dtype=np.int8)
                g[np.ix_(rows, rows)] = A.astype(np.int8)
                g[np.ix_(duals, duals)] = C.astype(np.int8)
                assert self.G.contains(g), f"{self.name}: dual transport escapes group"
                gens.append(g)
        # torus pairs
        for p in self.pieces:
            if p.kind == "torus_pair" and q > 2:
                pr = primitive_root(q)
                g = np.eye(self.G.n, dtype=np.int8)
                i, j = p.copies[0]
                g[i, i] = pr
                g[j, j] = pow(pr, q - 2, q)
                assert self.G.contains(g), f"{self.name}: torus pair escapes group"
                gens.append(g)
        return gens

    def handle(self) -> SubgroupHandle:
        return SubgroupHandle(
            name=self.name, ambient=self.G, membership=self.membership(),
            generators=self.generators, order=self.expected_order,
        )


def _ambient_form(G: GroupSpec):
    """Block-diagonal form of a (possibly product) ambient; None entries for
    GL factors contribute zero blocks that no formed piece may touch."""
    if G.form is not None:
        return G.form
    F = np.zeros((G.n, G.n), dtype=np.int8)
    off = 0
    for kind, size in G.factors:
        if kind == "Sp":
            F[off:off + size, off:off + size] = form_sp(size)
        elif kind == "SO":
            F[off:off + size, off:off + size] = form_so(size)
        off += size
    return F


def stabilizer_of_vector_gens(G: GroupSpec, v):
    """Generators of Stab_G(v) for an anisotropic vector v in an orthogonal
    ambient: transport SO(v^perp) through a Witt basis of v^perp."""
    q = G.q
    F = np.asarray(_ambient_form(G), dtype=np.int64) % q
    n = G.n
    v = np.asarray(v, dtype=np.int64) % q
    perp = mx.nullspace_mod((F @ v)[None, :], q)
    basis = _witt_basis(perp, F, q)
    B = np.concatenate([v[None, :], basis], axis=0)   # rows
    Binv = mx.inv(B.T, q).astype(np.int64)            # columns are basis vectors
    gens = []
    for s in root_generators("SO", n - 1, q):
        big = np.eye(n, dtype=np.int64)
        big[1:, 1:] = np.asarray(s, dtype=np.int64)
        g = (B.T @ big @ Binv) % q
        g8 = g.astype(np.int8)
        assert G.contains(g8), "transported stabilizer generator escapes group"
        gens.append(g8)
    return gens


def _witt_basis(space_rows, F, q):
    """Order a basis of the row space as (u_1..u_r, z, w_r..w_1) with Gram
    c * antidiagonal: hyperbolic pairs outside, anisotropic center."""
    rows, _ = mx.rref(space_rows, q)
    k = rows.shape[0]
    assert k % 2 == 1, "odd-dimensional complement expected"
    pairs = []
    cur = rows
    while cur.shape[0] > 1:
        Grm = mx.gram(cur, F, q)
        iso = None
        for x in mx._nonzero_coords(cur.shape[0], q):
            if int(x @ Grm @ x % q) == 0:
                iso = x
                break
        assert iso is not None
        u = (iso @ cur) % q
        w0 = (Grm @ iso) % q
        j = int(np.nonzero(w0)[0][0])
        w = cur[j].copy()
        # normalize pairing to 1, make w isotropic
        c = int(u @ F @ w % q)
        w = (w * pow(c, q - 2, q)) % q
        qw = int(w @ F @ w % q)
        inv2 = pow(2, q - 2, q)
        w = (w - (qw * inv2) * u) % q
        pairs.append((u, w))
        M = np.stack([(F @ u) % q, (F @ w) % q])
        comp = mx.nullspace_mod(M, q)
        # intersect complement with current space
        cur = mx.intersect_rowspaces(comp, cur, q)
    z = cur[0]
    r = len(pairs)
    cz = int(z @ F @ z % q)
    assert cz % q != 0
    out = []
    for u, w in pairs:
        out.append((u * cz) % q)   # scale so pairing = cz everywhere
    out.append(z)
    for u, w in reversed(pairs):
        out.append(w)
    return np.stack(out) % q


# --------------------------------------------------------------------------
# model table


@dataclass
class ModelDef:
    model_id: int
    symbol: str
    param_names: tuple
    default_q: int
    minimal: tuple
    validate: object              # params -> error string or None
    build: object                  # (params, q, budget) -> dict of parts
    invariants: bool = False
    notes: str = ""


@dataclass
class ModelInstance:
    model_id: int
    params: dict
    q: int
    G: GroupSpec
    H: SubgroupHandle
    Q: ParabolicDatum
    L: SubgroupHandle
    H_L: SubgroupHandle
    N: SubgroupHandle
    N_L: SubgroupHandle
    xi: UnipotentCharacter
    chi: str = "trivial"
    structure: dict = field(default_factory=dict)
    expected_HL_order: int = 0
    cuspidal_condition_removable: bool = False
    capability: str = "full"        # full | orbits_only
    budget: int = DEFAULT_BUDGET

    @property
    def p(self) -> int:
        return self.xi.p

    def degenerate(self) -> bool:
        return self.Q.is_whole_group()

    def H_Q_handle(self) -> SubgroupHandle:
        qmem = self.Q.q_membership()
        hmem = self.H.membership

        def mem(mats):
            return np.logical_and(hmem(mats), qmem(mats))
        return SubgroupHandle(name="H_Q", ambient=self.G, membership=mem,
                              generators=[], order=None)


def _centered_band(N, m):
    """m mirror-closed indices around the center of 0..N-1."""
    if m == 0:
        return []
    if N % 2 == 1:
        c = N // 2
        if m % 2 == 1:
            h = (m - 1) // 2
            return list(range(c - h, c + h + 1))
        h = m // 2
        return list(range(c - h, c)) + list(range(c + 1, c + h + 1))
    assert m % 2 == 0, "even ambient needs even centered band"
    c = N // 2
    h = m // 2
    return list(range(c - h, c + h))


def _complement(N, idx):
    s = set(idx)
    return [i for i in range(N) if i not in s]


def _sp_middle_plane(size, off=0):
    """The innermost hyperbolic pair of an Sp factor of the given size."""
    m = size // 2
    return [off + m - 1, off + m]


def _lines_flag(k):
    return list(range(1, k + 1))


def _model_defs():
    defs = {}

    def add(md):
        defs[md.model_id] = md

    # ---- Model 1: GL_{2a+2k} / GL_a x GL_{a+2k}
    def v1(p):
        a, k = p["a"], p["k"]
        if a < 1 or k < 1:
            return "need a >= 1 and k >= 1 (k = 0 is a tempered pair)"
    def b1(p, q, budget):
        a, k = p["a"], p["k"]
        n = 2 * a + 2 * k
        G = build_group("GL", n, q, budget)
        pieces = [Piece("GL", [list(range(0, a))]),
                  Piece("GL", [list(range(a, n))])]
        H = SubgroupAssembly(f"GL{a}xGL{a + 2 * k}", G, pieces,
                             expected_order=order_gl(a, q) * order_gl(a + 2 * k, q))
        flag = [(2 * a,) + (1,) * (2 * k)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_gl(a, q) ** 2 * (q - 1) ** (2 * k),
                    structure=dict(Va=list(range(0, a)), Vb=list(range(a, n)),
                                   wdim=2 * a, a=a, k=k))
    add(ModelDef(1, "GL_{2a+2k} / GL_a x GL_{a+2k}", ("a", "k"), 2, (1, 1), v1, b1, True))

    # ---- Model 2: GL_{2a+2k+1} / GL_a x GL_{a+2k+1}
    def v2(p):
        a, k = p["a"], p["k"]
        if a < 1 or k < 1:
            return "need a >= 1 and k >= 1 (k = 0 is a tempered pair)"
    def b2(p, q, budget):
        a, k = p["a"], p["k"]
        n = 2 * a + 2 * k + 1
        G = build_group("GL", n, q, budget)
        pieces = [Piece("GL", [list(range(0, a))]),
                  Piece("GL", [list(range(a, n))])]
        H = SubgroupAssembly(f"GL{a}xGL{a + 2 * k + 1}", G, pieces,
                             expected_order=order_gl(a, q) * order_gl(a + 2 * k + 1, q))
        flag = [(2 * a + 1,) + (1,) * (2 * k)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_gl(a + 1, q) * order_gl(a, q) * (q - 1) ** (2 * k),
                    structure=dict(Va=list(range(0, a)), Vb=list(range(a, n)),
                                   wdim=2 * a + 1, a=a, k=k))
    add(ModelDef(2, "GL_{2a+2k+1} / GL_a x GL_{a+2k+1}", ("a", "k"), 2, (1, 1), v2, b2, True))

    # ---- Model 3: GL_{2n} / Sp_{2n}
    def v3(p):
        if p["n"] < 2:
            return "need n >= 2 (n = 1 is a tempered pair)"
    def b3(p, q, budget):
        n = p["n"]
        G = build_group("GL", 2 * n, q, budget)
        pieces = [Piece("Sp", [list(range(2 * n))])]
        H = SubgroupAssembly(f"Sp{2 * n}", G, pieces, expected_order=order_sp(2 * n, q))
        flag = [(n, n)]
        return dict(G=G, H=H, flag=flag, HL_order=order_gl(n, q),
                    structure=dict(form=form_sp(2 * n), wdim=n, n=n))
    add(ModelDef(3, "GL_{2n} / Sp_{2n}", ("n",), 2, (2,), v3, b3, True))

    # ---- Model 4: Sp_{4m+2k} / Sp_{2m} x Sp_{2m+2k}
    def v4(p):
        if p["m"] < 1 or p["k"] < 0:
            return "need m >= 1 and k >= 0"
    def b4(p, q, budget):
        m, k = p["m"], p["k"]
        N = 4 * m + 2 * k
        G = build_group("Sp", N, q, budget)
        V1 = list(range(0, m)) + list(range(N - m, N))
        V2 = list(range(m, N - m))
        pieces = [Piece("Sp", [V1]), Piece("Sp", [V2])]
        H = SubgroupAssembly(f"Sp{2 * m}xSp{2 * m + 2 * k}", G, pieces,
                             expected_order=order_sp(2 * m, q) * order_sp(2 * m + 2 * k, q))
        flag = [[2 * m + i for i in range(0, k + 1)]]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_gl(m, q) ** 2 * (q - 1) ** k,
                    structure=dict(V1=V1, V2=V2, wdim=2 * m, m=m, k=k, kind="Sp"))
    add(ModelDef(4, "Sp_{4m+2k} / Sp_{2m} x Sp_{2m+2k}", ("m", "k"), 2, (1, 0), v4, b4, True))

    # ---- Model 5: Sp_{2n} / Sp_{2n-2} x GL_1
    def v5(p):
        if p["n"] < 2:
            return "need n >= 2"
    def b5(p, q, budget):
        n = p["n"]
        N = 2 * n
        G = build_group("Sp", N, q, budget)
        plane = [n - 1, n]
        V = _complement(N, plane)
        pieces = [Piece("Sp", [V]), Piece("torus_pair", [plane])]
        H = SubgroupAssembly(f"Sp{2 * n - 2}xGL1", G, pieces,
                             expected_order=order_sp(2 * n - 2, q) * (q - 1))
        flag = [_lines_flag(n - 2)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_sp(2, q) * (q - 1) ** (n - 1),
                    structure=dict(V=V, plane=plane, wdim=1 if n > 2 else 0, n=n))
    add(ModelDef(5, "Sp_{2n} / Sp_{2n-2} x GL_1", ("n",), 2, (2,), v5, b5, True))

    # ---- Model 6: SO_{2m+2k+1} / SO_m x SO_{m+2k+1}
    def v6(p):
        if p["m"] < 1 or p["k"] < 1:
            return "need m >= 1 and k >= 1 (k = 0 is a tempered pair)"
    def b6(p, q, budget):
        m, k = p["m"], p["k"]
        N = 2 * m + 2 * k + 1
        G = build_group("SO", N, q, budget)
        V1 = _centered_band(N, m)
        V2 = _complement(N, V1)
        pieces = []
        if m == 1:
            pieces.append(Piece("fixed", [V1]))
        else:
            pieces.append(Piece("SO", [V1]))
        pieces.append(Piece("SO", [V2]))
        H = SubgroupAssembly(f"SO{m}xSO{m + 2 * k + 1}", G, pieces,
                             expected_order=order_so(m, q) * order_so(m + 2 * k + 1, q))
        flag = [_lines_flag(k)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_so(m, q) * order_so(m + 1, q) * (q - 1) ** k,
                    structure=dict(V1=V1, V2=V2, wdim=k, m=m, k=k, kind="SO"))
    add(ModelDef(6, "SO_{2m+2k+1} / SO_m x SO_{m+2k+1}", ("m", "k"), 3, (1, 1), v6, b6, True))

    # ---- Model 7: SO_{2m+2k} / SO_m x SO_{m+2k}
    def v7(p):
        if p["m"] < 1 or p["k"] < 1:
            return "need m >= 1 and k >= 1"
    def b7(p, q, budget):
        m, k = p["m"], p["k"]
        N = 2 * m + 2 * k
        G = build_group("SO", N, q, budget)
        if m % 2 == 0:
            V1 = _centered_band(N, m)
            V2 = _complement(N, V1)
            pieces = [Piece("SO", [V1]), Piece("SO", [V2])]
            H = SubgroupAssembly(f"SO{m}xSO{m + 2 * k}", G, pieces,
                                 expected_order=order_so(m, q) * order_so(m + 2 * k, q))
            struct = dict(V1=V1, V2=V2)
        elif m == 1:
            v = np.zeros(N, dtype=np.int64)
            v[N // 2 - 1] = 1
            v[N // 2] = 1
            pieces = [Piece("fix_vector", [list(range(N))], vector=v)]
            H = SubgroupAssembly(f"SO1xSO{N - 1}", G, pieces,
                                 expected_order=order_so(N - 1, q))
            H.generators = stabilizer_of_vector_gens(G, v)
            struct = dict(v=v.tolist())
        else:
            raise BadModelParams("model 7 with odd m > 1 not supported in v1")
        flag = [_lines_flag(k - 1)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_so(m, q) * order_so(m + 2, q) * (q - 1) ** (k - 1),
                    structure=dict(wdim=k - 1, m=m, k=k, kind="SO", **struct))
    add(ModelDef(7, "SO_{2m+2k} / SO_m x SO_{m+2k}", ("m", "k"), 3, (1, 1), v7, b7, False))

    # ---- Model 8: SO_{4n} / GL_{2n}
    def v8(p):
        if p["n"] < 1:
            return "need n >= 1"
    def b8(p, q, budget):
        n = p["n"]
        N = 4 * n
        G = build_group("SO", N, q, budget)
        Wp = list(range(0, n)) + list(range(2 * n, 3 * n))
        Wm = list(range(n, 2 * n)) + list(range(3 * n, 4 * n))
        H = SubgroupAssembly(f"GL{2 * n}", G, [], gl_dual=[(Wp, Wm)],
                             expected_order=order_gl(2 * n, q))
        flag = [[2 * n]]
        return dict(G=G, H=H, flag=flag, HL_order=order_gl(n, q) ** 2,
                    structure=dict(Wp=Wp, Wm=Wm, wdim=2 * n, n=n))
    add(ModelDef(8, "SO_{4n} / GL_{2n}", ("n",), 3, (1,), v8, b8, True))

    # ---- Model 9: SO_{4n+2} / GL_{2n+1}
    def v9(p):
        if p["n"] < 1:
            return "need n >= 1"
    def b9(p, q, budget):
        n = p["n"]
        N = 4 * n + 2
        G = build_group("SO", N, q, budget)
        Wp = list(range(0, n)) + [2 * n] + list(range(2 * n + 2, 3 * n + 2))
        Wm = list(range(n, 2 * n)) + [2 * n + 1] + list(range(3 * n + 2, 4 * n + 2))
        H = SubgroupAssembly(f"GL{2 * n + 1}", G, [], gl_dual=[(Wp, Wm)],
                             expected_order=order_gl(2 * n + 1, q))
        flag = [[2 * n, 2 * n + 1]]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_gl(n, q) ** 2 * (q - 1),
                    structure=dict(Wp=Wp, Wm=Wm, wdim=2 * n, n=n))
    add(ModelDef(9, "SO_{4n+2} / GL_{2n+1}", ("n",), 3, (1,), v9, b9, True))

    # ---- Model 15: GL_{2n+2} x GL_2 / GL_{2n} x GL_2
    def v15(p):
        if p["n"] < 1:
            return "need n >= 1"
    def b15(p, q, budget):
        n = p["n"]
        f1 = 2 * n + 2
        G = block_product([build_group("GL", f1, q, budget),
                           build_group("GL", 2, q, budget)], budget)
        pieces = [Piece("GL", [list(range(0, 2 * n))]),
                  Piece("GL", [[2 * n, 2 * n + 1], [f1, f1 + 1]])]
        H = SubgroupAssembly(f"GL{2 * n}xGL2diag", G, pieces,
                             expected_order=order_gl(2 * n, q) * order_gl(2, q))
        flag = [(4,) + (1,) * (2 * n - 2), (2,)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_gl(2, q) ** 2 * (q - 1) ** (2 * n - 2))
    add(ModelDef(15, "GL_{2n+2} x GL_2 / GL_{2n} x GL_2", ("n",), 2, (1,), v15, b15))

    # ---- Model 16: GL_{2n+1} x GL_2 / GL_{2n-1} x GL_2
    def v16(p):
        if p["n"] < 2:
            return "need n >= 2"
    def b16(p, q, budget):
        n = p["n"]
        f1 = 2 * n + 1
        G = block_product([build_group("GL", f1, q, budget),
                           build_group("GL", 2, q, budget)], budget)
        pieces = [Piece("GL", [list(range(0, 2 * n - 1))]),
                  Piece("GL", [[2 * n - 1, 2 * n], [f1, f1 + 1]])]
        H = SubgroupAssembly(f"GL{2 * n - 1}xGL2diag", G, pieces,
                             expected_order=order_gl(2 * n - 1, q) * order_gl(2, q))
        flag = [(5,) + (1,) * (2 * n - 4), (2,)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_gl(3, q) * order_gl(2, q) * (q - 1) ** (2 * n - 4))
    add(ModelDef(16, "GL_{2n+1} x GL_2 / GL_{2n-1} x GL_2", ("n",), 2, (2,), v16, b16))

    # ---- Model 17: Sp_{2p+2} x Sp_2 / Sp_2 x Sp_{2p}
    def v17(p):
        if p["p"] < 1:
            return "need p >= 1"
    def b17(p, q, budget):
        pp = p["p"]
        f1 = 2 * pp + 2
        G = block_product([build_group("Sp", f1, q, budget),
                           build_group("Sp", 2, q, budget)], budget)
        plane = _sp_middle_plane(f1)
        V = _complement(f1, plane)
        pieces = [Piece("Sp", [V]),
                  Piece("Sp", [plane, [f1, f1 + 1]])]
        H = SubgroupAssembly(f"Sp2xSp{2 * pp}", G, pieces,
                             expected_order=order_sp(2, q) * order_sp(2 * pp, q))
        flag = [_lines_flag(pp - 1), []]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_sp(2, q) ** 2 * (q - 1) ** (pp - 1))
    add(ModelDef(17, "Sp_{2p+2} x Sp_2 / Sp_2 x Sp_{2p}", ("p",), 2, (1,), v17, b17))

    # ---- Model 18: Sp_{2p+2} x Sp_{2q+2} / Sp_2 x Sp_{2p} x Sp_{2q}
    def v18(p):
        if p["p"] < 1 or p["r"] < 1:
            return "need p >= 1 and r >= 1"
    def b18(p, q, budget):
        pp, rr = p["p"], p["r"]
        f1, f2 = 2 * pp + 2, 2 * rr + 2
        G = block_product([build_group("Sp", f1, q, budget),
                           build_group("Sp", f2, q, budget)], budget)
        p1 = _sp_middle_plane(f1)
        p2 = _sp_middle_plane(f2, off=f1)
        pieces = [Piece("Sp", [_complement(f1, p1)]),
                  Piece("Sp", [[x for x in range(f1, f1 + f2) if x not in p2]]),
                  Piece("Sp", [p1, p2])]
        H = SubgroupAssembly(f"Sp2xSp{2 * pp}xSp{2 * rr}", G, pieces,
                             expected_order=order_sp(2, q) * order_sp(2 * pp, q) * order_sp(2 * rr, q))
        flag = [_lines_flag(pp - 1), _lines_flag(rr - 1)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_sp(2, q) ** 3 * (q - 1) ** (pp + rr - 2))
    add(ModelDef(18, "Sp_{2p+2} x Sp_{2r+2} / Sp_2 x Sp_{2p} x Sp_{2r}", ("p", "r"), 2, (1, 1), v18, b18))

    # ---- Model 19: Sp_{2p+4} x Sp_4 / Sp_{2p} x Sp_4
    def v19(p):
        if p["p"] <= 2:
            return "need p > 2"
    def b19(p, q, budget):
        pp = p["p"]
        f1 = 2 * pp + 4
        G = block_product([build_group("Sp", f1, q, budget),
                           build_group("Sp", 4, q, budget)], budget)
        mid4 = [pp, pp + 1, pp + 2, pp + 3]
        V2 = _complement(f1, mid4)
        pieces = [Piece("Sp", [V2]),
                  Piece("Sp", [mid4, [f1, f1 + 1, f1 + 2, f1 + 3]])]
        H = SubgroupAssembly(f"Sp{2 * pp}xSp4diag", G, pieces,
                             expected_order=order_sp(2 * pp, q) * order_sp(4, q))
        flag = [_lines_flag(pp - 2), []]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_sp(4, q) ** 2 * (q - 1) ** (pp - 2),
                    structure=dict(V1=mid4, V2=V2, wdim=pp - 2, kind="Sp"))
    add(ModelDef(19, "Sp_{2p+4} x Sp_4 / Sp_{2p} x Sp_4", ("p",), 2, (3,), v19, b19, True))

    # ---- Model 20: GL_{p+2} x Sp_{2q+2} / GL_p x SL_2 x Sp_{2q}
    def v20(p):
        if not (1 <= p["p"] <= 3) or p["r"] < 1:
            return "need 1 <= p <= 3 and r >= 1"
    def b20(p, q, budget):
        pp, rr = p["p"], p["r"]
        f1, f2 = pp + 2, 2 * rr + 2
        G = block_product([build_group("GL", f1, q, budget),
                           build_group("Sp", f2, q, budget)], budget)
        plane2 = _sp_middle_plane(f2, off=f1)
        pieces = [Piece("GL", [list(range(0, pp))]),
                  Piece("SL", [[pp, pp + 1], plane2]),
                  Piece("Sp", [[x for x in range(f1, f1 + f2) if x not in plane2]])]
        H = SubgroupAssembly(f"GL{pp}xSL2xSp{2 * rr}", G, pieces,
                             expected_order=order_gl(pp, q) * order_sp(2, q) * order_sp(2 * rr, q))
        flag = [(f1,), _lines_flag(rr - 1)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_gl(pp, q) * order_sp(2, q) ** 2 * (q - 1) ** (rr - 1))
    add(ModelDef(20, "GL_{p+2} x Sp_{2r+2} / GL_p x SL_2 x Sp_{2r}", ("p", "r"), 2, (1, 1), v20, b20))

    # ---- Model 21: GL_{2p+2} x Sp_{2q+2} / GL_{2p} x SL_2 x Sp_{2q}
    def v21(p):
        if p["p"] < 1 or p["r"] < 1:
            return "need p >= 1 and r >= 1"
    def b21(p, q, budget):
        pp, rr = p["p"], p["r"]
        f1, f2 = 2 * pp + 2, 2 * rr + 2
        G = block_product([build_group("GL", f1, q, budget),
                           build_group("Sp", f2, q, budget)], budget)
        plane2 = _sp_middle_plane(f2, off=f1)
        pieces = [Piece("GL", [list(range(0, 2 * pp))]),
                  Piece("SL", [[2 * pp, 2 * pp + 1], plane2]),
                  Piece("Sp", [[x for x in range(f1, f1 + f2) if x not in plane2]])]
        H = SubgroupAssembly(f"GL{2 * pp}xSL2xSp{2 * rr}", G, pieces,
                             expected_order=order_gl(2 * pp, q) * order_sp(2, q) * order_sp(2 * rr, q))
        flag = [(4,) + (1,) * (2 * pp - 2), _lines_flag(rr - 1)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_gl(2, q) * order_sp(2, q) ** 2 * (q - 1) ** (2 * pp + rr - 3))
    add(ModelDef(21, "GL_{2p+2} x Sp_{2r+2} / GL_{2p} x SL_2 x Sp_{2r}", ("p", "r"), 2, (1, 1), v21, b21))

    # ---- Model 22: GL_{2p+3} x Sp_{2q+2} / GL_{2p+1} x SL_2 x Sp_{2q}
    def v22(p):
        if p["p"] < 1 or p["r"] < 1:
            return "need p >= 1 and r >= 1"
    def b22(p, q, budget):
        pp, rr = p["p"], p["r"]
        f1, f2 = 2 * pp + 3, 2 * rr + 2
        G = block_product([build_group("GL", f1, q, budget),
                           build_group("Sp", f2, q, budget)], budget)
        plane2 = _sp_middle_plane(f2, off=f1)
        pieces = [Piece("GL", [list(range(0, 2 * pp + 1))]),
                  Piece("SL", [[2 * pp + 1, 2 * pp + 2], plane2]),
                  Piece("Sp", [[x for x in range(f1, f1 + f2) if x not in plane2]])]
        H = SubgroupAssembly(f"GL{2 * pp + 1}xSL2xSp{2 * rr}", G, pieces,
                             expected_order=order_gl(2 * pp + 1, q) * order_sp(2, q) * order_sp(2 * rr, q))
        flag = [(5,) + (1,) * (2 * pp - 2), _lines_flag(rr - 1)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_gl(3, q) * order_sp(2, q) ** 2 * (q - 1) ** (2 * pp + rr - 3))
    add(ModelDef(22, "GL_{2p+3} x Sp_{2r+2} / GL_{2p+1} x SL_2 x Sp_{2r}", ("p", "r"), 2, (1, 1), v22, b22))

    # ---- Model 23: Sp_4 x Sp_{2p+2} x Sp_2 / Sp_2^2 x Sp_{2p}
    def v23(p):
        if p["p"] < 1:
            return "need p >= 1"
    def b23(p, q, budget):
        pp = p["p"]
        f2 = 2 * pp + 2
        G = block_product([build_group("Sp", 4, q, budget),
                           build_group("Sp", f2, q, budget),
                           build_group("Sp", 2, q, budget)], budget)
        outer = [0, 3]
        inner = [1, 2]
        plane2 = _sp_middle_plane(f2, off=4)
        rest2 = [x for x in range(4, 4 + f2) if x not in plane2]
        pieces = [Piece("Sp", [outer, [4 + f2, 4 + f2 + 1]]),
                  Piece("Sp", [inner, plane2]),
                  Piece("Sp", [rest2])]
        H = SubgroupAssembly(f"Sp2^2xSp{2 * pp}", G, pieces,
                             expected_order=order_sp(2, q) ** 2 * order_sp(2 * pp, q))
        flag = [[], _lines_flag(pp - 1), []]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_sp(2, q) ** 3 * (q - 1) ** (pp - 1))
    add(ModelDef(23, "Sp_4 x Sp_{2p+2} x Sp_2 / Sp_2^2 x Sp_{2p}", ("p",), 2, (1,), v23, b23))

    # ---- Model 24: Sp_4 x Sp_{2p+2} x Sp_{2q+2} / Sp_2^2 x Sp_{2p} x Sp_{2q}
    def v24(p):
        if p["p"] < 1 or p["r"] < 1:
            return "need p >= 1 and r >= 1"
    def b24(p, q, budget):
        pp, rr = p["p"], p["r"]
        f2, f3 = 2 * pp + 2, 2 * rr + 2
        G = block_product([build_group("Sp", 4, q, budget),
                           build_group("Sp", f2, q, budget),
                           build_group("Sp", f3, q, budget)], budget)
        outer = [0, 3]
        inner = [1, 2]
        plane2 = _sp_middle_plane(f2, off=4)
        plane3 = _sp_middle_plane(f3, off=4 + f2)
        rest2 = [x for x in range(4, 4 + f2) if x not in plane2]
        rest3 = [x for x in range(4 + f2, 4 + f2 + f3) if x not in plane3]
        pieces = [Piece("Sp", [outer, plane2]),
                  Piece("Sp", [inner, plane3]),
                  Piece("Sp", [rest2]), Piece("Sp", [rest3])]
        H = SubgroupAssembly(f"Sp2^2xSp{2 * pp}xSp{2 * rr}", G, pieces,
                             expected_order=order_sp(2, q) ** 2 * order_sp(2 * pp, q) * order_sp(2 * rr, q))
        flag = [[], _lines_flag(pp - 1), _lines_flag(rr - 1)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_sp(2, q) ** 4 * (q - 1) ** (pp + rr - 2))
    add(ModelDef(24, "Sp_4 x Sp_{2p+2} x Sp_{2r+2} / Sp_2^2 x Sp_{2p} x Sp_{2r}", ("p", "r"), 2, (1, 1), v24, b24))

    # ---- Model 25: Sp_{2p+2} x Sp_2^2 / Sp_{2p} x Sp_2
    def v25(p):
        if p["p"] < 1:
            return "need p >= 1"
    def b25(p, q, budget):
        pp = p["p"]
        f1 = 2 * pp + 2
        G = block_product([build_group("Sp", f1, q, budget),
                           build_group("Sp", 2, q, budget),
                           build_group("Sp", 2, q, budget)], budget)
        plane = _sp_middle_plane(f1)
        rest = _complement(f1, plane)
        pieces = [Piece("Sp", [rest]),
                  Piece("Sp", [plane, [f1, f1 + 1], [f1 + 2, f1 + 3]])]
        H = SubgroupAssembly(f"Sp{2 * pp}xSp2", G, pieces,
                             expected_order=order_sp(2 * pp, q) * order_sp(2, q))
        flag = [_lines_flag(pp - 1), [], []]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_sp(2, q) ** 2 * (q - 1) ** (pp - 1))
    add(ModelDef(25, "Sp_{2p+2} x Sp_2^2 / Sp_{2p} x Sp_2", ("p",), 2, (1,), v25, b25))

    # ---- Model 26: Sp_{2p+2} x Sp_{2q+2} x Sp_2 / Sp_{2p} x Sp_{2q} x Sp_2
    def v26(p):
        if p["p"] < 1 or p["r"] < 1:
            return "need p >= 1 and r >= 1"
    def b26(p, q, budget):
        pp, rr = p["p"], p["r"]
        f1, f2 = 2 * pp + 2, 2 * rr + 2
        G = block_product([build_group("Sp", f1, q, budget),
                           build_group("Sp", f2, q, budget),
                           build_group("Sp", 2, q, budget)], budget)
        p1 = _sp_middle_plane(f1)
        p2 = _sp_middle_plane(f2, off=f1)
        pieces = [Piece("Sp", [_complement(f1, p1)]),
                  Piece("Sp", [[x for x in range(f1, f1 + f2) if x not in p2]]),
                  Piece("Sp", [p1, p2, [f1 + f2, f1 + f2 + 1]])]
        H = SubgroupAssembly(f"Sp{2 * pp}xSp{2 * rr}xSp2", G, pieces,
                             expected_order=order_sp(2 * pp, q) * order_sp(2 * rr, q) * order_sp(2, q))
        flag = [_lines_flag(pp - 1), _lines_flag(rr - 1), []]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_sp(2, q) ** 3 * (q - 1) ** (pp + rr - 2))
    add(ModelDef(26, "Sp_{2p+2} x Sp_{2r+2} x Sp_2 / Sp_{2p} x Sp_{2r} x Sp_2", ("p", "r"), 2, (1, 1), v26, b26))

    # ---- Model 27: Sp_{2p+2} x Sp_{2q+2} x Sp_{2r+2} / Sp_{2p} x Sp_{2q} x Sp_{2r} x Sp_2
    def v27(p):
        if p["p"] < 1 or p["r"] < 1 or p["s"] < 1:
            return "need p, r, s >= 1"
    def b27(p, q, budget):
        pp, rr, ss = p["p"], p["r"], p["s"]
        f1, f2, f3 = 2 * pp + 2, 2 * rr + 2, 2 * ss + 2
        G = block_product([build_group("Sp", f1, q, budget),
                           build_group("Sp", f2, q, budget),
                           build_group("Sp", f3, q, budget)], budget)
        p1 = _sp_middle_plane(f1)
        p2 = _sp_middle_plane(f2, off=f1)
        p3 = _sp_middle_plane(f3, off=f1 + f2)
        pieces = [Piece("Sp", [_complement(f1, p1)]),
                  Piece("Sp", [[x for x in range(f1, f1 + f2) if x not in p2]]),
                  Piece("Sp", [[x for x in range(f1 + f2, f1 + f2 + f3) if x not in p3]]),
                  Piece("Sp", [p1, p2, p3])]
        H = SubgroupAssembly(f"Sp{2 * pp}xSp{2 * rr}xSp{2 * ss}xSp2", G, pieces,
                             expected_order=order_sp(2 * pp, q) * order_sp(2 * rr, q)
                             * order_sp(2 * ss, q) * order_sp(2, q))
        flag = [_lines_flag(pp - 1), _lines_flag(rr - 1), _lines_flag(ss - 1)]
        return dict(G=G, H=H, flag=flag,
                    HL_order=order_sp(2, q) ** 4 * (q - 1) ** (pp + rr + ss - 3))
    add(ModelDef(27, "Sp^3 products / Sp_{2p} x Sp_{2r} x Sp_{2s} x Sp_2", ("p", "r", "s"), 2, (1, 1, 1), v27, b27))

    return defs


MODEL_DEFS = _model_defs()


def minimal_params(model_id: int) -> dict:
    if model_id not in MODEL_DEFS:
        raise BadModelParams(f"model {model_id} not supported")
    md = MODEL_DEFS[model_id]
    return dict(zip(md.param_names, md.minimal))


def catalog():
    """Machine-readable model catalog."""
    out = []
    for mid in SUPPORTED_MODELS:
        md = MODEL_DEFS[mid]
        mp = minimal_params(mid)
        try:
            inst_cost = model_cost(mid, mp, md.default_q)
        except Exception:
            inst_cost = None
        out.append(dict(
            model=mid, symbol=md.symbol, params=list(md.param_names),
            minimal_params=mp, default_q=md.default_q,
            invariants=md.invariants, cost_estimate=inst_cost,
        ))
    return out


def model_cost(model_id: int, params: dict, q: int) -> int:
    """Order of G, the dominant cost driver."""
    md = MODEL_DEFS[model_id]
    parts = md.build(params, q, budget=10**18)
    return parts["G"].order


def instantiate_model(model_id: int, params: dict, q: int,
                      budget: int = DEFAULT_BUDGET, validate: bool = True) -> ModelInstance:
    if model_id not in MODEL_DEFS:
        raise BadModelParams(f"model {model_id} not supported (supported: {SUPPORTED_MODELS})")
    md = MODEL_DEFS[model_id]
    params = dict(params)
    missing = [k for k in md.param_names if k not in params]
    if missing:
        raise BadModelParams(f"model {model_id} missing params {missing}")
    err = md.validate(params)
    if err:
        raise BadModelParams(f"model {model_id}: {err}")
    if q == 2 and any(k == "SO" for k, _ in _ambient_kinds(model_id, params)):
        raise BadModelParams(f"model {model_id} needs odd q (orthogonal factors)")
    parts = md.build(params, q, budget)
    G: GroupSpec = parts["G"]
    G.budget = budget
    assembly: SubgroupAssembly = parts["H"]
    H = assembly.handle()
    Qd = standard_parabolic(G, parts["flag"])
    L = Qd.levi
    N = maximal_unipotent(G)
    N_L = maximal_unipotent(G, Qd)
    positions = simple_root_positions(G, Qd)
    xi = UnipotentCharacter(N_L, q, positions, [1] * len(positions))

    # capability: full needs the tables the engine filters (H, and for a
    # proper parabolic also L and Q); a degenerate instance (Q = G) only
    # needs H and N.
    if Qd.is_whole_group():
        feasible = (
            (H.order or 0) <= budget
            and q ** positive_root_count_total(G) <= budget
        )
    else:
        feasible = (
            (L.order or 0) <= budget
            and (H.order or 0) <= budget
            and Qd.levi.order * Qd.unipotent_radical.order <= budget
        )
    inst = ModelInstance(
        model_id=model_id, params=params, q=q, G=G, H=H, Q=Qd, L=L,
        H_L=_hl_handle(G, H, Qd, parts["HL_order"]),
        N=N, N_L=N_L, xi=xi,
        structure=parts.get("structure", {}),
        expected_HL_order=parts["HL_order"],
        cuspidal_condition_removable=(
            model_id in _CUSP_FREE or (model_id == 4 and params.get("k") == 0)
        ),
        capability="full" if feasible else "orbits_only",
        budget=budget,
    )
    if inst.capability == "full":
        if inst.degenerate():
            inst.H_L._table = H.table()     # H_L = H cap L = H when Q = G
        else:
            Lt = L.table()
            hl_mask = H.contains(Lt.M)
            inst.H_L._table = ElementTable(G.n, q, Lt.M[np.nonzero(hl_mask)[0]])
        if validate:
            _validate_instance(inst)
    return inst


def _ambient_kinds(model_id, params):
    md = MODEL_DEFS[model_id]
    # cheap reconstruction of factor kinds without building groups
    if model_id in (6, 7, 8, 9):
        return [("SO", 0)]
    return [("GL", 0)]


def _hl_handle(G, H, Qd, expected_order) -> SubgroupHandle:
    hmem = H.membership
    lmem = Qd.levi_membership()

    def mem(mats):
        return np.logical_and(hmem(mats), lmem(mats))
    return SubgroupHandle(name="H_L", ambient=G, membership=mem,
                          generators=[], order=expected_order)


def hl_table_ids(inst: ModelInstance):
    """Ids (into the L table) of the elements of H_L = H cap L."""
    Lt = inst.L.table()
    mask = inst.H.contains(Lt.M)
    return np.nonzero(mask)[0]


def _validate_instance(inst: ModelInstance):
    """Construction-time checks: orders, containments, H_Q factorization,
    character multiplicativity."""
    q = inst.q
    n_hl = inst.H_L.table().size
    if n_hl != inst.expected_HL_order:
        raise AssertionError(
            f"model {inst.model_id}: |H cap L| = {n_hl} != expected "
            f"|H_L| = {inst.expected_HL_order}"
        )
    # H_L inside H and L by construction (filtered from L by H membership)
    Ht = inst.H.table()
    # H_Q = (H cap L) x (H cap U) exactly
    qmem = inst.Q.q_membership()
    umem = inst.Q.unipotent_radical.membership
    in_q = qmem(Ht.M)
    in_u = umem(Ht.M)
    n_hq = int(in_q.sum())
    n_hu = int(in_u.sum())
    if n_hq != n_hl * n_hu:
        raise AssertionError(
            f"model {inst.model_id}: |H cap Q| = {n_hq} != |H_L| * |H cap U| "
            f"= {n_hl} * {n_hu}"
        )
    # character multiplicativity on random pairs of N_L
    NLt = inst.N_L.table()
    rng = np.random.default_rng(20260809)
    k = min(200, NLt.size)
    a = rng.integers(0, NLt.size, k)
    b = rng.integers(0, NLt.size, k)
    prod = (NLt.Ml[a] @ NLt.Ml[b]) % q
    pw = inst.xi.power(prod)
    pw2 = (inst.xi.power(NLt.M[a]) + inst.xi.power(NLt.M[b])) % inst.p
    if not np.array_equal(np.asarray(pw) % inst.p, pw2):
        raise AssertionError(f"model {inst.model_id}: character not multiplicative")
