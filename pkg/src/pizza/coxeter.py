"""Finite Coxeter groups as permutation groups of the root set.

An element w is stored as the permutation it induces on Phi; since Phi
spans the essential part and w is the identity on its orthogonal
complement, the permutation determines w.  Exact matrices are recovered
on demand from the images of a basis of roots.
"""
from __future__ import annotations

from collections import deque
from typing import Optional, Sequence

from .errors import DomainError, ResourceError
from .linalg import inverse, matmul, matvec, nullspace, transpose
from .roots import Arrangement, PositiveSystem, reflect

ORDER_CAP = 100_000


class NonEssentialError(DomainError):
    """Span(Phi) is a proper subspace; restrict to Span(Phi) first."""


class GroupElement:
    """An element w of W.

    Attributes
    ----------
    perm : tuple of int
        ``perm[i]`` is the index of w(root_i).
    det : int
        Determinant, equal to (-1) to the length of any reflection word.
    """

    __slots__ = ("group", "perm", "det", "_matrix", "_inv")

    def __init__(self, group: "CoxeterGroup", perm: tuple, det: int):
        self.group = group
        self.perm = perm
        self.det = det
        self._matrix = None
        self._inv = None

    def __repr__(self) -> str:
        return f"GroupElement(det={self.det:+d})"

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    @property
    def matrix(self) -> list:
        if self._matrix is None:
            self._matrix = self.group._matrix_of(self.perm)
        return self._matrix

    def __call__(self, v: Sequence) -> tuple:
        return matvec(self.matrix, v)

    def apply_root(self, i: int) -> int:
        return self.perm[i]

    @property
    def word_length_parity(self) -> int:
        return (-1) ** len(self.group.inversion_indices(self))

    def inverse(self) -> "GroupElement":
        if self._inv is None:
            inv = [0] * len(self.perm)
            for i, j in enumerate(self.perm):
                inv[j] = i
            self._inv = self.group.lookup(tuple(inv))
        return self._inv

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.group.lookup(tuple(self.perm[j] for j in other.perm))


class CoxeterGroup:
    """All elements of W generated by the reflections of a positive system."""

    def __init__(self, positive: PositiveSystem, cap: int = ORDER_CAP):
        self.positive = positive
        self.system = S = positive.system
        roots = S.roots
        idx = S.index
        self.neg = tuple(idx[tuple(-x for x in r)] for r in roots)
        self.pos_mask = tuple(positive.is_positive[r] for r in roots)
        self.pos_indices = tuple(i for i, p in enumerate(self.pos_mask) if p)
        self.gen_perms = []
        for i in self.pos_indices:
            a = roots[i]
            self.gen_perms.append(tuple(idx[reflect(r, a)] for r in roots))
        self._basis_setup()
        identity = tuple(range(len(roots)))
        self.elements: list = [GroupElement(self, identity, 1)]
        self._by_perm = {identity: 0}
        queue = deque([0])
        while queue:
            k = queue.popleft()
            w = self.elements[k]
            for g in self.gen_perms:
                p = tuple(w.perm[j] for j in g)
                if p not in self._by_perm:
                    if len(self.elements) >= cap:
                        raise ResourceError(f"group order exceeds cap {cap}")
                    self._by_perm[p] = len(self.elements)
                    self.elements.append(GroupElement(self, p, -w.det))
                    queue.append(len(self.elements) - 1)
        self.identity = self.elements[0]
        self.reflections = [self.lookup(g) for g in self.gen_perms]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"CoxeterGroup({self.system.type_label}, order={len(self)})"

    def lookup(self, perm: tuple) -> GroupElement:
        return self.elements[self._by_perm[perm]]

    def reflection(self, root_index: int) -> GroupElement:
        """s_alpha for the root with the given index."""
        i = root_index if self.pos_mask[root_index] else self.neg[root_index]
        return self.reflections[self.pos_indices.index(i)]

    # -- matrices ---------------------------------------------------------
    def _basis_setup(self):
        S = self.system
        n = S.ambient_dim
        chosen = []
        rows = []
        from .linalg import rank

        for i, r in enumerate(S.roots):
            if rank(rows + [list(r)]) > len(rows):
                rows.append(list(r))
                chosen.append(i)
            if len(rows) == S.rank:
                break
        self.basis_roots = chosen
        # complete with a basis of the orthogonal complement (fixed by W)
        comp = nullspace(rows) if len(rows) < n else []
        cols = rows + [list(c) for c in comp]
        self._comp = comp
        self._Binv = inverse(transpose(cols))

    def _matrix_of(self, perm: tuple) -> list:
        S = self.system
        cols = [list(S.roots[perm[i]]) for i in self.basis_roots] + [list(c) for c in self._comp]
        return matmul(transpose(cols), self._Binv)

    # -- inversion sets ---------------------------------------------------
    def inversion_indices(self, w: GroupElement) -> tuple:
        """Indices of Phi+ cap w(Phi-): positive beta whose preimage is negative."""
        out = []
        pm = self.pos_mask
        for i, j in enumerate(w.perm):
            if not pm[i] and pm[j]:
                out.append(j)
        return tuple(sorted(out))

    def simple_indices(self) -> tuple:
        """Positive roots alpha with |Inv(s_alpha)| = 1."""
        return tuple(i for k, i in enumerate(self.pos_indices)
                     if len(self.inversion_indices(self.reflections[k])) == 1)

    def has_minus_id(self) -> bool:
        return tuple(self.neg) in self._by_perm

    def minus_id(self) -> Optional[GroupElement]:
        p = tuple(self.neg)
        return self.lookup(p) if p in self._by_perm else None

    def stabilizer_of_set(self, index_set) -> list:
        s = frozenset(index_set)
        return [w for w in self.elements if frozenset(w.perm[i] for i in s) == s]


def enumerate_group(S_or_P, cap: int = ORDER_CAP) -> CoxeterGroup:
    """Closure of the reflections under multiplication (BFS)."""
    if isinstance(S_or_P, Arrangement):
        P = S_or_P.positive
    elif isinstance(S_or_P, PositiveSystem):
        P = S_or_P
    else:
        from .roots import positive_system

        P = positive_system(S_or_P)
    return CoxeterGroup(P, cap)


def has_minus_id(W: CoxeterGroup) -> bool:
    return W.has_minus_id()


def inversion_set(w: GroupElement, P: Optional[PositiveSystem] = None) -> list:
    """Phi+ cap w(Phi-) as root vectors."""
    G = w.group
    roots = G.system.roots
    return [roots[i] for i in G.inversion_indices(w)]


class Chamber:
    """The chamber w(T0) with its sign and facet description.

    ``walls`` are the normals w(alpha) for the simple roots alpha; the open
    chamber is {v : (v, n) > 0 for n in walls}.
    """

    __slots__ = ("element", "sign", "separating_set", "walls")

    def __init__(self, element: GroupElement, walls: list, separating: tuple):
        self.element = element
        self.sign = element.det
        self.separating_set = separating
        self.walls = walls

    def __repr__(self) -> str:
        return f"Chamber(sign={self.sign:+d}, |S|={len(self.separating_set)})"

    def region(self, closed: bool = False):
        from .regions import Constraint, HalfOpenRegion

        n = len(self.walls[0])
        F = self.walls[0][0].field
        return HalfOpenRegion(n, [Constraint(w, F.zero, not closed) for w in self.walls])

    @property
    def h_rep(self):
        return self.region(closed=False)

    @property
    def h_rep_closed(self):
        return self.region(closed=True)


def chambers_with_signs(A: Arrangement, W: Optional[CoxeterGroup] = None) -> list:
    """One chamber per group element, base chamber first (sign +1)."""
    S = A.system
    if not S.is_essential():
        raise NonEssentialError(
            f"{S.type_label} has rank {S.rank} < ambient dimension {S.ambient_dim}; restrict to Span(Phi)")
    if W is None:
        W = CoxeterGroup(A.positive)
    simple = W.simple_indices()
    roots = S.roots
    out = []
    for w in W.elements:
        walls = [roots[w.perm[i]] for i in simple]
        sep = tuple(roots[i] for i in W.inversion_indices(w))
        out.append(Chamber(w, walls, sep))
    return out


def chamber_sign_at(A: Arrangement, x: Sequence) -> int:
    """(-1)^T for the open chamber T containing x; 0 if x is on a wall."""
    neg = 0
    for a in A.hyperplanes:
        s = sum(p * q for p, q in zip(x, a))
        s = s.sign() if hasattr(s, "sign") else (s > 0) - (s < 0)
        if s == 0:
            return 0
        neg += s < 0
    return -1 if neg % 2 else 1
