"""2-structures of a pseudo-root system and their signs.

A 2-structure is a union of pairwise orthogonal irreducible subsystems of
types A1, B2 or I2(2^k) (k >= 3) whose positive part is only stabilized by
determinant-one elements of W.  All of them form one W-orbit; the sign of
a 2-structure is the determinant of an element transporting the base
structure and its positive part onto it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .coxeter import CoxeterGroup, GroupElement
from .errors import DomainError, PizzaError
from .linalg import dot, rank
from .roots import PositiveSystem, reflect


class NotFoundError(PizzaError):
    """No 2-structure found (would contradict the existence result)."""


class InconsistentSignError(PizzaError):
    """Two transporters of the base 2-structure disagree in determinant."""


def component_type(n_roots: int) -> str:
    if n_roots == 2:
        return "A1"
    if n_roots == 8:
        return "B2"
    return f"I2({n_roots // 2})"


def _allowed_size(n_roots: int) -> bool:
    # A1 (2 roots), B2 = I2(4) (8 roots), I2(2^k) with k >= 3 (2^(k+1) roots)
    return n_roots == 2 or (n_roots >= 8 and n_roots & (n_roots - 1) == 0)


@dataclass
class TwoStructure:
    """A 2-structure phi given by root indices into the ambient system."""

    roots: frozenset
    components: tuple  # of (frozenset of indices, type label)
    positive: frozenset
    epsilon: int = 0
    transporter: Optional[GroupElement] = None

    @property
    def type_label(self) -> str:
        return "x".join(sorted((t for _, t in self.components), key=lambda s: (len(s), s)))

    def root_vectors(self, S) -> list:
        return [S.roots[i] for i in sorted(self.roots)]

    def positive_vectors(self, S) -> list:
        return [S.roots[i] for i in sorted(self.positive)]


def _components_of(indices, S) -> tuple:
    """Connected components under non-orthogonality, with their types."""
    idx = sorted(indices)
    left = set(idx)
    comps = []
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        left.discard(start)
        while stack:
            i = stack.pop()
            for j in list(left):
                if dot(S.roots[i], S.roots[j]):
                    left.discard(j)
                    comp.add(j)
                    stack.append(j)
        comps.append((frozenset(comp), component_type(len(comp))))
    return tuple(sorted(comps, key=lambda c: min(c[0])))


def candidate_components(S) -> list:
    """All irreducible subsystems of allowed type, as frozensets of root indices."""
    idx = S.index
    out = set()
    neg = {i: idx[tuple(-x for x in r)] for i, r in enumerate(S.roots)}
    for i in range(len(S.roots)):
        out.add(frozenset((i, neg[i])))
    refl = {}

    def s_perm(k):
        if k not in refl:
            refl[k] = [idx[reflect(r, S.roots[k])] for r in S.roots]
        return refl[k]

    for i, j in itertools.combinations(range(len(S.roots)), 2):
        if j == neg[i] or not dot(S.roots[i], S.roots[j]):
            continue
        # orbit of {a, b} under <s_a, s_b> is the root set of that dihedral subgroup
        gens = (s_perm(i), s_perm(j))
        cl = {i, j}
        frontier = [i, j]
        while frontier:
            new = []
            for p in frontier:
                for g in gens:
                    k = g[p]
                    if k not in cl:
                        cl.add(k)
                        new.append(k)
            frontier = new
        if _allowed_size(len(cl)):
            out.add(frozenset(cl))
    return sorted(out, key=lambda c: (-len(c), sorted(c)))


def check_condition_b(phi_indices, W: CoxeterGroup):
    """Every w stabilizing phi+ must have det +1.

    Returns ``(True, None)`` or ``(False, witness)`` with det(witness) = -1.
    """
    pm = W.pos_mask
    pos = frozenset(i for i in phi_indices if pm[i])
    for w in W.elements:
        if w.det < 0 and all(w.perm[i] in pos for i in pos):
            return False, w
    return True, None


def _orthogonal(S, c1, c2) -> bool:
    return all(not dot(S.roots[i], S.roots[j]) for i in c1 for j in c2)


def _families(S, cands, full_rank_only: bool):
    """Pairwise orthogonal families of candidate components (depth first)."""
    target = S.rank
    orth = {}
    for a, b in itertools.combinations(range(len(cands)), 2):
        ok = _orthogonal(S, cands[a], cands[b])
        orth[(a, b)] = orth[(b, a)] = ok

    def rk(fam):
        rows = []
        for k in fam:
            rows += [list(S.roots[i]) for i in cands[k]]
        return rank(rows) if rows else 0

    def rec(start, fam, dim):
        if not full_rank_only or dim == target:
            yield fam
        if dim == target:
            return
        for k in range(start, len(cands)):
            if all(orth[(k, f)] for f in fam):
                yield from rec(k + 1, fam + [k], rk(fam + [k]))

    yield from rec(0, [], 0)


def _make(S, W, indices) -> TwoStructure:
    pm = W.pos_mask
    idxs = frozenset(indices)
    return TwoStructure(idxs, _components_of(idxs, S), frozenset(i for i in idxs if pm[i]))


def find_base_two_structure(P: PositiveSystem, W: CoxeterGroup) -> TwoStructure:
    """Deterministic search for one 2-structure (largest components first)."""
    S = P.system
    if not W.has_minus_id():
        raise DomainError(f"{S.type_label}: -id is not in W")
    cands = candidate_components(S)
    for fam in _families(S, cands, full_rank_only=True):
        idx = frozenset().union(*(cands[k] for k in fam))
        ok, _ = check_condition_b(idx, W)
        if ok:
            phi = _make(S, W, idx)
            phi.epsilon = 1
            phi.transporter = W.identity
            return phi
    raise NotFoundError(f"no 2-structure found for {S.type_label}")


def enumerate_two_structures(P: PositiveSystem, W: CoxeterGroup, base: Optional[TwoStructure] = None) -> list:
    """The W-orbit of the base 2-structure, each with its sign."""
    S = P.system
    if base is None:
        base = find_base_two_structure(P, W)
    seen = {}
    for w in W.elements:
        img = frozenset(w.perm[i] for i in base.roots)
        if img not in seen:
            seen[img] = w
    out = [_make(S, W, img) for img in seen]
    for phi in out:
        ok, wit = check_condition_b(phi.roots, W)
        if not ok:
            raise NotFoundError("orbit element fails condition (b)")
    epsilon_signs(out, base, W)
    out.sort(key=lambda p: (p.epsilon < 0, sorted(p.roots)))
    # base first
    out.sort(key=lambda p: p.roots != base.roots)
    return out


def epsilon_signs(structures: list, base: TwoStructure, W: CoxeterGroup) -> dict:
    """eps(phi) = det(w) for any w with w(phi0) = phi and w(phi0+) = phi+.

    All such w are scanned; disagreement raises InconsistentSignError.
    """
    out = {}
    for phi in structures:
        dets = set()
        first = None
        for w in W.elements:
            if frozenset(w.perm[i] for i in base.positive) == phi.positive and \
                    frozenset(w.perm[i] for i in base.roots) == phi.roots:
                dets.add(w.det)
                if first is None:
                    first = w
        if not dets:
            raise NotFoundError("no transporter from the base 2-structure")
        if len(dets) > 1:
            raise InconsistentSignError(f"transporters of {sorted(phi.roots)} have both determinants")
        phi.epsilon = dets.pop()
        phi.transporter = first
        out[phi.roots] = phi.epsilon
    return out


def brute_force_two_structures(P: PositiveSystem, W: CoxeterGroup, max_positive: int = 24) -> list:
    """Every orthogonal family of allowed components passing condition (b).

    Independent of the orbit method: no rank restriction and no use of
    transitivity.  Limited to |Phi+| <= max_positive.
    """
    S = P.system
    if len(P.positive_roots) > max_positive:
        raise DomainError("brute force enumeration limited to small systems")
    cands = candidate_components(S)
    out = []
    for fam in _families(S, cands, full_rank_only=False):
        idx = frozenset().union(*(cands[k] for k in fam)) if fam else frozenset()
        ok, _ = check_condition_b(idx, W)
        if ok:
            out.append(_make(S, W, idx))
    uniq = {p.roots: p for p in out}
    return list(uniq.values())


def structure_rank(phi: TwoStructure, S) -> int:
    return rank([list(S.roots[i]) for i in phi.roots])
