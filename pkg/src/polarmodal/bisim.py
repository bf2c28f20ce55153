"""Sorted simulations, bisimulations and bounded modal equivalence.

The largest model bisimulation is computed by a pair-deletion greatest
fixpoint.  Modal equivalence at bounded depth runs a partition
refinement over the disjoint union of two models; when two points
separate, a distinguishing formula is synthesised from the refinement
witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import PreconditionError, SortError
from .frames import Sort, SortedFrame
from .semantics import ModalModel
from .syntax import MApp, MBdia, MConst, MDdia, MNot, MVar, MAnd, ModalFormula


@dataclass(frozen=True)
class SortedPairRelation:
    """A sort-respecting relation between the points of two frames."""

    pairs_a: frozenset[tuple[str, str]]
    pairs_b: frozenset[tuple[str, str]]

    def inverse(self) -> "SortedPairRelation":
        return SortedPairRelation(
            frozenset((y, x) for x, y in self.pairs_a),
            frozenset((y, x) for x, y in self.pairs_b),
        )

    def __len__(self):
        return len(self.pairs_a) + len(self.pairs_b)


def _check_sorted(f: SortedFrame, g: SortedFrame, rel: SortedPairRelation):
    for a, a2 in rel.pairs_a:
        if a not in f.points_a or a2 not in g.points_a:
            raise SortError(f"pair ({a},{a2}) is not a sort-1 pair of the frames")
    for b, b2 in rel.pairs_b:
        if b not in f.points_b or b2 not in g.points_b:
            raise SortError(f"pair ({b},{b2}) is not a sort-d pair of the frames")


def _check_compatible(f: SortedFrame, g: SortedFrame):
    if set(f.relations) != set(g.relations):
        raise PreconditionError("frames carry different relation names")
    for name in f.relations:
        if f.relations[name].sorting != g.relations[name].sorting:
            raise PreconditionError(f"relation {name} has different sortings")


def _pair_sets(rel: SortedPairRelation):
    return {Sort.ONE: rel.pairs_a, Sort.DEL: rel.pairs_b}


def is_simulation(f: SortedFrame, g: SortedFrame, rel: SortedPairRelation):
    """Check the forth clauses; returns (True, None) or (False, violation).

    A violation is (clause, pair, witness): the pair that fails, which
    clause it fails, and the unmatched incidence point or relation tuple.
    """
    _check_sorted(f, g, rel)
    _check_compatible(f, g)
    pairs = _pair_sets(rel)
    for a, a2 in rel.pairs_a:
        for b in sorted(f._succ[a]):
            if not any((b, b2) in rel.pairs_b and (a2, b2) in g.incidence
                       for b2 in g.points_b):
                return False, ("I-forth-A", (a, a2), b)
        for name, r in sorted(f.relations.items()):
            if r.sorting.output is not Sort.ONE:
                continue
            ok, witness = _match_tuples(f, g, name, a, a2, pairs)
            if not ok:
                return False, (f"{name}-forth", (a, a2), witness)
    for b, b2 in rel.pairs_b:
        for a in sorted(f._pred[b]):
            if not any((a, a2) in rel.pairs_a and (a2, b2) in g.incidence
                       for a2 in g.points_a):
                return False, ("I-forth-B", (b, b2), a)
        for name, r in sorted(f.relations.items()):
            if r.sorting.output is not Sort.DEL:
                continue
            ok, witness = _match_tuples(f, g, name, b, b2, pairs)
            if not ok:
                return False, (f"{name}-forth", (b, b2), witness)
    return True, None


def _match_tuples(f, g, name, head, head2, pairs):
    sorting = f.relations[name].sorting
    f_tuples = [t for t in f.relations[name].tuples if t[0] == head]
    g_tuples = [t for t in g.relations[name].tuples if t[0] == head2]
    for t in sorted(f_tuples):
        matched = any(
            all((w, w2) in pairs[s] for w, w2, s in zip(t[1:], t2[1:], sorting.inputs))
            for t2 in g_tuples
        )
        if not matched:
            return False, t
    return True, None


def is_bisimulation(f: SortedFrame, g: SortedFrame, rel: SortedPairRelation) -> bool:
    ok, _ = is_simulation(f, g, rel)
    if not ok:
        return False
    ok, _ = is_simulation(g, f, rel.inverse())
    return ok


def _valuations_agree(m: ModalModel, m2: ModalModel, rel: SortedPairRelation) -> bool:
    vars_all = set(m.valuation) | set(m2.valuation)
    for sort, i in vars_all:
        pairs = rel.pairs_a if sort is Sort.ONE else rel.pairs_b
        for w, w2 in pairs:
            if (w in m.var(sort, i)) != (w2 in m2.var(sort, i)):
                return False
    return True


def is_model_bisimulation(m: ModalModel, m2: ModalModel,
                          rel: SortedPairRelation) -> bool:
    """Frame bisimulation plus valuation transfer along both directions."""
    return is_bisimulation(m.frame, m2.frame, rel) and \
        _valuations_agree(m, m2, rel)


def largest_bisimulation(m: ModalModel, m2: ModalModel) -> SortedPairRelation:
    """Greatest fixpoint of pair deletion, starting from valuation agreement."""
    f, g = m.frame, m2.frame
    _check_compatible(f, g)
    vars_all = set(m.valuation) | set(m2.valuation)

    def agrees(sort, w, w2):
        return all((w in m.var(s, i)) == (w2 in m2.var(s, i))
                   for s, i in vars_all if s is sort)

    pairs_a = {(a, a2) for a in f.points_a for a2 in g.points_a
               if agrees(Sort.ONE, a, a2)}
    pairs_b = {(b, b2) for b in f.points_b for b2 in g.points_b
               if agrees(Sort.DEL, b, b2)}

    def bad_a(a, a2, pa, pb):
        # forth and back clauses of the pair, relative to the current relation
        for b in f._succ[a]:
            if not any((b, b2) in pb and (a2, b2) in g.incidence
                       for b2 in g.points_b):
                return True
        for b2 in g._succ[a2]:
            if not any((b, b2) in pb and (a, b) in f.incidence
                       for b in f.points_b):
                return True
        pairs = {Sort.ONE: pa, Sort.DEL: pb}
        inv = {s: {(y, x) for x, y in p} for s, p in pairs.items()}
        for name, r in f.relations.items():
            if r.sorting.output is not Sort.ONE:
                continue
            if not _match_tuples(f, g, name, a, a2, pairs)[0]:
                return True
            if not _match_tuples(g, f, name, a2, a, inv)[0]:
                return True
        return False

    def bad_b(b, b2, pa, pb):
        for a in f._pred[b]:
            if not any((a, a2) in pa and (a2, b2) in g.incidence
                       for a2 in g.points_a):
                return True
        for a2 in g._pred[b2]:
            if not any((a, a2) in pa and (a, b) in f.incidence
                       for a in f.points_a):
                return True
        pairs = {Sort.ONE: pa, Sort.DEL: pb}
        inv = {s: {(y, x) for x, y in p} for s, p in pairs.items()}
        for name, r in f.relations.items():
            if r.sorting.output is not Sort.DEL:
                continue
            if not _match_tuples(f, g, name, b, b2, pairs)[0]:
                return True
            if not _match_tuples(g, f, name, b2, b, inv)[0]:
                return True
        return False

    changed = True
    while changed:
        changed = False
        for a, a2 in sorted(pairs_a):
            if bad_a(a, a2, pairs_a, pairs_b):
                pairs_a.discard((a, a2))
                changed = True
        for b, b2 in sorted(pairs_b):
            if bad_b(b, b2, pairs_a, pairs_b):
                pairs_b.discard((b, b2))
                changed = True
    return SortedPairRelation(frozenset(pairs_a), frozenset(pairs_b))


# ----------------------------------------------------------------------
# Bounded modal equivalence and distinguishing formulas

class _Refinement:
    """Partition refinement over the disjoint union of two models.

    Points are tagged (model_index, point).  Level k classes identify
    points satisfying the same modal formulas of depth at most k.
    """

    def __init__(self, m: ModalModel, m2: ModalModel, depth: int):
        _check_compatible(m.frame, m2.frame)
        self.models = [m, m2]
        self.vars = sorted(set(m.valuation) | set(m2.valuation),
                           key=lambda v: (v[0].value, v[1]))
        self.points = [
            (i, p) for i, mod in enumerate(self.models)
            for p in sorted(mod.frame.points_a | mod.frame.points_b)
        ]
        self.levels: list[dict] = []
        self._refine(depth)

    def sort_of(self, tagged):
        i, p = tagged
        return self.models[i].frame.sort_of(p)

    def _profile(self, tagged):
        i, p = tagged
        mod = self.models[i]
        sort = mod.frame.sort_of(p)
        return (sort.value,
                tuple(p in mod.var(s, j) for s, j in self.vars if s is sort))

    def _signature(self, tagged, cls):
        i, p = tagged
        mod = self.models[i]
        frame = mod.frame
        sort = frame.sort_of(p)
        if sort is Sort.ONE:
            nbrs = frozenset(cls[(i, b)] for b in frame._succ[p])
        else:
            nbrs = frozenset(cls[(i, a)] for a in frame._pred[p])
        rel_sigs = []
        for name in sorted(frame.relations):
            r = frame.relations[name]
            if r.sorting.output is not sort:
                continue
            vecs = frozenset(
                tuple(cls[(i, w)] for w in t[1:])
                for t in r.tuples if t[0] == p
            )
            rel_sigs.append((name, vecs))
        return (cls[tagged], nbrs, tuple(rel_sigs))

    def _refine(self, depth: int):
        keys = {p: self._profile(p) for p in self.points}
        ids = {k: n for n, k in enumerate(sorted(set(keys.values())))}
        cls = {p: ids[keys[p]] for p in self.points}
        self.levels.append(cls)
        for _ in range(depth):
            prev = self.levels[-1]
            keys = {p: self._signature(p, prev) for p in self.points}
            ids = {k: n for n, k in enumerate(sorted(set(keys.values()),
                                                     key=repr))}
            cls = {p: ids[keys[p]] for p in self.points}
            self.levels.append(cls)

    def equivalent(self, x, y, k) -> bool:
        return self.levels[k][x] == self.levels[k][y]

    def first_difference(self, x, y, k) -> int | None:
        for j in range(k + 1):
            if self.levels[j][x] != self.levels[j][y]:
                return j
        return None

    # ------------------------------------------------------------------

    def characteristic(self, x, d: int) -> ModalFormula:
        """A depth-d formula true exactly on x's level-d class."""
        sort = self.sort_of(x)
        conjuncts = [
            self.distinguish(x, q, d)
            for q in self.points
            if self.sort_of(q) is sort and not self.equivalent(x, q, d)
        ]
        if not conjuncts:
            return MConst(sort, True)
        out = conjuncts[0]
        for c in conjuncts[1:]:
            out = MAnd(out, c)
        return out

    def distinguish(self, x, y, k: int) -> ModalFormula:
        """A depth <= k formula true at x and false at y (same sort)."""
        j = self.first_difference(x, y, k)
        if j is None:
            raise PreconditionError("points are equivalent at this depth")
        if j == 0:
            i, p = x
            i2, p2 = y
            sort = self.sort_of(x)
            for s, idx in self.vars:
                if s is not sort:
                    continue
                in_x = p in self.models[i].var(s, idx)
                in_y = p2 in self.models[i2].var(s, idx)
                if in_x and not in_y:
                    return MVar(s, idx)
                if in_y and not in_x:
                    return MNot(MVar(s, idx))
            raise PreconditionError("profiles differ without a witness variable")
        prev = self.levels[j - 1]
        sort = self.sort_of(x)
        dia = MBdia if sort is Sort.ONE else MDdia
        nbr_x = self._neighbour_classes(x, prev)
        nbr_y = self._neighbour_classes(y, prev)
        for c in sorted(nbr_x - nbr_y):
            witness = self._neighbour_in_class(x, prev, c)
            return dia(self.characteristic(witness, j - 1))
        for c in sorted(nbr_y - nbr_x):
            witness = self._neighbour_in_class(y, prev, c)
            return MNot(dia(self.characteristic(witness, j - 1)))
        frame = self.models[x[0]].frame
        for name in sorted(frame.relations):
            r = frame.relations[name]
            if r.sorting.output is not sort:
                continue
            vec_x = self._tuple_vectors(x, name, prev)
            vec_y = self._tuple_vectors(y, name, prev)
            for vec, tup in sorted(vec_x.items()):
                if vec not in vec_y:
                    args = tuple(self.characteristic((x[0], w), j - 1)
                                 for w in tup)
                    return MApp(name, sort, args)
            for vec, tup in sorted(vec_y.items()):
                if vec not in vec_x:
                    args = tuple(self.characteristic((y[0], w), j - 1)
                                 for w in tup)
                    return MNot(MApp(name, sort, args))
        raise PreconditionError("signatures differ without a modal witness")

    def _neighbour_classes(self, tagged, cls):
        i, p = tagged
        frame = self.models[i].frame
        sort = frame.sort_of(p)
        nbrs = frame._succ[p] if sort is Sort.ONE else frame._pred[p]
        return frozenset(cls[(i, q)] for q in nbrs)

    def _neighbour_in_class(self, tagged, cls, c):
        i, p = tagged
        frame = self.models[i].frame
        sort = frame.sort_of(p)
        nbrs = frame._succ[p] if sort is Sort.ONE else frame._pred[p]
        for q in sorted(nbrs):
            if cls[(i, q)] == c:
                return (i, q)
        raise PreconditionError("class has no neighbour witness")

    def _tuple_vectors(self, tagged, name, cls):
        i, p = tagged
        r = self.models[i].frame.relations[name]
        out = {}
        for t in sorted(r.tuples):
            if t[0] == p:
                vec = tuple(cls[(i, w)] for w in t[1:])
                out.setdefault(vec, t[1:])
        return out


def modal_equiv(m: ModalModel, w: str, m2: ModalModel, w2: str, depth: int):
    """Agreement on all modal formulas of depth <= depth.

    Returns (True, None), or (False, theta) with theta satisfied at w
    and refuted at w2.
    """
    if depth < 0:
        raise PreconditionError("depth must be >= 0")
    if m.frame.sort_of(w) is not m2.frame.sort_of(w2):
        raise SortError("points must have the same sort")
    ref = _Refinement(m, m2, depth)
    x, y = (0, w), (1, w2)
    if ref.equivalent(x, y, depth):
        return True, None
    return False, ref.distinguish(x, y, depth)


def equivalence_depth_bound(m: ModalModel, m2: ModalModel) -> int:
    f, g = m.frame, m2.frame
    return (len(f.points_a) * len(g.points_a)
            + len(f.points_b) * len(g.points_b))


def all_bisimulations_union(m: ModalModel, m2: ModalModel) -> SortedPairRelation:
    """Union of all model bisimulations by exhaustive relation enumeration.

    Exponential in the number of point pairs; an oracle for tiny models.
    """
    f, g = m.frame, m2.frame
    cand_a = sorted((a, a2) for a in f.points_a for a2 in g.points_a)
    cand_b = sorted((b, b2) for b in f.points_b for b2 in g.points_b)
    union_a, union_b = set(), set()
    for mask_a in itertools.product([False, True], repeat=len(cand_a)):
        pa = frozenset(p for p, keep in zip(cand_a, mask_a) if keep)
        for mask_b in itertools.product([False, True], repeat=len(cand_b)):
            pb = frozenset(p for p, keep in zip(cand_b, mask_b) if keep)
            rel = SortedPairRelation(pa, pb)
            if is_model_bisimulation(m, m2, rel):
                union_a |= pa
                union_b |= pb
    return SortedPairRelation(frozenset(union_a), frozenset(union_b))
