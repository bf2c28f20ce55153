"""Two-sorted polarity frames and their Galois machinery.

A frame carries two disjoint point sets A (sort 1) and B (sort d), an
incidence relation I between them, and finitely many sorted relations.
The Galois connection is generated by the complement of I; stable sets,
formal concepts, relation-induced operators and canonical frames of
finite lattice expansions are all computed here.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import NormalityError, PreconditionError, SortError

PointSet = frozenset


class Sort(Enum):
    ONE = "1"
    DEL = "d"

    @property
    def opposite(self) -> "Sort":
        return Sort.DEL if self is Sort.ONE else Sort.ONE

    def __str__(self):
        return self.value

    @staticmethod
    def parse(text: str) -> "Sort":
        if text == "1":
            return Sort.ONE
        if text in ("d", "D"):
            return Sort.DEL
        raise SortError(f"unknown sort {text!r} (expected '1' or 'd')")


@dataclass(frozen=True)
class SortingType:
    """Sorting of a frame relation: output sort, then input sorts."""

    output: Sort
    inputs: tuple[Sort, ...]

    def __post_init__(self):
        if len(self.inputs) < 1:
            raise SortError("sorting type needs at least one input sort")

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def __str__(self):
        return f"{self.output};{''.join(str(s) for s in self.inputs)}"

    @staticmethod
    def parse(text: str) -> "SortingType":
        try:
            out, ins = text.split(";")
        except ValueError:
            raise SortError(f"bad sorting type {text!r}, expected '<out>;<inputs>'")
        return SortingType(Sort.parse(out), tuple(Sort.parse(c) for c in ins))


@dataclass(frozen=True)
class DistributionType:
    """Input/output polarities of a lattice operator."""

    inputs: tuple[Sort, ...]
    output: Sort

    def __post_init__(self):
        if len(self.inputs) < 1:
            raise SortError("distribution type needs n >= 1 inputs")

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def sorting(self) -> SortingType:
        return SortingType(self.output, self.inputs)

    def __str__(self):
        return ",".join(str(s) for s in self.inputs) + "->" + str(self.output)

    @staticmethod
    def parse(text: str) -> "DistributionType":
        try:
            ins, out = text.split("->")
        except ValueError:
            raise SortError(f"bad distribution type {text!r}, expected 'i1,..,in->o'")
        return DistributionType(
            tuple(Sort.parse(c) for c in ins.split(",")), Sort.parse(out)
        )


@dataclass(frozen=True)
class SortedRelation:
    name: str
    sorting: SortingType
    tuples: frozenset[tuple[str, ...]]


@dataclass(frozen=True)
class Concept:
    """A formal concept: extent and intent determine each other."""

    extent: frozenset[str]
    intent: frozenset[str]


class SortedFrame:
    """Finite two-sorted frame (A, I, B, relations).

    The frame stores the incidence relation I; the Galois relation is
    always its complement.  Both sorts must be non-empty and disjoint.
    Instances are immutable after construction.
    """

    def __init__(
        self,
        points_a: Iterable[str],
        points_b: Iterable[str],
        incidence: Iterable[tuple[str, str]],
        relations: Mapping[str, SortedRelation] | None = None,
    ):
        self.points_a = frozenset(points_a)
        self.points_b = frozenset(points_b)
        self.incidence = frozenset(incidence)
        self.relations = dict(relations or {})
        if not self.points_a or not self.points_b:
            raise SortError("both sorts must be non-empty")
        if self.points_a & self.points_b:
            raise SortError("point sets of the two sorts must be disjoint")
        for a, b in self.incidence:
            if a not in self.points_a or b not in self.points_b:
                raise SortError(f"incidence pair ({a},{b}) is not in A x B")
        for name, rel in self.relations.items():
            if rel.name != name:
                raise SortError(f"relation {name} registered under wrong key")
            self._check_relation(rel)
        # successor/predecessor maps for I, used constantly
        self._succ = {a: frozenset(b for x, b in self.incidence if x == a)
                      for a in self.points_a}
        self._pred = {b: frozenset(a for a, y in self.incidence if y == b)
                      for b in self.points_b}

    def _check_relation(self, rel: SortedRelation):
        for tup in rel.tuples:
            if len(tup) != rel.sorting.arity + 1:
                raise SortError(f"relation {rel.name}: tuple {tup} has wrong arity")
            if tup[0] not in self.carrier(rel.sorting.output):
                raise SortError(f"relation {rel.name}: head {tup[0]} ill-sorted")
            for w, s in zip(tup[1:], rel.sorting.inputs):
                if w not in self.carrier(s):
                    raise SortError(f"relation {rel.name}: argument {w} ill-sorted")

    def carrier(self, sort: Sort) -> frozenset[str]:
        return self.points_a if sort is Sort.ONE else self.points_b

    def sort_of(self, point: str) -> Sort:
        if point in self.points_a:
            return Sort.ONE
        if point in self.points_b:
            return Sort.DEL
        raise SortError(f"point {point!r} is not in the frame")

    # ------------------------------------------------------------------
    # Galois connection (over the complement of I)

    def polarity(self, a: str, b: str) -> bool:
        """The Galois relation: true iff (a, b) is not an incidence pair."""
        if a not in self.points_a:
            raise SortError(f"{a!r} is not a sort-1 point")
        if b not in self.points_b:
            raise SortError(f"{b!r} is not a sort-d point")
        return (a, b) not in self.incidence

    def galois_right(self, u: Iterable[str]) -> frozenset[str]:
        """U |-> {b | a polar b for all a in U}."""
        u = self._check_subset(u, Sort.ONE)
        return frozenset(
            b for b in self.points_b if all((a, b) not in self.incidence for a in u)
        )

    def galois_left(self, v: Iterable[str]) -> frozenset[str]:
        """V |-> {a | a polar b for all b in V}."""
        v = self._check_subset(v, Sort.DEL)
        return frozenset(
            a for a in self.points_a if all((a, b) not in self.incidence for b in v)
        )

    def galois(self, side: str, s: Iterable[str]) -> frozenset[str]:
        if side == "right":
            return self.galois_right(s)
        if side == "left":
            return self.galois_left(s)
        raise PreconditionError(f"unknown Galois side {side!r}")

    def closure(self, sort: Sort, s: Iterable[str]) -> frozenset[str]:
        """Galois closure on the given sort."""
        if sort is Sort.ONE:
            return self.galois_left(self.galois_right(s))
        return self.galois_right(self.galois_left(s))

    def is_stable(self, sort: Sort, s: Iterable[str]) -> bool:
        s = frozenset(s)
        return self.closure(sort, s) == s

    def _check_subset(self, s: Iterable[str], sort: Sort) -> frozenset[str]:
        s = frozenset(s)
        extra = s - self.carrier(sort)
        if extra:
            raise SortError(f"points {sorted(extra)} are not of sort {sort}")
        return s

    # ------------------------------------------------------------------
    # Residuated operators generated by I

    def dia_ab(self, u: Iterable[str]) -> frozenset[str]:
        """{b | some a in U with aIb}; left half of the residuated pair."""
        u = self._check_subset(u, Sort.ONE)
        return frozenset(b for b in self.points_b if self._pred[b] & u)

    def box_ba(self, v: Iterable[str]) -> frozenset[str]:
        """{a | every I-successor of a lies in V}; right half of the pair."""
        v = self._check_subset(v, Sort.DEL)
        return frozenset(a for a in self.points_a if self._succ[a] <= v)

    def box_ab(self, u: Iterable[str]) -> frozenset[str]:
        """Complement-conjugate of dia_ab: {b | every I-predecessor is in U}."""
        u = self._check_subset(u, Sort.ONE)
        return frozenset(b for b in self.points_b if self._pred[b] <= u)

    def dia_ba(self, v: Iterable[str]) -> frozenset[str]:
        """Complement-conjugate of box_ba: {a | some I-successor is in V}."""
        v = self._check_subset(v, Sort.DEL)
        return frozenset(a for a in self.points_a if self._succ[a] & v)

    def residop(self, kind: str, s: Iterable[str]) -> frozenset[str]:
        try:
            return {
                "diaAB": self.dia_ab,
                "boxBA": self.box_ba,
                "boxAB": self.box_ab,
                "diaBA": self.dia_ba,
            }[kind](s)
        except KeyError:
            raise PreconditionError(f"unknown residuated operator kind {kind!r}")

    def check_seriality(self) -> bool:
        return all(self._succ[a] for a in self.points_a) and all(
            self._pred[b] for b in self.points_b
        )

    # ------------------------------------------------------------------
    # Relation-induced operators

    def relation(self, name: str) -> SortedRelation:
        try:
            return self.relations[name]
        except KeyError:
            raise PreconditionError(f"no relation named {name!r} in frame")

    def image_op(self, name: str, args: Sequence[Iterable[str]]) -> frozenset[str]:
        """Existential image operator of the named relation."""
        rel = self.relation(name)
        if len(args) != rel.sorting.arity:
            raise SortError(f"relation {name} expects {rel.sorting.arity} arguments")
        sets = [self._check_subset(w, s) for w, s in zip(args, rel.sorting.inputs)]
        out = set()
        for tup in rel.tuples:
            if all(w in ws for w, ws in zip(tup[1:], sets)):
                out.add(tup[0])
        return frozenset(out)

    def section(self, name: str, args: tuple[str, ...]) -> frozenset[str]:
        """Heads of the relation at a fixed argument tuple."""
        rel = self.relation(name)
        if len(args) != rel.sorting.arity:
            raise SortError(f"relation {name} expects {rel.sorting.arity} arguments")
        return frozenset(t[0] for t in rel.tuples if t[1:] == tuple(args))

    def galois_dual(self, name: str, args: tuple[str, ...]) -> frozenset[str]:
        """Galois image of the section at `args` (opposite sort of the output)."""
        rel = self.relation(name)
        sec = self.section(name, args)
        if rel.sorting.output is Sort.ONE:
            return self.galois_right(sec)
        return self.galois_left(sec)

    def _arg_tuples(self, sorting: SortingType):
        return itertools.product(*(sorted(self.carrier(s)) for s in sorting.inputs))

    def is_section_stable(self, name: str):
        """Check that every section of the Galois dual relation is closed.

        Returns (True, None) or (False, (position, fixed_tuple)); position 0
        is the head place of the dual relation.
        """
        rel = self.relation(name)
        dual_sort = rel.sorting.output.opposite
        dual = {args: self.galois_dual(name, tuple(args))
                for args in self._arg_tuples(rel.sorting)}
        # head sections are Galois images, closed by construction; checked anyway
        for args, sec in dual.items():
            if not self.is_stable(dual_sort, sec):
                return False, (0, tuple(args))
        for j, s in enumerate(rel.sorting.inputs):
            others = [sorted(self.carrier(t)) for i, t in enumerate(rel.sorting.inputs)
                      if i != j]
            for head in sorted(self.carrier(dual_sort)):
                for rest in itertools.product(*others):
                    sec = frozenset(
                        w for w in self.carrier(s)
                        if head in dual[rest[:j] + (w,) + rest[j:]]
                    )
                    if not self.is_stable(s, sec):
                        fixed = (head,) + rest[:j] + ("_",) + rest[j:]
                        return False, (j + 1, fixed)
        return True, None

    def closed_op(self, name: str, args: Sequence[Iterable[str]],
                  mode: str = "sorted") -> frozenset[str]:
        """Galois closure of the image operator, in one of three modes.

        sorted:     argument j must be stable when the relation's input sort
                    j is 1 and co-stable when it is d; the result is the
                    closure of the image on the output sort.
        firstSort:  all arguments are stable subsets of A; d-coordinates are
                    replaced by their right Galois image before taking the
                    image, and a d-sorted output is pulled back to a stable
                    set; the result is always a stable subset of A.
        secondSort: dually, everything lives on B.
        """
        rel = self.relation(name)
        if len(args) != rel.sorting.arity:
            raise SortError(f"relation {name} expects {rel.sorting.arity} arguments")
        if mode == "sorted":
            sets = []
            for j, (w, s) in enumerate(zip(args, rel.sorting.inputs)):
                w = self._check_subset(w, s)
                if not self.is_stable(s, w):
                    kind = "stable" if s is Sort.ONE else "co-stable"
                    raise PreconditionError(
                        f"argument {j} of {name} must be a {kind} set in sorted mode"
                    )
                sets.append(w)
            return self.closure(rel.sorting.output, self.image_op(name, sets))
        if mode == "firstSort":
            sets = []
            for j, (w, s) in enumerate(zip(args, rel.sorting.inputs)):
                w = self._check_subset(w, Sort.ONE)
                if not self.is_stable(Sort.ONE, w):
                    raise PreconditionError(
                        f"argument {j} of {name} must be stable in firstSort mode"
                    )
                sets.append(w if s is Sort.ONE else self.galois_right(w))
            res = self.closure(rel.sorting.output, self.image_op(name, sets))
            if rel.sorting.output is Sort.DEL:
                res = self.galois_left(res)
            return res
        if mode == "secondSort":
            sets = []
            for j, (w, s) in enumerate(zip(args, rel.sorting.inputs)):
                w = self._check_subset(w, Sort.DEL)
                if not self.is_stable(Sort.DEL, w):
                    raise PreconditionError(
                        f"argument {j} of {name} must be co-stable in secondSort mode"
                    )
                sets.append(self.galois_left(w) if s is Sort.ONE else w)
            res = self.closure(rel.sorting.output, self.image_op(name, sets))
            if rel.sorting.output is Sort.ONE:
                res = self.galois_right(res)
            return res
        raise PreconditionError(f"unknown closed_op mode {mode!r}")

    # ------------------------------------------------------------------
    # Concepts

    def stable_sets(self) -> list[frozenset[str]]:
        """All Galois-stable subsets of A.

        Every stable set is an intersection of single-attribute extents,
        so the closure system is generated by those plus A itself.
        """
        gens = {self.galois_left(frozenset([b])) for b in self.points_b}
        gens.add(self.points_a)
        stable = set(gens)
        frontier = set(gens)
        while frontier:
            new = set()
            for x in frontier:
                for y in gens:
                    z = x & y
                    if z not in stable:
                        new.add(z)
            stable |= new
            frontier = new
        return sorted(stable, key=lambda s: (len(s), sorted(s)))

    def costable_sets(self) -> list[frozenset[str]]:
        gens = {self.galois_right(frozenset([a])) for a in self.points_a}
        gens.add(self.points_b)
        stable = set(gens)
        frontier = set(gens)
        while frontier:
            new = set()
            for x in frontier:
                for y in gens:
                    z = x & y
                    if z not in stable:
                        new.add(z)
            stable |= new
            frontier = new
        return sorted(stable, key=lambda s: (len(s), sorted(s)))

    def all_concepts(self) -> "FiniteLattice":
        """The concept lattice, ordered by extent inclusion."""
        concepts = frozenset(
            Concept(c, self.galois_right(c)) for c in self.stable_sets()
        )
        leq = frozenset(
            (x, y) for x in concepts for y in concepts if x.extent <= y.extent
        )
        return FiniteLattice(concepts, leq)


class FiniteLattice:
    """A finite bounded lattice given by its order relation.

    Meet and join tables are computed (and their existence verified) at
    construction time.
    """

    def __init__(self, carrier: Iterable, leq: Iterable[tuple]):
        self.carrier = frozenset(carrier)
        self.leq_pairs = frozenset(leq)
        if not self.carrier:
            raise PreconditionError("lattice carrier must be non-empty")
        self._validate_order()
        self._meet = {}
        self._join = {}
        self._build_tables()
        bottoms = [x for x in self.carrier if all(self.leq(x, y) for y in self.carrier)]
        tops = [x for x in self.carrier if all(self.leq(y, x) for y in self.carrier)]
        self.bottom = bottoms[0]
        self.top = tops[0]

    def _validate_order(self):
        for x, y in self.leq_pairs:
            if x not in self.carrier or y not in self.carrier:
                raise PreconditionError(f"leq pair ({x},{y}) outside carrier")
        for x in self.carrier:
            if not self.leq(x, x):
                raise PreconditionError(f"order not reflexive at {x}")
        for x, y in self.leq_pairs:
            if x != y and self.leq(y, x):
                raise PreconditionError(f"order not antisymmetric on {x},{y}")
            for z in self.carrier:
                if self.leq(y, z) and not self.leq(x, z):
                    raise PreconditionError(f"order not transitive on {x},{y},{z}")

    def _build_tables(self):
        elems = sorted(self.carrier, key=repr)
        for x in elems:
            for y in elems:
                lower = [z for z in elems if self.leq(z, x) and self.leq(z, y)]
                glb = [z for z in lower if all(self.leq(w, z) for w in lower)]
                upper = [z for z in elems if self.leq(x, z) and self.leq(y, z)]
                lub = [z for z in upper if all(self.leq(z, w) for w in upper)]
                if len(glb) != 1 or len(lub) != 1:
                    raise PreconditionError(f"no meet/join for {x},{y}: not a lattice")
                self._meet[(x, y)] = glb[0]
                self._join[(x, y)] = lub[0]

    def leq(self, x, y) -> bool:
        return (x, y) in self.leq_pairs

    def meet(self, x, y):
        return self._meet[(x, y)]

    def join(self, x, y):
        return self._join[(x, y)]

    def join_all(self, xs: Iterable):
        out = self.bottom
        for x in xs:
            out = self.join(out, x)
        return out

    def meet_all(self, xs: Iterable):
        out = self.top
        for x in xs:
            out = self.meet(out, x)
        return out

    def downset(self, x) -> frozenset:
        return frozenset(y for y in self.carrier if self.leq(y, x))

    def upset(self, x) -> frozenset:
        return frozenset(y for y in self.carrier if self.leq(x, y))

    # sorted views: sort d is the opposite order
    def sorted_leq(self, sort: Sort, x, y) -> bool:
        return self.leq(x, y) if sort is Sort.ONE else self.leq(y, x)

    def sorted_join(self, sort: Sort, x, y):
        return self.join(x, y) if sort is Sort.ONE else self.meet(x, y)

    def sorted_bottom(self, sort: Sort):
        return self.bottom if sort is Sort.ONE else self.top

    def is_isomorphic_by(self, other: "FiniteLattice", mapping: Mapping) -> bool:
        """Check that `mapping` is an order bijection onto `other`."""
        if set(mapping.keys()) != set(self.carrier):
            return False
        if set(mapping.values()) != set(other.carrier):
            return False
        if len(set(mapping.values())) != len(self.carrier):
            return False
        return all(
            self.leq(x, y) == other.leq(mapping[x], mapping[y])
            for x in self.carrier
            for y in self.carrier
        )


@dataclass
class FiniteLatticeExpansion:
    """A finite lattice with normal operators tagged by distribution types.

    Operator tables map argument tuples (of lattice elements) to lattice
    elements.  Normality, including preservation of the empty join in
    every coordinate, is verified at construction.
    """

    lattice: FiniteLattice
    operators: dict[str, tuple[DistributionType, dict[tuple, object]]] = field(
        default_factory=dict
    )

    def __post_init__(self):
        for name, (dist, table) in self.operators.items():
            self._check_normal(name, dist, table)

    def _check_normal(self, name, dist, table):
        lat = self.lattice
        elems = sorted(lat.carrier, key=repr)
        for args in itertools.product(elems, repeat=dist.arity):
            if args not in table:
                raise NormalityError(
                    f"operator {name}: table missing entry {args}", operator=name
                )
        for j, s in enumerate(dist.inputs):
            for args in itertools.product(elems, repeat=dist.arity):
                # empty join of the j-th sorted coordinate
                zero = lat.sorted_bottom(s)
                at_zero = table[args[:j] + (zero,) + args[j + 1:]]
                if at_zero != lat.sorted_bottom(dist.output):
                    raise NormalityError(
                        f"operator {name} does not preserve the sorted bottom "
                        f"in coordinate {j}",
                        operator=name, coordinate=j,
                        witness=args[:j] + (zero,) + args[j + 1:],
                    )
                for x in elems:
                    for y in elems:
                        joined = lat.sorted_join(s, x, y)
                        lhs = table[args[:j] + (joined,) + args[j + 1:]]
                        rhs = lat.sorted_join(
                            dist.output,
                            table[args[:j] + (x,) + args[j + 1:]],
                            table[args[:j] + (y,) + args[j + 1:]],
                        )
                        if lhs != rhs:
                            raise NormalityError(
                                f"operator {name} fails join distribution "
                                f"in coordinate {j}",
                                operator=name, coordinate=j,
                                witness=(args, x, y),
                            )

    def apply(self, name: str, args: tuple):
        dist, table = self.operators[name]
        return table[tuple(args)]


B_SUFFIX = "*"


def canonical_frame(exp: FiniteLatticeExpansion, b_suffix: str = B_SUFFIX) -> SortedFrame:
    """Canonical frame of a finite lattice expansion.

    Both sorts are copies of the carrier (sort-d points carry a name
    suffix), the Galois relation is the lattice order, so the incidence
    relation is its complement.  Each operator phi contributes one
    relation: for output sort 1, u R w1..wn iff u <= phi(w),
    for output sort d, v S w1..wn iff phi(w) <= v.
    """
    lat = exp.lattice
    elems = sorted(lat.carrier, key=str)
    for x in elems:
        if not isinstance(x, str):
            raise PreconditionError("canonical_frame needs string-named elements")
    a_points = list(elems)
    b_points = [x + b_suffix for x in elems]
    incidence = [
        (x, y + b_suffix) for x in elems for y in elems if not lat.leq(x, y)
    ]
    relations = {}
    for name, (dist, table) in exp.operators.items():
        sorting = dist.sorting()

        def point(elem, sort):
            return elem if sort is Sort.ONE else elem + b_suffix

        tuples = set()
        for args in itertools.product(elems, repeat=dist.arity):
            val = table[args]
            for u in elems:
                holds = lat.leq(u, val) if dist.output is Sort.ONE else lat.leq(val, u)
                if holds:
                    head = point(u, dist.output)
                    tuples.add(
                        (head,) + tuple(point(w, s) for w, s in zip(args, dist.inputs))
                    )
        relations[name] = SortedRelation(name, sorting, frozenset(tuples))
    return SortedFrame(a_points, b_points, incidence, relations)


def canonical_relation_oracle(exp: FiniteLatticeExpansion, name: str,
                              b_suffix: str = B_SUFFIX) -> SortedRelation:
    """The canonical relation computed from the filter/ideal condition.

    Points of sort 1 stand for principal filters, points of sort d for
    principal ideals.  The relation condition quantifies over all members
    of the argument filters/ideals verbatim:
    u R w1..wn iff for all a1..an, (every aj in wj) implies phi(a) in u.
    Used as an independent cross-check of `canonical_frame`.
    """
    lat = exp.lattice
    dist, table = exp.operators[name]
    elems = sorted(lat.carrier, key=str)

    def members(gen, sort):
        # principal filter of the generator on sort 1, principal ideal on d
        return lat.upset(gen) if sort is Sort.ONE else lat.downset(gen)

    def point(elem, sort):
        return elem if sort is Sort.ONE else elem + b_suffix

    tuples = set()
    for args in itertools.product(elems, repeat=dist.arity):
        arg_members = [members(w, s) for w, s in zip(args, dist.inputs)]
        for u in elems:
            target = members(u, dist.output)
            if all(
                table[a] in target
                for a in itertools.product(*arg_members)
            ):
                tuples.add(
                    (point(u, dist.output),)
                    + tuple(point(w, s) for w, s in zip(args, dist.inputs))
                )
    return SortedRelation(name, dist.sorting(), frozenset(tuples))


# ----------------------------------------------------------------------
# Random generation

def random_frame(size_a: int, size_b: int,
                 signature: Mapping[str, SortingType] | None = None,
                 density: float = 0.5, seed: int = 0) -> SortedFrame:
    """Deterministic random frame; well-sorted by construction."""
    if size_a < 1 or size_b < 1:
        raise PreconditionError("sort sizes must be at least 1")
    if not 0.0 <= density <= 1.0:
        raise PreconditionError("density must lie in [0, 1]")
    rng = random.Random(seed)
    points_a = [f"a{i}" for i in range(size_a)]
    points_b = [f"b{i}" for i in range(size_b)]
    incidence = [
        (a, b) for a in points_a for b in points_b if rng.random() < density
    ]
    carrier = {Sort.ONE: points_a, Sort.DEL: points_b}
    relations = {}
    for name, sorting in (signature or {}).items():
        tuples = set()
        for head in carrier[sorting.output]:
            for args in itertools.product(*(carrier[s] for s in sorting.inputs)):
                if rng.random() < density:
                    tuples.add((head,) + args)
        relations[name] = SortedRelation(name, sorting, frozenset(tuples))
    return SortedFrame(points_a, points_b, incidence, relations)
