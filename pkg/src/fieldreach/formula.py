"""Propositional formulas over field propositions, stored as model sets.

A formula's models are the field sets a heap path may traverse.  Models are
bit masks over an indexed universe of field names, kept in a frozenset, so
all connectives are bitwise set operations.  The contradiction is the empty
model set; the tautology is kept as a lazy flag rather than as 2^n explicit
masks, and every operation special-cases it.

Two formulas are equal as analysis facts when they have the same *viable*
models: assignments no heap admitted by the class declarations can realize
carry no information, and ``Viability`` decides realizability.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Iterator, Optional

from .classtable import ClassTable

ANY_FIELD = "any"


@dataclass(frozen=True)
class FieldUniverse:
    fields: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {f: i for i, f in enumerate(self.fields)})
        if len(self._index) != len(self.fields):
            raise ValueError("duplicate field in universe")

    @staticmethod
    def of(fields: Iterable[str]) -> "FieldUniverse":
        return FieldUniverse(tuple(sorted(set(fields))))

    @staticmethod
    def tracked(all_fields: Iterable[str], tracked: Iterable[str]) -> "FieldUniverse":
        """Universe for field abstraction: the tracked fields plus a stand-in
        for everything untracked.  If all fields are tracked, no stand-in."""
        all_set = set(all_fields)
        tracked_set = set(tracked)
        unknown = tracked_set - all_set
        if unknown:
            raise ValueError(f"unknown tracked fields: {sorted(unknown)}")
        if tracked_set == all_set:
            return FieldUniverse.of(all_set)
        return FieldUniverse(tuple(sorted(tracked_set)) + (ANY_FIELD,))

    @property
    def size(self) -> int:
        return len(self.fields)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.fields)) - 1

    @property
    def has_any(self) -> bool:
        return ANY_FIELD in self._index

    @property
    def any_bit(self) -> int:
        return 1 << self._index[ANY_FIELD]

    @property
    def concrete_fields(self) -> tuple[str, ...]:
        return tuple(f for f in self.fields if f != ANY_FIELD)

    def bit(self, name: str) -> int:
        return 1 << self._index[name]

    def mask_of(self, names: Iterable[str]) -> int:
        m = 0
        for n in names:
            m |= 1 << self._index[n]
        return m

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(f for i, f in enumerate(self.fields) if mask & (1 << i))

    def all_masks(self) -> range:
        return range(1 << len(self.fields))

    def abstract_mask(self, names: Iterable[str]) -> int:
        """Mask of a concrete field set, folding untracked fields into the
        stand-in bit."""
        m = 0
        for n in names:
            if n in self._index:
                m |= 1 << self._index[n]
            elif self.has_any:
                m |= self.any_bit
            else:
                raise KeyError(n)
        return m


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and the mask itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def up_closure(models: frozenset[int], full_mask: int) -> frozenset[int]:
    out = set(models)
    work = list(models)
    while work:
        m = work.pop()
        rest = full_mask & ~m
        while rest:
            bit = rest & -rest
            rest ^= bit
            m2 = m | bit
            if m2 not in out:
                out.add(m2)
                work.append(m2)
    return frozenset(out)


def down_closure(models: frozenset[int]) -> frozenset[int]:
    out: set[int] = set()
    for m in models:
        out.update(submasks(m))
    return frozenset(out)


@dataclass(frozen=True)
class PathFormula:
    universe: FieldUniverse
    models: Optional[frozenset[int]]  # None encodes the tautology

    def __post_init__(self):
        # keep the tautology in its canonical lazy shape
        if self.models is not None and len(self.models) == (1 << self.universe.size):
            object.__setattr__(self, "models", None)

    # -- constructors

    @staticmethod
    def from_models(universe: FieldUniverse, masks: Iterable[int]) -> "PathFormula":
        ms = frozenset(masks)
        if len(ms) == (1 << universe.size):
            return PathFormula(universe, None)
        for m in ms:
            if m & ~universe.full_mask:
                raise ValueError("model outside the universe")
        return PathFormula(universe, ms)

    @staticmethod
    def false(universe: FieldUniverse) -> "PathFormula":
        return PathFormula(universe, frozenset())

    @staticmethod
    def true(universe: FieldUniverse) -> "PathFormula":
        return PathFormula(universe, None)

    @staticmethod
    def only(universe: FieldUniverse, fields: Iterable[str]) -> "PathFormula":
        """The formula whose single model is exactly this field set."""
        return PathFormula.from_models(universe, [universe.mask_of(fields)])

    @staticmethod
    def of_sets(universe: FieldUniverse, sets: Iterable[Iterable[str]]) -> "PathFormula":
        return PathFormula.from_models(universe, [universe.mask_of(s) for s in sets])

    # -- inspection

    @property
    def is_true(self) -> bool:
        return self.models is None

    @property
    def is_false(self) -> bool:
        return self.models is not None and not self.models

    def model_masks(self) -> frozenset[int]:
        if self.models is None:
            return frozenset(self.universe.all_masks())
        return self.models

    def model_sets(self) -> tuple[tuple[str, ...], ...]:
        masks = sorted(self.model_masks(), key=lambda m: (bin(m).count("1"), m))
        return tuple(self.universe.names_of(m) for m in masks)

    def has_model(self, mask: int) -> bool:
        return self.models is None or mask in self.models

    def has_model_named(self, names: Iterable[str]) -> bool:
        return self.has_model(self.universe.mask_of(names))

    # -- lattice structure (pointwise on model sets)

    def _check(self, other: "PathFormula") -> None:
        if self.universe != other.universe:
            raise ValueError("formulas over different universes")

    def join(self, other: "PathFormula") -> "PathFormula":
        self._check(other)
        if self.is_true or other.is_true:
            return PathFormula.true(self.universe)
        return PathFormula.from_models(self.universe, self.models | other.models)

    def meet(self, other: "PathFormula") -> "PathFormula":
        self._check(other)
        if self.is_true:
            return other
        if other.is_true:
            return self
        return PathFormula.from_models(self.universe, self.models & other.models)

    def leq(self, other: "PathFormula", via: "Viability | None" = None) -> bool:
        """Implication on viable models."""
        self._check(other)
        if other.is_true:
            return True
        for m in self._viable_masks(via):
            if not other.has_model(m):
                return False
        return True

    def equiv(self, other: "PathFormula", via: "Viability | None" = None) -> bool:
        return self.leq(other, via) and other.leq(self, via)

    def _viable_masks(self, via: "Viability | None") -> Iterator[int]:
        masks = self.universe.all_masks() if self.models is None else self.models
        if via is None:
            yield from masks
        else:
            for m in masks:
                if via.is_viable_mask(m):
                    yield m

    def drop_nonviable(self, via: "Viability | None") -> "PathFormula":
        """Display/fixpoint canonical form: forget unrealizable models.

        The tautology is kept lazy; its unrealizable models carry no
        information and comparisons quotient them out anyway.
        """
        if via is None or self.is_true:
            return self
        kept = frozenset(m for m in self.models if via.is_viable_mask(m))
        if kept == self.models:
            return self
        return PathFormula.from_models(self.universe, kept)

    # -- path operators

    def concat(self, other: "PathFormula") -> "PathFormula":
        """Models of the result are pairwise unions: a path split into two
        legs traverses the union of what each leg traverses."""
        self._check(other)
        if self.is_false or other.is_false:
            return PathFormula.false(self.universe)
        if self.is_true and other.is_true:
            return PathFormula.true(self.universe)
        if self.is_true or other.is_true:
            explicit = other if self.is_true else self
            if 0 in explicit.models:
                return PathFormula.true(self.universe)
            return PathFormula.from_models(
                self.universe, up_closure(explicit.models, self.universe.full_mask)
            )
        return PathFormula.from_models(
            self.universe, {a | b for a in self.models for b in other.models}
        )

    def difference(self, other: "PathFormula") -> "PathFormula":
        """Models of the result drop any subset of some model of ``other``
        from a model of self: what remains of a path after cutting off a
        prefix.  With no model on the right the defining set is empty."""
        self._check(other)
        if self.is_false or other.is_false:
            return PathFormula.false(self.universe)
        if self.is_true:
            return PathFormula.true(self.universe)
        if other.is_true:
            return PathFormula.from_models(self.universe, down_closure(self.models))
        out: set[int] = set()
        for a in self.models:
            for b in other.models:
                removable = a & b
                for x in submasks(removable):
                    out.add(a & ~x)
        return PathFormula.from_models(self.universe, out)

    # -- field abstraction

    def project(self, tracked: Iterable[str]) -> "PathFormula":
        """Collapse untracked fields into the stand-in field.  With every
        field tracked this is the identity."""
        tracked_set = set(tracked)
        fields = set(self.universe.concrete_fields)
        if self.universe.has_any:
            raise ValueError("formula is already field-abstracted")
        if not tracked_set <= fields:
            raise ValueError("tracked fields must belong to the universe")
        if tracked_set == fields:
            return self
        new_universe = FieldUniverse.tracked(fields, tracked_set)
        if self.is_true:
            return PathFormula.true(new_universe)
        out = set()
        for m in self.models:
            names = self.universe.names_of(m)
            out.add(new_universe.abstract_mask(names))
        return PathFormula.from_models(new_universe, out)

    # -- rendering

    def render(self) -> str:
        if self.is_true:
            return "true"
        if self.is_false:
            return "false"
        parts = []
        for names in self.model_sets():
            parts.append("x{" + ",".join(names) + "}")
        return "∨".join(parts)

    def json_models(self) -> list[list[str]]:
        return sorted(sorted(names) for names in self.model_sets())

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<pf {self.render()}>"


# --------------------------------------------------------------------------
# viability


@dataclass(frozen=True)
class ClassReach:
    """Which classes can reach which, traversing only a given field set."""

    pairs: frozenset[tuple[str, str]]

    def reaches(self, a: str, b: str) -> bool:
        return (a, b) in self.pairs


def class_reach_closure(
    ct: ClassTable, phi: Iterable[str], tracked: Optional[Iterable[str]] = None
) -> ClassReach:
    """Reflexive-transitive closure of one-step reachability between classes
    restricted to the fields in ``phi``.

    A step exists from any class carrying a field of ``phi`` (inherited
    fields included) to any subclass of that field's declared type.  The
    stand-in field expands to every reference field outside ``tracked``.
    """
    phi_set = set(phi)
    if ANY_FIELD in phi_set:
        phi_set.discard(ANY_FIELD)
        tracked_set = set(tracked) if tracked is not None else set()
        phi_set |= set(ct.reference_fields) - tracked_set
    succ: dict[str, set[str]] = {c: {c} for c in ct.class_names}
    edges: dict[str, set[str]] = {c: set() for c in ct.class_names}
    for cls in ct.class_names:
        for fname, ftype in ct.fields_of(cls):
            if fname in phi_set and ct.is_class(ftype):
                edges[cls].update(ct.subclasses_of(ftype))
    for cls in ct.class_names:
        work = [cls]
        while work:
            cur = work.pop()
            for nxt in edges[cur]:
                if nxt not in succ[cls]:
                    succ[cls].add(nxt)
                    work.append(nxt)
    return ClassReach(frozenset((a, b) for a, bs in succ.items() for b in bs))


class Viability:
    """Decides whether a truth assignment can be the exact traversal set of
    some path in some heap compatible with the class declarations.

    The decision procedure: restrict class reachability to the assignment's
    fields, then look for an ordering of those fields such that each
    consecutive gap can be bridged — from some subclass of the previous
    field's declared type to some class carrying the next field.
    """

    def __init__(self, ct: ClassTable, universe: FieldUniverse):
        self.ct = ct
        self.universe = universe
        self._memo: dict[int, bool] = {}

    def is_viable_mask(self, mask: int) -> bool:
        cached = self._memo.get(mask)
        if cached is not None:
            return cached
        result = self._decide(mask)
        self._memo[mask] = result
        return result

    def is_viable(self, names: Iterable[str]) -> bool:
        return self.is_viable_mask(self.universe.mask_of(names))

    def _decide(self, mask: int) -> bool:
        if self.universe.has_any and mask & self.universe.any_bit:
            # the stand-in covers unknown fields; never rule it out
            return True
        names = self.universe.names_of(mask)
        if not names:
            return True  # the empty path exists in any heap with an object
        for n in names:
            if not self.ct.has_field(n):
                return False
        reach = class_reach_closure(self.ct, names)
        carriers = {
            n: tuple(c for c in self.ct.class_names if self.ct.class_has_field(c, n))
            for n in names
        }
        decl_subs = {
            n: tuple(self.ct.subclasses_of(self.ct.field_type(n))) for n in names
        }
        for order in permutations(names):
            if not carriers[order[0]]:
                continue
            ok = True
            for prev, nxt in zip(order, order[1:]):
                if not any(
                    reach.reaches(a, b)
                    for a in decl_subs[prev]
                    for b in carriers[nxt]
                ):
                    ok = False
                    break
            if ok:
                return True
        return False
