"""q-characters of Kirillov-Reshetikhin modules and interval-collection seeds.

Characters are cluster variables of truncations Q x| A_L of the
Hernandez-Leclerc quiver, read at a node and pushed through the monomial
change of coordinates x_{v,k} = prod_{j<=k} t_{v,j}.  Two independent
mutation routes are provided:

* the level sweep (d passes over all levels, sources then sinks), and
* the source-sink maximal green sequence Sc(Q) x S_{A_{L-1}},

which must produce identical Laurent polynomials whenever they target the
same g-vector -- that equality is the engine's main cross-check and an
acceptance criterion.

A character is *complete* when the module's spectral depth clears half the
Coxeter number (2*(L-a) >= h, equivalently d >= h/2); below that the same
computation yields the truncated q-character, flagged as such.

Interval conventions: nested collections are given by *supports* [lo, hi]
(the realized g-vector is e_hi - e_{lo-1}), while the non-nested
C-collections follow the displayed [l, R] pairs whose g-vector is
e_R - e_l.  Both are plain integer intervals; only the bookkeeping around
them differs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import EngineFault, UsageError
from .laurent import LaurentPoly
from .quiver import DynkinType, VertexId, dynkin_quiver, hl_truncation
from .greenseq import (
    MutationSequence,
    hl_sweep_sequence,
    product_vertex,
    shifted_sink_sequence,
    sink_sequence_An,
    source_order,
)
from .seed import Seed


def _half_h_reached(depth: int, h: int) -> bool:
    """depth >= h/2 in exact integer arithmetic."""
    return 2 * depth >= h


@dataclass(frozen=True)
class KRDescriptor:
    """KR module W^{(v)}_{k, right}: length k, support [right-k+1, right]."""

    node: str
    k: int
    right: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise UsageError("KR module needs length k >= 1")
        if self.right < self.k:
            raise UsageError("support must lie in positive levels (right >= k)")

    @property
    def support(self) -> tuple[int, int]:
        return (self.right - self.k + 1, self.right)

    def dominant_monomial(self, family: str = "t") -> LaurentPoly:
        lo, hi = self.support
        if family == "Y":
            return LaurentPoly.monomial({f"Y.q{j}": 1 for j in range(lo, hi + 1)})
        return LaurentPoly.monomial({f"t.{self.node}.{j}": 1 for j in range(lo, hi + 1)})

    def to_obj(self) -> dict:
        return {"node": self.node, "k": self.k, "right": self.right}


@dataclass
class QCharacter:
    """A (possibly truncated) q-character as an exact Laurent polynomial."""

    poly: LaurentPoly
    truncated: bool
    descriptor: KRDescriptor
    variable_family: str = "t"

    def __post_init__(self) -> None:
        if any(c <= 0 for _, c in self.poly):
            raise EngineFault(
                "q-character with non-positive coefficient", module=self.descriptor
            )
        dominant = self.descriptor.dominant_monomial(self.variable_family).as_monomial()[0]
        if self.poly.terms.get(dominant) != 1:
            raise EngineFault(
                "dominant monomial missing or coefficient != 1",
                module=self.descriptor,
            )
        if not self.truncated:
            dominants = [
                m for m, _ in self.poly if all(e > 0 for _, e in m)
            ]
            if len(dominants) != 1:
                raise EngineFault(
                    "complete q-character must have a unique dominant monomial",
                    module=self.descriptor,
                    count=len(dominants),
                )

    def dimension(self) -> int:
        return self.poly.evaluate_all_one()

    def to_obj(self) -> dict:
        return {
            "module": self.descriptor.to_obj(),
            "truncated": self.truncated,
            "character": self.poly.to_obj(),
        }


# -- change of variables -----------------------------------------------------


def to_t_variables(p: LaurentPoly) -> LaurentPoly:
    """Substitute x_{v,k} = prod_{j<=k} t_{v,j} (inverse of t = x_k / x_{k-1})."""
    mapping: dict[str, LaurentPoly] = {}
    for var in p.variables():
        if not var.startswith("x."):
            raise UsageError(f"not an x-variable: {var}")
        vid = VertexId.parse(var[2:])
        if vid.level is None or vid.bar:
            raise UsageError(f"x-variable without a level: {var}")
        mapping[var] = LaurentPoly.monomial(
            {f"t.{vid.node}.{j}": 1 for j in range(1, vid.level + 1)}
        )
    return p.substitute(mapping)


def t_to_x_variables(p: LaurentPoly) -> LaurentPoly:
    """Substitute t_{v,k} = x_{v,k} / x_{v,k-1} with the convention x_{v,0} = 1."""
    mapping: dict[str, LaurentPoly] = {}
    for var in p.variables():
        if not var.startswith("t."):
            raise UsageError(f"not a t-variable: {var}")
        vid = VertexId.parse(var[2:])
        if vid.level is None:
            raise UsageError(f"t-variable without a level: {var}")
        exps = {f"x.{vid.node}.{vid.level}": 1}
        if vid.level > 1:
            exps[f"x.{vid.node}.{vid.level - 1}"] = -1
        mapping[var] = LaurentPoly.monomial(exps)
    return p.substitute(mapping)


# -- engine runs (cached: seeds are immutable) --------------------------------


@lru_cache(maxsize=16)
def _mgs_run(dtype: DynkinType, levels: int) -> Seed:
    """Plain x-run of Sc(Q) x S_{A_{L-1}} on Q x| A_L with the top level frozen."""
    quiver = hl_truncation(dtype, levels)
    seed = Seed.initial(quiver, tracking=False)
    if levels == 1:
        return seed
    sc = source_order(dynkin_quiver(dtype))
    steps = [
        product_vertex(v.node, i.node)  # type: ignore[arg-type]
        for i in sink_sequence_An(levels - 1)
        for v in sc
    ]
    return seed.apply(steps)


@lru_cache(maxsize=16)
def _hl_run(dtype: DynkinType, sweeps: int, k_read: int) -> Seed:
    """Cone-scheduled HL sweeps sufficient for reading levels <= k_read.

    Sweep s only mutates levels 1..(k_read + sweeps - s + 1): the state a
    sweep needs at level j comes from level j+1 of the previous sweep, so
    the good region shrinks by one level per sweep and still covers
    k_read + 1 at the end.  Values at the read levels equal those of the
    full (infinite) sweep; the equality with the source-sink route is
    asserted separately at acceptance time.
    """
    ambient = k_read + sweeps + 2
    quiver = hl_truncation(dtype, ambient)
    seed = Seed.initial(quiver, tracking=False)
    caps = [k_read + sweeps - s + 1 for s in range(1, sweeps + 1)]
    return seed.apply(hl_sweep_sequence(dtype, ambient - 1, sweeps, caps))


def _node_name(dtype: DynkinType, node: int) -> str:
    if not 1 <= node <= dtype.rank:
        raise UsageError(f"node {node} out of range for {dtype}")
    return f"v{node}"


def mgs_character(dtype: DynkinType, a: int, levels: int, node: int) -> QCharacter:
    """q-character of W^{(v_node)}_{a, levels} via the source-sink MGS route.

    Runs Sc(Q) x S_{A_{L-1}} on Q x| A_L (top level frozen, per the
    freeze-above-m licence) and reads the cluster variable at (v_node, a).
    Complete when 2*(L-a) >= h, truncated otherwise.
    """
    if a < 1:
        raise UsageError("KR length a must be >= 1 (no empty modules)")
    if levels <= a:
        raise UsageError(f"need levels > a, got levels={levels}, a={a}")
    name = _node_name(dtype, node)
    seed = _mgs_run(dtype, levels)
    value = seed.x[VertexId(name, a)]
    truncated = not _half_h_reached(levels - a, dtype.coxeter_number)
    return QCharacter(to_t_variables(value), truncated, KRDescriptor(name, a, levels))


def hl_sweep_character(
    dtype: DynkinType, d: int, k: int, node: int, levels: int | None = None
) -> QCharacter:
    """q-character of W^{(v_node)}_{k, d+k} via d Hernandez-Leclerc sweeps.

    The truncation depth must keep the moving boundary away from the read
    node: levels >= d + k + ceil(h/2) is enforced (and is the default).
    """
    if d < 1:
        raise UsageError("need at least one sweep")
    if k < 1:
        raise UsageError("KR length k must be >= 1")
    h = dtype.coxeter_number
    required = d + k + (h + 1) // 2
    if levels is None:
        levels = required
    if levels < required:
        raise UsageError(
            f"truncation too shallow: levels={levels} < {required} for d={d}, k={k}"
        )
    name = _node_name(dtype, node)
    seed = _hl_run(dtype, d, k)
    value = seed.x[VertexId(name, k)]
    truncated = not _half_h_reached(d, h)
    return QCharacter(to_t_variables(value), truncated, KRDescriptor(name, k, d + k))


def sl2_closed_form(r: int, a: int) -> QCharacter:
    """Closed-form sl2 KR character in the variables Y_{q^j}.

    Y_{q^{a+r}} ... Y_{q^{a+1}} (1 + A_a^{-1} + A_a^{-1}A_{a+1}^{-1} + ...)
    with A_j = Y_{q^j} Y_{q^{j+1}}; exactly r+1 monomials.
    """
    if r < 1:
        raise UsageError("need r >= 1")
    if a < 1:
        raise UsageError("need shift a >= 1 (positive spectral levels)")
    n = a + r - 1
    lead = LaurentPoly.monomial({f"Y.q{j}": 1 for j in range(a + 1, n + 2)})
    total = lead
    current = lead
    for j in range(a, n + 1):
        inv_a = LaurentPoly.monomial({f"Y.q{j}": -1, f"Y.q{j + 1}": -1})
        current = current * inv_a
        total = total + current
    if len(total) != r + 1:
        raise EngineFault("sl2 closed form must have r+1 monomials", r=r, a=a)
    return QCharacter(total, False, KRDescriptor("v1", r, a + r), variable_family="Y")


def sl2_closed_form_t(r: int, a: int) -> LaurentPoly:
    """The sl2 closed form after the renaming Y_{q^k} -> t_{v1,k}."""
    poly = sl2_closed_form(r, a).poly
    return poly.rename_variables(
        {var: f"t.v1.{var[3:]}" for var in poly.variables()}
    )


# -- interval collections -------------------------------------------------------


@dataclass(frozen=True)
class IntervalCollection:
    """Multiset of integer intervals [lo, hi] with lo <= hi."""

    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for lo, hi in self.intervals:
            if lo > hi:
                raise UsageError(f"empty interval [{lo}, {hi}]")

    @classmethod
    def of(cls, *intervals: tuple[int, int] | Sequence[int]) -> "IntervalCollection":
        return cls(tuple((int(a), int(b)) for a, b in intervals))

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def nested(self) -> bool:
        """Every pair comparable by inclusion."""
        ivs = sorted(self.intervals, key=lambda iv: (-iv[0], iv[1]))
        for (lo1, hi1), (lo2, hi2) in zip(ivs, ivs[1:]):
            if not (lo2 <= lo1 and hi1 <= hi2):
                return False
        return True

    def union(self, other: "IntervalCollection") -> "IntervalCollection":
        return IntervalCollection(self.intervals + other.intervals)

    def min_left(self) -> int:
        return min(lo for lo, _ in self.intervals)

    def max_right(self) -> int:
        return max(hi for _, hi in self.intervals)

    def to_obj(self) -> list[list[int]]:
        return [[lo, hi] for lo, hi in sorted(self.intervals)]


def general_position(n1: IntervalCollection, n2: IntervalCollection, h: int) -> bool:
    """Nested collections in general position: nested union or gap > h/2."""
    if not n1.nested() or not n2.nested():
        raise UsageError("general position is defined for nested collections")
    if not len(n1) or not len(n2):
        return True
    if n1.union(n2).nested():
        return True
    if 2 * (n2.min_left() - n1.max_right()) > h:
        return True
    if 2 * (n1.min_left() - n2.max_right()) > h:
        return True
    return False


def _staircase_letters(supports: Iterable[tuple[int, int]]) -> list[int]:
    """Singleton-quiver sink green sequence realizing a nested support family.

    Sorted innermost first, the sequence is the full sink MGS up to the
    innermost right end, then for each wider interval [lo, hi] the staircase
    blocks T, T-1, ..., T-lo+2 for T running from the previous top to hi-1.
    """
    ivs = sorted(set(supports), key=lambda iv: (-iv[0], iv[1]))
    letters: list[int] = []
    if not ivs:
        return letters
    first_top = ivs[0][1]
    letters.extend(v.node for v in sink_sequence_An(first_top - 1))  # type: ignore[union-attr]
    prev_top = first_top
    for lo, hi in ivs[1:]:
        a = lo - 1
        for top in range(prev_top, hi):
            letters.extend(range(top, top - a, -1))
        prev_top = max(prev_top, hi)
    return letters


def nested_sequence(collection: IntervalCollection, dtype: DynkinType) -> MutationSequence:
    """Sink green sequence whose final seed realizes a nested support family.

    For every support [lo, hi] in the collection and every Dynkin node v the
    resulting seed contains a cluster variable with g-vector
    e_{(v,hi)} - e_{(v,lo-1)}.  The singleton staircase is interleaved over
    Sc(Q), as in the source-sink construction.
    """
    if not collection.nested():
        raise UsageError("collection is not nested")
    if len(collection) and collection.min_left() < 2:
        raise UsageError("supports must start at level >= 2 (left end e_{lo-1} >= 1)")
    letters = _staircase_letters(collection.intervals)
    sc = source_order(dynkin_quiver(dtype))
    steps = tuple(product_vertex(v.node, i) for i in letters for v in sc)
    return MutationSequence(steps, "nested_N")


def nested_ambient_levels(collection: IntervalCollection) -> int:
    return collection.max_right() if len(collection) else 1


def combined_sequence(
    n1: IntervalCollection, n2: IntervalCollection, dtype: DynkinType
) -> MutationSequence:
    """Sequence for two collections in general position: S_N then shifted S_N'.

    Requires the gap clause of general position: every support of N' starts
    more than h/2 levels after the last support of N ends.  The shifted part
    is the nested construction of N' translated so that its staircases start
    right after the region S_N touched.
    """
    if not len(n2):
        return nested_sequence(n1, dtype)
    if not len(n1):
        return nested_sequence(n2, dtype)
    h = dtype.coxeter_number
    if 2 * (n2.min_left() - n1.max_right()) <= h:
        raise UsageError(
            "combined sequence needs the gap clause of general position "
            "(min left of N' more than h/2 beyond max right of N)"
        )
    shift = n1.max_right()
    first = nested_sequence(n1, dtype)
    translated = IntervalCollection(
        tuple((lo - shift, hi - shift) for lo, hi in n2.intervals)
    )
    second = nested_sequence(translated, dtype)
    shifted_steps = tuple(
        VertexId(v.node, v.level + shift) for v in second.steps  # type: ignore[operator]
    )
    return MutationSequence(first.steps + shifted_steps, "nested_N")


# -- non-nested C-collections ------------------------------------------------------


def _c_collection_rights(dtype: DynkinType, m: int) -> list[int]:
    """Right ends of the displayed C-collections, indexed by node 1..n."""
    n = dtype.rank
    if dtype.family == "A":
        return [m + i // 2 + 1 for i in range(1, n + 1)]
    if dtype.family == "D":
        fork = m + n // 2 - 1 if n % 2 == 0 else m + (n - 1) // 2
        return [m + i // 2 + 1 for i in range(1, n - 1)] + [fork, fork]
    rights = {
        6: [m, m + 1, m + 1, m + 1, m + 2, m + 2],
        7: [m, m + 1, m + 1, m + 1, m + 2, m + 2, m + 3],
        8: [m, m + 1, m + 1, m + 1, m + 2, m + 2, m + 3, m + 3],
    }
    return rights[n]


def c_collection(
    dtype: DynkinType, lefts: Sequence[int], m: int
) -> tuple[IntervalCollection, MutationSequence]:
    """The non-nested collection C(l_1..l_n; m) and its staged green sequence.

    Intervals are the displayed pairs [l_i, R_i]; the realized g-vectors are
    e_{(v_i, R_i)} - e_{(v_i, l_i)}.  The sequence starts with the full
    source-sink prefix up to the smallest right end and then adds one
    staircase stage per extra unit, each stage restricted to the nodes whose
    right end still exceeds the current depth (the stage subquivers follow
    from the interval right ends).
    """
    h = dtype.coxeter_number
    n = dtype.rank
    if len(lefts) != n:
        raise UsageError(f"need {n} left ends, got {len(lefts)}")
    if 2 * m < h + 2:
        raise UsageError(f"need m >= h/2 + 1, got m={m} for h={h}")
    for li in lefts:
        if 2 * li < h:
            raise UsageError(f"need every l_i >= h/2, got {li} for h={h}")
    rights = _c_collection_rights(dtype, m)
    for i, (li, ri) in enumerate(zip(lefts, rights), start=1):
        if li >= ri:
            raise UsageError(f"interval [{li}, {ri}] at node {i} is empty")
    intervals = IntervalCollection(tuple(zip(map(int, lefts), rights)))

    sc = source_order(dynkin_quiver(dtype))
    r_min, r_max = min(rights), max(rights)
    letters_groups: list[tuple[list[VertexId], int]] = []
    for i in sink_sequence_An(r_min - 1):
        letters_groups.append((sc, i.node))  # type: ignore[arg-type]
    for t in range(1, r_max - r_min + 1):
        depth = r_min + t
        stage_nodes = {i + 1 for i in range(n) if rights[i] >= depth}
        stage_sc = [v for v in sc if int(str(v.node)) in stage_nodes]
        for letter in range(depth - 1, 0, -1):
            letters_groups.append((stage_sc, letter))
    steps = tuple(
        product_vertex(v.node, letter)
        for group, letter in letters_groups
        for v in group
    )
    return intervals, MutationSequence(steps, "c_collection")


def c_collection_expected_g(
    dtype: DynkinType, lefts: Sequence[int], m: int
) -> dict[str, tuple[int, int]]:
    """node name -> (l_i, R_i): expected g-vector e_{(v,R)} - e_{(v,l)} per node."""
    rights = _c_collection_rights(dtype, m)
    return {f"v{i + 1}": (int(lefts[i]), rights[i]) for i in range(dtype.rank)}


# -- sl2 q-strings ---------------------------------------------------------------


def qstring(c_exponent: int, r: int) -> tuple[int, ...]:
    """Spectral exponents of the sl2 KR module W_r(q^c): c-r+1, c-r+3, ..., c+r-1."""
    if r < 1:
        raise UsageError("q-string needs r >= 1")
    return tuple(range(c_exponent - r + 1, c_exponent + r, 2))


def qstring_general_position(strings: Sequence[tuple[int, int]]) -> bool:
    """Pairwise general position: union not a q-string, or one contains the other."""
    sets = [set(qstring(c, r)) for c, r in strings]

    def is_qstring(values: set[int]) -> bool:
        if not values:
            return False
        lo, hi = min(values), max(values)
        if (hi - lo) % 2:
            return False
        return values == set(range(lo, hi + 1, 2))

    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            a, b = sets[i], sets[j]
            if a <= b or b <= a:
                continue
            if is_qstring(a | b):
                return False
    return True
