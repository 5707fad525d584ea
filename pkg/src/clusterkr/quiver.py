"""Quivers: construction, triangular products, framing, mutation.

A quiver is a finite directed multigraph with a mutable/frozen vertex
partition.  Arrows are stored as ``(tail, head) -> multiplicity`` with
multiplicity >= 1.  Three normalizations are applied on construction and
after every mutation:

* loops are rejected,
* oriented 2-cycles are cancelled (pairwise, keeping the surplus direction),
* arrows between two frozen vertices are discarded -- they never affect
  mutable dynamics and dropping them keeps the c-vector reading off framed
  quivers unambiguous.

Vertices carry ``(node, level)`` labels; ``level`` is absent for plain
quivers and is the A-line coordinate for triangular products.  The string
form ``node.level`` is stable and round-trips through JSON; a trailing
apostrophe marks the frozen companion added by framing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import UsageError

_COXETER = {"A": lambda n: n + 1, "D": lambda n: 2 * n - 2, "E": {6: 12, 7: 18, 8: 30}}


@dataclass(frozen=True)
class VertexId:
    """Vertex label: node name plus optional level, with companion flag."""

    node: str | int
    level: int | None = None
    bar: bool = False

    def __str__(self) -> str:
        text = str(self.node)
        if self.level is not None:
            text += f".{self.level}"
        if self.bar:
            text += "'"
        return text

    def sort_key(self) -> tuple:
        node = self.node
        node_key = (0, node, "") if isinstance(node, int) else (1, 0, node)
        return (node_key, self.level if self.level is not None else 0, self.bar)

    def companion(self) -> "VertexId":
        return VertexId(self.node, self.level, True)

    def base(self) -> "VertexId":
        return VertexId(self.node, self.level, False)

    @classmethod
    def parse(cls, text: str) -> "VertexId":
        text = text.strip()
        if not text:
            raise UsageError("empty vertex id")
        bar = text.endswith("'")
        if bar:
            text = text[:-1]
        node_part, _, level_part = text.partition(".")
        node: str | int = int(node_part) if node_part.lstrip("-").isdigit() else node_part
        if level_part:
            try:
                level = int(level_part)
            except ValueError:
                raise UsageError(f"bad vertex id level: {text!r}") from None
            return cls(node, level, bar)
        return cls(node, None, bar)


@dataclass(frozen=True)
class DynkinType:
    """Simply-laced Dynkin type: A_n (n>=1), D_n (n>=4), E_6/E_7/E_8."""

    family: str
    rank: int

    def __post_init__(self) -> None:
        fam, n = self.family, self.rank
        ok = (
            (fam == "A" and n >= 1)
            or (fam == "D" and n >= 4)
            or (fam == "E" and n in (6, 7, 8))
        )
        if not ok:
            raise UsageError(f"invalid Dynkin type {fam}_{n}")

    @property
    def coxeter_number(self) -> int:
        if self.family == "E":
            return _COXETER["E"][self.rank]
        return _COXETER[self.family](self.rank)

    def edges(self) -> list[tuple[int, int]]:
        """Undirected Dynkin diagram edges in Sage vertex numbering."""
        n = self.rank
        if self.family == "A":
            return [(i, i + 1) for i in range(1, n)]
        if self.family == "D":
            return [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
        return [(1, 3), (3, 4), (4, 5), (2, 4)] + [(i, i + 1) for i in range(5, n)]

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def coxeter_number(dtype: DynkinType) -> int:
    return dtype.coxeter_number


class Quiver:
    """Immutable quiver value; mutation returns a new quiver."""

    __slots__ = ("vertices", "frozen", "arrows")

    def __init__(
        self,
        vertices: Iterable[VertexId],
        arrows: Mapping[tuple[VertexId, VertexId], int],
        frozen: Iterable[VertexId] = (),
    ) -> None:
        verts = tuple(sorted(set(vertices), key=VertexId.sort_key))
        vert_set = set(verts)
        frozen_set = frozenset(frozen)
        if not frozen_set <= vert_set:
            raise UsageError("frozen set contains unknown vertices")
        if len(verts) != len(set(str(v) for v in verts)):
            raise UsageError("vertex ids are not unique")
        cleaned: dict[tuple[VertexId, VertexId], int] = {}
        for (a, b), mult in arrows.items():
            if mult == 0:
                continue
            if mult < 0:
                raise UsageError(f"negative arrow multiplicity {a}->{b}")
            if a == b:
                raise UsageError(f"loop at {a}")
            if a not in vert_set or b not in vert_set:
                raise UsageError(f"arrow {a}->{b} uses unknown vertex")
            if a in frozen_set and b in frozen_set:
                continue
            cleaned[(a, b)] = cleaned.get((a, b), 0) + mult
        # cancel oriented 2-cycles pairwise
        for a, b in list(cleaned):
            if (b, a) in cleaned and (a, b) in cleaned and a.sort_key() < b.sort_key():
                m = min(cleaned[(a, b)], cleaned[(b, a)])
                for key in ((a, b), (b, a)):
                    cleaned[key] -= m
                    if not cleaned[key]:
                        del cleaned[key]
        self.vertices = verts
        self.frozen = frozen_set
        self.arrows = cleaned

    # -- basic views ---------------------------------------------------------

    @property
    def mutable_vertices(self) -> list[VertexId]:
        return [v for v in self.vertices if v not in self.frozen]

    def is_frozen(self, v: VertexId) -> bool:
        return v in self.frozen

    def in_arrows(self, v: VertexId) -> list[tuple[VertexId, int]]:
        return [(a, m) for (a, b), m in self.arrows.items() if b == v]

    def out_arrows(self, v: VertexId) -> list[tuple[VertexId, int]]:
        return [(b, m) for (a, b), m in self.arrows.items() if a == v]

    def degree_vertices(self) -> list[VertexId]:
        return list(self.vertices)

    def real_vertices(self) -> list[VertexId]:
        """Vertices that are not framing companions."""
        return [v for v in self.vertices if not v.bar]

    def has_companions(self) -> bool:
        return any(v.bar for v in self.vertices)

    def is_source(self, v: VertexId) -> bool:
        """No incoming arrows from non-companion vertices."""
        return not any(not a.bar for (a, b) in self.arrows if b == v)

    def is_sink(self, v: VertexId) -> bool:
        """No outgoing arrows to non-companion vertices."""
        return not any(not b.bar for (a, b) in self.arrows if a == v)

    def sources(self) -> list[VertexId]:
        return [v for v in self.real_vertices() if self.is_source(v)]

    def sinks(self) -> list[VertexId]:
        return [v for v in self.real_vertices() if self.is_sink(v)]

    def is_acyclic(self) -> bool:
        """True when the arrows on non-companion vertices contain no cycle."""
        verts = self.real_vertices()
        indeg = {v: 0 for v in verts}
        for (a, b) in self.arrows:
            if not a.bar and not b.bar:
                indeg[b] += 1
        queue = [v for v, d in indeg.items() if d == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for (a, b) in self.arrows:
                if a == v and not b.bar:
                    indeg[b] -= 1
                    if indeg[b] == 0:
                        queue.append(b)
        return seen == len(verts)

    def freeze(self, ids: Iterable[VertexId]) -> "Quiver":
        return Quiver(self.vertices, self.arrows, self.frozen | set(ids))

    # -- mutation -------------------------------------------------------------

    def mutate(self, v: VertexId) -> "Quiver":
        """Quiver mutation at a mutable vertex (three-step rule)."""
        if v not in set(self.vertices):
            raise UsageError(f"unknown vertex {v}")
        if v in self.frozen:
            raise UsageError(f"cannot mutate frozen vertex {v}")
        into = [(a, m) for (a, b), m in self.arrows.items() if b == v]
        outof = [(b, m) for (a, b), m in self.arrows.items() if a == v]
        new: dict[tuple[VertexId, VertexId], int] = {}
        for (a, b), m in self.arrows.items():
            if a == v:
                new[(b, a)] = new.get((b, a), 0) + m
            elif b == v:
                new[(b, a)] = new.get((b, a), 0) + m
            else:
                new[(a, b)] = new.get((a, b), 0) + m
        for u, mu in into:
            for w, mw in outof:
                new[(u, w)] = new.get((u, w), 0) + mu * mw
        return Quiver(self.vertices, new, self.frozen)

    # -- serialization ---------------------------------------------------------

    def to_obj(self) -> dict:
        verts = sorted(self.vertices, key=str)
        return {
            "vertices": [{"id": str(v), "frozen": v in self.frozen} for v in verts],
            "arrows": [
                {"from": str(a), "to": str(b), "mult": m}
                for (a, b), m in sorted(
                    self.arrows.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))
                )
            ],
        }

    @classmethod
    def from_obj(cls, obj: Mapping) -> "Quiver":
        try:
            vertex_entries = obj["vertices"]
            arrow_entries = obj["arrows"]
        except (KeyError, TypeError):
            raise UsageError("quiver JSON needs 'vertices' and 'arrows'") from None
        vertices = []
        frozen = []
        for entry in vertex_entries:
            vid = VertexId.parse(str(entry["id"]))
            vertices.append(vid)
            if entry.get("frozen"):
                frozen.append(vid)
        arrows: dict[tuple[VertexId, VertexId], int] = {}
        for entry in arrow_entries:
            key = (VertexId.parse(str(entry["from"])), VertexId.parse(str(entry["to"])))
            arrows[key] = arrows.get(key, 0) + int(entry.get("mult", 1))
        return cls(vertices, arrows, frozen)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Quiver):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.frozen == other.frozen
            and self.arrows == other.arrows
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.frozen, frozenset(self.arrows.items())))

    def __repr__(self) -> str:
        arrows = ", ".join(
            f"{a}->{b}" + (f" x{m}" if m > 1 else "")
            for (a, b), m in sorted(self.arrows.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))
        )
        return f"Quiver(|V|={len(self.vertices)}, {arrows})"


# -- constructions -------------------------------------------------------------


def dynkin_quiver(dtype: DynkinType) -> Quiver:
    """Dynkin quiver with the standard alternating orientation.

    Sage vertex numbering.  The bipartite classes are read off the diagram:
    vertices at odd graph distance from vertex 1 are the sources, so sources
    and sinks alternate along every path (exact arrow sets pinned in tests).
    """
    edges = dtype.edges()
    adjacency: dict[int, set[int]] = {}
    for a, b in edges:
        adjacency.setdefault(a, set()).add(b)
        adjacency.setdefault(b, set()).add(a)
    dist = {1: 0}
    frontier = [1]
    while frontier:
        nxt: list[int] = []
        for u in frontier:
            for w in adjacency.get(u, ()):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    vertices = [VertexId(i) for i in range(1, dtype.rank + 1)]
    arrows: dict[tuple[VertexId, VertexId], int] = {}
    for a, b in edges:
        tail, head = (a, b) if dist[a] % 2 == 1 else (b, a)
        arrows[(VertexId(tail), VertexId(head))] = 1
    return Quiver(vertices, arrows)


def dynkin_sources_sinks(dtype: DynkinType) -> tuple[list[int], list[int]]:
    """Source and sink node numbers of the alternating orientation, ascending.

    Classes are the bipartite ones: a node is a source exactly when it has
    an outgoing arrow; the isolated A_1 node falls in the sink class (even
    distance from node 1).
    """
    q = dynkin_quiver(dtype)
    with_out = {a.node for (a, _b) in q.arrows}
    sources = [v.node for v in q.vertices if v.node in with_out]
    sinks = [v.node for v in q.vertices if v.node not in with_out]
    return sources, sinks  # type: ignore[return-value]


def line_quiver(m: int, frozen_top: bool = False) -> Quiver:
    """A_m line quiver with arrows i+1 -> i; vertex 1 is the unique sink.

    With ``frozen_top`` the last vertex m is frozen (the iced quiver of the
    A_{n+1} cluster algebra examples).
    """
    if m < 1:
        raise UsageError(f"line quiver needs m >= 1, got {m}")
    vertices = [VertexId(i) for i in range(1, m + 1)]
    arrows = {(VertexId(i + 1), VertexId(i)): 1 for i in range(1, m)}
    frozen = [VertexId(m)] if frozen_top else []
    return Quiver(vertices, arrows, frozen)


def triangular_product(q: Quiver, r: Quiver) -> Quiver:
    """Triangular product Q x| R: direct product plus diagonal arrows.

    Vertices are pairs ``(p, p')``; on top of the two families of direct
    product arrows, an arrow ``(q, q') -> (p, p')`` is added for every pair
    of arrows ``p -> q`` in Q and ``p' -> q'`` in R, then 2-cycles are
    cancelled.  Left-factor nodes become the node label (integers get a "v"
    prefix), right-factor nodes become the level, so R must have plain
    integer vertices.
    """
    for v in list(q.vertices) + list(r.vertices):
        if v.level is not None or v.bar:
            raise UsageError("triangular product factors must be plain quivers")
    if not all(isinstance(v.node, int) for v in r.vertices):
        raise UsageError("right factor must have integer vertex labels")

    def pair(p: VertexId, p2: VertexId) -> VertexId:
        node = f"v{p.node}" if isinstance(p.node, int) else p.node
        return VertexId(node, p2.node)  # type: ignore[arg-type]

    vertices = [pair(a, b) for a in q.vertices for b in r.vertices]
    frozen = [
        pair(a, b)
        for a in q.vertices
        for b in r.vertices
        if a in q.frozen or b in r.frozen
    ]
    arrows: dict[tuple[VertexId, VertexId], int] = {}

    def add(a: VertexId, b: VertexId, m: int) -> None:
        arrows[(a, b)] = arrows.get((a, b), 0) + m

    for (p, qq), m in q.arrows.items():
        for w in r.vertices:
            add(pair(p, w), pair(qq, w), m)
    for (p2, q2), m in r.arrows.items():
        for w in q.vertices:
            add(pair(w, p2), pair(w, q2), m)
    for (p, qq), m1 in q.arrows.items():
        for (p2, q2), m2 in r.arrows.items():
            add(pair(qq, q2), pair(p, p2), m1 * m2)
    return Quiver(vertices, arrows, frozen)


def hl_truncation(dtype: DynkinType, levels: int, frozen_from: int | None = None) -> Quiver:
    """Finite truncation Q x| A_L of the Hernandez-Leclerc quiver.

    ``frozen_from`` freezes every level >= that value (defaults to the top
    level alone); infinite quivers are only ever handled through such
    truncations, with depth requirements validated by the callers.
    """
    if levels < 1:
        raise UsageError("need at least one level")
    product = triangular_product(dynkin_quiver(dtype), line_quiver(levels))
    cutoff = levels if frozen_from is None else frozen_from
    frozen = [v for v in product.vertices if v.level is not None and v.level >= cutoff]
    return product.freeze(frozen)


def frame(q: Quiver) -> Quiver:
    """Framed quiver: a frozen companion v' and an arrow v -> v' per vertex.

    Frozen vertices of Q also receive a (necessarily isolated) companion;
    the arrow between the two frozen vertices is discarded by the global
    rule, which matches the footnote convention.
    """
    companions = [v.companion() for v in q.vertices]
    arrows = dict(q.arrows)
    for v in q.vertices:
        arrows[(v, v.companion())] = 1
    return Quiver(list(q.vertices) + companions, arrows, set(q.frozen) | set(companions))


def coframe(q: Quiver) -> Quiver:
    """Co-framed quiver: arrows v' -> v instead."""
    companions = [v.companion() for v in q.vertices]
    arrows = dict(q.arrows)
    for v in q.vertices:
        arrows[(v.companion(), v)] = 1
    return Quiver(list(q.vertices) + companions, arrows, set(q.frozen) | set(companions))


def mutate_quiver(q: Quiver, v: VertexId) -> Quiver:
    return q.mutate(v)
