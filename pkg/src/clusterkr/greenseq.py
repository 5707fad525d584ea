"""Green/red bookkeeping, sequence generators, classification, BPS charges.

Everything here runs at the quiver level: classification folds the framed
quiver mutation and reads colors and c-vectors off the arrows to the frozen
companions, never touching polynomial arithmetic.  That keeps verification
of long sequences (and the level-property scan) cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import EngineFault, UsageError
from .quiver import (
    DynkinType,
    Quiver,
    VertexId,
    dynkin_quiver,
    dynkin_sources_sinks,
    frame,
)
from .seed import read_c_vector, vertex_color

PROVENANCES = (
    "manual",
    "sink_An",
    "hl_An",
    "source_mgs",
    "source_sink",
    "nested_N",
    "c_collection",
)


@dataclass(frozen=True)
class MutationSequence:
    """Ordered list of mutable vertices plus a tag saying which generator made it."""

    steps: tuple[VertexId, ...]
    provenance: str = "manual"

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise UsageError(f"unknown provenance {self.provenance!r}")

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __add__(self, other: "MutationSequence") -> "MutationSequence":
        return MutationSequence(self.steps + other.steps, "manual")

    def to_text(self) -> str:
        return ",".join(str(v) for v in self.steps)

    @classmethod
    def from_text(cls, text: str, provenance: str = "manual") -> "MutationSequence":
        text = text.strip()
        if not text:
            return cls((), provenance)
        return cls(tuple(VertexId.parse(part) for part in text.split(",")), provenance)


@dataclass
class StepRecord:
    vertex: VertexId
    color_before: str
    is_source: bool
    is_sink: bool
    c_before: list[int]


@dataclass
class SequenceReport:
    """Outcome of running a sequence on the framed quiver.

    ``sigma`` is present exactly for reddening / maximal green sequences
    (read off the final c-matrix, which must be minus a permutation);
    ``bps`` is present exactly when every step was green.
    """

    kind: str
    basis: list[VertexId]
    steps: list[StepRecord] = field(default_factory=list)
    sigma: dict[VertexId, VertexId] | None = None
    bps: list[list[int]] | None = None

    def to_obj(self) -> dict:
        obj: dict = {
            "kind": self.kind,
            "basis": [str(v) for v in self.basis],
            "steps": [
                {
                    "vertex": str(s.vertex),
                    "color": s.color_before,
                    "source": s.is_source,
                    "sink": s.is_sink,
                }
                for s in self.steps
            ],
        }
        if self.sigma is not None:
            obj["sigma"] = {str(a): str(b) for a, b in sorted(self.sigma.items(), key=lambda t: str(t[0]))}
        if self.bps is not None:
            obj["bps"] = self.bps
        return obj


class FramedRun:
    """Stateful fold of framed-quiver mutations with color/c-vector reads."""

    def __init__(self, quiver: Quiver) -> None:
        if quiver.has_companions():
            raise UsageError("expected an unframed quiver")
        self.initial = quiver
        self.quiver = frame(quiver)
        self.basis = sorted(
            (v for v in quiver.mutable_vertices), key=VertexId.sort_key
        )
        self.index = {v: i for i, v in enumerate(self.basis)}

    def color(self, v: VertexId) -> str:
        return vertex_color(self.quiver, v)

    def c_vector(self, v: VertexId) -> list[int]:
        return read_c_vector(self.quiver, v, self.index)

    def c_vectors(self) -> dict[VertexId, list[int]]:
        return {v: self.c_vector(v) for v in self.basis}

    def step(self, v: VertexId) -> StepRecord:
        if v not in self.index:
            raise UsageError(f"{v} is not a mutable vertex")
        record = StepRecord(
            vertex=v,
            color_before=self.color(v),
            is_source=self.quiver.is_source(v),
            is_sink=self.quiver.is_sink(v),
            c_before=self.c_vector(v),
        )
        self.quiver = self.quiver.mutate(v)
        return record

    def all_red(self) -> bool:
        return all(self.color(v) == "red" for v in self.basis)

    def sigma(self) -> dict[VertexId, VertexId]:
        """Permutation with final c-matrix = -P_sigma; fault if not of that shape."""
        sigma: dict[VertexId, VertexId] = {}
        seen: set[VertexId] = set()
        for v in self.basis:
            vec = self.c_vector(v)
            nonzero = [(i, e) for i, e in enumerate(vec) if e]
            if len(nonzero) != 1 or nonzero[0][1] != -1:
                raise EngineFault(
                    "final c-matrix of a reddening sequence is not -P_sigma",
                    vertex=str(v),
                    c=vec,
                )
            target = self.basis[nonzero[0][0]]
            if target in seen:
                raise EngineFault("sigma is not a permutation", vertex=str(v))
            seen.add(target)
            sigma[v] = target
        return sigma


def classify_sequence(quiver: Quiver, seq: MutationSequence | Sequence[VertexId]) -> SequenceReport:
    """Run the framed mutation and classify green / reddening / maximal green."""
    steps = tuple(seq)
    run = FramedRun(quiver)
    records: list[StepRecord] = []
    for idx, v in enumerate(steps):
        try:
            records.append(run.step(v))
        except UsageError as exc:
            raise UsageError(f"invalid step {idx} ({v}): {exc}") from exc
    green_throughout = all(r.color_before == "green" for r in records)
    reddened = run.all_red()
    if green_throughout and reddened:
        kind = "maximal_green"
    elif reddened:
        kind = "reddening"
    elif green_throughout:
        kind = "green"
    else:
        kind = "neither"
    report = SequenceReport(kind=kind, basis=run.basis, steps=records)
    if reddened:
        report.sigma = run.sigma()
    if green_throughout:
        report.bps = [r.c_before for r in records]
    return report


def vertex_colors(framed: Quiver) -> dict[VertexId, str]:
    """Colors of all mutable vertices of an already-framed quiver."""
    return {v: vertex_color(framed, v) for v in framed.mutable_vertices if not v.bar}


def source_mgs(quiver: Quiver) -> MutationSequence:
    """Source maximal green sequence of a finite acyclic quiver.

    Greedy construction: in rounds, mutate every source of the green
    induced subgraph, smallest vertex first.  Mutating a green source only
    flips that vertex, so all round members stay green sources; on the
    alternating A_5 this yields {2,4,1,3,5}.
    """
    if not quiver.is_acyclic():
        raise UsageError("source MGS needs an acyclic quiver")
    run = FramedRun(quiver)
    out: list[VertexId] = []
    while True:
        greens = [v for v in run.basis if run.color(v) == "green"]
        if not greens:
            break
        green_set = set(greens)
        candidates = [
            v
            for v in greens
            if not any(
                a in green_set and b == v and not a.bar for (a, b) in run.quiver.arrows
            )
        ]
        if not candidates:
            raise UsageError("green subgraph has no source (cycle detected)")
        mutable = set(run.basis)
        for v in sorted(candidates, key=VertexId.sort_key):
            source_among_mutable = not any(
                a in mutable and b == v for (a, b) in run.quiver.arrows
            )
            record = run.step(v)
            # frozen (iced) vertices may point at v; sources are judged
            # within the mutable part, where the color argument lives
            if record.color_before != "green" or not source_among_mutable:
                raise EngineFault(
                    "greedy step is not a green source", vertex=str(v)
                )
            out.append(v)
    return MutationSequence(tuple(out), "source_mgs")


def sink_sequence_An(n: int) -> MutationSequence:
    """S_{A_n} = 1, 2,1, 3,2,1, ..., n,n-1,...,1 (sink MGS of the sink-oriented line)."""
    if n < 1:
        raise UsageError("n >= 1 required")
    steps = [VertexId(i) for k in range(1, n + 1) for i in range(k, 0, -1)]
    return MutationSequence(tuple(steps), "sink_An")


def hl_sequence_An(n: int) -> MutationSequence:
    """S^HL_n = 1..n, 1..n-1, ..., 1,2, 1."""
    if n < 1:
        raise UsageError("n >= 1 required")
    steps = [VertexId(i) for k in range(n, 0, -1) for i in range(1, k + 1)]
    return MutationSequence(tuple(steps), "hl_An")


def shifted_sink_sequence(lo: int, hi: int) -> MutationSequence:
    """S_{A_[lo, hi]} = lo, lo+1, lo, ..., hi, hi-1, ..., lo (sink MGS of a subline)."""
    if lo < 1 or hi < lo:
        raise UsageError("need 1 <= lo <= hi")
    steps = [VertexId(i) for top in range(lo, hi + 1) for i in range(top, lo - 1, -1)]
    return MutationSequence(tuple(steps), "sink_An")


def product_vertex(node: str | int, level: int) -> VertexId:
    name = f"v{node}" if isinstance(node, int) else str(node)
    return VertexId(name, level)


def source_order(quiver: Quiver) -> list[VertexId]:
    """Sc(Q): all sources ascending, then all sinks ascending.

    Requires the alternating (bipartite) orientation: every vertex must be
    a source or a sink.  An isolated vertex counts as a sink.
    """
    sources: list[VertexId] = []
    sinks: list[VertexId] = []
    for v in quiver.mutable_vertices:
        out_deg = sum(m for (a, b), m in quiver.arrows.items() if a == v)
        in_deg = sum(m for (a, b), m in quiver.arrows.items() if b == v)
        if out_deg and in_deg:
            raise UsageError(f"{v} is neither source nor sink; quiver not alternating")
        (sources if out_deg else sinks).append(v)
    key = VertexId.sort_key
    return sorted(sources, key=key) + sorted(sinks, key=key)


def source_sink_sequence(
    q: Quiver,
    sk_d: MutationSequence | Sequence[VertexId],
    d: Quiver,
    validate: bool = True,
) -> MutationSequence:
    """Source-sink sequence Sc(Q) x Sk(D) on the triangular product Q x| D.

    For every letter i of the sink MGS of D, emits (v, i) with v running
    over Sc(Q).  Levels come from D's integer vertex labels.
    """
    sc = source_order(q)
    sk_steps = tuple(sk_d)
    if validate:
        report = classify_sequence(d, sk_steps)
        if report.kind != "maximal_green" or not all(s.is_sink for s in report.steps):
            raise UsageError("supplied sequence is not a sink MGS of D")
    steps = [
        product_vertex(v.node, i.node)  # type: ignore[arg-type]
        for i in sk_steps
        for v in sc
    ]
    return MutationSequence(tuple(steps), "source_sink")


def standard_source_sink(dtype: DynkinType, m: int) -> MutationSequence:
    """Sc(Q) x S_{A_m} for the alternating Dynkin quiver Q (levels 1..m mutated)."""
    from .quiver import line_quiver

    return source_sink_sequence(
        dynkin_quiver(dtype), sink_sequence_An(m), line_quiver(m), validate=False
    )


def g_matrix_from_run(
    quiver: Quiver, seq: MutationSequence | Sequence[VertexId]
) -> dict[VertexId, dict[VertexId, int]]:
    """g-vectors over the mutable basis from a framed quiver-level run.

    Uses G^T = C^{-1} on the run's own c-matrix; no polynomial arithmetic,
    so this scales to quivers where value tracking is infeasible.  The
    sparse result maps each vertex to {basis vertex: coefficient}.
    """
    from .seed import invert_unimodular

    run = FramedRun(quiver)
    for v in seq:
        run.step(v)
    basis = run.basis
    columns = [run.c_vector(v) for v in basis]
    rows = [[columns[j][i] for j in range(len(basis))] for i in range(len(basis))]
    inv = invert_unimodular(rows)
    return {
        v: {basis[i]: e for i, e in enumerate(inv[j]) if e}
        for j, v in enumerate(basis)
    }


def bps_charges(quiver: Quiver, seq: MutationSequence | Sequence[VertexId]) -> list[list[int]]:
    """c-vector at each step's vertex just before mutating it (green steps only)."""
    run = FramedRun(quiver)
    charges: list[list[int]] = []
    for idx, v in enumerate(seq):
        record = run.step(v)
        if record.color_before != "green":
            raise UsageError(f"step {idx} ({v}) is not green")
        charges.append(record.c_before)
    return charges


def check_level_property(
    quiver: Quiver, seq: MutationSequence | Sequence[VertexId]
) -> bool:
    """Every c-vector at every step supported inside its own fiber {v} x A_m."""
    if any(v.level is None for v in quiver.mutable_vertices):
        raise UsageError("level property needs a triangular-product quiver")
    run = FramedRun(quiver)

    def levels_ok() -> bool:
        for v in run.basis:
            vec = run.c_vector(v)
            for i, entry in enumerate(vec):
                if entry and run.basis[i].node != v.node:
                    return False
        return True

    if not levels_ok():
        return False
    for v in seq:
        run.step(v)
        if not levels_ok():
            return False
    return True


def hl_sweep_sequence(
    dtype: DynkinType,
    levels_mutable: int,
    sweeps: int,
    level_caps: Sequence[int] | None = None,
) -> MutationSequence:
    """The Hernandez-Leclerc sweep: d passes of (p-row, q-row) per level.

    ``level_caps`` optionally limits sweep s to levels 1..level_caps[s-1];
    used for the dependency-cone schedule, which skips mutations that
    provably cannot influence the node being read.
    """
    sources, sinks = dynkin_sources_sinks(dtype)
    steps: list[VertexId] = []
    for s in range(sweeps):
        top = levels_mutable if level_caps is None else min(levels_mutable, level_caps[s])
        for level in range(1, top + 1):
            for node in sources:
                steps.append(product_vertex(node, level))
            for node in sinks:
                steps.append(product_vertex(node, level))
    return MutationSequence(tuple(steps), "hl_An")
