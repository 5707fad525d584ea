"""Cluster seeds: X-mutation, Y-mutation, p-map, c/g-vectors, F-polynomials.

An X-seed holds one Laurent polynomial per vertex (in the initial
x-variables) and the current quiver.  With principal-coefficient tracking
enabled, the quiver is framed: every initial vertex v gets a frozen
companion v' whose value is the coefficient variable ``y.v``, so the
x-values live in ZZ[x^+-, y].  Everything tropical is then read off:

* c-vectors from the arrows between a mutable vertex and the companions
  (sign by green/red; the dichotomy is asserted on every read),
* F-polynomials by setting every x to 1,
* g-vectors twice, independently: as the exponent of the unique y-free
  monomial of the x-value, and through the matrix identity
  ``G^T = C^{-1}`` applied to the same run's c-matrix.  With this framing
  convention the c-matrix is already the transposed-pattern one, so no
  second run on the opposite quiver is needed; the two computations are
  compared on every call and any mismatch is an engine fault.

Exchange relations divide by the previous x-value; by the Laurent
phenomenon that division is exact, and ``div_exact`` enforces it,
converting any violation into a loud :class:`NonExactDivision` with the
mutation context attached.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from ._packed import (
    EXPONENT_LIMIT,
    PackContext,
    max_abs_exponent,
    p_add,
    p_const,
    p_div_exact,
    p_mul,
    p_pow,
)
from .errors import EngineFault, NonExactDivision, UsageError
from .laurent import LaurentFraction, LaurentPoly, Monomial
from .quiver import Quiver, VertexId, frame


def x_var(v: VertexId) -> str:
    return f"x.{v}"


def y_var(v: VertexId) -> str:
    return f"y.{v.base()}"


class _ValueView(Mapping):
    """Read-only mapping VertexId -> LaurentPoly over a seed's packed values."""

    __slots__ = ("_seed",)

    def __init__(self, seed: "Seed") -> None:
        self._seed = seed

    def __getitem__(self, v: VertexId) -> LaurentPoly:
        return self._seed.value(v)

    def __iter__(self) -> Iterator[VertexId]:
        return iter(self._seed._packed)

    def __len__(self) -> int:
        return len(self._seed._packed)


class Seed:
    """Immutable cluster seed; ``mutate`` returns a new seed.

    Values are stored packed (see ``_packed``) for the whole run and only
    materialized as :class:`LaurentPoly` when read through ``seed.x``.
    """

    __slots__ = (
        "quiver",
        "trail",
        "tracking",
        "initial_quiver",
        "_ctx",
        "_packed",
        "_cache",
        "_exp_bounds",
    )

    def __init__(
        self,
        quiver: Quiver,
        packed: Mapping[VertexId, dict],
        trail: tuple[VertexId, ...],
        tracking: bool,
        initial_quiver: Quiver,
        ctx: PackContext,
        exp_bounds: Mapping[VertexId, int] | None = None,
    ) -> None:
        self.quiver = quiver
        self._packed = dict(packed)
        self.trail = trail
        self.tracking = tracking
        self.initial_quiver = initial_quiver
        self._ctx = ctx
        self._cache: dict[VertexId, LaurentPoly] = {}
        # pessimistic per-vertex |exponent| bounds guarding the 16-bit packing
        self._exp_bounds = dict(exp_bounds) if exp_bounds else {v: 1 for v in self._packed}

    @classmethod
    def initial(cls, quiver: Quiver, tracking: bool = False) -> "Seed":
        """Fresh seed on ``quiver``; with tracking the quiver is framed."""
        if quiver.has_companions():
            raise UsageError("initial quiver must not already carry companions")
        if not quiver.mutable_vertices:
            raise UsageError("quiver has no mutable vertices")
        base = frame(quiver) if tracking else quiver
        names = [x_var(v) for v in quiver.vertices]
        if tracking:
            names += [y_var(v) for v in quiver.vertices]
        ctx = PackContext(names)
        packed: dict[VertexId, dict] = {}
        for v in base.vertices:
            name = y_var(v) if v.bar else x_var(v)
            packed[v] = {ctx.pack_monomial(((name, 1),)): 1}
        return cls(base, packed, (), tracking, base, ctx)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Seed):
            return NotImplemented
        return (
            self.quiver == other.quiver
            and self._ctx.vars == other._ctx.vars
            and self._packed == other._packed
        )

    def __hash__(self) -> int:  # pragma: no cover - seeds are not dict keys
        return hash((self.quiver, self.trail))

    @property
    def x(self) -> Mapping[VertexId, LaurentPoly]:
        return _ValueView(self)

    def value(self, v: VertexId) -> LaurentPoly:
        cached = self._cache.get(v)
        if cached is None:
            cached = self._cache[v] = self._ctx.unpack(self._packed[v])
        return cached

    # -- mutation --------------------------------------------------------------

    def mutate(self, v: VertexId) -> "Seed":
        q = self.quiver
        if v not in set(q.vertices):
            raise UsageError(f"unknown vertex {v}")
        if q.is_frozen(v):
            raise UsageError(f"cannot mutate frozen vertex {v}")
        ctx = self._ctx

        def product(arrows: list[tuple[VertexId, int]]) -> dict:
            factors = [
                p_pow(ctx, self._packed[u], m) if m > 1 else self._packed[u]
                for u, m in arrows
            ]
            factors.sort(key=len)
            acc = p_const(ctx, 1)
            for f in factors:
                acc = p_mul(ctx, acc, f)
            return acc

        num = p_add(product(q.in_arrows(v)), product(q.out_arrows(v)))
        new_value = p_div_exact(
            ctx,
            num,
            self._packed[v],
            vertex=str(v),
            step=len(self.trail),
            trail=",".join(str(s) for s in self.trail),
        )
        # exponents grow without bound on wild quivers; when the pessimistic
        # bound nears the packing range, measure exactly and fault rather
        # than let a 16-bit field overflow silently
        bounds = dict(self._exp_bounds)
        in_sum = sum(m * bounds[u] for u, m in q.in_arrows(v))
        out_sum = sum(m * bounds[w] for w, m in q.out_arrows(v))
        estimate = max(in_sum, out_sum, 1) + bounds[v]
        if estimate >= EXPONENT_LIMIT:
            estimate = max(max_abs_exponent(new_value, len(ctx.vars)), 1)
            if estimate >= EXPONENT_LIMIT:
                raise EngineFault(
                    "exponent range of the packed representation exceeded",
                    vertex=str(v),
                    step=len(self.trail),
                    bound=estimate,
                )
        bounds[v] = estimate
        new_packed = dict(self._packed)
        new_packed[v] = new_value
        return Seed(
            q.mutate(v), new_packed, self.trail + (v,), self.tracking,
            self.initial_quiver, ctx, bounds,
        )

    def apply(self, steps: Iterable[VertexId]) -> "Seed":
        """Left-to-right fold of ``mutate``; reports the first bad step."""
        seed = self
        for idx, v in enumerate(steps):
            try:
                seed = seed.mutate(v)
            except UsageError as exc:
                raise UsageError(f"invalid step {idx} ({v}): {exc}") from exc
        return seed

    # -- p-map -------------------------------------------------------------------

    def p_map(self) -> dict[VertexId, LaurentFraction]:
        """y_v = prod_{v->u} x_u / prod_{w->v} x_w read off the current quiver."""
        out: dict[VertexId, LaurentFraction] = {}
        for v in self.quiver.mutable_vertices:
            num = LaurentPoly.one()
            for u, m in self.quiver.out_arrows(v):
                num = num * (self.x[u] ** m if m > 1 else self.x[u])
            den = LaurentPoly.one()
            for w, m in self.quiver.in_arrows(v):
                den = den * (self.x[w] ** m if m > 1 else self.x[w])
            out[v] = LaurentFraction(num, den)
        return out

    def y_hat(self) -> dict[str, LaurentPoly]:
        """Substitution images of the initial y-variables (separation formula).

        Computed from the p-map of the *initial framed* quiver, where every
        image is a Laurent monomial: ``y_v`` times the x-monomial read off
        the initial arrows at v.
        """
        if not self.tracking:
            raise UsageError("y_hat needs principal-coefficient tracking")
        q0 = self.initial_quiver
        out: dict[str, LaurentPoly] = {}
        for v in q0.mutable_vertices:
            if v.bar:
                continue
            exps: dict[str, int] = {y_var(v): 1}
            for u, m in q0.out_arrows(v):
                if not u.bar:
                    exps[x_var(u)] = exps.get(x_var(u), 0) + m
            for w, m in q0.in_arrows(v):
                exps[x_var(w)] = exps.get(x_var(w), 0) - m
            out[y_var(v)] = LaurentPoly.monomial(exps)
        return out

    # -- tropical data -------------------------------------------------------------

    def tropical_data(self) -> "TropicalData":
        if not self.tracking:
            raise UsageError("tropical data needs principal-coefficient tracking")
        basis = sorted(
            (v for v in self.initial_quiver.mutable_vertices if not v.bar),
            key=VertexId.sort_key,
        )
        frozen_basis = sorted(
            (v for v in self.initial_quiver.real_vertices() if self.initial_quiver.is_frozen(v)),
            key=VertexId.sort_key,
        )
        index = {v: i for i, v in enumerate(basis)}
        c = {v: read_c_vector(self.quiver, v, index) for v in basis}

        f_polys: dict[VertexId, LaurentPoly] = {}
        g_full: dict[VertexId, dict[VertexId, int]] = {}
        for v in basis:
            value = self.x[v]
            g_full[v] = self._g_from_y_free(v, value)
            # F = value at x = 1: project every term onto its y-part
            f_terms: dict = {}
            for mono, coeff in value.terms.items():
                y_part = tuple(p for p in mono if p[0].startswith("y."))
                f_terms[y_part] = f_terms.get(y_part, 0) + coeff
            f = LaurentPoly({m: c for m, c in f_terms.items() if c})
            if f.constant_term() != 1:
                raise EngineFault(
                    "F-polynomial constant term is not 1", vertex=str(v), f=str(f)
                )
            f_polys[v] = f

        g_matrix = self._g_matrix(basis, c)
        for v in basis:
            mutable_part = [g_full[v].get(u, 0) for u in basis]
            if mutable_part != g_matrix[v]:
                raise EngineFault(
                    "g-vector mismatch between matrix and separation readings",
                    vertex=str(v),
                    matrix=g_matrix[v],
                    monomial=mutable_part,
                )
        return TropicalData(
            basis=basis,
            frozen_basis=frozen_basis,
            c=c,
            g={v: list(g_matrix[v]) for v in basis},
            g_full=g_full,
            f={v: f_polys[v] for v in basis},
        )

    def _g_from_y_free(self, v: VertexId, value: LaurentPoly) -> dict[VertexId, int]:
        """Exponent vector of the unique y-free monomial of an x-value."""
        found: Monomial | None = None
        coeff = 0
        for mono, cf in value.terms.items():
            if all(not name.startswith("y.") for name, _ in mono):
                if found is not None:
                    raise EngineFault(
                        "x-value has several y-free monomials", vertex=str(v)
                    )
                found, coeff = mono, cf
        if found is None or coeff != 1:
            raise EngineFault(
                "x-value has no y-free monomial with coefficient 1",
                vertex=str(v),
                coeff=coeff,
            )
        out: dict[VertexId, int] = {}
        for name, e in found:
            if not name.startswith("x."):
                raise EngineFault("unexpected variable in x-value", name=name)
            out[VertexId.parse(name[2:])] = e
        return out

    def _g_matrix(
        self, basis: list[VertexId], c: Mapping[VertexId, list[int]]
    ) -> dict[VertexId, list[int]]:
        """g-vectors over the mutable basis via G^T = C^{-1}."""
        columns = [c[v] for v in basis]
        rows = [[columns[j][i] for j in range(len(basis))] for i in range(len(basis))]
        inv = invert_unimodular(rows)
        # G = (C^{-1})^T, so the g-vector of basis[j] is row j of C^{-1}
        return {v: list(inv[j]) for j, v in enumerate(basis)}

    # -- separation formula -----------------------------------------------------------

    def separation_reconstruct(self, td: "TropicalData", v: VertexId) -> LaurentPoly:
        """x^{g_v} * F_v(y-hat); must equal the stored x-value exactly."""
        g_mono = LaurentPoly.monomial({x_var(u): e for u, e in td.g_full[v].items()})
        value = td.f[v].substitute(self.y_hat()) * g_mono
        if value != self.x[v]:
            raise EngineFault(
                "separation formula mismatch", vertex=str(v), trail=str(self.trail)
            )
        return value

    # -- serialization -------------------------------------------------------------------

    def to_obj(self) -> dict:
        obj = self.quiver.to_obj()
        obj["x"] = {str(v): self.x[v].to_obj() for v in sorted(self.x, key=str)}
        obj["trail"] = [str(v) for v in self.trail]
        return obj


def read_c_vector(
    q: Quiver, v: VertexId, index: Mapping[VertexId, int]
) -> list[int]:
    """c-vector of a mutable vertex from its arrows to frozen companions.

    Green vertices contribute +1 per arrow v -> w', red vertices -1 per
    arrow w' -> v; a vertex with arrows in both directions (or none) breaks
    sign coherence and faults.
    """
    outgoing: dict[VertexId, int] = {}
    incoming: dict[VertexId, int] = {}
    for (a, b), m in q.arrows.items():
        if a == v and b.bar:
            outgoing[b.base()] = outgoing.get(b.base(), 0) + m
        elif b == v and a.bar:
            incoming[a.base()] = incoming.get(a.base(), 0) + m
    if outgoing and incoming:
        raise EngineFault("c-vector sign coherence violated", vertex=str(v))
    if not outgoing and not incoming:
        raise EngineFault("vertex joined to no frozen companion", vertex=str(v))
    vec = [0] * len(index)
    source = outgoing or incoming
    sign = 1 if outgoing else -1
    for w, m in source.items():
        if w not in index:
            raise EngineFault("c-vector touches unknown companion", companion=str(w))
        vec[index[w]] = sign * m
    return vec


def vertex_color(q: Quiver, v: VertexId) -> str:
    """'green' or 'red'; exactly one must hold (dichotomy asserted)."""
    if v in q.frozen:
        raise UsageError(f"{v} is frozen, colors apply to mutable vertices")
    has_in = any(a.bar and b == v for (a, b) in q.arrows)
    has_out = any(a == v and b.bar for (a, b) in q.arrows)
    if has_in == has_out:
        raise EngineFault("green/red dichotomy violated", vertex=str(v))
    return "red" if has_in else "green"


@dataclass
class TropicalData:
    """c-vectors, g-vectors and F-polynomials relative to the initial seed.

    ``c`` and ``g`` are integer vectors over the sorted mutable basis;
    ``g_full`` additionally carries the frozen coordinates of the leading
    monomial (the ``e_{n+1}`` part of the closed forms lives there).
    """

    basis: list[VertexId]
    frozen_basis: list[VertexId]
    c: dict[VertexId, list[int]]
    g: dict[VertexId, list[int]]
    g_full: dict[VertexId, dict[VertexId, int]]
    f: dict[VertexId, LaurentPoly]

    def g_full_vector(self, v: VertexId) -> dict[str, int]:
        return {str(u): e for u, e in sorted(self.g_full[v].items(), key=lambda t: str(t[0]))}

    def to_obj(self) -> dict:
        return {
            "basis": [str(v) for v in self.basis],
            "frozen_basis": [str(v) for v in self.frozen_basis],
            "c": {str(v): self.c[v] for v in self.basis},
            "g": {str(v): self.g[v] for v in self.basis},
            "g_full": {str(v): self.g_full_vector(v) for v in self.basis},
            "f": {str(v): self.f[v].to_obj() for v in self.basis},
        }


def invert_unimodular(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact inverse of an integer matrix with determinant +-1.

    Gauss-Jordan over exact rationals; the result is checked to be
    integral.  c-matrices are unimodular, so a non-integral inverse (or a
    singular matrix) is an engine fault.
    """
    n = len(rows)
    aug = [[Fraction(rows[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise EngineFault("singular c-matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [entry / pv for entry in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    out: list[list[int]] = []
    for i in range(n):
        row = []
        for j in range(n):
            value = aug[i][n + j]
            if value.denominator != 1:
                raise EngineFault("c-matrix inverse is not integral")
            row.append(int(value))
        out.append(row)
    return out


# -- operation-style wrappers ----------------------------------------------------------


def mutate_seed(s: Seed, v: VertexId) -> Seed:
    return s.mutate(v)


def apply_sequence(s: Seed, steps: Iterable[VertexId]) -> Seed:
    return s.apply(steps)


def p_map(s: Seed) -> dict[VertexId, LaurentFraction]:
    return s.p_map()


def tropical_data(s: Seed) -> TropicalData:
    return s.tropical_data()


def separation_reconstruct(s: Seed, td: TropicalData, v: VertexId) -> LaurentPoly:
    return s.separation_reconstruct(td, v)


class YSeed:
    """Y-cluster seed; variables are reduced Laurent fractions."""

    __slots__ = ("quiver", "y", "trail")

    def __init__(
        self,
        quiver: Quiver,
        y: Mapping[VertexId, LaurentFraction] | None = None,
        trail: tuple[VertexId, ...] = (),
    ) -> None:
        self.quiver = quiver
        if y is None:
            y = {
                v: LaurentFraction(LaurentPoly.variable(y_var(v)))
                for v in quiver.mutable_vertices
            }
        self.y = dict(y)
        self.trail = trail

    def mutate(self, v: VertexId) -> "YSeed":
        q = self.quiver
        if q.is_frozen(v):
            raise UsageError(f"cannot mutate frozen vertex {v}")
        yv = self.y[v]
        one_plus = yv.num + yv.den  # 1 + y_v, over the common denominator
        new_y: dict[VertexId, LaurentFraction] = {}
        for j, yj in self.y.items():
            if j == v:
                new_y[j] = yv.inverse()
                continue
            m_in = q.arrows.get((v, j), 0)
            m_out = q.arrows.get((j, v), 0)
            value = yj
            if m_in:
                # y_j * (1 + y_v)^{#(v,j)}
                for _ in range(m_in):
                    value = value.mul_poly(one_plus).div_poly(yv.den)
            if m_out:
                # y_j * (1 + y_v^{-1})^{-#(j,v)}
                for _ in range(m_out):
                    value = value.mul_poly(yv.num).div_poly(one_plus)
            new_y[j] = value
        return YSeed(q.mutate(v), new_y, self.trail + (v,))

    def apply(self, steps: Iterable[VertexId]) -> "YSeed":
        seed = self
        for v in steps:
            seed = seed.mutate(v)
        return seed


def y_mutate(s: YSeed, v: VertexId) -> YSeed:
    return s.mutate(v)
