"""Cluster Donaldson-Thomas transformations.

DT maps initial cluster variables to the sigma-relabeled variables of any
reddening sequence; the result is sequence-independent because g-vectors
determine cluster variables.  Three routes are shipped:

* ``dt_transform``      -- run a reddening sequence (the reference oracle),
* ``dt_closed_form_A``  -- the explicit product formula for the iced A_{n+1} line,
* ``dt_via_qcharacters``-- per-vertex KR q-characters converted back to
  x-coordinates (the sl2 closed form where available, the level-sweep route
  elsewhere), asserted equal to the mutation route.

Images are coefficient-free Laurent polynomials in the initial x-variables;
frozen vertices map to themselves and are omitted from the image table.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EngineFault, UsageError
from .laurent import LaurentPoly
from .quiver import DynkinType, Quiver, VertexId, hl_truncation, line_quiver
from .greenseq import (
    MutationSequence,
    classify_sequence,
    source_mgs,
    standard_source_sink,
)
from .krchar import hl_sweep_character, sl2_closed_form_t, t_to_x_variables
from .seed import Seed


@dataclass
class DTMap:
    """Images of the mutable initial variables under the DT transformation."""

    images: dict[VertexId, LaurentPoly]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DTMap):
            return NotImplemented
        return self.images == other.images

    def to_obj(self) -> dict:
        return {
            "images": {
                str(v): self.images[v].to_obj() for v in sorted(self.images, key=str)
            }
        }


def dt_transform(quiver: Quiver, sequence: MutationSequence | None = None) -> DTMap:
    """DT via a reddening sequence: x_v -> (mu_S x)_{sigma(v)}.

    Without an explicit sequence a source MGS is constructed, which needs
    the quiver to be acyclic; triangular-product callers supply the
    source-sink MGS instead.
    """
    if sequence is None:
        if not quiver.is_acyclic():
            raise UsageError(
                "no reddening sequence available: quiver is not acyclic, "
                "supply one explicitly"
            )
        sequence = source_mgs(quiver)
    report = classify_sequence(quiver, sequence)
    if report.sigma is None:
        raise UsageError(f"sequence is not reddening (kind={report.kind})")
    seed = Seed.initial(quiver, tracking=False).apply(sequence)
    images = {v: seed.x[report.sigma[v]] for v in report.basis}
    return DTMap(images)


def dt_closed_form_A(n: int, iced: bool = True) -> DTMap:
    """Closed form on the A-type line: DT(x)_a = (x_{n+1}/x_a)(1 + y_a + ... + y_a..y_n).

    Here y_j = x_{j-1}/x_{j+1} with the boundary convention x_0 = 1; the
    unfrozen variant additionally sets x_{n+1} = 1.
    """
    if n < 1:
        raise UsageError("need n >= 1")

    def xv(i: int) -> dict[str, int]:
        # x_0 = 1 and, when unfrozen, x_{n+1} = 1
        if i == 0 or (not iced and i == n + 1):
            return {}
        return {f"x.{i}": 1}

    images: dict[VertexId, LaurentPoly] = {}
    for a in range(1, n + 1):
        total = LaurentPoly.one()
        running = LaurentPoly.one()
        for j in range(a, n + 1):
            y_j = LaurentPoly.monomial(
                {**{k: e for k, e in xv(j - 1).items()},
                 **{k: -e for k, e in xv(j + 1).items()}}
            )
            running = running * y_j
            total = total + running
        lead = LaurentPoly.monomial(
            {**{k: e for k, e in xv(n + 1).items()},
             **{k: -e for k, e in xv(a).items()}}
        )
        images[VertexId(a)] = lead * total
    return DTMap(images)


def dt_product_mutation(dtype: DynkinType, m: int) -> DTMap:
    """Mutation-route DT for Q x| A_{m+1} with the top level frozen."""
    if m < 1:
        raise UsageError("need m >= 1")
    quiver = hl_truncation(dtype, m + 1)
    return dt_transform(quiver, standard_source_sink(dtype, m))


def dt_via_qcharacters(dtype: DynkinType, m: int) -> DTMap:
    """DT for Q x| A_{m+1} assembled from KR q-characters.

    x_{v,j} maps to chi_q(W^{(v)}_{m+1-j, m+1}) pushed back through
    t_{v,k} = x_{v,k}/x_{v,k-1}; characters with j <= h/2 come out
    truncated, which does not affect the x-coordinate value.  The result is
    checked against the mutation route exactly; disagreement is a fault.
    """
    if m < 1:
        raise UsageError("need m >= 1")
    reference = dt_product_mutation(dtype, m)
    images: dict[VertexId, LaurentPoly] = {}
    for node in range(1, dtype.rank + 1):
        name = f"v{node}"
        for j in range(1, m + 1):
            k = m + 1 - j
            if dtype.family == "A" and dtype.rank == 1:
                char_t = sl2_closed_form_t(k, j)
            else:
                char_t = hl_sweep_character(dtype, d=j, k=k, node=node).poly
            vertex = VertexId(name, j)
            images[vertex] = t_to_x_variables(char_t)
            if images[vertex] != reference.images[vertex]:
                raise EngineFault(
                    "q-character route disagrees with mutation-based DT",
                    vertex=str(vertex),
                    dtype=str(dtype),
                    m=m,
                )
    return DTMap(images)


def double_bruhat_dt(dtype: DynkinType) -> DTMap:
    """DT at the double Bruhat specialization m+1 = h/2 (even Coxeter number only)."""
    h = dtype.coxeter_number
    if h % 2:
        raise UsageError(f"{dtype} has odd Coxeter number {h}; configuration undefined")
    m = h // 2 - 1
    if m < 1:
        raise UsageError(f"{dtype} has h/2 = {h // 2} <= 1, no mutable levels")
    return dt_via_qcharacters(dtype, m)


def dt_line_reference(n: int, iced: bool = True) -> DTMap:
    """Mutation-route DT on the (iced) A-type line, for cross-checks."""
    quiver = line_quiver(n + 1, frozen_top=True) if iced else line_quiver(n)
    return dt_transform(quiver)
