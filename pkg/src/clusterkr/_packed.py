"""Packed-exponent polynomial arithmetic for long mutation runs.

A mutation run works in a fixed variable universe (the x-variables of the
quiver plus the coefficient y-variables), so every monomial can be encoded
as a single big integer: one 16-bit field per variable holding the biased
exponent ``e + 2^15``.  That turns the inner loops into native integer
arithmetic:

* monomial product   = int addition (minus a precomputed bias vector),
* lex leading term   = ``max()`` over int keys,
* divisibility test  = one subtraction plus a guard-bit mask check.

Exact division is quotient-driven with a lazy max-heap over candidate
leading terms, so it costs about ``|numerator| + |quotient| * |divisor|``
dictionary and heap operations instead of rescanning the remainder.

Values stay packed across an entire run; ``unpack`` is only paid when a
caller actually reads a cluster variable.  Exponents are asserted to stay
far away from the field bounds -- in cluster runs they remain tiny compared
to the +-16k headroom.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Mapping

from .errors import EngineFault, NonExactDivision, UsageError
from .laurent import LaurentPoly, Monomial

_WIDTH = 16
_BIAS = 1 << (_WIDTH - 1)
_LIMIT = _BIAS >> 1  # |exponent| must stay below this

EXPONENT_LIMIT = _LIMIT


def max_abs_exponent(terms: Mapping[int, int], nvars: int) -> int:
    """Exact largest |exponent| across all fields of all packed keys."""
    worst = 0
    mask = (1 << _WIDTH) - 1
    for key in terms:
        while key:
            e = (key & mask) - _BIAS
            if e < 0:
                e = -e
            if e > worst:
                worst = e
            key >>= _WIDTH
    return worst


class PackContext:
    """Fixed variable ordering plus the derived bit-field constants."""

    __slots__ = ("vars", "index", "bias_vec", "zero")

    def __init__(self, variables: Iterable[str]) -> None:
        self.vars = tuple(sorted(set(variables)))
        self.index = {v: i for i, v in enumerate(self.vars)}
        bias = 0
        for i in range(len(self.vars)):
            bias |= _BIAS << (_WIDTH * i)
        self.bias_vec = bias
        self.zero = bias  # the monomial 1: every field holds the bias

    def pack_monomial(self, mono: Monomial) -> int:
        key = self.zero
        for var, e in mono:
            if not -_LIMIT < e < _LIMIT:
                raise EngineFault("exponent out of packing range", var=var, exp=e)
            try:
                i = self.index[var]
            except KeyError:
                raise UsageError(f"variable {var!r} outside the run's universe") from None
            key += e << (_WIDTH * i)
        return key

    def pack(self, poly: LaurentPoly) -> dict[int, int]:
        return {self.pack_monomial(m): c for m, c in poly.terms.items()}

    def unpack_monomial(self, key: int) -> Monomial:
        out = []
        for i, var in enumerate(self.vars):
            e = ((key >> (_WIDTH * i)) & ((1 << _WIDTH) - 1)) - _BIAS
            if e:
                out.append((var, e))
        return tuple(out)

    def unpack(self, terms: Mapping[int, int]) -> LaurentPoly:
        return LaurentPoly({self.unpack_monomial(k): c for k, c in terms.items()})


def p_add(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return out


def p_mul(ctx: PackContext, a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    bias = ctx.bias_vec
    out: dict[int, int] = {}
    get = out.get
    b_items = list(b.items())
    for ka, ca in a.items():
        ka_unbiased = ka - bias
        for kb, cb in b_items:
            k = ka_unbiased + kb
            s = get(k, 0) + ca * cb
            if s:
                out[k] = s
            elif k in out:
                del out[k]
    return out


def p_const(ctx: PackContext, c: int) -> dict[int, int]:
    return {ctx.zero: c} if c else {}


def p_pow(ctx: PackContext, a: dict[int, int], e: int) -> dict[int, int]:
    if e < 0:
        if len(a) != 1:
            raise UsageError("negative power of a non-monomial")
        (k, c), = a.items()
        if c not in (1, -1):
            raise UsageError("negative power of non-invertible monomial")
        inv = ctx.zero - (k - ctx.zero) * (-e)
        return {inv: c if e % 2 else 1}
    result = p_const(ctx, 1)
    base = a
    while e:
        if e & 1:
            result = p_mul(ctx, result, base)
        e >>= 1
        if e:
            base = p_mul(ctx, base, base)
    return result


def p_div_exact(
    ctx: PackContext, num: dict[int, int], den: dict[int, int], **context: object
) -> dict[int, int]:
    """Exact division of packed polynomials (quotient-driven, heap lead)."""
    if not den:
        raise UsageError("division by zero polynomial")
    if not num:
        return {}
    if len(den) == 1:
        (dk, dc), = den.items()
        shift = dk - ctx.zero
        out = {}
        for k, c in num.items():
            q, r = divmod(c, dc)
            if r:
                raise NonExactDivision("coefficient not divisible", **context)
            out[k - shift] = q
        return out

    den_items = sorted(den.items(), reverse=True)
    den_lead, den_lc = den_items[0]
    den_rest = den_items[1:]
    bias = ctx.bias_vec

    # Trailing (lex-min) monomials are multiplicative, so in an exact
    # division every quotient key is >= trail(num) - trail(den); a candidate
    # lead below that floor proves non-exactness and bounds the loop.
    floor = min(num) - min(den) + bias

    rem = dict(num)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    quot: dict[int, int] = {}
    while heap:
        k = -heapq.heappop(heap)
        c = rem.pop(k, 0)
        if not c:
            continue
        qk = k - den_lead + bias  # packed quotient monomial (fields never borrow)
        if qk < floor:
            raise NonExactDivision("remainder below trailing bound", **context)
        q, r = divmod(c, den_lc)
        if r:
            raise NonExactDivision("leading coefficient not divisible", **context)
        quot[qk] = q
        qk_unbiased = qk - bias
        for dk, dc in den_rest:
            key = qk_unbiased + dk
            old = rem.get(key)
            if old is None:
                rem[key] = -q * dc
                heapq.heappush(heap, -key)
            else:
                s = old - q * dc
                if s:
                    rem[key] = s
                else:
                    del rem[key]
    if rem:
        raise NonExactDivision("non-zero remainder", **context)
    return quot
