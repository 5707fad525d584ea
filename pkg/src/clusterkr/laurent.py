"""Exact sparse multivariate Laurent polynomials over arbitrary-precision integers.

Representation
--------------
A monomial is a tuple of ``(variable, exponent)`` pairs, sorted by variable
name, with no zero exponents; the empty tuple is the monomial 1.  A
polynomial maps monomials to nonzero ``int`` coefficients:

    x1^2*x2^-1 - 7   ->   {(("x1", 2), ("x2", -1)): 1, (): -7}

Python ints give arbitrary precision for free; coefficients grow without
bound along long mutation sequences.  Variable ids are plain strings,
namespaced by family by the callers ("x.v1.3", "y.v1.3", "t.v1.3", "Y.q5").

All values are immutable by convention: every operation returns a fresh
polynomial and never aliases term dictionaries with the arguments.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .errors import NonExactDivision, UsageError

Monomial = tuple[tuple[str, int], ...]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    """Product of two monomials (merge of sorted exponent lists)."""
    if not a:
        return b
    if not b:
        return a
    out: list[tuple[str, int]] = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            e = ea + eb
            if e:
                out.append((va, e))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_pow(m: Monomial, e: int) -> Monomial:
    if e == 1:
        return m
    return tuple((v, k * e) for v, k in m) if e else ()


def mono_inverse(m: Monomial) -> Monomial:
    return tuple((v, -k) for v, k in m)


class LaurentPoly:
    """Immutable sparse Laurent polynomial with exact integer coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None) -> None:
        # Trusted constructor: callers must not pass zero coefficients.
        self.terms: dict[Monomial, int] = dict(terms) if terms else {}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({(): c}) if c else cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({(): 1})

    @classmethod
    def variable(cls, name: str, exponent: int = 1) -> "LaurentPoly":
        if exponent == 0:
            return cls.one()
        return cls({((name, exponent),): 1})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: int = 1) -> "LaurentPoly":
        if coeff == 0:
            return cls()
        key = tuple(sorted((v, e) for v, e in exps.items() if e != 0))
        return cls({key: coeff})

    # -- inspection --------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self.terms.items())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if isinstance(other, int):
            return self.terms == ({(): other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def variables(self) -> set[str]:
        return {v for mono in self.terms for v, _ in mono}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def as_monomial(self) -> tuple[Monomial, int]:
        """The single (monomial, coeff) term; UsageError if not a monomial."""
        if len(self.terms) != 1:
            raise UsageError(f"not a monomial: {self}")
        return next(iter(self.terms.items()))

    def constant_term(self) -> int:
        return self.terms.get((), 0)

    # -- ring operations ----------------------------------------------------

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self.terms.items()})

    def __add__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            elif m in out:
                del out[m]
        return LaurentPoly(out)

    __radd__ = __add__

    def __sub__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other: int) -> "LaurentPoly":
        return LaurentPoly.const(other) + (-self)

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly()
            if other == 1:
                return self
            return LaurentPoly({m: c * other for m, c in self.terms.items()})
        a, b = self.terms, other.terms
        if not a or not b:
            return LaurentPoly()
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 1:
            (ma, ca), = a.items()
            if not ma:
                return LaurentPoly({m: c * ca for m, c in b.items()})
            return LaurentPoly({mono_mul(m, ma): c * ca for m, c in b.items()})
        out: dict[Monomial, int] = {}
        get = out.get
        b_items = list(b.items())
        for ma, ca in a.items():
            for mb, cb in b_items:
                m = mono_mul(ma, mb)
                s = get(m, 0) + ca * cb
                if s:
                    out[m] = s
                elif m in out:
                    del out[m]
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LaurentPoly":
        if e < 0:
            mono, coeff = self.as_monomial()
            if coeff not in (1, -1):
                raise UsageError(
                    f"negative power of non-invertible monomial: {self}"
                )
            return LaurentPoly({mono_pow(mono, e): coeff if e % 2 else 1})
        if e == 0:
            return LaurentPoly.one()
        result = LaurentPoly.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- exact division -----------------------------------------------------

    def div_exact(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient ``self / divisor`` in the Laurent ring.

        Raises :class:`NonExactDivision` when the quotient does not exist
        with integer coefficients -- inside mutation code this is a
        Laurent-phenomenon violation, i.e. a bug upstream.
        """
        if not divisor:
            raise UsageError("division by zero polynomial")
        if not self:
            return LaurentPoly()
        if len(divisor.terms) == 1:
            (dm, dc), = divisor.terms.items()
            inv = mono_inverse(dm)
            out: dict[Monomial, int] = {}
            for m, c in self.terms.items():
                q, r = divmod(c, dc)
                if r:
                    raise NonExactDivision(
                        "coefficient not divisible in monomial division",
                        coeff=c, divisor_coeff=dc,
                    )
                out[mono_mul(m, inv)] = q
            return LaurentPoly(out)
        return self._div_exact_general(divisor)

    def _div_exact_general(self, divisor: "LaurentPoly") -> "LaurentPoly":
        # Densify over the union of variables, shift out the per-variable
        # minimum exponents (bottom degrees are additive under multiplication,
        # so exactness survives the shift), then do classical sparse
        # polynomial division with the lex leading term.
        vars_ = sorted(self.variables() | divisor.variables())
        index = {v: i for i, v in enumerate(vars_)}
        nv = len(vars_)

        def densify(p: LaurentPoly) -> dict[tuple[int, ...], int]:
            dense: dict[tuple[int, ...], int] = {}
            for mono, c in p.terms.items():
                vec = [0] * nv
                for v, e in mono:
                    vec[index[v]] = e
                dense[tuple(vec)] = c
            return dense

        num = densify(self)
        den = densify(divisor)
        num_shift = [min(vec[i] for vec in num) for i in range(nv)]
        den_shift = [min(vec[i] for vec in den) for i in range(nv)]
        num = {tuple(e - s for e, s in zip(vec, num_shift)): c for vec, c in num.items()}
        den = {tuple(e - s for e, s in zip(vec, den_shift)): c for vec, c in den.items()}

        den_lead = max(den)
        den_lc = den[den_lead]
        den_items = list(den.items())
        quot: dict[tuple[int, ...], int] = {}
        rem = num
        while rem:
            lead = max(rem)
            shift = tuple(a - b for a, b in zip(lead, den_lead))
            if any(e < 0 for e in shift):
                raise NonExactDivision("leading monomial not divisible")
            q, r = divmod(rem[lead], den_lc)
            if r:
                raise NonExactDivision(
                    "leading coefficient not divisible",
                    coeff=rem[lead], divisor_coeff=den_lc,
                )
            quot[shift] = q
            for vec, c in den_items:
                key = tuple(a + b for a, b in zip(vec, shift))
                s = rem.get(key, 0) - q * c
                if s:
                    rem[key] = s
                elif key in rem:
                    del rem[key]

        offset = [a - b for a, b in zip(num_shift, den_shift)]
        out: dict[Monomial, int] = {}
        for vec, c in quot.items():
            mono = tuple(
                (vars_[i], e)
                for i, e in enumerate(x + o for x, o in zip(vec, offset))
                if e
            )
            out[tuple(mono)] = c
        return LaurentPoly(out)

    # -- substitution and evaluation -----------------------------------------

    def substitute(self, mapping: Mapping[str, "LaurentPoly"]) -> "LaurentPoly":
        """Substitute ``mapping[v]`` for every variable ``v``.

        The map must cover every variable of the polynomial.  A negative
        exponent requires its image to be an invertible monomial
        (single term, coefficient +-1); otherwise UsageError.
        """
        missing = self.variables() - set(mapping)
        if missing:
            raise UsageError(f"substitution map misses variables: {sorted(missing)}")
        power_cache: dict[tuple[str, int], LaurentPoly] = {}

        def image_power(v: str, e: int) -> LaurentPoly:
            key = (v, e)
            cached = power_cache.get(key)
            if cached is None:
                img = mapping[v]
                if e < 0 and not img.is_monomial():
                    raise UsageError(
                        f"negative exponent of {v} needs a monomial image"
                    )
                cached = power_cache[key] = img ** e
            return cached

        total = LaurentPoly()
        for mono, c in self.terms.items():
            term = LaurentPoly.const(c)
            for v, e in mono:
                term = term * image_power(v, e)
            total = total + term
        return total

    def rename_variables(self, mapping: Mapping[str, str]) -> "LaurentPoly":
        """Rename variables; ids not in the map are kept as-is."""
        out: dict[Monomial, int] = {}
        for mono, c in self.terms.items():
            key = tuple(sorted((mapping.get(v, v), e) for v, e in mono))
            if key in out:
                raise UsageError("variable renaming is not injective on terms")
            out[key] = c
        return LaurentPoly(out)

    def evaluate_all_one(self) -> int:
        """Value with every variable set to 1 (the coefficient sum)."""
        return sum(self.terms.values())

    # -- serialization -------------------------------------------------------

    def canonical_terms(self) -> list[tuple[Monomial, int]]:
        """Terms sorted lexicographically on (sorted variable ids, exponent)."""
        return sorted(self.terms.items(), key=lambda t: t[0])

    def to_obj(self) -> dict:
        return {
            "terms": [
                {"coeff": str(c), "exps": {v: e for v, e in mono}}
                for mono, c in self.canonical_terms()
            ]
        }

    @classmethod
    def from_obj(cls, obj: Mapping) -> "LaurentPoly":
        try:
            terms_in: Iterable[Mapping] = obj["terms"]
        except (KeyError, TypeError):
            raise UsageError("polynomial JSON must have a 'terms' list") from None
        out: dict[Monomial, int] = {}
        for entry in terms_in:
            coeff = int(entry["coeff"])
            mono = tuple(sorted((str(v), int(e)) for v, e in entry["exps"].items() if int(e)))
            if coeff == 0:
                raise UsageError("zero coefficient in polynomial JSON")
            if mono in out:
                raise UsageError("duplicate monomial in polynomial JSON")
            out[mono] = coeff
        return cls(out)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for mono, c in self.canonical_terms():
            factors = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in mono
            )
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append(factors)
            elif c == -1:
                parts.append(f"-{factors}")
            else:
                parts.append(f"{c}*{factors}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")


class LaurentFraction:
    """Quotient of two Laurent polynomials in lowest monomial form.

    Used for Y-seed variables and the p-map, where values are honest
    fractions.  Common monomial content is always cancelled; common
    polynomial factors are cancelled opportunistically via exact division
    (full gcd is out of scope and not needed: mutation only ever multiplies
    and divides by factors it introduced earlier).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None) -> None:
        if den is None:
            den = LaurentPoly.one()
        if not den:
            raise UsageError("fraction with zero denominator")
        num, den = self._normalize(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _normalize(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
        if not num:
            return LaurentPoly.zero(), LaurentPoly.one()
        # strip common monomial content so the pair is canonical up to sign
        def content(p: LaurentPoly) -> dict[str, int]:
            mins: dict[str, int] = {}
            counts: dict[str, int] = {}
            for mono in p.terms:
                for v, e in mono:
                    counts[v] = counts.get(v, 0) + 1
                    mins[v] = min(mins.get(v, e), e)
            for v, c in counts.items():
                if c < len(p.terms):
                    # some term misses v, i.e. carries exponent 0
                    mins[v] = min(mins[v], 0)
            return mins

        nc, dc = content(num), content(den)
        common = {v: min(nc.get(v, 0), dc.get(v, 0)) for v in set(nc) | set(dc)}
        shift = {v: e for v, e in common.items() if e}
        if shift:
            inv = LaurentPoly.monomial({v: -e for v, e in shift.items()})
            num = num * inv
            den = den * inv
        # cancel a shared polynomial factor when exact division happens to work
        if len(den.terms) > 1 or den.terms.get((), 0) not in (1, -1):
            try:
                q = num.div_exact(den)
            except NonExactDivision:
                pass
            else:
                num, den = q, LaurentPoly.one()
        lead_c = den.terms[max(den.terms)]
        if lead_c < 0:
            num, den = -num, -den
        return num, den

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentFraction):
            return self.num * other.den == other.num * self.den
        if isinstance(other, (LaurentPoly, int)):
            other_p = other if isinstance(other, LaurentPoly) else LaurentPoly.const(other)
            return self.num == other_p * self.den
        return NotImplemented

    def __hash__(self) -> int:  # pragma: no cover - not used as dict key
        return hash((self.num, self.den))

    def inverse(self) -> "LaurentFraction":
        return LaurentFraction(self.den, self.num)

    def mul_poly(self, p: LaurentPoly) -> "LaurentFraction":
        try:
            return LaurentFraction(self.num, self.den.div_exact(p))
        except NonExactDivision:
            return LaurentFraction(self.num * p, self.den)

    def div_poly(self, p: LaurentPoly) -> "LaurentFraction":
        if not p:
            raise UsageError("division by zero polynomial")
        try:
            return LaurentFraction(self.num.div_exact(p), self.den)
        except NonExactDivision:
            return LaurentFraction(self.num, self.den * p)

    def mul(self, other: "LaurentFraction") -> "LaurentFraction":
        return self.mul_poly(other.num).div_poly(other.den)

    def add(self, other: "LaurentFraction") -> "LaurentFraction":
        return LaurentFraction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def as_poly(self) -> LaurentPoly:
        """The exact polynomial value; NonExactDivision if not a polynomial."""
        return self.num.div_exact(self.den)

    def to_obj(self) -> dict:
        return {"num": self.num.to_obj(), "den": self.den.to_obj()}

    def __repr__(self) -> str:
        return f"({self.num}) / ({self.den})"
