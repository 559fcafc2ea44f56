"""Sparse integer polynomials in the model variables a_i, l(i,j), s(i,j).

A monomial is a sorted tuple of integer variable codes, one entry per
factor (``a1^2 * l(1,2)`` is ``(a1, a1, l12)``).  Variable codes sort in
the global order: every ``a_i`` by ``i``, then every ``l(i,j)``
lexicographically, then every ``s(i,j)`` lexicographically, so plain tuple
comparison on same-length monomials is the lexicographic term order.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Union

from .errors import AlgebraError, ParseError

A, LAMBDA, SIGMA = 0, 1, 2
_KIND_BASE = 1_000_000
_INDEX_BASE = 1_000

Monomial = tuple[int, ...]


class ModelVariable(NamedTuple):
    """One indeterminate: ``a_i`` (j = 0), ``l(i,j)`` or ``s(i,j)`` with i <= j."""

    kind: int
    i: int
    j: int = 0

    @property
    def code(self) -> int:
        return self.kind * _KIND_BASE + self.i * _INDEX_BASE + self.j

    def __str__(self) -> str:
        if self.kind == A:
            return f"a{self.i}"
        prefix = "l" if self.kind == LAMBDA else "s"
        return f"{prefix}({self.i},{self.j})"


def node_variance(i: int) -> ModelVariable:
    return ModelVariable(A, i, 0)


def edge_weight(i: int, j: int) -> ModelVariable:
    if not i < j:
        raise AlgebraError(f"edge weight l({i},{j}) needs i < j")
    return ModelVariable(LAMBDA, i, j)


def covariance(i: int, j: int) -> ModelVariable:
    if i > j:
        i, j = j, i
    return ModelVariable(SIGMA, i, j)


def decode(code: int) -> ModelVariable:
    kind, rest = divmod(code, _KIND_BASE)
    i, j = divmod(rest, _INDEX_BASE)
    return ModelVariable(kind, i, j)


def _mono_str(mono: Monomial) -> str:
    parts = []
    k = 0
    while k < len(mono):
        code = mono[k]
        e = 1
        while k + e < len(mono) and mono[k + e] == code:
            e += 1
        name = str(decode(code))
        parts.append(name if e == 1 else f"{name}^{e}")
        k += e
    return "*".join(parts)


def _order_key(mono: Monomial) -> tuple[int, Monomial]:
    # graded first (higher total degree earlier), then lexicographic
    return (-len(mono), mono)


Scalar = Union[int, "Poly"]


class Poly:
    """Immutable polynomial with integer coefficients; the empty map is zero."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        if terms:
            self._terms = {m: c for m, c in terms.items() if c}
        else:
            self._terms = {}
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, int]) -> "Poly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def var(cls, v: ModelVariable) -> "Poly":
        return cls._raw({(v.code,): 1})

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls._raw({(): c} if c else {})

    # -- inspection ----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def ordered_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self._terms.items(), key=lambda t: _order_key(t[0]))

    def variables(self) -> set[ModelVariable]:
        return {decode(c) for m in self._terms for c in m}

    def kinds(self) -> set[int]:
        return {c // _KIND_BASE for m in self._terms for c in m}

    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def monomial_factors(self, mono: Monomial) -> list[ModelVariable]:
        return [decode(c) for c in mono]

    # -- arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other: Scalar) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly.const(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: Scalar) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Scalar) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Poly":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return Poly._raw({})
        out: dict[Monomial, int] = {}
        get = out.get
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(sorted(m1 + m2))
                s = get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise AlgebraError("negative exponent")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- evaluation / substitution --------------------------------------------

    def evaluate(self, values: Callable[[ModelVariable], Fraction | int]) -> Fraction:
        cache: dict[int, Fraction] = {}
        total = Fraction(0)
        for mono, c in self._terms.items():
            term = Fraction(c)
            for code in mono:
                if code not in cache:
                    cache[code] = Fraction(values(decode(code)))
                term *= cache[code]
            total += term
        return total

    def normalized_sign(self) -> "Poly":
        """``self`` or ``-self``, whichever has a positive leading coefficient."""
        if not self._terms:
            return self
        lead = self.ordered_terms()[0][1]
        return self if lead > 0 else -self

    def rename_sigma(self, f: Callable[[int], int]) -> "Poly":
        """Apply the vertex map ``f`` to the indices of every s-variable."""
        out: dict[Monomial, int] = {}
        for mono, c in self._terms.items():
            codes = []
            for code in mono:
                v = decode(code)
                if v.kind != SIGMA:
                    raise AlgebraError("rename_sigma needs a polynomial in s-variables")
                codes.append(covariance(f(v.i), f(v.j)).code)
            m = tuple(sorted(codes))
            out[m] = out.get(m, 0) + c
        return Poly(out)

    # -- text ------------------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


def a(i: int) -> Poly:
    return Poly.var(node_variance(i))


def lam(i: int, j: int) -> Poly:
    return Poly.var(edge_weight(i, j))


def sigma(i: int, j: int) -> Poly:
    return Poly.var(covariance(i, j))


def format_poly(p: Poly) -> str:
    """Canonical printed form: graded-lex order, ``*`` between factors."""
    if p.is_zero():
        return "0"
    out = []
    for k, (mono, c) in enumerate(p.ordered_terms()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = _mono_str(mono)
        else:
            body = f"{mag}*{_mono_str(mono)}"
        if k == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<a>a(?P<ai>\d+))|(?P<ls>[ls])\(\s*(?P<i>\d+)\s*,\s*(?P<j>\d+)\s*\)"
    r"|(?P<op>[-+*^]))"
)


def _tokens(text: str) -> Iterator[tuple[str, object]]:
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at column {pos + 1}: {text[pos:pos + 12]!r}")
        pos = m.end()
        if m.group("num") is not None:
            yield "num", int(m.group("num"))
        elif m.group("a") is not None:
            yield "var", node_variance(int(m.group("ai")))
        elif m.group("ls") is not None:
            i, j = int(m.group("i")), int(m.group("j"))
            if m.group("ls") == "s":
                yield "var", covariance(i, j)
            else:
                try:
                    yield "var", edge_weight(i, j)
                except AlgebraError as exc:
                    raise ParseError(str(exc)) from None
        else:
            yield "op", m.group("op")


def parse_poly(text: str) -> Poly:
    """Inverse of :func:`format_poly`; also tolerates extra whitespace and newlines."""
    toks = list(_tokens(" ".join(text.split())))
    if not toks:
        raise ParseError("empty polynomial")
    pos = 0
    total: dict[Monomial, int] = {}

    def peek() -> tuple[str, object] | None:
        return toks[pos] if pos < len(toks) else None

    def factor() -> tuple[int, list[int]]:
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ParseError("unexpected end of polynomial")
        kind, val = tok
        pos += 1
        if kind == "num":
            coef, codes = int(val), []  # type: ignore[arg-type]
        elif kind == "var":
            coef, codes = 1, [val.code]  # type: ignore[union-attr]
        else:
            raise ParseError(f"unexpected operator {val!r}")
        if peek() == ("op", "^"):
            pos += 1
            nxt = peek()
            if nxt is None or nxt[0] != "num":
                raise ParseError("exponent must be a non-negative integer")
            pos += 1
            e = int(nxt[1])  # type: ignore[arg-type]
            coef, codes = coef**e, codes * e
        return coef, codes

    sign = 1
    if peek() in (("op", "-"), ("op", "+")):
        sign = -1 if peek() == ("op", "-") else 1
        pos += 1
    while True:
        coef, codes = factor()
        while peek() == ("op", "*"):
            pos += 1
            c2, k2 = factor()
            coef *= c2
            codes += k2
        mono = tuple(sorted(codes))
        total[mono] = total.get(mono, 0) + sign * coef
        tok = peek()
        if tok is None:
            break
        if tok not in (("op", "+"), ("op", "-")):
            raise ParseError(f"expected '+' or '-', got {tok[1]!r}")
        sign = 1 if tok[1] == "+" else -1
        pos += 1
        if peek() is None:
            raise ParseError("dangling operator at end of polynomial")
    return Poly(total)


SigmaMap = Union[Mapping[ModelVariable, Poly], Callable[[int, int], Poly]]


def substitute_sigma(p: Poly, m: SigmaMap) -> Poly:
    """Image of ``p`` under the ring map sending each s(i,j) to ``m[s(i,j)]``.

    ``m`` may be a mapping keyed by :class:`ModelVariable` or a callable
    ``(i, j) -> Poly``.
    """
    images: dict[int, Poly] = {}

    def image(code: int) -> Poly:
        if code in images:
            return images[code]
        v = decode(code)
        if v.kind != SIGMA:
            raise AlgebraError(f"{v} is not a covariance variable")
        if callable(m):
            img = m(v.i, v.j)
        else:
            try:
                img = m[v]
            except KeyError:
                raise AlgebraError(f"no image given for {v}") from None
        images[code] = img
        return img

    terms = []
    for mono, c in p.terms.items():
        term = Poly.const(c)
        for code in mono:
            term = term * image(code)
            if term.is_zero():
                break
        terms.append(term)
    return poly_sum(terms)


def poly_sum(ps: Iterable[Poly]) -> Poly:
    out: dict[Monomial, int] = {}
    for p in ps:
        for mono, c in p.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
    return Poly._raw(out)
