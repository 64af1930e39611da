"""Ordered groups: element arithmetic, positive cones, intervals and joins.

Every family stores its elements in a canonical form, so Python equality is
equality in the group. A :class:`Cone` bundles a group with a decidable
positive cone and knows how to spell elements as generator words.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, cmp_to_key, lru_cache

from .errors import FamilyMismatch, Infeasible, NotPositive, ParseError

Letter = tuple[str, int]


# ---------------------------------------------------------------- elements


class Element:
    """Common protocol for group elements of every family."""

    def __mul__(self, other):
        if type(other) is not type(self):
            raise FamilyMismatch(f"cannot multiply {type(self).__name__} by {type(other).__name__}")
        return self._mul(other)

    def inverse(self):
        raise NotImplementedError

    def is_identity(self) -> bool:
        raise NotImplementedError

    def sort_key(self):
        raise NotImplementedError


def _reduce_letters(letters) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for name, exp in letters:
        if out and out[-1][0] == name and out[-1][1] == -exp:
            out.pop()
        else:
            out.append((name, exp))
    return tuple(out)


@dataclass(frozen=True)
class FreeWord(Element):
    """Freely reduced word; each letter is ``(generator, +1 or -1)``."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce_letters(self.letters))

    def _mul(self, other):
        return FreeWord(self.letters + other.letters)

    def inverse(self):
        return FreeWord(tuple((n, -e) for n, e in reversed(self.letters)))

    def is_identity(self):
        return not self.letters

    def sort_key(self):
        return (len(self.letters), self.letters)


@dataclass(frozen=True)
class AbelianVec(Element):
    coords: tuple[int, ...]

    def _mul(self, other):
        if len(other.coords) != len(self.coords):
            raise FamilyMismatch("abelian vectors of different rank")
        return AbelianVec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def inverse(self):
        return AbelianVec(tuple(-a for a in self.coords))

    def is_identity(self):
        return not any(self.coords)

    def sort_key(self):
        return self.coords


def _pow2(m: int) -> Fraction:
    return Fraction(2) ** m


@dataclass(frozen=True)
class BS12(Element):
    """``(a, n)`` in BS(1,2) with ``(a,m)(b,n) = (a + 2^m b, m + n)``.

    ``c = (1, 0)`` and ``t = (0, 1)``; ``a`` is a dyadic rational.
    """

    a: Fraction
    n: int

    def __post_init__(self):
        a = Fraction(self.a)
        den = a.denominator
        if den & (den - 1):
            raise ValueError(f"{a} is not dyadic")
        object.__setattr__(self, "a", a)

    def _mul(self, other):
        return BS12(self.a + _pow2(self.n) * other.a, self.n + other.n)

    def inverse(self):
        return BS12(-self.a / _pow2(self.n), -self.n)

    def is_identity(self):
        return self.a == 0 and self.n == 0

    def sort_key(self):
        return (self.n, self.a)


@dataclass(frozen=True)
class Pair(Element):
    left: Element
    right: Element

    def _mul(self, other):
        return Pair(self.left * other.left, self.right * other.right)

    def inverse(self):
        return Pair(self.left.inverse(), self.right.inverse())

    def is_identity(self):
        return self.left.is_identity() and self.right.is_identity()

    def sort_key(self):
        return (self.left.sort_key(), self.right.sort_key())


def _merge_syllables(syllables) -> tuple[tuple[int, Element], ...]:
    out: list[tuple[int, Element]] = []
    for factor, g in syllables:
        if out and out[-1][0] == factor:
            g = out.pop()[1] * g
        if not g.is_identity():
            out.append((factor, g))
    return tuple(out)


@dataclass(frozen=True)
class AltWord(Element):
    """Reduced free-product word: non-identity syllables tagged 1 or 2,
    adjacent syllables from different factors."""

    syllables: tuple[tuple[int, Element], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "syllables", _merge_syllables(self.syllables))

    def _mul(self, other):
        return AltWord(self.syllables + other.syllables)

    def inverse(self):
        return AltWord(tuple((k, g.inverse()) for k, g in reversed(self.syllables)))

    def is_identity(self):
        return not self.syllables

    def sort_key(self):
        return (len(self.syllables), tuple((k, g.sort_key()) for k, g in self.syllables))


@dataclass(frozen=True)
class WreathElem(Element):
    """``(f, h)`` in G wr H; ``f`` is a sorted association list H -> G."""

    support: tuple[tuple[Element, Element], ...]
    shift: Element

    def __post_init__(self):
        items = [(k, v) for k, v in self.support if not v.is_identity()]
        items.sort(key=lambda kv: kv[0].sort_key())
        object.__setattr__(self, "support", tuple(items))

    def _mul(self, other):
        values = dict(self.support)
        for k, v in other.support:
            k = self.shift * k
            values[k] = values[k] * v if k in values else v
        return WreathElem(tuple(values.items()), self.shift * other.shift)

    def inverse(self):
        back = self.shift.inverse()
        return WreathElem(tuple((back * k, v.inverse()) for k, v in self.support), back)

    def is_identity(self):
        return not self.support and self.shift.is_identity()

    def sort_key(self):
        return (tuple((k.sort_key(), v.sort_key()) for k, v in self.support), self.shift.sort_key())


# ------------------------------------------------------------------- cones


def _fmt_letter(name: str, exp: int) -> str:
    return name if exp == 1 else f"{name}^-1"


def _qualify(left: tuple[str, ...], right: tuple[str, ...]):
    if set(left) & set(right):
        return tuple(f"1.{n}" for n in left), tuple(f"2.{n}" for n in right)
    return left, right


class Cone:
    """A group together with a positive cone P (P ∩ P⁻¹ = {1}).

    Subclasses provide canonical arithmetic through their element type and
    closed-form membership, interval and join algorithms.
    """

    def identity(self) -> Element:
        raise NotImplementedError

    def generator_names(self) -> tuple[str, ...]:
        raise NotImplementedError

    def generators(self) -> dict[str, Element]:
        raise NotImplementedError

    def positive_generators(self) -> tuple[Element, ...]:
        raise NotImplementedError

    def owns(self, g) -> bool:
        raise NotImplementedError

    def is_positive(self, g: Element) -> bool:
        raise NotImplementedError

    def _join(self, x: Element, y: Element) -> Element | None:
        raise Infeasible(f"{self.spec()} has no join algorithm")

    def _interval(self, p: Element) -> frozenset:
        raise Infeasible(f"{self.spec()} cannot enumerate intervals")

    def letters(self, g: Element) -> list[Letter]:
        """A word in the group generators that evaluates to ``g``.

        For positive ``g`` the word uses positive generators only and is of
        minimal length.
        """
        raise NotImplementedError

    def length(self, p: Element) -> int:
        """Fewest positive generators needed to spell ``p``."""
        raise NotImplementedError

    def radius(self, p: Element) -> int:
        """A length bound covering every element of ``[1, p]``."""
        return self.length(p)

    def render(self, g: Element) -> str:
        raise NotImplementedError

    def spec(self) -> str:
        raise NotImplementedError

    # shared behaviour

    def check(self, *gs):
        for g in gs:
            if not self.owns(g):
                raise FamilyMismatch(f"{g!r} is not an element of {self.spec()}")

    def render_word(self, g: Element) -> str:
        return " ".join(_fmt_letter(n, e) for n, e in self.letters(g)) or "e"

    def leq(self, a: Element, b: Element) -> bool:
        return self.is_positive(a.inverse() * b)

    def join(self, x: Element, y: Element) -> Element | None:
        self.check(x, y)
        for g in (x, y):
            if not self.is_positive(g):
                raise NotPositive(self.render(g))
        return self._join(x, y)

    def interval(self, p: Element) -> frozenset:
        self.check(p)
        if not self.is_positive(p):
            raise NotPositive(self.render(p))
        return self._interval(p)


@dataclass(frozen=True)
class FreeCone(Cone):
    """Free group on ``gens`` with the free monoid as positive cone."""

    gens: tuple[str, ...]

    def identity(self):
        return FreeWord()

    def generator_names(self):
        return self.gens

    def generators(self):
        return {n: FreeWord(((n, 1),)) for n in self.gens}

    def positive_generators(self):
        return tuple(self.generators().values())

    def owns(self, g):
        return isinstance(g, FreeWord) and all(n in self.gens for n, _ in g.letters)

    def is_positive(self, g):
        return all(e == 1 for _, e in g.letters)

    def _join(self, x, y):
        if self.leq(x, y):
            return y
        if self.leq(y, x):
            return x
        return None

    def _interval(self, p):
        return frozenset(FreeWord(p.letters[:i]) for i in range(len(p.letters) + 1))

    def letters(self, g):
        return list(g.letters)

    def length(self, p):
        return len(p.letters)

    def render(self, g):
        return self.render_word(g)

    def spec(self):
        return "free " + " ".join(self.gens)


def abelian_names(rank: int) -> tuple[str, ...]:
    if rank <= 3:
        return tuple("xyz"[:rank])
    return tuple(f"x{i}" for i in range(1, rank + 1))


@dataclass(frozen=True)
class AbelianCone(Cone):
    """ℤ^k ordered by ℕ^k."""

    rank: int

    def identity(self):
        return AbelianVec((0,) * self.rank)

    def unit(self, i: int) -> AbelianVec:
        return AbelianVec(tuple(int(j == i) for j in range(self.rank)))

    def generator_names(self):
        return abelian_names(self.rank)

    def generators(self):
        return {n: self.unit(i) for i, n in enumerate(self.generator_names())}

    def positive_generators(self):
        return tuple(self.unit(i) for i in range(self.rank))

    def owns(self, g):
        return isinstance(g, AbelianVec) and len(g.coords) == self.rank

    def is_positive(self, g):
        return all(a >= 0 for a in g.coords)

    def _join(self, x, y):
        return AbelianVec(tuple(max(a, b) for a, b in zip(x.coords, y.coords)))

    def _interval(self, p):
        return frozenset(AbelianVec(c) for c in itertools.product(*(range(a + 1) for a in p.coords)))

    def letters(self, g):
        names = self.generator_names()
        return [(names[i], 1 if a > 0 else -1) for i, a in enumerate(g.coords) for _ in range(abs(a))]

    def length(self, p):
        return sum(p.coords)

    def render(self, g):
        if self.rank == 1:
            return str(g.coords[0])
        return "(" + ",".join(map(str, g.coords)) + ")"

    def spec(self):
        return f"free_abelian {self.rank}"


C = BS12(Fraction(1), 0)
T = BS12(Fraction(0), 1)
CT = C * T


class _BSCone(Cone):
    def identity(self):
        return BS12(Fraction(0), 0)

    def generator_names(self):
        return ("c", "t")

    def generators(self):
        return {"c": C, "t": T}

    def owns(self, g):
        return isinstance(g, BS12)

    def letters(self, g):
        if self.is_positive(g):
            return self._positive_letters(g)
        k = g.a.denominator.bit_length() - 1
        m = g.a.numerator
        word = [("t", -1)] * k + [("c", 1 if m > 0 else -1)] * abs(m)
        steps = k + g.n
        return word + [("t", 1 if steps > 0 else -1)] * abs(steps)

    def render(self, g):
        return f"({g.a.numerator}/{g.a.denominator}, {g.n})"


@dataclass(frozen=True)
class BSCtCone(_BSCone):
    """BS(1,2) with the monoid generated by c and t: {(a, n) : a, n ∈ ℤ≥0}."""

    def positive_generators(self):
        return (C, T)

    def is_positive(self, g):
        return g.a.denominator == 1 and g.a >= 0 and g.n >= 0

    def _join(self, x, y):
        if x.n > y.n:
            x, y = y, x
        a, m, b, n = int(x.a), x.n, int(y.a), y.n
        if (a - b) % (1 << m):
            return None
        # least value >= max(a, b) congruent to b mod 2^n
        mod = 1 << n
        lo = max(a, b)
        return BS12(Fraction(lo + (b - lo) % mod), n)

    def _interval(self, p):
        a, n = int(p.a), p.n
        return frozenset(
            BS12(Fraction(x), k) for k in range(n + 1) for x in range(a % (1 << k), a + 1, 1 << k)
        )

    def _counts(self, p) -> list[int]:
        # greedy: one c after j letters t contributes 2^j
        a, n = int(p.a), p.n
        return [(a >> j) & 1 for j in range(n)] + [a >> n]

    def _positive_letters(self, p):
        word: list[Letter] = []
        for j, count in enumerate(self._counts(p)):
            if j:
                word.append(("t", 1))
            word.extend([("c", 1)] * count)
        return word

    def length(self, p):
        return sum(self._counts(p)) + p.n

    def radius(self, p):
        # every (x, k) <= (a, n) has x <= a and k <= n, and c^x t^k spells it
        return int(p.a) + p.n

    def spec(self):
        return "bs12_ct"


@dataclass(frozen=True)
class BSQCone(_BSCone):
    """BS(1,2) with the monoid generated by t and ct.

    ``(i, j)`` is positive iff ``0 <= i < 2^j``: the word's k-th letter
    (t or ct) is bit k-1 of ``i``, least significant first.
    """

    def positive_generators(self):
        return (T, CT)

    def is_positive(self, g):
        return g.n >= 0 and g.a.denominator == 1 and 0 <= g.a < (1 << g.n)

    def _join(self, x, y):
        if self.leq(x, y):
            return y
        if self.leq(y, x):
            return x
        return None

    def _interval(self, p):
        i = int(p.a)
        return frozenset(BS12(Fraction(i % (1 << k)), k) for k in range(p.n + 1))

    def _positive_letters(self, p):
        i = int(p.a)
        word: list[Letter] = []
        for k in range(p.n):
            if (i >> k) & 1:
                word.append(("c", 1))
            word.append(("t", 1))
        return word

    def length(self, p):
        return p.n

    def spec(self):
        return "bs12_q"


class _BinaryCone(Cone):
    """Shared plumbing for cones built from two factor cones."""

    left: Cone
    right: Cone

    def factor(self, k: int) -> Cone:
        return self.left if k == 1 else self.right

    @cached_property
    def _names(self):
        return _qualify(self.left.generator_names(), self.right.generator_names())

    def generator_names(self):
        return self._names[0] + self._names[1]

    def _public(self, k: int, letters) -> list[Letter]:
        inner = self.factor(k).generator_names()
        public = dict(zip(inner, self._names[k - 1]))
        return [(public[n], e) for n, e in letters]

    def generators(self):
        out = {}
        for k in (1, 2):
            for public, g in zip(self._names[k - 1], self.factor(k).generators().values()):
                out[public] = self.embed(k, g)
        return out

    def positive_generators(self):
        return tuple(self.embed(k, g) for k in (1, 2) for g in self.factor(k).positive_generators())

    def embed(self, k: int, g: Element) -> Element:
        raise NotImplementedError


@dataclass(frozen=True)
class ProductCone(_BinaryCone):
    left: Cone
    right: Cone

    def identity(self):
        return Pair(self.left.identity(), self.right.identity())

    def embed(self, k, g):
        return Pair(g, self.right.identity()) if k == 1 else Pair(self.left.identity(), g)

    def owns(self, g):
        return isinstance(g, Pair) and self.left.owns(g.left) and self.right.owns(g.right)

    def is_positive(self, g):
        return self.left.is_positive(g.left) and self.right.is_positive(g.right)

    def _join(self, x, y):
        a = self.left._join(x.left, y.left)
        b = self.right._join(x.right, y.right)
        return None if a is None or b is None else Pair(a, b)

    def _interval(self, p):
        return frozenset(
            Pair(a, b) for a in self.left._interval(p.left) for b in self.right._interval(p.right)
        )

    def letters(self, g):
        return self._public(1, self.left.letters(g.left)) + self._public(2, self.right.letters(g.right))

    def length(self, p):
        return self.left.length(p.left) + self.right.length(p.right)

    def radius(self, p):
        return self.left.radius(p.left) + self.right.radius(p.right)

    def render(self, g):
        return f"<{self.left.render(g.left)}, {self.right.render(g.right)}>"

    def spec(self):
        return f"product({self.left.spec()}, {self.right.spec()})"


@dataclass(frozen=True)
class FreeProductCone(_BinaryCone):
    """G1 * G2 ordered by P1 * P2."""

    left: Cone
    right: Cone

    def identity(self):
        return AltWord()

    def embed(self, k, g):
        return AltWord(((k, g),))

    def owns(self, g):
        return isinstance(g, AltWord) and all(self.factor(k).owns(s) for k, s in g.syllables)

    def is_positive(self, g):
        return all(self.factor(k).is_positive(s) for k, s in g.syllables)

    def alt_decompose(self, p: AltWord) -> list[Element]:
        """The alternating factors ``p1 … p2n`` of a positive element.

        Odd positions come from the first factor, even ones from the second;
        only the two ends may be the identity.
        """
        self.check(p)
        if not self.is_positive(p):
            raise NotPositive(self.render(p))
        parts = [g for _, g in p.syllables]
        if p.syllables and p.syllables[0][0] == 2:
            parts.insert(0, self.left.identity())
        if len(parts) % 2:
            parts.append(self.right.identity())
        return parts

    def interval_blocks(self, p: AltWord) -> list[frozenset]:
        """Blocks ``X_i = p1…p(i-1)·[1, p_i]`` whose union is ``[1, p]``."""
        blocks = []
        prefix = self.identity()
        for i, part in enumerate(self.alt_decompose(p)):
            k = 1 if i % 2 == 0 else 2
            blocks.append(frozenset(prefix * self.embed(k, r) for r in self.factor(k)._interval(part)))
            prefix = prefix * self.embed(k, part)
        return blocks

    def _interval(self, p):
        if p.is_identity():
            return frozenset({p})
        return frozenset().union(*self.interval_blocks(p))

    def _join(self, x, y):
        if self.leq(x, y):
            return y
        if self.leq(y, x):
            return x
        sx, sy = x.syllables, y.syllables
        # incomparable elements with an upper bound differ only in a last
        # syllable taken from the same factor
        if len(sx) != len(sy) or sx[:-1] != sy[:-1]:
            return None
        (kx, rx), (ky, ry) = sx[-1], sy[-1]
        if kx != ky:
            return None
        top = self.factor(kx)._join(rx, ry)
        if top is None:
            return None
        return AltWord(sx[:-1] + ((kx, top),))

    def letters(self, g):
        out: list[Letter] = []
        for k, s in g.syllables:
            out += self._public(k, self.factor(k).letters(s))
        return out

    def length(self, p):
        return sum(self.factor(k).length(s) for k, s in p.syllables)

    def radius(self, p):
        return sum(self.factor(k).radius(s) for k, s in p.syllables)

    def render(self, g):
        return "[" + " | ".join(f"{k}:{self.factor(k).render_word(s)}" for k, s in g.syllables) + "]"

    def spec(self):
        return f"freeprod({self.left.spec()}, {self.right.spec()})"


@dataclass(frozen=True)
class WreathCone(_BinaryCone):
    """G wr H = G^H ⋊ H, with positive cone the image of P1 * P2.

    ``left`` is the base group G and ``right`` the acting group H.
    """

    left: Cone
    right: Cone

    @cached_property
    def free_product(self) -> FreeProductCone:
        return FreeProductCone(self.left, self.right)

    def identity(self):
        return WreathElem((), self.right.identity())

    def embed(self, k, g):
        if k == 1:
            return WreathElem(((self.right.identity(), g),), self.right.identity())
        return WreathElem((), g)

    def owns(self, g):
        return (
            isinstance(g, WreathElem)
            and self.right.owns(g.shift)
            and all(self.right.owns(k) and self.left.owns(v) for k, v in g.support)
        )

    def encode(self, p: AltWord) -> WreathElem:
        """Send ``p1 p2 … p2n`` to ``(f, p2 p4 … p2n)`` with
        ``f(p2 p4 … p2i) = p(2i+1)``."""
        parts = self.free_product.alt_decompose(p)
        values = {}
        key = self.right.identity()
        for i in range(0, len(parts), 2):
            values[key] = parts[i]
            key = key * parts[i + 1]
        return WreathElem(tuple(values.items()), key)

    def decode(self, w: WreathElem) -> AltWord | None:
        """Inverse of :meth:`encode`; ``None`` if ``w`` is not positive."""
        H, G = self.right, self.left
        keys = [k for k, _ in w.support]
        if not all(H.is_positive(k) for k in keys):
            return None

        def by_order(a, b):
            if H.leq(a, b):
                return -1
            return 1 if H.leq(b, a) else 0

        chain = sorted(keys, key=cmp_to_key(by_order))
        values = dict(w.support)
        syllables = []
        prev = H.identity()
        for k in chain:
            step = prev.inverse() * k
            if not H.is_positive(step) or not G.is_positive(values[k]):
                return None
            syllables += [(2, step), (1, values[k])]
            prev = k
        step = prev.inverse() * w.shift
        if not H.is_positive(step):
            return None
        word = AltWord(tuple(syllables) + ((2, step),))
        if self.encode(word) != w:
            return None
        return word

    def is_positive(self, g):
        return self.decode(g) is not None

    def _join(self, x, y):
        top = self.free_product._join(self.decode(x), self.decode(y))
        return None if top is None else self.encode(top)

    def _interval(self, p):
        return frozenset(self.encode(q) for q in self.free_product._interval(self.decode(p)))

    def letters(self, g):
        decoded = self.decode(g)
        if decoded is not None:
            return self.free_product.letters(decoded)
        out: list[Letter] = []
        for k, v in g.support:
            there = self._public(2, self.right.letters(k))
            out += there + self._public(1, self.left.letters(v))
            out += [(n, -e) for n, e in reversed(there)]
        return out + self._public(2, self.right.letters(g.shift))

    def length(self, p):
        return self.free_product.length(self.decode(p))

    def radius(self, p):
        return self.free_product.radius(self.decode(p))

    def render(self, g):
        body = ", ".join(f"{self.right.render(k)}:{self.left.render(v)}" for k, v in g.support)
        return "{" + body + "}; " + self.right.render(g.shift)

    def spec(self):
        return f"wreath({self.left.spec()}, {self.right.spec()})"


# -------------------------------------------------------- module functions


def group_op(cone: Cone, kind: str, *args: Element) -> Element:
    """``mul`` (any number of factors), ``inv`` or ``id`` in ``cone``'s group."""
    cone.check(*args)
    if kind == "id":
        return cone.identity()
    if kind == "inv":
        (g,) = args
        return g.inverse()
    if kind == "mul":
        out = cone.identity()
        for g in args:
            out = out * g
        return out
    raise ValueError(f"unknown group operation {kind!r}")


def is_positive(cone: Cone, g: Element) -> bool:
    cone.check(g)
    return cone.is_positive(g)


def leq(cone: Cone, a: Element, b: Element) -> bool:
    cone.check(a, b)
    return cone.leq(a, b)


def join(cone: Cone, x: Element, y: Element) -> Element | None:
    return cone.join(x, y)


def interval(cone: Cone, p: Element) -> frozenset:
    return cone.interval(p)


@lru_cache(maxsize=256)
def _enumerate(cone: Cone, max_len: int) -> tuple[Element, ...]:
    identity = cone.identity()
    seen = {identity}
    order = [identity]
    frontier = [identity]
    gens = cone.positive_generators()
    for _ in range(max_len):
        fresh = []
        for w in frontier:
            for g in gens:
                x = w * g
                if x not in seen:
                    seen.add(x)
                    order.append(x)
                    fresh.append(x)
        frontier = fresh
    return tuple(order)


def enumerate_positive(cone: Cone, max_len: int) -> list[Element]:
    """Positive elements spelled by at most ``max_len`` positive generators,
    in breadth-first order of discovery."""
    return list(_enumerate(cone, max_len))


def alt_decompose(cone: FreeProductCone, p: AltWord) -> list[Element]:
    return cone.alt_decompose(p)


def wreath_codec(direction: str, cone: WreathCone, v):
    if direction == "encode":
        cone.free_product.check(v)
        if not cone.free_product.is_positive(v):
            raise NotPositive(cone.free_product.render(v))
        return cone.encode(v)
    if direction == "decode":
        cone.check(v)
        return cone.decode(v)
    raise ValueError(f"unknown direction {direction!r}")


def parse_word(cone: Cone, text) -> Element:
    """Evaluate a whitespace-separated generator word (``e`` is the identity)."""
    tokens = text.split() if isinstance(text, str) else list(text)
    gens = cone.generators()
    out = cone.identity()
    for tok in tokens:
        if tok == "e":
            continue
        name, exp = (tok[:-3], -1) if tok.endswith("^-1") else (tok, 1)
        if name not in gens:
            raise ParseError(f"unknown generator {name!r} for {cone.spec()}")
        g = gens[name]
        out = out * (g if exp == 1 else g.inverse())
    return out


def _split_args(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    parts.append(text[start:])
    return [p.strip() for p in parts]


def parse_cone_spec(text: str) -> Cone:
    """Parse ``free a b``, ``free_abelian k``, ``bs12_ct``, ``bs12_q``,
    ``product(A,B)``, ``freeprod(A,B)`` or ``wreath(A,B)``."""
    text = text.strip()
    for head, cls in (("product", ProductCone), ("freeprod", FreeProductCone), ("wreath", WreathCone)):
        if text.startswith(head + "(") and text.endswith(")"):
            args = _split_args(text[len(head) + 1 : -1])
            if len(args) != 2:
                raise ParseError(f"{head} takes two cones, got {len(args)}")
            return cls(parse_cone_spec(args[0]), parse_cone_spec(args[1]))
    words = text.split()
    if not words:
        raise ParseError("empty cone spec")
    if words[0] == "free":
        gens = tuple(words[1:])
        if not gens or len(set(gens)) != len(gens) or "e" in gens:
            raise ParseError(f"bad generator list in {text!r}")
        return FreeCone(gens)
    if words[0] == "free_abelian" and len(words) == 2 and words[1].isdigit() and int(words[1]) > 0:
        return AbelianCone(int(words[1]))
    if words == ["bs12_ct"]:
        return BSCtCone()
    if words == ["bs12_q"]:
        return BSQCone()
    raise ParseError(f"unknown cone spec {text!r}")
