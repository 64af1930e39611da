"""Order homomorphisms and bounded checks of the reduction properties.

A hom is fixed by its generator images. ``check_reduction`` verifies, for
every positive element up to a word-length bound, that the interval below
it is mapped bijectively onto the interval below its image.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .cones import (
    CT,
    T,
    AbelianCone,
    AbelianVec,
    AltWord,
    BSQCone,
    Cone,
    Element,
    FreeCone,
    FreeProductCone,
    FreeWord,
    Pair,
    ProductCone,
    WreathCone,
    _BinaryCone,
    enumerate_positive,
)
from .errors import FamilyMismatch, NotOrderHom
from .report import Report, verdict

Decoder = Callable[[Element], "Element | None"]


@dataclass(frozen=True)
class Hom:
    """Group homomorphism given on the domain's group generators.

    ``decoder``, when present, inverts the hom on positive elements and
    returns ``None`` off the image.
    """

    name: str = field(compare=False)
    domain: Cone
    codomain: Cone
    images: tuple[tuple[str, Element], ...]
    decoder: Decoder | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        names = self.domain.generator_names()
        given = [n for n, _ in self.images]
        if sorted(given) != sorted(names):
            raise ValueError(f"{self.name}: images given for {given}, generators are {list(names)}")
        self.codomain.check(*(g for _, g in self.images))
        object.__setattr__(self, "_memo", {})

    def __call__(self, g: Element) -> Element:
        memo = self._memo
        if g in memo:
            return memo[g]
        self.domain.check(g)
        images = dict(self.images)
        out = self.codomain.identity()
        for name, exp in self.domain.letters(g):
            out = out * (images[name] if exp == 1 else images[name].inverse())
        memo[g] = out
        return out

    def image(self, name: str) -> Element:
        return dict(self.images)[name]


def apply_hom(phi: Hom, g: Element) -> Element:
    return phi(g)


def check_order_hom(phi: Hom) -> None:
    for g in phi.domain.positive_generators():
        if not phi.codomain.is_positive(phi(g)):
            raise NotOrderHom(
                f"{phi.name}: {phi.domain.render(g)} maps to non-positive {phi.codomain.render(phi(g))}"
            )


def canonical(cone: Cone, elems) -> list[Element]:
    return sorted(elems, key=lambda g: (cone.length(g), g.sort_key()))


# ----------------------------------------------------------------- checks


def _interval_witnesses(phi: Hom, p: Element) -> list[tuple[str, ...]]:
    dom, cod = phi.domain, phi.codomain
    target = cod.interval(phi(p))
    hit: dict[Element, Element] = {}
    out = []
    for x in canonical(dom, dom.interval(p)):
        y = phi(x)
        if y in hit:
            out.append(("not_injective_on_interval", dom.render(p), dom.render(hit[y]), dom.render(x)))
        else:
            hit[y] = x
    for y in canonical(cod, set(hit) - target):
        out.append(("image_outside_interval", dom.render(p), cod.render(y)))
    for q in canonical(cod, target - set(hit)):
        out.append(("not_onto_interval", dom.render(p), cod.render(q)))
    return out


def _reduction(phi: Hom, depth: int) -> Report:
    elems = enumerate_positive(phi.domain, depth)
    witnesses = [w for p in elems for w in _interval_witnesses(phi, p)]
    return verdict(witnesses, {"positives": len(elems)}, depth)


def _strong(phi: Hom, depth: int) -> Report:
    dom, cod = phi.domain, phi.codomain
    base = _reduction(phi, depth)
    witnesses = list(base.witnesses)
    elems = enumerate_positive(dom, depth)
    seen: dict[Element, Element] = {}
    for x in elems:
        y = phi(x)
        if y in seen:
            witnesses.append(("not_injective_on_P", dom.render(seen[y]), dom.render(x)))
        else:
            seen[y] = x
    targets = enumerate_positive(cod, depth)
    unresolved = 0
    for q in targets:
        if phi.decoder is not None:
            pre = phi.decoder(q)
            if pre is None or not dom.is_positive(pre) or phi(pre) != q:
                witnesses.append(("not_onto_P", cod.render(q)))
        elif q not in seen:
            unresolved += 1
    stats = dict(base.stats, targets=len(targets), unresolved=unresolved)
    return verdict(witnesses, stats, depth, inconclusive=unresolved > 0)


def _translates(cone: Cone) -> list[Element]:
    gens = list(cone.generators().values())
    return [cone.identity()] + gens + [g.inverse() for g in gens]


def _criteria(phi: Hom, depth: int) -> Report:
    dom, cod = phi.domain, phi.codomain
    elems = enumerate_positive(dom, depth)
    definition = _reduction(phi, depth)
    pool = enumerate_positive(dom, max(dom.radius(p) for p in elems))
    found: dict[str, list] = {"factorization": [], "order_isomorphism": [], "kernel": [], "image": []}
    for p in elems:
        rp = dom.render(p)
        below = dom.interval(p)
        target = cod.interval(phi(p))
        # unique factorization of p through each q <= phi(p)
        prefixes = [x for x in pool if dom.leq(x, p)]
        for q in canonical(cod, target):
            count = sum(1 for x in prefixes if phi(x) == q)
            if count != 1:
                found["factorization"].append(("factorizations", rp, cod.render(q), str(count)))
        # translated intervals are order isomorphic
        for x in _translates(dom):
            src = {x * s: s for s in below}
            dst = {phi(x) * t for t in target}
            mapped = {phi(g) for g in src}
            if len(mapped) != len(src) or mapped != dst:
                found["order_isomorphism"].append(("not_bijective", rp, dom.render(x)))
                continue
            for a, b in itertools.product(src, repeat=2):
                if dom.leq(a, b) != cod.leq(phi(a), phi(b)):
                    found["order_isomorphism"].append(("order_mismatch", rp, dom.render(a), dom.render(b)))
                    break
        # S ∩ ker = {1} and the interval maps onto the interval
        for q, r in itertools.product(canonical(dom, below), repeat=2):
            g = q * r.inverse()
            if phi(g).is_identity() and not g.is_identity():
                found["kernel"].append(("kernel_meets_S", rp, dom.render(q), dom.render(r)))
        if {phi(x) for x in below} != target:
            found["image"].append(("image_not_interval", rp))

    verdicts = {"definition": definition.passed}
    verdicts["criterion_factorization"] = not found["factorization"]
    verdicts["criterion_order_isomorphism"] = not found["order_isomorphism"]
    verdicts["criterion_kernel_image"] = not found["kernel"] and not found["image"]
    stats = {k: ("pass" if v else "fail") for k, v in verdicts.items()}
    stats["positives"] = len(elems)
    if len(set(verdicts.values())) > 1:
        witness = ("criteria_disagree",) + tuple(f"{k}={stats[k]}" for k in sorted(verdicts))
        return Report("fail", (witness,), stats, depth)
    witnesses = list(definition.witnesses)
    for key in ("factorization", "order_isomorphism", "kernel", "image"):
        witnesses += found[key]
    return verdict(witnesses, stats, depth)


def check_reduction(phi: Hom, depth: int, mode: str = "reduction") -> Report:
    """Bounded verification that ``phi`` is a reduction.

    ``mode`` is ``reduction`` (interval bijections), ``strong`` (also a
    bijection of positive cones) or ``criteria`` (the equivalent
    characterisations, each computed separately and compared).
    """
    check_order_hom(phi)
    if mode == "reduction":
        return _reduction(phi, depth)
    if mode == "strong":
        return _strong(phi, depth)
    if mode == "criteria":
        return _criteria(phi, depth)
    raise ValueError(f"unknown mode {mode!r}")


def check_hereditary(cone: Cone, member: Callable[[Element], bool], depth: int) -> Report:
    """Check that ``p1 p2 ∈ Q`` forces ``p1, p2 ∈ Q`` for all positives at ``depth``."""
    elems = enumerate_positive(cone, depth)
    witnesses = [
        ("not_hereditary", cone.render(p1), cone.render(p2))
        for p1, p2 in itertools.product(elems, repeat=2)
        if member(p1 * p2) and not (member(p1) and member(p2))
    ]
    return verdict(witnesses, {"pairs": len(elems) ** 2}, depth)


def submonoid_member(cone: Cone, gens: list[Element], radius: int) -> Callable[[Element], bool]:
    """Membership in the submonoid generated by ``gens``, decided among
    products of at most ``radius`` generators."""
    reached = {cone.identity()}
    frontier = set(reached)
    for _ in range(radius):
        frontier = {w * g for w in frontier for g in gens} - reached
        reached |= frontier
    return reached.__contains__


# ------------------------------------------------------------ constructors


def _named_generators(cone: Cone):
    """(public name, factor index, factor element) for a binary cone."""
    out = []
    for k in (1, 2):
        factor = cone.factor(k)
        names = cone._names[k - 1]
        out += [(n, k, g) for n, g in zip(names, factor.generators().values())]
    return out


def identity(cone: Cone) -> Hom:
    return Hom(f"id[{cone.spec()}]", cone, cone, tuple(cone.generators().items()), lambda q: q)


def compose(phi: Hom, psi: Hom) -> Hom:
    """``psi ∘ phi``: apply ``phi`` first."""
    if phi.codomain != psi.domain:
        raise FamilyMismatch(f"cannot compose {phi.name} into {psi.name}")
    decoder = None
    if phi.decoder and psi.decoder:
        def decoder(q):
            mid = psi.decoder(q)
            return None if mid is None else phi.decoder(mid)
    images = tuple((n, psi(g)) for n, g in phi.images)
    return Hom(f"{psi.name}.{phi.name}", phi.domain, psi.codomain, images, decoder)


def _factorwise(phi1: Hom, phi2: Hom, cone_type: type[_BinaryCone], label: str) -> Hom:
    dom = cone_type(phi1.domain, phi2.domain)
    cod = cone_type(phi1.codomain, phi2.codomain)
    homs = {1: phi1, 2: phi2}
    images = tuple((n, cod.embed(k, homs[k](g))) for n, k, g in _named_generators(dom))
    return Hom(f"{label}({phi1.name}, {phi2.name})", dom, cod, images, _factorwise_decoder(homs, cone_type))


def _factorwise_decoder(homs, cone_type):
    if not (homs[1].decoder and homs[2].decoder):
        return None
    if cone_type is ProductCone:
        def decode(q):
            a, b = homs[1].decoder(q.left), homs[2].decoder(q.right)
            return None if a is None or b is None else Pair(a, b)
        return decode

    def decode(q):
        sylls = []
        for k, s in q.syllables:
            pre = homs[k].decoder(s)
            if pre is None:
                return None
            sylls.append((k, pre))
        return AltWord(tuple(sylls))
    return decode


def product(phi1: Hom, phi2: Hom) -> Hom:
    return _factorwise(phi1, phi2, ProductCone, "product")


def freeprod(phi1: Hom, phi2: Hom) -> Hom:
    return _factorwise(phi1, phi2, FreeProductCone, "freeprod")


def natural_wreath(base: Cone, top: Cone) -> Hom:
    """The natural map ``G1 * G2 -> G1 wr G2`` with the wreath decoder."""
    dom = FreeProductCone(base, top)
    cod = WreathCone(base, top)
    images = tuple((n, cod.embed(k, g)) for n, k, g in _named_generators(dom))
    return Hom(f"natural_wreath({base.spec()}, {top.spec()})", dom, cod, images, cod.decode)


F2 = FreeCone(("a", "b"))
Z = AbelianCone(1)


def f2_to_z() -> Hom:
    one = AbelianVec((1,))
    return Hom("f2_to_z", F2, Z, (("a", one), ("b", one)))


def _read_bits(q) -> FreeWord | None:
    if not BSQCone().is_positive(q):
        return None
    i = int(q.a)
    return FreeWord(tuple(("a" if (i >> k) & 1 else "b", 1) for k in range(q.n)))


def f2_to_bs12() -> Hom:
    """a ↦ ct, b ↦ t; a positive word is read as a binary number."""
    return Hom("f2_to_bs12", F2, BSQCone(), (("a", CT), ("b", T)), _read_bits)


def z2_sum() -> Hom:
    """(m, n) ↦ m + n, an order hom that is not a reduction."""
    one = AbelianVec((1,))
    return Hom("z2_sum", AbelianCone(2), Z, (("x", one), ("y", one)))


CATALOG: dict[str, Callable[[], Hom]] = {
    "f2_to_z": f2_to_z,
    "f2_to_bs12": f2_to_bs12,
    "z2_sum": z2_sum,
    "natural_wreath_z": lambda: natural_wreath(Z, Z),
    "n2n_to_wreath": lambda: natural_wreath(AbelianCone(2), Z),
}


def build_hom(constructor: str, *args) -> Hom:
    if constructor == "compose":
        return compose(*args)
    if constructor == "product":
        return product(*args)
    if constructor == "freeprod":
        return freeprod(*args)
    if constructor == "natural_wreath":
        return natural_wreath(*args)
    if constructor == "identity":
        return identity(*args)
    if constructor == "named":
        (name,) = args
        return CATALOG[name]()
    raise ValueError(f"unknown constructor {constructor!r}")
