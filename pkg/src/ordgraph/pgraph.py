"""Finite P-graphs: small categories with a degree functor into a cone.

Paths compose like morphisms: ``αβ`` is defined when ``s(α) = r(β)``, and
then ``r(αβ) = r(α)``, ``s(αβ) = s(β)``. Vertices are the identity paths.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cones import Cone, Element
from .errors import (
    DegreeNotBelow,
    FamilyMismatch,
    Infeasible,
    NotComposable,
    NotInCorner,
    ValidationFailed,
)
from .report import Report, verdict


@dataclass(frozen=True)
class Path:
    id: str
    source: str
    range: str
    degree: Element


class Graph:
    """A finite category of paths with degrees in ``cone``.

    ``paths`` lists the non-identity paths; ``compose`` maps ``(α, β)`` to
    ``αβ`` for non-identity pairs. Vertex compositions are filled in
    automatically, though explicit entries take precedence so that a bad
    table stays visible to validation.
    """

    def __init__(self, cone: Cone, vertices, paths, compose: dict[tuple[str, str], str]):
        self.cone = cone
        self.vertices = tuple(vertices)
        e = cone.identity()
        records = [Path(v, v, v, e) for v in self.vertices] + list(paths)
        self.paths: dict[str, Path] = {}
        for p in records:
            if p.id in self.paths:
                raise ValueError(f"duplicate path id {p.id!r}")
            self.paths[p.id] = p
        self.explicit = dict(compose)
        table = {}
        for p in records:
            if p.range in self.paths:
                table[(p.range, p.id)] = p.id
            if p.source in self.paths:
                table[(p.id, p.source)] = p.id
        table.update(self.explicit)
        self.table = table
        self.validated = False

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.cone == other.cone
            and set(self.vertices) == set(other.vertices)
            and self.paths == other.paths
            and self.table == other.table
        )

    __hash__ = None

    # --------------------------------------------------------------- basics

    def __getitem__(self, pid: str) -> Path:
        return self.paths[pid]

    def degree(self, pid: str) -> Element:
        return self.paths[pid].degree

    def source(self, pid: str) -> str:
        return self.paths[pid].source

    def range(self, pid: str) -> str:
        return self.paths[pid].range

    def is_vertex(self, pid: str) -> bool:
        return pid in self.vertices

    def order_key(self, pid: str):
        return (self.cone.length(self.degree(pid)), pid)

    def sorted(self, pids) -> list[str]:
        return sorted(pids, key=self.order_key)

    def all_paths(self) -> list[str]:
        return self.sorted(self.paths)

    def non_vertex_paths(self) -> list[str]:
        return [p for p in self.all_paths() if not self.is_vertex(p)]

    def composable(self, a: str, b: str) -> bool:
        return self.source(a) == self.range(b)

    def compose(self, a: str, b: str) -> str:
        if not self.composable(a, b):
            raise NotComposable(f"s({a}) = {self.source(a)} but r({b}) = {self.range(b)}")
        return self.table[(a, b)]

    # -------------------------------------------------------- derived data

    def _derived(self):
        if not hasattr(self, "_cache"):
            ext = {p: set() for p in self.paths}
            factors = {p: [] for p in self.paths}
            for (a, b), c in self.table.items():
                ext[a].add(c)
                factors[c].append((a, b))
            self._cache = (
                {p: frozenset(s) for p, s in ext.items()},
                {p: sorted(f, key=lambda ab: (self.order_key(ab[0]), self.order_key(ab[1]))) for p, f in factors.items()},
            )
        return self._cache

    def extensions(self, pid: str) -> frozenset:
        """``αΛ``: every path that starts with ``α``."""
        return self._derived()[0][pid]

    def factorizations(self, pid: str) -> list[tuple[str, str]]:
        return self._derived()[1][pid]

    def leq(self, a: str, b: str) -> bool:
        return b in self.extensions(a)

    def prefixes(self, pid: str) -> frozenset:
        return frozenset(a for a, _ in self.factorizations(pid))

    def maximal_paths(self) -> list[str]:
        return [p for p in self.all_paths() if self.extensions(p) == {p}]


# ------------------------------------------------------------- validation


def _check_laws(g: Graph):
    """Yield ``(law, witnesses)`` in order; later laws assume earlier ones."""
    cone = g.cone
    paths = g.all_paths()

    yield "UnknownVertex", [
        (p, v) for p in paths for v in (g.source(p), g.range(p)) if v not in g.vertices
    ]
    yield "ForeignDegree", [(p,) for p in paths if not cone.owns(g.degree(p))]
    yield "NotPositiveDegree", [(p, cone.render(g.degree(p))) for p in paths if not cone.is_positive(g.degree(p))]
    yield "IdentityDegree", [(p,) for p in paths if not g.is_vertex(p) and g.degree(p).is_identity()]
    yield "UnknownPath", [
        (a, b, c) for (a, b), c in sorted(g.table.items()) if not {a, b, c} <= g.paths.keys()
    ]
    yield "SpuriousComposite", [(a, b) for (a, b) in sorted(g.table) if not g.composable(a, b)]
    yield "MissingComposite", [
        (a, b) for a in paths for b in paths if g.composable(a, b) and (a, b) not in g.table
    ]
    yield "EndpointMismatch", [
        (a, b, c)
        for (a, b), c in sorted(g.table.items())
        if g.source(c) != g.source(b) or g.range(c) != g.range(a)
    ]
    yield "IdentityLaw", [
        (p,) for p in paths if g.table[(g.range(p), p)] != p or g.table[(p, g.source(p))] != p
    ]
    yield "DegreeMismatch", [
        (a, b, c)
        for (a, b), c in sorted(g.table.items())
        if g.degree(c) != g.degree(a) * g.degree(b)
    ]
    yield "NotAssociative", [
        (a, b, c)
        for (a, b) in sorted(g.table)
        for c in paths
        if g.composable(b, c) and g.table[(g.table[(a, b)], c)] != g.table[(a, g.table[(b, c)])]
    ]
    bad = []
    for lam in paths:
        d = g.degree(lam)
        for p1 in sorted(cone.interval(d), key=lambda x: (cone.length(x), x.sort_key())):
            count = sum(1 for a, _ in g.factorizations(lam) if g.degree(a) == p1)
            if count != 1:
                bad.append((lam, cone.render(p1), str(count)))
    yield "FactorizationCount", bad
    cancel = []
    by_left: dict[tuple[str, str], str] = {}
    by_right: dict[tuple[str, str], str] = {}
    for (a, b), c in sorted(g.table.items()):
        for key, other, index in (((a, c), b, by_left), ((b, c), a, by_right)):
            if key in index and index[key] != other:
                cancel.append((c, a, b, index[key]))
            index.setdefault(key, other)
    yield "Cancellation", cancel


def validate_graph(g: Graph) -> Report:
    """Check the category laws, functoriality and unique factorization."""
    checked = 0
    for law, witnesses in _check_laws(g):
        checked += 1
        if witnesses:
            return verdict([(law,) + tuple(w) for w in witnesses], {"laws_checked": checked})
    g.validated = True
    return verdict([], {"laws_checked": checked, "paths": len(g.paths)})


# ------------------------------------------------------------- operations


def compose_paths(g: Graph, a: str, b: str) -> str:
    return g.compose(a, b)


def factorize(g: Graph, lam: str, p1: Element) -> tuple[str, str]:
    """The unique ``(λ1, λ2)`` with ``λ1 λ2 = λ`` and ``d(λ1) = p1``."""
    g.cone.check(p1)
    if not g.cone.is_positive(p1) or not g.cone.leq(p1, g.degree(lam)):
        raise DegreeNotBelow(f"{g.cone.render(p1)} is not below d({lam})")
    matches = [(a, b) for a, b in g.factorizations(lam) if g.degree(a) == p1]
    if len(matches) != 1:
        raise ValidationFailed(verdict([("FactorizationCount", lam, g.cone.render(p1), str(len(matches)))]))
    return matches[0]


def common_extensions(g: Graph, a: str, b: str) -> frozenset:
    return g.extensions(a) & g.extensions(b)


def mce(g: Graph, a: str, b: str) -> frozenset:
    """Minimal common extensions, by the path order."""
    common = common_extensions(g, a, b)
    return frozenset(c for c in common if not any(d != c and g.leq(d, c) for d in common))


def mdce(g: Graph, a: str, b: str) -> frozenset:
    """Common extensions whose degree is the join of the two degrees."""
    top = g.cone.join(g.degree(a), g.degree(b))
    if top is None:
        return frozenset()
    return frozenset(c for c in common_extensions(g, a, b) if g.degree(c) == top)


def _check_corner(g: Graph, mu: str, E) -> None:
    outside = set(E) - g.extensions(mu)
    if outside:
        raise NotInCorner(f"{sorted(outside)} not in {mu}Λ")


def exhaustive_witness(g: Graph, mu: str, E) -> str | None:
    """First ``ν ∈ μΛ`` sharing no extension with any member of ``E``."""
    _check_corner(g, mu, E)
    for nu in g.sorted(g.extensions(mu)):
        if not any(common_extensions(g, nu, a) for a in E):
            return nu
    return None


def is_exhaustive(g: Graph, mu: str, E) -> bool:
    return exhaustive_witness(g, mu, E) is None


MAX_CORNER = 18


def minimal_exhaustive_sets(g: Graph, mu: str) -> list[frozenset]:
    """All ⊆-minimal exhaustive subsets of ``μΛ`` that avoid ``μ``."""
    candidates = g.sorted(g.extensions(mu) - {mu})
    if len(candidates) > MAX_CORNER:
        raise Infeasible(f"{mu}Λ has {len(candidates)} paths; subset search is capped at {MAX_CORNER}")
    found: list[frozenset] = []
    for size in range(1, len(candidates) + 1):
        for combo in itertools.combinations(candidates, size):
            E = frozenset(combo)
            if any(f <= E for f in found):
                continue
            if is_exhaustive(g, mu, E):
                found.append(E)
    return found


def regrade(g: Graph, phi) -> Graph:
    """The same category with degrees pushed forward along ``phi``."""
    if phi.domain != g.cone:
        raise FamilyMismatch(f"{phi.name} is defined on {phi.domain.spec()}, graph uses {g.cone.spec()}")
    paths = [
        Path(p.id, p.source, p.range, phi(p.degree)) for p in g.paths.values() if not g.is_vertex(p.id)
    ]
    out = Graph(phi.codomain, g.vertices, paths, g.explicit)
    report = validate_graph(out)
    if not report.passed:
        raise ValidationFailed(report)
    return out
