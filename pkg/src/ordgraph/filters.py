"""Filters and ultrafilters of a finite P-graph, and how paths act on them.

A filter is a nonempty set of paths that is closed under prefixes and in
which any two members have a common upper bound inside the set.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotValidated
from .pgraph import Graph

NOT_FILTER = "not_filter"
FILTER = "filter"
ULTRAFILTER = "ultrafilter"


@dataclass(frozen=True)
class Filter:
    paths: frozenset
    graph: Graph = field(compare=False, hash=False, repr=False)

    def range_vertex(self) -> str:
        (v,) = [p for p in self.paths if self.graph.is_vertex(p)]
        return v

    def render(self) -> list[str]:
        return self.graph.sorted(self.paths)

    def __contains__(self, pid: str) -> bool:
        return pid in self.paths

    def __len__(self) -> int:
        return len(self.paths)


def principal_filter(g: Graph, alpha: str) -> Filter:
    """``U_α``: every prefix of ``α``."""
    return Filter(g.prefixes(alpha), g)


def _downward_closed(g: Graph, U) -> bool:
    return all(g.prefixes(mu) <= U for mu in U)


def _directed(g: Graph, U) -> bool:
    return all(g.extensions(a) & g.extensions(b) & U for a in U for b in U)


def is_filter(g: Graph, U) -> bool:
    U = frozenset(U)
    return bool(U) and U <= g.paths.keys() and _downward_closed(g, U) and _directed(g, U)


def filter_status(g: Graph, U) -> str:
    U = frozenset(U)
    if not is_filter(g, U):
        return NOT_FILTER
    # A finite directed set has a largest member, and a larger filter is
    # again finite, so every strictly larger filter is U_β for some β.
    for beta in g.all_paths():
        bigger = g.prefixes(beta)
        if U < bigger:
            return FILTER
    return ULTRAFILTER


def _require_validated(g: Graph) -> None:
    if not g.validated:
        raise NotValidated("ultrafilter enumeration needs a validated graph")


def ultrafilters(g: Graph) -> list[Filter]:
    """Principal filters on maximal paths, in path order."""
    _require_validated(g)
    return [principal_filter(g, alpha) for alpha in g.maximal_paths()]


def all_filters(g: Graph) -> list[Filter]:
    """Every filter of a finite graph; each is principal."""
    _require_validated(g)
    return [principal_filter(g, alpha) for alpha in g.all_paths()]


def translate(g: Graph, lam: str, U: Filter, direction: str = "forward") -> Filter | None:
    """``λ·U`` (forward) or ``λ*·U`` (backward); None where undefined."""
    if direction == "forward":
        if U.range_vertex() != g.source(lam):
            return None
        out = set()
        for mu in U.paths:
            out |= g.prefixes(g.compose(lam, mu))
        return Filter(frozenset(out), g)
    if direction == "backward":
        if lam not in U.paths:
            return None
        out = {mu for mu in g.paths if g.range(mu) == g.source(lam) and g.compose(lam, mu) in U.paths}
        return Filter(frozenset(out), g)
    raise ValueError(f"unknown direction {direction!r}")
