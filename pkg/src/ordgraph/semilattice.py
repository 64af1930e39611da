"""The semilattice of finite unions of path cones, and tightness in its terms.

An element is a set of paths of the form ``α1Λ ∪ ... ∪ αnΛ``. It is stored
by its antichain of minimal paths ``m(a)``, which determines it uniquely.
A representation ``t`` induces ``σ(a) = ⋁_{α∈m(a)} q_α`` on it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import GraphMismatch, Infeasible, NotSubset
from .pgraph import Graph, mce
from .repmat import Matrix, Rep, proj_join, proj_leq
from .report import INCONCLUSIVE, Report, verdict


@dataclass(frozen=True)
class ESet:
    m: frozenset
    graph: Graph = field(compare=False, hash=False, repr=False)

    def paths(self) -> frozenset:
        out = frozenset()
        for alpha in self.m:
            out |= self.graph.extensions(alpha)
        return out

    def is_zero(self) -> bool:
        return not self.m

    def render(self) -> str:
        return "{" + ",".join(self.graph.sorted(self.m)) + "}"

    def sort_key(self):
        return (len(self.m), [self.graph.order_key(p) for p in self.graph.sorted(self.m)])


def _minimal(g: Graph, paths) -> frozenset:
    paths = set(paths)
    return frozenset(a for a in paths if not any(b != a and g.leq(b, a) for b in paths))


def normalize_element(g: Graph, paths) -> ESet:
    """``⋃_{α∈paths} αΛ`` in canonical form."""
    return ESet(_minimal(g, paths), g)


def zero(g: Graph) -> ESet:
    return ESet(frozenset(), g)


def top(g: Graph) -> ESet:
    return normalize_element(g, g.vertices)


def principal(g: Graph, alpha: str) -> ESet:
    return ESet(frozenset({alpha}), g)


def _same_graph(*elements: ESet) -> Graph:
    g = elements[0].graph
    if any(e.graph is not g for e in elements):
        raise GraphMismatch("elements come from different graphs")
    return g


def meet(a: ESet, b: ESet) -> ESet:
    """Intersection, aligned pairwise through minimal common extensions."""
    g = _same_graph(a, b)
    out = set()
    for alpha in a.m:
        for beta in b.m:
            out |= mce(g, alpha, beta)
    return normalize_element(g, out)


def union(a: ESet, b: ESet) -> ESet:
    g = _same_graph(a, b)
    return normalize_element(g, a.m | b.m)


def leq(a: ESet, b: ESet) -> bool:
    _same_graph(a, b)
    return a.paths() <= b.paths()


def intersects(a: ESet, b: ESet) -> bool:
    g = _same_graph(a, b)
    return any(g.extensions(alpha) & g.extensions(beta) for alpha in a.m for beta in b.m)


def all_elements(g: Graph) -> list[ESet]:
    """Every element, one per antichain of paths, in canonical order."""
    paths = g.all_paths()
    comparable = {
        (a, b) for a in paths for b in paths if a != b and (g.leq(a, b) or g.leq(b, a))
    }
    found: list[frozenset] = []

    def grow(start: int, chosen: list[str]):
        found.append(frozenset(chosen))
        for i in range(start, len(paths)):
            p = paths[i]
            if all((p, c) not in comparable for c in chosen):
                chosen.append(p)
                grow(i + 1, chosen)
                chosen.pop()

    grow(0, [])
    return sorted((ESet(m, g) for m in found), key=ESet.sort_key)


def exy(g: Graph, X, Y, universe=None) -> list[ESet]:
    """``{z : z ≤ x for x in X, z ⊥ y for y in Y}``, by enumeration."""
    universe = all_elements(g) if universe is None else universe
    X, Y = list(X), list(Y)
    return [
        z for z in universe if all(leq(z, x) for x in X) and not any(intersects(z, y) for y in Y)
    ]


def cover_witness(Z, F) -> ESet | None:
    """First nonzero member of ``F`` missed by every member of ``Z``."""
    Z, F = list(Z), list(F)
    members = set(F)
    stray = [z for z in Z if z not in members]
    if stray:
        raise NotSubset(f"{stray[0].render()} is not in the covered family")
    for x in F:
        if not x.is_zero() and not any(intersects(x, z) for z in Z):
            return x
    return None


def is_cover(Z, F) -> bool:
    return cover_witness(Z, F) is None


def cover_normalize(mode: str, *args):
    """``principal``: split a cover into cones ``βΛ`` with the same union.
    ``reduceY``: replace ``Y`` by ``{y ∧ ⋀X}`` without changing ``E^{X,Y}``.
    """
    if mode == "principal":
        (Z,) = args
        Z = list(Z)
        if not Z:
            return []
        g = _same_graph(*Z)
        B = _minimal(g, set().union(*(z.m for z in Z)))
        return [principal(g, beta) for beta in g.sorted(B)]
    if mode == "reduceY":
        g, X, Y = args
        x_min = top(g)
        for x in X:
            x_min = meet(x_min, x)
        return [meet(y, x_min) for y in Y]
    raise ValueError(f"unknown mode {mode!r}")


def sigma_of(rep: Rep, a: ESet) -> Matrix:
    if a.graph is not rep.graph:
        raise GraphMismatch("element and representation use different graphs")
    out = Matrix.zero(rep.dim)
    for alpha in a.graph.sorted(a.m):
        out = proj_join(out, rep.q(alpha))
    return out


# ------------------------------------------------------------- tightness


def _restricted(rep: Rep, universe: list[ESet]) -> Report:
    """``X = {μΛ}``, ``Y = ∅``: every principal cover must reach ``q_μ``."""
    g = rep.graph
    bad = []
    covers = 0
    for mu in g.all_paths():
        F = exy(g, [principal(g, mu)], [], universe)
        target = rep.q(mu)
        for b in F:
            if b.is_zero():
                continue
            Z = cover_normalize("principal", [b])
            if not is_cover(Z, F):
                continue
            covers += 1
            joined = Matrix.zero(rep.dim)
            for z in Z:
                joined = proj_join(joined, sigma_of(rep, z))
            if not proj_leq(target, joined):
                bad.append(("e_tight", mu, b.render()))
    return verdict(bad, {"covers_checked": covers, "elements": len(universe)})


def _subsets(items: list, cap: int):
    for k in range(0, cap + 1):
        yield from itertools.combinations(items, k)


class _MatrixAlgebra:
    """Commuting projections as interned matrices with memoized operations."""

    def __init__(self, dim: int):
        self.index: dict[Matrix, int] = {}
        self.items: list[Matrix] = []
        self.memo: dict = {}
        self.one = self.lift(Matrix.identity(dim))
        self.zero = self.lift(Matrix.zero(dim))

    def lift(self, m: Matrix) -> int:
        if m not in self.index:
            self.index[m] = len(self.items)
            self.items.append(m)
        return self.index[m]

    def _op(self, name, i, j, fn):
        key = (name, i, j)
        if key not in self.memo:
            self.memo[key] = fn(i, j)
        return self.memo[key]

    def mul(self, i: int, j: int) -> int:
        return self._op("mul", i, j, lambda a, b: self.lift(self.items[a] * self.items[b]))

    def join(self, i: int, j: int) -> int:
        return self._op("join", i, j, lambda a, b: self.lift(proj_join(self.items[a], self.items[b])))

    def complement(self, i: int) -> int:
        return self._op("not", i, i, lambda a, _: self.lift(self.items[self.one] - self.items[a]))

    def leq(self, i: int, j: int) -> bool:
        return self._op("leq", i, j, lambda a, b: proj_leq(self.items[a], self.items[b]))


class _DiagonalAlgebra:
    """Diagonal 0/1 projections as bit masks; products are intersections."""

    def __init__(self, dim: int):
        self.one = (1 << dim) - 1
        self.zero = 0

    @staticmethod
    def accepts(m: Matrix) -> bool:
        return all(i == j and v == 1 for (i, j), v in m.entries.items())

    def lift(self, m: Matrix) -> int:
        return sum(1 << i for i, _ in m.entries)

    def mul(self, a: int, b: int) -> int:
        return a & b

    def join(self, a: int, b: int) -> int:
        return a | b

    def complement(self, a: int) -> int:
        return self.one ^ a

    def leq(self, a: int, b: int) -> bool:
        return not a & ~b


def _full(rep: Rep, universe: list[ESet], cap: int, diagonal_ok: bool = True) -> Report:
    """All ``X, Y`` with at most ``cap`` members each, and all covers.

    ``E^{X,Y}`` depends only on ``d = ⋂X ∖ ⋃Y``, and the condition on
    ``Z`` only on ``⋁σ(Z)``. A cover must meet every ``{γ}`` with ``γ`` a
    maximal path inside ``d``, hence contains some ``z ∋ γ``; once
    ``σ(z) ≥ q_γ`` is confirmed for every such pair, the cover made of
    those singletons has the least join, and one check per ``d`` decides
    every cover at once.
    """
    g = rep.graph
    paths = g.all_paths()
    bit = {p: 1 << i for i, p in enumerate(paths)}
    everything = (1 << len(paths)) - 1
    sigmas = {a: sigma_of(rep, a) for a in universe}
    qs = {p: rep.q(p) for p in paths}
    use_diagonal = diagonal_ok and all(
        _DiagonalAlgebra.accepts(m) for m in itertools.chain(sigmas.values(), qs.values())
    )
    alg = _DiagonalAlgebra(rep.dim) if use_diagonal else _MatrixAlgebra(rep.dim)
    mask = {a: sum(bit[p] for p in a.paths()) for a in universe}
    sig = {a: alg.lift(m) for a, m in sigmas.items()}
    q = {p: alg.lift(m) for p, m in qs.items()}

    # monotonicity of σ on single paths, which the least-join argument needs
    for a in universe:
        for p in g.sorted(a.paths()):
            if not alg.leq(q[p], sig[a]):
                return Report(
                    INCONCLUSIVE,
                    (),
                    {"non_monotone": f"{a.render()} {p}", "elements": len(universe)},
                )

    xs: dict = {}
    ys: dict = {}
    for S in _subsets(universe, cap):
        c, mx = everything, alg.one
        u, jy = 0, alg.zero
        for s in S:
            c &= mask[s]
            mx = alg.mul(mx, sig[s])
            u |= mask[s]
            jy = alg.join(jy, sig[s])
        xs.setdefault((c, mx), S)
        ys.setdefault((u, jy), S)

    maximal = [p for p in paths if g.extensions(p) == {p}]
    least: dict = {}

    def least_join(d: int):
        if d not in least:
            acc = alg.zero
            for p in maximal:
                if d & bit[p]:
                    acc = alg.join(acc, q[p])
            least[d] = acc
        return least[d]

    bad = []
    checks = 0
    for (c, mx), X in xs.items():
        for (u, jy), Y in ys.items():
            checks += 1
            if not alg.leq(alg.mul(mx, alg.complement(jy)), least_join(c & ~u)):
                bad.append(
                    (
                        "e_tight",
                        "X=" + "".join(x.render() for x in X),
                        "Y=" + "".join(y.render() for y in Y),
                    )
                )
                if len(bad) >= MAX_WITNESSES:
                    break
        if len(bad) >= MAX_WITNESSES:
            break
    stats = {
        "cap": cap,
        "elements": len(universe),
        "x_classes": len(xs),
        "y_classes": len(ys),
        "checks": checks,
        "backend": "diagonal" if use_diagonal else "matrix",
    }
    return verdict(bad, stats)


MAX_WITNESSES = 20
MAX_ELEMENTS = 5000


def is_e_tight(rep: Rep, mode: str = "restricted", cap: int = 2) -> Report:
    universe = all_elements(rep.graph)
    if len(universe) > MAX_ELEMENTS:
        raise Infeasible(f"{len(universe)} semilattice elements exceeds {MAX_ELEMENTS}")
    if mode == "restricted":
        return _restricted(rep, universe)
    if mode == "full":
        return _full(rep, universe, cap)
    raise ValueError(f"unknown mode {mode!r}")
