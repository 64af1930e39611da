"""Exact sparse rational matrices and finite representations of P-graphs.

A representation assigns a square matrix ``t_λ`` to every path. Two are
built in: the ultrafilter representation, which permutes the ultrafilter
basis, and the left-regular one, which shifts the path basis.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch, NotCommuting, NotInCorner
from .filters import translate, ultrafilters
from .pgraph import Graph, is_exhaustive, mce, minimal_exhaustive_sets
from .report import Report, verdict

ULTRAFILTER = "ultrafilter"
LEFT_REGULAR = "left_regular"
KINDS = (ULTRAFILTER, LEFT_REGULAR)


class Matrix:
    """Square matrix stored as ``{(row, col): Fraction}`` with no zeros."""

    __slots__ = ("dim", "entries", "_hash")

    def __init__(self, dim: int, entries=None):
        self.dim = dim
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionMismatch(f"entry ({i},{j}) outside a {dim}x{dim} matrix")
            v = Fraction(v)
            if v:
                clean[(i, j)] = v
        self.entries = clean
        self._hash = None

    @classmethod
    def zero(cls, dim: int) -> Matrix:
        return cls(dim)

    @classmethod
    def identity(cls, dim: int) -> Matrix:
        return cls(dim, {(i, i): 1 for i in range(dim)})

    @classmethod
    def unit(cls, dim: int, i: int, j: int) -> Matrix:
        return cls(dim, {(i, j): 1})

    def _same(self, other: Matrix) -> None:
        if not isinstance(other, Matrix):
            raise TypeError(f"expected a Matrix, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionMismatch(f"{self.dim}x{self.dim} against {other.dim}x{other.dim}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.dim == other.dim and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.entries.items())))
        return self._hash

    def __add__(self, other: Matrix) -> Matrix:
        self._same(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return Matrix(self.dim, out)

    def __neg__(self) -> Matrix:
        return Matrix(self.dim, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def scale(self, c) -> Matrix:
        return Matrix(self.dim, {k: c * v for k, v in self.entries.items()})

    def __mul__(self, other: Matrix) -> Matrix:
        self._same(other)
        rows: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            rows.setdefault(k, []).append((j, v))
        out: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in rows.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + a * b
        return Matrix(self.dim, out)

    def adjoint(self) -> Matrix:
        return Matrix(self.dim, {(j, i): v for (i, j), v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def is_projection(self) -> bool:
        return self == self.adjoint() and self * self == self

    def __repr__(self):
        return f"Matrix({self.dim}, {dict(sorted(self.entries.items()))})"

    def to_text(self) -> str:
        """``dim N`` then one ``row col num/den`` line per entry, 1-based."""
        lines = [f"dim {self.dim}"]
        for (i, j), v in sorted(self.entries.items()):
            lines.append(f"{i + 1} {j + 1} {v.numerator}/{v.denominator}")
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> Matrix:
        lines = [line.split() for line in text.strip().splitlines()]
        if not lines or len(lines[0]) != 2 or lines[0][0] != "dim":
            raise ValueError("matrix text must start with 'dim N'")
        dim = int(lines[0][1])
        entries = {}
        for row, col, value in lines[1:]:
            entries[(int(row) - 1, int(col) - 1)] = Fraction(value)
        return cls(dim, entries)


@dataclass
class Rep:
    graph: Graph
    kind: str
    labels: tuple[str, ...]
    mats: dict[str, Matrix]

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __getitem__(self, pid: str) -> Matrix:
        return self.mats[pid]

    def q(self, pid: str) -> Matrix:
        """Range projection ``t_λ t_λ*``."""
        cache = self.__dict__.setdefault("_q", {})
        if pid not in cache:
            t = self.mats[pid]
            cache[pid] = t * t.adjoint()
        return cache[pid]

    def replace(self, **mats: Matrix) -> Rep:
        return Rep(self.graph, f"{self.kind}*", self.labels, {**self.mats, **mats})

    def legend(self) -> list[str]:
        return [f"{i + 1} {label}" for i, label in enumerate(self.labels)]


def _ultrafilter_label(g: Graph, U) -> str:
    return "U_" + max(U.paths, key=g.order_key)


def build_rep(g: Graph, kind: str) -> Rep:
    kind = normalize_kind(kind)
    if kind == ULTRAFILTER:
        basis = ultrafilters(g)
        index = {U: i for i, U in enumerate(basis)}
        labels = tuple(_ultrafilter_label(g, U) for U in basis)
        mats = {}
        for lam in g.all_paths():
            entries = {}
            for U in basis:
                image = translate(g, lam, U)
                if image is not None:
                    entries[(index[image], index[U])] = 1
            mats[lam] = Matrix(len(basis), entries)
        return Rep(g, kind, labels, mats)
    basis = g.all_paths()
    index = {p: i for i, p in enumerate(basis)}
    mats = {}
    for mu in basis:
        entries = {
            (index[g.compose(mu, alpha)], index[alpha]): 1 for alpha in basis if g.composable(mu, alpha)
        }
        mats[mu] = Matrix(len(basis), entries)
    return Rep(g, kind, tuple(basis), mats)


def normalize_kind(kind: str) -> str:
    aliases = {"ultrafilter": ULTRAFILTER, "left_regular": LEFT_REGULAR, "leftregular": LEFT_REGULAR}
    if kind not in aliases:
        raise ValueError(f"unknown representation kind {kind!r}")
    return aliases[kind]


def _check_shapes(rep: Rep) -> None:
    missing = [p for p in rep.graph.paths if p not in rep.mats]
    if missing:
        raise DimensionMismatch(f"no matrix for {sorted(missing)}")
    for pid, m in rep.mats.items():
        if not isinstance(m, Matrix) or m.dim != rep.dim:
            raise DimensionMismatch(f"matrix for {pid} is not {rep.dim}x{rep.dim}")


def check_relators(rep: Rep) -> Report:
    """Verify the four relator families exactly; lists every violation."""
    _check_shapes(rep)
    g = rep.graph
    t = rep.mats
    paths = g.all_paths()
    vertices = g.sorted(g.vertices)
    bad = []
    for v in vertices:
        if t[v] != t[v].adjoint():
            bad.append(("T1", v, v))
    for v, w in itertools.product(vertices, repeat=2):
        expected = t[v] if v == w else Matrix.zero(rep.dim)
        if t[v] * t[w] != expected:
            bad.append(("T1", v, w))
    for mu, nu in itertools.product(paths, repeat=2):
        if g.composable(mu, nu) and t[mu] * t[nu] != t[g.compose(mu, nu)]:
            bad.append(("T2", mu, nu))
    for mu in paths:
        if t[mu].adjoint() * t[mu] != t[g.source(mu)]:
            bad.append(("T3", mu))
    for mu, nu in itertools.product(paths, repeat=2):
        total = Matrix.zero(rep.dim)
        for lam in g.sorted(mce(g, mu, nu)):
            total = total + rep.q(lam)
        if rep.q(mu) * rep.q(nu) != total:
            bad.append(("T4", mu, nu))
    return verdict(bad, {"dim": rep.dim, "paths": len(paths)})


def is_faithful(rep: Rep) -> bool:
    return all(not rep.mats[p].is_zero() for p in rep.graph.paths)


def bolt_value(rep: Rep, mu: str, E) -> Matrix:
    """``∏_{α∈E} (q_μ − q_α)``; the factors commute in a representation."""
    g = rep.graph
    outside = set(E) - g.extensions(mu)
    if outside:
        raise NotInCorner(f"{sorted(outside)} not in {mu}Λ")
    out = Matrix.identity(rep.dim)
    for alpha in g.sorted(E):
        out = out * (rep.q(mu) - rep.q(alpha))
    return out


def _render_set(g: Graph, E) -> str:
    return "{" + ",".join(g.sorted(E)) + "}"


def is_tight(rep: Rep, all_subsets: bool = False) -> Report:
    """Every bolt over a minimal exhaustive set must vanish.

    With ``all_subsets`` every exhaustive ``E ⊆ μΛ`` is tried instead,
    including those that contain ``μ``. Witnesses are listed in path order.
    """
    g = rep.graph
    bad = []
    checked = 0
    for mu in g.all_paths():
        if all_subsets:
            pool = g.sorted(g.extensions(mu))
            sets = [
                frozenset(c)
                for k in range(1, len(pool) + 1)
                for c in itertools.combinations(pool, k)
                if is_exhaustive(g, mu, c)
            ]
        else:
            sets = minimal_exhaustive_sets(g, mu)
        for E in sets:
            checked += 1
            if not bolt_value(rep, mu, E).is_zero():
                bad.append(("bolt", mu, _render_set(g, E)))
    return verdict(bad, {"bolts_checked": checked})


def builtin_grading(rep: Rep) -> dict:
    """Grade each basis vector by the degree of the path it stands for."""
    g = rep.graph
    if rep.kind == ULTRAFILTER:
        return {label: g.degree(label[2:]) for label in rep.labels}
    return {label: g.degree(label) for label in rep.labels}


def grading_check(rep: Rep, grade: dict) -> bool:
    """``t_μ`` must carry grade ``p`` vectors into grade ``d(μ)p``."""
    g = rep.graph
    missing = [label for label in rep.labels if label not in grade]
    if missing:
        raise ValueError(f"grading misses {missing}")
    for mu in g.all_paths():
        d = g.degree(mu)
        for (i, j) in rep.mats[mu].entries:
            if grade[rep.labels[i]] != d * grade[rep.labels[j]]:
                return False
    return True


# ---------------------------------------------------------------- spans


class _Echelon:
    """Incremental row echelon form over the rationals, keyed by pivots."""

    def __init__(self):
        self.rows: dict = {}

    def reduce(self, vec: dict) -> dict:
        vec = dict(vec)
        for key in sorted(vec):
            if key in vec and key in self.rows:
                c = vec[key]
                for k, v in self.rows[key].items():
                    nv = vec.get(k, 0) - c * v
                    if nv:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
        return vec

    def add(self, vec: dict) -> bool:
        vec = self.reduce(vec)
        if not vec:
            return False
        pivot = min(vec)
        c = vec[pivot]
        row = {k: v / c for k, v in vec.items()}
        # keep earlier rows reduced against the new pivot
        for key, other in self.rows.items():
            if pivot in other:
                f = other[pivot]
                for k, v in row.items():
                    nv = other.get(k, 0) - f * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        self.rows[pivot] = row
        return True

    def __len__(self):
        return len(self.rows)


def _generators(rep: Rep, mode: str) -> list[Matrix]:
    g = rep.graph
    paths = g.all_paths()
    out = []
    for a, b in itertools.product(paths, repeat=2):
        if mode == "balanced" and g.degree(a) != g.degree(b):
            continue
        out.append(rep.mats[a] * rep.mats[b].adjoint())
    return out


def span_dim(rep: Rep, mode: str = "full", closed: bool = True) -> int:
    """Dimension of the span of ``t_α t_β*`` (all, or balanced pairs).

    With ``closed`` the span is first closed under products and adjoints.
    """
    if mode not in ("full", "balanced"):
        raise ValueError(f"unknown span mode {mode!r}")
    echelon = _Echelon()
    basis: list[Matrix] = []
    queue = _generators(rep, mode)
    while queue:
        fresh = []
        for m in queue:
            if echelon.add(m.entries):
                basis.append(m)
                fresh.append(m)
        if not closed:
            break
        queue = []
        for m in fresh:
            queue.append(m.adjoint())
            for other in basis:
                queue.append(m * other)
                queue.append(other * m)
    return len(echelon)


def proj_join(p: Matrix, q: Matrix) -> Matrix:
    """``p ∨ q = p + q − pq`` for commuting projections."""
    pq = p * q
    if pq != q * p:
        raise NotCommuting("projections do not commute")
    return p + q - pq


def proj_leq(p: Matrix, q: Matrix) -> bool:
    """``p ≤ q`` for commuting projections."""
    return p * q == p
