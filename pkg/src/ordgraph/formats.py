"""Text formats: ``.pgraph`` graph files and the ``hom`` mini-language."""
from __future__ import annotations

import re
from importlib import resources
from pathlib import Path as FilePath

from .cones import parse_cone_spec, parse_word
from .errors import OrdGraphError, ParseError, ValidationFailed
from .pgraph import Graph, Path, validate_graph
from .reductions import Hom, check_order_hom

IDENT = re.compile(r"^[A-Za-z0-9_.']+$")
PATH_LINE = re.compile(r"^path\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)\s+deg\s+(.+)$")
COMPOSE_LINE = re.compile(r"^compose\s+(\S+)\s+(\S+)\s*=\s*(\S+)$")
HOM_TEXT = re.compile(r"^hom\s+(\S+)\s*:\s*(.+?)\s*->\s*(.+?)\s*\{(.*)\}$", re.DOTALL)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _ident(token: str, lineno: int) -> str:
    if not IDENT.match(token):
        raise ParseError(f"bad identifier {token!r}", lineno)
    return token


def read_graph(text: str) -> Graph:
    """Parse a ``.pgraph`` file without validating it."""
    cone = None
    vertices: list[str] = []
    paths: list[Path] = []
    compose: dict[tuple[str, str], str] = {}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        head = line.split()[0]
        if head == "group":
            if cone is not None:
                raise ParseError("group declared twice", lineno)
            cone = parse_cone_spec(line[len("group"):])
            continue
        if cone is None:
            raise ParseError("the group must be declared first", lineno)
        if head == "vertex":
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("expected: vertex <id>", lineno)
            vid = _ident(parts[1], lineno)
            if vid in seen:
                raise ParseError(f"duplicate id {vid!r}", lineno)
            seen.add(vid)
            vertices.append(vid)
        elif head == "path":
            m = PATH_LINE.match(line)
            if not m:
                raise ParseError("expected: path <id> : <src> -> <rng> deg <word>", lineno)
            pid, src, rng = (_ident(t, lineno) for t in m.group(1, 2, 3))
            if pid in seen:
                raise ParseError(f"duplicate id {pid!r}", lineno)
            seen.add(pid)
            try:
                degree = parse_word(cone, m.group(4))
            except ParseError as exc:
                raise ParseError(str(exc), lineno) from None
            paths.append(Path(pid, src, rng, degree))
        elif head == "compose":
            m = COMPOSE_LINE.match(line)
            if not m:
                raise ParseError("expected: compose <alpha> <beta> = <gamma>", lineno)
            a, b, c = (_ident(t, lineno) for t in m.group(1, 2, 3))
            if (a, b) in compose:
                raise ParseError(f"composite {a} {b} given twice", lineno)
            compose[(a, b)] = c
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    if cone is None:
        raise ParseError("no group declared")
    return Graph(cone, vertices, paths, compose)


def parse_graph_file(text: str) -> Graph:
    """Parse and validate; raises ValidationFailed when a law breaks."""
    g = read_graph(text)
    report = validate_graph(g)
    if not report.passed:
        raise ValidationFailed(report)
    return g


def render_graph(g: Graph) -> str:
    lines = [f"group {g.cone.spec()}"]
    lines += [f"vertex {v}" for v in g.vertices]
    for pid in g.non_vertex_paths():
        p = g[pid]
        lines.append(f"path {pid} : {p.source} -> {p.range} deg {g.cone.render_word(p.degree)}")
    for (a, b), c in sorted(g.table.items(), key=lambda kv: (g.order_key(kv[0][0]), g.order_key(kv[0][1]))):
        if not (g.is_vertex(a) or g.is_vertex(b)):
            lines.append(f"compose {a} {b} = {c}")
    return "\n".join(lines) + "\n"


def parse_hom_spec(text: str) -> Hom:
    """Parse ``hom NAME : DOMAIN -> CODOMAIN { gen = word ; ... }``."""
    body = " ".join(_strip(line) for line in text.splitlines()).strip()
    m = HOM_TEXT.match(body)
    if not m:
        raise ParseError("expected: hom NAME : DOMAIN -> CODOMAIN { gen = word ; ... }")
    name, dom_text, cod_text, assigns = m.groups()
    domain = parse_cone_spec(dom_text)
    codomain = parse_cone_spec(cod_text)
    images = {}
    for item in assigns.split(";"):
        item = item.strip()
        if not item:
            continue
        gen, eq, word = item.partition("=")
        gen = gen.strip()
        if not eq or not gen:
            raise ParseError(f"expected gen = word, got {item!r}")
        if gen not in domain.generator_names():
            raise ParseError(f"{gen!r} is not a generator of {domain.spec()}")
        if gen in images:
            raise ParseError(f"{gen!r} assigned twice")
        images[gen] = parse_word(codomain, word)
    missing = [n for n in domain.generator_names() if n not in images]
    if missing:
        raise ParseError(f"no image for {missing}")
    phi = Hom(name, domain, codomain, tuple((n, images[n]) for n in domain.generator_names()))
    check_order_hom(phi)
    return phi


# ---------------------------------------------------------------- fixtures

FIXTURES = ("m5", "square", "fork", "fpath")
HOM_FIXTURES = ("f2_to_z", "f2_to_bs12", "z2_sum", "natural_wreath_z")


def fixture_text(filename: str) -> str:
    return resources.files("ordgraph").joinpath("fixtures").joinpath(filename).read_text(encoding="utf-8")


def load_fixture(name: str) -> Graph:
    return parse_graph_file(fixture_text(f"{name}.pgraph"))


def read_input(location: str) -> str:
    """Read a file, falling back to a bundled fixture of the same name."""
    path = FilePath(location)
    if path.exists():
        return path.read_text(encoding="utf-8")
    bundled = resources.files("ordgraph").joinpath("fixtures").joinpath(path.name)
    if bundled.is_file():
        return bundled.read_text(encoding="utf-8")
    stem = path.name
    for ext in (".pgraph", ".hom"):
        candidate = resources.files("ordgraph").joinpath("fixtures").joinpath(stem + ext)
        if candidate.is_file():
            return candidate.read_text(encoding="utf-8")
    raise OrdGraphError(f"no such file: {location}")
