"""The line-oriented ``.ttmap`` input format.

::

    graph:
      vertex v
      edge a = v -> w
    marking:
      basepoint v
      tree b
      generators a^-1 c^-1
    map:
      v -> w
      a -> b^-1
      p b
    filtration:
      stratum a b c

``#`` starts a comment. ``generators`` is optional and says, for x1, x2, ...
in turn, which non-tree edge and direction the generator crosses. Leading
comment lines are kept so that rendering reproduces a file exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, StructuralError
from .graphs import Graph, Marking, Step, spanning_tree
from .morphism import Filtration, GraphMorphism, build_morphism

SECTIONS = ("graph", "marking", "map", "filtration")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")

PathSpec = list  # of (edge name, sign)


@dataclass
class InputDocument:
    vertices: list[str] = field(default_factory=list)
    edges: list[tuple[str, str, str]] = field(default_factory=list)
    basepoint: str | None = None
    tree: list[str] | None = None
    generators: PathSpec | None = None
    vertex_images: dict[str, str] = field(default_factory=dict)
    edge_images: dict[str, PathSpec] = field(default_factory=dict)
    connecting_path: PathSpec | None = None
    strata: list[list[str]] | None = None
    comments: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Problem:
    """Everything built from an input document."""

    graph: Graph
    marking: Marking
    morphism: GraphMorphism
    filtration: Filtration | None


class _Tok:
    __slots__ = ("text", "col")

    def __init__(self, text: str, col: int):
        self.text = text
        self.col = col


def _tokens(line: str) -> list[_Tok]:
    return [_Tok(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.doc = InputDocument()
        self.lineno = 0
        self.names: dict[str, str] = {}  # name -> "vertex" | "edge"
        self.seen_sections: set[str] = set()

    def error(self, msg: str, tok: _Tok | None = None) -> ParseError:
        return ParseError(msg, self.lineno, tok.col if tok else None)

    def declare(self, tok: _Tok, kind: str) -> str:
        name = tok.text
        if not _NAME.match(name):
            raise self.error(f"invalid {kind} name {name!r}", tok)
        if name in self.names:
            raise self.error(f"duplicate name {name!r}", tok)
        self.names[name] = kind
        return name

    def ref(self, tok: _Tok, kind: str) -> str:
        if self.names.get(tok.text) != kind:
            raise self.error(f"undeclared {kind} {tok.text!r}", tok)
        return tok.text

    def step(self, tok: _Tok) -> tuple[str, int]:
        text, sign = tok.text, 1
        if text.endswith("^-1"):
            text, sign = text[:-3], -1
        self.ref(_Tok(text, tok.col), "edge")
        return text, sign

    def path(self, toks: list[_Tok], where: _Tok) -> PathSpec:
        if not toks:
            raise self.error("expected a path ('.' for the empty path)", where)
        if len(toks) == 1 and toks[0].text == ".":
            return []
        return [self.step(t) for t in toks]

    def parse(self) -> InputDocument:
        section = None
        in_header = True
        for self.lineno, raw in enumerate(self.text.splitlines(), 1):
            stripped = raw.strip()
            if in_header and stripped.startswith("#"):
                self.doc.comments.append(raw.rstrip())
                continue
            line = raw.split("#", 1)[0]
            toks = _tokens(line)
            if not toks:
                continue
            in_header = False
            head = toks[0].text
            if len(toks) == 1 and head.endswith(":") and head[:-1] in SECTIONS:
                section = head[:-1]
                if section in self.seen_sections:
                    raise self.error(f"section {section}: appears twice", toks[0])
                self.seen_sections.add(section)
                continue
            if section is None:
                raise self.error(f"unknown token {head!r} outside any section", toks[0])
            getattr(self, "_" + section)(toks)
        self._finish()
        return self.doc

    def _graph(self, toks: list[_Tok]) -> None:
        head = toks[0].text
        if head == "vertex":
            if len(toks) != 2:
                raise self.error("expected: vertex NAME", toks[0])
            self.doc.vertices.append(self.declare(toks[1], "vertex"))
        elif head == "edge":
            shape = [t.text for t in toks]
            if len(toks) != 6 or shape[2] != "=" or shape[4] != "->":
                raise self.error("expected: edge NAME = V -> W", toks[0])
            a = self.ref(toks[3], "vertex")
            b = self.ref(toks[5], "vertex")
            self.doc.edges.append((self.declare(toks[1], "edge"), a, b))
        else:
            raise self.error(f"unknown token {head!r} in graph section", toks[0])

    def _marking(self, toks: list[_Tok]) -> None:
        head = toks[0].text
        doc = self.doc
        if head == "basepoint":
            if len(toks) != 2:
                raise self.error("expected: basepoint V", toks[0])
            if doc.basepoint is not None:
                raise self.error("basepoint given twice", toks[0])
            doc.basepoint = self.ref(toks[1], "vertex")
        elif head == "tree":
            if doc.tree is not None:
                raise self.error("tree given twice", toks[0])
            rest = [t for t in toks[1:] if t.text != "."]
            doc.tree = [self.ref(t, "edge") for t in rest]
        elif head == "generators":
            if doc.generators is not None:
                raise self.error("generators given twice", toks[0])
            doc.generators = [self.step(t) for t in toks[1:]]
        else:
            raise self.error(f"unknown token {head!r} in marking section", toks[0])

    def _map(self, toks: list[_Tok]) -> None:
        doc = self.doc
        head = toks[0]
        if head.text == "p" and (len(toks) < 2 or toks[1].text != "->"):
            if doc.connecting_path is not None:
                raise self.error("connecting path p given twice", head)
            doc.connecting_path = self.path(toks[1:], head)
            return
        if len(toks) < 3 or toks[1].text != "->":
            raise self.error(f"unknown token {head.text!r} in map section", head)
        kind = self.names.get(head.text)
        if kind == "vertex":
            if len(toks) != 3:
                raise self.error("expected: V -> W", head)
            if head.text in doc.vertex_images:
                raise self.error(f"image of vertex {head.text} given twice", head)
            doc.vertex_images[head.text] = self.ref(toks[2], "vertex")
        elif kind == "edge":
            if head.text in doc.edge_images:
                raise self.error(f"image of edge {head.text} given twice", head)
            doc.edge_images[head.text] = self.path(toks[2:], head)
        else:
            raise self.error(f"undeclared vertex or edge {head.text!r}", head)

    def _filtration(self, toks: list[_Tok]) -> None:
        if toks[0].text != "stratum" or len(toks) < 2:
            raise self.error("expected: stratum E1 E2 ...", toks[0])
        if self.doc.strata is None:
            self.doc.strata = []
        self.doc.strata.append([self.ref(t, "edge") for t in toks[1:]])

    def _finish(self) -> None:
        doc = self.doc
        self.lineno = None
        if not doc.vertices:
            raise ParseError("no vertices declared")
        for v in doc.vertices:
            if v not in doc.vertex_images:
                raise ParseError(f"map section gives no image for vertex {v}")
        for e, _, _ in doc.edges:
            if e not in doc.edge_images:
                raise ParseError(f"map section gives no image for edge {e}")


def parse(text: str) -> InputDocument:
    """Parse a ``.ttmap`` document. Raises :class:`ParseError` with line/column."""
    return _Parser(text).parse()


def _path_text(path: PathSpec) -> str:
    if not path:
        return "."
    return " ".join(e if s > 0 else f"{e}^-1" for e, s in path)


def render(doc: InputDocument) -> str:
    """Canonical text for ``doc``; ``parse(render(doc))`` gives ``doc`` back."""
    out: list[str] = list(doc.comments)
    if out:
        out.append("")
    out.append("graph:")
    out.extend(f"  vertex {v}" for v in doc.vertices)
    out.extend(f"  edge {e} = {a} -> {b}" for e, a, b in doc.edges)
    if doc.basepoint is not None or doc.tree is not None or doc.generators is not None:
        out.append("")
        out.append("marking:")
        if doc.basepoint is not None:
            out.append(f"  basepoint {doc.basepoint}")
        if doc.tree is not None:
            out.append(("  tree " + " ".join(doc.tree)).rstrip())
        if doc.generators is not None:
            out.append(("  generators " + _path_text(doc.generators)).rstrip())
    out.append("")
    out.append("map:")
    out.extend(f"  {v} -> {doc.vertex_images[v]}" for v in doc.vertices)
    out.extend(f"  {e} -> {_path_text(doc.edge_images[e])}" for e, _, _ in doc.edges)
    if doc.connecting_path is not None:
        out.append(f"  p {_path_text(doc.connecting_path)}")
    if doc.strata is not None:
        out.append("")
        out.append("filtration:")
        out.extend("  stratum " + " ".join(s) for s in doc.strata)
    return "\n".join(out) + "\n"


def build(doc: InputDocument) -> Problem:
    """Turn a parsed document into graph, marking, morphism and filtration.

    Structural problems (valence, trees, edge images that do not fit) raise
    :class:`StructuralError`; endpoint compatibility is left to
    :func:`l2tt.morphism.validate`.
    """
    graph = Graph.from_names(doc.vertices, doc.edges)
    V, E = graph.vertex, graph.edge

    def steps(path: PathSpec) -> list[Step]:
        return [(E(e), s) for e, s in path]

    base = V(doc.basepoint) if doc.basepoint is not None else 0
    tree = [E(e) for e in doc.tree] if doc.tree is not None else None
    gens = steps(doc.generators) if doc.generators is not None else None
    marking = spanning_tree(graph, base, tree, gens)

    vertex_map = [V(doc.vertex_images[v]) for v in doc.vertices]
    if doc.connecting_path is None:
        if vertex_map[base] != base:
            raise StructuralError(
                f"basepoint {graph.vertex_names[base]} is not fixed, so the map section needs a connecting path p"
            )
        p_steps: list[Step] = []
    else:
        p_steps = steps(doc.connecting_path)
    f = build_morphism(graph, vertex_map, [steps(doc.edge_images[e]) for e, _, _ in doc.edges], base, p_steps)
    if f.connecting_path.end != vertex_map[base]:
        raise StructuralError("connecting path p must end at the image of the basepoint")

    filt = None
    if doc.strata is not None:
        filt = Filtration(tuple(tuple(E(e) for e in s) for s in doc.strata))
        filt.check_partition(graph)
    return Problem(graph, marking, f, filt)


def load(text: str) -> Problem:
    return build(parse(text))
