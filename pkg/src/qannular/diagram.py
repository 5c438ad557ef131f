"""Annular link diagrams as closures of tangle words.

An annular link is presented by cutting the annulus along the seam and
reading the resulting (k,k)-tangle left to right as a word of elementary
slices: crossings, cups (births) and caps (deaths).  Positions are 1-based
and index the gap among the strands present at that point of the word.
Closing the word glues right edge to left edge; the k glue points are the
seam slots.

Coordinates used by the tracer: a word with m slices has gaps 0..m; at gap
g there are ``c_g`` strands at heights 1..c_g.  A node is a pair (gap,
height).  Gap 0 and gap m are identified by the closure, so nodes (m, h)
and (0, h) are the two sides of seam slot h.

A traced `Configuration` records each circle's seam passes with directions
(+1 means the circle runs through the slot from the right edge to the left
edge, the positive direction around the annulus), its winding number, and
the arc decomposition between consecutive passes.  Circles are unoriented;
the traversal is canonicalized so essential circles have winding +1 and a
trivial circle's minimal-slot pass has direction +1.  For every circle with
passes, pass 0 is the one at the minimal slot and arc 0 follows it, so
"just after the pass 0 landing" is a well-defined marked point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import BalanceError, RangeError, SchemaError, TopologyError

Node = Tuple[int, int]


# -- slices and words -----------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    pos: int
    sign: int


@dataclass(frozen=True)
class Cup:
    pos: int


@dataclass(frozen=True)
class Cap:
    pos: int


Slice = object  # Crossing | Cup | Cap


@dataclass(frozen=True)
class TangleWord:
    """A validated (k,k)-tangle word with closure modulus r.

    r >= 1 selects k_r = Z[q]/(q^r - 1); r = 0 means no reduction
    (work over Z[q, q^-1]).
    """

    k: int
    slices: Tuple[Slice, ...]
    r: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise RangeError(f"k must be >= 0, got {self.k}")
        if self.r < 0:
            raise RangeError(f"r must be >= 0, got {self.r}")
        c = self.k
        for idx, sl in enumerate(self.slices):
            if isinstance(sl, Crossing):
                if sl.sign not in (1, -1):
                    raise SchemaError(f"slice {idx}: crossing sign must be +-1")
                if not 1 <= sl.pos <= c - 1:
                    raise RangeError(f"slice {idx}: crossing at {sl.pos} needs strands {sl.pos},{sl.pos + 1} of {c}")
            elif isinstance(sl, Cup):
                if not 1 <= sl.pos <= c + 1:
                    raise RangeError(f"slice {idx}: cup at {sl.pos} out of range 1..{c + 1}")
                c += 2
            elif isinstance(sl, Cap):
                if not 1 <= sl.pos <= c - 1:
                    raise RangeError(f"slice {idx}: cap at {sl.pos} needs strands {sl.pos},{sl.pos + 1} of {c}")
                c -= 2
            else:
                raise SchemaError(f"slice {idx}: unknown slice {sl!r}")
        if c != self.k:
            raise BalanceError(f"strand count ends at {c}, expected {self.k}")

    @property
    def n(self) -> int:
        return sum(1 for s in self.slices if isinstance(s, Crossing))

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.slices if isinstance(s, Crossing) and s.sign > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.slices if isinstance(s, Crossing) and s.sign < 0)

    def crossing_indices(self) -> List[int]:
        """Slice indices of the crossings, in word order."""
        return [i for i, s in enumerate(self.slices) if isinstance(s, Crossing)]


def parse_word(text) -> TangleWord:
    """Parse the JSON presentation of a tangle word.

    Accepts a JSON string or an already-decoded dict.  Schema:
    {"k": int, "r": int, "slices": [{"t": "x", "i": int, "s": +-1}
    | {"t": "cup", "i": int} | {"t": "cap", "i": int}]}.
    """
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON: {e}") from None
    else:
        doc = text
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    for key in ("k", "slices"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}")
    k = doc["k"]
    r = doc.get("r", 0)
    if not isinstance(k, int) or isinstance(k, bool):
        raise SchemaError("k must be an integer")
    if not isinstance(r, int) or isinstance(r, bool):
        raise SchemaError("r must be an integer")
    if not isinstance(doc["slices"], list):
        raise SchemaError("slices must be a list")
    slices: List[Slice] = []
    for idx, item in enumerate(doc["slices"]):
        if not isinstance(item, dict) or "t" not in item:
            raise SchemaError(f"slice {idx}: not an object with 't'")
        t = item["t"]
        i = item.get("i")
        if not isinstance(i, int) or isinstance(i, bool):
            raise SchemaError(f"slice {idx}: 'i' must be an integer")
        if t == "x":
            s = item.get("s")
            if s not in (1, -1):
                raise SchemaError(f"slice {idx}: 's' must be +-1")
            slices.append(Crossing(i, s))
        elif t == "cup":
            slices.append(Cup(i))
        elif t == "cap":
            slices.append(Cap(i))
        else:
            raise SchemaError(f"slice {idx}: unknown type {t!r}")
    return TangleWord(k, tuple(slices), r)


def word_to_json(word: TangleWord) -> str:
    """Canonical JSON serialization; round-trips bit-exactly."""
    items = []
    for sl in word.slices:
        if isinstance(sl, Crossing):
            items.append({"t": "x", "i": sl.pos, "s": sl.sign})
        elif isinstance(sl, Cup):
            items.append({"t": "cup", "i": sl.pos})
        else:
            items.append({"t": "cap", "i": sl.pos})
    return json.dumps({"k": word.k, "r": word.r, "slices": items}, separators=(",", ":"), sort_keys=True)


# -- resolutions ----------------------------------------------------------


@dataclass(frozen=True)
class SiteAnchor:
    """Where a crossing's surgery band lives in a flat word.

    For a parallel smoothing the band is vertical: it joins the strands at
    heights (pos, pos+1) crossing gap ``gap``.  For a turnback smoothing
    (cap at slice gap-1, cup at slice gap) the band is horizontal between
    the two noses.  ``end1``/``end2`` are nodes of the flat word's tracer
    frame lying on the two arcs the band joins.
    """

    crossing: int
    kind: str  # "parallel" | "turnback"
    gap: int
    pos: int
    end1: Node
    end2: Node


@dataclass(frozen=True)
class Resolution:
    """A vertex of the cube: the flat word of the u-smoothing."""

    k: int
    slices: Tuple[Slice, ...]
    u: Tuple[int, ...]
    anchors: Tuple[SiteAnchor, ...]

    def word(self, r: int = 0) -> TangleWord:
        return TangleWord(self.k, self.slices, r)


def resolve(word: TangleWord, u: Tuple[int, ...]) -> Resolution:
    """Replace each crossing by its u_i-smoothing.

    Positive crossing: 0 -> parallel, 1 -> turnback (cap then cup at the
    same position).  Negative crossing: reversed.
    """
    xs = word.crossing_indices()
    if len(u) != len(xs):
        raise RangeError(f"u has length {len(u)}, want {len(xs)}")
    out: List[Slice] = []
    anchors: List[SiteAnchor] = []
    ci = 0
    for sl in word.slices:
        if isinstance(sl, Crossing):
            bit = u[ci]
            if bit not in (0, 1):
                raise RangeError("u entries must be 0 or 1")
            turnback = (bit == 1) if sl.sign > 0 else (bit == 0)
            if turnback:
                g = len(out)
                out.append(Cap(sl.pos))
                out.append(Cup(sl.pos))
                anchors.append(SiteAnchor(ci, "turnback", g + 1, sl.pos, (g, sl.pos), (g + 2, sl.pos)))
            else:
                g = len(out)
                anchors.append(SiteAnchor(ci, "parallel", g, sl.pos, (g, sl.pos), (g, sl.pos + 1)))
            ci += 1
        else:
            out.append(sl)
    return Resolution(word.k, tuple(out), tuple(u), tuple(anchors))


# -- configurations -------------------------------------------------------


@dataclass
class Arc:
    """A run of a circle between consecutive seam passes.

    ``side`` is "L" when both ends attach to the left edge (the arc,
    together with the seam segment between its slots, bounds a bigon on the
    counter-clockwise side of the seam), "R" for the right edge, and "T"
    for a through arc.  Seam-free circles have a single arc with side "O".
    """

    nodes: Tuple[Node, ...]
    side: str


class Circle:
    __slots__ = ("nodes", "steps", "passes", "pass_ats", "arcs", "winding", "essential", "key", "index")

    def __init__(self, nodes: Tuple[Node, ...], steps: Tuple[str, ...], passes: Tuple[Tuple[int, int], ...]):
        self.nodes = nodes
        self.steps = steps  # edge kind 'h'|'cup'|'cap'|'glue' for nodes[i] -> nodes[i+1]
        self.passes = passes
        self.pass_ats: Tuple[int, ...] = ()  # step index of each pass; set by the tracer
        self.winding = sum(d for _, d in passes)
        self.essential = self.winding != 0
        # basis order key: essentials by minimal slot, trivials by minimal node
        if self.essential:
            self.key = min(s for s, _ in passes)
        else:
            self.key = min(nodes)
        self.arcs: List[Arc] = []
        self.index = -1

    def __repr__(self) -> str:
        tag = "E" if self.essential else "T"
        return f"<Circle {tag} passes={self.passes}>"


@dataclass
class Configuration:
    """Traced circle census of a flat word's annular closure."""

    resolution: Resolution
    circles: List[Circle]
    essentials: List[Circle]
    trivials: List[Circle]
    node_circle: Dict[Node, int]  # node -> index into circles

    @property
    def k(self) -> int:
        return self.resolution.k

    def ordered(self) -> List[Circle]:
        """Basis order: essentials innermost first, then trivials."""
        return self.essentials + self.trivials

    def locate(self, node: Node) -> Tuple[Circle, int, int]:
        """Find (circle, arc index, position within arc) holding a node.

        Arcs of a circle are node-disjoint, so the answer is unique.
        """
        ci = self.node_circle.get(node)
        if ci is None:
            raise TopologyError(f"node {node} not in configuration")
        circ = self.circles[ci]
        for ai, arc in enumerate(circ.arcs):
            for pi, nd in enumerate(arc.nodes):
                if nd == node:
                    return circ, ai, pi
        raise TopologyError(f"node {node} missing from arcs")

    def local_direction(self, circ: Circle, pos: int) -> int:
        """Horizontal traversal direction at nodes[pos]: +1 rightward.

        Determined by which side of the node the exit edge attaches to:
        cap noses sit right of their nodes, cup noses left.
        """
        kind = circ.steps[pos]
        node = circ.nodes[pos]
        if kind == "h":
            nxt = circ.nodes[(pos + 1) % len(circ.nodes)]
            return 1 if nxt[0] > node[0] else -1
        if kind == "glue":
            return 1 if node[0] == len(self.resolution.slices) else -1
        return 1 if kind == "cap" else -1

    def find_nose_step(self, circ: Circle, lower: Node, kind: str) -> int:
        """Step index traversing the nose edge {lower, above-lower} of `kind`."""
        upper = (lower[0], lower[1] + 1)
        n = len(circ.nodes)
        for i in range(n):
            if circ.steps[i] == kind and {circ.nodes[i], circ.nodes[(i + 1) % n]} == {lower, upper}:
                return i
        raise TopologyError(f"no {kind} nose step at {lower}")


def _slice_edges(slices: Tuple[Slice, ...], k: int):
    """All tracer edges: (node, node, slot or None, kind)."""
    edges: List[Tuple[Node, Node, Optional[int], str]] = []
    c = k
    for t, sl in enumerate(slices):
        if isinstance(sl, Cup):
            p = sl.pos
            edges.append(((t + 1, p), (t + 1, p + 1), None, "cup"))
            for h in range(1, c + 1):
                edges.append(((t, h), (t + 1, h if h < p else h + 2), None, "h"))
            c += 2
        elif isinstance(sl, Cap):
            p = sl.pos
            edges.append(((t, p), (t, p + 1), None, "cap"))
            for h in range(1, c + 1):
                if h in (p, p + 1):
                    continue
                edges.append(((t, h), (t + 1, h if h < p else h - 2), None, "h"))
            c -= 2
        else:
            raise TopologyError("crossing in a flat word")
    m = len(slices)
    for h in range(1, k + 1):
        edges.append(((m, h), (0, h), h, "glue"))
    return edges


def trace_configuration(res: Resolution) -> Configuration:
    """Trace the circles of the annular closure of a flat word."""
    edges = _slice_edges(res.slices, res.k)
    # node -> list of (edge index); every node must have degree exactly 2
    inc: Dict[Node, List[int]] = {}
    for i, (a, b, _, _) in enumerate(edges):
        inc.setdefault(a, []).append(i)
        inc.setdefault(b, []).append(i)
    for node, es in inc.items():
        if len(es) != 2:
            raise TopologyError(f"node {node} has degree {len(es)}")

    m = len(res.slices)
    seen_edges = [False] * len(edges)
    circles: List[Circle] = []
    for start_node in sorted(inc):
        e0 = inc[start_node][0]
        if seen_edges[e0]:
            continue
        # walk the cycle edge by edge
        nodes: List[Node] = []
        steps: List[str] = []
        passes: List[Tuple[int, int]] = []
        pass_at: List[int] = []  # position in nodes after which the pass occurs
        node = start_node
        eidx = e0
        while not seen_edges[eidx]:
            seen_edges[eidx] = True
            a, b, slot, kind = edges[eidx]
            nxt = b if node == a else a
            if slot is not None:
                # glue edge (m, slot) <-> (0, slot); direction +1 is R -> L
                d = 1 if node == (m, slot) else -1
                passes.append((slot, d))
                pass_at.append(len(nodes))
            nodes.append(node)
            steps.append(kind)
            node = nxt
            e1, e2 = inc[node]
            eidx = e2 if e1 == eidx else e1
        if node != start_node:
            raise TopologyError("walk did not return to start")

        # canonical traversal: essential -> winding +1; trivial with passes
        # -> the minimal-slot pass gets direction +1
        w = sum(d for _, d in passes)
        flip = False
        if w < 0:
            flip = True
        elif w == 0 and passes:
            smin = min(s for s, _ in passes)
            d = next(d for s, d in passes if s == smin)
            flip = d < 0
        if flip:
            # edge old_p -> old_p+1 becomes new_(n-p-1) -> new_(n-p)
            n = len(nodes)
            nodes = [nodes[0]] + nodes[:0:-1]
            steps = list(reversed(steps))
            passes = [(s, -d) for s, d in reversed(passes)]
            pass_at = [(n - p - 1) % n for p in reversed(pass_at)]
        circ = Circle(tuple(nodes), tuple(steps), tuple(passes))
        if abs(circ.winding) > 1:
            raise TopologyError(f"winding {circ.winding} out of range")

        # arc decomposition between consecutive passes; pass 0 is pinned to
        # the minimal seam slot so dot positions are trace independent
        if passes:
            order = sorted(range(len(passes)), key=lambda i: pass_at[i])
            ps = [passes[i] for i in order]
            ats = [pass_at[i] for i in order]
            j0 = min(range(len(ps)), key=lambda i: ps[i][0])
            ps = ps[j0:] + ps[:j0]
            ats = ats[j0:] + ats[:j0]
            n = len(nodes)
            arcs = []
            for j in range(len(ps)):
                a0 = (ats[j] + 1) % n
                a1 = ats[(j + 1) % len(ps)]
                if a0 <= a1:
                    run = tuple(nodes[a0 : a1 + 1])
                else:
                    run = tuple(nodes[a0:] + nodes[: a1 + 1])
                d_out = ps[j][1]
                d_in = ps[(j + 1) % len(ps)][1]
                if d_out == 1 and d_in == -1:
                    side = "L"
                elif d_out == -1 and d_in == 1:
                    side = "R"
                else:
                    side = "T"
                arcs.append(Arc(run, side))
            circ.passes = tuple(ps)
            circ.pass_ats = tuple(ats)
            circ.arcs = arcs
        else:
            circ.arcs = [Arc(tuple(nodes), "O")]
        circles.append(circ)

    total_passes = sum(len(c.passes) for c in circles)
    if total_passes != res.k:
        raise TopologyError(f"{total_passes} seam passes, expected {res.k}")

    essentials = sorted((c for c in circles if c.essential), key=lambda c: c.key)
    trivials = sorted((c for c in circles if not c.essential), key=lambda c: c.key)
    for i, c in enumerate(essentials + trivials):
        c.index = i
    node_circle: Dict[Node, int] = {}
    order = {id(c): i for i, c in enumerate(circles)}
    for c in circles:
        for nd in c.nodes:
            node_circle[nd] = order[id(c)]
    return Configuration(res, circles, essentials, trivials, node_circle)


# -- surgery sites --------------------------------------------------------


@dataclass(frozen=True)
class SurgerySite:
    """A surgery band on a configuration, anchored away from the seam."""

    crossing: int
    kind: str
    end1: Node
    end2: Node


def surgery_sites(word: TangleWord, u: Tuple[int, ...]) -> List[SurgerySite]:
    """Surgery bands for the 0 -> 1 edges leaving vertex u."""
    res = resolve(word, u)
    return [
        SurgerySite(a.crossing, a.kind, a.end1, a.end2)
        for a in res.anchors
        if u[a.crossing] == 0
    ]


# -- word surgery helpers -------------------------------------------------


def strand_counts(slices: Tuple[Slice, ...], k: int) -> List[int]:
    """Strand count at each gap 0..m."""
    counts = [k]
    c = k
    for sl in slices:
        if isinstance(sl, Cup):
            c += 2
        elif isinstance(sl, Cap):
            c -= 2
        counts.append(c)
    return counts


def rotate_word(word: TangleWord, steps: int = 1) -> TangleWord:
    """Slide the first `steps` slices through the seam to the end.

    The annular closure is unchanged up to isotopy; the cut point moves.
    The boundary count k changes when cups or caps cross the seam.
    """
    k = word.k
    slices = list(word.slices)
    for _ in range(steps):
        if not slices:
            break
        sl = slices.pop(0)
        if isinstance(sl, Cup):
            k += 2
        elif isinstance(sl, Cap):
            k -= 2
        slices.append(sl)
    return TangleWord(k, tuple(slices), word.r)


# -- gradings -------------------------------------------------------------


@dataclass(frozen=True)
class GradingData:
    """Crossing sign counts and the derived grading conventions."""

    n_plus: int
    n_minus: int

    @staticmethod
    def of(word: TangleWord) -> "GradingData":
        return GradingData(word.n_plus, word.n_minus)

    def h(self, u: Tuple[int, ...]) -> int:
        return sum(u) - self.n_minus

    def qshift(self, u: Tuple[int, ...]) -> int:
        return sum(u) + self.n_plus - 2 * self.n_minus
