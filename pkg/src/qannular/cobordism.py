"""Surgery band evaluation over Z[q, q^-1] and the movie calculus.

Every 0 -> 1 edge of the cube attaches a band to a traced configuration.
The band either merges two circles or splits one; which of the six local
models applies is read off from whether the circles involved are essential.
The evaluation routes both endpoint configurations to standard position
through a canonical sequence of seam arc slides, so the edge's coefficient
is a single power of q times the local model's matrix, twisted by where
the dots of the labels land relative to each circle's marked point.

The marked point of a seam-crossing circle sits just after the landing of
its minimal-slot pass; dots are carried there along the circle, and each
counter-clockwise seam crossing of a dot costs q**DOT_CROSS.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Tuple

from .diagram import (
    Cap,
    Circle,
    Configuration,
    Crossing,
    Cup,
    Node,
    SiteAnchor,
    TangleWord,
    resolve,
    trace_configuration,
)
from .errors import CalibrationError, DomainError, EngineError, PositionError
from .scalars import Laurent

DOT_CROSS = 2  # exponent a dot picks up crossing the seam once, ccw
SADDLE_CROSS = 1  # exponent the band picks up crossing the seam once


# -- weight schemes -------------------------------------------------------


@dataclass(frozen=True)
class WeightScheme:
    """Seam exponents for arc slides.

    ``wP``/``wN`` weight a pass-creating slide on the positive/negative
    side.  The cancelling exponents are forced: a slide followed by its
    reverse must cost q on the positive side and q^-1 on the negative one.
    """

    wP: int
    wN: int

    @property
    def p_create(self) -> int:
        return self.wP

    @property
    def p_cancel(self) -> int:
        return 1 - self.wP

    @property
    def n_create(self) -> int:
        return self.wN

    @property
    def n_cancel(self) -> int:
        return -1 - self.wN

    def to_json(self) -> str:
        return json.dumps({"wN": self.wN, "wP": self.wP}, separators=(",", ":"), sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "WeightScheme":
        doc = json.loads(text)
        return WeightScheme(int(doc["wP"]), int(doc["wN"]))


def _slide_exponent(side: str, create: bool, scheme: WeightScheme) -> int:
    if side == "P":
        return scheme.p_create if create else scheme.p_cancel
    if side == "N":
        return scheme.n_create if create else scheme.n_cancel
    raise DomainError(f"slide side must be 'P' or 'N', got {side!r}")


# -- movies ---------------------------------------------------------------


@dataclass(frozen=True)
class ArcSlide:
    """Slide an arc of ``circle`` across the seam between ``slots``."""

    circle: object
    slots: Tuple[int, int]
    side: str  # "P" | "N"
    create: bool


@dataclass(frozen=True)
class CupBirth:
    circle: object


@dataclass(frozen=True)
class CapDeath:
    circle: object
    dotted: bool = False


@dataclass(frozen=True)
class DotMove:
    """Carry a dot around its circle, crossing the seam ``crossings`` times."""

    circle: object
    crossings: int


@dataclass(frozen=True)
class Saddle:
    crossing: int


@dataclass(frozen=True)
class Movie:
    events: Tuple[object, ...]


def reverse_movie(movie: Movie) -> Movie:
    """Run a movie of slides and dot moves backwards."""
    out: List[object] = []
    for ev in reversed(movie.events):
        if isinstance(ev, ArcSlide):
            out.append(ArcSlide(ev.circle, ev.slots, ev.side, not ev.create))
        elif isinstance(ev, DotMove):
            out.append(DotMove(ev.circle, -ev.crossings))
        else:
            raise DomainError(f"event {ev!r} is not reversible")
    return Movie(tuple(out))


def movie_weight(movie: Movie, scheme: WeightScheme) -> Laurent:
    """Total q-power of a movie of slides and dot moves."""
    e = 0
    for ev in movie.events:
        if isinstance(ev, ArcSlide):
            e += _slide_exponent(ev.side, ev.create, scheme)
        elif isinstance(ev, DotMove):
            e += DOT_CROSS * ev.crossings
        else:
            raise DomainError(f"event {ev!r} has no standalone weight")
    return Laurent.q(e)


# -- standardization ------------------------------------------------------


def _standardize(conf: Configuration, feet_nodes: Tuple[Node, ...], marks: Tuple[Tuple[int, int], ...] = ()):
    """Cancel pass pairs until every circle is in standard position.

    Standard position: trivial circles seam free, essential circles
    crossing exactly once.  A candidate cancel is an L or R arc with no
    other pass strictly between its two slots; the innermost candidate
    (lowest slot) goes first, P side before N on ties.  The route is a
    function of the configuration alone, so each vertex of the cube gets
    one basis no matter which edge is being evaluated.  Band feet ride
    along: cancelling through an arc carrying both feet drags the band
    across the seam (t); through one foot it wraps the band around the
    annulus (omega).

    ``marks`` are (circle, arc) positions tracked individually; the
    returned ride counts say how often each mark crossed the seam while
    its arc was the one being cancelled, P slides counting +1.
    """
    states: List[list] = []
    for circ in conf.circles:
        states.append([list(circ.passes), [0] * max(len(circ.passes), 1), circ])
    for node in feet_nodes:
        ci = conf.node_circle[node]
        _, ai, _ = conf.locate(node)
        states[ci][1][ai] += 1
    mstate = [[states[ci], ai] for ci, ai in marks]
    rides = [0] * len(marks)

    events: List[Tuple[Circle, Tuple[int, int], str]] = []
    t = 0
    omega = 0
    while True:
        occupied = {s for st in states for s, _ in st[0]}
        best = None
        for st in states:
            passes = st[0]
            m = len(passes)
            if m <= (1 if st[2].essential else 0):
                continue
            for j in range(m):
                d0 = passes[j][1]
                d1 = passes[(j + 1) % m][1]
                if d0 == 1 and d1 == -1:
                    side = "P"
                elif d0 == -1 and d1 == 1:
                    side = "N"
                else:
                    continue
                lo, hi = sorted((passes[j][0], passes[(j + 1) % m][0]))
                if any(lo < s < hi for s in occupied):
                    continue
                rank = (lo, 0 if side == "P" else 1)
                if best is None or rank < best[0]:
                    best = (rank, st, j, side, (lo, hi))
        if best is None:
            break
        _, st, j, side, slots = best
        passes, feet, circ = st
        m = len(passes)
        events.append((circ, slots, side))
        if feet[j] == 2:
            t += 1 if side == "P" else -1
        elif feet[j] == 1:
            omega += 1 if side == "P" else -1
        for mi, ms in enumerate(mstate):
            if ms[0] is not st:
                continue
            ai = ms[1]
            if ai == j:
                rides[mi] += 1 if side == "P" else -1
            if m == 2:
                ms[1] = 0
            elif ai in ((j - 1) % m, j, (j + 1) % m):
                ms[1] = m - 3
            else:
                ms[1] = (ai - j - 2) % m
        if m == 2:
            st[0] = []
            st[1] = [feet[0] + feet[1]]
        else:
            st[0] = [passes[(j + 2 + i) % m] for i in range(m - 2)]
            nf = [feet[(j + 2 + i) % m] for i in range(m - 3)]
            nf.append(feet[(j - 1) % m] + feet[j] + feet[(j + 1) % m])
            st[1] = nf
    for st in states:
        if len(st[0]) > (1 if st[2].essential else 0):
            raise EngineError("standardization found no route to standard position")
    return events, t, omega, tuple(rides)


def standardization_movie(conf: Configuration) -> Movie:
    """The canonical slide route from ``conf`` to standard position."""
    events, _, _, _ = _standardize(conf, ())
    return Movie(tuple(ArcSlide(c.key, slots, side, False) for c, slots, side in events))


# -- dot transport --------------------------------------------------------


def _flip_map(site: SiteAnchor):
    """Node images of the source frame inside the target frame."""
    if site.kind == "parallel":
        g = site.gap

        def fwd(node: Node) -> Optional[Node]:
            G, h = node
            return (G + 2, h) if G > g else (G, h)

        return fwd
    M = site.gap  # the turnback's waist gap disappears

    def bwd(node: Node) -> Optional[Node]:
        G, h = node
        if G == M:
            return None
        return (G - 2, h) if G > M else (G, h)

    return bwd


def _clean_image(circ: Circle, ends: Tuple[Node, Node], flip) -> Node:
    for node in circ.nodes:
        if node == ends[0] or node == ends[1]:
            continue
        img = flip(node)
        if img is not None:
            return img
    raise EngineError(f"no clean node image for {circ!r}")


def _walk(circ: Circle, a: int) -> int:
    """Net seam crossings from step ``a`` forward through the pass-0 step.

    Both endpoints of the cyclic step range count, so a walk starting on a
    glue step includes that crossing.
    """
    n = len(circ.steps)
    span = (circ.pass_ats[0] - a) % n
    return sum(d for (_, d), at in zip(circ.passes, circ.pass_ats) if (at - a) % n <= span)


def _dot_carry(src: Circle, tgt: Circle, image: Optional[Node]):
    """Seam correction for a dot riding from ``src`` onto ``tgt``.

    The dot of a seam-crossing circle sits just after its pass-0 landing.
    The correction is the walk from where that point lands on the target
    to the target's own marked point.  Orientation matters: when the
    surgery reverses the strand the point arrives just before the
    matching pass, so the walk starts on the glue step itself.  A dot
    from a seam-free circle enters at any clean node image.  Returns the
    walk and the landing arc for ride tracking.
    """
    if not tgt.passes:
        return 0, 0
    n = len(tgt.steps)
    m = len(tgt.passes)
    if src.passes:
        sigma, dx = src.passes[0]
        j = next(i for i, (s, _) in enumerate(tgt.passes) if s == sigma)
        if tgt.passes[j][1] == dx:
            return (0 if j == 0 else _walk(tgt, (tgt.pass_ats[j] + 1) % n)), j
        return _walk(tgt, tgt.pass_ats[j]), (j - 1) % m
    return _walk(tgt, tgt.nodes.index(image)), None


def _created_corrections(conf1: Configuration, site: SiteAnchor):
    """Seam corrections for the dots born on the two sides of a split.

    A newborn dot sits in the middle of the surgery scar.  After a
    parallel -> turnback flip the scars are the new cap and cup noses;
    after a turnback -> parallel flip they are the two rejoined strands,
    whose takeoff step counts in the walk.  Keys are ordered target
    indices.  The second dict holds each scar's (circle, arc) position
    for ride tracking through the target route.
    """
    out: Dict[int, int] = {}
    spots: Dict[int, Tuple[int, int]] = {}
    if site.kind == "turnback":
        g = site.gap - 1
        probes = (((g, site.pos), "cap"), ((g + 2, site.pos), "cup"))
    else:
        probes = ((site.end1, None), (site.end2, None))
    for node, nose in probes:
        tci = conf1.node_circle[node]
        circ = conf1.circles[tci]
        cd = 0
        if circ.passes:
            if nose is not None:
                i = conf1.find_nose_step(circ, node, nose)
                cd = _walk(circ, (i + 1) % len(circ.steps))
            else:
                cd = _walk(circ, circ.nodes.index(node))
        _, ai, _ = conf1.locate(node)
        out[circ.index] = cd
        spots[circ.index] = (tci, ai)
    return out, spots


# -- edge topology --------------------------------------------------------


class _EdgeData:
    """Scheme-independent data of one cube edge."""

    __slots__ = (
        "conf0",
        "conf1",
        "kind",
        "omega",
        "t",
        "src_sides",
        "tgt_sides",
        "participants",
        "pieces",
        "carried",
        "cd_a",
        "cd_b",
        "cd_src",
        "dot_piece",
        "created",
        "ride_a",
        "ride_b",
        "ride_src",
        "rides_created",
    )


@lru_cache(maxsize=None)
def _edge_topology(word: TangleWord, u: Tuple[int, ...], crossing: int) -> _EdgeData:
    if not 0 <= crossing < word.n:
        raise DomainError(f"crossing {crossing} out of range for {word.n} crossings")
    if u[crossing] != 0:
        raise DomainError(f"crossing {crossing} already resolved 1 at {u}")
    res0 = resolve(word, u)
    conf0 = trace_configuration(res0)
    u1 = u[:crossing] + (1,) + u[crossing + 1 :]
    res1 = resolve(word, u1)
    conf1 = trace_configuration(res1)
    site0 = res0.anchors[crossing]
    site1 = res1.anchors[crossing]
    ends = (site0.end1, site0.end2)
    flip = _flip_map(site0)

    ed = _EdgeData()
    ed.conf0 = conf0
    ed.conf1 = conf1

    ci1 = conf0.node_circle[site0.end1]
    ci2 = conf0.node_circle[site0.end2]
    carried: Dict[int, int] = {}
    hit = set()
    for tci, circ in enumerate(conf0.circles):
        if tci in (ci1, ci2):
            continue
        img = _clean_image(circ, ends, flip)
        yci = conf1.node_circle.get(img)
        if yci is None or yci in hit:
            raise EngineError("carried circle has no unique image")
        hit.add(yci)
        carried[circ.index] = conf1.circles[yci].index
    ed.carried = carried
    born = [c for tci, c in enumerate(conf1.circles) if tci not in hit]

    src_events, t, omega, _ = _standardize(conf0, ends)
    ed.src_sides = tuple(side for _, _, side in src_events)
    ed.t = t
    ed.omega = omega

    ed.created = {}
    ed.dot_piece = -1
    ed.cd_src = 0
    ed.cd_a = 0
    ed.cd_b = 0
    ed.ride_a = 0
    ed.ride_b = 0
    ed.ride_src = 0
    ed.rides_created = {}
    marks: List[Tuple[int, int]] = []
    tags: List[Tuple[str, int]] = []
    if ci1 == ci2:
        x = conf0.circles[ci1]
        if len(born) != 2:
            raise EngineError("split did not create two circles")
        p1, p2 = sorted(born, key=lambda c: c.index)
        ess = sum(1 for c in (p1, p2) if c.essential)
        if x.essential:
            if ess != 1:
                raise EngineError("essential split must give one essential piece")
            ed.kind = "c"
            if not p1.essential:
                p1, p2 = p2, p1
        elif ess == 2:
            ed.kind = "e"
        elif ess == 0:
            ed.kind = "a2"
        else:
            raise EngineError("trivial split gave mixed pieces")
        ed.participants = (x.index,)
        ed.pieces = (p1.index, p2.index)
        ed.created, spots = _created_corrections(conf1, site1)
        if set(ed.created) != {p1.index, p2.index}:
            raise EngineError("surgery scars missed the split pieces")
        for pi, spot in spots.items():
            marks.append(spot)
            tags.append(("created", pi))
        if x.passes:
            s0 = x.passes[0][0]
            dot = p1 if any(s == s0 for s, _ in p1.passes) else p2
            if all(s != s0 for s, _ in dot.passes):
                raise EngineError("pass 0 lost in split")
            ed.dot_piece = dot.index
            ed.cd_src, ai = _dot_carry(x, dot, None)
            if ai is not None:
                marks.append((conf1.circles.index(dot), ai))
                tags.append(("src", 0))
        else:
            ed.dot_piece = p1.index
    else:
        xa = conf0.circles[ci1]
        xb = conf0.circles[ci2]
        if len(born) != 1:
            raise EngineError("merge target is not unique")
        y = born[0]
        if xa.essential and xb.essential:
            ed.kind = "d"
            pa, pb = sorted((xa, xb), key=lambda c: c.index)
            if pb.index - pa.index != 1:
                raise EngineError("merging essentials are not adjacent")
        elif xa.essential or xb.essential:
            ed.kind = "b"
            pa = xa if xa.essential else xb
            pb = xb if xa.essential else xa
        else:
            ed.kind = "a1"
            pa, pb = sorted((xa, xb), key=lambda c: c.index)
        ed.participants = (pa.index, pb.index)
        ed.pieces = (y.index,)
        yci = conf1.circles.index(y)
        for tag, part in (("a", pa), ("b", pb)):
            image = None if part.passes else _clean_image(part, ends, flip)
            cd, ai = _dot_carry(part, y, image)
            if tag == "a":
                ed.cd_a = cd
            else:
                ed.cd_b = cd
            if y.passes:
                if ai is None:
                    _, ai, _ = conf1.locate(image)
                marks.append((yci, ai))
                tags.append((tag, 0))

    tgt_events, _, _, rides = _standardize(conf1, (), tuple(marks))
    ed.tgt_sides = tuple(side for _, _, side in tgt_events)
    for (tag, pi), ride in zip(tags, rides):
        if tag == "created":
            ed.rides_created[pi] = ride
        elif tag == "src":
            ed.ride_src = ride
        elif tag == "a":
            ed.ride_a = ride
        else:
            ed.ride_b = ride

    if ed.kind == "e" and abs(omega) != 1:
        raise EngineError(f"wrap split with omega={omega}")
    return ed


# -- saddle evaluation ----------------------------------------------------

_SIGNS = ("+", "-")


@dataclass(eq=False)
class SaddleData:
    """One evaluated cube edge.

    ``entries`` maps every source label (signs over source.ordered()) to
    a tuple of (coefficient, target label) pairs sorted by target label.
    ``participants``/``pieces`` are ordered basis indices of the circles
    the band touches in the source/target; ``carried`` matches the rest.
    """

    word: TangleWord
    u: Tuple[int, ...]
    crossing: int
    scheme: WeightScheme
    kind: str
    omega: int
    scalar: Laurent
    source: Configuration
    target: Configuration
    entries: Dict[Tuple[str, ...], tuple]
    participants: Tuple[int, ...]
    pieces: Tuple[int, ...]
    carried: Dict[int, int]


_RIDE_NEW = 1  # seam rides of a newborn scar dot through the target route
_RIDE_CAR = 0  # seam rides of a transported dot's landing point
_D_SHIFT = -1  # global exponent offset of essential-essential merges
_E_SHIFT = 0  # global exponent offset of wrap splits


def _kind_terms(ed: _EdgeData, src: Tuple[str, ...]):
    """Participant transitions as (extra exponent, assignments) terms."""
    kind = ed.kind
    if kind in ("a1", "b", "d"):
        pa, pb = ed.participants
        y = ed.pieces[0]
        sa, sb = src[pa], src[pb]
        cda = ed.cd_a + _RIDE_CAR * ed.ride_a
        cdb = ed.cd_b + _RIDE_CAR * ed.ride_b
        if kind == "a1":
            if sa == "+" and sb == "+":
                return [(0, ((y, "+"),))]
            if sa == "+" and sb == "-":
                return [(DOT_CROSS * cdb, ((y, "-"),))]
            if sa == "-" and sb == "+":
                return [(DOT_CROSS * cda, ((y, "-"),))]
            return []
        if kind == "b":
            if sb == "-":
                return []
            if sa == "+":
                return [(0, ((y, "+"),))]
            return [(DOT_CROSS * cda, ((y, "-"),))]
        # d: adjacent essentials, inner one first
        if sa == "+" and sb == "-":
            return [(1 + DOT_CROSS * cdb, ((y, "-"),))]
        if sa == "-" and sb == "+":
            return [(DOT_CROSS * cda, ((y, "-"),))]
        return []
    p1, p2 = ed.pieces
    s = src[ed.participants[0]]
    cr = {p: ed.created[p] + _RIDE_NEW * ed.rides_created[p] for p in ed.created}
    cds = ed.cd_src + _RIDE_CAR * ed.ride_src
    if kind == "a2":
        if s == "+":
            return [
                (DOT_CROSS * cr[p2], ((p1, "+"), (p2, "-"))),
                (DOT_CROSS * cr[p1], ((p1, "-"), (p2, "+"))),
            ]
        other = p2 if ed.dot_piece == p1 else p1
        return [(DOT_CROSS * (cds + cr[other]), ((p1, "-"), (p2, "-")))]
    if kind == "c":
        # p1 is the essential piece; the newborn dot lands on the trivial
        if s == "+":
            return [(DOT_CROSS * cr[p2], ((p1, "+"), (p2, "-")))]
        other = p2 if ed.dot_piece == p1 else p1
        return [(DOT_CROSS * (cds + cr[other]), ((p1, "-"), (p2, "-")))]
    # e: wrap split, inner essential first
    if s == "+":
        return [
            (_E_SHIFT + DOT_CROSS * cr[p2], ((p1, "+"), (p2, "-"))),
            (_E_SHIFT - 1 + DOT_CROSS * cr[p1], ((p1, "-"), (p2, "+"))),
        ]
    return []


@lru_cache(maxsize=None)
def eval_saddle(word: TangleWord, u: Tuple[int, ...], crossing: int, scheme: WeightScheme) -> SaddleData:
    """Evaluate the 0 -> 1 surgery at ``crossing`` from vertex ``u``.

    The matrix is written in the per-vertex bases fixed by each
    configuration's canonical route to standard position.  The target
    route enters forwards; the source route enters through its inverse
    map, so its slide weights are negated.  Negation, not the reflected
    slide pictures: a slide picture times its reflection costs a power
    of q, and that anomaly would smuggle a target-dependent factor into
    every edge and break d^2 = 0 on cubes with cups or caps.
    """
    ed = _edge_topology(word, u, crossing)
    e = 0
    for side in ed.src_sides:
        e -= scheme.p_cancel if side == "P" else scheme.n_cancel
    for side in ed.tgt_sides:
        e += scheme.p_cancel if side == "P" else scheme.n_cancel
    if ed.kind == "d":
        e += _D_SHIFT
    n0 = len(ed.conf0.ordered())
    n1 = len(ed.conf1.ordered())
    entries: Dict[Tuple[str, ...], tuple] = {}
    for src in product(_SIGNS, repeat=n0):
        base: List[Optional[str]] = [None] * n1
        for si, ti in ed.carried.items():
            base[ti] = src[si]
        pairs = []
        for adj, assign in _kind_terms(ed, src):
            lbl = list(base)
            for ti, sgn in assign:
                lbl[ti] = sgn
            pairs.append((Laurent.q(e + adj), tuple(lbl)))
        entries[src] = tuple(sorted(pairs, key=lambda pr: pr[1]))
    return SaddleData(
        word=word,
        u=u,
        crossing=crossing,
        scheme=scheme,
        kind=ed.kind,
        omega=ed.omega,
        scalar=Laurent.q(e),
        source=ed.conf0,
        target=ed.conf1,
        entries=entries,
        participants=ed.participants,
        pieces=ed.pieces,
        carried=dict(ed.carried),
    )


_MERGE_RULES = {
    "a1": {("+", "+"): "+", ("+", "-"): "-", ("-", "+"): "-"},
    "b": {("+", "+"): "+", ("-", "+"): "-"},
    "d": {("+", "-"): "-", ("-", "+"): "-"},
}
_SPLIT_RULES = {
    "a2": {"+": (("+", "-"), ("-", "+")), "-": (("-", "-"),)},
    "c": {"+": (("+", "-"),), "-": (("-", "-"),)},
    "e": {"+": (("+", "-"), ("-", "+")), "-": ()},
}


@lru_cache(maxsize=None)
def classical_saddle(word: TangleWord, u: Tuple[int, ...], crossing: int):
    """Bare label transitions of the saddle: the truncated Frobenius rules.

    Merging or splitting an essential keeps the annular degree, which
    kills the usual cross terms.  No coefficients and no seam weights;
    this is the support oracle for `eval_saddle`.
    """
    ed = _edge_topology(word, u, crossing)
    n0 = len(ed.conf0.ordered())
    n1 = len(ed.conf1.ordered())
    out: Dict[Tuple[str, ...], Tuple[Tuple[str, ...], ...]] = {}
    for src in product(_SIGNS, repeat=n0):
        base: List[Optional[str]] = [None] * n1
        for si, ti in ed.carried.items():
            base[ti] = src[si]
        labels = []
        if len(ed.participants) == 2:
            pa, pb = ed.participants
            sgn = _MERGE_RULES[ed.kind].get((src[pa], src[pb]))
            results = () if sgn is None else ((sgn,),)
            spots = ed.pieces
        else:
            results = _SPLIT_RULES[ed.kind][src[ed.participants[0]]]
            spots = ed.pieces
        for res in results:
            lbl = list(base)
            for ti, sgn in zip(spots, res):
                lbl[ti] = sgn
            labels.append(tuple(lbl))
        out[src] = tuple(sorted(labels))
    return out


# -- movie evaluation -----------------------------------------------------


def eval_movie(movie: Movie, scheme: WeightScheme, labels: Dict[object, str], npasses: Optional[Dict[object, int]], base: Optional[Tuple[TangleWord, Tuple[int, ...]]] = None) -> Dict[frozenset, Laurent]:
    """Evaluate a movie on a labelled collection of circles.

    ``labels`` assigns "+"/"-" to each circle name; ``npasses`` counts
    seam passes per circle and may be None when ``base`` = (word, u)
    supplies a traced configuration (names are then the circle keys).
    Saddle events must come first, while the traced frame is still
    intact.  The result is a linear combination of labelings, as a dict
    from frozensets of (name, sign) pairs to coefficients.
    """
    if base is not None:
        word, u = base
        conf = trace_configuration(resolve(word, u))
        counts = {c.key: len(c.passes) for c in conf.ordered()}
        if set(labels) != set(counts):
            raise DomainError("labels do not match the base configuration")
    else:
        if npasses is None:
            raise DomainError("npasses is required without a base configuration")
        counts = dict(npasses)
        if set(labels) != set(counts):
            raise DomainError("labels and npasses disagree")
    state: Dict[frozenset, Laurent] = {frozenset(labels.items()): Laurent.one()}
    moved = False
    for ev in movie.events:
        if isinstance(ev, Saddle):
            if base is None or moved:
                raise DomainError("saddle events must precede any other event")
            sd = eval_saddle(word, u, ev.crossing, scheme)
            skeys = [c.key for c in sd.source.ordered()]
            tkeys = [c.key for c in sd.target.ordered()]
            nxt: Dict[frozenset, Laurent] = {}
            for term, coeff in state.items():
                have = dict(term)
                for c2, tl in sd.entries[tuple(have[k] for k in skeys)]:
                    key = frozenset(zip(tkeys, tl))
                    nxt[key] = nxt.get(key, Laurent.zero()) + coeff * c2
            state = {k: v for k, v in nxt.items() if not v.is_zero()}
            u = u[: ev.crossing] + (1,) + u[ev.crossing + 1 :]
            counts = {c.key: len(c.passes) for c in sd.target.ordered()}
            continue
        moved = True
        if isinstance(ev, CupBirth):
            if ev.circle in counts:
                raise DomainError(f"circle {ev.circle!r} already present")
            counts[ev.circle] = 0
            state = {k | {(ev.circle, "+")}: v for k, v in state.items()}
        elif isinstance(ev, CapDeath):
            if ev.circle not in counts:
                raise DomainError(f"circle {ev.circle!r} not present")
            if counts.pop(ev.circle) != 0:
                raise PositionError("cannot cap off a seam-crossing circle")
            keep = "+" if ev.dotted else "-"
            nxt = {}
            for term, coeff in state.items():
                if dict(term).get(ev.circle) == keep:
                    cut = term - {(ev.circle, keep)}
                    nxt[cut] = nxt.get(cut, Laurent.zero()) + coeff
            state = nxt
        elif isinstance(ev, DotMove):
            if ev.circle not in counts:
                raise DomainError(f"circle {ev.circle!r} not present")
            f = Laurent.q(DOT_CROSS * ev.crossings)
            state = {k: v * f for k, v in state.items()}
        elif isinstance(ev, ArcSlide):
            if ev.circle not in counts:
                raise DomainError(f"circle {ev.circle!r} not present")
            step = 2 if ev.create else -2
            if counts[ev.circle] + step < 0:
                raise DomainError("cancelling slide needs two passes")
            counts[ev.circle] += step
            f = Laurent.q(_slide_exponent(ev.side, ev.create, scheme))
            state = {k: v * f for k, v in state.items()}
        else:
            raise DomainError(f"unknown movie event {ev!r}")
    return {k: v for k, v in state.items() if not v.is_zero()}


# -- calibration ----------------------------------------------------------


def _calibration_words() -> Tuple[TangleWord, ...]:
    return (
        TangleWord(2, (Crossing(1, 1), Crossing(1, 1))),
        TangleWord(2, (Crossing(1, 1), Crossing(1, 1), Crossing(1, 1))),
        TangleWord(1, (Cup(2), Crossing(1, 1), Cap(2))),
        TangleWord(1, (Cup(2), Crossing(1, -1), Cap(2))),
        TangleWord(2, (Crossing(1, 1), Crossing(1, -1), Crossing(1, 1))),
    )


def _compose(word: TangleWord, u: Tuple[int, ...], first: int, then: int, scheme: WeightScheme):
    m1 = eval_saddle(word, u, first, scheme)
    u2 = u[:first] + (1,) + u[first + 1 :]
    m2 = eval_saddle(word, u2, then, scheme)
    out = {}
    for src, pairs in m1.entries.items():
        acc: Dict[Tuple[str, ...], Laurent] = {}
        for c1, mid in pairs:
            for c2, tgt in m2.entries[mid]:
                acc[tgt] = acc.get(tgt, Laurent.zero()) + c1 * c2
        out[src] = {t: c for t, c in acc.items() if not c.is_zero()}
    return out


def _faces_commute(word: TangleWord, scheme: WeightScheme) -> bool:
    n = word.n
    for u in product((0, 1), repeat=n):
        zeros = [i for i in range(n) if u[i] == 0]
        for a in range(len(zeros)):
            for b in range(a + 1, len(zeros)):
                i, j = zeros[a], zeros[b]
                if _compose(word, u, i, j, scheme) != _compose(word, u, j, i, scheme):
                    return False
    return True


def _ratios_ok(word: TangleWord, scheme: WeightScheme) -> bool:
    """Row normalizations of the essential models.

    The two nonzero branches of every d and e edge must differ by exactly
    q, and b/c edges must treat both labels of the surviving essential
    alike.  These hold at every scheme once the dot transport is right.
    """
    qq = Laurent.q(1)
    n = word.n
    for u in product((0, 1), repeat=n):
        for c in (i for i in range(n) if u[i] == 0):
            sd = eval_saddle(word, u, c, scheme)
            if sd.kind == "d":
                pa, pb = sd.participants
                for src, pairs in sd.entries.items():
                    if src[pa] == "+" and src[pb] == "-":
                        sw = list(src)
                        sw[pa], sw[pb] = "-", "+"
                        other = sd.entries[tuple(sw)]
                        if len(pairs) != 1 or len(other) != 1:
                            return False
                        if pairs[0][1] != other[0][1] or pairs[0][0] != other[0][0] * qq:
                            return False
            elif sd.kind == "e":
                p = sd.participants[0]
                for src, pairs in sd.entries.items():
                    if src[p] == "+":
                        if len(pairs) != 2 or pairs[0][0] != pairs[1][0] * qq:
                            return False
            elif sd.kind in ("b", "c"):
                flip_at = sd.participants[0]
                guard = sd.participants[1] if sd.kind == "b" else None
                for src, pairs in sd.entries.items():
                    if src[flip_at] != "+":
                        continue
                    if guard is not None and src[guard] != "+":
                        continue
                    sw = list(src)
                    sw[flip_at] = "-"
                    other = sd.entries[tuple(sw)]
                    if len(pairs) != 1 or len(other) != 1:
                        return False
                    if pairs[0][0] != other[0][0]:
                        return False
    return True


def scheme_is_consistent(scheme: WeightScheme) -> bool:
    """Whether every calibration word has commuting faces and row ratios."""
    try:
        for word in _calibration_words():
            if not _faces_commute(word, scheme):
                return False
            if not _ratios_ok(word, scheme):
                return False
    except EngineError:
        return False
    return True


@lru_cache(maxsize=1)
def derive_default_scheme() -> WeightScheme:
    """Search the box |wP|, |wN| <= 2 for a consistent weight scheme."""
    for wp in range(-2, 3):
        for wn in range(-2, 3):
            scheme = WeightScheme(wp, wn)
            if scheme_is_consistent(scheme):
                return scheme
    raise CalibrationError("no consistent weight scheme in the search box")
