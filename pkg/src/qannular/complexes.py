"""The cube of resolutions as a trigraded chain complex.

Vertices carry free modules on sign-labelled traced configurations; edges
carry the evaluated saddle matrices.  With the sign assignment
s = sum of earlier bits, the total differential squares to zero.  The
same assembly runs over Z[q, q^-1] (r = 0), over k_r (r >= 1), and over
Z for the classical theory obtained by setting q = 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Dict, Optional, Tuple

from .cobordism import WeightScheme, classical_saddle, derive_default_scheme, eval_saddle
from .diagram import GradingData, TangleWord, resolve, trace_configuration, word_to_json
from .scalars import Cyclotomic, Laurent

Vertex = Tuple[int, ...]
Label = Tuple[str, ...]
Matrix = Dict[Tuple[int, int], object]

_SIGNS = ("+", "-")


def edge_sign(u: Vertex, i: int) -> int:
    """The sign bit of the edge flipping coordinate ``i`` at ``u``."""
    return sum(u[:i]) % 2


@dataclass(eq=False)
class CubeComplex:
    """A trigraded complex assembled from the resolution cube.

    ``vertices[u]`` lists the generators of vertex u in a fixed order:
    sign tuples over the traced circles, essentials first.  ``gradings``
    aligns with it as (h, j, k) triples.  ``edges[(u, i)]`` is the
    unsigned saddle matrix of the 0 -> 1 flip at crossing i, sparse as
    {(row, col): entry}; the total differential multiplies it by
    (-1)**signs[(u, i)].  ``ring`` is "laurent", "cyclotomic" (modulus
    ``r``), or "integer" (entries are constant Laurents).
    """

    word: TangleWord
    r: int
    ring: str
    scheme: Optional[WeightScheme]
    vertices: Dict[Vertex, Tuple[Label, ...]]
    gradings: Dict[Vertex, Tuple[Tuple[int, int, int], ...]]
    edges: Dict[Tuple[Vertex, int], Matrix]
    signs: Dict[Tuple[Vertex, int], int]

    def target_of(self, u: Vertex, i: int) -> Vertex:
        return u[:i] + (1,) + u[i + 1 :]


def _label_gradings(conf, label: Label, gr: GradingData, u: Vertex) -> Tuple[int, int, int]:
    qd = 0
    ad = 0
    for circ, sgn in zip(conf.ordered(), label):
        s = 1 if sgn == "+" else -1
        if circ.essential:
            ad += s
        else:
            qd += s
    return gr.h(u), qd + gr.qshift(u), ad


def _vertex_data(word: TangleWord):
    gr = GradingData.of(word)
    vertices: Dict[Vertex, Tuple[Label, ...]] = {}
    gradings: Dict[Vertex, tuple] = {}
    for u in product((0, 1), repeat=word.n):
        conf = trace_configuration(resolve(word, u))
        gens = tuple(product(_SIGNS, repeat=len(conf.ordered())))
        vertices[u] = gens
        gradings[u] = tuple(_label_gradings(conf, g, gr, u) for g in gens)
    return vertices, gradings


def build_complex(word: TangleWord, r: int = 0, scheme: Optional[WeightScheme] = None) -> CubeComplex:
    """Assemble the cube of ``word`` over k_r (r >= 1) or Z[q,q^-1] (r = 0)."""
    if scheme is None:
        scheme = derive_default_scheme()
    vertices, gradings = _vertex_data(word)
    edges: Dict[Tuple[Vertex, int], Matrix] = {}
    signs: Dict[Tuple[Vertex, int], int] = {}
    for u in vertices:
        for i in range(word.n):
            if u[i]:
                continue
            sd = eval_saddle(word, u, i, scheme)
            v = u[:i] + (1,) + u[i + 1 :]
            index = {g: row for row, g in enumerate(vertices[v])}
            mat: Matrix = {}
            for col, g in enumerate(vertices[u]):
                for coeff, tgt in sd.entries[g]:
                    mat[(index[tgt], col)] = coeff if r == 0 else Cyclotomic(r, coeff)
            edges[(u, i)] = mat
            signs[(u, i)] = edge_sign(u, i)
    return CubeComplex(
        word=word,
        r=r,
        ring="laurent" if r == 0 else "cyclotomic",
        scheme=scheme,
        vertices=vertices,
        gradings=gradings,
        edges=edges,
        signs=signs,
    )


def classical_complex(word: TangleWord) -> CubeComplex:
    """The classical annular complex over Z.

    Coefficients come from the bare truncated-Frobenius rules, not from
    the weighted evaluator; this is the independent q = 1 oracle.
    """
    vertices, gradings = _vertex_data(word)
    edges: Dict[Tuple[Vertex, int], Matrix] = {}
    signs: Dict[Tuple[Vertex, int], int] = {}
    for u in vertices:
        for i in range(word.n):
            if u[i]:
                continue
            rules = classical_saddle(word, u, i)
            v = u[:i] + (1,) + u[i + 1 :]
            index = {g: row for row, g in enumerate(vertices[v])}
            mat: Matrix = {}
            for col, g in enumerate(vertices[u]):
                for tgt in rules[g]:
                    mat[(index[tgt], col)] = Laurent.one()
            edges[(u, i)] = mat
            signs[(u, i)] = edge_sign(u, i)
    return CubeComplex(
        word=word,
        r=0,
        ring="integer",
        scheme=None,
        vertices=vertices,
        gradings=gradings,
        edges=edges,
        signs=signs,
    )


def specialize_q1(c: CubeComplex) -> CubeComplex:
    """Set q = 1 in every entry, landing in a complex of free Z-modules."""
    edges: Dict[Tuple[Vertex, int], Matrix] = {}
    for key, mat in c.edges.items():
        out: Matrix = {}
        for rc, v in mat.items():
            n0 = v.rep.at_one() if isinstance(v, Cyclotomic) else v.at_one()
            if n0:
                out[rc] = Laurent.const(n0)
        edges[key] = out
    return CubeComplex(
        word=c.word,
        r=0,
        ring="integer",
        scheme=c.scheme,
        vertices=c.vertices,
        gradings=c.gradings,
        edges=edges,
        signs=dict(c.signs),
    )


def _signed(c: CubeComplex, u: Vertex, i: int) -> Matrix:
    mat = c.edges[(u, i)]
    if c.signs[(u, i)] % 2 == 0:
        return mat
    return {rc: -v for rc, v in mat.items()}


def _matmul(m2: Matrix, m1: Matrix) -> Matrix:
    """Sparse composite: apply m1, then m2."""
    rows1: Dict[int, list] = {}
    for (r1, c1), v1 in m1.items():
        rows1.setdefault(r1, []).append((c1, v1))
    out: Matrix = {}
    for (r2, c2), v2 in m2.items():
        for c1, v1 in rows1.get(c2, ()):
            key = (r2, c1)
            cur = out.get(key)
            prod = v2 * v1
            out[key] = prod if cur is None else cur + prod
    return {k: v for k, v in out.items() if not v.is_zero()}


def verify_d_squared(c: CubeComplex) -> Tuple[Tuple[Vertex, int, int], ...]:
    """Check that every signed square face anticommutes.

    Returns the failing faces as (base vertex, i, j) triples; the empty
    tuple certifies d**2 = 0 for the total differential.
    """
    fails = []
    n = c.word.n
    for u in c.vertices:
        zeros = [i for i in range(n) if u[i] == 0]
        for a in range(len(zeros)):
            for b in range(a + 1, len(zeros)):
                i, j = zeros[a], zeros[b]
                ui = u[:i] + (1,) + u[i + 1 :]
                uj = u[:j] + (1,) + u[j + 1 :]
                tot = _matmul(_signed(c, ui, j), _signed(c, u, i))
                for rc, v in _matmul(_signed(c, uj, i), _signed(c, u, j)).items():
                    cur = tot.get(rc)
                    tot[rc] = v if cur is None else cur + v
                if any(not v.is_zero() for v in tot.values()):
                    fails.append((u, i, j))
    return tuple(fails)


def complex_to_json(c: CubeComplex) -> str:
    """Canonical JSON export; byte-identical across runs."""
    verts = []
    for u in sorted(c.vertices):
        gens = [
            {"labels": list(g), "h": h, "j": j, "k": k}
            for g, (h, j, k) in zip(c.vertices[u], c.gradings[u])
        ]
        verts.append({"u": list(u), "generators": gens})
    edges = []
    for u, i in sorted(c.edges):
        mat = c.edges[(u, i)]
        rows = []
        for row, col in sorted(mat):
            v = mat[(row, col)]
            rep = v.rep if isinstance(v, Cyclotomic) else v
            rows.append([row, col, [[e, a] for e, a in rep.items()]])
        edges.append({"crossing": i, "entries": rows, "sign": c.signs[(u, i)], "u": list(u)})
    doc = {
        "edges": edges,
        "r": c.r,
        "ring": c.ring,
        "scheme": json.loads(c.scheme.to_json()) if c.scheme else None,
        "vertices": verts,
        "word": json.loads(word_to_json(c.word)),
    }
    return json.dumps(doc, separators=(",", ":"), sort_keys=True)
