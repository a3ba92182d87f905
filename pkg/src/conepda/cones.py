"""Cones of a labelled graph, truncated cone codes and cone-type tables.

A cone with respect to a finite set ``F`` is a connected component of the
graph minus the ball ``B(F, n)``.  Its *layers* are measured from its
boundary: a vertex ``v`` of a level-``n`` cone sits in layer
``d(v, F) - (n + 1)``, and layer 0 is the boundary.

Cone isomorphism types are infinite objects.  They are approximated here by
the *depth-k code*: a label-ordered BFS encoding of layers ``0..k``, minimised
over the choice of the boundary vertex the BFS starts from.  Equal codes give
an explicit isomorphism of the truncations (match vertices by BFS position).
A classification is reported as certified only when the partition into
classes does not change from depth ``k`` to ``k + 1``, the isomorphisms of
every class carry successor cones onto successor cones of the same class, and
no new class has appeared for a few consecutive levels.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .errors import FrontierEscape, InsufficientDepth, NotCertified
from .graph import LabelledGraph, ball, distances

CERTIFIED = "CERTIFIED"
UNSTABLE = "UNSTABLE"


@dataclass(eq=False)
class Cone:
    """Explored part of one cone: layers ``0..horizon`` of a component of X minus B(F, level)."""

    graph: LabelledGraph
    centers: frozenset
    level: int
    vertices: frozenset
    boundary: frozenset
    layer: dict
    distance: dict
    horizon: int
    partial: bool = True

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.vertices


@dataclass(frozen=True)
class ConeCode:
    depth: int
    code: tuple
    order: tuple = field(compare=False, hash=False)

    def isomorphism_to(self, other: "ConeCode") -> dict:
        """Vertex map between two truncations with equal codes."""
        if self.code != other.code:
            raise ValueError("codes differ, truncations are not isomorphic")
        return dict(zip(self.order, other.order))


def _label_key(alphabet):
    return lambda e: alphabet.index(e[0])


def _bfs_code(g, verts, layer, level, dist, base, symmetric):
    key = _label_key(g.alphabet)
    idx = {base: 0}
    order = [base]
    rows = []
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        entries = []
        for a, y in sorted(g.out_edges(v), key=key):
            if y in verts:
                if y not in idx:
                    idx[y] = len(order)
                    order.append(y)
                entries.append((a, idx[y]))
            elif dist.get(y, level + 1) <= level:
                entries.append((a, -1))
            else:
                entries.append((a, -2))
        if not symmetric:
            for a, x in sorted(g.in_edges(v), key=key):
                if x in verts:
                    if x not in idx:
                        idx[x] = len(order)
                        order.append(x)
                    entries.append(("<" + a, idx[x]))
        rows.append((layer[v], tuple(entries)))
    return tuple(rows), order


def _truncation_code(g, verts, layer, level, dist, boundary, symmetric):
    """Canonical code of the subgraph induced on ``verts`` (one cone truncation)."""
    remaining = set(verts)
    parts = []
    for b in sorted(boundary, key=repr):
        if b not in remaining:
            continue
        _, comp_order = _bfs_code(g, verts, layer, level, dist, b, symmetric)
        comp = set(comp_order)
        remaining -= comp
        best = None
        for c in comp:
            if layer[c] != 0:
                continue
            cand = _bfs_code(g, comp, layer, level, dist, c, symmetric)
            if best is None or cand[0] < best[0]:
                best = cand
        parts.append(best)
    if remaining:
        raise ValueError("truncation has a component without boundary vertices")
    parts.sort(key=lambda p: p[0])
    code = tuple(p[0] for p in parts)
    order = tuple(v for p in parts for v in p[1])
    return code, order


def _is_symmetric(g):
    return g.assume_symmetric or g.alphabet.is_symmetric and _explicitly_symmetric(g)


def _explicitly_symmetric(g):
    inv = g.alphabet.inverse
    return all((inv(a), x) in g.known_out_edges(y) for x, a, y in g.edges() if g.is_complete(y))


def cones(g: LabelledGraph, F: Iterable, n: int, horizon: int) -> list[Cone]:
    """Components of the explored region ``{n < d(., F) <= n + horizon}``.

    The explored region is grown to ``B(F, n + horizon)`` first.  Components
    are computed inside the horizon, so two parts of one cone joined only
    further out are reported separately.
    """
    F = list(F)
    if horizon < 0 or n < 0:
        raise ValueError("n and horizon must be non-negative")
    limit = n + horizon
    b = ball(g, F, limit)
    dist = b.distance
    region = {v for v, d in dist.items() if n < d <= limit}
    seen = set()
    out = []
    for start in sorted((v for v in region if dist[v] == n + 1), key=repr):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for y in g.neighbours(v):
                if y in region and y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        layer = {v: dist[v] - n - 1 for v in comp}
        boundary = frozenset(v for v in comp if layer[v] == 0)
        partial = any(
            layer[v] == horizon - 1 and any(dist.get(y, limit + 1) > limit for y in g.neighbours(v))
            for v in comp
        ) or any(layer[v] == horizon - 1 and not g.is_complete(v) for v in comp)
        out.append(Cone(g, frozenset(F), n, frozenset(comp), boundary, layer, dist, horizon - 1, partial))
    return out


def cone_code(c: Cone, k: int) -> ConeCode:
    """Canonical code of the layers ``0..k`` of ``c``."""
    if k < 0:
        raise ValueError("depth must be non-negative")
    if k > c.horizon:
        raise InsufficientDepth(f"cone explored to depth {c.horizon}, code needs {k}")
    verts = frozenset(v for v in c.vertices if c.layer[v] <= k)
    code, order = _truncation_code(
        c.graph, verts, c.layer, c.level, c.distance, c.boundary, _is_symmetric(c.graph)
    )
    return ConeCode(k, code, order)


# ---------------------------------------------------------------------------
# classification


@dataclass(eq=False)
class ConeType:
    index: int
    level: int
    cone: Cone | None
    code: ConeCode | None
    boundary: tuple


@dataclass(eq=False)
class Successor:
    """The ``k``-th successor of type ``type`` inside the representative of ``parent``."""

    parent: int
    type: int
    k: int
    boundary: frozenset
    link: dict  # boundary of this successor -> boundary of the representative of ``type``

    @property
    def symbol(self):
        return (self.parent, self.type, self.k)


@dataclass(eq=False)
class ConeTypeTable:
    graph: LabelledGraph
    centers: tuple
    status: str
    depth: int
    radius: int
    reason: str
    growth: list
    types: list
    successors: dict
    distance: dict
    patience: int = 2

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    @property
    def r(self) -> int:
        """Number of cone types, not counting the whole graph ``C_0``."""
        return len(self.types) - 1

    def d(self, i: int, j: int) -> int:
        return sum(1 for s in self.successors.get(i, ()) if s.type == j)

    def d_matrix(self) -> list[list[int]]:
        n = len(self.types)
        return [[self.d(i, j) for j in range(n)] for i in range(n)]

    def symbols(self) -> list:
        """All successor symbols ``t_{i,j}^k`` as tuples ``(i, j, k)``."""
        return [s.symbol for i in sorted(self.successors) for s in self.successors[i]]

    def successor(self, i: int, j: int, k: int) -> Successor:
        for s in self.successors.get(i, ()):
            if s.type == j and s.k == k:
                return s
        raise KeyError((i, j, k))

    def status_line(self) -> str:
        if self.certified:
            return f"CERTIFIED(depth {self.depth}) with {self.r} cone types"
        return f"UNSTABLE(max radius {self.radius} reached): {self.reason}"


def _label_bfs_order(g, sources):
    key = _label_key(g.alphabet)
    order = {}
    queue = deque()
    for s in sources:
        if s not in order:
            order[s] = len(order)
            queue.append(s)
    while queue:
        v = queue.popleft()
        nbrs = [y for _, y in sorted(g.known_out_edges(v), key=key)]
        if not g.assume_symmetric:
            nbrs += [x for _, x in sorted(g.in_edges(v), key=key)] if v in g else []
        for y in nbrs:
            if y not in order:
                order[y] = len(order)
                queue.append(y)
    return order


class _Analysis:
    """Cones at levels ``0..top`` with their codes and successor links."""

    def __init__(self, g, F, top, depth, dist, dmax):
        self.g = g
        self.F = F
        self.depth = depth
        self.dist = dist
        self.symmetric = _is_symmetric(g)
        window = depth + 1
        by_dist: dict[int, list] = {}
        for v, d in dist.items():
            if d <= dmax:
                by_dist.setdefault(d, []).append(v)
        parent = {}

        def find(v):
            root = v
            while parent[root] != root:
                root = parent[root]
            while parent[v] != root:
                parent[v], v = root, parent[v]
            return root

        snapshots = {}
        for n in range(dmax - 1, -1, -1):
            for v in by_dist.get(n + 1, ()):
                parent[v] = v
            for v in by_dist.get(n + 1, ()):
                for y in g.neighbours(v):
                    if y in parent and dist[y] <= dmax:
                        ry, rv = find(y), find(v)
                        if ry != rv:
                            parent[ry] = rv
            if n <= top:
                snap = {}
                for d in range(n + 1, min(n + 1 + window, dmax) + 1):
                    for v in by_dist.get(d, ()):
                        snap[v] = find(v)
                snapshots[n] = snap
        self.levels: dict[int, list] = {}
        for n in range(top + 1):
            groups: dict = {}
            for v, root in snapshots.get(n, {}).items():
                groups.setdefault(root, set()).add(v)
            level_cones = []
            for root, members in groups.items():
                layer = {v: dist[v] - n - 1 for v in members}
                boundary = frozenset(v for v in members if layer[v] == 0)
                cone = Cone(g, frozenset(F), n, frozenset(members), boundary, layer, dist, window)
                info = {"cone": cone}
                for k in (depth, depth + 1):
                    verts = frozenset(v for v in members if layer[v] <= k)
                    code, order = _truncation_code(g, verts, layer, n, dist, boundary, self.symmetric)
                    info[k] = ConeCode(k, code, order)
                level_cones.append(info)
            level_cones.sort(key=lambda c: (c[depth].code, c[depth + 1].code, sorted(map(repr, c["cone"].boundary))))
            for idx, info in enumerate(level_cones):
                info["id"] = (n, idx)
            self.levels[n] = level_cones
            for info in level_cones:
                info["root"] = snapshots[n][next(iter(info["cone"].boundary))]
        for n in range(top + 1):
            by_root = {info["root"]: info for info in self.levels[n]}
            for info in self.levels[n]:
                info["successors"] = []
            if n + 1 <= top:
                for child in self.levels[n + 1]:
                    b = next(iter(child["cone"].boundary))
                    by_root[snapshots[n][b]]["successors"].append(child)


def classify_cone_types(
    g: LabelledGraph,
    root: Hashable | None = None,
    max_radius: int = 8,
    depth: int = 3,
    centers: Iterable | None = None,
    patience: int = 2,
) -> ConeTypeTable:
    """Classify the cones with respect to ``F`` (default ``{root}``) by truncated codes.

    Levels ``n = 0, 1, ...`` are examined in turn.  The table is CERTIFIED
    once, for the levels seen so far, (i) depth ``k`` and depth ``k + 1`` codes
    induce the same partition, (ii) every cone is carried onto its class
    representative by the code isomorphism together with its successors and
    their types, and (iii) the last ``patience`` levels brought no new class.
    If ``max_radius`` is reached first the table is UNSTABLE.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1 (successor boundaries live in layer 1)")
    if max_radius < 0:
        raise ValueError("max_radius must be non-negative")
    F = tuple(centers) if centers is not None else (g.root if root is None else root,)
    if not F:
        raise ValueError("F must be non-empty")
    last = None
    for N in range(max_radius + 1):
        dmax = N + depth + 3
        ball(g, F, dmax)
        dist = distances(g, F)
        exhausted = not g.frontier and max(dist.values()) < dmax
        dist = {v: d for v, d in dist.items() if d <= dmax + 1}
        analysis = _Analysis(g, F, N + 1, depth, dist, dmax)
        last = _evaluate(g, F, analysis, N, depth, patience, dist, exhausted)
        if last.certified:
            return last
    return last


def _evaluate(g, F, analysis, N, depth, patience, dist, exhausted):
    k = depth
    classes: dict = {}  # depth-k code -> class index
    reps: list = [None]
    first_level: dict = {}
    refine: dict = {}
    growth = []
    reason = ""
    for n in range(N + 2):
        for info in analysis.levels.get(n, []):
            code = info[k].code
            if code not in classes:
                classes[code] = len(reps)
                reps.append(info)
                first_level[classes[code]] = n
            info["type"] = classes[code]
            finer = info[k + 1].code
            if refine.setdefault(code, finer) != finer and not reason:
                reason = f"depth {k} class {classes[code]} splits at depth {k + 1} (level {n})"
        if n <= N:
            growth.append((n, len(reps) - 1))

    # successor structure of the representatives
    successors: dict[int, list] = {}
    top_order = _label_bfs_order(g, F)
    level0 = analysis.levels.get(0, [])
    successors[0] = _number_successors(0, level0, lambda v: top_order.get(v, len(top_order)), reps, k)
    for j in range(1, len(reps)):
        rep = reps[j]
        pos = {v: i for i, v in enumerate(rep[k].order)}
        if first_level[j] > N:
            continue
        successors[j] = _number_successors(j, rep["successors"], lambda v, pos=pos: pos[v], reps, k)

    # bisimulation: code isomorphisms carry successors to successors of equal type
    if not reason:
        for n in range(N + 1):
            for info in analysis.levels.get(n, []):
                j = info["type"]
                rep = reps[j]
                if rep is info:
                    continue
                sigma = info[k].isomorphism_to(rep[k])
                expected = {(s.boundary, s.type) for s in successors[j]}
                got = set()
                for child in info["successors"]:
                    image = frozenset(sigma[v] for v in child["cone"].boundary)
                    got.add((image, child["type"]))
                if got != expected or len(info["successors"]) != len(successors[j]):
                    reason = f"cones of type {j} have different successor structure (level {n})"
                    break
            if reason:
                break

    new_recent = any(first_level[j] > N - patience for j in first_level if first_level[j] <= N)
    if not reason and new_recent and not exhausted:
        reason = f"new cone types still appearing at level {max(first_level.values(), default=0)}"
    if not reason and any(first_level[j] == N + 1 for j in first_level) and not exhausted:
        reason = f"new cone type at level {N + 1}"
    if not reason and N < patience and not exhausted:
        reason = f"fewer than {patience} levels examined"
    status = UNSTABLE if reason else CERTIFIED

    types = [ConeType(0, -1, None, None, tuple(F))]
    for j in range(1, len(reps)):
        info = reps[j]
        order = info[k].order
        bnd = tuple(v for v in order if info["cone"].layer[v] == 0)
        types.append(ConeType(j, first_level[j], info["cone"], info[k], bnd))
    return ConeTypeTable(
        graph=g,
        centers=tuple(F),
        status=status,
        depth=k,
        radius=N,
        reason=reason,
        growth=growth,
        types=types,
        successors=successors,
        distance=dist,
        patience=patience,
    )


def _number_successors(i, children, position, reps, k):
    keyed = []
    for child in children:
        first = min(position(v) for v in child["cone"].boundary)
        keyed.append((child["type"], first, child))
    keyed.sort(key=lambda t: (t[0], t[1]))
    out = []
    counts: dict = {}
    for j, _, child in keyed:
        counts[j] = counts.get(j, 0) + 1
        sigma = child[k].isomorphism_to(reps[j][k])
        link = {v: sigma[v] for v in child["cone"].boundary}
        out.append(Successor(i, j, counts[j], frozenset(child["cone"].boundary), link))
    return out


# ---------------------------------------------------------------------------
# derived data: transitions between (type, boundary vertex) pairs


def cone_moves(table: ConeTypeTable) -> dict:
    """One-letter moves of the cone automaton.

    Keys are ``(state, letter, top)`` where a state is ``(type, vertex)`` with
    the vertex on the boundary of the type's representative (type 0 is the
    whole graph and its "boundary" is ``F``), and ``top`` is the current top
    stack symbol or ``None`` for an empty stack.  Values are lists of
    ``(state', push)`` where ``push`` replaces the top symbol.
    """
    if not table.certified:
        raise NotCertified(table.status_line())
    g = table.graph
    dist = table.distance
    Fset = set(table.centers)
    moves: dict = {}
    tops_for: dict[int, list] = {}
    for sym in table.symbols():
        tops_for.setdefault(sym[1], []).append(sym)

    def add(key, value):
        moves.setdefault(key, [])
        if value not in moves[key]:
            moves[key].append(value)

    def successor_at(i, y):
        for s in table.successors.get(i, ()):
            if y in s.boundary:
                return s
        raise NotCertified(f"vertex {y!r} lies in no successor of type {i}")

    for x in table.centers:
        for a, y in g.out_edges(x):
            if y in Fset:
                add(((0, x), a, None), ((0, y), ()))
            else:
                s = successor_at(0, y)
                add(((0, x), a, None), ((s.type, s.link[y]), (s.symbol,)))
    inverse_links = {}
    for j in range(1, len(table.types)):
        for p in table.types[j].boundary:
            for a, y in g.out_edges(p):
                step = dist[y] - dist[p]
                if step == 1:
                    s = successor_at(j, y)
                    for top in tops_for.get(j, ()):
                        add(((j, p), a, top), ((s.type, s.link[y]), (top, s.symbol)))
                elif step == 0:
                    for top in tops_for.get(j, ()):
                        add(((j, p), a, top), ((j, y), (top,)))
                else:
                    for top in tops_for.get(j, ()):
                        i, _, kk = top
                        s = table.successor(i, j, kk)
                        inv = inverse_links.get(top)
                        if inv is None:
                            inv = inverse_links[top] = {w: u for u, w in s.link.items()}
                        p2 = inv[p]
                        for b, y2 in g.out_edges(p2):
                            if b != a:
                                continue
                            if dist[y2] != dist[p2] - 1:
                                raise NotCertified(f"inconsistent inward move at {p2!r} by {a!r}")
                            add(((j, p), a, top), ((i, y2), ()))
    return moves


def phi_tau(table: ConeTypeTable, x):
    """``(phi(x), tau(x))``: representative state of ``x`` and its second-order type.

    Traced along the label-first geodesic from ``F`` to ``x``; ``tau`` is None
    for ``x`` in ``F``.
    """
    moves = cone_moves(table)
    g = table.graph
    if x in table.centers:
        return (0, x), None
    order = _label_bfs_order(g, table.centers)
    dist = table.distance
    if x not in dist:
        raise FrontierEscape(x)
    # walk back along decreasing distance, choosing the first neighbour in BFS order
    path = []
    v = x
    key = _label_key(g.alphabet)
    while v not in table.centers:
        best = None
        for a, u in sorted(g.in_edges(v), key=key):
            if dist.get(u) == dist[v] - 1 and (best is None or order[u] < order[best[1]]):
                best = (a, u)
        if best is None:
            raise FrontierEscape(v)
        path.append(best[0])
        v = best[1]
    state, stack = (0, v), []
    for a in reversed(path):
        top = stack[-1] if stack else None
        options = moves.get((state, a, top), [])
        if not options:
            raise NotCertified(f"no move from {state!r} by {a!r}")
        state, push = options[0]
        stack = stack[:-1] + list(push) if top is not None else list(push)
    return state, stack[-1] if stack else None


def boundary_diameters(table: ConeTypeTable) -> dict:
    """``diam(boundary of C_i)`` in the whole graph for each representative i >= 1."""
    if not table.certified:
        raise NotCertified(table.status_line())
    g = table.graph
    out = {}
    for t in table.types[1:]:
        worst = 0
        for b in t.boundary:
            d = distances(g, [b])
            for c in t.boundary:
                worst = max(worst, d[c])
        out[t.index] = worst
    return out


def boundary_diameter_check(table: ConeTypeTable, bound: int) -> bool:
    """True iff every representative boundary has diameter at most ``bound``."""
    return all(d <= bound for d in boundary_diameters(table).values())
