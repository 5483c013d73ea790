"""
Asynchronous graphs: vertices, edges and 2-dimensional tiles.

Tiles are unordered pairs of coinitial and cofinal paths of length 2. The
homotopy relation on paths is the congruence generated by tile permutations.
"""

import logging
import threading
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Set, Tuple

import networkx as nx

from .errors import PreconditionError, ValidationError

logger = logging.getLogger(__name__)

Half = Tuple[Hashable, Hashable]  # a length-2 edge path (first, second)
Tile = Tuple[Half, Half]


def canonical_key(value: Any) -> Tuple:
    """
    Total sort key over the values used as vertices, edges and moves.

    Sets sort by size first, then by their sorted members.
    """
    if isinstance(value, bool):
        return (0, int(value))
    if isinstance(value, int):
        return (0, value)
    if isinstance(value, str):
        return (1, value)
    if isinstance(value, tuple):
        return (2, tuple(canonical_key(v) for v in value))
    if isinstance(value, (frozenset, set)):
        members = sorted(canonical_key(v) for v in value)
        return (3, len(members), tuple(members))
    return (4, repr(value))


def canonical_sorted(values: Iterable) -> List:
    """Sort values with canonical_key."""
    return sorted(values, key=canonical_key)


def normalize_tile(first: Half, second: Half) -> Tile:
    """Return the tile with its two halves in canonical order."""
    if canonical_key(first) <= canonical_key(second):
        return (tuple(first), tuple(second))
    return (tuple(second), tuple(first))


@dataclass(frozen=True)
class Edge:
    """
    A transition of an asynchronous graph.
    """
    id: Hashable
    source: Hashable
    target: Hashable


@dataclass(frozen=True)
class Path:
    """
    A composable chain of edges.
    """
    start: Hashable
    edges: Tuple = ()
    end: Hashable = None

    def __len__(self) -> int:
        return len(self.edges)


@dataclass
class Verdict:
    """
    Outcome of a pass/fail check with an optional counterexample.
    """
    passed: bool
    witness: Any = None  # counterexample when the check fails
    message: str = ""

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class TileViolation:
    """
    A violated tile axiom.
    """
    kind: str  # "degenerate tile", "non-deterministic residual", ...
    tile: Tile
    detail: str = ""


@dataclass(frozen=True)
class MovePartialOrder:
    """
    A finite strict partial order, stored transitively closed.
    """
    elements: Tuple
    pairs: FrozenSet[Tuple[Hashable, Hashable]] = frozenset()

    @classmethod
    def from_relation(cls, elements: Iterable, pairs: Iterable[Tuple[Hashable, Hashable]]) -> "MovePartialOrder":
        """
        Build an order from generating pairs, closing transitively.

        Raises:
            ValidationError: If the pairs contain a cycle.
        """
        elements = tuple(canonical_sorted(set(elements)))
        graph = nx.DiGraph()
        graph.add_nodes_from(elements)
        graph.add_edges_from(p for p in pairs if p[0] != p[1])
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise ValidationError(f"Causality cycle: {cycle}")
        closure = nx.transitive_closure_dag(graph)
        return cls(elements, frozenset(closure.edges()))

    def less(self, a: Hashable, b: Hashable) -> bool:
        return (a, b) in self.pairs

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return a == b or (a, b) in self.pairs

    def digraph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.elements)
        graph.add_edges_from(self.pairs)
        return graph

    def covering_pairs(self) -> List[Tuple[Hashable, Hashable]]:
        """Pairs a < b with nothing strictly between them."""
        reduction = nx.transitive_reduction(self.digraph())
        return canonical_sorted(reduction.edges())

    def linearizations(self) -> List[Tuple]:
        """All linear extensions, in canonical order."""
        return linearizations(self)

    def restrict(self, subset: Iterable) -> "MovePartialOrder":
        subset = set(subset)
        return MovePartialOrder(
            tuple(e for e in self.elements if e in subset),
            frozenset((a, b) for a, b in self.pairs if a in subset and b in subset),
        )

    def relabel(self, mapping: Dict) -> "MovePartialOrder":
        return MovePartialOrder(
            tuple(canonical_sorted(mapping[e] for e in self.elements)),
            frozenset((mapping[a], mapping[b]) for a, b in self.pairs),
        )

    def to_dict(self) -> Dict:
        return {
            "elements": [str(e) for e in self.elements],
            "covering": [[str(a), str(b)] for a, b in self.covering_pairs()],
        }


def linearizations(order: MovePartialOrder) -> List[Tuple]:
    """
    Enumerate the linear extensions of a finite partial order.

    Args:
        order: The partial order.

    Returns:
        Every linear extension as a tuple, sorted canonically.
    """
    if not order.elements:
        return [()]
    graph = nx.transitive_reduction(order.digraph())
    return canonical_sorted(tuple(ext) for ext in nx.all_topological_sorts(graph))


class AsyncGraph:
    """
    Finite acyclic graph equipped with 2-dimensional tiles.

    Vertices and edge identifiers are opaque hashable values. The residual
    maps (m, p) -> (n, q) of the tiles are kept as derived indexes.
    """

    def __init__(self, vertices: Iterable[Hashable], edges: Iterable[Edge], tiles: Iterable[Tile] = ()):
        self.logger = logging.getLogger(__name__)
        self._vertices: FrozenSet = frozenset(vertices)
        self._edges: Dict[Hashable, Edge] = {}
        self._out: Dict[Hashable, List[Hashable]] = defaultdict(list)
        for edge in edges:
            self._edges[edge.id] = edge
            self._out[edge.source].append(edge.id)
        for source in self._out:
            self._out[source] = canonical_sorted(self._out[source])
        self._tiles: FrozenSet[Tile] = frozenset(normalize_tile(a, b) for a, b in tiles)
        self._residual: Dict[Half, Set[Half]] = defaultdict(set)
        for first, second in self._tiles:
            self._residual[first].add(second)
            self._residual[second].add(first)

        self._lock = threading.Lock()
        self._class_cache: Dict[Tuple, FrozenSet[Tuple]] = {}
        self._cube: Optional[Verdict] = None

    @property
    def vertices(self) -> FrozenSet:
        return self._vertices

    @property
    def edges(self) -> List[Edge]:
        return [self._edges[e] for e in canonical_sorted(self._edges)]

    @property
    def tiles(self) -> FrozenSet[Tile]:
        return self._tiles

    def has_edge(self, edge_id: Hashable) -> bool:
        return edge_id in self._edges

    def edge(self, edge_id: Hashable) -> Edge:
        try:
            return self._edges[edge_id]
        except KeyError:
            raise PreconditionError(f"Unknown edge: {edge_id!r}")

    def out_edges(self, vertex: Hashable) -> List[Hashable]:
        return list(self._out.get(vertex, ()))

    def residuals(self, first: Hashable, second: Hashable) -> Set[Half]:
        return set(self._residual.get((first, second), ()))

    def residual(self, first: Hashable, second: Hashable) -> Optional[Half]:
        """The unique residual of a 2-path, or None when there is none."""
        found = self._residual.get((first, second))
        if not found:
            return None
        if len(found) > 1:
            raise PreconditionError(f"Non-deterministic residual for {(first, second)!r}")
        return next(iter(found))

    def digraph(self) -> nx.DiGraph:
        """The underlying directed graph on vertices."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self._vertices)
        graph.add_edges_from((e.source, e.target) for e in self._edges.values())
        return graph

    def make_path(self, edges: Iterable[Hashable], start: Hashable = None) -> Path:
        """
        Build a path from a sequence of edge identifiers.

        Args:
            edges: Edge identifiers in order.
            start: Start vertex, required for the empty path.

        Returns:
            The path.

        Raises:
            PreconditionError: If the edges are not composable.
        """
        edges = tuple(edges)
        if not edges:
            if start is None:
                raise PreconditionError("The empty path needs an explicit start vertex")
            return Path(start, (), start)
        current = self.edge(edges[0]).source
        if start is not None and start != current:
            raise PreconditionError(f"Path does not start at {start!r}")
        begin = current
        for edge_id in edges:
            edge = self.edge(edge_id)
            if edge.source != current:
                raise PreconditionError(f"Edge {edge_id!r} does not continue the path at {current!r}")
            current = edge.target
        return Path(begin, edges, current)

    def paths_from(self, root: Hashable) -> Iterator[Path]:
        """Every path starting at root, the empty path included."""
        stack = [(root, ())]
        while stack:
            vertex, edges = stack.pop()
            yield Path(root, edges, vertex)
            for edge_id in reversed(self.out_edges(vertex)):
                stack.append((self._edges[edge_id].target, edges + (edge_id,)))

    def occurrence_class(self, path: Path) -> FrozenSet[Tuple]:
        """
        Homotopy class of a path with edge occurrences tracked.

        Each element is a tuple of (occurrence index, edge). A tile
        permutation identifies the first edge of one half with the second
        edge of the other.
        """
        start = tuple(enumerate(path.edges))
        seen = {start}
        queue = deque([start])
        while queue:
            state = queue.popleft()
            for i in range(len(state) - 1):
                (a, m), (b, p) = state[i], state[i + 1]
                for n, q in self._residual.get((m, p), ()):
                    swapped = state[:i] + ((b, n), (a, q)) + state[i + 2:]
                    if swapped not in seen:
                        seen.add(swapped)
                        queue.append(swapped)
        return frozenset(seen)

    def homotopy_class(self, path: Path) -> FrozenSet[Tuple]:
        """
        All edge sequences homotopic to a path.

        Args:
            path: A path of this graph.

        Returns:
            Frozen set of edge tuples.
        """
        with self._lock:
            cached = self._class_cache.get(path.edges)
        if cached is not None:
            return cached
        found = frozenset(tuple(e for _, e in state) for state in self.occurrence_class(path))
        with self._lock:
            for member in found:
                self._class_cache[member] = found
        return found


def validate_tiles(graph: AsyncGraph) -> List[TileViolation]:
    """
    List every violated tile axiom.

    Args:
        graph: The graph to validate.

    Returns:
        Violations, empty iff the graph is a well-formed asynchronous graph.
    """
    violations: List[TileViolation] = []
    for edge in graph.edges:
        if edge.source not in graph.vertices or edge.target not in graph.vertices:
            violations.append(TileViolation("dangling edge", ((edge.id, edge.id), (edge.id, edge.id)),
                                            f"edge {edge.id!r} leaves the vertex set"))
    if not nx.is_directed_acyclic_graph(graph.digraph()):
        violations.append(TileViolation("cyclic graph", ((None, None), (None, None)), "the graph has a cycle"))

    for tile in canonical_sorted(graph.tiles):
        (m, p), (n, q) = tile
        if not all(graph.has_edge(e) for e in (m, p, n, q)):
            violations.append(TileViolation("unknown edge", tile))
            continue
        em, ep, en, eq = (graph.edge(e) for e in (m, p, n, q))
        if em.target != ep.source or en.target != eq.source:
            violations.append(TileViolation("not a path", tile))
            continue
        if em.source != en.source or ep.target != eq.target:
            violations.append(TileViolation("not coinitial and cofinal", tile))
            continue
        if m == n or p == q:
            violations.append(TileViolation("degenerate tile", tile, "m = n" if m == n else "p = q"))
        for half in ((m, p), (n, q)):
            others = graph.residuals(*half)
            if len(others) > 1:
                violations.append(TileViolation(
                    "non-deterministic residual", tile,
                    f"{half!r} has residuals {canonical_sorted(others)!r}",
                ))
    return violations


def homotopy_class(graph: AsyncGraph, path: Path) -> FrozenSet[Tuple]:
    """Edge sequences homotopic to a path, memoized on the graph."""
    return graph.homotopy_class(path)


def homotopic(graph: AsyncGraph, s: Path, t: Path) -> bool:
    """
    Decide whether two coinitial and cofinal paths are homotopic.

    Raises:
        PreconditionError: If the paths are not coinitial and cofinal.
    """
    if s.start != t.start or s.end != t.end:
        raise PreconditionError("Homotopy is only defined on coinitial and cofinal paths")
    return t.edges in graph.homotopy_class(s)


def _hexagon_side(graph: AsyncGraph, edges: Tuple, swaps: Tuple[int, ...]) -> Optional[Tuple]:
    current = edges
    for i in swaps:
        found = graph.residual(current[i], current[i + 1])
        if found is None:
            return None
        current = current[:i] + found + current[i + 2:]
    return current


def check_cube(graph: AsyncGraph) -> Verdict:
    """
    Check the cube property on every path of length 3.

    A hexagon is filled on the left by the permutations at (2,3), (1,2),
    (2,3) and on the right by (1,2), (2,3), (1,2). Both fillings must be
    undefined together or reach the same path.

    Raises:
        PreconditionError: If a residual is not unique.
    """
    if graph._cube is not None:
        return graph._cube
    checked = 0
    for vertex in canonical_sorted(graph.vertices):
        for a in graph.out_edges(vertex):
            for b in graph.out_edges(graph.edge(a).target):
                for c in graph.out_edges(graph.edge(b).target):
                    checked += 1
                    left = _hexagon_side(graph, (a, b, c), (1, 0, 1))
                    right = _hexagon_side(graph, (a, b, c), (0, 1, 0))
                    if left != right:
                        verdict = Verdict(False, {"path": (a, b, c), "left": left, "right": right},
                                          "hexagon filled on one side only")
                        graph._cube = verdict
                        return verdict
    logger.debug(f"Cube property holds on {checked} paths of length 3")
    graph._cube = Verdict(True)
    return graph._cube


def check_contractible(graph: AsyncGraph, root: Hashable) -> Verdict:
    """
    Check that all paths from root to each vertex are homotopic.

    Raises:
        ValidationError: If some vertex is not reachable from root.
    """
    reachable = nx.descendants(graph.digraph(), root) | {root}
    unreachable = graph.vertices - reachable
    if unreachable:
        raise ValidationError(f"Vertices unreachable from {root!r}: {canonical_sorted(unreachable)!r}")

    classes: Dict[Hashable, FrozenSet[Tuple]] = {}
    for path in graph.paths_from(root):
        known = classes.get(path.end)
        if known is None:
            classes[path.end] = graph.homotopy_class(path)
        elif path.edges not in known:
            first = canonical_sorted(known)[0]
            return Verdict(False, (first, path.edges), f"non-homotopic paths to {path.end!r}")
    return Verdict(True)


def path_order(graph: AsyncGraph, path: Path) -> MovePartialOrder:
    """
    The partial order on the edges of a path whose linearizations are
    exactly its homotopy class.

    Raises:
        PreconditionError: If the graph fails the cube property or the
            class is not the linearization set of any order.
    """
    if not check_cube(graph):
        raise PreconditionError("path_order needs a graph with the cube property")
    states = graph.occurrence_class(path)
    size = len(path.edges)
    orders = [tuple(a for a, _ in state) for state in states]
    positions = [{occ: i for i, occ in enumerate(order)} for order in orders]
    pairs = set()
    for i in range(size):
        for j in range(size):
            if i != j and all(pos[i] < pos[j] for pos in positions):
                pairs.add((path.edges[i], path.edges[j]))
    order = MovePartialOrder.from_relation(path.edges, pairs)
    expected = {tuple(path.edges[occ] for occ in o) for o in orders}
    if set(order.linearizations()) != expected:
        raise PreconditionError("The homotopy class is not the linearization set of a partial order")
    return order


@dataclass
class Quotient:
    """
    The graph of homotopy classes of root paths.
    """
    graph: AsyncGraph
    root: FrozenSet[Tuple]
    class_of: Dict[Tuple, FrozenSet[Tuple]] = field(default_factory=dict)  # path edges -> class
    end_of: Dict[FrozenSet[Tuple], Hashable] = field(default_factory=dict)  # class -> vertex of G


def quotient(graph: AsyncGraph, root: Hashable) -> Quotient:
    """
    Build [G]: positions are homotopy classes of paths from root.

    Args:
        graph: The asynchronous graph.
        root: The initial vertex.

    Returns:
        The quotient graph with its bookkeeping maps.
    """
    class_of: Dict[Tuple, FrozenSet[Tuple]] = {}
    end_of: Dict[FrozenSet[Tuple], Hashable] = {}
    for path in graph.paths_from(root):
        if path.edges not in class_of:
            cls = graph.homotopy_class(path)
            for member in cls:
                class_of[member] = cls
            end_of[cls] = path.end

    edges: Dict[Hashable, Edge] = {}
    by_class_edge: Dict[Tuple, Hashable] = {}
    for cls in end_of:
        rep = canonical_sorted(cls)[0]
        for edge_id in graph.out_edges(end_of[cls]):
            target = class_of[rep + (edge_id,)]
            edges[(cls, edge_id)] = Edge((cls, edge_id), cls, target)
            by_class_edge[(cls, edge_id)] = target

    tiles = []
    for (m, p), (n, q) in graph.tiles:
        source = graph.edge(m).source
        for cls, end in end_of.items():
            if end != source:
                continue
            after_m = by_class_edge[(cls, m)]
            after_n = by_class_edge[(cls, n)]
            tiles.append((((cls, m), (after_m, p)), ((cls, n), (after_n, q))))

    root_class = class_of[()]
    result = AsyncGraph(end_of.keys(), edges.values(), tiles)
    logger.debug(f"Quotient has {len(end_of)} positions and {len(edges)} edges")
    return Quotient(result, root_class, class_of, end_of)


def _order_tables(graph: AsyncGraph, root: Hashable) -> Tuple[Dict, Dict]:
    digraph = graph.digraph()
    ups = {v: nx.descendants(digraph, v) | {v} for v in digraph.nodes}
    downs = {v: nx.ancestors(digraph, v) | {v} for v in digraph.nodes}
    return ups, downs


def check_distributive(graph: AsyncGraph, root: Hashable) -> Verdict:
    """
    Check that the down-set of every position of [G] is a distributive lattice.

    Only maximal positions are examined: down-sets of smaller positions are
    sublattices of theirs.
    """
    q = quotient(graph, root)
    ups, downs = _order_tables(q.graph, q.root)
    maximal = [v for v in q.graph.vertices if len(ups[v]) == 1]

    for top in canonical_sorted(maximal):
        carrier = downs[top]

        def meet(a, b):
            common = downs[a] & downs[b]
            best = max(common, key=lambda v: len(downs[v]))
            if not common <= downs[best]:
                raise _NotALattice(("meet", a, b))
            return best

        def join(a, b):
            common = ups[a] & ups[b] & carrier
            best = min(common, key=lambda v: len(downs[v]))
            if not common <= ups[best]:
                raise _NotALattice(("join", a, b))
            return best

        elements = canonical_sorted(carrier)
        try:
            for a in elements:
                for b in elements:
                    for c in elements:
                        if meet(a, join(b, c)) != join(meet(a, b), meet(a, c)):
                            return Verdict(False, (q.end_of[a], q.end_of[b], q.end_of[c]),
                                           "distributive law fails")
        except _NotALattice as exc:
            kind, a, b = exc.args[0]
            return Verdict(False, (kind, q.end_of[a], q.end_of[b]), f"no {kind} below a position")
    return Verdict(True)


class _NotALattice(Exception):
    pass


def position_order(graph: AsyncGraph, root: Hashable) -> MovePartialOrder:
    """
    Reachability order on the positions of [G], relabelled by the vertex
    each class ends at.

    Raises:
        PreconditionError: If G fails the cube property or a down-set is
            not a distributive lattice.
    """
    if not check_cube(graph):
        raise PreconditionError("position_order needs a graph with the cube property")
    q = quotient(graph, root)
    verdict = check_distributive(graph, root)
    if not verdict:
        raise PreconditionError(f"Positions do not form distributive lattices: {verdict.message}")
    ups, _ = _order_tables(q.graph, q.root)
    pairs = {(a, b) for a in ups for b in ups[a] if a != b}
    if len(set(q.end_of.values())) == len(q.end_of):
        labels = q.end_of
    else:
        labels = {cls: cls for cls in q.end_of}
    return MovePartialOrder(
        tuple(canonical_sorted(labels[c] for c in q.end_of)),
        frozenset((labels[a], labels[b]) for a, b in pairs),
    )
