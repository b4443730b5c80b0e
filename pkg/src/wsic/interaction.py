"""Interaction digraph between the three message blocks, and case classification.

The interaction digraph has one vertex per partition block ('1', '2', '12').
An edge u -> v exists when some receiver in block u holds side information
from block v, and it is FULL when every receiver in u knows every message of
v.  The classifier derives a coarse case label from this digraph and, more
importantly, decides which composition schemes' structural preconditions
hold; constructions dispatch on those verdicts, never on the cosmetic label.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import TwoSenderInstance

VERTICES = ("1", "2", "12")

FULL = "FULL"
PARTIAL = "PARTIAL"

#: Composition scheme identifiers in dispatch (and tie-break) order.
SCHEMES = ("iib", "iic", "iid", "iie", "general", "naive")


@dataclass(frozen=True)
class InteractionEdge:
    src: str
    dst: str
    participation: str  # FULL or PARTIAL


@dataclass(frozen=True)
class InteractionDigraph:
    edges: tuple[InteractionEdge, ...]

    def edge(self, u: str, v: str) -> InteractionEdge | None:
        for e in self.edges:
            if e.src == u and e.dst == v:
                return e
        return None

    def has(self, u: str, v: str) -> bool:
        return self.edge(u, v) is not None

    def is_full(self, u: str, v: str) -> bool:
        e = self.edge(u, v)
        return e is not None and e.participation == FULL

    def bidirectional(self, u: str, v: str) -> bool:
        return self.has(u, v) and self.has(v, u)

    def full_bidirectional(self, u: str, v: str) -> bool:
        return self.is_full(u, v) and self.is_full(v, u)

    def all_full(self) -> bool:
        return all(e.participation == FULL for e in self.edges)

    def has_cycle(self) -> bool:
        """Directed-cycle test by depth-first search."""
        succ = {u: [e.dst for e in self.edges if e.src == u] for u in VERTICES}
        done: set[str] = set()
        path: set[str] = set()

        def visit(u: str) -> bool:
            if u in path:
                return True
            if u in done:
                return False
            path.add(u)
            hit = any(visit(v) for v in succ[u])
            path.discard(u)
            done.add(u)
            return hit

        return any(visit(u) for u in VERTICES)


@dataclass(frozen=True)
class CaseLabel:
    """Classification outcome.

    major is 'I' exactly when the interaction digraph is acyclic; the subcase
    letter is a best-effort reading of the usual taxonomy (None for major I,
    'UNRESOLVED' for cyclic shapes the table does not pin down).  applicable
    maps each scheme identifier to whether its structural precondition holds.
    """

    major: str
    subcase: str | None
    applicable: dict[str, bool]

    def applicable_schemes(self) -> tuple[str, ...]:
        return tuple(s for s in SCHEMES if self.applicable[s])


def interaction_digraph(inst: TwoSenderInstance) -> InteractionDigraph:
    """Derive the block-level interaction digraph of an instance."""
    blocks = {name: inst.partition.block(name) for name in VERTICES}
    edges = []
    for u in VERTICES:
        for v in VERTICES:
            if u == v or not blocks[u] or not blocks[v]:
                continue
            exists = any(inst.digraph.knows(i) & blocks[v] for i in blocks[u])
            if not exists:
                continue
            full = all(blocks[v] <= inst.digraph.knows(i) for i in blocks[u])
            edges.append(InteractionEdge(u, v, FULL if full else PARTIAL))
    order = {name: k for k, name in enumerate(VERTICES)}
    edges.sort(key=lambda e: (order[e.src], order[e.dst]))
    return InteractionDigraph(tuple(edges))


def classify(inst: TwoSenderInstance) -> CaseLabel:
    """Classify an instance and report which composition schemes apply.

    Scheme preconditions are purely structural:

    * iib needs the 1<->12 and 2<->12 interactions to exist and be FULL in
      both directions;
    * iic (resp. iid) needs only 1<->12 (resp. 2<->12) FULL both ways;
    * iie needs every existing interaction FULL plus both 1<->12 and 2<->12
      present (its receivers must be able to strip the shared sub-code);
    * general and naive always apply.
    """
    h = interaction_digraph(inst)
    major = "I" if not h.has_cycle() else "II"

    applicable = {
        "general": True,
        "naive": True,
        "iib": h.full_bidirectional("1", "12") and h.full_bidirectional("2", "12"),
        "iic": h.full_bidirectional("1", "12"),
        "iid": h.full_bidirectional("2", "12"),
        "iie": h.all_full() and h.bidirectional("1", "12") and h.bidirectional("2", "12"),
    }

    subcase: str | None = None
    if major == "II":
        b1_12 = h.bidirectional("1", "12")
        b2_12 = h.bidirectional("2", "12")
        b1_2 = h.bidirectional("1", "2")
        if h.all_full() and b1_2 and b1_12 and b2_12:
            subcase = "E"
        elif b1_12 and b2_12:
            subcase = "B"
        elif b1_12:
            subcase = "C"
        elif b2_12:
            subcase = "D"
        elif b1_2:
            subcase = "A"
        else:
            subcase = "UNRESOLVED"

    return CaseLabel(major=major, subcase=subcase, applicable=applicable)
