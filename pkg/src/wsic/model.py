"""Domain model for two-sender unicast index coding instances.

Message indices are 1-based throughout.  A problem instance bundles a
side-information digraph, a three-way sender partition of the messages
(exclusive to sender 1, exclusive to sender 2, held by both), and the
family of message sets an eavesdropper may hold.  Sub-problems induced
on a block of the partition are first-class values carrying an explicit
local-to-global label map, and an empty block simply yields an empty
sub-problem (optimal codelength zero) rather than an error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidPartition, ParseError
from .gf import FieldOrder


@dataclass(frozen=True)
class SideInfoDigraph:
    """One vertex per receiver; receiver i knows exactly the messages in side_info[i-1]."""

    m: int
    side_info: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("message count must be non-negative")
        if len(self.side_info) != self.m:
            raise ValueError(f"need {self.m} side-information sets, got {len(self.side_info)}")
        for i, known in enumerate(self.side_info, start=1):
            for j in known:
                if not 1 <= j <= self.m:
                    raise ValueError(f"receiver {i} lists message {j} outside 1..{self.m}")
            if i in known:
                raise ValueError(f"receiver {i} lists its own demanded message as side information")

    @staticmethod
    def from_lists(m: int, lists: Sequence[Iterable[int]]) -> "SideInfoDigraph":
        return SideInfoDigraph(m, tuple(frozenset(int(j) for j in ks) for ks in lists))

    def knows(self, i: int) -> frozenset[int]:
        return self.side_info[i - 1]


@dataclass(frozen=True)
class SenderPartition:
    """Disjoint message blocks: sender-1 exclusive, sender-2 exclusive, common."""

    p1: frozenset[int]
    p2: frozenset[int]
    p12: frozenset[int]

    def __post_init__(self):
        if self.p1 & self.p2 or self.p1 & self.p12 or self.p2 & self.p12:
            raise ValueError("sender partition blocks must be pairwise disjoint")

    def block(self, name: str) -> frozenset[int]:
        try:
            return {"1": self.p1, "2": self.p2, "12": self.p12}[name]
        except KeyError:
            raise ValueError(f"unknown block {name!r}; expected '1', '2' or '12'") from None

    @property
    def sender1(self) -> frozenset[int]:
        """Every message sender 1 holds."""
        return self.p1 | self.p12

    @property
    def sender2(self) -> frozenset[int]:
        return self.p2 | self.p12


@dataclass(frozen=True)
class EavesdropperSpec:
    """The family of message index sets the eavesdropper may hold.

    A code is only called weakly secure when it is secure against every
    listed set; the senders do not know which one applies.
    """

    sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        if not self.sets:
            raise ValueError("eavesdropper specification must list at least one set")

    @staticmethod
    def from_lists(lists: Sequence[Iterable[int]]) -> "EavesdropperSpec":
        return EavesdropperSpec(tuple(frozenset(int(j) for j in a) for a in lists))


@dataclass(frozen=True)
class TwoSenderInstance:
    q: FieldOrder
    digraph: SideInfoDigraph
    partition: SenderPartition
    eaves: EavesdropperSpec

    def __post_init__(self):
        m = self.digraph.m
        if m < 1:
            raise ValueError("a two-sender instance needs at least one message")
        everything = frozenset(range(1, m + 1))
        covered = self.partition.p1 | self.partition.p2 | self.partition.p12
        if covered != everything:
            raise ValueError("sender partition must cover every message exactly once")
        for a in self.eaves.sets:
            if not a <= everything:
                raise ValueError(f"eavesdropper set {sorted(a)} mentions unknown messages")
            if a == everything:
                raise ValueError("an eavesdropper set may not contain every message")

    @property
    def m(self) -> int:
        return self.digraph.m


@dataclass(frozen=True)
class SingleSenderInstance:
    """A single-sender sub-problem with local indices 1..m and a label map back to the parent.

    Unlike the top-level instance, an eavesdropper set here may cover the
    whole local message set (the intersection of a proper global set with a
    block can be the entire block); security is then vacuous.
    """

    q: FieldOrder
    digraph: SideInfoDigraph
    eaves: EavesdropperSpec
    label_map: tuple[int, ...]

    def __post_init__(self):
        if len(self.label_map) != self.digraph.m:
            raise ValueError("label map must name one global index per local vertex")
        if len(set(self.label_map)) != len(self.label_map):
            raise ValueError("label map entries must be distinct")
        local = frozenset(range(1, self.digraph.m + 1))
        for a in self.eaves.sets:
            if not a <= local:
                raise ValueError(f"eavesdropper set {sorted(a)} outside local indices")

    @property
    def m(self) -> int:
        return self.digraph.m

    @property
    def is_empty(self) -> bool:
        return self.digraph.m == 0

    def to_global(self, local_index: int) -> int:
        return self.label_map[local_index - 1]


@dataclass(frozen=True)
class FittingMatrix:
    """Square grid over {'1','0','x'}: ones on the diagonal, 'x' wherever the
    receiver has side information, zero elsewhere.  Valid codes for the
    problem are exactly the row bases of its completions over the field."""

    m: int
    entries: tuple[str, ...]

    def __post_init__(self):
        if len(self.entries) != self.m * self.m:
            raise ValueError("fitting matrix must be square over its message count")
        for e in self.entries:
            if e not in ("0", "1", "x"):
                raise ValueError(f"fitting matrix entry must be '0', '1' or 'x', got {e!r}")

    def entry(self, i: int, j: int) -> str:
        return self.entries[(i - 1) * self.m + (j - 1)]

    def x_positions(self) -> tuple[tuple[int, int], ...]:
        """Free positions (i, j), 1-based, in row-major order."""
        out = []
        for i in range(1, self.m + 1):
            for j in range(1, self.m + 1):
                if self.entry(i, j) == "x":
                    out.append((i, j))
        return tuple(out)

    def rows_display(self) -> list[str]:
        return [
            "".join(self.entries[r * self.m : (r + 1) * self.m]) for r in range(self.m)
        ]


def fitting_matrix(d: SideInfoDigraph) -> FittingMatrix:
    """Fitting matrix of a side-information digraph."""
    cells = []
    for i in range(1, d.m + 1):
        known = d.knows(i)
        for j in range(1, d.m + 1):
            if i == j:
                cells.append("1")
            elif j in known:
                cells.append("x")
            else:
                cells.append("0")
    return FittingMatrix(d.m, tuple(cells))


# ---------------------------------------------------------------------------
# Instance documents.

_INSTANCE_KEYS = {"q", "m", "side_info", "p1", "p2", "p12", "eavesdroppers"}


def _index_list(raw, what: str, m: int) -> list[int]:
    if not isinstance(raw, list):
        raise ParseError(f"{what} must be an array of message indices")
    out = []
    for v in raw:
        if not isinstance(v, int) or isinstance(v, bool):
            raise ParseError(f"{what} contains non-integer {v!r}")
        if not 1 <= v <= m:
            raise ParseError(f"{what} index {v} outside 1..{m}")
        out.append(v)
    return out


def parse_instance(text: str) -> TwoSenderInstance:
    """Parse and validate an instance document (JSON).

    The document carries q, m, per-receiver side information, the sender
    partition p1/p2/p12 and the eavesdropper sets.  When all three partition
    keys are absent the instance degenerates to a single sender holding
    everything (p1 = 1..m).  Unknown keys are rejected.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"instance document is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError("instance document must be a JSON object")
    unknown = set(obj) - _INSTANCE_KEYS
    if unknown:
        raise ParseError(f"unknown keys in instance document: {sorted(unknown)}")
    for key in ("q", "m", "side_info", "eavesdroppers"):
        if key not in obj:
            raise ParseError(f"instance document is missing required key {key!r}")

    if not isinstance(obj["m"], int) or isinstance(obj["m"], bool) or obj["m"] < 1:
        raise ParseError("m must be a positive integer")
    m = obj["m"]
    try:
        q = FieldOrder(obj["q"])
    except ValueError as exc:
        raise ParseError(str(exc)) from exc

    raw_side = obj["side_info"]
    if not isinstance(raw_side, list) or len(raw_side) != m:
        raise ParseError(f"side_info must be an array of exactly {m} arrays")
    side_lists = []
    for i, entry in enumerate(raw_side, start=1):
        ks = _index_list(entry, f"side_info[{i}]", m)
        if i in ks:
            raise ParseError(f"receiver {i} lists its own message as side information")
        side_lists.append(ks)

    if any(k in obj for k in ("p1", "p2", "p12")):
        blocks = {
            name: frozenset(_index_list(obj.get(name, []), name, m))
            for name in ("p1", "p2", "p12")
        }
    else:
        blocks = {"p1": frozenset(range(1, m + 1)), "p2": frozenset(), "p12": frozenset()}
    for a, b in (("p1", "p2"), ("p1", "p12"), ("p2", "p12")):
        overlap = blocks[a] & blocks[b]
        if overlap:
            raise ParseError(f"{a} and {b} overlap on {sorted(overlap)}")
    covered = blocks["p1"] | blocks["p2"] | blocks["p12"]
    if covered != frozenset(range(1, m + 1)):
        missing = sorted(set(range(1, m + 1)) - covered)
        raise ParseError(f"sender partition does not cover messages {missing}")

    raw_eaves = obj["eavesdroppers"]
    if not isinstance(raw_eaves, list) or not raw_eaves:
        raise ParseError("eavesdroppers must be a non-empty array of index arrays")
    eaves_sets = []
    for k, entry in enumerate(raw_eaves, start=1):
        a = frozenset(_index_list(entry, f"eavesdroppers[{k}]", m))
        if len(a) == m:
            raise ParseError(f"eavesdroppers[{k}] contains every message")
        eaves_sets.append(a)

    return TwoSenderInstance(
        q=q,
        digraph=SideInfoDigraph.from_lists(m, side_lists),
        partition=SenderPartition(blocks["p1"], blocks["p2"], blocks["p12"]),
        eaves=EavesdropperSpec(tuple(eaves_sets)),
    )


def canonical_obj(inst: TwoSenderInstance) -> dict:
    """Canonical JSON-ready form of an instance (stable ordering throughout)."""
    return {
        "q": int(inst.q),
        "m": inst.m,
        "side_info": [sorted(inst.digraph.knows(i)) for i in range(1, inst.m + 1)],
        "p1": sorted(inst.partition.p1),
        "p2": sorted(inst.partition.p2),
        "p12": sorted(inst.partition.p12),
        "eavesdroppers": [sorted(a) for a in inst.eaves.sets],
    }


# ---------------------------------------------------------------------------
# Sub-problem derivation.


def _induced(inst: TwoSenderInstance, verts: Iterable[int]) -> SingleSenderInstance:
    label_map = tuple(sorted(set(verts)))
    pos = {g: k + 1 for k, g in enumerate(label_map)}
    keep = frozenset(label_map)
    side = [
        frozenset(pos[j] for j in inst.digraph.knows(g) & keep) for g in label_map
    ]
    eaves = tuple(frozenset(pos[j] for j in a & keep) for a in inst.eaves.sets)
    return SingleSenderInstance(
        q=inst.q,
        digraph=SideInfoDigraph(len(label_map), tuple(side)),
        eaves=EavesdropperSpec(eaves),
        label_map=label_map,
    )


def sub_instance(inst: TwoSenderInstance, block: str) -> SingleSenderInstance:
    """Single-sender sub-problem induced on partition block '1', '2' or '12'.

    Side information and eavesdropper sets are intersected with the block and
    relabelled; an empty block yields an empty sub-problem.
    """
    return _induced(inst, inst.partition.block(block))


def tilde_split(
    inst: TwoSenderInstance, part1: Iterable[int]
) -> tuple[SingleSenderInstance, SingleSenderInstance]:
    """Split the common block between the senders and induce the two merged sub-problems.

    part1 names the common messages handed to sender 1's side; the rest go to
    sender 2's side.  Swapping part1 for its complement swaps the results.
    """
    chosen = frozenset(int(j) for j in part1)
    if not chosen <= inst.partition.p12:
        extra = sorted(chosen - inst.partition.p12)
        raise InvalidPartition(f"messages {extra} are not in the common block")
    left = inst.partition.p1 | chosen
    right = inst.partition.p2 | (inst.partition.p12 - chosen)
    return _induced(inst, left), _induced(inst, right)


def drop_common_messages(inst: TwoSenderInstance) -> tuple[TwoSenderInstance, tuple[int, ...]]:
    """Instance with the common block deleted, plus the label map of survivors.

    Receivers of common messages disappear; everyone else loses the deleted
    messages from their side information, and eavesdropper sets are
    intersected with the survivors.  Useful as the reduction target when the
    eavesdropper is known to hold the whole common block.
    """
    keep = sorted(inst.partition.p1 | inst.partition.p2)
    if not keep:
        raise ValueError("cannot drop the common block: no exclusive messages remain")
    pos = {g: k + 1 for k, g in enumerate(keep)}
    keep_set = frozenset(keep)
    side = [frozenset(pos[j] for j in inst.digraph.knows(g) & keep_set) for g in keep]
    eaves = tuple(frozenset(pos[j] for j in a & keep_set) for a in inst.eaves.sets)
    reduced = TwoSenderInstance(
        q=inst.q,
        digraph=SideInfoDigraph(len(keep), tuple(side)),
        partition=SenderPartition(
            frozenset(pos[g] for g in inst.partition.p1),
            frozenset(pos[g] for g in inst.partition.p2),
            frozenset(),
        ),
        eaves=EavesdropperSpec(eaves),
    )
    return reduced, tuple(keep)
