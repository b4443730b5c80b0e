"""Shared test utilities: fixture loading, random instance generation, and
small brute-force oracles kept independent of the package's linear algebra."""

from __future__ import annotations

import random
from itertools import product

from wsic import fixture_path, parse_instance
from wsic.codec import SymbolicCodeword
from wsic.gf import FieldOrder, MatrixGF
from wsic.model import (
    EavesdropperSpec,
    SenderPartition,
    SideInfoDigraph,
    SingleSenderInstance,
    TwoSenderInstance,
)


def load_fixture(name: str) -> TwoSenderInstance:
    return parse_instance(fixture_path(f"{name}.json").read_text(encoding="utf-8"))


def sup(q: int, m: int, supports) -> SymbolicCodeword:
    """GF(2)-style codeword from symbol supports, e.g. sup(2, 4, [[1, 2], [3, 4]])."""
    return SymbolicCodeword.from_supports(q, m, supports)


def random_matrix(rng: random.Random, q: int, rows: int, cols: int) -> MatrixGF:
    return MatrixGF.from_rows(
        q, [[rng.randrange(q) for _ in range(cols)] for _ in range(rows)], cols=cols
    )


# ---------------------------------------------------------------------------
# Literal decoding-vector oracle.  Deliberately free of the gf module: the
# only linear algebra here is accumulating d·G coordinate by coordinate.


def pattern_exists(rows, q: int, m: int, s, i: int) -> bool:
    """Whether some combination of rows hits coordinate i and stays inside s ∪ {i}."""
    s = set(s)
    for d in product(range(q), repeat=len(rows)):
        v = [0] * m
        for coeff, row in zip(d, rows):
            if coeff:
                for j in range(m):
                    v[j] = (v[j] + coeff * row[j]) % q
        if v[i - 1] != 0 and all(
            v[j - 1] == 0 for j in range(1, m + 1) if j != i and j not in s
        ):
            return True
    return False


def brute_decodable(rows, q: int, digraph: SideInfoDigraph) -> bool:
    return all(
        pattern_exists(rows, q, digraph.m, digraph.knows(i), i)
        for i in range(1, digraph.m + 1)
    )


def brute_secure(rows, q: int, m: int, eaves: EavesdropperSpec) -> bool:
    for a in eaves.sets:
        for i in range(1, m + 1):
            if i not in a and pattern_exists(rows, q, m, a, i):
                return False
    return True


def brute_optimal_length(inst: SingleSenderInstance, l_cap: int) -> int | None:
    """Minimum length of any decodable weakly secure code, by enumerating every matrix.

    Exponential in l_cap * m; only for the smallest instances.  None when no
    code of length up to l_cap works.
    """
    q = int(inst.q)
    m = inst.m
    for l in range(l_cap + 1):
        for flat in product(range(q), repeat=l * m):
            rows = [list(flat[r * m : (r + 1) * m]) for r in range(l)]
            if brute_decodable(rows, q, inst.digraph) and brute_secure(
                rows, q, m, inst.eaves
            ):
                return l
    return None


# ---------------------------------------------------------------------------
# Random instance generation.


def _cycle_plus_extras(rng: random.Random, members: list[int], extra: float) -> dict[int, set[int]]:
    """Directed cycle over the block plus random extra intra-block edges."""
    side: dict[int, set[int]] = {v: set() for v in members}
    if len(members) >= 2:
        order = members[:]
        rng.shuffle(order)
        for k, v in enumerate(order):
            side[v].add(order[(k + 1) % len(order)])
        for v in members:
            for w in members:
                if w != v and w not in side[v] and rng.random() < extra:
                    side[v].add(w)
    return side


def _block_eaves(rng: random.Random, blocks, m: int, a12_full: bool) -> frozenset[int]:
    """Eavesdropper set biased toward whole-block or empty-block intersections.

    Singleton blocks are always covered (an uncovered isolated receiver makes
    its sub-problem infeasible, which the construction suites filter anyway);
    the result is kept a proper subset of the messages.
    """
    p1, p2, p12 = blocks
    a: set[int] = set()
    for name, block in (("1", p1), ("2", p2), ("12", p12)):
        if not block:
            continue
        if name == "12" and a12_full:
            a |= block
            continue
        if len(block) == 1:
            a |= block
            continue
        roll = rng.random()
        if roll < 0.35:
            a |= block
        elif roll < 0.55:
            a |= {v for v in block if rng.random() < 0.5}
    if len(a) == m:
        drop_from = max((p1, p2, p12), key=len)
        a.discard(rng.choice(sorted(drop_from)))
    return frozenset(a)


def make_two_sender(
    rng: random.Random,
    sizes: tuple[int, int, int],
    q: int = 2,
    cross: str = "random",
    a12_full: bool = False,
    intra_extra: float = 0.3,
    cross_prob: float = 0.3,
) -> TwoSenderInstance:
    """Random two-sender instance with block-structured side information.

    cross selects the interaction shape: 'none', 'random', 'iib' (both
    block-1/12 and block-2/12 interactions fully participated), 'iic'
    (1/12 only), 'iid' (2/12 only), or 'full' (every cross pair known).
    Intra-block side information is a directed cycle plus extras, which
    keeps sub-problems feasible for empty or whole-block eavesdropper
    intersections.
    """
    n1, n2, n12 = sizes
    m = n1 + n2 + n12
    p1 = list(range(1, n1 + 1))
    p2 = list(range(n1 + 1, n1 + n2 + 1))
    p12 = list(range(n1 + n2 + 1, m + 1))

    side: dict[int, set[int]] = {v: set() for v in range(1, m + 1)}
    for block in (p1, p2, p12):
        for v, ks in _cycle_plus_extras(rng, block, intra_extra).items():
            side[v] |= ks

    def add_full(src: list[int], dst: list[int]) -> None:
        for v in src:
            side[v] |= set(dst)

    def add_random(src: list[int], dst: list[int], prob: float) -> None:
        for v in src:
            for w in dst:
                if rng.random() < prob:
                    side[v].add(w)

    if cross == "none":
        pass
    elif cross == "random":
        for src, dst in (
            (p1, p2), (p2, p1), (p1, p12), (p12, p1), (p2, p12), (p12, p2)
        ):
            add_random(src, dst, cross_prob)
    elif cross == "iib":
        add_full(p1, p12), add_full(p12, p1), add_full(p2, p12), add_full(p12, p2)
        add_random(p1, p2, cross_prob), add_random(p2, p1, cross_prob)
    elif cross == "iic":
        add_full(p1, p12), add_full(p12, p1)
        add_random(p2, p12, cross_prob), add_random(p12, p2, cross_prob)
        add_random(p1, p2, cross_prob), add_random(p2, p1, cross_prob)
    elif cross == "iid":
        add_full(p2, p12), add_full(p12, p2)
        add_random(p1, p12, cross_prob), add_random(p12, p1, cross_prob)
        add_random(p1, p2, cross_prob), add_random(p2, p1, cross_prob)
    elif cross == "full":
        add_full(p1, p2 + p12), add_full(p2, p1 + p12), add_full(p12, p1 + p2)
    else:
        raise ValueError(f"unknown cross pattern {cross!r}")

    a = _block_eaves(rng, (set(p1), set(p2), set(p12)), m, a12_full)
    return TwoSenderInstance(
        q=FieldOrder(q),
        digraph=SideInfoDigraph.from_lists(m, [sorted(side[v]) for v in range(1, m + 1)]),
        partition=SenderPartition(frozenset(p1), frozenset(p2), frozenset(p12)),
        eaves=EavesdropperSpec((a,)),
    )


def union_single(rng: random.Random, m1: int, m2: int, q: int = 2):
    """Disjoint union of two random single-sender instances (no cross edges)."""
    left = make_single(rng, m1, q, cyclic=True)
    right = make_single(rng, m2, q, cyclic=True)
    side = [sorted(left.digraph.knows(i)) for i in range(1, m1 + 1)]
    side += [sorted(j + m1 for j in right.digraph.knows(i)) for i in range(1, m2 + 1)]
    a = left.eaves.sets[0] | frozenset(j + m1 for j in right.eaves.sets[0])
    union = SingleSenderInstance(
        q=FieldOrder(q),
        digraph=SideInfoDigraph.from_lists(m1 + m2, side),
        eaves=EavesdropperSpec((a,)),
        label_map=tuple(range(1, m1 + m2 + 1)),
    )
    return left, right, union


def make_single(
    rng: random.Random,
    m: int,
    q: int = 2,
    density: float = 0.4,
    eaves=None,
    cyclic: bool = False,
) -> SingleSenderInstance:
    """Standalone single-sender instance (identity label map).

    cyclic=True lays a directed cycle under the random extra edges and biases
    the eavesdropper set toward empty, which keeps most draws feasible;
    the default is fully random (feasible or not).
    """
    members = list(range(1, m + 1))
    if cyclic:
        side_map = _cycle_plus_extras(rng, members, density)
        side = [sorted(side_map[v]) for v in members]
    else:
        side = [
            [j for j in members if j != i and rng.random() < density] for i in members
        ]
    if eaves is None:
        if cyclic:
            roll = rng.random()
            if roll < 0.5 or m == 1:
                a = frozenset()
            elif roll < 0.75:
                a = frozenset(members[:-1])
            else:
                a = frozenset(j for j in members if rng.random() < 0.4)
        else:
            a = frozenset(j for j in members if rng.random() < 0.3)
        if len(a) == m:
            a = frozenset(sorted(a)[:-1])
        eaves = EavesdropperSpec((a,))
    return SingleSenderInstance(
        q=FieldOrder(q),
        digraph=SideInfoDigraph.from_lists(m, side),
        eaves=eaves,
        label_map=tuple(members),
    )
