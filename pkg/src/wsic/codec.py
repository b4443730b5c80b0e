"""Linear code values and the decodability / weak-security verifiers.

A symbolic codeword is an ordered list of transmitted symbols, each a
coefficient vector over the full message space; position 1 is the most
significant for the zero-padded addition and slicing combinators.  A
two-sender linear code keeps the two senders' rows separate so the block
structure (sender 1 never touches sender-2-exclusive messages and vice
versa) stays checkable, while every verifier works on the stacked matrix:
receivers and eavesdroppers see all transmissions together.

verify_weak_security decides leakage by row-space membership;
security_oracle re-decides it by literally enumerating every decoding
vector, and exists so the two can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .errors import (
    DimensionError,
    OracleBudgetError,
    ParseError,
    RangeError,
    SenderSupportError,
)
from .gf import (
    FieldOrder,
    MatrixGF,
    bit_residual,
    bit_rref,
    combination_for,
    in_extended_rowspace,
    mod_residual,
    mod_rref,
)
from .model import EavesdropperSpec, SideInfoDigraph, SingleSenderInstance, TwoSenderInstance

DEFAULT_ORACLE_BUDGET = 2**20


@dataclass(frozen=True)
class SymbolicCodeword:
    """Sequence of transmitted symbols; each symbol is a length-m coefficient vector."""

    q: FieldOrder
    m: int
    symbols: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        qq = int(self.q)
        for k, sym in enumerate(self.symbols, start=1):
            if len(sym) != self.m:
                raise DimensionError(f"symbol {k} has width {len(sym)}, expected {self.m}")
            for v in sym:
                if not 0 <= v < qq:
                    raise ValueError(f"symbol {k} entry {v} is not reduced mod {qq}")

    def __len__(self) -> int:
        return len(self.symbols)

    @staticmethod
    def empty(q: FieldOrder | int, m: int) -> "SymbolicCodeword":
        q = q if isinstance(q, FieldOrder) else FieldOrder(q)
        return SymbolicCodeword(q, m, ())

    @staticmethod
    def from_vectors(
        q: FieldOrder | int, m: int, vectors: Sequence[Sequence[int]]
    ) -> "SymbolicCodeword":
        q = q if isinstance(q, FieldOrder) else FieldOrder(q)
        return SymbolicCodeword(q, m, tuple(tuple(int(v) for v in vec) for vec in vectors))

    @staticmethod
    def from_supports(
        q: FieldOrder | int, m: int, supports: Sequence[Iterable[int]]
    ) -> "SymbolicCodeword":
        """Codeword with coefficient 1 on each listed message; handy over GF(2)."""
        vectors = []
        for sup in supports:
            vec = [0] * m
            for j in sup:
                vec[j - 1] = 1
            vectors.append(vec)
        return SymbolicCodeword.from_vectors(q, m, vectors)

    def support(self, k: int) -> frozenset[int]:
        """1-based message indices used by symbol k (1-based)."""
        return frozenset(j + 1 for j, v in enumerate(self.symbols[k - 1]) if v)

    def matrix(self) -> MatrixGF:
        return MatrixGF.from_rows(self.q, self.symbols, cols=self.m)


def pad_add(c1: SymbolicCodeword, c2: SymbolicCodeword) -> SymbolicCodeword:
    """Symbol-wise sum after zero-padding the shorter codeword at its tail."""
    if int(c1.q) != int(c2.q) or c1.m != c2.m:
        raise DimensionError("cannot add codewords over different fields or message counts")
    q = int(c1.q)
    n = max(len(c1), len(c2))
    out = []
    for k in range(n):
        a = c1.symbols[k] if k < len(c1) else (0,) * c1.m
        b = c2.symbols[k] if k < len(c2) else (0,) * c2.m
        out.append(tuple((x + y) % q for x, y in zip(a, b)))
    return SymbolicCodeword(c1.q, c1.m, tuple(out))


def slice_codeword(c: SymbolicCodeword, a: int, b: int) -> SymbolicCodeword:
    """Symbols a..b inclusive (1-based).  a > b yields the empty codeword."""
    if a < 1:
        raise RangeError(f"slice start {a} must be at least 1")
    if b > len(c):
        raise RangeError(f"slice end {b} exceeds codeword length {len(c)}")
    if a > b:
        return SymbolicCodeword(c.q, c.m, ())
    return SymbolicCodeword(c.q, c.m, c.symbols[a - 1 : b])


def concat_codewords(*parts: SymbolicCodeword) -> SymbolicCodeword:
    if not parts:
        raise ValueError("need at least one codeword to concatenate")
    first = parts[0]
    symbols: list[tuple[int, ...]] = []
    for c in parts:
        if int(c.q) != int(first.q) or c.m != first.m:
            raise DimensionError("cannot concatenate codewords over different spaces")
        symbols.extend(c.symbols)
    return SymbolicCodeword(first.q, first.m, tuple(symbols))


def lift_codeword(local: SymbolicCodeword, label_map: Sequence[int], m_global: int) -> SymbolicCodeword:
    """Re-express a sub-problem codeword in the parent's coordinates."""
    if len(label_map) != local.m:
        raise DimensionError("label map length does not match local codeword width")
    vectors = []
    for sym in local.symbols:
        vec = [0] * m_global
        for k, v in enumerate(sym):
            if v:
                vec[label_map[k] - 1] = v
        vectors.append(vec)
    return SymbolicCodeword.from_vectors(local.q, m_global, vectors)


def project_codeword(cw: SymbolicCodeword, label_map: Sequence[int]) -> SymbolicCodeword:
    """Restrict a global codeword to a block; entries outside the block must be zero."""
    keep = {g: k for k, g in enumerate(label_map)}
    vectors = []
    for idx, sym in enumerate(cw.symbols, start=1):
        vec = [0] * len(label_map)
        for j, v in enumerate(sym, start=1):
            if not v:
                continue
            if j not in keep:
                raise DimensionError(
                    f"symbol {idx} uses message {j} outside the block being projected onto"
                )
            vec[keep[j]] = v
        vectors.append(vec)
    return SymbolicCodeword.from_vectors(cw.q, len(label_map), vectors)


# ---------------------------------------------------------------------------
# Two-sender linear codes.


@dataclass(frozen=True)
class LinearCode:
    """Two-sender code: sender 1's rows stacked over sender 2's rows."""

    q: FieldOrder
    m: int
    s1_rows: MatrixGF
    s2_rows: MatrixGF
    provenance: str | None = None

    def __post_init__(self):
        for name, block in (("s1_rows", self.s1_rows), ("s2_rows", self.s2_rows)):
            if int(block.q) != int(self.q):
                raise DimensionError(f"{name} is over a different field than the code")
            if block.cols != self.m:
                raise DimensionError(f"{name} width {block.cols} does not match m={self.m}")

    @property
    def length(self) -> int:
        return self.s1_rows.rows + self.s2_rows.rows

    def stacked(self) -> MatrixGF:
        return self.s1_rows.stack(self.s2_rows)

    def sender_codeword(self, which: int) -> SymbolicCodeword:
        block = self.s1_rows if which == 1 else self.s2_rows
        return SymbolicCodeword(self.q, self.m, tuple(block.to_rows()))

    def to_doc(self) -> dict:
        doc = {
            "q": int(self.q),
            "m": self.m,
            "s1_rows": [list(r) for r in self.s1_rows.to_rows()],
            "s2_rows": [list(r) for r in self.s2_rows.to_rows()],
        }
        if self.provenance is not None:
            doc["provenance"] = self.provenance
        return doc

    @staticmethod
    def from_doc(obj: dict) -> "LinearCode":
        if not isinstance(obj, dict):
            raise ParseError("code document must be a JSON object")
        unknown = set(obj) - {"q", "m", "s1_rows", "s2_rows", "provenance"}
        if unknown:
            raise ParseError(f"unknown keys in code document: {sorted(unknown)}")
        for key in ("q", "m", "s1_rows", "s2_rows"):
            if key not in obj:
                raise ParseError(f"code document is missing required key {key!r}")
        try:
            q = FieldOrder(obj["q"])
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        m = obj["m"]
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise ParseError("m must be a positive integer")
        blocks = []
        for key in ("s1_rows", "s2_rows"):
            raw = obj[key]
            if not isinstance(raw, list):
                raise ParseError(f"{key} must be an array of rows")
            try:
                blocks.append(MatrixGF.from_rows(q, raw, cols=m))
            except (ValueError, DimensionError) as exc:
                raise ParseError(f"{key}: {exc}") from exc
        provenance = obj.get("provenance")
        if provenance is not None and not isinstance(provenance, str):
            raise ParseError("provenance must be a string when present")
        return LinearCode(q, m, blocks[0], blocks[1], provenance)


def assemble(
    inst: TwoSenderInstance,
    s1: SymbolicCodeword,
    s2: SymbolicCodeword,
    provenance: str | None = None,
) -> LinearCode:
    """Stack per-sender codewords into a two-sender code, enforcing sender supports.

    Every sender-1 symbol must stay inside the messages sender 1 holds
    (its exclusive block plus the common block), and likewise for sender 2.
    """
    for cw in (s1, s2):
        if int(cw.q) != int(inst.q) or cw.m != inst.m:
            raise DimensionError("codeword does not match the instance's field or message count")
    for which, cw, allowed in (
        (1, s1, inst.partition.sender1),
        (2, s2, inst.partition.sender2),
    ):
        for k in range(1, len(cw) + 1):
            stray = cw.support(k) - allowed
            if stray:
                j = min(stray)
                raise SenderSupportError(
                    f"sender {which} symbol {k} uses message {j}, "
                    f"which sender {which} does not hold"
                )
    return LinearCode(
        q=inst.q,
        m=inst.m,
        s1_rows=s1.matrix(),
        s2_rows=s2.matrix(),
        provenance=provenance,
    )


# ---------------------------------------------------------------------------
# Verification.


@dataclass(frozen=True)
class DecodabilityReport:
    per_receiver: tuple[bool, ...]

    @property
    def all_decode(self) -> bool:
        return all(self.per_receiver)

    def as_dict(self) -> dict:
        return {
            "per_receiver": [
                {"receiver": i, "decodes": ok}
                for i, ok in enumerate(self.per_receiver, start=1)
            ],
            "valid": self.all_decode,
        }


@dataclass(frozen=True)
class SecurityVerdict:
    eavesdropper: frozenset[int]
    message: int
    leaked: bool
    witness: tuple[int, ...] | None = None

    def as_dict(self) -> dict:
        out = {
            "eavesdropper": sorted(self.eavesdropper),
            "message": self.message,
            "verdict": "LEAKED" if self.leaked else "SECURE",
        }
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


@dataclass(frozen=True)
class SecurityReport:
    verdicts: tuple[SecurityVerdict, ...]

    @property
    def secure(self) -> bool:
        return not any(v.leaked for v in self.verdicts)

    def verdict_for(self, a: Iterable[int], i: int) -> SecurityVerdict:
        key = frozenset(a)
        for v in self.verdicts:
            if v.eavesdropper == key and v.message == i:
                return v
        raise KeyError(f"no verdict recorded for A={sorted(key)}, i={i}")

    def as_dict(self) -> dict:
        return {"secure": self.secure, "verdicts": [v.as_dict() for v in self.verdicts]}


def _extended_memberships(g: MatrixGF, a: frozenset[int]) -> dict[int, bool]:
    """For each i outside a: whether e_i is in rowspace(g) + span of a's units."""
    m = g.cols
    others = [i for i in range(1, m + 1) if i not in a]
    if int(g.q) == 2:
        rows = g.bit_rows() + [1 << (j - 1) for j in sorted(a)]
        basis, pivots = bit_rref(rows)
        return {i: bit_residual(1 << (i - 1), basis, pivots) == 0 for i in others}
    q = int(g.q)
    unit_rows = []
    for j in sorted(a):
        row = [0] * m
        row[j - 1] = 1
        unit_rows.append(row)
    basis, pivots = mod_rref([list(r) for r in g.to_rows()] + unit_rows, q)
    out = {}
    for i in others:
        target = [0] * m
        target[i - 1] = 1
        out[i] = not any(mod_residual(target, basis, pivots, q))
    return out


def decode_verdicts(g: MatrixGF, digraph: SideInfoDigraph) -> DecodabilityReport:
    """Receiver i decodes iff e_i lies in rowspace(g) extended by its side information."""
    if g.cols != digraph.m:
        raise DimensionError("matrix width does not match receiver count")
    results = [
        in_extended_rowspace(g, digraph.knows(i), i) for i in range(1, digraph.m + 1)
    ]
    return DecodabilityReport(tuple(results))


def _leak_witness(g: MatrixGF, a: frozenset[int], i: int) -> tuple[int, ...]:
    """Decoding vector d with d·g equal to e_i plus something supported inside a."""
    m = g.cols
    unit_rows = []
    for j in sorted(a):
        row = [0] * m
        row[j - 1] = 1
        unit_rows.append(row)
    stacked = g.stack(MatrixGF.from_rows(g.q, unit_rows, cols=m))
    target = [0] * m
    target[i - 1] = 1
    combo = combination_for(stacked, target)
    if combo is None:  # pragma: no cover - callers check membership first
        raise DimensionError("witness requested for a message that is not leaked")
    return combo[: g.rows]


def security_verdicts(
    g: MatrixGF, eaves: EavesdropperSpec, want_witness: bool = True
) -> SecurityReport:
    """Per-(eavesdropper set, message) leakage verdicts for a stacked matrix."""
    verdicts = []
    for a in eaves.sets:
        member = _extended_memberships(g, a)
        for i in sorted(member):
            leaked = member[i]
            witness = _leak_witness(g, a, i) if (leaked and want_witness) else None
            verdicts.append(SecurityVerdict(a, i, leaked, witness))
    return SecurityReport(tuple(verdicts))


def verify_decodability(code: LinearCode, inst: TwoSenderInstance) -> DecodabilityReport:
    """Per-receiver decodability of a two-sender code (stacked view)."""
    return decode_verdicts(code.stacked(), inst.digraph)


def verify_weak_security(code: LinearCode, eaves: EavesdropperSpec) -> SecurityReport:
    """Weak-security verdicts of a two-sender code, with witnesses for leaks."""
    return security_verdicts(code.stacked(), eaves)


def security_oracle(
    code: LinearCode, eaves: EavesdropperSpec, budget: int = DEFAULT_ORACLE_BUDGET
) -> SecurityReport:
    """Brute-force re-derivation of verify_weak_security.

    Enumerates every decoding vector d and flags (A, i) as leaked when d
    applied to the stacked matrix yields a vector with coefficient 1 on i and
    support inside A ∪ {i}.  Kept deliberately independent of the row-space
    method so the two can be compared.
    """
    return security_report_bruteforce(code.stacked(), eaves, budget)


def security_report_bruteforce(
    g: MatrixGF, eaves: EavesdropperSpec, budget: int = DEFAULT_ORACLE_BUDGET
) -> SecurityReport:
    q = int(g.q)
    l, m = g.rows, g.cols
    if q**l > budget:
        raise OracleBudgetError(
            f"oracle would enumerate {q}^{l} decoding vectors, over the budget of {budget}"
        )
    rows = g.to_rows()
    queries: list[tuple[frozenset[int], int]] = []
    for a in eaves.sets:
        for i in range(1, m + 1):
            if i not in a:
                queries.append((a, i))
    found: dict[tuple[frozenset[int], int], tuple[int, ...]] = {}
    for d in product(range(q), repeat=l):
        vec = [0] * m
        for coeff, row in zip(d, rows):
            if coeff:
                for j in range(m):
                    vec[j] = (vec[j] + coeff * row[j]) % q
        for key in queries:
            if key in found:
                continue
            a, i = key
            if vec[i - 1] != 1:
                continue
            if all(v == 0 for j, v in enumerate(vec, start=1) if j != i and j not in a):
                found[key] = d
    verdicts = []
    for a in eaves.sets:
        for i in range(1, m + 1):
            if i in a:
                continue
            witness = found.get((a, i))
            verdicts.append(SecurityVerdict(a, i, witness is not None, witness))
    return SecurityReport(tuple(verdicts))


def check_sender_support(code: LinearCode, inst: TwoSenderInstance) -> None:
    """Raise SenderSupportError when either block strays outside its sender's messages."""
    assemble(inst, code.sender_codeword(1), code.sender_codeword(2), code.provenance)


def verify_single_sender(
    cw: SymbolicCodeword, inst: SingleSenderInstance
) -> tuple[DecodabilityReport, SecurityReport]:
    """Decodability and security of a codeword for a (local-coordinates) sub-problem."""
    if cw.m != inst.m or int(cw.q) != int(inst.q):
        raise DimensionError("codeword does not match the sub-problem's space")
    g = cw.matrix()
    return decode_verdicts(g, inst.digraph), security_verdicts(g, inst.eaves)
