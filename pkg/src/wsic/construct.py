"""Composition of two-sender codes from sub-problem codes.

Each scheme combines weakly secure codes of single-sender sub-problems into
a weakly secure two-sender code:

* naive:     transmit all three sub-codes unchanged (common block by S1);
* general:   split the common block between the senders, solve the two
             merged sub-problems, transmit one code each;
* iib:       both senders fold the common sub-code into their own streams,
             splitting it by length thresholds (four sub-cases);
* iic / iid: only one sender folds the common sub-code in;
* iie:       both senders fold the same prefix of the common sub-code in,
             leftover symbols transmitted separately (three sub-cases).

Every scheme re-verifies its output before returning it; a composed code is
never emitted unverified.  best_construction runs all applicable schemes and
keeps the shortest verified result.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codec import (
    LinearCode,
    SymbolicCodeword,
    assemble,
    concat_codewords,
    lift_codeword,
    pad_add,
    project_codeword,
    slice_codeword,
    verify_decodability,
    verify_weak_security,
    verify_single_sender,
)
from .errors import (
    ConstructionFailure,
    DimensionError,
    InvalidSubcode,
    PreconditionError,
    WsicError,
)
from .gf import MatrixGF
from .interaction import classify
from .model import SingleSenderInstance, TwoSenderInstance, sub_instance, tilde_split


@dataclass(frozen=True)
class SubCodeBundle:
    """Codes for the three block sub-problems, in parent (global) coordinates.

    Build through make_bundle so each sub-code is checked against its
    sub-problem; an empty block carries an empty code.
    """

    c1: SymbolicCodeword
    c2: SymbolicCodeword
    c12: SymbolicCodeword

    def lengths(self) -> tuple[int, int, int]:
        return len(self.c1), len(self.c2), len(self.c12)


def _check_subcode(
    inst: TwoSenderInstance, cw: SymbolicCodeword, sub: SingleSenderInstance, name: str
) -> None:
    if int(cw.q) != int(inst.q) or cw.m != inst.m:
        raise InvalidSubcode(f"sub-code {name} does not live in the instance's message space")
    try:
        local = project_codeword(cw, sub.label_map)
    except DimensionError as exc:
        raise InvalidSubcode(f"sub-code {name}: {exc}") from exc
    decode, security = verify_single_sender(local, sub)
    if not decode.all_decode:
        bad = [i for i, ok in enumerate(decode.per_receiver, start=1) if not ok]
        names = [sub.to_global(i) for i in bad]
        raise InvalidSubcode(f"sub-code {name} leaves receivers {names} unable to decode")
    if not security.secure:
        leaks = [
            (sorted(v.eavesdropper), sub.to_global(v.message))
            for v in security.verdicts
            if v.leaked
        ]
        raise InvalidSubcode(f"sub-code {name} is not weakly secure (leaks: {leaks})")


def make_bundle(
    inst: TwoSenderInstance,
    c1: SymbolicCodeword,
    c2: SymbolicCodeword,
    c12: SymbolicCodeword,
) -> SubCodeBundle:
    """Validate and bundle the three sub-problem codes (global coordinates)."""
    _check_subcode(inst, c1, sub_instance(inst, "1"), "c1")
    _check_subcode(inst, c2, sub_instance(inst, "2"), "c2")
    _check_subcode(inst, c12, sub_instance(inst, "12"), "c12")
    return SubCodeBundle(c1, c2, c12)


def _verified(inst: TwoSenderInstance, code: LinearCode) -> LinearCode:
    decode = verify_decodability(code, inst)
    if not decode.all_decode:
        bad = [i for i, ok in enumerate(decode.per_receiver, start=1) if not ok]
        raise ConstructionFailure(
            f"{code.provenance or 'composed'} code leaves receivers {bad} unable to decode"
        )
    security = verify_weak_security(code, inst.eaves)
    if not security.secure:
        leaks = [(sorted(v.eavesdropper), v.message) for v in security.verdicts if v.leaked]
        raise ConstructionFailure(
            f"{code.provenance or 'composed'} code is not weakly secure (leaks: {leaks})"
        )
    return code


def _require(inst: TwoSenderInstance, scheme: str) -> None:
    if not classify(inst).applicable[scheme]:
        raise PreconditionError(f"scheme {scheme} does not apply: its interactions are not all "
                                "present and fully participated")


def construct_general(
    inst: TwoSenderInstance,
    part1,
    ct1: SymbolicCodeword,
    ct2: SymbolicCodeword,
) -> LinearCode:
    """Split the common block (part1 to sender 1) and transmit one merged sub-code each.

    ct1 and ct2 must be valid codes, in global coordinates, for the two
    merged sub-problems the split induces.  Works for any interaction shape.
    """
    t1, t2 = tilde_split(inst, part1)
    _check_subcode(inst, ct1, t1, "ct1")
    _check_subcode(inst, ct2, t2, "ct2")
    tag = f"general(part1={sorted(set(int(j) for j in part1))})"
    return _verified(inst, assemble(inst, ct1, ct2, provenance=tag))


def construct_naive(inst: TwoSenderInstance, bundle: SubCodeBundle) -> LinearCode:
    """Concatenate the three sub-codes; the common one rides with sender 1."""
    s1 = concat_codewords(bundle.c1, bundle.c12)
    s2 = bundle.c2
    return _verified(inst, assemble(inst, s1, s2, provenance="naive"))


def _iib_candidates(bundle: SubCodeBundle) -> list[tuple[str, SymbolicCodeword, SymbolicCodeword]]:
    c1, c2, c12 = bundle.c1, bundle.c2, bundle.c12
    l1, l2, l12 = bundle.lengths()
    out = []
    if l12 >= l1 + l2:
        out.append(("i", pad_add(c1, slice_codeword(c12, 1, l1)),
                    pad_add(c2, slice_codeword(c12, l1 + 1, l12))))
    if l12 >= max(l1, l2):
        out.append(("ii", pad_add(c1, slice_codeword(c12, 1, l1)),
                    pad_add(c2, slice_codeword(c12, l1 + 1, l12))))
    if l12 <= l1:
        out.append(("iii", pad_add(c1, c12), c2))
    if l12 <= l2:
        out.append(("iv", c1, pad_add(c2, c12)))
    return out


def construct_iib(inst: TwoSenderInstance, bundle: SubCodeBundle) -> LinearCode:
    """Fold the common sub-code into both senders' streams.

    Requires the 1<->12 and 2<->12 interactions to exist and be fully
    participated in both directions.  The length thresholds overlap at
    equalities, so every applicable sub-case is built and the shortest
    verified one wins (ties to the lowest-numbered sub-case).
    """
    _require(inst, "iib")
    best: tuple[int, int, LinearCode] | None = None
    failures: list[str] = []
    for rank, (sub, s1, s2) in enumerate(_iib_candidates(bundle)):
        try:
            code = _verified(inst, assemble(inst, s1, s2, provenance=f"iib({sub})"))
        except WsicError as exc:
            failures.append(f"{sub}: {exc}")
            continue
        key = (code.length, rank)
        if best is None or key < (best[0], best[1]):
            best = (code.length, rank, code)
    if best is None:
        raise ConstructionFailure("no iib sub-case produced a verified code: " + "; ".join(failures))
    return best[2]


def construct_iicd(inst: TwoSenderInstance, bundle: SubCodeBundle, which: str) -> LinearCode:
    """One-sided fold of the common sub-code: 'C' folds it into sender 1, 'D' into sender 2."""
    which = which.upper()
    if which not in ("C", "D"):
        raise ValueError("which must be 'C' or 'D'")
    c1, c2, c12 = bundle.c1, bundle.c2, bundle.c12
    if which == "C":
        _require(inst, "iic")
        s1, s2, tag = pad_add(c1, c12), c2, "iic"
    else:
        _require(inst, "iid")
        s1, s2, tag = c1, pad_add(c2, c12), "iid"
    return _verified(inst, assemble(inst, s1, s2, provenance=tag))


def construct_iie(inst: TwoSenderInstance, bundle: SubCodeBundle) -> LinearCode:
    """Fold a shared prefix of the common sub-code into both senders' streams.

    Sub-case (i) applies when the sender-1 code is shortest, (ii) when the
    sender-2 code is, and (iii) otherwise; leftover common symbols ride with
    sender 1.  When the chosen prefix is the whole common sub-code the result
    coincides with sub-case (iii) and is labelled as such.
    """
    _require(inst, "iie")
    c1, c2, c12 = bundle.c1, bundle.c2, bundle.c12
    l1, l2, l12 = bundle.lengths()
    if l1 <= min(l2, l12):
        sub, prefix = "i", l1
    elif l2 <= min(l1, l12):
        sub, prefix = "ii", l2
    else:
        sub, prefix = "iii", l12
    if prefix == l12:
        sub = "iii"
        s1 = pad_add(c1, c12)
        s2 = pad_add(c2, c12)
    else:
        head = slice_codeword(c12, 1, prefix)
        tail = slice_codeword(c12, prefix + 1, l12)
        s1 = concat_codewords(pad_add(c1, head), tail)
        s2 = pad_add(c2, head)
    return _verified(inst, assemble(inst, s1, s2, provenance=f"iie({sub})"))


def concat_block_diagonal(g1: MatrixGF, g2: MatrixGF) -> MatrixGF:
    """Block-diagonal stack: g1 padded right with zeros, g2 padded left."""
    if int(g1.q) != int(g2.q):
        raise DimensionError("cannot stack matrices over different fields")
    cols = g1.cols + g2.cols
    rows = []
    for r in range(g1.rows):
        rows.append(tuple(g1.row(r)) + (0,) * g2.cols)
    for r in range(g2.rows):
        rows.append((0,) * g1.cols + tuple(g2.row(r)))
    return MatrixGF.from_rows(g1.q, rows, cols=cols)


def bundle_from_search(
    inst: TwoSenderInstance, budget: int | None = None, workers: int = 1
):
    """Search all three sub-problems for optimal sub-codes and bundle them.

    Returns (bundle_or_None, {"1": result, "2": result, "12": result},
    diagnostics); the bundle is None when any sub-problem is infeasible.
    Imported lazily from the search module to keep layering one-way.
    """
    from .search import DEFAULT_COMPLETION_BUDGET, optimal_suicp

    budget = DEFAULT_COMPLETION_BUDGET if budget is None else budget
    results = {}
    lifted = {}
    diagnostics: dict[str, str] = {}
    for name in ("1", "2", "12"):
        sub = sub_instance(inst, name)
        res = optimal_suicp(sub, budget=budget, workers=workers)
        results[name] = res
        if res.status != "OPTIMAL":
            diagnostics[f"sub-{name}"] = "no weakly secure code exists for this sub-problem"
            continue
        lifted[name] = lift_codeword(res.code, sub.label_map, inst.m)
    if diagnostics:
        return None, results, diagnostics
    bundle = make_bundle(inst, lifted["1"], lifted["2"], lifted["12"])
    return bundle, results, diagnostics


_SCHEME_ORDER = {"iib": 0, "iic": 1, "iid": 2, "iie": 3, "general": 4, "naive": 5}


def best_construction(
    inst: TwoSenderInstance,
    bundle: SubCodeBundle,
    part1_options: tuple[frozenset[int], ...] = (),
    budget: int | None = None,
    workers: int = 1,
) -> LinearCode:
    """Shortest verified code over every applicable scheme.

    The general scheme is tried with the two trivial splits of the common
    block (whole block to one sender), whose merged sub-codes come free from
    the bundle by concatenation; any further splits in part1_options get
    their merged sub-problems searched exhaustively.  Ties are broken in
    scheme order iib, iic, iid, iie, general, naive.
    """
    label = classify(inst)
    candidates: list[tuple[int, int, int, LinearCode]] = []
    diagnostics: dict[str, str] = {}

    builders = {
        "iib": lambda: construct_iib(inst, bundle),
        "iic": lambda: construct_iicd(inst, bundle, "C"),
        "iid": lambda: construct_iicd(inst, bundle, "D"),
        "iie": lambda: construct_iie(inst, bundle),
    }
    for scheme, build in builders.items():
        if not label.applicable[scheme]:
            diagnostics[scheme] = "precondition not satisfied"
            continue
        try:
            code = build()
            candidates.append((code.length, _SCHEME_ORDER[scheme], 0, code))
        except WsicError as exc:
            diagnostics[scheme] = str(exc)

    p12 = inst.partition.p12
    parts: list[frozenset[int]] = [frozenset(), frozenset(p12)]
    for extra in part1_options:
        extra = frozenset(int(j) for j in extra)
        if extra not in parts:
            parts.append(extra)
    for sub_rank, part in enumerate(parts):
        tag = f"general(part1={sorted(part)})"
        try:
            if part == frozenset():
                ct1, ct2 = bundle.c1, concat_codewords(bundle.c2, bundle.c12)
            elif part == p12:
                ct1, ct2 = concat_codewords(bundle.c1, bundle.c12), bundle.c2
            else:
                ct1, ct2 = search_tilde_codes(inst, part, budget, workers)
            code = construct_general(inst, part, ct1, ct2)
            candidates.append((code.length, _SCHEME_ORDER["general"], sub_rank, code))
        except WsicError as exc:
            diagnostics[tag] = str(exc)

    try:
        code = construct_naive(inst, bundle)
        candidates.append((code.length, _SCHEME_ORDER["naive"], 0, code))
    except WsicError as exc:
        diagnostics["naive"] = str(exc)

    if not candidates:
        raise ConstructionFailure("no applicable scheme produced a verified code", diagnostics)
    candidates.sort(key=lambda item: item[:3])
    return candidates[0][3]


def search_tilde_codes(
    inst: TwoSenderInstance, part1: frozenset[int], budget: int | None, workers: int
) -> tuple[SymbolicCodeword, SymbolicCodeword]:
    """Optimal codes (global coordinates) for the two merged sub-problems of a split."""
    from .search import DEFAULT_COMPLETION_BUDGET, optimal_suicp

    budget = DEFAULT_COMPLETION_BUDGET if budget is None else budget
    t1, t2 = tilde_split(inst, part1)
    out = []
    for name, sub in (("merged sub-problem 1", t1), ("merged sub-problem 2", t2)):
        res = optimal_suicp(sub, budget=budget, workers=workers)
        if res.status != "OPTIMAL":
            raise InvalidSubcode(f"{name} has no weakly secure code")
        out.append(lift_codeword(res.code, sub.label_map, inst.m))
    return out[0], out[1]
