"""Symmetric free generating sets W_R built from the norm ball of the Sanov tree.

The ball Omega_R = {g in <A, B> : ||g|| <= R} spans a subtree of the 4-regular
Cayley tree of <A, B>.  Every boundary slot (g, s) with gs outside the ball is
paired with (sigma(g), sigma(s)); each pair gets a fresh vertex v and the two
edges g -s-> v -s^T-> sigma(g).  The loop through a slot reads
(gs)(gs)^T, and the partner slot reads its inverse.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from . import labeled
from .exact2 import (
    ALPHABET,
    ETA,
    I,
    LETTER_MATRIX,
    ExactMatrix,
    eval_word,
    inf_norm,
    inv,
    invert_word,
    letter_inverse,
    letter_sigma,
    letter_tau,
    mul,
    reduce_mod,
    reduce_word,
    sigma,
    sigma_word,
    tau,
)


@dataclass(frozen=True)
class OmegaSet:
    radius: int
    words: tuple[str, ...]
    matrices: tuple[ExactMatrix, ...]

    def __len__(self) -> int:
        return len(self.words)

    def index(self) -> dict[ExactMatrix, int]:
        return {m: i for i, m in enumerate(self.matrices)}


@dataclass(frozen=True)
class BoundarySlot:
    g_word: str
    letter: str

    @property
    def g(self) -> ExactMatrix:
        return eval_word(self.g_word)

    def partner(self) -> "BoundarySlot":
        return BoundarySlot(sigma_word(self.g_word), letter_sigma(self.letter))


@dataclass(frozen=True)
class GenRecord:
    word: str
    matrix: ExactMatrix
    slot: Optional[BoundarySlot] = None


@dataclass
class GeneratorSet:
    radius: Optional[int]
    records: list[GenRecord]
    omega_size: Optional[int] = None
    eta: int = ETA
    graph: Optional[labeled.LabeledGraph] = field(default=None, repr=False, compare=False)

    @property
    def matrices(self) -> list[ExactMatrix]:
        return [r.matrix for r in self.records]

    @property
    def size(self) -> int:
        return len(self.records)

    @property
    def max_norm(self) -> int:
        return max(inf_norm(m) for m in self.matrices)

    def to_json(self) -> str:
        doc = {
            "radius": self.radius,
            "eta": self.eta,
            "max_norm": self.max_norm,
            "size": self.size,
            "generators": [
                {
                    "word": r.word,
                    "matrix": r.matrix.rows(),
                    "slot": None if r.slot is None else {"g_word": r.slot.g_word, "letter": r.slot.letter},
                }
                for r in self.records
            ],
        }
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "GeneratorSet":
        doc = json.loads(text)
        records = []
        for entry in doc["generators"]:
            slot = entry.get("slot")
            records.append(
                GenRecord(
                    entry["word"],
                    ExactMatrix.from_rows(entry["matrix"]),
                    None if slot is None else BoundarySlot(slot["g_word"], slot["letter"]),
                )
            )
        return cls(doc.get("radius"), records, None, doc.get("eta", ETA))


def _children(word: str, g: ExactMatrix):
    last = word[-1] if word else None
    for s in ALPHABET:
        if last is not None and s == letter_inverse(last):
            continue
        yield word + s, mul(g, LETTER_MATRIX[s])


def enum_omega(R: int, cross_check: Optional[bool] = None) -> OmegaSet:
    """Breadth-first enumeration of the Sanov ball of max-norm radius R.

    Branches are pruned as soon as the norm exceeds R.  With ``cross_check``
    (default for R <= 12) the result is compared against an unpruned
    enumeration run until a whole word length lies outside the ball.
    """
    R = int(R)
    if R < 1:
        raise ValueError("radius must be >= 1")
    words = [""]
    mats = [I]
    level = [("", I)]
    while level:
        nxt = []
        for w, g in level:
            for w2, g2 in _children(w, g):
                if inf_norm(g2) <= R:
                    nxt.append((w2, g2))
        for w, g in nxt:
            words.append(w)
            mats.append(g)
        level = nxt
    omega = OmegaSet(R, tuple(words), tuple(mats))
    _check_prefix_closed(omega)
    if cross_check is None:
        cross_check = R <= 12
    if cross_check:
        brute = _omega_unpruned(R)
        if brute != set(zip(words, mats)):
            raise AssertionError(f"pruned ball enumeration disagrees with unpruned one at R={R}")
    return omega


def _check_prefix_closed(omega: OmegaSet) -> None:
    present = set(omega.words)
    if len(present) != len(omega.words) or len(set(omega.matrices)) != len(omega.matrices):
        raise AssertionError("ball enumeration produced duplicates")
    for w in omega.words:
        if w and w[:-1] not in present:
            raise AssertionError(f"ball is not prefix closed at {w!r}")


def _omega_unpruned(R: int) -> set[tuple[str, ExactMatrix]]:
    found = {("", I)}
    level = [("", I)]
    while True:
        level = [child for w, g in level for child in _children(w, g)]
        inside = [(w, g) for w, g in level if inf_norm(g) <= R]
        if not inside:
            return found
        found.update(inside)


def boundary_slots(V: OmegaSet) -> list[BoundarySlot]:
    members = set(V.matrices)
    slots = []
    for w, g in zip(V.words, V.matrices):
        for s in ALPHABET:
            if mul(g, LETTER_MATRIX[s]) not in members:
                slots.append(BoundarySlot(w, s))
    return slots


def pair_slots(slots: list[BoundarySlot]) -> list[tuple[BoundarySlot, BoundarySlot]]:
    """Match every slot with its sigma image, in order of first appearance."""
    remaining = set(slots)
    pairs = []
    for slot in slots:
        if slot not in remaining:
            continue
        mate = slot.partner()
        if mate == slot:
            raise AssertionError(f"slot {slot} is its own sigma image")
        if mate not in remaining:
            raise AssertionError(f"slot {slot} has no sigma partner among the boundary slots")
        remaining.discard(slot)
        remaining.discard(mate)
        pairs.append((slot, mate))
    return pairs


def slot_word(slot: BoundarySlot) -> str:
    """Label of the loop e ~> g -s-> v -s^T-> sigma(g) ~> e."""
    w = slot.g_word + slot.letter + letter_tau(slot.letter) + invert_word(sigma_word(slot.g_word))
    return reduce_word(w)


def slot_matrix(slot: BoundarySlot) -> ExactMatrix:
    gs = mul(slot.g, LETTER_MATRIX[slot.letter])
    return mul(gs, gs.transpose())


def _traversal_edge(u: int, v: int, letter: str) -> labeled.Edge:
    return (u, v, letter) if letter.islower() else (v, u, letter.lower())


def completed_graph(V: OmegaSet, pairs) -> labeled.LabeledGraph:
    """The ball's tree plus one new vertex and two edges per sigma pair."""
    ids = {w: i for i, w in enumerate(V.words)}
    edges = [_traversal_edge(ids[w[:-1]], ids[w], w[-1]) for w in V.words if w]
    n = len(V.words)
    for j, (slot, _) in enumerate(pairs):
        v = n + j
        g = ids[slot.g_word]
        h = ids[sigma_word(slot.g_word)]
        edges.append(_traversal_edge(g, v, slot.letter))
        edges.append(_traversal_edge(v, h, letter_tau(slot.letter)))
    return labeled.LabeledGraph(list(range(n + len(pairs))), edges, 0)


def build_genset(R: int) -> GeneratorSet:
    R = int(R)
    omega = enum_omega(R)
    slots = boundary_slots(omega)
    pairs = pair_slots(slots)
    records = []
    for slot in slots:
        word = slot_word(slot)
        m = slot_matrix(slot)
        if eval_word(word) != m:
            raise AssertionError(f"slot {slot}: word {word} does not evaluate to {m}")
        records.append(GenRecord(word, m, slot))
    records.sort(key=lambda r: r.matrix.entries())
    graph = completed_graph(omega, pairs)
    W = GeneratorSet(R, records, len(omega), ETA, graph)
    _cross_check_basis(W)
    return W


def _cross_check_basis(W: GeneratorSet) -> None:
    basis = labeled.pi1_basis(W.graph)
    mats = [eval_word(w) for w in basis]
    closure = set(mats) | {inv(m) for m in mats}
    if len(basis) != W.size // 2 or closure != set(W.matrices):
        raise AssertionError("cycle basis of the completed graph does not reproduce the generators")


# --- verification ----------------------------------------------------------


@dataclass
class VerificationReport:
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [name for name, passed in self.checks.items() if not passed]


def free_to_depth(matrices: list[ExactMatrix], depth: int) -> bool:
    """True iff no nonempty reduced word of length <= depth over the set is I.

    Such a relation exists iff two distinct reduced words of length at most
    ceil(depth / 2) share a value, so only half-length words are enumerated.
    """
    index = {m: i for i, m in enumerate(matrices)}
    if len(index) != len(matrices):
        return False
    inverse = [index.get(inv(m)) for m in matrices]
    if None in inverse:
        raise ValueError("generator set is not closed under inverses")
    half = -(-depth // 2)
    seen = {I}
    level = [(-1, I)]
    for _ in range(half):
        nxt = []
        for last, g in level:
            for i, m in enumerate(matrices):
                if last >= 0 and i == inverse[last]:
                    continue
                h = mul(g, m)
                if h in seen:
                    return False
                seen.add(h)
                nxt.append((i, h))
        level = nxt
    return True


def verify_genset(W: GeneratorSet, p: Optional[int] = None, free_depth: int = 4) -> VerificationReport:
    mats = W.matrices
    mset = set(mats)
    checks: dict[str, bool] = {}
    checks["inverse_closed"] = {inv(m) for m in mats} == mset
    checks["sigma_closed"] = {sigma(m) for m in mats} == mset
    checks["tau_closed"] = {tau(m) for m in mats} == mset
    checks["symmetric"] = all(m.is_symmetric() for m in mats)
    checks["det_one"] = all(m.det == 1 for m in mats)
    if W.radius is not None:
        checks["norm_bound"] = W.max_norm <= 18 * W.radius**2
    if W.omega_size is not None:
        checks["size"] = W.size == 2 * (W.omega_size + 1)
    checks["distinct"] = len(mset) == len(mats)
    if p is not None:
        residues = {reduce_mod(m, p).entries() for m in mats}
        checks["distinct_mod_p"] = len(residues) == len(mats)
    if free_depth > 0:
        checks["free_to_depth"] = checks["distinct"] and free_to_depth(mats, free_depth)
    for r in W.records:
        if r.word and eval_word(r.word) != r.matrix:
            checks["words_match"] = False
            break
    else:
        checks["words_match"] = True
    if W.graph is not None:
        checks["stallings"] = labeled.is_stallings(W.graph)
    return VerificationReport(checks)


def margulis_genset() -> GeneratorSet:
    records = [GenRecord(s, LETTER_MATRIX[s]) for s in ALPHABET]
    records.sort(key=lambda r: r.matrix.entries())
    return GeneratorSet(None, records, None, ETA)
