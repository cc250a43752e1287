"""Exact 2x2 integer matrices, their reductions mod p, and free words over {a, b}.

Words are plain strings over the alphabet ``aAbB``: lowercase letters stand
for the Sanov generators A = [[1,2],[0,1]] and B = [[1,0],[2,1]], uppercase
letters for their inverses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

ALPHABET = "aAbB"
POSITIVE = "ab"

# Smallest constant with ||gh|| <= ETA * ||g|| * ||h|| for the max-entry norm.
ETA = 2


@dataclass(frozen=True, order=True)
class ExactMatrix:
    """A 2x2 integer matrix of determinant +1 or -1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c not in (1, -1):
            raise ValueError(f"determinant of {self.rows()} is not +-1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def is_sl(self) -> bool:
        return self.det == 1

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "ExactMatrix":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.a, self.c, self.b, self.d)

    def is_symmetric(self) -> bool:
        return self.b == self.c

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return mul(self, other)

    def __str__(self) -> str:
        return str(self.rows())


I = ExactMatrix(1, 0, 0, 1)
A = ExactMatrix(1, 2, 0, 1)
B = ExactMatrix(1, 0, 2, 1)
J = ExactMatrix(0, 1, 1, 0)


def mul(x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
    return ExactMatrix(
        x.a * y.a + x.b * y.c,
        x.a * y.b + x.b * y.d,
        x.c * y.a + x.d * y.c,
        x.c * y.b + x.d * y.d,
    )


def inv(x: ExactMatrix) -> ExactMatrix:
    # adjugate divided by det, and det is its own inverse
    s = x.det
    return ExactMatrix(s * x.d, -s * x.b, -s * x.c, s * x.a)


def sigma(x: ExactMatrix) -> ExactMatrix:
    """Inverse transpose."""
    return inv(x).transpose()


def tau(x: ExactMatrix) -> ExactMatrix:
    """Conjugation by the antidiagonal involution J."""
    return ExactMatrix(x.d, x.c, x.b, x.a)


def inf_norm(x: ExactMatrix) -> int:
    return max(abs(x.a), abs(x.b), abs(x.c), abs(x.d))


def eta_check(g: ExactMatrix, h: ExactMatrix) -> bool:
    return inf_norm(mul(g, h)) <= ETA * inf_norm(g) * inf_norm(h)


# --- free words -------------------------------------------------------------

LETTER_MATRIX = {"a": A, "A": inv(A), "b": B, "B": inv(B)}

_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}
# sigma(A) = B^-1, sigma(B) = A^-1; tau swaps A and B (and equals transpose on S)
_SIGMA = {"a": "B", "A": "b", "b": "A", "B": "a"}
_TAU = {"a": "b", "A": "B", "b": "a", "B": "A"}


def _check_letters(w: str) -> None:
    bad = set(w) - set(ALPHABET)
    if bad:
        raise ValueError(f"word {w!r} has letters outside {ALPHABET!r}: {sorted(bad)}")


def letter_inverse(s: str) -> str:
    return _INVERSE[s]


def letter_sigma(s: str) -> str:
    return _SIGMA[s]


def letter_tau(s: str) -> str:
    return _TAU[s]


def is_reduced(w: str) -> bool:
    _check_letters(w)
    return all(_INVERSE[x] != y for x, y in zip(w, w[1:]))


def reduce_word(w: str) -> str:
    """Free reduction (cancel adjacent letter/inverse pairs until none remain)."""
    _check_letters(w)
    out: list[str] = []
    for s in w:
        if out and out[-1] == _INVERSE[s]:
            out.pop()
        else:
            out.append(s)
    return "".join(out)


def invert_word(w: str) -> str:
    return "".join(_INVERSE[s] for s in reversed(w))


def sigma_word(w: str) -> str:
    return "".join(_SIGMA[s] for s in w)


def tau_word(w: str) -> str:
    return "".join(_TAU[s] for s in w)


def eval_word(w: str) -> ExactMatrix:
    """Evaluate a reduced word under a -> A, b -> B."""
    if not is_reduced(w):
        raise ValueError(f"word {w!r} is not reduced")
    g = I
    for s in w:
        g = mul(g, LETTER_MATRIX[s])
    return g


# --- reduction mod p ----------------------------------------------------------


@dataclass(frozen=True)
class ModMatrix:
    """A 2x2 matrix over Z/pZ with canonical residues in [0, p)."""

    p: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        for v in (self.a, self.b, self.c, self.d):
            if not 0 <= v < self.p:
                raise ValueError(f"residue {v} outside [0, {self.p})")

    @classmethod
    def of(cls, p: int, a: int, b: int, c: int, d: int) -> "ModMatrix":
        return cls(p, a % p, b % p, c % p, d % p)

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.p

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def encode(self) -> int:
        p = self.p
        return ((self.a * p + self.b) * p + self.c) * p + self.d

    @classmethod
    def decode(cls, p: int, code: int) -> "ModMatrix":
        code, d = divmod(code, p)
        code, c = divmod(code, p)
        a, b = divmod(code, p)
        if a >= p:
            raise ValueError(f"code out of range for p={p}")
        return cls(p, a, b, c, d)

    def is_identity(self) -> bool:
        return self.entries() == (1, 0, 0, 1)

    def __matmul__(self, other: "ModMatrix") -> "ModMatrix":
        if other.p != self.p:
            raise ValueError("moduli differ")
        p = self.p
        return ModMatrix(
            p,
            (self.a * other.a + self.b * other.c) % p,
            (self.a * other.b + self.b * other.d) % p,
            (self.c * other.a + self.d * other.c) % p,
            (self.c * other.b + self.d * other.d) % p,
        )

    def inverse(self) -> "ModMatrix":
        p = self.p
        s = pow(self.det, -1, p)
        return ModMatrix.of(p, s * self.d, -s * self.b, -s * self.c, s * self.a)


def reduce_mod(x: ExactMatrix, p: int) -> ModMatrix:
    return ModMatrix.of(p, x.a, x.b, x.c, x.d)
