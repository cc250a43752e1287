"""Cayley graphs of SL2(F_p) and G(p) = {det = +-1}: component size and girth.

Group elements are packed as ``((a*p + b)*p + c)*p + d`` in the breadth-first
searches.  Generator inverses are tracked by index so that non-backtracking
is decided on the formal generators, not on their residues; a relation is a
cyclically non-backtracking index sequence whose product is I mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numba import njit

from .exact2 import J, ModMatrix, inv, mul, reduce_mod, tau
from .forge import GeneratorSet

DEFAULT_BUDGET = 1 << 30  # bytes


class MemoryBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CayleySpec:
    p: int
    generators: tuple[ModMatrix, ...]
    inverse: tuple[int, ...]
    labels: tuple[str, ...] = ()
    bipartite_gl: bool = False

    def __post_init__(self) -> None:
        k = len(self.generators)
        if len(self.inverse) != k:
            raise ValueError("inverse table has the wrong length")
        for i, j in enumerate(self.inverse):
            if not 0 <= j < k or self.inverse[j] != i:
                raise ValueError("inverse table is not an involution")
            if not (self.generators[i] @ self.generators[j]).is_identity():
                raise ValueError(f"generator {j} is not the inverse of generator {i} mod {self.p}")
        want = self.p - 1 if self.bipartite_gl else 1
        for g in self.generators:
            if g.p != self.p:
                raise ValueError(f"generator modulus {g.p} differs from p = {self.p}")
            if g.det != want % self.p:
                raise ValueError(f"generator {g.entries()} has determinant {g.det} mod {self.p}")

    @property
    def degree(self) -> int:
        return len(self.generators)

    @property
    def injective(self) -> bool:
        keys = [g.entries() for g in self.generators]
        return len(set(keys)) == len(keys) and (1, 0, 0, 1) not in keys

    @classmethod
    def from_residues(cls, p: int, generators: Sequence[ModMatrix], bipartite_gl: bool = False) -> "CayleySpec":
        """Pair generators with their inverses mod p (requires distinct residues)."""
        keys = {g.entries(): i for i, g in enumerate(generators)}
        if len(keys) != len(generators):
            raise ValueError("residues are not distinct; inverse pairing is ambiguous")
        try:
            inverse = tuple(keys[g.inverse().entries()] for g in generators)
        except KeyError:
            raise ValueError("generator set is not closed under inverses mod p") from None
        return cls(p, tuple(generators), inverse, (), bipartite_gl)


@dataclass(frozen=True)
class GirthResult:
    girth: int
    witness: tuple[int, ...]
    component_size: Optional[int] = None
    degenerate: bool = False


def _formal_inverse_table(mats) -> tuple[int, ...]:
    index = {m: i for i, m in enumerate(mats)}
    try:
        return tuple(index[inv(m)] for m in mats)
    except KeyError:
        raise ValueError("generator set is not closed under inverses") from None


def cayley_spec(W: GeneratorSet, p: int) -> CayleySpec:
    mats = W.matrices
    return CayleySpec(
        p,
        tuple(reduce_mod(m, p) for m in mats),
        _formal_inverse_table(mats),
        tuple(r.word for r in W.records),
    )


def build_gl_spec(W: GeneratorSet, p: int) -> CayleySpec:
    """Generators w*J for w in W; the inverse of wJ is tau(w^-1) J."""
    mats = W.matrices
    index = {m: i for i, m in enumerate(mats)}
    if {tau(m) for m in mats} != set(index):
        raise ValueError("generator set is not tau-invariant")
    inverse = tuple(index[tau(inv(m))] for m in mats)
    gens = tuple(reduce_mod(mul(m, J), p) for m in mats)
    labels = tuple(f"{r.word}J" for r in W.records)
    return CayleySpec(p, gens, inverse, labels, bipartite_gl=True)


def check_injective(W: GeneratorSet, p: int) -> bool:
    residues = [reduce_mod(m, p).entries() for m in W.matrices]
    return len(set(residues)) == len(residues) and (1, 0, 0, 1) not in residues


def evaluate_witness(spec: CayleySpec, witness: Sequence[int]) -> ModMatrix:
    g = ModMatrix(spec.p, 1, 0, 0, 1)
    for i in witness:
        g = g @ spec.generators[i]
    return g


def is_cyclically_reduced(spec: CayleySpec, witness: Sequence[int]) -> bool:
    k = len(witness)
    if k == 1:
        return True
    return all(spec.inverse[witness[i]] != witness[(i + 1) % k] for i in range(k))


# --- shortest relation by breadth-first search ----------------------------------


def _shortest_relation(spec: CayleySpec, even: bool) -> GirthResult:
    """Girth of Cay(G, S) (or of Cay(G x Z/2, S x {1}) when ``even``).

    Rooted at the identity (Cayley graphs are vertex transitive).  Each
    non-tree edge (u, v) met while expanding layer k closes a walk of length
    dist(u) + dist(v) + 1; the minimum over all such edges is the girth, and
    once it is <= 2k + 1 no later layer can improve it.
    """
    p = spec.p
    gens = [g.entries() for g in spec.generators]
    inverse = spec.inverse
    flip = 1 if even else 0
    root = ((1 * p + 0) * p + 0) * p + 1
    root = root * 2 if even else root
    dist = {root: 0}
    parent: dict[int, tuple[int, int]] = {}
    frontier = [root]
    best = None
    k = 0
    while frontier:
        if best is not None and best[0] <= 2 * k + 1:
            break
        nxt = []
        for u in frontier:
            via = parent.get(u)
            back = inverse[via[1]] if via is not None else -1
            if even:
                code, par = divmod(u, 2)
            else:
                code, par = u, 0
            code, d = divmod(code, p)
            code, c = divmod(code, p)
            a, b = divmod(code, p)
            for i, (g0, g1, g2, g3) in enumerate(gens):
                if i == back:
                    continue
                v = (
                    (((a * g0 + b * g2) % p * p + (a * g1 + b * g3) % p) * p + (c * g0 + d * g2) % p) * p
                    + (c * g1 + d * g3) % p
                )
                if even:
                    v = v * 2 + (par ^ flip)
                dv = dist.get(v)
                if dv is None:
                    dist[v] = k + 1
                    parent[v] = (u, i)
                    nxt.append(v)
                else:
                    length = k + dv + 1
                    if best is None or length < best[0]:
                        best = (length, u, i, v)
        frontier = nxt
        k += 1
    if best is None:
        # the whole (finite) component is a tree: impossible for a group with a generator
        raise AssertionError("no cycle found in a finite Cayley graph")
    length, u, i, v = best
    witness = _path_to(parent, u) + [i] + [inverse[j] for j in reversed(_path_to(parent, v))]
    return GirthResult(length, tuple(witness), None, degenerate=not spec.injective or length <= 2)


def _path_to(parent: dict[int, tuple[int, int]], v: int) -> list[int]:
    out = []
    while v in parent:
        v, i = parent[v]
        out.append(i)
    out.reverse()
    return out


def girth_bfs(spec: CayleySpec) -> GirthResult:
    return _shortest_relation(spec, even=False)


def even_girth_bfs(spec: CayleySpec) -> GirthResult:
    """Shortest even-length cyclically reduced relation."""
    return _shortest_relation(spec, even=True)


def even_girth(spec: CayleySpec) -> int:
    return even_girth_bfs(spec).girth


# --- exhaustive oracle -----------------------------------------------------------


def girth_oracle(spec: CayleySpec, max_len: int, even: bool = False) -> Optional[GirthResult]:
    """Enumerate cyclically reduced words by increasing length; first relation wins."""
    gens = np.array([g.entries() for g in spec.generators], dtype=np.int64).reshape(-1, 4)
    inverse = np.array(spec.inverse, dtype=np.int64)
    for length in range(1, max_len + 1):
        if even and length % 2:
            continue
        word = np.zeros(length, np.int64)
        if _search_words(spec.p, gens, inverse, length, word):
            return GirthResult(length, tuple(int(i) for i in word), None, degenerate=not spec.injective or length <= 2)
    return None


@njit(cache=True)
def _search_words(p, gens, inverse, length, word):
    # depth-first over non-backtracking words with running prefix products
    k = gens.shape[0]
    prod = np.empty((length + 1, 4), np.int64)
    prod[0, 0], prod[0, 1], prod[0, 2], prod[0, 3] = 1, 0, 0, 1
    nxt = np.zeros(length + 1, np.int64)
    depth = 0
    while depth >= 0:
        if depth == length:
            m = prod[depth]
            if m[0] == 1 and m[1] == 0 and m[2] == 0 and m[3] == 1:
                if length == 1 or inverse[word[length - 1]] != word[0]:
                    return True
            depth -= 1
            continue
        i = nxt[depth]
        if depth > 0 and i < k and i == inverse[word[depth - 1]]:
            i += 1
        if i >= k:
            nxt[depth] = 0
            depth -= 1
            continue
        nxt[depth] = i + 1
        word[depth] = i
        m = prod[depth]
        g = gens[i]
        prod[depth + 1, 0] = (m[0] * g[0] + m[1] * g[2]) % p
        prod[depth + 1, 1] = (m[0] * g[1] + m[1] * g[3]) % p
        prod[depth + 1, 2] = (m[2] * g[0] + m[3] * g[2]) % p
        prod[depth + 1, 3] = (m[2] * g[1] + m[3] * g[3]) % p
        depth += 1
    return False


# --- closure walk ------------------------------------------------------------------


@njit(cache=True)
def _closure_walk(p, gens, gl, seen, queue):
    psq = p * p
    n_sl = p * psq - p
    head_a = (p - 1) * psq
    inv_tab = np.zeros(p, np.int64)
    for x in range(1, p):
        y = 1
        e = p - 2
        base = x
        while e > 0:
            if e & 1:
                y = y * base % p
            base = base * base % p
            e >>= 1
        inv_tab[x] = y
    split = gl and p > 2
    n_total = 2 * n_sl if split else n_sl

    # identity: a = 1, b = c = 0
    seen[0] = 1  # bit 0 of byte 0
    queue[0] = 0
    head = 0
    tail = 1
    ngen = gens.shape[0]
    while head < tail:
        idx = queue[head]
        head += 1
        neg = False
        if idx >= n_sl:
            neg = True
            idx -= n_sl
        if idx < head_a:
            a = idx // psq + 1
            b = (idx // p) % p
            c = idx % p
            d = (1 + b * c) % p * inv_tab[a] % p
        else:
            r = idx - head_a
            a = 0
            b = r // p + 1
            d = r % p
            c = (p - inv_tab[b]) % p
        if neg:
            # stored as m * diag(1, -1)
            b = (p - b) % p
            d = (p - d) % p
        for t in range(ngen):
            g0 = gens[t, 0]
            g1 = gens[t, 1]
            g2 = gens[t, 2]
            g3 = gens[t, 3]
            na = (a * g0 + b * g2) % p
            nb = (a * g1 + b * g3) % p
            nc = (c * g0 + d * g2) % p
            nd = (c * g1 + d * g3) % p
            off = 0
            if split and (na * nd - nb * nc) % p != 1:
                off = n_sl
                nb = (p - nb) % p
                nd = (p - nd) % p
            if na != 0:
                j = (na - 1) * psq + nb * p + nc
            else:
                j = head_a + (nb - 1) * p + nd
            j += off
            byte = j >> 3
            bit = np.uint8(1 << (j & 7))
            if seen[byte] & bit == 0:
                seen[byte] |= bit
                queue[tail] = j
                tail += 1
                if tail == n_total:
                    return tail
    return tail


def ambient_order(p: int, gl: bool = False) -> int:
    n = p**3 - p
    return 2 * n if gl and p > 2 else n


def closure_bytes(p: int, gl: bool = False) -> int:
    n = ambient_order(p, gl)
    return (n + 7) // 8 + n * (4 if n < 2**31 else 8)


def component_size(spec: CayleySpec, budget: int = DEFAULT_BUDGET) -> int:
    """Order of the subgroup generated mod p, by a full closure walk from I."""
    p = spec.p
    need = closure_bytes(p, spec.bipartite_gl)
    if need > budget:
        raise MemoryBudgetExceeded(f"closure walk mod {p} needs {need} bytes, budget is {budget}")
    n = ambient_order(p, spec.bipartite_gl)
    seen = np.zeros((n + 7) // 8, np.uint8)  # bitset
    queue = np.empty(n, np.int32 if n < 2**31 else np.int64)
    # inverses are positive powers in a finite group: one generator per inverse pair suffices
    half = [g.entries() for i, g in enumerate(spec.generators) if i <= spec.inverse[i]]
    gens = np.array(half, dtype=np.int64).reshape(-1, 4)
    return int(_closure_walk(p, gens, spec.bipartite_gl, seen, queue))
