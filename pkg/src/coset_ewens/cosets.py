"""The block centralizer H <= S_2m and its double cosets.

H is the centralizer of the base involution (1 2)(3 4)...(2m-1 2m),
equivalently the group of permutations preserving the block partition
{1,2},{3,4},...,{2m-1,2m}.  Double cosets HgH are classified by
partitions of m; the classifier reads connected components off a
bipartite block-matching graph, and an independent constructive
reduction produces an even-support representative together with an
explicit certificate (h1, h2) with h1*g*h2 equal to the representative.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable

from .errors import ResourceLimitError
from .partitions import Partition
from .perm import (
    Permutation,
    compose,
    conjugate,
    cycle_string,
    disjoint_cycles,
    from_cycles,
    identity,
    inverse,
)

ENUMERATE_H_MAX_M = 8
INTERSECTION_MAX_M = 5
ORBIT_SWEEP_MAX_M = 4
WREATH_MODEL_MAX_ORDER = 10**6


def _check_degree(g: Permutation, m: int) -> None:
    if m < 1:
        raise ValueError("m must be >= 1")
    if g.n != 2 * m:
        raise ValueError(f"degree mismatch: permutation has degree {g.n}, expected {2 * m}")


def block_of(symbol: int) -> int:
    """Index (1-based) of the block {2k-1, 2k} containing ``symbol``."""
    return (symbol + 1) // 2


def base_involution(m: int) -> Permutation:
    """h0 = (1 2)(3 4)...(2m-1 2m)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return from_cycles(2 * m, [(2 * k - 1, 2 * k) for k in range(1, m + 1)])


def preserves_blocks(g: Permutation, m: int) -> bool:
    """True iff g maps every block {2k-1, 2k} onto some block."""
    _check_degree(g, m)
    for k in range(m):
        a, b = g.images[2 * k], g.images[2 * k + 1]
        if a // 2 != b // 2:
            return False
    return True


def is_in_H(g: Permutation, m: int) -> bool:
    """Membership in H, tested as centralizing the base involution.

    Agrees with :func:`preserves_blocks`; both tests are kept and
    cross-checked in the test suite.
    """
    _check_degree(g, m)
    h0 = base_involution(m)
    return conjugate(h0, g).images == h0.images


def enumerate_H(m: int) -> list[Permutation]:
    """All 2^m * m! elements of H, generated as (sign vector, block
    permutation) pairs, in a fixed deterministic order."""
    if not 1 <= m <= ENUMERATE_H_MAX_M:
        raise ResourceLimitError(
            f"enumerate_H limited to 1 <= m <= {ENUMERATE_H_MAX_M} "
            f"(|H| = 2^m m! grows too fast)"
        )
    out = []
    for sigma in itertools.permutations(range(m)):
        for signs in itertools.product((0, 1), repeat=m):
            images = [0] * (2 * m)
            for k in range(m):
                b = sigma[k]
                images[2 * k] = 2 * b + signs[k]
                images[2 * k + 1] = 2 * b + (signs[k] ^ 1)
            out.append(Permutation(tuple(images)))
    return out


def h_generators(m: int) -> list[Permutation]:
    """A small generating set of H: the first in-block swap plus adjacent
    block transpositions (all involutions)."""
    n = 2 * m
    gens = [from_cycles(n, [(1, 2)])]
    for k in range(1, m):
        gens.append(from_cycles(n, [(2 * k - 1, 2 * k + 1), (2 * k, 2 * k + 2)]))
    return gens


@dataclass(frozen=True)
class TCParts:
    """Unique factorization h = t_odd * t_even * c of an element of H.

    ``t_odd`` is supported on the odd symbols, ``t_even`` on the even
    symbols (the two commute and act as mirror images of one block
    permutation), and ``c`` is a product of in-block swaps (2k-1 2k).
    """

    t_odd: Permutation
    t_even: Permutation
    c: Permutation

    def reconstruct(self) -> Permutation:
        return compose(compose(self.t_odd, self.t_even), self.c)


def tc_decompose(h: Permutation, m: int) -> TCParts:
    """Split h in H into its block-permutation part and in-block swaps."""
    if not is_in_H(h, m):
        raise ValueError("element is not in H")
    n = 2 * m
    # c swaps block k iff h sends the even symbol 2k to an odd symbol
    swapped = [h.images[2 * k + 1] % 2 == 0 for k in range(m)]
    c = from_cycles(n, [(2 * k + 1, 2 * k + 2) for k in range(m) if swapped[k]])
    tbar = compose(h, c)  # parity-preserving block permutation
    odd_images = list(range(n))
    even_images = list(range(n))
    for k in range(m):
        odd_images[2 * k] = tbar.images[2 * k]
        even_images[2 * k + 1] = tbar.images[2 * k + 1]
    parts = TCParts(Permutation(tuple(odd_images)), Permutation(tuple(even_images)), c)
    if parts.reconstruct().images != h.images:
        raise AssertionError("TC decomposition failed to reconstruct")
    return parts


def partition_of(g: Permutation, m: int) -> Partition:
    """Class partition of HgH, read off the bipartite block-matching graph.

    One vertex per block {2k-1,2k} on one side, one per image block
    {g(2k-1),g(2k)} on the other; each symbol 1..2m is an edge joining
    the two vertices containing it.  A connected component with 2k edges
    contributes a part k.
    """
    _check_degree(g, m)
    n = 2 * m
    image_block = [0] * (n + 1)
    for j in range(m):
        image_block[g.images[2 * j] + 1] = j
        image_block[g.images[2 * j + 1] + 1] = j

    parent = list(range(2 * m))  # 0..m-1 source blocks, m..2m-1 image blocks

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for s in range(1, n + 1):
        a = find((s - 1) // 2)
        b = find(m + image_block[s])
        if a != b:
            parent[a] = b
    edges: Counter[int] = Counter()
    for s in range(1, n + 1):
        edges[find((s - 1) // 2)] += 1
    parts = []
    for root, e in edges.items():
        if e % 2 != 0:
            raise AssertionError("component with an odd number of edges")
        parts.append(e // 2)
    return Partition.from_parts(parts)


def canonical_rep(lam: Partition, m: int) -> Permutation:
    """Even-support representative of the class ``lam``: parts placed in
    descending order on consecutive blocks, part k as the ascending even
    cycle (2j 2j+2 ... 2j+2k-2)."""
    if lam.m != m:
        raise ValueError(f"partition has weight {lam.m}, expected {m}")
    cycles = []
    j = 1
    for part in lam.parts_desc():
        if part > 1:
            cycles.append(tuple(2 * (j + t) for t in range(part)))
        j += part
    return from_cycles(2 * m, cycles)


def predicted_intersection_order(lam: Partition) -> int:
    """prod over parts of (2i)^{r_i} * r_i!, the order of H i gHg^{-1}
    for any g in the class ``lam``."""
    order = 1
    for part, r in lam.counts:
        order *= (2 * part) ** r * math.factorial(r)
    return order


def double_coset_size(lam: Partition, m: int) -> int:
    """|HgH| = (2^m m!)^2 / predicted_intersection_order(lam), exactly."""
    if lam.m != m:
        raise ValueError(f"partition has weight {lam.m}, expected {m}")
    h_order = (2**m) * math.factorial(m)
    size, rem = divmod(h_order * h_order, predicted_intersection_order(lam))
    if rem:
        raise AssertionError("double coset size is not an exact division")
    return size


def intersection_subgroup(g: Permutation, m: int) -> list[Permutation]:
    """Brute-force element list of H intersect gHg^{-1} (m <= 5)."""
    _check_degree(g, m)
    if m > INTERSECTION_MAX_M:
        raise ResourceLimitError(
            f"intersection_subgroup limited to m <= {INTERSECTION_MAX_M}"
        )
    ginv = inverse(g)
    out = [h for h in enumerate_H(m) if is_in_H(conjugate(h, ginv), m)]
    out.sort(key=lambda p: p.images)
    return out


def element_order(p: Permutation) -> int:
    order = 1
    for cyc in disjoint_cycles(p):
        order = math.lcm(order, len(cyc))
    return order


def order_histogram(elements: Iterable[Permutation]) -> dict[int, int]:
    """Multiset of element orders, a cheap isomorphism-invariant fingerprint."""
    return dict(Counter(element_order(p) for p in elements))


def wreath_model(lam: Partition) -> tuple[int, dict[int, int]]:
    """Independent model of the predicted intersection group.

    For each part k the class contributes the automorphisms of a 2k-gon
    that preserve its alternating 2-coloring, acting on the polygon's 2k
    edges (a dihedral group with 2k elements); equal parts may also be
    permuted wholesale.  The group is built from those generators by
    closure and fingerprinted as (order, element-order histogram).
    """
    predicted = predicted_intersection_order(lam)
    if predicted > WREATH_MODEL_MAX_ORDER:
        raise ResourceLimitError(
            f"wreath_model limited to predicted order <= {WREATH_MODEL_MAX_ORDER}"
        )
    total = 2 * lam.m
    gens: list[tuple[int, ...]] = []
    offset = 0
    for part, r in lam.counts:
        size = 2 * part
        offsets = [offset + t * size for t in range(r)]
        ident = list(range(total))
        # rotation of the first polygon by one block step (two edges)
        rot = ident[:]
        for l in range(size):
            rot[offsets[0] + l] = offsets[0] + (l + 2) % size
        gens.append(tuple(rot))
        # color-preserving reflection of the first polygon
        refl = ident[:]
        for l in range(size):
            refl[offsets[0] + l] = offsets[0] + (-l - 1) % size
        gens.append(tuple(refl))
        if r >= 2:
            swap = ident[:]
            for l in range(size):
                swap[offsets[0] + l] = offsets[1] + l
                swap[offsets[1] + l] = offsets[0] + l
            gens.append(tuple(swap))
        if r >= 3:
            cyc = ident[:]
            for t in range(r):
                dst = offsets[(t + 1) % r]
                for l in range(size):
                    cyc[offsets[t] + l] = dst + l
            gens.append(tuple(cyc))
        offset += r * size

    ident_t = tuple(range(total))
    seen = {ident_t}
    frontier = deque([ident_t])
    while frontier:
        cur = frontier.popleft()
        for gen in gens:
            nxt = tuple(gen[v] for v in cur)
            if nxt not in seen:
                if len(seen) >= predicted:
                    raise AssertionError("wreath model exceeded the predicted order")
                seen.add(nxt)
                frontier.append(nxt)
    histogram = order_histogram(Permutation(t) for t in seen)
    return len(seen), histogram


@dataclass(frozen=True)
class OrbitClass:
    """One double coset found by the brute-force sweep."""

    lam: Partition
    size: int
    representative: Permutation


def enumerate_double_cosets(m: int) -> list[OrbitClass]:
    """Orbit partition of S_2m under (h1, h2) . g = h1 g h2 (m <= 4).

    Each orbit is checked for a constant class partition while it is
    swept; orbits are returned sorted by their partition's text form.
    """
    if not 1 <= m <= ORBIT_SWEEP_MAX_M:
        raise ResourceLimitError(
            f"enumerate_double_cosets limited to m <= {ORBIT_SWEEP_MAX_M}"
        )
    n = 2 * m
    gens = [g.images for g in h_generators(m)]
    seen: set[tuple[int, ...]] = set()
    orbits = []
    for start in itertools.permutations(range(n)):
        if start in seen:
            continue
        rep = Permutation(start)
        lam = partition_of(rep, m)
        orbit_size = 0
        queue = deque([start])
        seen.add(start)
        while queue:
            cur = queue.popleft()
            orbit_size += 1
            if partition_of(Permutation(cur), m).counts != lam.counts:
                raise AssertionError("class partition not constant on an orbit")
            for gen in gens:
                left = tuple(gen[v] for v in cur)
                if left not in seen:
                    seen.add(left)
                    queue.append(left)
                right = tuple(cur[v] for v in gen)
                if right not in seen:
                    seen.add(right)
                    queue.append(right)
        orbits.append(OrbitClass(lam, orbit_size, rep))
    orbits.sort(key=lambda o: str(o.lam))
    return orbits


# --- constructive even-support reduction -------------------------------

@dataclass(frozen=True)
class EvenSupportReduction:
    """Even-support representative with its membership certificate:
    ``left * g * right == result`` with both multipliers in H."""

    result: Permutation
    left: Permutation
    right: Permutation


def _block_swap(n: int, j: int, jp: int) -> Permutation:
    """Element of H exchanging blocks j and jp without in-block swaps."""
    return from_cycles(n, [(2 * j - 1, 2 * jp - 1), (2 * j, 2 * jp)])


def _pure_parity(cycle: tuple[int, ...]) -> bool:
    return all(s % 2 == 1 for s in cycle) or all(s % 2 == 0 for s in cycle)


def _solve_block_parities(cycles):
    """Union-find with parity over blocks: decide whether in-block swaps
    alone can recolor every cycle to a single parity.

    Returns (True, flip_set, None) or (False, None, (block_a, block_b))
    with the blocks of the first contradictory constraint.
    """
    parent: dict[int, int] = {}
    rel: dict[int, int] = {}  # parity of var relative to its parent

    def find(v):
        path = []
        root = v
        while parent[root] != root:
            path.append(root)
            root = parent[root]
        # recompute each path node's parity to the root, nearest first
        acc = 0
        for node in reversed(path):
            acc ^= rel[node]
            parent[node] = root
            rel[node] = acc
        return root, acc

    def ensure(v):
        if v not in parent:
            parent[v] = v
            rel[v] = 0

    for cyc in cycles:
        anchor = cyc[0]
        ka = block_of(anchor)
        ensure(ka)
        for s in cyc[1:]:
            ks = block_of(s)
            ensure(ks)
            want = (s % 2) ^ (anchor % 2)
            ra, pa = find(ka)
            rs, ps = find(ks)
            if ra == rs:
                if pa ^ ps != want:
                    return False, None, (ka, ks)
            else:
                parent[rs] = ra
                rel[rs] = pa ^ ps ^ want
    flips = set()
    for v in parent:
        _, p = find(v)
        if p:
            flips.add(v)
    return True, flips, None


def reduce_to_even_support(g: Permutation, m: int) -> EvenSupportReduction:
    """Rewrite g into an even-support member of HgH by certified moves.

    The schedule works on the disjoint cycles of the running element:
    cycles holding both symbols of a block are split by left-multiplying
    the in-block swap; remaining mixed-parity cycles are recolored by a
    conjugation when the block-parity constraints are solvable, and a
    blocking odd constraint loop is broken by right-multiplying a block
    exchange.  Once every cycle has a single parity, two mirror moves in
    H clear first the even part and then the odd remainder.  Every move
    is accumulated into the certificate, which is verified before
    returning.
    """
    _check_degree(g, m)
    n = 2 * m
    x = g
    left = identity(n)
    right = identity(n)

    for _ in range(8 * m + 32):
        cycles = disjoint_cycles(x)
        if all(_pure_parity(c) for c in cycles):
            break
        # split a cycle containing a full block
        split_k = None
        for cyc in cycles:
            symbols = set(cyc)
            for s in cyc:
                if s % 2 == 1 and s + 1 in symbols:
                    split_k = block_of(s)
                    break
            if split_k:
                break
        if split_k is not None:
            t = from_cycles(n, [(2 * split_k - 1, 2 * split_k)])
            x = compose(t, x)
            left = compose(t, left)
            continue
        ok, flips, conflict = _solve_block_parities(cycles)
        if ok:
            if flips:
                c = from_cycles(n, [(2 * k - 1, 2 * k) for k in sorted(flips)])
                x = compose(compose(c, x), c)
                left = compose(c, left)
                right = compose(right, c)
            continue
        j, jp = conflict
        tau = _block_swap(n, j, jp)
        x = compose(x, tau)
        right = compose(right, tau)
    else:
        raise RuntimeError("even-support reduction did not converge")

    evens_fixed = all(x.images[i] == i for i in range(1, n, 2))
    if not evens_fixed or any(x.images[i] != i for i in range(0, n, 2)):
        even_moved = [i for i in range(1, n, 2) if x.images[i] != i]
        if even_moved:
            # straight extension of the even action; clears it from x
            imgs = list(range(n))
            for i in even_moved:
                imgs[i] = x.images[i]
                imgs[i - 1] = x.images[i] - 1
            pair = inverse(Permutation(tuple(imgs)))
            x = compose(pair, x)
            left = compose(pair, left)
        if not x.is_identity():
            # x is now odd-support; mirror it away, leaving even support
            imgs = list(range(n))
            for i in range(0, n, 2):
                imgs[i] = x.images[i]
                imgs[i + 1] = x.images[i] + 1
            r = inverse(Permutation(tuple(imgs)))
            x = compose(r, x)
            left = compose(r, left)

    if any(x.images[i] != i for i in range(0, n, 2)):
        raise AssertionError("reduction result is not supported on even symbols")
    if compose(compose(left, g), right).images != x.images:
        raise AssertionError("certificate does not reproduce the representative")
    if not (is_in_H(left, m) and is_in_H(right, m)):
        raise AssertionError("certificate multipliers are not in H")
    return EvenSupportReduction(x, left, right)


@dataclass(frozen=True)
class CosetClass:
    """Classification record for one double coset."""

    lam: Partition
    predicted_order: int
    coset_size: int
    canonical: Permutation

    def to_json_dict(self) -> dict:
        return {
            "lambda": str(self.lam),
            "predicted_order": str(self.predicted_order),
            "coset_size": str(self.coset_size),
            "canonical": cycle_string(self.canonical),
        }


def coset_class(lam: Partition, m: int) -> CosetClass:
    return CosetClass(
        lam,
        predicted_intersection_order(lam),
        double_coset_size(lam, m),
        canonical_rep(lam, m),
    )
