"""k-uniform set families on [n] with exact matching and covering solvers.

Vertices are 1-based integers.  Edges are stored canonically: sorted within
each edge, edges sorted lexicographically, duplicates removed.  Every edge
also carries a bit mask (bit v-1 set for vertex v) so disjointness and
incidence tests are single integer operations.

Conventions for degenerate inputs: the empty family has matching number 0
and covering number 0 and counts as trivial.  A 0-uniform family (which can
arise from a full-edge link) holds at most the single empty edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import OverlapError, SizeError

MAX_VERTICES = 1024

# candidate lists at least this long use the vectorized disjointness filter
_NP_FILTER_MIN = 256


@dataclass(frozen=True)
class Matching:
    """A set of pairwise disjoint edges, stored as sorted edge tuples."""

    edges: tuple

    def vertices(self):
        out = set()
        for e in self.edges:
            out.update(e)
        return tuple(sorted(out))

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class Cover:
    """A vertex set meeting every edge of some family."""

    vertices: tuple

    def __len__(self):
        return len(self.vertices)


def _edge_mask(edge):
    m = 0
    for v in edge:
        m |= 1 << (v - 1)
    return m


class Family:
    """Immutable k-uniform family of subsets of [n]."""

    __slots__ = ("n", "k", "edges", "masks", "_np_masks", "_mask_index")

    def __init__(self, n, k, edges):
        if not (0 <= n <= MAX_VERTICES):
            raise ValueError(f"n must be in [0, {MAX_VERTICES}], got {n}")
        if k < 0:
            raise ValueError("k must be >= 0")
        if k > n and any(True for _ in edges):
            raise ValueError(f"k={k} exceeds n={n} but edges were given")
        canon = set()
        for e in edges:
            t = tuple(sorted(e))
            if len(t) != k:
                raise ValueError(f"edge {t} is not {k}-uniform")
            if len(set(t)) != k:
                raise ValueError(f"edge {t} has repeated vertices")
            if t and (t[0] < 1 or t[-1] > n):
                raise ValueError(f"edge {t} leaves the vertex range [1, {n}]")
            canon.add(t)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        object.__setattr__(self, "masks", tuple(_edge_mask(e) for e in self.edges))
        object.__setattr__(self, "_np_masks", None)
        object.__setattr__(self, "_mask_index", None)

    @classmethod
    def _from_canonical(cls, n, k, edges, masks=None):
        """Trusted constructor: edges already sorted, uniform, deduplicated."""
        self = cls.__new__(cls)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "edges", tuple(edges))
        if masks is None:
            masks = tuple(_edge_mask(e) for e in self.edges)
        object.__setattr__(self, "masks", tuple(masks))
        object.__setattr__(self, "_np_masks", None)
        object.__setattr__(self, "_mask_index", None)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Family is immutable")

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __eq__(self, other):
        return (
            isinstance(other, Family)
            and self.n == other.n
            and self.k == other.k
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.k, self.edges))

    def __repr__(self):
        return f"Family(n={self.n}, k={self.k}, m={len(self.edges)})"

    def np_masks(self):
        """uint64 mask array for vectorized filters; None when n > 64."""
        if self.n > 64:
            return None
        if self._np_masks is None:
            arr = np.array(self.masks, dtype=np.uint64)
            object.__setattr__(self, "_np_masks", arr)
        return self._np_masks

    def mask_index(self):
        """Dict mapping edge mask -> edge index (edges are deduplicated)."""
        if self._mask_index is None:
            object.__setattr__(
                self, "_mask_index", {m: i for i, m in enumerate(self.masks)}
            )
        return self._mask_index

    def degree(self, v):
        bit = 1 << (v - 1)
        return sum(1 for m in self.masks if m & bit)

    def degrees(self):
        """Vertex -> number of edges through it, for all of [n]."""
        out = dict.fromkeys(range(1, self.n + 1), 0)
        for e in self.edges:
            for v in e:
                out[v] += 1
        return out

    def filter(self, avoid=(), meet=None):
        """Edges disjoint from `avoid` that intersect `meet`.

        `meet=None` means no intersection constraint.  An explicit empty
        meet set keeps nothing (no edge intersects the empty set).
        """
        avoid_set = frozenset(avoid)
        a_mask = _edge_mask(avoid_set)
        if meet is None:
            kept = [
                (e, m)
                for e, m in zip(self.edges, self.masks)
                if m & a_mask == 0
            ]
        else:
            meet_set = frozenset(meet)
            if avoid_set & meet_set:
                raise OverlapError(
                    f"avoid and meet sets overlap: {sorted(avoid_set & meet_set)}"
                )
            q_mask = _edge_mask(meet_set)
            kept = [
                (e, m)
                for e, m in zip(self.edges, self.masks)
                if m & a_mask == 0 and m & q_mask
            ]
        return Family._from_canonical(
            self.n, self.k, [e for e, _ in kept], [m for _, m in kept]
        )

    def delete_vertices(self, vs):
        """Drop every edge meeting `vs`; the vertex range is left as-is."""
        return self.filter(avoid=vs)

    def link(self, q):
        """The family {E - Q : Q subset of E}; uniformity drops to k - |Q|."""
        q_set = frozenset(q)
        if len(q_set) > self.k:
            raise SizeError(f"link set size {len(q_set)} exceeds k={self.k}")
        q_mask = _edge_mask(q_set)
        new_edges = [
            tuple(v for v in e if v not in q_set)
            for e, m in zip(self.edges, self.masks)
            if m & q_mask == q_mask
        ]
        return Family._from_canonical(
            self.n, self.k - len(q_set), sorted(set(new_edges))
        )


def complete_family(n, k):
    """All k-subsets of [n]."""
    return Family._from_canonical(
        n, k, list(itertools.combinations(range(1, n + 1), k))
    )


def generated_family(members, n, k):
    """All k-subsets of [n] containing at least one of the given sets."""
    edges = set()
    pool = range(1, n + 1)
    for b in members:
        b_t = tuple(sorted(set(b)))
        if len(b_t) > k:
            raise SizeError(f"member {b_t} is larger than k={k}")
        rest = [v for v in pool if v not in b_t]
        for extra in itertools.combinations(rest, k - len(b_t)):
            edges.add(tuple(sorted(b_t + extra)))
    return Family(n, k, edges)


def generated_count(members, n, k):
    """|generated_family(members, n, k)| by inclusion-exclusion.

    Never materializes the family.  Capped at 20 members because the
    inclusion-exclusion sum walks every non-empty member subset.
    """
    mem = [frozenset(b) for b in members]
    for b in mem:
        if len(b) > k:
            raise SizeError(f"member {sorted(b)} is larger than k={k}")
    if len(mem) > 20:
        raise SizeError("count mode supports at most 20 members")
    total = 0
    for r in range(1, len(mem) + 1):
        for combo in itertools.combinations(mem, r):
            u = frozenset().union(*combo)
            if len(u) <= k:
                term = comb(n - len(u), k - len(u))
                total += term if r % 2 == 1 else -term
    return total


def generated_contains(members, fam):
    """True when every edge of `fam` contains at least one member set."""
    mem_masks = [_edge_mask(set(b)) for b in members]
    for m in fam.masks:
        if not any(m & bm == bm for bm in mem_masks):
            return False
    return True


def _filter_disjoint(cands, emask, masks, np_masks):
    """Indices in `cands` whose edge is disjoint from `emask`."""
    if np_masks is not None and len(cands) >= _NP_FILTER_MIN:
        arr = np.asarray(cands, dtype=np.int64)
        keep = (np_masks[arr] & np.uint64(emask)) == 0
        return arr[keep]
    return [j for j in cands if masks[j] & emask == 0]


def _greedy_matching(cands, masks):
    picked = []
    used = 0
    for i in cands:
        if masks[i] & used == 0:
            picked.append(i)
            used |= masks[i]
    return picked


def matching_number(fam):
    """Exact maximum matching size with a witness.

    Branch and bound: branch on the lexicographically smallest vertex still
    covered by a candidate edge (take each edge through it, or discard the
    vertex), seeded with a greedy lex matching.  Upper bounds: remaining
    vertex count over k, and a greedy cover of the candidates.
    """
    edges, masks = fam.edges, fam.masks
    m = len(edges)
    if m == 0:
        return 0, Matching(())
    if fam.k == 0:
        return 1, Matching(((),))
    k = fam.k
    cap = fam.n // k

    all_idx = list(range(m))
    greedy = _greedy_matching(all_idx, masks)
    best = list(greedy)
    best_size = len(greedy)
    if best_size >= cap or cap == 1:
        return best_size, Matching(tuple(edges[i] for i in best))

    np_masks = fam.np_masks()
    if cap <= 3:
        size, idxs = _matching_small_cap(fam, cap, best_size, best)
        return size, Matching(tuple(edges[i] for i in idxs))

    def cover_bound(cands, stop_at):
        remaining = list(cands)
        size = 0
        while remaining:
            size += 1
            if size >= stop_at:
                return stop_at
            counts = {}
            for i in remaining:
                for v in edges[i]:
                    counts[v] = counts.get(v, 0) + 1
            best_v = min(counts, key=lambda v: (-counts[v], v))
            bit = 1 << (best_v - 1)
            remaining = [i for i in remaining if not masks[i] & bit]
        return size

    def dfs(cands, cur):
        nonlocal best, best_size
        if len(cands) == 0:
            return
        # greedy completion keeps the incumbent fresh
        ext = _greedy_matching(cands, masks)
        if len(cur) + len(ext) > best_size:
            best = cur + ext
            best_size = len(best)
        union = 0
        for i in cands:
            union |= masks[i]
        ub = union.bit_count() // k
        if len(cur) + ub <= best_size:
            return
        if len(cands) >= 8:
            ub2 = cover_bound(cands, ub)
            if len(cur) + ub2 <= best_size:
                return
        v = edges[int(cands[0])][0]
        bit = 1 << (v - 1)
        with_v = [i for i in cands if masks[i] & bit]
        for e in with_v:
            rest = _filter_disjoint(cands, masks[e], masks, np_masks)
            dfs(rest, cur + [e])
        without_v = [i for i in cands if not masks[i] & bit]
        dfs(without_v, cur)

    dfs(all_idx, [])
    return best_size, Matching(tuple(edges[i] for i in sorted(best)))


def _matching_small_cap(fam, cap, best_size, best_idxs):
    """Exact nu when at most 3 disjoint edges fit in the vertex range.

    Enumerates disjoint index pairs (i, j) in lex order; a third edge must
    live inside the complement of their union, so when that complement has
    exactly k vertices a single hash lookup decides the branch.
    """
    edges, masks = fam.edges, fam.masks
    m = len(edges)
    n, k = fam.n, fam.k
    np_masks = fam.np_masks()
    full = (1 << n) - 1
    index = fam.mask_index()
    pair = None
    avail_size = n - 2 * k

    for i in range(m):
        di = _filter_disjoint(range(i + 1, m), masks[i], masks, np_masks)
        if len(di) and pair is None:
            pair = [i, int(di[0])]
            if cap == 2:
                return 2, pair
        if cap < 3:
            continue
        if avail_size == k:
            mi = masks[i]
            for j in di:
                third = full & ~(mi | masks[j])
                t = index.get(third)
                if t is not None:
                    return 3, sorted([i, int(j), t])
        elif avail_size < 2 * k and comb(avail_size, k) <= 4096:
            mi = masks[i]
            for j in di:
                avail = [v for v in range(1, n + 1) if (full & ~(mi | masks[j])) >> (v - 1) & 1]
                for sub in itertools.combinations(avail, k):
                    t = index.get(_edge_mask(sub))
                    if t is not None:
                        return 3, sorted([i, int(j), t])
        else:
            for pos in range(len(di)):
                j = int(di[pos])
                mij = masks[i] | masks[j]
                tail = di[pos + 1 :]
                hits = _filter_disjoint(tail, mij, masks, np_masks)
                if len(hits):
                    return 3, sorted([i, j, int(hits[0])])
    if pair is not None:
        return 2, pair
    return best_size, best_idxs


def _bounded_cover(fam, limit):
    """A cover of size <= limit, or None.  Depth-bounded DFS.

    Branches on the first uncovered edge; vertex order inside an edge is by
    global degree (descending), ties to the smaller vertex.
    """
    edges, masks = fam.edges, fam.masks
    m = len(edges)
    deg = fam.degrees()
    np_masks = fam.np_masks()
    use_np = np_masks is not None and m >= _NP_FILTER_MIN

    def order(e):
        return sorted(e, key=lambda v: (-deg[v], v))

    def first_uncovered(cover_mask, lo):
        if use_np:
            unc = (np_masks & np.uint64(cover_mask)) == 0
            i = int(np.argmax(unc))
            return i if unc[i] else m
        i = lo
        while i < m and masks[i] & cover_mask:
            i += 1
        return i

    def rec(cover_mask, depth, lo, acc):
        i = first_uncovered(cover_mask, lo)
        if i == m:
            return acc
        if depth == 0:
            return None
        for v in order(edges[i]):
            r = rec(cover_mask | (1 << (v - 1)), depth - 1, i + 1, acc + (v,))
            if r is not None:
                return r
        return None

    return rec(0, limit, 0, ())


def covering_number(fam):
    """Exact minimum vertex cover size with a witness.

    Iterative deepening from nu(F) upward; tau <= k * nu always holds, so
    the loop is capped there and failure past the cap is a solver bug.
    """
    if any(not e for e in fam.edges):
        raise ValueError("a family containing the empty edge has no cover")
    nu, _ = matching_number(fam)
    if nu == 0:
        return 0, Cover(())
    for d in range(nu, fam.k * nu + 1):
        found = _bounded_cover(fam, d)
        if found is not None:
            return d, Cover(tuple(sorted(found)))
    raise RuntimeError("cover search exceeded k * nu; solver bug")


def is_trivial(fam):
    """True when nu(F) == tau(F); the empty family is trivial."""
    nu, _ = matching_number(fam)
    if nu == 0:
        return True
    return _bounded_cover(fam, nu) is not None


def write_edge_file(fam, path):
    """Canonical text form: header 'n k', one sorted edge per line."""
    if fam.k == 0:
        raise ValueError("0-uniform families have no text form")
    with open(path, "w") as fh:
        fh.write(f"{fam.n} {fam.k}\n")
        for e in fam.edges:
            fh.write(" ".join(str(v) for v in e) + "\n")


def read_edge_file(path):
    """Parse an edge-list file, canonicalizing unsorted input."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError("first line must be 'n k'")
        n, k = int(header[0]), int(header[1])
        edges = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            edges.append(tuple(int(tok) for tok in line.split()))
    return Family(n, k, edges)
