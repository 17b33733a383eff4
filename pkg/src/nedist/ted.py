"""Level-by-level modified tree edit distance over unordered level trees.

The distance between two level trees is computed bottom-up.  Per level the
steps are: pad the smaller level with parentless placeholder nodes, assign
canonical labels to the combined level from the children's current labels,
build the complete bipartite matrix of counted-multiset symmetric
differences, solve the minimum-cost matching, convert the matching value to
a move count, and relabel the padded side through the matching bijection so
the parent level compares reconciled child labels.

Edit operations priced: inserting/deleting a leaf (padding cost per level)
and moving a node to a new parent within the same level (matching cost).
Neither operation changes the depth of any existing node.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .errors import InvariantError, UsageError
from .assignment import matching_with_duals
from .tree import LevelTree


class WeightScheme:
    """Strictly positive per-level costs for the two edit-operation families.

    ``leaf`` prices leaf insertion/deletion at a level, ``move`` prices a
    same-level move.  Either can be a mapping {level: weight} (levels are
    1-based; unlisted levels default to 1) or a callable level -> weight.
    """

    def __init__(self, leaf=None, move=None, name: str = "custom"):
        self.name = name
        self._leaf = self._normalize(leaf)
        self._move = self._normalize(move)

    @staticmethod
    def _normalize(spec) -> Callable[[int], object]:
        if spec is None:
            return lambda level: 1
        if callable(spec):
            return spec
        if isinstance(spec, Mapping):
            for level, w in spec.items():
                if w <= 0:
                    raise UsageError(f"weight for level {level} must be positive, got {w}")
            table = dict(spec)
            return lambda level: table.get(level, 1)
        raise UsageError("weight spec must be a mapping, callable, or None")

    def leaf_cost(self, level: int):
        w = self._leaf(level)
        if w <= 0:
            raise UsageError(f"leaf weight at level {level} must be positive")
        return w

    def move_cost(self, level: int):
        w = self._move(level)
        if w <= 0:
            raise UsageError(f"move weight at level {level} must be positive")
        return w

    @classmethod
    def from_table(cls, rows, name: str = "file") -> "WeightScheme":
        """Build from (level, leaf_weight, move_weight) triples; weights are
        parsed exactly (Fractions), unlisted levels cost 1."""
        leaf: dict[int, Fraction] = {}
        move: dict[int, Fraction] = {}
        for level, w1, w2 in rows:
            leaf[int(level)] = Fraction(w1)
            move[int(level)] = Fraction(w2)
        return cls(leaf=leaf, move=move, name=name)

    def cache_token(self):
        """Hashable identity for memoization; presets share by name."""
        return self.name if self.name in ("unit", "wplus") else id(self)


UNIT = WeightScheme(name="unit")
W_PLUS = WeightScheme(move=lambda level: 4 * level, name="wplus")


@dataclass
class CostBreakdown:
    """Per-level cost report; index 0 corresponds to the root level."""
    sizes_a: list[int]         # pre-padding level sizes of the first tree
    sizes_b: list[int]
    padding: list[int]         # forced leaf insertions/deletions per level
    matching_raw: list[int]    # minimum bipartite matching value per level
    matching: list[int]        # move operations per level
    total: object              # weighted distance (int under unit weights)

    @property
    def levels(self) -> int:
        return len(self.padding)


def canonize_level(children_collections) -> list[int]:
    """Assign labels 0,1,2,... to collections ordered by size then elements.

    Equal collections (as multisets) get equal labels; each collection must
    already be a sorted tuple of child labels.
    """
    order = sorted(set(children_collections), key=lambda c: (len(c), c))
    label = {c: i for i, c in enumerate(order)}
    return [label[c] for c in children_collections]


def build_bipartite_weights(collections_a, collections_b) -> np.ndarray:
    """Complete matrix of counted-multiset symmetric-difference sizes.

    Padded nodes (and leaves) contribute the empty collection.  Collections
    must be sorted tuples over a shared label space.
    """
    na, nb = len(collections_a), len(collections_b)
    labels = sorted({l for c in collections_a for l in c}
                    | {l for c in collections_b for l in c})
    if not labels:
        return np.zeros((na, nb), dtype=np.int64)
    col = {l: i for i, l in enumerate(labels)}
    A = np.zeros((na, len(labels)), dtype=np.int64)
    B = np.zeros((nb, len(labels)), dtype=np.int64)
    for i, c in enumerate(collections_a):
        for l in c:
            A[i, col[l]] += 1
    for i, c in enumerate(collections_b):
        for l in c:
            B[i, col[l]] += 1
    overlap = np.zeros((na, nb), dtype=np.int64)
    for li in range(len(labels)):
        overlap += np.minimum.outer(A[:, li], B[:, li])
    sizes_a = A.sum(axis=1)
    sizes_b = B.sum(axis=1)
    return sizes_a[:, None] + sizes_b[None, :] - 2 * overlap


def _collections(children, child_labels, pad_to: int):
    cols = [tuple(sorted(child_labels[c] for c in kids)) for kids in children]
    cols.extend(() for _ in range(pad_to - len(cols)))
    return cols


# The minimum-cost matching at a level can have several optimal solutions,
# and the relabeling they induce feeds the next level, so the level loop
# explores cost-equal matchings and keeps the cheapest overall outcome.
# Caps bound the exploration; levels wider than _TIE_WIDTH take the single
# lexicographically smallest optimum.
_TIE_WIDTH = 64
_TIE_STATE_CAP = 8
_TIE_VISIT_CAP = 300
_TIE_EMIT_CAP = 30


def _reconciled_key(tree: LevelTree | None, level_index: int, labels) -> tuple:
    """Per-parent label multisets of a level's real nodes.

    Two reconciled labelings with equal keys are interchangeable for every
    later level: parents read only their own children's label multisets, and
    padded nodes' labels are never read at all.
    """
    if tree is None or level_index >= tree.depth:
        return ()
    groups: dict[int, list] = {}
    for j, node in enumerate(tree.levels[level_index]):
        p = -1 if node.parent is None else node.parent
        groups.setdefault(p, []).append(labels[j])
    return tuple(sorted((p, tuple(sorted(g))) for p, g in groups.items()))


def _enumerate_receiver_labelings(tight_lists, donor_labels, donor_masks,
                                  real_count: int, n: int, emit):
    """Walk perfect matchings of the tight-edge graph, receiver by receiver.

    ``tight_lists[r]`` holds the donor indices tight with receiver r; donors
    with equal (label, tight mask) are interchangeable and tried once per
    choice point.  emit() gets the real receivers' label tuple and returns
    False to stop early.
    """
    used = [False] * n
    received = [0] * real_count
    budget = [_TIE_VISIT_CAP]

    def rec(r: int) -> bool:
        if r == n:
            return emit(tuple(received))
        seen = set()
        for d in tight_lists[r]:
            if used[d]:
                continue
            key = (donor_labels[d], donor_masks[d]) if r < real_count else donor_masks[d]
            if key in seen:
                continue
            seen.add(key)
            budget[0] -= 1
            if budget[0] < 0:
                return False
            used[d] = True
            if r < real_count:
                received[r] = donor_labels[d]
            ok = rec(r + 1)
            used[d] = False
            if not ok:
                return False
        return True

    rec(0)


def _run(t1: LevelTree, t2: LevelTree, weights: WeightScheme, want_breakdown: bool):
    # the distance is symmetric; fixing an internal order makes that exact
    swapped = t1.canonical_literal() > t2.canonical_literal()
    if swapped:
        t1, t2 = t2, t1
    k = max(t1.depth, t2.depth)
    sizes_a = [len(t1.levels[i]) if i < t1.depth else 0 for i in range(k)]
    sizes_b = [len(t2.levels[i]) if i < t2.depth else 0 for i in range(k)]
    P = [abs(sizes_a[i] - sizes_b[i]) for i in range(k)]
    P[0] = 0  # both trees have exactly one root

    # states: dedup key -> (accumulated move cost, lab_a, lab_b, m_raw, M)
    states: dict = {((), ()): (0, [], [], (), ())}
    p_below = 0
    for i in range(k - 1, -1, -1):
        na, nb = sizes_a[i], sizes_b[i]
        n = max(na, nb)
        children_a = t1.children_lists(i) if i < t1.depth else []
        children_b = t2.children_lists(i) if i < t2.depth else []
        nxt: dict = {}

        def record(cur_a, cur_b, acc, m_hist, M_hist):
            key = (_reconciled_key(t1, i, cur_a), _reconciled_key(t2, i, cur_b))
            old = nxt.get(key)
            if old is None or acc < old[0]:
                nxt[key] = (acc, cur_a, cur_b, m_hist, M_hist)

        for acc, lab_a, lab_b, m_hist, M_hist in sorted(states.values(),
                                                       key=lambda s: s[0]):
            cols_a = _collections(children_a, lab_a, n)
            cols_b = _collections(children_b, lab_b, n)

            if all(len(c) == 0 for c in cols_a) and all(len(c) == 0 for c in cols_b):
                # bottom level or all-leaf level pair: zero matrix, identity match
                if p_below % 2 != 0:
                    raise InvariantError(
                        f"level {i + 1}: matching value 0 incompatible with padding {p_below}")
                record([0] * n, [0] * n, acc, (0,) + m_hist, (0,) + M_hist)
                continue

            labels = canonize_level(cols_a + cols_b)
            W = build_bipartite_weights(cols_a, cols_b)
            m_i, f, u, v = matching_with_duals(W)
            if m_i < p_below or (m_i - p_below) % 2 != 0:
                raise InvariantError(
                    f"level {i + 1}: matching value {m_i} incompatible with padding {p_below}")
            M_i = (m_i - p_below) // 2
            acc_i = acc + (weights.move_cost(i + 1) * M_i if M_i else 0)
            m_hist_i = (m_i,) + m_hist
            M_hist_i = (M_i,) + M_hist

            cur_a = labels[:n]
            cur_b = labels[n:]
            if na < nb:
                base_a = [cur_b[f[x]] for x in range(n)]
                record(base_a, cur_b, acc_i, m_hist_i, M_hist_i)
            else:
                inv = [0] * n
                for x, y in enumerate(f):
                    inv[y] = x
                base_b = [cur_a[inv[y]] for y in range(n)]
                record(cur_a, base_b, acc_i, m_hist_i, M_hist_i)

            if n > _TIE_WIDTH or len(nxt) >= _TIE_STATE_CAP:
                continue
            tight = W == (np.asarray(u)[:, None] + np.asarray(v)[None, :])
            if na < nb:
                # a is the padded side and receives labels from b
                tight_lists = [tuple(np.flatnonzero(tight[x])) for x in range(n)]
                donor_labels = cur_b
                donor_masks = [int.from_bytes(np.packbits(tight[:, y]).tobytes(), "big")
                               for y in range(n)]
                real_count = na
            else:
                tight_lists = [tuple(np.flatnonzero(tight[:, y])) for y in range(n)]
                donor_labels = cur_a
                donor_masks = [int.from_bytes(np.packbits(tight[x]).tobytes(), "big")
                               for x in range(n)]
                real_count = nb

            seen_received: set = set()

            def emit(received, _acc=acc_i, _m=m_hist_i, _M=M_hist_i,
                     _cur_a=cur_a, _cur_b=cur_b, _na=na, _nb=nb, _n=n,
                     _seen=seen_received):
                if received not in _seen:
                    _seen.add(received)
                    got = list(received) + [0] * (_n - len(received))
                    if _na < _nb:
                        record(got, _cur_b, _acc, _m, _M)
                    else:
                        record(_cur_a, got, _acc, _m, _M)
                return (len(nxt) < _TIE_STATE_CAP
                        and len(_seen) < _TIE_EMIT_CAP)

            _enumerate_receiver_labelings(tight_lists, donor_labels, donor_masks,
                                          real_count, n, emit)

        states = nxt
        p_below = P[i]

    padding_cost = 0
    for i in range(k):
        if P[i]:
            padding_cost += weights.leaf_cost(i + 1) * P[i]
    best = min(states.values(), key=lambda s: s[0])
    total = padding_cost + best[0]
    if not want_breakdown:
        return total
    m_raw, M = list(best[3]), list(best[4])
    if swapped:
        sizes_a, sizes_b = sizes_b, sizes_a
    return total, CostBreakdown(sizes_a, sizes_b, P, m_raw, M, total)


def ted_star(t1: LevelTree, t2: LevelTree, weights: WeightScheme = UNIT):
    """Distance and full per-level cost breakdown."""
    return _run(t1, t2, weights, want_breakdown=True)


def ted_star_distance_only(t1: LevelTree, t2: LevelTree, weights: WeightScheme = UNIT):
    """Same value contract as ted_star without materializing the breakdown."""
    return _run(t1, t2, weights, want_breakdown=False)
