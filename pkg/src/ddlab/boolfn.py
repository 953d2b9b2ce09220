"""Total and partial Boolean functions as explicit truth tables, variable orders,
prefix partitions, and the brute-force width oracles built on them.

Conventions used everywhere in the package:
  * variables are 1-indexed: an input is (x_1, ..., x_n);
  * the truth-table index of an assignment is bin(x_1...x_n), i.e. x_1 is the
    most significant bit, so index 0 is the all-zero input;
  * hex serialization writes the table as one big integer whose most significant
    bit is the entry for the all-zero input.

Partial functions are canonical: the value vector is forced to zero wherever the
defined mask is zero.
"""
from __future__ import annotations

import heapq
from itertools import permutations

import numpy as np

from .errors import CapacityError, ShapeError
from . import kernels

TABLE_CAP = 24   # largest n for which explicit tables are allowed
DP_CAP = 16      # largest n for the subset-lattice min-width DP
ENUM_CAP = 8     # largest n for the n! enumeration cross-check


def _as_bit_array(bits, n):
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1 or arr.shape[0] != (1 << n):
        raise ShapeError("table must be a flat vector of length 2**n")
    if arr.size and int(arr.max(initial=0)) > 1:
        raise ShapeError("table entries must be bits")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def _check_n(n):
    if not isinstance(n, int) or n < 1:
        raise ShapeError("variable count must be a positive integer")
    if n > TABLE_CAP:
        raise CapacityError("variable count %d exceeds the table cap %d" % (n, TABLE_CAP))


class VarOrder:
    """A permutation (j_1, ..., j_n) of {1, ..., n}: position i reads x_{j_i}."""

    __slots__ = ("perm",)

    def __init__(self, perm):
        perm = tuple(int(j) for j in perm)
        n = len(perm)
        if n == 0 or sorted(perm) != list(range(1, n + 1)):
            raise ShapeError("order must be a permutation of 1..n")
        self.perm = perm

    @classmethod
    def identity(cls, n):
        return cls(range(1, n + 1))

    @property
    def n(self):
        return len(self.perm)

    def inverse(self):
        inv = [0] * self.n
        for pos, var in enumerate(self.perm, start=1):
            inv[var - 1] = pos
        return VarOrder(inv)

    def position_of(self, var):
        """1-indexed position at which variable `var` is read."""
        return self.perm.index(var) + 1

    def __iter__(self):
        return iter(self.perm)

    def __len__(self):
        return len(self.perm)

    def __eq__(self, other):
        return isinstance(other, VarOrder) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return "VarOrder(%s)" % (self.perm,)


class Partition:
    """A prefix cut of an order: X_A = first `cut` variables, X_B = the rest."""

    __slots__ = ("order", "cut")

    def __init__(self, order, cut):
        if not isinstance(order, VarOrder):
            order = VarOrder(order)
        cut = int(cut)
        if not 1 <= cut <= order.n - 1:
            raise ShapeError("cut must satisfy 1 <= cut <= n-1")
        self.order = order
        self.cut = cut

    @property
    def left(self):
        return self.order.perm[: self.cut]

    @property
    def right(self):
        return self.order.perm[self.cut:]

    def __repr__(self):
        return "Partition(order=%s, cut=%d)" % (self.order.perm, self.cut)


class BoolFn:
    """A total Boolean function as an explicit 2**n truth table."""

    __slots__ = ("n", "table")

    def __init__(self, n, table):
        _check_n(n)
        self.n = n
        self.table = _as_bit_array(table, n)

    @classmethod
    def from_callable(cls, n, fn):
        _check_n(n)
        table = np.empty(1 << n, dtype=np.uint8)
        for idx in range(1 << n):
            x = tuple((idx >> (n - i)) & 1 for i in range(1, n + 1))
            table[idx] = 1 if fn(x) else 0
        return cls(n, table)

    @classmethod
    def constant(cls, n, value):
        _check_n(n)
        return cls(n, np.full(1 << n, 1 if value else 0, dtype=np.uint8))

    def to_hex(self):
        return _bits_to_hex(self.table)

    @classmethod
    def from_hex(cls, n, text):
        return cls(n, _hex_to_bits(text, n))

    def __eq__(self, other):
        return (
            isinstance(other, BoolFn)
            and self.n == other.n
            and bool(np.array_equal(self.table, other.table))
        )

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def __repr__(self):
        return "BoolFn(n=%d, table=%s)" % (self.n, self.to_hex())


class PartialBoolFn:
    """A partial Boolean function: a defined mask plus values on the defined part."""

    __slots__ = ("n", "defined", "values")

    def __init__(self, n, defined, values):
        _check_n(n)
        self.n = n
        self.defined = _as_bit_array(defined, n)
        values = np.asarray(values, dtype=np.uint8)
        if values.shape != self.defined.shape:
            raise ShapeError("defined mask and value vector must have equal length")
        if values.size and int(values.max(initial=0)) > 1:
            raise ShapeError("value entries must be bits")
        canon = (values & self.defined).astype(np.uint8)
        canon.setflags(write=False)
        self.values = canon

    @classmethod
    def total(cls, f):
        """Embed a total function as an everywhere-defined partial function."""
        return cls(f.n, np.ones(1 << f.n, dtype=np.uint8), f.table)

    def defined_count(self):
        return int(self.defined.sum())

    def to_hex_pair(self):
        return (_bits_to_hex(self.defined), _bits_to_hex(self.values))

    @classmethod
    def from_hex_pair(cls, n, mask_text, values_text):
        return cls(n, _hex_to_bits(mask_text, n), _hex_to_bits(values_text, n))

    def __eq__(self, other):
        return (
            isinstance(other, PartialBoolFn)
            and self.n == other.n
            and bool(np.array_equal(self.defined, other.defined))
            and bool(np.array_equal(self.values, other.values))
        )

    def __hash__(self):
        return hash((self.n, self.defined.tobytes(), self.values.tobytes()))

    def __repr__(self):
        m, v = self.to_hex_pair()
        return "PartialBoolFn(n=%d, defined=%s, values=%s)" % (self.n, m, v)


def _bits_to_hex(arr):
    n_bits = arr.shape[0]
    value = int.from_bytes(np.packbits(arr).tobytes(), "big") >> ((-n_bits) % 8)
    return format(value, "0%dx" % max(1, (n_bits + 3) // 4))


def _hex_to_bits(text, n):
    n_bits = 1 << n
    value = int(text, 16)
    if value < 0 or value >> n_bits:
        raise ShapeError("hex string does not fit a %d-bit table" % n_bits)
    raw = (value << ((-n_bits) % 8)).to_bytes((n_bits + 7) // 8, "big")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[:n_bits]


def _index_of(x, n):
    if len(x) != n:
        raise ShapeError("expected %d input bits, got %d" % (n, len(x)))
    idx = 0
    for b in x:
        b = int(b)
        if b not in (0, 1):
            raise ShapeError("input bits must be 0 or 1")
        idx = (idx << 1) | b
    return idx


def evaluate(f, x):
    """Value of f at assignment x; None when a partial function is undefined there."""
    idx = _index_of(x, f.n)
    if isinstance(f, PartialBoolFn):
        if not f.defined[idx]:
            return None
        return int(f.values[idx])
    return int(f.table[idx])


def restrict(f, rho):
    """Subfunction obtained by fixing the variables in `rho` (a {var: bit} map).

    Remaining variables keep their relative order and are renumbered 1..m.
    """
    n = f.n
    for var, bit in rho.items():
        if not (isinstance(var, int) and 1 <= var <= n):
            raise ShapeError("restriction assigns unknown variable %r" % (var,))
        if int(bit) not in (0, 1):
            raise ShapeError("restriction bits must be 0 or 1")
    remaining = [v for v in range(1, n + 1) if v not in rho]
    m = len(remaining)
    if m == 0:
        # A fully fixed function is the 1-variable function ignoring its input.
        idx = 0
        for v in range(1, n + 1):
            idx |= int(rho[v]) << (n - v)
        if isinstance(f, PartialBoolFn):
            d = int(f.defined[idx])
            return PartialBoolFn(1, [d, d], [f.values[idx]] * 2)
        return BoolFn.constant(1, int(f.table[idx]))
    new_idx = np.arange(1 << m, dtype=np.int64)
    old = np.zeros(1 << m, dtype=np.int64)
    for t, v in enumerate(remaining):
        old |= ((new_idx >> (m - 1 - t)) & 1) << (n - v)
    base = 0
    for v, bit in rho.items():
        base |= int(bit) << (n - v)
    old |= base
    if isinstance(f, PartialBoolFn):
        return PartialBoolFn(m, f.defined[old], f.values[old])
    return BoolFn(m, f.table[old])


def _row_col_indexes(n, left_vars, right_vars):
    """Row/column index of every truth-table entry for a two-block partition."""
    idx = np.arange(1 << n, dtype=np.int64)
    rows = np.zeros(1 << n, dtype=np.int64)
    for var in left_vars:
        rows = (rows << 1) | ((idx >> (n - var)) & 1)
    cols = np.zeros(1 << n, dtype=np.int64)
    for var in right_vars:
        cols = (cols << 1) | ((idx >> (n - var)) & 1)
    return rows, cols


def _count_for_varset(f, left_vars):
    """Number of pairwise-distinguishable subfunctions with X_A = `left_vars`.

    This is the reference route: explicit row matrices plus exact deduplication
    (and a conflict-graph maximum clique for partial functions). The compiled
    all-subset kernel is an independent second route used only by the DP oracle.
    """
    n = f.n
    left_vars = tuple(left_vars)
    right_vars = tuple(v for v in range(1, n + 1) if v not in set(left_vars))
    u = len(left_vars)
    rows, cols = _row_col_indexes(n, left_vars, right_vars)
    n_rows, n_cols = 1 << u, 1 << (n - u)
    if isinstance(f, PartialBoolFn):
        mask = np.zeros((n_rows, n_cols), dtype=np.uint8)
        vals = np.zeros((n_rows, n_cols), dtype=np.uint8)
        mask[rows, cols] = f.defined
        vals[rows, cols] = f.values
        mask_p = np.packbits(mask, axis=1)
        vals_p = np.packbits(vals, axis=1)
        distinct = {}
        for r in range(n_rows):
            key = (mask_p[r].tobytes(), vals_p[r].tobytes())
            if key not in distinct:
                distinct[key] = r
        keep = sorted(distinct.values())
        return _max_conflict_clique(mask_p[keep], vals_p[keep])
    mat = np.zeros((n_rows, n_cols), dtype=np.uint8)
    mat[rows, cols] = f.table
    packed = np.packbits(mat, axis=1)
    return int(np.unique(packed, axis=0).shape[0])


def _max_conflict_clique(mask_rows, val_rows):
    """Largest set of rows that pairwise provably differ.

    Two partial rows conflict iff some commonly-defined column carries different
    values. Branch and bound with greedy coloring on the conflict graph.
    """
    d = mask_rows.shape[0]
    if d <= 1:
        return d
    adj = [0] * d
    for i in range(d):
        conflict = ((mask_rows[i] & mask_rows) & (val_rows[i] ^ val_rows)).any(axis=1)
        conflict[i] = False
        bits = 0
        for j in np.nonzero(conflict)[0]:
            bits |= 1 << int(j)
        adj[i] = bits
    best = 1

    def expand(size, cand):
        nonlocal best
        if cand == 0:
            if size > best:
                best = size
            return
        order = []
        colors = []
        color = 0
        rest = cand
        while rest:
            color += 1
            avail = rest
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~(adj[v] | (1 << v))
                rest &= ~(1 << v)
                order.append(v)
                colors.append(color)
        for i in range(len(order) - 1, -1, -1):
            if size + colors[i] <= best:
                return
            v = order[i]
            expand(size + 1, cand & adj[v])
            cand &= ~(1 << v)

    expand(0, (1 << d) - 1)
    return best


def subfunction_count(f, theta):
    """Number of distinct subfunctions of f with respect to the prefix cut theta."""
    if theta.order.n != f.n:
        raise ShapeError("partition arity %d does not match function arity %d" % (theta.order.n, f.n))
    return _count_for_varset(f, theta.left)


def n_pi(f, order):
    """Maximum subfunction count over all cuts of one order."""
    if not isinstance(order, VarOrder):
        order = VarOrder(order)
    if order.n != f.n:
        raise ShapeError("order arity does not match function arity")
    if f.n == 1:
        return 1
    return max(subfunction_count(f, Partition(order, u)) for u in range(1, f.n))


def _varset_mask(left_vars, n):
    mask = 0
    for v in left_vars:
        mask |= 1 << (n - v)
    return mask


def _mask_varset(mask, n):
    return tuple(v for v in range(1, n + 1) if (mask >> (n - v)) & 1)


def _bottleneck_dp(costs, n):
    """Exact min over orders of (max over prefix sets of cost), over the subset lattice."""
    full = (1 << n) - 1
    size = 1 << n
    dist = [0] * size
    masks = sorted(range(1, size), key=lambda m: bin(m).count("1"))
    for mask in masks:
        best = None
        rest = mask
        while rest:
            bit = rest & -rest
            prev = dist[mask ^ bit]
            if best is None or prev < best:
                best = prev
            rest ^= bit
        here = 1 if mask == full else int(costs[mask])
        dist[mask] = here if here > best else best
    return max(dist[full], 1)


def n_min(f, strategy="auto"):
    """Exact minimum over all variable orders of n_pi(f, order).

    Strategies: "auto" picks the subset DP (total) or best-first subset search
    (partial); "enum" forces the n! enumeration (n <= 8), used as a cross-check.
    """
    n = f.n
    if strategy not in ("auto", "enum"):
        raise ShapeError("unknown n_min strategy %r" % (strategy,))
    if n == 1:
        return 1
    if strategy == "enum":
        if n > ENUM_CAP:
            raise CapacityError("enumeration strategy capped at n <= %d" % ENUM_CAP)
        memo = {}

        def cost(left):
            key = frozenset(left)
            if key not in memo:
                memo[key] = _count_for_varset(f, left)
            return memo[key]

        best = None
        for perm in permutations(range(1, n + 1)):
            worst = max(cost(perm[:u]) for u in range(1, n))
            if best is None or worst < best:
                best = worst
        return best
    if n > DP_CAP:
        raise CapacityError("min-width DP capped at n <= %d" % DP_CAP)
    if isinstance(f, BoolFn):
        costs = kernels.all_subset_costs(f.table, n)
        return _bottleneck_dp(costs, n)
    return _n_min_partial(f)


def _n_min_partial(f):
    """Best-first bottleneck search over the subset lattice with lazy clique costs."""
    n = f.n
    full = (1 << n) - 1
    cost_memo = {}

    def cost(mask):
        if mask == full:
            return 1
        got = cost_memo.get(mask)
        if got is None:
            got = _count_for_varset(f, _mask_varset(mask, n))
            cost_memo[mask] = got
        return got

    dist = {0: 0}
    heap = [(0, 0)]
    while heap:
        d, mask = heapq.heappop(heap)
        if mask == full:
            return max(d, 1)
        if d > dist.get(mask, d):
            continue
        for v in range(1, n + 1):
            bit = 1 << (n - v)
            if mask & bit:
                continue
            nxt = mask | bit
            nd = max(d, cost(nxt))
            if nd < dist.get(nxt, nd + 1):
                dist[nxt] = nd
                heapq.heappush(heap, (nd, nxt))
    raise AssertionError("subset search must reach the full set")
