"""Finite abelian groups and abelian heaps.

A heap is a set with a ternary bracket satisfying associativity,
the Mal'cev identities [a,a,b] = b = [b,a,a] and, in the abelian case,
[a,b,c] = [c,b,a].  Freezing the middle slot at a basepoint e turns a heap
into an abelian group (its e-retract, with neutral element e) and the two
views are interchangeable: [a,b,c] = a - b + c in any retract.

Canonical storage is the retract plus its basepoint.  That makes every
constructed heap lawful by construction, keeps memory at O(n^2) instead of
the n^3 bracket table, and leaves raw ternary tables to a single validating
entry point, ``validate_ternary_table``.
"""

from __future__ import annotations

import numpy as np

from .lawcheck import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    ConsistencyError,
    Report,
    ValidationError,
    grid_witness,
    index_tuples,
    sample_witness,
)

# Orders up to this bound get exhaustive ternary-law scans (n^5 bracket
# comparisons for associativity); larger carriers are sampled.
HEAP_EXHAUSTIVE_ORDER = 16


def _square_table(table, what):
    arr = np.ascontiguousarray(table, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError("%s.shape" % what, None, "%s table must be square" % what)
    n = arr.shape[0]
    if n and ((arr < 0).any() or (arr >= n).any()):
        bad = np.argwhere((arr < 0) | (arr >= n))[0]
        raise ValidationError("%s.closure" % what, tuple(bad))
    arr.setflags(write=False)
    return arr


def _norm_labels(labels, n):
    if labels is None:
        return None
    labels = tuple(str(x) for x in labels)
    if len(labels) != n:
        raise ValueError("expected %d labels, got %d" % (n, len(labels)))
    return labels


class AbGroup:
    """Finite abelian group on indices 0..n-1 given by its addition table."""

    def __init__(self, add, labels=None, check=True):
        self.add = _square_table(add, "group")
        self.order = self.add.shape[0]
        if self.order == 0:
            raise ValidationError("group.empty", None, "a group needs at least one element")
        self.labels = _norm_labels(labels, self.order)
        self.zero = self._find_zero()
        self.neg = self._find_neg()
        if check:
            self.law_report().raise_invalid()

    def _find_zero(self):
        hits = np.flatnonzero((self.add == np.arange(self.order)).all(axis=1))
        if hits.size == 0:
            raise ValidationError("group.identity", None, "no identity element")
        return int(hits[0])

    def _find_neg(self):
        neg = np.full(self.order, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.add == self.zero)
        neg[rows] = cols
        if (neg < 0).any():
            a = int(np.flatnonzero(neg < 0)[0])
            raise ValidationError("group.inverse", (a,))
        neg.setflags(write=False)
        return neg

    def law_report(self):
        report = Report("group laws (order %d)" % self.order)
        w = grid_witness(self.add, self.add.T)
        report.add("group.commutative", w is None, w)
        witness = None
        for a in range(self.order):
            w = grid_witness(self.add[self.add[a]], self.add[a][self.add])
            if w is not None:
                witness = (a,) + w
                break
        report.add("group.associative", witness is None, witness)
        report.add(
            "group.inverse",
            bool((self.add[np.arange(self.order), self.neg] == self.zero).all()),
        )
        return report

    def sum_of(self, a, b):
        return int(self.add[a, b])

    def neg_of(self, a):
        return int(self.neg[a])

    def element_orders(self):
        orders = np.ones(self.order, dtype=np.int64)
        cur = np.arange(self.order)
        pending = cur != self.zero
        k = 1
        while pending.any():
            k += 1
            cur = self.add[cur, np.arange(self.order)]
            done = pending & (cur == self.zero)
            orders[done] = k
            pending &= ~done
            if k > self.order:
                raise ConsistencyError("element order exceeds group order")
        return orders

    @classmethod
    def cyclic(cls, n, labels=None):
        idx = np.arange(n, dtype=np.int64)
        add = (idx[:, None] + idx[None, :]) % n
        if labels is None:
            labels = [str(k) for k in range(n)]
        return cls(add, labels=labels, check=False)

    def direct_sum(self, other):
        n2 = other.order
        add = (self.add[:, None, :, None] * n2 + other.add[None, :, None, :]).reshape(
            self.order * n2, self.order * n2
        )
        labels = None
        if self.labels and other.labels:
            labels = [
                "(%s,%s)" % (a, b) for a in self.labels for b in other.labels
            ]
        return AbGroup(add, labels=labels, check=False)

    def __eq__(self, other):
        return (
            isinstance(other, AbGroup)
            and self.order == other.order
            and self.zero == other.zero
            and np.array_equal(self.add, other.add)
        )

    def __repr__(self):
        return "AbGroup(order=%d, zero=%d)" % (self.order, self.zero)


class Heap:
    """Finite abelian heap, stored as a retract group plus its basepoint.

    The empty heap is representable (``Heap.empty()``); every operation that
    needs an element rejects it explicitly.
    """

    def __init__(self, retract=None, labels=None):
        if retract is None:
            self.retract = None
            self.basepoint = None
            self.order = 0
            self.labels = None
            return
        self.retract = retract
        self.basepoint = retract.zero
        self.order = retract.order
        self.labels = _norm_labels(labels, self.order) or retract.labels

    @classmethod
    def empty(cls):
        return cls(None)

    def _require_nonempty(self, op):
        if self.order == 0:
            raise ValueError("%s needs an element; the empty heap has none" % op)

    def bracket(self, a, b, c):
        self._require_nonempty("bracket")
        add, neg = self.retract.add, self.retract.neg
        return int(add[add[a, neg[b]], c])

    def bracket_arrays(self, a, b, c):
        self._require_nonempty("bracket")
        add, neg = self.retract.add, self.retract.neg
        return add[add[a, neg[b]], c]

    def label_of(self, a):
        return self.labels[a] if self.labels else str(a)

    def __eq__(self, other):
        if not isinstance(other, Heap) or self.order != other.order:
            return False
        if self.order == 0:
            return True
        return self.basepoint == other.basepoint and np.array_equal(
            self.retract.add, other.retract.add
        )

    def __repr__(self):
        return "Heap(order=%d, basepoint=%s)" % (self.order, self.basepoint)


def heap_from_group(g):
    """The heap with bracket [a,b,c] = a - b + c computed in ``g``."""
    return Heap(g)


def retract(h, e):
    """The group [-, e, -] on the heap's carrier, with neutral element ``e``."""
    h._require_nonempty("retract")
    if e == h.basepoint:
        return h.retract
    idx = np.arange(h.order)
    add = h.bracket_arrays(idx[:, None], e, idx[None, :])
    # Lawful for any e by the heap axioms; revalidated by the property suite.
    return AbGroup(add, labels=h.labels, check=False)


def translate(h, e, e2):
    """The bijection a -> [a, e, e2]; an isomorphism of the e- and e2-retracts."""
    h._require_nonempty("translate")
    return h.bracket_arrays(np.arange(h.order), e, e2)


def heap_law_report(h, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED):
    """Check associativity, Mal'cev and commutativity of the bracket.

    Exhaustive for orders up to HEAP_EXHAUSTIVE_ORDER, sampled above.
    """
    n = h.order
    report = Report("heap laws (order %d)" % n, seed=seed, samples=samples)
    if n == 0:
        report.note("empty heap: laws hold vacuously")
        return report
    br = h.bracket_arrays
    idx = np.arange(n)
    # Mal'cev is only n^2 pairs; always exhaustive.
    w = grid_witness(br(idx[:, None], idx[:, None], idx[None, :]), idx[None, :])
    report.add("heap.malcev", w is None, w)
    w = grid_witness(br(idx[:, None], idx[None, :], idx[None, :]), idx[:, None])
    report.add("heap.malcev_right", w is None, w)
    if n <= HEAP_EXHAUSTIVE_ORDER:
        w = grid_witness(
            br(idx[:, None, None], idx[None, :, None], idx[None, None, :]),
            br(idx[None, None, :], idx[None, :, None], idx[:, None, None]),
        )
        report.add("heap.commutative", w is None, w)
        inner = br(idx[:, None, None], idx[None, :, None], idx[None, None, :])
        witness = None
        for a in range(n):
            first = br(a, idx[:, None], idx[None, :])
            lhs = br(
                first[:, :, None, None],
                idx[None, None, :, None],
                idx[None, None, None, :],
            )
            rhs = br(a, idx[:, None, None, None], inner[None, :, :, :])
            w = grid_witness(lhs, rhs)
            if w is not None:
                witness = (a,) + w
                break
        report.add("heap.associative", witness is None, witness)
    else:
        a, b, c = index_tuples((n, n, n), samples, seed)
        w = sample_witness(br(a, b, c), br(c, b, a), (a, b, c))
        report.add("heap.commutative", w is None, w)
        a, b, c, d, e = index_tuples((n, n, n, n, n), samples, seed + 1)
        w = sample_witness(br(br(a, b, c), d, e), br(a, b, br(c, d, e)), (a, b, c, d, e))
        report.add("heap.associative", w is None, w)
    return report


def validate_ternary_table(table, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED):
    """Accept a raw n*n*n bracket table as a heap, or fail with a witness.

    On success the heap is rebuilt canonically from the retract at basepoint
    0, i.e. a + b := t(a, 0, b), and the input table is cross-checked against
    the rebuilt bracket.
    """
    t = np.ascontiguousarray(table, dtype=np.int64)
    if t.ndim != 3 or len(set(t.shape)) != 1:
        raise ValidationError("ternary.shape", None, "expected an n*n*n table")
    n = t.shape[0]
    if n == 0:
        return Heap.empty()
    if (t < 0).any() or (t >= n).any():
        bad = np.argwhere((t < 0) | (t >= n))[0]
        raise ValidationError("ternary.closure", tuple(bad))

    idx = np.arange(n)
    w = grid_witness(t[idx[:, None], idx[:, None], idx[None, :]], idx[None, :])
    if w is not None:
        raise ValidationError("ternary.malcev", (w[0], w[0], w[1]))
    w = grid_witness(t[idx[:, None], idx[None, :], idx[None, :]], idx[:, None])
    if w is not None:
        raise ValidationError("ternary.malcev", (w[0], w[1], w[1]))

    if n <= HEAP_EXHAUSTIVE_ORDER:
        w = grid_witness(t, t.transpose(2, 1, 0))
        if w is not None:
            raise ValidationError("ternary.commutative", w)
        for a in range(n):
            lhs = t[t[a][:, :, None, None], idx[None, None, :, None], idx[None, None, None, :]]
            rhs = t[a][idx[:, None, None, None], t[None, :, :, :]]
            w = grid_witness(lhs, rhs)
            if w is not None:
                raise ValidationError("ternary.associative", (a,) + w)
    else:
        a, b, c = index_tuples((n, n, n), samples, seed)
        w = sample_witness(t[a, b, c], t[c, b, a], (a, b, c))
        if w is not None:
            raise ValidationError("ternary.commutative", w)
        a, b, c, d, e = index_tuples((n, n, n, n, n), samples, seed + 1)
        w = sample_witness(t[t[a, b, c], d, e], t[a, b, t[c, d, e]], (a, b, c, d, e))
        if w is not None:
            raise ValidationError("ternary.associative", w)

    group = AbGroup(t[:, 0, :])
    heap = Heap(group)
    rebuilt = heap.bracket_arrays(idx[:, None, None], idx[None, :, None], idx[None, None, :])
    w = grid_witness(t, rebuilt)
    if w is not None:
        raise ValidationError("ternary.retract", w, "table disagrees with its 0-retract rebuild")
    return heap


class SubHeap:
    """A subset of a heap closed under the bracket.  May be empty."""

    def __init__(self, parent, members, check=True):
        self.parent = parent
        members = sorted({int(m) for m in members})
        if members and (members[0] < 0 or members[-1] >= parent.order):
            raise ValueError("sub-heap member out of range")
        self.members = tuple(members)
        if check and len(self.members) > 1:
            s = np.array(self.members)
            vals = parent.bracket_arrays(s[:, None, None], s[None, :, None], s[None, None, :])
            mask = np.zeros(parent.order, dtype=bool)
            mask[s] = True
            w = grid_witness(mask[vals], True)
            if w is not None:
                a, b, c = (self.members[i] for i in w)
                raise ValidationError("subheap.closure", (a, b, c))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        return "SubHeap(%s)" % (self.members,)


def _member_tuple(h, s):
    if isinstance(s, SubHeap):
        return s.members
    return SubHeap(h, s).members


def subheap_relation_classes(h, s):
    """Partition of the carrier by x ~ y  iff  [x, y, p] lands in s for some p in s.

    s itself is one class and every class has cardinality |s|; a violation
    raises ``ConsistencyError`` since it cannot happen for a genuine sub-heap.
    """
    members = _member_tuple(h, s)
    if not members:
        raise ValueError("quotient by empty sub-heap undefined")
    n = h.order
    sarr = np.array(members)
    mask = np.zeros(n, dtype=bool)
    mask[sarr] = True
    rel = np.zeros((n, n), dtype=bool)
    idx = np.arange(n)
    for x in range(n):
        vals = h.bracket_arrays(x, idx[:, None], sarr[None, :])
        rel[x] = mask[vals].any(axis=1)

    if not (rel == rel.T).all() or not rel[idx, idx].all():
        raise ConsistencyError("sub-heap relation is not an equivalence")
    classes = []
    seen = np.zeros(n, dtype=bool)
    for x in range(n):
        if seen[x]:
            continue
        cls = np.flatnonzero(rel[x])
        if seen[cls].any():
            raise ConsistencyError("sub-heap relation classes overlap")
        seen[cls] = True
        classes.append(tuple(int(v) for v in cls))
    sizes = {len(c) for c in classes}
    if sizes != {len(members)} or members not in classes:
        raise ConsistencyError("sub-heap relation classes are not equal-size cosets")
    return classes


def quotient_heap(h, s):
    """Quotient heap on the ~_s classes, plus the projection map.

    Returns ``(heap, projection)`` where projection[x] is the class index of
    x.  Classes are ordered by smallest member.  The bracket of classes is
    computed on representatives and cross-checked for representative
    independence (exhaustively up to order 64, sampled above).
    """
    classes = subheap_relation_classes(h, s)
    n = h.order
    proj = np.full(n, -1, dtype=np.int64)
    for i, cls in enumerate(classes):
        proj[list(cls)] = i
    reps = np.array([cls[0] for cls in classes])
    bp_class = int(proj[h.basepoint])
    addq = proj[
        h.bracket_arrays(reps[:, None], reps[bp_class], reps[None, :])
    ]
    labels = ["{%s}" % ",".join(h.label_of(m) for m in cls) for cls in classes]
    qheap = Heap(AbGroup(addq, labels=labels))
    if qheap.basepoint != bp_class:
        raise ConsistencyError("quotient basepoint is not the basepoint class")

    if n <= 64:
        idx = np.arange(n)
        for a in range(n):
            lhs = proj[h.bracket_arrays(a, idx[:, None], idx[None, :])]
            rhs = qheap.bracket_arrays(proj[a], proj[idx][:, None], proj[idx][None, :])
            if (lhs != rhs).any():
                raise ConsistencyError("quotient heap bracket is ill-defined")
    else:
        a, b, c = index_tuples((n, n, n), DEFAULT_SAMPLES, DEFAULT_SEED)
        lhs = proj[h.bracket_arrays(a, b, c)]
        rhs = qheap.bracket_arrays(proj[a], proj[b], proj[c])
        if (lhs != rhs).any():
            raise ConsistencyError("quotient heap bracket is ill-defined")
    proj.setflags(write=False)
    return qheap, proj


def product_heap(h1, h2):
    """Cartesian product heap; pair (a, b) gets index a * h2.order + b."""
    h1._require_nonempty("product")
    h2._require_nonempty("product")
    group = h1.retract.direct_sum(h2.retract)
    labels = [
        "(%s,%s)" % (h1.label_of(a), h2.label_of(b))
        for a in range(h1.order)
        for b in range(h2.order)
    ]
    return Heap(group, labels=labels)
