# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; exact algorithmic twins of _pure.py.

Branch order, pruning rules and tie handling are kept in lockstep with the
pure versions so that results and node counts are bit-identical.  The
partition kernel packs vertex and item sets into 3 x 64-bit limbs, which caps
it at 192 vertices and 192 items; the dispatcher falls back to the pure
kernel beyond that.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

ctypedef unsigned long long u64


cdef inline int popcount64(u64 x) nogil:
    x = x - ((x >> 1) & <u64>0x5555555555555555)
    x = (x & <u64>0x3333333333333333) + ((x >> 2) & <u64>0x3333333333333333)
    x = (x + (x >> 4)) & <u64>0x0F0F0F0F0F0F0F0F
    return <int>((x * <u64>0x0101010101010101) >> 56)


cdef inline int ctz64(u64 x) nogil:
    # x != 0; count of trailing zeros via the isolated low bit
    return popcount64((x & (~x + 1)) - 1)


# ---------------------------------------------------------------------------
# kernel 1: minimum boundary ratio over all subsets containing vertex 0
# ---------------------------------------------------------------------------

cdef struct SMR:
    int U
    int S
    int n_max
    int* nbr
    unsigned char* status  # 0 undecided, 1 in, 2 out
    int* out_cnt
    int* members
    int msize
    int B
    long long* num
    long long* den
    long long nodes
    long long budget
    bint complete


cdef void smr_leaf(SMR* st) nogil:
    cdef int size = st.msize
    cdef long long boundary = st.B
    cdef int i, v, j, u
    for i in range(size):
        v = st.members[i]
        if st.out_cnt[v] == 0:
            for j in range(st.S):
                u = st.nbr[v * st.S + j]
                if u >= 0 and st.status[u] == 0:
                    boundary += 1
                    break
    if st.den[size] == 0 or boundary * st.den[size] < st.num[size] * size:
        st.num[size] = boundary
        st.den[size] = size


cdef void smr_include(SMR* st, int v) nogil:
    cdef int out = 0, j, u
    st.status[v] = 1
    st.members[st.msize] = v
    st.msize += 1
    for j in range(st.S):
        u = st.nbr[v * st.S + j]
        if u < 0 or st.status[u] == 2:
            out += 1
    st.out_cnt[v] = out
    if out:
        st.B += 1


cdef void smr_undo_include(SMR* st, int v) nogil:
    if st.out_cnt[v]:
        st.B -= 1
    st.status[v] = 0
    st.msize -= 1


cdef void smr_exclude(SMR* st, int v) nogil:
    cdef int j, u
    st.status[v] = 2
    for j in range(st.S):
        u = st.nbr[v * st.S + j]
        if u >= 0 and st.status[u] == 1:
            if st.out_cnt[u] == 0:
                st.B += 1
            st.out_cnt[u] += 1


cdef void smr_undo_exclude(SMR* st, int v) nogil:
    cdef int j, u
    for j in range(st.S):
        u = st.nbr[v * st.S + j]
        if u >= 0 and st.status[u] == 1:
            st.out_cnt[u] -= 1
            if st.out_cnt[u] == 0:
                st.B -= 1
    st.status[v] = 0


cdef void smr_search(SMR* st, int k) nogil:
    cdef int size, m
    cdef bint prunable
    st.nodes += 1
    if st.nodes > st.budget:
        st.complete = False
        return
    size = st.msize
    if size == st.n_max or k == st.U:
        smr_leaf(st)
        return
    prunable = True
    for m in range(size, st.n_max + 1):
        if m == 0:
            continue
        if st.den[m] == 0 or st.B * st.den[m] < st.num[m] * m:
            prunable = False
            break
    if prunable:
        return
    smr_include(st, k)
    smr_search(st, k + 1)
    smr_undo_include(st, k)
    if not st.complete:
        return
    smr_exclude(st, k)
    smr_search(st, k + 1)
    smr_undo_exclude(st, k)


def subset_min_ratio(flat_neighbors, int universe, int s_count, int n_max, long long node_budget):
    """Compiled twin of _pure.subset_min_ratio; same contract, same node counts."""
    if universe < 1 or s_count < 1 or n_max < 1:
        raise ValueError("universe, s_count and n_max must be positive")
    if len(flat_neighbors) != universe * s_count:
        raise ValueError("flat_neighbors has the wrong length")
    cdef SMR st
    cdef int i
    st.U = universe
    st.S = s_count
    st.n_max = n_max
    st.msize = 0
    st.B = 0
    st.nodes = 0
    st.budget = node_budget
    st.complete = True
    st.nbr = <int*> malloc(universe * s_count * sizeof(int))
    st.status = <unsigned char*> malloc(universe)
    st.out_cnt = <int*> malloc(universe * sizeof(int))
    st.members = <int*> malloc((n_max + 1) * sizeof(int))
    st.num = <long long*> malloc((n_max + 1) * sizeof(long long))
    st.den = <long long*> malloc((n_max + 1) * sizeof(long long))
    if (st.nbr == NULL or st.status == NULL or st.out_cnt == NULL
            or st.members == NULL or st.num == NULL or st.den == NULL):
        free(st.nbr); free(st.status); free(st.out_cnt)
        free(st.members); free(st.num); free(st.den)
        raise MemoryError()
    try:
        for i in range(universe * s_count):
            st.nbr[i] = flat_neighbors[i]
        memset(st.status, 0, universe)
        memset(st.out_cnt, 0, universe * sizeof(int))
        for i in range(n_max + 1):
            st.num[i] = 0
            st.den[i] = 0
        st.num[1] = 1
        st.den[1] = 1  # {0} is always reachable with ratio 1
        smr_include(&st, 0)
        smr_search(&st, 1)
        smr_undo_include(&st, 0)
        num = [st.num[i] for i in range(n_max + 1)]
        den = [st.den[i] for i in range(n_max + 1)]
        return num, den, st.nodes, st.complete
    finally:
        free(st.nbr); free(st.status); free(st.out_cnt)
        free(st.members); free(st.num); free(st.den)


# ---------------------------------------------------------------------------
# kernel 2: maximum-weight feasible interior packing
# ---------------------------------------------------------------------------

cdef enum:
    LIMBS = 3


cdef u64 _pool_limb(int count, int t) nogil:
    cdef int lo = 64 * t
    if count <= lo:
        return 0
    if count - lo >= 64:
        return <u64>0xFFFFFFFFFFFFFFFF
    return ((<u64>1) << (count - lo)) - 1


cdef struct PMW:
    int count
    int n_bound
    u64* vmask   # count x LIMBS vertex masks
    u64* exq     # count x LIMBS item masks
    u64* ov      # count x LIMBS item masks
    long long* w
    int* by_weight
    u64* cmask   # cluster pool, capacity x LIMBS
    int* parent
    int* item_cluster
    int ccount
    int* undo_roots
    int undo_top
    u64 chosen[LIMBS]
    long long cur
    long long best
    int* best_items
    int best_count
    long long nodes
    long long budget
    bint complete


cdef inline int pmw_find(PMW* st, int c) nogil:
    while st.parent[c] != c:
        c = st.parent[c]
    return c


cdef long long pmw_cover_bound(PMW* st, u64 p0, u64 p1, u64 p2) nogil:
    cdef u64 rem[LIMBS]
    cdef u64 common[LIMBS]
    cdef long long ub = 0
    cdef int oi, i, j, t, limb
    cdef u64 bit, jb
    rem[0] = p0; rem[1] = p1; rem[2] = p2
    for oi in range(st.count):
        i = st.by_weight[oi]
        limb = i >> 6
        bit = (<u64>1) << (i & 63)
        if not (rem[limb] & bit):
            continue
        ub += st.w[i]
        rem[limb] ^= bit
        for t in range(LIMBS):
            common[t] = rem[t] & st.exq[i * LIMBS + t]
        while common[0] or common[1] or common[2]:
            if common[0]:
                t = 0
            elif common[1]:
                t = 1
            else:
                t = 2
            jb = common[t] & (~common[t] + 1)
            j = (t << 6) + ctz64(jb)
            rem[t] ^= jb
            common[t] ^= jb
            for limb in range(LIMBS):
                common[limb] = common[limb] & st.exq[j * LIMBS + limb]
    return ub


cdef int pmw_try_include(PMW* st, int i) nogil:
    # returns number of merged roots pushed onto the undo stack, or -1
    cdef u64 rest[LIMBS]
    cdef u64 merged[LIMBS]
    cdef int t, j, r, k, n_roots = 0, cid, pc
    cdef u64 jb
    cdef bint known
    cdef int roots[192]
    for t in range(LIMBS):
        rest[t] = st.chosen[t] & st.ov[i * LIMBS + t]
        merged[t] = st.vmask[i * LIMBS + t]
    for t in range(LIMBS):
        while rest[t]:
            jb = rest[t] & (~rest[t] + 1)
            rest[t] ^= jb
            j = (t << 6) + ctz64(jb)
            r = pmw_find(st, st.item_cluster[j])
            known = False
            for k in range(n_roots):
                if roots[k] == r:
                    known = True
                    break
            if not known:
                roots[n_roots] = r
                n_roots += 1
    pc = 0
    for t in range(LIMBS):
        for k in range(n_roots):
            merged[t] |= st.cmask[roots[k] * LIMBS + t]
        pc += popcount64(merged[t])
    if pc > st.n_bound:
        return -1
    cid = st.ccount
    for t in range(LIMBS):
        st.cmask[cid * LIMBS + t] = merged[t]
    st.parent[cid] = cid
    st.ccount += 1
    for k in range(n_roots):
        st.parent[roots[k]] = cid
        st.undo_roots[st.undo_top] = roots[k]
        st.undo_top += 1
    st.item_cluster[i] = cid
    st.chosen[i >> 6] |= (<u64>1) << (i & 63)
    st.cur += st.w[i]
    return n_roots


cdef void pmw_undo_include(PMW* st, int i, int n_roots) nogil:
    cdef int k, r
    st.cur -= st.w[i]
    st.chosen[i >> 6] ^= (<u64>1) << (i & 63)
    st.ccount -= 1
    for k in range(n_roots):
        st.undo_top -= 1
        r = st.undo_roots[st.undo_top]
        st.parent[r] = r


cdef void pmw_search(PMW* st, u64 p0, u64 p1, u64 p2) nogil:
    cdef u64 rest[LIMBS]
    cdef int t, i, d, pick, pick_deg, n_roots, bc
    cdef u64 ib, bit
    cdef u64 np[LIMBS]
    st.nodes += 1
    if st.nodes > st.budget:
        st.complete = False
        return
    if st.cur > st.best:
        st.best = st.cur
        bc = 0
        for t in range(LIMBS):
            rest[t] = st.chosen[t]
            while rest[t]:
                ib = rest[t] & (~rest[t] + 1)
                rest[t] ^= ib
                st.best_items[bc] = (t << 6) + ctz64(ib)
                bc += 1
        st.best_count = bc
    if not (p0 or p1 or p2):
        return
    if st.cur + pmw_cover_bound(st, p0, p1, p2) <= st.best:
        return
    pick = -1
    pick_deg = -1
    rest[0] = p0; rest[1] = p1; rest[2] = p2
    for t in range(LIMBS):
        while rest[t]:
            ib = rest[t] & (~rest[t] + 1)
            rest[t] ^= ib
            i = (t << 6) + ctz64(ib)
            d = (popcount64(st.exq[i * LIMBS] & p0)
                 + popcount64(st.exq[i * LIMBS + 1] & p1)
                 + popcount64(st.exq[i * LIMBS + 2] & p2))
            if d > pick_deg:
                pick = i
                pick_deg = d
    n_roots = pmw_try_include(st, pick)
    if n_roots >= 0:
        np[0] = p0 & ~st.exq[pick * LIMBS]
        np[1] = p1 & ~st.exq[pick * LIMBS + 1]
        np[2] = p2 & ~st.exq[pick * LIMBS + 2]
        bit = (<u64>1) << (pick & 63)
        np[pick >> 6] &= ~bit
        pmw_search(st, np[0], np[1], np[2])
        pmw_undo_include(st, pick, n_roots)
        if not st.complete:
            return
    np[0] = p0; np[1] = p1; np[2] = p2
    bit = (<u64>1) << (pick & 63)
    np[pick >> 6] &= ~bit
    pmw_search(st, np[0], np[1], np[2])


def pack_max_weight(masks, weights, int n_bound, long long node_budget):
    """Compiled twin of _pure.pack_max_weight for <= 192 vertices and items."""
    cdef int count = len(masks)
    cdef int i, j, t, cap
    cdef object mi, mj, un
    if count != len(weights):
        raise ValueError("masks and weights must have equal length")
    if n_bound < 1:
        raise ValueError("n_bound must be positive")
    if count > 64 * LIMBS:
        raise ValueError("too many items for the compiled kernel")
    for mi in masks:
        if mi.bit_count() > n_bound:
            raise ValueError("item mask larger than n_bound; filter items first")
        if mi >> (64 * LIMBS):
            raise ValueError("vertex mask too wide for the compiled kernel")
    if count == 0:
        return 0, (), 0, True
    cdef PMW st
    st.count = count
    st.n_bound = n_bound
    st.ccount = 0
    st.undo_top = 0
    st.cur = 0
    st.best = -1
    st.best_count = 0
    st.nodes = 0
    st.budget = node_budget
    st.complete = True
    for t in range(LIMBS):
        st.chosen[t] = 0
    cap = count + 1
    st.vmask = <u64*> malloc(count * LIMBS * sizeof(u64))
    st.exq = <u64*> malloc(count * LIMBS * sizeof(u64))
    st.ov = <u64*> malloc(count * LIMBS * sizeof(u64))
    st.w = <long long*> malloc(count * sizeof(long long))
    st.by_weight = <int*> malloc(count * sizeof(int))
    st.cmask = <u64*> malloc(cap * LIMBS * sizeof(u64))
    st.parent = <int*> malloc(cap * sizeof(int))
    st.item_cluster = <int*> malloc(count * sizeof(int))
    st.undo_roots = <int*> malloc(cap * sizeof(int))
    st.best_items = <int*> malloc(count * sizeof(int))
    if (st.vmask == NULL or st.exq == NULL or st.ov == NULL or st.w == NULL
            or st.by_weight == NULL or st.cmask == NULL or st.parent == NULL
            or st.item_cluster == NULL or st.undo_roots == NULL
            or st.best_items == NULL):
        free(st.vmask); free(st.exq); free(st.ov); free(st.w)
        free(st.by_weight); free(st.cmask); free(st.parent)
        free(st.item_cluster); free(st.undo_roots); free(st.best_items)
        raise MemoryError()
    try:
        for i in range(count):
            mi = masks[i]
            for t in range(LIMBS):
                st.vmask[i * LIMBS + t] = <u64>((mi >> (64 * t)) & ((1 << 64) - 1))
                st.exq[i * LIMBS + t] = 0
                st.ov[i * LIMBS + t] = 0
            st.w[i] = weights[i]
            st.item_cluster[i] = 0
        for i in range(count):
            for j in range(i + 1, count):
                mi = masks[i]
                mj = masks[j]
                if mi & mj:
                    un = mi | mj
                    if un.bit_count() > n_bound:
                        st.exq[i * LIMBS + (j >> 6)] |= (<u64>1) << (j & 63)
                        st.exq[j * LIMBS + (i >> 6)] |= (<u64>1) << (i & 63)
                    else:
                        st.ov[i * LIMBS + (j >> 6)] |= (<u64>1) << (j & 63)
                        st.ov[j * LIMBS + (i >> 6)] |= (<u64>1) << (i & 63)
        order = sorted(range(count), key=lambda k: (-weights[k], k))
        for i in range(count):
            st.by_weight[i] = order[i]
        pmw_search(&st,
                   _pool_limb(count, 0),
                   _pool_limb(count, 1),
                   _pool_limb(count, 2))
        items = tuple(sorted(st.best_items[i] for i in range(st.best_count)))
        return st.best, items, st.nodes, st.complete
    finally:
        free(st.vmask); free(st.exq); free(st.ov); free(st.w)
        free(st.by_weight); free(st.cmask); free(st.parent)
        free(st.item_cluster); free(st.undo_roots); free(st.best_items)
