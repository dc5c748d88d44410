"""Pure-Python twins of the compiled search kernels.

Same algorithms, same node counts, same results as _core.pyx; only the data
layout differs (Python ints as bitmasks instead of uint64 limbs).  The
dispatcher in __init__ picks the compiled versions when they are importable.
"""


def subset_min_ratio(flat_neighbors, universe, s_count, n_max, node_budget):
    """Per-size minimum boundary count over all subsets of the universe containing vertex 0.

    flat_neighbors: row-major universe x s_count vertex ids, -1 = outside the
    universe (always counts as outside the subset).  Returns (num, den, nodes,
    complete) with num/den indexed by size 1..n_max; den[k] == 0 means size k
    produced no completed subset.  Values are exact minima of |boundary|/|F|;
    the branch bound B/m is admissible because the count of members with a
    definitively-outside neighbor only grows along a branch.
    """
    if universe < 1 or s_count < 1 or n_max < 1:
        raise ValueError("universe, s_count and n_max must be positive")
    if len(flat_neighbors) != universe * s_count:
        raise ValueError("flat_neighbors has the wrong length")
    nbr = [
        flat_neighbors[v * s_count : (v + 1) * s_count] for v in range(universe)
    ]
    # status: 0 undecided, 1 in, 2 out
    status = bytearray(universe)
    out_cnt = [0] * universe
    members = []
    num = [0] * (n_max + 1)
    den = [0] * (n_max + 1)
    num[1], den[1] = 1, 1  # {0} is always reachable with ratio 1
    st = {"B": 0, "nodes": 0, "complete": True}

    def include(v):
        status[v] = 1
        members.append(v)
        out = 0
        for u in nbr[v]:
            if u < 0 or status[u] == 2:
                out += 1
        out_cnt[v] = out
        if out:
            st["B"] += 1

    def undo_include(v):
        if out_cnt[v]:
            st["B"] -= 1
        status[v] = 0
        members.pop()

    def exclude(v):
        status[v] = 2
        for u in nbr[v]:
            if u >= 0 and status[u] == 1:
                if out_cnt[u] == 0:
                    st["B"] += 1
                out_cnt[u] += 1

    def undo_exclude(v):
        for u in nbr[v]:
            if u >= 0 and status[u] == 1:
                out_cnt[u] -= 1
                if out_cnt[u] == 0:
                    st["B"] -= 1
        status[v] = 0

    def leaf():
        size = len(members)
        boundary = st["B"]
        for v in members:
            if out_cnt[v] == 0:
                for u in nbr[v]:
                    if u >= 0 and status[u] == 0:
                        boundary += 1
                        break
        if den[size] == 0 or boundary * den[size] < num[size] * size:
            num[size], den[size] = boundary, size

    def search(k):
        st["nodes"] += 1
        if st["nodes"] > node_budget:
            st["complete"] = False
            return
        size = len(members)
        if size == n_max or k == universe:
            leaf()
            return
        B = st["B"]
        prunable = True
        for m in range(size, n_max + 1):
            if m == 0:
                continue
            if den[m] == 0 or B * den[m] < num[m] * m:
                prunable = False
                break
        if prunable:
            return
        include(k)
        search(k + 1)
        undo_include(k)
        if not st["complete"]:
            return
        exclude(k)
        search(k + 1)
        undo_exclude(k)

    include(0)
    search(1)
    undo_include(0)
    return num, den, st["nodes"], st["complete"]


def pack_max_weight(masks, weights, n_bound, node_budget):
    """Maximum total weight of a feasible interior-item set.

    Items carry vertex bitmasks (closed generator neighborhoods) and integer
    weights.  A chosen set is feasible when every group of transitively
    overlapping masks unions to at most n_bound vertices; those unions are
    exactly the non-singleton cells of the partition the caller rebuilds.
    Returns (best_weight, best_items, nodes, complete).
    """
    count = len(masks)
    if count != len(weights):
        raise ValueError("masks and weights must have equal length")
    if n_bound < 1:
        raise ValueError("n_bound must be positive")
    for mask in masks:
        if mask.bit_count() > n_bound:
            raise ValueError("item mask larger than n_bound; filter items first")
    if count == 0:
        return 0, (), 0, True

    exq = [0] * count  # pairs that can never share a solution
    ov = [0] * count  # overlapping pairs that force a cluster merge
    for i in range(count):
        for j in range(i + 1, count):
            if masks[i] & masks[j]:
                if (masks[i] | masks[j]).bit_count() > n_bound:
                    exq[i] |= 1 << j
                    exq[j] |= 1 << i
                else:
                    ov[i] |= 1 << j
                    ov[j] |= 1 << i

    by_weight = sorted(range(count), key=lambda i: (-weights[i], i))

    def cover_bound(pool):
        # greedy clique cover of the exclusivity graph; any feasible subset of
        # the pool is an independent set, so one item per clique is admissible
        ub = 0
        rem = pool
        for i in by_weight:
            bit = 1 << i
            if not rem & bit:
                continue
            ub += weights[i]
            rem ^= bit
            common = rem & exq[i]
            while common:
                jb = common & -common
                rem ^= jb
                common = (common ^ jb) & exq[jb.bit_length() - 1]
        return ub

    cluster_mask = []
    parent = []
    item_cluster = [0] * count

    def find(c):
        while parent[c] != c:
            c = parent[c]
        return c

    st = {"best": -1, "items": (), "cur": 0, "chosen": 0, "nodes": 0, "complete": True}

    def try_include(i):
        roots = set()
        rest = st["chosen"] & ov[i]
        while rest:
            jb = rest & -rest
            rest ^= jb
            roots.add(find(item_cluster[jb.bit_length() - 1]))
        merged = masks[i]
        for r in roots:
            merged |= cluster_mask[r]
        if merged.bit_count() > n_bound:
            return None
        cid = len(cluster_mask)
        cluster_mask.append(merged)
        parent.append(cid)
        for r in roots:
            parent[r] = cid
        item_cluster[i] = cid
        st["chosen"] |= 1 << i
        st["cur"] += weights[i]
        return roots

    def undo_include(i, roots):
        st["cur"] -= weights[i]
        st["chosen"] ^= 1 << i
        cluster_mask.pop()
        parent.pop()
        for r in roots:
            parent[r] = r

    def search(pool):
        st["nodes"] += 1
        if st["nodes"] > node_budget:
            st["complete"] = False
            return
        if st["cur"] > st["best"]:
            st["best"] = st["cur"]
            chosen = st["chosen"]
            items = []
            while chosen:
                bit = chosen & -chosen
                items.append(bit.bit_length() - 1)
                chosen ^= bit
            st["items"] = tuple(items)
        if not pool:
            return
        if st["cur"] + cover_bound(pool) <= st["best"]:
            return
        # branch on the pool item with the most exclusivity conflicts
        pick, pick_deg = -1, -1
        rest = pool
        while rest:
            ib = rest & -rest
            rest ^= ib
            i = ib.bit_length() - 1
            d = (exq[i] & pool).bit_count()
            if d > pick_deg:
                pick, pick_deg = i, d
        roots = try_include(pick)
        if roots is not None:
            search(pool & ~((1 << pick) | exq[pick]))
            undo_include(pick, roots)
            if not st["complete"]:
                return
        search(pool & ~(1 << pick))

    search((1 << count) - 1)
    return st["best"], st["items"], st["nodes"], st["complete"]
