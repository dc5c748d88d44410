"""Search kernels: pure/compiled parity, dispatch, budgets, and brute-force checks."""

import itertools
import os
import random
import subprocess
import sys

import pytest

from isoprof import _kernels
from isoprof._kernels import _pure, pack_max_weight, subset_min_ratio

try:
    from isoprof._kernels import _core
except ImportError:
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled kernel not built")

BIG = 1 << 40


def path_neighbors(V):
    """Row-major neighbor table of a path graph, -1 off the ends."""
    flat = []
    for v in range(V):
        flat.append(v - 1 if v >= 1 else -1)
        flat.append(v + 1 if v + 1 < V else -1)
    return flat


def random_symmetric_neighbors(rng, V, s_count):
    """Random table obeying the kernel contract: u appears in v's row as often
    as v in u's (generator/inverse pairing), -1 pads missing edges."""
    rows = [[] for _ in range(V)]
    for _ in range(V * s_count):
        v, u = rng.randrange(V), rng.randrange(V)
        if v != u and len(rows[v]) < s_count and len(rows[u]) < s_count:
            rows[v].append(u)
            rows[u].append(v)
    flat = []
    for row in rows:
        flat.extend(row + [-1] * (s_count - len(row)))
    return flat


def brute_subset_min(flat, universe, s_count, n_max):
    """All subsets containing vertex 0, no pruning."""
    nbr = [flat[v * s_count : (v + 1) * s_count] for v in range(universe)]
    num = [0] * (n_max + 1)
    den = [0] * (n_max + 1)
    for r in range(n_max):
        for rest in itertools.combinations(range(1, universe), r):
            F = {0, *rest}
            bd = sum(1 for v in F if any(u < 0 or u not in F for u in nbr[v]))
            k = len(F)
            if den[k] == 0 or bd * den[k] < num[k] * k:
                num[k], den[k] = bd, k
    return num, den


def brute_pack(masks, weights, n_bound):
    """Best interior packing by checking every item subset."""
    best = 0
    for r in range(len(masks) + 1):
        for items in itertools.combinations(range(len(masks)), r):
            merged = [masks[i] for i in items]
            changed = True
            while changed:
                changed = False
                for i in range(len(merged)):
                    for j in range(i + 1, len(merged)):
                        if merged[i] & merged[j]:
                            merged[i] |= merged[j]
                            del merged[j]
                            changed = True
                            break
                    if changed:
                        break
            if all(m.bit_count() <= n_bound for m in merged):
                best = max(best, sum(weights[i] for i in items))
    return best


def random_pack_instance(rng, V, count, n_bound):
    masks = []
    while len(masks) < count:
        bits = rng.randint(1, n_bound)
        mask = 0
        for v in rng.sample(range(V), bits):
            mask |= 1 << v
        masks.append(mask)
    weights = [rng.randint(1, 50) for _ in masks]
    return masks, weights


class TestSubsetKernel:
    def test_path_graph_values(self):
        num, den, nodes, complete = subset_min_ratio(path_neighbors(5), 5, 2, 5, BIG)
        assert complete and nodes > 0
        assert num == [0, 1, 2, 2, 2, 2]
        assert den == [0, 1, 2, 3, 4, 5]

    def test_matches_brute_force(self):
        rng = random.Random(9)
        for _ in range(15):
            V = rng.randint(2, 9)
            s = rng.randint(1, 3)
            flat = random_symmetric_neighbors(rng, V, s)
            n_max = rng.randint(1, V)
            num, den, _, complete = subset_min_ratio(flat, V, s, n_max, BIG)
            assert complete
            assert (num, den) == brute_subset_min(flat, V, s, n_max)

    def test_budget_truncates(self):
        num, den, nodes, complete = subset_min_ratio(path_neighbors(16), 16, 2, 8, 10)
        assert not complete
        assert nodes == 11  # stops on the first node past the budget
        assert (num[1], den[1]) == (1, 1)  # the seeded singleton survives

    def test_input_validation(self):
        with pytest.raises(ValueError):
            subset_min_ratio([0, 1], 2, 2, 1, BIG)  # wrong flat length
        with pytest.raises(ValueError):
            subset_min_ratio([], 0, 1, 1, BIG)


class TestPackKernel:
    def test_disjoint_items_all_fit(self):
        masks = [0b11, 0b1100, 0b110000]
        best, items, nodes, complete = pack_max_weight(masks, [5, 7, 9], 2, BIG)
        assert complete and best == 21 and items == (0, 1, 2)

    def test_overlap_merges_against_the_bound(self):
        # items 0 and 1 overlap; their union has 3 > 2 vertices
        masks = [0b011, 0b110]
        best, items, _, complete = pack_max_weight(masks, [5, 7], 2, BIG)
        assert complete and best == 7 and items == (1,)

    def test_transitive_merge_is_enforced(self):
        # pairwise unions fit in 4 but the triple union has 5 vertices
        masks = [0b00111, 0b01110, 0b11100]
        best, _, _, _ = pack_max_weight(masks, [10, 10, 10], 4, BIG)
        assert best == 20

    def test_matches_brute_force(self):
        rng = random.Random(21)
        for _ in range(15):
            V = rng.randint(4, 9)
            n_bound = rng.randint(1, 4)
            masks, weights = random_pack_instance(rng, V, rng.randint(1, 8), n_bound)
            best, items, _, complete = pack_max_weight(masks, weights, n_bound, BIG)
            assert complete
            assert best == brute_pack(masks, weights, n_bound)
            assert best == sum(weights[i] for i in items) or items == ()

    def test_budget_truncates(self):
        masks, weights = random_pack_instance(random.Random(4), 12, 12, 3)
        best, _, nodes, complete = pack_max_weight(masks, weights, 3, 1)
        assert not complete and best == 0 and nodes == 2

    def test_empty_instance(self):
        assert pack_max_weight([], [], 3, BIG) == (0, (), 0, True)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            pack_max_weight([0b1], [1, 2], 1, BIG)
        with pytest.raises(ValueError):
            pack_max_weight([0b111], [1], 2, BIG)
        with pytest.raises(ValueError):
            pack_max_weight([0b1], [1], 0, BIG)


@needs_core
class TestBackendParity:
    def test_subset_kernel_identical_including_nodes(self):
        rng = random.Random(33)
        cases = [(path_neighbors(12), 12, 2, 8)]
        for _ in range(20):
            V = rng.randint(2, 10)
            s = rng.randint(1, 4)
            cases.append((random_symmetric_neighbors(rng, V, s), V, s,
                          rng.randint(1, V)))
        for flat, V, s, n_max in cases:
            for budget in (BIG, 40):
                assert _pure.subset_min_ratio(flat, V, s, n_max, budget) == \
                    _core.subset_min_ratio(flat, V, s, n_max, budget)

    def test_pack_kernel_identical_including_nodes(self):
        rng = random.Random(34)
        for _ in range(20):
            V = rng.randint(4, 14)
            n_bound = rng.randint(1, 5)
            masks, weights = random_pack_instance(rng, V, rng.randint(1, 10), n_bound)
            for budget in (BIG, 25):
                assert _pure.pack_max_weight(masks, weights, n_bound, budget) == \
                    _core.pack_max_weight(masks, weights, n_bound, budget)


class TestDispatch:
    def test_oversize_instances_fall_back_transparently(self):
        # 200 singleton masks exceed the compiled vertex cap; the dispatcher
        # must still answer (via the pure kernel)
        masks = [1 << v for v in range(200)]
        weights = [1] * 200
        best, items, _, complete = pack_max_weight(masks, weights, 1, BIG)
        assert complete and best == 200 and len(items) == 200

    def test_huge_weights_fall_back_transparently(self):
        masks = [0b1, 0b10]
        weights = [1 << 62, 1 << 62]
        best, _, _, complete = pack_max_weight(masks, weights, 1, BIG)
        assert complete and best == 1 << 63

    def test_env_var_forces_pure_backend(self):
        code = "import isoprof._kernels as k; print(k.BACKEND)"
        env = dict(os.environ, ISOPROF_PURE="1")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "pure"

    def test_default_backend_is_stable_across_processes(self):
        code = "import isoprof._kernels as k; print(k.BACKEND)"
        env = {k: v for k, v in os.environ.items() if k != "ISOPROF_PURE"}
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        assert out.stdout.strip() == _kernels.BACKEND
