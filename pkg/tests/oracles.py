"""Brute-force oracles that share no code with the package."""

from functools import lru_cache
from math import comb


@lru_cache(maxsize=None)
def partition_count(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        return 1
    return sum(partition_count(n - k, k) for k in range(1, min(n, largest) + 1))


def plane_partition_box_sets(n):
    """Order ideals of N^3 with n boxes, grown one addable box at a time."""
    level = {frozenset()}
    for _ in range(n):
        nxt = set()
        for s in level:
            cands = {(0, 0, 0)} | {(i + di, j + dj, k + dk) for (i, j, k) in s
                                   for di, dj, dk in ((1, 0, 0), (0, 1, 0), (0, 0, 1))}
            for b in cands - s:
                i, j, k = b
                below = [(i - 1, j, k), (i, j - 1, k), (i, j, k - 1)]
                if all(min(c) < 0 or c in s for c in below):
                    nxt.add(s | {b})
        level = nxt
    return level


def macmahon_coefficients(n):
    """[q^k] prod (1 - q^m)^(-m) by integer series multiplication."""
    coeffs = [1] + [0] * n
    for m in range(1, n + 1):
        for _ in range(m):
            # multiply by 1/(1 - q^m)
            for k in range(m, n + 1):
                coeffs[k] += coeffs[k - m]
    return coeffs


def hook_sum(parts):
    conj = [sum(1 for p in parts if p > j) for j in range(parts[0])] if parts else []
    return sum(parts[i] - j - 1 + conj[j] - i - 1 + 1 for i in range(len(parts)) for j in range(parts[i]))


def horizontal_strip(mu, lam):
    """mu/lam is a horizontal strip: lam inside mu and no two removed boxes share a column."""
    boxes = lambda p: {(i, j) for i, r in enumerate(p) for j in range(r)}
    bm, bl = boxes(mu), boxes(lam)
    if not bl <= bm:
        return False
    cols = [j for _, j in bm - bl]
    return len(cols) == len(set(cols))


def projective_dimension(n, k):
    if k >= 0:
        return comb(n + k, n)
    if k >= -n:
        return 0
    return (-1) ** n * comb(-k - 1, n)


def qbinomial_product_tadic(z_order, t_order):
    """prod_{k>=0} (1 - z m t^(k+1)) / (1 - z t^k) as {(z, t, m): coeff}, truncated in z and t."""
    def mul(a, b):
        out = {}
        for (z1, t1, m1), c1 in a.items():
            for (z2, t2, m2), c2 in b.items():
                z, t = z1 + z2, t1 + t2
                if z <= z_order and t <= t_order:
                    key = (z, t, m1 + m2)
                    out[key] = out.get(key, 0) + c1 * c2
        return {k: c for k, c in out.items() if c}

    acc = {(0, 0, 0): 1}
    for k in range(t_order + 1):
        acc = mul(acc, {(j, k * j, 0): 1 for j in range(z_order + 1)})
        acc = mul(acc, {(0, 0, 0): 1, (1, k + 1, 1): -1})
    return acc
