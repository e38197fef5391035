"""Independent reference implementations used as test oracles.

Nothing here imports the package: everything is plain Fraction arithmetic
or exhaustive search, slow but obviously correct.
"""

from fractions import Fraction
from itertools import product
from math import factorial


def prefix_value(digits, q: Fraction) -> Fraction:
    return sum((Fraction(d) / q ** (i + 1) for i, d in enumerate(digits)), Fraction(0))


def extendable(digits, x: Fraction, q: Fraction, M: int) -> bool:
    # the tails after len(digits) digits take every value in [0, M q^-k/(q-1)]
    v = prefix_value(digits, q)
    return v <= x <= v + Fraction(M) / q ** len(digits) / (q - 1)


def count_expansion_prefixes(x: Fraction, q: Fraction, n: int, M: int, cap: int = 2) -> int:
    """Number of depth-n digit prefixes of expansions of x, stopping at ``cap``."""
    found = 0

    def dfs(prefix):
        nonlocal found
        if found >= cap:
            return
        if len(prefix) == n:
            found += 1
            return
        for d in range(M + 1):
            nxt = prefix + [d]
            if extendable(nxt, x, q, M):
                dfs(nxt)

    if extendable([], x, q, M):
        dfs([])
    return found


def brute_greedy(x: Fraction, q: Fraction, n: int, M: int) -> list:
    out = []
    for _ in range(n):
        out.append(max(d for d in range(M + 1) if prefix_value(out + [d], q) <= x))
    return out


def brute_lazy(x: Fraction, q: Fraction, n: int, M: int) -> list:
    out = []
    for _ in range(n):
        out.append(min(d for d in range(M + 1) if extendable(out + [d], x, q, M)))
    return out


def thue_morse(n: int) -> list:
    """First n terms 0110100110010110... by repeated complement-and-append."""
    t = [0]
    while len(t) < n:
        t = t + [1 - b for b in t]
    return t[:n]


def multinomial(counts) -> int:
    out = factorial(sum(counts))
    for c in counts:
        out //= factorial(c)
    return out


def count_run_constrained(n: int, N: int, M: int) -> int:
    zeros, tops = (0,) * N, (M,) * N
    total = 0
    for w in product(range(M + 1), repeat=n):
        if not any(w[i:i + N] in (zeros, tops) for i in range(n - N + 1)):
            total += 1
    return total


def middle_thirds(levels: int):
    out = [[(Fraction(0), Fraction(1))]]
    for _ in range(levels):
        nxt = []
        for lo, hi in out[-1]:
            t = (hi - lo) / 3
            nxt += [(lo, lo + t), (hi - t, hi)]
        out.append(nxt)
    return out


def self_similar(r: Fraction, levels: int):
    """Two maps of ratio r fixing 0 and 1: one central gap of relative size 1 - 2r."""
    out = [[(Fraction(0), Fraction(1))]]
    for _ in range(levels):
        nxt = []
        for lo, hi in out[-1]:
            t = (hi - lo) * r
            nxt += [(lo, lo + t), (hi - t, hi)]
        out.append(nxt)
    return out
