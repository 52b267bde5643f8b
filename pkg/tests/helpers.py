"""Shared brute-force oracles for the test suite.

Everything here is deliberately independent of the library's fast
paths: closures by breadth-first multiplication, isomorphism by
permutation search, group enumeration by partitions.
"""

from itertools import permutations, product

from mgs.abelian import canonical_invariant_factors


def closure_of_elements(identity, elements):
    """Subgroup closure by repeated multiplication (finite groups)."""
    seen = {identity}
    frontier = [identity]
    gens = list(elements)
    for g in gens:
        if g not in seen:
            seen.add(g)
            frontier.append(g)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def abelian_closure(group, elements):
    """Subgroup closure in a finite abelian group, additively."""
    seen = {group.identity()}
    frontier = [group.identity()]
    gens = list(elements)
    for g in gens:
        if g not in seen:
            seen.add(g)
            frontier.append(g)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x + g
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def tables_isomorphic(t1, t2) -> bool:
    """Brute-force table isomorphism (small orders only)."""
    n = t1.order
    if n != t2.order:
        return False
    orders1 = [t1.element_order(i) for i in range(n)]
    orders2 = [t2.element_order(i) for i in range(n)]
    if sorted(orders1) != sorted(orders2):
        return False
    for perm in permutations(range(1, n)):
        phi = (0,) + perm
        if any(orders1[i] != orders2[phi[i]] for i in range(n)):
            continue
        if all(
            phi[t1.rows[a][b]] == t2.rows[phi[a]][phi[b]]
            for a in range(n)
            for b in range(n)
        ):
            return True
    return False


def _partitions(n):
    if n == 0:
        yield ()
        return
    for first in range(n, 0, -1):
        for rest in _partitions(n - first):
            if not rest or rest[0] <= first:
                yield (first,) + rest


def abelian_groups_up_to(max_order):
    """Every finite abelian group of order <= max_order, canonical form."""
    out = []
    for n in range(1, max_order + 1):
        factor_exponents = {}
        m = n
        d = 2
        while d * d <= m:
            while m % d == 0:
                factor_exponents[d] = factor_exponents.get(d, 0) + 1
                m //= d
            d += 1
        if m > 1:
            factor_exponents[m] = factor_exponents.get(m, 0) + 1
        primes = sorted(factor_exponents)
        per_prime = [list(_partitions(factor_exponents[p])) for p in primes]
        for combo in product(*per_prime):
            orders = []
            for p, parts in zip(primes, combo):
                orders.extend(p**e for e in parts)
            out.append(canonical_invariant_factors(orders))
    return out


def random_abelian_group(rng, max_order=60, max_rank=0):
    """A random finite-torsion abelian group of bounded order."""
    while True:
        r = rng.randint(0, max_rank)
        orders = []
        budget = max_order
        while rng.random() < 0.7 and budget >= 2:
            d = rng.randint(1, budget)
            if d >= 2:
                orders.append(d)
                budget //= d
        group = canonical_invariant_factors([None] * r + orders)
        if group.torsion_order() <= max_order:
            return group


def random_element(rng, group, span=5):
    free = tuple(rng.randint(-span, span) for _ in range(group.free_rank))
    torsion = tuple(rng.randrange(d) for d in group.invariant_factors)
    return group.element(free, torsion)
