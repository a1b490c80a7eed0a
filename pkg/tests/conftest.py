"""Shared fixtures and independent brute-force oracles."""

import itertools
from fractions import Fraction

import pytest

from matchkit import AlgebraElement, LaurentAmbient, TableGroup


def brute_force_matchings(group, A, B):
    """All matching permutations by raw enumeration (independent oracle)."""
    A = [group.canon(a) for a in A]
    B = [group.canon(b) for b in B]
    a_set = set(A)
    out = []
    for perm in itertools.permutations(range(len(A))):
        if all(group.op(A[i], B[perm[i]]) not in a_set for i in range(len(A))):
            out.append(perm)
    return out


def brute_force_subgroups(group):
    """All subgroups by subset closure testing (independent oracle)."""
    elems = list(group.elements())
    e = group.identity
    found = []
    for size in range(1, len(elems) + 1):
        if len(elems) % size != 0:
            continue
        for subset in itertools.combinations(elems, size):
            members = set(subset)
            if e not in members:
                continue
            if any(group.op(x, y) not in members for x in members for y in members):
                continue
            if any(group.inv(x) not in members for x in members):
                continue
            found.append(tuple(sorted(members)))
    return sorted(found, key=lambda m: (len(m), m))


def s3_group():
    """Symmetric group on three letters as an explicit table."""
    perms = list(itertools.permutations(range(3)))
    labels = ["".join(str(v) for v in p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):
        return tuple(p[q[i]] for i in range(3))

    table = [[index[compose(p, q)] for q in perms] for p in perms]
    return TableGroup(labels, table, name="S3")


@pytest.fixture
def s3():
    return s3_group()


LAURENT = LaurentAmbient(0, 8)


def tpow(k, c=1):
    return AlgebraElement(LAURENT, {k: Fraction(c)})


def lel(coeffs):
    """Laurent element from a {degree: coefficient} dict."""
    return AlgebraElement(LAURENT, {k: Fraction(v) for k, v in coeffs.items()})
