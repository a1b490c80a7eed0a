"""Coset-freeness criteria that guarantee matchability.

A subset A of a finite group is coset-free when it contains no left or right
coset of any nontrivial proper subgroup.  Coset-free sets admit matchings to
every admissible partner B; a coset xH matched against (H minus identity)
plus one outside element never does.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .groups import (Element, Group, GroupValidationError, Subgroup, coset,
                     enumerate_subgroups, generated_subgroup)
from .matching import SubsetPair


@dataclass
class CosetWitness:
    """A coset of a nontrivial proper subgroup found inside A."""
    subgroup: Subgroup
    translate: Element
    side: str
    coset: tuple[Element, ...]

    def to_json(self) -> dict:
        g = self.subgroup.group
        return {"subgroup": [g.element_to_json(m) for m in self.subgroup.members],
                "translate": g.element_to_json(self.translate),
                "side": self.side,
                "coset": [g.element_to_json(c) for c in self.coset]}


def is_coset_free(group: Group, A: Sequence[Element]) -> tuple[bool, Optional[CosetWitness]]:
    """Check that A contains no coset of a nontrivial proper subgroup.

    Subgroups are scanned in increasing order (so the prime-order ones come
    first) and translates in increasing element order; the first witness in
    that order is returned.
    """
    members = sorted({group.canon(a) for a in A})
    a_set = set(members)
    for sub in enumerate_subgroups(group):
        if sub.is_trivial or sub.is_full:
            continue
        if sub.order > len(a_set):
            continue
        # Any coset inside A must contain x itself, so x ranges over A only.
        for x in members:
            for side in ("left", "right"):
                cs = coset(group, x, sub, side)
                if all(c in a_set for c in cs):
                    return False, CosetWitness(sub, x, side, cs)
    return True, None


def counterexample_pair(group: Group, subgroup: Subgroup, x: Element,
                        outside: Element) -> SubsetPair:
    """The unmatchable pair A = x*H, B = (H minus identity) plus one element
    outside H."""
    if subgroup.is_trivial or subgroup.is_full:
        raise GroupValidationError("subgroup must be nontrivial and proper")
    x = group.canon(x)
    outside = group.canon(outside)
    if outside in subgroup:
        raise GroupValidationError("the extra element must lie outside the subgroup")
    A = coset(group, x, subgroup, "left")
    B = [h for h in subgroup.members if h != group.identity] + [outside]
    return SubsetPair(group, A, B)


@dataclass
class Prop14Witness:
    """An element b of B whose generated-subgroup coset sits inside A."""
    b: Element
    coset: tuple[Element, ...]

    def to_json(self, group: Group) -> dict:
        return {"b": group.element_to_json(self.b),
                "coset": [group.element_to_json(c) for c in self.coset]}


def prop_1_4_condition(group: Group, A: Sequence[Element],
                       B: Sequence[Element]) -> tuple[bool, Optional[Prop14Witness]]:
    """Abelian matchability criterion: for every b in B, A contains no coset
    of the subgroup generated by b."""
    if not group.is_abelian:
        raise GroupValidationError("this criterion applies to abelian groups only")
    if not group.is_finite:
        raise GroupValidationError("this criterion applies to finite groups only")
    a_members = sorted({group.canon(a) for a in A})
    b_members = [group.canon(b) for b in B]
    if len(a_members) != len(set(b_members)) or len(set(b_members)) != len(b_members):
        raise GroupValidationError("A and B must be repeat-free and of equal size")
    a_set = set(a_members)
    for b in b_members:
        sub = generated_subgroup(group, [b])
        if sub.order > len(a_set):
            continue
        for x in a_members:
            cs = coset(group, x, sub, "left")
            if all(c in a_set for c in cs):
                return False, Prop14Witness(b, cs)
    return True, None
