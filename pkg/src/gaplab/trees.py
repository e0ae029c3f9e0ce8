"""Bounded nondeterministic computation trees.

Trees are immutable and may share subtrees, so a realized machine is a DAG
whose size stays close to the size of the program that produced it. All
traversals below memoize on node identity and run without recursion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True, slots=True)
class Leaf:
    accept: bool

    def __repr__(self) -> str:
        return "Accept" if self.accept else "Reject"


@dataclass(frozen=True, slots=True)
class Choice:
    left: ChoiceTree
    right: ChoiceTree


ChoiceTree = Union[Leaf, Choice]

ACCEPT = Leaf(True)
REJECT = Leaf(False)
BALANCED = Choice(ACCEPT, REJECT)


def _postorder(tree: ChoiceTree) -> list[ChoiceTree]:
    """Distinct nodes of ``tree`` with children listed before parents."""
    order: list[ChoiceTree] = []
    seen: set[int] = set()
    stack: list[tuple[ChoiceTree, bool]] = [(tree, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in seen:
            continue
        if isinstance(node, Leaf) or expanded:
            seen.add(id(node))
            order.append(node)
            continue
        stack.append((node, True))
        stack.append((node.right, False))
        stack.append((node.left, False))
    return order


def enumerate_paths(tree: ChoiceTree) -> tuple[int, int]:
    """Return (acc, rej), the numbers of accepting and rejecting leaves."""
    counts: dict[int, tuple[int, int]] = {}
    for node in _postorder(tree):
        if isinstance(node, Leaf):
            counts[id(node)] = (1, 0) if node.accept else (0, 1)
        else:
            la, lr = counts[id(node.left)]
            ra, rr = counts[id(node.right)]
            counts[id(node)] = (la + ra, lr + rr)
    return counts[id(tree)]


def tree_gap(tree: ChoiceTree) -> int:
    acc, rej = enumerate_paths(tree)
    return acc - rej


def depth(tree: ChoiceTree) -> int:
    """Number of binary choices on the deepest root-to-leaf path."""
    depths: dict[int, int] = {}
    for node in _postorder(tree):
        if isinstance(node, Leaf):
            depths[id(node)] = 0
        else:
            depths[id(node)] = 1 + max(depths[id(node.left)], depths[id(node.right)])
    return depths[id(tree)]


def negate(tree: ChoiceTree) -> ChoiceTree:
    """Swap Accept and Reject labels, preserving shared structure."""
    mapped: dict[int, ChoiceTree] = {}
    for node in _postorder(tree):
        if isinstance(node, Leaf):
            mapped[id(node)] = REJECT if node.accept else ACCEPT
        else:
            mapped[id(node)] = Choice(mapped[id(node.left)], mapped[id(node.right)])
    return mapped[id(tree)]


def graft(first: ChoiceTree, second: ChoiceTree) -> ChoiceTree:
    """Hang ``second`` below every leaf of ``first``.

    A combined leaf accepts iff the two leaf signs agree, so the gap of the
    result is the product of the two gaps.
    """
    flipped = negate(second)
    mapped: dict[int, ChoiceTree] = {}
    for node in _postorder(first):
        if isinstance(node, Leaf):
            mapped[id(node)] = second if node.accept else flipped
        else:
            mapped[id(node)] = Choice(mapped[id(node.left)], mapped[id(node.right)])
    return mapped[id(first)]


def const_tree(value: int) -> ChoiceTree:
    """Minimal-depth tree with gap ``value``.

    ``|value|`` leaves of sign(value), halved recursively so equal halves are
    shared; zero is the balanced pair Choice(Accept, Reject).
    """
    if value == 0:
        return BALANCED
    leaf = ACCEPT if value > 0 else REJECT
    built: dict[int, ChoiceTree] = {1: leaf}

    def build(k: int) -> ChoiceTree:
        pending = [k]
        while pending:
            top = pending[-1]
            if top in built:
                pending.pop()
                continue
            lo, hi = top // 2, top - top // 2
            missing = [part for part in (hi, lo) if part not in built]
            if missing:
                pending.extend(missing)
                continue
            built[top] = Choice(built[hi], built[lo])
            pending.pop()
        return built[k]

    return build(abs(value))


def padded_tree(value: int, padding: int) -> ChoiceTree:
    """Tree with gap ``value`` beside ``padding`` balanced pairs."""
    tree = const_tree(value)
    for _ in range(padding):
        tree = Choice(tree, BALANCED)
    return tree


def leaves_from(signs: list[bool]) -> ChoiceTree:
    """Balanced tree whose leaves, left to right, carry the given signs."""
    if not signs:
        raise ValueError("a tree needs at least one leaf")
    nodes: list[ChoiceTree] = [ACCEPT if s else REJECT for s in signs]
    while len(nodes) > 1:
        merged: list[ChoiceTree] = [
            Choice(nodes[i], nodes[i + 1]) for i in range(0, len(nodes) - 1, 2)
        ]
        if len(nodes) % 2:
            merged.append(nodes[-1])
        nodes = merged
    return nodes[0]
