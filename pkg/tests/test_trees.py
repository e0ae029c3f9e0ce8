"""Tests for computation trees."""

import pytest

from gaplab.trees import (
    ACCEPT,
    BALANCED,
    REJECT,
    Choice,
    const_tree,
    depth,
    enumerate_paths,
    graft,
    leaves_from,
    negate,
    padded_tree,
    tree_gap,
)


class TestEnumeratePaths:
    """Tests for enumerate_paths."""

    def test_single_leaf(self) -> None:
        """Test a lone Accept leaf."""
        assert enumerate_paths(ACCEPT) == (1, 0)
        assert enumerate_paths(REJECT) == (0, 1)

    def test_balanced(self) -> None:
        """Test Choice(Accept, Reject)."""
        assert enumerate_paths(BALANCED) == (1, 1)

    def test_full_depth_three(self) -> None:
        """Test a full depth-3 tree with five accepting leaves."""
        tree = leaves_from([True, True, False, True, False, True, True, False])
        assert depth(tree) == 3
        assert enumerate_paths(tree) == (5, 3)

    def test_shared_subtrees_count_twice(self) -> None:
        """Test that a DAG counts each path through a shared node."""
        shared = Choice(ACCEPT, ACCEPT)
        tree = Choice(shared, shared)
        assert enumerate_paths(tree) == (4, 0)

    def test_deep_chain(self) -> None:
        """Test traversal of a chain deeper than the recursion limit."""
        tree = ACCEPT
        for _ in range(5000):
            tree = Choice(tree, BALANCED)
        assert tree_gap(tree) == 1
        assert depth(tree) == 5001


class TestTransforms:
    """Tests for negate and graft."""

    def test_negate_swaps_counts(self) -> None:
        """Test that negation swaps acc and rej."""
        tree = Choice(BALANCED, ACCEPT)
        assert enumerate_paths(negate(tree)) == (1, 2)

    @pytest.mark.parametrize("a,b", [(3, -2), (-3, -2), (0, 5), (4, 0), (1, 1), (-1, 7)])
    def test_graft_multiplies_gaps(self, a: int, b: int) -> None:
        """Test the sign-agreement product even for negative and zero factors."""
        assert tree_gap(graft(const_tree(a), const_tree(b))) == a * b


class TestConstTree:
    """Tests for const_tree and padded_tree."""

    @pytest.mark.parametrize("value", [-9, -1, 0, 1, 2, 5, 17, 64])
    def test_gap(self, value: int) -> None:
        """Test const_tree has the requested gap."""
        assert tree_gap(const_tree(value)) == value

    def test_minimal_depth(self) -> None:
        """Test |v| leaves need ceil(log2 |v|) choices."""
        assert depth(const_tree(1)) == 0
        assert depth(const_tree(5)) == 3
        assert depth(const_tree(-8)) == 3

    def test_padding_keeps_gap(self) -> None:
        """Test balanced padding adds paths but not gap."""
        tree = padded_tree(-3, 2)
        assert tree_gap(tree) == -3
        acc, rej = enumerate_paths(tree)
        assert acc == 2
        assert rej == 5

    def test_leaves_from_empty(self) -> None:
        """Test a tree needs a leaf."""
        with pytest.raises(ValueError):
            leaves_from([])
