"""Tests for domains, pairing and ranking."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaplab.errors import DomainError
from gaplab.strings import Domain, pair, rank, strings_of_length, unary, unpair, unrank

binary = st.text(alphabet="01", max_size=8)


class TestDomain:
    """Tests for Domain."""

    def test_size_and_order(self) -> None:
        """Test that the domain lists 2^0 + ... + 2^L strings in length-lex order."""
        strings = list(Domain("01", 3).strings())
        assert len(strings) == 15
        assert strings[:4] == ["", "0", "1", "00"]
        assert strings == sorted(strings, key=lambda s: (len(s), s))

    def test_contains(self) -> None:
        """Test membership by alphabet and length."""
        domain = Domain("ab", 2)
        assert domain.contains("ab")
        assert not domain.contains("abc")
        assert not domain.contains("0")

    def test_check_raises(self) -> None:
        """Test check raises DomainError outside the domain."""
        with pytest.raises(DomainError, match="outside domain"):
            Domain("01", 1).check("00")

    def test_invalid_alphabet(self) -> None:
        """Test alphabets need two distinct symbols."""
        with pytest.raises(DomainError):
            Domain("0", 2)


class TestPairing:
    """Tests for pair and unpair."""

    def test_layout(self) -> None:
        """Test <x, i> = 1^{|x|} 0 x bin(i)."""
        assert pair("01", 5) == "11" + "0" + "01" + "101"
        assert pair("", 0) == "00"

    @given(binary, st.integers(min_value=0, max_value=10_000))
    def test_unpair_inverts_pair(self, x: str, i: int) -> None:
        """Test that unpair recovers both components."""
        assert unpair(pair(x, i)) == (x, i)

    def test_index_order(self) -> None:
        """Test that larger indices give later strings for a fixed x."""
        ranks = [rank(pair("10", i)) for i in range(20)]
        assert ranks == sorted(ranks)

    @pytest.mark.parametrize("s", ["", "0", "1", "10", "10000"])
    def test_unpair_rejects(self, s: str) -> None:
        """Test that non-pairs raise DomainError."""
        with pytest.raises(DomainError):
            unpair(s)

    def test_negative_index(self) -> None:
        """Test negative indices are rejected."""
        with pytest.raises(DomainError):
            pair("0", -1)


class TestRanking:
    """Tests for rank and unrank."""

    def test_first_ranks(self) -> None:
        """Test the start of the length-lex order."""
        assert [unrank(v) for v in range(7)] == ["", "0", "1", "00", "01", "10", "11"]

    @given(st.integers(min_value=0, max_value=100_000))
    def test_rank_inverts_unrank(self, value: int) -> None:
        """Test that rank and unrank are inverse bijections."""
        assert rank(unrank(value)) == value

    def test_other_alphabet(self) -> None:
        """Test ranking over a three-letter alphabet."""
        assert unrank(4, "abc") == "aa"
        assert rank("cc", "abc") == 12

    def test_errors(self) -> None:
        """Test foreign symbols and negative values."""
        with pytest.raises(DomainError):
            rank("2")
        with pytest.raises(DomainError):
            unrank(-1)

    def test_unary_and_lengths(self) -> None:
        """Test 0^n and strings_of_length."""
        assert unary(3, "ab") == "aaa"
        assert len(list(strings_of_length(4))) == 16
