"""Input domains, the pairing function and length-lexicographic ranking.

Pairing is fixed once: over an alphabet whose first two symbols are ``a``
and ``b``,

    <x, i> = b^{|x|} a x w(i)

where ``w(i)`` is ``i`` in binary written with ``a`` for 0 and ``b`` for 1.
The prefix makes the encoding self-delimiting, so ``unpair`` is exact, and
for a fixed ``x`` larger indices give later strings in length-lex order.

FP functions produce integers; where a string is needed, the integer is
read as a length-lexicographic rank (``unrank``), which is a bijection
between the naturals and strings over the alphabet.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from itertools import product

from .errors import DomainError

DEFAULT_ALPHABET = "01"


@dataclass(frozen=True)
class Domain:
    """All strings over ``alphabet`` of length at most ``max_length``."""

    alphabet: str = DEFAULT_ALPHABET
    max_length: int = 6

    def __post_init__(self) -> None:
        if len(self.alphabet) < 2 or len(set(self.alphabet)) != len(self.alphabet):
            raise DomainError("alphabet needs at least two distinct symbols")
        if self.max_length < 0:
            raise DomainError("max_length must be nonnegative")

    def strings(self) -> Iterator[str]:
        """Yield the domain in length-lexicographic order."""
        for length in range(self.max_length + 1):
            yield from strings_of_length(length, self.alphabet)

    def contains(self, x: str) -> bool:
        return len(x) <= self.max_length and all(ch in self.alphabet for ch in x)

    def check(self, x: str) -> None:
        if not self.contains(x):
            raise DomainError(
                f"input {x!r} outside domain (alphabet {self.alphabet!r}, "
                f"length <= {self.max_length})"
            )

    def lengths(self) -> range:
        return range(self.max_length + 1)


def strings_of_length(length: int, alphabet: str = DEFAULT_ALPHABET) -> Iterator[str]:
    for letters in product(alphabet, repeat=length):
        yield "".join(letters)


def unary(n: int, alphabet: str = DEFAULT_ALPHABET) -> str:
    """The string 0^n, with the first alphabet symbol standing for 0."""
    return alphabet[0] * n


def _index_word(i: int, alphabet: str) -> str:
    zero, one = alphabet[0], alphabet[1]
    return "".join(one if bit == "1" else zero for bit in format(i, "b"))


def pair(x: str, i: int, alphabet: str = DEFAULT_ALPHABET) -> str:
    if i < 0:
        raise DomainError(f"pair index must be nonnegative, got {i}")
    zero, one = alphabet[0], alphabet[1]
    return one * len(x) + zero + x + _index_word(i, alphabet)


def unpair(s: str, alphabet: str = DEFAULT_ALPHABET) -> tuple[str, int]:
    """Invert :func:`pair`; raises DomainError on strings that are not pairs."""
    zero, one = alphabet[0], alphabet[1]
    length = 0
    while length < len(s) and s[length] == one:
        length += 1
    if length >= len(s) or s[length] != zero:
        raise DomainError(f"{s!r} is not a paired string")
    x = s[length + 1 : length + 1 + length]
    word = s[length + 1 + length :]
    if len(x) != length or not word:
        raise DomainError(f"{s!r} is not a paired string")
    if any(ch not in (zero, one) for ch in word) or (len(word) > 1 and word[0] == zero):
        raise DomainError(f"{s!r} has a malformed index")
    return x, int("".join("1" if ch == one else "0" for ch in word), 2)


def rank(s: str, alphabet: str = DEFAULT_ALPHABET) -> int:
    """Position of ``s`` in the length-lexicographic order of all strings."""
    k = len(alphabet)
    value = 0
    for ch in s:
        digit = alphabet.find(ch)
        if digit < 0:
            raise DomainError(f"symbol {ch!r} not in alphabet {alphabet!r}")
        value = value * k + digit + 1
    return value


def unrank(value: int, alphabet: str = DEFAULT_ALPHABET) -> str:
    if value < 0:
        raise DomainError(f"cannot read negative value {value} as a string")
    k = len(alphabet)
    letters = []
    while value > 0:
        value, digit = divmod(value - 1, k)
        letters.append(alphabet[digit])
    return "".join(reversed(letters))
