"""Countable ambient structures: the monoid N0 and the groups Z, Z^2 and F2.

Each ambient has a fixed enumeration starting at the identity and a nested
family of finite balls compatible with it: the first ``ball_size(n)`` elements
of the enumeration are exactly ``ball(n)``.

Elements are plain Python values: ``int`` for N0 and Z, ``(x, y)`` tuples for
Z^2 and reduced words over ``a, A, b, B`` (``A`` = a^-1, ``B`` = b^-1) for F2,
with the empty string as identity.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .errors import ParseError, UnsupportedOperation, WordCapError

WORD_CAP = 64

LETTERS = "aAbB"
INVERSE_LETTER = {"a": "A", "A": "a", "b": "B", "B": "b"}


class Ambient:
    kind = ""
    identity = None
    is_group = True

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def enumerate(self, index):
        raise NotImplementedError

    def index(self, g):
        raise NotImplementedError

    def norm(self, g):
        """Smallest level n with g in ball(n)."""
        raise NotImplementedError

    def ball_size(self, n):
        raise NotImplementedError

    def ball(self, n):
        """Elements of ball(n) in enumeration order."""
        return _ball(self, n)

    def in_ball(self, g, n):
        return self.norm(g) <= n

    def generators(self):
        raise NotImplementedError

    def is_element(self, g):
        raise NotImplementedError

    def parse(self, text):
        raise NotImplementedError

    def format(self, g):
        return str(g)

    def sort_key(self, g):
        return self.index(g)

    def sorted(self, elements):
        return sorted(elements, key=self.index)

    def product_set(self, left, right):
        return {self.mul(g, h) for g in left for h in right}

    def inverse_set(self, elements):
        return {self.inv(g) for g in elements}

    def random_element(self, rng, level):
        return self.enumerate(rng.randrange(self.ball_size(level)))

    def __repr__(self):
        return f"<ambient {self.kind}>"

    def __reduce__(self):
        return (get_ambient, (self.kind,))


@lru_cache(maxsize=64)
def _ball(ambient, n):
    if n < 0:
        return ()
    return tuple(ambient.enumerate(i) for i in range(ambient.ball_size(n)))


class _N0(Ambient):
    kind = "N0"
    identity = 0
    is_group = False

    def mul(self, g, h):
        return g + h

    def inv(self, g):
        if g == 0:
            return 0
        raise UnsupportedOperation("N0 is a monoid: only 0 is invertible")

    def enumerate(self, index):
        if index < 0:
            raise ValueError("index must be non-negative")
        return index

    def index(self, g):
        return g

    def norm(self, g):
        return g

    def ball_size(self, n):
        return n + 1

    def ball(self, n):
        return range(n + 1)

    def generators(self):
        return (1,)

    def is_element(self, g):
        return isinstance(g, int) and not isinstance(g, bool) and g >= 0

    def parse(self, text):
        try:
            value = int(text.strip())
        except ValueError:
            raise ParseError("expected a non-negative integer", text) from None
        if value < 0:
            raise ParseError("N0 has no negative elements", text)
        return value


class _Z(Ambient):
    kind = "Z"
    identity = 0

    def mul(self, g, h):
        return g + h

    def inv(self, g):
        return -g

    def enumerate(self, index):
        if index < 0:
            raise ValueError("index must be non-negative")
        return (index + 1) // 2 if index % 2 else -(index // 2)

    def index(self, g):
        return 2 * g - 1 if g > 0 else -2 * g

    def norm(self, g):
        return abs(g)

    def ball_size(self, n):
        return 2 * n + 1

    def generators(self):
        return (1,)

    def is_element(self, g):
        return isinstance(g, int) and not isinstance(g, bool)

    def parse(self, text):
        try:
            return int(text.strip())
        except ValueError:
            raise ParseError("expected an integer", text) from None


class _Z2(Ambient):
    """Z^2 with box balls; each shell is listed in lexicographic order."""

    kind = "Z2"
    identity = (0, 0)

    def mul(self, g, h):
        return (g[0] + h[0], g[1] + h[1])

    def inv(self, g):
        return (-g[0], -g[1])

    def norm(self, g):
        return max(abs(g[0]), abs(g[1]))

    def ball_size(self, n):
        return (2 * n + 1) ** 2

    def index(self, g):
        x, y = g
        s = max(abs(x), abs(y))
        if s == 0:
            return 0
        base = (2 * s - 1) ** 2
        if x == -s:
            pos = y + s
        elif x < s:
            pos = (2 * s + 1) + 2 * (x + s - 1) + (0 if y == -s else 1)
        else:
            pos = (2 * s + 1) + 2 * (2 * s - 1) + y + s
        return base + pos

    def enumerate(self, index):
        if index < 0:
            raise ValueError("index must be non-negative")
        if index == 0:
            return (0, 0)
        s = 1
        while (2 * s + 1) ** 2 <= index:
            s += 1
        pos = index - (2 * s - 1) ** 2
        if pos < 2 * s + 1:
            return (-s, pos - s)
        pos -= 2 * s + 1
        if pos < 2 * (2 * s - 1):
            x = pos // 2 - s + 1
            return (x, -s if pos % 2 == 0 else s)
        pos -= 2 * (2 * s - 1)
        return (s, pos - s)

    def generators(self):
        return ((1, 0), (0, 1))

    def is_element(self, g):
        return isinstance(g, tuple) and len(g) == 2 and all(isinstance(c, int) for c in g)

    def parse(self, text):
        m = re.fullmatch(r"\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*", text)
        if not m:
            raise ParseError("expected a pair like (2,-1)", text)
        return (int(m.group(1)), int(m.group(2)))

    def format(self, g):
        return f"({g[0]},{g[1]})"


def reduce_word(word):
    out = []
    for letter in word:
        if out and out[-1] == INVERSE_LETTER[letter]:
            out.pop()
        else:
            out.append(letter)
    return "".join(out)


class _F2(Ambient):
    """Free group on a, b; shortlex enumeration with letter order a, A, b, B."""

    kind = "F2"
    identity = ""

    def mul(self, g, h):
        k = 0
        limit = min(len(g), len(h))
        while k < limit and g[len(g) - 1 - k] == INVERSE_LETTER[h[k]]:
            k += 1
        word = g[: len(g) - k] + h[k:]
        if len(word) > WORD_CAP:
            raise WordCapError(f"word length {len(word)} exceeds the cap {WORD_CAP}")
        return word

    def inv(self, g):
        return "".join(INVERSE_LETTER[c] for c in reversed(g))

    def norm(self, g):
        return len(g)

    def ball_size(self, n):
        return 2 * 3**n - 1

    def index(self, g):
        n = len(g)
        if n == 0:
            return 0
        rank = LETTERS.index(g[0])
        for prev, letter in zip(g, g[1:]):
            allowed = [c for c in LETTERS if c != INVERSE_LETTER[prev]]
            rank = rank * 3 + allowed.index(letter)
        return self.ball_size(n - 1) + rank

    def enumerate(self, index):
        if index < 0:
            raise ValueError("index must be non-negative")
        if index == 0:
            return ""
        n = 1
        while self.ball_size(n) <= index:
            n += 1
        if n > WORD_CAP:
            raise WordCapError(f"index {index} needs words longer than {WORD_CAP}")
        rank = index - self.ball_size(n - 1)
        digits = []
        for _ in range(n - 1):
            digits.append(rank % 3)
            rank //= 3
        word = [LETTERS[rank]]
        for d in reversed(digits):
            allowed = [c for c in LETTERS if c != INVERSE_LETTER[word[-1]]]
            word.append(allowed[d])
        return "".join(word)

    def generators(self):
        return ("a", "b")

    def is_element(self, g):
        return isinstance(g, str) and all(c in LETTERS for c in g) and reduce_word(g) == g

    def parse(self, text):
        text = text.strip()
        if text in ("e", ""):
            return ""
        if not all(c in LETTERS for c in text):
            raise ParseError("words use the letters a, A, b, B", text)
        word = reduce_word(text)
        if len(word) > WORD_CAP:
            raise WordCapError(f"word length {len(word)} exceeds the cap {WORD_CAP}")
        return word

    def format(self, g):
        return g if g else "e"


N0 = _N0()
Z = _Z()
Z2 = _Z2()
F2 = _F2()

AMBIENTS = {a.kind: a for a in (N0, Z, Z2, F2)}


def get_ambient(kind):
    try:
        return AMBIENTS[kind]
    except KeyError:
        raise ParseError(f"unknown ambient (choose from {sorted(AMBIENTS)})", kind) from None
