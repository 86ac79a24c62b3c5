"""Exact arithmetic in a free group F, its group ring Z[F], and the twisted
ring Z[F x| Z] in which t^-1 x t = phi(x).

Generators are numbered 1..rank. A letter is a nonzero integer: ``i`` is the
generator x_i and ``-i`` is its inverse.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence
from functools import total_ordering

from .errors import MalformedInputError

__all__ = [
    "Word",
    "GroupRingElement",
    "Automorphism",
    "TwistedPolynomial",
    "reduce_word",
    "word_mul",
    "word_inv",
    "ring_add",
    "ring_mul",
    "ring_neg",
    "l1_norm",
    "conjugate",
    "apply_automorphism",
    "twisted_mul",
    "twisted_matmul",
    "parse_word",
    "parse_element",
]


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@total_ordering
class Word:
    """A reduced word. Construction always freely reduces its input."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[int] = ()):
        letters = _free_reduce(letters)
        for x in letters:
            if not isinstance(x, int) or x == 0:
                raise MalformedInputError(f"bad letter {x!r}")
        self.letters = letters
        self._hash = hash(letters)

    @classmethod
    def generator(cls, i: int, sign: int = 1) -> Word:
        return cls((i * sign,))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: Word) -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        # shortlex; x_i sorts before x_i^-1
        return (len(self.letters), tuple((abs(x), x < 0) for x in self.letters))

    def __mul__(self, other: Word) -> Word:
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.letters + other.letters)

    def inverse(self) -> Word:
        return Word(-x for x in reversed(self.letters))

    def max_generator(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "*".join(f"x{x}" if x > 0 else f"x{-x}^-1" for x in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


IDENTITY = Word()


def reduce_word(raw: Iterable, rank: int | None = None) -> Word:
    """Freely reduce a list of letters.

    Letters may be signed integers or ``(index, sign)`` pairs. With ``rank``
    given, indices outside 1..rank raise :class:`MalformedInputError`.
    """
    letters = []
    for item in raw:
        if isinstance(item, tuple):
            index, sign = item
            if sign not in (1, -1):
                raise MalformedInputError(f"exponent sign must be +1 or -1, got {sign!r}")
            x = index * sign
        else:
            x = item
        if not isinstance(x, int) or x == 0:
            raise MalformedInputError(f"bad letter {item!r}")
        if rank is not None and abs(x) > rank:
            raise MalformedInputError(f"generator index {abs(x)} outside 1..{rank}")
        letters.append(x)
    return Word(letters)


def word_mul(a: Word, b: Word) -> Word:
    return a * b


def word_inv(a: Word) -> Word:
    return a.inverse()


class GroupRingElement:
    """A finite integer combination of words; zero coefficients are never stored."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Word, int] | Iterable[tuple[Word, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, int] = {}
        for w, c in items:
            acc[w] = acc.get(w, 0) + c
        self.terms = {w: c for w, c in acc.items() if c}
        self._hash = None

    @classmethod
    def of(cls, word: Word, coefficient: int = 1) -> GroupRingElement:
        return cls({word: coefficient})

    @classmethod
    def zero(cls) -> GroupRingElement:
        return cls()

    @classmethod
    def one(cls) -> GroupRingElement:
        return cls({IDENTITY: 1})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = GroupRingElement({IDENTITY: other})
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        if isinstance(other, int):
            other = GroupRingElement({IDENTITY: other})
        return GroupRingElement(list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: GroupRingElement) -> GroupRingElement:
        return self + (-other)

    def __mul__(self, other: GroupRingElement | int) -> GroupRingElement:
        if isinstance(other, int):
            return GroupRingElement({w: c * other for w, c in self.terms.items()})
        acc: dict[Word, int] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u * v
                acc[w] = acc.get(w, 0) + a * b
        return GroupRingElement(acc)

    def __rmul__(self, other: int) -> GroupRingElement:
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def l1_norm(self) -> int:
        return sum(abs(c) for c in self.terms.values())

    def conjugate(self) -> GroupRingElement:
        # integer coefficients are self-conjugate
        return GroupRingElement({w.inverse(): c for w, c in self.terms.items()})

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms):
            c = self.terms[w]
            mag = abs(c)
            if not w:
                body = str(mag)
            elif mag == 1:
                body = str(w)
            else:
                body = f"{mag}*{w}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"GroupRingElement({str(self)!r})"


def ring_add(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    return a + b


def ring_mul(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    return a * b


def ring_neg(a: GroupRingElement) -> GroupRingElement:
    return -a


def l1_norm(a: GroupRingElement) -> int:
    return a.l1_norm()


def conjugate(a: GroupRingElement) -> GroupRingElement:
    return a.conjugate()


class Automorphism:
    """An endomorphism of F_rank given by the images of the generators.

    The name follows usage: nothing here checks invertibility unless inverse
    images are supplied, in which case both compositions are verified.
    """

    def __init__(self, images: Sequence[Word], inverse_images: Sequence[Word] | None = None):
        self.images = tuple(images)
        self.rank = len(self.images)
        for w in self.images:
            if w.max_generator() > self.rank:
                raise MalformedInputError(f"image {w} uses a generator beyond rank {self.rank}")
        self._inverse = None
        if inverse_images is not None:
            inv = Automorphism(inverse_images)
            if inv.rank != self.rank:
                raise MalformedInputError("inverse images have the wrong rank")
            for i in range(1, self.rank + 1):
                x = Word.generator(i)
                if inv(self(x)) != x or self(inv(x)) != x:
                    raise MalformedInputError(f"supplied inverse fails on x{i}")
            self._inverse = inv
            inv._inverse = self
        self._powers: dict[int, Automorphism] = {1: self}

    @classmethod
    def identity(cls, rank: int) -> Automorphism:
        gens = [Word.generator(i) for i in range(1, rank + 1)]
        return cls(gens, gens)

    def has_inverse(self) -> bool:
        return self._inverse is not None

    def inverse(self) -> Automorphism:
        if self._inverse is None:
            raise ValueError("no inverse images were supplied for this automorphism")
        return self._inverse

    def _check_rank(self, w: Word) -> None:
        if w.max_generator() > self.rank:
            raise MalformedInputError(f"{w} is not an element of F_{self.rank}")

    def __call__(self, x):
        if isinstance(x, Word):
            self._check_rank(x)
            letters: list[int] = []
            for y in x.letters:
                img = self.images[abs(y) - 1]
                letters.extend(img.letters if y > 0 else (-z for z in reversed(img.letters)))
            return Word(letters)
        if isinstance(x, GroupRingElement):
            return GroupRingElement([(self(w), c) for w, c in x.terms.items()])
        if isinstance(x, TwistedPolynomial):
            return TwistedPolynomial({k: self(a) for k, a in x.terms.items()})
        raise TypeError(f"cannot apply an automorphism to {type(x).__name__}")

    def compose(self, other: Automorphism) -> Automorphism:
        """Return ``self o other``, i.e. ``x -> self(other(x))``."""
        if other.rank != self.rank:
            raise MalformedInputError("rank mismatch")
        inverse = None
        if self._inverse is not None and other._inverse is not None:
            inverse = [other._inverse(w) for w in self._inverse.images]
        return Automorphism([self(w) for w in other.images], inverse)

    def power(self, k: int) -> Automorphism:
        if k in self._powers:
            return self._powers[k]
        if k == 0:
            result = Automorphism.identity(self.rank)
        elif k < 0:
            result = self.inverse().power(-k)
        else:
            result = self.compose(self.power(k - 1))
        self._powers[k] = result
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Automorphism) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __str__(self) -> str:
        return ", ".join(f"x{i} -> {w}" for i, w in enumerate(self.images, 1))

    def __repr__(self) -> str:
        return f"Automorphism({str(self)!r})"


def apply_automorphism(phi: Automorphism, a: Word | GroupRingElement):
    return phi(a)


class TwistedPolynomial:
    """A finite sum of terms t^k * a with a in Z[F].

    Multiplication needs the twisting automorphism and therefore lives in
    :func:`twisted_mul` rather than ``__mul__``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, GroupRingElement] | None = None):
        self.terms = {k: a for k, a in (terms or {}).items() if a}

    @classmethod
    def monomial(cls, k: int, a: GroupRingElement) -> TwistedPolynomial:
        return cls({k: a})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, TwistedPolynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: TwistedPolynomial) -> TwistedPolynomial:
        acc = dict(self.terms)
        for k, a in other.terms.items():
            acc[k] = acc[k] + a if k in acc else a
        return TwistedPolynomial(acc)

    def __neg__(self) -> TwistedPolynomial:
        return TwistedPolynomial({k: -a for k, a in self.terms.items()})

    def __sub__(self, other: TwistedPolynomial) -> TwistedPolynomial:
        return self + (-other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"t^{k}*({a})" for k, a in sorted(self.terms.items()))

    def __repr__(self) -> str:
        return f"TwistedPolynomial({str(self)!r})"


def twisted_mul(p: TwistedPolynomial, q: TwistedPolynomial, phi: Automorphism) -> TwistedPolynomial:
    """Multiply using (t^a u)(t^b v) = t^(a+b) phi^b(u) v.

    Negative exponents in ``q`` need the inverse of ``phi``.
    """
    acc: dict[int, GroupRingElement] = {}
    for b, v in q.terms.items():
        phib = phi.power(b)
        for a, u in p.terms.items():
            term = phib(u) * v
            acc[a + b] = acc[a + b] + term if (a + b) in acc else term
    return TwistedPolynomial(acc)


Matrix = list  # list of rows


def twisted_matmul(A: Matrix, B: Matrix, phi: Automorphism) -> Matrix:
    n, inner, m = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = TwistedPolynomial()
            for k in range(inner):
                if A[i][k] and B[k][j]:
                    s = s + twisted_mul(A[i][k], B[k][j], phi)
            row.append(s)
        out.append(row)
    return out


_ATOM = re.compile(r"x(\d+)(?:\^(-?\d+))?$")


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse ``x3*x1^-1*x2`` (``1`` is the identity; ``^n`` powers allowed)."""
    text = text.strip()
    if text in ("", "1"):
        return IDENTITY
    letters = []
    for atom in text.split("*"):
        m = _ATOM.match(atom.strip())
        if not m:
            raise MalformedInputError(f"cannot parse word factor {atom!r}")
        i = int(m.group(1))
        e = int(m.group(2) or 1)
        if i == 0:
            raise MalformedInputError("generators are numbered from 1")
        letters.extend([i if e > 0 else -i] * abs(e))
    return reduce_word(letters, rank)


_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_element(text: str, rank: int | None = None) -> GroupRingElement:
    """Parse the printed form of a group ring element, e.g. ``x3 - x3*x1*x2``.

    Exponents must be written ``^-1`` without spaces; the ``-`` there is not
    read as a term separator.
    """
    text = text.strip()
    if text == "0":
        return GroupRingElement()
    # protect exponent minus signs
    protected = text.replace("^-", "^~")
    terms: list[tuple[Word, int]] = []
    pos = 0
    while pos < len(protected):
        m = _TERM.match(protected, pos)
        if not m or not m.group(2).strip():
            raise MalformedInputError(f"cannot parse group ring element {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        body = m.group(2).strip().replace("^~", "^-")
        coefficient = 1
        factors = body.split("*")
        if factors[0].isdigit():
            coefficient = int(factors[0])
            factors = factors[1:]
        word = parse_word("*".join(factors), rank) if factors else IDENTITY
        terms.append((word, sign * coefficient))
        pos = m.end()
    return GroupRingElement(terms)

