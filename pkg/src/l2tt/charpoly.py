"""Exact characteristic polynomials of integer matrices and real-root
isolation by Sturm sequences.

Polynomials are coefficient lists, constant term first. Everything here is
exact (ints and Fractions); nothing depends on the floating-point spectral
code, which is what makes it usable as a check on that code.
"""

from __future__ import annotations

from fractions import Fraction

Poly = list


def charpoly(A) -> Poly:
    """det(x I - A) by Faddeev-LeVerrier; returns integer coefficients."""
    rows = [[int(v) for v in row] for row in A]
    n = len(rows)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    Mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # Mk <- A * M_{k-1} + c_{n-k+1} I
        prod = [[sum(rows[i][l] * Mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        c_prev = coeffs[n - k + 1]
        for i in range(n):
            prod[i][i] += c_prev
        Mk = prod
        trace = sum(sum(rows[i][l] * Mk[l][i] for l in range(n)) for i in range(n))
        if trace % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        coeffs[n - k] = -trace // k
    return coeffs


def _trim(p: Poly) -> Poly:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def evaluate(p: Poly, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Poly) -> Poly:
    return _trim([i * c for i, c in enumerate(p)][1:] or [0])


def _divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a = [Fraction(c) for c in _trim(a)]
    b = [Fraction(c) for c in _trim(b)]
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a != [0]:
        shift = len(a) - len(b)
        factor = a[-1] / b[-1]
        q[shift] = factor
        for i, c in enumerate(b):
            a[i + shift] -= factor * c
        a = _trim(a)
        if len(a) == 1 and a[0] == 0:
            break
    return _trim(q), a


def _gcd(a: Poly, b: Poly) -> Poly:
    a, b = _trim(a), _trim(b)
    while b != [0]:
        _, r = _divmod(a, b)
        a, b = b, r
    return [c / a[-1] for c in a]


def squarefree(p: Poly) -> Poly:
    g = _gcd(p, derivative(p))
    if len(g) == 1:
        return [Fraction(c) for c in _trim(p)]
    q, _ = _divmod(p, g)
    return q


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [squarefree(p)]
    seq.append(derivative(seq[0]))
    while _trim(seq[-1]) != [0] and len(_trim(seq[-1])) > 1:
        _, r = _divmod(seq[-2], seq[-1])
        if r == [0]:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _changes_at(seq: list[Poly], x) -> int:
    return _sign_changes([evaluate(p, x) for p in seq])


def _changes_at_infinity(seq: list[Poly]) -> int:
    return _sign_changes([p[-1] for p in seq])


def count_roots_above(p: Poly, a) -> int:
    """Number of distinct real roots of ``p`` in (a, +infinity)."""
    seq = sturm_sequence(p)
    return _changes_at(seq, Fraction(a)) - _changes_at_infinity(seq)


def root_bound(p: Poly) -> Fraction:
    p = _trim(p)
    lead = abs(Fraction(p[-1]))
    return 1 + max((abs(Fraction(c)) / lead for c in p[:-1]), default=Fraction(0))


def largest_real_root(p: Poly, width: Fraction = Fraction(1, 10**15)) -> tuple[Fraction, Fraction]:
    """An interval (lo, hi] of width <= ``width`` containing the largest real root."""
    seq = sturm_sequence(p)
    inf_changes = _changes_at_infinity(seq)
    hi = root_bound(p)
    lo = -hi
    if _changes_at(seq, lo) - inf_changes == 0:
        raise ValueError("polynomial has no real roots")
    # invariant: a root in (lo, hi], none above hi
    while hi - lo > width:
        mid = (lo + hi) / 2
        if _changes_at(seq, mid) - inf_changes > 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def spectral_radius_exceeds_one(A) -> bool:
    """True iff the nonnegative integer matrix ``A`` has spectral radius > 1.

    For nonnegative matrices the spectral radius is itself an eigenvalue
    (the Perron root), so this is exactly "charpoly has a real root above 1".
    """
    if len(A) == 0:
        return False
    return count_roots_above(charpoly(A), 1) > 0
