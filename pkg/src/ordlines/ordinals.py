"""Ordinals below omega^omega in Cantor normal form.

A value is a tuple of (exponent, coefficient) pairs with strictly
decreasing natural exponents and coefficients >= 1.  The empty tuple is 0.
These are the only index ordinals the line grammar ever needs; omega_1 is
a symbolic token handled by the grammar itself, never a CNF value.
"""

from __future__ import annotations


Cnf = tuple  # tuple of (exp, coeff) pairs


def cnf(*terms) -> Cnf:
    """Build a CNF value from (exp, coeff) pairs, validating the shape."""
    t = tuple((int(e), int(c)) for e, c in terms)
    exps = [e for e, _ in t]
    if exps != sorted(exps, reverse=True) or len(set(exps)) != len(exps):
        raise ValueError(f"exponents must be strictly decreasing: {t}")
    if any(c < 1 for _, c in t) or any(e < 0 for e, _ in t):
        raise ValueError(f"bad CNF terms: {t}")
    return t


ZERO: Cnf = ()


def from_int(n: int) -> Cnf:
    if n < 0:
        raise ValueError("ordinal from negative int")
    return ((0, n),) if n > 0 else ()


def to_int(o: Cnf):
    """The natural number an all-finite CNF denotes, or None if >= omega."""
    if o == ():
        return 0
    if len(o) == 1 and o[0][0] == 0:
        return o[0][1]
    return None


def omega_pow(e: int, c: int = 1) -> Cnf:
    return ((e, c),)


OMEGA: Cnf = omega_pow(1)


def cnf_cmp(a: Cnf, b: Cnf) -> int:
    for (ea, ca), (eb, cb) in zip(a, b):
        if ea != eb:
            return 1 if ea > eb else -1
        if ca != cb:
            return 1 if ca > cb else -1
    if len(a) != len(b):
        return 1 if len(a) > len(b) else -1
    return 0


def cnf_add(a: Cnf, b: Cnf) -> Cnf:
    """Ordinal sum a + b (absorbs low terms of a below b's leading term)."""
    if b == ():
        return a
    eb = b[0][0]
    merged = [t for t in a if t[0] > eb]
    # a's term at exponent eb merges additively with b's leading coefficient
    extra = sum(c for e, c in a if e == eb)
    lead = (eb, b[0][1] + extra)
    merged.append(lead)
    merged.extend(b[1:])
    return tuple(merged)


def succ(o: Cnf) -> Cnf:
    return cnf_add(o, from_int(1))


def is_zero(o: Cnf) -> bool:
    return o == ()


def is_successor(o: Cnf) -> bool:
    return o != () and o[-1][0] == 0


def is_limit(o: Cnf) -> bool:
    return o != () and o[-1][0] > 0


def pred(o: Cnf):
    """Immediate predecessor, or None for 0 and limit ordinals."""
    if not is_successor(o):
        return None
    e, c = o[-1]
    if c > 1:
        return o[:-1] + ((0, c - 1),)
    return o[:-1]


def fund_seq(o: Cnf, k: int) -> Cnf:
    """k-th element (k >= 0) of the standard fundamental sequence of a limit.

    For o = g + w^e*c (e >= 1): o[k] = g + w^e*(c-1) + w^(e-1)*k.
    Strictly increasing in k with supremum o.
    """
    if not is_limit(o):
        raise ValueError(f"fundamental sequence of a non-limit: {o}")
    e, c = o[-1]
    head = o[:-1] + (((e, c - 1),) if c > 1 else ())
    if k == 0:
        return head
    return head + ((e - 1, k),)


def cnf_str(o: Cnf) -> str:
    if o == ():
        return "0"
    parts = []
    for e, c in o:
        if e == 0:
            parts.append(str(c))
        elif e == 1:
            parts.append("w" if c == 1 else f"w*{c}")
        else:
            parts.append(f"w^{e}" if c == 1 else f"w^{e}*{c}")
    return "+".join(parts)


def parse_cnf(s: str) -> Cnf:
    """Inverse of cnf_str: '0', '3', 'w', 'w*2+1', 'w^2*3+w+4'."""
    s = s.strip()
    if s == "0":
        return ()
    terms = []
    for part in s.split("+"):
        part = part.strip()
        if not part:
            raise ValueError(f"bad ordinal literal: {s!r}")
        if part.startswith("w"):
            rest = part[1:]
            e = 1
            if rest.startswith("^"):
                rest = rest[1:]
                i = 0
                while i < len(rest) and rest[i].isdigit():
                    i += 1
                if i == 0:
                    raise ValueError(f"bad ordinal literal: {s!r}")
                e = int(rest[:i])
                rest = rest[i:]
            c = 1
            if rest.startswith("*"):
                c = int(rest[1:])
            elif rest:
                raise ValueError(f"bad ordinal literal: {s!r}")
            terms.append((e, c))
        else:
            terms.append((0, int(part)))
    return cnf(*terms)
