"""Prime partitions and the integer side of sigma-theory.

A partition of all primes is stored finitely: an ordered list of explicit
classes plus a policy for the primes not listed (one complement class, or
one singleton class per prime).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .errors import DomainError


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Return ``((p, e), ...)`` with ``prod(p**e) == n``, primes increasing."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"factorize needs a positive integer, got {n!r}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> frozenset[int]:
    return frozenset(p for p, _ in factorize(n))


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


class Remainder(enum.Enum):
    COMPLEMENT = "complement"
    SINGLETONS = "singletons"


class ClassId(NamedTuple):
    """Identifier of one class of a partition.

    ``kind`` is ``"explicit"`` (``key`` = list index), ``"complement"``
    (``key`` = -1) or ``"singleton"`` (``key`` = the prime).
    """

    kind: str
    key: int

    def __str__(self) -> str:
        if self.kind == "explicit":
            return f"class{self.key}"
        if self.kind == "complement":
            return "rest"
        return f"{{{self.key}}}"


COMPLEMENT_CLASS = ClassId("complement", -1)


@dataclass(frozen=True)
class PrimePartition:
    explicit_classes: tuple[frozenset[int], ...] = ()
    remainder: Remainder = Remainder.SINGLETONS

    def __post_init__(self):
        classes = tuple(frozenset(c) for c in self.explicit_classes)
        object.__setattr__(self, "explicit_classes", classes)
        seen: set[int] = set()
        for c in classes:
            if not c:
                raise DomainError("explicit prime classes must be non-empty")
            for p in c:
                if not is_prime(p):
                    raise DomainError(f"{p} is not a prime")
            if seen & c:
                raise DomainError(f"prime classes overlap on {sorted(seen & c)}")
            seen |= c

    # -- named partitions ------------------------------------------------
    @classmethod
    def sigma1(cls) -> "PrimePartition":
        """Every prime in its own class."""
        return cls((), Remainder.SINGLETONS)

    @classmethod
    def pi(cls, primes: Iterable[int]) -> "PrimePartition":
        """Two classes: ``primes`` and everything else."""
        return cls((frozenset(primes),), Remainder.COMPLEMENT)

    @classmethod
    def one_pi(cls, primes: Iterable[int]) -> "PrimePartition":
        """Each prime of ``primes`` alone, all other primes together."""
        return cls(tuple(frozenset([p]) for p in sorted(set(primes))),
                   Remainder.COMPLEMENT)

    @classmethod
    def parse(cls, text: str) -> "PrimePartition":
        return parse_sigma(text)

    # -- lookups ---------------------------------------------------------
    def class_of(self, p: int) -> ClassId:
        for i, c in enumerate(self.explicit_classes):
            if p in c:
                return ClassId("explicit", i)
        if self.remainder is Remainder.COMPLEMENT:
            return COMPLEMENT_CLASS
        return ClassId("singleton", p)

    def contains(self, cls_id: ClassId, p: int) -> bool:
        self._check_class(cls_id)
        return self.class_of(p) == cls_id

    def _check_class(self, cls_id: ClassId) -> None:
        kind, key = cls_id
        if kind == "explicit" and 0 <= key < len(self.explicit_classes):
            return
        if kind == "complement" and self.remainder is Remainder.COMPLEMENT:
            return
        if (kind == "singleton" and self.remainder is Remainder.SINGLETONS
                and is_prime(key) and not any(key in c for c in self.explicit_classes)):
            return
        raise DomainError(f"{cls_id!r} is not a class of {self}")

    def sigma_of(self, n: int) -> frozenset[ClassId]:
        return frozenset(self.class_of(p) for p, _ in factorize(n))

    def sigma_part(self, n: int, cls_id: ClassId) -> int:
        self._check_class(cls_id)
        part = 1
        for p, e in factorize(n):
            if self.class_of(p) == cls_id:
                part *= p ** e
        return part

    def is_primary(self, n: int) -> bool:
        return len(self.sigma_of(n)) <= 1

    def is_class_number(self, n: int, cls_id: ClassId) -> bool:
        """True when every prime divisor of ``n`` lies in ``cls_id``."""
        return self.sigma_part(n, cls_id) == n

    def agrees_on(self, other: "PrimePartition", primes: Iterable[int]) -> bool:
        """Whether both partitions induce the same blocks on ``primes``."""
        primes = sorted(set(primes))
        for i, p in enumerate(primes):
            for q in primes[i + 1:]:
                if (self.class_of(p) == self.class_of(q)) != (
                        other.class_of(p) == other.class_of(q)):
                    return False
        return True

    def pi_form(self) -> frozenset[int] | None:
        """The set ``pi`` when this partition is ``{pi, pi'}`` or ``{{p1}..{pn}, pi'}``."""
        if self.remainder is not Remainder.COMPLEMENT or not self.explicit_classes:
            return None
        return frozenset().union(*self.explicit_classes)

    def spec(self) -> str:
        """Canonical string accepted by :func:`parse_sigma`."""
        if not self.explicit_classes and self.remainder is Remainder.SINGLETONS:
            return "sigma1"
        body = ";".join("{" + ",".join(map(str, sorted(c))) + "}"
                        for c in self.explicit_classes)
        return f"classes:[{body}];rest={self.remainder.value}"

    def __str__(self) -> str:
        return self.spec()


_SET = r"\{\s*\d+(?:\s*,\s*\d+)*\s*\}"


def _primes_of(text: str) -> frozenset[int]:
    return frozenset(int(t) for t in re.findall(r"\d+", text))


def parse_sigma(text: str) -> PrimePartition:
    """Parse ``sigma1``, ``pi:{..}``, ``onepi:{..}`` or ``classes:[{..};{..}];rest=..``."""
    s = re.sub(r"\s+", "", text)
    if s == "sigma1":
        return PrimePartition.sigma1()
    m = re.fullmatch(rf"(pi|onepi):({_SET})", s)
    if m:
        primes = _primes_of(m.group(2))
        return PrimePartition.pi(primes) if m.group(1) == "pi" else PrimePartition.one_pi(primes)
    m = re.fullmatch(rf"classes:\[((?:{_SET})(?:;{_SET})*)?\](?:;rest=(complement|singletons))?", s)
    if m:
        classes = tuple(_primes_of(c) for c in re.findall(_SET, m.group(1) or ""))
        remainder = Remainder(m.group(2) or "complement")
        return PrimePartition(classes, remainder)
    raise DomainError(f"cannot parse sigma spec {text!r}")
