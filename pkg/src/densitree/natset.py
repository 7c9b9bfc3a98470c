"""Finitely-described subsets of the naturals with decidable membership.

Four descriptor kinds:

* ``ExplicitSet`` -- a finite list.
* ``PeriodicSet`` -- residue classes mod m from a threshold on, with finite
  add/remove exceptions below the threshold.
* ``BlockSet`` -- a deterministic generator emitting disjoint blocks, each a
  union of arithmetic runs (used by the antichain family builders).
* ``ComboSet`` -- union / intersection / difference / complement.

Membership is total and deterministic below a set's evaluation horizon
(``None`` means unbounded); asking beyond the horizon raises
:class:`~densitree.errors.HorizonError` instead of extrapolating.

Canonical textual forms::

    explicit:[0,4,8]
    periodic:m=4;r=[0,3];t=12;add=[5];del=[7]
    blocks:eps_antichain(eps=1/2;f=10)
    combo:union(explicit:[0],periodic:m=2;r=[1])

All densities and thresholds are exact rationals (``fractions.Fraction``);
no float enters any verdict.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional

from .errors import DescriptorError, HorizonError

Rat = Fraction


def parse_rat(text: str) -> Fraction:
    """Parse ``NUM/DEN`` (or a bare integer) into an exact rational."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def rat_text(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _resolve(own: Optional[int], requested: Optional[int]) -> Optional[int]:
    if own is None:
        return requested
    if requested is None:
        return own
    return min(own, requested)


class NatSet:
    """Base class; subclasses implement `_member` and may override iteration."""

    horizon: Optional[int] = None

    def _member(self, n: int) -> bool:
        raise NotImplementedError

    def _check_horizon(self, n: int) -> None:
        if self.horizon is not None and n > self.horizon:
            raise HorizonError(
                f"membership at {n} exceeds horizon {self.horizon} of {self.to_text()}"
            )

    def member(self, n: int) -> bool:
        if n < 0:
            return False
        self._check_horizon(n)
        return self._member(n)

    def __contains__(self, n: int) -> bool:
        return self.member(n)

    def members_below(self, bound: int) -> Iterator[int]:
        """Increasing members in [0, bound); requires bound <= horizon."""
        if bound > 0:
            self._check_horizon(bound - 1)
        return self._iter_below(bound)

    def _iter_below(self, bound: int) -> Iterator[int]:
        return (n for n in range(bound) if self._member(n))

    def count_below(self, bound: int) -> int:
        """|self ∩ [0, bound)| by exact evaluation."""
        return sum(1 for _ in self.members_below(bound))

    def first_member(self, start: int = 0, bound: Optional[int] = None) -> Optional[int]:
        """Least member >= start, scanning up to `bound` (or the horizon)."""
        limit = _resolve(self.horizon, None if bound is None else bound - 1)
        if limit is None:
            raise HorizonError(
                f"unbounded search on {self.to_text()}: pass an explicit bound"
            )
        for n in range(max(start, 0), limit + 1):
            if self._member(n):
                return n
        return None

    def asymptotic_density(self) -> Optional[Fraction]:
        """Exact limiting density when the descriptor carries one in closed form."""
        return None

    # -- algebra -----------------------------------------------------------

    def union(self, other: "NatSet") -> "NatSet":
        return ComboSet("union", (self, other))

    def intersection(self, other: "NatSet") -> "NatSet":
        return ComboSet("inter", (self, other))

    def difference(self, other: "NatSet") -> "NatSet":
        return ComboSet("diff", (self, other))

    def complement(self) -> "NatSet":
        return ComboSet("compl", (self,))

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def tail(self, start: int) -> "NatSet":
        """self with everything below `start` removed."""
        if start <= 0:
            return self
        return self.difference(ExplicitSet.of(range(start)))

    def to_text(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"{type(self).__name__}({self.to_text()!r})"


@dataclass(frozen=True)
class ExplicitSet(NatSet):
    """A finite set, stored sorted and duplicate-free. Total (no horizon)."""

    elements: tuple[int, ...]
    horizon: Optional[int] = None

    def __post_init__(self):
        elems = tuple(sorted(set(self.elements)))
        if elems and elems[0] < 0:
            raise DescriptorError("explicit sets live in the naturals")
        object.__setattr__(self, "elements", elems)

    @classmethod
    def of(cls, it: Iterable[int]) -> "ExplicitSet":
        return cls(tuple(it))

    def _member(self, n: int) -> bool:
        i = bisect.bisect_left(self.elements, n)
        return i < len(self.elements) and self.elements[i] == n

    def _iter_below(self, bound: int) -> Iterator[int]:
        return iter(self.elements[: bisect.bisect_left(self.elements, bound)])

    def asymptotic_density(self) -> Fraction:
        return Fraction(0)

    def to_text(self) -> str:
        return "explicit:[" + ",".join(str(e) for e in self.elements) + "]"


@dataclass(frozen=True)
class PeriodicSet(NatSet):
    """Residue classes mod `modulus`, exact from `threshold` on.

    Below the threshold the residue rule still applies except on the finite
    `added` / `removed` exception lists. Total (no horizon); the asymptotic
    density |R|/m is available in closed form.
    """

    modulus: int
    residues: frozenset[int]
    threshold: int = 0
    added: tuple[int, ...] = ()
    removed: tuple[int, ...] = ()
    horizon: Optional[int] = None

    def __post_init__(self):
        if self.modulus < 1:
            raise DescriptorError("modulus must be >= 1")
        res = frozenset(int(r) for r in self.residues)
        if not all(0 <= r < self.modulus for r in res):
            raise DescriptorError("residues must lie in [0, modulus)")
        add = tuple(sorted(set(self.added)))
        rem = tuple(sorted(set(self.removed)))
        if any(x >= self.threshold or x < 0 for x in add + rem):
            raise DescriptorError("exceptions must lie below the threshold")
        if set(add) & set(rem):
            raise DescriptorError("an exception cannot be both added and removed")
        object.__setattr__(self, "residues", res)
        object.__setattr__(self, "added", add)
        object.__setattr__(self, "removed", rem)

    @classmethod
    def multiples_of(cls, m: int) -> "PeriodicSet":
        return cls(m, frozenset({0}))

    @classmethod
    def residue(cls, m: int, i: int) -> "PeriodicSet":
        return cls(m, frozenset({i % m}))

    def _member(self, n: int) -> bool:
        if n < self.threshold:
            if n in self.added:
                return True
            if n in self.removed:
                return False
        return n % self.modulus in self.residues

    def _iter_below(self, bound: int) -> Iterator[int]:
        pre = min(self.threshold, bound)
        for n in range(pre):
            if self._member(n):
                yield n
        if bound <= self.threshold:
            return
        base = self.threshold
        start_block = base - base % self.modulus
        res = sorted(self.residues)
        for blk in range(start_block, bound, self.modulus):
            for r in res:
                n = blk + r
                if base <= n < bound:
                    yield n

    def asymptotic_density(self) -> Fraction:
        return Fraction(len(self.residues), self.modulus)

    def to_text(self) -> str:
        return (
            f"periodic:m={self.modulus}"
            + ";r=[" + ",".join(str(r) for r in sorted(self.residues)) + "]"
            + f";t={self.threshold}"
            + ";add=[" + ",".join(str(x) for x in self.added) + "]"
            + ";del=[" + ",".join(str(x) for x in self.removed) + "]"
        )


# A block is (start, end, runs); each run (first, step, count) lies in [start, end).
Block = tuple[int, int, tuple[tuple[int, int, int], ...]]

_GENERATORS: dict[str, Callable[[dict], Iterator[Block]]] = {}


def register_block_generator(name: str, fn: Callable[[dict], Iterator[Block]]) -> None:
    """Register a deterministic block generator under a stable id."""
    if name in _GENERATORS and _GENERATORS[name] is not fn:
        raise DescriptorError(f"block generator {name!r} already registered")
    _GENERATORS[name] = fn


def block_generator_ids() -> tuple[str, ...]:
    return tuple(sorted(_GENERATORS))


def _run_count_below(run: tuple[int, int, int], bound: int) -> int:
    first, step, count = run
    if bound <= first:
        return 0
    return min(count, (bound - first + step - 1) // step)


def _run_member(run: tuple[int, int, int], n: int) -> bool:
    first, step, count = run
    return n >= first and (n - first) % step == 0 and (n - first) // step < count


class BlockSet(NatSet):
    """Lazily generated union of disjoint blocks of arithmetic runs."""

    def __init__(self, generator_id: str, params: dict, horizon: Optional[int] = None):
        if generator_id not in _GENERATORS:
            raise DescriptorError(f"unknown block generator {generator_id!r}")
        self.generator_id = generator_id
        self.params = dict(params)
        self.horizon = horizon
        self._blocks: list[Block] = []
        self._starts: list[int] = []
        self._gen: Optional[Iterator[Block]] = _GENERATORS[generator_id](self.params)
        self._exhausted = False
        self._covered = 0  # membership below this is settled

    def _pull(self) -> bool:
        if self._exhausted:
            return False
        blk = next(self._gen, None)  # type: ignore[arg-type]
        if blk is None:
            self._exhausted = True
            self._gen = None
            return False
        start, end, runs = blk
        if end <= start:
            raise DescriptorError("empty block emitted")
        if self._blocks and start < self._blocks[-1][1]:
            raise DescriptorError(
                f"generator {self.generator_id} emitted overlapping blocks"
            )
        self._blocks.append(blk)
        self._starts.append(start)
        self._covered = end
        return True

    def _extend_to(self, n: int) -> None:
        while not self._exhausted and self._covered <= n:
            self._pull()

    def _member(self, n: int) -> bool:
        self._extend_to(n)
        i = bisect.bisect_right(self._starts, n) - 1
        if i < 0:
            return False
        start, end, runs = self._blocks[i]
        if n >= end:
            return False
        return any(_run_member(r, n) for r in runs)

    def _iter_below(self, bound: int) -> Iterator[int]:
        if bound <= 0:
            return
        self._extend_to(bound - 1)
        for start, end, runs in self._blocks:
            if start >= bound:
                break
            vals: set[int] = set()
            for first, step, count in runs:
                last = first + step * (count - 1)
                top = min(last, bound - 1)
                if top >= first:
                    vals.update(range(first, top + 1, step))
            yield from sorted(vals)

    def count_below(self, bound: int) -> int:
        """Exact count by per-run arithmetic (runs inside a block are disjoint)."""
        if bound > 0:
            self._check_horizon(bound - 1)
        if bound <= 0:
            return 0
        self._extend_to(bound - 1)
        total = 0
        for start, end, runs in self._blocks:
            if start >= bound:
                break
            total += sum(_run_count_below(r, min(end, bound)) for r in runs)
        return total

    def first_member(self, start: int = 0, bound: Optional[int] = None) -> Optional[int]:
        limit = _resolve(self.horizon, None if bound is None else bound - 1)
        n = max(start, 0)
        i = 0
        while True:
            while i >= len(self._blocks):
                if not self._pull():
                    return None
            blk_start, blk_end, runs = self._blocks[i]
            if limit is not None and blk_start > limit:
                return None
            if blk_end > n:
                hits = [c for c in (_next_in_run(r, n) for r in runs) if c is not None]
                if hits:
                    hit = min(hits)
                    if limit is not None and hit > limit:
                        return None
                    return hit
            i += 1

    def to_text(self) -> str:
        items = ";".join(f"{k}={_param_text(v)}" for k, v in sorted(self.params.items()))
        return f"blocks:{self.generator_id}({items})"

    def __eq__(self, other):
        return (
            isinstance(other, BlockSet)
            and self.generator_id == other.generator_id
            and self.params == other.params
        )

    def __hash__(self):
        return hash((self.generator_id, tuple(sorted(self.params.items(), key=str))))


def _next_in_run(run: tuple[int, int, int], n: int) -> Optional[int]:
    first, step, count = run
    last = first + step * (count - 1)
    if n <= first:
        return first
    if n > last:
        return None
    k = (n - first + step - 1) // step
    return first + step * k


def _param_text(v) -> str:
    if isinstance(v, Fraction):
        return rat_text(v)
    return str(v)


_COMBO_OPS = ("union", "inter", "diff", "compl")


@dataclass(frozen=True)
class ComboSet(NatSet):
    """Boolean combination; horizon is the tightest of the operands'."""

    op: str
    args: tuple[NatSet, ...]

    def __post_init__(self):
        if self.op not in _COMBO_OPS:
            raise DescriptorError(f"unknown combo op {self.op!r}")
        want = 1 if self.op == "compl" else 2
        if len(self.args) != want:
            raise DescriptorError(f"combo {self.op} takes {want} argument(s)")

    @property
    def horizon(self) -> Optional[int]:  # type: ignore[override]
        h = None
        for a in self.args:
            h = _resolve(h, a.horizon)
        return h

    def _member(self, n: int) -> bool:
        if self.op == "union":
            return self.args[0].member(n) or self.args[1].member(n)
        if self.op == "inter":
            return self.args[0].member(n) and self.args[1].member(n)
        if self.op == "diff":
            return self.args[0].member(n) and not self.args[1].member(n)
        return not self.args[0].member(n)

    def to_text(self) -> str:
        inner = ",".join(a.to_text() for a in self.args)
        return f"combo:{self.op}({inner})"


FULL = PeriodicSet(1, frozenset({0}))
EMPTY = ExplicitSet(())


def evens() -> PeriodicSet:
    return PeriodicSet(2, frozenset({0}))


def odds() -> PeriodicSet:
    return PeriodicSet(2, frozenset({1}))


# -- parsing ----------------------------------------------------------------


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise DescriptorError(f"expected [..] list, got {text!r}")
    body = text[1:-1].strip()
    if not body:
        return ()
    return tuple(int(x) for x in body.split(","))


def from_text(text: str, horizon: Optional[int] = None) -> NatSet:
    """Parse the canonical textual form back into a NatSet."""
    text = text.strip()
    kind, _, rest = text.partition(":")
    if not rest:
        raise DescriptorError(f"malformed descriptor {text!r}")
    if kind == "explicit":
        return ExplicitSet(_parse_int_list(rest), horizon=horizon)
    if kind == "periodic":
        fields = {}
        for item in _split_top(rest, ";"):
            key, _, val = item.partition("=")
            fields[key.strip()] = val.strip()
        if "m" not in fields or "r" not in fields:
            raise DescriptorError(f"periodic descriptor needs m and r: {text!r}")
        return PeriodicSet(
            modulus=int(fields["m"]),
            residues=frozenset(_parse_int_list(fields["r"])),
            threshold=int(fields.get("t", 0)),
            added=_parse_int_list(fields.get("add", "[]")),
            removed=_parse_int_list(fields.get("del", "[]")),
            horizon=horizon,
        )
    if kind == "blocks":
        if not rest.endswith(")") or "(" not in rest:
            raise DescriptorError(f"malformed blocks descriptor {text!r}")
        gen, _, params_text = rest[:-1].partition("(")
        params: dict = {}
        if params_text:
            for item in _split_top(params_text, ";"):
                key, _, val = item.partition("=")
                params[key.strip()] = val.strip()
        return BlockSet(gen.strip(), params, horizon=horizon)
    if kind == "combo":
        if not rest.endswith(")") or "(" not in rest:
            raise DescriptorError(f"malformed combo descriptor {text!r}")
        op, _, inner = rest[:-1].partition("(")
        args = tuple(from_text(part) for part in _split_top(inner, ","))
        return ComboSet(op.strip(), args)
    raise DescriptorError(f"unknown descriptor kind {kind!r}")
