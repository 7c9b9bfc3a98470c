"""Exact density bookkeeping: counts, profiles, checkpoint sequences.

Everything here is exact rational arithmetic. Limits are never computed;
profiles at explicit checkpoints are the only certificates issued.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DensitreeError, HorizonError
from .natset import NatSet, Rat, rat_text


@dataclass(frozen=True)
class DensityProfile:
    """Exact values |A ∩ n| / n at each checkpoint n.

    `asymptotic` carries the closed-form limiting density when the set's
    descriptor provides one (periodic sets); it is informational and never
    replaces a counted value.
    """

    checkpoints: tuple[int, ...]
    values: tuple[Fraction, ...]
    asymptotic: Optional[Fraction] = None

    def __post_init__(self):
        if len(self.checkpoints) != len(self.values):
            raise DensitreeError("profile length mismatch")
        if any(not (0 <= v <= 1) for v in self.values):
            raise DensitreeError("a density value escaped [0, 1]")

    def to_csv(self) -> str:
        lines = [
            f"{n},{v.numerator},{v.denominator}"
            for n, v in zip(self.checkpoints, self.values)
        ]
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        out = {
            "checkpoints": list(self.checkpoints),
            "values": [rat_text(v) for v in self.values],
        }
        if self.asymptotic is not None:
            out["asymptotic"] = rat_text(self.asymptotic)
        return out


@dataclass(frozen=True)
class KSeq:
    """The checkpoint sequence k_0 < k_1 < ... witnessing a density level.

    k_0 is the least element of the set; for n >= 1, k_n is the least
    k > k_{n-1} with |A ∩ k| >= k(eps - 2^{-n}).
    """

    epsilon: Fraction
    entries: tuple[int, ...]

    def __post_init__(self):
        if not (0 < self.epsilon <= 1):
            raise DensitreeError("epsilon must lie in (0, 1]")
        if any(b <= a for a, b in zip(self.entries, self.entries[1:])):
            raise DensitreeError("k-sequence must be strictly increasing")


def count_upto(a: NatSet, n: int) -> int:
    """|A ∩ [0, n)| by exact evaluation. Errors past A's horizon."""
    if n < 0:
        raise DensitreeError("count bound must be a natural")
    return a.count_below(n)


def _checkpoint_counts(a: NatSet, checkpoints: Sequence[int]) -> list[int]:
    """One enumeration pass, collecting |A ∩ cp| at each checkpoint."""
    counts = []
    it = a.members_below(checkpoints[-1])
    seen = 0
    nxt = next(it, None)
    for cp in checkpoints:
        while nxt is not None and nxt < cp:
            seen += 1
            nxt = next(it, None)
        counts.append(seen)
    return counts


def _validate_checkpoints(checkpoints: Sequence[int]) -> tuple[int, ...]:
    cps = tuple(checkpoints)
    if not cps:
        raise DensitreeError("at least one checkpoint required")
    if any(c <= 0 for c in cps):
        raise DensitreeError("checkpoints must be positive")
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise DensitreeError("checkpoints must be strictly increasing")
    return cps


def density_profile(a: NatSet, checkpoints: Sequence[int]) -> DensityProfile:
    """Exact |A ∩ n|/n at each checkpoint, plus closed-form density if known."""
    cps = _validate_checkpoints(checkpoints)
    counts = _checkpoint_counts(a, cps)
    values = tuple(Fraction(c, n) for c, n in zip(counts, cps))
    return DensityProfile(cps, values, asymptotic=a.asymptotic_density())


def relative_density_profile(
    b: NatSet, a: NatSet, checkpoints: Sequence[int]
) -> DensityProfile:
    """Exact |A ∩ B ∩ n| / |A ∩ n| at each checkpoint.

    Requires B ⊆ A below the last checkpoint (checked element by element)
    and a nonzero denominator at every checkpoint.
    """
    cps = _validate_checkpoints(checkpoints)
    top = cps[-1]
    for x in b.members_below(top):
        if not a.member(x):
            raise DensitreeError(f"containment violation: {x} in B but not in A")
    a_counts = _checkpoint_counts(a, cps)
    b_counts = _checkpoint_counts(b, cps)
    values = []
    for cp, ca, cb in zip(cps, a_counts, b_counts):
        if ca == 0:
            raise DensitreeError(f"|A ∩ {cp}| = 0: relative density undefined")
        values.append(Fraction(cb, ca))
    return DensityProfile(cps, tuple(values))


def _scan_first(
    a: NatSet,
    threshold: Fraction,
    start_k: int,
    limit: int,
    count_at_start: int,
) -> tuple[Optional[int], int]:
    """Least k in (start_k, limit] with |A ∩ k| >= k * threshold.

    Returns (k or None, |A ∩ k|-count at the returned position). Counting is
    incremental: count_at_start must equal |A ∩ start_k|.
    """
    p, q = threshold.numerator, threshold.denominator
    count = count_at_start
    for k in range(start_k + 1, limit + 1):
        if a.member(k - 1):
            count += 1
        # count/k >= p/q  <=>  count*q >= k*p   (exact integers)
        if count * q >= k * p:
            return k, count
    return None, count


def _effective_limit(a: NatSet, horizon: Optional[int]) -> int:
    lim = a.horizon if horizon is None else (
        horizon if a.horizon is None else min(horizon, a.horizon)
    )
    if lim is None:
        raise HorizonError(
            "k-search over an unbounded descriptor needs an explicit horizon"
        )
    return lim


def k_sequence(
    a: NatSet, eps: Rat, n_entries: int, horizon: Optional[int] = None
) -> KSeq:
    """Entries k_0 .. k_N of the checkpoint sequence, by exact search.

    Fails loudly (HorizonError) if some k_n does not appear within the
    horizon -- that is the signal that the set's profile never reaches
    eps - 2^{-n} below it.
    """
    eps = Fraction(eps)
    if not (0 < eps <= 1):
        raise DensitreeError("epsilon must lie in (0, 1]")
    limit = _effective_limit(a, horizon)
    k0 = a.first_member(0, bound=limit + 1)
    if k0 is None:
        raise DensitreeError("set is empty below the horizon; k_0 undefined")
    entries = [k0]
    count = count_upto(a, k0)
    for n in range(1, n_entries + 1):
        theta = eps - Fraction(1, 2**n)
        k, count = _scan_first(a, theta, entries[-1], limit, count)
        if k is None:
            raise HorizonError(
                f"no k <= {limit} satisfies |A ∩ k| >= k(eps - 2^-{n}); "
                "profile does not reach the threshold within the horizon"
            )
        entries.append(k)
    return KSeq(eps, tuple(entries))


def dominating_profile(
    x: NatSet, eps: Rat, n_entries: int, horizon: Optional[int] = None
) -> list[int]:
    """f(n) = min{k >= 1 : |x ∩ k|/k >= eps - 2^{-n}} for 1 <= n <= N.

    The minimum is taken over k >= 1 (k = 0 would divide by zero). The
    thresholds grow with n, so the profile is non-decreasing.
    """
    eps = Fraction(eps)
    if not (0 < eps <= 1):
        raise DensitreeError("epsilon must lie in (0, 1]")
    if x.first_member(0, bound=_effective_limit(x, horizon) + 1) is None:
        raise DensitreeError("set is empty below the horizon")
    limit = _effective_limit(x, horizon)
    out = []
    for n in range(1, n_entries + 1):
        theta = eps - Fraction(1, 2**n)
        k, _ = _scan_first(x, theta, 0, limit, 0)
        if k is None:
            raise HorizonError(
                f"f({n}) not found below {limit}: profile never reaches eps - 2^-{n}"
            )
        out.append(k)
    return out
