"""Left/right alternating expansion intervals around an anchor point."""

from dataclasses import dataclass

from .types import Interval, SpecError


def _ceil_div(a, b):
    return -(-a // b)


@dataclass(frozen=True)
class ExpansionSchedule:
    anchor: int
    lam: int
    intervals: tuple

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def as_lists(self):
        return [iv.as_list() for iv in self.intervals]


def raw_endpoints(s, e, anchor, lam):
    """Left and right end-point sequences before duplicate removal (each of length K)."""
    k_left = _ceil_div(anchor - s + 1, lam)
    k_right = _ceil_div(e - anchor + 1, lam)
    k_min, k_max = min(k_left, k_right), max(k_left, k_right)

    def left(m):
        return max(anchor - m * lam, s)

    def right(k):
        return min(anchor + k * lam - 1, e)

    # first 2*k_min steps alternate right, left; afterwards both move (one is pinned)
    lefts = [left(j // 2) for j in range(1, 2 * k_min + 1)]
    rights = [right((j + 1) // 2) for j in range(1, 2 * k_min + 1)]
    lefts += [left(m) for m in range(k_min + 1, k_max + 1)]
    rights += [right(k) for k in range(k_min + 1, k_max + 1)]
    return lefts, rights


def build_schedule(s, e, anchor, lam):
    """Ordered expansion intervals around ``anchor``; consecutive duplicates are dropped.

    The first interval is ``[anchor, anchor + lam - 1]``, then the left end moves
    out by ``lam``, then the right end, and so on until one side reaches its
    boundary, after which only the other side keeps moving. The last interval
    is always ``[s, e]``.
    """
    if int(lam) != lam or lam < 1:
        raise SpecError(f"lambda must be a positive integer, got {lam}")
    if not (1 <= s <= anchor <= e - 1):
        raise SpecError(f"need s <= anchor <= e - 1, got s={s}, anchor={anchor}, e={e}")
    lefts, rights = raw_endpoints(s, e, anchor, int(lam))
    out = []
    for pair in zip(lefts, rights):
        if not out or out[-1] != pair:
            out.append(pair)
    return ExpansionSchedule(anchor, int(lam), tuple(Interval(a, b) for a, b in out))
