"""Critical points of the (1, 0) energy in general dimension.

Critical rotations for W(R; D) = ||sym(R D - 1)||^2 with descending
positive diagonal D are block-diagonal after an orthogonal change of
basis: they are labeled by partitions of the index set into blocks of
size one or two together with a sign (the block determinant). A 2-block
{i, j} exists with sign +1 when nu_i + nu_j > 2 (an in-plane rotation
with cos(beta) = 2 / (nu_i + nu_j)) and with sign -1 when
|nu_i - nu_j| > 2 (an in-plane reflection pair). Singleton blocks carry
+1 or -1 directly. The critical value decouples over blocks:

    sum_{singleton +} (nu_i - 1)^2  +  sum_{singleton -} (nu_i + 1)^2
  + sum_{pair +} (nu_i - nu_j)^2 / 2  +  sum_{pair -} (nu_i + nu_j)^2 / 2

Only sign patterns with an even number of -1 blocks are realizable
inside the rotation group (odd patterns have overall determinant -1).

Indices here are 0-based; command-line reports translate to 1-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InadmissiblePartition, OrientationError, TooLarge

ENUMERATION_MAX_DIM = 10


def _as_descending(nus) -> np.ndarray:
    d = np.asarray(nus, dtype=float)
    if d.ndim != 1 or d.size < 1:
        raise ValueError("expected a 1-d array of diagonal entries")
    if np.any(d <= 0.0) or not np.all(np.isfinite(d)):
        raise ValueError("diagonal entries must be positive and finite")
    if np.any(np.diff(d) > 0.0):
        raise ValueError("diagonal entries must be sorted in descending order")
    return d


@dataclass(frozen=True)
class CriticalPartition:
    """Blocks of size one or two covering {0..n-1}, plus a sign per block."""

    blocks: tuple[tuple[int, ...], ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        order = sorted(range(len(blocks)), key=lambda i: blocks[i])
        object.__setattr__(self, "blocks", tuple(blocks[i] for i in order))
        object.__setattr__(self, "signs", tuple(int(self.signs[i]) for i in order))
        if len(self.blocks) != len(self.signs):
            raise ValueError("one sign per block required")
        seen: set[int] = set()
        for b, s in zip(self.blocks, self.signs):
            if len(b) not in (1, 2) or len(set(b)) != len(b):
                raise ValueError(f"blocks must have one or two distinct indices, got {b}")
            if s not in (-1, 1):
                raise ValueError("signs must be +1 or -1")
            seen.update(b)
        n = self.dim
        if seen != set(range(n)):
            raise ValueError("blocks must partition a contiguous index range from 0")

    @property
    def dim(self) -> int:
        return 1 + max(max(b) for b in self.blocks)

    @property
    def num_pairs(self) -> int:
        return sum(1 for b in self.blocks if len(b) == 2)

    def overall_det(self) -> int:
        d = 1
        for s in self.signs:
            d *= s
        return d


def _check_admissible(p: CriticalPartition, d: np.ndarray):
    if p.dim != len(d):
        raise InadmissiblePartition(
            f"partition covers {p.dim} indices, diagonal has {len(d)}"
        )
    for b, s in zip(p.blocks, p.signs):
        if len(b) == 2:
            i, j = b
            if s == 1 and not d[i] + d[j] > 2.0:
                raise InadmissiblePartition(
                    f"pair {b} with sign +1 needs nu_i + nu_j > 2, got {d[i] + d[j]:g}"
                )
            if s == -1 and not abs(d[i] - d[j]) > 2.0:
                raise InadmissiblePartition(
                    f"pair {b} with sign -1 needs |nu_i - nu_j| > 2, got {abs(d[i] - d[j]):g}"
                )


def _matchings(indices: tuple[int, ...]):
    """All partitions of ``indices`` into blocks of size one or two."""
    if not indices:
        yield ()
        return
    head, rest = indices[0], indices[1:]
    for tail in _matchings(rest):
        yield ((head,),) + tail
    for k, j in enumerate(rest):
        remaining = rest[:k] + rest[k + 1 :]
        for tail in _matchings(remaining):
            yield ((head, j),) + tail


def enumerate_critical_partitions(
    nus, *, require_rotation: bool = True
) -> list[CriticalPartition]:
    """Exhaustive list of admissible labeled partitions for the diagonal.

    With ``require_rotation`` (the default) only sign patterns with even
    count of -1 blocks are kept, i.e. those realizable by an actual
    rotation; the relaxed mode also lists the det -1 patterns. Guarded to
    n <= 10 because the matching count grows like the involution numbers.
    """
    d = _as_descending(nus)
    n = len(d)
    if n > ENUMERATION_MAX_DIM:
        raise TooLarge(f"exhaustive enumeration guarded to n <= {ENUMERATION_MAX_DIM}")
    out: list[CriticalPartition] = []
    for blocks in _matchings(tuple(range(n))):
        choices: list[tuple[int, ...]] = []
        feasible = True
        for b in blocks:
            if len(b) == 1:
                choices.append((1, -1))
                continue
            i, j = b
            allowed = []
            if d[i] + d[j] > 2.0:
                allowed.append(1)
            if abs(d[i] - d[j]) > 2.0:
                allowed.append(-1)
            if not allowed:
                feasible = False
                break
            choices.append(tuple(allowed))
        if not feasible:
            continue
        for signs in itertools.product(*choices):
            if require_rotation and (signs.count(-1) % 2) != 0:
                continue
            out.append(CriticalPartition(blocks=blocks, signs=signs))
    out.sort(key=lambda p: (p.blocks, p.signs))
    return out


def critical_value(p: CriticalPartition, nus) -> float:
    """Energy of the critical rotation labeled by the partition."""
    d = _as_descending(nus)
    _check_admissible(p, d)
    total = 0.0
    for b, s in zip(p.blocks, p.signs):
        if len(b) == 1:
            (i,) = b
            total += (d[i] - 1.0) ** 2 if s == 1 else (d[i] + 1.0) ** 2
        else:
            i, j = b
            total += 0.5 * (d[i] - d[j]) ** 2 if s == 1 else 0.5 * (d[i] + d[j]) ** 2
    return float(total)


def realize_rotation(p: CriticalPartition, nus) -> np.ndarray:
    """A block-diagonal rotation realizing the partition's critical value.

    For +1 pairs the +angle branch is taken (the -angle twin has the same
    energy). Raises ``OrientationError`` when the sign pattern has odd
    -1 count and therefore overall determinant -1.
    """
    d = _as_descending(nus)
    _check_admissible(p, d)
    if p.overall_det() != 1:
        raise OrientationError("sign pattern has overall determinant -1")
    n = len(d)
    r = np.zeros((n, n))
    for b, s in zip(p.blocks, p.signs):
        if len(b) == 1:
            (i,) = b
            r[i, i] = float(s)
        else:
            i, j = b
            if s == 1:
                c = 2.0 / (d[i] + d[j])
                sn = np.sqrt(1.0 - c * c)
                r[i, i] = c
                r[i, j] = -sn
                r[j, i] = sn
                r[j, j] = c
            else:
                c = 2.0 / (d[i] - d[j])
                sn = np.sqrt(1.0 - c * c)
                r[i, i] = c
                r[i, j] = sn
                r[j, i] = sn
                r[j, j] = -c
    return r


def _merge_savings(d: np.ndarray, i: int, j: int) -> float:
    """Energy drop from merging +1 singletons {i}, {j} into the +1 pair {i, j}."""
    return 0.5 * (d[i] + d[j] - 2.0) ** 2


def traversal_path(start: CriticalPartition, nus) -> list[CriticalPartition]:
    """Energy-decreasing walk from a critical point to the global minimum.

    The strategy has four stages, each of which never increases the
    critical value:

    1. flip every block sign to +1;
    2. disentangle nested or crossing pairs into consecutive pairs
       (dropping a pair that becomes inadmissible);
    3. shift the pairs onto the lowest indices, re-pairing consecutively;
    4. greedily merge adjacent singletons while nu_i + nu_j > 2.

    Returns the list of visited partitions, starting with ``start`` and
    ending at the canonical global minimizer.
    """
    d = _as_descending(nus)
    _check_admissible(start, d)
    path = [start]

    def push(blocks: list[tuple[int, ...]], signs: list[int]):
        path.append(CriticalPartition(blocks=tuple(blocks), signs=tuple(signs)))

    blocks = list(start.blocks)
    signs = list(start.signs)

    # stage 1: positive signs everywhere (a -1 pair always readmits as +1
    # because |nu_i - nu_j| > 2 forces nu_i + nu_j > 2)
    for k in range(len(signs)):
        if signs[k] == -1:
            signs[k] = 1
            push(blocks, signs)

    # stage 2: disentangle overlapping pairs
    def find_overlap():
        pairs = [b for b in blocks if len(b) == 2]
        for a, b in itertools.combinations(pairs, 2):
            lo, hi = (a, b) if a[0] < b[0] else (b, a)
            if lo[0] < hi[0] < lo[1]:  # nested or crossing
                return lo, hi
        return None

    while (hit := find_overlap()) is not None:
        lo, hi = hit
        idx = sorted(lo + hi)
        blocks = [b for b in blocks if b not in (lo, hi)]
        blocks.append((idx[0], idx[1]))
        if d[idx[2]] + d[idx[3]] > 2.0:
            blocks.append((idx[2], idx[3]))
        else:
            blocks.append((idx[2],))
            blocks.append((idx[3],))
        signs = [1] * len(blocks)
        push(blocks, signs)

    # stage 3: collect pairs at the lowest indices, consecutively paired
    m = sum(1 for b in blocks if len(b) == 2)
    if m:
        lowest = [(2 * p, 2 * p + 1) for p in range(m)]
        if sorted(b for b in blocks if len(b) == 2) != lowest:
            blocks = list(lowest) + [(i,) for i in range(2 * m, len(d))]
            signs = [1] * len(blocks)
            push(blocks, signs)

    # stage 4: extend the pair prefix while the sum constraint allows
    while 2 * m + 1 < len(d) and d[2 * m] + d[2 * m + 1] > 2.0:
        blocks = [b for b in blocks if b not in ((2 * m,), (2 * m + 1,))]
        blocks.append((2 * m, 2 * m + 1))
        signs = [1] * len(blocks)
        m += 1
        push(blocks, signs)

    return path


def traversal_minimize(start: CriticalPartition, nus) -> CriticalPartition:
    """Endpoint of :func:`traversal_path`: the canonical global minimizer."""
    return traversal_path(start, nus)[-1]


def global_min_value_10(nus) -> tuple[int, float]:
    """Pair count k and global minimum of the (1, 0) energy for a diagonal.

    k is the largest number of consecutive descending pairs with
    nu_{2i} + nu_{2i+1} > 2; the minimum is
    1/2 sum over pairs (nu_{2i} - nu_{2i+1})^2 + sum of (nu_i - 1)^2 over
    the remaining singletons. O(n), no enumeration.
    """
    d = _as_descending(nus)
    n = len(d)
    k = 0
    total = 0.0
    while 2 * k + 1 < n and d[2 * k] + d[2 * k + 1] > 2.0:
        total += 0.5 * (d[2 * k] - d[2 * k + 1]) ** 2
        k += 1
    # plain left-to-right accumulation, bit-identical to critical_value on
    # the canonical partition
    for v in d[2 * k :]:
        total += (float(v) - 1.0) ** 2
    return k, total


@dataclass(frozen=True)
class GlobalMinimizers:
    """Canonical minimum partition, its 2^k rotations, and the energy.

    ``degenerate`` flags repeated diagonal entries (the rotation list is
    then a representative sample of a non-isolated minimizer family);
    ``boundary_tie`` flags an exactly-2 pair sum just past the prefix, in
    which case merging that pair would tie the minimum value and the
    singleton form is reported as canonical.
    """

    partition: CriticalPartition
    rotations: tuple[np.ndarray, ...]
    reduced_energy: float
    k: int
    degenerate: bool
    boundary_tie: bool


def global_minimizers_nd(nus, *, with_rotations: bool = True) -> GlobalMinimizers:
    """All global minimizers of the (1, 0) energy over rotations.

    The canonical partition pairs the descending entries consecutively
    while the pair sum strictly exceeds 2; each pair contributes a +/-
    angle choice, for 2^k minimizers total. Pass ``with_rotations=False``
    to skip materializing them (k grows with n and the list is
    exponential in k).
    """
    d = _as_descending(nus)
    n = len(d)
    k, wred = global_min_value_10(d)
    blocks = [(2 * p, 2 * p + 1) for p in range(k)] + [(i,) for i in range(2 * k, n)]
    part = CriticalPartition(blocks=tuple(blocks), signs=(1,) * len(blocks))
    rotations: list[np.ndarray] = []
    if with_rotations:
        angles = [np.arccos(2.0 / (d[2 * p] + d[2 * p + 1])) for p in range(k)]
        for signs in itertools.product((1.0, -1.0), repeat=k):
            r = np.eye(n)
            for p, sg in enumerate(signs):
                b = sg * angles[p]
                c, s = np.cos(b), np.sin(b)
                i, j = 2 * p, 2 * p + 1
                r[i, i] = c
                r[i, j] = -s
                r[j, i] = s
                r[j, j] = c
            rotations.append(r)
    degenerate = bool(np.any(np.diff(d) == 0.0))
    boundary_tie = bool(2 * k + 1 < n and d[2 * k] + d[2 * k + 1] == 2.0)
    return GlobalMinimizers(
        partition=part,
        rotations=tuple(rotations),
        reduced_energy=wred,
        k=k,
        degenerate=degenerate,
        boundary_tie=boundary_tie,
    )
