"""Finite-truncation algebra of polyhomogeneous index sets.

An index set prescribes the terms ``rho^{i z} (log rho)^k`` of an asymptotic
expansion: entries are pairs ``(z, k)`` with ``z`` complex, ``k`` a natural
number, subject to

* downward log closure: ``(z, k)`` present implies ``(z, l)`` for ``l < k``;
* shift closure: ``(z, k)`` present implies ``(z - i, k)``;

both within a truncation window ``Im z > -A``.  Internally a set is a map
``z -> max k`` (downward closure is implicit).  Exponents built from rational
data are kept as exact pairs of :class:`fractions.Fraction` so that the
collision detection at the heart of the extended union never suffers float
fuzz; raw floats fall back to 1e-12 tolerance matching.

The extended union models pole-order addition for products of meromorphic
families: colliding exponents combine as ``k = l1 + l2 + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "IndexEntry",
    "IndexSet",
    "extended_union",
    "logify_indexset",
    "resonance_sets",
    "shift_S",
    "smooth_indexset",
    "log_smooth_indexset",
]

_TOL = 1e-12


def _to_part(x):
    """Normalize a real part to Fraction when exact, else float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x == int(x) and abs(x) < 2**52:
            return Fraction(int(x))
        return float(x)
    raise TypeError(f"cannot use {type(x)} as an exponent part")


def _zkey(z) -> tuple:
    """Canonical (re, im) key for a complex exponent."""
    if isinstance(z, tuple):
        re, im = z
    else:
        zc = complex(z)
        re, im = zc.real, zc.imag
    return (_to_part(re), _to_part(im))


def _as_float(part) -> float:
    return float(part)


def _keys_equal(k1, k2) -> bool:
    if isinstance(k1[0], Fraction) and isinstance(k2[0], Fraction) \
            and isinstance(k1[1], Fraction) and isinstance(k2[1], Fraction):
        return k1 == k2
    return (
        abs(_as_float(k1[0]) - _as_float(k2[0])) < _TOL
        and abs(_as_float(k1[1]) - _as_float(k2[1])) < _TOL
    )


def _shift_key(key, j=1):
    """z -> z - j*i."""
    re, im = key
    if isinstance(im, Fraction):
        return (re, im - j)
    return (re, im - float(j))


@dataclass(frozen=True)
class IndexEntry:
    """A single term ``rho^{i z} (log rho)^k``."""

    z: complex
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("log power must be nonnegative")


class IndexSet:
    """A truncated index set with automatic closure.

    Only entries with ``Im z > -depth`` are represented.  The constructor
    closes the given entries under log-power decrease and downward shifts
    within the window; every operation in this module preserves closure.
    """

    def __init__(self, entries: Iterable = (), depth: float = 4.0, _closed=False):
        self.depth = float(depth)
        self._maxk: dict = {}
        for item in entries:
            if isinstance(item, IndexEntry):
                z, k = item.z, item.k
            else:
                z, k = item
            self._insert(_zkey(z), int(k))
        if not _closed:
            self._close()

    # -- internal -----------------------------------------------------------
    def _find(self, key):
        if key in self._maxk:
            return key
        for existing in self._maxk:
            if _keys_equal(existing, key):
                return existing
        return None

    def _insert(self, key, k):
        if _as_float(key[1]) <= -self.depth:
            return
        hit = self._find(key)
        if hit is None:
            self._maxk[key] = k
        else:
            self._maxk[hit] = max(self._maxk[hit], k)

    def _close(self):
        # shift closure: propagate each entry down in steps of -i
        changed = True
        while changed:
            changed = False
            for key, k in list(self._maxk.items()):
                skey = _shift_key(key)
                if _as_float(skey[1]) <= -self.depth:
                    continue
                hit = self._find(skey)
                if hit is None or self._maxk[hit] < k:
                    self._insert(skey, k)
                    changed = True

    # -- queries ------------------------------------------------------------
    def max_log_power(self, z) -> int:
        """Largest k with (z, k) present, or -1 if z is not in the support."""
        hit = self._find(_zkey(z))
        return -1 if hit is None else self._maxk[hit]

    def support(self) -> list[complex]:
        return sorted(
            (complex(_as_float(re), _as_float(im)) for re, im in self._maxk),
            key=lambda z: (-z.imag, z.real),
        )

    def entries(self) -> list[IndexEntry]:
        """All concrete entries (z, k), downward closure expanded."""
        out = []
        for (re, im), kmax in self._maxk.items():
            z = complex(_as_float(re), _as_float(im))
            out.extend(IndexEntry(z, k) for k in range(kmax + 1))
        out.sort(key=lambda e: (-e.z.imag, e.z.real, e.k))
        return out

    def __len__(self):
        return sum(k + 1 for k in self._maxk.values())

    def __contains__(self, item):
        z, k = (item.z, item.k) if isinstance(item, IndexEntry) else item
        return 0 <= int(k) <= self.max_log_power(z)

    def __eq__(self, other):
        if not isinstance(other, IndexSet):
            return NotImplemented
        if self.depth != other.depth or len(self._maxk) != len(other._maxk):
            return False
        for key, k in self._maxk.items():
            hit = other._find(key)
            if hit is None or other._maxk[hit] != k:
                return False
        return True

    def __le__(self, other):
        for key, k in self._maxk.items():
            hit = other._find(key)
            if hit is None or other._maxk[hit] < k:
                return False
        return True

    def __repr__(self):
        inner = ", ".join(f"({e.z.real:g}{e.z.imag:+g}i, {e.k})" for e in self.entries())
        return f"IndexSet[A={self.depth:g}]{{{inner}}}"

    def verify_closed(self) -> bool:
        """Self-check of the closure invariants (shift + truncation)."""
        for key, k in self._maxk.items():
            if _as_float(key[1]) <= -self.depth:
                return False
            skey = _shift_key(key)
            if _as_float(skey[1]) > -self.depth:
                hit = self._find(skey)
                if hit is None or self._maxk[hit] < k:
                    return False
        return True

    # -- serialization ------------------------------------------------------
    def to_text(self) -> str:
        """One 'z_re,z_im,k' line per concrete entry."""
        return "\n".join(
            f"{e.z.real:.17g},{e.z.imag:.17g},{e.k}" for e in self.entries()
        )

    @classmethod
    def from_text(cls, text: str, depth: float) -> "IndexSet":
        entries = []
        for line in text.strip().splitlines():
            if not line.strip():
                continue
            re_s, im_s, k_s = line.split(",")
            entries.append((complex(float(re_s), float(im_s)), int(k_s)))
        return cls(entries, depth)


def smooth_indexset(depth: float) -> IndexSet:
    """The index set of smooth functions: {(-j i, 0)} within the window."""
    return IndexSet([((Fraction(0), Fraction(0)), 0)], depth)


def log_smooth_indexset(depth: float) -> IndexSet:
    """Entries (-j i, l) with l <= j: expansions in rho^j log^l rho.

    This is the coefficient ring produced by the logarithmic change of smooth
    structure; logify of the smooth set must reproduce it exactly.
    """
    out = IndexSet([], depth, _closed=True)
    j = 0
    while j < depth:
        out._insert((Fraction(0), Fraction(-j)), j)
        j += 1
    return out


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def _raw_extended_union(a: dict, b: dict, depth: float) -> dict:
    """Extended union on raw max-k dicts, no re-closure."""
    out = IndexSet([], depth, _closed=True)
    for key, k in a.items():
        out._insert(key, k)
    for key_b, k_b in b.items():
        k_a = None
        for key_a, v in a.items():
            if _keys_equal(key_a, key_b):
                k_a = v
                break
        if k_a is not None:
            out._insert(key_b, k_a + k_b + 1)
        out._insert(key_b, k_b)
    return out._maxk


def extended_union(E: IndexSet, F: IndexSet) -> IndexSet:
    """E union F plus collision entries (z, l1 + l2 + 1), re-closed."""
    if E.depth != F.depth:
        raise ValueError("extended union needs equal truncation depths")
    raw = _raw_extended_union(E._maxk, F._maxk, E.depth)
    return IndexSet(
        [((re, im), k) for (re, im), k in raw.items()], E.depth
    )


def shift_S(G: IndexSet) -> IndexSet:
    """The shift-with-log-raise (z, k) -> (z - i, k + 1), re-truncated."""
    return IndexSet(
        [(_shift_key(key), k + 1) for key, k in G._maxk.items()], G.depth
    )


def logify_indexset(E: IndexSet) -> IndexSet:
    """Index set of the pushforward through the logarithmic coordinate change.

    Each entry (z, k) contributes (z - j i, l) for all j >= 0 and
    0 <= l <= k + j, truncated at the window.
    """
    out = IndexSet([], E.depth, _closed=True)
    for key, kmax in E._maxk.items():
        j = 0
        while True:
            skey = _shift_key(key, j)
            if _as_float(skey[1]) <= -E.depth:
                break
            out._insert(skey, kmax + j)
            j += 1
    return IndexSet([(k, v) for k, v in out._maxk.items()], E.depth)


def resonance_sets(
    poles: Sequence, m_nonzero: bool, depth: float
) -> tuple[IndexSet, IndexSet, IndexSet, tuple[IndexSet, IndexSet]]:
    """Build the resonance index sets from a raw pole list.

    ``poles`` is a collection of (sigma, k) pairs: sigma a pole location of
    the inverse normal-operator family with order at least k+1.  The pole
    list itself is not shift-closed; its integer shifts are formed first and
    the iterated extended union is taken on the raw lists, so that colliding
    shifts of distinct poles (and only those) raise log powers.

    Returns ``(E_res0, E_res, E_scri, E_tot)`` where ``E_tot = (E_res, E_scri)``
    pairs the set at the timelike-infinity face with the one at the front face.
    """
    base: dict = {}
    holder = IndexSet([], depth, _closed=True)
    for item in poles:
        z, k = (item.z, item.k) if isinstance(item, IndexEntry) else item
        holder._insert(_zkey(z), int(k))
    base = dict(holder._maxk)
    if not base:
        empty = IndexSet([], depth)
        scri = _scri_set(m_nonzero, depth)
        return empty, empty, scri, (empty, scri)

    top = max(_as_float(key[1]) for key in base)
    acc = dict(base)
    j = 1
    while top - j > -depth:
        shifted = {_shift_key(key, j): k for key, k in base.items()}
        acc = _raw_extended_union(acc, shifted, depth)
        j += 1
    e_res0 = IndexSet([(k, v) for k, v in acc.items()], depth)
    e_res = logify_indexset(e_res0) if m_nonzero else e_res0
    e_scri = _scri_set(m_nonzero, depth)
    return e_res0, e_res, e_scri, (e_res, e_scri)


def _scri_set(m_nonzero: bool, depth: float) -> IndexSet:
    """Front-face set: rho^j log^l rho with l <= 2j if m != 0, else smooth."""
    if not m_nonzero:
        return smooth_indexset(depth)
    out = IndexSet([], depth, _closed=True)
    j = 0
    while j < depth:
        out._insert((Fraction(0), Fraction(-j)), 2 * j)
        j += 1
    return IndexSet([(k, v) for k, v in out._maxk.items()], depth)
