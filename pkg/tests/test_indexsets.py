"""Tests for the index-set algebra."""

from fractions import Fraction

import numpy as np
import pytest

from radfield.indexsets import (
    IndexEntry,
    IndexSet,
    extended_union,
    log_smooth_indexset,
    logify_indexset,
    resonance_sets,
    shift_S,
    smooth_indexset,
)


def zi(j):
    """Exact exponent -j*i."""
    return (Fraction(0), Fraction(-j))


class TestClosure:
    def test_shift_closure_applied(self):
        E = IndexSet([(zi(0), 1)], depth=2.5)
        assert (0j, 1) in E
        assert (-1j, 1) in E
        assert (-2j, 1) in E
        assert (-3j, 1) not in E
        assert E.verify_closed()

    def test_downward_log_closure(self):
        E = IndexSet([(zi(1), 2)], depth=1.5)
        assert (-1j, 0) in E and (-1j, 1) in E and (-1j, 2) in E
        assert (-1j, 3) not in E

    def test_float_tolerance_merge(self):
        E = IndexSet([(complex(0.3, -0.5), 0), (complex(0.3 + 1e-14, -0.5), 2)], depth=1.0)
        assert E.max_log_power(complex(0.3, -0.5)) == 2
        assert len(E.support()) == 1


class TestExtendedUnion:
    def test_disjoint_supports_plain_union(self):
        E = IndexSet([(zi(0), 0)], depth=1.5)
        F = IndexSet([((Fraction(1), Fraction(0)), 0)], depth=1.5)
        U = extended_union(E, F)
        assert U.max_log_power(0j) == 0
        assert U.max_log_power(1 + 0j) == 0

    def test_collision_raises_log(self):
        E = IndexSet([(zi(0), 0)], depth=1.5)
        U = extended_union(E, E)
        # l1 = l2 = 0 collide: k = 1, and the shifts inherit it
        assert U.max_log_power(0j) == 1
        assert U.max_log_power(-1j) == 1

    def test_collision_with_existing_log(self):
        E = IndexSet([(zi(0), 1)], depth=1.2)
        F = IndexSet([(zi(0), 0)], depth=1.2)
        U = extended_union(E, F)
        assert U.max_log_power(0j) == 2

    def test_depth_mismatch_rejected(self):
        with pytest.raises(ValueError):
            extended_union(IndexSet([], 1.0), IndexSet([], 2.0))

    def test_contains_plain_union(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            E = _random_set(rng, depth=3.5)
            F = _random_set(rng, depth=3.5)
            U = extended_union(E, F)
            assert E <= U and F <= U
            zs_e = {(round(z.real, 9), round(z.imag, 9)) for z in E.support()}
            zs_f = {(round(z.real, 9), round(z.imag, 9)) for z in F.support()}
            plain_equal = all(
                U.max_log_power(z) == max(E.max_log_power(z), F.max_log_power(z))
                for z in U.support()
            )
            assert plain_equal == (not (zs_e & zs_f))


def _random_set(rng, depth):
    n = rng.integers(1, 4)
    entries = []
    for _ in range(n):
        re = Fraction(int(rng.integers(-2, 3)), 2)
        im = Fraction(-int(rng.integers(0, 5)), 2)
        entries.append(((re, im), int(rng.integers(0, 3))))
    return IndexSet(entries, depth)


class TestAlgebraProperties:
    def test_commutative_and_associative(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            E = _random_set(rng, 3.5)
            F = _random_set(rng, 3.5)
            G = _random_set(rng, 3.5)
            assert extended_union(E, F) == extended_union(F, E)
            left = extended_union(extended_union(E, F), G)
            right = extended_union(E, extended_union(F, G))
            assert left == right

    def test_outputs_closed(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            E = _random_set(rng, 3.0)
            F = _random_set(rng, 3.0)
            assert extended_union(E, F).verify_closed()
            assert shift_S(E).verify_closed()
            assert logify_indexset(E).verify_closed()


class TestShift:
    def test_single_entry(self):
        S = shift_S(IndexSet([(zi(0), 0)], depth=2.5))
        assert S.max_log_power(-1j) == 1
        assert (-1j, 0) in S  # downward log closure
        assert S.max_log_power(-2j) == 1  # shift closure within window

    def test_empty(self):
        assert len(shift_S(IndexSet([], 2.0))) == 0

    def test_double_shift_top_entry(self):
        S2 = shift_S(shift_S(IndexSet([(zi(0), 0)], depth=3.5)))
        assert S2.max_log_power(-2j) == 2


class TestLogify:
    def test_smooth_set_gives_log_smooth(self):
        for depth in (2.5, 4.0, 6.5):
            assert logify_indexset(smooth_indexset(depth)) == log_smooth_indexset(depth)

    def test_empty(self):
        assert len(logify_indexset(IndexSet([], 3.0))) == 0

    def test_single_offset_entry(self):
        z0 = (Fraction(1, 2), Fraction(-3, 10))  # Im z0 = -0.3
        E = IndexSet([(z0, 0)], depth=2.5)
        L = logify_indexset(E)
        # (z0 - j i, l <= j) for j = 0, 1, 2
        for j in range(3):
            assert L.max_log_power(complex(0.5, -0.3 - j)) == j
        assert L.max_log_power(complex(0.5, -3.3)) == -1

    def test_monotone(self):
        rng = np.random.default_rng(17)
        for _ in range(40):
            E = _random_set(rng, 3.0)
            F = extended_union(E, _random_set(rng, 3.0))
            assert E <= F
            assert logify_indexset(E) <= logify_indexset(F)


class TestResonanceSets:
    def test_single_pole_massless(self):
        e0, eres, escri, etot = resonance_sets([(-1j, 0)], m_nonzero=False, depth=3.5)
        assert sorted((z.imag, e0.max_log_power(z)) for z in e0.support()) == [
            (-3.0, 0),
            (-2.0, 0),
            (-1.0, 0),
        ]
        assert eres == e0
        assert escri == smooth_indexset(3.5)

    def test_single_pole_massive(self):
        _, eres, escri, _ = resonance_sets([(-1j, 0)], m_nonzero=True, depth=3.5)
        # {(-n i, l): 1 <= n <= 3, 0 <= l <= n-1}
        for n in (1, 2, 3):
            assert eres.max_log_power(complex(0, -n)) == n - 1
        assert eres.max_log_power(-4j) == -1
        # front face carries rho^j log^l rho, l <= 2j
        for j in (1, 2, 3):
            assert escri.max_log_power(complex(0, -j)) == 2 * j

    def test_colliding_shifts(self):
        e0, _, _, _ = resonance_sets([(-1j, 0), (-2j, 0)], m_nonzero=False, depth=3.5)
        # the shift of -1j collides with the pole at -2j
        assert e0.max_log_power(-2j) == 1
        assert e0.max_log_power(-1j) == 0

    def test_empty_pole_list(self):
        e0, eres, escri, _ = resonance_sets([], m_nonzero=True, depth=2.0)
        assert len(e0) == 0 and len(eres) == 0
        assert escri.max_log_power(-1j) == 2


class TestSerialization:
    def test_round_trip(self):
        E = IndexSet([(zi(1), 1), ((Fraction(1, 3), Fraction(-1, 2)), 0)], depth=2.5)
        text = E.to_text()
        back = IndexSet.from_text(text, 2.5)
        assert back == E

    def test_line_format(self):
        E = IndexSet([(zi(1), 1)], depth=1.5)
        lines = E.to_text().splitlines()
        assert "-1,1" in lines[1].replace("0,", "", 1) or len(lines) == 2
        for line in lines:
            parts = line.split(",")
            assert len(parts) == 3


class TestEntryValidation:
    def test_negative_log_power_rejected(self):
        with pytest.raises(ValueError):
            IndexEntry(0j, -1)
