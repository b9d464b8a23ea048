"""
Test Wave Packets
"""
import numpy as np
import pytest

from src.models.tile import Tile
from src.services.analysis.fourier import forward
from src.services.analysis.multipliers import constant_one, riesz
from src.services.analysis.packets import (
    PacketCache,
    PacketResolutionError,
    check_representable,
    packet_decay_profile,
    packet_spectrum,
    periodic_distance,
    periodization_error,
    psi_block,
    synthesize_phi_p,
    synthesize_psi_p_zeta,
    zeta_in_semitile,
)
from src.services.analysis.quadrature import inner_product
from src.services.analysis.signals import random_test_function


class TestRepresentability:
    """2h ≤ ℓ ≤ L/4 on the L = 16, h = 1/4 grid"""

    def test_accepts_resolved_scales(self, grid_1d):
        for k in (-1, 0, 1, 2):
            check_representable(Tile.from_indices(k, (0,), (0,)), grid_1d)

    def test_rejects_fine_scale(self, grid_1d):
        with pytest.raises(PacketResolutionError, match="finer than the grid resolution"):
            check_representable(Tile.from_indices(-2, (0,), (0,)), grid_1d)

    def test_rejects_coarse_scale(self, grid_1d):
        with pytest.raises(PacketResolutionError, match="too coarse"):
            check_representable(Tile.from_indices(3, (0,), (0,)), grid_1d)

    def test_rejects_dimension_mismatch(self, grid_2d):
        with pytest.raises(PacketResolutionError, match="does not match grid dim"):
            check_representable(Tile.from_indices(1, (0,), (0,)), grid_2d)

    def test_rejects_spectrum_outside_span(self, phi_hat_1d):
        with pytest.raises(PacketResolutionError, match="leaves the frequency span"):
            packet_spectrum(Tile.from_indices(0, (0,), (5,)), phi_hat_1d)


class TestPacketSpectrum:
    def test_pair_matches_spatial_inner_product(self, grid_2d, phi_hat_2d, universe_2d):
        """Frequency-side pairing equals the spatial Riemann sum"""
        f = random_test_function("smooth-noise", 4, grid_2d)
        f_hat = forward(f).samples
        for p in universe_2d.tiles[:6]:
            spectrum = packet_spectrum(p, phi_hat_2d)
            spatial = inner_product(f, synthesize_phi_p(p, phi_hat_2d))

            assert spectrum.pair(f_hat) == pytest.approx(spatial, abs=1e-12)

    def test_same_scale_norms_agree(self, phi_hat_2d, universe_2d):
        norms = {}
        for p in universe_2d.tiles:
            norms.setdefault(p.scale, []).append(synthesize_phi_p(p, phi_hat_2d).norm())

        for values in norms.values():
            assert max(values) - min(values) <= 1e-12 * max(values)

    def test_disjoint_frequency_supports_are_orthogonal(self, phi_hat_1d):
        p = Tile.from_indices(0, (0,), (0,))
        q = Tile.from_indices(0, (0,), (1,))

        overlap = inner_product(synthesize_phi_p(p, phi_hat_1d), synthesize_phi_p(q, phi_hat_1d))

        assert abs(overlap) < 1e-14

    def test_frequencies_shape(self, phi_hat_2d, universe_2d):
        spectrum = packet_spectrum(universe_2d.tiles[0], phi_hat_2d)

        assert spectrum.frequencies().shape == spectrum.block.shape + (2,)


class TestPsi:
    def test_zeta_in_semitile(self):
        p = Tile.from_indices(1, (0,), (0,))

        assert zeta_in_semitile(p, [0.375], 2)
        assert not zeta_in_semitile(p, [0.125], 2)

    def test_constant_one_gives_phi(self, phi_hat_1d):
        p = Tile.from_indices(1, (0,), (0,))
        psi = synthesize_psi_p_zeta(p, [0.375], constant_one(), phi_hat_1d, 2)

        np.testing.assert_allclose(psi.samples, synthesize_phi_p(p, phi_hat_1d).samples, atol=1e-15)

    def test_riesz_is_a_sign_in_one_dimension(self, phi_hat_1d):
        """The support of φ̂_p lies below ω_{p(2)}, so ξ − ζ < 0 there"""
        p = Tile.from_indices(1, (0,), (0,))
        psi = synthesize_psi_p_zeta(p, [0.375], riesz(1), phi_hat_1d, 2)

        np.testing.assert_allclose(psi.samples, -synthesize_phi_p(p, phi_hat_1d).samples, atol=1e-15)

    def test_zeta_outside_semitile(self, phi_hat_1d):
        p = Tile.from_indices(1, (0,), (0,))
        spectrum = packet_spectrum(p, phi_hat_1d)

        with pytest.raises(ValueError, match="is not in semitile 2"):
            psi_block(spectrum, p, [0.125 + 0.5], riesz(1), 2)
        psi_block(spectrum, p, [0.625], riesz(1), 2, allow_outside=True)


class TestPacketCache:
    def test_warm_and_reuse(self, phi_hat_2d, universe_2d):
        cache = PacketCache(phi_hat_2d).warm(universe_2d.tiles[:5])

        assert len(cache) == 5
        assert cache.spectrum(universe_2d.tiles[0]) is cache.spectrum(universe_2d.tiles[0])
        assert cache.grid is phi_hat_2d.grid


class TestDiagnostics:
    def test_periodic_distance(self, grid_1d):
        dist = periodic_distance(grid_1d, [0.0])

        assert dist[0] == pytest.approx(8.0)
        assert dist[32] == 0.0
        assert dist[31] == pytest.approx(0.25)

    def test_packet_decay_profile(self, phi_hat_1d):
        p = Tile.from_indices(1, (0,), (0,))

        value = packet_decay_profile(p, [0.375], riesz(1), phi_hat_1d, 2, nu=5)

        assert np.isfinite(value)
        assert value > 0

    def test_periodization_error(self, phi_hat_2d, universe_2d):
        value = periodization_error(universe_2d.tiles[0], phi_hat_2d)

        assert np.isfinite(value)
        assert value >= 0
