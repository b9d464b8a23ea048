"""
Test Packet Contracts
"""
from src.services.oracles import verify_packet_contracts


def test_packet_contracts_hold(phi_hat_2d, universe_2d):
    result = verify_packet_contracts(phi_hat_2d, universe_2d.tiles, seed=1, pairs=60)

    assert result.norm_spread <= 1e-12
    assert result.max_disjoint_overlap <= 1e-12
    assert result.structure_error <= 1e-10
    assert result.checked_pairs > 0
    assert result.checked_structure == len(universe_2d)


def test_single_tile_has_no_pairs(phi_hat_1d, universe_1d):
    result = verify_packet_contracts(phi_hat_1d, universe_1d.tiles[:1], seed=0)

    assert result.checked_pairs == 0
    assert result.max_disjoint_overlap == 0.0
