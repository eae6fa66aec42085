import numpy as np
import pytest

from ptsync.benchmark import benchmark_network
from ptsync.errors import (
    AssumptionViolatedError,
    InvalidParametersError,
    MissingPinningError,
    NotNegativeInTSError,
)
from ptsync.linalg import symmetric_eigen
from ptsync.network import (
    MultiWeightNetwork,
    PinningConfig,
    assemble_stacked,
    build_sum_matrices,
    check_assumption_a1,
    compute_threshold,
    fiedler_lambda2,
    nlevecs,
)
from ptsync.regulator import Regulator

HF = 5.4704

EXPECTED_DIAG = [
    np.array([[-21.0, 9.0, 12.0], [0.0, -72.0, 72.0], [90.0, 0.0, -90.0]]),
    np.array([[-27.0, 17.0, 10.0], [0.0, -55.0, 55.0], [46.0, 0.0, -46.0]]),
    np.array([[-30.0, 16.0, 14.0], [0.0, -71.0, 71.0], [68.0, 0.0, -68.0]]),
]


def _random_network(rng, pinned=False):
    n_nodes, n_dims, layers = 3, 2, 2
    ocms = []
    for _ in range(layers):
        m = rng.uniform(0.1, 2.0, (n_nodes, n_nodes))
        np.fill_diagonal(m, 0.0)
        np.fill_diagonal(m, -m.sum(axis=1))
        ocms.append(m)
    icms = []
    for _ in range(layers):
        g = rng.uniform(-1.0, 1.0, (n_dims, n_dims))
        icms.append((g + g.T) / 2.0)
    pinning = None
    if pinned:
        g = rng.uniform(0.5, 2.0, n_dims)
        pinning = PinningConfig(gain=np.diag(g), target_initial=rng.standard_normal(n_dims))
    return MultiWeightNetwork(
        ocms=ocms, icms=icms, eta=1.0, regulator=Regulator("power", T=1.0), pinning=pinning
    )


class TestSumMatrices:
    def test_benchmark_diagonal_blocks_exact(self):
        s = build_sum_matrices(benchmark_network(1.0))
        for d in range(3):
            np.testing.assert_array_equal(s.blocks[d, d], EXPECTED_DIAG[d])
        assert s.diagonal_only
        assert not s.pinned

    def test_benchmark_off_diagonal_blocks_vanish(self):
        s = build_sum_matrices(benchmark_network(1.0))
        for d in range(3):
            for e in range(3):
                if d != e:
                    np.testing.assert_array_equal(s.blocks[d, e], np.zeros((3, 3)))

    def test_benchmark_pinned_corner_entries(self):
        s = build_sum_matrices(benchmark_network(1.0, pinned=True), with_pinning=True)
        assert s.pinned
        corners = [s.blocks[d, d, 0, 0] for d in range(3)]
        assert corners == [-32.0, -40.0, -45.0]
        # Everything except the pinned corner is unchanged.
        for d in range(3):
            expected = EXPECTED_DIAG[d].copy()
            expected[0, 0] = corners[d]
            np.testing.assert_array_equal(s.blocks[d, d], expected)

    def test_matches_naive_triple_loop(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            net = _random_network(rng)
            s = build_sum_matrices(net)
            for d in range(net.n_dims):
                for e in range(net.n_dims):
                    naive = np.zeros((net.n_nodes, net.n_nodes))
                    for ocm, icm in zip(net.ocms, net.icms):
                        for i in range(net.n_nodes):
                            for j in range(net.n_nodes):
                                naive[i, j] += icm[d, e] * ocm[i, j]
                    np.testing.assert_allclose(s.blocks[d, e], naive, atol=1e-12)

    def test_zero_row_sum_closure(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            s = build_sum_matrices(_random_network(rng))
            sums = s.blocks.sum(axis=3)
            assert np.max(np.abs(sums)) < 1e-10

    def test_zero_icms_give_zero_blocks(self):
        net = MultiWeightNetwork(
            ocms=[EXPECTED_DIAG[0], EXPECTED_DIAG[1]],
            icms=[np.zeros((2, 2)), np.zeros((2, 2))],
            eta=1.0,
            regulator=Regulator("power", T=1.0),
        )
        s = build_sum_matrices(net)
        assert np.all(s.blocks == 0.0)

    def test_pinning_requires_config(self):
        with pytest.raises(MissingPinningError):
            build_sum_matrices(benchmark_network(1.0), with_pinning=True)


class TestAssumptionChecks:
    def test_benchmark_passes(self):
        verdicts = check_assumption_a1(build_sum_matrices(benchmark_network(1.0)))
        assert all(v.ok for v in verdicts)

    def test_competitive_layer_alone_fails(self):
        # One of the benchmark layers has a negative off-diagonal entry;
        # duplicated with identity ICMs it fails the structural check.
        m3 = np.array([[2.0, -2.0, 0.0], [0.0, 0.0, 0.0], [4.0, 0.0, -4.0]])
        net = MultiWeightNetwork(
            ocms=[m3, m3],
            icms=[np.eye(3), np.eye(3)],
            eta=1.0,
            regulator=Regulator("power", T=1.0),
        )
        verdicts = check_assumption_a1(build_sum_matrices(net))
        assert not verdicts[0].ok
        assert "NegativeOffDiagonal" in verdicts[0].reasons

    def test_disconnected_layers_fail(self):
        block = np.array([[-1.0, 1.0, 0.0], [1.0, -1.0, 0.0], [0.0, 0.0, 0.0]])
        net = MultiWeightNetwork(
            ocms=[block, block],
            icms=[np.eye(2), np.eye(2)],
            eta=1.0,
            regulator=Regulator("power", T=1.0),
        )
        verdicts = check_assumption_a1(build_sum_matrices(net))
        assert all("NotStronglyConnected" in v.reasons for v in verdicts)

    def test_pinned_set_rejected(self):
        s = build_sum_matrices(benchmark_network(1.0, pinned=True), with_pinning=True)
        with pytest.raises(InvalidParametersError):
            check_assumption_a1(s)


class TestNlevecsAndStacked:
    def test_psi_annihilates_diagonal_blocks(self):
        s = build_sum_matrices(benchmark_network(1.0))
        for d, psi in enumerate(nlevecs(s)):
            block = s.blocks[d, d]
            assert np.max(np.abs(psi @ block)) < 1e-9 * np.linalg.norm(block)

    def test_stacked_matrix_symmetric(self):
        s = build_sum_matrices(benchmark_network(1.0))
        m_bar = assemble_stacked(s, nlevecs(s), pinned=False)
        np.testing.assert_allclose(m_bar, m_bar.T, atol=1e-14)

    def test_unpinned_stacked_annihilates_blockwise_ones(self):
        s = build_sum_matrices(benchmark_network(1.0))
        m_bar = assemble_stacked(s, nlevecs(s), pinned=False)
        ones = np.ones(m_bar.shape[0])
        assert np.max(np.abs(m_bar @ ones)) < 1e-9

    def test_pinning_removes_the_kernel(self):
        net = benchmark_network(1.0, pinned=True)
        plain = build_sum_matrices(net)
        psis = nlevecs(plain)
        m_tilde_plain = assemble_stacked(plain, psis, pinned=True)
        m_tilde_pinned = assemble_stacked(
            build_sum_matrices(net, with_pinning=True), psis, pinned=True
        )
        lam_plain = symmetric_eigen(m_tilde_plain).lambda_max
        lam_pinned = symmetric_eigen(m_tilde_pinned).lambda_max
        assert abs(lam_plain) < 1e-9
        assert lam_pinned < -1.0


class TestSpectra:
    def test_benchmark_fiedler_value(self):
        s = build_sum_matrices(benchmark_network(1.0))
        m_bar = assemble_stacked(s, nlevecs(s), pinned=False)
        lam2 = fiedler_lambda2(m_bar, n_nodes=3, n_blocks=3)
        np.testing.assert_allclose(lam2, -9.9387, atol=1e-3)

    def test_uniform_weight_complete_graph(self):
        # Complete-graph negated Laplacian with uniform weights: every
        # transverse eigenvalue equals -1.
        m = np.ones((3, 3)) - 3.0 * np.eye(3)
        psi = np.full(3, 1.0 / 3.0)
        weight = np.diag(psi) - np.outer(psi, psi)
        sym = (weight @ m + m.T @ weight) / 2.0
        lam2 = fiedler_lambda2(sym, n_nodes=3, n_blocks=1)
        np.testing.assert_allclose(lam2, -1.0, atol=1e-12)

    def test_single_node_has_no_transverse_space(self):
        with pytest.raises(NotNegativeInTSError):
            fiedler_lambda2(np.zeros((1, 1)), n_nodes=1, n_blocks=1)

    def test_positive_transverse_eigenvalue_rejected(self):
        with pytest.raises(NotNegativeInTSError):
            fiedler_lambda2(np.eye(4), n_nodes=4, n_blocks=1)

    def test_blockwise_equals_stacked_for_diagonal_icms(self):
        # With diagonal ICMs the stacked matrix is block diagonal, so the
        # transverse eigenvalue is the max over per-dimension blocks.
        s = build_sum_matrices(benchmark_network(1.0))
        psis = nlevecs(s)
        m_bar = assemble_stacked(s, psis, pinned=False)
        full = fiedler_lambda2(m_bar, n_nodes=3, n_blocks=3)
        per_block = []
        for d, psi in enumerate(psis):
            weight = np.diag(psi) - np.outer(psi, psi)
            block = s.blocks[d, d]
            sym = (weight @ block + block.T @ weight) / 2.0
            per_block.append(fiedler_lambda2(sym, n_nodes=3, n_blocks=1))
        np.testing.assert_allclose(full, max(per_block), atol=1e-9)


class TestThreshold:
    def test_benchmark_synchronization_report(self):
        report = compute_threshold(benchmark_network(3.0), HF)
        assert not report.pinned
        assert report.c0 == 9.0
        np.testing.assert_allclose(report.lambda2, -9.9387, atol=1e-3)
        np.testing.assert_allclose(
            report.threshold, (HF * 9.0 + 1.0) / abs(report.lambda2), rtol=1e-12
        )
        # Frozen reference for the full formula evaluation.
        np.testing.assert_allclose(report.threshold, 5.054368, atol=1e-5)
        assert report.eta_sufficient == (3.0 > report.threshold)

    def test_benchmark_pinning_report(self):
        report = compute_threshold(benchmark_network(28.0, pinned=True), HF)
        assert report.pinned
        np.testing.assert_allclose(report.lambda_max, -1.8241, atol=1e-3)
        np.testing.assert_allclose(report.threshold, 27.5386, atol=1e-3)
        assert report.eta_sufficient

    def test_formula_limit_case(self):
        # hf -> 0 with C(0) = 1 leaves threshold = 1/|lambda2|.
        net = benchmark_network(3.0)
        net = MultiWeightNetwork(
            ocms=net.ocms, icms=net.icms, eta=3.0, regulator=Regulator("power", T=1.0)
        )
        report = compute_threshold(net, 1e-12)
        np.testing.assert_allclose(report.threshold, 1.0 / abs(report.lambda2), rtol=1e-9)

    def test_assumption_violation_raises_with_verdicts(self):
        m3 = np.array([[2.0, -2.0, 0.0], [0.0, 0.0, 0.0], [4.0, 0.0, -4.0]])
        net = MultiWeightNetwork(
            ocms=[m3, m3],
            icms=[np.eye(3), np.eye(3)],
            eta=1.0,
            regulator=Regulator("power", T=1.0),
        )
        with pytest.raises(AssumptionViolatedError) as exc_info:
            compute_threshold(net, HF)
        assert exc_info.value.verdicts is not None

    def test_report_serializes(self):
        import json

        report = compute_threshold(benchmark_network(3.0), HF)
        text = json.dumps(report.to_dict())
        assert "threshold" in text


class TestConstruction:
    def test_single_layer_rejected(self):
        with pytest.raises(InvalidParametersError):
            MultiWeightNetwork(
                ocms=[EXPECTED_DIAG[0]],
                icms=[np.eye(3)],
                eta=1.0,
                regulator=Regulator("power", T=1.0),
            )

    def test_nonzero_row_sum_ocm_rejected(self):
        bad = np.eye(3)
        with pytest.raises(InvalidParametersError):
            MultiWeightNetwork(
                ocms=[bad, bad],
                icms=[np.eye(3), np.eye(3)],
                eta=1.0,
                regulator=Regulator("power", T=1.0),
            )

    def test_asymmetric_icm_rejected(self):
        icm = np.array([[1.0, 2.0], [0.0, 1.0]])
        ocm = np.array([[-1.0, 1.0], [1.0, -1.0]])
        with pytest.raises(InvalidParametersError):
            MultiWeightNetwork(
                ocms=[ocm, ocm], icms=[icm, icm], eta=1.0, regulator=Regulator("power", T=1.0)
            )
