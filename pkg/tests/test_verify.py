import numpy as np
import pytest
from scipy.integrate import quad

import boostedwaves as bw


def test_support_set_gaussian_radius():
    g = bw.Grid.make(512, 20.0)
    xi = g.freqs(0)
    f = bw.Field.from_spectrum(g, np.exp(-(xi**2) / 2).astype(complex))
    s = bw.support_set(f, tau=1e-8)
    # |Q_hat| > tau  <=>  |xi| < sqrt(-2 ln tau)
    radius = np.sqrt(-2.0 * np.log(1e-8))
    expected = np.abs(xi) < radius
    assert np.array_equal(s.mask, expected)


def test_support_set_rejects_zero_field():
    g = bw.Grid.make(64, 5.0)
    zero = bw.Field.from_values(g, np.zeros(64, dtype=complex))
    with pytest.raises(bw.ZeroFieldError):
        bw.support_set(zero)


def test_support_of_sech_state_is_one_interval(classical_report):
    # oracle: the transform of sech is a positive sech profile, so the
    # thresholded mask must be a single centered interval
    val, _ = quad(lambda x: np.cos(2.0 * x) / np.cosh(x), -40.0, 40.0)
    assert val > 0  # spectrum positive at xi = 2
    s = bw.support_set(classical_report.Q, tau=1e-8)
    idx = np.sort(np.where(np.fft.fftshift(s.mask))[0])
    assert np.all(np.diff(idx) == 1)
    assert bw.is_connected(s)


def test_is_connected_masks():
    g = bw.Grid.make(64, 5.0)
    full = bw.SupportSet(g, np.ones(64, dtype=bool), 0.5)
    assert bw.is_connected(full)
    two = np.zeros(64, dtype=bool)
    two[10:20] = True
    two[40:50] = True
    assert not bw.is_connected(bw.SupportSet(g, two, 0.5))


def test_is_connected_joined_tubes():
    # two half-space tubes meeting at an origin slab form one component
    g = bw.Grid.make((32, 32), 5.0)
    mask_c = np.zeros((32, 32), dtype=bool)
    mask_c[:16, 14:18] = True   # left tube
    mask_c[16:, 12:20] = True   # right tube, overlapping rows at the seam
    mask = np.fft.ifftshift(mask_c)
    assert bw.is_connected(bw.SupportSet(g, mask, 0.5))


def test_minkowski_defect_full_lattice():
    g = bw.Grid.make(64, 5.0)
    s = bw.SupportSet(g, np.ones(64, dtype=bool), 0.5)
    assert bw.minkowski_defect(s, 3) == 0.0


def test_minkowski_defect_half_lattice():
    g = bw.Grid.make(64, 5.0)
    # the lattice proxy of the open positive ray keeps the boundary bin: with
    # it, the half-lattice is exactly closed under clipped sums
    mask_c = np.zeros(64, dtype=bool)
    mask_c[32:] = True
    s = bw.SupportSet(g, np.fft.ifftshift(mask_c), 0.5)
    assert bw.minkowski_defect(s, 3) == 0.0
    # dropping the boundary bin shifts the reachable minimum from 1 to 3 cells
    strict = np.zeros(64, dtype=bool)
    strict[33:] = True
    s2 = bw.SupportSet(g, np.fft.ifftshift(strict), 0.5)
    assert bw.minkowski_defect(s2, 3) == pytest.approx(2.0 / strict.sum())


def test_minkowski_defect_two_blobs_oracle():
    g = bw.Grid.make(32, 4.0)
    mask_c = np.zeros(32, dtype=bool)
    mask_c[4:7] = True
    mask_c[26:29] = True
    s = bw.SupportSet(g, np.fft.ifftshift(mask_c), 0.5)
    got = bw.minkowski_defect(s, 2)
    # brute-force dilation oracle on the 32-point lattice
    pts = np.where(mask_c)[0] - 16
    sums = {a + b for a in pts for b in pts}
    in_box = {z for z in sums if -16 <= z < 16}
    orig = {int(p) for p in pts}
    defect = len(in_box ^ orig) / len(orig)
    assert got == pytest.approx(defect)
    assert got > 0.5


def test_phase_affinity_real_positive_spectrum():
    g = bw.Grid.make(256, 15.0)
    xi = g.freqs(0)
    f = bw.Field.from_spectrum(g, np.exp(-(xi**2)).astype(complex))
    fit = bw.phase_affinity(f)
    assert fit.alpha == pytest.approx(0.0, abs=1e-12)
    assert fit.beta[0] == pytest.approx(0.0, abs=1e-12)
    assert fit.residual <= 1e-12


def test_phase_affinity_recovers_translation(classical_report):
    q = classical_report.Q
    a = 16 * q.grid.spacing(0)
    shifted = bw.Field.from_values(q.grid, np.roll(q.values, 16))
    fit = bw.phase_affinity(shifted)
    # translation by a multiplies the spectrum by exp(-i a xi)
    assert fit.beta[0] == pytest.approx(-a, abs=1e-10)
    assert fit.residual <= 1e-9


def test_phase_affinity_recovers_global_phase(classical_report):
    q = classical_report.Q
    rotated = bw.Field.from_values(q.grid, np.exp(1j * np.pi / 3) * np.roll(q.values, 16))
    fit = bw.phase_affinity(rotated)
    assert fit.alpha == pytest.approx(np.pi / 3, abs=1e-9)
    assert fit.beta[0] == pytest.approx(-16 * q.grid.spacing(0), abs=1e-10)


def test_phase_affinity_requires_connected_support():
    g = bw.Grid.make(128, 10.0)
    xi = g.freqs(0)
    spec = np.where((np.abs(xi) > 2.0) & (np.abs(xi) < 4.0), 1.0, 0.0)
    f = bw.Field.from_spectrum(g, spec.astype(complex))
    with pytest.raises(bw.DisconnectedSupportError):
        bw.phase_affinity(f, tau=1e-3)


def test_symmetry_report_rest_state(classical_report):
    rep = bw.symmetry_report(classical_report.Q, axis=0, sigma=1)
    assert rep.s1_defect == 0.0  # one dimension: transverse symmetries are void
    assert rep.s2_defect <= 1e-6
    assert rep.connected
    assert rep.phase is not None and rep.phase.residual <= 1e-6


def test_symmetry_report_boosted_gauge_state(classical_report):
    boosted = bw.galilean_gauge(classical_report.Q, (0.5,))
    rep = bw.symmetry_report(boosted, axis=0, sigma=1)
    assert rep.s2_defect <= 1e-6


def test_symmetry_report_detects_broken_symmetry(classical_report):
    q = classical_report.Q
    x = q.grid.coords(0)
    perturbed = q.values + 0.05 * x * np.exp(-(x**2) / 4.0)
    rep = bw.symmetry_report(bw.Field.from_values(q.grid, perturbed), axis=0, sigma=1)
    assert rep.s2_defect > 1e-2


def test_symmetry_report_2d_ground_state(frac2d_report):
    rep = bw.symmetry_report(frac2d_report.Q, axis=0, sigma=1)
    assert rep.s1_defect <= 1e-5
    assert rep.s2_defect <= 1e-5
    assert rep.modulus_rearranged_defect <= 1e-5
    assert rep.connected
    assert rep.minkowski_defect <= 0.05


def test_symmetry_report_disconnected_is_flagged_not_raised():
    g = bw.Grid.make(128, 10.0)
    xi = g.freqs(0)
    spec = np.where((np.abs(xi) > 2.0) & (np.abs(xi) < 4.0), 1.0, 0.0)
    f = bw.Field.from_spectrum(g, spec.astype(complex))
    rep = bw.symmetry_report(f, axis=0, sigma=1, tau=1e-3)
    assert not rep.connected
    assert rep.phase is None


def test_convolution_support_identity_against_dilation():
    # dual routes: FFT convolution support vs exact lattice dilation
    from scipy import signal

    rng = np.random.default_rng(31)
    for _ in range(25):
        f = np.zeros((32, 32))
        g = np.zeros((32, 32))
        fm = rng.uniform(size=(7, 7)) < 0.4
        gm = rng.uniform(size=(5, 5)) < 0.4
        if not fm.any() or not gm.any():
            continue
        f[12:19, 12:19][fm] = rng.uniform(0.5, 1.5, size=int(fm.sum()))
        g[13:18, 13:18][gm] = rng.uniform(0.5, 1.5, size=int(gm.sum()))
        conv = signal.fftconvolve(f, g, mode="full")
        support = conv > 1e-12 * conv.max()
        dilation = np.zeros_like(support)
        fi = np.argwhere(f > 0)
        gi = np.argwhere(g > 0)
        for a in fi:
            for b in gi:
                dilation[a[0] + b[0], a[1] + b[1]] = True
        assert np.array_equal(support, dilation)
