import pytest

import fragmenta as fg


def test_version():
    assert fg.__version__ == "0.1.0"


def test_stationary_binary_law():
    sol = fg.solve_stationary(fg.SplitLaw.kakutani())
    assert sol.C == pytest.approx(1.0, abs=1e-10)
    assert sol.cdf(0.3) == pytest.approx(0.3, abs=1e-9)
    assert sol.mean_spacing_scaled() == pytest.approx(0.5, abs=1e-9)


def test_run_to_cutoff():
    law = fg.SplitLaw.parse("buniform3")
    run = fg.run_to_cutoff(law, 1e-3, 7)
    assert run.total_length() == pytest.approx(1.0, abs=1e-9)
    assert all(0.0 < length <= 1e-3 for _, length in run.spacings)
    again = fg.run_to_cutoff(law, 1e-3, 7)
    assert run.partition_points == again.partition_points
    assert fg.ks_uniform(run.partition_points) < 0.2


def test_roots_and_profile():
    rs = fg.characteristic_roots(3)
    assert rs.roots[0] == pytest.approx(2.0, abs=1e-10)
    assert rs.roots[1] == pytest.approx(-3.0, abs=1e-10)
    assert fg.subtree_profile(3, 1000, 10) == pytest.approx(12.0, abs=1e-9)

    prof = fg.solve_volterra_H(fg.SplitLaw.kakutani(), y_min=0.05, grid_size=512)
    assert prof.at(0.5) == pytest.approx(8.0, rel=2e-3)

    ce = fg.cauchy_euler_solution(3)
    assert ce.value(0.5).real == pytest.approx(4.65, abs=1e-9)


def test_discrete_run_and_renewal():
    run = fg.simulate_discrete(20000, 1.5, 5, 3)
    assert run.total_mass() == 20000
    assert run.arrivals[0].size == 20000
    sizes = [a.size for a in run.arrivals]
    assert sizes == sorted(sizes, reverse=True)

    series = fg.solve_Ht_recurrence(1.5, 200)
    assert series.H[0] == 1.0
    assert series.H[1] == pytest.approx(1.0 / 2.612375348685488, abs=1e-12)
    plateau = fg.measure_plateau(series.H, 50, 200)
    assert plateau.gamma_hat == pytest.approx(0.5, abs=0.2)

    zeta = 2.612375348685488
    pred = fg.predict_critical_points(10**6)
    assert pred.M_c == pytest.approx((2.0 / zeta) ** (2.0 / 3.0) * 10**4, rel=1e-9)
    assert pred.count_at_Mc == pytest.approx(zeta / 4.0 * pred.M_c, rel=1e-9)


def test_errors_travel():
    with pytest.raises(ValueError):
        fg.SplitLaw.parse("frobnicate")
    with pytest.raises(Exception):
        fg.run_to_cutoff(fg.SplitLaw.heavy_tail(1.5), 1e-3, 1)
