#include "fragmenta/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <utility>

#include "fragmenta/discrete.hpp"
#include "fragmenta/empirics.hpp"
#include "fragmenta/fragmentation.hpp"
#include "fragmenta/math_util.hpp"
#include "fragmenta/parallel.hpp"
#include "fragmenta/stationary.hpp"
#include "fragmenta/tree_profile.hpp"

namespace fragmenta {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// nearest-rank quantile on a copy
double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    auto r = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
    r = std::max<std::size_t>(r, 1);
    return v[std::min(v.size(), r) - 1];
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct UniformityStats {
    std::vector<double> spacing_dev;  // per replicate, sup vs the scaled line
    std::vector<double> point_dev;    // per replicate, sup vs uniform
};

UniformityStats uniformity_stats(const SplitLaw& law, double x_c, int replicates,
                                 std::uint64_t seed, unsigned threads) {
    UniformityStats st;
    st.spacing_dev.resize(static_cast<std::size_t>(replicates));
    st.point_dev.resize(static_cast<std::size_t>(replicates));
    parallel_for(
        static_cast<std::size_t>(replicates),
        [&](std::size_t r) {
            const RunResult run = run_to_cutoff(law, x_c, replicate_seed(seed, r));
            const EmpiricalCdf cdf = spacing_cdf(run, x_c);
            st.spacing_dev[r] = ks_against(cdf.sorted(), [x_c](double x) {
                return std::clamp(x / x_c, 0.0, 1.0);
            });
            st.point_dev[r] = point_cdf_deviation(run);
        },
        threads);
    return st;
}

std::pair<CheckResult, CheckResult> check_uniformity_pair(const VerifyOptions& opt) {
    const double x_c = 1e-3;
    const int R = 200;
    const auto st = uniformity_stats(SplitLaw::kakutani(), x_c,
                                     R, replicate_seed(opt.master_seed, 101),
                                     opt.threads);
    const double N = 2.0 / x_c;
    const double med_thr = 3.0 / std::sqrt(N);
    const double q95_thr = 4.0 * std::sqrt(std::log(N) / N);

    CheckResult c1{"C01", "spacing CDF approaches the scaled uniform line", false, ""};
    {
        const double med = quantile(st.spacing_dev, 0.5);
        const double q95 = quantile(st.spacing_dev, 0.95);
        c1.pass = med <= med_thr && q95 <= q95_thr;
        c1.detail = "median sup-dev " + fmt(med) + " <= " + fmt(med_thr) + ", q95 " +
                    fmt(q95) + " <= " + fmt(q95_thr) + " (x_c=1e-3, N=" + fmt(N) +
                    ", R=200)";
    }
    CheckResult c2{"C02", "partition points are uniform", false, ""};
    {
        const double med = quantile(st.point_dev, 0.5);
        const double q95 = quantile(st.point_dev, 0.95);
        c2.pass = med <= med_thr && q95 <= q95_thr;
        c2.detail = "median sup-dev " + fmt(med) + " <= " + fmt(med_thr) + ", q95 " +
                    fmt(q95) + " <= " + fmt(q95_thr) + " (same runs)";
    }
    return {c1, c2};
}

CheckResult check_mean_and_count(const VerifyOptions& opt) {
    const double x_c = 1e-3;
    const int R = 100;
    const SplitLaw law = SplitLaw::kakutani();
    const std::uint64_t seed = replicate_seed(opt.master_seed, 103);

    std::vector<double> mean_sp(R), count(R);
    parallel_for(
        static_cast<std::size_t>(R),
        [&](std::size_t r) {
            const RunResult run = run_to_cutoff(law, x_c, replicate_seed(seed, r));
            const double n = static_cast<double>(run.spacings.size());
            count[r] = n;
            mean_sp[r] = run.total_length() / n;
        },
        opt.threads);

    const double avg_mean = std::accumulate(mean_sp.begin(), mean_sp.end(), 0.0) / R;
    const double avg_count = std::accumulate(count.begin(), count.end(), 0.0) / R;
    const double mean_err = std::abs(avg_mean - x_c / 2.0) / (x_c / 2.0);
    const double count_err = std::abs(avg_count - 2.0 / x_c) / (2.0 / x_c);

    CheckResult c{"C03", "mean spacing x_c/2 and final count 2/x_c", false, ""};
    c.pass = mean_err <= 0.02 && count_err <= 0.05;
    c.detail = "mean spacing off by " + fmt(100 * mean_err) + "% (<=2%), count off by " +
               fmt(100 * count_err) + "% (<=5%) over 100 replicates";
    return c;
}

CheckResult check_ternary_ks(const VerifyOptions& opt) {
    const double x_c = 1e-3;
    const int R = 100;
    const SplitLaw law = SplitLaw::b_uniform(3);
    const std::uint64_t seed = replicate_seed(opt.master_seed, 104);

    std::vector<double> dev(R);
    parallel_for(
        static_cast<std::size_t>(R),
        [&](std::size_t r) {
            const RunResult run = run_to_cutoff(law, x_c, replicate_seed(seed, r));
            std::vector<double> norm;
            norm.reserve(run.spacings.size());
            for (const auto& s : run.spacings) norm.push_back(s.length / x_c);
            std::sort(norm.begin(), norm.end());
            dev[r] = ks_against(norm, [](double x) {
                const double t = std::clamp(x, 0.0, 1.0);
                return 0.5 * t * (3.0 - t);
            });
        },
        opt.threads);

    const double med = quantile(dev, 0.5);
    CheckResult c{"C04", "ternary spacings follow u(x) = x(3-x)/2", false, ""};
    c.pass = med <= 0.02;
    c.detail = "median KS " + fmt(med) + " <= 0.02 (x_c=1e-3, R=100)";
    return c;
}

CheckResult check_stationary_solver(const VerifyOptions&) {
    std::vector<double> grid(100);
    for (int k = 1; k <= 100; ++k) grid[static_cast<std::size_t>(k - 1)] = k / 100.0;

    const StationarySolution kak = solve_stationary(SplitLaw::kakutani());
    const double errC_k = std::abs(kak.C - 1.0);
    double errU_k = 0.0;
    for (double x : grid) errU_k = std::max(errU_k, std::abs(kak.cdf(x) - x));
    const double res_k = ode_residual(kak, grid);

    const StationarySolution ter = solve_stationary(SplitLaw::b_uniform(3));
    const double errC_t = std::abs(ter.C - 0.5);
    const double errU_t = std::abs(ter.cdf(0.5) - 0.625);
    const double res_t = ode_residual(ter, grid);

    CheckResult c{"C05", "stationary constant and limit CDF solver", false, ""};
    c.pass = errC_k <= 1e-10 && errU_k <= 1e-10 && errC_t <= 1e-8 && errU_t <= 1e-8 &&
             res_k < 1e-8 && res_t < 1e-8;
    c.detail = "binary |C-1|=" + fmt(errC_k) + ", sup|u(x)-x|=" + fmt(errU_k) +
               " (<=1e-10); ternary |C-1/2|=" + fmt(errC_t) + ", |u(0.5)-0.625|=" +
               fmt(errU_t) + " (<=1e-8); ODE residuals " + fmt(res_k) + ", " +
               fmt(res_t) + " (<1e-8)";
    return c;
}

CheckResult check_volterra(const VerifyOptions&) {
    const auto t0 = std::chrono::steady_clock::now();
    const ProfileSolution bin = solve_volterra_H(SplitLaw::kakutani(), 0.05, 4096);
    const ProfileSolution ter = solve_volterra_H(SplitLaw::b_uniform(3), 0.05, 4096);
    const double wall = elapsed_s(t0);

    double err_b = 0.0;
    for (std::size_t j = 0; j < bin.grid().size(); ++j) {
        const double y = bin.grid()[j];
        const double ref = 2.0 / (y * y);
        err_b = std::max(err_b, std::abs(bin.values()[j] - ref) / ref);
    }
    double err_t = 0.0;
    for (std::size_t j = 0; j < ter.grid().size(); ++j) {
        const double y = ter.grid()[j];
        const double ref = 1.2 * (1.0 / (y * y) - y * y * y);
        err_t = std::max(err_t, std::abs(ter.values()[j] - ref) / ref);
    }

    CheckResult c{"C06", "Volterra solver matches 2/y^2 and (6/5)(y^-2 - y^3)", false, ""};
    c.pass = err_b <= 1e-3 && err_t <= 1e-3 && wall < 1.0;
    c.detail = "max rel err binary " + fmt(err_b) + ", ternary " + fmt(err_t) +
               " (<=1e-3 on [0.05,1], 4096 points); solve time " + fmt(wall) + "s (<1s)";
    return c;
}

CheckResult check_roots(const VerifyOptions&) {
    const RootSet r3 = characteristic_roots(3);
    const double err3 = std::max(std::abs(r3.roots[0] - std::complex<double>(2.0, 0.0)),
                                 std::abs(r3.roots[1] - std::complex<double>(-3.0, 0.0)));

    double err_z1 = 0.0, max_res = 0.0;
    for (int m = 2; m <= 30; ++m) {
        const RootSet rm = characteristic_roots(m);
        err_z1 = std::max(err_z1, std::abs(rm.roots[0] - std::complex<double>(2.0, 0.0)));
        for (double res : rm.residuals) max_res = std::max(max_res, res);
    }

    bool flip_ok = true;
    for (int m = 3; m <= 30; ++m) {
        const bool want = m <= 26;
        if (classify_stationarity(m).stationary != want) flip_ok = false;
    }
    const double re26 = classify_stationarity(26).re_z2;
    const double re27 = classify_stationarity(27).re_z2;

    CheckResult c{"C07", "characteristic roots; stationarity flips at m = 26/27", false, ""};
    c.pass = err3 <= 1e-10 && err_z1 <= 1e-10 && max_res < 1e-8 && flip_ok;
    c.detail = "m=3 root err " + fmt(err3) + " (<=1e-10); max |z1-2| " + fmt(err_z1) +
               ", max rel residual " + fmt(max_res) + " (<1e-8) on m in [2,30]; Re z2: " +
               fmt(re26) + " (m=26) vs " + fmt(re27) + " (m=27), flip " +
               (flip_ok ? "correct" : "WRONG");
    return c;
}

CheckResult check_subtree_profile(const VerifyOptions& opt) {
    // closed forms
    double err_closed = 0.0;
    for (const auto& [n, k] : {std::pair<std::int64_t, std::int64_t>{1000, 10},
                              {50000, 250},
                              {1234567, 999}}) {
        const double dn = static_cast<double>(n), dk = static_cast<double>(k);
        const double bin = subtree_profile(2, n, k);
        const double ter = subtree_profile(3, n, k);
        err_closed = std::max(err_closed,
                              std::abs(bin - 2.0 * dn / (dk * dk)) / (2.0 * dn / (dk * dk)));
        err_closed = std::max(err_closed,
                              std::abs(ter - 1.2 * dn / (dk * dk)) / (1.2 * dn / (dk * dk)));
    }

    // simulation: with cutoff x_c = y, the expected number of spacings in
    // (y(1-d), y] is the integral of the closed-form density over the band
    const double delta = 0.05;
    struct Band {
        double y;
        int reps;
    };
    const Band bands[] = {{0.01, 800}, {0.0316, 2000}, {0.1, 5000}};
    double worst_band = 0.0;
    std::string band_detail;
    int tag = 120;
    for (int law_ix = 0; law_ix < 2; ++law_ix) {
        const SplitLaw law = law_ix == 0 ? SplitLaw::kakutani() : SplitLaw::b_uniform(3);
        for (const Band& band : bands) {
            const double y = band.y, a = y * (1.0 - delta);
            const double expected =
                law_ix == 0 ? 2.0 * (1.0 / a - 1.0 / y)
                            : 1.2 * ((1.0 / a - 1.0 / y) -
                                     (std::pow(y, 4) - std::pow(a, 4)) / 4.0);
            const std::uint64_t seed = replicate_seed(opt.master_seed,
                                                      static_cast<std::uint64_t>(tag++));
            std::vector<double> hits(static_cast<std::size_t>(band.reps));
            parallel_for(
                static_cast<std::size_t>(band.reps),
                [&](std::size_t r) {
                    const RunResult run = run_to_cutoff(law, y, replicate_seed(seed, r));
                    int cnt = 0;
                    for (const auto& s : run.spacings)
                        if (s.length > a && s.length <= y) ++cnt;
                    hits[r] = cnt;
                },
                opt.threads);
            const double mean =
                std::accumulate(hits.begin(), hits.end(), 0.0) / band.reps;
            const double rel = std::abs(mean - expected) / expected;
            worst_band = std::max(worst_band, rel);
        }
    }

    CheckResult c{"C08", "subtree profile closed forms and band simulation", false, ""};
    c.pass = err_closed <= 1e-9 && worst_band <= 0.10;
    c.detail = "closed-form rel err " + fmt(err_closed) +
               " (<=1e-9); worst simulated band rel err " + fmt(worst_band) +
               " (<=0.1; y in {0.01,0.0316,0.1}, both laws)";
    return c;
}

CheckResult check_concentration(const VerifyOptions& opt) {
    const std::size_t n = 2000;
    const double c_bound = 2.0;
    const double x_c = 4e-4;   // every binary run to this cutoff exceeds n steps
    const int R = 10000;
    const SplitLaw law = SplitLaw::kakutani();
    const std::uint64_t seed = replicate_seed(opt.master_seed, 109);

    std::vector<double> sums(static_cast<std::size_t>(R));
    parallel_for(
        static_cast<std::size_t>(R),
        [&](std::size_t r) {
            const RunResult run = run_to_cutoff(law, x_c, replicate_seed(seed, r));
            const MartingaleSeries ms = martingale_increments(run, law, x_c / 2.0);
            sums[r] = ms.partial_sums[n - 1];
        },
        opt.threads);

    const double base = std::sqrt(2.0 * static_cast<double>(n));
    const std::vector<double> lambdas = {base, 2 * base, 3 * base, 4 * base};
    const auto rows = concentration_check(sums, n, c_bound, lambdas);

    CheckResult c{"C09", "martingale tails within the Azuma bound", false, ""};
    bool ok = true;
    std::string parts;
    for (const auto& row : rows) {
        ok = ok && !row.violated;
        if (!parts.empty()) parts += ", ";
        parts += fmt(row.empirical) + "/" + fmt(row.bound);
    }
    c.pass = ok;
    c.detail = "empirical/bound at lambda = {1,2,3,4}sqrt(2n): " + parts +
               " (n=2000, c=2, R=10000)";
    return c;
}

CheckResult check_shrinkage(const VerifyOptions& opt) {
    const double x_c = 1e-4, y = 0.5;
    const int R = 10000;
    const SplitLaw law = SplitLaw::kakutani();
    const std::uint64_t seed = replicate_seed(opt.master_seed, 110);

    std::vector<double> sum_ratio(static_cast<std::size_t>(R));
    std::vector<double> n_ratio(static_cast<std::size_t>(R));
    std::vector<double> cuts(static_cast<std::size_t>(R));
    parallel_for(
        static_cast<std::size_t>(R),
        [&](std::size_t r) {
            const YTrackResult tr = track_y_interval(law, y, x_c, replicate_seed(seed, r));
            sum_ratio[r] = std::accumulate(tr.ratios.begin(), tr.ratios.end(), 0.0);
            n_ratio[r] = static_cast<double>(tr.ratios.size());
            cuts[r] = static_cast<double>(tr.n_cuts);
        },
        opt.threads);

    const double mean_ratio = std::accumulate(sum_ratio.begin(), sum_ratio.end(), 0.0) /
                              std::accumulate(n_ratio.begin(), n_ratio.end(), 0.0);
    const double limit = 3.0 * std::log(1.0 / x_c) / std::log(4.0 / 3.0);
    int within = 0;
    for (double v : cuts)
        if (v <= limit) ++within;
    const double frac = static_cast<double>(within) / R;

    CheckResult c{"C10", "covering-interval shrinkage and cut count", false, ""};
    c.pass = mean_ratio <= 0.76 && frac >= 0.99;
    c.detail = "mean one-step ratio " + fmt(mean_ratio) + " (<=0.76); " +
               fmt(100 * frac) + "% of runs have n_cuts <= " + fmt(limit) +
               " (>=99%; x_c=1e-4, y=0.5, R=10000)";
    return c;
}

// log-log slope of the size histogram over [lo, hi), geometric bins
double histogram_slope(const std::vector<std::pair<std::int64_t, std::int64_t>>& counts,
                       double lo, double hi) {
    const int B = 24;
    std::vector<double> xs, ys;
    for (int j = 0; j < B; ++j) {
        const double e0 = lo * std::pow(hi / lo, static_cast<double>(j) / B);
        const double e1 = lo * std::pow(hi / lo, static_cast<double>(j + 1) / B);
        double total = 0.0;
        auto it = std::lower_bound(counts.begin(), counts.end(),
                                   static_cast<std::int64_t>(std::ceil(e0)),
                                   [](const auto& p, std::int64_t s) { return p.first < s; });
        for (; it != counts.end() && static_cast<double>(it->first) < e1; ++it)
            total += static_cast<double>(it->second);
        if (total > 0.0) {
            xs.push_back(std::sqrt(e0 * e1));
            ys.push_back(total / (e1 - e0));
        }
    }
    return fit_loglog(xs, ys).slope;
}

CheckResult check_heavy_critical(const VerifyOptions& opt) {
    // (a) plateau of the renewal series
    const HtSeries series = solve_Ht_recurrence(1.5, 100000);
    const PlateauStats ps = measure_plateau(series, 1000, 100000);
    const double zeta_quarter = riemann_zeta(1.5) / 4.0;

    // (b) detector across three orders of magnitude, (c) profile slope at
    // n=1e7; a single detection scatters by ~25% between seeds, so the fit
    // goes through per-n medians
    const std::int64_t ns[] = {100000, 1000000, 10000000};
    const int reps = 7;
    std::vector<double> xs, ys;
    double ratio7 = 0.0, slope7 = 0.0, wall7 = 0.0;
    bool detected_all = true;
    for (int i = 0; i < 3; ++i) {
        const std::int64_t n = ns[i];
        const CriticalPoints cp = predict_critical_points(n);
        std::vector<double> dets;
        for (int r = 0; r < reps; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            const DiscreteRun run = simulate_discrete(
                n, 1.5, 32,
                replicate_seed(opt.master_seed,
                               static_cast<std::uint64_t>(200 + 10 * i + r)),
                {static_cast<std::int64_t>(std::llround(cp.M_c))});
            const double wall = elapsed_s(t0);
            const auto det = detect_critical_size(run);
            if (!det) {
                detected_all = false;
                continue;
            }
            dets.push_back(static_cast<double>(*det));
            if (n == 10000000 && r == 0) {
                wall7 = wall;
                slope7 = histogram_slope(run.snapshots.at(0).counts, 10.0, cp.M_c / 10.0);
            }
        }
        if (dets.empty()) continue;
        std::sort(dets.begin(), dets.end());
        const double med = dets[dets.size() / 2];
        xs.push_back(static_cast<double>(n));
        ys.push_back(med);
        if (n == 10000000)
            ratio7 = med / (0.84 * std::pow(static_cast<double>(n), 2.0 / 3.0));
    }
    const double reg = detected_all ? fit_loglog(xs, ys).slope : 0.0;

    const bool pass_a = ps.rel_variation < 0.15;
    const bool pass_b = detected_all && ratio7 >= 0.6 && ratio7 <= 1.1 &&
                        reg >= 2.0 / 3.0 - 0.05 && reg <= 2.0 / 3.0 + 0.05 && wall7 < 60.0;
    const bool pass_c = slope7 >= -1.6 && slope7 <= -1.4;

    CheckResult c{"C11", "heavy-tail criticality: plateau, detector, profile slope",
                  false, ""};
    c.pass = pass_a && pass_b && pass_c;
    c.detail = "sqrt(t)H_t variation " + fmt(100 * ps.rel_variation) +
               "% (<15%) with constant " + fmt(ps.gamma_hat) + " (zeta(3/2)/4 = " +
               fmt(zeta_quarter) + " reported, not enforced); median detected/0.84n^(2/3) = " +
               fmt(ratio7) + " (in [0.6,1.1], 7 seeds), size exponent " + fmt(reg) +
               " (2/3 +- 0.05), profile slope " + fmt(slope7) +
               " (-1.5 +- 0.1), n=1e7 run " + fmt(wall7) + "s (<60s)";
    return c;
}

CheckResult check_reverse_recurrence(const VerifyOptions& opt) {
    const SplitLaw law = SplitLaw::heavy_tail(1.5);

    // displayed 3x3 system: unit upper-triangular band over p, mass row (1 2 3)
    const auto A = reverse_system_matrix(law, 3);
    const auto p = law.symmetric_pmf(3);
    const double want[3][3] = {{1.0, p[0], p[1]}, {0.0, 1.0, p[0]}, {1.0, 2.0, 3.0}};
    double err_A = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            err_A = std::max(err_A, std::abs(A[static_cast<std::size_t>(i)]
                                              [static_cast<std::size_t>(j)] -
                                             want[i][j]));

    const std::int64_t n = 1000000;
    const auto rows = reverse_recurrence(n, law, 64);
    double mass_err = 0.0;
    for (const auto& row : rows) {
        double mass = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j)
            mass += static_cast<double>(j + 1) * row[j];
        mass_err = std::max(mass_err, std::abs(mass - static_cast<double>(n)) /
                                          static_cast<double>(n));
    }

    std::vector<std::int64_t> ks(61);
    std::iota(ks.begin(), ks.end(), std::int64_t{4});
    const auto table =
        test_Hk_conjecture(n, 1.5, ks, replicate_seed(opt.master_seed, 150));
    std::vector<double> xs, ys;
    for (const auto& row : table)
        if (row.h >= 1) {
            xs.push_back(static_cast<double>(row.k));
            ys.push_back(static_cast<double>(row.h));
        }
    const double slope = fit_loglog(xs, ys).slope;

    CheckResult c{"C12", "reverse recurrence structure and H_k decay", false, ""};
    c.pass = err_A <= 1e-12 && mass_err <= 1e-9;
    c.detail = "A_3 max entry err " + fmt(err_A) + " (<=1e-12); mass-row rel err " +
               fmt(mass_err) + " (<=1e-9, k<=64); H_k slope " + fmt(slope) +
               " over k in [4,64] (reported, window [-1.8,-1.2] not enforced)";
    return c;
}

} // namespace

std::vector<CheckResult> run_acceptance_checks(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    out.reserve(12);
    auto [c1, c2] = check_uniformity_pair(opt);
    out.push_back(std::move(c1));
    out.push_back(std::move(c2));
    out.push_back(check_mean_and_count(opt));
    out.push_back(check_ternary_ks(opt));
    out.push_back(check_stationary_solver(opt));
    out.push_back(check_volterra(opt));
    out.push_back(check_roots(opt));
    out.push_back(check_subtree_profile(opt));
    out.push_back(check_concentration(opt));
    out.push_back(check_shrinkage(opt));
    out.push_back(check_heavy_critical(opt));
    out.push_back(check_reverse_recurrence(opt));
    return out;
}

std::vector<CheckResult> verify_uniformity(const SplitLaw& law, double x_c,
                                           int replicates, std::uint64_t seed,
                                           unsigned threads) {
    if (!law.continuous())
        throw std::invalid_argument("verify_uniformity: law must be continuous");
    if (!(x_c > 0.0 && x_c < 1.0))
        throw std::invalid_argument("verify_uniformity: x_c must be in (0,1)");
    if (replicates < 1)
        throw std::invalid_argument("verify_uniformity: replicates must be >= 1");

    const StationarySolution sol = solve_stationary(law);
    std::vector<double> d_sp(static_cast<std::size_t>(replicates));
    std::vector<double> d_pt(static_cast<std::size_t>(replicates));
    std::vector<double> n_pt(static_cast<std::size_t>(replicates));
    parallel_for(
        static_cast<std::size_t>(replicates),
        [&](std::size_t r) {
            const RunResult run = run_to_cutoff(law, x_c, replicate_seed(seed, r));
            std::vector<double> norm;
            norm.reserve(run.spacings.size());
            for (const auto& s : run.spacings) norm.push_back(s.length / x_c);
            std::sort(norm.begin(), norm.end());
            d_sp[r] = ks_against(norm, [&sol](double x) {
                return x <= 0.0 ? 0.0 : sol.cdf(std::min(x, 1.0));
            });
            d_pt[r] = point_cdf_deviation(run);
            n_pt[r] = static_cast<double>(run.partition_points.size());
        },
        threads);

    std::vector<CheckResult> out;
    const bool is_kakutani = law.kind() == LawKind::kakutani;
    {
        const double med = quantile(d_sp, 0.5);
        const double q95 = quantile(d_sp, 0.95);
        CheckResult c{"V-SPACING", "spacing CDF vs stationary limit", false, ""};
        if (is_kakutani) {
            const double N = 2.0 / x_c;
            const double med_thr = 3.0 / std::sqrt(N);
            const double q95_thr = 4.0 * std::sqrt(std::log(N) / N);
            c.pass = med <= med_thr && q95 <= q95_thr;
            c.detail = "median " + fmt(med) + " <= " + fmt(med_thr) + ", q95 " + fmt(q95) +
                       " <= " + fmt(q95_thr);
        } else {
            c.pass = med <= 0.02;
            c.detail = "median KS " + fmt(med) + " <= 0.02, q95 " + fmt(q95);
        }
        out.push_back(std::move(c));
    }
    {
        const double med = quantile(d_pt, 0.5);
        const double q95 = quantile(d_pt, 0.95);
        const double N =
            std::max(1.0, std::accumulate(n_pt.begin(), n_pt.end(), 0.0) / replicates);
        const double med_thr = 3.0 / std::sqrt(N);
        const double q95_thr = 4.0 * std::sqrt(std::log(N) / N);
        CheckResult c{"V-POINTS", "partition points vs uniform", false, ""};
        c.pass = med <= med_thr && q95 <= q95_thr;
        c.detail = "median " + fmt(med) + " <= " + fmt(med_thr) + ", q95 " + fmt(q95) +
                   " <= " + fmt(q95_thr) + " (mean points " + fmt(N) + ")";
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace fragmenta
