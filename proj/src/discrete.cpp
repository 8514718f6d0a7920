#include "fragmenta/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fragmenta/math_util.hpp"

namespace fragmenta {

std::int64_t DiscreteRun::arrival_count(std::int64_t size) const {
    // arrivals are sorted by descending size
    const auto it = std::lower_bound(
        arrivals.begin(), arrivals.end(), size,
        [](const Arrival& a, std::int64_t s) { return a.size > s; });
    if (it != arrivals.end() && it->size == size) return it->count;
    return 0;
}

std::int64_t DiscreteRun::total_mass() const {
    std::int64_t m = 0;
    for (const auto& [size, count] : final_counts) m += size * count;
    return m;
}

DiscreteRun simulate_discrete(const SplitLaw& law, std::int64_t n,
                              std::int64_t stop_size, std::uint64_t seed,
                              std::vector<std::int64_t> milestones) {
    if (!law.discrete())
        throw std::invalid_argument("simulate_discrete: law must be discrete");
    if (n < 2) throw std::invalid_argument("simulate_discrete: n must be >= 2");
    if (stop_size < 1 || stop_size >= n)
        throw std::invalid_argument("simulate_discrete: need 1 <= stop_size < n");

    std::sort(milestones.begin(), milestones.end(), std::greater<>());
    milestones.erase(std::unique(milestones.begin(), milestones.end()), milestones.end());

    DiscreteRun run;
    run.n = n;
    run.stop_size = stop_size;
    run.seed = seed;

    SplitMix64 rng(seed);
    std::map<std::int64_t, std::int64_t> counts{{n, 1}};
    std::int64_t cur_max = n;
    std::int64_t total = 1;
    std::size_t mi = 0;

    run.arrivals.push_back({cur_max, 1, 1});
    auto cross_milestones = [&]() {
        while (mi < milestones.size() && cur_max <= milestones[mi]) {
            DiscreteRun::Snapshot snap;
            snap.milestone = milestones[mi];
            snap.max_size = cur_max;
            snap.step = run.steps;
            snap.counts.assign(counts.begin(), counts.end());
            run.snapshots.push_back(std::move(snap));
            ++mi;
        }
    };
    cross_milestones();

    while (cur_max > stop_size) {
        auto top = counts.rbegin();
        const std::int64_t s = top->first;
        if (--(top->second) == 0) counts.erase(s);
        const std::int64_t piece = law.sample_piece(s, rng);
        ++counts[piece];
        ++counts[s - piece];
        ++total;
        ++run.steps;

        const std::int64_t new_max = counts.rbegin()->first;
        if (new_max < cur_max) {
            cur_max = new_max;
            run.arrivals.push_back({cur_max, counts[cur_max], total});
            cross_milestones();
        }
    }

    run.final_counts.assign(counts.begin(), counts.end());
    return run;
}

DiscreteRun simulate_discrete(std::int64_t n, double alpha, std::int64_t stop_size,
                              std::uint64_t seed,
                              std::vector<std::int64_t> milestones) {
    const SplitLaw law = SplitLaw::heavy_tail(alpha);
    return simulate_discrete(law, n, stop_size, seed, std::move(milestones));
}

std::optional<std::int64_t> detect_critical_size(const DiscreteRun& run,
                                                 const DetectorParams& params) {
    if (!(params.theta > 0.0 && params.theta <= 1.0) || params.w_min < 1 ||
        params.w_frac < 1)
        throw std::invalid_argument("detect_critical_size: bad parameters");

    // occupied arrival sizes <= n/2, ascending
    std::vector<std::int64_t> hits;
    hits.reserve(run.arrivals.size());
    for (auto it = run.arrivals.rbegin(); it != run.arrivals.rend(); ++it)
        if (it->size <= run.n / 2 && it->count >= 1) hits.push_back(it->size);
    if (hits.empty()) return std::nullopt;

    for (std::size_t idx = hits.size(); idx-- > 0;) {
        const std::int64_t s = hits[idx];
        const std::int64_t W = std::max(params.w_min, s / params.w_frac);
        const auto first = std::lower_bound(hits.begin(), hits.end(), s - W + 1);
        const auto occupied =
            static_cast<double>(hits.begin() + static_cast<std::ptrdiff_t>(idx + 1) - first);
        if (occupied / static_cast<double>(W) >= params.theta) return s;
    }
    return std::nullopt;
}

HtSeries solve_Ht_recurrence(double alpha, std::size_t T) {
    if (T < 1) throw std::invalid_argument("solve_Ht_recurrence: T must be >= 1");
    if (alpha <= 1.0) throw std::invalid_argument("solve_Ht_recurrence: alpha must be > 1");
    const double zeta = riemann_zeta(alpha);

    std::vector<double> p(T + 1, 0.0);
    for (std::size_t j = 1; j <= T; ++j)
        p[j] = std::pow(static_cast<double>(j), -alpha) / zeta;

    // H mirrored so the inner product runs over contiguous ascending memory:
    // rev[T - t] = H_t, H_t = sum_j p[j] rev[T - t + j]
    std::vector<double> rev(T + 1, 0.0);
    rev[T] = 1.0;
    for (std::size_t t = 1; t <= T; ++t) {
        const double* pr = p.data() + 1;
        const double* hr = rev.data() + (T - t + 1);
        double s = 0.0;
        for (std::size_t j = 0; j < t; ++j) s += pr[j] * hr[j];
        rev[T - t] = s;
    }

    HtSeries out;
    out.alpha = alpha;
    out.H.resize(T + 1);
    for (std::size_t t = 0; t <= T; ++t) out.H[t] = rev[T - t];
    return out;
}

PlateauStats measure_plateau(const std::vector<double>& H, std::size_t t_lo,
                             std::size_t t_hi) {
    if (t_lo < 1 || t_hi <= t_lo || t_hi >= H.size())
        throw std::invalid_argument("measure_plateau: bad window");
    double lo = 1e300, hi = -1e300, sum = 0.0;
    for (std::size_t t = t_lo; t <= t_hi; ++t) {
        const double v = std::sqrt(static_cast<double>(t)) * H[t];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    const double mean = sum / static_cast<double>(t_hi - t_lo + 1);
    return {mean, (hi - lo) / mean};
}

PlateauStats measure_plateau(const HtSeries& series, std::size_t t_lo,
                             std::size_t t_hi) {
    return measure_plateau(series.H, t_lo, t_hi);
}

CriticalPoints predict_critical_points(std::int64_t n, double alpha) {
    if (n < 10000)
        throw std::invalid_argument("predict_critical_points: n must be >= 10^4 "
                                    "(asymptotic regime)");
    if (std::abs(alpha - 1.5) > 1e-12)
        throw std::invalid_argument(
            "predict_critical_points: only alpha = 3/2 is implemented");
    const double zeta = riemann_zeta(1.5);
    const double dn = static_cast<double>(n);
    CriticalPoints cp;
    cp.M_c = std::pow(2.0 / zeta, 2.0 / 3.0) * std::pow(dn, 2.0 / 3.0);
    cp.count_at_Mc = zeta / 4.0 * cp.M_c;
    cp.M_c_prime = 4.0 * dn / (zeta * zeta * cp.M_c);
    cp.count_at_Mc_prime = zeta / 4.0 * std::sqrt(dn * cp.M_c);
    return cp;
}

std::vector<std::vector<double>> reverse_recurrence(std::int64_t n,
                                                    const SplitLaw& law, int k_max) {
    if (!law.discrete())
        throw std::invalid_argument("reverse_recurrence: law must be discrete");
    if (k_max < 1) throw std::invalid_argument("reverse_recurrence: k_max must be >= 1");
    if (n < 1) throw std::invalid_argument("reverse_recurrence: n must be >= 1");
    const double dn = static_cast<double>(n);

    std::vector<std::vector<double>> rows;
    rows.push_back({dn});
    for (int k = 2; k <= k_max; ++k) {
        const auto& prev = rows.back();
        const std::vector<double> p = law.symmetric_pmf(k);
        const auto ku = static_cast<std::size_t>(k);

        // x_j = u_j + v_j * s with s = x_k unknown until the mass row
        std::vector<double> u(ku + 1, 0.0), v(ku + 1, 0.0);
        v[ku] = 1.0;
        for (std::size_t j = ku - 1; j >= 1; --j) {
            double su = prev[j - 1], sv = 0.0;
            for (std::size_t i = j + 1; i <= ku; ++i) {
                su -= p[i - j - 1] * u[i];
                sv -= p[i - j - 1] * v[i];
            }
            u[j] = su;
            v[j] = sv;
        }
        double mass_u = 0.0, mass_v = 0.0, vscale = 0.0;
        for (std::size_t j = 1; j <= ku; ++j) {
            mass_u += static_cast<double>(j) * u[j];
            mass_v += static_cast<double>(j) * v[j];
            vscale += static_cast<double>(j) * std::abs(v[j]);
        }
        if (std::abs(mass_v) < 1e-12 * std::max(vscale, 1.0))
            throw std::runtime_error("reverse_recurrence: singular mass row at k=" +
                                     std::to_string(k));
        const double s = (dn - mass_u) / mass_v;

        std::vector<double> row(ku);
        for (std::size_t j = 1; j <= ku; ++j) row[j - 1] = u[j] + v[j] * s;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::vector<double>> reverse_system_matrix(const SplitLaw& law, int k) {
    if (k < 2) throw std::invalid_argument("reverse_system_matrix: k must be >= 2");
    const std::vector<double> p = law.symmetric_pmf(k);
    const auto ku = static_cast<std::size_t>(k);
    std::vector<std::vector<double>> A(ku, std::vector<double>(ku, 0.0));
    for (std::size_t j = 0; j + 1 < ku; ++j) {
        A[j][j] = 1.0;
        for (std::size_t i = j + 1; i < ku; ++i) A[j][i] = p[i - j - 1];
    }
    for (std::size_t i = 0; i < ku; ++i) A[ku - 1][i] = static_cast<double>(i + 1);
    return A;
}

std::vector<HkRow> make_hk_table(const DiscreteRun& run, double alpha,
                                 const std::vector<std::int64_t>& ks) {
    std::vector<HkRow> rows;
    rows.reserve(ks.size());
    for (std::int64_t k : ks) {
        if (k < 1) throw std::invalid_argument("make_hk_table: k must be >= 1");
        const std::int64_t h = run.arrival_count(k);
        const double conj =
            static_cast<double>(run.n) / std::pow(static_cast<double>(k), alpha);
        rows.push_back({k, h, conj, static_cast<double>(h) / conj});
    }
    return rows;
}

std::vector<HkRow> test_Hk_conjecture(std::int64_t n, double alpha,
                                      const std::vector<std::int64_t>& k_range,
                                      std::uint64_t seed) {
    if (k_range.empty())
        throw std::invalid_argument("test_Hk_conjecture: k_range must be nonempty");
    std::int64_t stop = k_range.front();
    for (std::int64_t k : k_range) {
        if (k < 1) throw std::invalid_argument("test_Hk_conjecture: k must be >= 1");
        stop = std::min(stop, k);
    }
    const DiscreteRun run = simulate_discrete(n, alpha, stop, seed);
    return make_hk_table(run, alpha, k_range);
}

} // namespace fragmenta
