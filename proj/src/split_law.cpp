#include "fragmenta/split_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fragmenta/math_util.hpp"
#include "fragmenta/quadrature.hpp"

namespace fragmenta {

namespace {

constexpr std::int64_t kHeavyPrefixSize = 100000;
constexpr int kCustomCells = 4096;

// C_n / C_{n-1}
double catalan_ratio(double n) { return 2.0 * (2.0 * n - 1.0) / (n + 1.0); }

} // namespace

struct SplitLaw::Impl {
    LawKind kind;
    int b = 2;            // children per split (continuous kinds)
    double alpha = 0.0;   // heavy_tail exponent
    std::function<double(double)> f; // custom density
    bool custom_symmetric = false;
    std::vector<double> custom_cdf;  // F at nodes i/kCustomCells, size kCustomCells+1
    std::vector<double> heavy_prefix; // cum_{j<=i+1} j^{-alpha}
    double zeta_alpha = 0.0;

    double heavy_Z(std::int64_t m) const {
        if (m <= kHeavyPrefixSize) return heavy_prefix[static_cast<std::size_t>(m - 1)];
        return zeta_alpha - zeta_tail(alpha, static_cast<double>(m));
    }

    // F for the continuous families
    double F(double x) const {
        switch (kind) {
            case LawKind::kakutani:
                return 2.0 * x;
            case LawKind::b_uniform:
            case LawKind::m_ary_density:
                return b * (1.0 - std::pow(1.0 - x, b - 1));
            case LawKind::custom_density: {
                if (x >= 1.0) return custom_cdf.back();
                const double t = x * kCustomCells;
                const int j = std::min(static_cast<int>(t), kCustomCells - 1);
                const double xj = static_cast<double>(j) / kCustomCells;
                static const GaussLegendre g8(8);
                return custom_cdf[static_cast<std::size_t>(j)] +
                       (x > xj ? integrate_gl(f, xj, x, g8) : 0.0);
            }
            default:
                throw std::logic_error("expected_count: discrete law");
        }
    }

    double fdens(double x) const {
        switch (kind) {
            case LawKind::kakutani:
                return 2.0;
            case LawKind::b_uniform:
            case LawKind::m_ary_density:
                return b * (b - 1) * std::pow(1.0 - x, b - 2);
            case LawKind::custom_density:
                return f(x);
            default:
                throw std::logic_error("density: discrete law");
        }
    }
};

SplitLaw SplitLaw::kakutani() {
    auto impl = std::make_shared<Impl>();
    impl->kind = LawKind::kakutani;
    impl->b = 2;
    return SplitLaw(std::move(impl));
}

SplitLaw SplitLaw::b_uniform(int b) {
    if (b < 2) throw std::invalid_argument("b_uniform: b must be >= 2");
    auto impl = std::make_shared<Impl>();
    impl->kind = LawKind::b_uniform;
    impl->b = b;
    return SplitLaw(std::move(impl));
}

SplitLaw SplitLaw::m_ary_density(int m) {
    if (m < 2) throw std::invalid_argument("m_ary_density: m must be >= 2");
    auto impl = std::make_shared<Impl>();
    impl->kind = LawKind::m_ary_density;
    impl->b = m;
    return SplitLaw(std::move(impl));
}

SplitLaw SplitLaw::custom_density(std::function<double(double)> f, int b) {
    if (!f) throw std::invalid_argument("custom_density: null density");
    if (b < 2) throw std::invalid_argument("custom_density: b must be >= 2");
    auto impl = std::make_shared<Impl>();
    impl->kind = LawKind::custom_density;
    impl->b = b;
    impl->f = std::move(f);

    static const GaussLegendre g8(8);
    impl->custom_cdf.resize(kCustomCells + 1);
    impl->custom_cdf[0] = 0.0;
    double sym_dev = 0.0, scale = 0.0;
    for (int i = 0; i < kCustomCells; ++i) {
        const double a = static_cast<double>(i) / kCustomCells;
        const double c = static_cast<double>(i + 1) / kCustomCells;
        impl->custom_cdf[static_cast<std::size_t>(i) + 1] =
            impl->custom_cdf[static_cast<std::size_t>(i)] + integrate_gl(impl->f, a, c, g8);
        const double fa = impl->f(a);
        if (fa < -1e-12) throw std::invalid_argument("custom_density: f must be >= 0");
        sym_dev = std::max(sym_dev, std::abs(fa - impl->f(1.0 - a)));
        scale = std::max(scale, std::abs(fa));
    }
    const double total = impl->custom_cdf.back();
    if (std::abs(total - b) > 1e-6 * b)
        throw std::invalid_argument("custom_density: integral of f must equal b");
    impl->custom_symmetric = sym_dev <= 1e-8 * std::max(scale, 1.0);
    return SplitLaw(std::move(impl));
}

SplitLaw SplitLaw::heavy_tail(double alpha) {
    if (alpha <= 1.0) throw std::invalid_argument("heavy_tail: alpha must be > 1");
    auto impl = std::make_shared<Impl>();
    impl->kind = LawKind::heavy_tail;
    impl->alpha = alpha;
    impl->zeta_alpha = riemann_zeta(alpha);
    impl->heavy_prefix.resize(kHeavyPrefixSize);
    double acc = 0.0;
    for (std::int64_t i = 1; i <= kHeavyPrefixSize; ++i) {
        acc += std::pow(static_cast<double>(i), -alpha);
        impl->heavy_prefix[static_cast<std::size_t>(i - 1)] = acc;
    }
    return SplitLaw(std::move(impl));
}

SplitLaw SplitLaw::catalan_fringe() {
    auto impl = std::make_shared<Impl>();
    impl->kind = LawKind::catalan_fringe;
    return SplitLaw(std::move(impl));
}

LawKind SplitLaw::kind() const noexcept { return impl_->kind; }

bool SplitLaw::continuous() const noexcept {
    return impl_->kind != LawKind::heavy_tail && impl_->kind != LawKind::catalan_fringe;
}

int SplitLaw::branching() const {
    if (!continuous()) throw std::logic_error("branching: discrete law");
    return impl_->b;
}

double SplitLaw::alpha() const {
    if (impl_->kind != LawKind::heavy_tail) throw std::logic_error("alpha: not a heavy_tail law");
    return impl_->alpha;
}

double SplitLaw::expected_count(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("expected_count: x must be in [0,1]");
    return impl_->F(x);
}

double SplitLaw::density(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("density: x must be in [0,1]");
    return impl_->fdens(x);
}

void SplitLaw::sample_split(double parent_length, SplitMix64& rng,
                            std::vector<double>& offsets) const {
    if (!continuous()) throw std::logic_error("sample_split: discrete law");
    if (!(parent_length > 0.0))
        throw std::invalid_argument("sample_split: parent length must be positive");
    const int b = impl_->b;
    offsets.clear();

    if (impl_->kind == LawKind::custom_density) {
        if (b != 2)
            throw std::logic_error("sample_split: custom_density sampling defined for b = 2 only");
        if (!impl_->custom_symmetric)
            throw std::logic_error("sample_split: custom_density requires symmetric f for b = 2");
        // division point has CDF F/2; invert on the node grid, then Newton
        const double target = rng.uniform_open() * impl_->custom_cdf.back();
        const auto& cdf = impl_->custom_cdf;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
        std::size_t j = static_cast<std::size_t>(it - cdf.begin());
        if (j == 0) j = 1;
        double x = (static_cast<double>(j) - 0.5) / kCustomCells;
        for (int iter = 0; iter < 60; ++iter) {
            const double g = impl_->F(x) - target;
            const double d = impl_->f(x);
            if (d <= 0.0) break;
            const double step = g / d;
            x -= step;
            x = std::clamp(x, (static_cast<double>(j) - 1.0) / kCustomCells,
                           static_cast<double>(j) / kCustomCells);
            if (std::abs(step) < 1e-15) break;
        }
        offsets.push_back(x * parent_length);
        return;
    }

    // kakutani / b_uniform / m_ary: b-1 iid uniform division points
    for (;;) {
        offsets.clear();
        for (int i = 0; i < b - 1; ++i)
            offsets.push_back(rng.uniform_open() * parent_length);
        std::sort(offsets.begin(), offsets.end());
        const bool distinct =
            std::adjacent_find(offsets.begin(), offsets.end()) == offsets.end() &&
            offsets.front() > 0.0 && offsets.back() < parent_length;
        if (distinct) return;
    }
}

std::vector<double> SplitLaw::sample_split(double parent_length, SplitMix64& rng) const {
    std::vector<double> out;
    sample_split(parent_length, rng, out);
    return out;
}

std::int64_t SplitLaw::sample_piece(std::int64_t parent_size, SplitMix64& rng) const {
    if (continuous()) throw std::logic_error("sample_piece: continuous law");
    if (parent_size < 2) throw std::invalid_argument("sample_piece: parent size must be >= 2");
    const std::int64_t m = parent_size / 2;
    if (m == 1) return 1;

    if (impl_->kind == LawKind::heavy_tail) {
        const double Z = impl_->heavy_Z(m);
        const double target = rng.uniform_open() * Z;
        const auto& cum = impl_->heavy_prefix;
        const std::int64_t np = std::min(m, kHeavyPrefixSize);
        if (target <= cum[static_cast<std::size_t>(np - 1)]) {
            const auto it = std::lower_bound(cum.begin(), cum.begin() + np, target);
            return static_cast<std::int64_t>(it - cum.begin()) + 1;
        }
        // beyond the prefix table: invert the Euler-Maclaurin tail.
        // S(i) >= target  <=>  zeta_tail(i) <= R
        const double a = impl_->alpha;
        const double R = impl_->zeta_alpha - target;
        double guess = std::pow((a - 1.0) * std::max(R, 1e-300), -1.0 / (a - 1.0));
        std::int64_t i = std::clamp(static_cast<std::int64_t>(guess), kHeavyPrefixSize + 1, m);
        while (i < m && zeta_tail(a, static_cast<double>(i)) > R) ++i;
        while (i > kHeavyPrefixSize + 1 && zeta_tail(a, static_cast<double>(i - 1)) <= R) --i;
        return i;
    }

    // catalan_fringe: walk the folded pmf; the unordered split has
    // q(i) = C_{i-1} C_{k-i} / (C_k - C_{k-1}) on 1..k-1, smaller piece is
    // min(i, k-i). Walk terminates after ~sqrt(k) steps in expectation.
    const double k = static_cast<double>(parent_size);
    const double u = rng.uniform_open();
    double q = 1.0 / (catalan_ratio(k) - 1.0); // q(1)
    double acc = 0.0;
    for (std::int64_t i = 1; i <= m; ++i) {
        const double di = static_cast<double>(i);
        // rho = q(i+1)/q(i) = q(k-i)/q(i)
        const double rho = catalan_ratio(di) * (k - di + 1.0) /
                           (2.0 * (2.0 * (k - di) - 1.0));
        const bool middle = (parent_size % 2 == 0) && (i == m);
        const double p_min = middle ? q : q * (1.0 + rho);
        acc += p_min;
        if (u <= acc || i == m) return i;
        q *= rho;
    }
    return m;
}

std::vector<double> SplitLaw::piece_pmf(std::int64_t parent_size) const {
    if (continuous()) throw std::logic_error("piece_pmf: continuous law");
    if (parent_size < 2) throw std::invalid_argument("piece_pmf: parent size must be >= 2");
    const std::int64_t m = parent_size / 2;
    std::vector<double> p(static_cast<std::size_t>(m));

    if (impl_->kind == LawKind::heavy_tail) {
        const double Z = impl_->heavy_Z(m);
        for (std::int64_t i = 1; i <= m; ++i)
            p[static_cast<std::size_t>(i - 1)] =
                std::pow(static_cast<double>(i), -impl_->alpha) / Z;
        return p;
    }

    const double logZ = log_catalan(parent_size - 1) +
                        std::log(catalan_ratio(static_cast<double>(parent_size)) - 1.0);
    for (std::int64_t i = 1; i <= m; ++i) {
        const double lq = log_catalan(i - 1) + log_catalan(parent_size - i) - logZ;
        double v = std::exp(lq);
        if (i < parent_size - i) {
            const double lq_mirror =
                log_catalan(parent_size - i - 1) + log_catalan(i) - logZ;
            v += std::exp(lq_mirror);
        }
        p[static_cast<std::size_t>(i - 1)] = v;
    }
    return p;
}

std::vector<double> SplitLaw::symmetric_pmf(std::int64_t parent_size) const {
    if (continuous()) throw std::logic_error("symmetric_pmf: continuous law");
    if (parent_size < 2) throw std::invalid_argument("symmetric_pmf: parent size must be >= 2");
    const std::size_t n = static_cast<std::size_t>(parent_size - 1);
    std::vector<double> p(n);

    if (impl_->kind == LawKind::heavy_tail) {
        double total = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            const double w = std::pow(static_cast<double>(i), -impl_->alpha) +
                             std::pow(static_cast<double>(parent_size) - static_cast<double>(i),
                                      -impl_->alpha);
            p[i - 1] = w;
            total += w;
        }
        for (auto& v : p) v /= total;
        return p;
    }

    const double logZ = log_catalan(parent_size - 1) +
                        std::log(catalan_ratio(static_cast<double>(parent_size)) - 1.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const auto ii = static_cast<std::int64_t>(i);
        const double a = std::exp(log_catalan(ii - 1) + log_catalan(parent_size - ii) - logZ);
        const double b = std::exp(log_catalan(parent_size - ii - 1) + log_catalan(ii) - logZ);
        p[i - 1] = 0.5 * (a + b);
    }
    return p;
}

std::string SplitLaw::name() const {
    switch (impl_->kind) {
        case LawKind::kakutani: return "kakutani";
        case LawKind::b_uniform: return "buniform" + std::to_string(impl_->b);
        case LawKind::m_ary_density: return "mary" + std::to_string(impl_->b);
        case LawKind::custom_density: return "custom_b" + std::to_string(impl_->b);
        case LawKind::heavy_tail: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "heavy%g", impl_->alpha);
            return buf;
        }
        case LawKind::catalan_fringe: return "catalan";
    }
    return "unknown";
}

nlohmann::json SplitLaw::to_json() const {
    nlohmann::json j;
    switch (impl_->kind) {
        case LawKind::kakutani: j["kind"] = "kakutani"; break;
        case LawKind::b_uniform: j["kind"] = "b_uniform"; j["b"] = impl_->b; break;
        case LawKind::m_ary_density: j["kind"] = "m_ary_density"; j["m"] = impl_->b; break;
        case LawKind::custom_density:
            j["kind"] = "custom_density";
            j["b"] = impl_->b;
            j["note"] = "density is not serializable";
            break;
        case LawKind::heavy_tail: j["kind"] = "heavy_tail"; j["alpha"] = impl_->alpha; break;
        case LawKind::catalan_fringe: j["kind"] = "catalan_fringe"; break;
    }
    return j;
}

SplitLaw SplitLaw::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "kakutani") return kakutani();
    if (kind == "b_uniform") return b_uniform(j.at("b").get<int>());
    if (kind == "m_ary_density") return m_ary_density(j.at("m").get<int>());
    if (kind == "heavy_tail") return heavy_tail(j.at("alpha").get<double>());
    if (kind == "catalan_fringe") return catalan_fringe();
    if (kind == "custom_density")
        throw std::invalid_argument("from_json: custom_density cannot be deserialized");
    throw std::invalid_argument("from_json: unknown law kind '" + kind + "'");
}

SplitLaw SplitLaw::parse(std::string_view token) {
    const std::string t(token);
    auto tail_int = [&](std::size_t off) {
        std::size_t pos = 0;
        const int v = std::stoi(t.substr(off), &pos);
        if (off + pos != t.size()) throw std::invalid_argument("trailing junk");
        return v;
    };
    try {
        if (t == "kakutani") return kakutani();
        if (t == "catalan") return catalan_fringe();
        if (t.rfind("buniform", 0) == 0) return b_uniform(tail_int(8));
        if (t.rfind("mary", 0) == 0) return m_ary_density(tail_int(4));
        if (t.rfind("heavy", 0) == 0) {
            std::size_t pos = 0;
            const double a = std::stod(t.substr(5), &pos);
            if (5 + pos != t.size()) throw std::invalid_argument("trailing junk");
            return heavy_tail(a);
        }
    } catch (const std::invalid_argument&) {
        // fall through to the uniform error below
    } catch (const std::out_of_range&) {
    }
    throw std::invalid_argument("unknown split law '" + t +
                                "' (expected kakutani, buniform<b>, mary<m>, heavy<alpha>, catalan)");
}

} // namespace fragmenta
