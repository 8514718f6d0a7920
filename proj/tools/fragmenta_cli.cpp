#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fragmenta/discrete.hpp"
#include "fragmenta/empirics.hpp"
#include "fragmenta/fragmentation.hpp"
#include "fragmenta/io.hpp"
#include "fragmenta/rng.hpp"
#include "fragmenta/split_law.hpp"
#include "fragmenta/stationary.hpp"
#include "fragmenta/svg.hpp"
#include "fragmenta/tree_profile.hpp"
#include "fragmenta/verify.hpp"

namespace {

using namespace fragmenta;
namespace fs = std::filesystem;

using Clock = std::chrono::steady_clock;

double wall_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// CSV cells may not contain delimiters; free-form strings get them replaced
std::string no_commas(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

Scheme parse_scheme(const std::string& s) {
    if (s == "greedy") return Scheme::greedy;
    if (s == "random" || s == "random_order") return Scheme::random_order;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected greedy or random)");
}

// flag storage; presence is queried through CLI11 so config values are only
// overridden by flags the user actually passed
struct Flags {
    std::string config;
    std::string law;
    std::string scheme;
    std::string output_dir;
    std::string input;
    double x_c = 0.0;
    double y_min = 0.0;
    double alpha = 0.0;
    int replicates = 0;
    int grid = 0;
    int m = 0;
    std::uint64_t master_seed = 0;
    std::int64_t n = 0;
    std::int64_t stop_size = 0;
    bool full = false;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON config file; explicit flags override it");
    sub->add_option("--law", f.law,
                    "split law: kakutani, buniform<b>, mary<m>, heavy<alpha>, catalan");
    sub->add_option("--x-c", f.x_c, "freezing cutoff in (0,1)");
    sub->add_option("--replicates", f.replicates, "number of independent replicates");
    sub->add_option("--master-seed", f.master_seed,
                    "master seed; replicate r runs on splitmix_hash(master, r)");
    sub->add_option("--output-dir", f.output_dir, "directory for CSV/SVG/manifest outputs");
    sub->add_option("--scheme", f.scheme, "splitting order: greedy | random");
    sub->add_option("--grid", f.grid, "grid size for theory/profile evaluations");
    sub->add_option("--m", f.m, "branching factor for roots");
    sub->add_option("--y-min", f.y_min, "left end of the profile grid, in (0,1)");
    sub->add_option("--n", f.n, "initial integer mass for discrete runs");
    sub->add_option("--alpha", f.alpha, "heavy-tail exponent");
    sub->add_option("--stop-size", f.stop_size, "discrete stop size");
}

struct Resolved {
    RunConfig cfg;
    bool seed_given = false;
};

Resolved resolve(CLI::App* sub, const Flags& f, const char* command) {
    Resolved r;
    if (sub->count("--config")) {
        const nlohmann::json j = nlohmann::json::parse(read_text(f.config));
        r.cfg = RunConfig::from_json(j);
        if (j.contains("master_seed")) r.seed_given = true;
    }
    if (sub->count("--law")) r.cfg.law = f.law;
    if (sub->count("--scheme")) r.cfg.scheme = f.scheme;
    if (sub->count("--x-c")) r.cfg.x_c = f.x_c;
    if (sub->count("--replicates")) r.cfg.replicates = f.replicates;
    if (sub->count("--master-seed")) {
        r.cfg.master_seed = f.master_seed;
        r.seed_given = true;
    }
    if (sub->count("--output-dir")) r.cfg.output_dir = f.output_dir;
    if (sub->count("--grid")) r.cfg.grid = f.grid;
    if (sub->count("--m")) r.cfg.m = f.m;
    if (sub->count("--y-min")) r.cfg.y_min = f.y_min;
    if (sub->count("--n")) r.cfg.n = f.n;
    if (sub->count("--alpha")) r.cfg.alpha = f.alpha;
    if (sub->count("--stop-size")) r.cfg.stop_size = f.stop_size;
    r.cfg.command = command;
    return r;
}

void validate(const RunConfig& cfg) {
    const std::string& c = cfg.command;
    if (c == "roots") {
        if (cfg.m < 2 || cfg.m > 64)
            throw std::invalid_argument("roots: --m must be in [2, 64]");
        return;
    }
    if (c == "report") return;

    const SplitLaw law = SplitLaw::parse(cfg.law);
    if (c == "simulate" || c == "verify") {
        if (!law.continuous())
            throw std::invalid_argument(c + ": law must be continuous");
        if (!(cfg.x_c > 0.0 && cfg.x_c < 1.0))
            throw std::invalid_argument(c + ": --x-c must be in (0,1)");
        if (cfg.replicates < 1)
            throw std::invalid_argument(c + ": --replicates must be >= 1");
        if (c == "simulate") parse_scheme(cfg.scheme);
    } else if (c == "theory") {
        if (!law.continuous()) throw std::invalid_argument("theory: law must be continuous");
    } else if (c == "profile") {
        if (!law.continuous()) throw std::invalid_argument("profile: law must be continuous");
        if (!(cfg.y_min > 0.0 && cfg.y_min < 1.0))
            throw std::invalid_argument("profile: --y-min must be in (0,1)");
        if (cfg.grid < 16 || cfg.grid % 2 != 0)
            throw std::invalid_argument("profile: --grid must be even and >= 16");
    } else if (c == "discrete") {
        if (!law.discrete()) throw std::invalid_argument("discrete: law must be discrete");
        if (cfg.n < 2) throw std::invalid_argument("discrete: --n must be >= 2");
        if (cfg.stop_size < 1 || cfg.stop_size >= cfg.n)
            throw std::invalid_argument("discrete: need 1 <= --stop-size < --n");
        if (cfg.replicates < 1)
            throw std::invalid_argument("discrete: --replicates must be >= 1");
    }
}

int cmd_simulate(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const SplitLaw law = SplitLaw::parse(cfg.law);
    const Scheme scheme = parse_scheme(cfg.scheme);
    const StationarySolution sol = solve_stationary(law);
    const fs::path dir(cfg.output_dir);

    CsvBuilder summary({"replicate", "seed", "steps", "count", "total_length",
                        "ks_spacing", "point_deviation"});
    CsvBuilder spacings({"replicate", "left", "length"});
    std::vector<double> pooled;
    double mean_count = 0.0;
    for (int r = 0; r < cfg.replicates; ++r) {
        const std::uint64_t seed = replicate_seed(cfg.master_seed, static_cast<std::uint64_t>(r));
        const RunResult run = run_to_cutoff(law, cfg.x_c, seed, scheme);
        std::vector<double> norm;
        norm.reserve(run.spacings.size());
        for (const auto& sp : run.spacings) {
            spacings.begin_row().add(r).add(sp.left).add(sp.length);
            norm.push_back(sp.length / cfg.x_c);
        }
        std::sort(norm.begin(), norm.end());
        const double ks = ks_against(
            norm, [&](double t) { return sol.cdf(std::clamp(t, 0.0, 1.0)); });
        summary.begin_row()
            .add(r)
            .add(std::to_string(seed))
            .add(run.n_steps())
            .add(run.spacings.size())
            .add(run.total_length())
            .add(ks)
            .add(point_cdf_deviation(run));
        pooled.insert(pooled.end(), norm.begin(), norm.end());
        mean_count += static_cast<double>(run.spacings.size()) / cfg.replicates;
    }

    std::sort(pooled.begin(), pooled.end());
    const EmpiricalCdf pooled_cdf{std::vector<double>(pooled)};
    CsvBuilder cdf({"x", "empirical", "theory"});
    for (int k = 1; k <= 64; ++k) {
        const double t = static_cast<double>(k) / 64.0;
        cdf.begin_row().add(t).add(pooled_cdf(t)).add(sol.cdf(t));
    }

    std::vector<std::pair<std::string, std::string>> outs;
    outs.emplace_back("summary.csv", summary.write(dir / "summary.csv"));
    outs.emplace_back("spacings.csv", spacings.write(dir / "spacings.csv"));
    outs.emplace_back("cdf.csv", cdf.write(dir / "cdf.csv"));

    const ReportPart part = build_report(CsvTable::parse(cdf.str(), "cdf.csv"),
                                         law.name() + " spacing cdf");
    const std::string svg = render_svg(part.plot);
    write_text(dir / "cdf.svg", svg);
    outs.emplace_back("cdf.svg", fnv1a64_hex(svg));

    nlohmann::json manifest = make_manifest(cfg, outs, wall_since(t0));
    manifest["results"] = {{"stationary_C", sol.C},
                           {"mean_count", mean_count},
                           {"pooled_ks", ks_against(pooled, [&](double t) {
                                return sol.cdf(std::clamp(t, 0.0, 1.0));
                            })}};
    write_json(dir / "manifest.json", manifest);
    std::printf("%s\n%s\n", part.summary.c_str(), (dir / "manifest.json").string().c_str());
    return 0;
}

int cmd_theory(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const SplitLaw law = SplitLaw::parse(cfg.law);
    const StationarySolution sol = solve_stationary(law);
    const fs::path dir(cfg.output_dir);

    const int G = std::max(cfg.grid, 16);
    CsvBuilder th({"x", "u"});
    for (int k = 1; k <= G; ++k) {
        const double x = static_cast<double>(k) / G;
        th.begin_row().add(x).add(sol.cdf(x));
    }
    std::vector<double> resid_grid;
    for (int k = 1; k <= 100; ++k) resid_grid.push_back(static_cast<double>(k) / 100.0);

    std::vector<std::pair<std::string, std::string>> outs;
    outs.emplace_back("theory.csv", th.write(dir / "theory.csv"));

    nlohmann::json manifest = make_manifest(cfg, outs, wall_since(t0));
    manifest["results"] = {{"C", sol.C},
                           {"beta", sol.beta},
                           {"b", sol.b},
                           {"mean_spacing_scaled", sol.mean_spacing_scaled()},
                           {"ode_residual", ode_residual(sol, resid_grid)}};
    write_json(dir / "manifest.json", manifest);
    std::printf("%s: C = %.12g, beta = %.12g\n%s\n", law.name().c_str(), sol.C, sol.beta,
                (dir / "manifest.json").string().c_str());
    return 0;
}

int cmd_roots(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const RootSet rs = characteristic_roots(cfg.m);
    const fs::path dir(cfg.output_dir);

    CsvBuilder csv({"m", "i", "re", "im", "residual"});
    double max_res = 0.0;
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
        csv.begin_row()
            .add(cfg.m)
            .add(static_cast<std::int64_t>(i + 1))
            .add(rs.roots[i].real())
            .add(rs.roots[i].imag())
            .add(rs.residuals[i]);
        max_res = std::max(max_res, rs.residuals[i]);
    }

    std::vector<std::pair<std::string, std::string>> outs;
    outs.emplace_back("roots.csv", csv.write(dir / "roots.csv"));

    const ReportPart part = build_report(CsvTable::parse(csv.str(), "roots.csv"),
                                         "m = " + std::to_string(cfg.m));
    const std::string svg = render_svg(part.plot);
    write_text(dir / "roots.svg", svg);
    outs.emplace_back("roots.svg", fnv1a64_hex(svg));

    nlohmann::json manifest = make_manifest(cfg, outs, wall_since(t0));
    nlohmann::json results{{"max_residual", max_res},
                           {"z1_re", rs.roots[0].real()}};
    if (cfg.m >= 3) {
        const StationarityClass sc = classify_stationarity(cfg.m);
        results["re_z2"] = sc.re_z2;
        results["stationary"] = sc.stationary;
        results["margin"] = sc.margin;
    }
    manifest["results"] = results;
    write_json(dir / "manifest.json", manifest);
    std::printf("%s\n%s\n", part.summary.c_str(), (dir / "manifest.json").string().c_str());
    return 0;
}

int cmd_profile(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const SplitLaw law = SplitLaw::parse(cfg.law);
    const ProfileSolution sol = solve_volterra_H(law, cfg.y_min, cfg.grid);
    const fs::path dir(cfg.output_dir);

    CsvBuilder csv({"y", "H"});
    std::vector<double> ys, hs;
    for (std::size_t idx = sol.grid().size(); idx-- > 0;) {
        csv.begin_row().add(sol.grid()[idx]).add(sol.values()[idx]);
        ys.push_back(sol.grid()[idx]);
        hs.push_back(sol.values()[idx]);
    }

    std::vector<std::pair<std::string, std::string>> outs;
    outs.emplace_back("profile.csv", csv.write(dir / "profile.csv"));

    PlotSpec spec;
    spec.title = law.name() + " profile H(y)";
    spec.x_label = "y";
    spec.y_label = "H";
    spec.log_x = true;
    spec.log_y = true;
    spec.series.push_back({"H", ys, hs, false});
    char ann[64];
    std::snprintf(ann, sizeof ann, "half-grid disagreement = %.3g", sol.richardson_error());
    spec.annotations.push_back(ann);
    const std::string svg = render_svg(spec);
    write_text(dir / "profile.svg", svg);
    outs.emplace_back("profile.svg", fnv1a64_hex(svg));

    nlohmann::json manifest = make_manifest(cfg, outs, wall_since(t0));
    manifest["results"] = {{"richardson_error", sol.richardson_error()},
                           {"H_at_y_min", sol.values().back()},
                           {"integral", sol.integrate(cfg.y_min, 1.0)}};
    write_json(dir / "manifest.json", manifest);
    std::printf("%s profile on [%.5g, 1], %d nodes\n%s\n", law.name().c_str(), cfg.y_min,
                cfg.grid + 1, (dir / "manifest.json").string().c_str());
    return 0;
}

int cmd_discrete(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const SplitLaw law = SplitLaw::parse(cfg.law);
    const fs::path dir(cfg.output_dir);

    CsvBuilder counts({"replicate", "size", "count"});
    CsvBuilder arrivals({"replicate", "size", "count", "total_pieces"});
    nlohmann::json detected = nlohmann::json::array();
    nlohmann::json steps = nlohmann::json::array();
    for (int r = 0; r < cfg.replicates; ++r) {
        const std::uint64_t seed = replicate_seed(cfg.master_seed, static_cast<std::uint64_t>(r));
        const DiscreteRun run = simulate_discrete(law, cfg.n, cfg.stop_size, seed);
        for (const auto& [size, count] : run.final_counts)
            counts.begin_row().add(r).add(size).add(count);
        for (const auto& a : run.arrivals)
            arrivals.begin_row().add(r).add(a.size).add(a.count).add(a.total_pieces);
        const auto det = detect_critical_size(run);
        detected.push_back(det ? nlohmann::json(*det) : nlohmann::json());
        steps.push_back(run.steps);
    }

    std::vector<std::pair<std::string, std::string>> outs;
    outs.emplace_back("counts.csv", counts.write(dir / "counts.csv"));
    outs.emplace_back("arrivals.csv", arrivals.write(dir / "arrivals.csv"));

    const ReportPart part = build_report(CsvTable::parse(counts.str(), "counts.csv"),
                                         law.name() + " final sizes");
    const std::string svg = render_svg(part.plot);
    write_text(dir / "discrete.svg", svg);
    outs.emplace_back("discrete.svg", fnv1a64_hex(svg));

    nlohmann::json manifest = make_manifest(cfg, outs, wall_since(t0));
    nlohmann::json results{{"detected_critical_size", detected}, {"steps", steps}};
    if (law.kind() == LawKind::heavy_tail && std::abs(law.alpha() - 1.5) < 1e-12 &&
        cfg.n >= 10000) {
        const CriticalPoints cp = predict_critical_points(cfg.n);
        results["predicted"] = {{"M_c", cp.M_c},
                                {"count_at_Mc", cp.count_at_Mc},
                                {"M_c_prime", cp.M_c_prime},
                                {"count_at_Mc_prime", cp.count_at_Mc_prime}};
    }
    manifest["results"] = results;
    write_json(dir / "manifest.json", manifest);
    std::printf("%s\n%s\n", part.summary.c_str(), (dir / "manifest.json").string().c_str());
    return 0;
}

int cmd_verify(const RunConfig& cfg, bool full, bool seed_given) {
    const auto t0 = Clock::now();
    const fs::path dir(cfg.output_dir);

    VerifyOptions opt;
    if (seed_given) opt.master_seed = cfg.master_seed;

    std::vector<CheckResult> results;
    if (full) {
        results = run_acceptance_checks(opt);
    } else {
        results = verify_uniformity(SplitLaw::parse(cfg.law), cfg.x_c, cfg.replicates,
                                    opt.master_seed);
    }

    CsvBuilder checks({"id", "title", "pass", "detail"});
    bool all = true;
    for (const auto& r : results) {
        checks.begin_row()
            .add(r.id)
            .add(no_commas(r.title))
            .add(r.pass ? "PASS" : "FAIL")
            .add(no_commas(r.detail));
        all = all && r.pass;
        std::printf("%s %s - %s  [%s]\n", r.id.c_str(), r.pass ? "PASS" : "FAIL",
                    r.title.c_str(), r.detail.c_str());
        std::fflush(stdout);
    }

    std::vector<std::pair<std::string, std::string>> outs;
    outs.emplace_back("checks.csv", checks.write(dir / "checks.csv"));
    nlohmann::json manifest = make_manifest(cfg, outs, wall_since(t0));
    manifest["results"] = {{"all_pass", all}, {"checks", results.size()}};
    write_json(dir / "manifest.json", manifest);
    std::printf("%s\n", (dir / "manifest.json").string().c_str());
    return all ? 0 : 1;
}

int cmd_report(const std::string& input, const RunConfig& cfg) {
    const CsvTable table = CsvTable::read(input);
    const std::string name = fs::path(input).stem().string();
    const ReportPart part = build_report(table, name);
    const std::string svg = render_svg(part.plot);
    const fs::path out = fs::path(cfg.output_dir) / (name + ".svg");
    write_text(out, svg);
    std::printf("%s\n%s\n", part.summary.c_str(), out.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fragmenta: interval splitting runs, stationary spacing laws, "
                 "subtree profiles, and their checks"};
    app.require_subcommand(1);

    Flags f;
    CLI::App* sim = app.add_subcommand("simulate", "run splitting replicates to a cutoff");
    CLI::App* theory = app.add_subcommand("theory", "stationary constant and spacing cdf");
    CLI::App* roots = app.add_subcommand("roots", "characteristic roots for branching m");
    CLI::App* profile = app.add_subcommand("profile", "solve the profile equation H(y)");
    CLI::App* discrete = app.add_subcommand("discrete", "integer mass splitting runs");
    CLI::App* verify = app.add_subcommand("verify", "spacing uniformity checks");
    CLI::App* report = app.add_subcommand("report", "render an SVG report from a CSV");
    for (CLI::App* sub : {sim, theory, roots, profile, discrete, verify, report})
        add_common(sub, f);
    verify->add_flag("--full", f.full, "run the complete acceptance suite");
    report->add_option("--input", f.input, "CSV file to plot")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CLI::App* active = app.get_subcommands().front();
    Resolved res;
    try {
        res = resolve(active, f, active->get_name().c_str());
        validate(res.cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fragmenta: %s\n", e.what());
        return 2;
    }

    try {
        const std::string& cmd = res.cfg.command;
        if (cmd == "simulate") return cmd_simulate(res.cfg);
        if (cmd == "theory") return cmd_theory(res.cfg);
        if (cmd == "roots") return cmd_roots(res.cfg);
        if (cmd == "profile") return cmd_profile(res.cfg);
        if (cmd == "discrete") return cmd_discrete(res.cfg);
        if (cmd == "verify") return cmd_verify(res.cfg, f.full, res.seed_given);
        if (cmd == "report") return cmd_report(f.input, res.cfg);
        std::fprintf(stderr, "fragmenta: unknown command '%s'\n", cmd.c_str());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fragmenta: %s\n", e.what());
        return 1;
    }
}
