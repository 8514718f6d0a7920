#include "fragmenta/io.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fragmenta/rng.hpp"

namespace fragmenta {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

CsvBuilder::CsvBuilder(std::vector<std::string> columns) : n_cols_(columns.size()) {
    if (columns.empty()) throw std::invalid_argument("CsvBuilder: no columns");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ += ',';
        out_ += columns[i];
    }
    out_ += '\n';
}

CsvBuilder& CsvBuilder::begin_row() {
    check_complete();
    ++n_rows_;
    cells_in_row_ = 0;
    return *this;
}

void CsvBuilder::check_complete() const {
    if (n_rows_ > 0 && cells_in_row_ != n_cols_)
        throw std::logic_error("CsvBuilder: row has " + std::to_string(cells_in_row_) +
                               " cells, expected " + std::to_string(n_cols_));
}

CsvBuilder& CsvBuilder::add(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return add(std::string_view(buf));
}

CsvBuilder& CsvBuilder::add(std::int64_t v) {
    return add(std::to_string(v));
}

CsvBuilder& CsvBuilder::add(std::string_view v) {
    if (n_rows_ == 0) throw std::logic_error("CsvBuilder: add before begin_row");
    if (cells_in_row_ >= n_cols_) throw std::logic_error("CsvBuilder: too many cells in row");
    if (v.find_first_of(",\n\r") != std::string_view::npos)
        throw std::invalid_argument("CsvBuilder: cell contains a delimiter");
    if (cells_in_row_) out_ += ',';
    out_.append(v);
    ++cells_in_row_;
    if (cells_in_row_ == n_cols_) out_ += '\n';
    return *this;
}

std::string CsvBuilder::str() const {
    check_complete();
    return out_;
}

std::string CsvBuilder::write(const std::filesystem::path& p) const {
    const std::string text = str();
    write_text(p, text);
    return fnv1a64_hex(text);
}

CsvTable CsvTable::parse(std::string_view text, std::string_view origin) {
    CsvTable t;
    std::size_t pos = 0;
    auto next_line = [&]() -> std::optional<std::string_view> {
        if (pos >= text.size()) return std::nullopt;
        std::size_t e = text.find('\n', pos);
        if (e == std::string_view::npos) e = text.size();
        std::string_view line = text.substr(pos, e - pos);
        pos = e + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        return line;
    };
    auto split = [](std::string_view line) {
        std::vector<std::string> cells;
        std::size_t p = 0;
        for (;;) {
            const std::size_t c = line.find(',', p);
            if (c == std::string_view::npos) {
                cells.emplace_back(line.substr(p));
                return cells;
            }
            cells.emplace_back(line.substr(p, c - p));
            p = c + 1;
        }
    };

    const auto header = next_line();
    if (!header || header->empty())
        throw std::runtime_error(std::string(origin) + ": empty CSV (no header)");
    t.columns = split(*header);
    while (auto line = next_line()) {
        if (line->empty()) continue;
        auto cells = split(*line);
        if (cells.size() != t.columns.size())
            throw std::runtime_error(std::string(origin) + ": row " +
                                     std::to_string(t.rows.size() + 2) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(t.columns.size()));
        t.rows.push_back(std::move(cells));
    }
    if (t.rows.empty())
        throw std::runtime_error(std::string(origin) + ": empty CSV (no data rows)");
    return t;
}

CsvTable CsvTable::read(const std::filesystem::path& p) {
    return parse(read_text(p), p.string());
}

bool CsvTable::has(std::string_view name) const {
    for (const auto& c : columns)
        if (c == name) return true;
    return false;
}

std::size_t CsvTable::col(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw std::runtime_error("CSV schema mismatch: missing column '" + std::string(name) +
                             "'");
}

std::vector<double> CsvTable::numeric(std::string_view name) const {
    const std::size_t c = col(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        try {
            std::size_t used = 0;
            const double v = std::stod(rows[r][c], &used);
            if (used != rows[r][c].size()) throw std::invalid_argument("trailing junk");
            out.push_back(v);
        } catch (const std::exception&) {
            throw std::runtime_error("CSV column '" + std::string(name) + "' row " +
                                     std::to_string(r + 2) + ": not numeric: '" +
                                     rows[r][c] + "'");
        }
    }
    return out;
}

void write_text(const std::filesystem::path& p, std::string_view content) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + p.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + p.string());
}

std::string read_text(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string digest_file(const std::filesystem::path& p) {
    return fnv1a64_hex(read_text(p));
}

void write_json(const std::filesystem::path& p, const nlohmann::json& j) {
    write_text(p, j.dump(2) + "\n");
}

nlohmann::json RunConfig::to_json() const {
    return nlohmann::json{
        {"command", command},       {"law", law},
        {"scheme", scheme},         {"x_c", x_c},
        {"replicates", replicates}, {"master_seed", master_seed},
        {"output_dir", output_dir}, {"grid", grid},
        {"m", m},                   {"y_min", y_min},
        {"n", n},                   {"alpha", alpha},
        {"stop_size", stop_size},
    };
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("command", c.command);
    get("law", c.law);
    get("scheme", c.scheme);
    get("x_c", c.x_c);
    get("replicates", c.replicates);
    get("master_seed", c.master_seed);
    get("output_dir", c.output_dir);
    get("grid", c.grid);
    get("m", c.m);
    get("y_min", c.y_min);
    get("n", c.n);
    get("alpha", c.alpha);
    get("stop_size", c.stop_size);
    return c;
}

nlohmann::json make_manifest(const RunConfig& cfg,
                             const std::vector<std::pair<std::string, std::string>>& outputs,
                             double wall_ms) {
    nlohmann::json out;
    for (const auto& [name, digest] : outputs) out[name] = digest;
    nlohmann::json seeds = nlohmann::json::array();
    for (int r = 0; r < cfg.replicates; ++r)
        seeds.push_back(replicate_seed(cfg.master_seed, static_cast<std::uint64_t>(r)));
    return nlohmann::json{{"tool", "fragmenta"},
                          {"version", "0.1.0"},
                          {"config", cfg.to_json()},
                          {"replicate_seeds", seeds},
                          {"outputs", out},
                          {"wall_ms", wall_ms}};
}

} // namespace fragmenta
