#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace fragmenta {

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// CSV with a fixed header; cells may not contain commas or newlines.
// Doubles are written with 17 significant digits so files round-trip.
class CsvBuilder {
public:
    explicit CsvBuilder(std::vector<std::string> columns);

    CsvBuilder& begin_row();
    CsvBuilder& add(double v);
    CsvBuilder& add(std::int64_t v);
    CsvBuilder& add(int v) { return add(static_cast<std::int64_t>(v)); }
    CsvBuilder& add(std::size_t v) { return add(static_cast<std::int64_t>(v)); }
    CsvBuilder& add(std::string_view v);

    std::size_t rows() const { return n_rows_; }
    std::string str() const;                       // validates the last row
    std::string write(const std::filesystem::path& p) const; // returns digest

private:
    void check_complete() const;
    std::size_t n_cols_;
    std::size_t n_rows_ = 0;
    std::size_t cells_in_row_ = 0;
    std::string out_;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    static CsvTable read(const std::filesystem::path& p); // rejects ragged rows
    static CsvTable parse(std::string_view text, std::string_view origin);

    bool has(std::string_view name) const;
    std::size_t col(std::string_view name) const;  // names the missing column
    std::vector<double> numeric(std::string_view name) const;
};

void write_text(const std::filesystem::path& p, std::string_view content);
std::string read_text(const std::filesystem::path& p);
std::string digest_file(const std::filesystem::path& p);
void write_json(const std::filesystem::path& p, const nlohmann::json& j);

// common knobs for every CLI command; round-trips through JSON config files
struct RunConfig {
    std::string command = "simulate";
    std::string law = "kakutani";
    std::string scheme = "greedy";
    double x_c = 1e-3;
    int replicates = 1;
    std::uint64_t master_seed = 1;
    std::string output_dir = "out";
    int grid = 2048;
    int m = 3;
    double y_min = 0.01;
    std::int64_t n = 1000000;
    double alpha = 1.5;
    std::int64_t stop_size = 3;

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
};

// manifest written next to every output set: tool version, config echo,
// per-replicate seeds, output digests, wall time
nlohmann::json make_manifest(const RunConfig& cfg,
                             const std::vector<std::pair<std::string, std::string>>& outputs,
                             double wall_ms);

} // namespace fragmenta
