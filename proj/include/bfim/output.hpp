#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace bfim {

// Full round-trip precision, '.' decimal separator, locale-independent.
std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& bytes);

// Hash of the canonical (sorted-key) JSON dump, as 16 hex digits. Identifies
// an experiment configuration in file paths and data headers.
std::string config_hash_hex(const nlohmann::json& config);

// CSV with a `# config_hash=<hex>` first line, then a header row, then data
// rows at full double precision.
class CsvWriter {
public:
    CsvWriter(std::string config_hash, std::vector<std::string> columns);

    void add_row(const std::vector<double>& values);
    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::string hash_;
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace bfim
