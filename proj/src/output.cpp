#include "bfim/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace bfim {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string config_hash_hex(const nlohmann::json& config) {
    const std::uint64_t h = fnv1a64(config.dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

CsvWriter::CsvWriter(std::string config_hash, std::vector<std::string> columns)
    : hash_(std::move(config_hash)), columns_(std::move(columns)) {}

void CsvWriter::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
        throw std::invalid_argument("csv row width does not match the header");
    rows_.push_back(values);
}

std::string CsvWriter::str() const {
    std::string out = "# config_hash=" + hash_ + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
        out += (i ? "," : "") + columns_[i];
    out += "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ",";
            out += format_double(row[i]);
        }
        out += "\n";
    }
    return out;
}

void CsvWriter::write(const std::filesystem::path& path) const {
    write_text_file(path, str());
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << content;
    if (!f)
        throw std::runtime_error("short write to " + path.string());
}

} // namespace bfim
