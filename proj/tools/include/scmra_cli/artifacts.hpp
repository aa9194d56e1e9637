#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace scmra::cli {

/// Bumped whenever a CSV or event-log schema changes.
inline constexpr int kFormatVersion = 1;

std::string sha256_hex(const std::string& bytes);

/// Canonical manifest text; its SHA-256 is the manifest hash.
std::string manifest_text(const nlohmann::ordered_json& manifest);

/// Writes manifest.json into `dir` and returns its hash.
std::string write_manifest(const std::filesystem::path& dir, const nlohmann::ordered_json& manifest);

/// Shortest text that reads back to the same double.
std::string format_number(double v);

/// CSV table whose rows all start with format_version and manifest_hash.
class CsvTable {
public:
    CsvTable(std::vector<std::string> columns, std::string manifest_hash);

    CsvTable& row();
    CsvTable& add(const std::string& v);
    CsvTable& add(double v);
    CsvTable& add(long long v);
    CsvTable& add(int v) { return add(static_cast<long long>(v)); }

    std::string str() const;
    void write(const std::filesystem::path& file) const;

private:
    std::vector<std::string> columns_;
    std::string hash_;
    std::vector<std::vector<std::string>> rows_;
};

struct IntegrityReport {
    bool ok = true;
    std::vector<std::string> problems;
    int files_checked = 0;
};

/// Recomputes the manifest hash in `dir` and checks that every CSV row and every
/// event-log header carries it.
IntegrityReport verify_directory(const std::filesystem::path& dir);

}  // namespace scmra::cli
