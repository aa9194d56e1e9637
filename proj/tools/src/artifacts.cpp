#include "scmra_cli/artifacts.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "scmra/error.hpp"

namespace scmra::cli {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256: digest failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
}

std::string manifest_text(const nlohmann::ordered_json& manifest) { return manifest.dump(2) + "\n"; }

namespace {

void write_file(const fs::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + file.string() + "'");
    out << text;
    if (!out) throw Error("write failed for '" + file.string() + "'");
}

std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot read '" + file.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string write_manifest(const fs::path& dir, const nlohmann::ordered_json& manifest) {
    const std::string text = manifest_text(manifest);
    write_file(dir / "manifest.json", text);
    return sha256_hex(text);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns, std::string manifest_hash)
    : columns_(std::move(columns)), hash_(std::move(manifest_hash)) {}

CsvTable& CsvTable::row() {
    rows_.emplace_back();
    return *this;
}

CsvTable& CsvTable::add(const std::string& v) {
    if (rows_.empty()) throw Error("CsvTable: add before row");
    if (v.find_first_of(",\"\n") != std::string::npos) throw Error("CsvTable: field needs quoting: " + v);
    rows_.back().push_back(v);
    return *this;
}

CsvTable& CsvTable::add(double v) { return add(format_number(v)); }
CsvTable& CsvTable::add(long long v) { return add(std::to_string(v)); }

std::string CsvTable::str() const {
    std::ostringstream os;
    os << "format_version,manifest_hash";
    for (const auto& c : columns_) os << ',' << c;
    os << '\n';
    for (const auto& r : rows_) {
        if (r.size() != columns_.size()) throw Error("CsvTable: row has wrong number of fields");
        os << kFormatVersion << ',' << hash_;
        for (const auto& f : r) os << ',' << f;
        os << '\n';
    }
    return os.str();
}

void CsvTable::write(const fs::path& file) const { write_file(file, str()); }

IntegrityReport verify_directory(const fs::path& dir) {
    IntegrityReport rep;
    auto fail = [&rep](const std::string& msg) {
        rep.ok = false;
        rep.problems.push_back(msg);
    };
    const fs::path manifest = dir / "manifest.json";
    if (!fs::exists(manifest)) {
        fail("missing manifest.json");
        return rep;
    }
    const std::string hash = sha256_hex(read_file(manifest));

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
        const auto ext = file.extension().string();
        if (ext != ".csv" && ext != ".ndjson") continue;
        ++rep.files_checked;
        std::istringstream in(read_file(file));
        std::string line;
        const std::string name = file.filename().string();
        if (ext == ".csv") {
            if (!std::getline(in, line) || line.rfind("format_version,manifest_hash", 0) != 0) {
                fail(name + ": missing format_version,manifest_hash header");
                continue;
            }
            int n = 1;
            while (std::getline(in, line)) {
                ++n;
                const auto c1 = line.find(',');
                const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
                if (c2 == std::string::npos) {
                    fail(name + ":" + std::to_string(n) + ": malformed row");
                    break;
                }
                if (line.substr(0, c1) != std::to_string(kFormatVersion)) {
                    fail(name + ":" + std::to_string(n) + ": unknown format_version");
                    break;
                }
                if (line.substr(c1 + 1, c2 - c1 - 1) != hash) {
                    fail(name + ":" + std::to_string(n) + ": manifest hash mismatch");
                    break;
                }
            }
        } else {
            if (!std::getline(in, line)) {
                fail(name + ": empty event log");
                continue;
            }
            try {
                const auto header = nlohmann::json::parse(line);
                if (header.value("kind", "") != "header" || header.value("manifest_hash", "") != hash)
                    fail(name + ": header missing or manifest hash mismatch");
            } catch (const nlohmann::json::exception&) {
                fail(name + ": header is not JSON");
            }
        }
    }
    return rep;
}

}  // namespace scmra::cli
