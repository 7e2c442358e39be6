#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "lsalab/errors.hpp"

namespace lsalab {

/// CSV writer with the schema conventions used across experiments: one
/// comment line carrying the config hash and seed, then a header row.
/// Numbers are formatted with %.12g so identical runs produce identical
/// bytes.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header, std::uint64_t config_hash,
              std::uint64_t seed)
        : out_(path) {
        if (!out_) throw IoError("cannot open output file: " + path);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "# config_hash=%016llx seed=%llu\n",
                      static_cast<unsigned long long>(config_hash),
                      static_cast<unsigned long long>(seed));
        out_ << buf << header << "\n";
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return buf;
    }
    static std::string num(long long v) { return std::to_string(v); }

private:
    std::ofstream out_;
};

inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace lsalab
