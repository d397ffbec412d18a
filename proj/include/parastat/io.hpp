#pragma once

// CSV ingestion, flat key=value config files, and a deterministic JSON writer.
// All numbers are emitted with 17 significant digits so byte-identical output
// is a testable contract.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "parastat/common.hpp"

namespace parastat::io {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ordered, append-only JSON document
class JsonWriter {
  public:
    JsonWriter() { out_ += '{'; }

    JsonWriter& field(const std::string& key, double v) { return raw(key, format_double(v)); }
    JsonWriter& field(const std::string& key, long long v) { return raw(key, std::to_string(v)); }
    JsonWriter& field(const std::string& key, int v) { return raw(key, std::to_string(v)); }
    JsonWriter& field(const std::string& key, std::size_t v) { return raw(key, std::to_string(v)); }
    JsonWriter& field(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
    JsonWriter& field(const std::string& key, const std::string& v) {
        return raw(key, quote(v));
    }
    JsonWriter& field(const std::string& key, const char* v) { return raw(key, quote(v)); }
    JsonWriter& field_array(const std::string& key, const std::vector<double>& vs) {
        std::string arr = "[";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) arr += ',';
            arr += format_double(vs[i]);
        }
        arr += ']';
        return raw(key, arr);
    }
    JsonWriter& raw(const std::string& key, const std::string& json) {
        if (!first_) out_ += ',';
        first_ = false;
        out_ += quote(key);
        out_ += ':';
        out_ += json;
        return *this;
    }

    std::string str() const { return out_ + "}"; }

    static std::string quote(const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            switch (c) {
                case '"': q += "\\\""; break;
                case '\\': q += "\\\\"; break;
                case '\n': q += "\\n"; break;
                case '\t': q += "\\t"; break;
                default: q += c;
            }
        }
        q += '"';
        return q;
    }

  private:
    std::string out_;
    bool first_ = true;
};

// flat config: `key = value` lines, `#` comments
inline std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw OutOfRange("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    auto trim = [](std::string s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        std::size_t b = s.find_last_not_of(" \t\r");
        return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(f, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (!k.empty()) kv[k] = v;
    }
    return kv;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw OutOfRange("csv: cannot open " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    };
    while (std::getline(f, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split(line);
        if (first) {
            first = false;
            // header row iff the first cell is not numeric
            char* end = nullptr;
            std::strtod(cells[0].c_str(), &end);
            if (end == cells[0].c_str() || *end != '\0') {
                t.header = cells;
                continue;
            }
        }
        t.rows.push_back(cells);
    }
    return t;
}

inline double parse_double(const std::string& s, std::size_t row_number) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw NonPositiveValue("csv: malformed numeric value at row " + std::to_string(row_number));
    return v;
}

} // namespace parastat::io
