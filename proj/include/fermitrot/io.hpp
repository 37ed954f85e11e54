#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bounds.hpp"
#include "config.hpp"
#include "hamiltonian.hpp"
#include "pathcount.hpp"

namespace fermitrot {

using json = nlohmann::json;

// Shortest decimal that reads back to the same double.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, r.ptr};
}

inline double parse_double(std::string_view s) {
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    require(r.ec == std::errc{} && r.ptr == s.data() + s.size(), "not a number: '" + std::string(s) + "'");
    return x;
}

inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t x) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, x >>= 4) s[static_cast<std::size_t>(i)] = digits[x & 15];
    return s;
}

// Hash of the canonical dump; object keys are sorted, so formatting of the source file does not matter.
inline std::string config_hash(const json& config) { return hex64(fnv1a(config.dump())); }

struct Provenance {
    std::string command;
    std::uint64_t seed = 0;
    std::string hash;

    json to_json() const { return {{"tool", "fermitrot"}, {"version", version}, {"command", command}, {"seed", seed}, {"config_hash", hash}}; }
};

// ---- coefficient pairs ----

inline json coefficients_to_json(const CoefficientPair& c) {
    const auto un = static_cast<std::size_t>(c.n());
    std::vector<double> re, im;
    re.reserve(un * un);
    im.reserve(un * un);
    for (const auto& z : c.tau().data()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return {{"n", c.n()}, {"tau_re", re}, {"tau_im", im}, {"nu", c.nu()}};
}

namespace detail {

inline std::vector<double> number_array(const json& j, const char* key, std::size_t size) {
    require(j.contains(key) && j.at(key).is_array(), std::string("coefficients need an array '") + key + "'");
    const auto& a = j.at(key);
    require(a.size() == size, std::string("'") + key + "' must have n*n entries");
    std::vector<double> out;
    out.reserve(size);
    for (const auto& x : a) {
        require(x.is_number(), std::string("'") + key + "' entries must be numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

} // namespace detail

inline CoefficientPair coefficients_from_json(const json& j) {
    require(j.is_object(), "coefficients must be a JSON object");
    for (const auto& [k, v] : j.items())
        require(k == "n" || k == "tau_re" || k == "tau_im" || k == "nu", "unknown coefficient field '" + k + "'");
    require(j.contains("n") && j.at("n").is_number_integer(), "coefficients need an integer 'n'");
    const int n = j.at("n").get<int>();
    require(n >= 1 && n <= max_coefficient_modes, "coefficient 'n' out of range");
    const auto un = static_cast<std::size_t>(n);
    const auto re = detail::number_array(j, "tau_re", un * un);
    const auto im = detail::number_array(j, "tau_im", un * un);
    ComplexMatrix tau(un, un);
    for (std::size_t i = 0; i < un * un; ++i) tau.data()[i] = {re[i], im[i]};
    return {std::move(tau), detail::number_array(j, "nu", un * un)};
}

// ---- paths and degrees ----

inline std::string op_label(const ElementaryOp& op) {
    switch (op.kind) {
    case OpKind::creation: return "c" + std::to_string(op.mode);
    case OpKind::annihilation: return "a" + std::to_string(op.mode);
    case OpKind::number: return "n" + std::to_string(op.mode);
    }
    return "";
}

inline json paths_to_json(const std::vector<FermionicPath>& paths) {
    json out = json::array();
    for (const auto& p : paths) {
        json ops = json::array();
        for (const auto& op : p.ops) ops.push_back(op_label(op));
        out.push_back({{"sign", p.sign}, {"ops", ops}});
    }
    return out;
}

inline json degree_table_to_json(const GammaWord& g, const DegreeTable& t) {
    json configs = json::array();
    for (std::size_t i = 0; i < t.sector->dim(); ++i)
        configs.push_back({{"config", t.sector->config(i).ket()}, {"degree", t.degree[i]}});
    return {{"gamma", g.str()},        {"n", t.sector->n()},           {"eta", t.sector->eta()},
            {"max_degree", t.max_degree()}, {"total_paths", t.total_paths}, {"site_paths", t.site_paths},
            {"degrees", configs}};
}

// ---- bound records ----

struct BoundRecord {
    std::string family;
    std::map<std::string, double> params;
    double value = 0.0;
    bool certified = false;

    json to_json() const {
        json p = json::object();
        for (const auto& [k, v] : params) p[k] = v;
        return {{"family", family}, {"params", p}, {"value", value}, {"certified", certified}};
    }
};

// ---- CSV ----

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

// RFC 4180: CRLF line ends, quoted fields where needed. Provenance goes in leading '#' lines.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    CsvWriter& row(std::vector<std::string> cells) {
        require(cells.size() == header_.size(), "CSV row width does not match the header");
        rows_.push_back(std::move(cells));
        return *this;
    }

    void write(std::ostream& os, const Provenance* prov = nullptr) const {
        if (prov) {
            os << "# fermitrot " << version << "\r\n";
            os << "# command " << prov->command << "\r\n";
            os << "# seed " << prov->seed << "\r\n";
            os << "# config_hash " << prov->hash << "\r\n";
        }
        line(os, header_);
        for (const auto& r : rows_) line(os, r);
    }

    std::size_t size() const { return rows_.size(); }

  private:
    static void line(std::ostream& os, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
        os << "\r\n";
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Splits RFC 4180 text into rows, skipping '#' lines that start a record.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            ++i;
            continue;
        }
        std::vector<std::string> row;
        std::string cell;
        bool quoted = false, done = false;
        while (i < text.size() && !done) {
            const char c = text[i++];
            if (quoted) {
                if (c == '"') {
                    if (i < text.size() && text[i] == '"') {
                        cell += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    cell += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                row.push_back(std::move(cell));
                cell.clear();
            } else if (c == '\r' || c == '\n') {
                if (c == '\r' && i < text.size() && text[i] == '\n') ++i;
                done = true;
            } else {
                cell += c;
            }
        }
        require(!quoted, "unterminated quoted CSV field");
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace fermitrot
