#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "conditions.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "mellin.hpp"
#include "spectrum.hpp"
#include "weyl.hpp"

namespace heisenspec::io {

using ordered_json = nlohmann::ordered_json;

// %.17g round-trips doubles exactly and keeps output diffable across runs.
inline std::string float17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline void emit(const ordered_json& j, std::string& out) {
    switch (j.type()) {
        case ordered_json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += ordered_json(it.key()).dump();
                out += ':';
                emit(it.value(), out);
            }
            out += '}';
            break;
        }
        case ordered_json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                emit(j[i], out);
            }
            out += ']';
            break;
        }
        case ordered_json::value_t::number_float:
            out += float17(j.get<double>());
            break;
        default:
            out += j.dump();
    }
}

}  // namespace detail

// Compact JSON with every float rendered at 17 significant digits.
inline std::string write_json(const ordered_json& j) {
    std::string out;
    detail::emit(j, out);
    out += '\n';
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ordered_json load_json(const std::string& path) {
    try {
        return ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("malformed JSON in " + path + ": " + e.what());
    }
}

inline group_spec group_spec_from_json(const ordered_json& j) {
    try {
        const int d = j.at("d").get<int>();
        const auto& rows = j.at("b");
        if (!rows.is_array() || static_cast<int>(rows.size()) != d)
            throw parse_error("group spec: b must have d rows");
        Eigen::MatrixXd b(d, d);
        for (int r = 0; r < d; ++r) {
            if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != d)
                throw parse_error("group spec: b rows must have d entries");
            for (int c = 0; c < d; ++c) b(r, c) = rows[r][c].get<double>();
        }
        return make_group_spec(d, std::move(b));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("group spec: ") + e.what());
    }
}

inline point point_from_json(const ordered_json& j) {
    try {
        point p;
        p.x0 = j.at("x0").get<double>();
        for (const auto& v : j.at("xp")) p.xp.push_back(v.get<double>());
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("point: ") + e.what());
    }
}

inline model_data model_from_json(const ordered_json& j) {
    try {
        const int d = j.at("d").get<int>();
        std::vector<double> abs_eigs;
        for (const auto& v : j.at("abs_eigs")) abs_eigs.push_back(v.get<double>());
        model_data m;
        m.levi = make_levi(d, std::move(abs_eigs));
        for (const auto& v : j.at("mu"))
            m.mu.emplace_back(v.at("re").get<double>(), v.at("im").get<double>());
        m.tol = j.value("tol", 1e-9);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("model: ") + e.what());
    }
}

inline Eigen::MatrixXd matrix_from_json_field(const ordered_json& rows, const char* name) {
    if (!rows.is_array() || rows.empty())
        throw parse_error(std::string(name) + ": expected a nonempty array of rows");
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows[0].size());
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i) {
        if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != c)
            throw parse_error(std::string(name) + ": ragged rows");
        for (int j2 = 0; j2 < c; ++j2) m(i, j2) = rows[i][j2].get<double>();
    }
    return m;
}

inline matrix_operator operator_from_json(const ordered_json& j) {
    try {
        Eigen::MatrixXd p = matrix_from_json_field(j.at("p"), "matrix p");
        if (j.contains("projector"))
            return make_matrix_operator(std::move(p),
                                        matrix_from_json_field(j.at("projector"), "projector"));
        return make_matrix_operator(std::move(p));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("operator: ") + e.what());
    }
}

inline ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

// CSV: comma separated, '.' decimal separator, one header line.

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw parse_error(std::string(what) + ": not a number: '" + s + "'");
    }
}

inline spectrum spectrum_from_csv(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"eigenvalue", "multiplicity"})
        throw parse_error(path + ": expected header 'eigenvalue,multiplicity'");
    std::vector<double> lam;
    std::vector<std::int64_t> mult;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 2) throw parse_error(path + ": expected 2 columns");
        lam.push_back(parse_double(f[0], "eigenvalue"));
        mult.push_back(static_cast<std::int64_t>(parse_double(f[1], "multiplicity")));
    }
    return make_spectrum(std::move(lam), std::move(mult));
}

inline std::string spectrum_to_csv(const spectrum& sp) {
    std::string out = "eigenvalue,multiplicity\n";
    for (std::size_t i = 0; i < sp.lambda.size(); ++i)
        out += float17(sp.lambda[i]) + "," + std::to_string(sp.mult[i]) + "\n";
    return out;
}

inline std::vector<trace_sample> trace_samples_from_csv(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"t", "trace"})
        throw parse_error(path + ": expected header 't,trace'");
    std::vector<trace_sample> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 2) throw parse_error(path + ": expected 2 columns");
        out.push_back({parse_double(f[0], "t"), parse_double(f[1], "trace")});
    }
    return out;
}

// Coefficient tables: alpha/beta rows are n,kappa,p,q,coefficient,value and
// gamma rows are n,k,value; inadmissible rows carry the literal `skipped`.
inline std::string table_to_csv(const std::string& coeff, const std::vector<table_row>& rows) {
    std::string out;
    if (coeff == "gamma") {
        out = "n,k,value\n";
        for (const auto& r : rows)
            out += std::to_string(r.n) + "," + std::to_string(r.p) + "," +
                   (r.value ? float17(*r.value) : std::string("skipped")) + "\n";
    } else {
        out = "n,kappa,p,q,coefficient,value\n";
        for (const auto& r : rows)
            out += std::to_string(r.n) + "," + std::to_string(r.kappa) + "," +
                   std::to_string(r.p) + "," + std::to_string(r.q) + "," + coeff + "," +
                   (r.value ? float17(*r.value) : std::string("skipped")) + "\n";
    }
    return out;
}

inline ordered_json table_to_json(const std::string& coeff, const std::vector<table_row>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json o;
        o["n"] = r.n;
        if (coeff == "gamma") {
            o["k"] = r.p;
        } else {
            o["kappa"] = r.kappa;
            o["p"] = r.p;
            o["q"] = r.q;
            o["coefficient"] = coeff;
        }
        if (r.value)
            o["value"] = *r.value;
        else
            o["value"] = "skipped";
        arr.push_back(std::move(o));
    }
    return arr;
}

}
