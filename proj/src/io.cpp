#include "jspec/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace jspec {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

double finite_number(const nlohmann::json& v, const std::string& field) {
    if (!v.is_number()) {
        parse_fail("field " + field + " is not a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        parse_fail("field " + field + " is not finite");
    }
    return x;
}

} // namespace

MatrixSet parse_matrix_set(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        parse_fail("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
    }
    if (!doc.is_object()) {
        parse_fail("top level must be an object");
    }
    if (!doc.contains("d") || !doc["d"].is_number_integer()) {
        parse_fail("field d must be an integer");
    }
    const int d = doc["d"].get<int>();
    if (d < 2 || d > kMaxDim) {
        parse_fail("field d = " + std::to_string(d) + " outside 2..6");
    }
    if (!doc.contains("matrices") || !doc["matrices"].is_array() || doc["matrices"].empty()) {
        parse_fail("field matrices must be a nonempty array");
    }
    std::vector<UnimodularMatrix> gens;
    const auto& mats = doc["matrices"];
    for (std::size_t i = 0; i < mats.size(); ++i) {
        const std::string field = "matrices[" + std::to_string(i) + "]";
        const auto& rows = mats[i];
        if (!rows.is_array()) {
            parse_fail("field " + field + " must be an array of rows");
        }
        if (rows.size() != static_cast<std::size_t>(d)) {
            throw Error(ErrorKind::DimMismatch, field + " has " + std::to_string(rows.size()) + " rows, expected " +
                                                    std::to_string(d));
        }
        Matrix m(d, d);
        for (int r = 0; r < d; ++r) {
            const auto& row = rows[static_cast<std::size_t>(r)];
            const std::string rfield = field + "[" + std::to_string(r) + "]";
            if (!row.is_array()) {
                parse_fail("field " + rfield + " must be an array");
            }
            if (row.size() != static_cast<std::size_t>(d)) {
                throw Error(ErrorKind::DimMismatch, rfield + " has " + std::to_string(row.size()) +
                                                        " entries, expected " + std::to_string(d));
            }
            for (int c = 0; c < d; ++c) {
                m(r, c) = finite_number(row[static_cast<std::size_t>(c)], rfield + "[" + std::to_string(c) + "]");
            }
        }
        try {
            gens.push_back(UnimodularMatrix::normalize(m));
        } catch (const Error& e) {
            throw Error(e.kind(), "matrix " + std::to_string(i) + ": " + e.what());
        }
    }
    std::vector<double> weights;
    if (doc.contains("weights")) {
        const auto& w = doc["weights"];
        if (!w.is_array() || w.size() != gens.size()) {
            parse_fail("field weights must list one weight per matrix");
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double x = finite_number(w[i], "weights[" + std::to_string(i) + "]");
            if (x < 0.0) {
                parse_fail("field weights[" + std::to_string(i) + "] is negative");
            }
            weights.push_back(x);
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            parse_fail("field weights sums to " + format_number(sum) + ", not 1");
        }
    }
    std::vector<std::string> labels;
    if (doc.contains("labels")) {
        const auto& l = doc["labels"];
        if (!l.is_array() || l.size() != gens.size()) {
            parse_fail("field labels must list one label per matrix");
        }
        for (const auto& s : l) {
            if (!s.is_string()) {
                parse_fail("field labels must hold strings");
            }
            labels.push_back(s.get<std::string>());
        }
    }
    return MatrixSet(std::move(gens), std::move(weights), std::move(labels));
}

MatrixSet load_matrix_set(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        parse_fail("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix_set(buf.str());
}

nlohmann::json to_json(const MatrixSet& set) {
    nlohmann::json j;
    j["d"] = set.dim();
    auto mats = nlohmann::json::array();
    for (const auto& g : set.generators()) {
        auto rows = nlohmann::json::array();
        for (int r = 0; r < g.dim(); ++r) {
            auto row = nlohmann::json::array();
            for (int c = 0; c < g.dim(); ++c) {
                row.push_back(g.entries()(r, c));
            }
            rows.push_back(std::move(row));
        }
        mats.push_back(std::move(rows));
    }
    j["matrices"] = std::move(mats);
    if (!set.weights().empty()) {
        j["weights"] = set.weights();
    }
    if (!set.labels().empty()) {
        j["labels"] = set.labels();
    }
    return j;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const SupportBody& body) {
    nlohmann::json j;
    j["d"] = body.dim();
    j["m"] = body.directions().size();
    j["seed"] = body.directions().seed();
    auto h = nlohmann::json::array();
    for (double v : body.support()) {
        h.push_back(json_number(v));
    }
    j["h"] = std::move(h);
    auto w = nlohmann::json::array();
    for (const auto& p : body.witnesses()) {
        auto pt = nlohmann::json::array();
        for (double v : p) {
            pt.push_back(json_number(v));
        }
        w.push_back(std::move(pt));
    }
    j["witnesses"] = std::move(w);
    return j;
}

SupportBody body_from_json(const nlohmann::json& j) {
    try {
        const auto dirs = DirectionSet::make(j.at("d").get<int>(), j.at("m").get<int>(), j.at("seed").get<std::uint64_t>());
        std::vector<double> h;
        for (const auto& v : j.at("h")) {
            h.push_back(v.is_string() ? (v.get<std::string>() == "-inf" ? -INFINITY : INFINITY) : v.get<double>());
        }
        std::vector<PlaneVector> witnesses;
        for (const auto& p : j.at("witnesses")) {
            witnesses.push_back(p.get<PlaneVector>());
        }
        return SupportBody(dirs, std::move(h), std::move(witnesses));
    } catch (const nlohmann::json::exception& e) {
        parse_fail(std::string("support body: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

std::string format_number(double v) {
    if (std::isnan(v)) {
        throw Error(ErrorKind::NumericalFailure, "attempt to serialize NaN");
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

nlohmann::json json_number(double v) {
    if (std::isnan(v)) {
        throw Error(ErrorKind::NumericalFailure, "attempt to serialize NaN");
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw Error(ErrorKind::InvalidArgument, "short write to " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace jspec
