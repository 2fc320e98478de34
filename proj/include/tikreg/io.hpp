#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tikreg/matrix.hpp"
#include "tikreg/tikhonov.hpp"

namespace tikreg {

inline constexpr const char* kCsvSchemaHeader = "# tikreg-lab v1.0 schema 1";

/// Write-then-rename so readers never see a half-written file.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw std::runtime_error("cannot open for writing: " + tmp.string());
        f << content;
        if (!f.good()) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

struct ParsedMatrix {
    SymMatrix matrix;
    double max_asymmetry;
};

/// Plain-text format: first line n, then n whitespace-separated rows.
/// Input is symmetrized via (M + M^T)/2; the largest deviation is recorded.
inline ParsedMatrix parse_matrix(std::istream& in) {
    std::size_t n = 0;
    if (!(in >> n) || n == 0) throw dimension_error("parse_matrix: bad dimension line");
    Vec raw(n * n);
    for (auto& v : raw)
        if (!(in >> v)) throw dimension_error("parse_matrix: truncated matrix body");
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            asym = std::max(asym, std::abs(raw[i * n + j] - raw[j * n + i]));
    return {SymMatrix::from_general(n, raw), asym};
}

inline ParsedMatrix parse_matrix_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open matrix file: " + path.string());
    return parse_matrix(f);
}

// Infinity is not representable in JSON numbers; the distinguished singular
// value serializes as the string "infinity".
inline nlohmann::json json_number(double v) {
    if (std::isfinite(v)) return v;
    return "infinity";
}

inline nlohmann::json to_json(const PerturbationReport& r, std::size_t n,
                              std::optional<double> mu = std::nullopt) {
    nlohmann::json j{
        {"n", n},
        {"epsilon", r.epsilon},
        {"lambda0_min", r.lambda0_min},
        {"lambda0_max", r.lambda0_max},
        {"lambda1_min", r.lambda1_min},
        {"lambda1_max", r.lambda1_max},
        {"predicted_condition", json_number(r.predicted_condition)},
        {"exact_condition", json_number(r.exact_condition)},
        {"predicted_condition_swapped_pairing",
         json_number(r.predicted_condition_swapped_pairing)},
    };
    if (mu) j["mu"] = *mu;
    return j;
}

} // namespace tikreg
