#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tikreg/io.hpp"
#include "tikreg/svg.hpp"

using namespace tikreg;

TEST_CASE("matrix parser symmetrizes and records asymmetry") {
    std::istringstream in("2\n1.0 0.9\n1.1 2.0\n");
    const ParsedMatrix p = parse_matrix(in);
    CHECK(p.matrix.n() == 2);
    CHECK(p.matrix(0, 1) == doctest::Approx(1.0));
    CHECK(p.matrix(1, 0) == p.matrix(0, 1));
    CHECK(p.max_asymmetry == doctest::Approx(0.2).epsilon(1e-12));

    std::istringstream bad("3\n1 2 3\n4 5\n");
    CHECK_THROWS(parse_matrix(bad));
    std::istringstream zero("0\n");
    CHECK_THROWS_AS(parse_matrix(zero), dimension_error);
}

TEST_CASE("perturbation report serializes with the agreed keys") {
    PerturbationReport r;
    r.epsilon = 0.01;
    r.lambda0_min = 1e-7;
    r.lambda0_max = 2.0;
    r.lambda1_min = 3.0;
    r.lambda1_max = 1.0;
    r.predicted_condition = 67.0;
    r.exact_condition = std::numeric_limits<double>::infinity();
    const auto j = to_json(r, 2, 1e-6);
    CHECK(j["n"] == 2);
    CHECK(j["mu"] == 1e-6);
    CHECK(j["epsilon"] == 0.01);
    CHECK(j["lambda0_min"] == 1e-7);
    CHECK(j["lambda1_max"] == 1.0);
    CHECK(j["predicted_condition"] == 67.0);
    CHECK(j["exact_condition"] == "infinity");
}

TEST_CASE("atomic text writes leave no temp file behind") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "tikreg_io_test";
    fs::create_directories(dir);
    const fs::path f = dir / "out.csv";
    write_text_atomic(f, std::string(kCsvSchemaHeader) + "\na,b\n1,2\n");
    CHECK(fs::exists(f));
    CHECK(!fs::exists(f.string() + ".tmp"));
    std::ifstream in(f);
    std::string line;
    std::getline(in, line);
    CHECK(line == kCsvSchemaHeader);
    fs::remove_all(dir);
}

TEST_CASE("svg plot renders curves, axes, and legend") {
    SvgPlot plot("controls", "t", "u");
    std::vector<double> x{0.0, 1.0, 2.0, 3.0}, y{0.0, -1.0, -0.5, 0.0};
    plot.add_curve("numeric", x, y, "#1f77b4");
    plot.add_curve("exact", x, y, "#d62728", /*dashed=*/true);
    const std::string svg = plot.render();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("numeric") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
}
