#include <catch2/catch_amalgamated.hpp>

#include <spmex/params.hpp>
#include <spmex/curve.hpp>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <string>

using namespace spmex;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::string kDefaultJson = std::string(SPMEX_DATA_DIR) + "/default_cell.json";

nlohmann::json load_default_json() {
    std::ifstream in(kDefaultJson);
    REQUIRE(in.good());
    nlohmann::json j;
    in >> j;
    return j;
}

// Writes a mutated copy of the bundled parameter file and returns its path.
std::string write_temp(const nlohmann::json& j, const std::string& tag) {
    std::string path = "test_params_" + tag + ".json";
    std::ofstream out(path);
    out << j.dump(2);
    return path;
}

} // namespace

TEST_CASE("bundled parameter file loads and validates") {
    Cell cell = load_params(kDefaultJson);
    const ParamSet& p = cell.params;

    CHECK(p.A == 1.6);
    CHECK(p.l_neg == 8e-5);
    CHECK(p.t_f == 1.0);
    CHECK(p.n_layers == 19);

    // a_s = 3*eps_s/R_p, never stored
    CHECK(p.a_s(Electrode::Neg) == Approx(348000.0).epsilon(1e-14));
    CHECK(p.a_s(Electrode::Pos) == Approx(330000.0).epsilon(1e-14));

    CHECK(cell.curves.U_pos.size() >= 20);
    CHECK(cell.curves.U_neg.size() >= 20);
    CHECK(cell.curves.dV_pos.size() >= 8);
    CHECK(cell.curves.dV_neg.size() >= 8);
}

TEST_CASE("t_f defaults to 1 when omitted") {
    auto j = load_default_json();
    j.erase("t_f");
    j.erase("alpha");
    j.erase("F_C_mol");
    j.erase("R_gas_J_molK");
    std::string path = write_temp(j, "defaults");
    Cell cell = load_params(path);
    CHECK(cell.params.t_f == 1.0);
    CHECK(cell.params.alpha == 0.5);
    CHECK(cell.params.F == Approx(96485.33212));
    CHECK(cell.params.R_gas == Approx(8.314462618));
    std::remove(path.c_str());
}

TEST_CASE("validation names the offending field") {
    Cell cell = load_params(kDefaultJson);

    SECTION("porosity out of range") {
        Cell bad = cell;
        bad.params.eps_e_neg = 1.2;
        REQUIRE_THROWS_WITH(bad.params.validate(),
                            ContainsSubstring("eps_e_neg") && ContainsSubstring("(0,1)"));
    }
    SECTION("negative thickness") {
        Cell bad = cell;
        bad.params.l_sep = -1e-5;
        REQUIRE_THROWS_WITH(bad.params.validate(), ContainsSubstring("l_sep"));
    }
    SECTION("stoichiometry window order") {
        Cell bad = cell;
        bad.params.x100 = 0.01; // below x0
        REQUIRE_THROWS_WITH(bad.params.validate(), ContainsSubstring("x0"));
    }
}

TEST_CASE("parameter file errors are specific") {
    SECTION("missing file") {
        REQUIRE_THROWS_WITH(load_params("no_such_file.json"),
                            ContainsSubstring("cannot open"));
    }
    SECTION("missing key") {
        auto j = load_default_json();
        j.erase("D_s_neg_m2_s");
        std::string path = write_temp(j, "missing");
        REQUIRE_THROWS_WITH(load_params(path), ContainsSubstring("D_s_neg_m2_s"));
        std::remove(path.c_str());
    }
    SECTION("curve entries must be pairs") {
        auto j = load_default_json();
        j["U_pos"] = {{0.0, 4.6, 1.0}, {1.0, 3.3}};
        std::string path = write_temp(j, "badcurve");
        REQUIRE_THROWS_WITH(load_params(path), ContainsSubstring("pairs"));
        std::remove(path.c_str());
    }
    SECTION("not valid json") {
        std::string path = "test_params_notjson.json";
        std::ofstream(path) << "{ definitely not json";
        REQUIRE_THROWS_WITH(load_params(path), ContainsSubstring("JSON"));
        std::remove(path.c_str());
    }
}

TEST_CASE("piecewise-linear curve evaluation") {
    Curve c({0.0, 1.0, 3.0}, {10.0, 20.0, 0.0}, "test");

    CHECK(c(0.0) == 10.0);
    CHECK(c(1.0) == 20.0);
    CHECK(c(3.0) == 0.0);
    CHECK(c(0.5) == Approx(15.0));
    CHECK(c(2.0) == Approx(10.0));
    // clamps at the ends instead of extrapolating
    CHECK(c(-5.0) == 10.0);
    CHECK(c(99.0) == 0.0);

    REQUIRE_THROWS_WITH(Curve({0.0}, {1.0}, "short"), ContainsSubstring("short"));
    REQUIRE_THROWS_WITH(Curve({0.0, 0.0}, {1.0, 2.0}, "flat"),
                        ContainsSubstring("increasing"));
    REQUIRE_THROWS_WITH(Curve({0.0, 1.0}, {1.0}, "mismatch"),
                        ContainsSubstring("mismatch"));
}

TEST_CASE("open-circuit curves must be strictly decreasing") {
    Cell cell = load_params(kDefaultJson);
    CHECK(cell.curves.U_pos.strictly_decreasing());
    CHECK(cell.curves.U_neg.strictly_decreasing());

    Cell bad = cell;
    std::vector<double> x = bad.curves.U_pos.abscissae();
    std::vector<double> y = bad.curves.U_pos.ordinates();
    y[3] = y[2] + 0.5; // introduce a rise
    bad.curves.U_pos = Curve(x, y, "U_pos");
    REQUIRE_THROWS_WITH(bad.curves.validate(), ContainsSubstring("U_pos"));
}

TEST_CASE("initial concentrations from soc") {
    Cell cell = load_params(kDefaultJson);
    const ParamSet& p = cell.params;

    auto at0 = initial_concentrations(p, 0.0);
    CHECK(at0.c_s0_neg == Approx(0.02 * 31000.0).epsilon(1e-14));
    CHECK(at0.c_s0_pos == Approx(0.90 * 50000.0).epsilon(1e-14));

    auto at1 = initial_concentrations(p, 1.0);
    CHECK(at1.c_s0_neg == Approx(0.85 * 31000.0).epsilon(1e-14));
    CHECK(at1.c_s0_pos == Approx(0.425 * 50000.0).epsilon(1e-14));

    auto mid = initial_concentrations(p, 0.05);
    CHECK(mid.c_s0_neg == Approx(1906.5).epsilon(1e-14));
    CHECK(mid.c_s0_pos == Approx(43812.5).epsilon(1e-14));

    REQUIRE_THROWS_WITH(initial_concentrations(p, -0.01), ContainsSubstring("soc0"));
    REQUIRE_THROWS_WITH(initial_concentrations(p, 1.01), ContainsSubstring("soc0"));
}

TEST_CASE("soc round-trips through the negative electrode") {
    Cell cell = load_params(kDefaultJson);
    for (double soc : {0.0, 0.05, 0.37, 0.62, 1.0}) {
        auto init = initial_concentrations(cell.params, soc);
        CHECK(soc_from_avg_concentration(cell.params, init.c_s0_neg)
              == Approx(soc).margin(1e-12));
    }
}

TEST_CASE("capacity from the negative stoichiometry window") {
    Cell cell = load_params(kDefaultJson);
    CHECK(capacity_coulombs(cell.params) == Approx(184305.818286).epsilon(1e-9));
}

TEST_CASE("parameter drift") {
    Cell cell = load_params(kDefaultJson);
    const ParamSet& p = cell.params;

    SECTION("identity drift changes nothing") {
        DriftSpec d;
        ParamSet q = apply_drift(p, d);
        CHECK(q.x100 == p.x100);
        CHECK(q.y0 == p.y0);
        CHECK(q.eps_s_neg == p.eps_s_neg);
    }
    SECTION("stoichiometry drift scales the window edges") {
        DriftSpec d;
        d.scale_x100 = 0.95;
        d.scale_y0 = 0.95;
        ParamSet q = apply_drift(p, d);
        CHECK(q.x100 == Approx(0.8075).epsilon(1e-14));
        CHECK(q.y0 == Approx(0.855).epsilon(1e-14));
        CHECK(q.eps_s_neg == p.eps_s_neg);
    }
    SECTION("active-material loss scales the interfacial area") {
        DriftSpec d;
        d.scale_eps_s_neg = 0.95;
        ParamSet q = apply_drift(p, d);
        CHECK(q.a_s(Electrode::Neg) == Approx(0.95 * p.a_s(Electrode::Neg)).epsilon(1e-14));
        CHECK(q.a_s(Electrode::Pos) == p.a_s(Electrode::Pos));
    }
    SECTION("scale factors outside (0, 1.5] are rejected") {
        DriftSpec d;
        d.scale_x100 = 0.0;
        REQUIRE_THROWS_WITH(apply_drift(p, d), ContainsSubstring("scale_x100"));
        DriftSpec d2;
        d2.scale_eps_s_neg = 1.6;
        REQUIRE_THROWS_WITH(apply_drift(p, d2), ContainsSubstring("scale_eps_s_neg"));
    }
    SECTION("drift that collapses the window fails validation") {
        DriftSpec d;
        d.scale_x100 = 0.02; // x100 falls below x0
        REQUIRE_THROWS(apply_drift(p, d));
    }
}
