#include <catch2/catch_amalgamated.hpp>

#include <spmex/plant.hpp>
#include <spmex/stepper.hpp>

#include <cmath>
#include <string>
#include <vector>

using namespace spmex;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::string kDefaultJson = std::string(SPMEX_DATA_DIR) + "/default_cell.json";

struct Fixture {
    Cell cell = load_params(kDefaultJson);
    CellGrids g = CellGrids::make(cell.params);
    const ParamSet& p = cell.params;
    const MaterialCurves& m = cell.curves;
};

} // namespace

TEST_CASE("intercalation flux") {
    Fixture f;
    double I1c = capacity_coulombs(f.p) / 3600.0;
    CHECK(I1c == Approx(51.1960606350).epsilon(1e-9));

    CHECK(intercalation_flux(0.0, Electrode::Neg, f.p) == 0.0);
    CHECK(intercalation_flux(0.0, Electrode::Pos, f.p) == 0.0);

    // charging fills the negative particle and drains the positive one
    double jn = intercalation_flux(I1c, Electrode::Neg, f.p);
    double jp = intercalation_flux(I1c, Electrode::Pos, f.p);
    CHECK(jn == Approx(-1.1912037037e-5).epsilon(1e-9));
    CHECK(jp == Approx(1.00494276094e-5).epsilon(1e-9));

    // doubling the plate area halves the flux
    ParamSet p2 = f.p;
    p2.A *= 2.0;
    CHECK(intercalation_flux(I1c, Electrode::Neg, p2) == Approx(jn / 2.0).epsilon(1e-14));
}

TEST_CASE("exchange current density") {
    Fixture f;
    double cmax = f.p.c_s_max_neg;

    // closed form at the half-filled surface
    CHECK(exchange_current(1000.0, cmax / 2.0, Electrode::Neg, f.p)
          == Approx(1.47045911198).epsilon(1e-9));

    // maximized at half filling
    double mid = exchange_current(1000.0, cmax / 2.0, Electrode::Neg, f.p);
    CHECK(mid > exchange_current(1000.0, cmax / 2.0 - 2000.0, Electrode::Neg, f.p));
    CHECK(mid > exchange_current(1000.0, cmax / 2.0 + 2000.0, Electrode::Neg, f.p));

    REQUIRE_THROWS_WITH(exchange_current(1000.0, 0.0, Electrode::Neg, f.p),
                        ContainsSubstring("kinetics singular"));
    REQUIRE_THROWS_WITH(exchange_current(1000.0, cmax, Electrode::Neg, f.p),
                        ContainsSubstring("kinetics singular"));
    REQUIRE_THROWS_WITH(exchange_current(-5.0, cmax / 2.0, Electrode::Neg, f.p),
                        ContainsSubstring("c_e_bar"));
}

TEST_CASE("overpotential from the closed-form kinetic inverse") {
    Fixture f;
    double T = 298.15;

    CHECK(overpotential(0.0, 1.0, T, f.p) == 0.0);
    // odd in the flux
    CHECK(overpotential(1e-5, 1.2, T, f.p)
          == Approx(-overpotential(-1e-5, 1.2, T, f.p)).epsilon(1e-14));

    // roundtrip through the forward kinetic law
    double i0 = 1.47;
    for (double eta : {-0.08, -0.01, 0.003, 0.05}) {
        double j = 2.0 * i0 / f.p.F * std::sinh(f.p.alpha * f.p.F * eta / (f.p.R_gas * T));
        CHECK(overpotential(j, i0, T, f.p) == Approx(eta).epsilon(1e-12));
    }

    REQUIRE_THROWS_WITH(overpotential(1e-5, 0.0, T, f.p), ContainsSubstring("i0"));
}

TEST_CASE("electrolyte potential drop") {
    Fixture f;
    std::vector<double> flat(f.g.elyte.n_nodes(), 1000.0);
    double T = 298.15;
    double I1c = 51.1960606350;

    CHECK(electrolyte_potential(f.g.elyte, flat, 0.0, T, f.p) == 0.0);

    // uniform salt leaves only the ohmic part, linear and odd in I
    double v1 = electrolyte_potential(f.g.elyte, flat, I1c, T, f.p);
    CHECK(v1 == Approx(0.0211458814553).epsilon(1e-9));
    CHECK(electrolyte_potential(f.g.elyte, flat, 2.0 * I1c, T, f.p)
          == Approx(2.0 * v1).epsilon(1e-13));
    CHECK(electrolyte_potential(f.g.elyte, flat, -I1c, T, f.p)
          == Approx(-v1).epsilon(1e-13));

    // salt gradient contributes through the boundary log ratio
    std::vector<double> tilted = flat;
    for (std::size_t i = 0; i < tilted.size(); ++i) tilted[i] = 900.0 + 10.0 * i;
    double conc = electrolyte_potential(f.g.elyte, tilted, 0.0, T, f.p);
    double expect = 2.0 * f.p.R_gas * T / f.p.F * (1.0 - f.p.t_plus0) *
                    std::log(tilted.back() / tilted.front());
    CHECK(conc == Approx(expect).epsilon(1e-12));

    std::vector<double> bad = flat;
    bad.back() = -1.0;
    REQUIRE_THROWS_WITH(electrolyte_potential(f.g.elyte, bad, 0.0, T, f.p),
                        ContainsSubstring("positive"));
}

TEST_CASE("rest voltage equals the open-circuit difference") {
    Fixture f;
    PlantState s = PlantState::init(f.p, f.g, 0.5);
    double expect = f.m.U_pos(s.c_s_pos[0] / f.p.c_s_max_pos) -
                    f.m.U_neg(s.c_s_neg[0] / f.p.c_s_max_neg);
    CHECK(terminal_voltage(s, 0.0, f.g, f.p, f.m) == Approx(expect).epsilon(1e-14));
}

TEST_CASE("charging raises and discharging lowers the terminal voltage") {
    Fixture f;
    PlantState s = PlantState::init(f.p, f.g, 0.5);
    double I1c = capacity_coulombs(f.p) / 3600.0;
    double v_chg = terminal_voltage(s, I1c, f.g, f.p, f.m);
    double v_rest = terminal_voltage(s, 0.0, f.g, f.p, f.m);
    double v_dis = terminal_voltage(s, -I1c, f.g, f.p, f.m);
    CHECK(v_chg > v_rest);
    CHECK(v_rest > v_dis);
}

TEST_CASE("thermal balance") {
    Fixture f;
    PlantState s = PlantState::init(f.p, f.g, 0.5);
    double css_n = s.c_s_neg.back(), css_p = s.c_s_pos.back();

    SECTION("ambient rest is an equilibrium") {
        double v = terminal_voltage(s, 0.0, f.g, f.p, f.m);
        CHECK(thermal_rhs(f.p.T_a, 0.0, v, css_n, css_p, f.p, f.m) == 0.0);
    }
    SECTION("Newton cooling pulls back to ambient") {
        double v = terminal_voltage(s, 0.0, f.g, f.p, f.m);
        CHECK(thermal_rhs(f.p.T_a + 3.0, 0.0, v, css_n, css_p, f.p, f.m) < 0.0);
        CHECK(thermal_rhs(f.p.T_a - 3.0, 0.0, v, css_n, css_p, f.p, f.m) > 0.0);
    }
    SECTION("joule heating is nonnegative for either current direction") {
        double I1c = capacity_coulombs(f.p) / 3600.0;
        for (double I : {I1c, -I1c}) {
            double v = terminal_voltage(s, I, f.g, f.p, f.m);
            double u_gap = f.m.U_pos(css_p / f.p.c_s_max_pos) -
                           f.m.U_neg(css_n / f.p.c_s_max_neg);
            CHECK(I * (v - u_gap) >= 0.0);
        }
    }
    SECTION("steady temperature settles at ambient plus Q/h") {
        // freeze the electrochemical state so Q is constant, then integrate
        double I1c = capacity_coulombs(f.p) / 3600.0;
        double v = terminal_voltage(s, I1c, f.g, f.p, f.m);
        double u_gap = f.m.U_pos(css_p / f.p.c_s_max_pos) -
                       f.m.U_neg(css_n / f.p.c_s_max_neg);
        double q = I1c * (v - u_gap);
        std::vector<double> T{f.p.T_a};
        auto rhs = [&](const std::vector<double>& y) {
            return std::vector<double>{thermal_rhs(y[0], I1c, v, css_n, css_p, f.p, f.m)};
        };
        for (int k = 0; k < 10000; ++k) T = rk4_step(T, rhs, 1.0);
        CHECK(T[0] == Approx(f.p.T_a + q / f.p.h).epsilon(1e-9));
        CHECK(q / f.p.h > 0.5);
        CHECK(q / f.p.h < 10.0);
    }
}

TEST_CASE("electrode swell") {
    Fixture f;

    SECTION("constant strain gives a_s * l * strain * R/3 up to quadrature error") {
        double delta = 0.013;
        Curve flat({0.0, f.p.c_s_max_neg}, {delta, delta}, "flat swell");
        std::vector<double> c(f.g.neg.n_nodes(), 12345.0);
        double got = electrode_swell(f.g.neg, c, flat, Electrode::Neg, f.p);
        double cont = f.p.a_s(Electrode::Neg) * f.p.l_neg * delta * f.g.neg.R_p / 3.0;
        CHECK(got == Approx(cont).epsilon(2.2e-3));
        // and exactly the quadrature of the constant
        std::vector<double> ones(f.g.neg.n_nodes(), delta);
        CHECK(got == Approx(f.p.a_s(Electrode::Neg) * f.p.l_neg *
                            radial_moment_integral(ones, f.g.neg)).epsilon(1e-14));
    }
    SECTION("thermal part vanishes at the reference temperature") {
        PlantState s = PlantState::init(f.p, f.g, 0.5);
        s.T_b = f.p.T0;
        auto e = expansion_outputs(s, f.g, f.p, f.m);
        CHECK(e.dt_th == 0.0);
        CHECK(e.dt_b == Approx(f.p.kappa_b * (e.dt_neg + e.dt_pos)).epsilon(1e-14));

        s.T_b = f.p.T0 + 2.0;
        auto e2 = expansion_outputs(s, f.g, f.p, f.m);
        CHECK(e2.dt_th == Approx(2.0 * f.p.alpha_th).epsilon(1e-14));
    }
    SECTION("zero lumping factor leaves only the thermal part") {
        ParamSet p2 = f.p;
        p2.kappa_b = 0.0;
        PlantState s = PlantState::init(p2, f.g, 0.5);
        s.T_b = p2.T0 + 1.5;
        auto e = expansion_outputs(s, f.g, p2, f.m);
        CHECK(e.dt_b == e.dt_th);
    }
}

TEST_CASE("rest is a plant fixed point") {
    Fixture f;
    PlantState s = PlantState::init(f.p, f.g, 0.4);
    auto [s1, o1] = step_plant(s, 0.0, 0.5, 0.0, f.g, f.p, f.m);
    CHECK(s1.c_s_neg == s.c_s_neg);
    CHECK(s1.c_s_pos == s.c_s_pos);
    CHECK(s1.c_e == s.c_e);
    CHECK(s1.T_b == s.T_b);
    CHECK(o1.V_t == Approx(terminal_voltage(s, 0.0, f.g, f.p, f.m)).epsilon(1e-14));
}

TEST_CASE("single step moves each electrode by exactly I dt / F") {
    Fixture f;
    PlantState s = PlantState::init(f.p, f.g, 0.3);
    double I1c = capacity_coulombs(f.p) / 3600.0;
    double dt = 0.5;
    double avg_n0 = volume_average(s.c_s_neg, f.g.neg);
    double avg_p0 = volume_average(s.c_s_pos, f.g.pos);
    auto [s1, o1] = step_plant(s, I1c, dt, 0.0, f.g, f.p, f.m);
    double dn = (volume_average(s1.c_s_neg, f.g.neg) - avg_n0) *
                f.p.eps_s_neg * f.p.l_neg * f.p.A;
    double dp = (volume_average(s1.c_s_pos, f.g.pos) - avg_p0) *
                f.p.eps_s_pos * f.p.l_pos * f.p.A;
    double moles = I1c * dt / f.p.F;
    // the per-step change is a difference of ~1e4-scale averages, so
    // cancellation leaves about 1e-8 of relative noise on it
    CHECK(dn == Approx(moles).epsilon(1e-7));
    CHECK(dp == Approx(-moles).epsilon(1e-7));
}

TEST_CASE("constant-current charge conserves lithium and salt over an hour") {
    Fixture f;
    StepperConfig cfg(0.5, f.p, f.g.neg, f.g.pos, f.g.elyte);
    PlantState s = PlantState::init(f.p, f.g, 0.05);
    double I1c = capacity_coulombs(f.p) / 3600.0;

    auto solid_total = [&](const PlantState& st) {
        return f.p.eps_s_neg * f.p.l_neg * f.p.A * volume_average(st.c_s_neg, f.g.neg) +
               f.p.eps_s_pos * f.p.l_pos * f.p.A * volume_average(st.c_s_pos, f.g.pos);
    };
    double n0 = solid_total(s);
    double salt0 = electrolyte_salt_total(f.g.elyte, s.c_e, f.p);
    double avg_n_prev = volume_average(s.c_s_neg, f.g.neg);
    double avg_p_prev = volume_average(s.c_s_pos, f.g.pos);
    double neg0 = avg_n_prev;

    double t = 0.0;
    PlantOutputs last{};
    for (int k = 0; k < 7200; ++k) {
        auto [s1, o] = step_plant(s, I1c, cfg.dt, t, f.g, f.p, f.m);
        s = s1;
        t += cfg.dt;
        last = o;
        double avg_n = volume_average(s.c_s_neg, f.g.neg);
        double avg_p = volume_average(s.c_s_pos, f.g.pos);
        CHECK(avg_n > avg_n_prev); // charging fills the negative electrode
        CHECK(avg_p < avg_p_prev);
        avg_n_prev = avg_n;
        avg_p_prev = avg_p;
    }

    CHECK(std::abs(solid_total(s) - n0) <= 1e-9 * n0);
    CHECK(electrolyte_salt_total(f.g.elyte, s.c_e, f.p) == Approx(salt0).epsilon(1e-12));

    // coulomb counting: the negative electrode took exactly one hour at 1C
    double taken = (avg_n_prev - neg0) * f.p.eps_s_neg * f.p.l_neg * f.p.A;
    CHECK(taken == Approx(I1c * 3600.0 / f.p.F).epsilon(1e-9));
    CHECK(last.soc == Approx(1.05).margin(1e-6));

    // physical sanity at the end of the charge
    CHECK(last.V_t > 3.0);
    CHECK(last.V_t < 4.4);
    CHECK(last.T_b > f.p.T_a + 0.5);
    CHECK(last.T_b < f.p.T_a + 5.0);
    CHECK(last.dt_b > 1e-5);
}

TEST_CASE("relaxation at rest recovers the open-circuit voltage") {
    Fixture f;
    PlantState s = PlantState::init(f.p, f.g, 0.3);
    double I1c = capacity_coulombs(f.p) / 3600.0;
    double t = 0.0;
    for (int k = 0; k < 1200; ++k) { // 600 s of charge builds gradients
        auto [s1, o] = step_plant(s, I1c, 0.5, t, f.g, f.p, f.m);
        s = s1;
        t += 0.5;
    }
    PlantOutputs rest{};
    for (int k = 0; k < 8000; ++k) { // 4000 s of rest
        auto [s1, o] = step_plant(s, 0.0, 0.5, t, f.g, f.p, f.m);
        s = s1;
        t += 0.5;
        rest = o;
    }
    double theta_n = volume_average(s.c_s_neg, f.g.neg) / f.p.c_s_max_neg;
    double theta_p = volume_average(s.c_s_pos, f.g.pos) / f.p.c_s_max_pos;
    CHECK(rest.V_t == Approx(f.m.U_pos(theta_p) - f.m.U_neg(theta_n)).margin(1e-6));
}

TEST_CASE("leaving the physical range is reported with a timestamp") {
    Fixture f;
    PlantState s = PlantState::init(f.p, f.g, 0.5);
    // a sharp interior spike amplifies under a deliberately oversized step
    s.c_s_neg[3] = 100.0;
    REQUIRE_THROWS_WITH(step_plant(s, 0.0, 30.0, 12.0, f.g, f.p, f.m),
                        ContainsSubstring("out of physical range") &&
                        ContainsSubstring("42.0"));
}
