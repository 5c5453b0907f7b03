// Weight functions, critical-curve parametrizations, the quartic c-identity
// (including an exact rational-arithmetic check), and JSON ingestion.

#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <pearceylab/model.hpp>
#include <pearceylab/model_json.hpp>

using namespace pearceylab::model;
using pearceylab::numerics::Real;
using pearceylab::numerics::ScopedPrecision;

TEST_CASE("weight function") {
    ScopedPrecision sp(128);

    SECTION("direct substitutions") {
        ModelParams p;  // n=1, alpha=0, t=0, a=0
        REQUIRE(abs(weight_W(Real(1), p).value - exp(Real(-1) / 2)) < Real("1e-30"));
        REQUIRE(weight_W(Real(0), p).value == 1);
        p.alpha = Real("0.5");
        REQUIRE(weight_W(Real(0), p).value == 0);
    }

    SECTION("dual evaluation paths agree") {
        ModelParams p;
        p.alpha = 1;
        p.a = 1;
        const Real direct = weight_W(Real(-1), p).value;
        REQUIRE(abs(direct - exp(Real(-5) / 2)) < Real("1e-30"));
        // second path: |x|^alpha via exp(alpha log|x|), exponential separately
        auto second_path = [&](const Real& x) {
            return exp(p.alpha * log(abs(x))) * exp(-p.n * potential_V(x, p.t, p.a));
        };
        for (double x : {-2.5, -1.0, -0.3, 0.4, 1.7}) {
            REQUIRE(abs(weight_W(Real(x), p).value - second_path(Real(x))) <
                    Real("1e-30") * weight_W(Real(x), p).value);
        }
    }

    SECTION("both potential conventions give the same weight") {
        ModelParams p;
        p.n = 3;
        p.t = Real("0.7");
        p.a = Real("1.2");
        p.alpha = Real("0.25");
        for (double x : {-1.5, -0.2, 0.3, 0.9, 2.0}) {
            const Real xx(x);
            const Real lhs = weight_W(xx, p).value;
            const Real rhs = pow(abs(xx), p.alpha) *
                             exp(-2 * p.n * (potential_intro(xx, p.t) - p.a * xx));
            REQUIRE(abs(lhs - rhs) <= Real("1e-15") * abs(rhs));
        }
    }

    SECTION("odd weight is |x| times the even one") {
        ModelParams p;
        p.alpha = Real("0.3");
        p.t = 1;
        p.a = Real("0.5");
        REQUIRE(weight_Wodd(Real(0), p).value == 0);
        REQUIRE(abs(weight_Wodd(Real(2), p).value - 2 * weight_W(Real(2), p).value) ==
                0);
        for (double x : {-1.2, -0.4, 0.7, 1.9}) {
            const Real ratio =
                weight_Wodd(Real(x), p).value / weight_W(Real(x), p).value;
            REQUIRE(abs(ratio - abs(Real(x))) < Real("1e-15"));
        }
    }
}

TEST_CASE("dashed curve and regime parametrizations") {
    ScopedPrecision sp(128);

    SECTION("closed-form points") {
        auto mid = dashed_curve(Real("0.5"));
        REQUIRE(abs(mid.t - Real("-2.5")) == 0);
        REQUIRE(abs(mid.a - Real("1.75")) == 0);
        auto corner = dashed_curve(upper_c_bound());
        REQUIRE(abs(corner.t - sqrt(Real(3))) < Real("1e-35"));
        REQUIRE(abs(corner.a - pow(Real(3), -Real(3) / 4)) < Real("1e-35"));
    }

    SECTION("domain checks") {
        REQUIRE_THROWS_AS(dashed_curve(Real(0)), std::domain_error);
        REQUIRE_THROWS_AS(dashed_curve(Real(1)), std::domain_error);
    }

    SECTION("quartic identity holds exactly in rational arithmetic") {
        using Q = boost::multiprecision::cpp_rational;
        for (auto [num, den] : {std::pair{1, 2}, {1, 4}, {3, 5}, {7, 10}}) {
            const Q c(num, den);
            const Q t = 6 * c * c - 1 / (c * c);
            const Q a = -2 * c * c * c + 1 / c;
            const Q residual = 10 * c * c * c * c - 2 * t * c * c - a * c - 1;
            REQUIRE(residual == 0);
        }
    }

    SECTION("a stays positive along the curve") {
        for (int k = 1; k <= 74; ++k) {
            const Real c = Real(k) / 100;  // grid up to 0.74 < 3^{-1/4}
            REQUIRE(dashed_curve(c).a > 0);
        }
    }

    SECTION("tau = 0 Pearcey parameters sit on the dashed curve") {
        for (double c : {0.2, 0.5, 0.7}) {
            auto on = dashed_curve(Real(c));
            auto perturbed = pearcey_params(Real(c), Real(0), 50);
            REQUIRE(abs(on.t - perturbed.t) == 0);
            REQUIRE(abs(on.a - perturbed.a) == 0);
        }
    }

    SECTION("Pearcey offset has the displayed size") {
        const Real c("0.5");
        auto base = dashed_curve(c);
        auto shifted = pearcey_params(c, Real(1), 100);
        const Real dev = sqrt((1 - 3 * c * c * c * c) / 200);
        REQUIRE(abs((shifted.a - base.a) - 4 / (3 * c) * dev) < Real("1e-35"));
        REQUIRE(abs((shifted.t - base.t) + 2 / (3 * c * c) * dev) < Real("1e-35"));
    }

    SECTION("multicritical c-law") {
        auto at_zero = multicrit_params(Real(0), Real("0.3"), 64);
        REQUIRE(abs(at_zero.c - upper_c_bound()) == 0);
        auto mc = multicrit_params(Real(1), Real(0), 16);
        REQUIRE(abs(mc.c - upper_c_bound() * pow(Real(3) / 4, Real(1) / 4)) <
                Real("1e-35"));
        REQUIRE_THROWS_AS(multicrit_params(Real(4), Real(0), 16), std::domain_error);
        // both regimes satisfy the quartic identity up to rounding
        REQUIRE(abs(c_identity_residual(mc.c, mc.t, mc.a)) < Real("1e-30"));
        auto pe = pearcey_params(Real("0.6"), Real("1.5"), 32);
        REQUIRE(abs(c_identity_residual(Real("0.6"), pe.t, pe.a)) < Real("1e-30"));
    }
}

TEST_CASE("solving for c") {
    ScopedPrecision sp(128);

    SECTION("closed-form inverses") {
        REQUIRE(abs(solve_c(Real("-2.5"), Real("1.75")) - Real("0.5")) < Real("1e-14"));
        REQUIRE(abs(solve_c(sqrt(Real(3)), pow(Real(3), -Real(3) / 4)) -
                    upper_c_bound()) < Real("1e-14"));
    }

    SECTION("round trip along the dashed curve") {
        for (double c : {0.2, 0.4, 0.6, 0.75}) {
            auto pt = dashed_curve(Real(c));
            REQUIRE(abs(solve_c(pt.t, pt.a) - Real(c)) < Real("1e-12"));
        }
    }

    SECTION("failures are reported, not fudged") {
        REQUIRE_THROWS_AS(solve_c(Real(0), Real(-1)), std::domain_error);
        // a > 0 but no root in (0, 1]
        REQUIRE_THROWS_AS(solve_c(Real(100), Real("1e-6")), std::domain_error);
    }
}

TEST_CASE("JSON parameter ingestion") {
    ScopedPrecision sp(128);
    using nlohmann::json;

    SECTION("direct form") {
        auto p = params_from_json(json::parse(
            R"({"n":4,"alpha":0.5,"t":-2.5,"a":1.75,"gamma":-1})"));
        REQUIRE(p.n == 4);
        REQUIRE(abs(p.alpha - Real("0.5")) == 0);
        REQUIRE(abs(p.t - Real("-2.5")) == 0);
        REQUIRE(p.gamma == -1);
    }

    SECTION("pearcey curve form matches the direct computation") {
        auto p = params_from_json(
            json::parse(R"({"curve":"pearcey","c":0.5,"tau":1,"n":100})"));
        auto pt = pearcey_params(Real("0.5"), Real(1), 100);
        REQUIRE(abs(p.t - pt.t) == 0);
        REQUIRE(abs(p.a - pt.a) == 0);
        REQUIRE(p.alpha == 0);
        REQUIRE(p.gamma == 1);
    }

    SECTION("multicritical curve form") {
        auto p = params_from_json(json::parse(
            R"({"curve":"multicritical","sigma":0.5,"tau":0.25,"n":16,"alpha":1,"gamma":-1})"));
        auto pt = multicrit_params(Real("0.5"), Real("0.25"), 16);
        REQUIRE(abs(p.t - pt.t) == 0);
        REQUIRE(abs(p.a - pt.a) == 0);
        REQUIRE(p.alpha == 1);
    }

    SECTION("string-valued reals round-trip exactly") {
        auto p = params_from_json(json::parse(
            R"({"n":2,"alpha":"0.1","t":"-2.5","a":"1.75","gamma":"1"})"));
        REQUIRE(p.alpha == Real("0.1"));
    }

    SECTION("validation failures throw") {
        REQUIRE_THROWS_AS(params_from_json(json::parse(
                              R"({"n":2,"alpha":-2,"t":0,"a":1,"gamma":0})")),
                          std::domain_error);
        REQUIRE_THROWS_AS(params_from_json(json::parse(
                              R"({"n":2,"alpha":0,"t":0,"a":1,"gamma":3})")),
                          std::domain_error);
        REQUIRE_THROWS_AS(params_from_json(json::parse(
                              R"({"curve":"bogus","c":0.5,"n":4})")),
                          std::domain_error);
    }
}
