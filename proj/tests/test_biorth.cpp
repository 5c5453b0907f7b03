// Bimoment table, the monic biorthogonal families and their norms, the
// polyorthogonal recombinations, and the half-plane Cauchy transform.
//
// Reference decimals are frozen from the standalone multiprecision companion
// (tests/support/gen_biorth_oracle.py), which integrates the moments with
// mpmath's adaptive rule, solves the moment systems with its own elimination,
// and asserts the dual-route identities (two-sided moment route, type-I
// normalization, norm doubling, three-term recombination) before printing.
// The C++ side must land on the same digits through a different pipeline:
// double-exponential quadrature of the folded integrand and pivoted LU.

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include <pearceylab/biorth.hpp>
#include <pearceylab/linalg.hpp>
#include <pearceylab/model.hpp>

using namespace pearceylab::biorth;
using pearceylab::model::dashed_curve;
using pearceylab::model::weight_W;
using pearceylab::numerics::fmt;
using pearceylab::numerics::integrate_halfline_t;
using pearceylab::numerics::lu_solve;
using pearceylab::numerics::pi_r;
using pearceylab::numerics::ScopedPrecision;

namespace {

Real real_of(const char* s) { return Real(s); }

Complex complex_of(const char* re, const char* im) {
    return Complex(Real(re), Real(im));
}

void require_close_r(const Real& got, const Real& want, const Real& tol) {
    CAPTURE(got, want, tol);
    REQUIRE(abs(got - want) <= tol);
}

void require_close_c(const Complex& got, const Complex& want, const Real& tol) {
    CAPTURE(got, want, tol);
    REQUIRE(abs(got - want) <= tol);
}

// Base point on the dashed curve at c = 1/2: (t, a) = (-5/2, 7/4), with
// n = 4, alpha = 3/10, gamma = 1 (the point all frozen decimals belong to).
ModelParams base_params() {
    ModelParams p;
    p.n = 4;
    p.alpha = real_of("0.3");
    p.gamma = Real(1);
    const auto cp = dashed_curve(real_of("0.5"));
    p.t = cp.t;
    p.a = cp.a;
    return p;
}

const BimomentTable& base_table() {
    static const BimomentTable tab =
        build_bimoments(base_params(), 8, PrecisionPolicy::for_degree(8));
    return tab;
}

const BiorthSystem& base_system() {
    static const BiorthSystem sys = biorth_system(base_table(), 8);
    return sys;
}

// <p(x), q(x^2)> by fresh quadrature against the literal line weight: the
// full-line pairing folded as two half-line pieces, each evaluated through
// weight_W (whole potential in one piece -- a different code path from the
// drift-split integrand the table is built with).
Real bracket_fresh(const std::vector<Real>& pc, const std::vector<Real>& qc,
                   const ModelParams& mp, const PrecisionPolicy& pol) {
    auto f = [&](const Real& x) -> Real {
        const Real qv = poly_eval(qc, x * x);
        Real s = poly_eval(pc, x) * weight_W(x, mp).value;
        if (mp.gamma != 0) s += mp.gamma * poly_eval(pc, -x) * weight_W(-x, mp).value;
        return s * qv;
    };
    auto r = integrate_halfline_t<Real>(f, Real(3), pol);
    REQUIRE(r.converged);
    return r.value;
}

// Monomial coefficient vector for x^k.
std::vector<Real> monomial(int k) {
    std::vector<Real> c(static_cast<size_t>(k) + 1, Real(0));
    c.back() = Real(1);
    return c;
}

int sign_of(const Real& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

const char* const kH_frozen[9] = {
    "36.93140976702971333505213126430582265721",
    "1.446732386768299638063669791659660770679",
    "0.1051771394829184425581678126669728805814",
    "0.01073550083736657985823046378671335583593",
    "0.00137745330039817593354019225332500419573",
    "0.0002087937565204900383854355737578558449477",
    "0.0000358397466356307854275271391567467278649",
    "0.000006760209004021344830255925249879730000728",
    "0.000001372893644808006767566958695364781367293"};

const char* const kP4_frozen[5] = {
    "0.112145480803163626194541290560818895625",
    "-0.9098760898587353881791267803566705248522",
    "2.433456316087396378473947385797059230454",
    "-2.639276657239978882006163769916519827443", "1.0"};

const char* const kQ4_frozen[5] = {
    "0.02063636089787962720431472954869562356014",
    "-0.3550630100685486078067190277291589362793",
    "1.508670769782481974133107032821983881314",
    "-2.201306540131019080247213443311278330462", "1.0"};

}  // namespace

TEST_CASE("bimoment table: frozen entries, dual routes, error bounds") {
    ScopedPrecision prec(224);
    const ModelParams p = base_params();
    const BimomentTable& tab = base_table();

    SECTION("base point sits where the dashed curve puts it") {
        require_close_r(p.t, real_of("-2.5"), real_of("1e-60"));
        require_close_r(p.a, real_of("1.75"), real_of("1e-60"));
    }

    SECTION("frozen entries") {
        struct Item {
            int j, k;
            const char* v;
        };
        const Item items[] = {
            {0, 0, "36.93140976702971333505213126430582265721"},
            {1, 1, "10.66139345065539483158796644764233122163"},
            {2, 1, "7.947073052726349221455679941360825319015"},
            {3, 2, "4.175301948582590470189254126952237248983"},
        };
        for (const auto& it : items) {
            CAPTURE(it.j, it.k);
            const Real want = real_of(it.v);
            require_close_r(tab.at(it.j, it.k), want, real_of("1e-30") * abs(want));
        }
    }

    SECTION("odd moment against the literal two-sided integral") {
        // <x^1, x^0> recomputed as int_R x |x|^alpha e^{-nV} dx, folded into
        // two weight_W half-line pieces; and against the frozen value of the
        // same two-sided route in the companion.
        auto f = [&](const Real& u) -> Real {
            return u * (weight_W(u, p).value - weight_W(-u, p).value);
        };
        auto r = integrate_halfline_t<Real>(f, Real(3), tab.policy);
        REQUIRE(r.converged);
        const Real want = real_of("22.61191196820735193247034660572456362744");
        require_close_r(tab.at(1, 0), want, real_of("1e-18"));
        require_close_r(r.value, tab.at(1, 0), real_of("1e-18"));
    }

    SECTION("h0 equals the (0,0) entry") {
        REQUIRE(base_system().h[0] == tab.at(0, 0));
    }

    SECTION("per-entry quadrature error within policy") {
        for (int j = 0; j <= tab.degree_cap; ++j)
            for (int k = 0; k <= tab.degree_cap; ++k) {
                CAPTURE(j, k);
                REQUIRE(tab.err[static_cast<size_t>(j)][static_cast<size_t>(k)] <=
                        tab.policy.target_abs_err * (1 + abs(tab.at(j, k))));
            }
    }

    SECTION("index guard and a = 0 rejection") {
        REQUIRE_THROWS_AS(tab.at(9, 0), std::out_of_range);
        REQUIRE_THROWS_AS(tab.at(0, -1), std::out_of_range);
        ModelParams bad = p;
        bad.a = Real(0);
        REQUIRE_THROWS_AS(build_bimoments(bad, 2, tab.policy), std::invalid_argument);
    }

    SECTION("rebuilds are digit-identical") {
        const PrecisionPolicy pol = PrecisionPolicy::for_degree(3);
        const BimomentTable t1 = build_bimoments(p, 3, pol);
        const BimomentTable t2 = build_bimoments(p, 3, pol);
        for (int j = 0; j <= 3; ++j)
            for (int k = 0; k <= 3; ++k) {
                CAPTURE(j, k);
                REQUIRE(fmt(t1.at(j, k)) == fmt(t2.at(j, k)));
            }
    }

    SECTION("drift reflection a -> -a flips odd rows only") {
        ModelParams refl = p;
        refl.a = -p.a;
        const BimomentTable tr = build_bimoments(refl, 3, PrecisionPolicy::for_degree(3));
        for (int j = 0; j <= 3; ++j)
            for (int k = 0; k <= 3; ++k) {
                CAPTURE(j, k);
                const Real want = (j % 2 == 0 ? Real(1) : Real(-1)) * tab.at(j, k);
                require_close_r(tr.at(j, k), want, real_of("1e-30") * (1 + abs(want)));
            }
    }

    SECTION("gamma = 0 reduces to the plain half-line weight") {
        ModelParams q = p;
        q.gamma = Real(0);
        const PrecisionPolicy pol = PrecisionPolicy::for_degree(4);
        const BimomentTable tg = build_bimoments(q, 4, pol);
        const Real b00 = real_of("36.90575111157520956416124967613346739668");
        const Real b21 = real_of("7.947062778057150552021487592634874068661");
        require_close_r(tg.at(0, 0), b00, real_of("1e-30") * b00);
        require_close_r(tg.at(2, 1), b21, real_of("1e-30") * b21);
        for (int j = 0; j <= 4; ++j)
            for (int k = 0; k <= 4; ++k) {
                auto f = [&](const Real& x) -> Real {
                    Real m(1);
                    for (int i = 0; i < j + 2 * k; ++i) m *= x;
                    return m * weight_W(x, q).value;
                };
                auto r = integrate_halfline_t<Real>(f, Real(3), pol);
                REQUIRE(r.converged);
                CAPTURE(j, k);
                require_close_r(tg.at(j, k), r.value,
                                real_of("1e-30") * (1 + abs(r.value)));
            }
    }
}

TEST_CASE("biorthogonal families: frozen coefficients, norms, residuals") {
    ScopedPrecision prec(224);
    const BiorthSystem& sys = base_system();

    SECTION("degree zero is the monic constant") {
        REQUIRE(sys.p_coeffs[0].size() == 1);
        REQUIRE(sys.q_coeffs[0].size() == 1);
        REQUIRE(sys.p_coeffs[0][0] == Real(1));
        REQUIRE(sys.q_coeffs[0][0] == Real(1));
    }

    SECTION("frozen norms h_0..h_8") {
        REQUIRE(sys.kmax() == 8);
        for (int k = 0; k <= 8; ++k) {
            CAPTURE(k);
            const Real want = real_of(kH_frozen[k]);
            require_close_r(sys.h[static_cast<size_t>(k)], want,
                            real_of("1e-20") * abs(want));
        }
    }

    SECTION("frozen coefficients at degrees 1 and 4") {
        require_close_r(sys.p_coeffs[1][0],
                        real_of("-0.6122677718193686688089503131460864768915"),
                        real_of("1e-20"));
        require_close_r(sys.q_coeffs[1][0],
                        real_of("-0.4075135741215970961815786629011986664536"),
                        real_of("1e-20"));
        for (int i = 0; i <= 4; ++i) {
            CAPTURE(i);
            const Real wp = real_of(kP4_frozen[i]);
            const Real wq = real_of(kQ4_frozen[i]);
            require_close_r(sys.p_coeffs[4][static_cast<size_t>(i)], wp,
                            real_of("1e-20") * (1 + abs(wp)));
            require_close_r(sys.q_coeffs[4][static_cast<size_t>(i)], wq,
                            real_of("1e-20") * (1 + abs(wq)));
        }
    }

    SECTION("pairings by fresh quadrature: h on the diagonal, zero off it") {
        const ModelParams p = base_params();
        const PrecisionPolicy pol = PrecisionPolicy::for_degree(8);
        Real hmax(0);
        for (const Real& h : sys.h) hmax = (std::max)(hmax, abs(h));
        for (int j = 0; j <= 8; ++j)
            for (int k = 0; k <= 8; ++k) {
                const Real br = bracket_fresh(sys.p_coeffs[static_cast<size_t>(j)],
                                              sys.q_coeffs[static_cast<size_t>(k)], p, pol);
                CAPTURE(j, k);
                if (j == k)
                    require_close_r(br, sys.h[static_cast<size_t>(k)],
                                    real_of("1e-12") * hmax);
                else
                    REQUIRE(abs(br) <= real_of("1e-12") * hmax);
            }
        REQUIRE(sys.residual_report <= real_of("1e-12") * hmax);
    }

    SECTION("gamma = 0 frozen system at the same (t, a)") {
        ModelParams q = base_params();
        q.gamma = Real(0);
        const BiorthSystem g0 =
            biorth_system(build_bimoments(q, 3, PrecisionPolicy::for_degree(3)), 3);
        const char* const hg[4] = {"36.90575111157520956416124967613346739668",
                                   "1.439715424817524884715427649933476479659",
                                   "0.1034282751294456106126543401097638452597",
                                   "0.01032888269439421580165362781559177448226"};
        for (int k = 0; k <= 3; ++k) {
            CAPTURE(k);
            const Real want = real_of(hg[k]);
            require_close_r(g0.h[static_cast<size_t>(k)], want,
                            real_of("1e-20") * want);
        }
        require_close_r(g0.p_coeffs[1][0],
                        real_of("-0.6127477365424963373891811341523122272854"),
                        real_of("1e-20"));
        require_close_r(g0.p_coeffs[2][0],
                        real_of("0.3625147612832988483024433709572209215992"),
                        real_of("1e-20"));
        require_close_r(g0.p_coeffs[2][1],
                        real_of("-1.257131660284800654808456111876761357802"),
                        real_of("1e-20"));
    }

    SECTION("degree-1 closed form at alpha = 0, gamma = 0") {
        ModelParams q = base_params();
        q.gamma = Real(0);
        q.alpha = Real(0);
        const BimomentTable t1 = build_bimoments(q, 1, PrecisionPolicy::for_degree(2));
        const BiorthSystem s1 = biorth_system(t1, 1);
        const Real ratio = -t1.at(1, 0) / t1.at(0, 0);
        require_close_r(s1.p_coeffs[1][0], ratio, real_of("1e-30"));
        require_close_r(s1.p_coeffs[1][0],
                        real_of("-0.5935291718960297726156940655821452752047"),
                        real_of("1e-20"));
    }

    SECTION("kmax beyond the table cap is refused") {
        REQUIRE_THROWS_AS(biorth_system(base_table(), 9), std::invalid_argument);
        REQUIRE_THROWS_AS(biorth_system(base_table(), -1), std::invalid_argument);
    }
}

TEST_CASE("solver invariants: pivoting, precision, Gram-Schmidt, sign changes") {
    ScopedPrecision prec(224);

    SECTION("row order of the moment conditions does not move p_5") {
        const BimomentTable& tab = base_table();
        const BiorthSystem& sys = base_system();
        pearceylab::numerics::Matrix<Real> A(5, 5), b(5, 1);
        for (int j = 0; j < 5; ++j) {
            for (int i = 0; i < 5; ++i) A(j, i) = tab.at(i, 4 - j);
            b(j, 0) = -tab.at(5, 4 - j);
        }
        const auto sol = lu_solve(A, b);
        REQUIRE(sol.ok);
        for (int i = 0; i < 5; ++i) {
            CAPTURE(i);
            require_close_r(sol.x(i, 0), sys.p_coeffs[5][static_cast<size_t>(i)],
                            real_of("1e-25") *
                                (1 + abs(sys.p_coeffs[5][static_cast<size_t>(i)])));
        }
    }

    SECTION("doubling the working precision preserves every norm sign") {
        PrecisionPolicy pol = PrecisionPolicy::for_degree(8);
        pol.bits *= 2;
        pol.target_abs_err = pol.target_abs_err * pol.target_abs_err;
        pol.target_rel_err = pol.target_rel_err * pol.target_rel_err;
        ScopedPrecision deep(2 * 224);
        const BiorthSystem fine =
            biorth_system(build_bimoments(base_params(), 8, pol), 8);
        const BiorthSystem& sys = base_system();
        for (int k = 0; k <= 8; ++k) {
            CAPTURE(k);
            REQUIRE(sign_of(fine.h[static_cast<size_t>(k)]) ==
                    sign_of(sys.h[static_cast<size_t>(k)]));
            REQUIRE(sign_of(fine.h[static_cast<size_t>(k)]) == 1);
            require_close_r(fine.h[static_cast<size_t>(k)], sys.h[static_cast<size_t>(k)],
                            real_of("1e-30") * abs(sys.h[static_cast<size_t>(k)]));
        }
    }

    SECTION("gamma = 0 agrees with classical Gram-Schmidt") {
        ModelParams q = base_params();
        q.gamma = Real(0);
        const PrecisionPolicy pol = PrecisionPolicy::for_degree(4);
        const BiorthSystem sys = biorth_system(build_bimoments(q, 4, pol), 4);

        std::vector<std::vector<Real>> pg, qg;
        std::vector<Real> hg;
        for (int k = 0; k <= 4; ++k) {
            std::vector<Real> pv = monomial(k), qv = monomial(k);
            for (int j = 0; j < k; ++j) {
                const Real cp = bracket_fresh(monomial(k), qg[static_cast<size_t>(j)],
                                              q, pol) /
                                hg[static_cast<size_t>(j)];
                const Real cq = bracket_fresh(pg[static_cast<size_t>(j)], monomial(k),
                                              q, pol) /
                                hg[static_cast<size_t>(j)];
                for (size_t i = 0; i < pg[static_cast<size_t>(j)].size(); ++i)
                    pv[i] -= cp * pg[static_cast<size_t>(j)][i];
                for (size_t i = 0; i < qg[static_cast<size_t>(j)].size(); ++i)
                    qv[i] -= cq * qg[static_cast<size_t>(j)][i];
            }
            hg.push_back(bracket_fresh(pv, qv, q, pol));
            pg.push_back(std::move(pv));
            qg.push_back(std::move(qv));
        }
        for (int k = 0; k <= 4; ++k) {
            CAPTURE(k);
            require_close_r(hg[static_cast<size_t>(k)], sys.h[static_cast<size_t>(k)],
                            real_of("1e-12") * sys.h[static_cast<size_t>(k)]);
            for (size_t i = 0; i < pg[static_cast<size_t>(k)].size(); ++i) {
                CAPTURE(i);
                require_close_r(pg[static_cast<size_t>(k)][i],
                                sys.p_coeffs[static_cast<size_t>(k)][i], real_of("1e-12"));
                require_close_r(qg[static_cast<size_t>(k)][i],
                                sys.q_coeffs[static_cast<size_t>(k)][i], real_of("1e-12"));
            }
        }
    }

    SECTION("random spans of the kernel functions obey the sign-change bound") {
        // w_0, w_1, ... built from u_1 = e^{A sqrt xi} + e^{-A sqrt xi} and
        // u_2 = sqrt xi (e^{A sqrt xi} - e^{-A sqrt xi}) at A = 2na = 14:
        // any combination of w_0..w_m changes sign at most m times on (0, inf).
        const Real aa = real_of("14");
        auto w_eval = [&](int k, const Real& xi, const Real& ep, const Real& em) {
            const Real r = sqrt(xi);
            const Real base = (k % 2 == 0) ? (ep + em) : r * (ep - em);
            Real out = base;
            for (int i = 0; i < k / 2; ++i) out *= xi;
            return out;
        };
        std::vector<Real> grid;
        for (int i = 0; i < 240; ++i)
            grid.push_back(real_of("1e-6") * pow(Real(10), Real(5 * i) / 239));
        for (int i = 1; i <= 1800; ++i) grid.push_back(Real(1) / 10 + Real(89 * i) / 18000);

        std::mt19937 eng(20240817u);
        std::uniform_real_distribution<double> pick(-1.0, 1.0);
        for (int m = 2; m <= 5; ++m) {
            for (int trial = 0; trial < 8; ++trial) {
                std::vector<Real> alpha;
                for (int k = 0; k <= m; ++k) alpha.push_back(Real(pick(eng)));
                int changes = 0, prev = 0;
                for (const Real& xi : grid) {
                    const Real ep = exp(aa * sqrt(xi));
                    const Real em = 1 / ep;
                    Real v(0);
                    for (int k = 0; k <= m; ++k)
                        v += alpha[static_cast<size_t>(k)] * w_eval(k, xi, ep, em);
                    const int s = sign_of(v);
                    if (s != 0) {
                        if (prev != 0 && s != prev) ++changes;
                        prev = s;
                    }
                }
                CAPTURE(m, trial, changes);
                REQUIRE(changes <= m);
            }
        }
    }
}

TEST_CASE("polyorthogonal pairs: recombinations, normalizations, moments") {
    ScopedPrecision prec(224);
    const BiorthSystem& sys = base_system();
    const ModelParams p = base_params();
    const PrecisionPolicy pol = PrecisionPolicy::for_degree(8);

    SECTION("type-II members on the near-diagonal families are the monic q_m") {
        for (int m = 1; m <= 6; ++m) {
            const int k2 = m / 2;
            const int k1 = m - k2;
            const PolyPair pair = poly_pair(sys, k1, k2);
            CAPTURE(m, k1, k2);
            REQUIRE(pair.P_coeffs.size() == sys.q_coeffs[static_cast<size_t>(m)].size());
            for (size_t i = 0; i < pair.P_coeffs.size(); ++i)
                REQUIRE(pair.P_coeffs[i] == sys.q_coeffs[static_cast<size_t>(m)][i]);
            REQUIRE(pair.A_coeffs.size() + pair.B_coeffs.size() ==
                    sys.p_coeffs[static_cast<size_t>(m - 1)].size());
        }
    }

    SECTION("(0,0) carries no type-I density") {
        const PolyPair pair = poly_pair(sys, 0, 0);
        REQUIRE(pair.P_coeffs.size() == 1);
        REQUIRE(pair.P_coeffs[0] == Real(1));
        REQUIRE(pair.A_coeffs.empty());
        REQUIRE(pair.B_coeffs.empty());
    }

    SECTION("diagonal type-II norms double the scalar ones") {
        for (int k = 1; k <= 3; ++k) {
            const PolyPair pair = poly_pair(sys, k, k);
            auto f = [&](const Real& xi) -> Real {
                Real m(1);
                for (int i = 0; i < k; ++i) m *= xi;
                return poly_eval(pair.P_coeffs, xi) * m * weight_W1(xi, p);
            };
            auto r = integrate_halfline_t<Real>(f, Real(6), pol);
            REQUIRE(r.converged);
            const Real want = 2 * sys.h[static_cast<size_t>(2 * k)];
            CAPTURE(k);
            require_close_r(r.value, want, real_of("1e-12") * want);
        }
    }

    SECTION("type-I densities integrate to one against the matching monomial") {
        for (int k = 1; k <= 3; ++k) {
            const PolyPair dia = poly_pair(sys, k, k);
            auto fd = [&](const Real& xi) -> Real {
                Real m(1);
                for (int i = 0; i < 2 * k - 1; ++i) m *= xi;
                return dia.Q_eval(xi, p) * m;
            };
            auto rd = integrate_halfline_t<Real>(fd, Real(6), pol);
            REQUIRE(rd.converged);
            CAPTURE(k);
            require_close_r(rd.value, Real(1), real_of("1e-10"));
        }
        for (int k = 1; k <= 2; ++k) {
            const PolyPair off = poly_pair(sys, k + 1, k);
            auto fo = [&](const Real& xi) -> Real {
                Real m(1);
                for (int i = 0; i < 2 * k; ++i) m *= xi;
                return off.Q_eval(xi, p) * m;
            };
            auto ro = integrate_halfline_t<Real>(fo, Real(6), pol);
            REQUIRE(ro.converged);
            CAPTURE(k);
            require_close_r(ro.value, Real(1), real_of("1e-10"));
        }
    }

    SECTION("the (1,2) member: vanishing low moments, closed-form norm") {
        const PolyPair pair = poly_pair(sys, 1, 2);
        auto moment = [&](int j, bool second) -> Real {
            auto f = [&](const Real& xi) -> Real {
                Real m(1);
                for (int i = 0; i < j; ++i) m *= xi;
                const Real w = second ? weight_W2(xi, p) : weight_W1(xi, p);
                return poly_eval(pair.P_coeffs, xi) * m * w;
            };
            auto r = integrate_halfline_t<Real>(f, Real(6), pol);
            REQUIRE(r.converged);
            return r.value;
        };
        // h^{(1)}_{1,2} = -2 h_3 h_2 sets the scale of the family.
        const Real scale = 2 * sys.h[3] * sys.h[2];
        REQUIRE(abs(moment(0, false)) <= real_of("1e-12") * scale);
        REQUIRE(abs(moment(0, true)) <= real_of("1e-12") * scale);
        REQUIRE(abs(moment(1, true)) <= real_of("1e-12") * scale);
        require_close_r(moment(1, false), -scale, real_of("1e-10") * scale);
    }

    SECTION("index guards") {
        REQUIRE_THROWS_AS(poly_pair(sys, 3, 0), std::invalid_argument);
        REQUIRE_THROWS_AS(poly_pair(sys, 0, 2), std::invalid_argument);
        REQUIRE_THROWS_AS(poly_pair(sys, -1, 0), std::invalid_argument);
        REQUIRE_THROWS_AS(poly_pair(sys, 5, 4), std::invalid_argument);  // needs q_9
        REQUIRE_THROWS_AS(weight_W1(Real(0), p), std::domain_error);
        REQUIRE_THROWS_AS(weight_W2(Real(-1), p), std::domain_error);
    }
}

TEST_CASE("Cauchy transforms: frozen values, jump, decay, branch agreement") {
    ScopedPrecision prec(224);
    const BiorthSystem& sys = base_system();
    const PrecisionPolicy pol = PrecisionPolicy::for_degree(8);

    SECTION("frozen values off the axis") {
        const Complex c0 = cauchy_p(sys, 0, Complex(Real(1), Real(1)), pol);
        require_close_c(c0,
                        complex_of("2.796120468440824707092604363787000691196",
                                   "-0.5550877093004534063501099612825845831332"),
                        real_of("1e-25"));
        const Complex c2 = cauchy_p(sys, 2, Complex(Real(1), Real(1)), pol);
        require_close_c(c2,
                        complex_of("-0.001375704586514669519155059065171496805966",
                                   "0.001170878663058749753721473218826450720195"),
                        real_of("1e-28"));
        const Real s2 = sqrt(Real(2));
        const Complex c2b = cauchy_p(sys, 2, Complex(s2, s2), pol);
        require_close_c(c2b,
                        complex_of("-0.0002341082447512165385483187697343228086813",
                                   "0.00009093394441096383710225243420266674812403"),
                        real_of("1e-28"));
    }

    SECTION("boundary jump from shrinking vertical offsets") {
        // The offset difference approaches the jump linearly in eps (the
        // weight's endpoint at the origin contributes an O(eps) boundary
        // term; measured slopes are ~ -177 at k=0 and ~ +10 at k=2), so a
        // first-order extrapolation is the right model here.
        const Real x = real_of("0.7");
        for (int k : {0, 2}) {
            const Real e1 = real_of("1e-7"), e2 = real_of("2e-7");
            const Complex j1 = cauchy_p(sys, k, Complex(x, e1), pol) -
                               cauchy_p(sys, k, Complex(x, -e1), pol);
            const Complex j2 = cauchy_p(sys, k, Complex(x, e2), pol) -
                               cauchy_p(sys, k, Complex(x, -e2), pol);
            const Complex rich = 2 * j1 - j2;
            const Real want = cauchy_p_jump(sys, k, x);
            CAPTURE(k);
            require_close_c(rich, Complex(want), real_of("1e-9"));
        }
    }

    SECTION("far-field decay z^{-2(k+1)} with the -h_k/(2 pi i) coefficient") {
        const Real r1 = Real(10) / sqrt(Real(2));
        const Real r2 = Real(20) / sqrt(Real(2));
        const Complex z1(r1, r1), z2(r2, r2);
        for (int k : {0, 1, 2}) {
            const Complex v1 = cauchy_p(sys, k, z1, pol);
            const Complex v2 = cauchy_p(sys, k, z2, pol);
            const Real ratio = abs(v1) / abs(v2);
            const Real expected = pow(Real(2), 2 * (k + 1));
            CAPTURE(k);
            require_close_r(ratio / expected, Real(1), real_of("0.05"));
            // leading coefficient: Cp_k(z) ~ -h_k / (2 pi i z^{2k+2})
            Complex zp(1);
            for (int i = 0; i < 2 * (k + 1); ++i) zp = zp * z2;
            const Complex lead = -sys.h[static_cast<size_t>(k)] /
                                 (Complex(Real(0), 2 * pi_r()) * zp);
            require_close_c(v2 / lead, Complex(Real(1)), real_of("0.05"));
        }
    }

    SECTION("only z^2 enters: symmetric values on the imaginary axis") {
        const Complex up = cauchy_p(sys, 0, Complex(Real(0), Real(1)), pol);
        const Complex dn = cauchy_p(sys, 0, Complex(Real(0), Real(-1)), pol);
        require_close_c(up, dn, real_of("1e-35") * abs(up));
    }

    SECTION("subtracted and plain quadratures agree in the overlap") {
        const Complex z = complex_of("0.9", "0.1");  // subtracted branch
        const Complex got = cauchy_p(sys, 0, z, pol);
        const ModelParams p = base_params();
        const Complex z2 = z * z;
        auto f = [&](const Real& x) -> Complex {
            Real s = poly_eval(sys.p_coeffs[0], x) * weight_W(x, p).value;
            s += p.gamma * poly_eval(sys.p_coeffs[0], -x) * weight_W(-x, p).value;
            return Complex(s) / (x * x - z2);
        };
        auto r = integrate_halfline_t<Complex>(f, Real(3), pol);
        REQUIRE(r.converged);
        const Complex plain = r.value / Complex(Real(0), 2 * pi_r());
        require_close_c(got, plain, real_of("1e-28") * abs(got));
    }

    SECTION("domain guards") {
        REQUIRE_THROWS_AS(cauchy_p(sys, 0, Complex(Real(-1), Real(1)), pol),
                          std::domain_error);
        REQUIRE_THROWS_AS(cauchy_p(sys, 0, Complex(real_of("0.5"), real_of("1e-9")), pol),
                          std::runtime_error);
        REQUIRE_THROWS_AS(cauchy_p(sys, 9, Complex(Real(1), Real(1)), pol),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(cauchy_p_jump(sys, 0, real_of("-0.5")), std::domain_error);
    }
}
