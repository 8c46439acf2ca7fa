#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "padsig/verifier.hpp"

using namespace padsig;

namespace {

bool mentions(const CheckReport& r, const char* needle) {
    return r.witness.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("differential equation report at p = 5") {
    ModulusContext ctx(5);
    // beta level 4 = target 2 plus the chain loss through degree 24
    auto a4 = PadicScalar::from_int(&ctx, 2, 12);
    auto a6 = PadicScalar::from_int(&ctx, 3, 12);
    auto C = expand_deep(a4, a6, 630);
    auto cs = sigma_certified(C, 5, 4, 22);

    auto r = check_ode(ctx, C, cs.sigma, cs.beta, 2);
    CAPTURE(r.witness);
    CHECK(r.status == "pass");
    CHECK(r.witness.empty());
    CHECK(r.certified.substr(0, 3) == "5^2");

    // a shifted constant breaks the identity at the constant slot
    auto bad = check_ode(ctx, C, cs.sigma, cs.beta + ring_one(a4), 2);
    CHECK(bad.status == "fail");
    CHECK(mentions(bad, "t^0"));
}

TEST_CASE("integrality ladder report at p = 5") {
    ModulusContext ctx(5);
    auto a4 = PadicScalar::from_int(&ctx, 2, 12);
    auto a6 = PadicScalar::from_int(&ctx, 3, 12);
    auto C = expand_deep(a4, a6, 64);
    auto b = extract_beta(C, 5, 2);

    auto r = check_ladder(ctx, C, b.beta, 2);
    CHECK(r.status == "pass");

    // the wrong constant loses divisibility at the first ramified slot
    auto bad = check_ladder(ctx, C, b.beta + ring_one(a4), 2);
    CHECK(bad.status == "fail");
    CHECK(mentions(bad, "m = 5"));

    // window too shallow for the requested depth surfaces as a report
    auto shallow = expand_deep(a4, a6, 16);
    auto r2 = check_ladder(ctx, shallow, b.beta, 2);
    CHECK(r2.status == "fail");
}

TEST_CASE("beta agreement report and supersingular rejection") {
    ModulusContext ctx(5);
    auto a4 = PadicScalar::from_int(&ctx, 2, 12);
    auto a6 = PadicScalar::from_int(&ctx, 3, 12);
    auto C = expand_deep(a4, a6, 30);
    CHECK(check_beta_paths(ctx, C, 2).status == "pass");

    ModulusContext ctx7(7);
    auto C7 = expand_deep(PadicScalar::from_int(&ctx7, 2, 12),
                          PadicScalar::from_int(&ctx7, 3, 12), 54);
    CHECK(check_beta_paths(ctx7, C7, 2).status == "pass");

    // supersingular input turns into a failure report, not an exception
    auto Cs = expand_deep(PadicScalar::from_int(&ctx, 0, 12),
                          PadicScalar::from_int(&ctx, 1, 12), 30);
    auto bad = check_beta_paths(ctx, Cs, 1);
    CHECK(bad.status == "fail");
    CHECK(!bad.witness.empty());
}

TEST_CASE("translation and quadratic identities at p = 5") {
    ModulusContext ctx(5);
    auto a4 = PadicScalar::from_int(&ctx, 1, 10);
    auto a6 = PadicScalar::from_int(&ctx, 1, 10);
    auto C = expand_deep(a4, a6, 127);

    auto l9 = check_lemma9(ctx, C, 1, 10);
    CAPTURE(l9.witness);
    CHECK(l9.status == "pass");

    auto cs = sigma_certified(C, 5, 3, 14);
    auto r = check_quadratic(ctx, C, cs.sigma, 1, 10);
    CAPTURE(r.witness);
    CHECK(r.status == "pass");
    CHECK(r.witness.empty());
}

TEST_CASE("quotient bundle and functional equation reports at p = 5") {
    ModulusContext ctx(5);
    const int rel = 24;
    auto a4 = PadicScalar::from_int(&ctx, 2, rel);
    auto a6 = PadicScalar::from_int(&ctx, 3, rel);
    auto C = expand_deep(a4, a6, 640);
    auto Q = quotient_curve(ctx, C, 6, 24);
    auto Cq = expand_deep(Q.a4q, Q.a6q, 640);

    auto csE = sigma_certified(C, 5, 4, 24);
    auto csQ = sigma_certified(Cq, 5, 4, 24);

    auto r = check_prop8(ctx, C, Q, csE.beta, csQ.beta, csE.zeta, csQ.zeta, 2, 18);
    CAPTURE(r.witness);
    CHECK(r.status == "pass");
    CHECK(r.witness.empty());

    auto f = check_fel(ctx, Q, csE.g, csQ.g, 2, 18);
    CAPTURE(f.witness);
    CHECK(f.status == "pass");

    // perturbing the base beta breaks the constant obstruction (swapping the
    // two betas would not: they agree mod p, and eta is read mod p^{e-1})
    auto bad = check_prop8(ctx, C, Q, csE.beta + ring_one(a4), csQ.beta, csE.zeta, csQ.zeta, 2, 18);
    CHECK(bad.status == "fail");
    CHECK(mentions(bad, "eta"));
}

TEST_CASE("specialization commutes with the universal pipeline") {
    ModulusContext ctx(5);
    auto r = check_specialization(ctx, 1, 1, 1, 12);
    CAPTURE(r.witness);
    CHECK(r.status == "pass");
    CHECK(r.certified.substr(0, 3) == "5^1");
}

TEST_CASE("Eisenstein q-expansions are the frozen ones") {
    ModulusContext ctx(5);
    auto one = PadicScalar::from_int(&ctx, 1, 8);
    auto E2 = eisenstein_series(&ctx, 2, 4, 8);
    CHECK(eq_mod(E2.coeff(0), one, 8));
    CHECK(eq_mod(E2.coeff(1), PadicScalar::from_int(&ctx, -24, 8), 8));
    CHECK(eq_mod(E2.coeff(2), PadicScalar::from_int(&ctx, -72, 8), 8));
    CHECK(eq_mod(E2.coeff(3), PadicScalar::from_int(&ctx, -96, 8), 8));
    CHECK(eq_mod(E2.coeff(4), PadicScalar::from_int(&ctx, -168, 8), 8));

    auto E4 = eisenstein_series(&ctx, 4, 2, 8);
    CHECK(eq_mod(E4.coeff(1), PadicScalar::from_int(&ctx, 240, 8), 8));
    CHECK(eq_mod(E4.coeff(2), PadicScalar::from_int(&ctx, 2160, 8), 8));

    auto E6 = eisenstein_series(&ctx, 6, 2, 8);
    CHECK(eq_mod(E6.coeff(1), PadicScalar::from_int(&ctx, -504, 8), 8));
    CHECK(eq_mod(E6.coeff(2), PadicScalar::from_int(&ctx, -16632, 8), 8));

    // p-deprived divisor sums at p = 5
    auto Es = eisenstein_e2_star(&ctx, 5, 8);
    CHECK(eq_mod(Es.coeff(0), one, 8));
    CHECK(eq_mod(Es.coeff(1), PadicScalar::from_int(&ctx, 6, 8), 8));
    CHECK(eq_mod(Es.coeff(2), PadicScalar::from_int(&ctx, 18, 8), 8));
    CHECK(eq_mod(Es.coeff(3), PadicScalar::from_int(&ctx, 24, 8), 8));
    CHECK(eq_mod(Es.coeff(4), PadicScalar::from_int(&ctx, 42, 8), 8));
    CHECK(eq_mod(Es.coeff(5), PadicScalar::from_int(&ctx, 6, 8), 8));
}

TEST_CASE("graded embedding sends beta to the weight-2 Eisenstein series") {
    ModulusContext ctx(5);
    auto A4 = UnivScalar::A4(&ctx, 9);
    auto A6 = UnivScalar::A6(&ctx, 9);
    auto C = expand_deep(A4, A6, 7);
    auto b = extract_beta(C, 5, 1);

    // frozen residues of E2/12 mod 5: constant 1/12, q-coefficient -2
    auto E = make_q_embedding(&ctx, 8, 9);
    auto ib = embed_q(E, b.beta);
    CHECK(eq_mod(ib.coeff(0), PadicScalar::from_int(&ctx, 3, 9), 1));
    CHECK(eq_mod(ib.coeff(1), PadicScalar::from_int(&ctx, 3, 9), 1));

    CHECK(check_q_expansions(ctx, 1, 8, false).status == "pass");

    ModulusContext ctx7(7);
    CHECK(check_q_expansions(ctx7, 1, 8, false).status == "pass");
}

TEST_CASE("weight-2 kernel slot matches the p-deprived series") {
    ModulusContext ctx(5);
    auto r = check_q_expansions(ctx, 2, 6, true);
    CHECK(r.status == "pass");
    CHECK(r.certified.find("weight-2") != std::string::npos);
}

TEST_CASE("Hasse lift reports at p = 5 and p = 7") {
    ModulusContext ctx5(5);
    auto r5 = check_hasse_lifts(ctx5);
    CAPTURE(r5.witness);
    CHECK(r5.status == "pass");
    CHECK(r5.witness.empty());

    ModulusContext ctx7(7);
    auto r7 = check_hasse_lifts(ctx7);
    CAPTURE(r7.witness);
    CHECK(r7.status == "pass");
}

TEST_CASE("recomputation stability at p = 5") {
    ModulusContext ctx(5);
    // the beta level stays fixed across both runs; only the working digits
    // and the window move
    auto run = [&](int extra, int M) {
        const int depth = std::max(M + 6, 125 + 2);
        const int wide = sigma_working_rel(5, 3, M) + extra;
        auto a4 = PadicScalar::from_int(&ctx, 2, wide);
        auto a6 = PadicScalar::from_int(&ctx, 3, wide);
        auto c = expand_deep(a4, a6, depth);
        return sigma_certified(c, 5, 3, M).sigma;
    };
    auto r = check_stability(ctx, run, 1, 12);
    CAPTURE(r.witness);
    CHECK(r.status == "pass");
}

TEST_CASE("nodal curve passes the suite") {
    ModulusContext ctx(5);
    auto a4 = PadicScalar::from_int(&ctx, -3, 12);
    auto a6 = PadicScalar::from_int(&ctx, 2, 12);
    auto C = expand_deep(a4, a6, 630);
    auto H = hasse_value(ctx, a4, a6);
    CHECK(eq_mod(H, PadicScalar::from_int(&ctx, -6, 12), 12));

    auto cs = sigma_certified(C, 5, 4, 22);
    CHECK(check_ode(ctx, C, cs.sigma, cs.beta, 2).status == "pass");
    CHECK(check_ladder(ctx, C, cs.beta, 2).status == "pass");
    CHECK(check_beta_paths(ctx, C, 2).status == "pass");
}
