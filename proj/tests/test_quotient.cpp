#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padsig/padic_scalar.hpp"
#include "padsig/quotient.hpp"
#include "padsig/sigma_zeta.hpp"
#include "padsig/univ_scalar.hpp"
#include "padsig/weierstrass.hpp"

using namespace padsig;

TEST_CASE("kernel polynomial split at p = 5") {
    ModulusContext ctx(5);
    auto a4 = PadicScalar::from_int(&ctx, 2, 12);
    auto a6 = PadicScalar::from_int(&ctx, 3, 12);
    auto H = hasse_value(ctx, a4, a6); // 2*a4 = 4

    auto ks = split_division_poly(a4, a6, H, 5, 8);
    CHECK(ks.phi.degree() == 2);
    CHECK(ks.xi.degree() == 10);

    // recomputed factorization residual, independent of the internal gate
    auto psi = division_polys(a4, a6, 5).back();
    auto err = psi - ks.phi * ks.xi;
    for (int n = 0; n <= err.degree(); ++n) CHECK(ring_is_zero_mod(err.coeff(n), 8));

    // constant term is a unit lifting H; subleading coefficient sits in p^2
    CHECK(eq_mod(ks.ell0(), H, 1));
    CHECK(ring_vp(ks.ell0()) == 0);
    CHECK(ring_is_zero_mod(ks.ell_top(), 2));

    // the division polynomial has no x^11 term, so matching that slot in
    // phi*xi ties the subleading coefficients across the two factors
    CHECK(eq_mod(ks.ell_top(), -ring_mul_p_pow(ks.xi.coeff(9), 1), 7));

    // cofactor derivative vanishes mod p
    auto dxi = ks.xi.derivative();
    for (int n = 0; n <= dxi.degree(); ++n) CHECK(ring_is_zero_mod(dxi.coeff(n), 1));
}

TEST_CASE("quotient isogeny at p = 5") {
    ModulusContext ctx(5);
    const int rel = 18;
    auto a4 = PadicScalar::from_int(&ctx, 2, rel);
    auto a6 = PadicScalar::from_int(&ctx, 3, rel);
    auto one = ring_one(a4);
    auto C = expand_deep(a4, a6, 640);

    auto Q = quotient_curve(ctx, C, 6, 30);

    // model reductions: Fermat collapses a^p to a mod p for integer input
    CHECK(eq_mod(Q.a4q, PadicScalar::from_int(&ctx, 2, rel), 1));
    CHECK(eq_mod(Q.a6q, PadicScalar::from_int(&ctx, 3, rel), 1));
    CHECK(eq_mod(Q.Hq, PadicScalar::from_int(&ctx, 4, rel), 1));

    // parameter is Frobenius-shaped with lead p/H = 5/4
    CHECK(eq_mod(Q.tq.coeff(1), PadicScalar::from_ratio(&ctx, 5, 4, rel), 6));
    CHECK(eq_mod_window(Q.tq, TruncSeries<PadicScalar>::t_power(one, 5, 30), 1));
    CHECK(eq_mod_window(Q.uu, TruncSeries<PadicScalar>::constant(one, Q.uu.hi()), 1));

    // the quotient model's own x-expansion, composed with the parameter,
    // must reproduce the trace coordinate up to the differential scaling
    auto Cq = expand_deep(Q.a4q, Q.a6q, 640);
    auto xq_tail = Cq.x - TruncSeries<PadicScalar>::monomial(one, -2, kExactHi);
    auto rtq = recip(Q.tq);
    auto x_through_param = rtq * rtq + compose(xq_tail, Q.tq);
    auto HoverP = ring_mul_p_pow(Q.H, -1);
    auto x_scaled = scale_coeffs(Q.x1, HoverP * HoverP);
    CHECK(eq_mod_window(x_through_param, x_scaled, 4));

    // zeta functoriality: the quotient's zeta series composed with the
    // parameter equals H times the source zeta plus H/p times the kernel
    // log-derivative
    auto betaE = extract_beta(C, 5, 4);
    auto zeta = zeta_series(C, betaE.beta, 30);
    auto betaQ = extract_beta(Cq, 5, 4);
    auto zq = zeta_series(Cq, betaQ.beta, 30);

    auto zq_tail = zq - TruncSeries<PadicScalar>::monomial(one, -1, kExactHi);
    auto lhs = compose(zq_tail, Q.tq) + rtq;
    auto rhs = scale_coeffs(zeta, Q.H) + scale_coeffs(Q.dlog_phi, HoverP);
    CHECK(eq_mod_window(lhs, rhs, 2));
    CHECK(eq_mod_window(lhs.truncated(20), rhs.truncated(20), 3));

    // the constant obstruction assembled from both curves vanishes
    auto pOverH = ring_mul_p_pow(ring_inv(Q.H), 1);
    auto eta = pOverH * betaQ.beta + HoverP * (Q.Tsum - ring_mul_p_pow(betaE.beta, 1));
    CHECK(ring_is_zero_mod(eta, 4));

    // functional equation for the sigma-log: g(t) - (1/p) g'(tq) is the
    // p-th part of log of the parameter's unit series
    auto g = log_sigma_series(C, zeta, 30);
    auto gq = log_sigma_series(Cq, zq, 30);
    auto fel_lhs = g - map_coeffs(compose(gq, Q.tq),
                                  [](const PadicScalar& v) { return ring_mul_p_pow(v, -1); });
    auto log_u = integrate(derivative(Q.uu) * recip(Q.uu));
    auto fel_rhs = map_coeffs(log_u, [](const PadicScalar& v) { return ring_mul_p_pow(v, -1); });
    CHECK(eq_mod_window(fel_lhs.truncated(20), fel_rhs.truncated(20), 2));
}

TEST_CASE("quotient isogeny at p = 7") {
    ModulusContext ctx(7);
    const int rel = 16;
    auto a4 = PadicScalar::from_int(&ctx, 2, rel);
    auto a6 = PadicScalar::from_int(&ctx, 3, rel);
    auto one = ring_one(a4);
    auto C = expand_deep(a4, a6, 64);

    auto Q = quotient_curve(ctx, C, 4, 20);
    CHECK(eq_mod(Q.a4q, PadicScalar::from_int(&ctx, 2, rel), 1));
    CHECK(eq_mod(Q.Hq, PadicScalar::from_int(&ctx, 2, rel), 1)); // H = 3*a6 = 9 = 2 mod 7
    CHECK(eq_mod_window(Q.tq, TruncSeries<PadicScalar>::t_power(one, 7, 20), 1));

    auto betaE = extract_beta(C, 7, 2);
    auto Cq = expand_deep(Q.a4q, Q.a6q, 64);
    auto betaQ = extract_beta(Cq, 7, 2);
    auto pOverH = ring_mul_p_pow(ring_inv(Q.H), 1);
    auto HoverP = ring_mul_p_pow(Q.H, -1);
    auto eta = pOverH * betaQ.beta + HoverP * (Q.Tsum - ring_mul_p_pow(betaE.beta, 1));
    CHECK(ring_is_zero_mod(eta, 2));
}

TEST_CASE("universal quotient carries the expected weights") {
    ModulusContext ctx(5);
    const int rel = 24;
    auto A4 = UnivScalar::A4(&ctx, rel);
    auto A6 = UnivScalar::A6(&ctx, rel);
    auto C = expand_deep(A4, A6, 40);

    auto Q = quotient_curve(ctx, C, 3, 18);
    CHECK(Q.split.ell0().weight() == 4);
    CHECK(Q.split.ell_top().weight() == 2);
    CHECK(Q.Tsum.weight() == 2);
    CHECK(Q.a4q.weight() == 20);
    CHECK(Q.a6q.weight() == 30);
    CHECK(Q.Hq.weight() == 20);
    CHECK(Q.tq.coeff(1).weight() == -4);
    CHECK(Q.uu.coeff(0).weight() == 0);

    // subleading slot of the division polynomial is empty, tying the factors
    CHECK(eq_mod(Q.split.ell_top(), -ring_mul_p_pow(Q.split.xi.coeff(9), 1), 2));
}

TEST_CASE("supersingular and window guards") {
    ModulusContext ctx(5);
    auto a4 = PadicScalar::from_int(&ctx, 0, 8);
    auto a6 = PadicScalar::from_int(&ctx, 1, 8);
    auto C = expand_formal(a4, a6, 20);
    CHECK_THROWS_AS(quotient_curve(ctx, C, 2, 10), not_a_unit_error);

    auto b4 = PadicScalar::from_int(&ctx, 2, 18);
    auto b6 = PadicScalar::from_int(&ctx, 3, 18);
    auto C2 = expand_formal(b4, b6, 16);
    CHECK_THROWS_AS(quotient_curve(ctx, C2, 2, 30), order_error);
}
