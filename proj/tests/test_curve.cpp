#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padsig/exact_poly.hpp"
#include "padsig/padic_scalar.hpp"
#include "padsig/weierstrass.hpp"
#include "padsig/xpoly.hpp"

using namespace padsig;

namespace {

bool ex_eq(const ExactScalar& v, int a, int b, int64_t c) {
    return (v - ExactScalar::monomial(v.p(), a, b, BigRat(c))).is_zero();
}

template <class S>
void check_stored_zero(const TruncSeries<S>& f) {
    for (int n = f.lo(); n <= f.stored_top(); ++n) {
        INFO("coefficient at t^", n, " = ", ring_str(f.coeff(n)));
        CHECK(ring_known_zero(f.coeff(n)));
    }
}

template <class S>
void check_stored_zero_nested(const TruncSeries<TruncSeries<S>>& f) {
    for (int n = f.lo(); n <= f.stored_top(); ++n) {
        auto col = f.coeff(n);
        for (int m = col.lo(); m <= col.stored_top(); ++m) {
            INFO("coefficient at t2^", n, " t1^", m, " = ", ring_str(col.coeff(m)));
            CHECK(ring_known_zero(col.coeff(m)));
        }
    }
}

} // namespace

TEST_CASE("hasse invariant lift") {
    auto H5 = hasse_value(ModulusContext(5), ExactScalar::A4(5), ExactScalar::A6(5));
    CHECK(ex_eq(H5, 1, 0, 2));
    auto H7 = hasse_value(ModulusContext(7), ExactScalar::A4(7), ExactScalar::A6(7));
    CHECK(ex_eq(H7, 0, 1, 3));
    auto H11 = hasse_value(ModulusContext(11), ExactScalar::A4(11), ExactScalar::A6(11));
    CHECK(ex_eq(H11, 1, 1, 20));
    auto H13 = hasse_value(ModulusContext(13), ExactScalar::A4(13), ExactScalar::A6(13));
    CHECK(H13.coeff(3, 0) == 20);
    CHECK(H13.coeff(0, 2) == 15);
    CHECK(H13.coeff(1, 1) == 0);

    // specialized value agrees with the exact lift reduced at a point
    ModulusContext ctx(13);
    auto hp = hasse_value(ctx, PadicScalar::from_int(&ctx, 2, 4), PadicScalar::from_int(&ctx, -1, 4));
    // 20*8 + 15*1 = 175
    CHECK(eq_mod(hp, PadicScalar::from_int(&ctx, 175, 4), 4));
}

TEST_CASE("formal expansion matches hand series") {
    const int64_t P = 5;
    ExactScalar A4 = ExactScalar::A4(P), A6 = ExactScalar::A6(P);
    auto C = expand_formal(A4, A6, 20);

    // w = t^3 + a4 t^7 + a6 t^9 + 2 a4^2 t^11 + 5 a4 a6 t^13 + ...
    CHECK(ex_eq(C.w.coeff(3), 0, 0, 1));
    CHECK(ring_known_zero(C.w.coeff(5)));
    CHECK(ex_eq(C.w.coeff(7), 1, 0, 1));
    CHECK(ex_eq(C.w.coeff(9), 0, 1, 1));
    CHECK(ex_eq(C.w.coeff(11), 2, 0, 2));
    CHECK(ex_eq(C.w.coeff(13), 1, 1, 5));
    // w is odd: w(-t) = -w(t)
    for (int n = 4; n <= C.w.stored_top(); n += 2)
        CHECK(ring_known_zero(C.w.coeff(n)));

    // x = t^-2 - a4 t^2 - a6 t^4 - a4^2 t^6 - 3 a4 a6 t^8 + ...
    CHECK(C.x.lo() == -2);
    CHECK(ex_eq(C.x.coeff(-2), 0, 0, 1));
    CHECK(ring_known_zero(C.x.coeff(0)));
    CHECK(ex_eq(C.x.coeff(2), 1, 0, -1));
    CHECK(ex_eq(C.x.coeff(4), 0, 1, -1));
    CHECK(ex_eq(C.x.coeff(6), 2, 0, -1));
    CHECK(ex_eq(C.x.coeff(8), 1, 1, -3));

    // W = 1 + 2 a4 t^4 + 3 a6 t^6 + 6 a4^2 t^8 + 20 a4 a6 t^10 + ...
    CHECK(C.W.lo() == 0);
    CHECK(ex_eq(C.W.coeff(0), 0, 0, 1));
    CHECK(ring_known_zero(C.W.coeff(2)));
    CHECK(ex_eq(C.W.coeff(4), 1, 0, 2));
    CHECK(ex_eq(C.W.coeff(6), 0, 1, 3));
    CHECK(ex_eq(C.W.coeff(8), 2, 0, 6));
    CHECK(ex_eq(C.W.coeff(10), 1, 1, 20));

    // x w = t and y w = -1 exactly within the window
    check_stored_zero(C.x * C.w - TruncSeries<ExactScalar>::t_power(A4, 1, kExactHi));
    check_stored_zero(C.y * C.w + TruncSeries<ExactScalar>::constant(ExactScalar::from_int(P, 1), kExactHi));
    check_stored_zero(C.W * C.Winv - TruncSeries<ExactScalar>::constant(ExactScalar::from_int(P, 1), kExactHi));
}

TEST_CASE("derivation dual to the invariant differential") {
    const int64_t P = 7;
    ExactScalar A4 = ExactScalar::A4(P), A6 = ExactScalar::A6(P);
    auto C = expand_formal(A4, A6, 16);

    // D x = 2 y
    check_stored_zero(apply_D(C.x, C) - ring_mul_int(C.y, 2));
    // D y = 3 x^2 + a4  (uses y^2 = f(x), not the definition of W)
    auto rhs = ring_mul_int(C.x * C.x, 3) + TruncSeries<ExactScalar>::constant(A4, kExactHi);
    check_stored_zero(apply_D(C.y, C) - rhs);
}

TEST_CASE("deep expansion agrees with the fixed point expansion") {
    const int64_t P = 5;
    ExactScalar A4 = ExactScalar::A4(P), A6 = ExactScalar::A6(P);
    auto Cf = expand_formal(A4, A6, 30);
    auto Cd = expand_deep(A4, A6, 30);
    check_stored_zero((Cf.w - Cd.w).truncated(30));
    check_stored_zero((Cf.x - Cd.x).truncated(30));
    check_stored_zero((Cf.W - Cd.W).truncated(30));

    ModulusContext ctx(5);
    auto a4 = PadicScalar::from_int(&ctx, 2, 6);
    auto a6 = PadicScalar::from_int(&ctx, 3, 6);
    auto Pf = expand_formal(a4, a6, 40);
    auto Pd = expand_deep(a4, a6, 40);
    for (int n = -2; n <= 40; ++n) {
        INFO("x coefficient at t^", n);
        CHECK(eq_mod(Pf.x.coeff(n), Pd.x.coeff(n), 5));
    }
    // precision flows through: unit divisions only
    CHECK(ring_abs_prec(Pd.w.coeff(7)) >= 5);
    CHECK(ring_abs_prec(Pd.x.coeff(8)) >= 5);

    // specialization of the exact model matches direct expansion: x_8 = -3 a4 a6
    auto want = PadicScalar::from_int(&ctx, -18, 6);
    CHECK(eq_mod(Pd.x.coeff(8), want, 6));
}

TEST_CASE("division polynomials") {
    const int64_t P = 5;
    ExactScalar A4 = ExactScalar::A4(P), A6 = ExactScalar::A6(P);
    auto T = division_polys(A4, A6, 7);
    using XP = XPoly<ExactScalar>;

    XP f(A4, {A6, A4, ExactScalar(P), ExactScalar::from_int(P, 1)});
    XP X = XP::monomial(A4, ExactScalar::from_int(P, 1), 1);

    // doubling numerator: x psi_2^2 - psi_1 psi_3 = (X^2 - a4)^2 - 8 a6 X
    XP lhs = X * f.mul_int(4) - T[3];
    XP x2ma4 = X * X - XP::constant(A4);
    XP rhs = x2ma4 * x2ma4 - X.scaled(A6).mul_int(8);
    CHECK(eq_mod_poly(lhs, rhs, 1 << 20));

    // degree (n^2-1)/2 for odd n, (n^2-4)/2 for even n; leading coefficient n
    CHECK(T[5].degree() == 12);
    CHECK(ex_eq(T[5].lead(), 0, 0, 5));
    CHECK(T[6].degree() == 16);
    CHECK(ex_eq(T[6].lead(), 0, 0, 6));
    CHECK(T[7].degree() == 24);
    CHECK(ex_eq(T[7].lead(), 0, 0, 7));

    // T_n(x(t)) has leading term n t^{-2 deg}
    auto C = expand_formal(A4, A6, 20);
    for (int n = 3; n <= 7; ++n) {
        auto s = T[size_t(n)].eval_series(C.x);
        CHECK(s.lo() == -2 * T[size_t(n)].degree());
        INFO("n = ", n);
        CHECK(ex_eq(s.coeff(s.lo()), 0, 0, n));
    }

    // mod p the degree drops to (p^2-p)/2 and the head coefficient is the
    // Hasse value; here p = 5, a4 = 2, a6 = 3, H = 4
    ModulusContext ctx(5);
    auto a4 = PadicScalar::from_int(&ctx, 2, 4);
    auto a6 = PadicScalar::from_int(&ctx, 3, 4);
    auto Tp = division_polys(a4, a6, 5);
    CHECK(Tp[5].degree() == 12);
    CHECK(ring_is_zero_mod(Tp[5].coeff(12), 1));
    CHECK(ring_is_zero_mod(Tp[5].coeff(11), 1));
    auto H = hasse_value(ctx, a4, a6);
    CHECK(eq_mod(Tp[5].coeff(10), H, 1));
}

TEST_CASE("formal group law") {
    const int64_t P = 5;
    ExactScalar A4 = ExactScalar::A4(P), A6 = ExactScalar::A6(P);
    const int M1 = 12, M2 = 8;
    auto C = expand_formal(A4, A6, 15); // w window through t^21
    auto F = formal_group_law(C, M1, M2);
    using Inner = TruncSeries<ExactScalar>;
    using Nested = TruncSeries<Inner>;

    REQUIRE(F.hi() == M2);

    // F(t1, 0) = t1
    auto col0 = F.coeff(0) - Inner::t_power(A4, 1, kExactHi);
    check_stored_zero(col0);

    // dF/dt2 at t2 = 0 is 1/W(t1)
    check_stored_zero((F.coeff(1) - C.Winv).truncated(M1));

    // first interesting coefficient: -2 a4 t1^4 t2
    CHECK(ex_eq(F.coeff(1).coeff(4), 1, 0, -2));

    // symmetry F(t1, t2) = F(t2, t1) on the square window
    for (int j = 0; j <= M2; ++j)
        for (int i = 0; i <= M2; ++i) {
            INFO("coefficient (", i, ",", j, ")");
            CHECK((F.coeff(j).coeff(i) - F.coeff(i).coeff(j)).is_zero());
        }

    // oddness: [-1](t) = -t, so coefficients of even total degree vanish
    for (int j = F.lo(); j <= F.stored_top(); ++j) {
        auto col = F.coeff(j);
        for (int i = col.lo(); i <= col.stored_top(); ++i)
            if ((i + j) % 2 == 0) {
                INFO("coefficient (", i, ",", j, ")");
                CHECK(ring_known_zero(col.coeff(i)));
            }
    }

    // the formal logarithm L = integral of W dt linearizes F:
    // L(F(t1,t2)) = L(t1) + L(t2)
    auto L = integrate(C.W);
    auto LF = eval_along_diagonal(L, F);
    auto Lsplit = embed_inner(L.truncated(M1), M2) + embed_outer(L.truncated(M2), M1);
    REQUIRE(LF.stored_top() >= M2 - 1);
    check_stored_zero_nested(LF - Lsplit);

    // chord slope oracle: x(F) = s^2 - x(t1) - x(t2) with
    // s = (y(t2) - y(t1)) / (x(t2) - x(t1))
    auto x1 = embed_inner(C.x.truncated(M1), M2);
    auto y1 = embed_inner(C.y.truncated(M1), M2);
    auto x2 = embed_outer(C.x.truncated(M2), M1);
    auto y2 = embed_outer(C.y.truncated(M2), M1);
    auto slope = (y2 - y1) * recip(x2 - x1);
    auto rhs = slope * slope - x1 - x2;
    auto xF = eval_along_diagonal(C.x, F);
    auto diff = xF - rhs;
    REQUIRE(diff.stored_top() >= 4);
    check_stored_zero_nested(diff);

    // negate_outer flips the sign of odd outer coefficients
    auto Fn = negate_outer(F);
    check_stored_zero((Fn.coeff(1) + F.coeff(1)).truncated(M1));
    check_stored_zero((Fn.coeff(2) - F.coeff(2)).truncated(M1));

    // specialized group law keeps its certificates: residual of F(t1,0) = t1
    // is known zero at full working precision
    ModulusContext ctx(5);
    auto a4 = PadicScalar::from_int(&ctx, 2, 6);
    auto a6 = PadicScalar::from_int(&ctx, 3, 6);
    auto Cp = expand_formal(a4, a6, 15);
    auto Fp = formal_group_law(Cp, 8, 6);
    auto colp = Fp.coeff(0) - TruncSeries<PadicScalar>::t_power(a4, 1, kExactHi);
    for (int n = colp.lo(); n <= colp.stored_top(); ++n) {
        CHECK(ring_known_zero(colp.coeff(n)));
    }
    check_stored_zero((Fp.coeff(1) - Cp.Winv).truncated(8));
}
