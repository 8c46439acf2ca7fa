#pragma once

// Quotient of an ordinary curve by the distinguished order-p subgroup of
// its formal group.  Over a coefficient ring with p-adic truncation the
// p-division polynomial splits as (kernel polynomial) * (monic cofactor);
// the kernel polynomial drives a trace construction that produces a
// Weierstrass model for the quotient curve, the isogeny's parameter
// series t', and the unit series u with H*t' = t^p * phi(x(t)) * u(t).

#include <cstdint>
#include <string>
#include <utility>

#include "padsig/context.hpp"
#include "padsig/errors.hpp"
#include "padsig/series.hpp"
#include "padsig/weierstrass.hpp"
#include "padsig/xpoly.hpp"

namespace padsig {

// psi_p = phi * xi with phi of degree (p-1)/2, leading coefficient
// exactly p, and phi == H mod p as a polynomial; xi is monic of degree
// (p^2-p)/2 with xi' == 0 mod p.  The roots of phi are the x-coordinates
// of the nontrivial kernel points.
template <class S>
struct KernelSplit {
    XPoly<S> phi;
    XPoly<S> xi;

    // Constant term; a unit congruent to H mod p.
    S ell0() const { return phi.coeff(0); }
    // Subleading coefficient; == 0 mod p^2, and -2/p times it is the sum
    // of the kernel x-coordinates.
    S ell_top() const { return phi.coeff(phi.degree() - 1); }
};

// Quadratic Hensel lifting of the mod-p factorization psi_p == H * xi.
// The factors only exist over a p-adically complete ring: with exact
// polynomial scalars the iteration cannot converge and the convergence
// gate below reports the failure.  Requires scalars carrying at least
// prec certified digits.
template <class S>
KernelSplit<S> split_division_poly(const S& a4, const S& a6, const S& H, int64_t p, int prec) {
    const int dphi = int(p - 1) / 2;
    const int dxi = int(p * (p - 1)) / 2;

    XPoly<S> psi = division_polys(a4, a6, int(p)).back();
    if (psi.degree() != dphi + dxi)
        throw consistency_error("split_division_poly: unexpected division polynomial degree");

    const S one = ring_one(a4);
    const S pval = ring_from_int(a4, p);
    S Hinv = ring_inv(H); // throws not_a_unit_error on a supersingular fibre

    // Seed factors, correct mod p.  The cofactor takes the low part of
    // psi/H and is forced exactly monic; the dropped coefficients above
    // degree dxi all vanish mod p.
    XPoly<S> xi(a4);
    for (int n = 0; n < dxi; ++n) xi.set_coeff(n, psi.coeff(n) * Hinv);
    xi.set_coeff(dxi, one);
    XPoly<S> phi(a4);
    phi.set_coeff(0, H);
    phi.set_coeff(dphi, pval);

    // Running inverse of phi modulo (xi, p^k); phi is a unit there since
    // it is a unit constant mod p.
    XPoly<S> c = XPoly<S>::constant(Hinv);
    const XPoly<S> two = XPoly<S>::constant(ring_from_int(a4, 2));

    // Each round doubles the certified modulus of psi == phi * xi.
    for (int k = 1; k < prec; k *= 2) {
        XPoly<S> err = psi - phi * xi;
        XPoly<S> A = divmod(c * err, xi).second;
        XPoly<S> B = divmod(err - phi * A, xi).first;
        xi = xi + A;
        phi = phi + B;
        c = divmod(c * (two - phi * c), xi).second;
    }

    auto gate = [](bool ok, const char* what) {
        if (!ok) throw consistency_error(std::string("split_division_poly: ") + what);
    };

    // The iterate is converged only to the requested modulus; clamp so the
    // certified precision of the factors matches what the lifting proved.
    phi = clamp_coeffs(phi, prec);
    xi = clamp_coeffs(xi, prec);

    XPoly<S> err = psi - phi * xi;
    for (int n = 0; n <= err.degree(); ++n)
        gate(ring_is_zero_mod(err.coeff(n), prec), "factorization did not converge");
    gate(phi.degree() == dphi && xi.degree() == dxi, "factor degrees drifted");
    gate(eq_mod(phi.coeff(dphi), pval, prec), "kernel polynomial lead is not p");
    gate(eq_mod(xi.coeff(dxi), one, prec), "cofactor is not monic");
    gate(eq_mod(phi.coeff(0), H, 1), "kernel polynomial constant term is not H mod p");
    for (int n = 1; n < dphi; ++n)
        gate(ring_is_zero_mod(phi.coeff(n), 1), "kernel polynomial is not constant mod p");
    gate(ring_is_zero_mod(phi.coeff(dphi - 1), 2), "kernel x-coordinate sum is not divisible by p");
    XPoly<S> dxi_dx = xi.derivative();
    for (int n = 0; n <= dxi_dx.degree(); ++n)
        gate(ring_is_zero_mod(dxi_dx.coeff(n), 1), "cofactor derivative does not vanish mod p");

    return KernelSplit<S>{std::move(phi), std::move(xi)};
}

// Quotient-curve data.  The model (a4q, a6q) is normalized so that the
// isogeny pulls the quotient's invariant differential back to (p/H) times
// the source differential; with that scaling both coefficients are
// integral of weights 4p and 6p and reduce to a4^p and a6^p mod p.
template <class S>
struct QuotientData {
    KernelSplit<S> split;
    S H;                     // Hasse value of the source model (a unit)
    S Tsum;                  // sum of x over the nontrivial kernel points
    TruncSeries<S> dlog_phi; // D phi(x(t)) / phi(x(t)); pole part -(p-1)/t
    TruncSeries<S> x1, y1;   // trace coordinates (differential pullback omega itself)
    S a4q, a6q;              // quotient model
    S Hq;                    // Hasse value of the quotient model; == H^p mod p
    TruncSeries<S> tq;       // isogeny parameter: lead (p/H) t, == t^p mod p
    TruncSeries<S> uu;       // unit part of tq; uu(0) == 1 and uu == 1 mod p
};

// Builds the quotient data from a curve expansion.  The expansion must
// cover enough of the t-window: out_hi + p + 6 is safe for x.  All
// structural congruences are gated; gates at full strength use prec
// digits, reduction-shape gates use one digit.  The kernel split runs
// with up to twelve extra digits to absorb the downstream divisions by
// p (the log-derivative chain, the model extraction, and the bounded
// denominators that the cubic-residual products mix into the window);
// scalars carrying prec + 12 certified digits get the full margin, and
// anything below prec + 8 is rejected.
template <class S>
QuotientData<S> quotient_curve(const ModulusContext& ctx, const CurveExpansion<S>& c,
                               int prec, int out_hi) {
    const int64_t p = ctx.p();
    const int dphi = int(p - 1) / 2;
    const S one = ring_one(c.a4);

    auto gate = [](bool ok, const char* what) {
        if (!ok) throw consistency_error(std::string("quotient_curve: ") + what);
    };

    QuotientData<S> q;
    q.H = hasse_value(ctx, c.a4, c.a6);
    // the split runs at the full strength the inputs carry, capped at the
    // twelve digits of margin the downstream chain can consume; thinner
    // inputs lower the split strength instead of failing outright, but
    // never below prec + 8, the depth of the shallow reads the model
    // extraction divides out
    auto digits_of = [](const S& v) {
        return ring_known_zero(v) ? ring_abs_prec(v) : ring_abs_prec(v) - ring_vp(v);
    };
    const int strength = std::min(prec + 12, std::min(digits_of(c.a4), digits_of(c.a6)));
    if (strength < prec + 8)
        throw precision_error(
            "quotient_curve: inputs carry too few certified digits for the requested gates");
    q.split = split_division_poly(c.a4, c.a6, q.H, p, strength);

    // Log-derivative of the kernel polynomial along the curve derivation.
    // The kernel polynomial has lead p, so inverting its pull-back costs a
    // certified digit every other slot; slots far past the requested window
    // are precision-dead and must not be computed at all.
    TruncSeries<S> P = q.split.phi.eval_series(c.x);
    if (P.hi() > out_hi) P = P.truncated(out_hi);
    q.dlog_phi = apply_D(P, c) * recip(P);

    // Summing translation by the kernel turns the second log-derivative
    // into p*x minus the trace of x; subtracting the constant kernel
    // contribution leaves the trace coordinate x1, which is even with
    // lead t^-2 and has no constant term.
    q.Tsum = ring_mul_int(ring_mul_p_pow(q.split.phi.coeff(dphi - 1), -1), -2);
    TruncSeries<S> x1 = map_coeffs(c.x, [&](const S& v) { return ring_mul_int(v, p); }) -
                        apply_D(q.dlog_phi, c) -
                        TruncSeries<S>::constant(q.Tsum, kExactHi);
    if (x1.hi() < out_hi)
        throw order_error("quotient_curve: curve expansion window too small for the requested output window");
    x1 = x1.truncated(out_hi);

    gate(x1.lo() == -2, "trace coordinate does not start at t^-2");
    gate(eq_mod(x1.coeff(-2), one, prec), "trace coordinate lead is not 1");
    gate(ring_is_zero_mod(x1.coeff(-1), prec), "trace coordinate has a t^-1 term");
    gate(ring_is_zero_mod(x1.coeff(0), prec), "trace coordinate has a constant term");
    for (int n = -1; n <= x1.hi(); n += 2)
        gate(ring_is_zero_mod(x1.coeff(n), prec), "trace coordinate is not even");

    TruncSeries<S> y1 = ring_div_int(apply_D(x1, c), 2);

    // The quotient satisfies y1^2 = x1^3 + A x1 + B; read A and B off the
    // residual and gate the remaining coefficients as an overdetermined
    // model check.
    TruncSeries<S> R = y1 * y1 - x1 * x1 * x1;
    S A4g = R.coeff(-2);
    S A6g = R.coeff(0);
    TruncSeries<S> res = R - scale_coeffs(x1, A4g) - TruncSeries<S>::constant(A6g, kExactHi);
    for (int n = res.lo(); n <= res.hi(); ++n)
        gate(ring_is_zero_mod(res.coeff(n), prec), "trace coordinates do not satisfy a cubic model");

    // Rescale to the (p/H)-differential model.
    S H2 = q.H * q.H;
    S H4 = H2 * H2;
    q.a4q = ring_mul_p_pow(A4g * H4, -4);
    q.a6q = ring_mul_p_pow(A6g * H4 * H2, -6);
    gate(ring_vp(q.a4q) >= 0, "quotient a4 is not integral");
    gate(ring_vp(q.a6q) >= 0, "quotient a6 is not integral");
    if (ring_abs_prec(q.a4q) < prec || ring_abs_prec(q.a6q) < prec)
        throw precision_error("quotient_curve: model coefficients under-certified; raise the working precision");
    S a4p = one, a6p = one;
    for (int64_t i = 0; i < p; ++i) {
        a4p = a4p * c.a4;
        a6p = a6p * c.a6;
    }
    gate(eq_mod(q.a4q, a4p, 1), "quotient a4 does not reduce to a4^p");
    gate(eq_mod(q.a6q, a6p, 1), "quotient a6 does not reduce to a6^p");

    q.Hq = hasse_value(ctx, q.a4q, q.a6q);
    S Hp = one;
    for (int64_t i = 0; i < p; ++i) Hp = Hp * q.H;
    gate(ring_vp(q.Hq) == 0, "quotient fibre is not ordinary");
    gate(eq_mod(q.Hq, Hp, 1), "quotient Hasse value does not reduce to H^p");

    // Isogeny parameter tq = -(p/H) x1/y1: integral, lead (p/H) t, and
    // Frobenius-shaped mod p.
    S pOverH = ring_mul_p_pow(ring_inv(q.H), 1);
    TruncSeries<S> tq = scale_coeffs(x1 * recip(y1), -pOverH);
    if (tq.hi() < out_hi)
        throw order_error("quotient_curve: parameter window fell short of the requested output window");
    q.tq = tq.truncated(out_hi);
    gate(q.tq.lo() == 1, "isogeny parameter does not vanish to first order");
    gate(eq_mod(q.tq.coeff(1), pOverH, prec), "isogeny parameter lead is not p/H");
    for (int n = 1; n <= q.tq.hi(); ++n)
        gate(ring_vp(q.tq.coeff(n)) >= 0, "isogeny parameter is not integral");
    gate(eq_mod_window(q.tq, TruncSeries<S>::t_power(one, int(p), out_hi), 1),
         "isogeny parameter is not t^p mod p");

    // Unit part of the parameter.  Clip the shifted pull-back the same way
    // before inverting: its lead is p as well.
    q.uu = scale_coeffs(q.tq * recip(P.shifted(int(p)).truncated(out_hi + 1)), q.H);
    gate(q.uu.lo() == 0, "parameter unit part does not start at t^0");
    gate(eq_mod(q.uu.coeff(0), one, prec), "parameter unit part is not 1 at t^0");
    for (int n = 0; n <= q.uu.hi(); ++n)
        gate(ring_vp(q.uu.coeff(n)) >= 0, "parameter unit part is not integral");
    gate(eq_mod_window(q.uu, TruncSeries<S>::constant(one, q.uu.hi()), 1),
         "parameter unit part is not 1 mod p");

    q.x1 = std::move(x1);
    q.y1 = std::move(y1);
    return q;
}

} // namespace padsig
