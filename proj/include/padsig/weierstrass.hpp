#pragma once

#include <cstdint>
#include <vector>

#include "padsig/context.hpp"
#include "padsig/errors.hpp"
#include "padsig/series.hpp"
#include "padsig/xpoly.hpp"

namespace padsig {

// Hasse invariant lift H(a4, a6) over any scalar ring.
template <class S>
S hasse_value(const ModulusContext& ctx, const S& a4, const S& a6) {
    S acc = ring_zero(a4);
    for (const auto& m : ctx.hasse_monomials()) {
        S term = ring_from_int(a4, m.c);
        for (int i = 0; i < m.a; ++i) term = term * a4;
        for (int i = 0; i < m.b; ++i) term = term * a6;
        acc = acc + term;
    }
    return acc;
}

// Formal expansions of a short Weierstrass curve y^2 = x^3 + a4 x + a6 at the
// origin, in the parameter t = -x/y with w = -1/y:
//   w = t^3 + a4 t w^2 + a6 w^3,  x = t/w,  y = -1/w,  W = x'/(2y).
template <class S>
struct CurveExpansion {
    S a4, a6;
    TruncSeries<S> w; // order 3
    TruncSeries<S> x; // order -2
    TruncSeries<S> y; // order -3
    TruncSeries<S> W; // unit constant term 1; the invariant differential is W dt
    TruncSeries<S> Winv;
};

namespace detail_curve {

// One substitution step of the defining cubic, truncated.
template <class S>
TruncSeries<S> cubic_rhs(const S& a4, const S& a6, const TruncSeries<S>& w, int hi) {
    TruncSeries<S> t3 = TruncSeries<S>::t_power(a4, 3, hi);
    TruncSeries<S> w2 = (w * w).truncated(hi);
    TruncSeries<S> w3 = (w2 * w).truncated(hi);
    return (t3 + scale_coeffs(w2, a4).shifted(1).truncated(hi) + scale_coeffs(w3, a6)).truncated(hi);
}

template <class S>
void verify_cubic(const S& a4, const S& a6, const TruncSeries<S>& w) {
    TruncSeries<S> res = w - cubic_rhs(a4, a6, w, w.hi());
    for (int n = res.lo(); n <= res.stored_top(); ++n)
        if (!ring_known_zero(res.coeff(n)))
            throw consistency_error("curve expansion: cubic residual at t^" + std::to_string(n) +
                                    " = " + ring_str(res.coeff(n)));
}

template <class S>
CurveExpansion<S> finish_expansion(const S& a4, const S& a6, const TruncSeries<S>& w) {
    verify_cubic(a4, a6, w);
    TruncSeries<S> x = recip(w).shifted(1);
    TruncSeries<S> y = -recip(w);
    TruncSeries<S> W = ring_div_int(-(derivative(x) * w), 2);
    TruncSeries<S> Winv = recip(W);
    // structural check: the curve equation holds for the expansions
    TruncSeries<S> eq = y * y - ((x * x * x) + scale_coeffs(x, a4) +
                                 TruncSeries<S>::constant(a6, kExactHi));
    for (int n = eq.lo(); n <= eq.stored_top(); ++n)
        if (!ring_known_zero(eq.coeff(n)))
            throw consistency_error("curve expansion: y^2 - f(x) residual at t^" +
                                    std::to_string(n));
    return {a4, a6, w, x, y, W, Winv};
}

} // namespace detail_curve

// Fixed-point expansion: a pinned number of substitution rounds, each gaining
// at least four t-degrees, then an identity check on the result.  x, y, W are
// certified at least through t^M.
template <class S>
CurveExpansion<S> expand_formal(const S& a4, const S& a6, int M) {
    const int w_hi = M + 6;
    TruncSeries<S> w = TruncSeries<S>::t_power(a4, 3, w_hi);
    const int rounds = (w_hi - 6) / 4 + 2;
    for (int k = 0; k < rounds; ++k) w = detail_curve::cubic_rhs(a4, a6, w, w_hi);
    return detail_curve::finish_expansion(a4, a6, w);
}

// Newton expansion for large degree budgets (the substitution iteration gains
// only four degrees per full-length pass; Newton doubles).
template <class S>
CurveExpansion<S> expand_deep(const S& a4, const S& a6, int target_hi) {
    const int w_hi = target_hi + 6;
    // seed correct through t^10
    TruncSeries<S> w = TruncSeries<S>::t_power(a4, 3, std::min(10, w_hi));
    if (w_hi >= 7) w.set_coeff(7, a4);
    if (w_hi >= 9) w.set_coeff(9, a6);
    int good = std::min(10, w_hi);
    while (good < w_hi) {
        // an iterate correct through t^g is correct through t^{2g+2} after one
        // Newton step; 2g is a safe pin and the final identity check gates it
        const int next = std::min(int(std::min(int64_t(good) * 2, int64_t(kExactHi))), w_hi);
        TruncSeries<S> wt = w.truncated(good);
        // widen the window: the iterate is exactly the polynomial built so far
        TruncSeries<S> cur(a4, 3, next);
        for (int n = wt.lo(); n <= wt.stored_top(); ++n) cur.set_coeff(n, wt.coeff(n));
        TruncSeries<S> Cw = cur - detail_curve::cubic_rhs(a4, a6, cur, next);
        TruncSeries<S> Cp = TruncSeries<S>::constant(ring_one(a4), next) -
                            ring_mul_int(scale_coeffs(cur, a4).shifted(1), 2) -
                            ring_mul_int(scale_coeffs((cur * cur).truncated(next), a6), 3);
        w = (cur - Cw * recip(Cp)).truncated(next);
        good = next;
    }
    return detail_curve::finish_expansion(a4, a6, w);
}

// The derivation D = (1/W) d/dt dual to the invariant differential.
template <class S>
TruncSeries<S> apply_D(const TruncSeries<S>& h, const CurveExpansion<S>& c) {
    return derivative(h) * c.Winv;
}

// Division polynomials through index n, in the normalized integer form:
// psi_k = T_k for odd k and psi_k = y T_k for even k.
template <class S>
std::vector<XPoly<S>> division_polys(const S& a4, const S& a6, int n) {
    using XP = XPoly<S>;
    const S one = ring_one(a4), zero = ring_zero(a4);
    XP f(a4, {a6, a4, zero, one}); // X^3 + a4 X + a6
    std::vector<XP> T;
    T.push_back(XP(a4));                      // T_0 = 0
    T.push_back(XP::constant(one));           // T_1
    T.push_back(XP::constant(ring_from_int(a4, 2))); // T_2
    // T_3 = 3X^4 + 6 a4 X^2 + 12 a6 X - a4^2
    T.push_back(XP(a4, {-(a4 * a4), ring_mul_int(a6, 12), ring_mul_int(a4, 6), zero,
                        ring_from_int(a4, 3)}));
    // T_4 = 4(X^6 + 5 a4 X^4 + 20 a6 X^3 - 5 a4^2 X^2 - 4 a4 a6 X - 8 a6^2 - a4^3)
    T.push_back(XP(a4, {-(ring_mul_int(a6 * a6, 8) + a4 * a4 * a4), -ring_mul_int(a4 * a6, 4),
                        -ring_mul_int(a4 * a4, 5), ring_mul_int(a6, 20), ring_mul_int(a4, 5),
                        zero, one})
                    .mul_int(4));
    XP f2 = f * f;
    for (int k = 5; k <= n; ++k) {
        if (k % 2) {
            const int m = (k - 1) / 2;
            if (m % 2 == 0)
                T.push_back(f2 * T[size_t(m + 2)] * T[size_t(m)] * T[size_t(m)] * T[size_t(m)] -
                            T[size_t(m - 1)] * T[size_t(m + 1)] * T[size_t(m + 1)] * T[size_t(m + 1)]);
            else
                T.push_back(T[size_t(m + 2)] * T[size_t(m)] * T[size_t(m)] * T[size_t(m)] -
                            f2 * T[size_t(m - 1)] * T[size_t(m + 1)] * T[size_t(m + 1)] * T[size_t(m + 1)]);
        } else {
            const int m = k / 2;
            T.push_back((T[size_t(m)] * (T[size_t(m + 2)] * T[size_t(m - 1)] * T[size_t(m - 1)] -
                                         T[size_t(m - 2)] * T[size_t(m + 1)] * T[size_t(m + 1)]))
                            .div_int(2));
        }
    }
    T.resize(size_t(n) + 1);
    return T;
}

// Formal group law F(t1, t2) built from the chord construction, as a series in
// the second argument whose coefficients are Laurent-free series in the first.
// Window: inner degree M1, outer degree M2.  Requires the w-expansion through
// t^{M1+M2+1}.
template <class S>
TruncSeries<TruncSeries<S>> formal_group_law(const CurveExpansion<S>& c, int M1, int M2) {
    using Inner = TruncSeries<S>;
    using Nested = TruncSeries<Inner>;
    if (c.w.hi() < M1 + M2 + 1)
        throw order_error("formal_group_law: w-expansion window too small");
    const S& a4 = c.a4;
    const S& a6 = c.a6;
    Inner inner_zero(a4, 0, M1);

    // lambda_{i,j} = w_{i+j+1}
    Nested lam(inner_zero, 0, M2);
    for (int j = 0; j <= M2; ++j) {
        Inner col(a4, 0, M1);
        for (int i = 0; i <= M1; ++i)
            if (i + j + 1 >= 3) col.set_coeff(i, c.w.coeff(i + j + 1));
        lam.set_coeff(j, col);
    }
    // nu = w(t1) - lambda * t1
    Nested w1 = Nested::constant(c.w.truncated(M1), M2);
    Inner t1 = Inner::t_power(a4, 1, kExactHi);
    Nested nu = w1 - scale_coeffs(lam, t1);

    Nested lam2 = (lam * lam).truncated(M2);
    Nested lam3 = (lam2 * lam).truncated(M2);
    Nested c3 = ring_one(lam) + map_coeffs(lam2, [&](const Inner& v) { return scale_coeffs(v, a4); }) +
                map_coeffs(lam3, [&](const Inner& v) { return scale_coeffs(v, a6); });
    Nested lam_nu = (lam * nu).truncated(M2);
    Nested c2 = map_coeffs(lam_nu, [&](const Inner& v) { return ring_mul_int(scale_coeffs(v, a4), 2); }) +
                map_coeffs((lam2 * nu).truncated(M2),
                           [&](const Inner& v) { return ring_mul_int(scale_coeffs(v, a6), 3); });
    // t1 + t2 - (sum of the three chord roots is -c2/c3, and inversion negates)
    Nested F = Nested::constant(Inner::t_power(a4, 1, M1), M2);
    F.set_coeff(1, Inner::constant(ring_one(a4), M1));
    return F + (c2 * recip(c3)).truncated(M2);
}

// Substitute t2 -> -t2 in a nested series (outer variable t2).
template <class S>
TruncSeries<TruncSeries<S>> negate_outer(const TruncSeries<TruncSeries<S>>& f) {
    auto r = f;
    for (int n = f.lo(); n <= f.stored_top(); ++n)
        if (n % 2) r.set_coeff(n, -f.coeff(n));
    return r;
}

// Lift s(t) to a nested series in the outer variable (constant inner coeffs).
template <class S>
TruncSeries<TruncSeries<S>> embed_outer(const TruncSeries<S>& s, int inner_hi) {
    using Inner = TruncSeries<S>;
    TruncSeries<Inner> r(Inner(s.proto(), 0, inner_hi), s.lo(), s.hi());
    for (int n = s.lo(); n <= s.stored_top(); ++n)
        r.set_coeff(n, Inner::constant(s.coeff(n), kExactHi));
    return r;
}

// Lift s(t) to a nested constant in the inner variable.
template <class S>
TruncSeries<TruncSeries<S>> embed_inner(const TruncSeries<S>& s, int outer_hi) {
    return TruncSeries<TruncSeries<S>>::constant(s, outer_hi);
}

// Evaluate a univariate (Laurent) series f at a nested argument G whose outer
// constant term is exactly the inner coordinate: G = t1 + (positive outer
// order).  Taylor expansion around the diagonal; the divided derivatives keep
// every step integral.  min_cert gates how certified the diagonal cancellation
// must be.
template <class S>
TruncSeries<TruncSeries<S>> eval_along_diagonal(const TruncSeries<S>& f,
                                                const TruncSeries<TruncSeries<S>>& G,
                                                int min_cert = 0) {
    using Inner = TruncSeries<S>;
    using Nested = TruncSeries<Inner>;
    const S& proto = f.proto();
    const int M2 = G.hi();
    Inner g0 = G.coeff(0);
    const int M1 = g0.hi();
    Nested D = G - Nested::constant(Inner::t_power(proto, 1, kExactHi).truncated(M1), M2);
    // outer constant term must cancel: G(t1, 0) = t1
    Inner d0 = D.coeff(0);
    for (int n = d0.lo(); n <= d0.stored_top(); ++n) {
        if (!ring_known_zero(d0.coeff(n)))
            throw consistency_error("eval_along_diagonal: argument is not anchored on the diagonal");
        if (min_cert > 0 && ring_abs_prec(d0.coeff(n)) < min_cert)
            throw precision_error("eval_along_diagonal: diagonal cancellation under-certified");
    }
    D = D.rebased(1);
    Nested acc(Inner(proto, 0, M1), 0, M2);
    Nested P = ring_one(acc);
    for (int k = 0; k <= M2; ++k) {
        acc = acc + scale_coeffs(P, divided_derivative(f, k).truncated(M1));
        if (k < M2) P = (P * D).truncated(M2);
    }
    return acc;
}

} // namespace padsig
