#pragma once

// Property suite over the pipeline outputs.  Each check re-derives one
// identity the construction must satisfy and returns a report instead of
// asserting: pass carries the modulus and window the identity was verified
// at, fail carries the first offending slot.  Construction failures inside a
// check (window shortfalls, precision exhaustion) are also turned into fail
// reports, so a suite run always produces one report per requested check.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "padsig/eisenstein.hpp"
#include "padsig/errors.hpp"
#include "padsig/exact_poly.hpp"
#include "padsig/quotient.hpp"
#include "padsig/sigma_zeta.hpp"
#include "padsig/univ_scalar.hpp"
#include "padsig/weierstrass.hpp"

namespace padsig {

struct CheckReport {
    std::string id;
    std::string status;     // pass | fail | skipped
    std::string certified;  // modulus and window the identity held at
    std::string witness;    // first failing slot (fail only)
    bool ok() const { return status != "fail"; }
};

namespace vdetail {

template <class Fn>
CheckReport guarded(const char* id, Fn&& fn) {
    try {
        return fn();
    } catch (const error& ex) {
        return CheckReport{id, "fail", "", ex.what()};
    }
}

inline std::string modulus_str(int64_t p, int e, const std::string& window) {
    std::string s = std::to_string(p) + "^" + std::to_string(e);
    if (!window.empty()) s += ", " + window;
    return s;
}

// First slot of f that is not divisible by p^k, scanning the stored window.
// Under-certified slots count as failures: the identity cannot be claimed.
template <class S>
bool first_bad_slot(const TruncSeries<S>& f, int k, const char* var, std::string& w) {
    for (int n = f.lo(); n <= f.stored_top(); ++n) {
        const S v = f.coeff(n);
        bool z = false;
        try {
            z = ring_is_zero_mod(v, k);
        } catch (const precision_error& ex) {
            w = std::string(var) + "^" + std::to_string(n) + ": " + ex.what();
            return true;
        }
        if (!z) {
            w = std::string(var) + "^" + std::to_string(n) + " = " + ring_str(v);
            return true;
        }
    }
    return false;
}

// Scan a bivariate window up to the stated total degree.  Slots past the cap
// are allowed to be precision-dead; slots under it must be certified zeros.
// The window itself must cover the cap, otherwise the claim is vacuous.
template <class S>
bool first_bad_nested(const TruncSeries<TruncSeries<S>>& f, int k, int cap, std::string& w) {
    if (f.hi() < cap) {
        w = "outer window tops out at t2^" + std::to_string(f.hi()) + ", claim needs " +
            std::to_string(cap);
        return true;
    }
    for (int j = f.lo(); j <= f.stored_top() && j <= cap; ++j) {
        const TruncSeries<S> col = f.coeff(j);
        if (col.hi() < cap - j && col.hi() != kExactHi) {
            w = "inner window at t2^" + std::to_string(j) + " tops out at t1^" +
                std::to_string(col.hi());
            return true;
        }
        for (int i = col.lo(); i <= col.stored_top() && i + j <= cap; ++i) {
            const S v = col.coeff(i);
            bool z = false;
            try {
                z = ring_is_zero_mod(v, k);
            } catch (const precision_error& ex) {
                w = "t1^" + std::to_string(i) + " t2^" + std::to_string(j) + ": " + ex.what();
                return true;
            }
            if (!z) {
                w = "t1^" + std::to_string(i) + " t2^" + std::to_string(j) + " = " + ring_str(v);
                return true;
            }
        }
    }
    return false;
}

inline int vp_int(int64_t m, int64_t p) {
    int v = 0;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return v;
}

} // namespace vdetail

// D(D sigma / sigma) + x - beta vanishes: the defining differential equation.
template <class S>
CheckReport check_ode(const ModulusContext& ctx, const CurveExpansion<S>& c,
                      const TruncSeries<S>& sigma, const S& beta, int e) {
    return vdetail::guarded("ode", [&]() -> CheckReport {
        TruncSeries<S> dls = apply_D(sigma, c) * recip(sigma);
        const int top = std::min(c.x.hi(), dls.hi() - 1);
        TruncSeries<S> lhs = apply_D(dls, c).truncated(top) + c.x.truncated(top) -
                             TruncSeries<S>::constant(beta, kExactHi);
        std::string w;
        if (vdetail::first_bad_slot(lhs, e, "t", w)) return {"ode", "fail", "", w};
        return {"ode", "pass",
                vdetail::modulus_str(ctx.p(), e, "t^" + std::to_string(top)), ""};
    });
}

// Quadratic identity in cross-multiplied polynomial form:
//   sigma(F(t1,t2)) sigma(F(t1,-t2)) t1^2 t2^2
//     = (x(t2) - x(t1)) t1^2 t2^2 sigma(t1)^2 sigma(t2)^2.
template <class S>
CheckReport check_quadratic(const ModulusContext& ctx, const CurveExpansion<S>& c,
                            const TruncSeries<S>& sigma, int e, int mtot) {
    return vdetail::guarded("quadratic", [&]() -> CheckReport {
        using Inner = TruncSeries<S>;
        using Nested = TruncSeries<Inner>;
        // inner margin: the sigma squares eat two degrees per factor off the
        // t1 windows before the total-degree cap is applied
        const int M1 = mtot + 4, M2 = mtot;
        if (sigma.hi() < M1)
            throw order_error("check_quadratic: sigma window is below total degree + 4");
        Nested F = formal_group_law(c, M1, M2);
        Nested sF = eval_along_diagonal(sigma, F, e);
        Nested sFm = eval_along_diagonal(sigma, negate_outer(F), e);
        Inner t1sq = Inner::t_power(c.a4, 2, kExactHi);
        Nested lhs = scale_coeffs((sF * sFm).truncated(M2), t1sq).shifted(2);

        Nested x2 = embed_outer(c.x.truncated(M2), M1);
        Nested x1 = embed_inner(c.x.truncated(M1), M2);
        Nested s1 = embed_inner(sigma.truncated(M1), M2);
        Nested s2 = embed_outer(sigma.truncated(M2), M1);
        Nested rhs = scale_coeffs((x2 - x1).shifted(2), t1sq);
        rhs = (((rhs * s1).truncated(M2) * s1).truncated(M2) * s2).truncated(M2) * s2;
        Nested diff = lhs.truncated(M2) - rhs.truncated(M2);
        std::string w;
        if (vdetail::first_bad_nested(diff, e, mtot, w)) return {"quadratic", "fail", "", w};
        return {"quadratic", "pass",
                vdetail::modulus_str(ctx.p(), e, "total degree " + std::to_string(mtot)), ""};
    });
}

// Second-log-derivative translation identity,
//   D1(D1 h) h - (D1 h)^2 = (2 x(t1) - x(F) - x(F-)) h^2,  h = x(t1) - x(t2),
// verified in the form multiplied through by t2^4, which clears the outer
// pole of h and keeps every factor's window intact.
template <class S>
CheckReport check_lemma9(const ModulusContext& ctx, const CurveExpansion<S>& c, int e, int mtot) {
    return vdetail::guarded("lemma9", [&]() -> CheckReport {
        using Inner = TruncSeries<S>;
        using Nested = TruncSeries<Inner>;
        const int M1 = mtot + 6, M2 = mtot + 4;
        Nested F = formal_group_law(c, M1, M2);
        Nested x1 = embed_inner(c.x.truncated(M1), M2);
        Nested x2 = embed_outer(c.x.truncated(M2), M1);
        Nested h = x1 - x2;
        Nested hp = h.shifted(2); // t2^2 h, entire in t2
        Nested d1h = embed_inner(apply_D(c.x, c).truncated(M1), M2);
        Nested d2h = embed_inner(apply_D(apply_D(c.x, c), c).truncated(M1), M2);
        Nested lhs = (d2h * hp).truncated(M2).shifted(2) -
                     (d1h * d1h).truncated(M2).shifted(4);
        Nested xF = eval_along_diagonal(c.x, F, e);
        Nested xFm = eval_along_diagonal(c.x, negate_outer(F), e);
        Nested rhs = ring_mul_int(x1, 2) - xF - xFm;
        rhs = ((rhs * hp).truncated(M2 + 2) * hp).truncated(M2 + 2);
        Nested diff = lhs.truncated(mtot) - rhs.truncated(mtot);
        std::string w;
        if (vdetail::first_bad_nested(diff, e, mtot, w)) return {"lemma9", "fail", "", w};
        return {"lemma9", "pass",
                vdetail::modulus_str(ctx.p(), e,
                                     "total degree " + std::to_string(mtot) + ", cleared by t2^4"),
                ""};
    });
}

// Quotient congruence bundle: Frobenius-shaped reductions of the isogenous
// model, the parameter's exact lead and mod-p shape, the unit part, the
// constant obstruction eta, and the zeta transfer identity.
template <class S>
CheckReport check_prop8(const ModulusContext& ctx, const CurveExpansion<S>& c,
                        const QuotientData<S>& Q, const S& beta, const S& beta_q,
                        const TruncSeries<S>& zeta, const TruncSeries<S>& zeta_q, int e, int win) {
    return vdetail::guarded("prop8", [&]() -> CheckReport {
        const int64_t p = ctx.p();
        const S one = ring_one(c.a4);
        auto part_fail = [](const char* part, const std::string& w) -> CheckReport {
            return {"prop8", "fail", "", std::string(part) + ": " + w};
        };

        // p-th power reductions
        S a4p = one, a6p = one, Hp = one;
        for (int64_t i = 0; i < p; ++i) {
            a4p = a4p * c.a4;
            a6p = a6p * c.a6;
            Hp = Hp * Q.H;
        }
        if (!eq_mod(Q.a4q, a4p, 1)) return part_fail("a4 image", ring_str(Q.a4q));
        if (!eq_mod(Q.a6q, a6p, 1)) return part_fail("a6 image", ring_str(Q.a6q));
        if (!eq_mod(Q.Hq, Hp, 1)) return part_fail("Hasse image", ring_str(Q.Hq));

        // parameter: exact lead p/H at working precision, t^p shape mod p
        S pOverH = ring_mul_p_pow(ring_inv(Q.H), 1);
        if (!eq_mod(Q.tq.coeff(1), pOverH, e))
            return part_fail("parameter lead", ring_str(Q.tq.coeff(1)));
        {
            TruncSeries<S> d = Q.tq - TruncSeries<S>::t_power(one, int(p), Q.tq.hi());
            std::string w;
            if (vdetail::first_bad_slot(d, 1, "t", w)) return part_fail("parameter shape", w);
        }
        {
            TruncSeries<S> d = Q.uu - TruncSeries<S>::constant(one, Q.uu.hi());
            std::string w;
            if (vdetail::first_bad_slot(d, 1, "t", w)) return part_fail("unit part", w);
        }

        // constant obstruction from both curves
        S HoverP = ring_mul_p_pow(Q.H, -1);
        S eta = pOverH * beta_q + HoverP * (Q.Tsum - ring_mul_p_pow(beta, 1));
        if (!ring_is_zero_mod(eta, e - 1 > 0 ? e - 1 : 1))
            return part_fail("eta", ring_str(eta));

        // zeta transfer through the parameter
        {
            TruncSeries<S> rtq = recip(Q.tq);
            TruncSeries<S> zq_tail =
                zeta_q - TruncSeries<S>::monomial(one, -1, kExactHi);
            TruncSeries<S> lhs = compose(zq_tail, Q.tq) + rtq;
            TruncSeries<S> rhs = scale_coeffs(zeta, Q.H) + scale_coeffs(Q.dlog_phi, HoverP);
            const int top = std::min(std::min(lhs.hi(), rhs.hi()), win);
            TruncSeries<S> d = lhs.truncated(top) - rhs.truncated(top);
            std::string w;
            if (vdetail::first_bad_slot(d, e, "t", w)) return part_fail("zeta transfer", w);
        }
        return {"prop8", "pass",
                vdetail::modulus_str(p, e, "t^" + std::to_string(win) + "; eta at " +
                                                std::to_string(p) + "^" + std::to_string(e - 1)),
                ""};
    });
}

// Functional equation of the sigma-log: g(t) - (1/p) g'(t') = log(u)/p, with
// every coefficient p-integral.
template <class S>
CheckReport check_fel(const ModulusContext& ctx, const QuotientData<S>& Q,
                      const TruncSeries<S>& g, const TruncSeries<S>& g_q, int e, int win) {
    return vdetail::guarded("fel", [&]() -> CheckReport {
        const int64_t p = ctx.p();
        TruncSeries<S> lhs =
            g - map_coeffs(compose(g_q, Q.tq), [](const S& v) { return ring_mul_p_pow(v, -1); });
        TruncSeries<S> log_u = integrate(derivative(Q.uu) * recip(Q.uu));
        TruncSeries<S> rhs = map_coeffs(log_u, [](const S& v) { return ring_mul_p_pow(v, -1); });
        const int top = std::min(std::min(lhs.hi(), rhs.hi()), win);
        for (int n = lhs.lo(); n <= std::min(lhs.stored_top(), top); ++n) {
            const S v = lhs.coeff(n);
            if (!ring_known_zero(v) && ring_vp(v) < 0)
                return {"fel", "fail", "",
                        "t^" + std::to_string(n) + " not p-integral: " + ring_str(v)};
        }
        TruncSeries<S> d = lhs.truncated(top) - rhs.truncated(top);
        std::string w;
        if (vdetail::first_bad_slot(d, e, "t", w)) return {"fel", "fail", "", w};
        return {"fel", "pass", vdetail::modulus_str(p, e, "t^" + std::to_string(top)), ""};
    });
}

// Two independent routes to beta agree level by level: the coefficient
// ladder against the odd pole-only functions' -J/H ratio.
template <class S>
CheckReport check_beta_paths(const ModulusContext& ctx, const CurveExpansion<S>& c, int levels) {
    return vdetail::guarded("beta", [&]() -> CheckReport {
        const int64_t p = ctx.p();
        int64_t pn = 1;
        for (int n = 1; n <= levels; ++n) {
            pn *= p;
            BetaData<S> direct = extract_beta(c, p, n);
            ZnResult<S> zn = construct_zn(c, int(pn), 2);
            S via_zn = zn.Jn * ring_inv(zn.Hn);
            if (!eq_mod(direct.beta, via_zn, n))
                return {"beta", "fail", "",
                        "level " + std::to_string(n) + ": ladder " + ring_str(direct.beta) +
                            " vs pole basis " + ring_str(via_zn)};
        }
        return {"beta", "pass",
                vdetail::modulus_str(p, levels, "levels 1.." + std::to_string(levels)), ""};
    });
}

// Integrality ladder: the m-th antiderivative numerator gains the valuation
// the division by m spends, slot by slot.
template <class S>
CheckReport check_ladder(const ModulusContext& ctx, const CurveExpansion<S>& c, const S& beta,
                         int e) {
    return vdetail::guarded("ladder", [&]() -> CheckReport {
        const int64_t p = ctx.p();
        int64_t deg = 1;
        for (int i = 0; i < e; ++i) deg *= p;
        if (c.x.hi() < deg - 2)
            throw order_error("check_ladder: expansion window is below p^e - 2");
        TruncSeries<S> xW = ring_div_int(derivative(c.x).shifted(1), -2);
        TruncSeries<S> G = scale_coeffs(c.W.truncated(int(deg)), beta) - xW.truncated(int(deg));
        for (int64_t m = 1; m < deg; ++m) {
            const int need = vdetail::vp_int(m, p);
            if (need == 0) continue;
            const S v = G.coeff(int(m - 1));
            bool z = false;
            try {
                z = ring_is_zero_mod(v, need);
            } catch (const precision_error& ex) {
                return {"ladder", "fail", "", "m = " + std::to_string(m) + ": " + ex.what()};
            }
            if (!z)
                return {"ladder", "fail", "",
                        "m = " + std::to_string(m) + ": numerator " + ring_str(v) +
                            " has valuation below " + std::to_string(need)};
        }
        return {"ladder", "pass",
                vdetail::modulus_str(p, e, "m <= " + std::to_string(deg - 1)), ""};
    });
}

// Universal coefficients specialize to the directly computed series, and
// carry the weight the grading forces.  Both runs size the beta level so the
// chain still certifies sigma mod p^n at degree M.
inline CheckReport check_specialization(const ModulusContext& ctx, int64_t a4v, int64_t a6v, int n,
                                        int M) {
    return vdetail::guarded("commute", [&]() -> CheckReport {
        const int64_t p = ctx.p();
        const int N = n + sigma_chain_loss(p, M + 2);
        int64_t deg = 1;
        for (int i = 0; i < N; ++i) deg *= p;
        const int depth = std::max(M + 6, int(deg) + 2);
        const int wide = sigma_working_rel(p, N, M);

        auto A4 = UnivScalar::A4(&ctx, wide);
        auto A6 = UnivScalar::A6(&ctx, wide);
        auto CU = expand_deep(A4, A6, depth);
        auto su = sigma_certified(CU, p, N, M).sigma;

        auto a4 = PadicScalar::from_int(&ctx, a4v, wide);
        auto a6 = PadicScalar::from_int(&ctx, a6v, wide);
        auto CS = expand_deep(a4, a6, depth);
        auto ss = sigma_certified(CS, p, N, M).sigma;

        for (int m = su.lo(); m <= su.stored_top(); ++m) {
            const UnivScalar u = su.coeff(m);
            if (!u.num().empty() && u.weight() != m - 1)
                return {"commute", "fail", "",
                        "t^" + std::to_string(m) + " has weight " + std::to_string(u.weight()) +
                            ", grading requires " + std::to_string(m - 1)};
            PadicScalar spec = univ_specialize(u, a4, a6);
            if (!eq_mod(spec, ss.coeff(m), n))
                return {"commute", "fail", "",
                        "t^" + std::to_string(m) + ": specialized " + ring_str(spec) +
                            " vs direct " + ring_str(ss.coeff(m))};
        }
        return {"commute", "pass", vdetail::modulus_str(p, n, "t^" + std::to_string(M)), ""};
    });
}

// q-expansion oracle: the graded embedding sends beta to E2/12, the Hasse
// value to a unit, and the prepared factor's weight-2 slot to
// -p^2(1-p)/24 E2*.  The two constructions of E2* must agree exactly.
inline CheckReport check_q_expansions(const ModulusContext& ctx, int n, int qdeg, bool stretch) {
    return vdetail::guarded("qexp", [&]() -> CheckReport {
        const int64_t p = ctx.p();
        const int rel = n + 8;
        int64_t deg = 1;
        for (int i = 0; i < n; ++i) deg *= p;

        auto A4 = UnivScalar::A4(&ctx, rel);
        auto A6 = UnivScalar::A6(&ctx, rel);
        auto C = expand_deep(A4, A6, int(deg) + 2);
        auto bu = extract_beta(C, p, n);

        QEmbedding E = make_q_embedding(&ctx, qdeg, rel);
        // internal consistency of the two E2* constructions
        {
            auto e2 = eisenstein_series(&ctx, 2, qdeg, rel);
            auto via_frob = scale_coeffs(e2 - scale_coeffs(frobenius_q(e2),
                                                           PadicScalar::from_int(&ctx, p, rel)),
                                         PadicScalar::from_ratio(&ctx, 1, 1 - p, rel));
            auto direct = eisenstein_e2_star(&ctx, qdeg, rel);
            std::string w;
            if (vdetail::first_bad_slot(via_frob - direct, rel - 1, "q", w))
                return {"qexp", "fail", "", std::string("E2* constructions disagree: ") + w};
        }

        auto ib = embed_q(E, bu.beta);
        auto target = scale_coeffs(eisenstein_series(&ctx, 2, qdeg, rel),
                                   PadicScalar::from_ratio(&ctx, 1, 12, rel));
        std::string w;
        if (vdetail::first_bad_slot(ib - target, n, "q", w))
            return {"qexp", "fail", "", std::string("i(beta) vs E2/12: ") + w};

        std::string window = "q^" + std::to_string(qdeg);
        if (stretch) {
            // weight-2 slot of the prepared kernel factor, with the p^2
            // content divided out before comparing mod p^n
            auto H = hasse_value(ctx, C.a4, C.a6);
            auto ks = split_division_poly(C.a4, C.a6, H, p, n + 4);
            auto ell = ks.phi.coeff(int((p - 3) / 2));
            auto lhs = map_coeffs(embed_q(E, ell),
                                  [](const PadicScalar& v) { return ring_mul_p_pow(v, -2); });
            auto e2s = scale_coeffs(eisenstein_e2_star(&ctx, qdeg, rel),
                                    PadicScalar::from_ratio(&ctx, -(1 - p), 24, rel));
            std::string w2;
            if (vdetail::first_bad_slot(lhs - e2s, n, "q", w2))
                return {"qexp", "fail", "", std::string("i(ell)/p^2 vs -(1-p)/24 E2*: ") + w2};
            window += " incl. weight-2 slot";
        }
        return {"qexp", "pass", vdetail::modulus_str(p, n, window), ""};
    });
}

// Hasse lifts: the differential unit series carries the frozen Hasse
// polynomial at t^{p-1} exactly over the integers; the division polynomial's
// matching slot reduces to it mod p but differs exactly.
inline CheckReport check_hasse_lifts(const ModulusContext& ctx) {
    return vdetail::guarded("hasse", [&]() -> CheckReport {
        const int64_t p = ctx.p();
        auto A4 = ExactScalar::A4(p);
        auto A6 = ExactScalar::A6(p);
        auto C = expand_formal(A4, A6, int(p) + 5);
        ExactScalar w_lift = C.W.coeff(int(p) - 1);

        ExactScalar H = ExactScalar::from_rat(p, 0);
        for (const auto& m : ctx.hasse_monomials())
            H = H + ExactScalar::monomial(p, m.a, m.b, BigRat(m.c));
        if (!(w_lift - H).coef().empty())
            return {"hasse", "fail", "",
                    "W_{p-1} = " + ring_str(w_lift) + " differs from H = " + ring_str(H)};

        auto T = division_polys(A4, A6, int(p));
        const XPoly<ExactScalar>& psi = T[size_t(p)];
        ExactScalar ell = psi.coeff(int(p * (p - 1) / 2));
        ExactScalar d = ell - H;
        for (const auto& [ab, cv] : d.coef()) {
            if (denominator(cv) != 1 || numerator(cv) % p != 0)
                return {"hasse", "fail", "",
                        "division polynomial slot is not H mod p: A4^" + std::to_string(ab.first) +
                            " A6^" + std::to_string(ab.second) + " coefficient " + cv.str()};
        }
        if (d.coef().empty())
            return {"hasse", "fail", "",
                    "division polynomial slot equals H exactly; the lifts must differ"};
        return {"hasse", "pass",
                "exact (W lift), " + std::to_string(p) + "^1 (division polynomial slot)", ""};
    });
}

// Recomputation with two more working digits and a deeper window reproduces
// every certified coefficient.  The runner is injected so the same check
// exercises whatever pipeline the caller assembled; it receives (extra
// working digits, M) and must return the certified sigma.
inline CheckReport check_stability(
    const ModulusContext& ctx,
    const std::function<TruncSeries<PadicScalar>(int, int)>& certified_run, int e_target, int M) {
    return vdetail::guarded("stability", [&]() -> CheckReport {
        TruncSeries<PadicScalar> s1 = certified_run(0, M);
        TruncSeries<PadicScalar> s2 = certified_run(2, M + 10);
        for (int m = s1.lo(); m <= s1.stored_top(); ++m) {
            const PadicScalar a = s1.coeff(m);
            const PadicScalar b = s2.coeff(m);
            const int cert = ring_abs_prec(a);
            if (cert < e_target)
                return {"stability", "fail", "",
                        "t^" + std::to_string(m) + " certified only to " +
                            std::to_string(ctx.p()) + "^" + std::to_string(cert) +
                            ", target needs " + std::to_string(e_target)};
            if (!eq_mod(a, b, cert))
                return {"stability", "fail", "",
                        "t^" + std::to_string(m) + ": " + ring_str(a) + " vs recomputed " +
                            ring_str(b)};
        }
        return {"stability", "pass",
                vdetail::modulus_str(ctx.p(), e_target,
                                     "t^" + std::to_string(M) + " against e_work+2, M+10"),
                ""};
    });
}

} // namespace padsig
