#pragma once

// Classical Eisenstein q-expansions over the p-adic scalars, and the graded
// embedding of the universal coefficient ring that sends the curve
// coefficients to (-E4/48, E6/864).  Under that embedding the Hasse value
// becomes a unit q-series, so values with Hasse-power denominators embed too.
// This gives an independent modular-forms oracle for identities produced by
// the isogeny ladder.

#include <cstdint>
#include <string>

#include "padsig/context.hpp"
#include "padsig/errors.hpp"
#include "padsig/padic_scalar.hpp"
#include "padsig/series.hpp"
#include "padsig/univ_scalar.hpp"

namespace padsig {

// Sum of d^k over the divisors d of n; divisors divisible by skip are left
// out when skip is nonzero (skip = p gives the p-deprived sums the weight-2
// p-adic Eisenstein series is built from).
inline int64_t divisor_power_sum(int64_t n, int k, int64_t skip = 0) {
    int64_t s = 0;
    for (int64_t d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        if (skip != 0 && d % skip == 0) continue;
        int64_t t = 1;
        for (int i = 0; i < k; ++i) t *= d;
        s += t;
    }
    return s;
}

// Normalized Eisenstein series of weight 2, 4 or 6 as a q-expansion
// truncated at q^qdeg.  Coefficients are exact integers carried at rel
// certified digits.
inline TruncSeries<PadicScalar> eisenstein_series(const ModulusContext* ctx, int weight, int qdeg,
                                                  int rel) {
    int k = 0;
    int64_t scale = 0;
    switch (weight) {
        case 2: k = 1; scale = -24; break;
        case 4: k = 3; scale = 240; break;
        case 6: k = 5; scale = -504; break;
        default:
            throw config_error("eisenstein_series: weight " + std::to_string(weight) +
                               " is not one of 2, 4, 6");
    }
    TruncSeries<PadicScalar> E =
        TruncSeries<PadicScalar>::constant(PadicScalar::from_int(ctx, 1, rel), qdeg);
    for (int64_t n = 1; n <= qdeg; ++n)
        E.set_coeff(int(n), PadicScalar::from_int(ctx, scale * divisor_power_sum(n, k), rel));
    return E;
}

// Weight-2 p-adic Eisenstein series 1 - (24/(1-p)) sum sigma*(n) q^n with
// sigma* the divisor sum skipping multiples of p.  Built directly from the
// divisor sums; it must also equal (E2 - p Frob E2)/(1-p), which callers can
// cross-check with frobenius_q.
inline TruncSeries<PadicScalar> eisenstein_e2_star(const ModulusContext* ctx, int qdeg, int rel) {
    const int64_t p = ctx->p();
    PadicScalar c = PadicScalar::from_ratio(ctx, -24, 1 - p, rel);
    TruncSeries<PadicScalar> E =
        TruncSeries<PadicScalar>::constant(PadicScalar::from_int(ctx, 1, rel), qdeg);
    for (int64_t n = 1; n <= qdeg; ++n)
        E.set_coeff(int(n), ring_mul_int(c, divisor_power_sum(n, 1, p)));
    return E;
}

// Frobenius on q-expansions: f(q) -> f(q^p), truncated to f's window.  Slots
// not hit by a multiple of p are exact zeros.
inline TruncSeries<PadicScalar> frobenius_q(const TruncSeries<PadicScalar>& f) {
    const int64_t p = f.coeff(f.lo()).ctx()->p();
    if (f.lo() != 0)
        throw order_error("frobenius_q: expected a q-expansion starting at q^0");
    TruncSeries<PadicScalar> r = TruncSeries<PadicScalar>::constant(f.coeff(0), f.hi());
    for (int n = 1; int64_t(n) * p <= f.hi(); ++n) r.set_coeff(int(n * p), f.coeff(n));
    return r;
}

namespace detail {

inline TruncSeries<PadicScalar> q_pow(const TruncSeries<PadicScalar>& f, int e, int qdeg) {
    TruncSeries<PadicScalar> r = TruncSeries<PadicScalar>::constant(ring_one(f.coeff(0)), qdeg);
    for (int i = 0; i < e; ++i) r = (r * f).truncated(qdeg);
    return r;
}

} // namespace detail

// The embedding of the graded coefficient ring into q-expansions.
struct QEmbedding {
    const ModulusContext* ctx = nullptr;
    int qdeg = 0;
    int rel = 0;
    TruncSeries<PadicScalar> a4;        // -E4/48
    TruncSeries<PadicScalar> a6;        // E6/864
    TruncSeries<PadicScalar> hasse;     // Hasse polynomial at (a4, a6)
    TruncSeries<PadicScalar> hasse_inv;
};

inline QEmbedding make_q_embedding(const ModulusContext* ctx, int qdeg, int rel) {
    QEmbedding E;
    E.ctx = ctx;
    E.qdeg = qdeg;
    E.rel = rel;
    E.a4 = scale_coeffs(eisenstein_series(ctx, 4, qdeg, rel),
                        PadicScalar::from_ratio(ctx, -1, 48, rel));
    E.a6 = scale_coeffs(eisenstein_series(ctx, 6, qdeg, rel),
                        PadicScalar::from_ratio(ctx, 1, 864, rel));
    TruncSeries<PadicScalar> acc =
        TruncSeries<PadicScalar>::constant(PadicScalar::zero(ctx, rel), qdeg);
    for (const auto& m : ctx->hasse_monomials()) {
        auto term = (detail::q_pow(E.a4, m.a, qdeg) * detail::q_pow(E.a6, m.b, qdeg)).truncated(qdeg);
        acc = acc + scale_coeffs(term, PadicScalar::from_int(ctx, m.c, rel));
    }
    E.hasse = acc;
    if (ring_vp(E.hasse.coeff(0)) != 0)
        throw not_a_unit_error("q-embedding: Hasse image is not a unit q-series");
    E.hasse_inv = recip(E.hasse).truncated(qdeg);
    return E;
}

// Image of a graded scalar: numerator monomials evaluated at the embedded
// generators, then the Hasse and p denominators divided out.  The result is
// certified to the scalar's own absolute precision.
inline TruncSeries<PadicScalar> embed_q(const QEmbedding& E, const UnivScalar& u) {
    TruncSeries<PadicScalar> acc =
        TruncSeries<PadicScalar>::constant(PadicScalar::zero(E.ctx, u.rel_prec()), E.qdeg);
    for (const auto& m : u.num()) {
        auto term =
            (detail::q_pow(E.a4, m.a, E.qdeg) * detail::q_pow(E.a6, m.b, E.qdeg)).truncated(E.qdeg);
        acc = acc + scale_coeffs(term, ring_clamp(PadicScalar::from_int(E.ctx, m.c, u.rel_prec()),
                                                  u.rel_prec()));
    }
    for (int i = 0; i < u.h_den(); ++i) acc = (acc * E.hasse_inv).truncated(E.qdeg);
    if (u.p_den() != 0)
        acc = map_coeffs(acc, [&](const PadicScalar& v) { return ring_mul_p_pow(v, -u.p_den()); });
    return acc;
}

} // namespace padsig
