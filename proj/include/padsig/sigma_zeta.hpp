#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "padsig/errors.hpp"
#include "padsig/series.hpp"
#include "padsig/weierstrass.hpp"

namespace padsig {

// The unique odd function with a single pole of order pn at the origin,
// normalized as t^-pn - Hn/t - Jn t + O(t^3).  Built by greedy cancellation
// over the basis y x^k, whose leading coefficients -1 at t^-(2k+3) are units,
// so the construction never divides.
template <class S>
struct ZnResult {
    TruncSeries<S> z;
    S Hn, Jn;
};

template <class S>
ZnResult<S> construct_zn(const CurveExpansion<S>& c, int pn, int out_hi) {
    if (pn < 3 || pn % 2 == 0)
        throw config_error("construct_zn: pole order must be an odd prime power");
    const int K = (pn - 3) / 2;
    std::vector<TruncSeries<S>> s;
    s.reserve(size_t(K) + 1);
    // powers accumulate at full window: truncating midway would cost two
    // certified degrees per step
    s.push_back(c.y);
    for (int k = 1; k <= K; ++k) s.push_back(s.back() * c.x);
    if (s.back().hi() < out_hi)
        throw order_error("construct_zn: curve expansion window too small for the pole order");
    for (auto& sk : s) sk = sk.truncated(out_hi);
    TruncSeries<S> z = -s[size_t(K)];
    for (int m = pn - 2; m >= 3; m -= 2) {
        S cm = z.coeff(-m);
        // an exactly-cancelled slot contributes nothing; adding it anyway
        // would only water down certificates
        if (!ring_known_zero(cm)) z = z + scale_coeffs(s[size_t((m - 3) / 2)], cm);
    }
    if (!ring_known_zero(z.coeff(-pn) - ring_one(c.a4)))
        throw consistency_error("construct_zn: lead coefficient is not 1");
    for (int n = z.lo(); n <= std::min(z.stored_top(), 0); ++n) {
        if (n == -pn || n == -1) continue;
        if (!ring_known_zero(z.coeff(n)))
            throw consistency_error("construct_zn: uncancelled coefficient at t^" +
                                    std::to_string(n) + " = " + ring_str(z.coeff(n)));
    }
    return {z, -z.coeff(-1), -z.coeff(1)};
}

template <class S>
struct BetaData {
    S beta; // certified modulo p^level
    S HN;   // W coefficient at t^(p^level - 1); a unit exactly over the ordinary locus
    int level;
};

// The t^(p^n) coefficient of zeta is (beta W - x W)_(p^n - 1) / p^n.  Its
// integrality pins beta modulo p^n against the unit W_(p^n - 1), so the
// deepest level read off the expansion certifies beta mod p^level.  Uses
// x W = -(t/2) x'(t), so only the x and W expansions are needed, and checks
// the same identity at every lower level as a ladder consistency gate.
template <class S>
BetaData<S> extract_beta(const CurveExpansion<S>& c, int64_t p, int level) {
    if (level < 1) throw config_error("extract_beta: level must be at least 1");
    int64_t deg = 1;
    for (int i = 0; i < level; ++i) {
        deg *= p;
        if (deg - 1 > c.x.hi())
            throw order_error("extract_beta: expansion window is below p^level - 1");
    }
    auto xw_at = [&](int64_t m) {
        // (x W)_m = -(m/2) x_m
        return ring_mul_int(c.x.coeff(int(m)), -(m / 2));
    };
    S HN = c.W.coeff(int(deg - 1));
    S beta = ring_clamp(xw_at(deg - 1) * ring_inv(HN), level);
    int64_t q = 1;
    for (int n = 1; n < level; ++n) {
        q *= p;
        S r = beta * c.W.coeff(int(q - 1)) - xw_at(q - 1);
        if (!ring_is_zero_mod(r, n))
            throw consistency_error("extract_beta: ladder residual at level " + std::to_string(n) +
                                    " = " + ring_str(r));
    }
    return {beta, HN, level};
}

// zeta = 1/t + beta t + ...: the integral of (beta - x) W dt.  The t^-1
// residue vanishes by parity.  Divisions by the index are precision-tracked;
// a coefficient certified to have negative valuation aborts, since the
// expansion is p-integral over the ordinary locus.
template <class S>
TruncSeries<S> zeta_series(const CurveExpansion<S>& c, const S& beta, int M) {
    if (c.x.hi() < M + 1)
        throw order_error("zeta_series: expansion window is below the target degree");
    TruncSeries<S> xW = ring_div_int(derivative(c.x).shifted(1), -2).truncated(M + 1);
    TruncSeries<S> G = scale_coeffs(c.W.truncated(M + 1), beta) - xW;
    TruncSeries<S> zeta = integrate(G).truncated(M);
    for (int n = zeta.lo(); n <= zeta.stored_top(); ++n) {
        S v = zeta.coeff(n);
        if (!ring_known_zero(v) && ring_vp(v) < 0)
            throw integrality_error("zeta: coefficient at t^" + std::to_string(n) + " = " +
                                    ring_str(v) + " is not p-integral");
    }
    return zeta;
}

template <class S>
struct SigmaResult {
    TruncSeries<S> sigma; // odd, lead t
    TruncSeries<S> g;     // log(sigma/t): even, no constant term
};

// g = log(sigma / t) = integral of (zeta W - 1/t) dt.  The t^-1 slot of the
// integrand must be a known zero for the integral to exist; that slot is what
// pinned beta during the zeta construction.
template <class S>
TruncSeries<S> log_sigma_series(const CurveExpansion<S>& c, const TruncSeries<S>& zeta, int M) {
    TruncSeries<S> zw = (zeta * c.W.truncated(M)).truncated(M - 1) -
                        TruncSeries<S>::t_power(c.a4, -1, kExactHi);
    return integrate(zw).truncated(M);
}

// sigma = t exp(g).
template <class S>
SigmaResult<S> sigma_from_zeta(const CurveExpansion<S>& c, const TruncSeries<S>& zeta, int M) {
    TruncSeries<S> g = log_sigma_series(c, zeta, M);
    TruncSeries<S> sigma = exp_series(g).shifted(1).truncated(M);
    for (int n = sigma.lo(); n <= sigma.stored_top(); ++n) {
        S v = sigma.coeff(n);
        if (!ring_known_zero(v) && ring_vp(v) < 0)
            throw integrality_error("sigma: coefficient at t^" + std::to_string(n) + " = " +
                                    ring_str(v) + " is not p-integral");
    }
    return {sigma, g};
}

// --- certified pipeline ---
//
// Interval tracking through zeta and g is honest and per-slot sharp: the
// divisions there land on nonzero mantissas (shift moves, digits stay) or on
// parity zeros certified far above the target.  The one pessimistic step is
// exp: its recurrence e_n = (sum b_j e_{n-j}) / n spends v_p(n!) along the
// worst chain, while the function itself does not: replacing g by any lift
// g + delta with delta_k ≡ 0 mod p^{a_k} multiplies sigma by exp(delta) =
// 1 + delta + ..., which moves slot 1+j by no more than p^{min_{k<=j} a_k}
// (the square term is negligible once min a_k >= 1 and p >= 5).  So the
// certified run pads g's digit claims just enough to keep the recurrence
// alive, exponentiates, and clamps each sigma slot back to the prefix bound
// read off the unpadded g.

// v_p(m) for m >= 1.
inline int vp_of(int64_t m, int64_t p) {
    int v = 0;
    while (m > 0 && m % p == 0) { m /= p; ++v; }
    return v;
}

// v_p(M!) by Legendre's formula.
inline int vp_factorial(int64_t p, int M) {
    int s = 0;
    for (int64_t q = p; q <= M; q *= p) s += int(M / q);
    return s;
}

// Upper bound on the digits the chain spends on the way to sigma's slot n:
// the integral behind g divides slot k by k, and the worst earlier slot rides
// along through the exp products.  beta mod p^N certifies sigma_n at least
// mod p^{N - sigma_chain_loss(p, n)}; planners size N from this.
inline int sigma_chain_loss(int64_t p, int n) {
    int loss = 0, worst = 0;
    for (int k = 1; k <= n; ++k) {
        int v = vp_of(k, p);
        loss = std::max(loss, v + worst);
        worst = std::max(worst, v);
    }
    return loss;
}

// Relative precision the curve inputs need so the beta-independent slots
// survive the same drains the planner budgeted for the beta-dependent ones.
inline int sigma_working_rel(int64_t p, int level, int M) {
    return level + sigma_chain_loss(p, M + 2) + 4;
}

template <class S>
struct CertifiedSigma {
    S beta; // certified modulo p^level
    int level;
    TruncSeries<S> zeta;  // per-slot certificates as tracked
    TruncSeries<S> g;     // log(sigma/t), per-slot certificates as tracked
    TruncSeries<S> sigma; // clamped to the perturbation bound
};

template <class S>
CertifiedSigma<S> sigma_certified(const CurveExpansion<S>& c, int64_t p, int level, int M) {
    BetaData<S> b = extract_beta(c, p, level);
    TruncSeries<S> zeta = zeta_series(c, b.beta, M + 2);
    TruncSeries<S> g = log_sigma_series(c, zeta, M);
    const int pad = vp_factorial(p, M) + 4;
    TruncSeries<S> gl = map_coeffs(g, [&](const S& v) { return lift_pad(v, pad); });
    TruncSeries<S> sigma = exp_series(gl).shifted(1).truncated(M);
    int bound = kExactHi;
    for (int n = sigma.lo(); n <= sigma.stored_top(); ++n) {
        if (n - 1 >= g.lo() && n - 1 <= g.stored_top())
            bound = std::min(bound, ring_abs_prec(g.coeff(n - 1)));
        if (bound < 1)
            throw precision_error("sigma_certified: no digits left at t^" + std::to_string(n) +
                                  ", raise the beta level");
        sigma.set_coeff(n, ring_clamp(sigma.coeff(n), bound));
        S v = sigma.coeff(n);
        if (!ring_known_zero(v) && ring_vp(v) < 0)
            throw integrality_error("sigma: coefficient at t^" + std::to_string(n) + " = " +
                                    ring_str(v) + " is not p-integral");
    }
    return {b.beta, level, zeta.truncated(M), g, sigma};
}

} // namespace padsig
