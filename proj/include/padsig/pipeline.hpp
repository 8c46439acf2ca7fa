#pragma once

// Job-level driver shared by the command line tool and the acceptance
// runner.  A job names a prime, a curve (or the universal one), a digit
// target e_target and a t-window M.  The planner sizes everything else:
// the beta certificate level, the working relative precision, and the
// expansion depth.  Every certified run gets one automatic retry with
// four extra working digits before a precision failure is surfaced.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "padsig/errors.hpp"
#include "padsig/quotient.hpp"
#include "padsig/sigma_zeta.hpp"
#include "padsig/univ_scalar.hpp"
#include "padsig/verifier.hpp"
#include "padsig/weierstrass.hpp"

namespace padsig {

struct JobConfig {
    int64_t p = 5;
    bool universal = false;
    int64_t a4_num = 0, a4_den = 1;
    int64_t a6_num = 0, a6_den = 1;
    int e_target = 2;
    int M = 20;
    int qdeg = 8;
    int iterate = 1;
    std::vector<std::string> checks; // empty = every check that applies
};

inline bool is_prime_int(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline void validate(const JobConfig& cfg) {
    if (cfg.p < 5 || !is_prime_int(cfg.p))
        throw config_error("p must be a prime >= 5, got " + std::to_string(cfg.p));
    if (cfg.e_target < 1)
        throw config_error("digit target must be >= 1, got " + std::to_string(cfg.e_target));
    if (cfg.M < 8) throw config_error("t-window must be >= 8, got " + std::to_string(cfg.M));
    if (cfg.a4_den == 0 || cfg.a6_den == 0) throw config_error("coefficient denominator is zero");
    if (!cfg.universal && (cfg.a4_den % cfg.p == 0 || cfg.a6_den % cfg.p == 0))
        throw config_error("coefficient denominators must be units at p");
    if (cfg.qdeg < 2 || cfg.qdeg > 10)
        throw config_error("q-window must lie in 2..10, got " + std::to_string(cfg.qdeg));
    if (cfg.iterate < 1)
        throw config_error("iterate count must be >= 1, got " + std::to_string(cfg.iterate));
}

struct Plan {
    int level; // beta certificate the downstream chain consumes
    int wide;  // working relative precision for the curve coefficients
    int depth; // expansion depth; covers the deepest ladder read p^level - 1
};

// The level pays for every division by p the zeta/log chain performs on the
// window, plus the digit target itself; the working precision additionally
// absorbs the exponential's worst case.  The ceiling keeps a desk-size job
// from silently requesting an expansion that would run for hours.
inline Plan plan_job(int64_t p, int e_target, int M, bool quotient_ready = false) {
    const int level = e_target + sigma_chain_loss(p, M + 2);
    int64_t deg = 1;
    for (int i = 0; i < level; ++i) deg *= p;
    if (deg > 500000)
        throw config_error("precision target needs expansion depth " + std::to_string(deg) +
                           "; lower the digit target or the window");
    const int depth = std::max(M + 6, int(deg) + 2);
    int wide = sigma_working_rel(p, level, M);
    if (quotient_ready) wide = std::max(wide, e_target + 22);
    return {level, wide, depth};
}

struct SigmaJob {
    Plan plan;
    PadicScalar H;
    CurveExpansion<PadicScalar> curve;
    CertifiedSigma<PadicScalar> cert;
};

namespace pdetail {

// Every emitted coefficient must carry at least the target modulus.
template <class S>
void require_certified(const TruncSeries<S>& s, int e_target, const char* name) {
    for (int n = s.lo(); n <= s.stored_top(); ++n) {
        const int cert = ring_abs_prec(s.coeff(n));
        if (cert < e_target)
            throw precision_error(std::string(name) + " coefficient at t^" + std::to_string(n) +
                                  " certified only to " + std::to_string(cert) + " digits, target " +
                                  std::to_string(e_target));
    }
}

template <class F>
auto with_retry(F&& attempt, int wide, int cap) -> decltype(attempt(wide)) {
    try {
        return attempt(std::min(wide, cap));
    } catch (const precision_error&) {
        // one automatic escalation; a second exhaustion is a real failure
        return attempt(std::min(wide + 4, cap));
    }
}

} // namespace pdetail

// Specialized pipeline: expansion, beta ladder, zeta, sigma, all certified.
// Throws not_a_unit_error when the reduction is supersingular, config_error
// on malformed input, precision_error when even the retry cannot reach the
// digit target.
inline SigmaJob run_sigma_job(const ModulusContext& ctx, const JobConfig& cfg,
                              bool quotient_ready = false) {
    validate(cfg);
    const Plan plan = plan_job(ctx.p(), cfg.e_target, cfg.M, quotient_ready);
    auto attempt = [&](int wide) -> SigmaJob {
        auto a4 = PadicScalar::from_ratio(&ctx, cfg.a4_num, cfg.a4_den, wide);
        auto a6 = PadicScalar::from_ratio(&ctx, cfg.a6_num, cfg.a6_den, wide);
        PadicScalar H = hasse_value(ctx, a4, a6);
        if (ring_known_zero(H) || ring_vp(H) > 0)
            throw not_a_unit_error("curve is supersingular at " + std::to_string(ctx.p()) +
                                   ": Hasse value " + ring_str(H));
        auto C = expand_deep(a4, a6, plan.depth);
        auto cs = sigma_certified(C, ctx.p(), plan.level, cfg.M);
        pdetail::require_certified(cs.sigma, cfg.e_target, "sigma");
        pdetail::require_certified(cs.zeta, cfg.e_target, "zeta");
        if (ring_abs_prec(cs.beta) < cfg.e_target)
            throw precision_error("beta certified below the digit target");
        return SigmaJob{plan, H, std::move(C), std::move(cs)};
    };
    return pdetail::with_retry(attempt, plan.wide, ctx.cap());
}

struct UnivJob {
    Plan plan;
    UnivScalar H;
    CurveExpansion<UnivScalar> curve;
    CertifiedSigma<UnivScalar> cert;
};

// Universal pipeline over the two-variable coefficient ring.  Coefficient
// polynomials grow with the isobaric weight, so the depth the beta level
// demands is itself the cost gate here.
inline UnivJob run_univ_job(const ModulusContext& ctx, const JobConfig& cfg) {
    validate(cfg);
    const Plan plan = plan_job(ctx.p(), cfg.e_target, cfg.M);
    if (plan.depth > 700)
        throw config_error("universal run at this target needs expansion depth " +
                           std::to_string(plan.depth) +
                           "; lower the digit target or the window, or specialize the curve");
    auto attempt = [&](int wide) -> UnivJob {
        auto A4 = UnivScalar::A4(&ctx, wide);
        auto A6 = UnivScalar::A6(&ctx, wide);
        UnivScalar H = UnivScalar::hasse(&ctx, wide);
        auto C = expand_deep(A4, A6, plan.depth);
        auto cs = sigma_certified(C, ctx.p(), plan.level, cfg.M);
        pdetail::require_certified(cs.sigma, cfg.e_target, "sigma");
        pdetail::require_certified(cs.zeta, cfg.e_target, "zeta");
        if (ring_abs_prec(cs.beta) < cfg.e_target)
            throw precision_error("beta certified below the digit target");
        return UnivJob{plan, std::move(H), std::move(C), std::move(cs)};
    };
    return pdetail::with_retry(attempt, plan.wide, ctx.cap());
}

// One lifting step: the quotient bundle plus the window it was emitted on.
struct LiftStep {
    QuotientData<PadicScalar> Q;
    int prec; // digits the structural gates ran at
};

// Iterated canonical lifting.  Each step consumes roughly six working
// digits (the kernel split clamps to its gate strength plus twelve and the
// trace chain shifts six of those into denominators), so every step runs at
// the strongest gate its inputs still support rather than a fixed one;
// starting from the context cap this sustains three steps at p = 5.  Every
// emitted value reports its own certified modulus.
inline std::vector<LiftStep> run_lift_job(const ModulusContext& ctx, const JobConfig& cfg,
                                          int win) {
    validate(cfg);
    if (cfg.universal && cfg.iterate > 1)
        throw config_error("universal lifts cannot be iterated: the image coefficients are "
                           "values, not a new pair of generators");
    std::vector<LiftStep> steps;
    auto a4 = PadicScalar::from_ratio(&ctx, cfg.a4_num, cfg.a4_den, ctx.cap());
    auto a6 = PadicScalar::from_ratio(&ctx, cfg.a6_num, cfg.a6_den, ctx.cap());
    const int depth = win + 2 * int(ctx.p()) + 10;
    auto digits_of = [](const PadicScalar& v) {
        return v.known_zero() ? v.abs_prec() : v.rel_prec();
    };
    for (int i = 0; i < cfg.iterate; ++i) {
        PadicScalar H = hasse_value(ctx, a4, a6);
        if (ring_known_zero(H) || ring_vp(H) > 0)
            throw not_a_unit_error("lift step " + std::to_string(i + 1) +
                                   " left the ordinary locus: Hasse value " + ring_str(H));
        const int carried = std::min(digits_of(a4), digits_of(a6));
        const int prec = std::max(1, carried - 12);
        if (carried < 9)
            throw precision_error("lift step " + std::to_string(i + 1) + " carries only " +
                                  std::to_string(carried) +
                                  " certified digits; lower the iterate count");
        auto C = expand_deep(a4, a6, depth);
        auto Q = quotient_curve(ctx, C, prec, win);
        // the emitted-coefficient rule: everything the step reports must
        // still carry the target modulus
        pdetail::require_certified(Q.tq, cfg.e_target, "isogeny parameter");
        pdetail::require_certified(Q.uu, cfg.e_target, "parameter unit part");
        for (const PadicScalar* v : {&Q.a4q, &Q.a6q, &Q.Hq})
            if (ring_abs_prec(*v) < cfg.e_target)
                throw precision_error("lift step " + std::to_string(i + 1) +
                                      " model image certified below the digit target; lower "
                                      "the iterate count or the digit target");
        for (int k = 0; k <= Q.split.phi.degree(); ++k)
            if (ring_abs_prec(Q.split.phi.coeff(k)) < cfg.e_target)
                throw precision_error("lift step " + std::to_string(i + 1) +
                                      " kernel polynomial certified below the digit target");
        a4 = Q.a4q;
        a6 = Q.a6q;
        steps.push_back({std::move(Q), prec});
    }
    return steps;
}

inline bool check_requested(const JobConfig& cfg, const char* id) {
    if (cfg.checks.empty()) return true;
    return std::find(cfg.checks.begin(), cfg.checks.end(), std::string(id)) != cfg.checks.end();
}

// Assembles the requested reports.  Checks that do not apply to the mode or
// the input shape come back as skipped rather than silently vanishing, so a
// filtered run always shows what it did not do.
inline std::vector<CheckReport> run_check_suite(const ModulusContext& ctx, const JobConfig& cfg) {
    validate(cfg);
    std::vector<CheckReport> out;
    auto want = [&](const char* id) { return check_requested(cfg, id); };
    const int64_t p = ctx.p();
    const bool quotient_wanted = !cfg.universal && (want("prop8") || want("fel"));

    if (cfg.universal) {
        UnivJob job = run_univ_job(ctx, cfg);
        if (want("ode"))
            out.push_back(check_ode(ctx, job.curve, job.cert.sigma, job.cert.beta, cfg.e_target));
        if (want("quadratic"))
            out.push_back({"quadratic", "skipped", "",
                           "bivariate expansion over the universal ring is beyond desk scale"});
        if (want("lemma9")) out.push_back(check_lemma9(ctx, job.curve, 1, std::min(cfg.M, 12)));
        if (want("beta")) out.push_back(check_beta_paths(ctx, job.curve, std::min(cfg.e_target, 2)));
        if (want("ladder"))
            out.push_back(check_ladder(ctx, job.curve, job.cert.beta, std::min(job.plan.level, 3)));
        if (want("prop8"))
            out.push_back({"prop8", "skipped", "", "quotient transfer runs on specialized curves"});
        if (want("fel"))
            out.push_back({"fel", "skipped", "", "quotient transfer runs on specialized curves"});
        if (want("commute")) out.push_back(check_specialization(ctx, 1, 1, 1, std::min(cfg.M, 12)));
        if (want("qexp"))
            out.push_back(check_q_expansions(ctx, std::min(cfg.e_target, 2), cfg.qdeg,
                                             p == 5 && cfg.e_target >= 2));
        if (want("hasse")) out.push_back(check_hasse_lifts(ctx));
        if (want("stability"))
            out.push_back({"stability", "skipped", "",
                           "recomputation dial runs on specialized curves"});
        return out;
    }

    SigmaJob job = run_sigma_job(ctx, cfg, quotient_wanted);
    if (want("ode"))
        out.push_back(check_ode(ctx, job.curve, job.cert.sigma, job.cert.beta, cfg.e_target));
    if (want("quadratic")) {
        const int mtot = std::max(8, std::min(cfg.M - 4, 24));
        out.push_back(check_quadratic(ctx, job.curve, job.cert.sigma, cfg.e_target, mtot));
    }
    if (want("lemma9")) out.push_back(check_lemma9(ctx, job.curve, cfg.e_target, std::min(cfg.M, 20)));
    if (want("beta")) out.push_back(check_beta_paths(ctx, job.curve, std::min(cfg.e_target, 2)));
    if (want("ladder"))
        out.push_back(check_ladder(ctx, job.curve, job.cert.beta, std::min(job.plan.level, 3)));
    if (quotient_wanted) {
        const int win = std::max(10, std::min(cfg.M - 2, 30));
        try {
            auto Q = quotient_curve(ctx, job.curve, cfg.e_target + 4, win + 4);
            auto Cq = expand_deep(Q.a4q, Q.a6q, job.plan.depth);
            auto csq = sigma_certified(Cq, p, job.plan.level, cfg.M);
            if (want("prop8"))
                out.push_back(check_prop8(ctx, job.curve, Q, job.cert.beta, csq.beta,
                                          job.cert.zeta, csq.zeta, cfg.e_target, win));
            if (want("fel")) out.push_back(check_fel(ctx, Q, job.cert.g, csq.g, cfg.e_target, win));
        } catch (const error& ex) {
            if (want("prop8")) out.push_back({"prop8", "fail", "", ex.what()});
            if (want("fel")) out.push_back({"fel", "fail", "", ex.what()});
        }
    }
    if (want("commute")) {
        if (cfg.a4_den == 1 && cfg.a6_den == 1)
            out.push_back(
                check_specialization(ctx, cfg.a4_num, cfg.a6_num, 1, std::min(cfg.M, 12)));
        else
            out.push_back({"commute", "skipped", "",
                           "universal comparison needs integer curve coefficients"});
    }
    if (want("qexp"))
        out.push_back(check_q_expansions(ctx, std::min(cfg.e_target, 2), cfg.qdeg,
                                         p == 5 && cfg.e_target >= 2));
    if (want("hasse")) out.push_back(check_hasse_lifts(ctx));
    if (want("stability")) {
        auto runner = [&](int extra, int m) {
            const int w = std::min(job.plan.wide + extra, ctx.cap());
            auto a4 = PadicScalar::from_ratio(&ctx, cfg.a4_num, cfg.a4_den, w);
            auto a6 = PadicScalar::from_ratio(&ctx, cfg.a6_num, cfg.a6_den, w);
            auto c = expand_deep(a4, a6, std::max(m + 6, job.plan.depth));
            return sigma_certified(c, p, job.plan.level, m).sigma;
        };
        out.push_back(check_stability(ctx, runner, cfg.e_target, cfg.M));
    }
    return out;
}

} // namespace padsig
