#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "padsig/context.hpp"
#include "padsig/errors.hpp"
#include "padsig/padic_scalar.hpp"

namespace padsig {

// Monomial c * A4^a * A6^b with c a residue mod p^rel of the owning scalar.
struct IsoMono {
    int a = 0;
    int b = 0;
    int64_t c = 0;
};

using IsoPoly = std::vector<IsoMono>;

namespace iso {

inline void sort_canonical(IsoPoly& f) {
    std::sort(f.begin(), f.end(), [](const IsoMono& x, const IsoMono& y) {
        return x.a != y.a ? x.a > y.a : x.b < y.b;
    });
}

inline IsoPoly reduce(const IsoPoly& f, int64_t pe) {
    IsoPoly r;
    for (const auto& m : f) {
        int64_t c = ((m.c % pe) + pe) % pe;
        if (c != 0) r.push_back({m.a, m.b, c});
    }
    sort_canonical(r);
    return r;
}

inline IsoPoly add(const IsoPoly& f, const IsoPoly& g, int64_t pe) {
    std::map<std::pair<int, int>, int64_t> acc;
    for (const auto& m : f) acc[{m.a, m.b}] = (acc[{m.a, m.b}] + m.c) % pe;
    for (const auto& m : g) acc[{m.a, m.b}] = (acc[{m.a, m.b}] + m.c) % pe;
    IsoPoly r;
    for (const auto& [ab, c] : acc)
        if (c % pe != 0) r.push_back({ab.first, ab.second, ((c % pe) + pe) % pe});
    sort_canonical(r);
    return r;
}

inline IsoPoly mul(const IsoPoly& f, const IsoPoly& g, int64_t pe) {
    std::map<std::pair<int, int>, int64_t> acc;
    for (const auto& x : f)
        for (const auto& y : g) {
            auto key = std::make_pair(x.a + y.a, x.b + y.b);
            acc[key] = (acc[key] + detail::mulmod(x.c, y.c, pe)) % pe;
        }
    IsoPoly r;
    for (const auto& [ab, c] : acc)
        if (c != 0) r.push_back({ab.first, ab.second, c});
    sort_canonical(r);
    return r;
}

inline IsoPoly scale(const IsoPoly& f, int64_t s, int64_t pe) {
    IsoPoly r;
    s = ((s % pe) + pe) % pe;
    for (const auto& m : f) {
        int64_t c = detail::mulmod(m.c, s, pe);
        if (c != 0) r.push_back({m.a, m.b, c});
    }
    return r;
}

inline int content_vp(const IsoPoly& f, int64_t p, int rel) {
    int v = rel;
    for (const auto& m : f) {
        int64_t c = m.c;
        int w = 0;
        while (w < v && c % p == 0) { c /= p; ++w; }
        v = std::min(v, w);
        if (v == 0) break;
    }
    return v;
}

inline bool eq(const IsoPoly& f, const IsoPoly& g) {
    if (f.size() != g.size()) return false;
    for (size_t i = 0; i < f.size(); ++i)
        if (f[i].a != g[i].a || f[i].b != g[i].b || f[i].c != g[i].c) return false;
    return true;
}

// Exact division f = q * h in (Z/p^rel)[A4, A6] for isobaric f (weight wf) and
// h (weight wh).  Uses the univariate image A6 -> 1 (injective at fixed
// weight), requires h's top-A4 coefficient to be a unit, and verifies the
// reconstruction by multiplying back.  Returns false if division fails.
inline bool exact_div(const IsoPoly& f, int wf, const IsoPoly& h, int wh,
                      int64_t p, int64_t pe, IsoPoly& q_out) {
    if (f.empty()) { q_out.clear(); return true; }
    const int wq = wf - wh;
    if (wq < 0) return false;
    int da = 0, dh = 0;
    for (const auto& m : f) da = std::max(da, m.a);
    for (const auto& m : h) dh = std::max(dh, m.a);
    if (da < dh) {
        // quotient may still exist with smaller A4-degree only if h's image
        // has degree 0; handled by the generic loop below when da >= dh fails
        if (dh > 0) return false;
    }
    std::vector<int64_t> F(size_t(da + 1), 0), Hc(size_t(dh + 1), 0);
    for (const auto& m : f) F[size_t(m.a)] = m.c;
    for (const auto& m : h) Hc[size_t(m.a)] = m.c;
    if (Hc[size_t(dh)] % p == 0) return false; // non-unit lead: skip (best effort)
    const int64_t lead_inv = detail::invmod(Hc[size_t(dh)], pe);
    const int dq = da - dh;
    std::vector<int64_t> Q(size_t(dq + 1), 0);
    for (int i = dq; i >= 0; --i) {
        int64_t c = detail::mulmod(((F[size_t(i + dh)] % pe) + pe) % pe, lead_inv, pe);
        Q[size_t(i)] = c;
        if (c != 0)
            for (int j = 0; j <= dh; ++j) {
                F[size_t(i + j)] = (F[size_t(i + j)] - detail::mulmod(c, Hc[size_t(j)], pe)) % pe;
            }
    }
    for (const auto& v : F)
        if (((v % pe) + pe) % pe != 0) return false;
    IsoPoly q;
    for (int i = 0; i <= dq; ++i) {
        if (Q[size_t(i)] == 0) continue;
        const int rem = wq - 4 * i;
        if (rem < 0 || rem % 6 != 0) return false;
        q.push_back({i, rem / 6, Q[size_t(i)]});
    }
    sort_canonical(q);
    if (!eq(reduce(mul(q, h, pe), pe), reduce(f, pe))) return false;
    q_out = q;
    return true;
}

} // namespace iso

// Element of the p-completed graded coefficient ring: value
// num / (H^h_den * p^p_den) with num an isobaric polynomial mod p^rel in
// (A4, A6).  Invariant: every monomial satisfies 4a + 6b = weight + (p-1)*h_den.
// The value is known modulo p^{rel - p_den}.
class UnivScalar {
public:
    UnivScalar() = default;

    UnivScalar(const ModulusContext* ctx, IsoPoly num, int h_den, int p_den, int weight, int rel)
        : ctx_(ctx), num_(std::move(num)), h_(h_den), j_(p_den), w_(weight), rel_(rel) {
        normalize();
        check_weight_invariant();
    }

    static UnivScalar from_int(const ModulusContext* ctx, int64_t v, int rel) {
        IsoPoly f;
        int64_t c = ((v % ctx->pow_p(rel)) + ctx->pow_p(rel)) % ctx->pow_p(rel);
        if (c != 0) f.push_back({0, 0, c});
        return UnivScalar(ctx, std::move(f), 0, 0, 0, rel);
    }

    static UnivScalar zero(const ModulusContext* ctx, int abs_prec) {
        return UnivScalar(ctx, IsoPoly{}, 0, 0, 0, abs_prec);
    }

    static UnivScalar one(const ModulusContext* ctx, int rel) { return from_int(ctx, 1, rel); }

    static UnivScalar A4(const ModulusContext* ctx, int rel) {
        return UnivScalar(ctx, IsoPoly{{1, 0, 1}}, 0, 0, 4, rel);
    }
    static UnivScalar A6(const ModulusContext* ctx, int rel) {
        return UnivScalar(ctx, IsoPoly{{0, 1, 1}}, 0, 0, 6, rel);
    }

    // The Hasse polynomial as a universal scalar of weight p-1.
    static UnivScalar hasse(const ModulusContext* ctx, int rel) {
        return UnivScalar(ctx, hasse_poly(ctx, rel), 0, 0, int(ctx->p()) - 1, rel);
    }

    static IsoPoly hasse_poly(const ModulusContext* ctx, int rel) {
        IsoPoly f;
        const int64_t pe = ctx->pow_p(rel);
        for (const auto& m : ctx->hasse_monomials()) {
            int64_t c = ((m.c % pe) + pe) % pe;
            if (c != 0) f.push_back({m.a, m.b, c});
        }
        iso::sort_canonical(f);
        return f;
    }

    const ModulusContext* ctx() const { return ctx_; }
    const IsoPoly& num() const { return num_; }
    int h_den() const { return h_; }
    int p_den() const { return j_; }
    int weight() const { return w_; }
    int rel_prec() const { return rel_; }
    int abs_prec() const { return rel_ - j_; }
    bool known_zero() const { return num_.empty(); }

    int vp_lower() const {
        return (num_.empty() ? rel_ : iso::content_vp(num_, ctx_->p(), rel_)) - j_;
    }

    UnivScalar operator-() const {
        UnivScalar r = *this;
        r.num_ = iso::scale(r.num_, -1, r.pe());
        return r;
    }

    friend UnivScalar operator+(const UnivScalar& x, const UnivScalar& y) {
        x.check_ctx(y);
        if (!x.num_.empty() && !y.num_.empty() && x.w_ != y.w_)
            throw weight_error("UnivScalar: adding weights " + std::to_string(x.w_) +
                               " and " + std::to_string(y.w_));
        const int w = x.num_.empty() ? y.w_ : x.w_;
        const int h = std::max(x.h_, y.h_);
        const int j = std::max(x.j_, y.j_);
        const int abs = std::min(x.abs_prec(), y.abs_prec());
        const int rel = abs + j;
        if (rel <= 0) throw precision_error("UnivScalar: addition exhausted all precision");
        const int64_t pe = x.ctx_->pow_p(rel);
        IsoPoly fx = x.rescaled_num(h, j, rel);
        IsoPoly fy = y.rescaled_num(h, j, rel);
        return UnivScalar(x.ctx_, iso::add(fx, fy, pe), h, j, w, rel);
    }

    friend UnivScalar operator-(const UnivScalar& x, const UnivScalar& y) { return x + (-y); }

    friend UnivScalar operator*(const UnivScalar& x, const UnivScalar& y) {
        x.check_ctx(y);
        const int rel = std::min(x.rel_, y.rel_);
        const int64_t pe = x.ctx_->pow_p(rel);
        if (x.num_.empty() || y.num_.empty()) {
            // x ≡ 0 mod p^{abs_x} (after denominators): product vanishes mod
            // p^{abs_x + vp(y)}
            int abs;
            if (x.num_.empty() && y.num_.empty())
                abs = x.abs_prec() + y.abs_prec();
            else if (x.num_.empty())
                abs = x.abs_prec() + y.vp_lower();
            else
                abs = y.abs_prec() + x.vp_lower();
            UnivScalar z = zero(x.ctx_, std::max(abs, 1));
            z.w_ = x.w_ + y.w_;
            return z;
        }
        return UnivScalar(x.ctx_, iso::mul(iso::reduce(x.num_, pe), iso::reduce(y.num_, pe), pe),
                          x.h_ + y.h_, x.j_ + y.j_, x.w_ + y.w_, rel);
    }

    // Inverse of a unit of the localized ring: requires the reduction mod p of
    // the (p-content-stripped) numerator to be a scalar multiple of a power of
    // the Hasse polynomial; that power is forced by the weight grading.
    UnivScalar inv() const {
        UnivScalar x = *this;
        x.normalize();
        if (x.num_.empty())
            throw not_a_unit_error("UnivScalar: inverse of a value with no known unit part");
        // strip residual p-content into the p-denominator of the result
        int vc = iso::content_vp(x.num_, ctx_->p(), x.rel_);
        if (vc >= x.rel_) throw not_a_unit_error("UnivScalar: numerator vanishes at working precision");
        if (vc > 0) {
            IsoPoly stripped;
            for (auto m : x.num_) { m.c /= ctx_->pow_p(vc); stripped.push_back(m); }
            x.num_ = std::move(stripped);
            x.rel_ -= vc;
        }
        const int p1 = int(ctx_->p()) - 1;
        const int wn = x.w_ + p1 * x.h_; // numerator weight
        if (wn % p1 != 0)
            throw not_a_unit_error("UnivScalar: numerator weight " + std::to_string(wn) +
                                   " is not a multiple of p-1; not a unit times H^m");
        const int m = wn / p1;
        if (m < 0) throw not_a_unit_error("UnivScalar: negative Hasse power in unit test");
        // reduction mod p must equal gamma * H^m
        const int64_t p = ctx_->p();
        IsoPoly hm{{0, 0, 1}};
        IsoPoly hp = hasse_poly(ctx_, 1);
        for (int i = 0; i < m; ++i) hm = iso::mul(hm, hp, p);
        IsoPoly nmodp = iso::reduce(x.num_, p);
        if (hm.empty() || nmodp.empty())
            throw not_a_unit_error("UnivScalar: degenerate unit test");
        int64_t gamma = detail::mulmod(nmodp.front().c, detail::invmod(hm.front().c, p), p);
        if (!iso::eq(iso::scale(hm, gamma, p), nmodp))
            throw not_a_unit_error("UnivScalar: numerator is not a unit multiple of H^" +
                                   std::to_string(m) + " mod p");
        // Newton iteration for 1/numerator, seeded mod p
        UnivScalar N(ctx_, x.num_, 0, 0, wn, x.rel_);
        UnivScalar z(ctx_, IsoPoly{{0, 0, detail::invmod(gamma, p)}}, m, 0, -wn, 1);
        UnivScalar two = from_int(ctx_, 2, x.rel_);
        int correct = 1;
        while (correct < x.rel_) {
            z.lift_exact(x.rel_);
            z = z * (two - N * z);
            correct *= 2;
        }
        z.lift_exact(x.rel_);
        UnivScalar check = N * z - one(ctx_, x.rel_);
        if (!check.num_.empty())
            throw not_a_unit_error("UnivScalar: Newton inversion failed to converge");
        // value = p^vc * N' / (H^h p^j), so 1/value = z * H^h * p^{j - vc}
        UnivScalar r = z;
        for (int i = 0; i < x.h_; ++i) r = r * hasse(ctx_, x.rel_);
        r = r.mul_p_pow(x.j_ - vc);
        r.check_weight_invariant();
        return r;
    }

    UnivScalar mul_int(int64_t n) const {
        if (n == 0) {
            UnivScalar z = zero(ctx_, ctx_->cap());
            z.w_ = w_;
            return z;
        }
        int v = 0;
        int64_t u = n < 0 ? -n : n;
        while (u % ctx_->p() == 0) { u /= ctx_->p(); ++v; }
        const int rel = std::min(rel_ + v, ctx_->cap());
        const int64_t pe = ctx_->pow_p(rel);
        int64_t s = detail::mulmod(u % pe, ctx_->pow_p(v), pe);
        if (n < 0) s = pe - s;
        IsoPoly f = iso::scale(iso::reduce(num_, pe), s, pe);
        return UnivScalar(ctx_, std::move(f), h_, j_, w_, rel);
    }

    UnivScalar div_int(int64_t n) const {
        if (n == 0) throw config_error("UnivScalar: division by zero integer");
        int v = 0;
        int64_t u = n < 0 ? -n : n;
        while (u % ctx_->p() == 0) { u /= ctx_->p(); ++v; }
        const int64_t pe = ctx_->pow_p(rel_);
        int64_t s = detail::invmod(u % pe, pe);
        if (n < 0) s = pe - s;
        IsoPoly f = iso::scale(num_, s, pe);
        return UnivScalar(ctx_, std::move(f), h_, j_ + v, w_, rel_);
    }

    // Multiply by p^k: exact rescaling (k < 0 grows the p-denominator).
    UnivScalar mul_p_pow(int k) const {
        if (k == 0) return *this;
        if (k < 0) {
            return UnivScalar(ctx_, num_, h_, j_ - k, w_, rel_);
        }
        const int rel = std::min(rel_ + k, ctx_->cap());
        const int64_t pe = ctx_->pow_p(rel);
        IsoPoly f = iso::scale(iso::reduce(num_, pe), ctx_->pow_p(k), pe);
        return UnivScalar(ctx_, std::move(f), h_, j_, w_, rel);
    }

    bool is_zero_mod(int k) const {
        if (num_.empty()) {
            if (abs_prec() < k)
                throw precision_error("UnivScalar: zero known only mod p^" + std::to_string(abs_prec()) +
                                      ", cannot certify mod p^" + std::to_string(k));
            return true;
        }
        return vp_lower() >= k;
    }

    static UnivScalar clamp_abs(const UnivScalar& x, int abs) {
        if (x.abs_prec() <= abs) return x;
        if (abs <= 0) throw precision_error("UnivScalar: clamp below one certified digit");
        return UnivScalar(x.ctx_, iso::reduce(x.num_, x.ctx_->pow_p(abs + x.j_)), x.h_, x.j_, x.w_,
                          abs + x.j_);
    }

    // Reinterpret the stored digits as exact at the given relative precision.
    // Only valid inside self-correcting iterations whose fixed point is
    // verified afterwards (Newton inversion).
    void lift_exact(int rel) {
        if (rel > ctx_->cap()) rel = ctx_->cap();
        rel_ = std::max(rel_, rel);
    }

    std::string str() const {
        std::string s;
        if (num_.empty()) {
            s = "0";
        } else {
            bool first = true;
            for (const auto& m : num_) {
                if (!first) s += " + ";
                first = false;
                s += std::to_string(m.c);
                if (m.a) s += "*A4^" + std::to_string(m.a);
                if (m.b) s += "*A6^" + std::to_string(m.b);
            }
        }
        if (h_) s += " / H^" + std::to_string(h_);
        if (j_) s += " / p^" + std::to_string(j_);
        s += "  (weight " + std::to_string(w_) + ", mod p^" + std::to_string(abs_prec()) + ")";
        return s;
    }

private:
    int64_t pe() const { return ctx_->pow_p(rel_); }

    void check_ctx(const UnivScalar& o) const {
        if (ctx_ != o.ctx_) throw config_error("UnivScalar: mixed arithmetic contexts");
    }

    void check_weight_invariant() const {
        const int target = w_ + (int(ctx_->p()) - 1) * h_;
        for (const auto& m : num_)
            if (4 * m.a + 6 * m.b != target)
                throw weight_error("UnivScalar: monomial A4^" + std::to_string(m.a) + "*A6^" +
                                   std::to_string(m.b) + " breaks the isobaric invariant for weight " +
                                   std::to_string(w_) + " / H^" + std::to_string(h_));
    }

    // Numerator rescaled to denominators (h, j) at relative precision rel.
    IsoPoly rescaled_num(int h, int j, int rel) const {
        const int64_t pe_ = ctx_->pow_p(rel);
        IsoPoly f = iso::reduce(num_, pe_);
        if (j > j_) f = iso::scale(f, ctx_->pow_p(j - j_), pe_);
        IsoPoly hp = hasse_poly(ctx_, rel);
        for (int i = h_; i < h; ++i) f = iso::mul(f, hp, pe_);
        return f;
    }

    void normalize() {
        if (rel_ <= 0) throw precision_error("UnivScalar: no certified digits left");
        if (rel_ > ctx_->cap()) rel_ = ctx_->cap();
        num_ = iso::reduce(num_, pe());
        if (num_.empty()) {
            if (rel_ - j_ <= 0)
                throw precision_error("UnivScalar: zero with no certified digits");
            rel_ -= j_;
            h_ = 0;
            j_ = 0;
            return;
        }
        // cancel p-content against the p-denominator
        while (j_ > 0 && rel_ > 1 && iso::content_vp(num_, ctx_->p(), rel_) > 0) {
            for (auto& m : num_) m.c /= ctx_->p();
            --j_;
            --rel_;
        }
        // greedy Hasse reduction (best effort, verified by multiplication)
        while (h_ > 0) {
            IsoPoly q;
            const int wn = w_ + (int(ctx_->p()) - 1) * h_;
            if (!iso::exact_div(num_, wn, hasse_poly(ctx_, rel_), int(ctx_->p()) - 1,
                                ctx_->p(), pe(), q))
                break;
            num_ = std::move(q);
            --h_;
        }
    }

    const ModulusContext* ctx_ = nullptr;
    IsoPoly num_;
    int h_ = 0;
    int j_ = 0;
    int w_ = 0;
    int rel_ = 1;
};

// Evaluate a universal scalar at ring elements (a4, a6) of any scalar type R
// supplied through the uniform ring interface.  H(a4, a6) must be invertible.
template <class R>
R evaluate_univ(const UnivScalar& u, const R& a4, const R& a6) {
    R zero = ring_zero(a4);
    const int maxa = [&] {
        int m = 0;
        for (const auto& mo : u.num()) m = std::max(m, mo.a);
        for (const auto& mo : u.ctx()->hasse_monomials()) m = std::max(m, mo.a);
        return m;
    }();
    const int maxb = [&] {
        int m = 0;
        for (const auto& mo : u.num()) m = std::max(m, mo.b);
        for (const auto& mo : u.ctx()->hasse_monomials()) m = std::max(m, mo.b);
        return m;
    }();
    std::vector<R> pa{ring_one(a4)}, pb{ring_one(a6)};
    for (int i = 1; i <= maxa; ++i) pa.push_back(pa.back() * a4);
    for (int i = 1; i <= maxb; ++i) pb.push_back(pb.back() * a6);
    auto eval_poly = [&](const IsoPoly& f) {
        R acc = zero;
        for (const auto& m : f)
            acc = acc + ring_mul_int(pa[size_t(m.a)] * pb[size_t(m.b)], m.c);
        return acc;
    };
    R val = eval_poly(u.num());
    if (u.h_den() > 0) {
        IsoPoly hp;
        for (const auto& m : u.ctx()->hasse_monomials()) hp.push_back({m.a, m.b, m.c});
        R h = eval_poly(hp);
        R hinv = ring_inv(h);
        for (int i = 0; i < u.h_den(); ++i) val = val * hinv;
    }
    if (u.p_den() > 0) val = ring_mul_p_pow(val, -u.p_den());
    return val;
}

// Specialize at integer curve coefficients, producing a p-adic scalar.
inline PadicScalar univ_specialize(const UnivScalar& u, const PadicScalar& a4, const PadicScalar& a6) {
    return evaluate_univ<PadicScalar>(u, a4, a6);
}

// --- uniform ring interface ---

inline UnivScalar ring_zero(const UnivScalar& like) {
    return UnivScalar::zero(like.ctx(), like.ctx()->cap());
}
inline UnivScalar ring_one(const UnivScalar& like) {
    return UnivScalar::one(like.ctx(), std::min(like.rel_prec() + like.p_den(), like.ctx()->cap()));
}
inline UnivScalar ring_from_int(const UnivScalar& like, int64_t v) {
    return UnivScalar::from_int(like.ctx(), v,
                                std::min(like.rel_prec() + like.p_den(), like.ctx()->cap()));
}
inline UnivScalar ring_inv(const UnivScalar& x) { return x.inv(); }
inline UnivScalar ring_div_int(const UnivScalar& x, int64_t n) { return x.div_int(n); }
inline UnivScalar ring_mul_int(const UnivScalar& x, int64_t n) { return x.mul_int(n); }
inline UnivScalar ring_mul_p_pow(const UnivScalar& x, int k) { return x.mul_p_pow(k); }
inline bool ring_known_zero(const UnivScalar& x) { return x.known_zero(); }
inline int ring_vp(const UnivScalar& x) { return x.vp_lower(); }
inline int ring_abs_prec(const UnivScalar& x) { return x.abs_prec(); }
inline UnivScalar ring_clamp(const UnivScalar& x, int abs) { return UnivScalar::clamp_abs(x, abs); }
inline bool ring_is_zero_mod(const UnivScalar& x, int k) { return x.is_zero_mod(k); }
inline std::string ring_str(const UnivScalar& x) { return x.str(); }

inline bool eq_mod(const UnivScalar& a, const UnivScalar& b, int k) {
    return (a - b).is_zero_mod(k);
}

// Widen the certified-digit claim by pad without touching the residue; the
// numerator coefficients are stored reduced, so the canonical lift is the
// representation itself.  Same contract as the p-adic overload: the caller's
// perturbation bound pays for the extra digits and clamps them back after.
inline UnivScalar lift_pad(const UnivScalar& x, int pad) {
    if (x.known_zero()) return UnivScalar::zero(x.ctx(), x.abs_prec() + pad);
    int rel = std::min(x.rel_prec() + pad, x.ctx()->cap());
    if (rel <= x.rel_prec()) return x;
    return UnivScalar(x.ctx(), x.num(), x.h_den(), x.p_den(), x.weight(), rel);
}

} // namespace padsig
