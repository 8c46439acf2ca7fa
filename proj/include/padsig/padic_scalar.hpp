#pragma once

#include <cstdint>
#include <string>

#include "padsig/context.hpp"
#include "padsig/errors.hpp"

namespace padsig {

namespace detail {

inline int64_t mulmod(int64_t a, int64_t b, int64_t m) {
    return int64_t((unsigned __int128)(a) * (unsigned __int128)(b) % (unsigned __int128)(m));
}

// Inverse of a mod m for m a prime power and a prime to p (extended Euclid).
inline int64_t invmod(int64_t a, int64_t m) {
    int64_t r0 = m, r1 = a % m, s0 = 0, s1 = 1;
    while (r1 != 0) {
        int64_t q = r0 / r1;
        int64_t r2 = r0 - q * r1;
        int64_t s2 = s0 - q * s1;
        r0 = r1; r1 = r2; s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw not_a_unit_error("invmod: argument shares a factor with the modulus");
    return ((s0 % m) + m) % m;
}

} // namespace detail

// One p-adic number with explicit precision: value = p^shift * man, where
// man is a unit residue mod p^rel (or 0).  The value is known modulo
// p^{shift+rel}; man == 0 means "known to vanish mod p^{shift+rel}".
class PadicScalar {
public:
    PadicScalar() = default;

    PadicScalar(const ModulusContext* ctx, int64_t man, int shift, int rel)
        : ctx_(ctx), man_(man), shift_(shift), rel_(rel) {
        normalize();
    }

    // Embed an exact integer: p-content goes to the shift, the unit part
    // keeps rel digits.
    static PadicScalar from_int(const ModulusContext* ctx, int64_t v, int rel) {
        if (v == 0) return zero(ctx, ctx->cap());
        int shift = 0;
        int64_t u = v < 0 ? -v : v;
        while (u % ctx->p() == 0) { u /= ctx->p(); ++shift; }
        int64_t m = u % ctx->pow_p(rel);
        if (v < 0 && m != 0) m = ctx->pow_p(rel) - m;
        return PadicScalar(ctx, m, shift, rel);
    }

    // num/den with den prime to p after stripping p-powers from num.
    static PadicScalar from_ratio(const ModulusContext* ctx, int64_t num, int64_t den, int rel) {
        if (den == 0) throw config_error("PadicScalar: zero denominator");
        bool neg = (num < 0) != (den < 0);
        if (num < 0) num = -num;
        if (den < 0) den = -den;
        int shift = 0;
        while (num != 0 && num % ctx->p() == 0) { num /= ctx->p(); ++shift; }
        while (den % ctx->p() == 0) { den /= ctx->p(); --shift; }
        if (num == 0) return zero(ctx, ctx->cap());
        const int64_t pe = ctx->pow_p(rel);
        int64_t m = detail::mulmod(num % pe, detail::invmod(den % pe, pe), pe);
        if (neg && m != 0) m = pe - m;
        return PadicScalar(ctx, m, shift, rel);
    }

    // The exact zero known modulo p^{abs_prec}.
    static PadicScalar zero(const ModulusContext* ctx, int abs_prec) {
        PadicScalar z;
        z.ctx_ = ctx;
        z.man_ = 0;
        z.shift_ = abs_prec - 1;
        z.rel_ = 1;
        return z;
    }

    static PadicScalar one(const ModulusContext* ctx, int rel) { return from_int(ctx, 1, rel); }

    const ModulusContext* ctx() const { return ctx_; }
    int64_t mantissa() const { return man_; }
    int shift() const { return shift_; }
    int rel_prec() const { return rel_; }
    // Absolute precision: the value is known modulo p^{abs_prec()}.
    int abs_prec() const { return shift_ + rel_; }
    bool known_zero() const { return man_ == 0; }

    // Lower bound for v_p(value); exact when the value is a known nonzero.
    int vp_lower() const { return man_ == 0 ? abs_prec() : shift_; }

    PadicScalar operator-() const {
        PadicScalar r = *this;
        if (r.man_ != 0) r.man_ = r.pe(r.rel_) - r.man_;
        return r;
    }

    friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
        a.check_ctx(b);
        if (a.man_ == 0) return clamp_abs(b, std::min(a.abs_prec(), b.abs_prec()));
        if (b.man_ == 0) return clamp_abs(a, std::min(a.abs_prec(), b.abs_prec()));
        const int s = std::min(a.shift_, b.shift_);
        const int abs = std::min(a.abs_prec(), b.abs_prec());
        const int rel = abs - s;
        if (rel <= 0) throw precision_error("PadicScalar: addition exhausted all precision");
        const int64_t pe = a.ctx_->pow_p(rel);
        int64_t m = 0;
        if (a.shift_ - s < rel)
            m = detail::mulmod(a.man_ % pe, a.ctx_->pow_p(a.shift_ - s), pe);
        if (b.shift_ - s < rel)
            m = (m + detail::mulmod(b.man_ % pe, a.ctx_->pow_p(b.shift_ - s), pe)) % pe;
        return PadicScalar(a.ctx_, m, s, rel);
    }

    friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

    friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
        a.check_ctx(b);
        if (a.man_ == 0 || b.man_ == 0) {
            // x * y with x ≡ 0 mod p^A vanishes mod p^{A + v_p(y)}.
            int abs;
            if (a.man_ == 0 && b.man_ == 0)
                abs = std::min(a.abs_prec() + b.abs_prec(),
                               a.abs_prec() + b.abs_prec());
            else if (a.man_ == 0)
                abs = a.abs_prec() + b.shift_;
            else
                abs = b.abs_prec() + a.shift_;
            return zero(a.ctx_, abs);
        }
        const int rel = std::min(a.rel_, b.rel_);
        const int64_t pe = a.ctx_->pow_p(rel);
        return PadicScalar(a.ctx_, detail::mulmod(a.man_ % pe, b.man_ % pe, pe),
                           a.shift_ + b.shift_, rel);
    }

    PadicScalar inv() const {
        if (man_ == 0)
            throw not_a_unit_error("PadicScalar: inverse of a value with no known unit part");
        return PadicScalar(ctx_, detail::invmod(man_, pe(rel_)), -shift_, rel_);
    }

    // Multiply by an exact integer (relative precision is preserved).
    PadicScalar mul_int(int64_t n) const {
        if (n == 0) return zero(ctx_, ctx_->cap());
        if (man_ == 0) {
            int v = 0;
            int64_t u = n < 0 ? -n : n;
            while (u % ctx_->p() == 0) { u /= ctx_->p(); ++v; }
            return zero(ctx_, abs_prec() + v);
        }
        bool neg = n < 0;
        int64_t u = neg ? -n : n;
        int v = 0;
        while (u % ctx_->p() == 0) { u /= ctx_->p(); ++v; }
        const int64_t pe_ = pe(rel_);
        int64_t m = detail::mulmod(man_, u % pe_, pe_);
        if (neg) m = pe_ - m;
        return PadicScalar(ctx_, m, shift_ + v, rel_);
    }

    // Divide by an exact nonzero integer (exact in Q_p; shift absorbs p-powers).
    PadicScalar div_int(int64_t n) const {
        if (n == 0) throw config_error("PadicScalar: division by zero integer");
        bool neg = n < 0;
        int64_t u = neg ? -n : n;
        int v = 0;
        while (u % ctx_->p() == 0) { u /= ctx_->p(); ++v; }
        if (man_ == 0) {
            int abs = abs_prec() - v;
            if (abs <= 0) throw precision_error("PadicScalar: division exhausted precision of a known zero");
            return zero(ctx_, abs);
        }
        const int64_t pe_ = pe(rel_);
        int64_t m = detail::mulmod(man_, detail::invmod(u % pe_, pe_), pe_);
        if (neg) m = pe_ - m;
        return PadicScalar(ctx_, m, shift_ - v, rel_);
    }

    // Multiply by p^k (k may be negative).
    PadicScalar mul_p_pow(int k) const {
        PadicScalar r = *this;
        r.shift_ += k;
        return r;
    }

    // Certified: value ≡ 0 (mod p^k)?
    bool is_zero_mod(int k) const {
        if (man_ == 0) {
            if (abs_prec() < k)
                throw precision_error("PadicScalar: zero known only mod p^" + std::to_string(abs_prec()) +
                                      ", cannot certify mod p^" + std::to_string(k));
            return true;
        }
        return shift_ >= k;
    }

    // Lower the absolute precision to `abs` (no-op if already lower).
    static PadicScalar clamp_abs(const PadicScalar& x, int abs) {
        if (x.abs_prec() <= abs) return x;
        if (x.man_ == 0) return zero(x.ctx_, abs);
        int rel = abs - x.shift_;
        if (rel <= 0) return zero(x.ctx_, abs);
        PadicScalar r = x;
        r.rel_ = rel;
        r.man_ = x.man_ % x.ctx_->pow_p(rel);
        r.normalize();
        return r;
    }

    // Least nonnegative residue of the value mod p^k (integer values only).
    int64_t residue(int k) const {
        if (k > abs_prec())
            throw precision_error("PadicScalar: residue request beyond certified precision");
        if (man_ == 0) return 0;
        if (shift_ < 0)
            throw integrality_error("PadicScalar: residue of a non-integral value");
        if (shift_ >= k) return 0;
        return detail::mulmod(man_ % ctx_->pow_p(k - shift_), ctx_->pow_p(shift_), ctx_->pow_p(k));
    }

    std::string str() const {
        if (man_ == 0) return "0 mod p^" + std::to_string(abs_prec());
        if (shift_ >= 0 && abs_prec() <= ctx_->cap())
            return std::to_string(residue(abs_prec())) + " mod p^" + std::to_string(abs_prec());
        return "p^" + std::to_string(shift_) + " * " + std::to_string(man_) +
               " mod p^" + std::to_string(abs_prec());
    }

private:
    int64_t pe(int k) const { return ctx_->pow_p(k); }

    void check_ctx(const PadicScalar& o) const {
        if (ctx_ != o.ctx_) throw config_error("PadicScalar: mixed arithmetic contexts");
    }

    void normalize() {
        if (rel_ <= 0) throw precision_error("PadicScalar: no certified digits left");
        if (rel_ > ctx_->cap()) rel_ = ctx_->cap();
        man_ %= pe(rel_);
        if (man_ < 0) man_ += pe(rel_);
        if (man_ == 0) {
            // canonical zero: one residual digit carries the precision
            shift_ = shift_ + rel_ - 1;
            rel_ = 1;
            return;
        }
        while (man_ % ctx_->p() == 0) {
            man_ /= ctx_->p();
            ++shift_;
            --rel_;
        }
    }

    const ModulusContext* ctx_ = nullptr;
    int64_t man_ = 0;
    int shift_ = 0;
    int rel_ = 1;
};

// --- uniform ring interface (shared with UnivScalar / exact scalars) ---

inline PadicScalar ring_zero(const PadicScalar& like) {
    return PadicScalar::zero(like.ctx(), like.ctx()->cap());
}
inline PadicScalar ring_one(const PadicScalar& like) {
    return PadicScalar::one(like.ctx(), like.rel_prec());
}
inline PadicScalar ring_from_int(const PadicScalar& like, int64_t v) {
    return PadicScalar::from_int(like.ctx(), v, like.rel_prec());
}
inline PadicScalar ring_inv(const PadicScalar& x) { return x.inv(); }
inline PadicScalar ring_div_int(const PadicScalar& x, int64_t n) { return x.div_int(n); }
inline PadicScalar ring_mul_int(const PadicScalar& x, int64_t n) { return x.mul_int(n); }
inline PadicScalar ring_mul_p_pow(const PadicScalar& x, int k) { return x.mul_p_pow(k); }
inline bool ring_known_zero(const PadicScalar& x) { return x.known_zero(); }
inline int ring_vp(const PadicScalar& x) { return x.vp_lower(); }
inline int ring_abs_prec(const PadicScalar& x) { return x.abs_prec(); }
inline PadicScalar ring_clamp(const PadicScalar& x, int abs) { return PadicScalar::clamp_abs(x, abs); }
inline bool ring_is_zero_mod(const PadicScalar& x, int k) { return x.is_zero_mod(k); }
inline std::string ring_str(const PadicScalar& x) { return x.str(); }

inline bool eq_mod(const PadicScalar& a, const PadicScalar& b, int k) {
    return (a - b).is_zero_mod(k);
}

// Widen the certified-digit claim by pad without touching the residue.  The
// caller must hold an external argument for the extra digits; the sigma
// pipeline does (a perturbation bound re-certifies the outputs, which are
// then clamped back to what that bound supports).  The claim never exceeds
// the context cap, where mantissa arithmetic would overflow.
inline PadicScalar lift_pad(const PadicScalar& x, int pad) {
    if (x.known_zero()) return PadicScalar::zero(x.ctx(), x.abs_prec() + pad);
    int rel = std::min(x.rel_prec() + pad, x.ctx()->cap());
    if (rel <= x.rel_prec()) return x;
    return PadicScalar(x.ctx(), x.mantissa(), x.shift(), rel);
}

} // namespace padsig
