#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "padsig/errors.hpp"

namespace padsig {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline constexpr int kExactPrec = 1 << 28;

inline int rat_vp(const BigRat& x, int64_t p) {
    if (x == 0) return kExactPrec;
    BigInt n = boost::multiprecision::numerator(x);
    BigInt d = boost::multiprecision::denominator(x);
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    while (d % p == 0) { d /= p; --v; }
    return v;
}

inline BigInt big_invmod(const BigInt& a, const BigInt& m) {
    BigInt g0 = m, g1 = ((a % m) + m) % m, v0 = 0, v1 = 1;
    while (g1 != 0) {
        BigInt q = g0 / g1;
        BigInt t = g0 - q * g1;
        g0 = g1;
        g1 = t;
        t = v0 - q * v1;
        v0 = v1;
        v1 = t;
    }
    if (g0 != 1) throw not_a_unit_error("big_invmod: argument shares a factor with the modulus");
    return ((v0 % m) + m) % m;
}

// Least nonnegative residue of a p-integral rational mod p^k (k small enough
// for int64 arithmetic).
inline int64_t rat_residue(const BigRat& x, int64_t p, int k) {
    BigInt pe = 1;
    for (int i = 0; i < k; ++i) pe *= p;
    const BigInt& d = boost::multiprecision::denominator(x);
    if (d % p == 0) throw not_a_unit_error("rat_residue: denominator divisible by p");
    BigInt n = boost::multiprecision::numerator(x) % pe;
    BigInt r = ((n * big_invmod(d, pe)) % pe + pe) % pe;
    return r.convert_to<int64_t>();
}

// Exact bivariate Laurent polynomial in (A4, A6) over the rationals, tagged
// with the prime p so congruence queries make sense.  Used as the scalar ring
// for reference computations; arithmetic never loses information.
class ExactScalar {
public:
    ExactScalar() = default;
    explicit ExactScalar(int64_t p) : p_(p) {}

    static ExactScalar from_int(int64_t p, int64_t v) {
        ExactScalar r(p);
        if (v != 0) r.coef_[{0, 0}] = v;
        return r;
    }
    static ExactScalar from_rat(int64_t p, const BigRat& v) {
        ExactScalar r(p);
        if (v != 0) r.coef_[{0, 0}] = v;
        return r;
    }
    static ExactScalar monomial(int64_t p, int a, int b, const BigRat& c) {
        ExactScalar r(p);
        if (c != 0) r.coef_[{a, b}] = c;
        return r;
    }
    static ExactScalar A4(int64_t p) { return monomial(p, 1, 0, 1); }
    static ExactScalar A6(int64_t p) { return monomial(p, 0, 1, 1); }

    int64_t p() const { return p_; }
    const std::map<std::pair<int, int>, BigRat>& coef() const { return coef_; }
    bool is_zero() const { return coef_.empty(); }

    const BigRat& coeff(int a, int b) const {
        static const BigRat zero = 0;
        auto it = coef_.find({a, b});
        return it == coef_.end() ? zero : it->second;
    }

    ExactScalar operator-() const {
        ExactScalar r(p_);
        for (const auto& [k, c] : coef_) r.coef_[k] = -c;
        return r;
    }

    friend ExactScalar operator+(const ExactScalar& x, const ExactScalar& y) {
        ExactScalar r = x;
        for (const auto& [k, c] : y.coef_) {
            auto it = r.coef_.find(k);
            if (it == r.coef_.end()) {
                r.coef_[k] = c;
            } else {
                it->second += c;
                if (it->second == 0) r.coef_.erase(it);
            }
        }
        return r;
    }

    friend ExactScalar operator-(const ExactScalar& x, const ExactScalar& y) { return x + (-y); }

    friend ExactScalar operator*(const ExactScalar& x, const ExactScalar& y) {
        ExactScalar r(x.p_ ? x.p_ : y.p_);
        for (const auto& [ka, ca] : x.coef_)
            for (const auto& [kb, cb] : y.coef_) {
                auto key = std::make_pair(ka.first + kb.first, ka.second + kb.second);
                auto it = r.coef_.find(key);
                if (it == r.coef_.end()) {
                    BigRat v = ca * cb;
                    if (v != 0) r.coef_[key] = std::move(v);
                } else {
                    it->second += ca * cb;
                    if (it->second == 0) r.coef_.erase(it);
                }
            }
        return r;
    }

    // Inverse exists exactly only for single monomials (Laurent support).
    ExactScalar inv() const {
        if (coef_.size() != 1)
            throw not_a_unit_error("ExactScalar: inverse requires a single monomial");
        const auto& [k, c] = *coef_.begin();
        return monomial(p_, -k.first, -k.second, BigRat(1) / c);
    }

    ExactScalar mul_int(int64_t n) const {
        ExactScalar r(p_);
        if (n == 0) return r;
        for (const auto& [k, c] : coef_) r.coef_[k] = c * n;
        return r;
    }

    ExactScalar div_int(int64_t n) const {
        if (n == 0) throw config_error("ExactScalar: division by zero integer");
        ExactScalar r(p_);
        for (const auto& [k, c] : coef_) r.coef_[k] = c / n;
        return r;
    }

    ExactScalar mul_p_pow(int k) const {
        BigRat f = 1;
        for (int i = 0; i < (k > 0 ? k : -k); ++i) f *= p_;
        if (k < 0) f = BigRat(1) / f;
        ExactScalar r(p_);
        for (const auto& [key, c] : coef_) r.coef_[key] = c * f;
        return r;
    }

    int vp_lower() const {
        int v = kExactPrec;
        for (const auto& [k, c] : coef_) v = std::min(v, rat_vp(c, p_));
        return v;
    }

    bool is_zero_mod(int k) const { return vp_lower() >= k; }

    BigRat eval(const BigRat& a4, const BigRat& a6) const {
        BigRat acc = 0;
        for (const auto& [k, c] : coef_) {
            BigRat term = c;
            for (int i = 0; i < k.first; ++i) term *= a4;
            for (int i = 0; i > k.first; --i) term /= a4;
            for (int i = 0; i < k.second; ++i) term *= a6;
            for (int i = 0; i > k.second; --i) term /= a6;
            acc += term;
        }
        return acc;
    }

    std::string str() const {
        if (coef_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [k, c] : coef_) {
            if (!first) s += " + ";
            first = false;
            s += c.str();
            if (k.first) s += "*A4^" + std::to_string(k.first);
            if (k.second) s += "*A6^" + std::to_string(k.second);
        }
        return s;
    }

private:
    int64_t p_ = 0;
    std::map<std::pair<int, int>, BigRat> coef_;
};

inline ExactScalar ring_zero(const ExactScalar& like) { return ExactScalar(like.p()); }
inline ExactScalar ring_one(const ExactScalar& like) { return ExactScalar::from_int(like.p(), 1); }
inline ExactScalar ring_from_int(const ExactScalar& like, int64_t v) {
    return ExactScalar::from_int(like.p(), v);
}
inline ExactScalar ring_inv(const ExactScalar& x) { return x.inv(); }
inline ExactScalar ring_div_int(const ExactScalar& x, int64_t n) { return x.div_int(n); }
inline ExactScalar ring_mul_int(const ExactScalar& x, int64_t n) { return x.mul_int(n); }
inline ExactScalar ring_mul_p_pow(const ExactScalar& x, int k) { return x.mul_p_pow(k); }
inline bool ring_known_zero(const ExactScalar& x) { return x.is_zero(); }
inline int ring_vp(const ExactScalar& x) { return x.vp_lower(); }
inline int ring_abs_prec(const ExactScalar&) { return kExactPrec; }
inline ExactScalar ring_clamp(const ExactScalar& x, int) { return x; }
inline bool ring_is_zero_mod(const ExactScalar& x, int k) { return x.is_zero_mod(k); }
inline std::string ring_str(const ExactScalar& x) { return x.str(); }

inline bool eq_mod(const ExactScalar& a, const ExactScalar& b, int k) {
    return (a - b).is_zero_mod(k);
}

} // namespace padsig
