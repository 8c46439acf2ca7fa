#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "padsig/errors.hpp"
#include "padsig/series.hpp"

namespace padsig {

// Dense univariate polynomial in the coordinate X over a scalar ring S.
// Coefficients are stored low to high; trailing exact zeros are trimmed so
// degree() reflects the certified support.
template <class S>
class XPoly {
public:
    XPoly() = default;
    explicit XPoly(S proto) : proto_(std::move(proto)) {}

    XPoly(S proto, std::vector<S> coeffs) : proto_(std::move(proto)), c_(std::move(coeffs)) {
        trim();
    }

    static XPoly constant(S v) {
        XPoly r(v);
        r.c_.push_back(std::move(v));
        r.trim();
        return r;
    }

    static XPoly monomial(const S& proto, S v, int deg) {
        XPoly r(proto);
        r.c_.assign(size_t(deg), ring_zero(proto));
        r.c_.push_back(std::move(v));
        r.trim();
        return r;
    }

    static XPoly from_ints(const S& proto, std::initializer_list<int64_t> coeffs) {
        XPoly r(proto);
        for (int64_t v : coeffs) r.c_.push_back(ring_from_int(proto, v));
        r.trim();
        return r;
    }

    const S& proto() const { return proto_; }
    int degree() const { return int(c_.size()) - 1; } // -1 for the zero polynomial
    bool is_zero() const { return c_.empty(); }

    S coeff(int i) const {
        if (i < 0 || i >= int(c_.size())) return ring_zero(proto_);
        return c_[size_t(i)];
    }

    void set_coeff(int i, S v) {
        if (i >= int(c_.size())) c_.resize(size_t(i) + 1, ring_zero(proto_));
        c_[size_t(i)] = std::move(v);
        trim();
    }

    S lead() const {
        if (c_.empty()) throw order_error("XPoly: zero polynomial has no leading coefficient");
        return c_.back();
    }

    XPoly operator-() const {
        XPoly r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend XPoly operator+(const XPoly& a, const XPoly& b) {
        XPoly r(a.c_.empty() ? b.proto_ : a.proto_);
        const size_t n = std::max(a.c_.size(), b.c_.size());
        for (size_t i = 0; i < n; ++i) {
            if (i < a.c_.size() && i < b.c_.size())
                r.c_.push_back(a.c_[i] + b.c_[i]);
            else if (i < a.c_.size())
                r.c_.push_back(a.c_[i]);
            else
                r.c_.push_back(b.c_[i]);
        }
        r.trim();
        return r;
    }

    friend XPoly operator-(const XPoly& a, const XPoly& b) { return a + (-b); }

    friend XPoly operator*(const XPoly& a, const XPoly& b) {
        XPoly r(a.c_.empty() ? b.proto_ : a.proto_);
        if (a.c_.empty() || b.c_.empty()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, ring_zero(r.proto_));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (ring_known_zero(a.c_[i]) && ring_abs_prec(a.c_[i]) >= kExactHi) continue;
            for (size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
        }
        r.trim();
        return r;
    }

    XPoly scaled(const S& s) const {
        XPoly r = *this;
        for (auto& v : r.c_) v = v * s;
        r.trim();
        return r;
    }

    XPoly mul_int(int64_t n) const {
        XPoly r = *this;
        for (auto& v : r.c_) v = ring_mul_int(v, n);
        r.trim();
        return r;
    }

    XPoly div_int(int64_t n) const {
        XPoly r = *this;
        for (auto& v : r.c_) v = ring_div_int(v, n);
        return r;
    }

    XPoly mul_p_pow(int k) const {
        XPoly r = *this;
        for (auto& v : r.c_) v = ring_mul_p_pow(v, k);
        return r;
    }

    // d/dX
    XPoly derivative() const {
        XPoly r(proto_);
        for (size_t i = 1; i < c_.size(); ++i) r.c_.push_back(ring_mul_int(c_[i], int64_t(i)));
        r.trim();
        return r;
    }

    // Horner evaluation at a scalar.
    S eval(const S& x) const {
        S acc = ring_zero(proto_);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    // Horner evaluation at a (Laurent) series argument.
    TruncSeries<S> eval_series(const TruncSeries<S>& x) const {
        if (c_.empty()) return ring_zero(x);
        TruncSeries<S> acc = TruncSeries<S>::constant(c_.back(), kExactHi);
        for (size_t i = c_.size() - 1; i-- > 0;)
            acc = acc * x + TruncSeries<S>::constant(c_[i], kExactHi);
        return acc;
    }

    // Euclidean division by a divisor with invertible leading coefficient.
    // Returns {quotient, remainder}.
    friend std::pair<XPoly, XPoly> divmod(const XPoly& a, const XPoly& d) {
        if (d.c_.empty()) throw config_error("XPoly: division by the zero polynomial");
        S linv = ring_inv(d.lead());
        XPoly q(a.proto_), r = a;
        const int dd = d.degree();
        while (r.degree() >= dd) {
            const int k = r.degree() - dd;
            S f = r.lead() * linv;
            q.set_coeff(k, f);
            // r -= f * X^k * d, with the leading term cancelled exactly
            for (int i = 0; i < dd; ++i)
                r.c_[size_t(k + i)] = r.c_[size_t(k + i)] - f * d.c_[size_t(i)];
            r.c_.pop_back();
            r.trim();
        }
        return {std::move(q), std::move(r)};
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (size_t i = c_.size(); i-- > 0;) {
            if (ring_known_zero(c_[i])) continue;
            if (!s.empty()) s += " + ";
            s += "(" + ring_str(c_[i]) + ")";
            if (i == 1) s += "*X";
            if (i > 1) s += "*X^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }

private:
    void trim() {
        while (!c_.empty() && ring_known_zero(c_.back()) && ring_abs_prec(c_.back()) >= kExactHi)
            c_.pop_back();
    }

    S proto_{};
    std::vector<S> c_;
};

template <class S>
XPoly<S> clamp_coeffs(const XPoly<S>& f, int abs) {
    XPoly<S> r = f;
    for (int i = 0; i <= f.degree(); ++i) r.set_coeff(i, ring_clamp(f.coeff(i), abs));
    return r;
}

template <class S>
bool eq_mod_poly(const XPoly<S>& a, const XPoly<S>& b, int k) {
    const int d = std::max(a.degree(), b.degree());
    for (int i = 0; i <= d; ++i)
        if (!ring_is_zero_mod(a.coeff(i) - b.coeff(i), k)) return false;
    return true;
}

template <class S>
int min_abs_prec(const XPoly<S>& f) {
    int m = kExactHi;
    for (int i = 0; i <= f.degree(); ++i) m = std::min(m, ring_abs_prec(f.coeff(i)));
    return m;
}

} // namespace padsig
