#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "padsig/errors.hpp"

namespace padsig {

// Truncation degrees saturate at this sentinel; a series with hi() == kExactHi
// is exactly known (a Laurent polynomial).
inline constexpr int kExactHi = 1 << 26;
inline constexpr int kNoCap = -(1 << 30);

inline int sat_deg(int64_t v) {
    return v >= kExactHi ? kExactHi : (v <= -kExactHi ? -kExactHi : int(v));
}

// Truncated Laurent series over a scalar ring S accessed through the ring_*
// free functions.  Tracked window: exponents lo()..hi() inclusive; stored
// coefficients cover lo()..lo()+size-1, exponents above the storage but within
// the window are exact zeros, exponents above hi() are unknown.
template <class S>
class TruncSeries {
public:
    TruncSeries() = default;

    TruncSeries(S proto, int lo, int hi) : proto_(std::move(proto)), lo_(lo), hi_(sat_deg(hi)) {
        if (hi_ < lo_ - 1) throw order_error("TruncSeries: empty window");
    }

    static TruncSeries zero(S proto, int lo, int hi) { return TruncSeries(std::move(proto), lo, hi); }

    static TruncSeries constant(S c, int hi) {
        TruncSeries r(c, 0, hi);
        r.c_.push_back(std::move(c));
        return r;
    }

    static TruncSeries monomial(S c, int n, int hi) {
        TruncSeries r(c, n, hi);
        r.c_.push_back(std::move(c));
        return r;
    }

    static TruncSeries t_power(const S& proto, int n, int hi) {
        return monomial(ring_one(proto), n, hi);
    }

    const S& proto() const { return proto_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    bool exact() const { return hi_ >= kExactHi; }
    int stored_top() const { return lo_ + int(c_.size()) - 1; }

    S coeff(int n) const {
        if (n > hi_) throw order_error("TruncSeries: coefficient t^" + std::to_string(n) +
                                       " beyond truncation t^" + std::to_string(hi_));
        if (n < lo_ || n > stored_top()) return ring_zero(proto_);
        return c_[size_t(n - lo_)];
    }

    void set_coeff(int n, S v) {
        if (n > hi_) throw order_error("TruncSeries: assigning beyond truncation");
        if (n < lo_) {
            c_.insert(c_.begin(), size_t(lo_ - n), ring_zero(proto_));
            lo_ = n;
        }
        if (n > stored_top()) c_.resize(size_t(n - lo_ + 1), ring_zero(proto_));
        c_[size_t(n - lo_)] = std::move(v);
    }

    // Restrict the tracked window.
    TruncSeries truncated(int new_hi) const {
        TruncSeries r(proto_, lo_, std::min(hi_, new_hi));
        const int top = std::min(stored_top(), r.hi_);
        r.c_.assign(c_.begin(), c_.begin() + std::max(0, top - lo_ + 1));
        return r;
    }

    // Multiply by t^k.
    TruncSeries shifted(int k) const {
        TruncSeries r = *this;
        r.lo_ += k;
        r.hi_ = exact() ? kExactHi : sat_deg(int64_t(hi_) + k);
        return r;
    }

    // Re-base the order to n: all stored coefficients below n must be known
    // zeros (the caller asserts they vanish identically; if min_cert > 0 each
    // must be certified zero mod p^min_cert).
    TruncSeries rebased(int n, int min_cert = 0) const {
        if (n <= lo_) return *this;
        TruncSeries r(proto_, n, hi_);
        for (int m = lo_; m < n && m <= stored_top(); ++m) {
            const S& v = c_[size_t(m - lo_)];
            if (!ring_known_zero(v))
                throw order_error("TruncSeries: rebase would drop a nonzero coefficient at t^" +
                                  std::to_string(m));
            if (min_cert > 0 && ring_abs_prec(v) < min_cert)
                throw precision_error("TruncSeries: rebase needs the t^" + std::to_string(m) +
                                      " zero certified mod p^" + std::to_string(min_cert));
        }
        for (int m = n; m <= stored_top(); ++m) r.c_.push_back(c_[size_t(m - lo_)]);
        return r;
    }

    TruncSeries operator-() const {
        TruncSeries r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
        const int lo = std::min(a.lo_, b.lo_);
        const int hi = std::min(a.hi_, b.hi_);
        TruncSeries r(a.c_.empty() ? b.proto_ : a.proto_, lo, hi);
        const int top = std::min(std::max(a.stored_top(), b.stored_top()), hi);
        for (int n = lo; n <= top; ++n) {
            const bool ina = n >= a.lo_ && n <= a.stored_top();
            const bool inb = n >= b.lo_ && n <= b.stored_top();
            if (ina && inb)
                r.c_.push_back(a.c_[size_t(n - a.lo_)] + b.c_[size_t(n - b.lo_)]);
            else if (ina)
                r.c_.push_back(a.c_[size_t(n - a.lo_)]);
            else if (inb)
                r.c_.push_back(b.c_[size_t(n - b.lo_)]);
            else
                r.c_.push_back(ring_zero(r.proto_));
        }
        return r;
    }

    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return a + (-b); }

    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
        // the unknown tail of one factor meets the true order of the other
        const int ord_a = a.true_order(), ord_b = b.true_order();
        const int pol_a = a.exact() ? kExactHi : sat_deg(int64_t(a.hi_) + ord_b);
        const int pol_b = b.exact() ? kExactHi : sat_deg(int64_t(b.hi_) + ord_a);
        const int hi = std::min(pol_a, pol_b);
        const int lo = a.lo_ + b.lo_;
        TruncSeries r(a.proto_, lo, hi);
        if (a.c_.empty() || b.c_.empty()) return r;
        const int top = std::min({sat_deg(int64_t(a.stored_top()) + b.stored_top()), hi});
        if (top < lo) return r;
        r.c_.assign(size_t(top - lo + 1), ring_zero(r.proto_));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (ring_known_zero(a.c_[i])) {
                // a structural zero only contributes to the precision of the
                // products it touches; handled by the window bound, skip
                if (ring_abs_prec(a.c_[i]) >= kExactHi) continue;
            }
            const int na = a.lo_ + int(i);
            for (size_t j = 0; j < b.c_.size(); ++j) {
                const int n = na + b.lo_ + int(j);
                if (n > top) break;
                r.c_[size_t(n - lo)] = r.c_[size_t(n - lo)] + a.c_[i] * b.c_[size_t(j)];
            }
        }
        return r;
    }

    // True order lower bound: first stored coefficient that is not an exact
    // zero (precision-limited zeros still count as potentially nonzero).
    int true_order() const {
        for (size_t i = 0; i < c_.size(); ++i)
            if (!(ring_known_zero(c_[i]) && ring_abs_prec(c_[i]) >= kExactHi)) return lo_ + int(i);
        return hi_ >= kExactHi ? kExactHi : hi_ + 1;
    }

    std::string str(int max_terms = 12) const {
        std::string s;
        int shown = 0;
        for (int n = lo_; n <= stored_top() && shown < max_terms; ++n) {
            const S& v = c_[size_t(n - lo_)];
            if (ring_known_zero(v)) continue;
            if (!s.empty()) s += " + ";
            s += "(" + ring_str(v) + ")*t^" + std::to_string(n);
            ++shown;
        }
        if (s.empty()) s = "0";
        s += exact() ? "  (exact)" : "  + O(t^" + std::to_string(hi_ + 1) + ")";
        return s;
    }

private:
    S proto_{};
    int lo_ = 0;
    int hi_ = kExactHi;
    std::vector<S> c_;
};

// Coefficient-wise scalar multiple (A is the coefficient ring of S or S
// itself; disambiguated from the series product by name).
template <class S, class A>
TruncSeries<S> scale_coeffs(const TruncSeries<S>& f, const A& a) {
    TruncSeries<S> r = f.truncated(f.hi());
    for (int n = r.lo(); n <= r.stored_top(); ++n) r.set_coeff(n, r.coeff(n) * a);
    return r;
}

template <class S, class Fn>
TruncSeries<S> map_coeffs(const TruncSeries<S>& f, Fn&& fn) {
    TruncSeries<S> r = f;
    for (int n = f.lo(); n <= f.stored_top(); ++n) r.set_coeff(n, fn(f.coeff(n)));
    return r;
}

// d/dt
template <class S>
TruncSeries<S> derivative(const TruncSeries<S>& f) {
    TruncSeries<S> r(f.proto(), f.lo() - 1, f.exact() ? kExactHi : f.hi() - 1);
    for (int n = f.lo(); n <= f.stored_top(); ++n)
        r.set_coeff(n - 1, ring_mul_int(f.coeff(n), n));
    return r;
}

// Divided derivative: coefficient of t^{n-k} is C(n,k) * f_n, built from exact
// integer steps so no spurious precision is lost.
template <class S>
TruncSeries<S> divided_derivative(const TruncSeries<S>& f, int k) {
    TruncSeries<S> r(f.proto(), f.lo() - k, f.exact() ? kExactHi : f.hi() - k);
    for (int n = f.lo(); n <= f.stored_top(); ++n) {
        // binomial weight C(n, k): all numerator factors first, then the
        // factorial, so the running value never carries less p-content than
        // the final one and known zeros keep their certified modulus
        S v = f.coeff(n);
        for (int i = 0; i < k; ++i) v = ring_mul_int(v, n - i);
        for (int i = 2; i <= k; ++i) v = ring_div_int(std::move(v), i);
        r.set_coeff(n - k, std::move(v));
    }
    return r;
}

// Antiderivative with zero constant term.  The t^{-1} coefficient must be a
// known zero (the residue obstruction); its certified modulus is the caller's
// concern.
template <class S>
TruncSeries<S> integrate(const TruncSeries<S>& f) {
    TruncSeries<S> r(f.proto(), f.lo() + 1, f.exact() ? kExactHi : f.hi() + 1);
    for (int n = f.lo(); n <= f.stored_top(); ++n) {
        S v = f.coeff(n);
        if (n == -1) {
            if (!ring_known_zero(v))
                throw residue_error("integrate: nonzero t^-1 coefficient " + ring_str(v));
            continue;
        }
        r.set_coeff(n + 1, ring_div_int(std::move(v), n + 1));
    }
    return r;
}

// Multiplicative inverse.  The coefficient at f.lo() must be a unit.  out_hi
// caps the result degree (required when f is exact, since the inverse is not).
template <class S>
TruncSeries<S> recip(const TruncSeries<S>& f, int out_hi = kNoCap) {
    const int lo = f.true_order(); // skips stored exact-zero padding
    if (lo > f.hi())
        throw not_a_unit_error("recip: series has no certifiably nonzero coefficient");
    S lead = f.coeff(lo);
    if (ring_known_zero(lead))
        throw not_a_unit_error("recip: leading coefficient at t^" + std::to_string(lo) +
                               " is indistinguishable from zero");
    int support = 0;
    for (int n = lo; n <= f.stored_top(); ++n)
        if (!(ring_known_zero(f.coeff(n)) && ring_abs_prec(f.coeff(n)) >= kExactHi)) ++support;
    const int natural = f.exact() ? kExactHi : sat_deg(int64_t(f.hi()) - 2 * lo);
    const int hi = out_hi == kNoCap ? natural : std::min(natural, out_hi);
    if (hi >= kExactHi && support != 1)
        throw order_error("recip: exact input needs an explicit output truncation");
    S lead_inv = ring_inv(lead);
    if (hi >= kExactHi) // exact monomial: the inverse is exact too
        return TruncSeries<S>::monomial(lead_inv, -lo, kExactHi);
    const int nrel = hi + lo; // relative degree of the inverse power series
    std::vector<S> u, v;
    for (int j = 0; j <= nrel; ++j) u.push_back(f.coeff(lo + j));
    v.push_back(lead_inv);
    for (int n = 1; n <= nrel; ++n) {
        S acc = ring_zero(f.proto());
        for (int j = 1; j <= n; ++j) {
            if (ring_known_zero(u[size_t(j)]) && ring_abs_prec(u[size_t(j)]) >= kExactHi) continue;
            acc = acc + u[size_t(j)] * v[size_t(n - j)];
        }
        v.push_back(-(lead_inv * acc));
    }
    TruncSeries<S> r(f.proto(), -lo, hi);
    for (int n = 0; n <= nrel; ++n) r.set_coeff(-lo + n, v[size_t(n)]);
    return r;
}

// exp of a series with positive order.
template <class S>
TruncSeries<S> exp_series(const TruncSeries<S>& f, int out_hi = kNoCap) {
    for (int n = f.lo(); n <= std::min(0, f.stored_top()); ++n)
        if (!ring_known_zero(f.coeff(n)))
            throw order_error("exp_series: input must vanish at t^0 and below");
    const int hi = out_hi == kNoCap ? f.hi() : std::min(f.hi(), out_hi);
    if (hi >= kExactHi)
        throw order_error("exp_series: exact input needs an explicit output truncation");
    std::vector<S> b(size_t(hi + 1), ring_zero(f.proto())); // b_j = j * f_j
    for (int j = 1; j <= std::min(hi, f.stored_top()); ++j)
        b[size_t(j)] = ring_mul_int(f.coeff(j), j);
    std::vector<S> e;
    e.push_back(ring_one(f.proto()));
    for (int n = 1; n <= hi; ++n) {
        S acc = ring_zero(f.proto());
        for (int j = 1; j <= n; ++j) {
            if (ring_known_zero(b[size_t(j)]) && ring_abs_prec(b[size_t(j)]) >= kExactHi) continue;
            acc = acc + b[size_t(j)] * e[size_t(n - j)];
        }
        e.push_back(ring_div_int(std::move(acc), n));
    }
    TruncSeries<S> r(f.proto(), 0, hi);
    for (int n = 0; n <= hi; ++n) r.set_coeff(n, e[size_t(n)]);
    return r;
}

// log of a series with unit constant term.
template <class S>
TruncSeries<S> log_series(const TruncSeries<S>& f, int out_hi = kNoCap) {
    if (f.lo() > 0 || ring_known_zero(f.coeff(0)))
        throw not_a_unit_error("log_series: input needs a unit constant term");
    return integrate((derivative(f) * recip(f, out_hi == kNoCap ? f.hi() : out_hi))
                         .truncated(out_hi == kNoCap ? sat_deg(int64_t(f.hi()) - 1) : out_hi - 1));
}

// Substitute inner (order >= 1) into outer (a power series; coefficients of
// outer multiply via scale_coeffs, so outer's scalar type may be the
// coefficient ring of inner's).
template <class OuterS, class S>
TruncSeries<S> compose(const TruncSeries<OuterS>& outer, const TruncSeries<S>& inner) {
    for (int n = outer.lo(); n < 0; ++n)
        if (!ring_known_zero(outer.coeff(n)))
            throw order_error("compose: outer series has a pole");
    const int ord = inner.true_order();
    if (ord < 1) throw order_error("compose: inner series needs positive order");
    int hi = inner.hi();
    if (!outer.exact())
        hi = std::min(hi, sat_deg(int64_t(outer.hi() + 1) * ord - 1));
    if (hi >= kExactHi)
        throw order_error("compose: exact inputs need a finite truncation");
    TruncSeries<S> acc(inner.proto(), 0, hi);
    TruncSeries<S> P = TruncSeries<S>::constant(ring_one(inner.proto()), hi);
    const int dmax = std::min(outer.stored_top(), hi / std::max(ord, 1));
    for (int d = 0; d <= dmax; ++d) {
        if (d >= std::max(outer.lo(), 0)) {
            OuterS a = outer.coeff(d);
            if (!(ring_known_zero(a) && ring_abs_prec(a) >= kExactHi))
                acc = acc + scale_coeffs(P, a);
        }
        if (d < dmax) P = (P * inner).truncated(hi);
    }
    return acc;
}

// Coefficient-wise congruence over the common tracked window.
template <class S>
bool eq_mod_window(const TruncSeries<S>& a, const TruncSeries<S>& b, int k, int* bad_n = nullptr) {
    const int lo = std::min(a.lo(), b.lo());
    const int hi = std::min(a.hi(), b.hi());
    const int top = std::min(std::max(a.stored_top(), b.stored_top()), hi);
    for (int n = lo; n <= top; ++n) {
        if (!ring_is_zero_mod(a.coeff(n) - b.coeff(n), k)) {
            if (bad_n) *bad_n = n;
            return false;
        }
    }
    return true;
}

// Clamp every coefficient's certified absolute precision.
template <class S>
TruncSeries<S> clamp_coeffs(const TruncSeries<S>& f, int abs) {
    TruncSeries<S> r = f;
    for (int n = f.lo(); n <= f.stored_top(); ++n) r.set_coeff(n, ring_clamp(f.coeff(n), abs));
    return r;
}

// Smallest certified absolute precision across stored coefficients.
template <class S>
int min_abs_prec(const TruncSeries<S>& f) {
    int m = kExactHi;
    for (int n = f.lo(); n <= f.stored_top(); ++n) m = std::min(m, ring_abs_prec(f.coeff(n)));
    return m;
}

// --- ring interface for nested series ---

template <class S>
TruncSeries<S> ring_zero(const TruncSeries<S>& like) {
    return TruncSeries<S>(like.proto(), 0, kExactHi);
}
template <class S>
TruncSeries<S> ring_one(const TruncSeries<S>& like) {
    return TruncSeries<S>::constant(ring_one(like.proto()), kExactHi);
}
template <class S>
TruncSeries<S> ring_from_int(const TruncSeries<S>& like, int64_t v) {
    return TruncSeries<S>::constant(ring_from_int(like.proto(), v), kExactHi);
}
template <class S>
TruncSeries<S> ring_inv(const TruncSeries<S>& x) {
    return recip(x);
}
template <class S>
TruncSeries<S> ring_div_int(const TruncSeries<S>& x, int64_t n) {
    TruncSeries<S> r = x;
    for (int m = x.lo(); m <= x.stored_top(); ++m) r.set_coeff(m, ring_div_int(x.coeff(m), n));
    return r;
}
template <class S>
TruncSeries<S> ring_mul_int(const TruncSeries<S>& x, int64_t n) {
    TruncSeries<S> r = x;
    for (int m = x.lo(); m <= x.stored_top(); ++m) r.set_coeff(m, ring_mul_int(x.coeff(m), n));
    return r;
}
template <class S>
TruncSeries<S> ring_mul_p_pow(const TruncSeries<S>& x, int k) {
    TruncSeries<S> r = x;
    for (int m = x.lo(); m <= x.stored_top(); ++m) r.set_coeff(m, ring_mul_p_pow(x.coeff(m), k));
    return r;
}
template <class S>
bool ring_known_zero(const TruncSeries<S>& x) {
    for (int m = x.lo(); m <= x.stored_top(); ++m)
        if (!ring_known_zero(x.coeff(m))) return false;
    return true;
}
template <class S>
int ring_vp(const TruncSeries<S>& x) {
    // window-scoped lower bound; an unknown tail pins the bound at 0
    int v = x.exact() ? kExactHi : 0;
    for (int m = x.lo(); m <= x.stored_top(); ++m) v = std::min(v, ring_vp(x.coeff(m)));
    return v;
}
template <class S>
int ring_abs_prec(const TruncSeries<S>& x) {
    return min_abs_prec(x);
}
template <class S>
TruncSeries<S> ring_clamp(const TruncSeries<S>& x, int abs) {
    return clamp_coeffs(x, abs);
}
template <class S>
bool ring_is_zero_mod(const TruncSeries<S>& x, int k) {
    for (int m = x.lo(); m <= x.stored_top(); ++m)
        if (!ring_is_zero_mod(x.coeff(m), k)) return false;
    return true;
}
template <class S>
std::string ring_str(const TruncSeries<S>& x) {
    return x.str(4);
}

} // namespace padsig
