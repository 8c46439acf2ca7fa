#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "padsig/errors.hpp"

namespace padsig {

using std::int64_t;

// One monomial c * A4^a * A6^b of an integer polynomial in the curve
// coefficients.  Used for the Hasse polynomial H, whose coefficients stay
// small for desk-scale p.
struct HasseMono {
    int a = 0;
    int b = 0;
    int64_t c = 0;
};

namespace detail {

inline bool is_prime_small(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace detail

// Shared arithmetic context: the prime p, a power table p^0..p^cap sized so
// every table entry fits comfortably in int64, and the integer Hasse
// polynomial (coefficient of x^{p-1} in (x^3 + A4 x + A6)^{(p-1)/2}).
class ModulusContext {
public:
    explicit ModulusContext(int64_t p) : p_(p) {
        if (p < 5 || !detail::is_prime_small(p))
            throw config_error("ModulusContext: p must be a prime >= 5, got " + std::to_string(p));
        // Cap so p^cap < 2^62: products of residues stay exact in __int128.
        int64_t v = 1;
        pow_.push_back(1);
        while (v <= (int64_t(1) << 62) / p) {
            v *= p;
            pow_.push_back(v);
        }
        build_hasse();
    }

    int64_t p() const { return p_; }
    int cap() const { return int(pow_.size()) - 1; }

    int64_t pow_p(int k) const {
        if (k < 0 || k > cap())
            throw precision_error("ModulusContext: p^" + std::to_string(k) + " exceeds the representable range");
        return pow_[size_t(k)];
    }

    // Monomials of H, each (a, b, c) with 4a + 6b = p - 1.
    const std::vector<HasseMono>& hasse_monomials() const { return hasse_; }

private:
    // Coefficient of x^{p-1} in f(x)^{(p-1)/2} via the multinomial formula:
    // terms x^{3i} (A4 x)^j A6^k with i + j + k = (p-1)/2 and 3i + j = p - 1.
    void build_hasse() {
        const int m = int((p_ - 1) / 2);
        for (int i = 0; i <= m; ++i) {
            const int j = int(p_ - 1) - 3 * i;
            if (j < 0) continue;
            const int k = m - i - j;
            if (k < 0) continue;
            // multinomial m! / (i! j! k!), exact in int64 for desk-scale p
            long double approx = 1.0L;
            int64_t c = 1;
            {
                // build as C(m, i) * C(m-i, j)
                auto binom = [](int n, int r) -> int64_t {
                    if (r < 0 || r > n) return 0;
                    __int128 acc = 1;
                    for (int t = 1; t <= r; ++t) {
                        acc = acc * (n - r + t) / t;
                    }
                    return int64_t(acc);
                };
                c = binom(m, i);
                c *= binom(m - i, j);
                (void)approx;
            }
            hasse_.push_back(HasseMono{j, k, c});
        }
        if (hasse_.empty())
            throw error("ModulusContext: empty Hasse polynomial");
    }

    int64_t p_;
    std::vector<int64_t> pow_;
    std::vector<HasseMono> hasse_;
};

} // namespace padsig
