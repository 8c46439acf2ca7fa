#include <cstdio>

#include "padsig/context.hpp"

int main(int argc, char** argv) {
    long p = argc > 1 ? std::strtol(argv[1], nullptr, 10) : 5;
    padsig::ModulusContext ctx(p);
    std::printf("p = %ld, power table up to p^%d\n", p, ctx.cap());
    std::printf("Hasse polynomial monomials (coeff, A4 exp, A6 exp):\n");
    for (const auto& m : ctx.hasse_monomials())
        std::printf("  %lld * A4^%d * A6^%d\n", (long long)m.c, m.a, m.b);
    return 0;
}
