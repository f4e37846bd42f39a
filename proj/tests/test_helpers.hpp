#pragma once

#include "kmn/expr.hpp"

#include <cstdint>
#include <vector>

namespace kmn::testing {

// Deterministic rng shared by the randomized suites (same on every run).
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    long long range(long long lo, long long hi) {  // inclusive
        return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

/// Random expression trees over a configurable symbol pool.
/// `numeric_exponents` keeps every Power exponent a literal rational so the
/// tree is evaluable without parameter bindings.
struct TreeGen {
    Rng rng;
    std::vector<Expr> pool;
    bool numeric_exponents = false;
    bool allow_elementary = true;

    explicit TreeGen(std::uint64_t seed) : rng(seed) {
        pool = {atoms::t(), atoms::x(), atoms::u(), atoms::jet(0, 1), atoms::jet(1, 0)};
    }

    Expr leaf() {
        switch (rng.range(0, 3)) {
            case 0: return Expr::number(Rational(rng.range(-4, 4), rng.range(1, 4)));
            default: return pool[static_cast<std::size_t>(rng.range(0, static_cast<long long>(pool.size()) - 1))];
        }
    }

    Expr capped(Expr e) { return node_count(e) > 120 ? leaf() : e; }

    Expr exponent() {
        if (!numeric_exponents && rng.range(0, 2) == 0) {
            // affine in a parameter, e.g. n - 2
            Expr p = atoms::param(rng.range(0, 1) == 0 ? "n" : "m");
            return p + Expr::integer(rng.range(-3, 2));
        }
        if (rng.range(0, 3) == 0) return Expr::number(Rational(rng.range(-3, 3), 2));
        return Expr::integer(rng.range(-2, 3));
    }

    /// Regenerates on builder exceptions (a random draw may hit e.g.
    /// zero to a negative power) and keeps trees at a workable size.
    Expr sample(int depth) {
        for (;;) {
            try {
                Expr e = gen(depth);
                if (node_count(e) <= 400) return e;
            } catch (const Error&) {
                // invalid draw; try again
            }
        }
    }

    Expr gen(int depth) {
        if (depth <= 0) return leaf();
        switch (rng.range(0, 9)) {
            case 0:
            case 1:
            case 2: {
                std::vector<Expr> kids;
                long long n = rng.range(2, 3);
                for (long long i = 0; i < n; ++i) kids.push_back(capped(gen(depth - 1)));
                return Expr::sum(std::move(kids));
            }
            case 3:
            case 4:
            case 5: {
                std::vector<Expr> kids;
                long long n = rng.range(2, 3);
                for (long long i = 0; i < n; ++i) kids.push_back(capped(gen(depth - 1)));
                return Expr::product(std::move(kids));
            }
            case 6:
            case 7: {
                Expr b = capped(gen(depth - 2 > 0 ? depth - 2 : 0));
                if (b.is_number() && b.value().is_negative()) b = -b;
                return Expr::power(b, exponent());
            }
            case 8:
                if (allow_elementary) {
                    auto fns = {Expr::Fn::Exp, Expr::Fn::Ln,    Expr::Fn::Sin,
                                Expr::Fn::Cos, Expr::Fn::Arctan, Expr::Fn::Sqrt};
                    Expr::Fn fn = *(fns.begin() + rng.range(0, 5));
                    // keep ln/sqrt arguments positive on the sampling window
                    Expr arg = (fn == Expr::Fn::Ln || fn == Expr::Fn::Sqrt)
                                   ? Expr::integer(1) + Expr::power(gen(depth - 2 > 0 ? depth - 2 : 0),
                                                                    Expr::integer(2))
                                   : gen(depth - 1);
                    return Expr::elementary(fn, arg);
                }
                return leaf();
            default: return leaf();
        }
    }
};

}  // namespace kmn::testing
