#include "kmn/expr.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace kmn {

namespace {

bool near_integer(double v) { return std::abs(v - std::llround(v)) < 1e-9; }

double checked_pow(double b, double e) {
    if (b == 0.0) {
        if (e < 0.0) throw DomainError("0 raised to a negative power");
        return e == 0.0 ? 1.0 : 0.0;
    }
    if (b < 0.0) {
        if (!near_integer(e))
            throw DomainError("negative base with fractional exponent");
        double r = std::pow(-b, e);
        return (std::llround(e) % 2 == 0) ? r : -r;
    }
    return std::pow(b, e);
}

double apply_fn(Expr::Fn fn, double a) {
    switch (fn) {
        case Expr::Fn::Exp: return std::exp(a);
        case Expr::Fn::Ln:
            if (a <= 0.0) throw DomainError("ln of non-positive value");
            return std::log(a);
        case Expr::Fn::Sin: return std::sin(a);
        case Expr::Fn::Cos: return std::cos(a);
        case Expr::Fn::Arctan: return std::atan(a);
        case Expr::Fn::Sqrt:
            if (a < 0.0) throw DomainError("sqrt of negative value");
            return std::sqrt(a);
    }
    return 0.0;
}

}  // namespace

double eval_numeric(const Expr& e, const EvalPoint& point) {
    switch (e.kind()) {
        case Expr::Kind::Number: return e.value().to_double();
        case Expr::Kind::Symbol:
        case Expr::Kind::FDeriv: {
            auto it = point.find(e);
            if (it == point.end()) throw UnboundSymbol("unbound symbol " + to_string(e));
            return it->second;
        }
        case Expr::Kind::Sum: {
            double s = 0.0;
            for (const Expr& k : e.children()) s += eval_numeric(k, point);
            return s;
        }
        case Expr::Kind::Product: {
            double p = 1.0;
            for (const Expr& k : e.children()) p *= eval_numeric(k, point);
            return p;
        }
        case Expr::Kind::Power:
            return checked_pow(eval_numeric(e.base(), point), eval_numeric(e.exponent(), point));
        case Expr::Kind::Elementary: return apply_fn(e.fn(), eval_numeric(e.arg(), point));
    }
    return 0.0;
}

namespace {

// splitmix64: deterministic across platforms, unlike the std distributions.
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
    // sampling window dodges ln/sqrt branch issues
    double sample() { return 0.5 + 1.5 * uniform01(); }
};

constexpr std::uint64_t kZeroTestSeed = 0x6b6d6e2d7a65726fULL;
constexpr int kZeroTestPoints = 16;
constexpr int kResampleAttempts = 8;
constexpr double kZeroTol = 1e-9;

}  // namespace

Zeroness is_zero(const Expr& e) {
    Expr n = normalize(e);
    if (n.is_zero_literal()) return Zeroness::SymbolicZero;
    std::vector<Expr> vars(leaves(n).begin(), leaves(n).end());
    Rng rng(kZeroTestSeed);
    for (int pt = 0; pt < kZeroTestPoints; ++pt) {
        double value = 0.0, scale = 0.0;
        bool ok = false;
        for (int attempt = 0; attempt <= kResampleAttempts && !ok; ++attempt) {
            EvalPoint point;
            for (const Expr& v : vars) point[v] = rng.sample();
            try {
                value = eval_numeric(n, point);
                scale = std::abs(value);
                if (n.kind() == Expr::Kind::Sum)
                    for (const Expr& term : n.children())
                        scale = std::max(scale, std::abs(eval_numeric(term, point)));
                ok = true;
            } catch (const DomainError&) {
                // resample
            }
        }
        if (!ok) throw EvalDomain("zero test could not find an evaluable sample point");
        if (!(std::abs(value) < kZeroTol * (1.0 + scale))) return Zeroness::NonZero;
    }
    return Zeroness::NumericZero;
}

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<Expr>& slot_leaves) {
    nslots_ = slot_leaves.size();
    struct Builder {
        const std::vector<Expr>& slots;
        std::vector<Instr>& prog;
        void walk(const Expr& n) {
            switch (n.kind()) {
                case Expr::Kind::Number:
                    prog.push_back({Op::Const, 0, n.value().to_double()});
                    return;
                case Expr::Kind::Symbol:
                case Expr::Kind::FDeriv: {
                    for (std::size_t i = 0; i < slots.size(); ++i) {
                        if (compare(slots[i], n) == 0) {
                            prog.push_back({Op::Slot, static_cast<int>(i), 0.0});
                            return;
                        }
                    }
                    throw UnboundSymbol("compile: no slot for " + to_string(n));
                }
                case Expr::Kind::Sum: {
                    for (const Expr& k : n.children()) walk(k);
                    prog.push_back({Op::Add, static_cast<int>(n.children().size()), 0.0});
                    return;
                }
                case Expr::Kind::Product: {
                    for (const Expr& k : n.children()) walk(k);
                    prog.push_back({Op::Mul, static_cast<int>(n.children().size()), 0.0});
                    return;
                }
                case Expr::Kind::Power:
                    walk(n.base());
                    walk(n.exponent());
                    prog.push_back({Op::Pow, 0, 0.0});
                    return;
                case Expr::Kind::Elementary:
                    walk(n.arg());
                    prog.push_back({Op::Fn, static_cast<int>(n.fn()), 0.0});
                    return;
            }
        }
    };
    Builder b{slot_leaves, prog_};
    b.walk(normalize(e));
}

double CompiledExpr::eval(const double* slots, std::size_t nslots) const {
    if (nslots != nslots_) throw DomainError("compiled expression slot count mismatch");
    double stack[64];
    int top = 0;
    for (const Instr& in : prog_) {
        switch (in.op) {
            case Op::Const: stack[top++] = in.c; break;
            case Op::Slot: stack[top++] = slots[in.a]; break;
            case Op::Add: {
                double s = 0.0;
                for (int i = 0; i < in.a; ++i) s += stack[--top];
                stack[top++] = s;
                break;
            }
            case Op::Mul: {
                double p = 1.0;
                for (int i = 0; i < in.a; ++i) p *= stack[--top];
                stack[top++] = p;
                break;
            }
            case Op::Pow: {
                double e = stack[--top];
                double b = stack[--top];
                stack[top++] = checked_pow(b, e);
                break;
            }
            case Op::Fn: {
                double a = stack[--top];
                stack[top++] = apply_fn(static_cast<Expr::Fn>(in.a), a);
                break;
            }
        }
        if (top >= 63) throw DomainError("compiled expression stack overflow");
    }
    return top == 1 ? stack[0] : 0.0;
}

}  // namespace kmn
