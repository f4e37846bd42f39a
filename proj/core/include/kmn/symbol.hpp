#pragma once

#include "kmn/errors.hpp"

#include <string>

namespace kmn {

enum class SymKind {
    Independent,  // t, x
    Dependent,    // u
    Jet,          // u_t, u_x, u_tx, ... (multi-index over {t,x})
    Parameter,    // m, n, k, eps, sigma, ...
    Reduction,    // omega, phi, phi', phi'', phi'''
};

/// A scalar symbol. Jet multi-indices are canonical by construction
/// (stored as counts of t- and x-derivatives, so u_tx == u_xt).
struct SymbolRef {
    SymKind kind = SymKind::Parameter;
    std::string name;  // "t", "x", "u", "m", ..., "omega", "phi"
    int dt = 0;        // Jet: #t-derivatives; Reduction phi: prime count
    int dx = 0;        // Jet: #x-derivatives

    // Hard cap for jet symbols created internally; the public
    // total_derivative contract caps at 4 (see expr.hpp).
    static constexpr int kMaxJetOrder = 5;
    static constexpr int kMaxPhiOrder = 3;

    static SymbolRef independent(std::string n) {
        return SymbolRef{SymKind::Independent, std::move(n), 0, 0};
    }
    static SymbolRef dependent() { return SymbolRef{SymKind::Dependent, "u", 0, 0}; }
    static SymbolRef jet(int dt, int dx) {
        if (dt < 0 || dx < 0 || dt + dx < 1 || dt + dx > kMaxJetOrder)
            throw OrderOverflow("jet order " + std::to_string(dt + dx) + " out of range");
        return SymbolRef{SymKind::Jet, "u", dt, dx};
    }
    static SymbolRef parameter(std::string n) {
        return SymbolRef{SymKind::Parameter, std::move(n), 0, 0};
    }
    static SymbolRef omega() { return SymbolRef{SymKind::Reduction, "omega", 0, 0}; }
    static SymbolRef phi(int primes) {
        if (primes < 0 || primes > kMaxPhiOrder)
            throw OrderOverflow("phi derivative order out of range");
        return SymbolRef{SymKind::Reduction, "phi", primes, 0};
    }

    int total_order() const { return dt + dx; }

    std::string display() const {
        if (kind == SymKind::Jet) {
            std::string s = "u_";
            s.append(static_cast<std::size_t>(dt), 't');
            s.append(static_cast<std::size_t>(dx), 'x');
            return s;
        }
        if (kind == SymKind::Reduction && name == "phi" && dt > 0)
            return "phi" + std::string(static_cast<std::size_t>(dt), '\'');
        return name;
    }

    friend int compare(const SymbolRef& a, const SymbolRef& b) {
        if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
        if (a.name != b.name) return a.name < b.name ? -1 : 1;
        if (a.dt != b.dt) return a.dt < b.dt ? -1 : 1;
        if (a.dx != b.dx) return a.dx < b.dx ? -1 : 1;
        return 0;
    }
    bool operator==(const SymbolRef& o) const { return compare(*this, o) == 0; }
};

}  // namespace kmn
