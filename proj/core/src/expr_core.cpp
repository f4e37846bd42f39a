#include "kmn/expr.hpp"

#include <algorithm>
#include <cmath>

namespace kmn {

namespace {

int kind_rank(Expr::Kind k) {
    switch (k) {
        case Expr::Kind::Number: return 0;
        case Expr::Kind::Symbol: return 1;
        case Expr::Kind::FDeriv: return 2;
        case Expr::Kind::Elementary: return 3;
        case Expr::Kind::Power: return 4;
        case Expr::Kind::Product: return 5;
        case Expr::Kind::Sum: return 6;
    }
    return 7;
}

bool is_eps(const Expr& e) {
    return e.kind() == Expr::Kind::Symbol && e.sym().kind == SymKind::Parameter &&
           e.sym().name == "eps";
}

// Exact q-th root of a non-negative integer, or -1.
long long iroot(long long v, long long q) {
    if (v < 0) return -1;
    if (v <= 1) return v;
    long long r = static_cast<long long>(std::llround(std::pow(static_cast<double>(v), 1.0 / static_cast<double>(q))));
    for (long long c = std::max(0LL, r - 2); c <= r + 2; ++c) {
        long long p = 1;
        bool over = false;
        for (long long i = 0; i < q; ++i) {
            if (p > v / std::max(1LL, c) && c > 1) { over = true; break; }
            p *= c;
        }
        if (!over && p == v) return c;
    }
    return -1;
}

}  // namespace

Expr::Expr() : node_(std::make_shared<const Node>()) {}

Expr Expr::number(const Rational& r) {
    Node n;
    n.kind = Kind::Number;
    n.value = r;
    return raw(std::move(n));
}

Expr Expr::symbol(const SymbolRef& s) {
    Node n;
    n.kind = Kind::Symbol;
    n.sym = s;
    return raw(std::move(n));
}

Expr Expr::fderiv(int order) {
    if (order < -1) throw OrderOverflow("f-derivative order below -1");
    if (order > 6) throw OrderOverflow("f-derivative order above 6");
    Node n;
    n.kind = Kind::FDeriv;
    n.forder = order;
    return raw(std::move(n));
}

int compare(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return 0;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case Expr::Kind::Number: {
            if (a.value() == b.value()) return 0;
            return a.value() < b.value() ? -1 : 1;
        }
        case Expr::Kind::Symbol: return compare(a.sym(), b.sym());
        case Expr::Kind::FDeriv: {
            if (a.forder() != b.forder()) return a.forder() < b.forder() ? -1 : 1;
            return 0;
        }
        case Expr::Kind::Elementary: {
            if (a.fn() != b.fn()) return static_cast<int>(a.fn()) < static_cast<int>(b.fn()) ? -1 : 1;
            return compare(a.arg(), b.arg());
        }
        default: break;
    }
    const auto& ka = a.children();
    const auto& kb = b.children();
    if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
    for (std::size_t i = 0; i < ka.size(); ++i) {
        int c = compare(ka[i], kb[i]);
        if (c != 0) return c;
    }
    return 0;
}

Expr Expr::elementary(Fn fn, const Expr& arg) {
    if (arg.is_number()) {
        const Rational& v = arg.value();
        switch (fn) {
            case Fn::Exp:
                if (v.is_zero()) return integer(1);
                break;
            case Fn::Ln:
                if (v.is_one()) return integer(0);
                break;
            case Fn::Sin:
            case Fn::Arctan:
                if (v.is_zero()) return integer(0);
                break;
            case Fn::Cos:
                if (v.is_zero()) return integer(1);
                break;
            case Fn::Sqrt: {
                if (v.is_zero() || v.is_one()) return arg;
                if (!v.is_negative()) {
                    long long rn = iroot(v.num(), 2), rd = iroot(v.den(), 2);
                    if (rn >= 0 && rd >= 0) return number(Rational(rn, rd));
                }
                break;
            }
        }
    }
    if (fn == Fn::Exp && arg.kind() == Kind::Elementary && arg.fn() == Fn::Ln) return arg.arg();
    if (fn == Fn::Ln && arg.kind() == Kind::Elementary && arg.fn() == Fn::Exp) return arg.arg();
    Node n;
    n.kind = Kind::Elementary;
    n.fn = fn;
    n.kids = {arg};
    return raw(std::move(n));
}

Expr Expr::power(const Expr& b, const Expr& e) {
    if (e.is_zero_literal()) return integer(1);
    if (e.is_one_literal()) return b;
    if (b.is_one_literal()) return integer(1);
    if (b.is_zero_literal()) {
        if (e.is_number() && e.value().is_negative())
            throw DomainError("zero raised to a negative power");
        if (e.is_number()) return integer(0);
        // 0^symbolic: keep (exponent may later instantiate to 0)
    }
    if (b.is_number() && e.is_number()) {
        const Rational& ev = e.value();
        if (ev.is_integer()) return number(b.value().pow_int(ev.num()));
        // exact rational root when one exists, e.g. 4^(1/2) or (8/27)^(2/3)
        if (!b.value().is_negative() && ev.den() <= 6) {
            long long rn = iroot(b.value().num(), ev.den());
            long long rd = iroot(b.value().den(), ev.den());
            if (rn >= 0 && rd >= 0) return number(Rational(rn, rd).pow_int(ev.num()));
        }
    }
    if (b.kind() == Kind::Power) return power(b.base(), product({b.exponent(), e}));
    if (b.kind() == Kind::Product) {
        std::vector<Expr> fs;
        fs.reserve(b.children().size());
        for (const Expr& f : b.children()) fs.push_back(power(f, e));
        return product(std::move(fs));
    }
    if (b.kind() == Kind::Sum && e.is_number() && e.value().is_integer()) {
        long long p = e.value().num();
        if (p >= 2 && p <= 8) {
            Expr r = b;
            for (long long i = 1; i < p; ++i) r = product({r, b});
            return r;
        }
    }
    if (is_eps(b) && e.is_number() && e.value().is_integer()) {
        long long r = ((e.value().num() % 2) + 2) % 2;
        return r == 0 ? integer(1) : b;
    }
    Node n;
    n.kind = Kind::Power;
    n.kids = {b, e};
    return raw(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
    // flatten
    std::vector<Expr> flat;
    flat.reserve(factors.size());
    for (Expr& f : factors) {
        if (f.kind() == Kind::Product)
            for (const Expr& g : f.children()) flat.push_back(g);
        else
            flat.push_back(std::move(f));
    }
    // distribute over the first sum factor, if any
    for (std::size_t i = 0; i < flat.size(); ++i) {
        if (flat[i].kind() == Kind::Sum) {
            std::vector<Expr> terms;
            terms.reserve(flat[i].children().size());
            for (const Expr& s : flat[i].children()) {
                std::vector<Expr> fs = flat;
                fs[i] = s;
                terms.push_back(product(std::move(fs)));
            }
            return sum(std::move(terms));
        }
    }
    // fold coefficient, merge equal bases
    Rational coeff(1);
    std::vector<std::pair<Expr, Expr>> bases;  // (base, exponent)
    for (const Expr& f : flat) {
        if (f.is_number()) {
            coeff *= f.value();
            if (coeff.is_zero()) return integer(0);
            continue;
        }
        Expr base = f, expo = integer(1);
        if (f.kind() == Kind::Power) {
            base = f.base();
            expo = f.exponent();
        }
        bool merged = false;
        for (auto& [b0, e0] : bases) {
            if (compare(b0, base) == 0) {
                e0 = sum({e0, expo});
                merged = true;
                break;
            }
        }
        if (!merged) bases.emplace_back(std::move(base), std::move(expo));
    }
    // rebuild factors through power() (handles eps^2, nested powers, sum
    // bases whose merged exponent became a small integer)
    std::vector<Expr> out;
    bool reexpand = false;
    for (auto& [b0, e0] : bases) {
        Expr f = power(b0, e0);
        if (f.is_number()) {
            coeff *= f.value();
            if (coeff.is_zero()) return integer(0);
            continue;
        }
        if (f.kind() == Kind::Sum || f.kind() == Kind::Product) reexpand = true;
        out.push_back(std::move(f));
    }
    if (reexpand) {
        out.push_back(number(coeff));
        return product(std::move(out));
    }
    std::sort(out.begin(), out.end(), ExprLess{});
    if (out.empty()) return number(coeff);
    if (!coeff.is_one()) {
        std::vector<Expr> withc;
        withc.reserve(out.size() + 1);
        withc.push_back(number(coeff));
        for (Expr& f : out) withc.push_back(std::move(f));
        Node n;
        n.kind = Kind::Product;
        n.kids = std::move(withc);
        return raw(std::move(n));
    }
    if (out.size() == 1) return out[0];
    Node n;
    n.kind = Kind::Product;
    n.kids = std::move(out);
    return raw(std::move(n));
}

namespace {

// Splits a normalized non-sum term into (rational coefficient, monomial).
std::pair<Rational, Expr> coeff_split(const Expr& term) {
    if (term.is_number()) return {term.value(), Expr::integer(1)};
    if (term.kind() == Expr::Kind::Product && term.children().front().is_number()) {
        const auto& kids = term.children();
        Rational c = kids.front().value();
        if (kids.size() == 2) return {c, kids[1]};
        std::vector<Expr> rest(kids.begin() + 1, kids.end());
        // children are already normalized, sorted, number-free
        return {c, Expr::product(std::move(rest))};
    }
    return {Rational(1), term};
}

}  // namespace

Expr Expr::sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    flat.reserve(terms.size());
    for (Expr& t : terms) {
        if (t.kind() == Kind::Sum)
            for (const Expr& s : t.children()) flat.push_back(s);
        else
            flat.push_back(std::move(t));
    }
    std::map<Expr, Rational, ExprLess> groups;
    for (const Expr& t : flat) {
        if (t.is_zero_literal()) continue;
        auto [c, mono] = coeff_split(t);
        auto it = groups.find(mono);
        if (it == groups.end())
            groups.emplace(std::move(mono), c);
        else
            it->second += c;
    }
    std::vector<Expr> out;
    out.reserve(groups.size());
    for (const auto& [mono, c] : groups) {
        if (c.is_zero()) continue;
        if (mono.is_one_literal())
            out.push_back(number(c));
        else if (c.is_one())
            out.push_back(mono);
        else
            out.push_back(product({number(c), mono}));
    }
    if (out.empty()) return integer(0);
    if (out.size() == 1) return out[0];
    std::sort(out.begin(), out.end(), ExprLess{});
    Node n;
    n.kind = Kind::Sum;
    n.kids = std::move(out);
    return raw(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) {
    return Expr::sum({a, Expr::product({Expr::integer(-1), b})});
}
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
    return Expr::product({a, Expr::power(b, Expr::integer(-1))});
}
Expr operator-(const Expr& a) { return Expr::product({Expr::integer(-1), a}); }

Expr normalize(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Number:
        case Expr::Kind::Symbol:
        case Expr::Kind::FDeriv: return e;
        case Expr::Kind::Elementary: return Expr::elementary(e.fn(), normalize(e.arg()));
        case Expr::Kind::Power: return Expr::power(normalize(e.base()), normalize(e.exponent()));
        case Expr::Kind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e.children().size());
            for (const Expr& k : e.children()) kids.push_back(normalize(k));
            return Expr::product(std::move(kids));
        }
        case Expr::Kind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e.children().size());
            for (const Expr& k : e.children()) kids.push_back(normalize(k));
            return Expr::sum(std::move(kids));
        }
    }
    return e;
}

namespace atoms {
Expr t() { return Expr::symbol(SymbolRef::independent("t")); }
Expr x() { return Expr::symbol(SymbolRef::independent("x")); }
Expr u() { return Expr::symbol(SymbolRef::dependent()); }
Expr jet(int dt, int dx) { return Expr::symbol(SymbolRef::jet(dt, dx)); }
Expr omega() { return Expr::symbol(SymbolRef::omega()); }
Expr phi(int primes) { return Expr::symbol(SymbolRef::phi(primes)); }
Expr param(const std::string& name) { return Expr::symbol(SymbolRef::parameter(name)); }
Expr eps() { return param("eps"); }
Expr f() { return Expr::fderiv(0); }
Expr ft() { return Expr::fderiv(1); }
Expr F() { return Expr::fderiv(-1); }
}  // namespace atoms

Expr rat(long long num, long long den) { return Expr::number(Rational(num, den)); }

namespace {
template <typename Pred>
bool any_node(const Expr& e, Pred&& pred) {
    if (pred(e)) return true;
    switch (e.kind()) {
        case Expr::Kind::Number:
        case Expr::Kind::Symbol:
        case Expr::Kind::FDeriv: return false;
        default:
            for (const Expr& k : e.children())
                if (any_node(k, pred)) return true;
            return false;
    }
}
}  // namespace

std::set<Expr, ExprLess> leaves(const Expr& e) {
    std::set<Expr, ExprLess> out;
    any_node(e, [&](const Expr& n) {
        if (n.kind() == Expr::Kind::Symbol || n.kind() == Expr::Kind::FDeriv) out.insert(n);
        return false;
    });
    return out;
}

bool contains(const Expr& e, const Expr& leaf) {
    return any_node(e, [&](const Expr& n) { return compare(n, leaf) == 0; });
}

bool contains_kind(const Expr& e, SymKind kind) {
    return any_node(e, [&](const Expr& n) {
        return n.kind() == Expr::Kind::Symbol && n.sym().kind == kind;
    });
}

int max_jet_order(const Expr& e) {
    int mx = 0;
    any_node(e, [&](const Expr& n) {
        if (n.kind() == Expr::Kind::Symbol &&
            (n.sym().kind == SymKind::Jet || n.sym().kind == SymKind::Dependent))
            mx = std::max(mx, n.sym().total_order());
        return false;
    });
    return mx;
}

std::size_t node_count(const Expr& e) {
    std::size_t n = 0;
    any_node(e, [&](const Expr&) {
        ++n;
        return false;
    });
    return n;
}

namespace {

// Exponent split: rational constant part and the symbolic remainder.
std::pair<Rational, Expr> exponent_split(const Expr& e) {
    if (e.is_number()) return {e.value(), Expr::integer(0)};
    if (e.kind() == Expr::Kind::Sum) {
        Rational c(0);
        std::vector<Expr> rest;
        for (const Expr& k : e.children()) {
            if (k.is_number())
                c += k.value();
            else
                rest.push_back(k);
        }
        return {c, Expr::sum(std::move(rest))};
    }
    return {Rational(0), e};
}

long long rational_floor(const Rational& r) {
    long long q = r.num() / r.den();
    if (r.num() < 0 && r.num() % r.den() != 0) --q;
    return q;
}

}  // namespace

Expr clear_power_sums(const Expr& e0) {
    Expr e = normalize(e0);
    // group sum-based powers by (base, non-integer exponent part)
    struct Group {
        Expr base, key;
        Rational min_full_const;
        Expr min_full;  // full exponent achieving the minimum integer offset
        bool seen = false;
    };
    std::vector<Group> groups;
    any_node(e, [&](const Expr& n) {
        if (n.kind() != Expr::Kind::Power || n.base().kind() != Expr::Kind::Sum) return false;
        auto [c, rest] = exponent_split(n.exponent());
        long long j = rational_floor(c);
        Rational frac = c - Rational(j);
        Expr key = Expr::sum({rest, Expr::number(frac)});
        for (Group& g : groups) {
            if (g.base == n.base() && g.key == key) {
                if (Rational(j) < g.min_full_const - frac) {
                    g.min_full_const = Rational(j) + frac;
                    g.min_full = n.exponent();
                }
                return false;
            }
        }
        groups.push_back({n.base(), key, Rational(j) + frac, n.exponent(), true});
        return false;
    });
    if (groups.empty()) return e;
    std::vector<Expr> factors = {e};
    bool any = false;
    for (const Group& g : groups) {
        // only clear when the minimal exponent is not already a nonnegative integer
        auto [c, rest] = exponent_split(g.min_full);
        if (rest.is_zero_literal() && c.is_integer() && !c.is_negative()) continue;
        factors.push_back(Expr::power(g.base, -g.min_full));
        any = true;
    }
    if (!any) return e;
    return Expr::product(std::move(factors));
}

Zeroness is_zero_cleared(const Expr& e) {
    Zeroness direct = is_zero(e);
    if (direct == Zeroness::SymbolicZero) return direct;
    Zeroness cleared = is_zero(clear_power_sums(e));
    if (cleared == Zeroness::SymbolicZero) return cleared;
    return direct == Zeroness::NumericZero || cleared == Zeroness::NumericZero
               ? Zeroness::NumericZero
               : Zeroness::NonZero;
}

}  // namespace kmn
