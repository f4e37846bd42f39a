#include "kmn/expr.hpp"

namespace kmn {

Expr differentiate(const Expr& e, const SymbolRef& s) {
    const bool wrt_t = (s.kind == SymKind::Independent && s.name == "t");
    switch (e.kind()) {
        case Expr::Kind::Number: return Expr::integer(0);
        case Expr::Kind::Symbol: return e.sym() == s ? Expr::integer(1) : Expr::integer(0);
        case Expr::Kind::FDeriv:
            return wrt_t ? Expr::fderiv(e.forder() + 1) : Expr::integer(0);
        case Expr::Kind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e.children().size());
            for (const Expr& k : e.children()) kids.push_back(differentiate(k, s));
            return Expr::sum(std::move(kids));
        }
        case Expr::Kind::Product: {
            std::vector<Expr> terms;
            const auto& kids = e.children();
            for (std::size_t i = 0; i < kids.size(); ++i) {
                Expr di = differentiate(kids[i], s);
                if (di.is_zero_literal()) continue;
                std::vector<Expr> fs;
                fs.reserve(kids.size());
                for (std::size_t j = 0; j < kids.size(); ++j) fs.push_back(j == i ? di : kids[j]);
                terms.push_back(Expr::product(std::move(fs)));
            }
            return Expr::sum(std::move(terms));
        }
        case Expr::Kind::Power: {
            const Expr& b = e.base();
            const Expr& ex = e.exponent();
            Expr db = differentiate(b, s);
            Expr dex = differentiate(ex, s);
            if (dex.is_zero_literal()) {
                // e * b^(e-1) * b'
                if (db.is_zero_literal()) return Expr::integer(0);
                return Expr::product(
                    {ex, Expr::power(b, Expr::sum({ex, Expr::integer(-1)})), db});
            }
            if (db.is_zero_literal())
                return Expr::product({e, Expr::elementary(Expr::Fn::Ln, b), dex});
            return Expr::product(
                {e, Expr::sum({Expr::product({dex, Expr::elementary(Expr::Fn::Ln, b)}),
                               Expr::product({ex, db, Expr::power(b, Expr::integer(-1))})})});
        }
        case Expr::Kind::Elementary: {
            Expr da = differentiate(e.arg(), s);
            if (da.is_zero_literal()) return Expr::integer(0);
            switch (e.fn()) {
                case Expr::Fn::Exp: return Expr::product({e, da});
                case Expr::Fn::Ln:
                    return Expr::product({da, Expr::power(e.arg(), Expr::integer(-1))});
                case Expr::Fn::Sin:
                    return Expr::product({Expr::elementary(Expr::Fn::Cos, e.arg()), da});
                case Expr::Fn::Cos:
                    return Expr::product(
                        {Expr::integer(-1), Expr::elementary(Expr::Fn::Sin, e.arg()), da});
                case Expr::Fn::Arctan:
                    return Expr::product(
                        {da, Expr::power(Expr::sum({Expr::integer(1),
                                                    Expr::power(e.arg(), Expr::integer(2))}),
                                         Expr::integer(-1))});
                case Expr::Fn::Sqrt:
                    return Expr::product(
                        {rat(1, 2), da, Expr::power(e, Expr::integer(-1))});
            }
            return Expr::integer(0);
        }
    }
    return Expr::integer(0);
}

Expr total_derivative(const Expr& e, char dir, int max_order) {
    if (dir != 't' && dir != 'x') throw DomainError("total_derivative direction must be t or x");
    const SymbolRef dsym = SymbolRef::independent(dir == 't' ? "t" : "x");
    Expr result = differentiate(e, dsym);  // explicit dependence incl. f-chain
    for (const Expr& leaf : leaves(e)) {
        if (leaf.kind() != Expr::Kind::Symbol) continue;
        const SymbolRef& s = leaf.sym();
        if (s.kind != SymKind::Dependent && s.kind != SymKind::Jet) continue;
        Expr partial = differentiate(e, s);
        if (partial.is_zero_literal()) continue;
        int ndt = s.dt + (dir == 't' ? 1 : 0);
        int ndx = s.dx + (dir == 'x' ? 1 : 0);
        if (ndt + ndx > max_order)
            throw OrderOverflow("total derivative would create a jet of order " +
                                std::to_string(ndt + ndx));
        result = result + Expr::symbol(SymbolRef::jet(ndt, ndx)) * partial;
    }
    return result;
}

Expr omega_total_derivative(const Expr& e) {
    Expr result = differentiate(e, SymbolRef::omega());
    for (const Expr& leaf : leaves(e)) {
        if (leaf.kind() != Expr::Kind::Symbol) continue;
        const SymbolRef& s = leaf.sym();
        if (!(s.kind == SymKind::Reduction && s.name == "phi")) continue;
        Expr partial = differentiate(e, s);
        if (partial.is_zero_literal()) continue;
        if (s.dt + 1 > SymbolRef::kMaxPhiOrder)
            throw OrderOverflow("omega derivative would need phi^(4)");
        result = result + Expr::symbol(SymbolRef::phi(s.dt + 1)) * partial;
    }
    return result;
}

namespace {

Expr substitute_walk(const Expr& e, const std::map<Expr, Expr, ExprLess>& b) {
    switch (e.kind()) {
        case Expr::Kind::Number: return e;
        case Expr::Kind::Symbol:
        case Expr::Kind::FDeriv: {
            auto it = b.find(e);
            return it == b.end() ? e : it->second;
        }
        case Expr::Kind::Elementary:
            return Expr::elementary(e.fn(), substitute_walk(e.arg(), b));
        case Expr::Kind::Power:
            return Expr::power(substitute_walk(e.base(), b), substitute_walk(e.exponent(), b));
        case Expr::Kind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e.children().size());
            for (const Expr& k : e.children()) kids.push_back(substitute_walk(k, b));
            return Expr::product(std::move(kids));
        }
        case Expr::Kind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e.children().size());
            for (const Expr& k : e.children()) kids.push_back(substitute_walk(k, b));
            return Expr::sum(std::move(kids));
        }
    }
    return e;
}

}  // namespace

Expr substitute(const Expr& e, const std::map<Expr, Expr, ExprLess>& bindings) {
    for (const auto& [key, val] : bindings) {
        if (key.kind() != Expr::Kind::Symbol && key.kind() != Expr::Kind::FDeriv)
            throw DomainError("substitution keys must be symbols or f-atoms");
        if (contains(val, key))
            throw CyclicSubstitution("binding for " + to_string(key) +
                                     " contains the bound symbol");
    }
    return substitute_walk(e, bindings);
}

}  // namespace kmn
