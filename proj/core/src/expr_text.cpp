#include "kmn/expr.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cstdint>
#include <optional>
#include <set>

namespace kmn {

namespace {

const char* fn_name(Expr::Fn fn) {
    switch (fn) {
        case Expr::Fn::Exp: return "exp";
        case Expr::Fn::Ln: return "ln";
        case Expr::Fn::Sin: return "sin";
        case Expr::Fn::Cos: return "cos";
        case Expr::Fn::Arctan: return "arctan";
        case Expr::Fn::Sqrt: return "sqrt";
    }
    return "?";
}

std::optional<Expr::Fn> fn_by_name(std::string_view n) {
    if (n == "exp") return Expr::Fn::Exp;
    if (n == "ln") return Expr::Fn::Ln;
    if (n == "sin") return Expr::Fn::Sin;
    if (n == "cos") return Expr::Fn::Cos;
    if (n == "arctan") return Expr::Fn::Arctan;
    if (n == "sqrt") return Expr::Fn::Sqrt;
    return std::nullopt;
}

std::string fderiv_name(int order) {
    if (order == -1) return "F";
    return "f" + std::string(static_cast<std::size_t>(order), '\'');
}

std::string print_node(const Expr& e);

// Operand of '^': parenthesize anything that is not a plain atom.
std::string print_power_operand(const Expr& e, bool exponent_side) {
    switch (e.kind()) {
        case Expr::Kind::Number: {
            const Rational& v = e.value();
            if (!v.is_negative() && v.is_integer()) return v.str();
            return "(" + v.str() + ")";
        }
        case Expr::Kind::Symbol: return e.sym().display();
        case Expr::Kind::FDeriv: return fderiv_name(e.forder());
        case Expr::Kind::Elementary:
            return std::string(fn_name(e.fn())) + "(" + print_node(e.arg()) + ")";
        default: return "(" + print_node(e) + ")";
    }
    (void)exponent_side;
}

std::string print_power(const Expr& base, const Expr& expo) {
    return print_power_operand(base, false) + "^" + print_power_operand(expo, true);
}

// A multiplicand inside a product; sums get parentheses.
std::string print_factor(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Sum:
        case Expr::Kind::Product: return "(" + print_node(e) + ")";
        case Expr::Kind::Power: return print_power(e.base(), e.exponent());
        default: return print_node(e);
    }
}

// Splits a term into sign and printed magnitude ("3*x/(2*u)" style).
std::pair<bool, std::string> print_signed_term(const Expr& e) {
    Rational coeff(1);
    std::vector<Expr> factors;
    if (e.is_number()) {
        coeff = e.value();
    } else if (e.kind() == Expr::Kind::Product) {
        for (const Expr& k : e.children()) {
            if (k.is_number())
                coeff *= k.value();
            else
                factors.push_back(k);
        }
    } else {
        factors.push_back(e);
    }
    bool negative = coeff.is_negative();
    long long cnum = negative ? -coeff.num() : coeff.num();
    long long cden = coeff.den();

    std::vector<std::string> numer, denom;
    if (cnum != 1 || factors.empty()) numer.push_back(std::to_string(cnum));
    if (cden != 1) denom.push_back(std::to_string(cden));
    for (const Expr& f : factors) {
        if (f.kind() == Expr::Kind::Power && f.exponent().is_number() &&
            f.exponent().value().is_integer() && f.exponent().value().is_negative()) {
            Rational p = -f.exponent().value();
            if (p.is_one())
                denom.push_back(print_factor(f.base()));
            else
                denom.push_back(print_power(f.base(), Expr::number(p)));
        } else {
            numer.push_back(print_factor(f));
        }
    }
    std::string s;
    for (std::size_t i = 0; i < numer.size(); ++i) {
        if (i) s += "*";
        s += numer[i];
    }
    if (!denom.empty()) {
        s += "/";
        if (denom.size() == 1) {
            s += denom[0];
        } else {
            s += "(";
            for (std::size_t i = 0; i < denom.size(); ++i) {
                if (i) s += "*";
                s += denom[i];
            }
            s += ")";
        }
    }
    return {negative, s};
}

std::string print_node(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Number: return e.value().str();
        case Expr::Kind::Symbol: return e.sym().display();
        case Expr::Kind::FDeriv: return fderiv_name(e.forder());
        case Expr::Kind::Elementary:
            return std::string(fn_name(e.fn())) + "(" + print_node(e.arg()) + ")";
        case Expr::Kind::Power: return print_power(e.base(), e.exponent());
        case Expr::Kind::Product: {
            auto [neg, body] = print_signed_term(e);
            return neg ? "-" + body : body;
        }
        case Expr::Kind::Sum: {
            std::string s;
            bool first = true;
            for (const Expr& term : e.children()) {
                auto [neg, body] = print_signed_term(term);
                if (first) {
                    s += neg ? "-" + body : body;
                    first = false;
                } else {
                    s += neg ? " - " : " + ";
                    s += body;
                }
            }
            return s;
        }
    }
    return "0";
}

}  // namespace

std::string to_string(const Expr& e) { return print_node(e); }

// ---------------------------------------------------------------- parsing

namespace {

bool parameter_known(std::string_view n) {
    static const std::set<std::string> names = {
        "m",     "n",      "k",      "eps",    "sigma",  "a",      "beta",
        "gamma", "gammaAmp", "c1",   "alpha",  "delta",  "kappa",  "mu0",
        "mu1",   "lambda", "delta0", "delta1", "delta2", "delta3"};
    return names.count(std::string(n)) != 0;
}

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
};

struct Parser {
    Lexer lex;

    Expr parse_expression() {
        Expr e = parse_term();
        while (true) {
            char c = lex.peek();
            if (c == '+') {
                ++lex.pos;
                e = e + parse_term();
            } else if (c == '-') {
                ++lex.pos;
                e = e - parse_term();
            } else {
                return e;
            }
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        while (true) {
            char c = lex.peek();
            if (c == '*') {
                ++lex.pos;
                e = e * parse_unary();
            } else if (c == '/') {
                ++lex.pos;
                e = e / parse_unary();
            } else {
                return e;
            }
        }
    }

    Expr parse_unary() {
        char c = lex.peek();
        if (c == '-') {
            ++lex.pos;
            return -parse_unary();
        }
        if (c == '+') {
            ++lex.pos;
            return parse_unary();
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (lex.peek() == '^') {
            ++lex.pos;
            Expr expo = parse_unary();
            return Expr::power(base, expo);
        }
        return base;
    }

    Expr parse_atom() {
        char c = lex.peek();
        std::size_t at = lex.pos;
        if (c == '\0') throw SyntaxError("unexpected end of input", at);
        if (c == '(') {
            ++lex.pos;
            Expr e = parse_expression();
            if (lex.peek() != ')') throw SyntaxError("expected ')'", lex.pos);
            ++lex.pos;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw SyntaxError(std::string("unexpected character '") + c + "'", at);
    }

    Expr parse_number() {
        std::size_t at = lex.pos;
        long long v = 0;
        while (lex.pos < lex.text.size() &&
               std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
            int d = lex.text[lex.pos] - '0';
            if (v > (INT64_MAX - d) / 10) throw SyntaxError("integer literal too large", at);
            v = v * 10 + d;
            ++lex.pos;
        }
        if (lex.pos < lex.text.size() && lex.text[lex.pos] == '.')
            throw SyntaxError("floating-point literals are not in the grammar; use rationals",
                              lex.pos);
        return Expr::integer(v);
    }

    Expr parse_ident() {
        std::size_t at = lex.pos;
        std::string name;
        while (lex.pos < lex.text.size()) {
            char ch = lex.text[lex.pos];
            if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
                name += ch;
                ++lex.pos;
            } else {
                break;
            }
        }
        int primes = 0;
        while (lex.pos < lex.text.size() && lex.text[lex.pos] == '\'') {
            ++primes;
            ++lex.pos;
        }
        // function call?
        if (primes == 0 && lex.peek() == '(') {
            if (auto fn = fn_by_name(name)) {
                ++lex.pos;
                Expr arg = parse_expression();
                if (lex.peek() != ')') throw SyntaxError("expected ')'", lex.pos);
                ++lex.pos;
                return Expr::elementary(*fn, arg);
            }
        }
        return resolve(name, primes, at);
    }

    static Expr resolve(const std::string& name, int primes, std::size_t at) {
        if (name == "f") return Expr::fderiv(primes);
        if (name == "F" && primes == 0) return Expr::fderiv(-1);
        if (name == "phi") {
            if (primes > SymbolRef::kMaxPhiOrder)
                throw SyntaxError("phi derivative order above " +
                                      std::to_string(SymbolRef::kMaxPhiOrder),
                                  at);
            return atoms::phi(primes);
        }
        if (primes > 0) throw SyntaxError("primes are only valid on f and phi", at);
        if (name == "t") return atoms::t();
        if (name == "x") return atoms::x();
        if (name == "u") return atoms::u();
        if (name == "omega") return atoms::omega();
        if (name.size() > 2 && name[0] == 'u' && name[1] == '_') {
            int dt = 0, dx = 0;
            for (std::size_t i = 2; i < name.size(); ++i) {
                if (name[i] == 't')
                    ++dt;
                else if (name[i] == 'x')
                    ++dx;
                else
                    throw UnknownSymbol(name, at);
            }
            if (dt + dx > SymbolRef::kMaxJetOrder)
                throw SyntaxError("jet order above " + std::to_string(SymbolRef::kMaxJetOrder),
                                  at);
            return atoms::jet(dt, dx);
        }
        if (parameter_known(name)) return atoms::param(name);
        throw UnknownSymbol(name, at);
    }
};

}  // namespace

Expr parse(std::string_view text) {
    Parser p{Lexer{text, 0}};
    Expr e = p.parse_expression();
    if (p.lex.peek() != '\0') throw SyntaxError("trailing input", p.lex.pos);
    return e;
}

// ------------------------------------------------------------------ JSON

namespace {

using json = nlohmann::ordered_json;

json to_json_node(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Number: return json{{"num", e.value().str()}};
        case Expr::Kind::Symbol: return json{{"sym", e.sym().display()}};
        case Expr::Kind::FDeriv: return json{{"fd", e.forder()}};
        case Expr::Kind::Elementary:
            return json{{"fn", fn_name(e.fn())}, {"arg", to_json_node(e.arg())}};
        case Expr::Kind::Power:
            return json{{"pow", json::array({to_json_node(e.base()), to_json_node(e.exponent())})}};
        case Expr::Kind::Product: {
            json kids = json::array();
            for (const Expr& k : e.children()) kids.push_back(to_json_node(k));
            return json{{"mul", kids}};
        }
        case Expr::Kind::Sum: {
            json kids = json::array();
            for (const Expr& k : e.children()) kids.push_back(to_json_node(k));
            return json{{"add", kids}};
        }
    }
    return json{{"num", "0"}};
}

Expr from_json_node(const json& j) {
    if (j.contains("num")) {
        std::string s = j["num"].get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos) return Expr::integer(std::stoll(s));
        return Expr::number(
            Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))));
    }
    if (j.contains("sym")) {
        std::string name = j["sym"].get<std::string>();
        int primes = 0;
        while (!name.empty() && name.back() == '\'') {
            name.pop_back();
            ++primes;
        }
        return Parser::resolve(name, primes, 0);
    }
    if (j.contains("fd")) return Expr::fderiv(j["fd"].get<int>());
    if (j.contains("fn")) {
        auto fn = fn_by_name(j["fn"].get<std::string>());
        if (!fn) throw SyntaxError("unknown function in JSON expression", 0);
        return Expr::elementary(*fn, from_json_node(j["arg"]));
    }
    if (j.contains("pow"))
        return Expr::power(from_json_node(j["pow"][0]), from_json_node(j["pow"][1]));
    if (j.contains("mul")) {
        std::vector<Expr> kids;
        for (const auto& k : j["mul"]) kids.push_back(from_json_node(k));
        return Expr::product(std::move(kids));
    }
    if (j.contains("add")) {
        std::vector<Expr> kids;
        for (const auto& k : j["add"]) kids.push_back(from_json_node(k));
        return Expr::sum(std::move(kids));
    }
    throw SyntaxError("unrecognized JSON expression node", 0);
}

}  // namespace

std::string expr_to_json_string(const Expr& e) { return to_json_node(e).dump(); }

Expr expr_from_json_string(std::string_view text) {
    return from_json_node(json::parse(text));
}

}  // namespace kmn
