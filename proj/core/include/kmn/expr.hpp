#pragma once

#include "kmn/rational.hpp"
#include "kmn/symbol.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace kmn {

/// Immutable symbolic expression. Construction goes through the static
/// builders, which normalize eagerly:
///   - sums and products are flat and sorted, like monomials merged,
///   - rational constants folded exactly, zero/unit elements removed,
///   - integer powers of sums expanded, products distributed over sums,
///   - eps^2 rewritten to 1 (eps = +-1 by convention).
/// Value-semantic handle over a shared node; cheap to copy, safe to share
/// across threads.
class Expr {
public:
    enum class Kind { Number, Symbol, FDeriv, Elementary, Power, Product, Sum };
    enum class Fn { Exp, Ln, Sin, Cos, Arctan, Sqrt };

    Expr();  // zero

    static Expr number(const Rational& r);
    static Expr integer(long long v) { return number(Rational(v)); }
    static Expr symbol(const SymbolRef& s);
    /// f(t) derivative chain: order -1 is a fixed antiderivative F of f,
    /// 0 is f itself, r >= 1 is the r-th t-derivative.
    static Expr fderiv(int order);
    static Expr elementary(Fn fn, const Expr& arg);
    static Expr power(const Expr& base, const Expr& exponent);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);

    Kind kind() const { return node_->kind; }
    const Rational& value() const { return node_->value; }
    const SymbolRef& sym() const { return node_->sym; }
    int forder() const { return node_->forder; }
    Fn fn() const { return node_->fn; }
    const std::vector<Expr>& children() const { return node_->kids; }
    const Expr& base() const { return node_->kids[0]; }
    const Expr& exponent() const { return node_->kids[1]; }
    const Expr& arg() const { return node_->kids[0]; }

    bool is_number() const { return kind() == Kind::Number; }
    bool is_zero_literal() const { return is_number() && value().is_zero(); }
    bool is_one_literal() const { return is_number() && value().is_one(); }
    bool is_symbol_named(const SymbolRef& s) const {
        return kind() == Kind::Symbol && sym() == s;
    }

    friend int compare(const Expr& a, const Expr& b);
    bool operator==(const Expr& o) const { return compare(*this, o) == 0; }
    bool operator!=(const Expr& o) const { return !(*this == o); }

private:
    struct Node {
        Kind kind = Kind::Number;
        Rational value;
        SymbolRef sym;
        int forder = 0;
        Fn fn = Fn::Exp;
        std::vector<Expr> kids;
    };
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr raw(Node&& n) { return Expr(std::make_shared<const Node>(std::move(n))); }

    std::shared_ptr<const Node> node_;
};

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// Arithmetic sugar (all normalizing).
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// Re-canonicalizes an arbitrary expression bottom-up. Builders already
/// normalize, so this is idempotent: normalize(normalize(e)) == normalize(e).
Expr normalize(const Expr& e);

// Common leaves.
namespace atoms {
Expr t();
Expr x();
Expr u();
Expr jet(int dt, int dx);
Expr omega();
Expr phi(int primes = 0);
Expr param(const std::string& name);
Expr eps();
Expr f();    // FDeriv(0)
Expr ft();   // FDeriv(1)
Expr F();    // FDeriv(-1), fixed antiderivative
}  // namespace atoms

Expr rat(long long num, long long den = 1);

// --- structure queries ---

/// All distinct leaf atoms (symbols and f-derivatives) of e.
std::set<Expr, ExprLess> leaves(const Expr& e);
bool contains(const Expr& e, const Expr& leaf);
bool contains_kind(const Expr& e, SymKind kind);
/// Highest jet total order appearing in e (0 if none).
int max_jet_order(const Expr& e);
std::size_t node_count(const Expr& e);

// --- calculus ---

/// Partial derivative with respect to symbol s; every other symbol is a
/// constant. d/dt also advances the f-chain: FDeriv(r) -> FDeriv(r+1).
Expr differentiate(const Expr& e, const SymbolRef& s);

/// Total derivative on jet space:
///   D_dir e = de/ddir + sum_J u_{J,dir} * de/du_J
/// over every jet variable (including u itself) appearing in e.
/// Creating a jet beyond max_order throws OrderOverflow.
Expr total_derivative(const Expr& e, char dir, int max_order = 4);

/// d/domega with the phi-chain phi^{(j)} -> phi^{(j+1)}.
Expr omega_total_derivative(const Expr& e);

/// Simultaneous substitution of leaf atoms, then normalization.
/// A binding whose value contains its own key throws CyclicSubstitution.
Expr substitute(const Expr& e, const std::map<Expr, Expr, ExprLess>& bindings);

// --- numeric evaluation ---

using EvalPoint = std::map<Expr, double, ExprLess>;

/// IEEE double evaluation; every leaf of e must be bound.
double eval_numeric(const Expr& e, const EvalPoint& point);

enum class Zeroness { SymbolicZero, NumericZero, NonZero };

/// SymbolicZero iff normalize(e) is literally 0. Otherwise samples all
/// leaves at 16 seed-fixed pseudo-random points in [0.5, 2.0]:
/// NumericZero if |value| < 1e-9 * (1 + scale) at every point, where
/// scale is the largest |summand| at that point.
Zeroness is_zero(const Expr& e);

/// Multiplies e by positive powers of the sum-based denominators appearing
/// in it (grouped by base and by the non-integer part of the exponent), so
/// that integer-offset powers of the same base turn into polynomials and
/// can cancel. Zero is preserved: the factors are nonvanishing on the
/// working domain. Used to sharpen zero tests on defect-style expressions
/// over f-forms like (t+beta)^k * t^(1-k).
Expr clear_power_sums(const Expr& e);

/// is_zero after clear_power_sums.
Zeroness is_zero_cleared(const Expr& e);

/// Flattened postfix program for fast repeated evaluation.
class CompiledExpr {
public:
    CompiledExpr() = default;
    /// slots[i] supplies the value of slot_leaves[i] at eval time.
    CompiledExpr(const Expr& e, const std::vector<Expr>& slot_leaves);
    double eval(const double* slots, std::size_t nslots) const;

private:
    enum class Op : unsigned char { Const, Slot, Add, Mul, Pow, Fn };
    struct Instr {
        Op op;
        int a = 0;       // Slot index / arity / fn id
        double c = 0.0;  // Const payload
    };
    std::vector<Instr> prog_;
    std::size_t nslots_ = 0;
};

// --- text and JSON forms ---

/// Canonical printer; output reparses to the same expression.
std::string to_string(const Expr& e);

/// Parses the documented grammar (see README): integer literals, + - * / ^,
/// parentheses, function calls, jet names like u_tx, primed phi/f.
/// Throws SyntaxError (with byte offset) or UnknownSymbol.
Expr parse(std::string_view text);

std::string expr_to_json_string(const Expr& e);
Expr expr_from_json_string(std::string_view text);

}  // namespace kmn
