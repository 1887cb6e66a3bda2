#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "weblin/rational.hpp"

namespace weblin {

// Term tree for functions of the plane variables x, y. Nodes are immutable
// and shared; construction goes through the smart constructors below, which
// flatten nested sums/products, fold rational constants and apply the 0/1
// identities. Everything downstream (differentiation, evaluation, tape
// compilation) relies on that canonical form.

enum class Op : uint8_t { Const, Var, Add, Mul, Pow, Call };
enum class Fn : uint8_t { Exp, Log, Sin, Cos, Atan, Sqrt };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    Op op;
    Rat value;                // Const
    int var = 0;              // Var: 0 = x, 1 = y
    long ipow = 0;            // Pow exponent
    Fn fn = Fn::Exp;          // Call
    std::vector<Expr> kids;   // Add/Mul children, Pow base, Call argument
    uint64_t hash = 0;
};

namespace detail {

inline uint64_t hash_mix(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

inline uint64_t hash_rat(const Rat& q) {
    uint64_t h = 0xcbf29ce484222325ull;
    h = hash_mix(h, mpz_get_ui(q.get_num().get_mpz_t()));
    h = hash_mix(h, mpz_get_ui(q.get_den().get_mpz_t()));
    h = hash_mix(h, static_cast<uint64_t>(mpz_sgn(q.get_num().get_mpz_t()) + 1));
    h = hash_mix(h, mpz_sizeinbase(q.get_num().get_mpz_t(), 2));
    return h;
}

inline uint64_t node_hash(const ExprNode& n) {
    uint64_t h = static_cast<uint64_t>(n.op) * 0x100000001b3ull + 0x84222325ull;
    switch (n.op) {
        case Op::Const: h = hash_mix(h, hash_rat(n.value)); break;
        case Op::Var: h = hash_mix(h, static_cast<uint64_t>(n.var)); break;
        case Op::Pow: h = hash_mix(h, static_cast<uint64_t>(n.ipow)); break;
        case Op::Call: h = hash_mix(h, static_cast<uint64_t>(n.fn)); break;
        default: break;
    }
    for (const auto& k : n.kids) h = hash_mix(h, k->hash);
    return h;
}

}  // namespace detail

inline Expr make_node(ExprNode n) {
    n.hash = detail::node_hash(n);
    return std::make_shared<const ExprNode>(std::move(n));
}

// Deterministic structural order; the hash is only a fast path.
inline int expr_cmp(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return 0;
    if (a->op != b->op) return a->op < b->op ? -1 : 1;
    switch (a->op) {
        case Op::Const: {
            int c = cmp(a->value, b->value);
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Op::Var: return a->var < b->var ? -1 : (a->var > b->var ? 1 : 0);
        case Op::Pow: {
            int c = expr_cmp(a->kids[0], b->kids[0]);
            if (c) return c;
            return a->ipow < b->ipow ? -1 : (a->ipow > b->ipow ? 1 : 0);
        }
        case Op::Call: {
            if (a->fn != b->fn) return a->fn < b->fn ? -1 : 1;
            return expr_cmp(a->kids[0], b->kids[0]);
        }
        default: {
            size_t na = a->kids.size(), nb = b->kids.size();
            if (na != nb) return na < nb ? -1 : 1;
            for (size_t i = 0; i < na; ++i) {
                int c = expr_cmp(a->kids[i], b->kids[i]);
                if (c) return c;
            }
            return 0;
        }
    }
}

inline bool expr_equal(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (a->hash != b->hash) return false;
    return expr_cmp(a, b) == 0;
}

inline bool expr_less(const Expr& a, const Expr& b) {
    if (a->hash != b->hash) return a->hash < b->hash;
    return expr_cmp(a, b) < 0;
}

inline Expr num(Rat q) {
    ExprNode n;
    n.op = Op::Const;
    n.value = std::move(q);
    return make_node(std::move(n));
}
inline Expr num(long v) { return num(Rat(v)); }

inline Expr var(int idx) {
    ExprNode n;
    n.op = Op::Var;
    n.var = idx;
    return make_node(std::move(n));
}
inline Expr x_var() { return var(0); }
inline Expr y_var() { return var(1); }

inline bool is_const(const Expr& e) { return e->op == Op::Const; }
inline bool is_const(const Expr& e, long v) { return e->op == Op::Const && cmp(e->value, v) == 0; }

inline Expr add(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    Rat c(0);
    for (auto& t : terms) {
        if (t->op == Op::Const) {
            c += t->value;
        } else if (t->op == Op::Add) {
            for (const auto& k : t->kids) {
                if (k->op == Op::Const)
                    c += k->value;
                else
                    flat.push_back(k);
            }
        } else {
            flat.push_back(std::move(t));
        }
    }
    std::sort(flat.begin(), flat.end(), expr_less);
    if (!is_zero(c) || flat.empty()) flat.insert(flat.begin(), num(c));
    if (flat.size() == 1) return flat[0];
    ExprNode n;
    n.op = Op::Add;
    n.kids = std::move(flat);
    return make_node(std::move(n));
}

inline Expr mul(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    Rat c(1);
    for (auto& f : factors) {
        if (f->op == Op::Const) {
            c *= f->value;
        } else if (f->op == Op::Mul) {
            for (const auto& k : f->kids) {
                if (k->op == Op::Const)
                    c *= k->value;
                else
                    flat.push_back(k);
            }
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (is_zero(c)) return num(0);
    std::sort(flat.begin(), flat.end(), expr_less);
    if (cmp(c, 1) != 0 || flat.empty()) flat.insert(flat.begin(), num(c));
    if (flat.size() == 1) return flat[0];
    ExprNode n;
    n.op = Op::Mul;
    n.kids = std::move(flat);
    return make_node(std::move(n));
}

inline Expr pow(Expr base, long e) {
    if (e == 0) return num(1);
    if (e == 1) return base;
    if (base->op == Op::Const) {
        if (!is_zero(base->value)) return num(rat_pow(base->value, e));
        if (e > 0) return num(0);
        // 0^-k is kept as a node; evaluation reports the domain error
    }
    if (base->op == Op::Pow) return pow(base->kids[0], base->ipow * e);
    ExprNode n;
    n.op = Op::Pow;
    n.ipow = e;
    n.kids = {std::move(base)};
    return make_node(std::move(n));
}

inline Expr call(Fn fn, Expr arg) {
    if (arg->op == Op::Const) {
        const Rat& q = arg->value;
        switch (fn) {
            case Fn::Exp:
                if (is_zero(q)) return num(1);
                break;
            case Fn::Log:
                if (cmp(q, 1) == 0) return num(0);
                break;
            case Fn::Sin:
            case Fn::Atan:
                if (is_zero(q)) return num(0);
                break;
            case Fn::Cos:
                if (is_zero(q)) return num(1);
                break;
            case Fn::Sqrt:
                if (auto r = rat_sqrt(q)) return num(*r);
                break;
        }
    }
    ExprNode n;
    n.op = Op::Call;
    n.fn = fn;
    n.kids = {std::move(arg)};
    return make_node(std::move(n));
}

template <class... Es>
inline Expr add(Expr a, Expr b, Es... rest) {
    return add(std::vector<Expr>{std::move(a), std::move(b), std::move(rest)...});
}
template <class... Es>
inline Expr mul(Expr a, Expr b, Es... rest) {
    return mul(std::vector<Expr>{std::move(a), std::move(b), std::move(rest)...});
}
inline Expr neg(Expr a) { return mul(num(-1), std::move(a)); }
inline Expr sub(Expr a, Expr b) { return add(std::move(a), neg(std::move(b))); }
inline Expr inv(Expr a) { return pow(std::move(a), -1); }
inline Expr quot(Expr a, Expr b) { return mul(std::move(a), inv(std::move(b))); }

inline const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Exp: return "exp";
        case Fn::Log: return "log";
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Atan: return "arctan";
        case Fn::Sqrt: return "sqrt";
    }
    return "?";
}

namespace detail {

inline void print_expr(const Expr& e, std::string& out);

// precedence: 0 sum, 1 product, 2 power base
inline void print_child(const Expr& e, std::string& out, int prec) {
    bool paren = false;
    switch (e->op) {
        case Op::Add: paren = prec >= 1; break;
        case Op::Mul: paren = prec >= 2; break;
        case Op::Const: paren = prec >= 1 && sgn(e->value) < 0; break;
        case Op::Pow: paren = prec >= 2; break;
        default: break;
    }
    if (paren) out += '(';
    print_expr(e, out);
    if (paren) out += ')';
}

inline void print_expr(const Expr& e, std::string& out) {
    switch (e->op) {
        case Op::Const: out += rat_str(e->value); break;
        case Op::Var: out += (e->var == 0 ? 'x' : 'y'); break;
        case Op::Add:
            for (size_t i = 0; i < e->kids.size(); ++i) {
                if (i) out += " + ";
                print_child(e->kids[i], out, 1);
            }
            break;
        case Op::Mul:
            for (size_t i = 0; i < e->kids.size(); ++i) {
                if (i) out += '*';
                print_child(e->kids[i], out, 2);
            }
            break;
        case Op::Pow:
            print_child(e->kids[0], out, 2);
            out += '^';
            out += std::to_string(e->ipow);
            break;
        case Op::Call:
            out += fn_name(e->fn);
            out += '(';
            print_expr(e->kids[0], out);
            out += ')';
            break;
    }
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
    std::string out;
    detail::print_expr(e, out);
    return out;
}

}  // namespace weblin
