#include "safesynth/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

#include "safesynth/errors.hpp"

namespace safesynth {

namespace {

size_t combine(size_t seed, size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

FormulaRef node(Op op, std::string name, FormulaRef l, FormulaRef r) {
    auto f = std::make_shared<Formula>();
    f->op = op;
    f->name = std::move(name);
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    size_t h = static_cast<size_t>(op) * 0x100000001b3ULL;
    h = combine(h, std::hash<std::string>{}(f->name));
    if (f->lhs) h = combine(h, f->lhs->hash);
    if (f->rhs) h = combine(h, f->rhs->hash);
    f->hash = h;
    return f;
}

}  // namespace

FormulaRef mk_true() { return node(Op::True, "", nullptr, nullptr); }
FormulaRef mk_false() { return node(Op::False, "", nullptr, nullptr); }
FormulaRef mk_atom(const std::string& name) { return node(Op::Atom, name, nullptr, nullptr); }
FormulaRef mk_neg_atom(const std::string& name) { return node(Op::NegAtom, name, nullptr, nullptr); }
FormulaRef mk_not(FormulaRef f) { return node(Op::Not, "", std::move(f), nullptr); }
FormulaRef mk_and(FormulaRef l, FormulaRef r) { return node(Op::And, "", std::move(l), std::move(r)); }
FormulaRef mk_or(FormulaRef l, FormulaRef r) { return node(Op::Or, "", std::move(l), std::move(r)); }
FormulaRef mk_implies(FormulaRef l, FormulaRef r) { return node(Op::Implies, "", std::move(l), std::move(r)); }
FormulaRef mk_next(FormulaRef f) { return node(Op::Next, "", std::move(f), nullptr); }
FormulaRef mk_until(FormulaRef l, FormulaRef r) { return node(Op::Until, "", std::move(l), std::move(r)); }
FormulaRef mk_release(FormulaRef l, FormulaRef r) { return node(Op::Release, "", std::move(l), std::move(r)); }
FormulaRef mk_finally(FormulaRef f) { return node(Op::Finally, "", std::move(f), nullptr); }
FormulaRef mk_globally(FormulaRef f) { return node(Op::Globally, "", std::move(f), nullptr); }

bool is_unary(Op op) {
    return op == Op::Not || op == Op::Next || op == Op::Finally || op == Op::Globally;
}

bool is_binary(Op op) {
    return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Until ||
           op == Op::Release;
}

bool structurally_equal(const FormulaRef& a, const FormulaRef& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->op != b->op || a->name != b->name) return false;
    return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
}

bool structurally_less(const FormulaRef& a, const FormulaRef& b) {
    if (a.get() == b.get()) return false;
    if (!a) return static_cast<bool>(b);
    if (!b) return false;
    if (a->op != b->op) return a->op < b->op;
    if (a->name != b->name) return a->name < b->name;
    if (!structurally_equal(a->lhs, b->lhs)) return structurally_less(a->lhs, b->lhs);
    return structurally_less(a->rhs, b->rhs);
}

std::set<std::string> atoms_of(const FormulaRef& f) {
    std::set<std::string> out;
    std::function<void(const FormulaRef&)> walk = [&](const FormulaRef& g) {
        if (!g) return;
        if (g->op == Op::Atom || g->op == Op::NegAtom) out.insert(g->name);
        walk(g->lhs);
        walk(g->rhs);
    };
    walk(f);
    return out;
}

// ---------------------------------------------------------------------------
// printing

namespace {

const char* op_token(Op op) {
    switch (op) {
        case Op::And: return "&";
        case Op::Or: return "|";
        case Op::Implies: return "->";
        case Op::Until: return "U";
        case Op::Release: return "R";
        case Op::Not: return "!";
        case Op::Next: return "X";
        case Op::Finally: return "F";
        case Op::Globally: return "G";
        default: return "?";
    }
}

void print_rec(std::ostringstream& os, const FormulaRef& f) {
    auto child = [&](const FormulaRef& c) {
        if (is_binary(c->op)) {
            os << "(";
            print_rec(os, c);
            os << ")";
        } else {
            print_rec(os, c);
        }
    };
    switch (f->op) {
        case Op::True: os << "true"; break;
        case Op::False: os << "false"; break;
        case Op::Atom: os << f->name; break;
        case Op::NegAtom: os << "!" << f->name; break;
        case Op::Not:
            os << "!";
            child(f->lhs);
            break;
        case Op::Next:
        case Op::Finally:
        case Op::Globally:
            os << op_token(f->op) << " ";
            child(f->lhs);
            break;
        default:
            child(f->lhs);
            os << " " << op_token(f->op) << " ";
            child(f->rhs);
            break;
    }
}

}  // namespace

std::string to_string(const FormulaRef& f) {
    std::ostringstream os;
    print_rec(os, f);
    return os.str();
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Token {
    enum Kind { Ident, True, False, Not, And, Or, Implies, Next, UntilT, ReleaseT,
                FinallyT, GloballyT, LParen, RParen, End } kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return cur_; }

    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else {
                break;
            }
        }
        int line = line_, col = col_;
        if (pos_ >= text_.size()) {
            cur_ = {Token::End, "", line, col};
            return;
        }
        char c = text_[pos_];
        auto single = [&](Token::Kind k, const char* s) {
            ++pos_;
            ++col_;
            cur_ = {k, s, line, col};
        };
        switch (c) {
            case '(': single(Token::LParen, "("); return;
            case ')': single(Token::RParen, ")"); return;
            case '!': single(Token::Not, "!"); return;
            case '&': single(Token::And, "&"); return;
            case '|': single(Token::Or, "|"); return;
            case '-':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                    pos_ += 2;
                    col_ += 2;
                    cur_ = {Token::Implies, "->", line, col};
                    return;
                }
                throw ParseError("unknown token '-'", line, col);
            default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
                ++col_;
            }
            std::string word = text_.substr(start, pos_ - start);
            Token::Kind k = Token::Ident;
            if (word == "true") k = Token::True;
            else if (word == "false") k = Token::False;
            else if (word == "X") k = Token::Next;
            else if (word == "U") k = Token::UntilT;
            else if (word == "R") k = Token::ReleaseT;
            else if (word == "F") k = Token::FinallyT;
            else if (word == "G") k = Token::GloballyT;
            cur_ = {k, word, line, col};
            return;
        }
        throw ParseError(std::string("unknown token '") + c + "'", line, col);
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_{Token::End, "", 1, 1};
};

// implies > or > and > until/release > unary, loosest-first descent
class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    FormulaRef parse() {
        FormulaRef f = implies_expr();
        const Token& t = lex_.peek();
        if (t.kind != Token::End)
            throw ParseError("unexpected token '" + t.text + "'", t.line, t.col);
        return f;
    }

private:
    FormulaRef implies_expr() {
        FormulaRef l = or_expr();
        if (lex_.peek().kind == Token::Implies) {
            lex_.take();
            return mk_implies(l, implies_expr());
        }
        return l;
    }

    FormulaRef or_expr() {
        FormulaRef l = and_expr();
        while (lex_.peek().kind == Token::Or) {
            lex_.take();
            l = mk_or(l, and_expr());
        }
        return l;
    }

    FormulaRef and_expr() {
        FormulaRef l = until_expr();
        while (lex_.peek().kind == Token::And) {
            lex_.take();
            l = mk_and(l, until_expr());
        }
        return l;
    }

    FormulaRef until_expr() {
        FormulaRef l = unary_expr();
        Token::Kind k = lex_.peek().kind;
        if (k == Token::UntilT || k == Token::ReleaseT) {
            lex_.take();
            FormulaRef r = until_expr();  // right-associative
            return k == Token::UntilT ? mk_until(l, r) : mk_release(l, r);
        }
        return l;
    }

    FormulaRef unary_expr() {
        const Token t = lex_.peek();
        switch (t.kind) {
            case Token::Not: {
                lex_.take();
                FormulaRef inner = unary_expr();
                // a negated atom is already a literal
                if (inner->op == Op::Atom) return mk_neg_atom(inner->name);
                return mk_not(inner);
            }
            case Token::Next: lex_.take(); return mk_next(unary_expr());
            case Token::FinallyT: lex_.take(); return mk_finally(unary_expr());
            case Token::GloballyT: lex_.take(); return mk_globally(unary_expr());
            case Token::True: lex_.take(); return mk_true();
            case Token::False: lex_.take(); return mk_false();
            case Token::Ident: lex_.take(); return mk_atom(t.text);
            case Token::LParen: {
                lex_.take();
                FormulaRef f = implies_expr();
                const Token& close = lex_.peek();
                if (close.kind != Token::RParen)
                    throw ParseError("expected ')'", close.line, close.col);
                lex_.take();
                return f;
            }
            case Token::End:
                throw ParseError("unexpected end of input", t.line, t.col);
            default:
                throw ParseError("unexpected token '" + t.text + "'", t.line, t.col);
        }
    }

    Lexer lex_;
};

}  // namespace

FormulaRef parse_ltl(const std::string& text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// normal forms

FormulaRef expand_abbreviations(const FormulaRef& f) {
    switch (f->op) {
        case Op::Finally: return mk_until(mk_true(), expand_abbreviations(f->lhs));
        case Op::Globally: return mk_release(mk_false(), expand_abbreviations(f->lhs));
        default: break;
    }
    FormulaRef l = f->lhs ? expand_abbreviations(f->lhs) : nullptr;
    FormulaRef r = f->rhs ? expand_abbreviations(f->rhs) : nullptr;
    if (l == f->lhs && r == f->rhs) return f;
    return node(f->op, f->name, l, r);
}

bool is_nnf(const FormulaRef& f) {
    if (!f) return true;
    if (f->op == Op::Not || f->op == Op::Implies) return false;
    return is_nnf(f->lhs) && is_nnf(f->rhs);
}

namespace {

FormulaRef push_neg(const FormulaRef& f, bool neg) {
    switch (f->op) {
        case Op::True: return neg ? mk_false() : mk_true();
        case Op::False: return neg ? mk_true() : mk_false();
        case Op::Atom: return neg ? mk_neg_atom(f->name) : mk_atom(f->name);
        case Op::NegAtom: return neg ? mk_atom(f->name) : mk_neg_atom(f->name);
        case Op::Not: return push_neg(f->lhs, !neg);
        case Op::Implies:
            // l -> r becomes !l | r before pushing
            return neg ? mk_and(push_neg(f->lhs, false), push_neg(f->rhs, true))
                       : mk_or(push_neg(f->lhs, true), push_neg(f->rhs, false));
        case Op::And:
            return neg ? mk_or(push_neg(f->lhs, true), push_neg(f->rhs, true))
                       : mk_and(push_neg(f->lhs, false), push_neg(f->rhs, false));
        case Op::Or:
            return neg ? mk_and(push_neg(f->lhs, true), push_neg(f->rhs, true))
                       : mk_or(push_neg(f->lhs, false), push_neg(f->rhs, false));
        case Op::Next: return mk_next(push_neg(f->lhs, neg));
        case Op::Until:
            return neg ? mk_release(push_neg(f->lhs, true), push_neg(f->rhs, true))
                       : mk_until(push_neg(f->lhs, false), push_neg(f->rhs, false));
        case Op::Release:
            return neg ? mk_until(push_neg(f->lhs, true), push_neg(f->rhs, true))
                       : mk_release(push_neg(f->lhs, false), push_neg(f->rhs, false));
        case Op::Finally:
            return neg ? mk_globally(push_neg(f->lhs, true)) : mk_finally(push_neg(f->lhs, false));
        case Op::Globally:
            return neg ? mk_finally(push_neg(f->lhs, true)) : mk_globally(push_neg(f->lhs, false));
    }
    throw std::logic_error("push_neg: bad op");
}

}  // namespace

FormulaRef to_nnf(const FormulaRef& f) { return push_neg(f, false); }

FragmentClass classify(const FormulaRef& f) {
    if (!is_nnf(f)) throw std::invalid_argument("classify: formula is not in NNF");
    bool has_until = false, has_release = false;
    std::function<void(const FormulaRef&)> walk = [&](const FormulaRef& g) {
        if (!g) return;
        if (g->op == Op::Until || g->op == Op::Finally) has_until = true;
        if (g->op == Op::Release || g->op == Op::Globally) has_release = true;
        walk(g->lhs);
        walk(g->rhs);
    };
    walk(f);
    if (!has_until && !has_release) return FragmentClass::Both;
    if (!has_until) return FragmentClass::Safety;
    if (!has_release) return FragmentClass::CoSafety;
    return FragmentClass::Neither;
}

FormulaRef negate_nnf(const FormulaRef& f) {
    switch (f->op) {
        case Op::True: return mk_false();
        case Op::False: return mk_true();
        case Op::Atom: return mk_neg_atom(f->name);
        case Op::NegAtom: return mk_atom(f->name);
        case Op::And: return mk_or(negate_nnf(f->lhs), negate_nnf(f->rhs));
        case Op::Or: return mk_and(negate_nnf(f->lhs), negate_nnf(f->rhs));
        case Op::Next: return mk_next(negate_nnf(f->lhs));
        case Op::Until: return mk_release(negate_nnf(f->lhs), negate_nnf(f->rhs));
        case Op::Release: return mk_until(negate_nnf(f->lhs), negate_nnf(f->rhs));
        case Op::Finally: return mk_globally(negate_nnf(f->lhs));
        case Op::Globally: return mk_finally(negate_nnf(f->lhs));
        default:
            throw std::invalid_argument("negate_nnf: formula is not in NNF");
    }
}

// ---------------------------------------------------------------------------
// lasso semantics

namespace {

// Truth of every subformula at every position of the lasso unrolling
// stem + loop, with the successor of the final position wrapping to the
// loop head. Until/Release are least/greatest fixpoints over that graph.
struct LassoEval {
    const std::vector<Letter>& letters;
    size_t stem_len;

    size_t n() const { return letters.size(); }
    size_t next(size_t i) const { return i + 1 < n() ? i + 1 : stem_len; }

    std::vector<char> eval(const FormulaRef& f) {
        std::vector<char> v(n());
        switch (f->op) {
            case Op::True: std::fill(v.begin(), v.end(), 1); break;
            case Op::False: break;
            case Op::Atom:
                for (size_t i = 0; i < n(); ++i) v[i] = letters[i].count(f->name) != 0;
                break;
            case Op::NegAtom:
                for (size_t i = 0; i < n(); ++i) v[i] = letters[i].count(f->name) == 0;
                break;
            case Op::Not: {
                auto c = eval(f->lhs);
                for (size_t i = 0; i < n(); ++i) v[i] = !c[i];
                break;
            }
            case Op::And: {
                auto l = eval(f->lhs), r = eval(f->rhs);
                for (size_t i = 0; i < n(); ++i) v[i] = l[i] && r[i];
                break;
            }
            case Op::Or: {
                auto l = eval(f->lhs), r = eval(f->rhs);
                for (size_t i = 0; i < n(); ++i) v[i] = l[i] || r[i];
                break;
            }
            case Op::Implies: {
                auto l = eval(f->lhs), r = eval(f->rhs);
                for (size_t i = 0; i < n(); ++i) v[i] = !l[i] || r[i];
                break;
            }
            case Op::Next: {
                auto c = eval(f->lhs);
                for (size_t i = 0; i < n(); ++i) v[i] = c[next(i)];
                break;
            }
            case Op::Until: {
                auto l = eval(f->lhs), r = eval(f->rhs);
                v = lfp(l, r);
                break;
            }
            case Op::Release: {
                auto l = eval(f->lhs), r = eval(f->rhs);
                v = gfp(l, r);
                break;
            }
            case Op::Finally: {
                std::vector<char> top(n(), 1);
                v = lfp(top, eval(f->lhs));
                break;
            }
            case Op::Globally: {
                std::vector<char> bot(n(), 0);
                v = gfp(bot, eval(f->lhs));
                break;
            }
        }
        return v;
    }

    std::vector<char> lfp(const std::vector<char>& l, const std::vector<char>& r) {
        std::vector<char> v(r);
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t k = n(); k-- > 0;) {
                char nv = r[k] || (l[k] && v[next(k)]);
                if (nv != v[k]) {
                    v[k] = nv;
                    changed = true;
                }
            }
        }
        return v;
    }

    std::vector<char> gfp(const std::vector<char>& l, const std::vector<char>& r) {
        std::vector<char> v(n(), 1);
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t k = n(); k-- > 0;) {
                char nv = r[k] && (l[k] || v[next(k)]);
                if (nv != v[k]) {
                    v[k] = nv;
                    changed = true;
                }
            }
        }
        return v;
    }
};

}  // namespace

bool eval_lasso(const FormulaRef& f, const LassoTrace& t) {
    if (t.loop.empty()) throw std::invalid_argument("eval_lasso: empty loop");
    std::vector<Letter> letters = t.stem;
    letters.insert(letters.end(), t.loop.begin(), t.loop.end());
    LassoEval ev{letters, t.stem.size()};
    return ev.eval(f)[0] != 0;
}

// ---------------------------------------------------------------------------
// finite good-prefix semantics

namespace {

bool good_prefix_at(const FormulaRef& f, const Trace& rho, size_t i,
                    std::map<std::pair<const Formula*, size_t>, bool>& memo) {
    auto key = std::make_pair(f.get(), i);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    size_t last = rho.size() - 1;
    bool v = false;
    switch (f->op) {
        case Op::True: v = true; break;
        case Op::False: v = false; break;
        case Op::Atom: v = rho[i].count(f->name) != 0; break;
        case Op::NegAtom: v = rho[i].count(f->name) == 0; break;
        case Op::And:
            v = good_prefix_at(f->lhs, rho, i, memo) && good_prefix_at(f->rhs, rho, i, memo);
            break;
        case Op::Or:
            v = good_prefix_at(f->lhs, rho, i, memo) || good_prefix_at(f->rhs, rho, i, memo);
            break;
        case Op::Next:
            // no successor at the last position
            v = i < last && good_prefix_at(f->lhs, rho, i + 1, memo);
            break;
        case Op::Until:
            for (size_t j = i; j <= last && !v; ++j) {
                if (!good_prefix_at(f->rhs, rho, j, memo)) continue;
                bool all = true;
                for (size_t k = i; k < j && all; ++k)
                    all = good_prefix_at(f->lhs, rho, k, memo);
                v = all;
            }
            break;
        case Op::Finally:
            for (size_t j = i; j <= last && !v; ++j) v = good_prefix_at(f->lhs, rho, j, memo);
            break;
        default:
            throw std::invalid_argument("eval_finite_good_prefix: not a co-safety formula");
    }
    memo.emplace(key, v);
    return v;
}

}  // namespace

bool eval_finite_good_prefix(const FormulaRef& psi, const Trace& rho) {
    if (rho.empty()) throw std::invalid_argument("eval_finite_good_prefix: empty trace");
    if (!in_cosafety_fragment(classify(psi)))
        throw std::invalid_argument("eval_finite_good_prefix: not a co-safety formula: " +
                                    to_string(psi));
    std::map<std::pair<const Formula*, size_t>, bool> memo;
    return good_prefix_at(psi, rho, 0, memo);
}

// ---------------------------------------------------------------------------
// bounded-eventuality expansion

namespace {

FormulaRef unfold_until(const FormulaRef& l, const FormulaRef& r, const FormulaRef& orig,
                        unsigned steps) {
    if (steps == 1) return r;
    FormulaRef tail = mk_next(unfold_until(l, r, orig, steps - 1));
    // F is the degenerate Until with a true left operand
    FormulaRef conj = l->op == Op::True ? tail : mk_and(l, tail);
    return mk_or(r, conj);
}

}  // namespace

FormulaRef expand_until(const FormulaRef& f, unsigned l) {
    if (l < 1) throw std::invalid_argument("expand_until: expansion length must be >= 1");
    if (!is_nnf(f)) throw std::invalid_argument("expand_until: formula is not in NNF");
    switch (f->op) {
        case Op::Until:
            return unfold_until(expand_until(f->lhs, l), expand_until(f->rhs, l), f, l);
        case Op::Finally:
            return unfold_until(mk_true(), expand_until(f->lhs, l), f, l);
        default: break;
    }
    FormulaRef lc = f->lhs ? expand_until(f->lhs, l) : nullptr;
    FormulaRef rc = f->rhs ? expand_until(f->rhs, l) : nullptr;
    if (lc == f->lhs && rc == f->rhs) return f;
    return node(f->op, f->name, lc, rc);
}

// ---------------------------------------------------------------------------
// partitions

std::vector<std::string> Partition::atoms() const {
    std::vector<std::string> all = inputs;
    all.insert(all.end(), outputs.begin(), outputs.end());
    return all;
}

bool Partition::contains(const std::string& name) const {
    return std::find(inputs.begin(), inputs.end(), name) != inputs.end() ||
           std::find(outputs.begin(), outputs.end(), name) != outputs.end();
}

Partition parse_partition(const std::string& text) {
    Partition part;
    bool saw_inputs = false, saw_outputs = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        std::vector<std::string>* dst = nullptr;
        if (head == ".inputs") {
            if (saw_inputs) throw ParseError("duplicate .inputs line", lineno, 1);
            saw_inputs = true;
            dst = &part.inputs;
        } else if (head == ".outputs") {
            if (saw_outputs) throw ParseError("duplicate .outputs line", lineno, 1);
            saw_outputs = true;
            dst = &part.outputs;
        } else {
            throw ParseError("expected .inputs or .outputs, got '" + head + "'", lineno, 1);
        }
        std::string name;
        while (ls >> name) dst->push_back(name);
    }
    if (!saw_inputs || !saw_outputs)
        throw ParseError("partition needs one .inputs and one .outputs line", lineno, 1);
    std::set<std::string> seen;
    for (const auto& n : part.atoms()) {
        if (!seen.insert(n).second)
            throw ParseError("atom '" + n + "' declared twice in partition", 1, 1);
    }
    return part;
}

void check_partition_covers(const Partition& part, const FormulaRef& f) {
    for (const auto& a : atoms_of(f)) {
        if (!part.contains(a))
            throw std::invalid_argument("atom '" + a + "' is not declared in the partition");
    }
}

}  // namespace safesynth
