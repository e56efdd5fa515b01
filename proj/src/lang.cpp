#include "nmpl/lang.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace nmpl {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::shared_ptr<Cmd> make(CmdKind kind, SourceSpan span) {
    auto c = std::make_shared<Cmd>();
    c->kind = kind;
    c->span = span;
    return c;
}

CmdPtr finish(std::shared_ptr<Cmd> c) {
    std::size_t h = mix(0, static_cast<std::size_t>(c->kind));
    std::size_t size = 1;
    if (c->kind == CmdKind::Assign) h = mix(h, std::hash<std::string>{}(c->var));
    if (c->expr) {
        h = mix(h, c->expr->hash);
        size += c->expr->size;
    }
    if (c->first) {
        h = mix(h, c->first->hash);
        size += c->first->size;
    }
    if (c->second) {
        h = mix(h, c->second->hash);
        size += c->second->size;
    }
    if (c->kind == CmdKind::PDown) h = mix(mix(h, c->label.conf), c->label.integ);
    c->hash = h;
    c->size = size;
    return c;
}

}  // namespace

const char* op_symbol(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Monus: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Eq: return "=";
        case BinOp::Lt: return "<";
        case BinOp::And: return "&&";
        case BinOp::Or: return "||";
    }
    return "?";
}

ExprPtr Expr::lit(std::uint64_t n, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Lit;
    e->value = n;
    e->span = span;
    e->hash = mix(1, std::hash<std::uint64_t>{}(n));
    return e;
}

ExprPtr Expr::var(std::string name, SourceSpan span) {
    if (name.empty()) throw std::invalid_argument("empty variable name");
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->hash = mix(2, std::hash<std::string>{}(name));
    e->name = std::move(name);
    e->span = span;
    return e;
}

ExprPtr Expr::bin(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Bin;
    e->op = op;
    e->hash = mix(mix(mix(3, static_cast<std::size_t>(op)), lhs->hash), rhs->hash);
    e->size = 1 + lhs->size + rhs->size;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    e->span = span;
    return e;
}

CmdPtr Cmd::skip(SourceSpan span) { return finish(make(CmdKind::Skip, span)); }

CmdPtr Cmd::stop() { return finish(make(CmdKind::Stop, {})); }

CmdPtr Cmd::assign(std::string x, ExprPtr e, SourceSpan span) {
    auto c = make(CmdKind::Assign, span);
    c->var = std::move(x);
    c->expr = std::move(e);
    return finish(std::move(c));
}

CmdPtr Cmd::seq(CmdPtr a, CmdPtr b, SourceSpan span) {
    auto c = make(CmdKind::Seq, span);
    c->first = std::move(a);
    c->second = std::move(b);
    return finish(std::move(c));
}

CmdPtr Cmd::ite(ExprPtr guard, CmdPtr then_c, CmdPtr else_c, SourceSpan span) {
    auto c = make(CmdKind::If, span);
    c->expr = std::move(guard);
    c->first = std::move(then_c);
    c->second = std::move(else_c);
    return finish(std::move(c));
}

CmdPtr Cmd::loop(ExprPtr guard, CmdPtr body, SourceSpan span) {
    auto c = make(CmdKind::While, span);
    c->expr = std::move(guard);
    c->first = std::move(body);
    return finish(std::move(c));
}

CmdPtr Cmd::pdown(Label l, CmdPtr body, SourceSpan span) {
    auto c = make(CmdKind::PDown, span);
    c->label = l;
    c->first = std::move(body);
    return finish(std::move(c));
}

bool equal(const Expr& a, const Expr& b) {
    if (&a == &b) return true;
    if (a.hash != b.hash || a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Lit: return a.value == b.value;
        case Expr::Kind::Var: return a.name == b.name;
        case Expr::Kind::Bin: return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
    return false;
}

bool equal(const Cmd& a, const Cmd& b) {
    if (&a == &b) return true;
    if (a.hash != b.hash || a.kind != b.kind || a.size != b.size) return false;
    switch (a.kind) {
        case CmdKind::Skip:
        case CmdKind::Stop: return true;
        case CmdKind::Assign: return a.var == b.var && equal(*a.expr, *b.expr);
        case CmdKind::Seq: return equal(*a.first, *b.first) && equal(*a.second, *b.second);
        case CmdKind::If:
            return equal(*a.expr, *b.expr) && equal(*a.first, *b.first) && equal(*a.second, *b.second);
        case CmdKind::While: return equal(*a.expr, *b.expr) && equal(*a.first, *b.first);
        case CmdKind::PDown: return a.label == b.label && equal(*a.first, *b.first);
    }
    return false;
}

std::size_t cmd_node_count(const Cmd& c) {
    std::size_t n = 1;
    if (c.first) n += cmd_node_count(*c.first);
    if (c.second) n += cmd_node_count(*c.second);
    return n;
}

bool contains_pdown(const Cmd& c) {
    if (c.kind == CmdKind::PDown) return true;
    return (c.first && contains_pdown(*c.first)) || (c.second && contains_pdown(*c.second));
}

bool contains_stop(const Cmd& c) {
    if (c.kind == CmdKind::Stop) return true;
    return (c.first && contains_stop(*c.first)) || (c.second && contains_stop(*c.second));
}

Ctx ctx_from_json(const nlohmann::json& doc, const LabelModel& m) {
    if (!doc.is_object()) throw ModelError("context must be a JSON object mapping variables to labels");
    Ctx ctx;
    for (const auto& [name, value] : doc.items()) {
        if (!value.is_string()) throw ModelError("context entry '" + name + "' must be a label string");
        ctx[name] = m.parse_label(value.get<std::string>());
    }
    return ctx;
}

Ctx load_ctx(const std::string& path, const LabelModel& m) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open context file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ModelError("cannot parse context file '" + path + "': " + e.what());
    }
    return ctx_from_json(doc, m);
}

nlohmann::json ctx_to_json(const Ctx& ctx, const LabelModel& m) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [x, l] : ctx) doc[x] = m.name(l);
    return doc;
}

ParseError::ParseError(Kind kind, int line, int col, const std::string& msg)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
      kind_(kind),
      line_(line),
      col_(col) {}

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            SourceSpan here{line_, col_};
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", here});
                return out;
            }
            char ch = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
                std::size_t start = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance();
                out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), here});
            } else if (std::isdigit(static_cast<unsigned char>(ch))) {
                std::size_t start = pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
                out.push_back({Tok::Number, std::string(src_.substr(start, pos_ - start)), here});
            } else {
                static const char* two[] = {":=", "&&", "||"};
                bool matched = false;
                for (const char* t : two)
                    if (src_.substr(pos_, 2) == t) {
                        advance();
                        advance();
                        out.push_back({Tok::Sym, t, here});
                        matched = true;
                        break;
                    }
                if (matched) continue;
                if (std::string_view("{}();,+-*=<").find(ch) == std::string_view::npos)
                    throw ParseError(ParseError::Kind::Syntax, here.line, here.col,
                                     std::string("unexpected character '") + ch + "'");
                advance();
                out.push_back({Tok::Sym, std::string(1, ch), here});
            }
        }
    }

  private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                advance();
            } else if (src_.substr(pos_, 2) == "//") {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

bool is_keyword(const std::string& s) {
    return s == "skip" || s == "if" || s == "else" || s == "while" || s == "pdown" || s == "stop";
}

class Parser {
  public:
    Parser(std::vector<Token> toks, const LabelModel* m) : toks_(std::move(toks)), m_(m) {}

    CmdPtr program() {
        CmdPtr c = sequence();
        expect_end();
        return c;
    }

    ExprPtr expression_only() {
        ExprPtr e = expr();
        expect_end();
        return e;
    }

  private:
    const Token& peek() const { return toks_[pos_]; }
    bool at_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
    bool at_kw(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw ParseError(ParseError::Kind::Syntax, t.span.line, t.span.col, msg);
    }

    std::string describe(const Token& t) const {
        return t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    }

    const Token& expect_sym(const char* s) {
        if (!at_sym(s)) fail(peek(), std::string("expected '") + s + "' but found " + describe(peek()));
        return toks_[pos_++];
    }

    void expect_kw(const char* s) {
        if (!at_kw(s)) fail(peek(), std::string("expected '") + s + "' but found " + describe(peek()));
        ++pos_;
    }

    void expect_end() {
        if (peek().kind != Tok::End) fail(peek(), "unexpected " + describe(peek()));
    }

    CmdPtr sequence() {
        std::vector<std::pair<CmdPtr, SourceSpan>> parts;
        parts.emplace_back(simple(), SourceSpan{});
        while (at_sym(";")) {
            SourceSpan span = toks_[pos_++].span;
            parts.emplace_back(simple(), span);
        }
        CmdPtr acc = parts.back().first;
        for (std::size_t i = parts.size() - 1; i-- > 0;) acc = Cmd::seq(parts[i].first, acc, parts[i + 1].second);
        return acc;
    }

    CmdPtr block() {
        expect_sym("{");
        CmdPtr c = sequence();
        expect_sym("}");
        return c;
    }

    CmdPtr simple() {
        const Token& t = peek();
        if (at_sym("{")) return block();
        if (t.kind != Tok::Ident) fail(t, "expected a command but found " + describe(t));
        if (t.text == "stop")
            throw ParseError(ParseError::Kind::Stop, t.span.line, t.span.col,
                             "'stop' is not part of the surface language");
        if (t.text == "skip") {
            ++pos_;
            return Cmd::skip(t.span);
        }
        if (t.text == "if") {
            ++pos_;
            ExprPtr g = expr();
            CmdPtr a = block();
            expect_kw("else");
            CmdPtr b = block();
            return Cmd::ite(g, a, b, t.span);
        }
        if (t.text == "while") {
            ++pos_;
            ExprPtr g = expr();
            CmdPtr body = block();
            return Cmd::loop(g, body, t.span);
        }
        if (t.text == "pdown") {
            ++pos_;
            expect_sym("(");
            bool wrapped = at_sym("(");
            if (wrapped) ++pos_;
            Label l = label_body();
            if (wrapped) expect_sym(")");
            expect_sym(")");
            CmdPtr body = block();
            return Cmd::pdown(l, body, t.span);
        }
        if (t.text == "else" || is_keyword(t.text)) fail(t, "unexpected keyword '" + t.text + "'");
        ++pos_;
        expect_sym(":=");
        ExprPtr e = expr();
        return Cmd::assign(t.text, e, t.span);
    }

    // Parses `Conf , Integ )`-style contents up to (not including) the ')'.
    Label label_body() {
        const Token& c = peek();
        if (c.kind != Tok::Ident) fail(c, "expected a confidentiality name but found " + describe(c));
        ++pos_;
        expect_sym(",");
        const Token& i = peek();
        if (i.kind != Tok::Ident) fail(i, "expected an integrity name but found " + describe(i));
        ++pos_;
        if (!m_) fail(c, "labels need a model");
        try {
            return m_->label(c.text, i.text);
        } catch (const ModelError&) {
            throw ParseError(ParseError::Kind::UnknownLabel, c.span.line, c.span.col,
                             "unknown label (" + c.text + "," + i.text + ")");
        }
    }

    static int prec(const std::string& s) {
        if (s == "||") return 1;
        if (s == "&&") return 2;
        if (s == "=" || s == "<") return 3;
        if (s == "+" || s == "-") return 4;
        if (s == "*") return 5;
        return 0;
    }

    static BinOp op_of(const std::string& s) {
        if (s == "+") return BinOp::Add;
        if (s == "-") return BinOp::Monus;
        if (s == "*") return BinOp::Mul;
        if (s == "=") return BinOp::Eq;
        if (s == "<") return BinOp::Lt;
        if (s == "&&") return BinOp::And;
        return BinOp::Or;
    }

    ExprPtr expr(int min_prec = 1) {
        ExprPtr lhs = atom();
        while (peek().kind == Tok::Sym && prec(peek().text) >= min_prec) {
            const Token& op = toks_[pos_++];
            int p = prec(op.text);
            ExprPtr rhs = expr(p + 1);
            lhs = Expr::bin(op_of(op.text), lhs, rhs, op.span);
        }
        return lhs;
    }

    ExprPtr atom() {
        const Token& t = peek();
        if (t.kind == Tok::Number) {
            ++pos_;
            errno = 0;
            char* end = nullptr;
            unsigned long long v = std::strtoull(t.text.c_str(), &end, 10);
            if (errno == ERANGE) fail(t, "integer literal out of range");
            return Expr::lit(v, t.span);
        }
        if (t.kind == Tok::Ident) {
            if (is_keyword(t.text)) fail(t, "unexpected keyword '" + t.text + "' in expression");
            ++pos_;
            return Expr::var(t.text, t.span);
        }
        if (at_sym("(")) {
            ++pos_;
            ExprPtr e = expr();
            expect_sym(")");
            return e;
        }
        fail(t, "expected an expression but found " + describe(t));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const LabelModel* m_;
};

int expr_prec(const Expr& e) {
    if (e.kind != Expr::Kind::Bin) return 6;
    switch (e.op) {
        case BinOp::Or: return 1;
        case BinOp::And: return 2;
        case BinOp::Eq:
        case BinOp::Lt: return 3;
        case BinOp::Add:
        case BinOp::Monus: return 4;
        case BinOp::Mul: return 5;
    }
    return 6;
}

void print_expr(const Expr& e, std::string& out) {
    switch (e.kind) {
        case Expr::Kind::Lit: out += std::to_string(e.value); return;
        case Expr::Kind::Var: out += e.name; return;
        case Expr::Kind::Bin: break;
    }
    int p = expr_prec(e);
    bool lp = expr_prec(*e.lhs) < p;
    bool rp = expr_prec(*e.rhs) <= p;
    if (lp) out += "(";
    print_expr(*e.lhs, out);
    if (lp) out += ")";
    out += " ";
    out += op_symbol(e.op);
    out += " ";
    if (rp) out += "(";
    print_expr(*e.rhs, out);
    if (rp) out += ")";
}

void print_cmd(const Cmd& c, const LabelModel& m, std::string& out) {
    const Cmd* cur = &c;
    while (true) {
        switch (cur->kind) {
            case CmdKind::Skip: out += "skip"; return;
            case CmdKind::Stop: out += "stop"; return;
            case CmdKind::Assign:
                out += cur->var + " := ";
                print_expr(*cur->expr, out);
                return;
            case CmdKind::If:
                out += "if ";
                print_expr(*cur->expr, out);
                out += " { ";
                print_cmd(*cur->first, m, out);
                out += " } else { ";
                print_cmd(*cur->second, m, out);
                out += " }";
                return;
            case CmdKind::While:
                out += "while ";
                print_expr(*cur->expr, out);
                out += " { ";
                print_cmd(*cur->first, m, out);
                out += " }";
                return;
            case CmdKind::PDown:
                out += "pdown" + m.name(cur->label) + " { ";
                print_cmd(*cur->first, m, out);
                out += " }";
                return;
            case CmdKind::Seq:
                if (cur->first->kind == CmdKind::Seq) {
                    out += "{ ";
                    print_cmd(*cur->first, m, out);
                    out += " }";
                } else {
                    print_cmd(*cur->first, m, out);
                }
                out += "; ";
                cur = cur->second.get();
                break;
        }
    }
}

}  // namespace

CmdPtr parse_program(std::string_view text, const LabelModel& m) {
    Parser p(Lexer(text).run(), &m);
    return p.program();
}

ExprPtr parse_expr(std::string_view text) {
    Parser p(Lexer(text).run(), nullptr);
    return p.expression_only();
}

CmdPtr load_program(const std::string& path, const LabelModel& m) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open program file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_program(ss.str(), m);
}

std::string to_string(const Expr& e) {
    std::string out;
    print_expr(e, out);
    return out;
}

std::string to_string(const Cmd& c, const LabelModel& m) {
    std::string out;
    print_cmd(c, m, out);
    return out;
}

CmdPtr erase(const CmdPtr& c) {
    switch (c->kind) {
        case CmdKind::Skip:
        case CmdKind::Stop:
        case CmdKind::Assign: return c;
        case CmdKind::PDown: return erase(c->first);
        case CmdKind::Seq: {
            auto a = erase(c->first), b = erase(c->second);
            return a == c->first && b == c->second ? c : Cmd::seq(a, b, c->span);
        }
        case CmdKind::If: {
            auto a = erase(c->first), b = erase(c->second);
            return a == c->first && b == c->second ? c : Cmd::ite(c->expr, a, b, c->span);
        }
        case CmdKind::While: {
            auto a = erase(c->first);
            return a == c->first ? c : Cmd::loop(c->expr, a, c->span);
        }
    }
    return c;
}

namespace {

const Cmd& strip_pdowns(const Cmd& c, std::size_t& count) {
    const Cmd* cur = &c;
    count = 0;
    while (cur->kind == CmdKind::PDown) {
        ++count;
        cur = cur->first.get();
    }
    return *cur;
}

}  // namespace

bool pd_refines(const Cmd& a, const Cmd& b) {
    std::size_t ja = 0, kb = 0;
    const Cmd& x = strip_pdowns(a, ja);
    const Cmd& y = strip_pdowns(b, kb);
    if (ja > kb || x.kind != y.kind) return false;
    switch (x.kind) {
        case CmdKind::Skip:
        case CmdKind::Stop: return true;
        case CmdKind::Assign: return x.var == y.var && equal(*x.expr, *y.expr);
        case CmdKind::Seq: return pd_refines(*x.first, *y.first) && pd_refines(*x.second, *y.second);
        case CmdKind::If:
            return equal(*x.expr, *y.expr) && pd_refines(*x.first, *y.first) && pd_refines(*x.second, *y.second);
        case CmdKind::While: return equal(*x.expr, *y.expr) && pd_refines(*x.first, *y.first);
        case CmdKind::PDown: break;
    }
    return false;
}

bool pd_equiv(const Cmd& a, const Cmd& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case CmdKind::Skip:
        case CmdKind::Stop: return true;
        case CmdKind::Assign: return a.var == b.var && equal(*a.expr, *b.expr);
        case CmdKind::Seq: return pd_equiv(*a.first, *b.first) && pd_equiv(*a.second, *b.second);
        case CmdKind::If:
            return equal(*a.expr, *b.expr) && pd_equiv(*a.first, *b.first) && pd_equiv(*a.second, *b.second);
        case CmdKind::While: return equal(*a.expr, *b.expr) && pd_equiv(*a.first, *b.first);
        case CmdKind::PDown: return pd_equiv(*a.first, *b.first);
    }
    return false;
}

std::vector<CmdPtr> enumerate_pd_smaller(const CmdPtr& c, Label canonical) {
    std::size_t k = 0;
    const Cmd& base = strip_pdowns(*c, k);
    std::vector<CmdPtr> inner;
    switch (base.kind) {
        case CmdKind::Skip:
        case CmdKind::Stop:
        case CmdKind::Assign: {
            // Rebuild a shared pointer to the base node.
            const Cmd* cur = c.get();
            CmdPtr ptr = c;
            while (cur->kind == CmdKind::PDown) {
                ptr = cur->first;
                cur = ptr.get();
            }
            inner.push_back(ptr);
            break;
        }
        case CmdKind::Seq:
        case CmdKind::If: {
            auto as = enumerate_pd_smaller(base.first, canonical);
            auto bs = enumerate_pd_smaller(base.second, canonical);
            for (const auto& a : as)
                for (const auto& b : bs)
                    inner.push_back(base.kind == CmdKind::Seq ? Cmd::seq(a, b, base.span)
                                                              : Cmd::ite(base.expr, a, b, base.span));
            break;
        }
        case CmdKind::While:
            for (const auto& a : enumerate_pd_smaller(base.first, canonical))
                inner.push_back(Cmd::loop(base.expr, a, base.span));
            break;
        case CmdKind::PDown: break;
    }
    std::vector<CmdPtr> out;
    out.reserve(inner.size() * (k + 1));
    for (std::size_t j = 0; j <= k; ++j)
        for (const auto& x : inner) {
            CmdPtr w = x;
            for (std::size_t r = 0; r < j; ++r) w = Cmd::pdown(canonical, w);
            out.push_back(w);
        }
    return out;
}

namespace {

void collect_pdowns(const Cmd& c, std::vector<const Cmd*>& out) {
    if (c.kind == CmdKind::PDown) out.push_back(&c);
    if (c.first) collect_pdowns(*c.first, out);
    if (c.second) collect_pdowns(*c.second, out);
}

CmdPtr relabel_rec(const CmdPtr& c, const std::vector<Label>& labels, std::size_t& next) {
    switch (c->kind) {
        case CmdKind::Skip:
        case CmdKind::Stop:
        case CmdKind::Assign: return c;
        case CmdKind::PDown: {
            Label l = labels.at(next++);
            return Cmd::pdown(l, relabel_rec(c->first, labels, next), c->span);
        }
        case CmdKind::Seq: {
            auto a = relabel_rec(c->first, labels, next);
            return Cmd::seq(a, relabel_rec(c->second, labels, next), c->span);
        }
        case CmdKind::If: {
            auto a = relabel_rec(c->first, labels, next);
            return Cmd::ite(c->expr, a, relabel_rec(c->second, labels, next), c->span);
        }
        case CmdKind::While: return Cmd::loop(c->expr, relabel_rec(c->first, labels, next), c->span);
    }
    return c;
}

}  // namespace

std::vector<const Cmd*> pdown_nodes(const Cmd& c) {
    std::vector<const Cmd*> out;
    collect_pdowns(c, out);
    return out;
}

CmdPtr relabel_pdowns(const CmdPtr& c, const std::vector<Label>& labels) {
    std::size_t next = 0;
    CmdPtr out = relabel_rec(c, labels, next);
    if (next != labels.size()) throw std::invalid_argument("label count does not match pdown count");
    return out;
}

}  // namespace nmpl
