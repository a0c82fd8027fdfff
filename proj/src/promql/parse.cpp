#include "slokit/promql/parse.hpp"

#include <cctype>
#include <charconv>

#include "slokit/common/duration.hpp"

namespace slokit::promql {

namespace {

enum class Tok {
    ident, number, duration, string,
    lparen, rparen, lbrace, rbrace, lbracket, rbracket, comma,
    assign, eq, ne, re, nre,
    plus, minus, star, slash,
    gt, lt, ge, le,
    end, bad,
};

struct Token {
    Tok kind = Tok::end;
    std::size_t start = 0;
    std::size_t end = 0;
    std::string text;     // ident / number text
    std::string value;    // decoded string literal
    std::int64_t dur = 0; // duration in ms
};

bool ident_head(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':'; }
bool ident_tail(char c) { return ident_head(c) || std::isdigit(static_cast<unsigned char>(c)); }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        Token t;
        t.start = pos_;
        if (pos_ >= src_.size()) {
            t.kind = Tok::end;
            t.end = pos_;
            return t;
        }
        char c = src_[pos_];
        auto one = [&](Tok k) {
            ++pos_;
            t.kind = k;
            t.end = pos_;
            return t;
        };
        switch (c) {
            case '(': return one(Tok::lparen);
            case ')': return one(Tok::rparen);
            case '{': return one(Tok::lbrace);
            case '}': return one(Tok::rbrace);
            case '[': return one(Tok::lbracket);
            case ']': return one(Tok::rbracket);
            case ',': return one(Tok::comma);
            case '+': return one(Tok::plus);
            case '-': return one(Tok::minus);
            case '*': return one(Tok::star);
            case '/': return one(Tok::slash);
            default: break;
        }
        if (c == '=') {
            ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '=') return one(Tok::eq);
            if (pos_ < src_.size() && src_[pos_] == '~') return one(Tok::re);
            t.kind = Tok::assign;
            t.end = pos_;
            return t;
        }
        if (c == '!') {
            ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '=') return one(Tok::ne);
            if (pos_ < src_.size() && src_[pos_] == '~') return one(Tok::nre);
            t.kind = Tok::bad;
            t.end = pos_;
            return t;
        }
        if (c == '>') {
            ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '=') return one(Tok::ge);
            t.kind = Tok::gt;
            t.end = pos_;
            return t;
        }
        if (c == '<') {
            ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '=') return one(Tok::le);
            t.kind = Tok::lt;
            t.end = pos_;
            return t;
        }
        if (c == '"') {
            ++pos_;
            std::string out;
            while (pos_ < src_.size()) {
                char ch = src_[pos_++];
                if (ch == '"') {
                    t.kind = Tok::string;
                    t.end = pos_;
                    t.value = std::move(out);
                    return t;
                }
                if (ch == '\\' && pos_ < src_.size()) {
                    char esc = src_[pos_++];
                    switch (esc) {
                        case '\\': out.push_back('\\'); break;
                        case '"': out.push_back('"'); break;
                        case 'n': out.push_back('\n'); break;
                        case 't': out.push_back('\t'); break;
                        default:
                            out.push_back('\\');
                            out.push_back(esc);
                    }
                    continue;
                }
                out.push_back(ch);
            }
            t.kind = Tok::bad; // unterminated string
            t.end = pos_;
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            std::size_t p = pos_;
            while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
            // duration: all-digit prefix + unit, not followed by ident chars
            if (p > pos_ && p < src_.size() &&
                (src_[p] == 's' || src_[p] == 'm' || src_[p] == 'h' || src_[p] == 'd') &&
                (p + 1 >= src_.size() || !ident_tail(src_[p + 1]))) {
                auto d = slokit::parse_duration_ms(src_.substr(pos_, p + 1 - pos_));
                t.kind = Tok::duration;
                t.dur = *d;
                pos_ = p + 1;
                t.end = pos_;
                return t;
            }
            if (p < src_.size() && src_[p] == '.') {
                ++p;
                while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
            }
            if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
                std::size_t q = p + 1;
                if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
                if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
                    while (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) ++q;
                    p = q;
                }
            }
            t.kind = Tok::number;
            t.text = std::string(src_.substr(pos_, p - pos_));
            pos_ = p;
            t.end = pos_;
            return t;
        }
        if (ident_head(c)) {
            std::size_t p = pos_;
            while (p < src_.size() && ident_tail(src_[p])) ++p;
            t.kind = Tok::ident;
            t.text = std::string(src_.substr(pos_, p - pos_));
            pos_ = p;
            t.end = pos_;
            return t;
        }
        t.kind = Tok::bad;
        ++pos_;
        t.end = pos_;
        return t;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
};

struct ParseError {
    Diagnostic diag;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { advance(); }

    Expr parse_query() {
        Expr e = parse_comparison();
        expect(Tok::end, "unexpected trailing input");
        return e;
    }

private:
    Lexer lexer_;
    Token cur_;

    void advance() { cur_ = lexer_.next(); }

    [[noreturn]] void fail(const Token& at, std::string msg) {
        throw ParseError{Diagnostic{at.start, at.end, std::move(msg), Severity::error}};
    }

    void expect(Tok kind, const char* msg) {
        if (cur_.kind != kind) fail(cur_, msg);
    }

    Token eat(Tok kind, const char* msg) {
        expect(kind, msg);
        Token t = cur_;
        advance();
        return t;
    }

    static Expr make(Span span, auto node) { return Expr{std::move(node), span}; }

    Expr parse_comparison() {
        Expr lhs = parse_addsub();
        while (true) {
            BinOp op;
            switch (cur_.kind) {
                case Tok::gt: op = BinOp::gt; break;
                case Tok::lt: op = BinOp::lt; break;
                case Tok::ge: op = BinOp::ge; break;
                case Tok::le: op = BinOp::le; break;
                case Tok::eq: op = BinOp::eq; break;
                case Tok::ne: op = BinOp::ne; break;
                default: return lhs;
            }
            advance();
            bool bool_mod = false;
            if (cur_.kind == Tok::ident && cur_.text == "bool") {
                bool_mod = true;
                advance();
            }
            Expr rhs = parse_addsub();
            Span span{lhs.span.start, rhs.span.end};
            BinaryExpr node{op, bool_mod, std::make_unique<Expr>(std::move(lhs)),
                            std::make_unique<Expr>(std::move(rhs))};
            lhs = make(span, std::move(node));
        }
    }

    Expr parse_addsub() {
        Expr lhs = parse_muldiv();
        while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
            BinOp op = cur_.kind == Tok::plus ? BinOp::add : BinOp::sub;
            advance();
            Expr rhs = parse_muldiv();
            Span span{lhs.span.start, rhs.span.end};
            BinaryExpr node{op, false, std::make_unique<Expr>(std::move(lhs)),
                            std::make_unique<Expr>(std::move(rhs))};
            lhs = make(span, std::move(node));
        }
        return lhs;
    }

    Expr parse_muldiv() {
        Expr lhs = parse_unary();
        while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
            BinOp op = cur_.kind == Tok::star ? BinOp::mul : BinOp::div;
            advance();
            Expr rhs = parse_unary();
            Span span{lhs.span.start, rhs.span.end};
            BinaryExpr node{op, false, std::make_unique<Expr>(std::move(lhs)),
                            std::make_unique<Expr>(std::move(rhs))};
            lhs = make(span, std::move(node));
        }
        return lhs;
    }

    Expr parse_unary() {
        if (cur_.kind == Tok::minus) {
            Token minus = cur_;
            advance();
            Expr arg = parse_unary();
            Span span{minus.start, arg.span.end};
            return make(span, UnaryNeg{std::make_unique<Expr>(std::move(arg))});
        }
        return parse_postfix();
    }

    Expr parse_postfix() {
        Expr atom = parse_atom();
        if (cur_.kind == Tok::lbracket) {
            if (!std::holds_alternative<VectorSelector>(atom.node))
                fail(cur_, "range window requires a plain vector selector");
            advance();
            Token d = eat(Tok::duration, "expected duration ([0-9]+(s|m|h|d))");
            Token rb = eat(Tok::rbracket, "expected ']' after duration");
            Span span{atom.span.start, rb.end};
            RangeSelector node{std::move(std::get<VectorSelector>(atom.node)), d.dur};
            return make(span, std::move(node));
        }
        return atom;
    }

    Expr parse_atom() {
        switch (cur_.kind) {
            case Tok::number: {
                Token t = cur_;
                advance();
                double v = 0;
                auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                if (r.ec != std::errc{} || r.ptr != t.text.data() + t.text.size())
                    fail(t, "malformed number literal");
                return make({t.start, t.end}, NumberLiteral{v});
            }
            case Tok::lparen: {
                Token lp = cur_;
                advance();
                Expr inner = parse_comparison();
                Token rp = eat(Tok::rparen, "expected ')'");
                return make({lp.start, rp.end}, ParenExpr{std::make_unique<Expr>(std::move(inner))});
            }
            case Tok::lbrace: {
                Token lb = cur_;
                VectorSelector sel;
                parse_matchers(sel);
                if (sel.matchers.empty()) fail(lb, "empty selector");
                return make({lb.start, last_end_}, std::move(sel));
            }
            case Tok::ident: {
                Token name = cur_;
                advance();
                if (auto agg = agg_from_str(name.text)) return parse_aggregate(name, *agg);
                if (auto fn = fn_from_str(name.text)) return parse_fncall(name, *fn);
                VectorSelector sel;
                sel.name = name.text;
                std::size_t end = name.end;
                if (cur_.kind == Tok::lbrace) {
                    parse_matchers(sel);
                    end = last_end_;
                }
                return make({name.start, end}, std::move(sel));
            }
            default: fail(cur_, "expected expression");
        }
    }

    Expr parse_fncall(const Token& name, FnName fn) {
        eat(Tok::lparen, "expected '(' after function name");
        FnCall call{fn, {}};
        if (cur_.kind != Tok::rparen) {
            while (true) {
                call.args.push_back(std::make_unique<Expr>(parse_comparison()));
                if (cur_.kind == Tok::comma) {
                    advance();
                    continue;
                }
                break;
            }
        }
        Token rp = eat(Tok::rparen, "expected ')' to close argument list");
        return make({name.start, rp.end}, std::move(call));
    }

    Expr parse_aggregate(const Token& name, AggOp op) {
        AggregateExpr agg{op, Grouping::none, {}, nullptr};
        if (cur_.kind == Tok::ident && (cur_.text == "by" || cur_.text == "without"))
            parse_grouping(agg);
        eat(Tok::lparen, "expected '(' after aggregation operator");
        agg.arg = std::make_unique<Expr>(parse_comparison());
        Token rp = eat(Tok::rparen, "expected ')' to close aggregation");
        std::size_t end = rp.end;
        if (agg.grouping == Grouping::none && cur_.kind == Tok::ident &&
            (cur_.text == "by" || cur_.text == "without")) {
            parse_grouping(agg);
            end = last_end_;
        }
        return make({name.start, end}, std::move(agg));
    }

    void parse_grouping(AggregateExpr& agg) {
        agg.grouping = cur_.text == "by" ? Grouping::by : Grouping::without;
        advance();
        eat(Tok::lparen, "expected '(' after by/without");
        while (cur_.kind == Tok::ident) {
            agg.labels.push_back(cur_.text);
            advance();
            if (cur_.kind == Tok::comma) {
                advance();
                continue;
            }
            break;
        }
        Token rp = eat(Tok::rparen, "expected ')' to close grouping label list");
        last_end_ = rp.end;
    }

    void parse_matchers(VectorSelector& sel) {
        eat(Tok::lbrace, "expected '{'");
        if (cur_.kind == Tok::rbrace) {
            last_end_ = cur_.end;
            advance();
            return;
        }
        while (true) {
            Token label = eat(Tok::ident, "expected label name");
            if (!metrics::valid_label_name(label.text)) fail(label, "invalid label name");
            metrics::MatchOp op;
            switch (cur_.kind) {
                case Tok::assign: op = metrics::MatchOp::eq; break;
                case Tok::ne: op = metrics::MatchOp::ne; break;
                case Tok::re: op = metrics::MatchOp::re; break;
                case Tok::nre: op = metrics::MatchOp::nre; break;
                default: fail(cur_, "expected one of =, !=, =~, !~");
            }
            advance();
            Token value = eat(Tok::string, "expected quoted label value");
            if (op == metrics::MatchOp::re || op == metrics::MatchOp::nre) {
                try {
                    (void)metrics::LabelMatcher(label.text, op, value.value);
                } catch (const std::invalid_argument& e) {
                    fail(value, e.what());
                }
            }
            sel.matchers.push_back({label.text, op, value.value});
            if (cur_.kind == Tok::comma) {
                advance();
                if (cur_.kind == Tok::rbrace) break; // trailing comma
                continue;
            }
            break;
        }
        Token rb = eat(Tok::rbrace, "expected '}' to close matcher list");
        last_end_ = rb.end;
    }

    std::size_t last_end_ = 0;
};

// ---------------------------------------------------------------------------
// static type check

enum class Type { scalar, vector, range };

class TypeChecker {
public:
    explicit TypeChecker(std::vector<Diagnostic>& out) : out_(out) {}

    Type check(const Expr& e, bool range_allowed) {
        return std::visit(
            [&](const auto& n) -> Type {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, NumberLiteral>) {
                    return Type::scalar;
                } else if constexpr (std::is_same_v<T, VectorSelector>) {
                    return Type::vector;
                } else if constexpr (std::is_same_v<T, RangeSelector>) {
                    if (!range_allowed)
                        error(e, "range selector is only valid as a rate/increase argument or "
                                 "top-level query");
                    return Type::range;
                } else if constexpr (std::is_same_v<T, FnCall>) {
                    return check_fn(e, n);
                } else if constexpr (std::is_same_v<T, AggregateExpr>) {
                    if (check(*n.arg, false) != Type::vector)
                        error(*n.arg, "aggregation expects an instant vector");
                    return Type::vector;
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    Type lt = check(*n.lhs, false);
                    Type rt = check(*n.rhs, false);
                    if (is_comparison(n.op) && lt == Type::scalar && rt == Type::scalar &&
                        !n.bool_modifier)
                        error(e, "comparisons between scalars must use the bool modifier");
                    return lt == Type::scalar && rt == Type::scalar ? Type::scalar : Type::vector;
                } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                    return check(*n.arg, false);
                } else {
                    return check(*n.inner, false);
                }
            },
            e.node);
    }

private:
    std::vector<Diagnostic>& out_;

    void error(const Expr& at, std::string msg) {
        out_.push_back({at.span.start, at.span.end, std::move(msg), Severity::error});
    }
    void warning(const Expr& at, std::string msg) {
        out_.push_back({at.span.start, at.span.end, std::move(msg), Severity::warning});
    }

    static bool counterish_name(const std::string& name) {
        for (std::string_view suffix : {"_total", "_count", "_sum", "_bucket"}) {
            if (name.size() > suffix.size() &&
                name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
                return true;
        }
        return false;
    }

    Type check_fn(const Expr& e, const FnCall& call) {
        switch (call.fn) {
            case FnName::rate:
            case FnName::increase: {
                if (call.args.size() != 1) {
                    error(e, std::string(fn_name_str(call.fn)) + " expects exactly one argument");
                    return Type::vector;
                }
                Type t = check(*call.args[0], true);
                if (t != Type::range)
                    error(*call.args[0],
                          std::string(fn_name_str(call.fn)) + " expects a range selector argument");
                else if (const auto* rs = std::get_if<RangeSelector>(&call.args[0]->node);
                         rs && rs->inner.name && !counterish_name(*rs->inner.name))
                    warning(*call.args[0], "metric kind unknown statically; " +
                                               std::string(fn_name_str(call.fn)) +
                                               " assumes a counter");
                return Type::vector;
            }
            case FnName::histogram_quantile: {
                if (call.args.size() != 2) {
                    error(e, "histogram_quantile expects exactly two arguments");
                    return Type::vector;
                }
                const Expr* q = call.args[0].get();
                while (const auto* p = std::get_if<ParenExpr>(&q->node)) q = p->inner.get();
                if (const auto* num = std::get_if<NumberLiteral>(&q->node)) {
                    if (!(num->value >= 0.0 && num->value <= 1.0))
                        error(*call.args[0], "quantile outside [0,1]");
                } else {
                    error(*call.args[0], "histogram_quantile expects a number literal quantile");
                }
                if (check(*call.args[1], false) != Type::vector)
                    error(*call.args[1], "histogram_quantile expects an instant vector");
                return Type::vector;
            }
            case FnName::clamp_min:
            case FnName::clamp_max: {
                if (call.args.size() != 2) {
                    error(e, std::string(fn_name_str(call.fn)) + " expects exactly two arguments");
                    return Type::vector;
                }
                if (check(*call.args[0], false) != Type::vector)
                    error(*call.args[0],
                          std::string(fn_name_str(call.fn)) + " expects an instant vector");
                if (check(*call.args[1], false) != Type::scalar)
                    error(*call.args[1],
                          std::string(fn_name_str(call.fn)) + " expects a scalar bound");
                return Type::vector;
            }
        }
        return Type::vector;
    }
};

} // namespace

ParseResult parse(std::string_view query) {
    ParseResult result;
    try {
        Parser p(query);
        result.expr = p.parse_query();
    } catch (const ParseError& e) {
        result.diagnostics.push_back(e.diag);
    }
    return result;
}

std::vector<Diagnostic> typecheck(const Expr& expr) {
    std::vector<Diagnostic> out;
    TypeChecker tc(out);
    tc.check(expr, true);
    return out;
}

std::vector<Diagnostic> validate(std::string_view query) {
    ParseResult pr = parse(query);
    if (!pr.ok()) return pr.diagnostics;
    return typecheck(*pr.expr);
}

} // namespace slokit::promql
