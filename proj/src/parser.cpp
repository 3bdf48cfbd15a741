#include "mil/parser.hpp"

#include <cctype>
#include <map>
#include <set>

namespace mil {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
    End, Ident, IntLit, TargetNote,
    KwRoutine, KwRequire, KwLocal, KwDo, KwEnsure, KwEnd,
    KwIf, KwThen, KwElse, KwElseif,
    KwFrom, KwUntil, KwLoop, KwCheck,
    KwNot, KwAnd, KwOr, KwTrue, KwFalse,
    KwInteger, KwBoolean, KwArray, KwDiv, KwMod,
    LParen, RParen, LBracket, RBracket, Comma, Colon, Dot,
    Assign, Eq, Ne, Lt, Le, Gt, Ge, Plus, Minus, Star,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int64_t value = 0; // IntLit value; TargetNote target id (guard = 0)
    SourceLoc loc;
};

const std::map<std::string, Tok>& keywords() {
    static const std::map<std::string, Tok> kw = {
        {"routine", Tok::KwRoutine}, {"require", Tok::KwRequire}, {"local", Tok::KwLocal},
        {"do", Tok::KwDo},           {"ensure", Tok::KwEnsure},   {"end", Tok::KwEnd},
        {"if", Tok::KwIf},           {"then", Tok::KwThen},       {"else", Tok::KwElse},
        {"elseif", Tok::KwElseif},   {"from", Tok::KwFrom},       {"until", Tok::KwUntil},
        {"loop", Tok::KwLoop},       {"check", Tok::KwCheck},     {"not", Tok::KwNot},
        {"and", Tok::KwAnd},         {"or", Tok::KwOr},           {"true", Tok::KwTrue},
        {"false", Tok::KwFalse},     {"INTEGER", Tok::KwInteger}, {"BOOLEAN", Tok::KwBoolean},
        {"ARRAY", Tok::KwArray},     {"div", Tok::KwDiv},         {"mod", Tok::KwMod},
    };
    return kw;
}

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            Token t = next();
            out.push_back(t);
            if (t.kind == Tok::End) break;
        }
        return out;
    }

private:
    SourceLoc here() const { return SourceLoc{line_, col_}; }

    char peek(int ahead = 0) const {
        size_t i = pos_ + static_cast<size_t>(ahead);
        return i < src_.size() ? src_[i] : '\0';
    }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, here()); }

    Token next() {
        for (;;) {
            while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(peek())))
                advance();
            // `;` is accepted as instruction noise and skipped
            if (peek() == ';') {
                advance();
                continue;
            }
            if (peek() == '-' && peek(1) == '-') break; // comment, handled below
            if (pos_ >= src_.size()) return Token{Tok::End, "", 0, here()};
            break;
        }
        if (pos_ >= src_.size()) return Token{Tok::End, "", 0, here()};

        SourceLoc loc = here();

        // Comments run to end of line. Instrumentation annotations
        // ("-- [target N]", "-- [guard]") come back as tokens; anything else
        // is skipped.
        if (peek() == '-' && peek(1) == '-') {
            advance();
            advance();
            std::string text;
            while (pos_ < src_.size() && peek() != '\n') text.push_back(advance());
            size_t b = text.find_first_not_of(' ');
            size_t e = text.find_last_not_of(' ');
            std::string body = b == std::string::npos ? "" : text.substr(b, e - b + 1);
            if (body == "[guard]")
                return Token{Tok::TargetNote, body, kGuardTargetId, loc};
            if (body.rfind("[target ", 0) == 0 && body.back() == ']') {
                std::string num = body.substr(8, body.size() - 9);
                if (!num.empty() && num.find_first_not_of("0123456789") == std::string::npos)
                    return Token{Tok::TargetNote, body, std::stoll(num), loc};
            }
            return next();
        }

        char c = peek();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
                word.push_back(advance());
            auto kw = keywords().find(word);
            if (kw != keywords().end()) return Token{kw->second, word, 0, loc};
            return Token{Tok::Ident, word, 0, loc};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (std::isdigit(static_cast<unsigned char>(peek()))) digits.push_back(advance());
            return Token{Tok::IntLit, digits, std::stoll(digits), loc};
        }

        advance();
        switch (c) {
        case '(': return Token{Tok::LParen, "(", 0, loc};
        case ')': return Token{Tok::RParen, ")", 0, loc};
        case '[': return Token{Tok::LBracket, "[", 0, loc};
        case ']': return Token{Tok::RBracket, "]", 0, loc};
        case ',': return Token{Tok::Comma, ",", 0, loc};
        case '.': return Token{Tok::Dot, ".", 0, loc};
        case '+': return Token{Tok::Plus, "+", 0, loc};
        case '-': return Token{Tok::Minus, "-", 0, loc};
        case '*': return Token{Tok::Star, "*", 0, loc};
        case ':':
            if (peek() == '=') {
                advance();
                return Token{Tok::Assign, ":=", 0, loc};
            }
            return Token{Tok::Colon, ":", 0, loc};
        case '=': return Token{Tok::Eq, "=", 0, loc};
        case '/':
            if (peek() == '=') {
                advance();
                return Token{Tok::Ne, "/=", 0, loc};
            }
            fail("unexpected character '/'");
        case '<':
            if (peek() == '=') {
                advance();
                return Token{Tok::Le, "<=", 0, loc};
            }
            return Token{Tok::Lt, "<", 0, loc};
        case '>':
            if (peek() == '=') {
                advance();
                return Token{Tok::Ge, ">=", 0, loc};
            }
            return Token{Tok::Gt, ">", 0, loc};
        default:
            fail(std::string("unexpected character '") + c + "'");
        }
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Routine routine() {
        Routine r;
        expect(Tok::KwRoutine, "expected 'routine'");
        r.name = expect(Tok::Ident, "expected routine name").text;
        expect(Tok::LParen, "expected '('");
        if (!at(Tok::RParen)) {
            r.params.push_back(param());
            while (accept(Tok::Comma)) r.params.push_back(param());
        }
        expect(Tok::RParen, "expected ')'");
        if (accept(Tok::KwRequire)) r.require = expression();
        if (accept(Tok::KwLocal))
            while (at(Tok::Ident)) r.locals.push_back(local());
        expect(Tok::KwDo, "expected 'do'");
        r.body = block();
        if (accept(Tok::KwEnsure))
            while (at(Tok::Ident)) r.ensures.push_back(ensure_clause());
        expect(Tok::KwEnd, "expected 'end'");
        expect(Tok::End, "trailing input after routine");
        return r;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    bool at(Tok k) const { return cur().kind == k; }

    bool accept(Tok k) {
        if (!at(k)) return false;
        ++pos_;
        return true;
    }

    Token expect(Tok k, const std::string& msg) {
        if (!at(k)) throw ParseError(msg + " (found '" + describe(cur()) + "')", cur().loc);
        return toks_[pos_++];
    }

    static std::string describe(const Token& t) {
        return t.kind == Tok::End ? "end of input" : t.text;
    }

    Param param() {
        Token name = expect(Tok::Ident, "expected parameter name");
        expect(Tok::Colon, "expected ':'");
        return Param{name.text, type_spec(), name.loc};
    }

    Local local() {
        Token name = expect(Tok::Ident, "expected local name");
        expect(Tok::Colon, "expected ':'");
        Type t = type_spec();
        ExprPtr init;
        if (accept(Tok::Assign)) init = expression();
        return Local{name.text, t, std::move(init), name.loc};
    }

    EnsureClause ensure_clause() {
        Token tag = expect(Tok::Ident, "expected ensure tag");
        expect(Tok::Colon, "expected ':'");
        return EnsureClause{tag.text, expression(), tag.loc};
    }

    Type type_spec() {
        if (accept(Tok::KwInteger)) return Type::Int;
        if (accept(Tok::KwBoolean)) return Type::Bool;
        if (accept(Tok::KwArray)) return Type::IntArray;
        throw ParseError("expected type (INTEGER, BOOLEAN, or ARRAY)", cur().loc);
    }

    // A block runs until a closing keyword. Inside a from-clause, `until`
    // terminates the block instead of starting a nested from-less loop.
    Block block(bool in_from = false) {
        Block out;
        for (;;) {
            switch (cur().kind) {
            case Tok::Ident:
                out.push_back(assignment());
                break;
            case Tok::KwIf:
                out.push_back(if_instr());
                break;
            case Tok::KwFrom:
                out.push_back(loop_instr());
                break;
            case Tok::KwUntil:
                if (in_from) return out;
                out.push_back(loop_instr());
                break;
            case Tok::KwCheck:
                out.push_back(check_instr());
                break;
            default:
                return out;
            }
        }
    }

    InstrPtr assignment() {
        Token name = expect(Tok::Ident, "expected identifier");
        if (accept(Tok::LBracket)) {
            ExprPtr idx = expression();
            expect(Tok::RBracket, "expected ']'");
            expect(Tok::Assign, "expected ':='");
            return Instr::assign_index(name.text, std::move(idx), expression(), name.loc);
        }
        expect(Tok::Assign, "expected ':='");
        return Instr::assign(name.text, expression(), name.loc);
    }

    InstrPtr if_instr() {
        Token kw = expect(Tok::KwIf, "expected 'if'");
        InstrPtr out = if_tail(kw.loc);
        expect(Tok::KwEnd, "expected 'end'");
        return out;
    }

    // Parses "cond then block [elseif ... | else block]" without the final
    // end; elseif desugars to a nested if in the else position.
    InstrPtr if_tail(SourceLoc loc) {
        ExprPtr cond = expression();
        expect(Tok::KwThen, "expected 'then'");
        Block then_block = block();
        std::optional<Block> else_block;
        if (at(Tok::KwElseif)) {
            Token kw = toks_[pos_++];
            Block nested;
            nested.push_back(if_tail(kw.loc));
            else_block = std::move(nested);
        } else if (accept(Tok::KwElse)) {
            else_block = block();
        }
        return Instr::if_then(std::move(cond), std::move(then_block), std::move(else_block), loc);
    }

    InstrPtr loop_instr() {
        SourceLoc loc = cur().loc;
        Block from;
        if (accept(Tok::KwFrom)) from = block(/*in_from=*/true);
        expect(Tok::KwUntil, "expected 'until'");
        ExprPtr exit = expression();
        expect(Tok::KwLoop, "expected 'loop'");
        Block body = block();
        expect(Tok::KwEnd, "expected 'end'");
        return Instr::loop(std::move(from), std::move(exit), std::move(body), loc);
    }

    InstrPtr check_instr() {
        Token kw = expect(Tok::KwCheck, "expected 'check'");
        ExprPtr e = expression();
        expect(Tok::KwEnd, "expected 'end'");
        if (at(Tok::TargetNote)) {
            Token note = toks_[pos_++];
            return Instr::check(std::move(e), CheckOrigin::Seeded,
                                static_cast<int>(note.value), kw.loc);
        }
        return Instr::check(std::move(e), CheckOrigin::User, std::nullopt, kw.loc);
    }

    // precedence (low to high): or | and | not | relops | + - | * div mod | unary -
    ExprPtr expression() { return or_expr(); }

    ExprPtr or_expr() {
        ExprPtr e = and_expr();
        while (at(Tok::KwOr)) {
            SourceLoc loc = toks_[pos_++].loc;
            e = Expr::binary(BinOp::Or, std::move(e), and_expr(), loc);
        }
        return e;
    }

    ExprPtr and_expr() {
        ExprPtr e = not_expr();
        while (at(Tok::KwAnd)) {
            SourceLoc loc = toks_[pos_++].loc;
            e = Expr::binary(BinOp::And, std::move(e), not_expr(), loc);
        }
        return e;
    }

    ExprPtr not_expr() {
        if (at(Tok::KwNot)) {
            SourceLoc loc = toks_[pos_++].loc;
            return Expr::unary(UnOp::Not, not_expr(), loc);
        }
        return comparison();
    }

    ExprPtr comparison() {
        ExprPtr e = additive();
        for (;;) {
            BinOp op;
            switch (cur().kind) {
            case Tok::Eq: op = BinOp::Eq; break;
            case Tok::Ne: op = BinOp::Ne; break;
            case Tok::Lt: op = BinOp::Lt; break;
            case Tok::Le: op = BinOp::Le; break;
            case Tok::Gt: op = BinOp::Gt; break;
            case Tok::Ge: op = BinOp::Ge; break;
            default: return e;
            }
            SourceLoc loc = toks_[pos_++].loc;
            e = Expr::binary(op, std::move(e), additive(), loc);
        }
    }

    ExprPtr additive() {
        ExprPtr e = multiplicative();
        for (;;) {
            BinOp op;
            if (at(Tok::Plus)) op = BinOp::Add;
            else if (at(Tok::Minus)) op = BinOp::Sub;
            else return e;
            SourceLoc loc = toks_[pos_++].loc;
            e = Expr::binary(op, std::move(e), multiplicative(), loc);
        }
    }

    ExprPtr multiplicative() {
        ExprPtr e = unary();
        for (;;) {
            BinOp op;
            if (at(Tok::Star)) op = BinOp::Mul;
            else if (at(Tok::KwDiv)) op = BinOp::Div;
            else if (at(Tok::KwMod)) op = BinOp::Mod;
            else return e;
            SourceLoc loc = toks_[pos_++].loc;
            e = Expr::binary(op, std::move(e), unary(), loc);
        }
    }

    ExprPtr unary() {
        if (at(Tok::Minus)) {
            SourceLoc loc = toks_[pos_++].loc;
            ExprPtr operand = unary();
            // fold negative literals so "-1" is a literal, not an operator
            if (operand->kind == Expr::Kind::IntLit)
                return Expr::int_lit(-operand->int_val, loc);
            return Expr::unary(UnOp::Neg, std::move(operand), loc);
        }
        return postfix();
    }

    ExprPtr postfix() {
        Token t = cur();
        if (accept(Tok::Ident)) {
            if (accept(Tok::LBracket)) {
                ExprPtr idx = expression();
                expect(Tok::RBracket, "expected ']'");
                return Expr::index(t.text, std::move(idx), t.loc);
            }
            if (at(Tok::Dot)) {
                ++pos_;
                Token field = expect(Tok::Ident, "expected field name after '.'");
                if (field.text != "count")
                    throw ParseError("unknown field '" + field.text + "' (only count)", field.loc);
                return Expr::count(t.text, t.loc);
            }
            return Expr::var(t.text, t.loc);
        }
        if (accept(Tok::IntLit)) return Expr::int_lit(t.value, t.loc);
        if (accept(Tok::KwTrue)) return Expr::bool_lit(true, t.loc);
        if (accept(Tok::KwFalse)) return Expr::bool_lit(false, t.loc);
        if (accept(Tok::LParen)) {
            ExprPtr e = expression();
            expect(Tok::RParen, "expected ')'");
            return e;
        }
        throw ParseError("expected expression (found '" + describe(t) + "')", t.loc);
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Type checker

class Checker {
public:
    explicit Checker(Routine& r) : r_(r) {}

    void run() {
        for (const Param& p : r_.params) declare(p.name, p.type, p.loc);
        if (r_.require) check_bool(*r_.require, "require");
        for (Local& l : r_.locals) {
            if (l.init) {
                Type t = type_of(*l.init);
                if (t != l.type)
                    throw ParseError("initializer type " + type_name(t) + " does not match " +
                                         type_name(l.type),
                                     l.loc);
                if (l.type == Type::IntArray)
                    throw ParseError("array locals cannot have initializers", l.loc);
            }
            declare(l.name, l.type, l.loc);
        }
        check_block(r_.body);
        std::set<std::string> tags;
        for (const EnsureClause& e : r_.ensures) {
            if (!tags.insert(e.tag).second)
                throw ParseError("duplicate ensure tag '" + e.tag + "'", e.loc);
            check_bool(*e.expr, "ensure " + e.tag);
        }
    }

private:
    void declare(const std::string& name, Type t, SourceLoc loc) {
        if (!vars_.emplace(name, t).second)
            throw ParseError("duplicate declaration of '" + name + "'", loc);
    }

    Type lookup(const std::string& name, SourceLoc loc) const {
        auto it = vars_.find(name);
        if (it == vars_.end())
            throw ParseError("unresolved identifier '" + name + "'", loc);
        return it->second;
    }

    void check_bool(Expr& e, const std::string& what) {
        if (type_of(e) != Type::Bool)
            throw ParseError(what + " must be BOOLEAN", e.loc);
    }

    Type type_of(Expr& e) {
        switch (e.kind) {
        case Expr::Kind::IntLit: return e.type = Type::Int;
        case Expr::Kind::BoolLit: return e.type = Type::Bool;
        case Expr::Kind::Var: return e.type = lookup(e.name, e.loc);
        case Expr::Kind::Index: {
            if (lookup(e.name, e.loc) != Type::IntArray)
                throw ParseError("'" + e.name + "' is not an array", e.loc);
            if (type_of(*e.lhs) != Type::Int)
                throw ParseError("array index must be INTEGER", e.lhs->loc);
            return e.type = Type::Int;
        }
        case Expr::Kind::Count:
            if (lookup(e.name, e.loc) != Type::IntArray)
                throw ParseError("'" + e.name + "' is not an array", e.loc);
            return e.type = Type::Int;
        case Expr::Kind::Unary: {
            Type t = type_of(*e.lhs);
            if (e.un_op == UnOp::Neg && t != Type::Int)
                throw ParseError("'-' needs an INTEGER operand", e.loc);
            if (e.un_op == UnOp::Not && t != Type::Bool)
                throw ParseError("'not' needs a BOOLEAN operand", e.loc);
            return e.type = t;
        }
        case Expr::Kind::Binary: {
            Type l = type_of(*e.lhs);
            Type rt = type_of(*e.rhs);
            if (l == Type::IntArray || rt == Type::IntArray)
                throw ParseError("arrays have no operators (use indexing or .count)", e.loc);
            switch (e.bin_op) {
            case BinOp::And:
            case BinOp::Or:
                if (l != Type::Bool || rt != Type::Bool)
                    throw ParseError("'" + binop_symbol(e.bin_op) + "' needs BOOLEAN operands",
                                     e.loc);
                return e.type = Type::Bool;
            case BinOp::Eq:
            case BinOp::Ne:
                if (l != rt)
                    throw ParseError("'" + binop_symbol(e.bin_op) + "' needs matching operands",
                                     e.loc);
                return e.type = Type::Bool;
            case BinOp::Lt:
            case BinOp::Le:
            case BinOp::Gt:
            case BinOp::Ge:
                if (l != Type::Int || rt != Type::Int)
                    throw ParseError("'" + binop_symbol(e.bin_op) + "' needs INTEGER operands",
                                     e.loc);
                return e.type = Type::Bool;
            default:
                if (l != Type::Int || rt != Type::Int)
                    throw ParseError("'" + binop_symbol(e.bin_op) + "' needs INTEGER operands",
                                     e.loc);
                return e.type = Type::Int;
            }
        }
        }
        throw ParseError("malformed expression", e.loc);
    }

    void check_block(Block& block) {
        for (InstrPtr& instr : block) check_instr(*instr);
    }

    void check_instr(Instr& instr) {
        switch (instr.kind) {
        case Instr::Kind::Assign: {
            Type t = lookup(instr.target, instr.loc);
            if (t == Type::IntArray)
                throw ParseError("cannot assign whole arrays", instr.loc);
            if (type_of(*instr.value) != t)
                throw ParseError("assignment type mismatch for '" + instr.target + "'", instr.loc);
            break;
        }
        case Instr::Kind::AssignIndex:
            if (lookup(instr.target, instr.loc) != Type::IntArray)
                throw ParseError("'" + instr.target + "' is not an array", instr.loc);
            if (type_of(*instr.index) != Type::Int)
                throw ParseError("array index must be INTEGER", instr.index->loc);
            if (type_of(*instr.value) != Type::Int)
                throw ParseError("array elements are INTEGER", instr.value->loc);
            break;
        case Instr::Kind::If:
            check_bool(*instr.cond, "if condition");
            check_block(instr.then_block);
            if (instr.else_block) check_block(*instr.else_block);
            break;
        case Instr::Kind::Loop:
            check_block(instr.from_block);
            check_bool(*instr.until, "exit condition");
            check_block(instr.body);
            break;
        case Instr::Kind::Check:
            check_bool(*instr.check_expr, "check");
            break;
        }
    }

    Routine& r_;
    std::map<std::string, Type> vars_;
};

} // namespace

Routine parse(const std::string& source) {
    std::vector<Token> tokens = Lexer(source).run();
    if (tokens.size() == 1)
        throw ParseError("expected 'routine'", SourceLoc{1, 1});
    Routine r = Parser(std::move(tokens)).routine();
    typecheck(r);
    renumber(r);
    return r;
}

void typecheck(Routine& r) { Checker(r).run(); }

} // namespace mil
