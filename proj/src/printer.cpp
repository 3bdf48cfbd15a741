#include "mil/printer.hpp"

#include <sstream>

namespace mil {

namespace {

// Binding strength, matching the parser's precedence ladder.
int precedence(const Expr& e) {
    if (e.kind == Expr::Kind::Binary) {
        switch (e.bin_op) {
        case BinOp::Or: return 1;
        case BinOp::And: return 2;
        case BinOp::Lt: case BinOp::Le: case BinOp::Gt:
        case BinOp::Ge: case BinOp::Eq: case BinOp::Ne: return 4;
        case BinOp::Add: case BinOp::Sub: return 5;
        case BinOp::Mul: case BinOp::Div: case BinOp::Mod: return 6;
        }
    }
    if (e.kind == Expr::Kind::Unary) return e.un_op == UnOp::Not ? 3 : 7;
    return 8;
}

void print_expr(std::ostream& os, const Expr& e, int parent_prec) {
    int prec = precedence(e);
    bool parens = prec < parent_prec;
    if (parens) os << '(';
    switch (e.kind) {
    case Expr::Kind::IntLit: os << e.int_val; break;
    case Expr::Kind::BoolLit: os << (e.bool_val ? "true" : "false"); break;
    case Expr::Kind::Var: os << e.name; break;
    case Expr::Kind::Count: os << e.name << ".count"; break;
    case Expr::Kind::Index:
        os << e.name << " [";
        print_expr(os, *e.lhs, 0);
        os << ']';
        break;
    case Expr::Kind::Unary:
        os << (e.un_op == UnOp::Not ? "not " : "-");
        // parenthesize compound not-operands: "not (i > n)" reads as intended
        print_expr(os, *e.lhs,
                   e.un_op == UnOp::Not && e.lhs->kind == Expr::Kind::Binary ? 9 : prec + 1);
        break;
    case Expr::Kind::Binary:
        // left-associative: the right operand needs one more level
        print_expr(os, *e.lhs, prec);
        os << ' ' << binop_symbol(e.bin_op) << ' ';
        print_expr(os, *e.rhs, prec + 1);
        break;
    }
    if (parens) os << ')';
}

class Printer {
public:
    explicit Printer(const Routine& r) : r_(r) {}

    std::string run() {
        os_ << "routine " << r_.name << " (";
        for (size_t i = 0; i < r_.params.size(); ++i) {
            if (i) os_ << ", ";
            os_ << r_.params[i].name << ": " << type_name(r_.params[i].type);
        }
        os_ << ")\n";
        if (r_.require) {
            os_ << "  require ";
            print_expr(os_, *r_.require, 0);
            os_ << '\n';
        }
        if (!r_.locals.empty()) {
            os_ << "  local\n";
            for (const Local& l : r_.locals) {
                os_ << "    " << l.name << ": " << type_name(l.type);
                if (l.init) {
                    os_ << " := ";
                    print_expr(os_, *l.init, 0);
                }
                os_ << '\n';
            }
        }
        os_ << "  do\n";
        block(r_.body, 2);
        if (!r_.ensures.empty()) {
            os_ << "  ensure\n";
            for (const EnsureClause& e : r_.ensures) {
                os_ << "    " << e.tag << ": ";
                print_expr(os_, *e.expr, 0);
                os_ << '\n';
            }
        }
        os_ << "  end\n";
        return os_.str();
    }

private:
    void indent(int depth) {
        for (int i = 0; i < depth; ++i) os_ << "  ";
    }

    void block(const Block& b, int depth) {
        for (const InstrPtr& instr : b) print_instr(*instr, depth);
    }

    void print_instr(const Instr& instr, int depth) {
        switch (instr.kind) {
        case Instr::Kind::Assign:
            indent(depth);
            os_ << instr.target << " := ";
            print_expr(os_, *instr.value, 0);
            os_ << '\n';
            break;
        case Instr::Kind::AssignIndex:
            indent(depth);
            os_ << instr.target << " [";
            print_expr(os_, *instr.index, 0);
            os_ << "] := ";
            print_expr(os_, *instr.value, 0);
            os_ << '\n';
            break;
        case Instr::Kind::If:
            indent(depth);
            os_ << "if ";
            print_if(instr, depth);
            indent(depth);
            os_ << "end\n";
            break;
        case Instr::Kind::Loop:
            if (!instr.from_block.empty()) {
                indent(depth);
                os_ << "from\n";
                block(instr.from_block, depth + 1);
            }
            indent(depth);
            os_ << "until ";
            print_expr(os_, *instr.until, 0);
            os_ << " loop\n";
            block(instr.body, depth + 1);
            indent(depth);
            os_ << "end\n";
            break;
        case Instr::Kind::Check:
            indent(depth);
            os_ << "check ";
            print_expr(os_, *instr.check_expr, 0);
            os_ << " end";
            if (instr.origin == CheckOrigin::Seeded) {
                if (instr.target_id && *instr.target_id != kGuardTargetId)
                    os_ << " -- [target " << *instr.target_id << ']';
                else
                    os_ << " -- [guard]";
            }
            os_ << '\n';
            break;
        }
    }

    // Everything after "if ": condition, branches, and elseif chains; the
    // caller writes the closing "end".
    void print_if(const Instr& instr, int depth) {
        print_expr(os_, *instr.cond, 0);
        os_ << " then\n";
        block(instr.then_block, depth + 1);
        if (instr.else_block) {
            const Block& e = *instr.else_block;
            if (e.size() == 1 && e[0]->kind == Instr::Kind::If) {
                indent(depth);
                os_ << "elseif ";
                print_if(*e[0], depth);
                return;
            }
            indent(depth);
            os_ << "else\n";
            block(e, depth + 1);
        }
    }

    const Routine& r_;
    std::ostringstream os_;
};

} // namespace

std::string pretty(const Routine& r) { return Printer(r).run(); }

std::string pretty(const Expr& e) {
    std::ostringstream os;
    print_expr(os, e, 0);
    return os.str();
}

} // namespace mil
