#include "mil/ast.hpp"

namespace mil {

std::string type_name(Type t) {
    switch (t) {
    case Type::Int: return "INTEGER";
    case Type::Bool: return "BOOLEAN";
    case Type::IntArray: return "ARRAY";
    }
    return "?";
}

bool is_relop(BinOp op) {
    switch (op) {
    case BinOp::Lt: case BinOp::Le: case BinOp::Gt:
    case BinOp::Ge: case BinOp::Eq: case BinOp::Ne:
        return true;
    default:
        return false;
    }
}

bool is_arith(BinOp op) {
    switch (op) {
    case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
    case BinOp::Div: case BinOp::Mod:
        return true;
    default:
        return false;
    }
}

std::string binop_symbol(BinOp op) {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "div";
    case BinOp::Mod: return "mod";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "=";
    case BinOp::Ne: return "/=";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Expression constructors

ExprPtr Expr::int_lit(int64_t v, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = Kind::IntLit;
    e->int_val = v;
    e->loc = loc;
    e->type = Type::Int;
    return e;
}

ExprPtr Expr::bool_lit(bool v, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = Kind::BoolLit;
    e->bool_val = v;
    e->loc = loc;
    e->type = Type::Bool;
    return e;
}

ExprPtr Expr::var(std::string name, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = Kind::Var;
    e->name = std::move(name);
    e->loc = loc;
    return e;
}

ExprPtr Expr::index(std::string array, ExprPtr sub, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = Kind::Index;
    e->name = std::move(array);
    e->lhs = std::move(sub);
    e->loc = loc;
    return e;
}

ExprPtr Expr::count(std::string array, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = Kind::Count;
    e->name = std::move(array);
    e->loc = loc;
    return e;
}

ExprPtr Expr::unary(UnOp op, ExprPtr operand, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = Kind::Unary;
    e->un_op = op;
    e->lhs = std::move(operand);
    e->loc = loc;
    return e;
}

ExprPtr Expr::binary(BinOp op, ExprPtr l, ExprPtr r, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = Kind::Binary;
    e->bin_op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    e->loc = loc;
    return e;
}

ExprPtr clone(const Expr& e) {
    auto out = std::make_unique<Expr>();
    out->kind = e.kind;
    out->loc = e.loc;
    out->type = e.type;
    out->int_val = e.int_val;
    out->bool_val = e.bool_val;
    out->name = e.name;
    out->un_op = e.un_op;
    out->bin_op = e.bin_op;
    if (e.lhs) out->lhs = clone(*e.lhs);
    if (e.rhs) out->rhs = clone(*e.rhs);
    return out;
}

bool equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Expr::Kind::IntLit: return a.int_val == b.int_val;
    case Expr::Kind::BoolLit: return a.bool_val == b.bool_val;
    case Expr::Kind::Var: return a.name == b.name;
    case Expr::Kind::Count: return a.name == b.name;
    case Expr::Kind::Index: return a.name == b.name && equal(*a.lhs, *b.lhs);
    case Expr::Kind::Unary: return a.un_op == b.un_op && equal(*a.lhs, *b.lhs);
    case Expr::Kind::Binary:
        return a.bin_op == b.bin_op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Instruction constructors

InstrPtr Instr::assign(std::string target, ExprPtr value, SourceLoc loc) {
    auto i = std::make_unique<Instr>();
    i->kind = Kind::Assign;
    i->target = std::move(target);
    i->value = std::move(value);
    i->loc = loc;
    return i;
}

InstrPtr Instr::assign_index(std::string array, ExprPtr idx, ExprPtr value, SourceLoc loc) {
    auto i = std::make_unique<Instr>();
    i->kind = Kind::AssignIndex;
    i->target = std::move(array);
    i->index = std::move(idx);
    i->value = std::move(value);
    i->loc = loc;
    return i;
}

InstrPtr Instr::if_then(ExprPtr cond, Block then_block, std::optional<Block> else_block,
                        SourceLoc loc) {
    auto i = std::make_unique<Instr>();
    i->kind = Kind::If;
    i->cond = std::move(cond);
    i->then_block = std::move(then_block);
    i->else_block = std::move(else_block);
    i->loc = loc;
    return i;
}

InstrPtr Instr::loop(Block from, ExprPtr until, Block body, SourceLoc loc) {
    auto i = std::make_unique<Instr>();
    i->kind = Kind::Loop;
    i->from_block = std::move(from);
    i->until = std::move(until);
    i->body = std::move(body);
    i->loc = loc;
    return i;
}

InstrPtr Instr::check(ExprPtr expr, CheckOrigin origin, std::optional<int> target_id,
                      SourceLoc loc) {
    auto i = std::make_unique<Instr>();
    i->kind = Kind::Check;
    i->check_expr = std::move(expr);
    i->origin = origin;
    i->target_id = target_id;
    i->loc = loc;
    return i;
}

InstrPtr clone(const Instr& instr) {
    auto out = std::make_unique<Instr>();
    out->kind = instr.kind;
    out->id = instr.id;
    out->loc = instr.loc;
    out->target = instr.target;
    if (instr.index) out->index = clone(*instr.index);
    if (instr.value) out->value = clone(*instr.value);
    if (instr.cond) out->cond = clone(*instr.cond);
    out->then_block = clone(instr.then_block);
    if (instr.else_block) out->else_block = clone(*instr.else_block);
    out->label = instr.label;
    out->from_block = clone(instr.from_block);
    if (instr.until) out->until = clone(*instr.until);
    out->body = clone(instr.body);
    if (instr.check_expr) out->check_expr = clone(*instr.check_expr);
    out->origin = instr.origin;
    out->target_id = instr.target_id;
    return out;
}

Block clone(const Block& block) {
    Block out;
    out.reserve(block.size());
    for (const InstrPtr& i : block) out.push_back(clone(*i));
    return out;
}

bool equal(const Instr& a, const Instr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Instr::Kind::Assign:
        return a.target == b.target && equal(*a.value, *b.value);
    case Instr::Kind::AssignIndex:
        return a.target == b.target && equal(*a.index, *b.index) && equal(*a.value, *b.value);
    case Instr::Kind::If:
        if (!equal(*a.cond, *b.cond) || !equal(a.then_block, b.then_block)) return false;
        if (a.else_block.has_value() != b.else_block.has_value()) return false;
        return !a.else_block || equal(*a.else_block, *b.else_block);
    case Instr::Kind::Loop:
        return equal(a.from_block, b.from_block) && equal(*a.until, *b.until) &&
               equal(a.body, b.body);
    case Instr::Kind::Check:
        return equal(*a.check_expr, *b.check_expr) && a.origin == b.origin &&
               a.target_id == b.target_id;
    }
    return false;
}

bool equal(const Block& a, const Block& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!equal(*a[i], *b[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Routine

Routine Routine::copy() const {
    Routine out;
    out.name = name;
    for (const Param& p : params) out.params.push_back(p);
    if (require) out.require = clone(*require);
    for (const Local& l : locals)
        out.locals.push_back(Local{l.name, l.type, l.init ? clone(*l.init) : nullptr, l.loc});
    out.body = clone(body);
    for (const EnsureClause& e : ensures)
        out.ensures.push_back(EnsureClause{e.tag, clone(*e.expr), e.loc});
    return out;
}

bool equal(const Routine& a, const Routine& b) {
    if (a.name != b.name) return false;
    if (a.params.size() != b.params.size() || a.locals.size() != b.locals.size() ||
        a.ensures.size() != b.ensures.size())
        return false;
    for (size_t i = 0; i < a.params.size(); ++i)
        if (a.params[i].name != b.params[i].name || a.params[i].type != b.params[i].type)
            return false;
    if (a.require.operator bool() != b.require.operator bool()) return false;
    if (a.require && !equal(*a.require, *b.require)) return false;
    for (size_t i = 0; i < a.locals.size(); ++i) {
        const Local& la = a.locals[i];
        const Local& lb = b.locals[i];
        if (la.name != lb.name || la.type != lb.type) return false;
        if (la.init.operator bool() != lb.init.operator bool()) return false;
        if (la.init && !equal(*la.init, *lb.init)) return false;
    }
    if (!equal(a.body, b.body)) return false;
    for (size_t i = 0; i < a.ensures.size(); ++i)
        if (a.ensures[i].tag != b.ensures[i].tag || !equal(*a.ensures[i].expr, *b.ensures[i].expr))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Tree diff (code positions only; one count per maximal differing subtree)

namespace {

int diff_expr(const Expr* a, const Expr* b) {
    if (!a && !b) return 0;
    if (!a || !b) return 1;
    if (a->kind != b->kind) return 1;
    switch (a->kind) {
    case Expr::Kind::IntLit: return a->int_val == b->int_val ? 0 : 1;
    case Expr::Kind::BoolLit: return a->bool_val == b->bool_val ? 0 : 1;
    case Expr::Kind::Var:
    case Expr::Kind::Count: return a->name == b->name ? 0 : 1;
    case Expr::Kind::Index:
        if (a->name != b->name) return 1;
        return diff_expr(a->lhs.get(), b->lhs.get());
    case Expr::Kind::Unary:
        if (a->un_op != b->un_op) return 1;
        return diff_expr(a->lhs.get(), b->lhs.get());
    case Expr::Kind::Binary:
        if (a->bin_op != b->bin_op) return 1;
        return diff_expr(a->lhs.get(), b->lhs.get()) + diff_expr(a->rhs.get(), b->rhs.get());
    }
    return 0;
}

int diff_block(const Block& a, const Block& b);

int diff_instr(const Instr& a, const Instr& b) {
    if (a.kind != b.kind) return 1;
    switch (a.kind) {
    case Instr::Kind::Assign:
        if (a.target != b.target) return 1;
        return diff_expr(a.value.get(), b.value.get());
    case Instr::Kind::AssignIndex:
        if (a.target != b.target) return 1;
        return diff_expr(a.index.get(), b.index.get()) + diff_expr(a.value.get(), b.value.get());
    case Instr::Kind::If: {
        int n = diff_expr(a.cond.get(), b.cond.get()) + diff_block(a.then_block, b.then_block);
        if (a.else_block.has_value() != b.else_block.has_value()) return n + 1;
        if (a.else_block) n += diff_block(*a.else_block, *b.else_block);
        return n;
    }
    case Instr::Kind::Loop:
        return diff_block(a.from_block, b.from_block) + diff_expr(a.until.get(), b.until.get()) +
               diff_block(a.body, b.body);
    case Instr::Kind::Check:
        return diff_expr(a.check_expr.get(), b.check_expr.get());
    }
    return 0;
}

int diff_block(const Block& a, const Block& b) {
    if (a.size() != b.size()) return 1;
    int n = 0;
    for (size_t i = 0; i < a.size(); ++i) n += diff_instr(*a[i], *b[i]);
    return n;
}

} // namespace

int tree_diff_count(const Routine& a, const Routine& b) {
    int n = diff_block(a.body, b.body);
    size_t locals = std::min(a.locals.size(), b.locals.size());
    for (size_t i = 0; i < locals; ++i)
        n += diff_expr(a.locals[i].init.get(), b.locals[i].init.get());
    if (a.locals.size() != b.locals.size()) ++n;
    return n;
}

// ---------------------------------------------------------------------------
// Renumbering and traversal

namespace {

void renumber_block(Block& block, int& next_id, int& next_loop) {
    for (InstrPtr& instr : block) {
        instr->id = next_id++;
        switch (instr->kind) {
        case Instr::Kind::If:
            renumber_block(instr->then_block, next_id, next_loop);
            if (instr->else_block) renumber_block(*instr->else_block, next_id, next_loop);
            break;
        case Instr::Kind::Loop:
            instr->label = "loop" + std::to_string(next_loop++);
            renumber_block(instr->from_block, next_id, next_loop);
            renumber_block(instr->body, next_id, next_loop);
            break;
        default:
            break;
        }
    }
}

} // namespace

void renumber(Routine& r) {
    int next_id = 1;
    int next_loop = 1;
    renumber_block(r.body, next_id, next_loop);
}

void walk(const Block& block, const std::function<void(const Instr&)>& fn) {
    for (const InstrPtr& instr : block) {
        fn(*instr);
        switch (instr->kind) {
        case Instr::Kind::If:
            walk(instr->then_block, fn);
            if (instr->else_block) walk(*instr->else_block, fn);
            break;
        case Instr::Kind::Loop:
            walk(instr->from_block, fn);
            walk(instr->body, fn);
            break;
        default:
            break;
        }
    }
}

void walk_mut(Block& block, const std::function<void(Instr&)>& fn) {
    for (InstrPtr& instr : block) {
        fn(*instr);
        switch (instr->kind) {
        case Instr::Kind::If:
            walk_mut(instr->then_block, fn);
            if (instr->else_block) walk_mut(*instr->else_block, fn);
            break;
        case Instr::Kind::Loop:
            walk_mut(instr->from_block, fn);
            walk_mut(instr->body, fn);
            break;
        default:
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// Branch structure

namespace {

bool is_lone_if(const Block& block) {
    return block.size() == 1 && block[0]->kind == Instr::Kind::If;
}

void collect_leaves(const Instr& cond_if, std::vector<BranchLeaf>& leaves) {
    // then side
    if (is_lone_if(cond_if.then_block)) {
        collect_leaves(*cond_if.then_block[0], leaves);
    } else {
        leaves.push_back(BranchLeaf{0, &cond_if, false, false});
    }
    // else side; a missing else is an implicit empty leaf
    if (!cond_if.else_block) {
        leaves.push_back(BranchLeaf{0, &cond_if, true, true});
    } else if (is_lone_if(*cond_if.else_block)) {
        collect_leaves(*(*cond_if.else_block)[0], leaves);
    } else {
        leaves.push_back(BranchLeaf{0, &cond_if, true, false});
    }
}

} // namespace

BranchStructure branch_structure(const Block& body) {
    BranchStructure out;
    for (const InstrPtr& instr : body) {
        if (instr->kind != Instr::Kind::If) continue;
        if (!out.top_if) {
            out.top_if = instr.get();
        } else {
            ++out.extra_top_ifs;
        }
    }
    if (!out.top_if) return out;
    collect_leaves(*out.top_if, out.leaves);
    for (size_t i = 0; i < out.leaves.size(); ++i)
        out.leaves[i].branch = static_cast<int>(i) + 1;
    out.m = static_cast<int>(out.leaves.size());
    return out;
}

// ---------------------------------------------------------------------------
// Structure report

namespace {

void analyze_block(const Block& block, int depth, StructureInfo& info) {
    for (const InstrPtr& instr : block) {
        switch (instr->kind) {
        case Instr::Kind::If:
            analyze_block(instr->then_block, depth, info);
            if (instr->else_block) analyze_block(*instr->else_block, depth, info);
            break;
        case Instr::Kind::Loop: {
            LoopInfo li;
            li.loop = instr.get();
            li.label = instr->label;
            li.line = instr->loc.line;
            li.nesting = depth + 1;
            li.branches = branch_structure(instr->body).m;
            info.loops.push_back(li);
            info.max_nesting = std::max(info.max_nesting, depth + 1);
            analyze_block(instr->from_block, depth + 1, info);
            analyze_block(instr->body, depth + 1, info);
            break;
        }
        default:
            break;
        }
    }
}

} // namespace

StructureInfo analyze(const Routine& r) {
    StructureInfo info;
    analyze_block(r.body, 0, info);
    info.loop_count = static_cast<int>(info.loops.size());
    return info;
}

} // namespace mil
