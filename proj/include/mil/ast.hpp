#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

// AST for the mini imperative language (.mil). Trees are immutable after
// construction; transformation passes work on deep copies. Node ids are
// recomputed deterministically from tree position, so they are stable under
// pretty/parse of unmodified code.

namespace mil {

struct SourceLoc {
    int line = 0;
    int column = 0;
};

enum class Type { Int, Bool, IntArray };

std::string type_name(Type t);

// ---------------------------------------------------------------------------
// Expressions

enum class UnOp { Neg, Not };
enum class BinOp {
    Add, Sub, Mul, Div, Mod,
    Lt, Le, Gt, Ge, Eq, Ne,
    And, Or,
};

bool is_relop(BinOp op);
bool is_arith(BinOp op);
std::string binop_symbol(BinOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    enum class Kind { IntLit, BoolLit, Var, Index, Count, Unary, Binary };

    Kind kind;
    SourceLoc loc;
    Type type = Type::Int; // filled in by the checker

    int64_t int_val = 0;     // IntLit
    bool bool_val = false;   // BoolLit
    std::string name;        // Var, Index (array), Count (array)
    UnOp un_op = UnOp::Neg;
    BinOp bin_op = BinOp::Add;
    ExprPtr lhs; // Unary operand, Binary lhs, Index subscript
    ExprPtr rhs; // Binary rhs

    static ExprPtr int_lit(int64_t v, SourceLoc loc = {});
    static ExprPtr bool_lit(bool v, SourceLoc loc = {});
    static ExprPtr var(std::string name, SourceLoc loc = {});
    static ExprPtr index(std::string array, ExprPtr sub, SourceLoc loc = {});
    static ExprPtr count(std::string array, SourceLoc loc = {});
    static ExprPtr unary(UnOp op, ExprPtr e, SourceLoc loc = {});
    static ExprPtr binary(BinOp op, ExprPtr l, ExprPtr r, SourceLoc loc = {});
};

ExprPtr clone(const Expr& e);
bool equal(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// Instructions

enum class CheckOrigin { User, Seeded };

/// Reserved target id for the innermost check of a strict unrolling (the
/// "needs more than n iterations" guard); real instrumentation targets are 1+.
constexpr int kGuardTargetId = 0;

struct Instr;
using InstrPtr = std::unique_ptr<Instr>;
using Block = std::vector<InstrPtr>;

struct Instr {
    enum class Kind { Assign, AssignIndex, If, Loop, Check };

    Kind kind;
    int id = 0; // pre-order node id, unique within a routine
    SourceLoc loc;

    // Assign / AssignIndex
    std::string target;
    ExprPtr index; // AssignIndex subscript
    ExprPtr value;

    // If
    ExprPtr cond;
    Block then_block;
    std::optional<Block> else_block;

    // Loop
    std::string label; // generated: loop1, loop2, ... in source order
    Block from_block;
    ExprPtr until;
    Block body;

    // Check
    ExprPtr check_expr;
    CheckOrigin origin = CheckOrigin::User;
    std::optional<int> target_id; // seeded checks only

    static InstrPtr assign(std::string target, ExprPtr value, SourceLoc loc = {});
    static InstrPtr assign_index(std::string array, ExprPtr idx, ExprPtr value,
                                 SourceLoc loc = {});
    static InstrPtr if_then(ExprPtr cond, Block then_block,
                            std::optional<Block> else_block, SourceLoc loc = {});
    static InstrPtr loop(Block from, ExprPtr until, Block body, SourceLoc loc = {});
    static InstrPtr check(ExprPtr expr, CheckOrigin origin = CheckOrigin::User,
                          std::optional<int> target_id = {}, SourceLoc loc = {});
};

InstrPtr clone(const Instr& instr);
Block clone(const Block& block);
bool equal(const Instr& a, const Instr& b);
bool equal(const Block& a, const Block& b);

// ---------------------------------------------------------------------------
// Routine

struct Param {
    std::string name;
    Type type;
    SourceLoc loc;
};

struct Local {
    std::string name;
    Type type;
    ExprPtr init; // optional
    SourceLoc loc;
};

struct EnsureClause {
    std::string tag;
    ExprPtr expr;
    SourceLoc loc;
};

struct Routine {
    std::string name;
    std::vector<Param> params;
    ExprPtr require; // optional
    std::vector<Local> locals;
    Block body;
    std::vector<EnsureClause> ensures;

    Routine() = default;
    Routine(Routine&&) = default;
    Routine& operator=(Routine&&) = default;

    Routine copy() const;
};

bool equal(const Routine& a, const Routine& b);

/// Number of maximal differing subtrees between two routines' code (bodies,
/// from-clauses, conditions, local initializers). Contracts are not compared.
int tree_diff_count(const Routine& a, const Routine& b);

/// Reassigns instruction node ids in pre-order (from-clause before body,
/// then-branch before else) and loop labels in source order.
void renumber(Routine& r);

/// Walks every instruction of a block tree in pre-order.
void walk(const Block& block, const std::function<void(const Instr&)>& fn);
void walk_mut(Block& block, const std::function<void(Instr&)>& fn);

// ---------------------------------------------------------------------------
// Branch structure of a loop body.
//
// The branch count m of a loop counts the leaf branches of the body's
// top-level conditional: an if contributes its then and else leaves, a missing
// else counts as one implicit leaf, and an else block consisting of exactly
// one if (the elseif chain) is descended into rather than counted. A body with
// no top-level conditional is "plain" and has m = 0.

struct BranchLeaf {
    int branch = 0;            // 1-based leaf index in chain order
    const Instr* owner;        // the if instruction holding this leaf
    bool in_else = false;      // which side of the owner
    bool implicit = false;     // missing else materialized as an empty leaf
};

struct BranchStructure {
    int m = 0;                          // 0 for a plain body
    const Instr* top_if = nullptr;      // the body's top-level conditional
    std::vector<BranchLeaf> leaves;     // m entries, chain order
    int extra_top_ifs = 0;              // sibling conditionals (unsupported by scu)
};

BranchStructure branch_structure(const Block& body);

struct LoopInfo {
    const Instr* loop;
    std::string label;
    int line = 0;
    int nesting = 1; // 1 = top level
    int branches = 0;
};

struct StructureInfo {
    int loop_count = 0;
    int max_nesting = 0;
    std::vector<LoopInfo> loops;
};

/// Reports loop count, nesting depth and per-loop branch counts.
StructureInfo analyze(const Routine& r);

} // namespace mil
