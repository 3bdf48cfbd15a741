#include "mil/scu.hpp"

#include <json.hpp>

#include "mil/parser.hpp"
#include "mil/printer.hpp"
#include "mil/unroll.hpp"

namespace mil {

std::string to_string(TargetKind k) {
    switch (k) {
    case TargetKind::ScBranch: return "sc_branch";
    case TargetKind::ScuPlainLevel: return "scu_plain_level";
    case TargetKind::ScuBranchLevel: return "scu_branch_level";
    }
    return "?";
}

namespace {

// The loop the instrumentation applies to; rejects shapes the seeding scheme
// cannot number meaningfully.
const Instr& instrumentable_loop(const Routine& r) {
    StructureInfo info = analyze(r);
    if (info.loop_count == 0) throw InstrumentError("routine has no loop");
    if (info.loop_count > 1) throw InstrumentError("routine has more than one loop");
    if (info.max_nesting > 1) throw InstrumentError("nested loops are not supported");
    const Instr& loop = find_loop(r, "");
    if (branch_structure(loop.body).extra_top_ifs > 0)
        throw InstrumentError(
            "several sibling conditionals in the loop body; branch numbering needs one chain");
    return loop;
}

void collect_leaf_blocks(Instr& cond_if, std::vector<Block*>& out);

void leaf_side(Block& branch, std::vector<Block*>& out) {
    if (branch.size() == 1 && branch[0]->kind == Instr::Kind::If) {
        collect_leaf_blocks(*branch[0], out);
    } else {
        out.push_back(&branch);
    }
}

void collect_leaf_blocks(Instr& cond_if, std::vector<Block*>& out) {
    leaf_side(cond_if.then_block, out);
    if (!cond_if.else_block) cond_if.else_block.emplace();
    leaf_side(*cond_if.else_block, out);
}

// Mutable leaf blocks of a body copy, in the same order branch_structure
// numbers them; missing else branches are materialized as empty blocks.
void leaf_blocks(Block& block, std::vector<Block*>& out) {
    for (InstrPtr& instr : block)
        if (instr->kind == Instr::Kind::If) {
            collect_leaf_blocks(*instr, out);
            return;
        }
}

std::string fresh_name(const Routine& r, const std::string& base) {
    auto taken = [&](const std::string& name) {
        for (const Param& p : r.params)
            if (p.name == name) return true;
        for (const Local& l : r.locals)
            if (l.name == name) return true;
        return false;
    };
    std::string name = base;
    for (int i = 1; taken(name); ++i) name = base + "_" + std::to_string(i);
    return name;
}

// Re-derives locations and lines from the canonical rendering, so the target
// manifest points into the file the tool actually emits.
void canonicalize(InstrumentedRoutine& ir) {
    Routine reparsed = parse(pretty(ir.routine));
    walk(reparsed.body, [&](const Instr& instr) {
        if (instr.kind != Instr::Kind::Check || instr.origin != CheckOrigin::Seeded) return;
        if (!instr.target_id || *instr.target_id == kGuardTargetId) return;
        Target& t = ir.targets.at(static_cast<size_t>(*instr.target_id) - 1);
        t.location = instr.id;
        t.line = instr.loc.line;
        t.seeded_expr = pretty(*instr.check_expr);
    });
    ir.routine = std::move(reparsed);
}

} // namespace

InstrumentedRoutine instrument_sc(const Routine& r) {
    const Instr& loop = instrumentable_loop(r);
    BranchStructure bs = branch_structure(loop.body);

    InstrumentedRoutine ir;
    ir.mode = "sc";
    ir.m = bs.m;
    ir.depth = 0;
    ir.loop_label = loop.label;
    ir.routine = r.copy();

    // find the loop inside the copy and seed its body
    Instr* loop_copy = nullptr;
    walk_mut(ir.routine.body, [&](Instr& i) {
        if (i.kind == Instr::Kind::Loop) loop_copy = &i;
    });

    auto seeded = [&](int id, SourceLoc loc) {
        return Instr::check(Expr::bool_lit(false, loc), CheckOrigin::Seeded, id, loc);
    };

    if (bs.m == 0) {
        loop_copy->body.insert(loop_copy->body.begin(), seeded(1, loop_copy->loc));
        ir.targets.push_back(Target{1, TargetKind::ScBranch, 0, 1, 0, 0, "branch1", ""});
    } else {
        std::vector<Block*> leaves;
        leaf_blocks(loop_copy->body, leaves);
        for (size_t j = 0; j < leaves.size(); ++j) {
            leaves[j]->insert(leaves[j]->begin(),
                              seeded(static_cast<int>(j) + 1, loop_copy->loc));
            ir.targets.push_back(Target{static_cast<int>(j) + 1, TargetKind::ScBranch, 0,
                                        static_cast<int>(j) + 1, 0, 0,
                                        "branch" + std::to_string(j + 1), ""});
        }
    }

    typecheck(ir.routine);
    renumber(ir.routine);
    canonicalize(ir);
    return ir;
}

InstrumentedRoutine instrument_scu(const Routine& r, int depth) {
    if (depth < 1) throw InstrumentError("scu needs depth >= 1");
    const Instr& loop = instrumentable_loop(r);
    BranchStructure bs = branch_structure(loop.body);
    const int m = bs.m;

    InstrumentedRoutine ir;
    ir.mode = "scu";
    ir.m = m;
    ir.depth = depth;
    ir.loop_label = loop.label;

    const std::string bn = m > 0 ? fresh_name(r, "bn") : "";

    LevelHook hook = [&](int level, Block& level_block) {
        SourceLoc loc = loop.loc;
        if (m == 0) {
            // check not e end: fails exactly when the loop would stop here
            level_block.push_back(Instr::check(
                Expr::unary(UnOp::Not, clone(*loop.until), loc), CheckOrigin::Seeded, level, loc));
            ir.targets.push_back(Target{level, TargetKind::ScuPlainLevel, level, 0, 0, 0,
                                        "level" + std::to_string(level), ""});
            return;
        }
        // bn := j at the end of each leaf branch, so it names the branch this
        // level took when the level-end checks run
        std::vector<Block*> leaves;
        leaf_blocks(level_block, leaves);
        for (size_t b = 0; b < leaves.size(); ++b) {
            int j = m * (level - 1) + static_cast<int>(b) + 1;
            leaves[b]->push_back(Instr::assign(bn, Expr::int_lit(j, loc), loc));
        }
        // check not (e and bn = j) end, one per branch of this level
        for (int b = 1; b <= m; ++b) {
            int j = m * (level - 1) + b;
            ExprPtr cond = Expr::unary(
                UnOp::Not,
                Expr::binary(BinOp::And, clone(*loop.until),
                             Expr::binary(BinOp::Eq, Expr::var(bn, loc), Expr::int_lit(j, loc),
                                          loc),
                             loc),
                loc);
            level_block.push_back(Instr::check(std::move(cond), CheckOrigin::Seeded, j, loc));
            ir.targets.push_back(Target{j, TargetKind::ScuBranchLevel, level, j, 0, 0,
                                        "level" + std::to_string(level) + "_branch" +
                                            std::to_string(j),
                                        ""});
        }
    };

    // bn must be declared before the unroller typechecks its output
    Routine base = r.copy();
    if (m > 0) base.locals.push_back(Local{bn, Type::Int, nullptr, loop.loc});

    UnrollConfig cfg;
    cfg.depth = depth;
    cfg.form = UnrollForm::Strict;
    ir.routine = unroll_with_hook(base, cfg, hook);
    canonicalize(ir);
    return ir;
}

std::string manifest_json(const InstrumentedRoutine& ir) {
    nlohmann::ordered_json doc;
    doc["routine"] = ir.routine.name;
    doc["mode"] = ir.mode;
    doc["depth"] = ir.depth;
    doc["branches"] = ir.m;
    doc["targets"] = nlohmann::ordered_json::array();
    for (const Target& t : ir.targets) {
        nlohmann::ordered_json entry;
        entry["target_id"] = t.id;
        entry["kind"] = to_string(t.kind);
        entry["level"] = t.level;
        entry["branch"] = t.branch;
        entry["line"] = t.line;
        entry["tag"] = t.tag;
        entry["check"] = t.seeded_expr;
        doc["targets"].push_back(entry);
    }
    return doc.dump(2) + "\n";
}

} // namespace mil
