#include "mil/unroll.hpp"

#include "mil/interp.hpp"
#include "mil/parser.hpp"

namespace mil {

namespace {

bool contains_loop(const Block& block) {
    bool found = false;
    walk(block, [&](const Instr& i) {
        if (i.kind == Instr::Kind::Loop) found = true;
    });
    return found;
}

// The inapplicable program.
InstrPtr guard_check(SourceLoc loc) {
    return Instr::check(Expr::bool_lit(false, loc), CheckOrigin::Seeded, kGuardTargetId, loc);
}

Block build_nest(const Instr& loop, int depth, UnrollForm form, const LevelHook* hook,
                 int level) {
    Block out;
    if (level > depth) {
        if (form != UnrollForm::Strict) return out;
        if (depth == 0) {
            // depth 0 is the inapplicable program itself: no input passes
            out.push_back(guard_check(loop.loc));
        } else {
            // past the last body copy the guard only fires if the loop would
            // keep going; an execution needing at most `depth` iterations
            // never reaches it (running the dead body copy first would
            // change nothing: concatenation with fail is fail)
            Block inner;
            inner.push_back(guard_check(loop.loc));
            ExprPtr cond = Expr::unary(UnOp::Not, clone(*loop.until), loop.until->loc);
            out.push_back(
                Instr::if_then(std::move(cond), std::move(inner), std::nullopt, loop.loc));
        }
        return out;
    }
    Block level_block = clone(loop.body);
    if (hook) (*hook)(level, level_block);
    Block deeper = build_nest(loop, depth, form, hook, level + 1);
    for (InstrPtr& i : deeper) level_block.push_back(std::move(i));
    ExprPtr cond = Expr::unary(UnOp::Not, clone(*loop.until), loop.until->loc);
    out.push_back(Instr::if_then(std::move(cond), std::move(level_block), std::nullopt, loop.loc));
    return out;
}

Block rewrite_block(const Block& block, const Instr* target, const UnrollConfig& cfg,
                    const LevelHook* hook) {
    Block out;
    for (const InstrPtr& instr : block) {
        if (instr.get() == target) {
            for (const InstrPtr& f : target->from_block) out.push_back(clone(*f));
            Block nest = build_nest(*target, cfg.depth, cfg.form, hook, 1);
            for (InstrPtr& i : nest) out.push_back(std::move(i));
            continue;
        }
        InstrPtr copy = clone(*instr);
        if (instr->kind == Instr::Kind::If) {
            copy->then_block = rewrite_block(instr->then_block, target, cfg, hook);
            if (instr->else_block)
                copy->else_block = rewrite_block(*instr->else_block, target, cfg, hook);
        } else if (instr->kind == Instr::Kind::Loop) {
            copy->from_block = rewrite_block(instr->from_block, target, cfg, hook);
            copy->body = rewrite_block(instr->body, target, cfg, hook);
        }
        out.push_back(std::move(copy));
    }
    return out;
}

} // namespace

const Instr& find_loop(const Routine& r, const std::string& label) {
    const Instr* found = nullptr;
    int count = 0;
    walk(r.body, [&](const Instr& i) {
        if (i.kind != Instr::Kind::Loop) return;
        ++count;
        if (label.empty() ? count == 1 : i.label == label) found = &i;
    });
    if (!found)
        throw UnrollError(label.empty() ? "routine has no loop" : "no loop labelled " + label);
    if (label.empty() && count > 1)
        throw UnrollError("routine has several loops; name one");
    return *found;
}

Routine unroll_with_hook(const Routine& r, const UnrollConfig& cfg, const LevelHook& hook) {
    if (cfg.depth < 0 || cfg.depth > cfg.max_depth)
        throw UnrollError("unroll depth must be in 0.." + std::to_string(cfg.max_depth));
    const Instr& loop = find_loop(r, cfg.loop_label);
    if (contains_loop(loop.body))
        throw UnrollError("nested loops are not supported");

    Routine out = r.copy();
    // locate the loop again inside the copy (same traversal order)
    const Instr& loop_copy = find_loop(out, loop.label);
    out.body = rewrite_block(out.body, &loop_copy, cfg, hook ? &hook : nullptr);
    typecheck(out);
    renumber(out);
    return out;
}

Routine unroll_routine(const Routine& r, const UnrollConfig& cfg) {
    return unroll_with_hook(r, cfg, nullptr);
}

UnrollCheckReport semantic_check(const Routine& r, const UnrollConfig& cfg, const Domain& d,
                                 int fuel) {
    UnrollCheckReport report;
    UnrollConfig strict = cfg;
    strict.form = UnrollForm::Strict;
    Routine unrolled = unroll_with_hook(r, strict, nullptr);
    const std::string label = find_loop(r, cfg.loop_label).label;

    RunOptions opts;
    // fuel must exceed the depth so "ran out of fuel" implies "needs more
    // than depth iterations"
    opts.fuel = std::max(fuel, cfg.depth + 1);
    opts.record_trace = false;

    InputSpace space(r, d);
    auto describe = [&](const std::vector<Value>& args) {
        std::string s;
        for (size_t i = 0; i < args.size(); ++i)
            s += (i ? " " : "") + r.params[i].name + "=" + to_string(args[i]);
        return s;
    };

    for (uint64_t idx = 0; idx < space.size(); ++idx) {
        std::vector<Value> args = space.decode(idx);
        if (!satisfies_require(r, args)) continue;
        ++report.inputs_checked;

        RunOutcome orig = run(r, args, opts);
        RunOutcome unr = run(unrolled, args, opts);
        const LoopStats& stats = orig.loops.at(label);

        // depth 0 is inapplicable for every input that reaches the loop
        bool over_depth = cfg.depth == 0 ? stats.tested : stats.started > cfg.depth;
        if (over_depth) {
            // needs more than n iterations: the innermost guard must fire
            bool guard = unr.status == RunStatus::CheckViolation &&
                         unr.target_id == kGuardTargetId;
            if (!guard)
                report.mismatches.push_back(describe(args) + ": expected guard, got " +
                                            to_string(unr.status));
            continue;
        }
        if (orig.status != unr.status || orig.tag != unr.tag) {
            report.mismatches.push_back(describe(args) + ": original " + to_string(orig.status) +
                                        "/" + orig.tag + " vs unrolled " + to_string(unr.status) +
                                        "/" + unr.tag);
            continue;
        }
        if (!(orig.final_env == unr.final_env))
            report.mismatches.push_back(describe(args) + ": final states differ");
    }
    return report;
}

} // namespace mil
