#include "mil/mutate.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "mil/parser.hpp"
#include "mil/printer.hpp"
#include "mil/rng.hpp"

namespace mil {

std::string to_string(MutOp op) {
    switch (op) {
    case MutOp::RelopSwap: return "relop_swap";
    case MutOp::ArithSwap: return "arith_swap";
    case MutOp::ConstOffset: return "const_offset";
    case MutOp::BoundTweak: return "bound_tweak";
    case MutOp::AssignDrop: return "assign_drop";
    case MutOp::BranchNegate: return "branch_negate";
    }
    return "?";
}

std::vector<MutOp> all_mutation_ops() {
    return {MutOp::RelopSwap, MutOp::ArithSwap, MutOp::ConstOffset,
            MutOp::BoundTweak, MutOp::AssignDrop, MutOp::BranchNegate};
}

namespace {

bool has(const std::vector<MutOp>& ops, MutOp op) {
    return std::find(ops.begin(), ops.end(), op) != ops.end();
}

const std::vector<BinOp>& relops_int() {
    static const std::vector<BinOp> v = {BinOp::Lt, BinOp::Le, BinOp::Gt,
                                         BinOp::Ge, BinOp::Eq, BinOp::Ne};
    return v;
}

const std::vector<BinOp>& ariths() {
    static const std::vector<BinOp> v = {BinOp::Add, BinOp::Sub, BinOp::Mul,
                                         BinOp::Div, BinOp::Mod};
    return v;
}

// Sites inside one expression tree. `slot` is the first path element; the
// rest descends 0 = lhs, 1 = rhs.
void expr_sites(const Expr& e, const std::vector<MutOp>& ops, int instr_id, int slot,
                std::vector<int>& path, bool in_exit_cond, std::vector<MutationSite>& out) {
    auto push = [&](MutOp op, int variant) {
        MutationSite site;
        site.op = op;
        site.instr_id = instr_id;
        site.path.push_back(slot);
        site.path.insert(site.path.end(), path.begin(), path.end());
        site.variant = variant;
        out.push_back(std::move(site));
    };

    if (e.kind == Expr::Kind::Binary) {
        if (is_relop(e.bin_op)) {
            bool int_operands = e.lhs->type == Type::Int;
            if (has(ops, MutOp::RelopSwap)) {
                if (int_operands) {
                    for (BinOp alt : relops_int())
                        if (alt != e.bin_op) push(MutOp::RelopSwap, static_cast<int>(alt));
                } else {
                    push(MutOp::RelopSwap,
                         static_cast<int>(e.bin_op == BinOp::Eq ? BinOp::Ne : BinOp::Eq));
                }
            }
            if (in_exit_cond && int_operands && has(ops, MutOp::BoundTweak)) {
                push(MutOp::BoundTweak, +1);
                push(MutOp::BoundTweak, -1);
            }
        } else if (is_arith(e.bin_op) && has(ops, MutOp::ArithSwap)) {
            for (BinOp alt : ariths())
                if (alt != e.bin_op) push(MutOp::ArithSwap, static_cast<int>(alt));
        }
    }
    if (e.kind == Expr::Kind::IntLit && has(ops, MutOp::ConstOffset)) {
        push(MutOp::ConstOffset, +1);
        push(MutOp::ConstOffset, -1);
    }

    if (e.lhs) {
        path.push_back(0);
        expr_sites(*e.lhs, ops, instr_id, slot, path, in_exit_cond, out);
        path.pop_back();
    }
    if (e.rhs) {
        path.push_back(1);
        expr_sites(*e.rhs, ops, instr_id, slot, path, in_exit_cond, out);
        path.pop_back();
    }
}

void scan_expr(const Expr& e, const std::vector<MutOp>& ops, int instr_id, int slot,
               bool in_exit_cond, std::vector<MutationSite>& out) {
    std::vector<int> path;
    expr_sites(e, ops, instr_id, slot, path, in_exit_cond, out);
}

Expr* navigate(Expr* e, const std::vector<int>& path, size_t from) {
    for (size_t i = from; i < path.size(); ++i)
        e = path[i] == 0 ? e->lhs.get() : e->rhs.get();
    return e;
}

Expr* site_expr(Routine& r, const MutationSite& site) {
    if (site.instr_id < 0) {
        Local& l = r.locals.at(static_cast<size_t>(-site.instr_id) - 1);
        return navigate(l.init.get(), site.path, 1);
    }
    Expr* root = nullptr;
    walk_mut(r.body, [&](Instr& instr) {
        if (instr.id != site.instr_id) return;
        switch (instr.kind) {
        case Instr::Kind::Assign: root = instr.value.get(); break;
        case Instr::Kind::AssignIndex:
            root = site.path[0] == 0 ? instr.index.get() : instr.value.get();
            break;
        case Instr::Kind::If: root = instr.cond.get(); break;
        case Instr::Kind::Loop: root = instr.until.get(); break;
        case Instr::Kind::Check: break;
        }
    });
    if (!root) throw std::logic_error("mutation site lost");
    return navigate(root, site.path, 1);
}

int instr_line(const Routine& r, int instr_id) {
    int line = 0;
    walk(r.body, [&](const Instr& instr) {
        if (instr.id == instr_id) line = instr.loc.line;
    });
    return line;
}

} // namespace

std::vector<MutationSite> enumerate_sites(const Routine& r, const std::vector<MutOp>& ops) {
    std::vector<MutationSite> out;

    for (size_t i = 0; i < r.locals.size(); ++i) {
        if (!r.locals[i].init) continue;
        scan_expr(*r.locals[i].init, ops, -static_cast<int>(i) - 1, 0, false, out);
    }

    walk(r.body, [&](const Instr& instr) {
        switch (instr.kind) {
        case Instr::Kind::Assign:
            if (has(ops, MutOp::AssignDrop)) {
                MutationSite site;
                site.op = MutOp::AssignDrop;
                site.instr_id = instr.id;
                out.push_back(std::move(site));
            }
            scan_expr(*instr.value, ops, instr.id, 1, false, out);
            break;
        case Instr::Kind::AssignIndex:
            if (has(ops, MutOp::AssignDrop)) {
                MutationSite site;
                site.op = MutOp::AssignDrop;
                site.instr_id = instr.id;
                out.push_back(std::move(site));
            }
            scan_expr(*instr.index, ops, instr.id, 0, false, out);
            scan_expr(*instr.value, ops, instr.id, 1, false, out);
            break;
        case Instr::Kind::If:
            if (has(ops, MutOp::BranchNegate)) {
                MutationSite site;
                site.op = MutOp::BranchNegate;
                site.instr_id = instr.id;
                out.push_back(std::move(site));
            }
            scan_expr(*instr.cond, ops, instr.id, 0, false, out);
            break;
        case Instr::Kind::Loop:
            scan_expr(*instr.until, ops, instr.id, 0, true, out);
            break;
        case Instr::Kind::Check:
            break; // contracts stay untouched
        }
    });
    return out;
}

Mutant apply_site(const Routine& r, const MutationSite& site, int mutant_id) {
    Mutant m;
    m.id = mutant_id;
    m.op = site.op;
    m.instr_id = site.instr_id;
    m.routine = r.copy();

    std::string before, after;
    switch (site.op) {
    case MutOp::AssignDrop: {
        walk_mut(m.routine.body, [&](Instr& instr) {
            if (instr.id != site.instr_id) return;
            before = instr.kind == Instr::Kind::AssignIndex
                         ? instr.target + " [" + pretty(*instr.index) + "] := " +
                               pretty(*instr.value)
                         : instr.target + " := " + pretty(*instr.value);
            SourceLoc loc = instr.loc;
            Instr replacement;
            replacement.kind = Instr::Kind::Check;
            replacement.loc = loc;
            replacement.check_expr = Expr::bool_lit(true, loc);
            replacement.origin = CheckOrigin::User;
            instr = std::move(replacement);
        });
        after = "check true end";
        break;
    }
    case MutOp::BranchNegate: {
        walk_mut(m.routine.body, [&](Instr& instr) {
            if (instr.id != site.instr_id) return;
            before = "if " + pretty(*instr.cond);
            instr.cond = Expr::unary(UnOp::Not, std::move(instr.cond), instr.loc);
            after = "if " + pretty(*instr.cond);
        });
        break;
    }
    case MutOp::BoundTweak: {
        Expr* e = site_expr(m.routine, site);
        before = "until " + pretty(*e);
        e->rhs = Expr::binary(site.variant > 0 ? BinOp::Add : BinOp::Sub, std::move(e->rhs),
                              Expr::int_lit(1, e->loc), e->loc);
        after = "until " + pretty(*e);
        break;
    }
    case MutOp::RelopSwap:
    case MutOp::ArithSwap: {
        Expr* e = site_expr(m.routine, site);
        before = pretty(*e);
        e->bin_op = static_cast<BinOp>(site.variant);
        after = pretty(*e);
        break;
    }
    case MutOp::ConstOffset: {
        Expr* e = site_expr(m.routine, site);
        before = pretty(*e);
        e->int_val += site.variant;
        after = pretty(*e);
        break;
    }
    }

    m.line = site.instr_id < 0
                 ? m.routine.locals.at(static_cast<size_t>(-site.instr_id) - 1).loc.line
                 : instr_line(m.routine, site.instr_id);
    m.description = "line " + std::to_string(m.line) + ": " + to_string(site.op) + ": " +
                    before + " -> " + after;

    typecheck(m.routine);
    renumber(m.routine);
    return m;
}

std::vector<Mutant> mutate(const Routine& r, const std::vector<MutOp>& ops, int count,
                           uint64_t seed) {
    if (count < 1) throw std::invalid_argument("mutant count must be at least 1");
    std::vector<MutationSite> sites = enumerate_sites(r, ops);
    Rng rng(mix_seed(seed, 0x6d7574)); // sample without replacement
    for (size_t i = sites.size(); i > 1; --i)
        std::swap(sites[i - 1], sites[rng.below(i)]);
    if (count < static_cast<int>(sites.size()))
        sites.resize(static_cast<size_t>(count));

    std::vector<Mutant> out;
    out.reserve(sites.size());
    for (size_t i = 0; i < sites.size(); ++i)
        out.push_back(apply_site(r, sites[i], static_cast<int>(i) + 1));
    return out;
}

std::string mutants_manifest_json(const std::string& routine,
                                  const std::vector<Mutant>& mutants) {
    nlohmann::ordered_json doc;
    doc["routine"] = routine;
    doc["count"] = mutants.size();
    doc["mutants"] = nlohmann::ordered_json::array();
    for (const Mutant& m : mutants) {
        nlohmann::ordered_json entry;
        entry["id"] = m.id;
        entry["operator"] = to_string(m.op);
        entry["line"] = m.line;
        entry["description"] = m.description;
        entry["file"] = routine + "_m" + std::to_string(m.id) + ".mil";
        doc["mutants"].push_back(entry);
    }
    return doc.dump(2) + "\n";
}

} // namespace mil
