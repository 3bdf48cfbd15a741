#include "mil/testgen.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "mil/rng.hpp"
#include "mil/unroll.hpp"

namespace mil {

namespace {

std::string order_name(SearchOrder o) { return o == SearchOrder::Lex ? "lex" : "random"; }

// Does this profiled input trigger the target? Matches the operational
// behaviour of the seeded program: an sc seed fires on the branch of the
// first iteration; an scu level-i seed fires when the loop exits normally
// after exactly i iterations (through branch j, for branch targets).
bool triggers(const InputProfile& p, const Target& t, int m) {
    if (!p.admissible) return false;
    switch (t.kind) {
    case TargetKind::ScBranch:
        if (m == 0) return p.entered;
        return !p.branch_at_level.empty() && p.branch_at_level[0] == t.branch;
    case TargetKind::ScuPlainLevel:
        return p.clean_iterations == t.level;
    case TargetKind::ScuBranchLevel: {
        if (p.clean_iterations != t.level) return false;
        int in_level = t.branch - m * (t.level - 1);
        return p.branch_at_level[static_cast<size_t>(t.level) - 1] == in_level;
    }
    }
    return false;
}

std::vector<uint64_t> scan_order(uint64_t size, SearchOrder order, uint64_t seed,
                                 int target_id) {
    std::vector<uint64_t> idx(size);
    std::iota(idx.begin(), idx.end(), uint64_t{0});
    if (order == SearchOrder::Random) {
        // Per-target stream derived from (seed, target id) alone: the same
        // target searches the same inputs in the same order at every depth,
        // which is what makes suites grow monotonically run by run.
        Rng rng(mix_seed(seed, static_cast<uint64_t>(target_id)));
        for (size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.below(i)]);
    }
    return idx;
}

} // namespace

ProfileTable build_profile(const Routine& r, const std::string& loop_label, const Domain& d,
                           int fuel) {
    ProfileTable table;
    InputSpace space(r, d);
    table.rows.resize(space.size());
    RunOptions opts;
    opts.fuel = fuel;
    opts.record_trace = false;
    for (uint64_t i = 0; i < space.size(); ++i) {
        InputProfile& row = table.rows[i];
        std::vector<Value> args = space.decode(i);
        if (!satisfies_require(r, args)) continue;
        row.admissible = true;
        ++table.admissible_count;
        RunOutcome out = run(r, args, opts);
        auto it = out.loops.find(loop_label);
        if (it == out.loops.end()) continue;
        const LoopStats& stats = it->second;
        row.entered = stats.started > 0;
        row.clean_iterations = stats.exited ? stats.completed : -1;
        row.branch_at_level.assign(stats.branch_at_level.begin(), stats.branch_at_level.end());
    }
    return table;
}

const ProfileTable& ProfileCache::get(const Routine& r, const std::string& loop_label,
                                      const Domain& d, int fuel) {
    auto key = std::make_tuple(r.name, d.int_min, d.int_max, d.array_len_max, fuel);
    auto it = tables_.find(key);
    if (it == tables_.end())
        it = tables_.emplace(key, build_profile(r, loop_label, d, fuel)).first;
    return it->second;
}

std::optional<std::vector<Value>> solve_target(const InstrumentedRoutine& ir, const Target& t,
                                               const Domain& d, SearchOrder order, uint64_t seed,
                                               int fuel, uint64_t budget) {
    InputSpace space(ir.routine, d);
    RunOptions opts;
    opts.fuel = fuel;
    opts.record_trace = false;
    std::vector<uint64_t> idx = scan_order(space.size(), order, seed, t.id);
    uint64_t examined = 0;
    for (uint64_t i : idx) {
        if (budget && examined >= budget) break;
        ++examined;
        std::vector<Value> args = space.decode(i);
        if (!satisfies_require(ir.routine, args)) continue;
        RunOutcome out = run(ir.routine, args, opts);
        if (out.status == RunStatus::CheckViolation && out.target_id == t.id) return args;
    }
    return std::nullopt;
}

TestSuite generate(const Routine& r, const GenOptions& opts) {
    InstrumentedRoutine ir =
        opts.mode == "sc" ? instrument_sc(r) : instrument_scu(r, opts.depth);

    TestSuite suite;
    suite.routine = r.name;
    for (const Param& p : r.params) suite.param_names.push_back(p.name);
    suite.mode = ir.mode;
    suite.depth = opts.depth;
    suite.domain = opts.domain;
    suite.order = opts.order;
    suite.seed = opts.seed;

    ProfileCache local_cache;
    ProfileCache& cache = opts.cache ? *opts.cache : local_cache;
    const ProfileTable& table = cache.get(r, ir.loop_label, opts.domain, opts.fuel);

    InputSpace space(r, opts.domain);
    RunOptions run_opts;
    run_opts.fuel = opts.fuel;
    run_opts.record_trace = false;

    for (const Target& t : ir.targets) {
        std::vector<uint64_t> idx = scan_order(space.size(), opts.order, opts.seed, t.id);
        std::optional<uint64_t> found;
        uint64_t examined = 0;
        bool exhausted = true;
        for (uint64_t i : idx) {
            if (opts.budget && examined >= opts.budget) {
                exhausted = false;
                break;
            }
            ++examined;
            if (triggers(table.rows[i], t, ir.m)) {
                found = i;
                break;
            }
        }
        if (!found) {
            (exhausted ? suite.uncovered : suite.unknown).push_back(t.id);
            continue;
        }

        TestCase tc;
        tc.id = static_cast<int>(suite.tests.size()) + 1;
        tc.target_id = t.id;
        tc.target_kind = t.kind;
        tc.target_level = t.level;
        tc.target_branch = t.branch;
        tc.input = space.decode(*found);
        tc.origin_seed = opts.seed;

        // certification 1: the instrumented routine must violate exactly this
        // seeded check on this input
        RunOutcome seeded = run(ir.routine, tc.input, run_opts);
        if (seeded.status != RunStatus::CheckViolation || seeded.target_id != t.id)
            throw std::logic_error("generator bug: test does not hit its target " +
                                   std::to_string(t.id));

        // certification 2: the untouched routine must show the promised
        // iteration count and branch
        RunOutcome plain = run(r, tc.input, run_opts);
        const LoopStats& stats = plain.loops.at(ir.loop_label);
        tc.certified_iterations = stats.completed;
        if (t.kind == TargetKind::ScBranch) {
            tc.certified_branch =
                stats.branch_at_level.empty() ? 0 : stats.branch_at_level.front();
            bool ok = ir.m == 0 ? stats.started >= 1 : tc.certified_branch == t.branch;
            if (!ok) throw std::logic_error("generator bug: sc certificate mismatch");
        } else {
            if (!stats.exited || stats.completed != t.level)
                throw std::logic_error("generator bug: iteration certificate mismatch");
            if (t.kind == TargetKind::ScuBranchLevel) {
                tc.certified_branch =
                    stats.branch_at_level[static_cast<size_t>(t.level) - 1];
                if (tc.certified_branch != t.branch - ir.m * (t.level - 1))
                    throw std::logic_error("generator bug: branch certificate mismatch");
            }
        }
        suite.tests.push_back(std::move(tc));
    }
    return suite;
}

Certificate replay(const Routine& r, const TestCase& tc) {
    RunOptions opts;
    opts.record_trace = false;
    RunOutcome out = run(r, tc.input, opts);
    const StructureInfo info = analyze(r);
    Certificate cert;
    if (info.loops.empty()) return cert;
    const LoopStats& stats = out.loops.at(info.loops[0].label);
    cert.iterations = stats.completed;
    cert.branch_seq.assign(stats.branch_at_level.begin(), stats.branch_at_level.end());
    int m = info.loops[0].branches;
    switch (tc.target_kind) {
    case TargetKind::ScBranch:
        cert.matches_target = m == 0
                                  ? stats.started >= 1
                                  : !cert.branch_seq.empty() &&
                                        cert.branch_seq.front() == tc.target_branch;
        break;
    case TargetKind::ScuPlainLevel:
        cert.matches_target = stats.exited && cert.iterations == tc.target_level;
        break;
    case TargetKind::ScuBranchLevel:
        cert.matches_target =
            stats.exited && cert.iterations == tc.target_level &&
            cert.branch_seq[static_cast<size_t>(tc.target_level) - 1] ==
                tc.target_branch - m * (tc.target_level - 1);
        break;
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Suite (de)serialization

namespace {

nlohmann::ordered_json value_json(const Value& v) {
    switch (v.kind) {
    case Type::Int: return v.num;
    case Type::Bool: return v.num != 0;
    case Type::IntArray: return v.arr;
    }
    return nullptr;
}

Value value_from_json(const nlohmann::json& j) {
    if (j.is_boolean()) return Value::boolean(j.get<bool>());
    if (j.is_array()) return Value::array(j.get<std::vector<int64_t>>());
    return Value::integer(j.get<int64_t>());
}

TargetKind kind_from_string(const std::string& s) {
    if (s == "sc_branch") return TargetKind::ScBranch;
    if (s == "scu_plain_level") return TargetKind::ScuPlainLevel;
    if (s == "scu_branch_level") return TargetKind::ScuBranchLevel;
    throw std::invalid_argument("unknown target kind: " + s);
}

} // namespace

std::string suite_json(const TestSuite& s) {
    nlohmann::ordered_json doc;
    doc["routine"] = s.routine;
    doc["params"] = s.param_names;
    doc["mode"] = s.mode;
    doc["depth"] = s.depth;
    doc["domain"] = {{"int_min", s.domain.int_min},
                     {"int_max", s.domain.int_max},
                     {"array_len_max", s.domain.array_len_max}};
    doc["order"] = order_name(s.order);
    doc["seed"] = s.seed;
    doc["tests"] = nlohmann::ordered_json::array();
    for (const TestCase& tc : s.tests) {
        nlohmann::ordered_json entry;
        entry["id"] = tc.id;
        entry["target"] = tc.target_id;
        entry["kind"] = to_string(tc.target_kind);
        entry["level"] = tc.target_level;
        entry["branch"] = tc.target_branch;
        entry["input"] = nlohmann::ordered_json::object();
        for (size_t i = 0; i < tc.input.size(); ++i)
            entry["input"][s.param_names[i]] = value_json(tc.input[i]);
        entry["certified"] = {{"iterations", tc.certified_iterations},
                              {"branch", tc.certified_branch}};
        doc["tests"].push_back(entry);
    }
    doc["uncovered"] = s.uncovered;
    doc["unknown"] = s.unknown;
    return doc.dump(2) + "\n";
}

TestSuite suite_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    TestSuite s;
    s.routine = doc.at("routine").get<std::string>();
    s.param_names = doc.at("params").get<std::vector<std::string>>();
    s.mode = doc.at("mode").get<std::string>();
    s.depth = doc.at("depth").get<int>();
    s.domain.int_min = doc.at("domain").at("int_min").get<int64_t>();
    s.domain.int_max = doc.at("domain").at("int_max").get<int64_t>();
    s.domain.array_len_max = doc.at("domain").at("array_len_max").get<int>();
    s.order = doc.at("order").get<std::string>() == "lex" ? SearchOrder::Lex
                                                          : SearchOrder::Random;
    s.seed = doc.at("seed").get<uint64_t>();
    for (const auto& entry : doc.at("tests")) {
        TestCase tc;
        tc.id = entry.at("id").get<int>();
        tc.target_id = entry.at("target").get<int>();
        tc.target_kind = kind_from_string(entry.at("kind").get<std::string>());
        tc.target_level = entry.at("level").get<int>();
        tc.target_branch = entry.at("branch").get<int>();
        for (const std::string& name : s.param_names)
            tc.input.push_back(value_from_json(entry.at("input").at(name)));
        tc.certified_iterations = entry.at("certified").at("iterations").get<int>();
        tc.certified_branch = entry.at("certified").at("branch").get<int>();
        s.tests.push_back(std::move(tc));
    }
    s.uncovered = doc.at("uncovered").get<std::vector<int>>();
    s.unknown = doc.at("unknown").get<std::vector<int>>();
    return s;
}

} // namespace mil
