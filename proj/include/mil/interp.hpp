#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mil/ast.hpp"

// Operational semantics: a deterministic big-step interpreter that records
// the full state trace, per-loop iteration counts and the branch taken at
// each iteration. Instances are independent and reentrant; outcomes are
// plain values, so parallel evaluation over inputs is safe.

namespace mil {

struct Value {
    Type kind = Type::Int;
    int64_t num = 0;           // Int value, or Bool as 0/1
    std::vector<int64_t> arr;  // IntArray contents

    static Value integer(int64_t v) { return Value{Type::Int, v, {}}; }
    static Value boolean(bool v) { return Value{Type::Bool, v ? 1 : 0, {}}; }
    static Value array(std::vector<int64_t> elems) { return Value{Type::IntArray, 0, std::move(elems)}; }

    bool truth() const { return num != 0; }
    auto operator<=>(const Value&) const = default;
};

std::string to_string(const Value& v);

/// Arithmetic beyond +/-2^31 is a runtime error; large enough for every
/// sensible benchmark value, small enough to catch runaway mutants cheaply.
constexpr int64_t kSafeIntRange = int64_t{1} << 31;

/// Finite input space for test generation and bounded evaluation: integers
/// range over [int_min, int_max], arrays over lengths 0..array_len_max with
/// elements in the same integer range.
struct Domain {
    int64_t int_min = 0;
    int64_t int_max = 0;
    int array_len_max = 0;
};

/// Variable layout of a routine: declaration order, params then locals.
struct Binding {
    std::vector<std::string> names;
    std::vector<Type> types;
    std::map<std::string, int> index;
    size_t param_count = 0;

    static Binding of(const Routine& r);
    int slot(const std::string& name) const { return index.at(name); }
};

/// A valuation of all routine variables, aligned with a Binding.
struct EnvState {
    std::vector<Value> values;
    auto operator<=>(const EnvState&) const = default;
};

/// Runtime failure raised during expression evaluation.
struct ExecError {
    std::string kind; // div_by_zero, index_out_of_range, overflow
    SourceLoc loc;
};

/// Evaluates an expression in a valuation. Boolean and/or short-circuit.
/// Throws ExecError on division by zero, bad indexing, or overflow.
Value eval_expr(const Binding& binding, const EnvState& env, const Expr& e);

enum class RunStatus { Ok, CheckViolation, ContractViolation, RuntimeError, FuelExhausted };

std::string to_string(RunStatus s);

struct TraceState {
    int location = 0; // node id of the next instruction; 0 = done
    int line = 0;
    EnvState env;
};

struct LoopStats {
    int started = 0;    // iterations begun
    int completed = 0;  // iterations finished
    bool tested = false; // exit condition reached at least once
    bool exited = false; // exit condition observed true (normal exit)
    std::vector<int> branch_at_level; // leaf branch (1..m) per started level, 0 if plain
};

struct RunOutcome {
    RunStatus status = RunStatus::Ok;
    std::string tag;               // ensure tag, "check", error kind, or "nontermination"
    std::optional<int> target_id;  // violated seeded check, when any
    int location = 0;
    int line = 0;

    std::vector<TraceState> trace; // filled when recording is on
    std::map<std::string, LoopStats> loops;
    EnvState final_env;            // state when execution stopped

    bool ok() const { return status == RunStatus::Ok; }
};

struct RunOptions {
    int fuel = 64;            // max iterations per loop
    bool record_trace = true;
};

/// Runs the routine on the given parameter values (declaration order).
/// The input is assumed to satisfy the precondition; use satisfies_require
/// to screen inputs first. Never throws for program-level failures; every
/// outcome is a status.
RunOutcome run(const Routine& r, const std::vector<Value>& args, const RunOptions& opts = {});

/// Whether the input meets the routine's require clause. Inputs whose
/// evaluation fails (e.g. an indexing error inside require) do not satisfy it.
bool satisfies_require(const Routine& r, const std::vector<Value>& args);

/// Debug rendering of a recorded trace, one state per line:
/// "@<line>: x=1 y=2 a=[3,1]".
std::string dump_trace(const Binding& binding, const std::vector<TraceState>& trace);

// ---------------------------------------------------------------------------
// Input enumeration.
//
// Deterministic order: parameters in declaration order (first parameter most
// significant), integers ascending, array lengths ascending then contents
// lexicographic. "First counterexample" is well-defined against this order.

class InputSpace {
public:
    InputSpace(const Routine& r, const Domain& d);

    uint64_t size() const { return total_; }
    std::vector<Value> decode(uint64_t index) const;

private:
    uint64_t param_card(Type t) const;
    Value decode_param(Type t, uint64_t index) const;

    Domain domain_;
    std::vector<Type> param_types_;
    std::vector<uint64_t> cards_;
    uint64_t total_ = 1;
};

} // namespace mil
