#include <doctest.h>

#include <map>
#include <tuple>

#include "mil/corpus.hpp"
#include "mil/denote.hpp"
#include "mil/parser.hpp"

using namespace mil;

TEST_CASE("a failing check denotes the empty trace set") {
    Routine r = parse("routine f (x: INTEGER) do check false end end");
    DenoteResult d = denote(r, Domain{0, 2, 0});
    CHECK(d.traces.empty());
    CHECK(d.initial.size() == 3);
    CHECK(d.unresolved.empty());
}

TEST_CASE("an empty body denotes skip over the admissible initial states") {
    Routine r = parse("routine e (x: INTEGER) require x >= 1 do end");
    DenoteResult d = denote(r, Domain{0, 3, 0});
    CHECK(d.initial.size() == 3); // x in 1..3
    CHECK(d.traces.size() == 3);
    for (const Trace& t : d.traces) CHECK(is_stationary(t));
}

TEST_CASE("assignments contribute two-state steps, tests are invisible") {
    Routine r = parse("routine s (x: INTEGER) do check x >= 0 end x := x + 1 x := x + 1 end");
    DenoteResult d = denote(r, Domain{0, 1, 0});
    REQUIRE(d.traces.size() == 2);
    for (const Trace& t : d.traces) {
        CHECK(t.size() == 3); // start, after first, after second
        auto envs = d.decode(t);
        CHECK(envs[1].values[0].num == envs[0].values[0].num + 1);
        CHECK(envs[2].values[0].num == envs[0].values[0].num + 2);
    }
}

TEST_CASE("loops past the fuel bound are reported unresolved") {
    const CorpusEntry& e = corpus_entry("FACTORIAL");
    Routine r = corpus_routine(e);
    DenoteResult d = denote(r, e.tiny_domain, /*fuel=*/2);
    CHECK(d.initial.size() == 5);    // n in 0..4
    CHECK(d.traces.size() == 3);     // n in 0..2 resolve within two iterations
    CHECK(d.unresolved.size() == 2); // n = 3, 4 do not
}

TEST_CASE("denotation grows monotonically with fuel") {
    const CorpusEntry& e = corpus_entry("FACTORIAL");
    Routine r = corpus_routine(e);
    auto d2 = decoded_traces(denote(r, e.tiny_domain, 2));
    auto d3 = decoded_traces(denote(r, e.tiny_domain, 3));
    auto d4 = decoded_traces(denote(r, e.tiny_domain, 4));
    for (const auto& t : d2) CHECK(d3.count(t) == 1);
    for (const auto& t : d3) CHECK(d4.count(t) == 1);
    CHECK(d2.size() < d3.size());
}

TEST_CASE("a program loop is the algebra's loop, extensionally") {
    // Three routes to the same trace set. The routine is a counting loop
    // (until i >= b loop s := s + 1; i := i + 1 end); the test hand-builds
    // its state universe, body trace set B, and exit predicate e, then checks
    //   denote(routine)  ==  A ; union_{j<=K} (not e / B)^j \ e
    //                    ==  A ; (recursive view at K+1)
    // where A is the set of stationary traces at the initial states.
    const CorpusEntry& entry = corpus_entry("ARITHMETIC_ADD");
    Routine r = corpus_routine(entry);
    const Domain d{0, 3, 0};
    const int fuel = 8;

    // hand-built universe: (a, b, s, i) with room beyond the reachable range
    struct Quad {
        int64_t a, b, s, i;
    };
    std::vector<Quad> states;
    std::map<std::tuple<int64_t, int64_t, int64_t, int64_t>, State> ids;
    for (int64_t a = 0; a <= 3; ++a)
        for (int64_t b = 0; b <= 3; ++b)
            for (int64_t s = 0; s <= 10; ++s)
                for (int64_t i = 0; i <= 8; ++i) {
                    ids[{a, b, s, i}] = static_cast<State>(states.size());
                    states.push_back(Quad{a, b, s, i});
                }
    Universe u{static_cast<int>(states.size())};

    Predicate exit_cond = Predicate::none(u);
    TraceSet body;
    for (size_t k = 0; k < states.size(); ++k) {
        const Quad& q = states[k];
        if (q.i >= q.b) {
            exit_cond.member[k] = true;
        } else if (q.s + 1 <= 10 && q.i + 1 <= 8) {
            // s := s + 1 then i := i + 1, junction states included
            State mid = ids.at({q.a, q.b, q.s + 1, q.i});
            State end = ids.at({q.a, q.b, q.s + 1, q.i + 1});
            body.insert(Trace{static_cast<State>(k), mid, end});
        }
    }

    TraceSet start;
    for (int64_t a = 0; a <= 3; ++a)
        for (int64_t b = 0; b <= 3; ++b) start.insert(stationary(ids.at({a, b, a, 0})));

    TraceSet via_union = concat_sets(start, loop_union(exit_cond, body, u, fuel + 1));
    TraceSet via_rec = concat_sets(start, loop_rec(exit_cond, body, u, fuel + 1));
    CHECK(via_union == via_rec);

    // decode both sides to valuation sequences and compare with denote
    Binding binding = Binding::of(r);
    auto decode_quad = [&](State s) {
        const Quad& q = states[static_cast<size_t>(s)];
        EnvState env;
        env.values = {Value::integer(q.a), Value::integer(q.b), Value::integer(q.s),
                      Value::integer(q.i)};
        return env;
    };
    REQUIRE(binding.names == std::vector<std::string>{"a", "b", "s", "i"});

    std::set<std::vector<EnvState>> algebraic;
    for (const Trace& t : via_union) {
        std::vector<EnvState> envs;
        for (State s : t) envs.push_back(decode_quad(s));
        algebraic.insert(collapse_envs(envs));
    }

    std::set<std::vector<EnvState>> denoted;
    DenoteResult dr = denote(r, d, fuel);
    for (const Trace& t : dr.traces) denoted.insert(collapse_envs(dr.decode(t)));

    CHECK(algebraic == denoted);
    CHECK(denoted.size() == 16); // one complete trace per (a, b) input
}

TEST_CASE("denotational and operational semantics agree on the whole corpus") {
    // the central cross-oracle check: over the tiny domain, each admissible
    // input's unique complete denotational trace is exactly the interpreter
    // trace with stationary steps collapsed
    for (const CorpusEntry& entry : corpus()) {
        INFO(entry.name);
        Routine r = corpus_routine(entry);
        const int fuel = 8;
        DenoteResult d = denote(r, entry.tiny_domain, fuel);

        std::map<EnvState, std::vector<EnvState>> by_start;
        for (const Trace& t : d.traces) {
            auto envs = d.decode(t);
            bool fresh = by_start.emplace(envs.front(), collapse_envs(envs)).second;
            CHECK(fresh); // determinism: one complete trace per initial state
        }

        InputSpace space(r, entry.tiny_domain);
        RunOptions opts;
        opts.fuel = fuel;
        uint64_t compared = 0;
        for (uint64_t i = 0; i < space.size(); ++i) {
            std::vector<Value> args = space.decode(i);
            if (!satisfies_require(r, args)) continue;
            RunOutcome out = run(r, args, opts);
            REQUIRE(!out.trace.empty());
            const EnvState& start = out.trace.front().env;
            auto it = by_start.find(start);
            if (out.ok()) {
                REQUIRE(it != by_start.end());
                CHECK(it->second == env_projection(out.trace));
                ++compared;
            } else {
                CHECK(it == by_start.end());
            }
        }
        CHECK(compared > 0);
        CHECK(compared == d.traces.size());
        CHECK(d.unresolved.empty());
    }
}
