#include "mil/trace_algebra.hpp"

#include <algorithm>
#include <sstream>

namespace mil {

Predicate Predicate::of(const Universe& u, const std::vector<State>& states) {
    Predicate p = none(u);
    for (State s : states) p.member[static_cast<size_t>(s)] = true;
    return p;
}

Predicate Predicate::complement() const {
    Predicate p{member};
    p.member.flip();
    return p;
}

Predicate Predicate::conj(const Predicate& other) const {
    Predicate p{member};
    for (size_t i = 0; i < p.member.size(); ++i)
        p.member[i] = p.member[i] && other.member[i];
    return p;
}

std::optional<Trace> concat_traces(const Trace& x, const Trace& y) {
    if (x.back() != y.front()) return std::nullopt;
    Trace z = x;
    z.insert(z.end(), y.begin() + 1, y.end());
    return z;
}

PrefixRel is_prefix(const Trace& x, const Trace& z) {
    // x <= z iff some y exists with x + y = z; such y is then the suffix of z
    // starting at the junction state, so a slice comparison decides it.
    if (x.size() > z.size()) return PrefixRel::NotPrefix;
    if (!std::equal(x.begin(), x.end(), z.begin())) return PrefixRel::NotPrefix;
    return x.size() < z.size() ? PrefixRel::ProperPrefix : PrefixRel::Prefix;
}

bool satisfies(const Trace& x, const Predicate& v) {
    return std::any_of(x.begin(), x.end(), [&](State s) { return v(s); });
}

TraceSet concat_sets(const TraceSet& a, const TraceSet& b) {
    TraceSet out;
    for (const Trace& x : a)
        for (const Trace& y : b)
            if (auto z = concat_traces(x, y)) out.insert(std::move(*z));
    return out;
}

TraceSet restrict_set(const Predicate& c, const TraceSet& a) {
    TraceSet out;
    for (const Trace& x : a)
        if (c(x.front())) out.insert(x);
    return out;
}

TraceSet corestrict_set(const TraceSet& a, const Predicate& c) {
    TraceSet out;
    for (const Trace& x : a)
        if (c(x.back())) out.insert(x);
    return out;
}

TraceSet skip_set(const Universe& u) {
    TraceSet out;
    for (State s = 0; s < u.size; ++s) out.insert(stationary(s));
    return out;
}

bool set_tests(const TraceSet& a, const Predicate& c) {
    return std::any_of(a.begin(), a.end(), [&](const Trace& x) { return satisfies(x, c); });
}

bool set_leq(const TraceSet& a, const TraceSet& b) {
    for (const Trace& x : a) {
        bool extended = std::any_of(b.begin(), b.end(), [&](const Trace& y) {
            return is_prefix(x, y) != PrefixRel::NotPrefix;
        });
        if (!extended) return false;
    }
    return true;
}

TraceSet set_union(const TraceSet& a, const TraceSet& b) {
    TraceSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

bool subset_of(const TraceSet& a, const TraceSet& b) {
    return std::all_of(a.begin(), a.end(), [&](const Trace& x) { return b.count(x) != 0; });
}

TraceSet power(const TraceSet& a, const Universe& u, int i) {
    if (i == 0) return skip_set(u);
    return concat_sets(a, power(a, u, i - 1));
}

TraceSet cond_set(const Predicate& v, const TraceSet& a, const Universe& u) {
    return set_union(restrict_set(v.complement(), skip_set(u)), restrict_set(v, a));
}

TraceSet loop_union(const Predicate& e, const TraceSet& b, const Universe& u, int i) {
    TraceSet acc = fail_set();
    TraceSet pow = skip_set(u);                    // (not e / B)^0
    const TraceSet body = restrict_set(e.complement(), b);
    for (int j = 0; j < i; ++j) {
        acc = set_union(acc, corestrict_set(pow, e));
        pow = concat_sets(body, pow);              // (not e / B)^{j+1}
    }
    return acc;
}

TraceSet loop_rec(const Predicate& e, const TraceSet& b, const Universe& u, int i) {
    TraceSet cur = fail_set();
    for (int j = 0; j < i; ++j)
        cur = set_union(restrict_set(e, skip_set(u)),
                        restrict_set(e.complement(), concat_sets(b, cur)));
    return cur;
}

static std::string state_name(State s) {
    if (s < 26) return std::string(1, static_cast<char>('a' + s));
    return "s" + std::to_string(s);
}

std::string to_string(const Trace& x) {
    std::ostringstream os;
    os << '<';
    for (size_t i = 0; i < x.size(); ++i) {
        if (i) os << ',';
        os << state_name(x[i]);
    }
    os << '>';
    return os.str();
}

std::string to_string(const TraceSet& a) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const Trace& x : a) {
        if (!first) os << ',';
        first = false;
        os << to_string(x);
    }
    os << '}';
    return os.str();
}

std::string to_string(const Predicate& p) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (size_t s = 0; s < p.member.size(); ++s) {
        if (!p.member[s]) continue;
        if (!first) os << ',';
        first = false;
        os << state_name(static_cast<State>(s));
    }
    os << '}';
    return os.str();
}

} // namespace mil
