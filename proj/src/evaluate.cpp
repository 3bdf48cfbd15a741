#include "mil/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <sstream>

#include <json.hpp>

#include "mil/rng.hpp"

namespace mil {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

} // namespace

FaultSet run_suite(const Routine& variant, int variant_id, const TestSuite& suite, int fuel) {
    FaultSet faults;
    RunOptions opts;
    opts.fuel = fuel;
    opts.record_trace = false;
    for (const TestCase& tc : suite.tests) {
        RunOutcome out = run(variant, tc.input, opts);
        switch (out.status) {
        case RunStatus::Ok:
            break;
        case RunStatus::ContractViolation:
        case RunStatus::CheckViolation:
        case RunStatus::RuntimeError:
        case RunStatus::FuelExhausted:
            faults.insert(FaultRecord{variant_id, out.tag, out.line});
            break;
        }
    }
    return faults;
}

void aggregate(EvalReport& report) {
    report.np.assign(static_cast<size_t>(report.max_depth), 0.0);
    report.na.assign(static_cast<size_t>(report.max_depth), 0);
    for (int depth = 1; depth <= report.max_depth; ++depth) {
        const auto& row = report.faults[static_cast<size_t>(depth) - 1];
        double sum = 0;
        FaultSet all;
        for (const FaultSet& cell : row) {
            sum += static_cast<double>(cell.size());
            all.insert(cell.begin(), cell.end());
        }
        report.np[static_cast<size_t>(depth) - 1] =
            report.runs > 0 ? sum / static_cast<double>(report.runs) : 0.0;
        report.na[static_cast<size_t>(depth) - 1] = static_cast<int>(all.size());
    }
}

EvalReport evaluate(const Routine& r, const std::vector<Mutant>& mutants,
                    const EvalParams& params) {
    if (params.max_depth < 1 || params.runs < 1)
        throw std::invalid_argument("evaluation needs at least one depth and one run");
    EvalReport report;
    report.routine = r.name;
    report.max_depth = params.max_depth;
    report.runs = params.runs;
    report.mutants_used = static_cast<int>(mutants.size());
    report.faults.assign(static_cast<size_t>(params.max_depth),
                         std::vector<FaultSet>(static_cast<size_t>(params.runs)));
    report.gen_ms.assign(static_cast<size_t>(params.max_depth), 0.0);
    report.exec_ms.assign(static_cast<size_t>(params.max_depth), 0.0);

    ProfileCache cache; // one profile per routine/domain, shared by all cells

    for (int j = 1; j <= params.runs; ++j) {
        uint64_t run_seed = mix_seed(params.base_seed, static_cast<uint64_t>(j));
        for (int depth = 1; depth <= params.max_depth; ++depth) {
            GenOptions gen;
            gen.depth = depth;
            gen.domain = params.domain;
            gen.mode = "scu";
            gen.order = SearchOrder::Random;
            gen.seed = run_seed;
            gen.fuel = params.fuel;
            gen.cache = &cache;

            auto t0 = std::chrono::steady_clock::now();
            TestSuite suite = generate(r, gen);
            report.gen_ms[static_cast<size_t>(depth) - 1] += ms_since(t0);

            auto t1 = std::chrono::steady_clock::now();
            FaultSet& cell = report.faults[static_cast<size_t>(depth) - 1]
                                          [static_cast<size_t>(j) - 1];
            for (const Mutant& m : mutants) {
                FaultSet found = run_suite(m.routine, m.id, suite, params.fuel);
                cell.insert(found.begin(), found.end());
            }
            report.exec_ms[static_cast<size_t>(depth) - 1] += ms_since(t1);
        }
    }

    aggregate(report);
    return report;
}

std::vector<double> normalized(const std::vector<double>& series) {
    double top = 0;
    for (double v : series) top = std::max(top, v);
    std::vector<double> out;
    out.reserve(series.size());
    for (double v : series) out.push_back(top > 0 ? v / top : 0.0);
    return out;
}

namespace {

std::vector<double> na_as_double(const EvalReport& r) {
    return std::vector<double>(r.na.begin(), r.na.end());
}

} // namespace

std::string report_json(const EvalReport& report) {
    nlohmann::ordered_json doc;
    doc["routine"] = report.routine;
    doc["runs"] = report.runs;
    doc["max_depth"] = report.max_depth;
    doc["mutants"] = report.mutants_used;
    doc["np"] = report.np;
    doc["na"] = report.na;
    doc["p_np"] = normalized(report.np);
    doc["p_na"] = normalized(na_as_double(report));
    if (report.max_depth >= 2) {
        doc["delta_1_to_2"] = {
            {"np", report.np[1] - report.np[0]},
            {"na", report.na[1] - report.na[0]},
            {"np_pct", report.np[0] > 0 ? 100.0 * (report.np[1] - report.np[0]) / report.np[0]
                                        : 0.0},
            {"na_pct", report.na[0] > 0
                           ? 100.0 * (report.na[1] - report.na[0]) / report.na[0]
                           : 0.0},
        };
    }
    doc["cells"] = nlohmann::ordered_json::array();
    for (int depth = 1; depth <= report.max_depth; ++depth) {
        nlohmann::ordered_json row;
        row["depth"] = depth;
        row["gen_ms"] = report.gen_ms[static_cast<size_t>(depth) - 1];
        row["exec_ms"] = report.exec_ms[static_cast<size_t>(depth) - 1];
        row["runs"] = nlohmann::ordered_json::array();
        for (int j = 1; j <= report.runs; ++j) {
            nlohmann::ordered_json cell = nlohmann::ordered_json::array();
            for (const FaultRecord& f :
                 report.faults[static_cast<size_t>(depth) - 1][static_cast<size_t>(j) - 1])
                cell.push_back({{"variant", f.variant}, {"tag", f.tag}, {"line", f.line}});
            row["runs"].push_back(cell);
        }
        doc["cells"].push_back(row);
    }
    return doc.dump(2) + "\n";
}

std::string report_table(const EvalReport& report) {
    std::ostringstream os;
    os << "routine: " << report.routine << "  (runs=" << report.runs
       << ", mutants=" << report.mutants_used << ")\n";
    os << "depth      Np      Na   P(Np)   P(Na)   gen_ms  exec_ms\n";
    std::vector<double> pnp = normalized(report.np);
    std::vector<double> pna = normalized(na_as_double(report));
    char buf[128];
    for (int depth = 1; depth <= report.max_depth; ++depth) {
        size_t i = static_cast<size_t>(depth) - 1;
        std::snprintf(buf, sizeof buf, "%5d %7.2f %7d %7.2f %7.2f %8.1f %8.1f\n", depth,
                      report.np[i], report.na[i], pnp[i], pna[i], report.gen_ms[i],
                      report.exec_ms[i]);
        os << buf;
    }
    if (report.max_depth >= 2) {
        double dnp = report.np[1] - report.np[0];
        double dna = static_cast<double>(report.na[1] - report.na[0]);
        std::snprintf(buf, sizeof buf,
                      "depth 1 -> 2: Np %+.2f (%+.1f%%), Na %+.0f (%+.1f%%)\n", dnp,
                      report.np[0] > 0 ? 100 * dnp / report.np[0] : 0.0, dna,
                      report.na[0] > 0 ? 100 * dna / report.na[0] : 0.0);
        os << buf;
    }
    return os.str();
}

std::string plot_rows(const EvalReport& report) {
    std::ostringstream os;
    os << "depth,p_np,p_na\n";
    std::vector<double> pnp = normalized(report.np);
    std::vector<double> pna = normalized(na_as_double(report));
    for (int depth = 1; depth <= report.max_depth; ++depth) {
        size_t i = static_cast<size_t>(depth) - 1;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%d,%.4f,%.4f\n", depth, pnp[i], pna[i]);
        os << buf;
    }
    return os.str();
}

} // namespace mil
