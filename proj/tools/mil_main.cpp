#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mil/corpus.hpp"
#include "mil/denote.hpp"
#include "mil/evaluate.hpp"
#include "mil/laws.hpp"
#include "mil/mutate.hpp"
#include "mil/parser.hpp"
#include "mil/printer.hpp"
#include "mil/scu.hpp"
#include "mil/testgen.hpp"
#include "mil/unroll.hpp"

namespace fs = std::filesystem;
using namespace mil;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

Routine load(const std::string& path) { return parse(slurp(path)); }

Domain domain_from(const std::string& int_range, int array_max) {
    Domain d;
    auto dots = int_range.find("..");
    if (dots == std::string::npos)
        throw std::runtime_error("--int-range needs the form A..B");
    d.int_min = std::stoll(int_range.substr(0, dots));
    d.int_max = std::stoll(int_range.substr(dots + 2));
    if (d.int_max < d.int_min) throw std::runtime_error("empty --int-range");
    d.array_len_max = array_max;
    return d;
}

SearchOrder order_from(const std::string& name) {
    if (name == "lex") return SearchOrder::Lex;
    if (name == "random") return SearchOrder::Random;
    throw std::runtime_error("--order must be lex or random");
}

int run_laws(long samples, uint64_t seed, bool exhaustive, const std::string& json_out) {
    std::vector<LawReport> reports = check_all(samples, seed);
    if (exhaustive) {
        std::vector<LawReport> ex = check_all_exhaustive();
        reports.insert(reports.end(), ex.begin(), ex.end());
    }
    bool failed = false;
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    size_t random_count = law_registry().size();
    for (size_t i = 0; i < reports.size(); ++i) {
        const LawReport& r = reports[i];
        const char* mode = i < random_count ? "random" : "exhaustive";
        std::printf("%-22s %-10s %8ld samples  %s\n", r.name.c_str(), mode, r.samples,
                    r.passed() ? "pass" : "FAIL");
        if (!r.passed()) {
            failed = true;
            std::printf("  counterexample: %s\n", r.counterexample->c_str());
        }
        doc.push_back({{"law", r.name},
                       {"mode", mode},
                       {"samples", r.samples},
                       {"passed", r.passed()},
                       {"counterexample", r.counterexample.value_or("")},
                       {"elapsed_us", r.elapsed.count()}});
    }
    if (!json_out.empty()) spit(json_out, doc.dump(2) + "\n");
    std::printf("%zu law checks: %s\n", reports.size(), failed ? "FAILURES" : "all passed");
    return failed ? 1 : 0;
}

int run_replay(const Routine& r, const TestSuite& suite, bool show_trace) {
    int mismatches = 0;
    for (const TestCase& tc : suite.tests) {
        Certificate cert = replay(r, tc);
        std::printf("test %d (target %d): iterations=%d %s\n", tc.id, tc.target_id,
                    cert.iterations, cert.matches_target ? "certified" : "MISMATCH");
        if (!cert.matches_target) ++mismatches;
        if (show_trace) {
            RunOutcome out = run(r, tc.input);
            std::fputs(dump_trace(Binding::of(r), out.trace).c_str(), stdout);
        }
    }
    std::printf("%zu tests, %d mismatches, %zu uncovered targets\n", suite.tests.size(),
                mismatches, suite.uncovered.size());
    return mismatches ? 1 : 0;
}

void write_suite_artifacts(const Routine& r, const TestSuite& suite, const GenOptions& gen,
                           const std::string& out) {
    spit(out, suite_json(suite));
    InstrumentedRoutine ir =
        gen.mode == "sc" ? instrument_sc(r) : instrument_scu(r, gen.depth);
    spit(out + ".targets.json", manifest_json(ir));
    std::printf("%zu tests (%zu uncovered, %zu unknown) -> %s\n", suite.tests.size(),
                suite.uncovered.size(), suite.unknown.size(), out.c_str());
}

int eval_routine(const Routine& r, const std::vector<Mutant>& mutants, EvalParams params,
                 const std::string& out_base) {
    EvalReport report = evaluate(r, mutants, params);
    spit(out_base + ".json", report_json(report));
    spit(out_base + "_plot.csv", plot_rows(report));
    std::fputs(report_table(report).c_str(), stdout);
    std::printf("report -> %s.json, plot -> %s_plot.csv\n", out_base.c_str(),
                out_base.c_str());
    return 0;
}

std::vector<Mutant> load_mutants(const Routine& original, const std::string& dir) {
    std::vector<std::pair<int, fs::path>> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        auto m = name.rfind("_m");
        if (entry.path().extension() != ".mil" || m == std::string::npos) continue;
        files.emplace_back(std::stoi(name.substr(m + 2)), entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Mutant> out;
    for (const auto& [id, path] : files) {
        Mutant m;
        m.id = id;
        m.routine = load(path.string());
        m.description = path.filename().string();
        if (m.routine.name != original.name)
            throw std::runtime_error("mutant " + path.string() + " is for another routine");
        out.push_back(std::move(m));
    }
    if (out.empty()) throw std::runtime_error("no *_m<k>.mil files in " + dir);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trace-semantics loop unrolling and coverage-driven test generation"};
    app.require_subcommand(1);

    // parse
    std::string file;
    auto* cmd_parse = app.add_subcommand("parse", "parse, typecheck, and reprint a routine");
    cmd_parse->add_option("file", file, "input .mil file")->required();

    // analyze
    auto* cmd_analyze = app.add_subcommand("analyze", "report loop structure");
    cmd_analyze->add_option("file", file, "input .mil file")->required();

    // unroll
    int depth = 1;
    std::string form = "strict";
    std::string out_path;
    auto* cmd_unroll = app.add_subcommand("unroll", "emit the depth-n unrolled routine");
    cmd_unroll->add_option("file", file)->required();
    cmd_unroll->add_option("--depth", depth, "unroll depth")->required();
    cmd_unroll->add_option("--form", form, "strict|truncated");
    cmd_unroll->add_option("-o,--output", out_path, "write to file instead of stdout");

    // instrument
    std::string mode = "scu";
    auto* cmd_instr = app.add_subcommand("instrument", "seed contradictions (sc or scu)");
    cmd_instr->add_option("file", file)->required();
    cmd_instr->add_option("--depth", depth, "unroll depth (scu)");
    cmd_instr->add_option("--mode", mode, "sc|scu");
    cmd_instr->add_option("-o,--output", out_path, "output base (default: <file>.<mode>)");

    // gen
    std::string int_range = "0..5";
    int array_max = 0;
    std::string order = "lex";
    uint64_t seed = 0;
    uint64_t budget = 0;
    std::string suite_path = "suite.json";
    auto* cmd_gen = app.add_subcommand("gen", "generate a covering test suite");
    cmd_gen->add_option("file", file)->required();
    cmd_gen->add_option("--depth", depth, "unroll depth")->required();
    cmd_gen->add_option("--int-range", int_range, "integer domain A..B")->required();
    cmd_gen->add_option("--array-max", array_max, "max array length");
    cmd_gen->add_option("--order", order, "lex|random");
    cmd_gen->add_option("--seed", seed, "search order seed");
    cmd_gen->add_option("--budget", budget, "inputs examined per target (0 = all)");
    cmd_gen->add_option("--mode", mode, "sc|scu");
    cmd_gen->add_option("-o,--output", suite_path, "suite file");

    // run
    std::string suite_in;
    bool show_trace = false;
    auto* cmd_run = app.add_subcommand("run", "replay a suite against the original routine");
    cmd_run->add_option("file", file)->required();
    cmd_run->add_option("--suite", suite_in, "suite file")->required();
    cmd_run->add_flag("--trace", show_trace, "dump execution traces");

    // mutate
    int count = 30;
    std::string out_dir = "mutants";
    auto* cmd_mutate = app.add_subcommand("mutate", "write faulty variants");
    cmd_mutate->add_option("file", file)->required();
    cmd_mutate->add_option("--count", count, "number of mutants")->required();
    cmd_mutate->add_option("--seed", seed, "sampling seed");
    cmd_mutate->add_option("-o,--output", out_dir, "output directory");

    // eval
    std::string mutants_dir;
    int max_depth = 5;
    int runs = 20;
    std::string report_base = "report";
    auto* cmd_eval = app.add_subcommand("eval", "mutation-based evaluation across depths");
    cmd_eval->add_option("file", file)->required();
    cmd_eval->add_option("--mutants", mutants_dir, "directory of *_m<k>.mil")->required();
    cmd_eval->add_option("--max-depth", max_depth, "depths 1..N");
    cmd_eval->add_option("--runs", runs, "repetition runs");
    cmd_eval->add_option("--seed", seed, "base seed");
    cmd_eval->add_option("--int-range", int_range, "integer domain A..B")->required();
    cmd_eval->add_option("--array-max", array_max, "max array length");
    cmd_eval->add_option("-o,--output", report_base, "report base name");

    // laws
    long samples = 1000;
    bool exhaustive = false;
    std::string json_out;
    auto* cmd_laws = app.add_subcommand("laws", "check the trace-set algebra laws");
    cmd_laws->add_option("--samples", samples, "random samples per law");
    cmd_laws->add_option("--seed", seed, "sampling seed");
    cmd_laws->add_flag("--exhaustive", exhaustive, "also run the exhaustive tiny-universe mode");
    cmd_laws->add_option("--json", json_out, "write machine-readable report");

    // corpus
    auto* cmd_corpus = app.add_subcommand("corpus", "bundled benchmark corpus");
    std::string corpus_action = "list";
    int corpus_depth = 0;
    cmd_corpus->add_option("action", corpus_action, "list|gen-all|eval-all");
    cmd_corpus->add_option("-o,--output", out_dir, "output directory (gen-all, eval-all)");
    cmd_corpus->add_option("--depth", corpus_depth, "suite depth for gen-all (0 = per-entry max)");
    cmd_corpus->add_option("--runs", runs, "runs for eval-all");
    cmd_corpus->add_option("--max-depth", max_depth, "depth cap for eval-all");
    cmd_corpus->add_option("--count", count, "mutants per routine for eval-all");
    cmd_corpus->add_option("--seed", seed, "seed for eval-all");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_parse) {
            std::fputs(pretty(load(file)).c_str(), stdout);
            return 0;
        }
        if (*cmd_analyze) {
            Routine r = load(file);
            StructureInfo info = analyze(r);
            std::printf("routine %s: %d loop(s), max nesting %d\n", r.name.c_str(),
                        info.loop_count, info.max_nesting);
            for (const LoopInfo& li : info.loops)
                std::printf("  %s at line %d: %d branch(es) in the body\n", li.label.c_str(),
                            li.line, li.branches);
            return 0;
        }
        if (*cmd_unroll) {
            UnrollConfig cfg;
            cfg.depth = depth;
            cfg.form = form == "truncated" ? UnrollForm::Truncated : UnrollForm::Strict;
            std::string text = pretty(unroll_routine(load(file), cfg));
            if (out_path.empty())
                std::fputs(text.c_str(), stdout);
            else
                spit(out_path, text);
            return 0;
        }
        if (*cmd_instr) {
            Routine r = load(file);
            InstrumentedRoutine ir = mode == "sc" ? instrument_sc(r)
                                                  : instrument_scu(r, depth);
            std::string base = out_path.empty() ? file + "." + mode : out_path;
            spit(base + ".mil", pretty(ir.routine));
            spit(base + ".targets.json", manifest_json(ir));
            std::printf("%zu targets -> %s.mil, %s.targets.json\n", ir.targets.size(),
                        base.c_str(), base.c_str());
            return 0;
        }
        if (*cmd_gen) {
            Routine r = load(file);
            GenOptions gen;
            gen.depth = depth;
            gen.domain = domain_from(int_range, array_max);
            gen.mode = mode;
            gen.order = order_from(order);
            gen.seed = seed;
            gen.budget = budget;
            write_suite_artifacts(r, generate(r, gen), gen, suite_path);
            return 0;
        }
        if (*cmd_run) {
            return run_replay(load(file), suite_from_json(slurp(suite_in)), show_trace);
        }
        if (*cmd_mutate) {
            Routine r = load(file);
            std::vector<Mutant> mutants = mutate(r, all_mutation_ops(), count, seed);
            fs::create_directories(out_dir);
            for (const Mutant& m : mutants)
                spit((fs::path(out_dir) / (r.name + "_m" + std::to_string(m.id) + ".mil"))
                         .string(),
                     pretty(m.routine));
            spit((fs::path(out_dir) / (r.name + "_manifest.json")).string(),
                 mutants_manifest_json(r.name, mutants));
            std::printf("%zu mutants -> %s\n", mutants.size(), out_dir.c_str());
            return 0;
        }
        if (*cmd_eval) {
            Routine r = load(file);
            EvalParams params;
            params.max_depth = max_depth;
            params.runs = runs;
            params.base_seed = seed;
            params.domain = domain_from(int_range, array_max);
            return eval_routine(r, load_mutants(r, mutants_dir), params, report_base);
        }
        if (*cmd_laws) {
            return run_laws(samples, seed, exhaustive, json_out);
        }
        if (*cmd_corpus) {
            if (corpus_action == "list") {
                std::printf("%-20s %9s %10s %27s\n", "example", "branches", "max depth",
                            "generation domain");
                for (const CorpusEntry& e : corpus()) {
                    char dom[64];
                    std::snprintf(dom, sizeof dom, "ints %lld..%lld, arrays <= %d",
                                  static_cast<long long>(e.gen_domain.int_min),
                                  static_cast<long long>(e.gen_domain.int_max),
                                  e.gen_domain.array_len_max);
                    std::printf("%-20s %9d %10d %27s\n", e.name.c_str(), e.branches,
                                e.max_depth, dom);
                    if (!e.notes.empty()) std::printf("%22s note: %s\n", "", e.notes.c_str());
                }
                return 0;
            }
            if (corpus_action == "gen-all") {
                fs::create_directories(out_dir);
                for (const CorpusEntry& e : corpus()) {
                    Routine r = corpus_routine(e);
                    GenOptions gen;
                    gen.depth =
                        corpus_depth > 0 ? std::min(corpus_depth, e.max_depth) : e.max_depth;
                    gen.domain = e.gen_domain;
                    TestSuite suite = generate(r, gen);
                    std::string out = (fs::path(out_dir) / (e.file + "_suite.json")).string();
                    spit(out, suite_json(suite));
                    std::printf("%-20s depth %2d: %3zu tests, %zu uncovered -> %s\n",
                                e.name.c_str(), gen.depth, suite.tests.size(),
                                suite.uncovered.size(), out.c_str());
                }
                return 0;
            }
            if (corpus_action == "eval-all") {
                fs::create_directories(out_dir);
                for (const CorpusEntry& e : corpus()) {
                    Routine r = corpus_routine(e);
                    std::vector<Mutant> mutants = mutate(r, all_mutation_ops(), count, seed);
                    EvalParams params;
                    params.max_depth = std::min(max_depth, e.max_depth);
                    params.runs = runs;
                    params.base_seed = seed;
                    params.domain = e.gen_domain;
                    EvalReport report = evaluate(r, mutants, params);
                    std::string base = (fs::path(out_dir) / e.file).string();
                    spit(base + "_report.json", report_json(report));
                    spit(base + "_plot.csv", plot_rows(report));
                    std::fputs(report_table(report).c_str(), stdout);
                }
                std::printf("reports -> %s\n", out_dir.c_str());
                return 0;
            }
            std::fprintf(stderr, "unknown corpus action '%s' (list|gen-all|eval-all)\n",
                         corpus_action.c_str());
            return 2;
        }
    } catch (const ParseError& e) {
        std::fprintf(stderr, "%s: %s\n", file.c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
