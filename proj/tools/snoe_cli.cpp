#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "snoe/eval.hpp"
#include "snoe/graph_io.hpp"
#include "snoe/pipeline.hpp"
#include "snoe/rng.hpp"
#include "snoe/sem.hpp"

namespace {

using nlohmann::json;
using namespace snoe;

// ---- logging (level from SNOE_LOG: debug|info|warn|error|off) ----

enum class LogLevel { Debug = 0, Info, Warn, Error, Off };

LogLevel log_level() {
    static LogLevel lvl = [] {
        const char* env = std::getenv("SNOE_LOG");
        std::string s = env ? env : "warn";
        if (s == "debug") return LogLevel::Debug;
        if (s == "info") return LogLevel::Info;
        if (s == "error") return LogLevel::Error;
        if (s == "off") return LogLevel::Off;
        return LogLevel::Warn;
    }();
    return lvl;
}

void log(LogLevel lvl, const std::string& msg) {
    static const char* names[] = {"debug", "info", "warn", "error"};
    if (lvl >= log_level() && lvl != LogLevel::Off)
        std::cerr << "[" << names[static_cast<int>(lvl)] << "] " << msg << "\n";
}

// ---- key-value config files: [section] headers, key = value, # comments ----

using Section = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, Section>> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::vector<std::pair<std::string, Section>> out;
    out.emplace_back("", Section{});
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unterminated section header");
            out.emplace_back(trim(line.substr(1, line.size() - 2)), Section{});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (val.size() >= 2 && ((val.front() == '"' && val.back() == '"') || (val.front() == '\'' && val.back() == '\'')))
            val = val.substr(1, val.size() - 2);
        if (key.empty()) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
        out.back().second[key] = val;
    }
    return out;
}

std::string get_or(const Section& s, const std::string& key, const std::string& fallback) {
    auto it = s.find(key);
    return it == s.end() ? fallback : it->second;
}

double num_or(const Section& s, const std::string& key, double fallback) {
    auto it = s.find(key);
    return it == s.end() ? fallback : std::stod(it->second);
}

// ---- shared serialization ----

json report_to_json(const PruneReport& pr, const std::vector<std::string>& labels) {
    auto edge = [&](const PrunedEdge& e) {
        json j{{"from", labels[e.from]}, {"to", labels[e.to]}, {"undirected", e.undirected}};
        if (e.p_value >= 0.0) j["p_value"] = e.p_value; else j["p_value"] = nullptr;
        return j;
    };
    json removed = json::array(), kept = json::array(), oriented = json::array();
    for (const auto& e : pr.removed) removed.push_back(edge(e));
    for (const auto& e : pr.kept) kept.push_back(edge(e));
    for (auto [a, b] : pr.oriented) oriented.push_back({{"from", labels[a]}, {"to", labels[b]}});
    json screened = json::array();
    for (int v : pr.screened_nodes) screened.push_back(labels[v]);
    return json{{"alpha_prune", pr.alpha_prune}, {"removed", removed},      {"kept", kept},
                {"oriented", oriented},          {"screened", screened},    {"warnings", pr.warnings}};
}

json trace_to_json(const StageTrace& tr, const std::vector<std::string>& labels) {
    json stages = json::array();
    for (const auto& s : tr.stages)
        stages.push_back({{"name", s.name},
                          {"seconds", s.seconds},
                          {"directed_edges", s.graph.directed_edges().size()},
                          {"undirected_edges", s.graph.undirected_edge_count()}});
    return json{{"stages", stages},
                {"candidate_edges", tr.candidate_edges},
                {"vstructure_conflicts", tr.vstructure_conflicts},
                {"orient",
                 {{"tests_run", tr.orient.tests_run},
                  {"oriented_by_test", tr.orient.oriented_by_test},
                  {"oriented_by_propagation", tr.orient.oriented_by_propagation},
                  {"indistinguishable", tr.orient.indistinguishable},
                  {"conflicts", tr.orient.conflicts}}},
                {"prune", report_to_json(tr.prune, labels)}};
}

json eval_to_json(const EvalReport& r) {
    return json{{"tp", r.tp},
                {"fp", r.fp},
                {"fn", r.fn},
                {"wrong_dir", r.wrong_dir},
                {"undirected_pred", r.undirected_pred},
                {"f1", r.f1},
                {"shd", r.shd},
                {"truth_kind", r.ground_truth_kind == TruthKind::Dag ? "dag" : "cpdag"}};
}

// ---- config plumbing ----

void add_pipeline_flags(CLI::App* cmd, PipelineConfig& cfg, std::string& variant, std::string& output,
                        std::string& ranking) {
    cmd->add_option("--alpha1", cfg.alpha1, "strict skeleton significance level");
    cmd->add_option("--alpha2", cfg.alpha2, "relaxed candidate-edge level");
    cmd->add_option("--alpha", cfg.alpha_orient, "orientation-test level");
    cmd->add_option("--alpha-prune", cfg.alpha_prune, "pruning significance level");
    cmd->add_option("--delta", cfg.delta, "variance-ratio threshold of the orientation test");
    cmd->add_option("--variant", variant, "orientation test variant")->check(CLI::IsMember({"ss", "cv"}));
    cmd->add_option("--output", output, "output graph kind")->check(CLI::IsMember({"pdag", "dag"}));
    cmd->add_option("--ranking", ranking, "edge evaluation order")->check(CLI::IsMember({"partitioned", "global"}));
    cmd->add_option("--seed", cfg.seed, "split / stage seed");
    cmd->add_option("--max-cond-size", cfg.max_cond_size, "conditioning set cap in skeleton learning");
}

void finish_pipeline_flags(PipelineConfig& cfg, const std::string& variant, const std::string& output,
                           const std::string& ranking) {
    cfg.variant = variant == "ss" ? LrtVariant::SS : LrtVariant::CV;
    cfg.output_kind = output == "pdag" ? PipelineConfig::Output::Pdag : PipelineConfig::Output::Dag;
    cfg.ranking = ranking == "global" ? RankingMode::Global : RankingMode::Partitioned;
}

MixedGraph structure_from_section(const Section& s, std::uint64_t seed, const std::string& context) {
    std::string structure = get_or(s, "structure", "random");
    if (structure == "random") {
        int nodes = static_cast<int>(num_or(s, "nodes", 0));
        if (nodes < 1) throw std::runtime_error(context + ": random structure needs nodes >= 1");
        double degree = num_or(s, "degree", 2.0);
        return random_dag(nodes, degree, seed);
    }
    return load_structure(structure);
}

SemSpec sem_spec_from_section(const Section& s, const std::string& context) {
    SemSpec spec;
    spec.seed = static_cast<std::uint64_t>(num_or(s, "seed", 0));
    spec.dag = structure_from_section(s, derive_seed(spec.seed, 0), context);
    spec.mechanism = mechanism_from_string(get_or(s, "mechanism", "invertible"));
    spec.noise = noise_from_string(get_or(s, "noise", "gaussian"));
    spec.sigma_range = {num_or(s, "sigma_min", 0.5), num_or(s, "sigma_max", 0.75)};
    spec.gp_bandwidth_range = {num_or(s, "gp_bandwidth_min", 5.0), num_or(s, "gp_bandwidth_max", 5.25)};
    return spec;
}

// ---- subcommand bodies ----

int cmd_learn(const std::string& data_path, PipelineConfig cfg, const std::string& out_path, bool report) {
    DataMatrix data = DataMatrix::read_csv(data_path);
    log(LogLevel::Info, "loaded " + std::to_string(data.n()) + " rows, " + std::to_string(data.p()) + " columns");
    auto [graph, trace] = run_pipeline(data, cfg);
    for (const auto& s : trace.stages)
        log(LogLevel::Info, "stage " + s.name + ": " + std::to_string(s.graph.edge_count()) + " edges, " +
                                std::to_string(s.seconds) + " s");
    if (out_path.empty()) {
        std::cout << graph_to_edgelist(graph);
    } else {
        save_structure(graph, out_path);
        log(LogLevel::Info, "wrote " + out_path);
    }
    if (report) {
        json j = trace_to_json(trace, data.labels);
        if (out_path.empty()) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::string rp = out_path + ".report.json";
            std::ofstream out(rp);
            out << j.dump(2) << "\n";
            log(LogLevel::Info, "wrote " + rp);
        }
    }
    return 0;
}

int cmd_orient_pair(const std::string& data_path, const std::string& cols, PipelineConfig cfg) {
    auto comma = cols.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("--cols expects two comma-separated column names");
    std::string x = trim(cols.substr(0, comma));
    std::string y = trim(cols.substr(comma + 1));
    DataMatrix data = DataMatrix::read_csv(data_path);
    PairVerdict v = orient_pair(data, x, y, cfg);
    std::cout << v.text << "\n";
    json detail{{"decision", v.outcome.decision == LrtDecision::Forward      ? "forward"
                             : v.outcome.decision == LrtDecision::Backward   ? "backward"
                             : v.outcome.decision == LrtDecision::Undirected ? "undirected"
                                                                             : "indistinguishable"},
                {"stat", v.outcome.lr_stat},
                {"p_value", v.outcome.p_value},
                {"variance_ratio", v.outcome.variance_ratio}};
    detail["forced_direction"] = (v.forced_from == 0 ? x : y) + " -> " + (v.forced_from == 0 ? y : x);
    if (v.outcome.per_fold) {
        detail["fold_stats"] = {v.outcome.per_fold->first.stat, v.outcome.per_fold->second.stat};
        detail["fold_p_values"] = {v.outcome.per_fold->first.p_value, v.outcome.per_fold->second.p_value};
    }
    std::cout << detail.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const std::string& spec_path, int n, const std::string& out_dir) {
    auto sections = parse_kv_file(spec_path);
    const Section& top = sections.front().second;
    SemSpec spec = sem_spec_from_section(top, spec_path);
    DataMatrix data = sample_data(spec, n);
    std::filesystem::create_directories(out_dir);
    std::string data_path = out_dir + "/data.csv";
    std::string truth_path = out_dir + "/truth.json";
    data.write_csv(data_path);
    save_structure(spec.dag, truth_path);
    log(LogLevel::Info, "wrote " + data_path + " and " + truth_path);
    return 0;
}

int cmd_bench(const std::string& suite_path, const std::string& out_path) {
    auto sections = parse_kv_file(suite_path);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << "case,replicate,stage,tp,fp,fn,wrong_dir,undirected_pred,f1,shd,seconds\n";
    for (const auto& [name, sec] : sections) {
        if (name.empty()) continue;  // header-free preamble holds no cases
        int replicates = static_cast<int>(num_or(sec, "replicates", 1));
        int n = static_cast<int>(num_or(sec, "n", 1000));
        std::uint64_t case_seed = static_cast<std::uint64_t>(num_or(sec, "seed", 0));
        MixedGraph truth = structure_from_section(sec, derive_seed(case_seed, 0), suite_path + " [" + name + "]");

        SemSpec spec;
        spec.dag = truth;
        spec.mechanism = mechanism_from_string(get_or(sec, "mechanism", "invertible"));
        spec.noise = noise_from_string(get_or(sec, "noise", "gaussian"));
        spec.sigma_range = {num_or(sec, "sigma_min", 0.5), num_or(sec, "sigma_max", 0.75)};
        spec.gp_bandwidth_range = {num_or(sec, "gp_bandwidth_min", 5.0), num_or(sec, "gp_bandwidth_max", 5.25)};

        PipelineConfig cfg;
        cfg.alpha1 = num_or(sec, "alpha1", cfg.alpha1);
        cfg.alpha2 = num_or(sec, "alpha2", cfg.alpha2);
        cfg.alpha_orient = num_or(sec, "alpha", cfg.alpha_orient);
        cfg.alpha_prune = num_or(sec, "alpha_prune", cfg.alpha_prune);
        cfg.delta = num_or(sec, "delta", cfg.delta);
        cfg.variant = get_or(sec, "variant", "cv") == "ss" ? LrtVariant::SS : LrtVariant::CV;
        cfg.output_kind = get_or(sec, "output", "dag") == "pdag" ? PipelineConfig::Output::Pdag
                                                                 : PipelineConfig::Output::Dag;
        cfg.ranking = get_or(sec, "ranking", "partitioned") == "global" ? RankingMode::Global
                                                                        : RankingMode::Partitioned;

        for (int r = 0; r < replicates; ++r) {
            spec.seed = derive_seed(case_seed, 1000 + static_cast<std::uint64_t>(r));
            cfg.seed = derive_seed(case_seed, 2000 + static_cast<std::uint64_t>(r));
            try {
                DataMatrix data = sample_data(spec, n);
                auto [graph, trace] = run_pipeline(data, cfg);
                (void)graph;
                for (const auto& s : trace.stages) {
                    EvalReport er = evaluate(s.graph, truth, TruthKind::Dag);
                    out << name << ',' << r << ',' << s.name << ',' << er.tp << ',' << er.fp << ','
                        << er.fn << ',' << er.wrong_dir << ',' << er.undirected_pred << ',' << er.f1
                        << ',' << er.shd << ',' << s.seconds << "\n";
                }
            } catch (const std::exception& e) {
                log(LogLevel::Error, "case " + name + " replicate " + std::to_string(r) + " failed: " + e.what());
            }
        }
        log(LogLevel::Info, "finished case " + name);
    }
    return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path, const std::string& kind) {
    MixedGraph pred = load_structure(pred_path);
    MixedGraph truth = load_structure(truth_path);
    EvalReport r = evaluate(pred, truth, kind == "dag" ? TruthKind::Dag : TruthKind::Cpdag);
    std::cout << eval_to_json(r).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlinear causal structure learning"};
    app.require_subcommand(1);

    // learn
    std::string learn_data, learn_out;
    bool learn_report = false;
    PipelineConfig learn_cfg;
    std::string learn_variant = "cv", learn_output = "dag", learn_ranking = "partitioned";
    auto* learn = app.add_subcommand("learn", "run the discovery pipeline on a CSV dataset");
    learn->add_option("data", learn_data, "input CSV with header row")->required();
    add_pipeline_flags(learn, learn_cfg, learn_variant, learn_output, learn_ranking);
    learn->add_option("--out", learn_out, "write the learned graph here (.json or edge list .txt)");
    learn->add_flag("--report", learn_report, "emit a stage/prune report (JSON)");

    // orient-pair
    std::string pair_data, pair_cols;
    PipelineConfig pair_cfg;
    std::string pair_variant = "cv", pair_output = "dag", pair_ranking = "partitioned";
    auto* pair = app.add_subcommand("orient-pair", "orientation test on a bare variable pair");
    pair->add_option("data", pair_data, "input CSV with header row")->required();
    pair->add_option("--cols", pair_cols, "the two column names, comma separated")->required();
    add_pipeline_flags(pair, pair_cfg, pair_variant, pair_output, pair_ranking);

    // simulate
    std::string sim_spec, sim_out = ".";
    int sim_n = 1000;
    auto* sim = app.add_subcommand("simulate", "sample a synthetic dataset from a structural model spec");
    sim->add_option("--spec", sim_spec, "key = value spec file")->required();
    sim->add_option("-n", sim_n, "sample size")->required();
    sim->add_option("--out", sim_out, "output directory (data.csv, truth.json)");

    // bench
    std::string bench_suite, bench_out;
    auto* bench = app.add_subcommand("bench", "run a benchmark suite and write per-stage metric rows");
    bench->add_option("--suite", bench_suite, "suite file: one [case] section per benchmark")->required();
    bench->add_option("--out", bench_out, "results CSV path")->required();

    // eval
    std::string eval_pred, eval_truth, eval_kind = "dag";
    auto* ev = app.add_subcommand("eval", "score a predicted graph against a reference");
    ev->add_option("--pred", eval_pred, "predicted graph (.json or edge list)")->required();
    ev->add_option("--truth", eval_truth, "reference graph")->required();
    ev->add_option("--truth-kind", eval_kind, "reference type")->check(CLI::IsMember({"dag", "cpdag"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*learn) {
            finish_pipeline_flags(learn_cfg, learn_variant, learn_output, learn_ranking);
            return cmd_learn(learn_data, learn_cfg, learn_out, learn_report);
        }
        if (*pair) {
            finish_pipeline_flags(pair_cfg, pair_variant, pair_output, pair_ranking);
            return cmd_orient_pair(pair_data, pair_cols, pair_cfg);
        }
        if (*sim) return cmd_simulate(sim_spec, sim_n, sim_out);
        if (*bench) return cmd_bench(bench_suite, bench_out);
        if (*ev) return cmd_eval(eval_pred, eval_truth, eval_kind);
    } catch (const StageError& e) {
        log(LogLevel::Error, e.what());
        return 1;
    } catch (const std::exception& e) {
        log(LogLevel::Error, e.what());
        return 1;
    }
    return 0;
}
