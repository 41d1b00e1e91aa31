#ifndef SNOE_PIPELINE_HPP_
#define SNOE_PIPELINE_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snoe/prune.hpp"
#include "snoe/skeleton.hpp"

namespace snoe {

struct PipelineConfig {
    double alpha1 = 0.05;       // strict skeleton level
    double alpha2 = 0.25;       // relaxed level for candidate edges
    double alpha_orient = 0.05;
    double alpha_prune = 1e-4;
    double delta = 0.02;
    LrtVariant variant = LrtVariant::CV;
    enum class Output { Pdag, Dag };
    Output output_kind = Output::Dag;
    std::uint64_t seed = 0;
    RankingMode ranking = RankingMode::Partitioned;
    int max_cond_size = 5;

    void validate() const;  // throws std::invalid_argument
};

struct StageSnapshot {
    std::string name;  // initial | orient | prune | refine
    MixedGraph graph;
    double seconds = 0.0;
};

struct StageTrace {
    std::vector<StageSnapshot> stages;
    int candidate_edges = 0;
    int vstructure_conflicts = 0;
    OrientTrace orient;
    PruneReport prune;
};

class StageError : public std::runtime_error {
public:
    StageError(const std::string& stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// initial graph -> edge orientation -> pruning -> (dag output only) forced
// refinement. One half split, derived from cfg.seed, is shared by every
// regression-based stage. Stage failures rethrow as StageError.
std::pair<MixedGraph, StageTrace> run_pipeline(const DataMatrix& data, const PipelineConfig& cfg);

struct PairVerdict {
    LrtOutcome outcome;
    int forced_from = 0, forced_to = 1;  // sign of the statistic, significance ignored
    std::string text;
};

// Orientation test on a bare variable pair (no conditioning graph).
PairVerdict orient_pair(const DataMatrix& data, const std::string& col_x, const std::string& col_y,
                        const PipelineConfig& cfg);

}  // namespace snoe

#endif  // SNOE_PIPELINE_HPP_
