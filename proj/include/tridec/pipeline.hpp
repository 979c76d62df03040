#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tridec/completion.hpp"
#include "tridec/graph.hpp"
#include "tridec/greedy.hpp"
#include "tridec/hole.hpp"
#include "tridec/templ.hpp"

namespace tridec {

struct PipelineConfig {
    // Base constant of the boundedness cascade. The derived constants
    // follow c1 = (50c)^{1/4}, c2 = 10^2 c1 d^{-6}, c3 = 10^{20} c2 d^{-50},
    // c4 = 10^{20} c3 d^{-100}, c5 = 10^{10} c4 d^{-180}; any can be
    // overridden (negative = derive).
    double c = 1e-4;
    double c1 = -1, c2 = -1, c3 = -1, c4 = -1, c5 = -1;

    TemplateMode mode = TemplateMode::paper;
    double epsilon = 0.0; // punctured fraction (when instance is built here)
    int fixed_a = 0;

    int max_retries = 20;
    std::uint64_t budget = 20000;
    std::uint64_t seed = 0;

    // Filled from d(G) at run time.
    void derive_constants(double d);
};

struct StageReport {
    std::string name;
    bool ok = false;
    int retries = 0;
    double seconds = 0.0;
    std::string detail; // free-form stage measurements
};

struct DecompositionResult {
    bool success = false;
    std::string status;       // "ok" or failure description
    std::string failed_stage; // empty on success
    std::uint64_t seed = 0;
    std::string mode;
    int n = 0;
    std::vector<StageReport> stages;
    Matching M;                        // final decomposition (on success)
    TypicalityReport typicality;       // of the input graph
};

// Full pipeline: template, nibble on G minus Gstar, cover, spill
// divisibility, integral relaxation + hole elimination, completion
// elimination, shuffles, assembly M = N u M1 u (M4 minus M2) u (T minus M3),
// and exact verification. Throws std::invalid_argument when g is not
// tridivisible; stage aborts are captured in the result.
DecompositionResult decompose(const Graph& g, const PipelineConfig& cfg);
// Same but with an externally built template (punctured instances).
DecompositionResult decompose(const Graph& g, const Template& tpl,
                              const PipelineConfig& cfg);

// Exact identity check: UT + UN + UMc - G equals s as a 0/1 vector and s is
// tridivisible. Returns false (never throws) on mismatch.
bool check_spill_divisibility(const Matching& t, const Matching& n,
                              const Matching& mc, const Graph& g,
                              const Graph& s);

struct PuncturedInstance {
    Graph g;      // K_{2^a - 1}
    Template tpl; // full zero-sum triple set minus a uniform epsilon-fraction
};

// Dense instance with an epsilon-fraction of template triples removed; the
// canonical integration regime (every configuration space nonempty while
// all stages do nontrivial work). Preconditions: a >= 5, 0 <= epsilon < 0.05.
PuncturedInstance make_punctured_instance(int a, double epsilon, Rng& rng);

// G minus H on the same vertex set (edges of g not in h).
Graph graph_difference(const Graph& g, const Graph& h);

std::string result_to_json(const DecompositionResult& r);

} // namespace tridec
