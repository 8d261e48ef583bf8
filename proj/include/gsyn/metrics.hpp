#pragma once
// Non-model graph evaluation: structural constraint audit (StCA), exact
// graph edit distance, assignment-based edge matching (G-BS) with pluggable
// edge similarity, stance-gated corpus evaluation and relation statistics.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gsyn/graph.hpp"

namespace gsyn {

// ---------------------------------------------------------------------------
// StCA

// How a node's surface text is matched against the belief/argument text.
//   token_subsequence: the node's tokens appear in order (gaps allowed) in
//                      the lowercased, punctuation-stripped source tokens.
//   substring:         the node's space-joined text is a plain substring of
//                      the lowercased, punctuation-stripped source text.
enum class AnchorMode { token_subsequence, substring };

struct StcaConfig {
    int word_limit = 3;
    int min_triples = 3;
    int max_triples = 8;
    int min_anchored = 2;  // per source text
    AnchorMode anchor_mode = AnchorMode::token_subsequence;
};

struct StcaReport {
    bool node_word_limit = false;
    bool relation_vocabulary = false;
    bool connected_dag = false;
    bool size_window = false;
    bool belief_anchoring = false;
    bool argument_anchoring = false;
    std::vector<std::string> diagnostics;  // one line per violated constraint

    bool is_valid() const {
        return node_word_limit && relation_vocabulary && connected_dag && size_window &&
               belief_anchoring && argument_anchoring;
    }
};

// Lowercases, strips punctuation to spaces and splits; the token stream both
// anchor modes match against.
std::vector<std::string> anchor_tokens(const std::string& text);

bool is_anchored(const Concept& node, const std::string& source_text,
                 AnchorMode mode = AnchorMode::token_subsequence);

// Audits the quoted structural constraints; never throws — malformed graphs
// come back with is_valid()=false and diagnostics.
StcaReport validate_structure(const ExplanationGraph& g, const std::string& belief,
                              const std::string& argument, const RelationSet& relations,
                              const StcaConfig& cfg = {});

// ---------------------------------------------------------------------------
// Graph edit distance

struct GedConfig {
    // Exact search budget: graphs with more nodes than this raise
    // Errc::size_limit_exceeded. 16 covers the 8-triple corpus window.
    size_t max_nodes = 16;
    bool want_trace = false;
};

struct GedResult {
    uint64_t raw_ops = 0;
    double normalized = 0.0;  // raw / (|Vp| + |Ep| + |Vg| + |Eg|)
    std::vector<std::string> op_trace;  // filled when GedConfig::want_trace
};

// Exact minimal edit cost under unit node/edge insert, delete and substitute
// operations, via branch-and-bound over injective node mappings. Symmetric;
// an empty side costs the other side's full rebuild. Graphs must be simple
// (at most one edge per ordered node pair); parallel edges raise
// Errc::parse_error.
GedResult graph_edit_distance(const ExplanationGraph& pred, const ExplanationGraph& gold,
                              const GedConfig& cfg = {});

// ---------------------------------------------------------------------------
// G-BS

struct EdgeSimilarity {
    std::string name;
    std::function<double(const Triple&, const Triple&)> score;  // in [0, 1]
};

// Token-level F1 between the two edges verbalized as "head relation tail"
// (the default scorer).
EdgeSimilarity token_overlap_similarity();
// 1.0 for identical triples, else 0.0; makes G-BS the exact edge-set F1.
EdgeSimilarity exact_match_similarity();

struct GbsResult {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Maximum-weight one-to-one assignment between predicted and gold edges
// (Hungarian algorithm); precision = weight / |pred|, recall = weight /
// |gold|, f1 = harmonic mean. Both graphs must be non-empty.
GbsResult graph_bertscore(const ExplanationGraph& pred, const ExplanationGraph& gold,
                          const EdgeSimilarity& sim = token_overlap_similarity());

// ---------------------------------------------------------------------------
// Corpus evaluation

struct EvalItem {
    uint64_t id = 0;
    std::string pred_text;  // raw predicted graph line (PIPE or PAREN)
    ExplanationGraph gold;
    std::string belief;
    std::string argument;
    bool stance_correct = true;
};

struct EvalInstance {
    uint64_t id = 0;
    bool stance_correct = true;
    StcaReport checks;
    bool stca = false;
    uint64_t ged_raw = 0;
    double ged_norm = 1.0;
    double gbs = 0.0;
};

struct EvalSummary {
    uint64_t instances = 0;
    uint64_t stance_correct = 0;
    uint64_t stca_valid = 0;
    uint64_t unparseable = 0;
    double stca_pct = 0.0;      // 100 * valid / instances
    double gbs_mean = 0.0;      // mean over all instances, failures count 0
    double ged_norm_mean = 0.0; // mean over all instances, failures count 1
};

// Scores every item. Instances whose stance flag is false fail every graph
// metric (StCA false, G-BS 0, normalized GED 1); an unparseable prediction
// scores like an empty graph. Graph format per line is auto-detected.
// Per-instance rows are appended to *per_instance when given.
EvalSummary corpus_eval(const std::vector<EvalItem>& items, const RelationSet& relations,
                        const EdgeSimilarity& sim = token_overlap_similarity(),
                        const StcaConfig& cfg = {},
                        std::vector<EvalInstance>* per_instance = nullptr);

// ---------------------------------------------------------------------------
// Relation statistics

struct RelationDistribution {
    std::array<uint64_t, 16> counts{};
    uint64_t total = 0;

    double percentage(size_t relation_index) const;
    // Two-decimal "relation  count  percent" rows in canonical order; when a
    // reference percentage array is given, appends reference and delta
    // columns.
    std::string table(const std::array<double, 16>* reference = nullptr) const;
};

// Tallies gold-graph relations over an emitted corpus (text or line-JSON,
// auto-detected). Throws Errc::parse_error on malformed records.
RelationDistribution relation_distribution(std::istream& corpus);

// Parses "relation percentage" lines (e.g. a published distribution table)
// in any order into canonical array form.
std::array<double, 16> load_reference_distribution(std::istream& in);

}  // namespace gsyn
