#pragma once
// Corpus synthesis: back-to-front graph growth from a sampled sink, knowledge
// source assembly (gold plus neighborhood distractors), natural-language
// query construction at three difficulty levels, and the two corpus emitters.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gsyn/graph.hpp"
#include "gsyn/kb.hpp"
#include "gsyn/rng.hpp"

namespace gsyn {

struct SynthParams {
    int min_triples = 3;
    int max_triples = 8;
    // Per-node branching degree is drawn uniformly from this list.
    std::vector<int> branch_choices = {0, 1, 2};
    int max_retries = 32;

    void validate() const;
};

// Grows a graph backwards from a sampled sink: pop a frontier node, draw k
// from branch_choices, accept up to k of its incoming KB triples (rejecting
// sink-headed triples, repeated (head, tail) pairs and cycle-creating
// candidates), push the new heads. Retries with a fresh sink until the size
// window is met; throws Errc::synthesis_exhausted after max_retries.
//
// The returned graph's stored triple order is a depth-first traversal from
// its source concepts (sources and sibling edges ordered by first appearance
// during growth); serialization and query construction follow that order.
ExplanationGraph synthesize_graph(const KbIndex& index, const SynthParams& params, Rng& rng);

// Gold triples plus neighborhood distractors, shuffled. The list size m is
// drawn uniformly from [ceil(lo*|gold|), floor(hi*|gold|)]. Distractors are
// sampled from triples incident to gold nodes (falling back to uniform KB
// draws when the neighborhood is too small) and never carry the answer
// concept as tail, so the gold graph stays uniquely derivable.
std::vector<Triple> build_knowledge_source(const ExplanationGraph& gold, const KbIndex& index,
                                           Rng& rng, double ratio_lo = 1.5,
                                           double ratio_hi = 2.0);

enum class Difficulty { easy, normal, hard };
const char* difficulty_name(Difficulty d);

// Relation templates with exactly one X (head) and one Y (tail) slot each,
// plus the scaffold tokens used by query construction.
class TemplateBank {
public:
    static const TemplateBank& defaults();
    static TemplateBank parse(std::istream& in);  // relation TAB template
    static TemplateBank load(const std::string& path);

    const std::vector<std::string>& templates_for(const Relation& r) const;
    size_t relation_count() const { return by_relation_.size(); }

    std::string answer_token = "[ANSWER]";
    std::string hidden_token = "[I_E]";
    std::string sep_token = "[SEP]";

private:
    std::unordered_map<std::string, std::vector<std::string>> by_relation_;
    void add(const std::string& relation, std::string tmpl);
};

struct Query {
    std::string text;
    Concept answer;  // the gold graph's unique sink
};

// Builds the query for a valid single-sink gold graph.
//   easy:   every triple verbalized in stored order; sink -> [ANSWER],
//           intermediates -> [I_E], sources keep their surface text.
//   normal: as easy, but hidden mentions are elided and the clause sequence
//           is wrapped into a single "What ... ?" interrogative.
//   hard:   only the first triple's head and relation are kept ("What <head>
//           <relation phrase> ?"); remaining sources are appended as
//           "with <source>" constraints.
// Clauses are joined with alternating "and"/"then" connectives.
Query make_query(const ExplanationGraph& gold, Difficulty difficulty, const TemplateBank& bank,
                 Rng& rng);

struct QueryInstance {
    uint64_t id = 0;
    Difficulty difficulty = Difficulty::easy;
    std::string query_text;
    std::vector<Triple> knowledge_source;  // shuffled, contains all gold triples
    ExplanationGraph gold_graph;
    Concept answer;
    uint64_t seed = 0;  // per-instance seed all channels derive from
};

// Assembles one record: graph, knowledge source and query all derive
// independent RNG streams from instance_seed, so a record is a pure function
// of (index, params, instance_seed, difficulty).
QueryInstance make_instance(const KbIndex& index, const SynthParams& params,
                            const TemplateBank& bank, uint64_t instance_seed,
                            Difficulty difficulty, uint64_t id = 0, double ks_ratio_lo = 1.5,
                            double ks_ratio_hi = 2.0);

// Model input: "<sources> [SEP] <query> [SEP] <knowledge source>" with the
// source-concept list doubled for normal-difficulty records; target is the
// PIPE-serialized gold graph.
std::string instance_input(const QueryInstance& instance);
std::string instance_target(const QueryInstance& instance);

struct MixProportions {
    double easy = 1.0;
    double normal = 1.0;
    double hard = 1.0;
};

// Deterministic per-id difficulty assignment: largest-remainder counts,
// interleaved by weighted round-robin. Equal proportions cycle
// easy, normal, hard, ...
std::vector<Difficulty> difficulty_schedule(uint64_t total, const MixProportions& mix);

enum class CorpusFormat { text, jsonl };

struct EmitConfig {
    uint64_t total = 0;
    uint64_t seed = 0;
    int workers = 1;
    CorpusFormat format = CorpusFormat::text;
    MixProportions mix;
    SynthParams params;
    double ks_ratio_lo = 1.5;
    double ks_ratio_hi = 2.0;
    // A record whose synthesis budget is exhausted is re-drawn from a bumped
    // seed; give up after this many attempts.
    int max_record_attempts = 64;
};

struct EmitStats {
    std::array<uint64_t, 3> difficulty_counts{};  // easy, normal, hard
    uint64_t records = 0;
    uint64_t gold_triples = 0;
    uint64_t redraws = 0;  // records that needed at least one re-draw
    std::array<uint64_t, 16> relation_counts{};   // over gold triples
    double seconds = 0.0;
};

// Emits `total` records in id order. Records are generated from per-id
// derived seeds, so output bytes are identical for any worker count.
EmitStats emit_corpus(const KbIndex& index, const TemplateBank& bank, const EmitConfig& cfg,
                      std::ostream& out);

enum class BaselineTask { link_prediction, tail_prediction };

struct BaselineConfig {
    uint64_t total = 0;
    uint64_t seed = 0;
    BaselineTask task = BaselineTask::link_prediction;
    CorpusFormat format = CorpusFormat::text;
};

// Masked-field record for one KB triple. For link prediction the masked
// field cycles uniformly over head/relation/tail; tail prediction always
// masks the tail. Exposed for tests.
enum class MaskField { head, relation, tail };
std::pair<std::string, std::string> baseline_record(const Triple& t, MaskField field);

EmitStats emit_baseline_corpus(const KbIndex& index, const BaselineConfig& cfg,
                               std::ostream& out);

}  // namespace gsyn
