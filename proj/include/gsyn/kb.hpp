#pragma once
// ConceptNet dump ingestion and the immutable triple index the synthesizer
// samples from: interned concepts, deduplicated triples, incoming/outgoing
// adjacency, a relation histogram, and versioned binary persistence with a
// checksum trailer.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gsyn/graph.hpp"
#include "gsyn/rng.hpp"

namespace gsyn {

// Maps raw dump relation names onto the sixteen-relation vocabulary. File
// format: one "raw_relation<TAB or spaces>target" pair per line, '#' starts
// a comment. Target "DROP" discards the assertion; a '~' prefix on the
// target swaps head and tail during ingestion (used for inverse relations
// such as HasA -> ~part_of).
class MergeMap {
public:
    struct Entry {
        std::string target;  // canonical relation name, empty when drop
        bool drop = false;
        bool invert = false;
    };

    static const MergeMap& defaults();
    static MergeMap parse(std::istream& in);
    static MergeMap load(const std::string& path);

    const Entry* find(std::string_view raw) const;
    uint64_t checksum() const { return checksum_; }
    // Enforces: relatedTo maps to DROP, and the image of the non-DROP
    // entries is exactly the sixteen-relation vocabulary.
    void validate() const;

private:
    std::unordered_map<std::string, Entry> entries_;
    uint64_t checksum_ = 0;
};

struct IngestConfig {
    uint64_t max_malformed_lines = 1000;  // fatal once exceeded
    bool drop_degenerate_concepts = true;  // single-character or purely numeric
};

struct IngestReport {
    uint64_t lines = 0;
    uint64_t kept = 0;
    uint64_t duplicates = 0;
    uint64_t malformed = 0;
    uint64_t non_english = 0;
    uint64_t related_to_dropped = 0;
    uint64_t merge_dropped = 0;  // DROP-mapped relations other than relatedTo
    uint64_t unknown_relation = 0;
    uint64_t self_loops = 0;
    uint64_t degenerate_concepts = 0;
};

class KbIndex {
public:
    using ConceptId = uint32_t;
    using TripleId = uint32_t;

    struct Edge {
        ConceptId head;
        ConceptId tail;
        uint16_t relation;  // index into RelationSet::synthetic16()
    };

    size_t concept_count() const { return concept_texts_.size(); }
    size_t triple_count() const { return edges_.size(); }

    std::optional<ConceptId> find_concept(std::string_view normalized) const;
    const std::string& concept_text(ConceptId id) const { return concept_texts_.at(id); }
    Concept concept_at(ConceptId id) const;
    const Edge& edge(TripleId id) const { return edges_.at(id); }
    Triple materialize(TripleId id) const;

    std::span<const TripleId> incoming_ids(ConceptId id) const;
    std::span<const TripleId> outgoing_ids(ConceptId id) const;
    size_t in_degree(ConceptId id) const { return incoming_ids(id).size(); }
    size_t out_degree(ConceptId id) const { return outgoing_ids(id).size(); }

    const std::array<uint64_t, 16>& relation_histogram() const { return histogram_; }

    // Concept ids with in-degree >= 1, in id order (precomputed; the common
    // sink-sampling constraint).
    const std::vector<ConceptId>& concepts_with_incoming() const { return with_incoming_; }

    // Digest over the structural payload (concepts, edges, histogram, source
    // and merge-map checksums). Excludes the build timestamp, so re-ingesting
    // identical inputs yields an identical digest.
    uint64_t structural_digest() const { return structural_digest_; }
    uint64_t source_checksum() const { return source_checksum_; }
    uint64_t mergemap_checksum() const { return mergemap_checksum_; }
    uint64_t build_unix_time() const { return build_unix_time_; }

private:
    std::vector<std::string> concept_texts_;
    std::unordered_map<std::string, ConceptId> concept_ids_;
    std::vector<Edge> edges_;
    // CSR adjacency over edge ids, in edge-insertion order.
    std::vector<uint64_t> in_offsets_, out_offsets_;
    std::vector<TripleId> in_ids_, out_ids_;
    std::array<uint64_t, 16> histogram_{};
    std::vector<ConceptId> with_incoming_;
    uint64_t structural_digest_ = 0;
    uint64_t source_checksum_ = 0;
    uint64_t mergemap_checksum_ = 0;
    uint64_t build_unix_time_ = 0;

    friend class IndexBuilder;
};

// Streaming ingestion. Lines: <assertion URI> TAB <relation URI> TAB
// <start URI> TAB <end URI> TAB <JSON metadata>. Only /c/en/ concepts are
// kept; the merge map decides each relation's fate.
KbIndex ingest(std::istream& dump, const MergeMap& map, const IngestConfig& cfg = {},
               IngestReport* report = nullptr);
// As above, from a file path; transparently inflates gzip input.
KbIndex ingest_file(const std::string& path, const MergeMap& map, const IngestConfig& cfg = {},
                    IngestReport* report = nullptr);

void save_index(const KbIndex& index, const std::string& path);
KbIndex load_index(const std::string& path);

// Public triple views; throw Errc::unknown_concept for un-interned concepts.
std::vector<Triple> incoming(const KbIndex& index, const Concept& c);
std::vector<Triple> outgoing(const KbIndex& index, const Concept& c);

struct SampleConstraints {
    uint64_t min_incoming = 1;
};

// Uniform draw over concepts satisfying the constraints.
Concept sample_concept(const KbIndex& index, Rng& rng, const SampleConstraints& constraints = {});

// FNV-1a 64-bit, used for file and structural checksums.
uint64_t fnv1a64(const void* data, size_t size, uint64_t seed = 0xCBF29CE484222325ull);

}  // namespace gsyn
