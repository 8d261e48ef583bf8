#pragma once
// Explanation graphs: concepts, relations, triples, the two text
// serializations (PIPE and PAREN), structural predicates, and the canonical
// depth-first linearization.
//
// PIPE:   head : relation : tail, triples joined by " | ". Concepts keep
//         their underscores; relation names are written with underscores
//         removed ("used_for" -> "usedfor").
// PAREN:  "(head; relation; tail)" groups concatenated back to back, with
//         underscores rendered as spaces in both concepts and relations.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gsyn/error.hpp"

namespace gsyn {

// Lowercases ASCII, maps whitespace/underscore runs to single underscores,
// strips leading/trailing separators. Returns empty string for all-separator
// input.
std::string normalize_concept_text(std::string_view surface);

// A graph node. Invariant: non-empty, lowercase, no whitespace, words joined
// by single underscores with no leading/trailing underscore.
class Concept {
public:
    Concept() = default;
    // Normalizes arbitrary surface text; throws Errc::malformed_triple if
    // nothing remains.
    static Concept from_surface(std::string_view text);
    // Accepts already-normalized text; throws if it violates the invariant.
    static Concept from_normalized(std::string text);

    const std::string& text() const { return text_; }
    int word_count() const { return word_count_; }
    std::string spaced() const;  // underscores rendered as spaces

    bool operator==(const Concept& o) const { return text_ == o.text_; }
    bool operator!=(const Concept& o) const { return text_ != o.text_; }
    bool operator<(const Concept& o) const { return text_ < o.text_; }

private:
    std::string text_;
    int word_count_ = 0;
};

// A relation label. Canonical form is lowercase words joined by underscores
// ("used_for"); helpers produce the two serialization surfaces.
class Relation {
public:
    Relation() = default;
    explicit Relation(std::string name);

    const std::string& name() const { return name_; }
    std::string squashed() const;  // underscores removed  -> "usedfor"
    std::string spaced() const;    // underscores to space -> "used for"

    bool operator==(const Relation& o) const { return name_ == o.name_; }
    bool operator!=(const Relation& o) const { return name_ != o.name_; }
    bool operator<(const Relation& o) const { return name_ < o.name_; }

private:
    std::string name_;
};

// An ordered, closed vocabulary of relations.
class RelationSet {
public:
    // The sixteen-relation vocabulary used by the synthesizer.
    static const RelationSet& synthetic16();
    static RelationSet custom(std::vector<std::string> names);
    static RelationSet load(const std::string& path);  // one name per line

    const std::vector<Relation>& members() const { return members_; }
    size_t size() const { return members_.size(); }
    const Relation& at(size_t i) const { return members_.at(i); }

    // Matches a surface form against the set: exact name, underscore-free
    // ("usedfor") or spaced ("used for") spellings all resolve.
    std::optional<size_t> index_of_surface(std::string_view surface) const;
    std::optional<Relation> find_surface(std::string_view surface) const;
    bool contains_surface(std::string_view surface) const;

private:
    std::vector<Relation> members_;
    std::unordered_map<std::string, size_t> by_key_;  // normalized + squashed keys
    void index_member(size_t i);
};

struct Triple {
    Concept head;
    Relation relation;
    Concept tail;

    bool operator==(const Triple& o) const {
        return head == o.head && relation == o.relation && tail == o.tail;
    }
    bool operator!=(const Triple& o) const { return !(*this == o); }
};

struct TripleHash {
    size_t operator()(const Triple& t) const;
};

// Directed labelled graph over an ordered triple list. Stored triple order
// is significant (serialization and query construction follow it). Duplicate
// triples and self-loops are rejected; multiple sinks, cycles and
// disconnected node sets are representable so malformed predictions can
// still be scored.
class ExplanationGraph {
public:
    ExplanationGraph() = default;
    static ExplanationGraph from_triples(std::vector<Triple> triples);

    const std::vector<Triple>& triples() const { return triples_; }
    size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }

    // Nodes in order of first appearance over the stored triple list
    // (head before tail within a triple).
    const std::vector<Concept>& nodes() const { return nodes_; }
    std::optional<size_t> node_index(const Concept& c) const;

    // Adjacency as indices into triples(), in stored-triple order.
    const std::vector<uint32_t>& outgoing_of(size_t node) const { return out_.at(node); }
    const std::vector<uint32_t>& incoming_of(size_t node) const { return in_.at(node); }
    size_t out_degree(size_t node) const { return out_.at(node).size(); }
    size_t in_degree(size_t node) const { return in_.at(node).size(); }

    bool has_pair(const Concept& head, const Concept& tail) const;

private:
    std::vector<Triple> triples_;
    std::vector<Concept> nodes_;
    std::unordered_map<std::string, size_t> node_ids_;
    std::vector<std::vector<uint32_t>> out_, in_;
};

enum class GraphFormat { pipe, paren };

// How parse treats relation names when a RelationSet is given.
enum class RelationPolicy {
    strict,       // unknown relation -> Errc::unknown_relation
    canonicalize  // known surfaces mapped to canonical name, unknown kept
};

// Parses a triple sequence. Duplicates are allowed here (knowledge sources
// are lists, not graphs); self-loops are rejected.
std::vector<Triple> parse_triples(std::string_view text, GraphFormat format,
                                  const RelationSet* relations = nullptr,
                                  RelationPolicy policy = RelationPolicy::strict);

// Parses a graph: as parse_triples plus the no-duplicate-triple rule.
ExplanationGraph parse_graph(std::string_view text, GraphFormat format,
                             const RelationSet* relations = nullptr,
                             RelationPolicy policy = RelationPolicy::strict);

std::string serialize_triple(const Triple& t, GraphFormat format);
std::string serialize_triples(const std::vector<Triple>& ts, GraphFormat format);
std::string serialize_graph(const ExplanationGraph& g, GraphFormat format);

// True when the directed graph has no cycle. Empty graph counts as acyclic.
bool is_dag(const ExplanationGraph& g);
// True when the underlying undirected graph has a single weakly connected
// component. Empty graph counts as connected.
bool is_connected(const ExplanationGraph& g);
// Nodes with out-degree zero, in first-appearance order.
std::vector<Concept> sinks(const ExplanationGraph& g);
// Nodes with in-degree zero, in first-appearance order.
std::vector<Concept> sources(const ExplanationGraph& g);

// Canonical depth-first linearization: roots (in-degree zero) are visited in
// lexicographic order; outgoing triples of each node in lexicographic
// (relation, tail) order; every triple emitted exactly once, when first
// traversed. Output is invariant under permutations of the stored triple
// list. Requires a weakly connected DAG.
std::vector<Triple> linearize_dfs(const ExplanationGraph& g);

}  // namespace gsyn
