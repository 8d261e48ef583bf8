#include "gsyn/graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

namespace gsyn {

namespace {

bool is_sep(char c) {
    return c == '_' || std::isspace(static_cast<unsigned char>(c));
}

std::string_view trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::malformed_triple: return "MalformedTriple";
        case Errc::unknown_relation: return "UnknownRelation";
        case Errc::empty_graph: return "EmptyGraph";
        case Errc::cyclic_graph: return "CyclicGraph";
        case Errc::disconnected_graph: return "DisconnectedGraph";
        case Errc::malformed_dump_line: return "MalformedDumpLine";
        case Errc::empty_index: return "EmptyIndex";
        case Errc::version_mismatch: return "VersionMismatch";
        case Errc::checksum_mismatch: return "ChecksumMismatch";
        case Errc::io_error: return "Io";
        case Errc::unknown_concept: return "UnknownConcept";
        case Errc::no_qualifying_concept: return "NoQualifyingConcept";
        case Errc::synthesis_exhausted: return "SynthesisExhausted";
        case Errc::missing_template: return "MissingTemplate";
        case Errc::size_limit_exceeded: return "SizeLimitExceeded";
        case Errc::alignment_error: return "AlignmentError";
        case Errc::parse_error: return "ParseError";
    }
    return "Unknown";
}

std::string normalize_concept_text(std::string_view surface) {
    std::string out;
    out.reserve(surface.size());
    bool pending = false;
    for (char c : surface) {
        if (is_sep(c)) {
            if (!out.empty()) pending = true;
            continue;
        }
        if (pending) {
            out += '_';
            pending = false;
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

Concept Concept::from_surface(std::string_view text) {
    std::string norm = normalize_concept_text(text);
    if (norm.empty()) raise(Errc::malformed_triple, "empty concept text");
    Concept c;
    c.text_ = std::move(norm);
    c.word_count_ = 1 + static_cast<int>(std::count(c.text_.begin(), c.text_.end(), '_'));
    return c;
}

Concept Concept::from_normalized(std::string text) {
    if (text.empty()) raise(Errc::malformed_triple, "empty concept text");
    if (text.front() == '_' || text.back() == '_')
        raise(Errc::malformed_triple, "concept has leading/trailing underscore: " + text);
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)))
            raise(Errc::malformed_triple, "concept contains whitespace: " + text);
        if (std::isupper(static_cast<unsigned char>(c)))
            raise(Errc::malformed_triple, "concept not lowercase: " + text);
        if (c == '_' && i + 1 < text.size() && text[i + 1] == '_')
            raise(Errc::malformed_triple, "concept has doubled underscore: " + text);
    }
    Concept c;
    c.text_ = std::move(text);
    c.word_count_ = 1 + static_cast<int>(std::count(c.text_.begin(), c.text_.end(), '_'));
    return c;
}

std::string Concept::spaced() const {
    std::string out = text_;
    std::replace(out.begin(), out.end(), '_', ' ');
    return out;
}

Relation::Relation(std::string name) {
    name_ = normalize_concept_text(name);
    if (name_.empty()) raise(Errc::unknown_relation, "empty relation name");
}

std::string Relation::squashed() const {
    std::string out;
    out.reserve(name_.size());
    for (char c : name_)
        if (c != '_') out += c;
    return out;
}

std::string Relation::spaced() const {
    std::string out = name_;
    std::replace(out.begin(), out.end(), '_', ' ');
    return out;
}

void RelationSet::index_member(size_t i) {
    const Relation& r = members_[i];
    by_key_.emplace(r.name(), i);
    by_key_.emplace(r.squashed(), i);
}

const RelationSet& RelationSet::synthetic16() {
    static const RelationSet set = custom({
        "is_a", "at_location", "part_of", "capable_of", "has_context", "desires",
        "antonym", "used_for", "causes", "has_subevent", "has_property",
        "receives_action", "made_of", "not_desires", "created_by", "not_capable_of",
    });
    return set;
}

RelationSet RelationSet::custom(std::vector<std::string> names) {
    RelationSet set;
    for (auto& n : names) {
        set.members_.emplace_back(std::move(n));
        set.index_member(set.members_.size() - 1);
    }
    if (set.members_.empty()) raise(Errc::unknown_relation, "empty relation set");
    return set;
}

RelationSet RelationSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open relation set: " + path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        names.emplace_back(t);
    }
    return custom(std::move(names));
}

std::optional<size_t> RelationSet::index_of_surface(std::string_view surface) const {
    std::string key = normalize_concept_text(surface);
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return it->second;
    return std::nullopt;
}

std::optional<Relation> RelationSet::find_surface(std::string_view surface) const {
    auto i = index_of_surface(surface);
    if (!i) return std::nullopt;
    return members_[*i];
}

bool RelationSet::contains_surface(std::string_view surface) const {
    return index_of_surface(surface).has_value();
}

size_t TripleHash::operator()(const Triple& t) const {
    std::hash<std::string> h;
    size_t a = h(t.head.text());
    size_t b = h(t.relation.name());
    size_t c = h(t.tail.text());
    size_t out = a;
    out = out * 0x9E3779B97F4A7C15ull + b;
    out = out * 0x9E3779B97F4A7C15ull + c;
    return out;
}

ExplanationGraph ExplanationGraph::from_triples(std::vector<Triple> triples) {
    ExplanationGraph g;
    std::unordered_set<Triple, TripleHash> seen;
    for (const Triple& t : triples) {
        if (t.head == t.tail)
            raise(Errc::malformed_triple, "self-loop on '" + t.head.text() + "'");
        if (!seen.insert(t).second)
            raise(Errc::malformed_triple, "duplicate triple '" + serialize_triple(t, GraphFormat::pipe) + "'");
    }
    g.triples_ = std::move(triples);
    auto intern = [&g](const Concept& c) -> size_t {
        auto it = g.node_ids_.find(c.text());
        if (it != g.node_ids_.end()) return it->second;
        size_t id = g.nodes_.size();
        g.node_ids_.emplace(c.text(), id);
        g.nodes_.push_back(c);
        g.out_.emplace_back();
        g.in_.emplace_back();
        return id;
    };
    for (uint32_t i = 0; i < g.triples_.size(); ++i) {
        size_t h = intern(g.triples_[i].head);
        size_t t = intern(g.triples_[i].tail);
        g.out_[h].push_back(i);
        g.in_[t].push_back(i);
    }
    return g;
}

std::optional<size_t> ExplanationGraph::node_index(const Concept& c) const {
    auto it = node_ids_.find(c.text());
    if (it == node_ids_.end()) return std::nullopt;
    return it->second;
}

bool ExplanationGraph::has_pair(const Concept& head, const Concept& tail) const {
    auto h = node_index(head);
    if (!h) return false;
    for (uint32_t ti : out_[*h])
        if (triples_[ti].tail == tail) return true;
    return false;
}

namespace {

Concept concept_from_field(std::string_view field) {
    return Concept::from_surface(field);
}

Relation relation_from_field(std::string_view field, const RelationSet* relations,
                             RelationPolicy policy) {
    std::string norm = normalize_concept_text(field);
    if (norm.empty()) raise(Errc::malformed_triple, "empty relation field");
    if (relations) {
        if (auto r = relations->find_surface(norm)) return *r;
        if (policy == RelationPolicy::strict)
            raise(Errc::unknown_relation, "'" + norm + "' not in relation set");
    }
    return Relation(norm);
}

Triple triple_from_fields(std::string_view h, std::string_view r, std::string_view t,
                          const RelationSet* relations, RelationPolicy policy) {
    Triple out{concept_from_field(h), relation_from_field(r, relations, policy),
               concept_from_field(t)};
    if (out.head == out.tail)
        raise(Errc::malformed_triple, "self-loop on '" + out.head.text() + "'");
    return out;
}

std::vector<Triple> parse_pipe(std::string_view text, const RelationSet* relations,
                               RelationPolicy policy) {
    std::vector<Triple> out;
    for (std::string_view segment : split(text, '|')) {
        if (trim(segment).empty())
            raise(Errc::malformed_triple, "empty triple segment");
        auto fields = split(segment, ':');
        if (fields.size() != 3)
            raise(Errc::malformed_triple, "expected 3 fields, got " +
                                              std::to_string(fields.size()) + " in '" +
                                              std::string(trim(segment)) + "'");
        out.push_back(
            triple_from_fields(trim(fields[0]), trim(fields[1]), trim(fields[2]), relations, policy));
    }
    return out;
}

std::vector<Triple> parse_paren(std::string_view text, const RelationSet* relations,
                                RelationPolicy policy) {
    std::vector<Triple> out;
    size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        if (text[i] != '(')
            raise(Errc::malformed_triple, "expected '(' at offset " + std::to_string(i));
        size_t close = text.find(')', i + 1);
        if (close == std::string_view::npos)
            raise(Errc::malformed_triple, "unterminated group at offset " + std::to_string(i));
        std::string_view body = text.substr(i + 1, close - i - 1);
        auto fields = split(body, ';');
        if (fields.size() != 3)
            raise(Errc::malformed_triple, "expected 3 fields, got " +
                                              std::to_string(fields.size()) + " in '(" +
                                              std::string(body) + ")'");
        out.push_back(
            triple_from_fields(trim(fields[0]), trim(fields[1]), trim(fields[2]), relations, policy));
        i = close + 1;
    }
    return out;
}

}  // namespace

std::vector<Triple> parse_triples(std::string_view text, GraphFormat format,
                                  const RelationSet* relations, RelationPolicy policy) {
    if (trim(text).empty()) raise(Errc::empty_graph, "no triples in input");
    auto out = format == GraphFormat::pipe ? parse_pipe(trim(text), relations, policy)
                                           : parse_paren(trim(text), relations, policy);
    if (out.empty()) raise(Errc::empty_graph, "no triples in input");
    return out;
}

ExplanationGraph parse_graph(std::string_view text, GraphFormat format,
                             const RelationSet* relations, RelationPolicy policy) {
    return ExplanationGraph::from_triples(parse_triples(text, format, relations, policy));
}

std::string serialize_triple(const Triple& t, GraphFormat format) {
    if (format == GraphFormat::pipe)
        return t.head.text() + " : " + t.relation.squashed() + " : " + t.tail.text();
    return "(" + t.head.spaced() + "; " + t.relation.spaced() + "; " + t.tail.spaced() + ")";
}

std::string serialize_triples(const std::vector<Triple>& ts, GraphFormat format) {
    std::string out;
    for (size_t i = 0; i < ts.size(); ++i) {
        if (i && format == GraphFormat::pipe) out += " | ";
        out += serialize_triple(ts[i], format);
    }
    return out;
}

std::string serialize_graph(const ExplanationGraph& g, GraphFormat format) {
    return serialize_triples(g.triples(), format);
}

bool is_dag(const ExplanationGraph& g) {
    size_t n = g.nodes().size();
    std::vector<size_t> indeg(n);
    for (size_t i = 0; i < n; ++i) indeg[i] = g.in_degree(i);
    std::vector<size_t> queue;
    for (size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) queue.push_back(i);
    size_t processed = 0;
    while (!queue.empty()) {
        size_t u = queue.back();
        queue.pop_back();
        ++processed;
        for (uint32_t ti : g.outgoing_of(u)) {
            size_t v = *g.node_index(g.triples()[ti].tail);
            if (--indeg[v] == 0) queue.push_back(v);
        }
    }
    return processed == n;
}

bool is_connected(const ExplanationGraph& g) {
    size_t n = g.nodes().size();
    if (n == 0) return true;
    std::vector<char> seen(n, 0);
    std::vector<size_t> stack{0};
    seen[0] = 1;
    size_t count = 1;
    while (!stack.empty()) {
        size_t u = stack.back();
        stack.pop_back();
        auto visit = [&](size_t v) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        };
        for (uint32_t ti : g.outgoing_of(u)) visit(*g.node_index(g.triples()[ti].tail));
        for (uint32_t ti : g.incoming_of(u)) visit(*g.node_index(g.triples()[ti].head));
    }
    return count == n;
}

std::vector<Concept> sinks(const ExplanationGraph& g) {
    std::vector<Concept> out;
    for (size_t i = 0; i < g.nodes().size(); ++i)
        if (g.out_degree(i) == 0) out.push_back(g.nodes()[i]);
    return out;
}

std::vector<Concept> sources(const ExplanationGraph& g) {
    std::vector<Concept> out;
    for (size_t i = 0; i < g.nodes().size(); ++i)
        if (g.in_degree(i) == 0) out.push_back(g.nodes()[i]);
    return out;
}

std::vector<Triple> linearize_dfs(const ExplanationGraph& g) {
    if (!is_connected(g)) raise(Errc::disconnected_graph, "linearize requires a connected graph");
    if (!is_dag(g)) raise(Errc::cyclic_graph, "linearize requires an acyclic graph");

    size_t n = g.nodes().size();
    // Per-node outgoing triple indices in lexicographic (relation, tail) order.
    std::vector<std::vector<uint32_t>> ordered_out(n);
    for (size_t u = 0; u < n; ++u) {
        ordered_out[u] = g.outgoing_of(u);
        std::sort(ordered_out[u].begin(), ordered_out[u].end(), [&g](uint32_t a, uint32_t b) {
            const Triple& ta = g.triples()[a];
            const Triple& tb = g.triples()[b];
            if (ta.relation != tb.relation) return ta.relation < tb.relation;
            return ta.tail < tb.tail;
        });
    }

    std::vector<size_t> roots;
    for (size_t i = 0; i < n; ++i)
        if (g.in_degree(i) == 0) roots.push_back(i);
    std::sort(roots.begin(), roots.end(),
              [&g](size_t a, size_t b) { return g.nodes()[a] < g.nodes()[b]; });

    std::vector<Triple> out;
    out.reserve(g.size());
    std::vector<char> visited(n, 0);
    for (size_t root : roots) {
        if (visited[root]) continue;
        // (node, next outgoing slot)
        std::vector<std::pair<size_t, size_t>> stack{{root, 0}};
        visited[root] = 1;
        while (!stack.empty()) {
            auto& [u, slot] = stack.back();
            if (slot == ordered_out[u].size()) {
                stack.pop_back();
                continue;
            }
            uint32_t ti = ordered_out[u][slot++];
            out.push_back(g.triples()[ti]);
            size_t v = *g.node_index(g.triples()[ti].tail);
            if (!visited[v]) {
                visited[v] = 1;
                stack.emplace_back(v, 0);
            }
        }
    }
    return out;
}

}  // namespace gsyn
