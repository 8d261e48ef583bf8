#include "gsyn/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace gsyn {

// ---------------------------------------------------------------------------
// StCA

std::vector<std::string> anchor_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            current += static_cast<char>(std::tolower(u));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

bool is_anchored(const Concept& node, const std::string& source_text, AnchorMode mode) {
    std::vector<std::string> source = anchor_tokens(source_text);
    if (mode == AnchorMode::substring) {
        std::string joined;
        for (size_t i = 0; i < source.size(); ++i) {
            if (i) joined += ' ';
            joined += source[i];
        }
        return joined.find(node.spaced()) != std::string::npos;
    }
    std::vector<std::string> needle = anchor_tokens(node.spaced());
    size_t i = 0;
    for (const std::string& tok : source) {
        if (i < needle.size() && tok == needle[i]) ++i;
    }
    return i == needle.size() && !needle.empty();
}

StcaReport validate_structure(const ExplanationGraph& g, const std::string& belief,
                              const std::string& argument, const RelationSet& relations,
                              const StcaConfig& cfg) {
    StcaReport r;

    r.node_word_limit = true;
    for (const Concept& c : g.nodes()) {
        if (c.word_count() > cfg.word_limit) {
            r.node_word_limit = false;
            r.diagnostics.push_back("node '" + c.text() + "' exceeds " +
                                    std::to_string(cfg.word_limit) + " words");
        }
    }

    r.relation_vocabulary = true;
    for (const Triple& t : g.triples()) {
        if (!relations.contains_surface(t.relation.name())) {
            r.relation_vocabulary = false;
            r.diagnostics.push_back("relation '" + t.relation.name() +
                                    "' outside the relation vocabulary");
        }
    }

    bool connected = is_connected(g);
    bool acyclic = is_dag(g);
    r.connected_dag = connected && acyclic;
    if (!connected) r.diagnostics.push_back("graph is not weakly connected");
    if (!acyclic) r.diagnostics.push_back("graph contains a cycle");

    size_t n = g.size();
    r.size_window = n >= static_cast<size_t>(cfg.min_triples) &&
                    n <= static_cast<size_t>(cfg.max_triples);
    if (!r.size_window)
        r.diagnostics.push_back("triple count " + std::to_string(n) + " outside [" +
                                std::to_string(cfg.min_triples) + ", " +
                                std::to_string(cfg.max_triples) + "]");

    auto anchored_count = [&](const std::string& text) {
        int count = 0;
        for (const Concept& c : g.nodes())
            if (is_anchored(c, text, cfg.anchor_mode)) ++count;
        return count;
    };
    int in_belief = anchored_count(belief);
    int in_argument = anchored_count(argument);
    r.belief_anchoring = in_belief >= cfg.min_anchored;
    r.argument_anchoring = in_argument >= cfg.min_anchored;
    if (!r.belief_anchoring)
        r.diagnostics.push_back("only " + std::to_string(in_belief) +
                                " node(s) anchored in the belief");
    if (!r.argument_anchoring)
        r.diagnostics.push_back("only " + std::to_string(in_argument) +
                                " node(s) anchored in the argument");
    return r;
}

// ---------------------------------------------------------------------------
// Graph edit distance

namespace {

// Flat view of a graph for the edit-distance search.
struct FlatGraph {
    std::vector<std::string> labels;                       // node id -> label
    std::vector<std::array<uint32_t, 2>> edges;            // (head, tail)
    std::vector<std::string> rels;                         // edge -> relation
    std::unordered_map<uint64_t, uint32_t> edge_of;        // (h << 32 | t) -> edge
    std::vector<std::vector<uint32_t>> incident;           // node -> edge ids

    static uint64_t key(uint32_t h, uint32_t t) { return (static_cast<uint64_t>(h) << 32) | t; }

    const std::string* relation_between(uint32_t h, uint32_t t) const {
        auto it = edge_of.find(key(h, t));
        return it == edge_of.end() ? nullptr : &rels[it->second];
    }

    static FlatGraph from(const ExplanationGraph& g) {
        FlatGraph f;
        for (const Concept& c : g.nodes()) f.labels.push_back(c.text());
        f.incident.resize(f.labels.size());
        for (const Triple& t : g.triples()) {
            uint32_t h = static_cast<uint32_t>(*g.node_index(t.head));
            uint32_t tl = static_cast<uint32_t>(*g.node_index(t.tail));
            if (f.edge_of.count(key(h, tl)))
                raise(Errc::parse_error, "parallel edges between '" + t.head.text() + "' and '" +
                                             t.tail.text() + "' (graph is not simple)");
            uint32_t e = static_cast<uint32_t>(f.edges.size());
            f.edges.push_back({h, tl});
            f.rels.push_back(t.relation.name());
            f.edge_of.emplace(key(h, tl), e);
            f.incident[h].push_back(e);
            f.incident[tl].push_back(e);
        }
        return f;
    }
};

constexpr uint32_t kEps = std::numeric_limits<uint32_t>::max();

// Branch-and-bound search over injective mappings pred nodes -> gold nodes
// or eps (deletion); unmapped gold nodes are insertions. Edge costs follow
// the mapping. All operations cost 1.
class GedSearch {
public:
    GedSearch(const FlatGraph& p, const FlatGraph& g) : p_(p), g_(g) {
        np_ = p_.labels.size();
        ng_ = g_.labels.size();
        assign_.assign(np_, kEps);
        used_.assign(ng_, 0);
        preimage_.assign(ng_, kEps);
        // Any full mapping is a valid bound; start from delete-all/insert-all.
        best_ = static_cast<uint64_t>(np_ + p_.edges.size() + ng_ + g_.edges.size());
        best_assign_ = assign_;
    }

    uint64_t run() {
        dfs(0, 0);
        return best_;
    }

    const std::vector<uint32_t>& best_assign() const { return best_assign_; }

private:
    // Cost of deciding node i -> j (or eps) given nodes 0..i-1 are assigned.
    uint64_t step_cost(size_t i, uint32_t j) const {
        uint64_t cost;
        if (j == kEps)
            cost = 1;  // node deletion
        else
            cost = p_.labels[i] == g_.labels[j] ? 0 : 1;  // match or substitution

        // Pred edges between i and already-assigned nodes.
        for (uint32_t e : p_.incident[i]) {
            uint32_t h = p_.edges[e][0], t = p_.edges[e][1];
            uint32_t other = (h == i) ? t : h;
            if (other >= i) continue;  // counterpart undecided
            uint32_t mo = assign_[other];
            if (j == kEps || mo == kEps) {
                ++cost;  // edge deletion
                continue;
            }
            uint32_t gh = (h == i) ? j : mo;
            uint32_t gt = (t == i) ? j : mo;
            const std::string* rel = g_.relation_between(gh, gt);
            if (!rel)
                ++cost;  // edge deletion
            else if (*rel != p_.rels[e])
                ++cost;  // edge substitution
        }

        // Gold edges between j and already-used gold nodes that no pred edge
        // covers become insertions, decidable now because preimages are
        // unique under injectivity.
        if (j != kEps) {
            for (uint32_t e : g_.incident[j]) {
                uint32_t h = g_.edges[e][0], t = g_.edges[e][1];
                uint32_t other = (h == j) ? t : h;
                if (!used_[other]) continue;
                uint32_t po = preimage_[other];
                uint32_t ph = (h == j) ? static_cast<uint32_t>(i) : po;
                uint32_t pt = (t == j) ? static_cast<uint32_t>(i) : po;
                if (!p_.relation_between(ph, pt)) ++cost;  // edge insertion
            }
        }
        return cost;
    }

    // Admissible bound for the undecided remainder: label-multiset matching
    // on nodes plus the surplus of undecided edges on the larger side.
    uint64_t lower_bound(size_t i) const {
        size_t p_rem = np_ - i;
        std::unordered_map<std::string, size_t> remaining;
        for (size_t k = i; k < np_; ++k) ++remaining[p_.labels[k]];
        size_t g_rem = 0, same = 0;
        for (size_t k = 0; k < ng_; ++k) {
            if (used_[k]) continue;
            ++g_rem;
            auto it = remaining.find(g_.labels[k]);
            if (it != remaining.end() && it->second > 0) {
                --it->second;
                ++same;  // a same-label pair can map for free
            }
        }
        uint64_t node_lb = static_cast<uint64_t>(std::max(p_rem, g_rem) - same);

        size_t ep_rem = 0;
        for (uint32_t e = 0; e < p_.edges.size(); ++e)
            if (p_.edges[e][0] >= i || p_.edges[e][1] >= i) ++ep_rem;
        size_t eg_rem = 0;
        for (uint32_t e = 0; e < g_.edges.size(); ++e)
            if (!used_[g_.edges[e][0]] || !used_[g_.edges[e][1]]) ++eg_rem;
        uint64_t edge_lb = ep_rem > eg_rem ? ep_rem - eg_rem : eg_rem - ep_rem;
        return node_lb + edge_lb;
    }

    uint64_t completion_cost() const {
        uint64_t cost = 0;
        for (size_t k = 0; k < ng_; ++k)
            if (!used_[k]) ++cost;  // node insertions
        for (uint32_t e = 0; e < g_.edges.size(); ++e)
            if (!used_[g_.edges[e][0]] || !used_[g_.edges[e][1]]) ++cost;  // edge insertions
        return cost;
    }

    void dfs(size_t i, uint64_t cost) {
        if (cost >= best_) return;
        if (i == np_) {
            uint64_t total = cost + completion_cost();
            if (total < best_) {
                best_ = total;
                best_assign_ = assign_;
            }
            return;
        }
        if (cost + lower_bound(i) >= best_) return;

        // Same-label gold candidates first steer the search toward cheap
        // mappings early.
        std::vector<uint32_t> candidates;
        candidates.reserve(ng_);
        for (uint32_t j = 0; j < ng_; ++j)
            if (!used_[j] && g_.labels[j] == p_.labels[i]) candidates.push_back(j);
        for (uint32_t j = 0; j < ng_; ++j)
            if (!used_[j] && g_.labels[j] != p_.labels[i]) candidates.push_back(j);

        for (uint32_t j : candidates) {
            uint64_t c = step_cost(i, j);
            assign_[i] = j;
            used_[j] = 1;
            preimage_[j] = static_cast<uint32_t>(i);
            dfs(i + 1, cost + c);
            used_[j] = 0;
            assign_[i] = kEps;
        }
        uint64_t c = step_cost(i, kEps);
        assign_[i] = kEps;
        dfs(i + 1, cost + c);
    }

    const FlatGraph& p_;
    const FlatGraph& g_;
    size_t np_ = 0, ng_ = 0;
    std::vector<uint32_t> assign_;
    std::vector<char> used_;
    std::vector<uint32_t> preimage_;  // gold node -> pred node, valid while used_
    uint64_t best_ = 0;
    std::vector<uint32_t> best_assign_;
};

std::vector<std::string> derive_trace(const FlatGraph& p, const FlatGraph& g,
                                      const std::vector<uint32_t>& assign) {
    std::vector<std::string> ops;
    std::vector<uint32_t> preimage(g.labels.size(), kEps);
    for (size_t i = 0; i < assign.size(); ++i) {
        if (assign[i] == kEps)
            ops.push_back("delete node '" + p.labels[i] + "'");
        else {
            preimage[assign[i]] = static_cast<uint32_t>(i);
            if (p.labels[i] != g.labels[assign[i]])
                ops.push_back("substitute node '" + p.labels[i] + "' -> '" +
                              g.labels[assign[i]] + "'");
        }
    }
    for (size_t j = 0; j < g.labels.size(); ++j)
        if (preimage[j] == kEps) ops.push_back("insert node '" + g.labels[j] + "'");
    for (size_t e = 0; e < p.edges.size(); ++e) {
        uint32_t h = p.edges[e][0], t = p.edges[e][1];
        std::string name = "'" + p.labels[h] + "' -> '" + p.labels[t] + "'";
        if (assign[h] == kEps || assign[t] == kEps) {
            ops.push_back("delete edge " + name);
            continue;
        }
        const std::string* rel = g.relation_between(assign[h], assign[t]);
        if (!rel)
            ops.push_back("delete edge " + name);
        else if (*rel != p.rels[e])
            ops.push_back("substitute edge " + name + " relation '" + p.rels[e] + "' -> '" +
                          *rel + "'");
    }
    for (size_t e = 0; e < g.edges.size(); ++e) {
        uint32_t h = g.edges[e][0], t = g.edges[e][1];
        bool covered = preimage[h] != kEps && preimage[t] != kEps &&
                       p.relation_between(preimage[h], preimage[t]) != nullptr;
        if (!covered)
            ops.push_back("insert edge '" + g.labels[h] + "' -> '" + g.labels[t] + "'");
    }
    return ops;
}

}  // namespace

GedResult graph_edit_distance(const ExplanationGraph& pred, const ExplanationGraph& gold,
                              const GedConfig& cfg) {
    FlatGraph p = FlatGraph::from(pred);
    FlatGraph g = FlatGraph::from(gold);
    if (p.labels.size() > cfg.max_nodes || g.labels.size() > cfg.max_nodes)
        raise(Errc::size_limit_exceeded,
              "graph exceeds the exact edit-distance budget of " +
                  std::to_string(cfg.max_nodes) + " nodes");

    GedSearch search(p, g);
    GedResult result;
    result.raw_ops = search.run();
    double denom = static_cast<double>(p.labels.size() + p.edges.size() + g.labels.size() +
                                       g.edges.size());
    result.normalized = denom > 0.0 ? static_cast<double>(result.raw_ops) / denom : 0.0;
    if (cfg.want_trace) result.op_trace = derive_trace(p, g, search.best_assign());
    return result;
}

// ---------------------------------------------------------------------------
// G-BS

namespace {

std::vector<std::string> triple_tokens(const Triple& t) {
    std::string text = t.head.spaced() + " " + t.relation.spaced() + " " + t.tail.spaced();
    return anchor_tokens(text);
}

double token_f1(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0.0;
    std::unordered_map<std::string, int> counts;
    for (const std::string& tok : a) ++counts[tok];
    size_t common = 0;
    for (const std::string& tok : b) {
        auto it = counts.find(tok);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++common;
        }
    }
    if (common == 0) return 0.0;
    double precision = static_cast<double>(common) / static_cast<double>(a.size());
    double recall = static_cast<double>(common) / static_cast<double>(b.size());
    return 2.0 * precision * recall / (precision + recall);
}

// Minimum-cost perfect assignment on a square matrix (Hungarian algorithm
// with potentials, O(n^3)).
double hungarian(const std::vector<std::vector<double>>& cost, std::vector<int>& row_to_col) {
    int n = static_cast<int>(cost.size());
    const double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    row_to_col.assign(n, -1);
    double total = 0.0;
    for (int j = 1; j <= n; ++j) {
        if (p[j] == 0) continue;
        row_to_col[p[j] - 1] = j - 1;
        total += cost[p[j] - 1][j - 1];
    }
    return total;
}

}  // namespace

EdgeSimilarity token_overlap_similarity() {
    return {"token_overlap", [](const Triple& a, const Triple& b) {
                return token_f1(triple_tokens(a), triple_tokens(b));
            }};
}

EdgeSimilarity exact_match_similarity() {
    return {"exact_match", [](const Triple& a, const Triple& b) { return a == b ? 1.0 : 0.0; }};
}

GbsResult graph_bertscore(const ExplanationGraph& pred, const ExplanationGraph& gold,
                          const EdgeSimilarity& sim) {
    const auto& pe = pred.triples();
    const auto& ge = gold.triples();
    if (pe.empty() || ge.empty())
        raise(Errc::empty_graph, "edge matching needs two non-empty graphs");
    size_t n = std::max(pe.size(), ge.size());

    // Maximize matched weight == minimize sum of (1 - w); padded cells carry
    // weight 0 so dummy assignments stay free of matched weight.
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 1.0));
    std::vector<std::vector<double>> weight(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < pe.size(); ++i) {
        for (size_t j = 0; j < ge.size(); ++j) {
            double w = std::clamp(sim.score(pe[i], ge[j]), 0.0, 1.0);
            weight[i][j] = w;
            cost[i][j] = 1.0 - w;
        }
    }
    std::vector<int> row_to_col;
    hungarian(cost, row_to_col);
    double matched = 0.0;
    for (size_t i = 0; i < pe.size(); ++i) {
        int j = row_to_col[i];
        if (j >= 0 && static_cast<size_t>(j) < ge.size()) matched += weight[i][j];
    }

    GbsResult r;
    r.precision = matched / static_cast<double>(pe.size());
    r.recall = matched / static_cast<double>(ge.size());
    r.f1 = (r.precision + r.recall) > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// Corpus evaluation

namespace {

GraphFormat detect_format(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '(' ? GraphFormat::paren : GraphFormat::pipe;
    }
    return GraphFormat::pipe;
}

}  // namespace

EvalSummary corpus_eval(const std::vector<EvalItem>& items, const RelationSet& relations,
                        const EdgeSimilarity& sim, const StcaConfig& cfg,
                        std::vector<EvalInstance>* per_instance) {
    EvalSummary summary;
    summary.instances = items.size();
    double gbs_sum = 0.0, ged_sum = 0.0;

    for (const EvalItem& item : items) {
        EvalInstance inst;
        inst.id = item.id;
        inst.stance_correct = item.stance_correct;
        uint64_t gold_size =
            static_cast<uint64_t>(item.gold.nodes().size() + item.gold.size());

        if (!item.stance_correct) {
            inst.checks.diagnostics.push_back("stance prediction incorrect; graph not scored");
            inst.stca = false;
            inst.ged_raw = gold_size;  // as if predicting the empty graph
            inst.ged_norm = 1.0;
            inst.gbs = 0.0;
        } else {
            bool parsed = false;
            ExplanationGraph pred;
            try {
                pred = parse_graph(item.pred_text, detect_format(item.pred_text), &relations,
                                   RelationPolicy::canonicalize);
                parsed = true;
            } catch (const Error&) {
                ++summary.unparseable;
            }
            if (!parsed) {
                inst.checks.diagnostics.push_back("prediction did not parse as a graph");
                inst.stca = false;
                inst.ged_raw = gold_size;
                inst.ged_norm = 1.0;
                inst.gbs = 0.0;
            } else {
                inst.checks = validate_structure(pred, item.belief, item.argument, relations, cfg);
                inst.stca = inst.checks.is_valid();
                inst.gbs = graph_bertscore(pred, item.gold, sim).f1;
                try {
                    GedResult ged = graph_edit_distance(pred, item.gold);
                    inst.ged_raw = ged.raw_ops;
                    inst.ged_norm = ged.normalized;
                } catch (const Error&) {
                    // Non-simple or oversized prediction: score the trivial
                    // rebuild (delete everything, insert the gold graph).
                    inst.ged_raw = static_cast<uint64_t>(pred.nodes().size() + pred.size()) +
                                   gold_size;
                    inst.ged_norm = 1.0;
                }
            }
        }

        if (inst.stance_correct) ++summary.stance_correct;
        if (inst.stca) ++summary.stca_valid;
        gbs_sum += inst.gbs;
        ged_sum += inst.ged_norm;
        if (per_instance) per_instance->push_back(std::move(inst));
    }

    if (summary.instances > 0) {
        double n = static_cast<double>(summary.instances);
        summary.stca_pct = 100.0 * static_cast<double>(summary.stca_valid) / n;
        summary.gbs_mean = gbs_sum / n;
        summary.ged_norm_mean = ged_sum / n;
    }
    return summary;
}

// ---------------------------------------------------------------------------
// Relation statistics

double RelationDistribution::percentage(size_t relation_index) const {
    if (total == 0) return 0.0;
    return 100.0 * static_cast<double>(counts.at(relation_index)) / static_cast<double>(total);
}

std::string RelationDistribution::table(const std::array<double, 16>* reference) const {
    const RelationSet& rels = RelationSet::synthetic16();
    std::ostringstream out;
    char row[160];
    if (reference)
        out << "relation          count     pct     ref   delta\n";
    else
        out << "relation          count     pct\n";
    for (size_t i = 0; i < rels.members().size(); ++i) {
        double pct = percentage(i);
        if (reference) {
            double ref = (*reference)[i];
            std::snprintf(row, sizeof(row), "%-16s %6llu  %6.2f  %6.2f  %+6.2f\n",
                          rels.at(i).name().c_str(),
                          static_cast<unsigned long long>(counts[i]), pct, ref, pct - ref);
        } else {
            std::snprintf(row, sizeof(row), "%-16s %6llu  %6.2f\n", rels.at(i).name().c_str(),
                          static_cast<unsigned long long>(counts[i]), pct);
        }
        out << row;
    }
    return out.str();
}

RelationDistribution relation_distribution(std::istream& corpus) {
    const RelationSet& rels = RelationSet::synthetic16();
    RelationDistribution dist;
    std::string line;
    uint64_t line_no = 0;
    while (std::getline(corpus, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::string target;
        try {
            if (line.front() == '{') {
                auto j = nlohmann::json::parse(line);
                target = j.at("target").get<std::string>();
            } else {
                size_t tab = line.find('\t');
                target = tab == std::string::npos ? line : line.substr(tab + 1);
            }
            auto triples = parse_triples(target, GraphFormat::pipe, &rels,
                                         RelationPolicy::strict);
            for (const Triple& t : triples) {
                auto idx = rels.index_of_surface(t.relation.name());
                if (!idx) raise(Errc::unknown_relation, t.relation.name());
                ++dist.counts[*idx];
                ++dist.total;
            }
        } catch (const Error& e) {
            raise(Errc::parse_error,
                  "corpus line " + std::to_string(line_no) + ": " + e.what());
        } catch (const nlohmann::json::exception& e) {
            raise(Errc::parse_error,
                  "corpus line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return dist;
}

std::array<double, 16> load_reference_distribution(std::istream& in) {
    const RelationSet& rels = RelationSet::synthetic16();
    std::array<double, 16> ref{};
    std::string line;
    uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string name;
        double value;
        if (!(fields >> name)) continue;  // blank line
        if (!(fields >> value))
            raise(Errc::parse_error,
                  "reference line " + std::to_string(line_no) + ": expected 'relation percent'");
        auto idx = rels.index_of_surface(name);
        if (!idx)
            raise(Errc::parse_error,
                  "reference line " + std::to_string(line_no) + ": unknown relation '" + name +
                      "'");
        ref[*idx] = value;
    }
    return ref;
}

}  // namespace gsyn
