#include "gsyn/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace gsyn {

namespace {

// Channel tags for deriving independent RNG streams from one instance seed.
constexpr uint64_t kGraphChannel = 0xE1;
constexpr uint64_t kKnowledgeChannel = 0xE2;
constexpr uint64_t kQueryChannelBase = 0xF0;  // + difficulty index
constexpr uint64_t kRedrawChannelBase = 0xD000;  // + attempt

}  // namespace

void SynthParams::validate() const {
    if (min_triples < 1 || max_triples < min_triples)
        raise(Errc::parse_error, "triple window must satisfy 1 <= min <= max");
    if (branch_choices.empty())
        raise(Errc::parse_error, "branch_choices must not be empty");
    for (int k : branch_choices)
        if (k < 0 || k > 2) raise(Errc::parse_error, "branch choice outside {0, 1, 2}");
    if (max_retries < 1) raise(Errc::parse_error, "max_retries must be positive");
}

namespace {

// True when `target` is reachable from `from` over the partial graph's
// outgoing adjacency; adding the edge target -> from would then close a
// cycle. Graphs are tiny (<= max_triples edges), plain DFS suffices.
bool reaches(const std::unordered_map<uint32_t, std::vector<uint32_t>>& out_adj, uint32_t from,
             uint32_t target) {
    if (from == target) return true;
    std::vector<uint32_t> stack{from};
    std::unordered_set<uint32_t> seen{from};
    while (!stack.empty()) {
        uint32_t u = stack.back();
        stack.pop_back();
        auto it = out_adj.find(u);
        if (it == out_adj.end()) continue;
        for (uint32_t v : it->second) {
            if (v == target) return true;
            if (seen.insert(v).second) stack.push_back(v);
        }
    }
    return false;
}

// Re-orders accepted edges into a depth-first traversal from the source
// concepts: sources in order of first appearance during growth, outgoing
// edges of each node in growth order. The result is the "reading order" the
// rest of the pipeline serializes.
std::vector<Triple> reading_order(const KbIndex& index, const std::vector<uint32_t>& growth) {
    // Local node ids by first appearance (head, then tail, per edge).
    std::vector<uint32_t> node_of;  // local -> concept id
    std::unordered_map<uint32_t, size_t> local_of;
    auto intern = [&](uint32_t cid) {
        auto [it, fresh] = local_of.try_emplace(cid, node_of.size());
        if (fresh) node_of.push_back(cid);
        return it->second;
    };
    size_t edge_count = growth.size();
    std::vector<size_t> head_local(edge_count), tail_local(edge_count);
    for (size_t i = 0; i < edge_count; ++i) {
        const auto& e = index.edge(growth[i]);
        head_local[i] = intern(e.head);
        tail_local[i] = intern(e.tail);
    }
    size_t n = node_of.size();
    std::vector<std::vector<size_t>> out(n);
    std::vector<size_t> indeg(n, 0);
    for (size_t i = 0; i < edge_count; ++i) {
        out[head_local[i]].push_back(i);  // growth order within each node
        ++indeg[tail_local[i]];
    }

    std::vector<Triple> ordered;
    ordered.reserve(edge_count);
    std::vector<char> visited(n, 0);
    for (size_t root = 0; root < n; ++root) {  // local ids follow first appearance
        if (indeg[root] != 0 || visited[root]) continue;
        std::vector<std::pair<size_t, size_t>> stack{{root, 0}};
        visited[root] = 1;
        while (!stack.empty()) {
            auto& [u, slot] = stack.back();
            if (slot == out[u].size()) {
                stack.pop_back();
                continue;
            }
            size_t ei = out[u][slot++];
            ordered.push_back(index.materialize(growth[ei]));
            size_t v = tail_local[ei];
            if (!visited[v]) {
                visited[v] = 1;
                stack.emplace_back(v, 0);
            }
        }
    }
    return ordered;
}

}  // namespace

ExplanationGraph synthesize_graph(const KbIndex& index, const SynthParams& params, Rng& rng) {
    params.validate();
    const auto& sink_pool = index.concepts_with_incoming();
    if (sink_pool.empty())
        raise(Errc::no_qualifying_concept, "index has no concept with incoming triples");

    const size_t max_triples = static_cast<size_t>(params.max_triples);
    for (int attempt = 0; attempt < params.max_retries; ++attempt) {
        uint32_t sink = sink_pool[rng.below(sink_pool.size())];

        std::vector<uint32_t> frontier{sink};
        size_t next = 0;
        std::unordered_set<uint32_t> in_graph{sink};
        std::vector<uint32_t> growth;  // edge ids in acceptance order
        std::unordered_set<uint64_t> pairs;  // occupied (head, tail) slots
        std::unordered_map<uint32_t, std::vector<uint32_t>> out_adj;

        while (next < frontier.size() && growth.size() < max_triples) {
            uint32_t node = frontier[next++];
            int k = params.branch_choices[rng.below(params.branch_choices.size())];
            if (k == 0) continue;
            auto span = index.incoming_ids(node);
            std::vector<uint32_t> candidates(span.begin(), span.end());
            int accepted = 0;
            while (accepted < k && !candidates.empty() && growth.size() < max_triples) {
                size_t pick = rng.below(candidates.size());
                uint32_t edge_id = candidates[pick];
                candidates[pick] = candidates.back();
                candidates.pop_back();
                const auto& e = index.edge(edge_id);
                if (e.head == sink) continue;  // sink must keep out-degree 0
                uint64_t pair_key = (static_cast<uint64_t>(e.head) << 32) | node;
                if (pairs.count(pair_key)) continue;  // one edge per (head, tail)
                if (reaches(out_adj, node, e.head)) continue;  // would close a cycle
                growth.push_back(edge_id);
                pairs.insert(pair_key);
                out_adj[e.head].push_back(node);
                ++accepted;
                if (in_graph.insert(e.head).second) frontier.push_back(e.head);
            }
        }

        if (growth.size() >= static_cast<size_t>(params.min_triples))
            return ExplanationGraph::from_triples(reading_order(index, growth));
    }
    raise(Errc::synthesis_exhausted,
          "no graph met the size window after " + std::to_string(params.max_retries) +
              " retries");
}

std::vector<Triple> build_knowledge_source(const ExplanationGraph& gold, const KbIndex& index,
                                           Rng& rng, double ratio_lo, double ratio_hi) {
    if (gold.empty()) raise(Errc::empty_graph, "knowledge source needs a non-empty gold graph");
    auto sk = sinks(gold);
    if (sk.size() != 1)
        raise(Errc::parse_error, "knowledge source needs a single-sink gold graph");
    const Concept& answer = sk.front();

    size_t n = gold.size();
    uint64_t m_lo = static_cast<uint64_t>(std::ceil(ratio_lo * static_cast<double>(n)));
    uint64_t m_hi = static_cast<uint64_t>(std::floor(ratio_hi * static_cast<double>(n)));
    if (m_lo < n) m_lo = n;
    if (m_hi < m_lo) m_hi = m_lo;
    uint64_t m = rng.range(m_lo, m_hi);

    std::unordered_set<Triple, TripleHash> gold_set(gold.triples().begin(), gold.triples().end());
    auto excluded = [&](const Triple& t) { return t.tail == answer || gold_set.count(t) > 0; };

    // Neighborhood pool: triples incident to gold nodes, deduplicated by id.
    std::vector<uint32_t> pool;
    std::unordered_set<uint32_t> pool_seen;
    for (const Concept& c : gold.nodes()) {
        auto cid = index.find_concept(c.text());
        if (!cid) continue;
        for (auto ti : index.outgoing_ids(*cid))
            if (pool_seen.insert(ti).second) pool.push_back(ti);
        for (auto ti : index.incoming_ids(*cid))
            if (pool_seen.insert(ti).second) pool.push_back(ti);
    }

    std::vector<Triple> distractors;
    size_t need = static_cast<size_t>(m - n);
    std::unordered_set<uint32_t> chosen;
    while (distractors.size() < need && !pool.empty()) {
        size_t pick = rng.below(pool.size());
        uint32_t ti = pool[pick];
        pool[pick] = pool.back();
        pool.pop_back();
        Triple t = index.materialize(ti);
        if (excluded(t)) continue;
        chosen.insert(ti);
        distractors.push_back(std::move(t));
    }
    // Uniform fallback when the neighborhood cannot fill the quota.
    size_t attempts = 64 + 64 * need;
    while (distractors.size() < need && attempts-- > 0) {
        uint32_t ti = static_cast<uint32_t>(rng.below(index.triple_count()));
        if (chosen.count(ti)) continue;
        Triple t = index.materialize(ti);
        if (excluded(t)) continue;
        chosen.insert(ti);
        distractors.push_back(std::move(t));
    }

    std::vector<Triple> out = gold.triples();
    out.insert(out.end(), distractors.begin(), distractors.end());
    rng.shuffle(out);
    return out;
}

// ---------------------------------------------------------------------------
// Templates

const char* difficulty_name(Difficulty d) {
    switch (d) {
        case Difficulty::easy: return "easy";
        case Difficulty::normal: return "normal";
        case Difficulty::hard: return "hard";
    }
    return "?";
}

namespace {

bool word_boundary(const std::string& s, size_t i) {
    auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
    bool left = (i == 0) || !alnum(s[i - 1]);
    bool right = (i + 1 >= s.size()) || !alnum(s[i + 1]);
    return left && right;
}

int count_slots(const std::string& tmpl, char slot) {
    int count = 0;
    for (size_t i = 0; i < tmpl.size(); ++i)
        if (tmpl[i] == slot && word_boundary(tmpl, i)) ++count;
    return count;
}

// Substitutes the X/Y slots; an empty replacement elides the slot. The
// result has single spaces and no leading/trailing whitespace.
std::string instantiate(const std::string& tmpl, const std::string& head,
                        const std::string& tail) {
    std::string raw;
    raw.reserve(tmpl.size() + head.size() + tail.size());
    for (size_t i = 0; i < tmpl.size(); ++i) {
        char c = tmpl[i];
        if ((c == 'X' || c == 'Y') && word_boundary(tmpl, i))
            raw += (c == 'X') ? head : tail;
        else
            raw += c;
    }
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty() && out.back() != ' ') out += ' ';
        } else {
            out += c;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

// One "relation TAB template" pair per line. The fixed bank below mirrors
// the sixteen-relation verbalization inventory; X is the head slot, Y the
// tail slot.
const char* kDefaultTemplates = R"(antonym	X is opposite to Y
antonym	Y is opposite to X
antonym	X is the opposite of Y
at_location	X is located in Y
at_location	X , which is located in Y
at_location	X, located in Y
at_location	X has the position of Y
at_location	X, who has the position of Y
at_location	X, whose position is that of Y
at_location	X's position is Y
at_location	X, who holds the position of Y
at_location	X holds the position of Y
capable_of	X is capable of Y
capable_of	X can Y
capable_of	X has the ability of Y
capable_of	Y is the ability of X
capable_of	Y can be done by X
causes	X causes Y
causes	X is a cause of Y
causes	Y because X
causes	Y is because of X
causes	X has a result of Y
causes	Y is a result of X
created_by	X is created by Y
created_by	Y created X
created_by	X is made by Y
created_by	Y made X
is_a	X is a Y
is_a	X is also a Y
is_a	X is equal to Y
desires	X desires Y
desires	X wants Y
desires	Y is desired by X
desires	Y is wanted by X
has_subevent	X has a subevent of Y
has_subevent	Y is a subevent of X
part_of	X is part of Y
part_of	X is a part of Y
part_of	X, which is part of Y
has_context	X has context of Y
has_context	X has a context including Y
has_context	when talking about X, we also talking about Y
has_context	X is close to Y in context
has_property	X has a property of Y
has_property	Y is a property of X
has_property	X, with a property of Y
made_of	X is made of Y
made_of	Y is used to make X
made_of	X's material is Y
made_of	the material of X is Y
not_capable_of	X is not capable of Y
not_capable_of	X can not Y
not_capable_of	Y can't be done by X
not_capable_of	X doesn't has the ability of Y
not_capable_of	X is not able that Y
not_capable_of	Y is not a ability of X
not_desires	X doesn't desire Y
not_desires	X don't want Y
not_desires	X don't desire Y
not_desires	X doesn't want Y
not_desires	X doesn't need Y
receives_action	X receive an action of Y
receives_action	Y will give an action to X
receives_action	when Y, X will receive an action
used_for	X is used for Y
used_for	Y will use X
)";

}  // namespace

void TemplateBank::add(const std::string& relation, std::string tmpl) {
    if (count_slots(tmpl, 'X') != 1 || count_slots(tmpl, 'Y') != 1)
        raise(Errc::parse_error,
              "template needs exactly one X and one Y slot: '" + tmpl + "'");
    std::string key = relation;
    // Canonicalize surfaces of the built-in vocabulary ("isa" -> "is_a").
    if (auto r = RelationSet::synthetic16().find_surface(relation)) key = r->name();
    by_relation_[key].push_back(std::move(tmpl));
}

TemplateBank TemplateBank::parse(std::istream& in) {
    TemplateBank bank;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos)
            raise(Errc::parse_error, "template line needs 'relation<TAB>template': " + line);
        std::string relation = normalize_concept_text(line.substr(0, tab));
        std::string tmpl = line.substr(tab + 1);
        while (!tmpl.empty() && (tmpl.back() == '\r' || tmpl.back() == ' ')) tmpl.pop_back();
        if (relation.empty() || tmpl.empty())
            raise(Errc::parse_error, "empty field in template line: " + line);
        bank.add(relation, std::move(tmpl));
    }
    if (bank.by_relation_.empty()) raise(Errc::parse_error, "empty template bank");
    return bank;
}

TemplateBank TemplateBank::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open template bank: " + path);
    return parse(in);
}

const TemplateBank& TemplateBank::defaults() {
    static const TemplateBank bank = [] {
        std::istringstream in(kDefaultTemplates);
        return parse(in);
    }();
    return bank;
}

const std::vector<std::string>& TemplateBank::templates_for(const Relation& r) const {
    auto it = by_relation_.find(r.name());
    if (it == by_relation_.end())
        raise(Errc::missing_template, "no templates for relation '" + r.name() + "'");
    return it->second;
}

// ---------------------------------------------------------------------------
// Query construction

namespace {

std::string join_clauses(const std::vector<std::string>& clauses) {
    std::string out;
    for (size_t i = 0; i < clauses.size(); ++i) {
        if (i > 0) out += (i % 2 == 1) ? " and " : " then ";
        out += clauses[i];
    }
    return out;
}

}  // namespace

Query make_query(const ExplanationGraph& gold, Difficulty difficulty, const TemplateBank& bank,
                 Rng& rng) {
    if (gold.empty()) raise(Errc::empty_graph, "query construction needs a non-empty graph");
    auto sk = sinks(gold);
    if (sk.size() != 1)
        raise(Errc::parse_error, "query construction requires a single-sink graph");
    const Concept sink_node = sk.front();
    auto srcs = sources(gold);
    std::unordered_set<std::string> source_set;
    for (const Concept& s : srcs) source_set.insert(s.text());

    auto pick = [&rng](const std::vector<std::string>& tpls) -> const std::string& {
        return tpls[rng.below(tpls.size())];
    };

    Query q;
    q.answer = sink_node;
    if (difficulty == Difficulty::hard) {
        const Triple& first = gold.triples().front();
        std::string phrase = instantiate(pick(bank.templates_for(first.relation)), "", "");
        std::string text = "What " + first.head.text();
        if (!phrase.empty()) text += " " + phrase;
        for (const Concept& s : srcs)
            if (s != first.head) text += " with " + s.text();
        q.text = text + " ?";
        return q;
    }

    const bool easy = difficulty == Difficulty::easy;
    auto mention = [&](const Concept& c) -> std::string {
        if (c == sink_node) return easy ? bank.answer_token : std::string();
        if (source_set.count(c.text())) return c.text();
        return easy ? bank.hidden_token : std::string();
    };
    std::vector<std::string> clauses;
    clauses.reserve(gold.size());
    for (const Triple& t : gold.triples())
        clauses.push_back(instantiate(pick(bank.templates_for(t.relation)), mention(t.head),
                                      mention(t.tail)));
    q.text = (easy ? "" : "What ") + join_clauses(clauses) + " ?";
    return q;
}

// ---------------------------------------------------------------------------
// Records

QueryInstance make_instance(const KbIndex& index, const SynthParams& params,
                            const TemplateBank& bank, uint64_t instance_seed,
                            Difficulty difficulty, uint64_t id, double ks_ratio_lo,
                            double ks_ratio_hi) {
    QueryInstance inst;
    inst.id = id;
    inst.difficulty = difficulty;
    inst.seed = instance_seed;

    Rng graph_rng(mix_seed(instance_seed, kGraphChannel));
    inst.gold_graph = synthesize_graph(index, params, graph_rng);

    Rng ks_rng(mix_seed(instance_seed, kKnowledgeChannel));
    inst.knowledge_source =
        build_knowledge_source(inst.gold_graph, index, ks_rng, ks_ratio_lo, ks_ratio_hi);

    Rng query_rng(mix_seed(instance_seed, kQueryChannelBase + static_cast<uint64_t>(difficulty)));
    Query q = make_query(inst.gold_graph, difficulty, bank, query_rng);
    inst.query_text = std::move(q.text);
    inst.answer = std::move(q.answer);
    return inst;
}

namespace {

std::string source_prefix(const ExplanationGraph& gold) {
    std::string out;
    auto srcs = sources(gold);
    for (size_t i = 0; i < srcs.size(); ++i) {
        if (i) out += " | ";
        out += srcs[i].text();
    }
    return out;
}

}  // namespace

std::string instance_input(const QueryInstance& instance) {
    std::string prefix = source_prefix(instance.gold_graph);
    std::string out = prefix;
    out += " [SEP] ";
    if (instance.difficulty == Difficulty::normal) {
        out += prefix;
        out += " [SEP] ";
    }
    out += instance.query_text;
    out += " [SEP] ";
    out += serialize_triples(instance.knowledge_source, GraphFormat::pipe);
    return out;
}

std::string instance_target(const QueryInstance& instance) {
    return serialize_graph(instance.gold_graph, GraphFormat::pipe);
}

std::vector<Difficulty> difficulty_schedule(uint64_t total, const MixProportions& mix) {
    const double prop[3] = {mix.easy, mix.normal, mix.hard};
    double sum = prop[0] + prop[1] + prop[2];
    for (double p : prop)
        if (p < 0.0) raise(Errc::parse_error, "difficulty proportions must be non-negative");
    if (sum <= 0.0) raise(Errc::parse_error, "difficulty proportions must not all be zero");

    // Largest-remainder apportionment.
    uint64_t counts[3];
    double frac[3];
    uint64_t assigned = 0;
    for (int d = 0; d < 3; ++d) {
        double exact = static_cast<double>(total) * prop[d] / sum;
        counts[d] = static_cast<uint64_t>(std::floor(exact));
        frac[d] = exact - std::floor(exact);
        assigned += counts[d];
    }
    int order[3] = {0, 1, 2};
    std::stable_sort(order, order + 3, [&](int a, int b) { return frac[a] > frac[b]; });
    for (uint64_t i = 0; assigned < total; ++i, ++assigned) ++counts[order[i % 3]];

    // Smooth weighted round-robin gives exact counts and an interleaved order.
    std::vector<Difficulty> schedule;
    schedule.reserve(total);
    int64_t credit[3] = {0, 0, 0};
    for (uint64_t i = 0; i < total; ++i) {
        int best = -1;
        for (int d = 0; d < 3; ++d) {
            credit[d] += static_cast<int64_t>(counts[d]);
            if (best < 0 || credit[d] > credit[best]) best = d;
        }
        credit[best] -= static_cast<int64_t>(total);
        schedule.push_back(static_cast<Difficulty>(best));
    }
    return schedule;
}

namespace {

struct WorkerStats {
    std::array<uint64_t, 3> difficulty_counts{};
    uint64_t gold_triples = 0;
    uint64_t redraws = 0;
    std::array<uint64_t, 16> relation_counts{};
};

std::string render_record(const KbIndex& index, const TemplateBank& bank, const EmitConfig& cfg,
                          uint64_t id, Difficulty difficulty, WorkerStats& stats) {
    uint64_t base = mix_seed(cfg.seed, id);
    QueryInstance inst;
    for (int attempt = 0;; ++attempt) {
        uint64_t seed = attempt == 0 ? base : mix_seed(base, kRedrawChannelBase + attempt);
        try {
            inst = make_instance(index, cfg.params, bank, seed, difficulty, id, cfg.ks_ratio_lo,
                                 cfg.ks_ratio_hi);
            break;
        } catch (const Error& e) {
            if (e.code() != Errc::synthesis_exhausted || attempt + 1 >= cfg.max_record_attempts)
                throw;
            ++stats.redraws;
        }
    }

    ++stats.difficulty_counts[static_cast<size_t>(difficulty)];
    stats.gold_triples += inst.gold_graph.size();
    for (const Triple& t : inst.gold_graph.triples()) {
        auto idx = RelationSet::synthetic16().index_of_surface(t.relation.name());
        if (idx) ++stats.relation_counts[*idx];
    }

    if (cfg.format == CorpusFormat::text)
        return instance_input(inst) + "\t" + instance_target(inst) + "\n";
    nlohmann::ordered_json j;
    j["id"] = inst.id;
    j["difficulty"] = difficulty_name(inst.difficulty);
    j["input"] = instance_input(inst);
    j["target"] = instance_target(inst);
    j["seed"] = inst.seed;
    return j.dump() + "\n";
}

}  // namespace

EmitStats emit_corpus(const KbIndex& index, const TemplateBank& bank, const EmitConfig& cfg,
                      std::ostream& out) {
    cfg.params.validate();
    auto schedule = difficulty_schedule(cfg.total, cfg.mix);
    auto t0 = std::chrono::steady_clock::now();

    int workers = std::max(1, cfg.workers);
    EmitStats stats;
    const uint64_t chunk_size = 4096;
    std::vector<std::string> lines;

    for (uint64_t start = 0; start < cfg.total; start += chunk_size) {
        uint64_t count = std::min(chunk_size, cfg.total - start);
        lines.assign(count, {});
        std::vector<WorkerStats> wstats(workers);

        auto run_range = [&](int w, uint64_t lo, uint64_t hi) {
            for (uint64_t i = lo; i < hi; ++i) {
                uint64_t id = start + i;
                lines[i] = render_record(index, bank, cfg, id, schedule[id], wstats[w]);
            }
        };

        if (workers == 1) {
            run_range(0, 0, count);
        } else {
            std::vector<std::thread> threads;
            std::mutex error_mutex;
            std::exception_ptr first_error;
            for (int w = 0; w < workers; ++w) {
                uint64_t lo = count * w / workers;
                uint64_t hi = count * (w + 1) / workers;
                threads.emplace_back([&, w, lo, hi] {
                    try {
                        run_range(w, lo, hi);
                    } catch (...) {
                        std::lock_guard<std::mutex> guard(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                });
            }
            for (auto& t : threads) t.join();
            if (first_error) std::rethrow_exception(first_error);
        }

        for (const auto& line : lines) out << line;
        for (const auto& w : wstats) {
            for (int d = 0; d < 3; ++d) stats.difficulty_counts[d] += w.difficulty_counts[d];
            stats.gold_triples += w.gold_triples;
            stats.redraws += w.redraws;
            for (int r = 0; r < 16; ++r) stats.relation_counts[r] += w.relation_counts[r];
        }
    }
    if (!out) raise(Errc::io_error, "corpus write failed");

    stats.records = cfg.total;
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return stats;
}

// ---------------------------------------------------------------------------
// Baselines

std::pair<std::string, std::string> baseline_record(const Triple& t, MaskField field) {
    switch (field) {
        case MaskField::head:
            return {"predict head: " + t.relation.name() + " | " + t.tail.text(), t.head.text()};
        case MaskField::relation:
            return {"predict relation: " + t.head.text() + " | " + t.tail.text(),
                    t.relation.name()};
        case MaskField::tail:
            return {"predict tail: " + t.head.text() + " | " + t.relation.name(), t.tail.text()};
    }
    raise(Errc::parse_error, "bad mask field");
}

EmitStats emit_baseline_corpus(const KbIndex& index, const BaselineConfig& cfg,
                               std::ostream& out) {
    if (index.triple_count() == 0) raise(Errc::empty_index, "baseline needs a non-empty index");
    auto t0 = std::chrono::steady_clock::now();
    EmitStats stats;
    for (uint64_t id = 0; id < cfg.total; ++id) {
        Rng rng(mix_seed(cfg.seed, id));
        Triple t = index.materialize(static_cast<uint32_t>(rng.below(index.triple_count())));
        MaskField field = cfg.task == BaselineTask::tail_prediction
                              ? MaskField::tail
                              : static_cast<MaskField>(rng.below(3));
        auto [input, target] = baseline_record(t, field);
        if (cfg.format == CorpusFormat::text) {
            out << input << "\t" << target << "\n";
        } else {
            nlohmann::ordered_json j;
            j["id"] = id;
            j["task"] = cfg.task == BaselineTask::tail_prediction ? "tail_prediction"
                                                                  : "link_prediction";
            j["input"] = input;
            j["target"] = target;
            j["seed"] = mix_seed(cfg.seed, id);
            out << j.dump() << "\n";
        }
        auto idx = RelationSet::synthetic16().index_of_surface(t.relation.name());
        if (idx) ++stats.relation_counts[*idx];
    }
    if (!out) raise(Errc::io_error, "corpus write failed");
    stats.records = cfg.total;
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return stats;
}

}  // namespace gsyn
