#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gsyn/synth.hpp"
#include "support/fixtures.hpp"

using namespace gsyn;
using namespace gsyn_test;

namespace {

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::io_error;  // sentinel: no throw
}

TemplateBank bank_from(const std::string& text) {
    std::istringstream in(text);
    return TemplateBank::parse(in);
}

ExplanationGraph worked_gold() {
    return parse_graph(kGoldPipe, GraphFormat::pipe, &RelationSet::synthetic16());
}

}  // namespace

TEST_CASE("synth params validation") {
    SynthParams p;
    p.validate();

    SynthParams bad = p;
    bad.min_triples = 0;
    CHECK(code_of([&] { bad.validate(); }) == Errc::parse_error);
    bad = p;
    bad.max_triples = 2;
    bad.min_triples = 3;
    CHECK(code_of([&] { bad.validate(); }) == Errc::parse_error);
    bad = p;
    bad.branch_choices.clear();
    CHECK(code_of([&] { bad.validate(); }) == Errc::parse_error);
    bad = p;
    bad.branch_choices = {0, 3};
    CHECK(code_of([&] { bad.validate(); }) == Errc::parse_error);
    bad = p;
    bad.max_retries = 0;
    CHECK(code_of([&] { bad.validate(); }) == Errc::parse_error);
}

TEST_CASE("synthesized graphs satisfy the growth contract") {
    KbIndex idx = load_mini_index();
    SynthParams params;
    Rng rng(42);
    const RelationSet& vocab = RelationSet::synthetic16();

    int produced = 0;
    for (int i = 0; i < 300; ++i) {
        ExplanationGraph g;
        try {
            g = synthesize_graph(idx, params, rng);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::synthesis_exhausted);
            continue;
        }
        ++produced;
        CHECK(g.size() >= 3);
        CHECK(g.size() <= 8);
        CHECK(is_dag(g));
        CHECK(is_connected(g));
        CHECK(sinks(g).size() == 1);
        std::set<std::pair<std::string, std::string>> pairs;
        for (const Triple& t : g.triples()) {
            CHECK(vocab.index_of_surface(t.relation.name()).has_value());
            CHECK(pairs.emplace(t.head.text(), t.tail.text()).second);
        }
        // stored order starts at a source concept
        auto srcs = sources(g);
        CHECK(std::find(srcs.begin(), srcs.end(), g.triples().front().head) != srcs.end());
    }
    CHECK(produced > 250);
}

TEST_CASE("graph synthesis is deterministic in the rng stream") {
    KbIndex idx = load_mini_index();
    SynthParams params;
    Rng a(99), b(99);
    for (int i = 0; i < 20; ++i) {
        ExplanationGraph ga = synthesize_graph(idx, params, a);
        ExplanationGraph gb = synthesize_graph(idx, params, b);
        CHECK(serialize_graph(ga, GraphFormat::pipe) == serialize_graph(gb, GraphFormat::pipe));
    }
}

TEST_CASE("knowledge source contract") {
    KbIndex idx = load_mini_index();
    SynthParams params;
    Rng grow(7);

    int shuffled_somewhere = 0;
    for (int i = 0; i < 50; ++i) {
        ExplanationGraph gold = synthesize_graph(idx, params, grow);
        Concept answer = sinks(gold).front();
        Rng ks_a(1000 + i), ks_b(1000 + i);
        std::vector<Triple> ks = build_knowledge_source(gold, idx, ks_a);
        std::vector<Triple> ks_again = build_knowledge_source(gold, idx, ks_b);
        CHECK(ks == ks_again);

        size_t n = gold.size();
        CHECK(ks.size() >= static_cast<size_t>(std::ceil(1.5 * static_cast<double>(n))));
        CHECK(ks.size() <= static_cast<size_t>(std::floor(2.0 * static_cast<double>(n))));

        std::unordered_set<Triple, TripleHash> ks_set(ks.begin(), ks.end());
        for (const Triple& t : gold.triples()) CHECK(ks_set.count(t) == 1);
        for (const Triple& t : ks)
            if (!std::count(gold.triples().begin(), gold.triples().end(), t))
                CHECK(t.tail != answer);  // answer stays uniquely derivable

        bool gold_prefix = true;
        for (size_t j = 0; j < n; ++j)
            if (ks[j] != gold.triples()[j]) gold_prefix = false;
        if (!gold_prefix) ++shuffled_somewhere;
    }
    CHECK(shuffled_somewhere > 0);
}

TEST_CASE("template bank parsing and slot validation") {
    TemplateBank ok = bank_from(
        "# comment line\n"
        "causes\tX causes Y\n"
        "isa\tX is a Y\r\n"
        "used for\tY will use X\n");
    CHECK(ok.templates_for(Relation("causes")).size() == 1);
    CHECK(ok.templates_for(Relation("is_a")).front() == "X is a Y");     // surface canonicalized
    CHECK(ok.templates_for(Relation("used_for")).front() == "Y will use X");
    CHECK(code_of([&] { (void)ok.templates_for(Relation("desires")); }) ==
          Errc::missing_template);

    CHECK(code_of([&] { (void)bank_from("causes X causes Y\n"); }) == Errc::parse_error);
    CHECK(code_of([&] { (void)bank_from("causes\tX causes X\n"); }) == Errc::parse_error);
    CHECK(code_of([&] { (void)bank_from("causes\tno slots here\n"); }) == Errc::parse_error);
    CHECK(code_of([&] { (void)bank_from("causes\tX and Y and Y\n"); }) == Errc::parse_error);
    CHECK(code_of([&] { (void)bank_from("# nothing\n"); }) == Errc::parse_error);
    // X must be a standalone word, not a letter inside one
    TemplateBank embedded = bank_from("causes\tXylophone X causes Y\n");
    CHECK(embedded.templates_for(Relation("causes")).front() == "Xylophone X causes Y");
}

TEST_CASE("default template bank covers the full vocabulary") {
    const TemplateBank& bank = TemplateBank::defaults();
    CHECK(bank.relation_count() == 16);
    for (const Relation& r : RelationSet::synthetic16().members())
        CHECK(!bank.templates_for(r).empty());
    CHECK(bank.templates_for(Relation("causes")).size() == 6);
    CHECK(bank.templates_for(Relation("used_for")).size() == 2);
    CHECK(bank.templates_for(Relation("has_subevent")).size() == 2);
    CHECK(bank.answer_token == "[ANSWER]");
    CHECK(bank.hidden_token == "[I_E]");
    CHECK(bank.sep_token == "[SEP]");
}

TEST_CASE("query construction renders the worked example byte for byte") {
    ExplanationGraph gold = worked_gold();
    REQUIRE(gold.size() == 3);
    Rng rng(0);  // single-template banks leave nothing to chance

    TemplateBank result_bank = bank_from(
        "causes\tY is a result of X\n"
        "used_for\tX is used for Y\n"
        "has_subevent\tY is a subevent of X\n");
    Query easy = make_query(gold, Difficulty::easy, result_bank, rng);
    CHECK(easy.text == kEasyQuery);
    CHECK(easy.answer.text() == "eating_too_much");
    Query hard = make_query(gold, Difficulty::hard, result_bank, rng);
    CHECK(hard.text == kHardQuery);

    TemplateBank causes_bank = bank_from(
        "causes\tX causes Y\n"
        "used_for\tX is used for Y\n"
        "has_subevent\tY is a subevent of X\n");
    Query normal = make_query(gold, Difficulty::normal, causes_bank, rng);
    CHECK(normal.text == kNormalQuery);
    CHECK(normal.answer.text() == "eating_too_much");
}

TEST_CASE("query construction rejects degenerate graphs") {
    Rng rng(0);
    const TemplateBank& bank = TemplateBank::defaults();
    ExplanationGraph empty;
    CHECK(code_of([&] { (void)make_query(empty, Difficulty::easy, bank, rng); }) ==
          Errc::empty_graph);
    // two sinks
    ExplanationGraph twin = parse_graph("a : causes : b | a : causes : c", GraphFormat::pipe,
                                        &RelationSet::synthetic16());
    CHECK(code_of([&] { (void)make_query(twin, Difficulty::easy, bank, rng); }) ==
          Errc::parse_error);
}

TEST_CASE("worked example reproduces from the frozen seed") {
    KbIndex idx = load_eating_index();
    SynthParams params;
    const TemplateBank& bank = TemplateBank::defaults();

    QueryInstance easy = make_instance(idx, params, bank, kEatingSeed, Difficulty::easy);
    CHECK(serialize_graph(easy.gold_graph, GraphFormat::pipe) == kGoldPipe);
    CHECK(easy.query_text == kEasyQuery);
    CHECK(easy.answer.text() == "eating_too_much");
    CHECK(instance_target(easy) == kGoldPipe);

    std::string prefix = std::string(kSourcePrefix) + " [SEP] ";
    std::string easy_input = instance_input(easy);
    CHECK(easy_input.rfind(prefix, 0) == 0);
    CHECK(easy_input.rfind(prefix + prefix, 0) != 0);
    CHECK(easy_input.find(" [SEP] " + serialize_triples(easy.knowledge_source,
                                                        GraphFormat::pipe)) != std::string::npos);

    QueryInstance normal = make_instance(idx, params, bank, kEatingSeed, Difficulty::normal);
    CHECK(normal.query_text == kNormalQuery);
    CHECK(instance_input(normal).rfind(prefix + prefix, 0) == 0);  // doubled source list
    CHECK(serialize_graph(normal.gold_graph, GraphFormat::pipe) == kGoldPipe);
    CHECK(normal.knowledge_source == easy.knowledge_source);  // difficulty-independent channels

    QueryInstance hard = make_instance(idx, params, bank, kEatingSeed, Difficulty::hard);
    CHECK(hard.query_text == kHardQuery);

    size_t n = easy.gold_graph.size();
    CHECK(easy.knowledge_source.size() >= static_cast<size_t>(std::ceil(1.5 * double(n))));
    CHECK(easy.knowledge_source.size() <= static_cast<size_t>(std::floor(2.0 * double(n))));
}

TEST_CASE("difficulty schedule apportionment and interleaving") {
    using D = Difficulty;
    CHECK(difficulty_schedule(0, {}).empty());

    auto equal3 = difficulty_schedule(3, {});
    CHECK(equal3 == std::vector<D>{D::easy, D::normal, D::hard});

    auto equal10 = difficulty_schedule(10, {});
    CHECK(equal10 == std::vector<D>{D::easy, D::normal, D::hard, D::easy, D::normal, D::hard,
                                    D::easy, D::normal, D::hard, D::easy});

    MixProportions lopsided{3.0, 1.0, 0.0};
    auto sched = difficulty_schedule(4, lopsided);
    CHECK(sched == std::vector<D>{D::easy, D::easy, D::normal, D::easy});

    MixProportions only_hard{0.0, 0.0, 2.0};
    auto hards = difficulty_schedule(5, only_hard);
    CHECK(std::count(hards.begin(), hards.end(), D::hard) == 5);

    MixProportions negative{-1.0, 1.0, 1.0};
    CHECK(code_of([&] { (void)difficulty_schedule(1, negative); }) == Errc::parse_error);
    MixProportions zero{0.0, 0.0, 0.0};
    CHECK(code_of([&] { (void)difficulty_schedule(1, zero); }) == Errc::parse_error);
}

TEST_CASE("corpus emission is deterministic and worker-invariant") {
    KbIndex idx = load_mini_index();
    EmitConfig cfg;
    cfg.total = 60;
    cfg.seed = 7;

    std::ostringstream one, one_again, four;
    EmitStats s1 = emit_corpus(idx, TemplateBank::defaults(), cfg, one);
    EmitStats s2 = emit_corpus(idx, TemplateBank::defaults(), cfg, one_again);
    cfg.workers = 4;
    EmitStats s4 = emit_corpus(idx, TemplateBank::defaults(), cfg, four);

    CHECK(one.str() == one_again.str());
    CHECK(one.str() == four.str());
    CHECK(s1.records == 60);
    CHECK(s4.records == 60);
    CHECK(s1.difficulty_counts == std::array<uint64_t, 3>{20, 20, 20});
    CHECK(s1.difficulty_counts == s4.difficulty_counts);
    CHECK(s1.gold_triples == s4.gold_triples);
    CHECK(s1.relation_counts == s4.relation_counts);

    uint64_t relation_total = 0;
    for (uint64_t c : s1.relation_counts) relation_total += c;
    CHECK(relation_total == s1.gold_triples);

    // text rows: input TAB target, target parses as a valid gold graph
    std::istringstream lines(one.str());
    std::string line;
    uint64_t rows = 0, triples = 0;
    while (std::getline(lines, line)) {
        ++rows;
        size_t tab = line.find('\t');
        REQUIRE(tab != std::string::npos);
        ExplanationGraph g = parse_graph(line.substr(tab + 1), GraphFormat::pipe,
                                         &RelationSet::synthetic16());
        CHECK(sinks(g).size() == 1);
        triples += g.size();
    }
    CHECK(rows == 60);
    CHECK(triples == s1.gold_triples);
}

TEST_CASE("jsonl corpus rows carry the record fields") {
    KbIndex idx = load_eating_index();
    EmitConfig cfg;
    cfg.total = 12;
    cfg.seed = 3;
    cfg.format = CorpusFormat::jsonl;
    std::ostringstream out;
    emit_corpus(idx, TemplateBank::defaults(), cfg, out);

    std::istringstream lines(out.str());
    std::string line;
    uint64_t id = 0;
    auto schedule = difficulty_schedule(cfg.total, cfg.mix);
    while (std::getline(lines, line)) {
        nlohmann::json j = nlohmann::json::parse(line);
        CHECK(j.at("id").get<uint64_t>() == id);
        CHECK(j.at("difficulty").get<std::string>() == difficulty_name(schedule[id]));
        CHECK(!j.at("input").get<std::string>().empty());
        CHECK(!j.at("target").get<std::string>().empty());
        CHECK(j.contains("seed"));
        ++id;
    }
    CHECK(id == 12);
}

TEST_CASE("baseline records mask one field") {
    Triple t{Concept::from_normalized("attention"), Relation("causes"),
             Concept::from_normalized("make_people_laugh")};
    auto [tail_in, tail_out] = baseline_record(t, MaskField::tail);
    CHECK(tail_in == kTailPromptInput);
    CHECK(tail_out == kTailPromptTarget);
    auto [head_in, head_out] = baseline_record(t, MaskField::head);
    CHECK(head_in == "predict head: causes | make_people_laugh");
    CHECK(head_out == "attention");
    auto [rel_in, rel_out] = baseline_record(t, MaskField::relation);
    CHECK(rel_in == "predict relation: attention | make_people_laugh");
    CHECK(rel_out == "causes");
}

TEST_CASE("baseline corpus emission") {
    KbIndex idx = load_eating_index();
    BaselineConfig cfg;
    cfg.total = 40;
    cfg.seed = 11;

    std::ostringstream a, b;
    emit_baseline_corpus(idx, cfg, a);
    emit_baseline_corpus(idx, cfg, b);
    CHECK(a.str() == b.str());

    std::istringstream lines(a.str());
    std::string line;
    uint64_t rows = 0;
    bool saw_head = false, saw_relation = false, saw_tail = false;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.find('\t') != std::string::npos);
        if (line.rfind("predict head: ", 0) == 0) saw_head = true;
        if (line.rfind("predict relation: ", 0) == 0) saw_relation = true;
        if (line.rfind("predict tail: ", 0) == 0) saw_tail = true;
    }
    CHECK(rows == 40);
    CHECK(saw_head);
    CHECK(saw_relation);
    CHECK(saw_tail);

    cfg.task = BaselineTask::tail_prediction;
    std::ostringstream tails;
    emit_baseline_corpus(idx, cfg, tails);
    std::istringstream tail_lines(tails.str());
    while (std::getline(tail_lines, line)) CHECK(line.rfind("predict tail: ", 0) == 0);
}

// Re-derives the frozen fixture seed; run manually with
//   ./test_synth -tc="*scan*" --no-skip
TEST_CASE("scan for fixture seed" * doctest::skip()) {
    KbIndex idx = load_eating_index();
    SynthParams params;
    const TemplateBank& bank = TemplateBank::defaults();

    uint64_t found = 0;
    bool have = false;
    for (uint64_t seed = 0; seed < 16'000'000 && !have; ++seed) {
        QueryInstance inst;
        try {
            inst = make_instance(idx, params, bank, seed, Difficulty::easy);
        } catch (const Error&) {
            continue;
        }
        if (serialize_graph(inst.gold_graph, GraphFormat::pipe) != kGoldPipe) continue;
        if (inst.query_text != kEasyQuery) continue;
        if (make_instance(idx, params, bank, seed, Difficulty::normal).query_text != kNormalQuery)
            continue;
        if (make_instance(idx, params, bank, seed, Difficulty::hard).query_text != kHardQuery)
            continue;
        found = seed;
        have = true;
    }
    REQUIRE(have);
    MESSAGE("fixture seed: " << found);
    CHECK(found == kEatingSeed);
}
