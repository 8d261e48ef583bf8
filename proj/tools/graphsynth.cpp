// graphsynth: knowledge-base indexing, explanation-graph corpus synthesis
// and structural graph evaluation in one binary.
//
// Exit codes: 0 success, 2 input/parse error, 3 synthesis budget exhausted.

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsyn/kb.hpp"
#include "gsyn/metrics.hpp"
#include "gsyn/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSynthesis = 3;

void log_line(const std::string& message) { std::cerr << "graphsynth: " << message << "\n"; }

// Writes through a temporary file and renames into place, so failures never
// leave a partial output behind.
void atomic_write(const std::string& path, const std::function<void(std::ostream&)>& fill) {
    fs::path target(path);
    fs::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) gsyn::raise(gsyn::Errc::io_error, "cannot open for writing: " + temp.string());
        try {
            fill(out);
            out.flush();
            if (!out) gsyn::raise(gsyn::Errc::io_error, "write failed: " + temp.string());
        } catch (...) {
            out.close();
            std::error_code ec;
            fs::remove(temp, ec);
            throw;
        }
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        fs::remove(temp, ec);
        gsyn::raise(gsyn::Errc::io_error, "cannot move output into place: " + path);
    }
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) gsyn::raise(gsyn::Errc::io_error, "cannot open: " + path);
    return in;
}

struct IdLine {
    uint64_t id = 0;
    std::vector<std::string> fields;  // tab-separated remainder
};

// Parses "<id>\t<field>[\t<field>...]" lines; enforces the field count.
std::vector<IdLine> read_id_lines(const std::string& path, size_t min_fields,
                                  size_t max_fields) {
    auto in = open_input(path);
    std::vector<IdLine> rows;
    std::string line;
    uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        IdLine row;
        std::vector<std::string> parts;
        size_t start = 0;
        while (true) {
            size_t tab = line.find('\t', start);
            parts.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (parts.size() < 1 + min_fields || parts.size() > 1 + max_fields)
            gsyn::raise(gsyn::Errc::parse_error,
                        path + " line " + std::to_string(line_no) + ": expected id and " +
                            std::to_string(min_fields) + ".." + std::to_string(max_fields) +
                            " tab-separated field(s)");
        try {
            size_t used = 0;
            row.id = std::stoull(parts[0], &used);
            if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
        } catch (const std::exception&) {
            gsyn::raise(gsyn::Errc::parse_error, path + " line " + std::to_string(line_no) +
                                                     ": bad id '" + parts[0] + "'");
        }
        row.fields.assign(parts.begin() + 1, parts.end());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) gsyn::raise(gsyn::Errc::parse_error, path + ": no records");
    return rows;
}

gsyn::GraphFormat detect_graph_format(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '(' ? gsyn::GraphFormat::paren : gsyn::GraphFormat::pipe;
    }
    return gsyn::GraphFormat::pipe;
}

ordered_json checks_json(const gsyn::StcaReport& r) {
    ordered_json c;
    c["node_word_limit"] = r.node_word_limit;
    c["relation_vocabulary"] = r.relation_vocabulary;
    c["connected_dag"] = r.connected_dag;
    c["size_window"] = r.size_window;
    c["belief_anchoring"] = r.belief_anchoring;
    c["argument_anchoring"] = r.argument_anchoring;
    return c;
}

std::string format_double(double value, int decimals = 2) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    return buffer;
}

// ---------------------------------------------------------------------------
// Shared option state

struct GlobalOptions {
    uint64_t seed = 0;
    int workers = 1;
    std::string config_path;
    std::string format = "text";
};

gsyn::CorpusFormat parse_format(const std::string& name) {
    if (name == "text") return gsyn::CorpusFormat::text;
    if (name == "jsonl") return gsyn::CorpusFormat::jsonl;
    gsyn::raise(gsyn::Errc::parse_error, "unknown format '" + name + "' (text|jsonl)");
}

gsyn::RelationSet load_relations(const std::string& path) {
    if (path.empty()) return gsyn::RelationSet::synthetic16();
    return gsyn::RelationSet::load(path);
}

// ---------------------------------------------------------------------------
// ingest

struct IngestArgs {
    std::string dump;
    std::string out;
    std::string merge_map;
    uint64_t max_malformed = 1000;
    bool keep_degenerate = false;
};

int run_ingest(const IngestArgs& args) {
    gsyn::MergeMap map =
        args.merge_map.empty() ? gsyn::MergeMap::defaults() : gsyn::MergeMap::load(args.merge_map);
    map.validate();
    gsyn::IngestConfig cfg;
    cfg.max_malformed_lines = args.max_malformed;
    cfg.drop_degenerate_concepts = !args.keep_degenerate;

    gsyn::IngestReport report;
    gsyn::KbIndex index = gsyn::ingest_file(args.dump, map, cfg, &report);

    // Write through a temp path so a failed run never leaves a partial index.
    fs::path temp = fs::path(args.out);
    temp += ".tmp";
    try {
        gsyn::save_index(index, temp.string());
        std::error_code ec;
        fs::rename(temp, fs::path(args.out), ec);
        if (ec) gsyn::raise(gsyn::Errc::io_error, "cannot move index into place: " + args.out);
    } catch (...) {
        std::error_code ec;
        fs::remove(temp, ec);
        throw;
    }

    std::ostringstream out;
    out << "lines            " << report.lines << "\n"
        << "kept             " << report.kept << "\n"
        << "duplicates       " << report.duplicates << "\n"
        << "malformed        " << report.malformed << "\n"
        << "non_english      " << report.non_english << "\n"
        << "related_to       " << report.related_to_dropped << "\n"
        << "merge_dropped    " << report.merge_dropped << "\n"
        << "unknown_relation " << report.unknown_relation << "\n"
        << "self_loops       " << report.self_loops << "\n"
        << "degenerate       " << report.degenerate_concepts << "\n"
        << "concepts         " << index.concept_count() << "\n"
        << "triples          " << index.triple_count() << "\n";
    char digest[32];
    std::snprintf(digest, sizeof(digest), "%016llx",
                  static_cast<unsigned long long>(index.structural_digest()));
    out << "index_checksum   " << digest << "\n\n";

    gsyn::RelationDistribution dist;
    dist.counts = index.relation_histogram();
    for (uint64_t c : dist.counts) dist.total += c;
    out << dist.table();
    std::cout << out.str();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// corpus

struct CorpusArgs {
    std::string index_path;
    std::string out;
    std::string templates;
    gsyn::EmitConfig emit;
    double mix_easy = 1.0, mix_normal = 1.0, mix_hard = 1.0;
};

void apply_corpus_config(const std::string& path, CorpusArgs& args) {
    auto in = open_input(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        gsyn::raise(gsyn::Errc::parse_error, path + ": " + e.what());
    }
    auto& emit = args.emit;
    if (j.contains("total")) emit.total = j["total"].get<uint64_t>();
    if (j.contains("seed")) emit.seed = j["seed"].get<uint64_t>();
    if (j.contains("workers")) emit.workers = j["workers"].get<int>();
    if (j.contains("format")) emit.format = parse_format(j["format"].get<std::string>());
    if (j.contains("mix")) {
        const auto& m = j["mix"];
        if (m.contains("easy")) args.mix_easy = m["easy"].get<double>();
        if (m.contains("normal")) args.mix_normal = m["normal"].get<double>();
        if (m.contains("hard")) args.mix_hard = m["hard"].get<double>();
    }
    if (j.contains("min_triples")) emit.params.min_triples = j["min_triples"].get<int>();
    if (j.contains("max_triples")) emit.params.max_triples = j["max_triples"].get<int>();
    if (j.contains("branch_choices"))
        emit.params.branch_choices = j["branch_choices"].get<std::vector<int>>();
    if (j.contains("max_retries")) emit.params.max_retries = j["max_retries"].get<int>();
    if (j.contains("ks_ratio_lo")) emit.ks_ratio_lo = j["ks_ratio_lo"].get<double>();
    if (j.contains("ks_ratio_hi")) emit.ks_ratio_hi = j["ks_ratio_hi"].get<double>();
    if (j.contains("max_record_attempts"))
        emit.max_record_attempts = j["max_record_attempts"].get<int>();
    if (j.contains("templates")) args.templates = j["templates"].get<std::string>();
}

int run_corpus(CorpusArgs& args) {
    gsyn::KbIndex index = gsyn::load_index(args.index_path);
    gsyn::TemplateBank bank = args.templates.empty() ? gsyn::TemplateBank::defaults()
                                                     : gsyn::TemplateBank::load(args.templates);
    args.emit.mix = {args.mix_easy, args.mix_normal, args.mix_hard};

    gsyn::EmitStats stats;
    if (args.out.empty()) {
        stats = gsyn::emit_corpus(index, bank, args.emit, std::cout);
    } else {
        atomic_write(args.out,
                     [&](std::ostream& out) { stats = gsyn::emit_corpus(index, bank, args.emit, out); });
    }

    std::ostream& report = args.out.empty() ? std::cerr : std::cout;
    report << "records   " << stats.records << "\n"
           << "easy      " << stats.difficulty_counts[0] << "\n"
           << "normal    " << stats.difficulty_counts[1] << "\n"
           << "hard      " << stats.difficulty_counts[2] << "\n"
           << "redraws   " << stats.redraws << "\n"
           << "seconds   " << format_double(stats.seconds) << "\n"
           << "rec/sec   "
           << format_double(stats.seconds > 0 ? static_cast<double>(stats.records) / stats.seconds
                                              : 0.0,
                            1)
           << "\n\n";
    gsyn::RelationDistribution dist;
    dist.counts = stats.relation_counts;
    for (uint64_t c : dist.counts) dist.total += c;
    report << dist.table();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// baseline-corpus

struct BaselineArgs {
    std::string index_path;
    std::string out;
    std::string task = "link";
    gsyn::BaselineConfig cfg;
};

int run_baseline(BaselineArgs& args) {
    if (args.task == "link")
        args.cfg.task = gsyn::BaselineTask::link_prediction;
    else if (args.task == "tail")
        args.cfg.task = gsyn::BaselineTask::tail_prediction;
    else
        gsyn::raise(gsyn::Errc::parse_error, "unknown task '" + args.task + "' (link|tail)");

    gsyn::KbIndex index = gsyn::load_index(args.index_path);
    gsyn::EmitStats stats;
    if (args.out.empty()) {
        stats = gsyn::emit_baseline_corpus(index, args.cfg, std::cout);
    } else {
        atomic_write(args.out, [&](std::ostream& out) {
            stats = gsyn::emit_baseline_corpus(index, args.cfg, out);
        });
    }
    std::ostream& report = args.out.empty() ? std::cerr : std::cout;
    report << "records   " << stats.records << "\n"
           << "seconds   " << format_double(stats.seconds) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
    std::string graphs;
    std::string sources;
    std::string relations;
    std::string anchor_mode = "tokens";
};

gsyn::AnchorMode parse_anchor_mode(const std::string& name) {
    if (name == "tokens") return gsyn::AnchorMode::token_subsequence;
    if (name == "substring") return gsyn::AnchorMode::substring;
    gsyn::raise(gsyn::Errc::parse_error, "unknown anchor mode '" + name + "' (tokens|substring)");
}

int run_validate(const ValidateArgs& args) {
    gsyn::RelationSet relations = load_relations(args.relations);
    gsyn::StcaConfig cfg;
    cfg.anchor_mode = parse_anchor_mode(args.anchor_mode);

    auto graphs = read_id_lines(args.graphs, 1, 1);
    auto sources = read_id_lines(args.sources, 2, 2);
    if (graphs.size() != sources.size())
        gsyn::raise(gsyn::Errc::alignment_error, "graphs and sources differ in length");

    uint64_t valid = 0;
    for (size_t i = 0; i < graphs.size(); ++i) {
        if (graphs[i].id != sources[i].id)
            gsyn::raise(gsyn::Errc::alignment_error,
                        "id mismatch at row " + std::to_string(i + 1) + ": " +
                            std::to_string(graphs[i].id) + " vs " +
                            std::to_string(sources[i].id));
        const std::string& text = graphs[i].fields[0];
        gsyn::ExplanationGraph g =
            gsyn::parse_graph(text, detect_graph_format(text), &relations,
                              gsyn::RelationPolicy::canonicalize);
        gsyn::StcaReport r =
            gsyn::validate_structure(g, sources[i].fields[0], sources[i].fields[1], relations, cfg);
        if (r.is_valid()) ++valid;
        ordered_json row;
        row["id"] = graphs[i].id;
        row["stca"] = r.is_valid();
        row["checks"] = checks_json(r);
        row["diagnostics"] = r.diagnostics;
        std::cout << row.dump() << "\n";
    }
    std::cout << "StCA " << format_double(100.0 * static_cast<double>(valid) /
                                          static_cast<double>(graphs.size()))
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
    std::string pred;
    std::string gold;
    std::string sources;
    std::string stance;
    std::string relations;
    std::string details;
    std::string sim = "token";
    std::string anchor_mode = "tokens";
};

int run_eval(const EvalArgs& args) {
    gsyn::RelationSet relations = load_relations(args.relations);
    gsyn::StcaConfig cfg;
    cfg.anchor_mode = parse_anchor_mode(args.anchor_mode);
    gsyn::EdgeSimilarity sim;
    if (args.sim == "token")
        sim = gsyn::token_overlap_similarity();
    else if (args.sim == "exact")
        sim = gsyn::exact_match_similarity();
    else
        gsyn::raise(gsyn::Errc::parse_error, "unknown similarity '" + args.sim +
                                                 "' (token|exact)");

    auto preds = read_id_lines(args.pred, 1, 1);
    auto golds = read_id_lines(args.gold, 1, 1);
    auto sources = read_id_lines(args.sources, 2, 2);
    if (preds.size() != golds.size() || preds.size() != sources.size())
        gsyn::raise(gsyn::Errc::alignment_error, "prediction/gold/source files differ in length");

    std::unordered_map<uint64_t, bool> stance;
    if (!args.stance.empty()) {
        auto in = open_input(args.stance);
        std::string id_text, flag;
        uint64_t line_no = 0;
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            std::istringstream fields(line);
            if (!(fields >> id_text)) continue;
            if (!(fields >> flag))
                gsyn::raise(gsyn::Errc::parse_error, args.stance + " line " +
                                                         std::to_string(line_no) +
                                                         ": expected '<id> <bool>'");
            bool value;
            if (flag == "1" || flag == "true")
                value = true;
            else if (flag == "0" || flag == "false")
                value = false;
            else
                gsyn::raise(gsyn::Errc::parse_error, args.stance + " line " +
                                                         std::to_string(line_no) +
                                                         ": bad flag '" + flag + "'");
            try {
                stance[std::stoull(id_text)] = value;
            } catch (const std::exception&) {
                gsyn::raise(gsyn::Errc::parse_error, args.stance + " line " +
                                                         std::to_string(line_no) +
                                                         ": bad id '" + id_text + "'");
            }
        }
    }

    std::vector<gsyn::EvalItem> items;
    items.reserve(preds.size());
    for (size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].id != golds[i].id || preds[i].id != sources[i].id)
            gsyn::raise(gsyn::Errc::alignment_error,
                        "id mismatch at row " + std::to_string(i + 1));
        gsyn::EvalItem item;
        item.id = preds[i].id;
        item.pred_text = preds[i].fields[0];
        const std::string& gold_text = golds[i].fields[0];
        item.gold = gsyn::parse_graph(gold_text, detect_graph_format(gold_text), &relations,
                                      gsyn::RelationPolicy::canonicalize);
        item.belief = sources[i].fields[0];
        item.argument = sources[i].fields[1];
        if (!args.stance.empty()) {
            auto it = stance.find(item.id);
            if (it == stance.end())
                gsyn::raise(gsyn::Errc::alignment_error,
                            "no stance flag for id " + std::to_string(item.id));
            item.stance_correct = it->second;
        }
        items.push_back(std::move(item));
    }

    std::vector<gsyn::EvalInstance> rows;
    gsyn::EvalSummary summary = gsyn::corpus_eval(items, relations, sim, cfg, &rows);

    if (!args.details.empty()) {
        atomic_write(args.details, [&](std::ostream& out) {
            for (const auto& r : rows) {
                ordered_json row;
                row["id"] = r.id;
                row["stance_correct"] = r.stance_correct;
                row["stca"] = r.stca;
                row["checks"] = checks_json(r.checks);
                row["ged_raw"] = r.ged_raw;
                row["ged_norm"] = r.ged_norm;
                row["gbs"] = r.gbs;
                out << row.dump() << "\n";
            }
        });
    }

    std::cout << "instances       " << summary.instances << "\n"
              << "stance_correct  " << summary.stance_correct << "\n"
              << "stca_valid      " << summary.stca_valid << "\n"
              << "unparseable     " << summary.unparseable << "\n\n"
              << "metric  value\n"
              << "StCA    " << format_double(summary.stca_pct) << "\n"
              << "SeCA    n/a (external scorer)\n"
              << "G-BS    " << format_double(summary.gbs_mean, 4) << "\n"
              << "GED     " << format_double(summary.ged_norm_mean, 4) << "\n"
              << "EA      n/a (external scorer)\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
    std::string corpus;
    std::string reference;
};

int run_stats(const StatsArgs& args) {
    auto in = open_input(args.corpus);
    gsyn::RelationDistribution dist = gsyn::relation_distribution(in);
    if (args.reference.empty()) {
        std::cout << dist.table();
    } else {
        auto ref_in = open_input(args.reference);
        std::array<double, 16> ref = gsyn::load_reference_distribution(ref_in);
        std::cout << dist.table(&ref);
    }
    std::cout << "total " << dist.total << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knowledge-base indexing, explanation-graph corpus synthesis and evaluation"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--seed", global.seed, "RNG seed for randomized subcommands");
    auto* workers_opt = app.add_option("--workers", global.workers, "worker thread count");
    app.add_option("--config", global.config_path, "JSON config file (flags take precedence)");
    auto* format_opt =
        app.add_option("--format", global.format, "output format (text|jsonl)")
            ->check(CLI::IsMember({"text", "jsonl"}));
    auto* seed_opt = app.get_option("--seed");

    IngestArgs ingest_args;
    auto* ingest_cmd = app.add_subcommand("ingest", "index a ConceptNet assertions dump");
    ingest_cmd->add_option("dump", ingest_args.dump, "assertions TSV (optionally gzipped)")
        ->required();
    ingest_cmd->add_option("-o,--out", ingest_args.out, "output index path")->required();
    ingest_cmd->add_option("--merge-map", ingest_args.merge_map,
                           "relation merge-map file (defaults built in)");
    ingest_cmd->add_option("--max-malformed", ingest_args.max_malformed,
                           "malformed-line budget before the dump is rejected");
    ingest_cmd->add_flag("--keep-degenerate", ingest_args.keep_degenerate,
                         "keep single-character and purely numeric concepts");

    CorpusArgs corpus_args;
    auto* corpus_cmd = app.add_subcommand("corpus", "synthesize a query/graph training corpus");
    corpus_cmd->add_option("index", corpus_args.index_path, "KB index file")->required();
    corpus_cmd->add_option("-o,--out", corpus_args.out, "output file (default: stdout)");
    auto* total_opt = corpus_cmd->add_option("--total", corpus_args.emit.total,
                                             "number of records to emit");
    corpus_cmd->add_option("--templates", corpus_args.templates,
                           "template bank file (defaults built in)");
    std::vector<double> mix_vals;
    auto* mix_opt = corpus_cmd->add_option("--mix", mix_vals,
                                           "difficulty mix proportions as EASY NORMAL HARD "
                                           "(default 1 1 1)")
                        ->expected(3);
    corpus_cmd->add_option("--min-triples", corpus_args.emit.params.min_triples);
    corpus_cmd->add_option("--max-triples", corpus_args.emit.params.max_triples);
    corpus_cmd->add_option("--max-retries", corpus_args.emit.params.max_retries);
    corpus_cmd->add_option("--ks-lo", corpus_args.emit.ks_ratio_lo,
                           "knowledge-source size ratio lower bound");
    corpus_cmd->add_option("--ks-hi", corpus_args.emit.ks_ratio_hi,
                           "knowledge-source size ratio upper bound");

    BaselineArgs baseline_args;
    auto* baseline_cmd =
        app.add_subcommand("baseline-corpus", "emit a link/tail-prediction baseline corpus");
    baseline_cmd->add_option("index", baseline_args.index_path, "KB index file")->required();
    baseline_cmd->add_option("-o,--out", baseline_args.out, "output file (default: stdout)");
    baseline_cmd->add_option("--task", baseline_args.task, "link|tail")->required();
    baseline_cmd->add_option("--total", baseline_args.cfg.total, "records to emit");

    ValidateArgs validate_args;
    auto* validate_cmd = app.add_subcommand("validate", "StCA-check a file of graphs");
    validate_cmd->add_option("graphs", validate_args.graphs, "id TAB graph per line")->required();
    validate_cmd->add_option("--sources", validate_args.sources,
                             "id TAB belief TAB argument per line")
        ->required();
    validate_cmd->add_option("--relations", validate_args.relations,
                             "relation vocabulary file (default: the 16 synthetic relations)");
    validate_cmd->add_option("--anchor-mode", validate_args.anchor_mode, "tokens|substring");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "score predictions against gold graphs");
    eval_cmd->add_option("--pred", eval_args.pred, "id TAB graph per line")->required();
    eval_cmd->add_option("--gold", eval_args.gold, "id TAB graph per line")->required();
    eval_cmd->add_option("--sources", eval_args.sources, "id TAB belief TAB argument per line")
        ->required();
    eval_cmd->add_option("--stance", eval_args.stance,
                         "id/bool stance-correctness file (default: all correct)");
    eval_cmd->add_option("--relations", eval_args.relations, "relation vocabulary file");
    eval_cmd->add_option("--details", eval_args.details, "per-instance line-JSON output file");
    eval_cmd->add_option("--sim", eval_args.sim, "edge similarity: token|exact");
    eval_cmd->add_option("--anchor-mode", eval_args.anchor_mode, "tokens|substring");

    StatsArgs stats_args;
    auto* stats_cmd = app.add_subcommand("stats", "relation distribution of an emitted corpus");
    stats_cmd->add_option("corpus", stats_args.corpus, "corpus file (text or jsonl)")->required();
    stats_cmd->add_option("--reference", stats_args.reference,
                          "reference 'relation percent' table for a delta column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*ingest_cmd) return run_ingest(ingest_args);
        if (*corpus_cmd) {
            if (mix_opt->count() > 0) {
                corpus_args.mix_easy = mix_vals[0];
                corpus_args.mix_normal = mix_vals[1];
                corpus_args.mix_hard = mix_vals[2];
            }
            if (!global.config_path.empty()) {
                CorpusArgs from_file = corpus_args;  // keep paths from flags
                apply_corpus_config(global.config_path, from_file);
                // Flags (and explicit globals) take precedence over the file.
                if (total_opt->count() == 0) corpus_args.emit.total = from_file.emit.total;
                if (seed_opt->count() == 0) global.seed = from_file.emit.seed;
                if (workers_opt->count() == 0) global.workers = from_file.emit.workers;
                if (format_opt->count() == 0)
                    corpus_args.emit.format = from_file.emit.format;
                if (mix_opt->count() == 0) {
                    corpus_args.mix_easy = from_file.mix_easy;
                    corpus_args.mix_normal = from_file.mix_normal;
                    corpus_args.mix_hard = from_file.mix_hard;
                }
                if (corpus_cmd->get_option("--min-triples")->count() == 0)
                    corpus_args.emit.params.min_triples = from_file.emit.params.min_triples;
                if (corpus_cmd->get_option("--max-triples")->count() == 0)
                    corpus_args.emit.params.max_triples = from_file.emit.params.max_triples;
                if (corpus_cmd->get_option("--max-retries")->count() == 0)
                    corpus_args.emit.params.max_retries = from_file.emit.params.max_retries;
                if (corpus_cmd->get_option("--ks-lo")->count() == 0)
                    corpus_args.emit.ks_ratio_lo = from_file.emit.ks_ratio_lo;
                if (corpus_cmd->get_option("--ks-hi")->count() == 0)
                    corpus_args.emit.ks_ratio_hi = from_file.emit.ks_ratio_hi;
                corpus_args.emit.params.branch_choices = from_file.emit.params.branch_choices;
                corpus_args.emit.max_record_attempts = from_file.emit.max_record_attempts;
                if (corpus_args.templates.empty()) corpus_args.templates = from_file.templates;
            }
            if (format_opt->count() > 0) corpus_args.emit.format = parse_format(global.format);
            corpus_args.emit.seed = global.seed;
            corpus_args.emit.workers = global.workers;
            return run_corpus(corpus_args);
        }
        if (*baseline_cmd) {
            baseline_args.cfg.seed = global.seed;
            baseline_args.cfg.format = parse_format(global.format);
            return run_baseline(baseline_args);
        }
        if (*validate_cmd) return run_validate(validate_args);
        if (*eval_cmd) return run_eval(eval_args);
        if (*stats_cmd) return run_stats(stats_args);
    } catch (const gsyn::Error& e) {
        log_line(std::string(gsyn::errc_name(e.code())) + ": " + e.what());
        return e.code() == gsyn::Errc::synthesis_exhausted ? kExitSynthesis : kExitInput;
    } catch (const std::exception& e) {
        log_line(e.what());
        return kExitInput;
    }
    return kExitInput;
}
