#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gsyn/kb.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using namespace gsyn_test;

namespace {

const std::string kScratch = "cli_scratch";

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(out);
    out << text;
}

RunResult run(const std::string& args) {
    fs::create_directories(kScratch);
    static int counter = 0;
    std::string out_path = kScratch + "/out_" + std::to_string(counter) + ".txt";
    std::string err_path = kScratch + "/err_" + std::to_string(counter) + ".txt";
    ++counter;
    std::string cmd =
        std::string(GSYN_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
    int status = std::system(cmd.c_str());
    RunResult r;
    if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

// Ingest the mini dump once; later cases reuse the resulting index.
std::string mini_index() {
    fs::create_directories(kScratch);
    std::string path = kScratch + "/mini.idx";
    if (!fs::exists(path))
        run("ingest " + data_path("conceptnet_mini.tsv") + " -o " + path);
    return path;
}

size_t line_count(const std::string& text) {
    size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

std::string last_line(const std::string& text) {
    std::istringstream in(text);
    std::string line, last;
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    return last;
}

void write_validate_fixture(const std::string& graphs_path, const std::string& sources_path) {
    spit(graphs_path,
         "0\tvoting : causes : problems | money : usedfor : voting | "
         "problems : hassubevent : waste\n"
         "1\tapples : causes : oranges\n");
    spit(sources_path,
         "0\tVoting causes many problems.\tMoney is wasted on voting problems.\n"
         "1\tApples are fruit.\tOranges are fruit.\n");
}

}  // namespace

TEST_CASE("ingest builds a deterministic index") {
    std::string a = kScratch + "/ingest_a.idx";
    std::string b = kScratch + "/ingest_b.idx";
    RunResult first = run("ingest " + data_path("conceptnet_mini.tsv") + " -o " + a);
    RunResult second = run("ingest " + data_path("conceptnet_mini.tsv.gz") + " -o " + b);

    CHECK(first.code == 0);
    CHECK(second.code == 0);
    CHECK(first.out.find("lines            100") != std::string::npos);
    CHECK(first.out.find("kept             80") != std::string::npos);
    CHECK(first.out.find("duplicates       5") != std::string::npos);
    CHECK(first.out.find("related_to       12") != std::string::npos);
    CHECK(first.out.find("non_english      3") != std::string::npos);
    CHECK(first.out.find("triples          80") != std::string::npos);

    // the gzipped dump produces the identical structural checksum
    size_t pos_a = first.out.find("index_checksum");
    size_t pos_b = second.out.find("index_checksum");
    REQUIRE(pos_a != std::string::npos);
    REQUIRE(pos_b != std::string::npos);
    CHECK(first.out.substr(pos_a, 33) == second.out.substr(pos_b, 33));

    REQUIRE(fs::exists(a));
    gsyn::KbIndex idx = gsyn::load_index(a);
    CHECK(idx.triple_count() == 80);
}

TEST_CASE("ingest failures exit 2 and leave no partial index") {
    RunResult missing = run("ingest no_such_dump.tsv -o " + kScratch + "/nope.idx");
    CHECK(missing.code == 2);
    CHECK(missing.err.find("graphsynth:") != std::string::npos);
    CHECK(!fs::exists(kScratch + "/nope.idx"));

    std::string garbage = kScratch + "/garbage.tsv";
    spit(garbage, "junk one\njunk two\njunk three\n");
    std::string out = kScratch + "/garbage.idx";
    RunResult budget = run("ingest " + garbage + " -o " + out + " --max-malformed 2");
    CHECK(budget.code == 2);
    CHECK(!fs::exists(out));
    CHECK(!fs::exists(out + ".tmp"));
}

TEST_CASE("corpus output is deterministic and worker-invariant") {
    std::string idx = mini_index();
    REQUIRE(fs::exists(idx));

    std::string a = kScratch + "/corpus_a.txt";
    std::string b = kScratch + "/corpus_b.txt";
    std::string c = kScratch + "/corpus_c.txt";
    CHECK(run("corpus " + idx + " -o " + a + " --total 30 --seed 5").code == 0);
    CHECK(run("corpus " + idx + " -o " + b + " --total 30 --seed 5").code == 0);
    CHECK(run("corpus " + idx + " -o " + c + " --total 30 --seed 5 --workers 4").code == 0);

    std::string bytes = slurp(a);
    CHECK(bytes == slurp(b));
    CHECK(bytes == slurp(c));
    CHECK(line_count(bytes) == 30);

    std::string d = kScratch + "/corpus_d.txt";
    CHECK(run("corpus " + idx + " -o " + d + " --total 30 --seed 6").code == 0);
    CHECK(bytes != slurp(d));  // the seed matters
}

TEST_CASE("corpus writes data to stdout and the report to stderr") {
    std::string idx = mini_index();
    RunResult r = run("corpus " + idx + " --total 5 --seed 5");
    CHECK(r.code == 0);
    CHECK(line_count(r.out) == 5);
    CHECK(r.out.find('\t') != std::string::npos);
    CHECK(r.err.find("records   5") != std::string::npos);

    RunResult j = run("corpus " + idx + " --total 3 --seed 5 --format jsonl");
    CHECK(j.code == 0);
    REQUIRE(!j.out.empty());
    CHECK(j.out.front() == '{');
    CHECK(line_count(j.out) == 3);
}

TEST_CASE("corpus config file fills in unset flags") {
    std::string idx = mini_index();
    std::string cfg_path = kScratch + "/corpus_cfg.json";
    spit(cfg_path, "{\"total\": 8, \"seed\": 11, \"mix\": {\"easy\": 1, \"normal\": 0, "
                   "\"hard\": 0}}\n");

    std::string from_cfg = kScratch + "/cfg_out.txt";
    CHECK(run("corpus " + idx + " -o " + from_cfg + " --config " + cfg_path).code == 0);
    CHECK(line_count(slurp(from_cfg)) == 8);

    std::string from_flags = kScratch + "/flag_out.txt";
    CHECK(run("corpus " + idx + " -o " + from_flags + " --config " + cfg_path +
              " --total 4")
              .code == 0);
    CHECK(line_count(slurp(from_flags)) == 4);  // the flag wins over the file

    // same seed+mix from config == explicit flags
    std::string explicit_out = kScratch + "/explicit_out.txt";
    CHECK(run("corpus " + idx + " -o " + explicit_out +
              " --total 8 --seed 11 --mix 1 0 0")
              .code == 0);
    CHECK(slurp(explicit_out) == slurp(from_cfg));
}

TEST_CASE("corpus exhaustion exits 3") {
    std::string eating = kScratch + "/eating.idx";
    run("ingest " + data_path("eating_dump.tsv") + " -o " + eating);
    REQUIRE(fs::exists(eating));
    // the 13-edge fixture cannot grow an 8-triple graph
    RunResult r = run("corpus " + eating + " --total 1 --seed 1 --min-triples 8");
    CHECK(r.code == 3);
    CHECK(r.err.find("SynthesisExhausted") != std::string::npos);
}

TEST_CASE("baseline corpus emission") {
    std::string idx = mini_index();
    RunResult tails = run("baseline-corpus " + idx + " --task tail --total 5 --seed 2");
    CHECK(tails.code == 0);
    CHECK(line_count(tails.out) == 5);
    std::istringstream lines(tails.out);
    std::string line;
    while (std::getline(lines, line)) CHECK(line.rfind("predict tail: ", 0) == 0);

    CHECK(run("baseline-corpus " + idx + " --task juggle --total 5").code == 2);
}

TEST_CASE("validate scores a graphs file") {
    std::string graphs = kScratch + "/val_graphs.tsv";
    std::string sources = kScratch + "/val_sources.tsv";
    write_validate_fixture(graphs, sources);

    RunResult r = run("validate " + graphs + " --sources " + sources);
    CHECK(r.code == 0);
    CHECK(last_line(r.out) == "StCA 50.00");

    std::istringstream lines(r.out);
    std::string line;
    REQUIRE(std::getline(lines, line));
    nlohmann::json row0 = nlohmann::json::parse(line);
    CHECK(row0.at("id").get<uint64_t>() == 0);
    CHECK(row0.at("stca").get<bool>());
    REQUIRE(std::getline(lines, line));
    nlohmann::json row1 = nlohmann::json::parse(line);
    CHECK(!row1.at("stca").get<bool>());
    CHECK(!row1.at("checks").at("size_window").get<bool>());
    CHECK(!row1.at("diagnostics").empty());
}

TEST_CASE("validate rejects malformed inputs") {
    std::string graphs = kScratch + "/bad_graphs.tsv";
    std::string sources = kScratch + "/bad_sources.tsv";

    spit(graphs, "");
    spit(sources, "");
    CHECK(run("validate " + graphs + " --sources " + sources).code == 2);

    spit(graphs, "0 missing tab separator\n");
    spit(sources, "0\tbelief\targument\n");
    CHECK(run("validate " + graphs + " --sources " + sources).code == 2);

    spit(graphs, "0\ta : causes : b | b : isa : c | c : usedfor : d\n");
    spit(sources, "7\tbelief text\targument text\n");
    RunResult mismatch = run("validate " + graphs + " --sources " + sources);
    CHECK(mismatch.code == 2);
    CHECK(mismatch.err.find("AlignmentError") != std::string::npos);
}

TEST_CASE("eval scores identity predictions at the ceiling and bad stance at the floor") {
    std::string graphs = kScratch + "/eval_graphs.tsv";
    std::string sources = kScratch + "/eval_sources.tsv";
    write_validate_fixture(graphs, sources);

    std::string details = kScratch + "/eval_details.jsonl";
    RunResult r = run("eval --pred " + graphs + " --gold " + graphs + " --sources " + sources +
                      " --details " + details);
    CHECK(r.code == 0);
    CHECK(r.out.find("instances       2") != std::string::npos);
    CHECK(r.out.find("G-BS    1.0000") != std::string::npos);
    CHECK(r.out.find("GED     0.0000") != std::string::npos);
    CHECK(r.out.find("SeCA    n/a") != std::string::npos);
    CHECK(r.out.find("EA      n/a") != std::string::npos);
    CHECK(r.out.find("StCA    50.00") != std::string::npos);  // row 1 fails the size window

    REQUIRE(fs::exists(details));
    std::istringstream lines(slurp(details));
    std::string line;
    size_t rows = 0;
    while (std::getline(lines, line)) {
        nlohmann::json row = nlohmann::json::parse(line);
        CHECK(row.at("gbs").get<double>() == 1.0);
        CHECK(row.at("ged_norm").get<double>() == 0.0);
        ++rows;
    }
    CHECK(rows == 2);

    std::string stance = kScratch + "/eval_stance.txt";
    spit(stance, "0 0\n1 false\n");
    RunResult floor = run("eval --pred " + graphs + " --gold " + graphs + " --sources " +
                          sources + " --stance " + stance);
    CHECK(floor.code == 0);
    CHECK(floor.out.find("stance_correct  0") != std::string::npos);
    CHECK(floor.out.find("G-BS    0.0000") != std::string::npos);
    CHECK(floor.out.find("GED     1.0000") != std::string::npos);
    CHECK(floor.out.find("StCA    0.00") != std::string::npos);

    std::string partial_stance = kScratch + "/eval_stance_partial.txt";
    spit(partial_stance, "0 1\n");  // id 1 missing
    CHECK(run("eval --pred " + graphs + " --gold " + graphs + " --sources " + sources +
              " --stance " + partial_stance)
              .code == 2);
}

TEST_CASE("stats reports the corpus relation distribution") {
    std::string corpus = kScratch + "/stats_corpus.txt";
    spit(corpus,
         "in0\ta : causes : b | b : isa : c\n"
         "in1\tx : usedfor : y | y : causes : z\n");
    RunResult r = run("stats " + corpus);
    CHECK(r.code == 0);
    CHECK(r.out.find("causes") != std::string::npos);
    CHECK(r.out.find("50.00") != std::string::npos);
    CHECK(last_line(r.out) == "total 4");

    RunResult with_ref =
        run("stats " + corpus + " --reference " + data_path("reference_distribution.txt"));
    CHECK(with_ref.code == 0);
    CHECK(with_ref.out.find("delta") != std::string::npos);

    std::string broken = kScratch + "/stats_broken.txt";
    spit(broken, "in0\tnot a graph\n");
    RunResult bad = run("stats " + broken);
    CHECK(bad.code == 2);
    CHECK(bad.err.find("line 1") != std::string::npos);
}

TEST_CASE("usage errors and help") {
    CHECK(run("").code == 2);               // a subcommand is required
    CHECK(run("frobnicate").code == 2);     // unknown subcommand
    CHECK(run("--help").code == 0);
    CHECK(run("corpus").code == 2);         // missing required index argument
    RunResult help = run("--help");
    CHECK(help.out.find("ingest") != std::string::npos);
    CHECK(help.out.find("eval") != std::string::npos);
}
