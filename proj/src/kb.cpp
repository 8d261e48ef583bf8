#include "gsyn/kb.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <ctime>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_set>

namespace gsyn {

uint64_t fnv1a64(const void* data, size_t size, uint64_t seed) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

namespace {

uint64_t fnv1a64_str(std::string_view s, uint64_t seed) {
    return fnv1a64(s.data(), s.size(), seed);
}

std::string_view trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// streambuf over a gzFile so gzip dumps stream without full inflation in
// memory. zlib reads plain files too, but we only use this for .gz input.
class GzBuf : public std::streambuf {
public:
    explicit GzBuf(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
        if (!file_) raise(Errc::io_error, "cannot open " + path);
        setg(buf_, buf_, buf_);
    }
    ~GzBuf() override {
        if (file_) gzclose(file_);
    }

protected:
    int_type underflow() override {
        if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
        int n = gzread(file_, buf_, sizeof(buf_));
        if (n <= 0) return traits_type::eof();
        setg(buf_, buf_, buf_ + n);
        return traits_type::to_int_type(*gptr());
    }

private:
    gzFile file_;
    char buf_[1 << 16];
};

bool looks_gzip(const std::string& path) {
    if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) return true;
    std::ifstream probe(path, std::ios::binary);
    unsigned char magic[2] = {0, 0};
    probe.read(reinterpret_cast<char*>(magic), 2);
    return probe.gcount() == 2 && magic[0] == 0x1F && magic[1] == 0x8B;
}

bool purely_numeric(std::string_view s) {
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '_') return false;
    return !s.empty();
}

struct TripleKey {
    uint32_t head, tail;
    uint16_t rel;
    bool operator==(const TripleKey& o) const {
        return head == o.head && tail == o.tail && rel == o.rel;
    }
};

struct TripleKeyHash {
    size_t operator()(const TripleKey& k) const {
        uint64_t v = (uint64_t(k.head) << 32) | k.tail;
        return splitmix64(v ^ (uint64_t(k.rel) << 48));
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// MergeMap

namespace {
// Default raw-relation mapping. RelatedTo carries no usable semantics for
// graph reasoning and is dropped; HasA is kept as the inverse of part_of.
const char* kDefaultMergeMap = R"(# raw_relation  target (DROP discards, ~target swaps head/tail)
RelatedTo DROP
IsA is_a
InstanceOf is_a
DefinedAs is_a
AtLocation at_location
LocatedNear at_location
PartOf part_of
HasA ~part_of
CapableOf capable_of
HasContext has_context
Desires desires
Antonym antonym
DistinctFrom antonym
UsedFor used_for
Causes causes
HasSubevent has_subevent
HasFirstSubevent has_subevent
HasLastSubevent has_subevent
HasPrerequisite has_subevent
HasProperty has_property
ReceivesAction receives_action
MadeOf made_of
NotDesires not_desires
CreatedBy created_by
NotCapableOf not_capable_of
Synonym DROP
FormOf DROP
DerivedFrom DROP
EtymologicallyDerivedFrom DROP
EtymologicallyRelatedTo DROP
SymbolOf DROP
SimilarTo DROP
MannerOf DROP
MotivatedByGoal DROP
ObstructedBy DROP
CausesDesire DROP
NotHasProperty DROP
Entails DROP
ExternalURL DROP
)";
}  // namespace

const MergeMap& MergeMap::defaults() {
    static const MergeMap map = [] {
        std::istringstream in(kDefaultMergeMap);
        MergeMap m = parse(in);
        m.validate();
        return m;
    }();
    return map;
}

MergeMap MergeMap::parse(std::istream& in) {
    MergeMap map;
    std::string line;
    uint64_t digest = 0xCBF29CE484222325ull;
    while (std::getline(in, line)) {
        std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        size_t ws = t.find_first_of(" \t");
        if (ws == std::string_view::npos)
            raise(Errc::parse_error, "merge map line needs two columns: " + std::string(t));
        std::string raw(trim(t.substr(0, ws)));
        std::string target(trim(t.substr(ws)));
        Entry e;
        if (target == "DROP") {
            e.drop = true;
        } else {
            if (!target.empty() && target.front() == '~') {
                e.invert = true;
                target.erase(0, 1);
            }
            if (!RelationSet::synthetic16().contains_surface(target))
                raise(Errc::parse_error, "merge map target not in vocabulary: " + target);
            e.target = RelationSet::synthetic16().find_surface(target)->name();
        }
        digest = fnv1a64_str(raw, digest);
        digest = fnv1a64_str("\x1f", digest);
        digest = fnv1a64_str(e.drop ? "DROP" : (e.invert ? "~" + e.target : e.target), digest);
        digest = fnv1a64_str("\n", digest);
        if (!map.entries_.emplace(std::move(raw), std::move(e)).second)
            raise(Errc::parse_error, "duplicate merge map entry");
    }
    if (map.entries_.empty()) raise(Errc::parse_error, "empty merge map");
    map.checksum_ = digest;
    return map;
}

MergeMap MergeMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open merge map: " + path);
    MergeMap m = parse(in);
    m.validate();
    return m;
}

const MergeMap::Entry* MergeMap::find(std::string_view raw) const {
    auto it = entries_.find(std::string(raw));
    if (it == entries_.end()) return nullptr;
    return &it->second;
}

void MergeMap::validate() const {
    auto it = entries_.find("RelatedTo");
    if (it == entries_.end() || !it->second.drop)
        raise(Errc::parse_error, "merge map must map RelatedTo to DROP");
    std::unordered_set<std::string> image;
    for (const auto& [raw, e] : entries_)
        if (!e.drop) image.insert(e.target);
    const auto& vocab = RelationSet::synthetic16();
    if (image.size() != vocab.size())
        raise(Errc::parse_error, "merge map image must cover the full 16-relation vocabulary");
    for (const auto& r : vocab.members())
        if (!image.count(r.name()))
            raise(Errc::parse_error, "merge map image missing relation: " + r.name());
}

// ---------------------------------------------------------------------------
// Ingestion

class IndexBuilder {
public:
    explicit IndexBuilder(const MergeMap& map) : map_(map) {}

    KbIndex::ConceptId intern(std::string text) {
        auto it = idx_.concept_ids_.find(text);
        if (it != idx_.concept_ids_.end()) return it->second;
        KbIndex::ConceptId id = static_cast<KbIndex::ConceptId>(idx_.concept_texts_.size());
        idx_.concept_ids_.emplace(text, id);
        idx_.concept_texts_.push_back(std::move(text));
        return id;
    }

    bool add_edge(KbIndex::ConceptId h, KbIndex::ConceptId t, uint16_t rel) {
        if (!seen_.insert(TripleKey{h, t, rel}).second) return false;
        idx_.edges_.push_back(KbIndex::Edge{h, t, rel});
        ++idx_.histogram_[rel];
        return true;
    }

    KbIndex finish(uint64_t source_checksum) {
        if (idx_.edges_.empty()) raise(Errc::empty_index, "no triples survived ingestion");
        size_t n = idx_.concept_texts_.size();
        std::vector<uint64_t> in_count(n, 0), out_count(n, 0);
        for (const auto& e : idx_.edges_) {
            ++out_count[e.head];
            ++in_count[e.tail];
        }
        idx_.in_offsets_.assign(n + 1, 0);
        idx_.out_offsets_.assign(n + 1, 0);
        for (size_t i = 0; i < n; ++i) {
            idx_.in_offsets_[i + 1] = idx_.in_offsets_[i] + in_count[i];
            idx_.out_offsets_[i + 1] = idx_.out_offsets_[i] + out_count[i];
        }
        idx_.in_ids_.resize(idx_.edges_.size());
        idx_.out_ids_.resize(idx_.edges_.size());
        std::vector<uint64_t> in_fill = idx_.in_offsets_, out_fill = idx_.out_offsets_;
        for (uint32_t ti = 0; ti < idx_.edges_.size(); ++ti) {
            const auto& e = idx_.edges_[ti];
            idx_.out_ids_[out_fill[e.head]++] = ti;
            idx_.in_ids_[in_fill[e.tail]++] = ti;
        }
        for (size_t c = 0; c < n; ++c)
            if (in_count[c] > 0) idx_.with_incoming_.push_back(static_cast<KbIndex::ConceptId>(c));

        idx_.source_checksum_ = source_checksum;
        idx_.mergemap_checksum_ = map_.checksum();
        idx_.build_unix_time_ = static_cast<uint64_t>(std::time(nullptr));
        idx_.structural_digest_ = compute_digest(idx_);
        return std::move(idx_);
    }

    // Restores persisted meta on a freshly rebuilt index (load path).
    static void set_meta(KbIndex& idx, uint64_t mergemap_checksum, uint64_t build_time) {
        idx.mergemap_checksum_ = mergemap_checksum;
        idx.build_unix_time_ = build_time;
        idx.structural_digest_ = compute_digest(idx);
    }

    static uint64_t compute_digest(const KbIndex& idx) {
        uint64_t d = 0xCBF29CE484222325ull;
        uint64_t counts[2] = {idx.concept_texts_.size(), idx.edges_.size()};
        d = fnv1a64(counts, sizeof(counts), d);
        for (const auto& text : idx.concept_texts_) {
            d = fnv1a64(text.data(), text.size(), d);
            d = fnv1a64("\0", 1, d);
        }
        for (const auto& e : idx.edges_) {
            uint32_t rec[3] = {e.head, e.tail, e.relation};
            d = fnv1a64(rec, sizeof(rec), d);
        }
        d = fnv1a64(idx.histogram_.data(), idx.histogram_.size() * sizeof(uint64_t), d);
        uint64_t meta[2] = {idx.source_checksum_, idx.mergemap_checksum_};
        d = fnv1a64(meta, sizeof(meta), d);
        return d;
    }

private:
    const MergeMap& map_;
    KbIndex idx_;
    std::unordered_set<TripleKey, TripleKeyHash> seen_;
};

namespace {

// Extracts the term from "/c/en/eating_quickly" or "/c/en/eat/v"; empty
// optional when the URI is not an English concept.
enum class UriKind { english, other_language, malformed };

UriKind classify_concept_uri(std::string_view uri, std::string_view* term) {
    if (uri.substr(0, 3) != "/c/") return UriKind::malformed;
    std::string_view rest = uri.substr(3);
    size_t slash = rest.find('/');
    if (slash == std::string_view::npos || slash == 0) return UriKind::malformed;
    std::string_view lang = rest.substr(0, slash);
    std::string_view t = rest.substr(slash + 1);
    size_t pos_sep = t.find('/');
    if (pos_sep != std::string_view::npos) t = t.substr(0, pos_sep);  // strip POS suffix
    if (t.empty()) return UriKind::malformed;
    if (lang != "en") return UriKind::other_language;
    *term = t;
    return UriKind::english;
}

}  // namespace

KbIndex ingest(std::istream& dump, const MergeMap& map, const IngestConfig& cfg,
               IngestReport* report) {
    IndexBuilder builder(map);
    IngestReport local;
    IngestReport& rep = report ? *report : local;
    rep = IngestReport{};

    uint64_t source_digest = 0xCBF29CE484222325ull;
    std::string line;
    while (std::getline(dump, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        source_digest = fnv1a64_str(line, source_digest);
        source_digest = fnv1a64_str("\n", source_digest);
        if (trim(line).empty()) continue;
        ++rep.lines;

        auto fail_line = [&] {
            ++rep.malformed;
            if (rep.malformed > cfg.max_malformed_lines)
                raise(Errc::malformed_dump_line,
                      "bad-line budget exceeded (" + std::to_string(rep.malformed) + " lines)");
        };

        // Columns: assertion URI, relation URI, start URI, end URI, JSON.
        std::string_view sv(line);
        std::string_view cols[4];
        size_t start = 0;
        int found = 0;
        for (int i = 0; i < 4; ++i) {
            size_t tab = sv.find('\t', start);
            if (i < 3 && tab == std::string_view::npos) break;
            cols[i] = (tab == std::string_view::npos) ? sv.substr(start) : sv.substr(start, tab - start);
            start = (tab == std::string_view::npos) ? sv.size() : tab + 1;
            ++found;
        }
        if (found < 4) {
            fail_line();
            continue;
        }

        std::string_view rel_uri = cols[1];
        if (rel_uri.substr(0, 3) != "/r/" || rel_uri.size() <= 3) {
            fail_line();
            continue;
        }
        std::string_view raw_rel = rel_uri.substr(3);

        std::string_view start_term, end_term;
        UriKind ks = classify_concept_uri(cols[2], &start_term);
        UriKind ke = classify_concept_uri(cols[3], &end_term);
        if (ks == UriKind::malformed || ke == UriKind::malformed) {
            fail_line();
            continue;
        }
        if (ks == UriKind::other_language || ke == UriKind::other_language) {
            ++rep.non_english;
            continue;
        }

        const MergeMap::Entry* entry = map.find(raw_rel);
        if (!entry) {
            ++rep.unknown_relation;
            continue;
        }
        if (entry->drop) {
            if (raw_rel == "RelatedTo")
                ++rep.related_to_dropped;
            else
                ++rep.merge_dropped;
            continue;
        }

        std::string head_text = normalize_concept_text(start_term);
        std::string tail_text = normalize_concept_text(end_term);
        if (entry->invert) std::swap(head_text, tail_text);
        if (head_text.empty() || tail_text.empty()) {
            fail_line();
            continue;
        }
        if (cfg.drop_degenerate_concepts &&
            (head_text.size() == 1 || tail_text.size() == 1 || purely_numeric(head_text) ||
             purely_numeric(tail_text))) {
            ++rep.degenerate_concepts;
            continue;
        }
        if (head_text == tail_text) {
            ++rep.self_loops;
            continue;
        }

        auto rel_idx = RelationSet::synthetic16().index_of_surface(entry->target);
        KbIndex::ConceptId h = builder.intern(std::move(head_text));
        KbIndex::ConceptId t = builder.intern(std::move(tail_text));
        if (builder.add_edge(h, t, static_cast<uint16_t>(*rel_idx)))
            ++rep.kept;
        else
            ++rep.duplicates;
    }

    return builder.finish(source_digest);
}

KbIndex ingest_file(const std::string& path, const MergeMap& map, const IngestConfig& cfg,
                    IngestReport* report) {
    if (looks_gzip(path)) {
        GzBuf buf(path);
        std::istream in(&buf);
        return ingest(in, map, cfg, report);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open dump: " + path);
    return ingest(in, map, cfg, report);
}

// ---------------------------------------------------------------------------
// KbIndex accessors

std::optional<KbIndex::ConceptId> KbIndex::find_concept(std::string_view normalized) const {
    auto it = concept_ids_.find(std::string(normalized));
    if (it == concept_ids_.end()) return std::nullopt;
    return it->second;
}

Concept KbIndex::concept_at(ConceptId id) const {
    return Concept::from_normalized(concept_texts_.at(id));
}

Triple KbIndex::materialize(TripleId id) const {
    const Edge& e = edges_.at(id);
    return Triple{concept_at(e.head), RelationSet::synthetic16().at(e.relation),
                  concept_at(e.tail)};
}

std::span<const KbIndex::TripleId> KbIndex::incoming_ids(ConceptId id) const {
    return {in_ids_.data() + in_offsets_.at(id),
            static_cast<size_t>(in_offsets_.at(id + 1) - in_offsets_.at(id))};
}

std::span<const KbIndex::TripleId> KbIndex::outgoing_ids(ConceptId id) const {
    return {out_ids_.data() + out_offsets_.at(id),
            static_cast<size_t>(out_offsets_.at(id + 1) - out_offsets_.at(id))};
}

std::vector<Triple> incoming(const KbIndex& index, const Concept& c) {
    auto id = index.find_concept(c.text());
    if (!id) raise(Errc::unknown_concept, c.text());
    std::vector<Triple> out;
    for (auto ti : index.incoming_ids(*id)) out.push_back(index.materialize(ti));
    return out;
}

std::vector<Triple> outgoing(const KbIndex& index, const Concept& c) {
    auto id = index.find_concept(c.text());
    if (!id) raise(Errc::unknown_concept, c.text());
    std::vector<Triple> out;
    for (auto ti : index.outgoing_ids(*id)) out.push_back(index.materialize(ti));
    return out;
}

Concept sample_concept(const KbIndex& index, Rng& rng, const SampleConstraints& constraints) {
    if (constraints.min_incoming <= 1) {
        const auto& pool = index.concepts_with_incoming();
        if (pool.empty()) raise(Errc::no_qualifying_concept, "no concept with incoming triples");
        return index.concept_at(pool[rng.below(pool.size())]);
    }
    std::vector<KbIndex::ConceptId> pool;
    for (KbIndex::ConceptId c = 0; c < index.concept_count(); ++c)
        if (index.in_degree(c) >= constraints.min_incoming) pool.push_back(c);
    if (pool.empty())
        raise(Errc::no_qualifying_concept,
              "no concept with >= " + std::to_string(constraints.min_incoming) + " incoming");
    return index.concept_at(pool[rng.below(pool.size())]);
}

// ---------------------------------------------------------------------------
// Persistence. Layout (little-endian):
//   magic "GSKB" | u32 version | u64 structural_digest | u64 source_checksum
//   | u64 mergemap_checksum | u64 build_unix_time | u64 concept_count
//   | u64 edge_count | 16 x u64 histogram
//   | per concept: u32 length + bytes
//   | per edge: u32 head, u32 tail, u16 relation
//   | u64 file checksum (FNV-1a over everything before the trailer)
// Adjacency is rebuilt on load.

namespace {

constexpr char kMagic[4] = {'G', 'S', 'K', 'B'};
constexpr uint32_t kFormatVersion = 1;

class CheckedWriter {
public:
    explicit CheckedWriter(std::ostream& out) : out_(out) {}
    void write(const void* data, size_t size) {
        out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        digest_ = fnv1a64(data, size, digest_);
    }
    template <class T>
    void write_pod(const T& v) {
        write(&v, sizeof(T));
    }
    uint64_t digest() const { return digest_; }

private:
    std::ostream& out_;
    uint64_t digest_ = 0xCBF29CE484222325ull;
};

class CheckedReader {
public:
    explicit CheckedReader(std::istream& in) : in_(in) {}
    void read(void* data, size_t size) {
        in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
        if (static_cast<size_t>(in_.gcount()) != size)
            raise(Errc::checksum_mismatch, "index file truncated");
        digest_ = fnv1a64(data, size, digest_);
    }
    template <class T>
    T read_pod() {
        T v;
        read(&v, sizeof(T));
        return v;
    }
    uint64_t digest() const { return digest_; }

private:
    std::istream& in_;
    uint64_t digest_ = 0xCBF29CE484222325ull;
};

}  // namespace

void save_index(const KbIndex& index, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write index: " + path);
    CheckedWriter w(out);
    w.write(kMagic, sizeof(kMagic));
    w.write_pod(kFormatVersion);
    w.write_pod(index.structural_digest());
    w.write_pod(index.source_checksum());
    w.write_pod(index.mergemap_checksum());
    w.write_pod(index.build_unix_time());
    w.write_pod(static_cast<uint64_t>(index.concept_count()));
    w.write_pod(static_cast<uint64_t>(index.triple_count()));
    for (uint64_t h : index.relation_histogram()) w.write_pod(h);
    for (size_t i = 0; i < index.concept_count(); ++i) {
        const std::string& text = index.concept_text(static_cast<KbIndex::ConceptId>(i));
        w.write_pod(static_cast<uint32_t>(text.size()));
        w.write(text.data(), text.size());
    }
    for (size_t i = 0; i < index.triple_count(); ++i) {
        const auto& e = index.edge(static_cast<KbIndex::TripleId>(i));
        w.write_pod(e.head);
        w.write_pod(e.tail);
        w.write_pod(e.relation);
    }
    uint64_t digest = w.digest();
    out.write(reinterpret_cast<const char*>(&digest), sizeof(digest));
    if (!out) raise(Errc::io_error, "short write: " + path);
}

KbIndex load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open index: " + path);
    CheckedReader r(in);
    char magic[4];
    r.read(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        raise(Errc::version_mismatch, "not an index file: " + path);
    uint32_t version = r.read_pod<uint32_t>();
    if (version != kFormatVersion)
        raise(Errc::version_mismatch, "index format v" + std::to_string(version) +
                                          ", expected v" + std::to_string(kFormatVersion));

    uint64_t structural = r.read_pod<uint64_t>();
    uint64_t source = r.read_pod<uint64_t>();
    uint64_t mergemap = r.read_pod<uint64_t>();
    uint64_t build_time = r.read_pod<uint64_t>();
    uint64_t concept_count = r.read_pod<uint64_t>();
    uint64_t edge_count = r.read_pod<uint64_t>();
    std::array<uint64_t, 16> histogram;
    for (auto& h : histogram) h = r.read_pod<uint64_t>();

    MergeMap dummy = MergeMap::defaults();
    IndexBuilder builder(dummy);
    for (uint64_t i = 0; i < concept_count; ++i) {
        uint32_t len = r.read_pod<uint32_t>();
        if (len > (1u << 20)) raise(Errc::checksum_mismatch, "implausible concept length");
        std::string text(len, '\0');
        r.read(text.data(), len);
        builder.intern(std::move(text));
    }
    for (uint64_t i = 0; i < edge_count; ++i) {
        uint32_t h = r.read_pod<uint32_t>();
        uint32_t t = r.read_pod<uint32_t>();
        uint16_t rel = r.read_pod<uint16_t>();
        if (rel >= 16 || h >= concept_count || t >= concept_count)
            raise(Errc::checksum_mismatch, "edge out of range");
        builder.add_edge(h, t, rel);
    }
    uint64_t expected = r.digest();
    uint64_t trailer;
    in.read(reinterpret_cast<char*>(&trailer), sizeof(trailer));
    if (static_cast<size_t>(in.gcount()) != sizeof(trailer) || trailer != expected)
        raise(Errc::checksum_mismatch, "index checksum trailer mismatch: " + path);

    KbIndex idx = builder.finish(source);
    // finish() recomputed meta from inputs; restore the persisted values.
    IndexBuilder::set_meta(idx, mergemap, build_time);
    if (idx.structural_digest() != structural)
        raise(Errc::checksum_mismatch, "structural digest mismatch: " + path);
    if (idx.relation_histogram() != histogram)
        raise(Errc::checksum_mismatch, "histogram mismatch: " + path);
    return idx;
}

}  // namespace gsyn
