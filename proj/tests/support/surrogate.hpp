#pragma once
// Deterministic ConceptNet-style assertion dump for large-scale tests: the
// canonical-edge relation mix follows the published overall distribution of
// the source KB, plus realistic noise (relatedTo, non-English, droppable
// relations, duplicates, self-loops, degenerate concepts).

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

namespace gsyn_test {

struct SurrogateSpec {
    size_t concepts = 30000;
    size_t edges = 180000;     // canonical 16-relation edges
    size_t related_to = 6000;  // dropped by the merge map
    size_t non_english = 2000;
    size_t merge_dropped = 1500;  // Synonym / FormOf lines
    size_t duplicates = 200;      // exact repeats of canonical lines
    size_t self_loops = 50;
    size_t degenerate = 40;  // single-character / numeric concepts
    uint64_t seed = 0x5EEDF00DULL;
};

// Percentage share per canonical relation (synthetic16 order) used for the
// edge quota.
const std::array<double, 16>& surrogate_shares();

void write_surrogate_dump(const std::string& path, const SurrogateSpec& spec = {});

}  // namespace gsyn_test
