#pragma once
// Shared fixture constants: the worked three-triple example (gold
// serialization plus per-difficulty query strings), the baseline prompt
// sample, and the published relation-frequency reference table.

#include <array>
#include <string>

#include "gsyn/kb.hpp"

namespace gsyn_test {

// Instance seed reproducing the worked example end to end on the
// eating_dump.tsv index (frozen by the "scan for fixture seed" case in
// test_synth.cpp; run it with --no-skip to re-derive).
inline constexpr uint64_t kEatingSeed = 301268;

inline constexpr const char* kGoldPipe =
    "eating_quickly : causes : eating_too_much | "
    "confetti : usedfor : celebrating | "
    "celebrating : hassubevent : eating_too_much";

inline constexpr const char* kEasyQuery =
    "[ANSWER] is a result of eating_quickly and confetti is used for [I_E] "
    "then [ANSWER] is a subevent of [I_E] ?";

inline constexpr const char* kNormalQuery =
    "What eating_quickly causes and confetti is used for then is a subevent of ?";

inline constexpr const char* kHardQuery =
    "What eating_quickly is a result of with confetti ?";

inline constexpr const char* kSourcePrefix = "eating_quickly | confetti";

inline constexpr const char* kTailPromptInput = "predict tail: attention | causes";
inline constexpr const char* kTailPromptTarget = "make_people_laugh";

// Published overall relation shares (percent), in synthetic16 order.
inline constexpr std::array<double, 16> kReferenceShares = {
    19.70, 12.55, 4.67, 5.91, 3.81, 1.31, 12.91, 10.19,
    10.35, 13.32, 2.61, 1.14, 0.38, 0.91, 0.16, 0.08,
};

inline std::string data_path(const std::string& name) {
    return std::string(GSYN_TEST_DATA_DIR) + "/" + name;
}

inline gsyn::KbIndex load_eating_index() {
    return gsyn::ingest_file(data_path("eating_dump.tsv"), gsyn::MergeMap::defaults(), {},
                             nullptr);
}

inline gsyn::KbIndex load_mini_index() {
    return gsyn::ingest_file(data_path("conceptnet_mini.tsv"), gsyn::MergeMap::defaults(), {},
                             nullptr);
}

}  // namespace gsyn_test
