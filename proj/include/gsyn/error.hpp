#pragma once
// Error codes shared across the library. Failure paths throw Error with a
// code so callers (and the CLI exit-code mapping) never match on strings.

#include <stdexcept>
#include <string>

namespace gsyn {

enum class Errc {
    malformed_triple,
    unknown_relation,
    empty_graph,
    cyclic_graph,
    disconnected_graph,
    malformed_dump_line,
    empty_index,
    version_mismatch,
    checksum_mismatch,
    io_error,
    unknown_concept,
    no_qualifying_concept,
    synthesis_exhausted,
    missing_template,
    size_limit_exceeded,
    alignment_error,
    parse_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace gsyn
