// Error taxonomy shared by the core modules and the C API boundary.
#pragma once

#include <stdexcept>
#include <string>

namespace dtsim {

enum class Errc {
    invalid_argument,
    bad_magic,
    truncated,
    non_finite,
    no_coverage,
    degenerate_target,
    zero_vector,
    dimension_mismatch,
    bad_config,
    parse_error,
    io_error,
    runtime,
};

class DtError : public std::runtime_error {
public:
    DtError(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw DtError(code, what);
}

inline void require(bool ok, Errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

} // namespace dtsim
