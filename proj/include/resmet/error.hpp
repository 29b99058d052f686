#pragma once

#include <stdexcept>
#include <string>

namespace resmet {

// Every failure the library reports, as a stable machine-readable code.
enum class Errc {
    // numeric
    backend_mismatch,
    dimension_mismatch,
    singular_matrix,
    division_by_zero,
    parse_error,
    // metric validation
    not_symmetric,
    nonzero_diagonal,
    non_positive_off_diagonal,
    triangle_violation,
    too_small,
    unknown_vertex,
    unknown_family,
    bad_parameter,
    // graphs
    self_loop,
    negative_weight,
    duplicate_edge,
    isolated_vertex,
    disconnected,
    same_vertex,
    missing_value,
    disconnects,
    // limits / walks
    not_a_resistance_metric,
    insufficient_data,
    p_equals_one,
    condition_c_fails,
    recurrence_not_asserted,
    // io
    io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace resmet
