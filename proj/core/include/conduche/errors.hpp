#pragma once

#include <stdexcept>
#include <string>

namespace conduche {

enum class Errc {
    not_composable,
    unknown_morphism,
    unknown_object,
    not_a_group,
    not_a_poset,
    inconsistent_squares,
    dangling_edge,
    non_functorial_restriction,
    base_not_ore,
    not_a_cospan,
    no_completion,
    fiber_infinite,
    no_lift,
    multiple_lifts,
    bad_factorization,
    path_not_in_cylinder,
    incoherent_oracle,
    no_splitting_found,
    path_space_not_finite,
    orbit_budget_exceeded,
    dimension_mismatch,
    bad_input,
};

const char* errc_name(Errc c);

/// All library failures carry a machine-readable code plus a human message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace conduche
