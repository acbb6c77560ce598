#pragma once

#include <stdexcept>
#include <string>

namespace sasq {

// Error taxonomy shared by all modules.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds a hard simulator bound (qubit count, oracle size).
struct capacity_error : error {
    explicit capacity_error(const std::string& what) : error(what) {}
};

// Inconsistent shapes, indices, or preconditions.
struct structural_error : error {
    explicit structural_error(const std::string& what) : error(what) {}
};

// Input that is valid in shape but degenerate in value (e.g. a zero-norm token).
struct degenerate_input_error : error {
    explicit degenerate_input_error(const std::string& what) : error(what) {}
};

// Malformed external data: IDX files, checkpoints, config files.
struct format_error : error {
    explicit format_error(const std::string& what) : error(what) {}
};

// A numerical consistency check failed (e.g. imaginary residue above tolerance).
struct numeric_error : error {
    explicit numeric_error(const std::string& what) : error(what) {}
};

}  // namespace sasq
