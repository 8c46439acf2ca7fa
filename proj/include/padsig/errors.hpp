#pragma once

#include <stdexcept>
#include <string>

namespace padsig {

// Base class for all library failures.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Requested operation needs an invertible element (e.g. reciprocal of a
// series whose leading coefficient vanishes, or 1/H on a supersingular curve).
struct not_a_unit_error : error {
    explicit not_a_unit_error(const std::string& what) : error(what) {}
};

// Known p-adic precision of an operand reached zero digits.
struct precision_error : error {
    explicit precision_error(const std::string& what) : error(what) {}
};

// Graded-ring addition with mismatched weights.
struct weight_error : error {
    explicit weight_error(const std::string& what) : error(what) {}
};

// Integration of a Laurent series with a nonzero t^{-1} coefficient.
struct residue_error : error {
    explicit residue_error(const std::string& what) : error(what) {}
};

// A value that must be p-integral at certified precision is not.
struct integrality_error : error {
    explicit integrality_error(const std::string& what) : error(what) {}
};

// An overdetermined reconstruction left a nonzero residual.
struct consistency_error : error {
    explicit consistency_error(const std::string& what) : error(what) {}
};

// Series access beyond the stored truncation, or an inner order too low
// for the requested composition.
struct order_error : error {
    explicit order_error(const std::string& what) : error(what) {}
};

// Command-line / job configuration problems.
struct config_error : error {
    explicit config_error(const std::string& what) : error(what) {}
};

} // namespace padsig
