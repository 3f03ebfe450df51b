#pragma once

#include <stdexcept>
#include <string>

namespace dp4 {

// Precondition violations use std::domain_error directly.

/// A bounded search (Dirichlet scan, residue enumeration) ran past its cap.
class bounded_search_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A local point is not known to enough p-adic digits to pin a square class.
class precision_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dp4
