#pragma once

#include <string>

#include "fsbp/operators.hpp"

namespace fsbp {

/// Writes the operator set in the plain-text `fsbp v1` format: a header
/// `fsbp v1 N=<n> space=<tag>` followed by labeled sections nodes, P, Q,
/// D1, D2, S, row-major, 17 significant digits.
void save_operator(const std::string& path, const FsbpOperatorSet& set);

/// Parses an `fsbp v1` file. Exactness spaces are rebuilt from the space tag
/// on the element spanned by the stored nodes; a "custom" tag loads with
/// empty spaces (identity checks still work, exactness checks are skipped).
FsbpOperatorSet load_operator(const std::string& path);

/// Formats one double with 17 significant digits (the lossless round-trip
/// format used for every numeric file this library writes).
std::string format_full(double v);

}  // namespace fsbp
