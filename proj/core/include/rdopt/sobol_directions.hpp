#pragma once

// Joe-Kuo primitive polynomials and initial direction numbers for the
// Sobol generator. kSobolPoly[d] encodes the polynomial bits for axis d;
// kSobolInit holds the initial m-values for axis d at
// [kSobolInitOffset[d], kSobolInitOffset[d+1]). Axis 0 is the van der
// Corput radical inverse and carries no table entries.

namespace rdopt::detail {
extern const int kSobolMaxDim;
extern const unsigned kSobolPoly[];
extern const unsigned kSobolInit[];
extern const int kSobolInitOffset[];
}  // namespace rdopt::detail
