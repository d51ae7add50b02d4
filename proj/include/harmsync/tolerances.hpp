#pragma once

#include <algorithm>

#include "harmsync/linalg.hpp"

namespace harmsync {

// Scale-aware thresholds. `norm` is the spectral norm of the matrix under test.

/// Smallest eigenvalue above -psd_tolerance counts as nonnegative.
inline double psd_tolerance(Index q, double norm) { return static_cast<double>(q) * kEps * norm; }

/// Eigenvalues above this are treated as strictly positive.
inline double eig_tolerance(double norm) { return 1e-9 * std::max(1.0, norm); }

/// Eigenvalues closer than this are one cluster.
inline double cluster_tolerance(double norm) { return 1e-8 * std::max(1.0, norm); }

/// Residual bound for eigenvector certificates.
inline double residual_tolerance(double norm) { return 1e-8 * std::max(1.0, norm); }

/// A vector with entries below zero_entry_tolerance * |v| has a zero entry.
inline constexpr double kZeroEntryTolerance = 1e-8;

/// Mean-removed norm below this means "parallel to the all-ones vector".
inline constexpr double kSubsetTolerance = 1e-6;

/// Minimum mean-removed norm of a certificate direction.
inline constexpr double kCertificateSpread = 1e-6;

/// Options shared by the rank decisions of the certification routines.
struct RankOptions {
  double abs_floor = 0.0;  // absolute singular-value floor, set by --tol
};

}  // namespace harmsync
