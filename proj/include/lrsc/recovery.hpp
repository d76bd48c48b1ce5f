#pragma once

#include <string>
#include <vector>

#include "lrsc/model.hpp"
#include "lrsc/sym_matrix.hpp"

namespace lrsc {

// Rounding and cluster extraction from a recovered low-rank matrix.
//
// An entry is "in region" when it exceeds the threshold. Entries within
// `ambiguous_band` of the threshold are counted separately so callers can
// tell a crisp 0/1 matrix from one that merely happens to round correctly.

struct RoundedRegion {
  CoordSet support;       // entries rounded to 1
  int ambiguous = 0;      // entries within the band around the threshold
};

RoundedRegion round_region(const SymMatrix& l, double threshold = 0.5,
                           double ambiguous_band = 0.05);

// Interpret a 0/1 support as a disjoint union of cliques plus isolated
// background nodes. Fails with a description naming the first offending
// node pair when the support is not a valid cluster pattern.
struct ExtractionResult {
  bool ok = false;
  ClusterLayout layout;   // canonical (clusters sorted by first member)
  std::string error;      // set when !ok
};

ExtractionResult extract_clusters(const CoordSet& support, int n);

struct RecoveryOutcome {
  bool exact = false;         // support matches the planted region exactly
  long long mismatch = 0;     // entries where rounded support != planted region
  int ambiguous = 0;          // near-threshold entries
  bool extraction_ok = false; // support was a valid cluster pattern
  ClusterLayout recovered;    // meaningful when extraction_ok
  std::string extraction_error;
};

RecoveryOutcome score_recovery(const SymMatrix& l, const ClusterLayout& truth,
                               double threshold = 0.5, double ambiguous_band = 0.05);

}  // namespace lrsc
