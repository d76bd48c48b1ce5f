#include "lrsc/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lrsc {

RoundedRegion round_region(const SymMatrix& l, double threshold, double ambiguous_band) {
  if (ambiguous_band < 0.0) throw std::invalid_argument("round_region: negative band");
  const int n = l.order();
  RoundedRegion r;
  r.support = CoordSet(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = l(i, j);
      if (v > threshold) r.support.set(i, j, true);
      if (std::abs(v - threshold) <= ambiguous_band) ++r.ambiguous;
    }
  return r;
}

ExtractionResult extract_clusters(const CoordSet& support, int n) {
  ExtractionResult res;
  res.layout.n = n;

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (support.contains(i, j) != support.contains(j, i)) {
        std::ostringstream os;
        os << "support is asymmetric at (" << i << ", " << j << ")";
        res.error = os.str();
        return res;
      }

  // row i's support must be empty (background) or a clique containing i;
  // two nonempty rows must be identical or disjoint.
  std::vector<int> owner(n, -1);
  for (int i = 0; i < n; ++i) {
    if (owner[i] >= 0) continue;
    bool any = false;
    for (int j = 0; j < n && !any; ++j) any = support.contains(i, j);
    if (!any) continue;
    if (!support.contains(i, i)) {
      std::ostringstream os;
      os << "node " << i << " has support but is missing (" << i << ", " << i << ")";
      res.error = os.str();
      return res;
    }
    std::vector<int> members;
    for (int j = 0; j < n; ++j)
      if (support.contains(i, j)) members.push_back(j);
    for (int a : members)
      for (int b : members)
        if (!support.contains(a, b)) {
          std::ostringstream os;
          os << "cluster containing node " << i << " is not a clique: missing (" << a << ", "
             << b << ")";
          res.error = os.str();
          return res;
        }
    for (int a : members) {
      for (int j = 0; j < n; ++j) {
        bool in = std::binary_search(members.begin(), members.end(), j);
        if (support.contains(a, j) != in) {
          std::ostringstream os;
          os << "rows " << i << " and " << a << " disagree at column " << j;
          res.error = os.str();
          return res;
        }
      }
      if (owner[a] >= 0) {
        std::ostringstream os;
        os << "node " << a << " belongs to two clusters";
        res.error = os.str();
        return res;
      }
      owner[a] = static_cast<int>(res.layout.clusters.size());
    }
    res.layout.clusters.push_back(std::move(members));
  }
  res.layout = res.layout.canonical();
  res.ok = true;
  return res;
}

RecoveryOutcome score_recovery(const SymMatrix& l, const ClusterLayout& truth, double threshold,
                               double ambiguous_band) {
  truth.validate();
  if (l.order() != truth.n) throw std::invalid_argument("score_recovery: size mismatch");
  RoundedRegion rounded = round_region(l, threshold, ambiguous_band);
  CoordSet planted(truth.n, truth.n);
  for (const auto& cl : truth.clusters)
    for (int i : cl)
      for (int j : cl) planted.set(i, j, true);

  RecoveryOutcome out;
  out.ambiguous = rounded.ambiguous;
  for (int i = 0; i < truth.n; ++i)
    for (int j = 0; j < truth.n; ++j)
      if (rounded.support.contains(i, j) != planted.contains(i, j)) ++out.mismatch;
  out.exact = out.mismatch == 0;

  ExtractionResult ex = extract_clusters(rounded.support, truth.n);
  out.extraction_ok = ex.ok;
  if (ex.ok)
    out.recovered = ex.layout;
  else
    out.extraction_error = ex.error;
  return out;
}

}  // namespace lrsc
