#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdopt/design_space.hpp"

namespace rdopt {

enum class RecordTag { doe, perturbation, external };

const char* tag_name(RecordTag t);
RecordTag tag_from_name(const std::string& s);

struct EvaluationRecord {
  Vec site;        // internal units
  double value = 0.0;
  int iteration = 0;
  RecordTag tag = RecordTag::doe;
};

struct NNResult {
  std::size_t index = 0;
  double dist2 = 0.0;
};

// Append-only evaluation store serving nearest-neighbor lookups, i.e.
// the piecewise-constant interpolant over the Voronoi cells of the
// sites. Distances are Euclidean in internal units with wrapped
// differences on periodic axes. Ties go to the lowest insertion index,
// which keeps runs deterministic. The k-d tree is rebuilt lazily on the
// first query after a batch of inserts.
class NNIndex {
 public:
  explicit NNIndex(const DesignSpace& space);

  void insert(EvaluationRecord record);
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const EvaluationRecord& record(std::size_t i) const { return records_[i]; }

  // Nearest site to x (internal units). Requires a non-empty index.
  NNResult nearest(const double* x) const;
  NNResult nearest(const Vec& x) const { return nearest(x.data()); }

  double nn_predict(const double* x) const {
    return records_[nearest(x).index].value;
  }
  double nn_predict(const Vec& x) const { return nn_predict(x.data()); }

  struct QueryResult {
    Vec site;
    double value;
    double distance;
  };
  QueryResult nn_query(const Vec& x) const;

  // Brute-force reference answer; the tree must agree with it exactly.
  NNResult nearest_linear(const double* x) const;

  // Force the lazy rebuild now (useful before concurrent read phases).
  void prepare() const;

  double min_value() const;
  double max_value() const;

 private:
  struct Node {
    std::int32_t left = -1, right = -1;
    std::int32_t begin = 0, end = 0;  // leaf range into order_
    std::int32_t axis = -1;
    Vec box_lo, box_hi;
  };

  double point_dist2(const double* x, const double* site) const;
  double box_dist2(const double* x, const Node& node) const;
  std::int32_t build(std::int32_t begin, std::int32_t end);
  void search(const double* x, std::int32_t node_id, NNResult& best) const;

  const DesignSpace* space_;
  int d_;
  std::vector<EvaluationRecord> records_;
  std::vector<double> sites_;  // flattened, records_ order

  mutable bool dirty_ = true;
  mutable std::vector<Node> nodes_;
  mutable std::vector<std::int32_t> order_;
  mutable std::int32_t root_ = -1;
};

}  // namespace rdopt
