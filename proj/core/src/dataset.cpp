#include "rdopt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rdopt {

const char* tag_name(RecordTag t) {
  switch (t) {
    case RecordTag::doe: return "doe";
    case RecordTag::perturbation: return "perturbation";
    case RecordTag::external: return "external";
  }
  return "doe";
}

RecordTag tag_from_name(const std::string& s) {
  if (s == "doe") return RecordTag::doe;
  if (s == "perturbation") return RecordTag::perturbation;
  if (s == "external") return RecordTag::external;
  throw ConfigError("unknown record tag: " + s);
}

NNIndex::NNIndex(const DesignSpace& space) : space_(&space), d_(space.dim()) {}

void NNIndex::insert(EvaluationRecord record) {
  if (static_cast<int>(record.site.size()) != d_)
    throw ConfigError("record dimension mismatch");
  if (!std::isfinite(record.value))
    throw EvalError("refusing to insert non-finite evaluation value");
  for (int i = 0; i < d_; ++i)
    record.site[i] = space_->wrap(i, record.site[i]);
  sites_.insert(sites_.end(), record.site.begin(), record.site.end());
  records_.push_back(std::move(record));
  dirty_ = true;
}

double NNIndex::point_dist2(const double* x, const double* site) const {
  double acc = 0.0;
  for (int i = 0; i < d_; ++i) {
    double d = space_->axis_distance(i, x[i], site[i]);
    acc += d * d;
  }
  return acc;
}

double NNIndex::box_dist2(const double* x, const Node& node) const {
  double acc = 0.0;
  for (int i = 0; i < d_; ++i) {
    double v = x[i], lo = node.box_lo[i], hi = node.box_hi[i];
    if (!space_->periodic(i)) {
      double d = v < lo ? lo - v : (v > hi ? v - hi : 0.0);
      acc += d * d;
    } else {
      double w = space_->wrap(i, v);
      if (w >= lo && w <= hi) continue;
      double dlo = space_->axis_distance(i, w, lo);
      double dhi = space_->axis_distance(i, w, hi);
      double d = std::min(std::fabs(dlo), std::fabs(dhi));
      acc += d * d;
    }
  }
  return acc;
}

std::int32_t NNIndex::build(std::int32_t begin, std::int32_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  node.box_lo.assign(d_, std::numeric_limits<double>::infinity());
  node.box_hi.assign(d_, -std::numeric_limits<double>::infinity());
  for (std::int32_t k = begin; k < end; ++k) {
    const double* s = sites_.data() + static_cast<std::size_t>(order_[k]) * d_;
    for (int i = 0; i < d_; ++i) {
      node.box_lo[i] = std::min(node.box_lo[i], s[i]);
      node.box_hi[i] = std::max(node.box_hi[i], s[i]);
    }
  }
  const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= 8) return id;

  int axis = 0;
  double widest = -1.0;
  for (int i = 0; i < d_; ++i) {
    double w = nodes_[id].box_hi[i] - nodes_[id].box_lo[i];
    if (w > widest) { widest = w; axis = i; }
  }
  if (widest <= 0.0) return id;  // all sites coincide, keep as leaf

  std::int32_t mid = (begin + end) / 2;
  const double* base = sites_.data();
  const int d = d_;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [base, d, axis](std::int32_t a, std::int32_t b) {
                     double va = base[static_cast<std::size_t>(a) * d + axis];
                     double vb = base[static_cast<std::size_t>(b) * d + axis];
                     if (va != vb) return va < vb;
                     return a < b;
                   });
  nodes_[id].axis = axis;
  std::int32_t l = build(begin, mid);
  std::int32_t r = build(mid, end);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

void NNIndex::prepare() const {
  if (!dirty_) return;
  nodes_.clear();
  order_.resize(records_.size());
  for (std::size_t i = 0; i < order_.size(); ++i)
    order_[i] = static_cast<std::int32_t>(i);
  root_ = records_.empty() ? -1
                           : const_cast<NNIndex*>(this)->build(
                                 0, static_cast<std::int32_t>(order_.size()));
  dirty_ = false;
}

void NNIndex::search(const double* x, std::int32_t node_id, NNResult& best) const {
  const Node& node = nodes_[node_id];
  if (node.left < 0) {
    for (std::int32_t k = node.begin; k < node.end; ++k) {
      std::int32_t idx = order_[k];
      double d2 = point_dist2(x, sites_.data() + static_cast<std::size_t>(idx) * d_);
      if (d2 < best.dist2 ||
          (d2 == best.dist2 && static_cast<std::size_t>(idx) < best.index)) {
        best.dist2 = d2;
        best.index = static_cast<std::size_t>(idx);
      }
    }
    return;
  }
  double dl = box_dist2(x, nodes_[node.left]);
  double dr = box_dist2(x, nodes_[node.right]);
  std::int32_t first = node.left, second = node.right;
  double dfirst = dl, dsecond = dr;
  if (dr < dl) {
    std::swap(first, second);
    std::swap(dfirst, dsecond);
  }
  // <= so equidistant boxes are still visited: the tie rule needs to see
  // every site at the minimal distance.
  if (dfirst <= best.dist2) search(x, first, best);
  if (dsecond <= best.dist2) search(x, second, best);
}

NNResult NNIndex::nearest(const double* x) const {
  if (records_.empty()) throw EvalError("nearest neighbor query on empty index");
  prepare();
  NNResult best;
  best.index = records_.size();
  best.dist2 = std::numeric_limits<double>::infinity();
  search(x, root_, best);
  return best;
}

NNResult NNIndex::nearest_linear(const double* x) const {
  if (records_.empty()) throw EvalError("nearest neighbor query on empty index");
  NNResult best;
  best.index = 0;
  best.dist2 = point_dist2(x, sites_.data());
  for (std::size_t i = 1; i < records_.size(); ++i) {
    double d2 = point_dist2(x, sites_.data() + i * d_);
    if (d2 < best.dist2) {
      best.dist2 = d2;
      best.index = i;
    }
  }
  return best;
}

NNIndex::QueryResult NNIndex::nn_query(const Vec& x) const {
  NNResult r = nearest(x);
  return {records_[r.index].site, records_[r.index].value, std::sqrt(r.dist2)};
}

double NNIndex::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : records_) m = std::min(m, r.value);
  return m;
}

double NNIndex::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : records_) m = std::max(m, r.value);
  return m;
}

}  // namespace rdopt
