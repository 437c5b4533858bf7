#include "curbs/mmd_core.hpp"

#include <algorithm>
#include <string>

#include "curbs/errors.hpp"

namespace curbs {

namespace {

constexpr double kNegativeTolerance = 1e-12;

double clamp_tiny_negative(double v) {
  return (v < 0.0 && v >= -kNegativeTolerance) ? 0.0 : v;
}

// dw({c}, S) for c not in S, given |S| = m, s = sum_{x in S} k(c,x) and
// w = sum_{x,y in S} k(x,y).
double dw_singleton(double kcc, double s, double w, double m) {
  return (m / (m + 1.0)) * (kcc + w / (m * m) - 2.0 * s / m);
}

void check_bounds(const GramMatrix& gram, const ClusterView& v) {
  if (!v.empty() && v.indices().back() >= gram.size()) {
    throw PreconditionError("cluster index " + std::to_string(v.indices().back()) +
                            " out of range for Gram matrix of size " +
                            std::to_string(gram.size()));
  }
}

}  // namespace

ClusterView::ClusterView(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw PreconditionError("cluster view contains duplicate indices");
  }
}

ClusterView ClusterView::all(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return ClusterView(std::move(idx));
}

bool ClusterView::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

ClusterView merge_views(const ClusterView& a, const ClusterView& b) {
  std::vector<std::size_t> out;
  out.reserve(a.size() + b.size());
  std::merge(a.indices().begin(), a.indices().end(), b.indices().begin(), b.indices().end(),
             std::back_inserter(out));
  return ClusterView(std::move(out));
}

bool disjoint(const ClusterView& a, const ClusterView& b) {
  auto ia = a.indices().begin();
  auto ib = b.indices().begin();
  while (ia != a.indices().end() && ib != b.indices().end()) {
    if (*ia == *ib) return false;
    if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return true;
}

double kernel_block_sum(const GramMatrix& gram, const ClusterView& a, const ClusterView& b) {
  check_bounds(gram, a);
  check_bounds(gram, b);
  double sum = 0.0;
  for (std::size_t i : a.indices()) {
    const auto row = gram.row(i);
    for (std::size_t j : b.indices()) sum += row[j];
  }
  return sum;
}

double mmd_squared(const GramMatrix& gram, const ClusterView& a, const ClusterView& b) {
  if (a.empty() || b.empty()) throw PreconditionError("mmd_squared needs nonempty sets");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double v = kernel_block_sum(gram, a, a) / (na * na) +
                   kernel_block_sum(gram, b, b) / (nb * nb) -
                   2.0 * kernel_block_sum(gram, a, b) / (na * nb);
  return clamp_tiny_negative(v);
}

double dw(const GramMatrix& gram, const ClusterView& a, const ClusterView& b) {
  if (a.empty() || b.empty()) throw PreconditionError("dw needs nonempty sets");
  if (!disjoint(a, b)) throw PreconditionError("dw needs disjoint sets");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  return na * nb / (na + nb) * mmd_squared(gram, a, b);
}

TransferLedger::TransferLedger(const GramMatrix& gram, ClusterView working)
    : gram_(&gram), working_(std::move(working)) {
  if (working_.size() < 2) throw PreconditionError("ledger needs a working set of size >= 2");
  check_bounds(gram, working_);
  const std::size_t m = working_.size();
  in_c1_.assign(m, 0);
  s1_.assign(m, 0.0);
  s2_.assign(m, 0.0);
  for (std::size_t p = 0; p < m; ++p) {
    const auto row = gram.row(working_[p]);
    double s = 0.0;
    for (std::size_t q = 0; q < m; ++q) s += row[working_[q]];
    s2_[p] = s;
    w22_ += s;
  }
}

std::size_t TransferLedger::local(std::size_t index) const {
  const auto idx = working_.indices();
  const auto it = std::lower_bound(idx.begin(), idx.end(), index);
  if (it == idx.end() || *it != index) {
    throw PreconditionError("observation " + std::to_string(index) + " is not in the working set");
  }
  return static_cast<std::size_t>(it - idx.begin());
}

bool TransferLedger::in_c1(std::size_t index) const { return in_c1_[local(index)] != 0; }

ClusterView TransferLedger::c1() const {
  std::vector<std::size_t> out;
  out.reserve(n1_);
  for (std::size_t p = 0; p < working_.size(); ++p) {
    if (in_c1_[p]) out.push_back(working_[p]);
  }
  return ClusterView(std::move(out));
}

ClusterView TransferLedger::c2() const {
  std::vector<std::size_t> out;
  out.reserve(c2_size());
  for (std::size_t p = 0; p < working_.size(); ++p) {
    if (!in_c1_[p]) out.push_back(working_[p]);
  }
  return ClusterView(std::move(out));
}

double TransferLedger::dw_after_local(std::size_t pos) const {
  const std::size_t c = working_[pos];
  const double kcc = (*gram_)(c, c);
  const double n2 = static_cast<double>(c2_size());
  // dw(C2 - {c}, {c})
  const double gain = dw_singleton(kcc, s2_[pos] - kcc, w22_ - 2.0 * s2_[pos] + kcc, n2 - 1.0);
  if (n1_ == 0) return clamp_tiny_negative(gain);
  // dw(C1, {c})
  const double loss = dw_singleton(kcc, s1_[pos], w11_, static_cast<double>(n1_));
  return clamp_tiny_negative(*dw_ + gain - loss);
}

double TransferLedger::dw_after(std::size_t index) const {
  const std::size_t pos = local(index);
  if (in_c1_[pos]) throw PreconditionError("observation is already in C1");
  if (c2_size() < 2) throw PreconditionError("C2 would become empty");
  return dw_after_local(pos);
}

TransferLedger::Candidate TransferLedger::best_transfer() const {
  if (c2_size() < 2) throw PreconditionError("best_transfer needs |C2| >= 2");
  std::optional<Candidate> best;
  for (std::size_t p = 0; p < working_.size(); ++p) {
    if (in_c1_[p]) continue;
    const double v = dw_after_local(p);
    if (!best || v > best->dw) best = Candidate{working_[p], v};
  }
  return *best;
}

double TransferLedger::transfer(std::size_t index) {
  const std::size_t pos = local(index);
  if (in_c1_[pos]) throw PreconditionError("observation is already in C1");
  if (c2_size() < 2) throw PreconditionError("C2 would become empty");

  const double next = dw_after_local(pos);
  const std::size_t c = working_[pos];
  const double kcc = (*gram_)(c, c);
  w11_ += 2.0 * s1_[pos] + kcc;
  w22_ -= 2.0 * s2_[pos] - kcc;
  const auto row = gram_->row(c);
  for (std::size_t q = 0; q < working_.size(); ++q) {
    const double k = row[working_[q]];
    s1_[q] += k;
    s2_[q] -= k;
  }
  kernel_updates_ += 2 * working_.size();
  in_c1_[pos] = 1;
  ++n1_;
  dw_ = next;
  return next;
}

}  // namespace curbs
