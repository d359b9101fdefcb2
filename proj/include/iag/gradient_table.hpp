#pragma once

#include <vector>

#include "iag/problem.hpp"

namespace iag {

/// Stored component gradients with their sample times and the maintained
/// aggregate sum. refresh() updates the aggregate incrementally (subtract the
/// old column, add the new one); every kResyncInterval refreshes the aggregate
/// is rebuilt from the stored columns so the incremental sum cannot drift on
/// long runs.
class GradientTable {
 public:
  GradientTable(const Problem& problem, const Vector& x0);

  /// Re-evaluate component i at x, stamping sample time t.
  void refresh(const Problem& problem, int i, const Vector& x, long t);

  const Vector& aggregate() const { return aggregate_; }
  long sample_time(int i) const;
  int size() const { return static_cast<int>(tau_.size()); }

  /// Plain index-order sum of the stored columns; consistency oracle for the
  /// incrementally maintained aggregate.
  Vector recompute_aggregate() const;

  static constexpr int kResyncInterval = 128;

 private:
  Matrix stored_;  // n x m, column i = grad f_i at its sample time
  std::vector<long> tau_;
  Vector aggregate_;
  int refreshes_since_sync_ = 0;
};

}  // namespace iag
