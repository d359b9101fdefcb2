#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace iag {

/// Which component gradients are re-evaluated at each iteration k >= 1.
/// A schedule is valid when every index appears in at least one refresh set of
/// any K+1 consecutive iterations, which keeps all sample-time delays <= K
/// given that every index starts fresh at time 0.
class Schedule {
 public:
  virtual ~Schedule() = default;

  virtual int num_components() const = 0;
  virtual int delay_bound() const = 0;  // K
  virtual void refresh(long k, std::vector<int>& out) const = 0;
};

/// Component (k-1) mod m at step k; K = m-1. The original deterministic
/// aggregated-gradient order.
class CyclicSchedule final : public Schedule {
 public:
  explicit CyclicSchedule(int m);
  int num_components() const override { return m_; }
  int delay_bound() const override { return m_ - 1; }
  void refresh(long k, std::vector<int>& out) const override;

 private:
  int m_;
};

/// Every component at every step; K = 0. Makes the aggregated iteration
/// coincide with plain gradient descent.
class FullRefreshSchedule final : public Schedule {
 public:
  explicit FullRefreshSchedule(int m);
  int num_components() const override { return m_; }
  int delay_bound() const override { return 0; }
  void refresh(long k, std::vector<int>& out) const override;

 private:
  int m_;
};

/// Worst-case bounded-delay schedule. A seeded permutation fixes one slot per
/// index inside each window of K+1 steps, so all indices but one go the
/// maximal K+1 steps between refreshes; the last index of the permutation
/// fills the remaining slots, keeping every refresh set nonempty. Requires
/// K >= m-1: fewer slots than indices cannot be covered by singleton sets.
class AdversarialSchedule final : public Schedule {
 public:
  AdversarialSchedule(int m, int delay_bound, std::uint64_t seed);
  int num_components() const override { return m_; }
  int delay_bound() const override { return delay_bound_; }
  void refresh(long k, std::vector<int>& out) const override;

 private:
  int m_;
  int delay_bound_;
  std::vector<int> perm_;
};

struct ScheduleViolation {
  long k = 0;
  int index = 0;
};

/// Simulates the sample times over iterations [1, horizon]; returns the first
/// (k, i) whose delay exceeds the schedule's bound, or nullopt when none does.
std::optional<ScheduleViolation> validate_schedule(const Schedule& schedule,
                                                   long horizon);

}  // namespace iag
