#include "iag/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace iag {

CyclicSchedule::CyclicSchedule(int m) : m_(m) {
  if (m < 1) throw std::invalid_argument("m must be positive");
}

void CyclicSchedule::refresh(long k, std::vector<int>& out) const {
  out.clear();
  out.push_back(static_cast<int>((k - 1) % m_));
}

FullRefreshSchedule::FullRefreshSchedule(int m) : m_(m) {
  if (m < 1) throw std::invalid_argument("m must be positive");
}

void FullRefreshSchedule::refresh(long, std::vector<int>& out) const {
  out.resize(static_cast<size_t>(m_));
  std::iota(out.begin(), out.end(), 0);
}

AdversarialSchedule::AdversarialSchedule(int m, int delay_bound,
                                         std::uint64_t seed)
    : m_(m), delay_bound_(delay_bound) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  if (delay_bound < m - 1)
    throw std::invalid_argument(
        "delay bound below m-1 cannot be covered by singleton refresh sets");
  perm_.resize(static_cast<size_t>(m));
  std::iota(perm_.begin(), perm_.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm_.begin(), perm_.end(), rng);
}

void AdversarialSchedule::refresh(long k, std::vector<int>& out) const {
  out.clear();
  const long slot = (k - 1) % (delay_bound_ + 1);
  const size_t j = slot < m_ ? static_cast<size_t>(slot)
                             : static_cast<size_t>(m_ - 1);
  out.push_back(perm_[j]);
}

std::optional<ScheduleViolation> validate_schedule(const Schedule& schedule,
                                                   long horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  const int m = schedule.num_components();
  const long bound = schedule.delay_bound();
  std::vector<long> tau(static_cast<size_t>(m), 0);
  std::vector<int> buf;
  for (long k = 1; k <= horizon; ++k) {
    schedule.refresh(k, buf);
    for (int i : buf) {
      if (i < 0 || i >= m)
        throw std::out_of_range("schedule produced an out-of-range index");
      tau[static_cast<size_t>(i)] = k;
    }
    for (int i = 0; i < m; ++i)
      if (tau[static_cast<size_t>(i)] < k - bound)
        return ScheduleViolation{k, i};
  }
  return std::nullopt;
}

}  // namespace iag
