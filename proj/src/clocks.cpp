#include "gcs/clocks.hpp"

#include "gcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace gcs {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<std::string> validate_schedule(const RateSchedule& s, double theta) {
  std::vector<std::string> out;
  if (s.segments.empty()) {
    out.emplace_back("empty rate schedule");
    return out;
  }
  if (s.segments.front().start != 0.0) out.push_back("first rate segment starts at " + num(s.segments.front().start));
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    const auto& seg = s.segments[i];
    if (i > 0 && !(seg.start > s.segments[i - 1].start)) {
      out.push_back("rate segment " + std::to_string(i) + " start " + num(seg.start) + " not increasing");
    }
    if (!(seg.rate >= 1.0 && seg.rate <= theta)) {
      out.push_back("rate segment " + std::to_string(i) + " rate " + num(seg.rate) + " outside [1, " + num(theta) + "]");
    }
  }
  return out;
}

RateSchedule constant_schedule(double rate) { return RateSchedule{{{0.0, rate}}, GeneratorKind::constant}; }

RateSchedule alternating_schedule(double theta, double period, bool start_high, double horizon) {
  if (!(period > 0.0)) throw ParameterError("alternating period must be positive");
  RateSchedule s{{}, GeneratorKind::alternating};
  bool high = start_high;
  for (std::size_t k = 0;; ++k) {
    const double start = static_cast<double>(k) * period;
    s.segments.push_back({start, high ? theta : 1.0});
    high = !high;
    if (start > horizon) break;
  }
  return s;
}

RateSchedule random_walk_schedule(double theta, double dwell, double step, double start_rate, double horizon,
                                  std::mt19937_64& rng) {
  if (!(dwell > 0.0)) throw ParameterError("random walk dwell must be positive");
  RateSchedule s{{}, GeneratorKind::random_walk};
  double rate = std::clamp(start_rate, 1.0, theta);
  for (std::size_t k = 0;; ++k) {
    const double start = static_cast<double>(k) * dwell;
    s.segments.push_back({start, rate});
    if (start > horizon) break;
    rate = std::clamp(rate + (2.0 * uniform01(rng) - 1.0) * step, 1.0, theta);
  }
  return s;
}

HardwareClock::HardwareClock(double initial_value, RateSchedule schedule) : schedule_(std::move(schedule)) {
  const auto& segs = schedule_.segments;
  if (segs.empty()) throw ParameterError("empty rate schedule");
  if (segs.front().start != 0.0) throw ParameterError("rate schedule must start at t = 0");
  prefix_.reserve(segs.size());
  prefix_.push_back(initial_value);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (!(segs[i].rate > 0.0)) throw ParameterError("rate segment " + std::to_string(i) + " has non-positive rate");
    if (i + 1 < segs.size()) {
      if (!(segs[i + 1].start > segs[i].start)) throw ParameterError("rate segment starts not increasing");
      prefix_.push_back(prefix_.back() + segs[i].rate * (segs[i + 1].start - segs[i].start));
    }
  }
}

std::size_t HardwareClock::segment_at(double t) const {
  const auto& segs = schedule_.segments;
  auto it = std::upper_bound(segs.begin(), segs.end(), t, [](double x, const RateSegment& s) { return x < s.start; });
  return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - segs.begin()) - 1));
}

double HardwareClock::value(double t) const {
  if (t < 0.0) throw ParameterError("negative real time " + num(t));
  const auto i = segment_at(t);
  const auto& seg = schedule_.segments[i];
  return prefix_[i] + seg.rate * (t - seg.start);
}

double HardwareClock::rate_at(double t) const { return schedule_.segments[segment_at(t)].rate; }

double HardwareClock::inverse(double h) const {
  if (h < prefix_.front()) throw ParameterError("hardware value " + num(h) + " below initial value");
  auto it = std::upper_bound(prefix_.begin(), prefix_.end(), h);
  const auto i = static_cast<std::size_t>((it - prefix_.begin()) - 1);
  const auto& seg = schedule_.segments[i];
  double t = seg.start + (h - prefix_[i]) / seg.rate;
  if (i + 1 < schedule_.segments.size()) t = std::min(t, schedule_.segments[i + 1].start);
  return t;
}

std::optional<double> HardwareClock::next_breakpoint(double t) const {
  const auto& segs = schedule_.segments;
  auto it = std::upper_bound(segs.begin(), segs.end(), t, [](double x, const RateSegment& s) { return x < s.start; });
  if (it == segs.end()) return std::nullopt;
  return it->start;
}

bool check_lipschitz(const HardwareClock& c, double t1, double t2, double theta) {
  const double dt = t2 - t1;
  const double dh = c.value(t2) - c.value(t1);
  const double tol = 1e-12 * std::max(1.0, std::abs(c.value(t2)));
  return dh >= dt - tol && dh <= theta * dt + tol;
}

double hw_value(const HardwareClock& c, double t) { return c.value(t); }

LogicalClock::LogicalClock(HardwareClock hardware, double mu, CorrectionSemantics semantics)
    : hw_(std::move(hardware)),
      mu_(mu),
      semantics_(semantics),
      start_value_{hw_.initial_value()},
      start_hw_{hw_.initial_value()} {
  if (!(mu >= 0.0)) throw ParameterError("correction factor mu must be non-negative");
}

std::size_t LogicalClock::segment_at(double t) const {
  auto it = std::upper_bound(log_.begin(), log_.end(), t,
                             [](double x, const CorrectionSegment& s) { return x < s.start; });
  return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - log_.begin()) - 1));
}

double LogicalClock::value_in(std::size_t seg, double t) const {
  const bool fast = log_[seg].mode == CorrectionMode::fast;
  const double dh = hw_.value(t) - start_hw_[seg];
  if (semantics_ == CorrectionSemantics::multiplicative) {
    return start_value_[seg] + (fast ? (1.0 + mu_) * dh : dh);
  }
  return start_value_[seg] + dh + (fast ? mu_ * (t - log_[seg].start) : 0.0);
}

double LogicalClock::rate_in(std::size_t seg, double t) const {
  const bool fast = log_[seg].mode == CorrectionMode::fast;
  const double r = hw_.rate_at(t);
  if (!fast) return r;
  return semantics_ == CorrectionSemantics::multiplicative ? (1.0 + mu_) * r : r + mu_;
}

double LogicalClock::value(double t) const {
  if (t < 0.0) throw ParameterError("negative real time " + num(t));
  return value_in(segment_at(t), t);
}

double LogicalClock::rate_at(double t) const { return rate_in(segment_at(t), t); }

CorrectionMode LogicalClock::mode_at(double t) const { return log_[segment_at(t)].mode; }

double LogicalClock::invert(double target) const {
  if (target < start_value_.front()) {
    throw ParameterError("logical target " + num(target) + " below initial value " + num(start_value_.front()));
  }
  auto it = std::upper_bound(start_value_.begin(), start_value_.end(), target);
  const auto c = static_cast<std::size_t>((it - start_value_.begin()) - 1);
  const double a = log_[c].start;
  const double b = c + 1 < log_.size() ? log_[c + 1].start : std::numeric_limits<double>::infinity();

  // Within the correction segment the rate only changes at hardware breakpoints.
  const auto& segs = hw_.schedule().segments;
  std::size_t lo = hw_.segment_at(a);
  std::size_t hi = std::isfinite(b) ? hw_.segment_at(b) : segs.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    const double s = std::max(a, segs[mid].start);
    if (s < b && value_in(c, s) <= target) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  const double t0 = std::max(a, segs[lo].start);
  double t = t0 + (target - value_in(c, t0)) / rate_in(c, t0);
  if (lo + 1 < segs.size()) t = std::min(t, segs[lo + 1].start);
  return std::min(t, b);
}

void LogicalClock::set_mode(double t, CorrectionMode mode) {
  if (t < log_.back().start) {
    throw InternalError("mode change at " + num(t) + " precedes last change at " + num(log_.back().start));
  }
  if (mode == log_.back().mode) return;
  if (t == log_.back().start && log_.size() > 1) {
    // Zero-length segment: overwrite, merging with the predecessor when modes match.
    if (log_[log_.size() - 2].mode == mode) {
      log_.pop_back();
      start_value_.pop_back();
      start_hw_.pop_back();
    } else {
      log_.back().mode = mode;
    }
    return;
  }
  if (t == log_.back().start) {
    log_.back().mode = mode;
    return;
  }
  const double v = value(t);
  const double h = hw_.value(t);
  log_.push_back({t, mode});
  start_value_.push_back(v);
  start_hw_.push_back(h);
}

double logical_value(const LogicalClock& c, double t) { return c.value(t); }
double invert_logical(const LogicalClock& c, double target) { return c.invert(target); }
void set_mode(LogicalClock& c, double t, CorrectionMode mode) { c.set_mode(t, mode); }

}  // namespace gcs
