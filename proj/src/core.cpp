#include "robustlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace robustlab {

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::Real: return "real";
    case Domain::NonNegative: return "nonnegative";
    case Domain::Regression: return "regression";
  }
  return "?";
}

Domain parse_domain(std::string_view text) {
  if (text == "real") return Domain::Real;
  if (text == "nonnegative" || text == "nonneg") return Domain::NonNegative;
  if (text == "regression") return Domain::Regression;
  throw InvalidArgument("unknown domain '" + std::string(text) + "'");
}

Sample Sample::scalar(std::vector<double> values, Domain domain) {
  if (domain == Domain::Regression) {
    throw InvalidArgument("scalar sample cannot carry the regression domain tag");
  }
  if (values.empty()) throw InvalidArgument("sample must contain at least one observation");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("sample observations must be finite");
    if (domain == Domain::NonNegative && v < 0.0) {
      throw InvalidArgument("negative observation in a nonnegative sample");
    }
  }
  Sample s;
  s.domain_ = domain;
  s.values_ = std::move(values);
  return s;
}

Sample Sample::regression(std::vector<RegressionPair> pairs) {
  if (pairs.empty()) throw InvalidArgument("sample must contain at least one observation");
  for (const auto& p : pairs) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidArgument("sample observations must be finite");
    }
  }
  Sample s;
  s.domain_ = Domain::Regression;
  s.pairs_ = std::move(pairs);
  return s;
}

std::span<const double> Sample::values() const {
  if (is_regression()) throw InvalidArgument("regression sample has no scalar values");
  return values_;
}

std::span<const RegressionPair> Sample::pairs() const {
  if (!is_regression()) throw InvalidArgument("scalar sample has no regression pairs");
  return pairs_;
}

ContaminationMask::ContaminationMask(std::vector<bool> flags)
    : flags_(std::move(flags)),
      count_(static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), true))) {}

ContaminationMask ContaminationMask::first(std::size_t n, std::size_t s) {
  if (s > n) throw InvalidArgument("mask count exceeds sample size");
  std::vector<bool> flags(n, false);
  std::fill_n(flags.begin(), s, true);
  return ContaminationMask(std::move(flags));
}

ContaminationMask ContaminationMask::last(std::size_t n, std::size_t s) {
  if (s > n) throw InvalidArgument("mask count exceeds sample size");
  std::vector<bool> flags(n, false);
  std::fill(flags.end() - static_cast<std::ptrdiff_t>(s), flags.end(), true);
  return ContaminationMask(std::move(flags));
}

ContaminationMask ContaminationMask::random(std::size_t n, std::size_t s, std::uint64_t seed) {
  if (s > n) throw InvalidArgument("mask count exceeds sample size");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> flags(n, false);
  for (std::size_t i = 0; i < s; ++i) flags[order[i]] = true;
  return ContaminationMask(std::move(flags));
}

std::vector<std::size_t> ContaminationMask::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < flags_.size(); ++i) {
    if (flags_[i]) out.push_back(i);
  }
  return out;
}

ContaminationMask ContaminationMask::complement() const {
  std::vector<bool> flags(flags_.size());
  for (std::size_t i = 0; i < flags_.size(); ++i) flags[i] = !flags_[i];
  return ContaminationMask(std::move(flags));
}

std::size_t outlier_count(const ContaminationMask& mask) { return mask.count(); }

Sample contaminate(const Sample& clean, const Sample& outliers, const ContaminationMask& mask) {
  const std::size_t n = clean.size();
  if (outliers.size() != n || mask.size() != n) {
    throw InvalidArgument("contaminate: sample, outliers and mask must share length n");
  }
  if (outliers.domain() != clean.domain()) {
    throw InvalidArgument("contaminate: outlier sample violates the clean sample's domain tag");
  }
  if (clean.is_regression()) {
    std::vector<RegressionPair> out(clean.pairs().begin(), clean.pairs().end());
    auto ys = outliers.pairs();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) out[i] = ys[i];
    }
    return Sample::regression(std::move(out));
  }
  std::vector<double> out(clean.values().begin(), clean.values().end());
  auto ys = outliers.values();
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i]) out[i] = ys[i];
  }
  return Sample::scalar(std::move(out), clean.domain());
}

std::string_view to_string(PointClass c) {
  switch (c) {
    case PointClass::Interior: return "interior";
    case PointClass::Boundary: return "boundary";
    case PointClass::Exterior: return "exterior";
  }
  return "?";
}

ValueSpace ValueSpace::full_euclidean(std::size_t dimension) {
  if (dimension == 0) throw InvalidArgument("value space dimension must be positive");
  ValueSpace v;
  v.kind_ = Kind::FullEuclidean;
  v.dimension_ = dimension;
  return v;
}

ValueSpace ValueSpace::open_half_line(double lower) {
  ValueSpace v;
  v.kind_ = Kind::OpenHalfLine;
  v.lo_ = lower;
  return v;
}

ValueSpace ValueSpace::closed_half_line(double lower) {
  ValueSpace v;
  v.kind_ = Kind::ClosedHalfLine;
  v.lo_ = lower;
  return v;
}

ValueSpace ValueSpace::closed_interval(double lo, double hi) {
  if (!(lo < hi)) throw InvalidArgument("closed interval requires lo < hi");
  ValueSpace v;
  v.kind_ = Kind::ClosedInterval;
  v.lo_ = lo;
  v.hi_ = hi;
  return v;
}

ValueSpace ValueSpace::singleton(std::vector<double> point) {
  if (point.empty()) throw InvalidArgument("singleton value space needs a point");
  ValueSpace v;
  v.kind_ = Kind::Singleton;
  v.dimension_ = point.size();
  v.point_ = std::move(point);
  return v;
}

std::vector<std::vector<double>> ValueSpace::boundary() const {
  switch (kind_) {
    case Kind::FullEuclidean: return {};
    case Kind::OpenHalfLine:
    case Kind::ClosedHalfLine: return {{lo_}};
    case Kind::ClosedInterval: return {{lo_}, {hi_}};
    case Kind::Singleton: return {point_};
  }
  return {};
}

std::string_view to_string(ValueSpace::Kind k) {
  switch (k) {
    case ValueSpace::Kind::FullEuclidean: return "full-euclidean";
    case ValueSpace::Kind::OpenHalfLine: return "open-half-line";
    case ValueSpace::Kind::ClosedHalfLine: return "closed-half-line";
    case ValueSpace::Kind::ClosedInterval: return "closed-interval";
    case ValueSpace::Kind::Singleton: return "singleton";
  }
  return "?";
}

PointClass classify_point(std::span<const double> t, const ValueSpace& space, double tolerance) {
  if (t.size() != space.dimension()) {
    throw InvalidArgument("classify_point: dimension mismatch");
  }
  using Kind = ValueSpace::Kind;
  switch (space.kind()) {
    case Kind::FullEuclidean:
      return PointClass::Interior;
    case Kind::OpenHalfLine:
    case Kind::ClosedHalfLine: {
      const double v = t[0];
      if (std::abs(v - space.lower()) <= tolerance) return PointClass::Boundary;
      return v > space.lower() ? PointClass::Interior : PointClass::Exterior;
    }
    case Kind::ClosedInterval: {
      const double v = t[0];
      if (std::abs(v - space.lower()) <= tolerance || std::abs(v - space.upper()) <= tolerance) {
        return PointClass::Boundary;
      }
      return (v > space.lower() && v < space.upper()) ? PointClass::Interior : PointClass::Exterior;
    }
    case Kind::Singleton: {
      double dist = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        dist = std::max(dist, std::abs(t[i] - space.point()[i]));
      }
      return dist <= tolerance ? PointClass::Boundary : PointClass::Exterior;
    }
  }
  return PointClass::Exterior;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::BrokenDivergence: return "broken-divergence";
    case Outcome::BrokenBoundary: return "broken-boundary";
    case Outcome::BrokenConstantLimit: return "broken-constant-limit";
    case Outcome::BrokenXIndependentSet: return "broken-x-independent-set";
    case Outcome::NotBroken: return "not-broken";
    case Outcome::Undecided: return "undecided";
  }
  return "?";
}

bool is_broken(Outcome o) {
  return o == Outcome::BrokenDivergence || o == Outcome::BrokenBoundary ||
         o == Outcome::BrokenConstantLimit || o == Outcome::BrokenXIndependentSet;
}

}  // namespace robustlab
