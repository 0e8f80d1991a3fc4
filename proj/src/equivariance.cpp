#include "robustlab/equivariance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace robustlab {

GroupAction GroupAction::translate(double c) {
  if (!std::isfinite(c)) throw InvalidArgument("translation must be finite");
  return {Kind::Translate, 1.0, c};
}

GroupAction GroupAction::scale(double a) {
  if (!std::isfinite(a) || a == 0.0) throw InvalidArgument("scale factor must be finite and nonzero");
  return {Kind::Scale, a, 0.0};
}

GroupAction GroupAction::affine(double a, double b) {
  if (!std::isfinite(a) || a == 0.0 || !std::isfinite(b)) {
    throw InvalidArgument("affine map needs finite a != 0 and finite b");
  }
  return {Kind::Affine, a, b};
}

GroupAction GroupAction::x_scale(double c) {
  if (!std::isfinite(c) || c == 0.0) throw InvalidArgument("x-scale factor must be finite and nonzero");
  return {Kind::XScale, c, 0.0};
}

std::string GroupAction::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Translate: out << "translate(" << b_ << ")"; break;
    case Kind::Scale: out << "scale(" << a_ << ")"; break;
    case Kind::Affine: out << "affine(" << a_ << ", " << b_ << ")"; break;
    case Kind::XScale: out << "x-scale(" << a_ << ")"; break;
  }
  return out.str();
}

Sample apply_action(const GroupAction& g, const Sample& x) {
  if (g.kind() == GroupAction::Kind::XScale) {
    if (!x.is_regression()) throw InvalidArgument("x-scale acts only on regression samples");
    std::vector<RegressionPair> out(x.pairs().begin(), x.pairs().end());
    for (auto& p : out) p.x *= g.multiplier();
    return Sample::regression(std::move(out));
  }
  if (x.is_regression()) {
    throw InvalidArgument(g.describe() + " acts only on scalar samples");
  }
  std::vector<double> out(x.values().begin(), x.values().end());
  for (double& v : out) v = g.apply(v);
  return Sample::scalar(std::move(out), x.domain());
}

GroupAction invert_action(const GroupAction& g) {
  switch (g.kind()) {
    case GroupAction::Kind::Translate: return GroupAction::translate(-g.offset());
    case GroupAction::Kind::Scale: return GroupAction::scale(1.0 / g.multiplier());
    case GroupAction::Kind::Affine:
      return GroupAction::affine(1.0 / g.multiplier(), -g.offset() / g.multiplier());
    case GroupAction::Kind::XScale: return GroupAction::x_scale(1.0 / g.multiplier());
  }
  throw InvalidArgument("unknown action kind");
}

namespace {

double scaled_gap(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

double relative_gap(double lhs, double rhs) {
  const double denom = std::max(std::abs(lhs), std::abs(rhs));
  if (denom == 0.0) return 0.0;
  return std::abs(lhs - rhs) / denom;
}

std::size_t half_size(const Sample& x) {
  if (x.size() % 2 != 0) throw InvalidArgument("identity requires an even sample size n = 2k");
  return x.size() / 2;
}

}  // namespace

IdentityReport check_equivariance_tag(const Estimator& t, EquivarianceTag tag, const Sample& x,
                                      const std::vector<GroupAction>& actions, double tolerance) {
  IdentityReport report;
  report.identity = std::string(to_string(tag));
  report.tolerance = tolerance;
  const EstimateValue base = t(x);

  for (const auto& g : actions) {
    const bool x_action = g.kind() == GroupAction::Kind::XScale;
    if (x_action != (tag == EquivarianceTag::XScaleInverseEquivariant)) {
      throw InvalidArgument(g.describe() + " is not an action for the " + report.identity + " identity");
    }
    const EstimateValue moved = t(apply_action(g, x));
    const double a = g.multiplier();
    const double b = g.offset();
    double worst = 0.0;
    switch (tag) {
      case EquivarianceTag::TranslationEquivariant:
        for (std::size_t i = 0; i < base.dimension(); ++i) {
          worst = std::max(worst, scaled_gap(moved.components[i], a * base.components[i] + b));
        }
        break;
      case EquivarianceTag::ScaleEquivariant:
        for (std::size_t i = 0; i < base.dimension(); ++i) {
          worst = std::max(worst, scaled_gap(moved.components[i], std::abs(a) * base.components[i]));
        }
        break;
      case EquivarianceTag::AffineInvariant:
        for (std::size_t i = 0; i < base.dimension(); ++i) {
          worst = std::max(worst, scaled_gap(moved.components[i], base.components[i]));
        }
        break;
      case EquivarianceTag::XScaleInverseEquivariant:
        // Slope is the last component for both "ols" and "ols_slope".
        worst = relative_gap(moved.components.back(), base.components.back() / a);
        break;
    }
    report.max_discrepancy = std::max(report.max_discrepancy, worst);
    ++report.trials;
  }
  report.pass = report.max_discrepancy <= tolerance;
  return report;
}

IdentityReport check_translation_half_identity(const Estimator& t, const Sample& x, double c,
                                               std::optional<double> tolerance) {
  const std::size_t k = half_size(x);
  if (x.is_regression()) throw InvalidArgument("translation half identity needs a scalar sample");
  std::vector<double> first_shifted(x.values().begin(), x.values().end());
  std::vector<double> second_shifted = first_shifted;
  for (std::size_t i = 0; i < k; ++i) first_shifted[i] += c;
  for (std::size_t i = k; i < 2 * k; ++i) second_shifted[i] -= c;

  // Shifting down may leave the nonnegative orthant; the identity itself
  // lives on the real line.
  const double lhs = t(Sample::scalar(std::move(first_shifted))).scalar();
  const double rhs = t(Sample::scalar(std::move(second_shifted))).scalar();

  IdentityReport report;
  report.identity = "translation-half";
  report.max_discrepancy = std::abs((lhs - rhs) - c);
  report.tolerance = tolerance.value_or(1e-9 * std::max(1.0, std::abs(c)));
  report.trials = 1;
  report.pass = report.max_discrepancy <= report.tolerance;
  return report;
}

IdentityReport check_glm_scaling_identity(const Estimator& t, const Sample& x, double c,
                                          double tolerance) {
  const std::size_t k = half_size(x);
  if (!std::isfinite(c) || c == 0.0) throw InvalidArgument("scaling constant must be finite and nonzero");
  std::vector<RegressionPair> left(x.pairs().begin(), x.pairs().end());
  std::vector<RegressionPair> right = left;
  for (std::size_t i = 0; i < k; ++i) left[i].x *= c;
  for (std::size_t i = k; i < 2 * k; ++i) right[i].x /= c;

  const double lhs = t(Sample::regression(std::move(left))).components.back();
  const double rhs = t(Sample::regression(std::move(right))).components.back() / c;

  IdentityReport report;
  report.identity = "glm-x-scaling";
  report.max_discrepancy = relative_gap(lhs, rhs);
  report.tolerance = tolerance;
  report.trials = 1;
  report.pass = report.max_discrepancy <= tolerance;
  return report;
}

}  // namespace robustlab
