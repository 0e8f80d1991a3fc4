#include "robustlab/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace robustlab {

std::string_view to_string(AttackKind k) {
  switch (k) {
    case AttackKind::ShiftHalf: return "shift-half";
    case AttackKind::ScaleHalfX: return "scale-half-x";
    case AttackKind::PointMass: return "point-mass";
    case AttackKind::SingleOutlierEscape: return "single-outlier-escape";
    case AttackKind::Custom: return "custom";
  }
  return "?";
}

AttackKind parse_attack_kind(std::string_view text) {
  for (auto k : {AttackKind::ShiftHalf, AttackKind::ScaleHalfX, AttackKind::PointMass,
                 AttackKind::SingleOutlierEscape, AttackKind::Custom}) {
    if (to_string(k) == text) return k;
  }
  throw InvalidArgument("unknown attack kind '" + std::string(text) + "'");
}

double AttackSpec::magnitude(std::size_t m) const {
  return c0 * std::pow(gamma, static_cast<double>(m));
}

void AttackSpec::validate(std::size_t n) const {
  if (mask.size() != n) throw InvalidArgument("attack mask length does not match the sample");
  if (mask.count() == 0) throw InvalidArgument("attack mask is empty");
  if (direction != 1 && direction != -1) throw InvalidArgument("attack direction must be +1 or -1");
  switch (kind) {
    case AttackKind::Custom:
      if (custom_outliers.empty()) throw InvalidArgument("custom attack needs outlier samples");
      for (const auto& y : custom_outliers) {
        if (y.size() != n) throw InvalidArgument("custom outlier sample length does not match");
      }
      return;
    case AttackKind::PointMass:
      if (steps < 1) throw InvalidArgument("attack needs at least one step");
      if (target && !std::isfinite(*target)) throw InvalidArgument("point-mass target must be finite");
      return;
    case AttackKind::SingleOutlierEscape:
      if (mask.count() != 1) throw InvalidArgument("single-outlier escape flags exactly one position");
      [[fallthrough]];
    case AttackKind::ShiftHalf:
    case AttackKind::ScaleHalfX:
      if (steps < 2) throw InvalidArgument("attack schedule needs M >= 2 steps");
      if (!(gamma > 1.0) || !std::isfinite(gamma)) throw InvalidArgument("growth factor must exceed 1");
      if (!(c0 >= 0.0) || !std::isfinite(c0)) throw InvalidArgument("base magnitude must be >= 0");
      if (kind == AttackKind::ScaleHalfX && c0 == 0.0) {
        throw InvalidArgument("scale-half-x needs a positive base magnitude");
      }
      return;
  }
}

std::string AttackSpec::describe() const {
  std::ostringstream out;
  out << to_string(kind) << " s=" << mask.count();
  if (kind != AttackKind::PointMass && kind != AttackKind::Custom) {
    out << " c0=" << c0 << " gamma=" << gamma << " dir=" << (direction > 0 ? "+1" : "-1");
  }
  if (kind == AttackKind::PointMass && target) out << " target=" << *target;
  out << " M=" << (kind == AttackKind::Custom ? custom_outliers.size() : steps);
  return out.str();
}

AttackSpec shift_half_spec(ContaminationMask mask, int direction, double c0, double gamma,
                           std::size_t steps) {
  AttackSpec spec;
  spec.kind = AttackKind::ShiftHalf;
  spec.mask = std::move(mask);
  spec.direction = direction;
  spec.c0 = c0;
  spec.gamma = gamma;
  spec.steps = steps;
  return spec;
}

AttackSpec scale_half_x_spec(ContaminationMask mask, int direction, double c0, double gamma,
                             std::size_t steps) {
  AttackSpec spec = shift_half_spec(std::move(mask), direction, c0, gamma, steps);
  spec.kind = AttackKind::ScaleHalfX;
  return spec;
}

AttackSpec point_mass_spec(ContaminationMask mask, std::optional<double> target, std::size_t steps) {
  AttackSpec spec;
  spec.kind = AttackKind::PointMass;
  spec.mask = std::move(mask);
  spec.target = target;
  spec.steps = steps;
  return spec;
}

AttackSpec single_outlier_escape_spec(std::size_t n, std::size_t position, double c0, double gamma,
                                      std::size_t steps, int direction) {
  if (position >= n) throw InvalidArgument("escape position out of range");
  std::vector<bool> flags(n, false);
  flags[position] = true;
  AttackSpec spec = shift_half_spec(ContaminationMask(std::move(flags)), direction, c0, gamma, steps);
  spec.kind = AttackKind::SingleOutlierEscape;
  return spec;
}

namespace {

// Steps m = 1..M whose magnitude stays within the cap.
std::vector<double> schedule(const AttackSpec& spec, bool& capped) {
  std::vector<double> out;
  capped = false;
  for (std::size_t m = 1; m <= spec.steps; ++m) {
    const double mag = spec.magnitude(m);
    if (mag > kMagnitudeCap) {
      capped = true;
      break;
    }
    out.push_back(mag);
  }
  return out;
}

// Outlier sample: clean observations with masked scalar positions rewritten.
template <typename Fn>
Sample rewrite_scalar(const Sample& x, const ContaminationMask& mask, Fn&& fn) {
  std::vector<double> y(x.values().begin(), x.values().end());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (mask[i]) y[i] = fn(y[i]);
  }
  return contaminate(x, Sample::scalar(std::move(y), x.domain()), mask);
}

}  // namespace

AttackSequence generate_attack(const AttackSpec& spec, const Sample& x) {
  spec.validate(x.size());
  AttackSequence seq{spec, x, {}, {}, false};

  switch (spec.kind) {
    case AttackKind::ShiftHalf: {
      if (x.is_regression()) throw InvalidArgument("shift-half attacks scalar samples");
      for (double mag : schedule(spec, seq.capped)) {
        const double shift = spec.direction * mag;
        seq.samples.push_back(rewrite_scalar(x, spec.mask, [shift](double v) { return v + shift; }));
        seq.magnitudes.push_back(mag);
      }
      break;
    }
    case AttackKind::ScaleHalfX: {
      if (!x.is_regression()) throw InvalidArgument("scale-half-x attacks regression samples");
      for (double mag : schedule(spec, seq.capped)) {
        const double factor = spec.direction > 0 ? mag : 1.0 / mag;
        std::vector<RegressionPair> y(x.pairs().begin(), x.pairs().end());
        for (std::size_t i = 0; i < y.size(); ++i) {
          if (spec.mask[i]) y[i].x *= factor;
        }
        seq.samples.push_back(contaminate(x, Sample::regression(std::move(y)), spec.mask));
        seq.magnitudes.push_back(mag);
      }
      break;
    }
    case AttackKind::PointMass: {
      if (x.is_regression()) throw InvalidArgument("point-mass attacks scalar samples");
      const double target = spec.target ? *spec.target : stats::median(x.values());
      seq.spec.target = target;
      for (std::size_t m = 0; m < spec.steps; ++m) {
        seq.samples.push_back(rewrite_scalar(x, spec.mask, [target](double) { return target; }));
        seq.magnitudes.push_back(std::abs(target));
      }
      break;
    }
    case AttackKind::SingleOutlierEscape: {
      if (x.is_regression()) throw InvalidArgument("single-outlier escape attacks scalar samples");
      for (double mag : schedule(spec, seq.capped)) {
        const double value = spec.direction * mag;
        seq.samples.push_back(rewrite_scalar(x, spec.mask, [value](double) { return value; }));
        seq.magnitudes.push_back(mag);
      }
      break;
    }
    case AttackKind::Custom: {
      for (const auto& y : spec.custom_outliers) {
        double mag = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
          if (!spec.mask[i]) continue;
          if (y.is_regression()) {
            mag = std::max({mag, std::abs(y.pairs()[i].x), std::abs(y.pairs()[i].y)});
          } else {
            mag = std::max(mag, std::abs(y.values()[i]));
          }
        }
        seq.samples.push_back(contaminate(x, y, spec.mask));
        seq.magnitudes.push_back(mag);
      }
      break;
    }
  }
  return seq;
}

AttackSequence shift_half_attack(const Sample& x, const ContaminationMask& mask, double c0,
                                 double gamma, std::size_t steps, int direction) {
  return generate_attack(shift_half_spec(mask, direction, c0, gamma, steps), x);
}

AttackSequence scale_half_x_attack(const Sample& x, const ContaminationMask& mask, double c0,
                                   double gamma, std::size_t steps, int direction) {
  return generate_attack(scale_half_x_spec(mask, direction, c0, gamma, steps), x);
}

AttackSequence point_mass_attack(const Sample& x, const ContaminationMask& mask, double target,
                                 std::size_t steps) {
  return generate_attack(point_mass_spec(mask, target, steps), x);
}

AttackSequence single_outlier_escape(const Sample& x, std::size_t position, double c0, double gamma,
                                     std::size_t steps) {
  return generate_attack(single_outlier_escape_spec(x.size(), position, c0, gamma, steps), x);
}

std::vector<AttackSpec> build_equivariant_attack(const EstimatorDescriptor& desc, const Sample& x,
                                                 std::size_t s) {
  const std::size_t n = x.size();
  if (s < 1 || s > n) throw InvalidArgument("outlier count must lie in 1..n");
  if (desc.tags.empty()) {
    throw InvalidArgument("estimator '" + desc.name +
                          "' has no equivariance tag; supply a custom attack");
  }
  const bool nonnegative = x.domain() == Domain::NonNegative;
  const auto mask = ContaminationMask::first(n, s);

  std::vector<AttackSpec> out;
  for (auto tag : desc.tags) {
    switch (tag) {
      case EquivarianceTag::TranslationEquivariant:
        out.push_back(shift_half_spec(mask, +1));
        if (!nonnegative) out.push_back(shift_half_spec(mask, -1));
        break;
      case EquivarianceTag::ScaleEquivariant:
        out.push_back(point_mass_spec(mask));
        out.push_back(single_outlier_escape_spec(n, 0));
        break;
      case EquivarianceTag::XScaleInverseEquivariant:
        out.push_back(scale_half_x_spec(mask, +1));
        out.push_back(scale_half_x_spec(mask, -1));
        break;
      case EquivarianceTag::AffineInvariant:
        out.push_back(single_outlier_escape_spec(n, 0));
        break;
    }
  }
  return out;
}

}  // namespace robustlab
