#include "robustlab/estimators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace robustlab {

std::string_view to_string(Arity a) {
  return a == Arity::Scalar ? "scalar" : "regression";
}

std::string_view to_string(EquivarianceTag t) {
  switch (t) {
    case EquivarianceTag::TranslationEquivariant: return "translation-equivariant";
    case EquivarianceTag::ScaleEquivariant: return "scale-equivariant";
    case EquivarianceTag::AffineInvariant: return "affine-invariant";
    case EquivarianceTag::XScaleInverseEquivariant: return "x-scale-inverse-equivariant";
  }
  return "?";
}

EquivarianceTag parse_equivariance_tag(std::string_view text) {
  for (auto t : {EquivarianceTag::TranslationEquivariant, EquivarianceTag::ScaleEquivariant,
                 EquivarianceTag::AffineInvariant, EquivarianceTag::XScaleInverseEquivariant}) {
    if (to_string(t) == text) return t;
  }
  throw InvalidArgument("unknown equivariance tag '" + std::string(text) + "'");
}

bool EstimatorDescriptor::has_tag(EquivarianceTag t) const {
  return std::find(tags.begin(), tags.end(), t) != tags.end();
}

ValueSpace value_space_on(const EstimatorDescriptor& desc, Domain domain) {
  if (domain == Domain::NonNegative && desc.has_tag(EquivarianceTag::TranslationEquivariant)) {
    return ValueSpace::closed_half_line(0.0);
  }
  return desc.value_space;
}

double EstimateValue::norm() const {
  double acc = 0.0;
  for (double c : components) acc += c * c;
  return std::sqrt(acc);
}

namespace stats {
namespace {

void require_nonempty(std::span<const double> v) {
  if (v.empty()) throw EstimatorError("empty sample");
}

// Mean with one correction pass; keeps the centering accurate when a single
// observation dominates the sum.
double corrected_mean(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double residual = 0.0;
  for (double x : v) residual += x - m;
  return m + residual / n;
}

struct ScaledMoments {
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
};

// Central moments of (x - mean) / max|x - mean|. Ratios of moments with equal
// total degree are unaffected by the scaling, and nothing overflows.
ScaledMoments scaled_central_moments(std::span<const double> v) {
  const double m = corrected_mean(v);
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x - m));
  if (scale == 0.0) throw EstimatorError("zero variance");
  ScaledMoments out;
  for (double x : v) {
    const double u = (x - m) / scale;
    const double u2 = u * u;
    out.m2 += u2;
    out.m3 += u2 * u;
    out.m4 += u2 * u2;
  }
  const double n = static_cast<double>(v.size());
  out.m2 /= n;
  out.m3 /= n;
  out.m4 /= n;
  return out;
}

}  // namespace

double mean(std::span<const double> v) {
  require_nonempty(v);
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median_inplace(std::span<double> v) {
  require_nonempty(v);
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double median(std::span<const double> v) {
  std::vector<double> copy(v.begin(), v.end());
  return median_inplace(copy);
}

std::size_t trim_count(std::size_t n, double alpha) {
  if (!(alpha >= 0.0 && alpha < 0.5)) throw InvalidArgument("trim fraction must lie in [0, 0.5)");
  // The epsilon absorbs representation error such as 100 * 0.29 = 28.999...
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * alpha + 1e-9));
}

double trimmed_mean_inplace(std::span<double> v, double alpha) {
  require_nonempty(v);
  const std::size_t k = trim_count(v.size(), alpha);
  if (2 * k >= v.size()) throw EstimatorError("trimming leaves no observations");
  std::sort(v.begin(), v.end());
  const auto kept = v.subspan(k, v.size() - 2 * k);
  return std::accumulate(kept.begin(), kept.end(), 0.0) / static_cast<double>(kept.size());
}

double std_dev(std::span<const double> v) {
  if (v.size() < 2) throw EstimatorError("std_dev needs at least two observations");
  const double m = corrected_mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double mad_inplace(std::span<double> v) {
  const double med = median_inplace(v);
  for (double& x : v) x = std::abs(x - med);
  return median_inplace(v);
}

double skewness_b1(std::span<const double> v) {
  if (v.size() < 3) throw EstimatorError("b1 needs at least three observations");
  const auto m = scaled_central_moments(v);
  return (m.m3 * m.m3) / (m.m2 * m.m2 * m.m2);
}

double kurtosis_b2(std::span<const double> v) {
  if (v.size() < 4) throw EstimatorError("b2 needs at least four observations");
  const auto m = scaled_central_moments(v);
  return m.m4 / (m.m2 * m.m2);
}

}  // namespace stats

namespace {

std::vector<double> copy_values(const Sample& x) {
  auto v = x.values();
  return {v.begin(), v.end()};
}

EstimateValue scalar_value(double v) { return EstimateValue{{v}}; }

}  // namespace

EstimateValue mean(const Sample& x) { return scalar_value(stats::mean(x.values())); }

EstimateValue median(const Sample& x) { return scalar_value(stats::median(x.values())); }

EstimateValue trimmed_mean(const Sample& x, double alpha) {
  auto v = copy_values(x);
  return scalar_value(stats::trimmed_mean_inplace(v, alpha));
}

EstimateValue std_dev(const Sample& x) { return scalar_value(stats::std_dev(x.values())); }

EstimateValue mad(const Sample& x) {
  auto v = copy_values(x);
  return scalar_value(stats::mad_inplace(v));
}

EstimateValue skewness_b1(const Sample& x) { return scalar_value(stats::skewness_b1(x.values())); }

EstimateValue kurtosis_b2(const Sample& x) { return scalar_value(stats::kurtosis_b2(x.values())); }

EstimateValue ols_linear_predictor(const Sample& x) {
  const auto pairs = x.pairs();
  const std::size_t n = pairs.size();
  if (n < 2) throw EstimatorError("ols needs at least two observations");
  const bool all_equal = std::all_of(pairs.begin(), pairs.end(),
                                     [&](const RegressionPair& p) { return p.x == pairs[0].x; });
  if (all_equal) throw EstimatorError("degenerate design: covariates all equal");

  double xbar = 0.0;
  double ybar = 0.0;
  for (const auto& p : pairs) {
    xbar += p.x;
    ybar += p.y;
  }
  xbar /= static_cast<double>(n);
  ybar /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : pairs) {
    const double dx = p.x - xbar;
    sxx += dx * dx;
    sxy += dx * (p.y - ybar);
  }
  if (sxx == 0.0) throw EstimatorError("degenerate design: zero covariate variance");
  const double slope = sxy / sxx;
  return EstimateValue{{ybar - slope * xbar, slope}};
}

double b1_outlier_limit(std::size_t n) {
  if (n < 3) throw InvalidArgument("b1_outlier_limit requires n >= 3");
  const double nn = static_cast<double>(n);
  return (nn - 2.0) * (nn - 2.0) / (nn - 1.0);
}

Estimator::Estimator(EstimatorDescriptor desc, SampleFn fn, ScalarKernel kernel)
    : desc_(std::move(desc)), fn_(std::move(fn)), kernel_(std::move(kernel)) {}

EstimateValue Estimator::operator()(const Sample& x) const {
  const bool regression = x.is_regression();
  if (regression != (desc_.arity == Arity::Regression)) {
    throw InvalidArgument("estimator '" + desc_.name + "' expects a " +
                          std::string(to_string(desc_.arity)) + " sample");
  }
  if (x.size() < desc_.min_n) {
    throw EstimatorError("estimator '" + desc_.name + "' needs n >= " + std::to_string(desc_.min_n));
  }
  return fn_(x);
}

double Estimator::evaluate_scalar(std::span<double> scratch) const {
  if (!kernel_) throw InvalidArgument("estimator '" + desc_.name + "' has no scalar kernel");
  if (scratch.size() < desc_.min_n) {
    throw EstimatorError("estimator '" + desc_.name + "' needs n >= " + std::to_string(desc_.min_n));
  }
  return kernel_(scratch);
}

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw InvalidArgument("malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

std::string format_parameter(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

EstimatorDescriptor location_descriptor(std::string name) {
  EstimatorDescriptor d;
  d.name = std::move(name);
  d.value_space = ValueSpace::full_euclidean(1);
  d.tags = {EquivarianceTag::TranslationEquivariant};
  d.monotone = true;
  return d;
}

EstimatorDescriptor scale_descriptor(std::string name, std::size_t min_n) {
  EstimatorDescriptor d;
  d.name = std::move(name);
  d.value_space = ValueSpace::open_half_line(0.0);
  d.tags = {EquivarianceTag::ScaleEquivariant};
  d.min_n = min_n;
  return d;
}

EstimatorDescriptor shape_descriptor(std::string name, std::size_t min_n, double lower) {
  EstimatorDescriptor d;
  d.name = std::move(name);
  d.value_space = ValueSpace::closed_half_line(lower);
  d.tags = {EquivarianceTag::AffineInvariant};
  d.min_n = min_n;
  return d;
}

EstimatorDescriptor regression_descriptor(std::string name, std::size_t dimension) {
  EstimatorDescriptor d;
  d.name = std::move(name);
  d.arity = Arity::Regression;
  d.value_space = ValueSpace::full_euclidean(dimension);
  d.tags = {EquivarianceTag::XScaleInverseEquivariant};
  d.min_n = 2;
  return d;
}

}  // namespace

Estimator constant_estimator(std::vector<double> t0) {
  if (t0.empty()) throw InvalidArgument("constant estimator needs a value");
  EstimatorDescriptor d;
  d.name = "constant:" + format_parameter(t0[0]);
  d.value_space = ValueSpace::singleton(t0);
  d.monotone = t0.size() == 1;
  Estimator::ScalarKernel kernel;
  if (t0.size() == 1) {
    kernel = [v = t0[0]](std::span<double>) { return v; };
  }
  return Estimator(std::move(d), [t0](const Sample&) { return EstimateValue{t0}; }, std::move(kernel));
}

Estimator make_estimator(std::string_view name) {
  if (name == "mean") {
    return Estimator(location_descriptor("mean"), [](const Sample& x) { return mean(x); },
                     [](std::span<double> v) { return stats::mean(v); });
  }
  if (name == "median") {
    return Estimator(location_descriptor("median"), [](const Sample& x) { return median(x); },
                     [](std::span<double> v) { return stats::median_inplace(v); });
  }
  if (name.starts_with("trimmed_mean")) {
    double alpha = 0.1;
    if (name.size() > 12) {
      if (name[12] != ':') throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
      alpha = parse_number(name.substr(13), "trim fraction");
    }
    stats::trim_count(1, alpha);  // validates alpha
    auto d = location_descriptor("trimmed_mean:" + format_parameter(alpha));
    return Estimator(std::move(d), [alpha](const Sample& x) { return trimmed_mean(x, alpha); },
                     [alpha](std::span<double> v) { return stats::trimmed_mean_inplace(v, alpha); });
  }
  if (name == "std_dev") {
    return Estimator(scale_descriptor("std_dev", 2), [](const Sample& x) { return std_dev(x); },
                     [](std::span<double> v) { return stats::std_dev(v); });
  }
  if (name == "mad") {
    return Estimator(scale_descriptor("mad", 1), [](const Sample& x) { return mad(x); },
                     [](std::span<double> v) { return stats::mad_inplace(v); });
  }
  if (name == "b1") {
    return Estimator(shape_descriptor("b1", 3, 0.0), [](const Sample& x) { return skewness_b1(x); },
                     [](std::span<double> v) { return stats::skewness_b1(v); });
  }
  if (name == "b2") {
    // m4 >= m2^2, with equality for symmetric two-point samples.
    return Estimator(shape_descriptor("b2", 4, 1.0), [](const Sample& x) { return kurtosis_b2(x); },
                     [](std::span<double> v) { return stats::kurtosis_b2(v); });
  }
  if (name == "ols") {
    return Estimator(regression_descriptor("ols", 2),
                     [](const Sample& x) { return ols_linear_predictor(x); });
  }
  if (name == "ols_slope") {
    return Estimator(regression_descriptor("ols_slope", 1), [](const Sample& x) {
      return EstimateValue{{ols_linear_predictor(x).components[1]}};
    });
  }
  if (name.starts_with("constant:")) {
    return constant_estimator({parse_number(name.substr(9), "constant value")});
  }
  throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
}

std::vector<std::string> catalog_names() {
  return {"mean", "median", "trimmed_mean:<alpha>", "std_dev", "mad",
          "b1",   "b2",     "ols",                  "ols_slope", "constant:<t0>"};
}

}  // namespace robustlab
