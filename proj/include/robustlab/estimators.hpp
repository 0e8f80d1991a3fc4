#pragma once

// Catalog of classical statistics with their value spaces and equivariance
// properties.

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robustlab/core.hpp"

namespace robustlab {

enum class Arity { Scalar, Regression };

enum class EquivarianceTag {
  TranslationEquivariant,    // T(aX + b) = a T(X) + b
  ScaleEquivariant,          // T(aX + b) = |a| T(X)
  AffineInvariant,           // T(aX + b) = T(X)
  XScaleInverseEquivariant,  // slope(c x, y) = slope(x, y) / c
};

std::string_view to_string(Arity a);
std::string_view to_string(EquivarianceTag t);
EquivarianceTag parse_equivariance_tag(std::string_view text);

struct EstimatorDescriptor {
  std::string name;
  Arity arity = Arity::Scalar;
  ValueSpace value_space = ValueSpace::full_euclidean(1);
  std::vector<EquivarianceTag> tags;
  std::size_t min_n = 1;
  /// Nondecreasing and continuous in every observation. Lets the reachable
  /// set oracle evaluate only extreme outlier configurations.
  bool monotone = false;
  /// Value does not depend on the order of the observations.
  bool permutation_symmetric = true;

  bool has_tag(EquivarianceTag t) const;
  std::size_t output_dimension() const { return value_space.dimension(); }
};

/// Value space of the estimator when fed samples from `domain`. Location
/// estimators on the nonnegative orthant take values in [0, inf).
ValueSpace value_space_on(const EstimatorDescriptor& desc, Domain domain);

struct EstimateValue {
  std::vector<double> components;

  double scalar() const { return components.at(0); }
  std::size_t dimension() const { return components.size(); }
  /// Euclidean norm.
  double norm() const;
  friend bool operator==(const EstimateValue&, const EstimateValue&) = default;
};

// Scalar statistics over raw values. Functions taking a mutable span may
// reorder it.
namespace stats {

double mean(std::span<const double> v);
double median_inplace(std::span<double> v);
double median(std::span<const double> v);
double trimmed_mean_inplace(std::span<double> v, double alpha);
std::size_t trim_count(std::size_t n, double alpha);
double std_dev(std::span<const double> v);
double mad_inplace(std::span<double> v);
double skewness_b1(std::span<const double> v);
double kurtosis_b2(std::span<const double> v);

}  // namespace stats

EstimateValue mean(const Sample& x);
EstimateValue median(const Sample& x);
EstimateValue trimmed_mean(const Sample& x, double alpha);
EstimateValue std_dev(const Sample& x);
EstimateValue mad(const Sample& x);
EstimateValue skewness_b1(const Sample& x);
EstimateValue kurtosis_b2(const Sample& x);
/// (intercept, slope) of the least-squares line.
EstimateValue ols_linear_predictor(const Sample& x);

/// Limit of b1 when a single observation escapes to infinity: (n-2)^2/(n-1).
double b1_outlier_limit(std::size_t n);

/// A named statistic. Evaluation checks arity and minimum sample size before
/// delegating; precondition failures surface as EstimatorError.
class Estimator {
 public:
  using SampleFn = std::function<EstimateValue(const Sample&)>;
  /// Fast path for scalar, one-dimensional statistics. The scratch span holds
  /// the observations and may be permuted.
  using ScalarKernel = std::function<double(std::span<double>)>;

  Estimator(EstimatorDescriptor desc, SampleFn fn, ScalarKernel kernel = {});

  const EstimatorDescriptor& descriptor() const { return desc_; }
  const std::string& name() const { return desc_.name; }

  EstimateValue operator()(const Sample& x) const;

  bool has_scalar_kernel() const { return static_cast<bool>(kernel_); }
  /// No arity check; min_n is still enforced.
  double evaluate_scalar(std::span<double> scratch) const;

 private:
  EstimatorDescriptor desc_;
  SampleFn fn_;
  ScalarKernel kernel_;
};

/// Resolves a catalog name: "mean", "median", "trimmed_mean[:<alpha>]" (alpha 0.1 when omitted),
/// "std_dev", "mad", "b1", "b2", "ols", "ols_slope", "constant:<t0>".
/// Throws InvalidArgument for unknown names.
Estimator make_estimator(std::string_view name);

/// T(X) = t0 for every X; value space is the singleton {t0}.
Estimator constant_estimator(std::vector<double> t0);

std::vector<std::string> catalog_names();

}  // namespace robustlab
