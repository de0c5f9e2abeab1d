#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ch/errors.hpp"

namespace ch {

// Scalar function of time given in closed form or as a sample table.
// Closed forms keep their parameters so scenarios stay serializable.
class TimeSampler {
 public:
  TimeSampler() : kind_("constant"), params_{0.0} {}

  static TimeSampler constant(double c);
  static TimeSampler linear(double a, double b);  // a + b*t
  static TimeSampler polynomial(std::vector<double> coeffs);
  static TimeSampler sine(double amplitude, double omega, double phase, double offset);
  static TimeSampler table(std::vector<double> times, std::vector<double> values);
  static TimeSampler sum(TimeSampler a, TimeSampler b);

  double operator()(double t) const;

  const std::string& kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<TimeSampler>& children() const { return children_; }

  // sampled comparison on [0,T]
  double max_difference(const TimeSampler& other, double t_final, int samples = 2049) const;

 private:
  std::string kind_;
  std::vector<double> params_;
  std::vector<TimeSampler> children_;
};

// Initial profile on [0,1]: closed form tag or sample table.
class InitialData {
 public:
  InitialData() : kind_("constant"), params_{0.0} {}

  static InitialData constant(double value);
  static InitialData gaussian_bump(double amplitude, double center, double width);
  static InitialData polynomial(std::vector<double> coeffs);
  static InitialData table(std::vector<double> x, std::vector<double> values);
  static InitialData sum(InitialData a, InitialData b);

  double operator()(double x) const;

  const std::string& kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<InitialData>& children() const { return children_; }

 private:
  std::string kind_;
  std::vector<double> params_;
  std::vector<InitialData> children_;
};

}  // namespace ch
