#include "ch/sampler.hpp"

#include <algorithm>

namespace ch {

namespace {

double eval_poly(const std::vector<double>& c, double t) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * t + *it;
  return r;
}

// piecewise-linear table lookup, clamped outside the range
double eval_table(const std::vector<double>& ts, const std::vector<double>& vs, double t) {
  if (t <= ts.front()) return vs.front();
  if (t >= ts.back()) return vs.back();
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  size_t i = static_cast<size_t>(it - ts.begin());
  double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return (1.0 - w) * vs[i - 1] + w * vs[i];
}

void check_table(const std::vector<double>& ts, const std::vector<double>& vs) {
  ensure(ts.size() >= 2 && ts.size() == vs.size(), "table needs matching abscissae/values, >= 2 entries");
  for (size_t i = 1; i < ts.size(); ++i) ensure(ts[i] > ts[i - 1], "table abscissae must increase");
  for (double v : vs) ensure(std::isfinite(v), "table values must be finite");
}

}  // namespace

TimeSampler TimeSampler::constant(double c) {
  TimeSampler s;
  s.kind_ = "constant";
  s.params_ = {c};
  return s;
}

TimeSampler TimeSampler::linear(double a, double b) {
  TimeSampler s;
  s.kind_ = "linear";
  s.params_ = {a, b};
  return s;
}

TimeSampler TimeSampler::polynomial(std::vector<double> coeffs) {
  ensure(!coeffs.empty(), "polynomial sampler needs coefficients");
  TimeSampler s;
  s.kind_ = "polynomial";
  s.params_ = std::move(coeffs);
  return s;
}

TimeSampler TimeSampler::sine(double amplitude, double omega, double phase, double offset) {
  TimeSampler s;
  s.kind_ = "sine";
  s.params_ = {amplitude, omega, phase, offset};
  return s;
}

TimeSampler TimeSampler::table(std::vector<double> times, std::vector<double> values) {
  check_table(times, values);
  TimeSampler s;
  s.kind_ = "table";
  s.params_ = std::move(times);
  s.params_.insert(s.params_.end(), values.begin(), values.end());
  return s;
}

TimeSampler TimeSampler::sum(TimeSampler a, TimeSampler b) {
  TimeSampler s;
  s.kind_ = "sum";
  s.children_ = {std::move(a), std::move(b)};
  return s;
}

double TimeSampler::operator()(double t) const {
  if (kind_ == "constant") return params_[0];
  if (kind_ == "linear") return params_[0] + params_[1] * t;
  if (kind_ == "polynomial") return eval_poly(params_, t);
  if (kind_ == "sine") return params_[0] * std::sin(params_[1] * t + params_[2]) + params_[3];
  if (kind_ == "sum") return children_[0](t) + children_[1](t);
  // table
  size_t m = params_.size() / 2;
  std::vector<double> ts(params_.begin(), params_.begin() + m);
  std::vector<double> vs(params_.begin() + m, params_.end());
  return eval_table(ts, vs, t);
}

double TimeSampler::max_difference(const TimeSampler& other, double t_final, int samples) const {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    double t = t_final * k / (samples - 1);
    worst = std::max(worst, std::abs((*this)(t) - other(t)));
  }
  return worst;
}

InitialData InitialData::constant(double value) {
  InitialData d;
  d.kind_ = "constant";
  d.params_ = {value};
  return d;
}

InitialData InitialData::gaussian_bump(double amplitude, double center, double width) {
  ensure(width > 0.0, "gaussian bump width must be positive");
  InitialData d;
  d.kind_ = "gaussian_bump";
  d.params_ = {amplitude, center, width};
  return d;
}

InitialData InitialData::polynomial(std::vector<double> coeffs) {
  ensure(!coeffs.empty(), "polynomial profile needs coefficients");
  InitialData d;
  d.kind_ = "polynomial";
  d.params_ = std::move(coeffs);
  return d;
}

InitialData InitialData::table(std::vector<double> x, std::vector<double> values) {
  check_table(x, values);
  InitialData d;
  d.kind_ = "table";
  d.params_ = std::move(x);
  d.params_.insert(d.params_.end(), values.begin(), values.end());
  return d;
}

InitialData InitialData::sum(InitialData a, InitialData b) {
  InitialData d;
  d.kind_ = "sum";
  d.children_ = {std::move(a), std::move(b)};
  return d;
}

double InitialData::operator()(double x) const {
  if (kind_ == "constant") return params_[0];
  if (kind_ == "gaussian_bump") {
    double u = (x - params_[1]) / params_[2];
    return params_[0] * std::exp(-u * u);
  }
  if (kind_ == "polynomial") return eval_poly(params_, x);
  if (kind_ == "sum") return children_[0](x) + children_[1](x);
  size_t m = params_.size() / 2;
  std::vector<double> xs(params_.begin(), params_.begin() + m);
  std::vector<double> vs(params_.begin() + m, params_.end());
  return eval_table(xs, vs, x);
}

}  // namespace ch
