#include "silcorr/metrics.hpp"

#include "silcorr/error.hpp"
#include "silcorr/numeric.hpp"
#include "silcorr/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace silcorr::metrics
{

namespace
{

void check_input(const MetricInput & input)
{
  if (input.m.size() != input.g.size()) {
    throw Error(ErrorCode::DegenerateSampleSize, "M and G differ in length");
  }
  if (input.m.size() < 3) {
    throw Error(ErrorCode::DegenerateSampleSize, "need at least 3 pairs, got " + std::to_string(input.m.size()));
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(input.m.begin(), input.m.end(), finite) || !std::all_of(input.g.begin(), input.g.end(), finite)) {
    throw Error(ErrorCode::EmptyInput, "metric input contains non-finite values");
  }
}

}  // namespace

std::string_view to_string(CorrelationBand band)
{
  switch (band) {
    case CorrelationBand::High: return "High";
    case CorrelationBand::Moderate: return "Moderate";
    case CorrelationBand::Low: return "Low";
    case CorrelationBand::Weak: return "Weak";
    case CorrelationBand::NotPositive: return "NotPositive";
  }
  return "?";
}

std::string_view to_string(AccuracyBand band)
{
  switch (band) {
    case AccuracyBand::Excellent: return "Excellent";
    case AccuracyBand::Good: return "Good";
    case AccuracyBand::Fair: return "Fair";
    case AccuracyBand::Poor: return "Poor";
  }
  return "?";
}

CorrelationBand correlation_band_from_string(std::string_view text)
{
  for (auto b : {CorrelationBand::High, CorrelationBand::Moderate, CorrelationBand::Low, CorrelationBand::Weak,
                 CorrelationBand::NotPositive}) {
    if (to_string(b) == text) return b;
  }
  throw Error(ErrorCode::ParseError, "unknown correlation band '" + std::string(text) + "'");
}

AccuracyBand accuracy_band_from_string(std::string_view text)
{
  for (auto b : {AccuracyBand::Excellent, AccuracyBand::Good, AccuracyBand::Fair, AccuracyBand::Poor}) {
    if (to_string(b) == text) return b;
  }
  throw Error(ErrorCode::ParseError, "unknown accuracy band '" + std::string(text) + "'");
}

double pearson_r(const MetricInput & input)
{
  check_input(input);
  const double m_bar = numeric::mean(input.m);
  const double g_bar = numeric::mean(input.g);
  numeric::CompensatedSum sxy;
  numeric::CompensatedSum sxx;
  numeric::CompensatedSum syy;
  for (std::size_t i = 0; i < input.m.size(); ++i) {
    const double dm = input.m[i] - m_bar;
    const double dg = input.g[i] - g_bar;
    sxy.add(dm * dg);
    sxx.add(dm * dm);
    syy.add(dg * dg);
  }
  if (sxx.value() == 0.0 || syy.value() == 0.0) {
    throw Error(ErrorCode::ZeroVariance, "correlation undefined: a series is constant");
  }
  return std::clamp(sxy.value() / (std::sqrt(sxx.value()) * std::sqrt(syy.value())), -1.0, 1.0);
}

double p_value(double r, std::size_t n)
{
  if (n < 3) throw Error(ErrorCode::DegenerateSampleSize, "p-value needs n >= 3");
  if (std::isnan(r)) throw Error(ErrorCode::EmptyInput, "p-value of NaN");
  const double a = std::fabs(r);
  if (a >= 1.0) return 0.0;
  if (a == 0.0) return 1.0;
  // With t = r sqrt(df / (1 - r^2)) the beta argument df / (df + t^2) reduces to 1 - r^2.
  const double df = static_cast<double>(n - 2);
  return special::incomplete_beta(0.5 * df, 0.5, (1.0 - a) * (1.0 + a));
}

double rrmse(const MetricInput & input)
{
  check_input(input);
  numeric::CompensatedSum residual;
  numeric::CompensatedSum reference;
  for (std::size_t i = 0; i < input.m.size(); ++i) {
    const double e = input.m[i] - input.g[i];
    residual.add(e * e);
    reference.add(input.m[i] * input.m[i]);
  }
  if (reference.value() == 0.0) throw Error(ErrorCode::ZeroRMS, "reference series is identically zero");
  const double n = static_cast<double>(input.m.size());
  return std::sqrt(residual.value() / n) / std::sqrt(reference.value() / n);
}

CorrelationBand rate_correlation(double r)
{
  if (r >= 0.7) return CorrelationBand::High;
  if (r >= 0.5) return CorrelationBand::Moderate;
  if (r >= 0.3) return CorrelationBand::Low;
  if (r >= 0.1) return CorrelationBand::Weak;
  return CorrelationBand::NotPositive;
}

AccuracyBand rate_accuracy(double value)
{
  if (value < 0.10) return AccuracyBand::Excellent;
  if (value < 0.20) return AccuracyBand::Good;
  if (value < 0.30) return AccuracyBand::Fair;
  return AccuracyBand::Poor;
}

Rating rate(double r, double value) { return {rate_correlation(r), rate_accuracy(value)}; }

MetricResult evaluate(const MetricInput & input)
{
  check_input(input);
  MetricResult out;
  out.signal = input.signal;
  out.n = input.m.size();
  try {
    out.r = pearson_r(input);
    out.p_value = p_value(*out.r, out.n);
    out.r_band = rate_correlation(*out.r);
    out.significant = *out.p_value < kSignificanceLevel;
  } catch (const Error & e) {
    if (e.code() != ErrorCode::ZeroVariance) throw;
  }
  try {
    out.rrmse = rrmse(input);
    out.rrmse_band = rate_accuracy(*out.rrmse);
  } catch (const Error & e) {
    if (e.code() != ErrorCode::ZeroRMS) throw;
  }
  return out;
}

}  // namespace silcorr::metrics
