#include "silcorr/numeric.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace silcorr::numeric
{

void CompensatedSum::add(double value) noexcept
{
  const double t = sum_ + value;
  if (std::fabs(sum_) >= std::fabs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
}

double mean(std::span<const double> values)
{
  if (values.empty()) {
    return 0.0;
  }
  const double pivot = values.front();
  CompensatedSum deviation;
  for (const double v : values) {
    deviation.add(v - pivot);
  }
  return pivot + deviation.value() / static_cast<double>(values.size());
}

std::string format_exact(double value)
{
  std::array<char, 64> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

std::string format_fixed(double value, int decimals)
{
  std::array<char, 64> buffer{};
  std::snprintf(buffer.data(), buffer.size(), "%.*f", decimals, value);
  std::string text(buffer.data());
  if (text.rfind("-0.", 0) == 0 && text.find_first_not_of("-0.") == std::string::npos) {
    text.erase(0, 1);
  }
  return text;
}

std::optional<double> parse_double(std::string_view token)
{
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) {
    token.remove_prefix(1);
  }
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
    token.remove_suffix(1);
  }
  if (token.empty()) {
    return std::nullopt;
  }
  if (token.front() == '+') {
    token.remove_prefix(1);
  }
  double value = 0.0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc{} || result.ptr != token.data() + token.size()) {
    return std::nullopt;
  }
  if (!std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace silcorr::numeric
