#include "packdim/law.hpp"

#include <algorithm>

#include "packdim/error.hpp"

namespace packdim {

void ReductionLaw::validate() const {
  if (slots == 0) throw ConfigError("law '" + name + "' has no offspring slots (n = 0)");
  if (!sampler) throw ConfigError("law '" + name + "' has no sampler");
}

void ReductionLaw::sample(Stream& stream, std::span<double> out) const {
  if (out.size() != slots) throw ContractError("ratio buffer size does not match law slots");
  sampler(stream, out);
}

std::vector<double> sample_offspring(const ReductionLaw& law, Stream& stream) {
  law.validate();
  std::vector<double> out(law.slots);
  law.sample(stream, out);
  return out;
}

CodePoint CodePoint::concat(const CodePoint& tail) const {
  std::vector<std::uint32_t> d = digits_;
  d.insert(d.end(), tail.digits_.begin(), tail.digits_.end());
  return CodePoint(std::move(d));
}

CodePoint CodePoint::child(std::uint32_t i) const {
  std::vector<std::uint32_t> d = digits_;
  d.push_back(i);
  return CodePoint(std::move(d));
}

CodePoint CodePoint::prefix(std::size_t k) const {
  if (k > digits_.size()) throw ContractError("prefix longer than code point");
  return CodePoint(std::vector<std::uint32_t>(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(k)));
}

bool CodePoint::is_prefix_of(const CodePoint& other) const {
  return digits_.size() <= other.digits_.size() &&
         std::equal(digits_.begin(), digits_.end(), other.digits_.begin());
}

std::string CodePoint::to_string() const {
  if (digits_.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(digits_[i]);
  }
  return s;
}

}  // namespace packdim
