#include "packdim/tree.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "packdim/error.hpp"
#include "packdim/parallel.hpp"

namespace packdim {

TreeRealization::TreeRealization(std::vector<TreeLevel> levels, std::size_t slots, StreamId source)
    : levels_(std::move(levels)), slots_(slots), source_(source) {
  if (levels_.empty()) throw ContractError("tree needs a root level");
}

std::size_t TreeRealization::node_count() const {
  std::size_t n = 0;
  for (const auto& lv : levels_) n += lv.size();
  return n;
}

CodePoint TreeRealization::code(int k, std::size_t index) const {
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(k));
  for (int d = k; d >= 1; --d) {
    const TreeLevel& lv = level(d);
    digits[static_cast<std::size_t>(d - 1)] = lv.slot.at(index);
    index = lv.parent[index];
  }
  return CodePoint(std::move(digits));
}

double TreeRealization::level_sum(int k, double alpha) const {
  double s = 0.0;
  for (double l : level(k).length) s += std::pow(l, alpha);
  return s;
}

void TreeRealization::write_csv(std::ostream& os) const {
  os << "code,depth,T,l,alive\n";
  const auto old_precision = os.precision(17);
  for (int k = 0; k <= depth(); ++k) {
    const TreeLevel& lv = level(k);
    for (std::size_t j = 0; j < lv.size(); ++j) {
      os << code(k, j).to_string() << ',' << k << ',' << lv.ratio[j] << ',' << lv.length[j] << ','
         << (lv.length[j] > 0.0 ? 1 : 0) << '\n';
    }
  }
  os.precision(old_precision);
}

TreeRealization grow_tree(const ReductionLaw& law, int depth, Stream& stream, const GrowOptions& options) {
  law.validate();
  if (depth < 0) throw ContractError("grow_tree: depth must be >= 0");
  std::vector<TreeLevel> levels(1);
  levels[0].parent.push_back(0);
  levels[0].slot.push_back(0);
  levels[0].ratio.push_back(1.0);
  levels[0].length.push_back(1.0);
  std::size_t total = 1;
  std::vector<double> buf(law.slots);
  for (int k = 1; k <= depth; ++k) {
    const TreeLevel& prev = levels.back();
    TreeLevel next;
    for (std::size_t j = 0; j < prev.size(); ++j) {
      law.sample(stream, buf);
      for (std::size_t i = 0; i < buf.size(); ++i) {
        if (buf[i] <= 0.0) continue;
        if (++total > options.node_cap) {
          throw ResourceError("grow_tree: node cap of " + std::to_string(options.node_cap) +
                              " exceeded at depth " + std::to_string(k));
        }
        next.parent.push_back(static_cast<std::uint32_t>(j));
        next.slot.push_back(static_cast<std::uint32_t>(i + 1));
        next.ratio.push_back(buf[i]);
        next.length.push_back(buf[i] * prev.length[j]);
      }
    }
    levels.push_back(std::move(next));
    if (levels.back().size() == 0) {
      // Extinct: remaining generations are empty.
      for (int r = k + 1; r <= depth; ++r) levels.emplace_back();
      break;
    }
  }
  return TreeRealization(std::move(levels), law.slots, stream.id());
}

double estimate_extinction(const ReductionLaw& law, std::size_t samples, int depth, std::uint64_t seed,
                           unsigned jobs, const GrowOptions& options) {
  law.validate();
  if (samples < 1) throw ContractError("estimate_extinction: samples must be >= 1");
  std::vector<char> dead(samples, 0);
  parallel_for(samples, jobs, [&](std::size_t s) {
    Stream stream(seed, StreamStage::kExtinction, s);
    std::vector<double> buf(law.slots);
    std::size_t alive = 1, total = 1;
    for (int k = 1; k <= depth && alive > 0; ++k) {
      std::size_t next = 0;
      for (std::size_t j = 0; j < alive; ++j) {
        law.sample(stream, buf);
        next += static_cast<std::size_t>(std::count_if(buf.begin(), buf.end(), [](double t) { return t > 0.0; }));
      }
      total += next;
      if (total > options.node_cap) {
        throw ResourceError("estimate_extinction: node cap of " + std::to_string(options.node_cap) + " exceeded");
      }
      alive = next;
    }
    dead[s] = alive == 0 ? 1 : 0;
  });
  const auto extinct = std::count(dead.begin(), dead.end(), 1);
  return static_cast<double>(extinct) / static_cast<double>(samples);
}

}  // namespace packdim
