#include "packdim/random.hpp"

namespace packdim {

namespace {

std::mt19937_64 seeded_engine(const StreamId& id) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(id.seed), static_cast<std::uint32_t>(id.seed >> 32),
      static_cast<std::uint32_t>(id.stage),
      static_cast<std::uint32_t>(id.index), static_cast<std::uint32_t>(id.index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Stream::Stream(StreamId id) : id_(id), engine_(seeded_engine(id)) {}

double Stream::uniform_open() {
  for (;;) {
    const double u = uniform();
    if (u > 0.0) return u;
  }
}

double Stream::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

double Stream::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

std::uint64_t Stream::below(std::uint64_t n) {
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(engine_);
}

}  // namespace packdim
