#include <algorithm>
#include <sstream>

#include "fuzzoracle/space.hpp"
#include "fuzzoracle/trace.hpp"

namespace fuzzoracle {

namespace {

template <typename Range>
std::string join(const Range& values) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (const auto& v : values) {
    if (!first) os << ", ";
    os << v;
    first = false;
  }
  os << ')';
  return os.str();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string to_string(const StatePoint& state) {
  if (const auto* cell = std::get_if<GridCell>(&state)) {
    return "(" + std::to_string(cell->row) + ", " + std::to_string(cell->col) + ")";
  }
  return join(std::get<Coordinates>(state));
}

std::string to_string(const ActionPoint& action) {
  if (const auto* d = std::get_if<DiscreteAction>(&action)) return "#" + std::to_string(d->id);
  return join(std::get<ContinuousAction>(action).values);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(base) ^ stream) + index);
}

std::size_t RunLog::aborted_epochs() const {
  return static_cast<std::size_t>(
      std::count_if(epochs.begin(), epochs.end(), [](const EpochTrace& e) { return e.aborted; }));
}

}  // namespace fuzzoracle
