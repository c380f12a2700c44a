#include "hdc/lineage.hpp"

#include <algorithm>
#include <sstream>

#include "hdc/errors.hpp"

namespace hdc {

LineageId::LineageId(int root) : root_(root) {
  if (root < 1) throw InvalidInput("lineage root index must be >= 1");
}

LineageId LineageId::child(int digit) const {
  if (digit != 1 && digit != 2) throw InvalidInput("lineage digit must be 1 or 2");
  LineageId out = *this;
  out.path_.push_back(static_cast<std::uint8_t>(digit));
  return out;
}

bool LineageId::is_ancestor_of(const LineageId& other) const {
  return root_ == other.root_ && path_.size() < other.path_.size() &&
         std::equal(path_.begin(), path_.end(), other.path_.begin());
}

std::string LineageId::str() const {
  std::string out = std::to_string(root_);
  for (auto d : path_) {
    out += '.';
    out += static_cast<char>('0' + d);
  }
  return out;
}

LineageId LineageId::parse(const std::string& text) {
  std::istringstream in(text);
  std::string part;
  if (!std::getline(in, part, '.')) throw InvalidInput("empty lineage id");
  LineageId id(std::stoi(part));
  while (std::getline(in, part, '.')) {
    if (part != "1" && part != "2") throw InvalidInput("bad lineage digit in '" + text + "'");
    id = id.child(part[0] - '0');
  }
  return id;
}

}  // namespace hdc
