#include "iag/trace.hpp"

#include <stdexcept>

namespace iag {

std::string method_name(Method method) {
  switch (method) {
    case Method::IAG: return "IAG";
    case Method::IAGM: return "IAG-M";
    case Method::IG: return "IG";
    case Method::IGM: return "IG-M";
    case Method::GD: return "GD";
  }
  throw std::logic_error("unreachable");
}

Method parse_method(const std::string& name) {
  if (name == "IAG") return Method::IAG;
  if (name == "IAG-M") return Method::IAGM;
  if (name == "IG") return Method::IG;
  if (name == "IG-M") return Method::IGM;
  if (name == "GD") return Method::GD;
  throw std::invalid_argument("unknown method: " + name);
}

}  // namespace iag
