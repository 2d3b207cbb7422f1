#include "opharm/error.hpp"

namespace opharm {

void throw_shape(const std::string& what) { throw ShapeError("shape error: " + what); }

void throw_domain(const std::string& what) { throw DomainError("domain error: " + what); }

}  // namespace opharm
