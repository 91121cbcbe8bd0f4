#include "gaplab/problem.hpp"

#include <charconv>

#include "gaplab/errors.hpp"

namespace gaplab {

std::string BoundaryCondition::describe() const {
  if (dirichlet_) return "dirichlet";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, alpha_);
  return std::string(buf, res.ptr);
}

Problem::Problem(double p, Potential potential, BoundaryCondition bc)
    : p_(p), potential_(std::move(potential)), bc_(bc) {
  if (!(p > 1.0) || !std::isfinite(p)) throw PreconditionError("problem exponent p must exceed 1");
  if (!bc.is_dirichlet() && !std::isfinite(bc.alpha()))
    throw PreconditionError("Robin parameter must be finite");
}

}  // namespace gaplab
