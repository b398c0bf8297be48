#include "mapfr/smt/session.hpp"

#include <cstdlib>

#include "mapfr/errors.hpp"
#include "mapfr/smt/lra_solver.hpp"

namespace mapfr::smt {

std::unique_ptr<SolverSession> make_session(const std::string& backend) {
  std::string choice = backend;
  if (choice.empty()) {
    const char* env = std::getenv("MAPFR_SMT_BACKEND");
    choice = env ? env : "internal";
  }
  if (choice == "internal") return make_internal_session();
  throw BackendError("unknown SMT backend '" + choice + "'");
}

}  // namespace mapfr::smt
