#pragma once

#include "mapfr/smt/session.hpp"

namespace mapfr::smt {

// The in-repo QF_LRA backend: CDCL over theory atoms with a simplex core on
// delta-rationals. Scopes are implemented with activation literals, so pop
// is cheap and variables survive it.
std::unique_ptr<SolverSession> make_internal_session();

}  // namespace mapfr::smt
