#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include "mapfr/smt/term.hpp"

namespace mapfr::smt {

enum class CheckResult { Sat, Unsat, Unknown };

// Exact assignment for every registered variable.
struct Model {
  std::map<std::string, Rational> reals;
  std::map<std::string, bool> bools;

  const Rational& real(const std::string& name) const;  // throws MalformedModel
  bool boolean(const std::string& name) const;          // throws MalformedModel

  // Exact re-evaluation of a term under this model (spot checks, tests).
  bool eval_bool(const Term& t) const;
  Rational eval_real(const Term& t) const;
};

struct CheckOutcome {
  CheckResult status = CheckResult::Unknown;
  Model model;  // populated only when status == Sat
};

// One incremental QF_LRA solving session. Assertions live at the scope depth
// current when asserted; pop retracts everything since the matching push.
// Variables persist across scopes. Not thread-safe; use one per solve.
class SolverSession {
 public:
  virtual ~SolverSession() = default;

  virtual void declare_real(const std::string& name) = 0;
  virtual void declare_bool(const std::string& name) = 0;

  virtual void assert_term(const Term& t) = 0;  // BackendError on ill-typed input

  virtual void push() = 0;
  virtual void pop() = 0;  // ScopeUnderflow at depth 0
  virtual int scope_depth() const = 0;

  virtual CheckOutcome check_sat(
      std::optional<std::chrono::milliseconds> budget = std::nullopt) = 0;

  // Advisory: prefer deciding this Boolean variable (or its negation, via a
  // Not node) with the given priority; higher wins, duplicates keep the
  // latest. Unregistered names warn once and are ignored.
  virtual void hint_branching(const Term& literal, int priority) = 0;

  // Current assertion stack as SMT-LIB text.
  virtual void dump_assertions(std::ostream& os) const = 0;

  virtual const char* backend_name() const = 0;
};

// Backend by name: "internal" (default), or "mock:<path>" reserved for tests.
// Empty string consults MAPFR_SMT_BACKEND, falling back to "internal".
// Unknown names throw BackendError.
std::unique_ptr<SolverSession> make_session(const std::string& backend = "");

}  // namespace mapfr::smt
