#ifndef DFC_IDENTITIES_HPP
#define DFC_IDENTITIES_HPP

#include "dfc/operators.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace dfc {

enum class IdentityId {
  SUM_DUAL_NABLA,
  SUM_DUAL_DELTA,
  INT_DUAL_1,
  INT_DUAL_N,
  RL_DUAL_NABLA,
  CAPUTO_DUAL_NABLA,
  RL_DUAL_DELTA,
  CAPUTO_DUAL_DELTA,
  SHIFT_LEFT_I,
  SHIFT_LEFT_II,
  SHIFT_RIGHT_I,
  SHIFT_RIGHT_II,
  CAPUTO_SHIFT_L,
  CAPUTO_SHIFT_R,
  COMM_ATO,
  COMM_TD,
  COMM_AtT,
  COMM_RN,
  COMM_LNG,
  COMM_RNG,
};

const std::vector<IdentityId> &all_identities();
std::string identity_name(IdentityId id);
IdentityId parse_identity(std::string_view name); // case-insensitive
// The commutation identities carrying a boundary or summation term.
bool has_boundary_term(IdentityId id);

struct IdentityParams {
  int p = 2;                       // INT_DUAL_N order, COMM_LNG / COMM_RNG p
  bool omit_boundary_term = false; // drop the correction of the COMM_* identities
  double tolerance = 1e-10;        // float backend, scaled by max(1, max |value|)
};

struct IdentityReport {
  IdentityId identity;
  std::string function;
  mpq_class alpha;
  Grid grid;
  std::string backend;
  std::size_t points_checked = 0;
  std::string max_dev; // exact text for rationals
  double max_dev_value = 0.0;
  double scale = 0.0; // max |value| over the common domain
  bool pass = false;
  std::string error;
};

// Evaluates both sides through the operators module and compares them on the
// intersection of their output windows. f lives on [a, b]. Throws
// DomainError on an empty overlap or an order the identity does not accept.
template <typename T>
IdentityReport check_identity(IdentityId id, const GridFunction<T> &f, const mpq_class &alpha,
                              const IdentityParams &params = {});

struct FunctionFamily {
  std::string name;
  std::function<GridFunction<mpq_class>(const Grid &)> make;
};

// {1, t, t^2, seeded random rationals}
std::vector<FunctionFamily> default_functions(unsigned long seed = 20240607);
std::vector<mpq_class> default_alphas();
std::vector<Grid> default_windows(); // a = 0, b - a in {4, 8, 16}

struct SuiteOptions {
  std::vector<IdentityId> identities = all_identities();
  IdentityParams params{};
  bool exact = true;
};

// Cross product identities x alphas x windows x functions, in that order.
// Per-check errors are recorded in the report rather than thrown.
std::vector<IdentityReport> run_suite(const std::vector<FunctionFamily> &functions,
                                      const std::vector<mpq_class> &alphas,
                                      const std::vector<Grid> &windows,
                                      const SuiteOptions &options = {});

bool all_pass(const std::vector<IdentityReport> &reports);

nlohmann::json to_json(const IdentityReport &r);
nlohmann::json to_json(const std::vector<IdentityReport> &reports);

} // namespace dfc

#endif
