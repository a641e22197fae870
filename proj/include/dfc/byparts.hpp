#ifndef DFC_BYPARTS_HPP
#define DFC_BYPARTS_HPP

#include "dfc/operators.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace dfc {

// LEFT: the a-anchored f side (Caputo, RL). RIGHT: their duals under t -> -t.
enum class SbpTheorem { SBP_CAPUTO_LEFT, SBP_RL_LEFT, SBP_CAPUTO_RIGHT, SBP_RL_RIGHT };

// literal:   the displayed statements.
// corrected: SBP_RL_LEFT with the right Caputo difference anchored at b-1, and
//            SBP_RL_RIGHT as the exact dual of that (f(s+1) on the left, left
//            Caputo anchored at a+1). Same as literal for the Caputo theorems.
// proof:     SBP_CAPUTO_RIGHT with the last sum running to b. f and g must then
//            be given on [a, b+1]; b is taken as top - 1.
enum class SbpReading { literal, corrected, proof };

struct SbpOptions {
  SbpReading reading = SbpReading::literal;
  // Drops the +-1 index shifts of SBP_CAPUTO_RIGHT / SBP_RL_RIGHT.
  bool shift_mutant = false;
  double tolerance = 1e-10; // float backend
};

const std::vector<SbpTheorem> &all_sbp_theorems();
std::string sbp_name(SbpTheorem th);
SbpTheorem parse_sbp_theorem(std::string_view name);
std::string reading_name(SbpReading r);
SbpReading parse_reading(std::string_view name);

template <typename T> struct SbpReport {
  SbpTheorem theorem;
  SbpReading reading;
  bool mutant;
  mpq_class alpha;
  Grid grid; // [a, b] of the theorem
  T lhs;
  T rhs_boundary;
  T rhs_sum;
  T deviation; // |lhs - (rhs_boundary + rhs_sum)|
  bool pass;
};

// Value of the theorem's "where ..." clause at its endpoint (b-1, a, a+1 or b
// of g's grid), checked against the operator evaluation there. DomainError for
// any other endpoint.
template <typename T>
T sbp_boundary_convention(SbpTheorem th, const GridFunction<T> &g, const mpq_class &alpha, const Point &endpoint);

// F(s)|_x^y is F(y) - F(x) whatever the order of x and y.
template <typename T>
SbpReport<T> sbp(SbpTheorem th, const GridFunction<T> &f, const GridFunction<T> &g, const mpq_class &alpha,
                 const SbpOptions &options = {});

template <typename T> nlohmann::json to_json(const SbpReport<T> &r);

} // namespace dfc

#endif
