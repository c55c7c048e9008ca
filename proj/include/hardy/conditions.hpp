#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hardy/exponents.hpp"
#include "hardy/measures.hpp"
#include "hardy/quasiconcave.hpp"
#include "hardy/weights.hpp"

namespace hardy {

// The six inequalities.  Wire ids are "3.1", "3.2", "5.1", "5.3", "5.5", "5.7".
enum class InequalityKind {
  IteratedHardy,     // L^q(w) norm of H_u(int_t^inf h)^p, L^1(v) right-hand side
  IteratedHardySup,  // the same with an L^inf(w) left-hand side
  MonotoneCone,      // ||H_u f||_{q,w} <= c ||f||_{p,v} over nonincreasing f
  MonotoneConeSup,   // q = inf
  Stieltjes,         // ||S h||_{q,w} <= c ||h||_{p,v}
  StieltjesSup,      // q = inf
};

const char* inequality_id(InequalityKind k);
InequalityKind parse_inequality_id(const std::string& id);
bool is_sup_kind(InequalityKind k);

struct InequalitySpec {
  InequalityKind kind = InequalityKind::IteratedHardy;
  Exponents ex;
  WeightFunction u, v, w;

  InequalitySpec() = default;
  InequalitySpec(InequalityKind kind, double p, double q, WeightFunction u, WeightFunction v, WeightFunction w);

  void validate() const;
  CumulativeWeight U() const { return CumulativeWeight(u); }
  CumulativeWeight V() const { return CumulativeWeight(v); }
};

struct ConditionOptions {
  Window window;
  int scan_points = 256;
};

struct ConditionReport {
  std::string formula;
  double value = 0;
  std::string regime;
  double error_est = 0;
  std::vector<std::string> warnings;
  double argmax = 0;  // maximizing x for sup functionals, 0 otherwise
};

// Local constants.
double local_B(const WeightFunction& u, const WeightFunction& v, double a, double b, double p);
double local_C(const WeightFunction& v, double a, double b);

ConditionReport condition_I(const InequalitySpec& spec, const ConditionOptions& opt = {});
ConditionReport condition_C(const InequalitySpec& spec, const ConditionOptions& opt = {});
ConditionReport condition_S(const InequalitySpec& spec, const ConditionOptions& opt = {});
// Dispatch on the inequality kind.
ConditionReport compute_condition(const InequalitySpec& spec, const ConditionOptions& opt = {});

// Hypothesis checks for the theorem that covers spec.
std::vector<std::string> hypothesis_warnings(const InequalitySpec& spec, const ConditionOptions& opt = {});

// The discretizing sequence used by the discrete conditions: built on the
// fundamental function of w dt with respect to U^{q/p} (integral kinds) or on
// the least U^{1/p}-quasiconcave majorant of w (sup kinds).
FundamentalFunction discretization_phi(const InequalitySpec& spec, const Window& window = {});

ConditionReport discrete_A(const InequalitySpec& spec, const DiscretizingSequence& seq, const FundamentalFunction& phi);
ConditionReport discrete_D(const InequalitySpec& spec, const DiscretizingSequence& seq, const FundamentalFunction& phi);

struct ChainReport {
  std::vector<std::pair<std::string, double>> values;  // A, A1..A5 or A, B1..B4
  double max_adjacent_ratio = 1;  // max over neighbours of max(x/y, y/x)
  std::string regime;
};

ChainReport chain_A(const InequalitySpec& spec, const DiscretizingSequence& seq, const FundamentalFunction& phi);
ChainReport chain_B(const InequalitySpec& spec, const DiscretizingSequence& seq, const FundamentalFunction& phi);

}  // namespace hardy
