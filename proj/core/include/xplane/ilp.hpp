#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace xplane {

// Pure 0-1 integer linear program: binary variables, linear constraints
// (<= or =) and a linear objective.
enum class Sense : std::uint8_t { LessEqual, Equal };

struct Term {
  std::size_t var = 0;
  double coef = 0;
};

struct Constraint {
  std::string label;   // unique, e.g. "asic_sram[asic_only]"
  std::string family;  // shared by all constraints of one kind
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0;

  double lhs(const std::vector<std::uint8_t>& x) const noexcept;
  bool satisfied(const std::vector<std::uint8_t>& x) const noexcept;
};

// Slack below which a constraint counts as satisfied / tight.
double constraint_tolerance(double rhs) noexcept;

class IlpModel {
 public:
  std::size_t add_variable(std::string label);
  void add_constraint(Constraint c);

  std::size_t variable_count() const noexcept { return labels_.size(); }
  const std::string& variable_label(std::size_t v) const { return labels_.at(v); }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

  // Objective in the caller's sense; solve() minimizes when !maximize.
  void set_objective(std::vector<Term> terms, bool maximize);
  bool maximize() const noexcept { return maximize_; }
  const std::vector<Term>& objective() const noexcept { return objective_; }

  // Objective in the caller's sense, summed in term order.
  double objective_value(const std::vector<std::uint8_t>& x) const noexcept;
  // Objective as minimized by the solver.
  double cost(const std::vector<std::uint8_t>& x) const noexcept {
    const double v = objective_value(x);
    return maximize_ ? -v : v;
  }

  bool feasible(const std::vector<std::uint8_t>& x) const noexcept;
  std::optional<std::size_t> first_violated(const std::vector<std::uint8_t>& x) const noexcept;

  // Copy keeping only constraints whose family passes `keep`.
  IlpModel restricted(const std::function<bool(const std::string&)>& keep) const;

 private:
  std::vector<std::string> labels_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
  bool maximize_ = false;
};

// Strict weak order used to choose among solutions of equal cost; returns
// true when `a` should win over `b`.
using TieBreak =
    std::function<bool(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b)>;

struct BranchAndBoundStats {
  std::uint64_t nodes = 0;
  std::uint64_t leaves = 0;
  std::uint64_t pruned_infeasible = 0;
  std::uint64_t pruned_bound = 0;
};

// Exact depth-first branch and bound with bound propagation over the
// constraints. Returns the best assignment under (cost, tie_break), or
// nullopt when the model is infeasible.
std::optional<std::vector<std::uint8_t>> branch_and_bound(const IlpModel& model,
                                                          const TieBreak& tie_break = {},
                                                          BranchAndBoundStats* stats = nullptr);

}  // namespace xplane
