#include "xplane/ilp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xplane {

double constraint_tolerance(double rhs) noexcept {
  return 1e-9 * std::max(1.0, std::abs(rhs));
}

double Constraint::lhs(const std::vector<std::uint8_t>& x) const noexcept {
  double sum = 0;
  for (const Term& t : terms) {
    if (x[t.var]) sum += t.coef;
  }
  return sum;
}

bool Constraint::satisfied(const std::vector<std::uint8_t>& x) const noexcept {
  const double v = lhs(x);
  const double tol = constraint_tolerance(rhs);
  if (v > rhs + tol) return false;
  return sense == Sense::LessEqual || v >= rhs - tol;
}

std::size_t IlpModel::add_variable(std::string label) {
  labels_.push_back(std::move(label));
  return labels_.size() - 1;
}

void IlpModel::add_constraint(Constraint c) {
  for (const Term& t : c.terms) {
    if (t.var >= labels_.size()) throw std::out_of_range("constraint on unknown variable");
  }
  constraints_.push_back(std::move(c));
}

void IlpModel::set_objective(std::vector<Term> terms, bool maximize) {
  objective_ = std::move(terms);
  maximize_ = maximize;
}

double IlpModel::objective_value(const std::vector<std::uint8_t>& x) const noexcept {
  double sum = 0;
  for (const Term& t : objective_) {
    if (x[t.var]) sum += t.coef;
  }
  return sum;
}

bool IlpModel::feasible(const std::vector<std::uint8_t>& x) const noexcept {
  return !first_violated(x).has_value();
}

std::optional<std::size_t> IlpModel::first_violated(
    const std::vector<std::uint8_t>& x) const noexcept {
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    if (!constraints_[i].satisfied(x)) return i;
  }
  return std::nullopt;
}

IlpModel IlpModel::restricted(const std::function<bool(const std::string&)>& keep) const {
  IlpModel out;
  out.labels_ = labels_;
  out.objective_ = objective_;
  out.maximize_ = maximize_;
  for (const Constraint& c : constraints_) {
    if (keep(c.family)) out.constraints_.push_back(c);
  }
  return out;
}

namespace {

constexpr std::uint8_t kFree = 2;

// One side of a constraint in <= form: sum(coef * x) <= rhs.
struct Row {
  std::vector<Term> terms;
  double rhs;
  double tol;
};

class Solver {
 public:
  Solver(const IlpModel& model, const TieBreak& tie_break, BranchAndBoundStats& stats)
      : model_(model), tie_break_(tie_break), stats_(stats) {
    const std::size_t n = model.variable_count();
    for (const Constraint& c : model.constraints()) {
      add_row(c.terms, c.rhs);
      if (c.sense == Sense::Equal) {
        std::vector<Term> neg = c.terms;
        for (Term& t : neg) t.coef = -t.coef;
        add_row(neg, -c.rhs);
      }
    }
    cost_coef_.assign(n, 0.0);
    for (const Term& t : model.objective()) {
      cost_coef_[t.var] += model.maximize() ? -t.coef : t.coef;
    }
  }

  std::optional<std::vector<std::uint8_t>> run() {
    std::vector<std::uint8_t> x(model_.variable_count(), kFree);
    search(x);
    return best_;
  }

 private:
  void add_row(const std::vector<Term>& terms, double rhs) {
    rows_.push_back({terms, rhs, constraint_tolerance(rhs)});
  }

  static double min_lhs(const Row& row, const std::vector<std::uint8_t>& x) {
    double sum = 0;
    for (const Term& t : row.terms) {
      if (x[t.var] == 1 || (x[t.var] == kFree && t.coef < 0)) sum += t.coef;
    }
    return sum;
  }

  // Fixes variables implied by the rows; false on a conflict.
  bool propagate(std::vector<std::uint8_t>& x) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Row& row : rows_) {
        const double lo = min_lhs(row, x);
        const double limit = row.rhs + row.tol;
        if (lo > limit) return false;
        for (const Term& t : row.terms) {
          if (x[t.var] != kFree || t.coef == 0) continue;
          // Raising lo by |coef| is what the opposite choice would cost.
          if (lo + std::abs(t.coef) > limit) {
            x[t.var] = t.coef > 0 ? 0 : 1;
            changed = true;
          }
        }
        if (changed) break;
      }
    }
    return true;
  }

  double lower_bound(const std::vector<std::uint8_t>& x) const {
    double sum = 0;
    for (std::size_t v = 0; v < x.size(); ++v) {
      if (x[v] == 1 || (x[v] == kFree && cost_coef_[v] < 0)) sum += cost_coef_[v];
    }
    return sum;
  }

  void search(std::vector<std::uint8_t> x) {
    ++stats_.nodes;
    if (!propagate(x)) {
      ++stats_.pruned_infeasible;
      return;
    }
    if (best_) {
      const double bound = lower_bound(x);
      if (bound > best_cost_ + constraint_tolerance(best_cost_)) {
        ++stats_.pruned_bound;
        return;
      }
    }
    const auto free_it = std::find(x.begin(), x.end(), kFree);
    if (free_it == x.end()) {
      ++stats_.leaves;
      offer(x);
      return;
    }
    const auto v = static_cast<std::size_t>(free_it - x.begin());
    for (std::uint8_t value : {std::uint8_t{1}, std::uint8_t{0}}) {
      std::vector<std::uint8_t> child = x;
      child[v] = value;
      search(std::move(child));
    }
  }

  void offer(const std::vector<std::uint8_t>& x) {
    // Propagation keeps rows satisfied only up to the relaxed bound; check
    // the real constraints on complete assignments.
    if (!model_.feasible(x)) {
      ++stats_.pruned_infeasible;
      return;
    }
    const double cost = model_.cost(x);
    const double tol = constraint_tolerance(best_cost_);
    if (!best_ || cost < best_cost_ - tol ||
        (cost <= best_cost_ + tol && tie_break_ && tie_break_(x, *best_))) {
      best_ = x;
      best_cost_ = cost;
    }
  }

  const IlpModel& model_;
  const TieBreak& tie_break_;
  BranchAndBoundStats& stats_;
  std::vector<Row> rows_;
  std::vector<double> cost_coef_;
  std::optional<std::vector<std::uint8_t>> best_;
  double best_cost_ = 0;
};

}  // namespace

std::optional<std::vector<std::uint8_t>> branch_and_bound(const IlpModel& model,
                                                          const TieBreak& tie_break,
                                                          BranchAndBoundStats* stats) {
  BranchAndBoundStats local;
  Solver solver(model, tie_break, stats ? *stats : local);
  return solver.run();
}

}  // namespace xplane
