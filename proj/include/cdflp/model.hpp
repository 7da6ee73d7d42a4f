#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "cdflp/cuts.hpp"
#include "cdflp/linear.hpp"
#include "cdflp/simulate.hpp"

namespace cdflp {

// The high-point relaxation: both players' schedule polytopes, the capture
// flow system over u/v, the preference rows, and McCormick envelopes for the
// co-location products w = y*z. The follower-optimality coupling is dropped;
// masters restore it with value-function cuts.
struct AbstractModel {
  std::vector<VarDecl> vars;
  std::vector<LinRow> rows;
  std::vector<LinTerm> objective;  // maximize
};

inline AbstractModel build_high_point_model(const Instance& inst) {
  AbstractModel model;
  const int T = inst.periodCount;
  const int I = inst.locationCount;
  const int J = inst.customerCount;

  for (int t = 1; t <= T; ++t)
    for (int i = 0; i < I; ++i) {
      model.vars.push_back({var_y(t, i), Rational(0), Rational(1), true});
      model.vars.push_back({var_z(t, i), Rational(0), Rational(1), true});
      model.vars.push_back({var_w(t, i), Rational(0), Rational(1), false});
    }
  for (int j = 0; j < J; ++j)
    for (int i : inst.rankings[j])
      for (int t = 1; t <= T; ++t)
        for (int l = 0; l < t; ++l) {
          model.vars.push_back({var_u(l, t, i, j), Rational(0), Rational(1), false});
          model.vars.push_back({var_v(l, t, i, j), Rational(0), Rational(1), false});
        }
  // Flow slack from each node to beyond the horizon: demand still unserved.
  for (int j = 0; j < J; ++j)
    for (int l = 0; l <= T; ++l)
      model.vars.push_back({var_tail(j, l), Rational(0), Rational(1), false});

  // Per-period budgets.
  for (int t = 1; t <= T; ++t) {
    LinRow yb{"budget_y_" + std::to_string(t), {}, RelOp::LessEq, Rational(inst.leaderBudget)};
    LinRow zb{"budget_z_" + std::to_string(t), {}, RelOp::LessEq, Rational(inst.followerBudget)};
    for (int i = 0; i < I; ++i) {
      yb.terms.push_back({var_y(t, i), Rational(1)});
      zb.terms.push_back({var_z(t, i), Rational(1)});
    }
    model.rows.push_back(std::move(yb));
    model.rows.push_back(std::move(zb));
  }

  // McCormick envelope of w = y*z.
  for (int t = 1; t <= T; ++t)
    for (int i = 0; i < I; ++i) {
      const std::string w = var_w(t, i), y = var_y(t, i), z = var_z(t, i);
      const std::string id = std::to_string(t) + "_" + std::to_string(i);
      model.rows.push_back({"mc1_" + id, {{w, Rational(1)}, {y, Rational(-1)}}, RelOp::LessEq,
                            Rational(0)});
      model.rows.push_back({"mc2_" + id, {{w, Rational(1)}, {z, Rational(-1)}}, RelOp::LessEq,
                            Rational(0)});
      model.rows.push_back({"mc3_" + id,
                            {{w, Rational(1)}, {y, Rational(-1)}, {z, Rational(-1)}},
                            RelOp::GreaterEq, Rational(-1)});
      model.rows.push_back({"mc4_" + id, {{w, Rational(1)}}, RelOp::GreaterEq, Rational(0)});
    }

  const Rational one(1);
  for (int j = 0; j < J; ++j) {
    const auto& pref = inst.rankings[j];
    for (int i : pref)
      for (int t = 1; t <= T; ++t) {
        const std::string id = std::to_string(i) + "_" + std::to_string(j) + "_" +
                               std::to_string(t);
        // Capture attribution only through open facilities; co-location
        // forces the split.
        LinRow capU{"capU_" + id, {}, RelOp::LessEq, Rational(0)};
        LinRow capV{"capV_" + id, {}, RelOp::LessEq, Rational(0)};
        for (int l = 0; l < t; ++l) {
          capU.terms.push_back({var_u(l, t, i, j), one});
          capV.terms.push_back({var_v(l, t, i, j), one});
        }
        capU.terms.push_back({var_y(t, i), -one});
        capU.terms.push_back({var_w(t, i), one - inst.rho});
        capV.terms.push_back({var_z(t, i), -one});
        capV.terms.push_back({var_w(t, i), inst.rho});
        model.rows.push_back(std::move(capU));
        model.rows.push_back(std::move(capV));

        // An open acceptable facility forces a capture at least as preferred.
        LinRow serveY{"serveY_" + id, {{var_y(t, i), one}}, RelOp::LessEq, Rational(0)};
        LinRow serveZ{"serveZ_" + id, {{var_z(t, i), one}}, RelOp::LessEq, Rational(0)};
        for (int k : pref) {
          for (int l = 0; l < t; ++l) {
            serveY.terms.push_back({var_u(l, t, k, j), -one});
            serveY.terms.push_back({var_v(l, t, k, j), -one});
            serveZ.terms.push_back({var_u(l, t, k, j), -one});
            serveZ.terms.push_back({var_v(l, t, k, j), -one});
          }
          if (k == i) break;
        }
        model.rows.push_back(std::move(serveY));
        model.rows.push_back(std::move(serveZ));

        // No capture through anything less preferred than an open facility.
        LinRow prefYU{"prefYU_" + id, {{var_y(t, i), one}}, RelOp::LessEq, one};
        LinRow prefZU{"prefZU_" + id, {{var_z(t, i), one}}, RelOp::LessEq, one};
        LinRow prefYV{"prefYV_" + id, {{var_y(t, i), one}}, RelOp::LessEq, one};
        LinRow prefZV{"prefZV_" + id, {{var_z(t, i), one}}, RelOp::LessEq, one};
        bool below = false;
        for (int k : pref) {
          if (below)
            for (int l = 0; l < t; ++l) {
              prefYU.terms.push_back({var_u(l, t, k, j), one});
              prefZU.terms.push_back({var_u(l, t, k, j), one});
              prefYV.terms.push_back({var_v(l, t, k, j), one});
              prefZV.terms.push_back({var_v(l, t, k, j), one});
            }
          if (k == i) below = true;
        }
        model.rows.push_back(std::move(prefYU));
        model.rows.push_back(std::move(prefZU));
        model.rows.push_back(std::move(prefYV));
        model.rows.push_back(std::move(prefZV));
      }

    // Flow conservation: one unit leaves the start node, and whatever enters
    // a period leaves it again (onwards or beyond the horizon).
    LinRow start{"flow_start_" + std::to_string(j), {}, RelOp::Equal, one};
    for (int i : pref)
      for (int t = 1; t <= T; ++t) {
        start.terms.push_back({var_u(0, t, i, j), one});
        start.terms.push_back({var_v(0, t, i, j), one});
      }
    start.terms.push_back({var_tail(j, 0), one});
    model.rows.push_back(std::move(start));

    for (int t = 1; t <= T; ++t) {
      LinRow node{"flow_" + std::to_string(j) + "_" + std::to_string(t), {}, RelOp::Equal,
                  Rational(0)};
      for (int i : pref) {
        for (int l = 0; l < t; ++l) {
          node.terms.push_back({var_u(l, t, i, j), one});
          node.terms.push_back({var_v(l, t, i, j), one});
        }
        for (int s = t + 1; s <= T; ++s) {
          node.terms.push_back({var_u(t, s, i, j), -one});
          node.terms.push_back({var_v(t, s, i, j), -one});
        }
      }
      node.terms.push_back({var_tail(j, t), -one});
      model.rows.push_back(std::move(node));
    }
  }

  for (int j = 0; j < J; ++j)
    for (int i : inst.rankings[j])
      for (int t = 1; t <= T; ++t)
        for (int l = 0; l < t; ++l)
          model.objective.push_back({var_u(l, t, i, j),
                                     Rational(inst.rewards[i]) *
                                         Rational(accumulated_demand(inst, j, l, t))});
  return model;
}

// The unique values every model variable takes once the schedules are fixed
// to integers: w is the product, u/v follow the capture trace, and the tail
// slack marks each customer's last capture.
inline Assignment deterministic_assignment(const Instance& inst, const Schedule& y,
                                           const Schedule& z) {
  Assignment values;
  for (int t = 1; t <= inst.periodCount; ++t)
    for (int i = 0; i < inst.locationCount; ++i) {
      const bool inY = y.opens(i, t);
      const bool inZ = z.opens(i, t);
      values[var_y(t, i)] = Rational(inY ? 1 : 0);
      values[var_z(t, i)] = Rational(inZ ? 1 : 0);
      values[var_w(t, i)] = Rational(inY && inZ ? 1 : 0);
    }
  for (int j = 0; j < inst.customerCount; ++j)
    for (int i : inst.rankings[j])
      for (int t = 1; t <= inst.periodCount; ++t)
        for (int l = 0; l < t; ++l) {
          values[var_u(l, t, i, j)] = Rational(0);
          values[var_v(l, t, i, j)] = Rational(0);
        }

  JointOutcome outcome = simulate_outcome(inst, y, z);
  std::vector<int> lastCapture(inst.customerCount, 0);
  for (const auto& ev : outcome.events) {
    lastCapture[ev.customer] = ev.period;
    const std::string u = var_u(ev.windowStart, ev.period, ev.location, ev.customer);
    const std::string v = var_v(ev.windowStart, ev.period, ev.location, ev.customer);
    switch (ev.owner) {
      case CaptureOwner::LeaderOnly: values[u] = Rational(1); break;
      case CaptureOwner::FollowerOnly: values[v] = Rational(1); break;
      case CaptureOwner::Shared:
        values[u] = inst.rho;
        values[v] = Rational(1) - inst.rho;
        break;
    }
  }
  for (int j = 0; j < inst.customerCount; ++j)
    for (int l = 0; l <= inst.periodCount; ++l)
      values[var_tail(j, l)] = Rational(lastCapture[j] == l ? 1 : 0);
  return values;
}

inline Rational objective_value(const AbstractModel& model, const Assignment& values) {
  return evaluate_terms(model.objective, values);
}

inline std::vector<std::string> violated_rows(const AbstractModel& model,
                                              const Assignment& values) {
  std::vector<std::string> bad;
  for (const auto& row : model.rows)
    if (!row_satisfied(row, values)) bad.push_back(row.name);
  for (const auto& var : model.vars) {
    const Rational& x = values.at(var.name);
    if (x < var.lower || x > var.upper) bad.push_back("bounds:" + var.name);
  }
  return bad;
}

// ---- LP-format export ----

namespace detail {

inline void write_coefficient(std::ostream& os, const Rational& c, const std::string& var,
                              bool first) {
  if (c >= Rational(0) && !first) os << " + ";
  if (c < Rational(0)) os << (first ? "- " : " - ");
  Rational mag = c < Rational(0) ? -c : c;
  if (mag.den() == 1)
    os << mag.num();
  else
    os << mag.to_double();
  os << " " << var;
}

inline void write_row(std::ostream& os, const LinRow& row) {
  os << " " << row.name << ": ";
  bool first = true;
  for (const auto& term : row.terms) {
    write_coefficient(os, term.coeff, term.var, first);
    first = false;
  }
  if (first) os << "0 " << (row.terms.empty() ? "" : "");
  switch (row.op) {
    case RelOp::LessEq: os << " <= "; break;
    case RelOp::GreaterEq: os << " >= "; break;
    case RelOp::Equal: os << " = "; break;
  }
  if (row.rhs.den() == 1)
    os << row.rhs.num();
  else
    os << row.rhs.to_double();
  os << "\n";
}

}  // namespace detail

inline std::string export_lp(const AbstractModel& model,
                             const std::vector<LinearBlock>& blocks = {}) {
  std::ostringstream os;
  os << "Maximize\n obj: ";
  bool first = true;
  for (const auto& term : model.objective) {
    detail::write_coefficient(os, term.coeff, term.var, first);
    first = false;
  }
  if (first) os << "0";
  os << "\nSubject To\n";
  for (const auto& row : model.rows) detail::write_row(os, row);
  for (const auto& block : blocks)
    for (const auto& row : block.rows) detail::write_row(os, row);
  os << "Bounds\n";
  auto writeBounds = [&](const VarDecl& var) {
    os << " ";
    os << (var.lower.den() == 1 ? std::to_string(var.lower.num())
                                : std::to_string(var.lower.to_double()));
    os << " <= " << var.name << " <= ";
    os << (var.upper.den() == 1 ? std::to_string(var.upper.num())
                                : std::to_string(var.upper.to_double()));
    os << "\n";
  };
  for (const auto& var : model.vars) writeBounds(var);
  for (const auto& block : blocks)
    for (const auto& var : block.auxiliaries) writeBounds(var);
  os << "Binary\n";
  for (const auto& var : model.vars)
    if (var.integral) os << " " << var.name << "\n";
  os << "End\n";
  return os.str();
}

}  // namespace cdflp
