#pragma once

#include <map>
#include <string>
#include <vector>

#include "cdflp/rational.hpp"

namespace cdflp {

enum class RelOp { LessEq, GreaterEq, Equal };

struct VarDecl {
  std::string name;
  Rational lower;
  Rational upper;
  bool integral = false;
};

struct LinTerm {
  std::string var;
  Rational coeff;
};

struct LinRow {
  std::string name;
  std::vector<LinTerm> terms;
  RelOp op = RelOp::LessEq;
  Rational rhs;
};

// A self-contained bundle of auxiliary variable declarations and linear rows
// over named master variables, addable to any model-mode master. Auxiliaries
// are declared in an order such that assigning each one its maximum value
// given its predecessors (see max_auxiliaries_then_check) attains the block's
// best case at integer master points.
struct LinearBlock {
  std::vector<VarDecl> auxiliaries;
  std::vector<LinRow> rows;
};

using Assignment = std::map<std::string, Rational>;

inline Rational evaluate_terms(const std::vector<LinTerm>& terms, const Assignment& values) {
  Rational total;
  for (const auto& term : terms) {
    auto it = values.find(term.var);
    if (it == values.end()) throw std::runtime_error("unassigned variable: " + term.var);
    total += term.coeff * it->second;
  }
  return total;
}

inline bool row_satisfied(const LinRow& row, const Assignment& values) {
  Rational lhs = evaluate_terms(row.terms, values);
  switch (row.op) {
    case RelOp::LessEq: return lhs <= row.rhs;
    case RelOp::GreaterEq: return lhs >= row.rhs;
    case RelOp::Equal: return lhs == row.rhs;
  }
  return false;
}

// Decides whether the block admits the given integer master assignment:
// auxiliaries are set greedily to their largest value allowed by the rows in
// which every other variable is already known (declaration order makes this
// well defined for the blocks produced here), then every row is checked.
inline bool max_auxiliaries_then_check(const LinearBlock& block, Assignment values) {
  for (const auto& aux : block.auxiliaries) {
    Rational best = aux.upper;
    for (const auto& row : block.rows) {
      Rational coeff;
      Rational rest;
      bool involved = false;
      bool computable = true;
      for (const auto& term : row.terms) {
        if (term.var == aux.name) {
          coeff = term.coeff;
          involved = true;
        } else if (auto it = values.find(term.var); it != values.end()) {
          rest += term.coeff * it->second;
        } else {
          computable = false;
          break;
        }
      }
      if (!involved || !computable || coeff.is_zero()) continue;
      bool upperBounding = (row.op == RelOp::LessEq && coeff > Rational(0)) ||
                           (row.op == RelOp::GreaterEq && coeff < Rational(0));
      if (row.op == RelOp::Equal) {
        Rational forced = (row.rhs - rest) / coeff;
        if (forced < best) best = forced;
        continue;
      }
      if (!upperBounding) continue;
      Rational bound = (row.rhs - rest) / coeff;
      if (bound < best) best = bound;
    }
    if (best < aux.lower) return false;
    values[aux.name] = best;
  }
  for (const auto& row : block.rows)
    if (!row_satisfied(row, values)) return false;
  return true;
}

// Canonical master variable names; these are also the LP-export names.
inline std::string var_y(int period, int location) {
  return "y_" + std::to_string(period) + "_" + std::to_string(location);
}
inline std::string var_z(int period, int location) {
  return "z_" + std::to_string(period) + "_" + std::to_string(location);
}
inline std::string var_w(int period, int location) {
  return "w_" + std::to_string(period) + "_" + std::to_string(location);
}
inline std::string var_u(int windowStart, int period, int location, int customer) {
  return "u_" + std::to_string(windowStart) + "_" + std::to_string(period) + "_" +
         std::to_string(location) + "_" + std::to_string(customer);
}
inline std::string var_v(int windowStart, int period, int location, int customer) {
  return "v_" + std::to_string(windowStart) + "_" + std::to_string(period) + "_" +
         std::to_string(location) + "_" + std::to_string(customer);
}
inline std::string var_tail(int customer, int lastCapture) {
  return "tail_" + std::to_string(customer) + "_" + std::to_string(lastCapture);
}

}  // namespace cdflp
