#pragma once

// Test-side evaluator for the exported LP / MPS text. Parses the formats
// from their written grammar (not through the exporter's code) so that
// export soundness is checked through an independent route.

#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fleetplace/model.hpp"

namespace lp_eval {

struct LinTerm {
  double coef;
  std::string var;
};

struct LinRow {
  std::string name;
  std::vector<LinTerm> terms;
  char sense;  // 'E' or 'L'
  double rhs;
};

struct LinModel {
  std::vector<LinTerm> objective;
  std::vector<LinRow> rows;
  std::set<std::string> binaries;
};

inline bool is_number(const std::string& tok) {
  char* end = nullptr;
  std::strtod(tok.c_str(), &end);
  return end != nullptr && *end == '\0' && end != tok.c_str();
}

inline LinModel parse_lp(const std::string& text) {
  LinModel model;
  std::istringstream in(text);
  std::string line;
  enum { None, Objective, Rows, Binaries } section = None;

  std::vector<std::string> pending;  // tokens of the statement being built
  const auto flush_statement = [&](std::vector<std::string> toks) {
    if (toks.empty()) return;
    // "name:" ["+"|"-"] coef var ... (sense rhs)?
    LinRow row;
    std::size_t i = 0;
    if (!toks[0].empty() && toks[0].back() == ':') {
      row.name = toks[0].substr(0, toks[0].size() - 1);
      i = 1;
    }
    double sign = 1.0;
    bool has_sense = false;
    while (i < toks.size()) {
      const std::string& tok = toks[i];
      if (tok == "+") {
        sign = 1.0;
        ++i;
      } else if (tok == "-") {
        sign = -1.0;
        ++i;
      } else if (tok == "<=" || tok == "=<") {
        row.sense = 'L';
        has_sense = true;
        row.rhs = std::stod(toks.at(i + 1));
        i += 2;
      } else if (tok == "=") {
        row.sense = 'E';
        has_sense = true;
        row.rhs = std::stod(toks.at(i + 1));
        i += 2;
      } else if (is_number(tok)) {
        // coefficient followed by a variable
        row.terms.push_back({sign * std::stod(tok), toks.at(i + 1)});
        sign = 1.0;
        i += 2;
      } else {
        // bare variable, implicit coefficient 1
        row.terms.push_back({sign, tok});
        sign = 1.0;
        ++i;
      }
    }
    if (section == Objective) {
      for (const LinTerm& t : row.terms) model.objective.push_back(t);
    } else if (has_sense) {
      model.rows.push_back(std::move(row));
    }
  };

  std::vector<std::string> statement;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '\\') continue;  // comment
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;

    const std::string head = toks[0];
    if (head == "Minimize" || head == "Maximize") {
      section = Objective;
      continue;
    }
    if (head == "Subject") {  // "Subject To"
      flush_statement(statement);
      statement.clear();
      section = Rows;
      continue;
    }
    if (head == "Binary" || head == "Binaries") {
      flush_statement(statement);
      statement.clear();
      section = Binaries;
      continue;
    }
    if (head == "End") break;

    if (section == Binaries) {
      for (const std::string& v : toks) model.binaries.insert(v);
      continue;
    }
    // A token ending in ':' starts a new statement.
    if (!toks[0].empty() && toks[0].back() == ':') {
      flush_statement(statement);
      statement = toks;
    } else {
      statement.insert(statement.end(), toks.begin(), toks.end());
    }
  }
  flush_statement(statement);
  return model;
}

inline LinModel parse_mps(const std::string& text) {
  LinModel model;
  std::istringstream in(text);
  std::string line;
  enum { None, RowsSec, ColumnsSec, RhsSec, BoundsSec } section = None;
  std::map<std::string, char> row_sense;
  std::vector<std::string> row_order;
  std::map<std::string, std::vector<LinTerm>> row_terms;
  std::map<std::string, double> rhs;
  std::string objective_row;

  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    // Section headers start at column one; data lines are indented.
    const bool header = line[0] != ' ' && line[0] != '\t';
    if (header) {
      if (toks[0] == "ROWS") section = RowsSec;
      else if (toks[0] == "COLUMNS") section = ColumnsSec;
      else if (toks[0] == "RHS") section = RhsSec;
      else if (toks[0] == "BOUNDS") section = BoundsSec;
      else section = None;  // NAME, RANGES, ENDATA
      continue;
    }

    switch (section) {
      case RowsSec: {
        const char sense = toks.at(0).at(0);
        const std::string& name = toks.at(1);
        if (sense == 'N') {
          objective_row = name;
        } else {
          row_sense[name] = sense;
          row_order.push_back(name);
        }
        break;
      }
      case ColumnsSec: {
        if (toks.size() >= 3 && toks[1] == "'MARKER'") break;  // INTORG/INTEND
        const std::string& var = toks.at(0);
        for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
          const std::string& row = toks[i];
          const double coef = std::stod(toks[i + 1]);
          if (row == objective_row)
            model.objective.push_back({coef, var});
          else
            row_terms[row].push_back({coef, var});
        }
        break;
      }
      case RhsSec: {
        for (std::size_t i = 1; i + 1 < toks.size(); i += 2)
          rhs[toks[i]] = std::stod(toks[i + 1]);
        break;
      }
      case BoundsSec: {
        if (toks.at(0) == "BV") model.binaries.insert(toks.at(2));
        break;
      }
      default:
        break;
    }
  }

  for (const std::string& name : row_order) {
    LinRow row;
    row.name = name;
    row.sense = row_sense[name];
    row.terms = row_terms[name];
    row.rhs = rhs.count(name) ? rhs[name] : 0.0;
    model.rows.push_back(std::move(row));
  }
  return model;
}

inline double eval_objective(const LinModel& model,
                             const std::map<std::string, double>& x) {
  double total = 0.0;
  for (const LinTerm& t : model.objective) total += t.coef * x.at(t.var);
  return total;
}

// Empty string when satisfied, else the first broken row's name.
inline std::string first_broken_row(const LinModel& model,
                                    const std::map<std::string, double>& x) {
  for (const LinRow& row : model.rows) {
    double lhs = 0.0;
    for (const LinTerm& t : row.terms) lhs += t.coef * x.at(t.var);
    const bool ok = row.sense == 'E' ? std::abs(lhs - row.rhs) < 1e-9
                                     : lhs <= row.rhs + 1e-9;
    if (!ok) return row.name;
  }
  return {};
}

// Variable values implied by an assignment, following the exporter's
// documented naming scheme. Every binary in the model gets a value.
inline std::map<std::string, double> variable_values(
    const fleetplace::Instance& inst, const fleetplace::Assignment& a,
    const LinModel& model) {
  using namespace fleetplace;
  std::map<std::string, double> x;
  for (const std::string& v : model.binaries) x[v] = 0.0;

  const auto set_if_present = [&](const std::string& name) {
    const auto it = x.find(name);
    if (it != x.end()) it->second = 1.0;
  };

  for (const auto& [mid, vid] : a.service) {
    const Vehicle& v =
        inst.fleet[static_cast<std::size_t>(inst.vehicle_index(vid))];
    const char* prefix = v.kind == VehicleKind::RotaryWing ? "v_" : "w_";
    set_if_present(prefix + std::to_string(vid) + "_" + std::to_string(mid));
  }
  for (const auto& [vid, bid] : a.placement) {
    const Vehicle& v =
        inst.fleet[static_cast<std::size_t>(inst.vehicle_index(vid))];
    const Base& b = inst.bases[static_cast<std::size_t>(inst.base_index(bid))];
    const char* prefix = v.kind == VehicleKind::FixedWing  ? "x_"
                         : b.kind == BaseKind::Aerodrome   ? "y_"
                                                           : "z_";
    set_if_present(prefix + std::to_string(vid) + "_" + std::to_string(bid));
  }
  // Products: serve and placed.
  for (const auto& [mid, vid] : a.service) {
    const auto placed = a.placement.find(vid);
    if (placed == a.placement.end()) continue;
    set_if_present("s_" + std::to_string(vid) + "_" +
                   std::to_string(placed->second) + "_" + std::to_string(mid));
  }
  return x;
}

}  // namespace lp_eval
