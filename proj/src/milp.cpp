#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "fleetplace/errors.hpp"
#include "fleetplace/exact.hpp"

namespace fleetplace {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Term {
  double coef;
  std::string var;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  char sense;  // 'E' or 'L'
  double rhs;
};

// One flat view of the model shared by the LP and MPS writers.
struct MilpModel {
  std::vector<Term> objective;      // cost * s_v_b_m
  std::vector<Row> rows;
  std::vector<std::string> variables;  // declaration order

  void add_var(const std::string& name) { variables.push_back(name); }
};

std::string serve_var(const Instance& inst, int vi, int mid) {
  const Vehicle& v = inst.fleet[static_cast<std::size_t>(vi)];
  return (v.kind == VehicleKind::RotaryWing ? "v_" : "w_") +
         std::to_string(v.id) + "_" + std::to_string(mid);
}

std::string place_var(const Instance& inst, int vi, int bi) {
  const Vehicle& v = inst.fleet[static_cast<std::size_t>(vi)];
  const Base& b = inst.bases[static_cast<std::size_t>(bi)];
  const char* prefix = v.kind == VehicleKind::FixedWing ? "x_"
                       : b.kind == BaseKind::Aerodrome  ? "y_"
                                                        : "z_";
  return prefix + std::to_string(v.id) + "_" + std::to_string(b.id);
}

std::string product_var(const Instance& inst, int vi, int bi, int mid) {
  return "s_" + std::to_string(inst.fleet[static_cast<std::size_t>(vi)].id) +
         "_" + std::to_string(inst.bases[static_cast<std::size_t>(bi)].id) +
         "_" + std::to_string(mid);
}

MilpModel build_model(const Instance& inst, const DistanceTable& t) {
  MilpModel model;
  const int n_vehicles = static_cast<int>(inst.fleet.size());
  const int n_bases = static_cast<int>(inst.bases.size());

  // Serve variables, then placement variables, then products.
  for (const Mission& m : inst.missions)
    for (int vi = 0; vi < n_vehicles; ++vi)
      model.add_var(serve_var(inst, vi, m.id));
  for (int vi = 0; vi < n_vehicles; ++vi)
    for (int bi = 0; bi < n_bases; ++bi)
      if (compatible_vehicle_base(inst.fleet[static_cast<std::size_t>(vi)],
                                  inst.bases[static_cast<std::size_t>(bi)]))
        model.add_var(place_var(inst, vi, bi));
  for (const Mission& m : inst.missions)
    for (int vi = 0; vi < n_vehicles; ++vi)
      for (int bi = 0; bi < n_bases; ++bi)
        if (compatible_vehicle_base(inst.fleet[static_cast<std::size_t>(vi)],
                                    inst.bases[static_cast<std::size_t>(bi)]))
          model.add_var(product_var(inst, vi, bi, m.id));

  // Objective: each mission pays the cost of the base its serving vehicle
  // occupies. s_v_b_m = serve AND placed, forced by the rows below.
  for (std::size_t mi = 0; mi < inst.missions.size(); ++mi) {
    const Mission& m = inst.missions[mi];
    for (int vi = 0; vi < n_vehicles; ++vi)
      for (int bi = 0; bi < n_bases; ++bi)
        if (compatible_vehicle_base(inst.fleet[static_cast<std::size_t>(vi)],
                                    inst.bases[static_cast<std::size_t>(bi)]))
          model.objective.push_back(
              {t.cost(static_cast<Eigen::Index>(mi), bi),
               product_var(inst, vi, bi, m.id)});
  }

  // Every mission served by exactly one vehicle.
  for (const Mission& m : inst.missions) {
    Row r{"serve_" + std::to_string(m.id), {}, 'E', 1.0};
    for (int vi = 0; vi < n_vehicles; ++vi)
      r.terms.push_back({1.0, serve_var(inst, vi, m.id)});
    model.rows.push_back(std::move(r));
  }

  // Every vehicle on exactly one compatible base.
  for (int vi = 0; vi < n_vehicles; ++vi) {
    Row r{"place_" + std::to_string(inst.fleet[static_cast<std::size_t>(vi)].id),
          {}, 'E', 1.0};
    for (int bi = 0; bi < n_bases; ++bi)
      if (compatible_vehicle_base(inst.fleet[static_cast<std::size_t>(vi)],
                                  inst.bases[static_cast<std::size_t>(bi)]))
        r.terms.push_back({1.0, place_var(inst, vi, bi)});
    model.rows.push_back(std::move(r));
  }

  // At most one vehicle per base.
  for (int bi = 0; bi < n_bases; ++bi) {
    Row r{"occupy_" + std::to_string(inst.bases[static_cast<std::size_t>(bi)].id),
          {}, 'L', 1.0};
    for (int vi = 0; vi < n_vehicles; ++vi)
      if (compatible_vehicle_base(inst.fleet[static_cast<std::size_t>(vi)],
                                  inst.bases[static_cast<std::size_t>(bi)]))
        r.terms.push_back({1.0, place_var(inst, vi, bi)});
    model.rows.push_back(std::move(r));
  }

  // Serving requires being placed, per vehicle and mission.
  for (const Mission& m : inst.missions) {
    for (int vi = 0; vi < n_vehicles; ++vi) {
      Row r{"link_" +
                std::to_string(inst.fleet[static_cast<std::size_t>(vi)].id) +
                "_" + std::to_string(m.id),
            {}, 'L', 0.0};
      r.terms.push_back({1.0, serve_var(inst, vi, m.id)});
      for (int bi = 0; bi < n_bases; ++bi)
        if (compatible_vehicle_base(inst.fleet[static_cast<std::size_t>(vi)],
                                    inst.bases[static_cast<std::size_t>(bi)]))
          r.terms.push_back({-1.0, place_var(inst, vi, bi)});
      model.rows.push_back(std::move(r));
    }
  }

  // Rotary-only missions pin every fixed-wing serve variable to zero.
  for (const Mission& m : inst.missions) {
    if (!m.rotary_only) continue;
    for (int vi = 0; vi < n_vehicles; ++vi) {
      if (inst.fleet[static_cast<std::size_t>(vi)].kind != VehicleKind::FixedWing)
        continue;
      Row r{"rotary_" +
                std::to_string(inst.fleet[static_cast<std::size_t>(vi)].id) +
                "_" + std::to_string(m.id),
            {}, 'L', 0.0};
      r.terms.push_back({1.0, serve_var(inst, vi, m.id)});
      model.rows.push_back(std::move(r));
    }
  }

  // Product linearization: s = serve AND placed.
  for (const Mission& m : inst.missions) {
    for (int vi = 0; vi < n_vehicles; ++vi) {
      for (int bi = 0; bi < n_bases; ++bi) {
        if (!compatible_vehicle_base(inst.fleet[static_cast<std::size_t>(vi)],
                                     inst.bases[static_cast<std::size_t>(bi)]))
          continue;
        const std::string s = product_var(inst, vi, bi, m.id);
        const std::string tag =
            std::to_string(inst.fleet[static_cast<std::size_t>(vi)].id) + "_" +
            std::to_string(inst.bases[static_cast<std::size_t>(bi)].id) + "_" +
            std::to_string(m.id);
        Row r1{"prod_serve_" + tag, {}, 'L', 0.0};
        r1.terms.push_back({1.0, s});
        r1.terms.push_back({-1.0, serve_var(inst, vi, m.id)});
        model.rows.push_back(std::move(r1));
        Row r2{"prod_place_" + tag, {}, 'L', 0.0};
        r2.terms.push_back({1.0, s});
        r2.terms.push_back({-1.0, place_var(inst, vi, bi)});
        model.rows.push_back(std::move(r2));
        Row r3{"prod_both_" + tag, {}, 'L', 1.0};
        r3.terms.push_back({1.0, serve_var(inst, vi, m.id)});
        r3.terms.push_back({1.0, place_var(inst, vi, bi)});
        r3.terms.push_back({-1.0, s});
        model.rows.push_back(std::move(r3));
      }
    }
  }

  return model;
}

std::string write_lp(const MilpModel& model) {
  std::ostringstream out;
  out << "\\ binary fleet placement model\n";
  out << "Minimize\n obj:";
  for (std::size_t i = 0; i < model.objective.size(); ++i) {
    const Term& term = model.objective[i];
    out << (i == 0 ? " " : " + ") << num(term.coef) << ' ' << term.var;
    if ((i + 1) % 4 == 0) out << "\n    ";
  }
  out << "\nSubject To\n";
  for (const Row& r : model.rows) {
    out << ' ' << r.name << ':';
    for (const Term& term : r.terms) {
      if (term.coef >= 0.0)
        out << " + " << num(term.coef) << ' ' << term.var;
      else
        out << " - " << num(-term.coef) << ' ' << term.var;
    }
    out << (r.sense == 'E' ? " = " : " <= ") << num(r.rhs) << '\n';
  }
  out << "Binary\n";
  for (const std::string& v : model.variables) out << ' ' << v << '\n';
  out << "End\n";
  return out.str();
}

// Fixed-field style MPS line; fields always keep at least one separating
// space even when a name overflows its column.
void mps_field(std::ostringstream& out, const std::string& a,
               const std::string& b, const std::string& c = "",
               const std::string& d = "", const std::string& e = "") {
  const auto pad_to = [&out](const std::string& field, std::size_t width) {
    out << field << ' ';
    for (std::size_t i = field.size() + 1; i < width; ++i) out << ' ';
  };
  out << "    ";
  pad_to(a, 10);
  if (c.empty()) {
    out << b;
  } else {
    pad_to(b, 10);
    if (d.empty()) {
      out << c;
    } else {
      pad_to(c, 15);
      if (e.empty()) {
        out << d;
      } else {
        pad_to(d, 10);
        out << e;
      }
    }
  }
  out << '\n';
}

std::string write_mps(const MilpModel& model) {
  std::ostringstream out;
  out << "NAME          FLEETPLACE\n";
  out << "ROWS\n";
  out << " N  COST\n";
  for (const Row& r : model.rows)
    out << ' ' << r.sense << "  " << r.name << '\n';

  // Column-major entries: one pass over the rows builds each variable's
  // (row, coef) list, objective first.
  std::map<std::string, std::vector<std::pair<std::string, double>>> columns;
  for (const Term& term : model.objective)
    columns[term.var].emplace_back("COST", term.coef);
  for (const Row& r : model.rows)
    for (const Term& term : r.terms)
      columns[term.var].emplace_back(r.name, term.coef);

  out << "COLUMNS\n";
  out << "    MARKER                 'MARKER'                 'INTORG'\n";
  for (const std::string& var : model.variables) {
    const auto& entries = columns[var];
    for (std::size_t i = 0; i < entries.size(); i += 2) {
      if (i + 1 < entries.size())
        mps_field(out, var, entries[i].first, num(entries[i].second),
                  entries[i + 1].first, num(entries[i + 1].second));
      else
        mps_field(out, var, entries[i].first, num(entries[i].second));
    }
  }
  out << "    MARKER                 'MARKER'                 'INTEND'\n";

  out << "RHS\n";
  for (const Row& r : model.rows)
    if (r.rhs != 0.0) mps_field(out, "RHS", r.name, num(r.rhs));

  out << "BOUNDS\n";
  for (const std::string& var : model.variables)
    out << " BV BND       " << var << '\n';
  out << "ENDATA\n";
  return out.str();
}

}  // namespace

std::string export_milp(const Instance& inst, const DistanceTable& t,
                        MilpFormat format) {
  validate_instance(inst);
  const MilpModel model = build_model(inst, t);
  return format == MilpFormat::Lp ? write_lp(model) : write_mps(model);
}

namespace {

// Variable name -> (kind letter, ids). Throws UnknownVariableError on any
// name outside the exporter's scheme.
struct ParsedVar {
  char kind;
  std::vector<int> ids;
};

ParsedVar parse_var_name(const std::string& name) {
  ParsedVar p{};
  if (name.size() < 2 || name[1] != '_' ||
      std::string("vwxyzs").find(name[0]) == std::string::npos)
    throw UnknownVariableError("unknown variable '" + name + "'");
  p.kind = name[0];
  std::size_t pos = 2;
  while (pos <= name.size()) {
    const std::size_t next = name.find('_', pos);
    const std::string part =
        name.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      std::size_t used = 0;
      p.ids.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UnknownVariableError("unknown variable '" + name + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  const std::size_t expected = p.kind == 's' ? 3 : 2;
  if (p.ids.size() != expected)
    throw UnknownVariableError("unknown variable '" + name + "'");
  return p;
}

}  // namespace

Assignment import_solution(std::istream& text, const Instance& inst) {
  Assignment a;
  std::string line;
  int line_no = 0;
  while (std::getline(text, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line[0] == '\\') continue;
    std::istringstream row(line);
    std::string name;
    double value = 0.0;
    if (!(row >> name >> value))
      throw ParseError(line_no, 1, "expected 'name value'");

    bool on;
    if (std::abs(value) <= 1e-6) {
      on = false;
    } else if (std::abs(value - 1.0) <= 1e-6) {
      on = true;
    } else {
      throw NonBinaryValueError("variable " + name + " has non-binary value " +
                                std::to_string(value));
    }

    const ParsedVar p = parse_var_name(name);
    auto vehicle_of = [&](int id, bool rotary) -> const Vehicle& {
      const int vi = inst.vehicle_index(id);
      if (vi < 0) throw UnknownVariableError("unknown vehicle in '" + name + "'");
      const Vehicle& v = inst.fleet[static_cast<std::size_t>(vi)];
      if ((v.kind == VehicleKind::RotaryWing) != rotary)
        throw UnknownVariableError("vehicle kind mismatch in '" + name + "'");
      return v;
    };
    auto base_of = [&](int id, BaseKind kind) -> const Base& {
      const int bi = inst.base_index(id);
      if (bi < 0) throw UnknownVariableError("unknown base in '" + name + "'");
      const Base& b = inst.bases[static_cast<std::size_t>(bi)];
      if (b.kind != kind)
        throw UnknownVariableError("base kind mismatch in '" + name + "'");
      return b;
    };
    auto mission_of = [&](int id) {
      if (inst.mission_index(id) < 0)
        throw UnknownVariableError("unknown mission in '" + name + "'");
      return id;
    };

    switch (p.kind) {
      case 'v':
      case 'w': {
        const Vehicle& v = vehicle_of(p.ids[0], p.kind == 'v');
        const int mid = mission_of(p.ids[1]);
        if (!on) break;
        if (a.service.contains(mid) && a.service[mid] != v.id)
          throw InfeasibleReconstructionError(
              "mission " + std::to_string(mid) + " served twice");
        a.service[mid] = v.id;
        break;
      }
      case 'x': {
        const Vehicle& v = vehicle_of(p.ids[0], false);
        const Base& b = base_of(p.ids[1], BaseKind::Aerodrome);
        if (!on) break;
        if (a.placement.contains(v.id) && a.placement[v.id] != b.id)
          throw InfeasibleReconstructionError(
              "vehicle " + std::to_string(v.id) + " placed twice");
        a.placement[v.id] = b.id;
        break;
      }
      case 'y':
      case 'z': {
        const Vehicle& v = vehicle_of(p.ids[0], true);
        const Base& b = base_of(
            p.ids[1], p.kind == 'y' ? BaseKind::Aerodrome : BaseKind::Helipad);
        if (!on) break;
        if (a.placement.contains(v.id) && a.placement[v.id] != b.id)
          throw InfeasibleReconstructionError(
              "vehicle " + std::to_string(v.id) + " placed twice");
        a.placement[v.id] = b.id;
        break;
      }
      case 's': {
        // Product variables are implied by the others; validate ids only.
        if (inst.vehicle_index(p.ids[0]) < 0)
          throw UnknownVariableError("unknown vehicle in '" + name + "'");
        if (inst.base_index(p.ids[1]) < 0)
          throw UnknownVariableError("unknown base in '" + name + "'");
        mission_of(p.ids[2]);
        break;
      }
      default:
        throw UnknownVariableError("unknown variable '" + name + "'");
    }
  }

  const auto violations = check_feasible(a, inst);
  if (!violations.empty())
    throw InfeasibleReconstructionError("imported solution infeasible: " +
                                        to_string(violations.front()));
  return a;
}

Assignment import_solution_file(const std::string& path, const Instance& inst) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return import_solution(in, inst);
}

}  // namespace fleetplace
