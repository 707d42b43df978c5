#include "coldchain/lp/mps.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "coldchain/model.hpp"

namespace coldchain::lp {

std::string mps_row_name(int row) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "R%07d", row + 1);
  return buf;
}

std::string mps_col_name(int col) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "C%07d", col + 1);
  return buf;
}

namespace {

std::string fmt_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

// fixed field starts: 2, 5, 15, 25 (0-based 1, 4, 14, 24)
void write_line(std::ostream& os, const std::string& f1, const std::string& f2,
                const std::string& f3 = "", const std::string& f4 = "") {
  std::string line = " " + f1;
  auto pad_to = [&line](std::size_t col) {
    if (line.size() < col) line.append(col - line.size(), ' ');
    else line.push_back(' ');
  };
  if (!f2.empty()) { pad_to(4); line += f2; }
  if (!f3.empty()) { pad_to(14); line += f3; }
  if (!f4.empty()) { pad_to(24); line += f4; }
  os << line << "\n";
}

} // namespace

void write_mps(const LinearProgram& lp, const std::string& path,
               const std::string& problem_name) {
  if (lp.num_cols == 0) throw Error("export_lp: no variables");
  std::ofstream os(path);
  if (!os) throw Error("export_lp: cannot open " + path);

  os << "NAME          " << problem_name << "\n";
  os << "OBJSENSE\n    MAX\n";
  os << "ROWS\n";
  os << " N  OBJ\n";
  for (int r = 0; r < lp.num_rows; ++r) {
    char s = static_cast<char>(lp.sense[r]);
    os << " " << s << "  " << mps_row_name(r) << "\n";
  }

  os << "COLUMNS\n";
  for (int j = 0; j < lp.num_cols; ++j) {
    const std::string cname = mps_col_name(j);
    if (lp.objective[j] != 0.0)
      write_line(os, "", cname, "OBJ", fmt_value(lp.objective[j]));
    for (std::int64_t k = lp.col_ptr[j]; k < lp.col_ptr[j + 1]; ++k)
      write_line(os, "", cname, mps_row_name(lp.row_index[k]), fmt_value(lp.value[k]));
  }

  os << "RHS\n";
  for (int r = 0; r < lp.num_rows; ++r)
    if (lp.rhs[r] != 0.0) write_line(os, "", "RHS", mps_row_name(r), fmt_value(lp.rhs[r]));

  os << "BOUNDS\n";
  for (int j = 0; j < lp.num_cols; ++j) {
    const double lo = lp.col_lb[j], hi = lp.col_ub[j];
    const std::string cname = mps_col_name(j);
    if (lo == -kInf && hi == kInf) {
      write_line(os, "FR", "BND", cname);
    } else if (lo == hi) {
      write_line(os, "FX", "BND", cname, fmt_value(lo));
    } else {
      if (lo == -kInf) write_line(os, "MI", "BND", cname);
      else if (lo != 0.0) write_line(os, "LO", "BND", cname, fmt_value(lo));
      if (hi != kInf) write_line(os, "UP", "BND", cname, fmt_value(hi));
    }
  }
  os << "ENDATA\n";
  if (!os) throw Error("export_lp: write failure on " + path);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

} // namespace

LinearProgram read_mps(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("read_mps: cannot open " + path);

  enum Section { None, Rows, Columns, Rhs, Ranges, Bounds, Done } section = None;
  bool maximize = false;
  bool objsense_pending = false;

  std::map<std::string, int> row_ids;   // constraint rows only
  std::string obj_row;
  std::vector<RowSense> senses;
  std::vector<double> rhs;

  std::map<std::string, int> col_ids;
  std::vector<std::string> col_order;
  std::vector<double> obj;
  std::vector<std::vector<std::pair<int, double>>> cols;  // (row, val)
  std::vector<double> lbs, ubs;
  std::vector<bool> lb_set, ub_set;

  auto get_col = [&](const std::string& name) {
    auto it = col_ids.find(name);
    if (it != col_ids.end()) return it->second;
    const int id = static_cast<int>(col_order.size());
    col_ids.emplace(name, id);
    col_order.push_back(name);
    obj.push_back(0.0);
    cols.emplace_back();
    lbs.push_back(0.0);
    ubs.push_back(kInf);
    lb_set.push_back(false);
    ub_set.push_back(false);
    return id;
  };

  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '*') continue;
    if (line[0] != ' ' && line[0] != '\t') {
      auto toks = tokenize(line);
      const std::string& head = toks.empty() ? line : toks[0];
      objsense_pending = false;
      if (head == "NAME") continue;
      if (head == "OBJSENSE") {
        if (toks.size() > 1) maximize = (toks[1] == "MAX" || toks[1] == "MAXIMIZE");
        else objsense_pending = true;
        continue;
      }
      if (head == "ROWS") { section = Rows; continue; }
      if (head == "COLUMNS") { section = Columns; continue; }
      if (head == "RHS") { section = Rhs; continue; }
      if (head == "RANGES") { section = Ranges; continue; }
      if (head == "BOUNDS") { section = Bounds; continue; }
      if (head == "ENDATA") { section = Done; break; }
      throw Error("read_mps: unknown section " + head);
    }
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (objsense_pending) {
      maximize = (toks[0] == "MAX" || toks[0] == "MAXIMIZE");
      objsense_pending = false;
      continue;
    }
    switch (section) {
      case Rows: {
        if (toks.size() < 2) throw Error("read_mps: bad ROWS line: " + line);
        const std::string type = toks[0];
        const std::string name = toks[1];
        if (type == "N") {
          if (obj_row.empty()) obj_row = name;
        } else if (type == "L" || type == "G" || type == "E") {
          row_ids.emplace(name, static_cast<int>(senses.size()));
          senses.push_back(type == "L" ? RowSense::LE
                                       : (type == "G" ? RowSense::GE : RowSense::EQ));
          rhs.push_back(0.0);
        } else {
          throw Error("read_mps: unknown row type " + type);
        }
        break;
      }
      case Columns: {
        if (toks.size() < 3) throw Error("read_mps: bad COLUMNS line: " + line);
        if (toks.size() >= 3 && toks[2] == "'MARKER'") break;  // no integer support
        const int j = get_col(toks[0]);
        for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
          const std::string& rname = toks[k];
          const double v = std::stod(toks[k + 1]);
          if (rname == obj_row) {
            obj[j] += v;
          } else {
            auto it = row_ids.find(rname);
            if (it == row_ids.end()) throw Error("read_mps: unknown row " + rname);
            cols[j].emplace_back(it->second, v);
          }
        }
        break;
      }
      case Rhs: {
        for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
          const std::string& rname = toks[k];
          if (rname == obj_row) continue;  // objective offset unsupported
          auto it = row_ids.find(rname);
          if (it == row_ids.end()) throw Error("read_mps: unknown RHS row " + rname);
          rhs[it->second] = std::stod(toks[k + 1]);
        }
        break;
      }
      case Ranges:
        throw Error("read_mps: RANGES not supported");
      case Bounds: {
        if (toks.size() < 3) throw Error("read_mps: bad BOUNDS line: " + line);
        const std::string& type = toks[0];
        const int j = get_col(toks[2]);
        const double v = toks.size() > 3 ? std::stod(toks[3]) : 0.0;
        if (type == "UP") { ubs[j] = v; ub_set[j] = true; }
        else if (type == "LO") { lbs[j] = v; lb_set[j] = true; }
        else if (type == "FX") { lbs[j] = ubs[j] = v; lb_set[j] = ub_set[j] = true; }
        else if (type == "FR") { lbs[j] = -kInf; ubs[j] = kInf; lb_set[j] = ub_set[j] = true; }
        else if (type == "MI") { lbs[j] = -kInf; lb_set[j] = true; }
        else if (type == "PL") { ubs[j] = kInf; ub_set[j] = true; }
        else throw Error("read_mps: unsupported bound type " + type);
        break;
      }
      default:
        throw Error("read_mps: data line outside a section: " + line);
    }
  }

  // UP with negative value and no LO set: conventionally lb drops to -inf
  for (std::size_t j = 0; j < col_order.size(); ++j)
    if (ub_set[j] && !lb_set[j] && ubs[j] < 0.0) lbs[j] = -kInf;

  LpBuilder builder;
  for (std::size_t j = 0; j < col_order.size(); ++j)
    builder.add_column(maximize ? obj[j] : -obj[j], lbs[j], ubs[j]);
  // assemble rows from column triplets
  std::vector<std::vector<int>> row_cols(senses.size());
  std::vector<std::vector<double>> row_vals(senses.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [r, v] : cols[j]) {
      row_cols[r].push_back(static_cast<int>(j));
      row_vals[r].push_back(v);
    }
  for (std::size_t r = 0; r < senses.size(); ++r)
    builder.add_row(senses[r], rhs[r], row_cols[r], row_vals[r]);
  // internal convention is maximization; minimize files load with negated
  // costs so callers see an equivalent max problem
  return lp;
}

void write_solution_file(const std::vector<double>& x, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  char buf[64];
  for (std::size_t j = 0; j < x.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%s %.17g\n", mps_col_name(static_cast<int>(j)).c_str(),
                  x[j]);
    os << buf;
  }
}

std::vector<double> read_solution_file(const std::string& path, int num_cols) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  std::vector<double> x(num_cols, 0.0);
  std::string name;
  double v;
  std::vector<std::string> unknown;
  while (is >> name >> v) {
    if (name.size() == 8 && name[0] == 'C') {
      const int id = std::atoi(name.c_str() + 1) - 1;
      if (id >= 0 && id < num_cols) {
        x[id] = v;
        continue;
      }
    }
    unknown.push_back(name);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown variable names:";
    for (const auto& u : unknown) msg += " " + u;
    throw Error(msg);
  }
  return x;
}

} // namespace coldchain::lp
