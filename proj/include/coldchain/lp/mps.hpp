#pragma once

#include <string>
#include <vector>

#include "coldchain/lp/problem.hpp"

namespace coldchain::lp {

/// Deterministic short names used in MPS files: rows R0000001.., columns
/// C0000001.. (1-based), objective row OBJ. Generated names keep the fixed
/// 8-character field width regardless of problem size.
std::string mps_row_name(int row);
std::string mps_col_name(int col);

/// Writes fixed-format MPS (ROWS/COLUMNS/RHS/BOUNDS, OBJSENSE MAX) with one
/// coefficient per line; values carry 15 significant digits so a round trip
/// through read_mps reproduces every coefficient. Throws Error on an empty
/// problem ("no variables") or io failure.
void write_mps(const LinearProgram& lp, const std::string& path,
               const std::string& problem_name = "COLDCHAIN");

/// Parses the subset emitted by write_mps plus the common fixed-format
/// variations (RANGES unsupported). Column order follows first appearance.
LinearProgram read_mps(const std::string& path);

/// Two-column solution files: "<name> <value>" per line, names as in the MPS
/// export. read returns values positioned by column id; unknown names throw.
void write_solution_file(const std::vector<double>& x, const std::string& path);
std::vector<double> read_solution_file(const std::string& path, int num_cols);

} // namespace coldchain::lp
