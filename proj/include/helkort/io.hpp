// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "helkort/analysis.hpp"

namespace helkort {

/// VTK XML unstructured-grid file (ascii payload, little-endian header) with
/// point data arrays "re", "im", "abs"; the finite element mesh is split
/// n_refine times for visualization (one split: 4 cells per triangle).
void write_vtu(const std::string& path, const FeFunction& field, int n_refine = 1);

/// Field samples on a samples x samples uniform grid over the unit square;
/// rows "x,y,re,im,abs" with a header row.
void write_field_csv(const std::string& path, const FeFunction& field, int samples);

/// Columns: level,h,dofs,errL2,errH1,errH2,rateH2.
void write_convergence_csv(const std::string& path, const ConvergenceTable& table);

/// Columns: index,lambda,k2,i_star,margin,pass.
void write_eigs_csv(const std::string& path, const ResonanceReport& report);

/// Coordinate text format, one entry per line: "i j re im".
void write_matrix_coordinate(const std::string& path, const SparseComplexMatrix& A);

/// Git-style blob hash: sha1("blob <size>\0" + bytes), lowercase hex.
std::string sha1_hex_blob(const std::string& bytes);
std::string sha1_file_blob(const std::string& path);

/// Flat key = value run manifest with content hashes of the outputs, so runs
/// can be replayed and compared byte for byte.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, int value);
  /// Records "output.<basename> = <sha1>".
  void add_output(const std::string& path);
  void write(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_double(double v);  ///< shortest round-trip decimal, '.' separator

}  // namespace helkort
