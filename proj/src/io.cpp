// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#include "helkort/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace helkort {

std::string format_double(double v) {
  // shortest decimal that round-trips
  std::string best;
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double parsed = 0.0;
    std::sscanf(buf, "%lf", &parsed);
    if (parsed == v && (best.empty() || std::strlen(buf) < best.size())) best = buf;
  }
  return best;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

}  // namespace

void write_vtu(const std::string& path, const FeFunction& field, int n_refine) {
  const FeSpace& space = *field.space;
  TriMesh vis = space.mesh();
  for (int r = 0; r < n_refine; ++r) vis = refine_uniform(vis);

  std::vector<Complex> values(vis.n_vertices());
  for (int v = 0; v < vis.n_vertices(); ++v) values[v] = evaluate(field, vis.vertices[v], 0)[0];

  std::ofstream os = open_out(path);
  os << "<?xml version=\"1.0\"?>\n";
  os << "<VTKFile type=\"UnstructuredGrid\" version=\"0.1\" byte_order=\"LittleEndian\">\n";
  os << "  <UnstructuredGrid>\n";
  os << "    <Piece NumberOfPoints=\"" << vis.n_vertices() << "\" NumberOfCells=\""
     << vis.n_triangles() << "\">\n";
  os << "      <Points>\n";
  os << "        <DataArray type=\"Float64\" NumberOfComponents=\"3\" format=\"ascii\">\n";
  for (const auto& p : vis.vertices)
    os << "          " << format_double(p.x()) << " " << format_double(p.y()) << " 0\n";
  os << "        </DataArray>\n      </Points>\n";
  os << "      <Cells>\n";
  os << "        <DataArray type=\"Int32\" Name=\"connectivity\" format=\"ascii\">\n";
  for (const auto& t : vis.triangles) os << "          " << t[0] << " " << t[1] << " " << t[2] << "\n";
  os << "        </DataArray>\n";
  os << "        <DataArray type=\"Int32\" Name=\"offsets\" format=\"ascii\">\n          ";
  for (int t = 0; t < vis.n_triangles(); ++t) os << 3 * (t + 1) << " ";
  os << "\n        </DataArray>\n";
  os << "        <DataArray type=\"UInt8\" Name=\"types\" format=\"ascii\">\n          ";
  for (int t = 0; t < vis.n_triangles(); ++t) os << "5 ";
  os << "\n        </DataArray>\n      </Cells>\n";
  os << "      <PointData Scalars=\"abs\">\n";
  const char* names[3] = {"re", "im", "abs"};
  for (int comp = 0; comp < 3; ++comp) {
    os << "        <DataArray type=\"Float64\" Name=\"" << names[comp]
       << "\" format=\"ascii\">\n          ";
    for (const Complex& v : values) {
      const double x = comp == 0 ? v.real() : comp == 1 ? v.imag() : std::abs(v);
      os << format_double(x) << " ";
    }
    os << "\n        </DataArray>\n";
  }
  os << "      </PointData>\n    </Piece>\n  </UnstructuredGrid>\n</VTKFile>\n";
}

void write_field_csv(const std::string& path, const FeFunction& field, int samples) {
  if (samples < 2) throw std::invalid_argument("write_field_csv: need at least 2 samples per side");
  std::ofstream os = open_out(path);
  os << "x,y,re,im,abs\n";
  for (int j = 0; j < samples; ++j) {
    for (int i = 0; i < samples; ++i) {
      const Eigen::Vector2d p(static_cast<double>(i) / (samples - 1),
                              static_cast<double>(j) / (samples - 1));
      const Complex v = evaluate(field, p, 0)[0];
      os << format_double(p.x()) << "," << format_double(p.y()) << "," << format_double(v.real())
         << "," << format_double(v.imag()) << "," << format_double(std::abs(v)) << "\n";
    }
  }
}

void write_convergence_csv(const std::string& path, const ConvergenceTable& table) {
  std::ofstream os = open_out(path);
  os << "level,h,dofs,errL2,errH1,errH2,rateH2\n";
  for (const ConvergenceRow& r : table.rows)
    os << r.level << "," << format_double(r.h) << "," << r.dofs << "," << format_double(r.err_l2)
       << "," << format_double(r.err_h1) << "," << format_double(r.err_h2) << ","
       << format_double(r.rate_h2) << "\n";
}

void write_eigs_csv(const std::string& path, const ResonanceReport& report) {
  std::ofstream os = open_out(path);
  os << "index,lambda,k2,i_star,margin,pass\n";
  for (int i = 0; i < report.eigenvalues.size(); ++i)
    os << i + 1 << "," << format_double(report.eigenvalues[i]) << "," << format_double(report.k2)
       << "," << report.i_star << "," << format_double(report.margin) << ","
       << (report.pass ? 1 : 0) << "\n";
}

void write_matrix_coordinate(const std::string& path, const SparseComplexMatrix& A) {
  std::ofstream os = open_out(path);
  for (int r = 0; r < A.outerSize(); ++r)
    for (SparseComplexMatrix::InnerIterator it(A, r); it; ++it)
      os << it.row() << " " << it.col() << " " << format_double(it.value().real()) << " "
         << format_double(it.value().imag()) << "\n";
}

namespace {

// SHA-1 (FIPS 180-1), straightforward single-buffer implementation.
struct Sha1 {
  uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};

  static uint32_t rol(uint32_t x, int s) { return (x << s) | (x >> (32 - s)); }

  void process(const unsigned char* block) {
    uint32_t w[80];
    for (int i = 0; i < 16; ++i)
      w[i] = (uint32_t(block[4 * i]) << 24) | (uint32_t(block[4 * i + 1]) << 16) |
             (uint32_t(block[4 * i + 2]) << 8) | uint32_t(block[4 * i + 3]);
    for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
    uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int i = 0; i < 80; ++i) {
      uint32_t f, k;
      if (i < 20) {
        f = (b & c) | ((~b) & d);
        k = 0x5A827999u;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1u;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDCu;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6u;
      }
      const uint32_t tmp = rol(a, 5) + f + e + k + w[i];
      e = d;
      d = c;
      c = rol(b, 30);
      b = a;
      a = tmp;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
  }

  std::string digest(const std::string& data) {
    std::string msg = data;
    const uint64_t bits = uint64_t(data.size()) * 8;
    msg.push_back('\x80');
    while (msg.size() % 64 != 56) msg.push_back('\0');
    for (int i = 7; i >= 0; --i) msg.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    for (size_t off = 0; off < msg.size(); off += 64)
      process(reinterpret_cast<const unsigned char*>(msg.data()) + off);
    char out[41];
    for (int i = 0; i < 5; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
    return std::string(out, 40);
  }
};

}  // namespace

std::string sha1_hex_blob(const std::string& bytes) {
  std::string prefixed = "blob " + std::to_string(bytes.size());
  prefixed.push_back('\0');
  prefixed += bytes;
  Sha1 sha;
  return sha.digest(prefixed);
}

std::string sha1_file_blob(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for hashing: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return sha1_hex_blob(ss.str());
}

void Manifest::set(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}
void Manifest::set(const std::string& key, double value) { set(key, format_double(value)); }
void Manifest::set(const std::string& key, int value) { set(key, std::to_string(value)); }

void Manifest::add_output(const std::string& path) {
  const size_t slash = path.find_last_of('/');
  const std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  set("output." + base, sha1_file_blob(path));
}

void Manifest::write(const std::string& path) const {
  std::ofstream os = open_out(path);
  for (const auto& [key, value] : entries_) os << key << " = " << value << "\n";
}

}  // namespace helkort
