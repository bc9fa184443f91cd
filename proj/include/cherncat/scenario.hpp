#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cherncat/homotopy.hpp"

namespace cherncat {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr int kMaxPolyDegree = 8;  // cap on scenario-supplied coefficient arrays

/// FNV-1a 64-bit digest of raw bytes, as a prefixed hex string.
inline std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4) os << ((h >> shift) & 0xF);
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace detail {

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline const Json* member_opt(const Json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

inline double parse_real(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

inline int parse_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<int>();
}

inline std::string parse_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

inline Cplx parse_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where + ": expected a complex number as [re, im]");
  return Cplx(j[0].get<double>(), j[1].get<double>());
}

/// Row-major matrix of [re, im] entries. A shape with a zero side may be
/// written [] or as the right number of empty rows.
inline Mat parse_matrix(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
  if (rows == 0 || cols == 0) {
    const bool empty_ok = j.is_array() && j.empty();
    bool rows_ok = j.is_array() && j.size() == static_cast<std::size_t>(rows);
    if (rows_ok)
      for (const Json& row : j)
        if (!row.is_array() || !row.empty()) rows_ok = false;
    if (!empty_ok && !rows_ok) throw ParseError(where + ": expected an empty matrix []");
    return Mat::Zero(rows, cols);
  }
  if (!j.is_array() || j.size() != static_cast<std::size_t>(rows))
    throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
  Mat out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(cols))
      throw ParseError(where + "[" + std::to_string(r) + "]: expected " + std::to_string(cols) + " entries");
    for (Eigen::Index c = 0; c < cols; ++c)
      out(r, c) = parse_complex(row[static_cast<std::size_t>(c)],
                                where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return out;
}

/// Coefficient array, lowest degree first; [] is the zero polynomial.
inline Polynomial parse_poly(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a coefficient array");
  if (j.size() > static_cast<std::size_t>(kMaxPolyDegree) + 1)
    throw ParseError(where + ": polynomial degree exceeds the cap of " + std::to_string(kMaxPolyDegree));
  Polynomial out;
  out.coeffs.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.coeffs.push_back(parse_complex(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline PolyMat parse_poly_mat(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
  if (rows == 0 || cols == 0) {
    const bool empty_ok = j.is_array() && j.empty();
    bool rows_ok = j.is_array() && j.size() == static_cast<std::size_t>(rows);
    if (rows_ok)
      for (const Json& row : j)
        if (!row.is_array() || !row.empty()) rows_ok = false;
    if (!empty_ok && !rows_ok) throw ParseError(where + ": expected an empty matrix []");
    return PolyMat::zero(rows, cols);
  }
  if (!j.is_array() || j.size() != static_cast<std::size_t>(rows))
    throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
  PolyMat out = PolyMat::zero(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(cols))
      throw ParseError(where + "[" + std::to_string(r) + "]: expected " + std::to_string(cols) + " entries");
    for (Eigen::Index c = 0; c < cols; ++c)
      out.at(r, c) = parse_poly(row[static_cast<std::size_t>(c)],
                                where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return out;
}

inline Json complex_to_json(const Cplx& z) { return Json::array({z.real(), z.imag()}); }

inline Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline FiniteAlgebra parse_algebra(const Json& j, const std::string& where) {
  FiniteAlgebra a;
  const Json& basis = member(j, "basis", where);
  if (!basis.is_array() || basis.empty()) throw ParseError(where + ".basis: expected a nonempty array");
  for (std::size_t i = 0; i < basis.size(); ++i)
    a.basis.push_back(parse_string(basis[i], where + ".basis[" + std::to_string(i) + "]"));
  const int d = a.dim();
  const Json& structure = member(j, "structure", where);
  if (!structure.is_array() || structure.size() != static_cast<std::size_t>(d))
    throw ParseError(where + ".structure: expected " + std::to_string(d) + " outer entries");
  a.structure.assign(static_cast<std::size_t>(d) * d * d, Cplx(0));
  for (int i = 0; i < d; ++i) {
    const Json& ji = structure[static_cast<std::size_t>(i)];
    const std::string wi = where + ".structure[" + std::to_string(i) + "]";
    if (!ji.is_array() || ji.size() != static_cast<std::size_t>(d))
      throw ParseError(wi + ": expected " + std::to_string(d) + " entries");
    for (int k = 0; k < d; ++k) {
      const Json& jk = ji[static_cast<std::size_t>(k)];
      const std::string wk = wi + "[" + std::to_string(k) + "]";
      if (!jk.is_array() || jk.size() != static_cast<std::size_t>(d))
        throw ParseError(wk + ": expected " + std::to_string(d) + " entries");
      for (int l = 0; l < d; ++l)
        a.c(i, k, l) = parse_complex(jk[static_cast<std::size_t>(l)], wk + "[" + std::to_string(l) + "]");
    }
  }
  if (const Json* unit = member_opt(j, "unit")) {
    if (!unit->is_array() || unit->size() != static_cast<std::size_t>(d))
      throw ParseError(where + ".unit: expected " + std::to_string(d) + " coordinates");
    Element u(d);
    for (int i = 0; i < d; ++i)
      u(i) = parse_complex((*unit)[static_cast<std::size_t>(i)], where + ".unit[" + std::to_string(i) + "]");
    a.unit = std::move(u);
  }
  a.require_shape();
  return a;
}

inline Json algebra_to_json(const FiniteAlgebra& a) {
  Json out = Json::object();
  out["basis"] = a.basis;
  const int d = a.dim();
  Json structure = Json::array();
  for (int i = 0; i < d; ++i) {
    Json ji = Json::array();
    for (int j = 0; j < d; ++j) {
      Json jj = Json::array();
      for (int k = 0; k < d; ++k) jj.push_back(complex_to_json(a.c(i, j, k)));
      ji.push_back(std::move(jj));
    }
    structure.push_back(std::move(ji));
  }
  out["structure"] = std::move(structure);
  if (a.unit) {
    Json u = Json::array();
    for (Eigen::Index i = 0; i < a.unit->size(); ++i) u.push_back(complex_to_json((*a.unit)(i)));
    out["unit"] = std::move(u);
  }
  return out;
}

/// Per-simple dimension map keyed by simple label; missing labels mean 0.
inline std::vector<Eigen::Index> parse_dims(const Json& j, const CategoryContext& ctx, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object keyed by simple label");
  std::vector<Eigen::Index> dims(ctx.size(), 0);
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::size_t c;
    try {
      c = ctx.index_of(it.key());
    } catch (const DomainError&) {
      throw ParseError(where + ": unknown simple label \"" + it.key() + "\"");
    }
    const int v = parse_int(it.value(), where + "." + it.key());
    if (v < 0) throw ParseError(where + "." + it.key() + ": dimension must be nonnegative");
    dims[c] = v;
  }
  return dims;
}

}  // namespace detail

struct Scenario {
  std::string name;
  CategoryPtr category;
  FiniteAlgebra algebra;
  FredholmModule module;
  std::optional<OperatorPath> path;
};

inline Scenario parse_scenario(const Json& j) {
  using namespace detail;
  if (!j.is_object()) throw ParseError("scenario: expected a JSON object");
  const int version = parse_int(member(j, "schema_version", "scenario"), "scenario.schema_version");
  if (version != kSchemaVersion)
    throw ParseError("scenario.schema_version: unsupported version " + std::to_string(version));

  Scenario sc;
  if (const Json* name = member_opt(j, "name")) sc.name = parse_string(*name, "scenario.name");

  const Json& jcat = member(j, "category", "scenario");
  auto ctx = std::make_shared<CategoryContext>();
  const Json& simples = member(jcat, "simples", "scenario.category");
  if (!simples.is_array()) throw ParseError("scenario.category.simples: expected an array");
  for (std::size_t i = 0; i < simples.size(); ++i)
    ctx->simples.push_back(parse_string(simples[i], "scenario.category.simples[" + std::to_string(i) + "]"));
  if (const Json* qd = member_opt(jcat, "quantum_dims")) {
    if (!qd->is_array()) throw ParseError("scenario.category.quantum_dims: expected an array");
    for (std::size_t i = 0; i < qd->size(); ++i)
      ctx->quantum_dims.push_back(
          parse_real((*qd)[i], "scenario.category.quantum_dims[" + std::to_string(i) + "]"));
  }
  try {
    ctx->validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("scenario.category: ") + e.what());
  }
  sc.category = ctx;

  sc.algebra = parse_algebra(member(j, "algebra", "scenario"), "scenario.algebra");

  const Json& jmod = member(j, "module", "scenario");
  GradedHilbObject h;
  h.plus.ctx = ctx;
  h.minus.ctx = ctx;
  h.plus.dims = parse_dims(member(jmod, "plus_dims", "scenario.module"), *ctx, "scenario.module.plus_dims");
  h.minus.dims = parse_dims(member(jmod, "minus_dims", "scenario.module"), *ctx, "scenario.module.minus_dims");
  h.validate();

  sc.module.h = h;
  sc.module.algebra = sc.algebra;
  if (const Json* p = member_opt(jmod, "p")) {
    sc.module.p = parse_real(*p, "scenario.module.p");
    if (!(sc.module.p >= 1.0)) throw ParseError("scenario.module.p: expected p >= 1");
  }

  const Json& jrho = member(jmod, "rho", "scenario.module");
  if (!jrho.is_object()) throw ParseError("scenario.module.rho: expected an object keyed by basis label");
  for (int b = 0; b < sc.algebra.dim(); ++b) {
    const std::string& label = sc.algebra.basis[static_cast<std::size_t>(b)];
    const std::string wb = "scenario.module.rho." + label;
    auto it = jrho.find(label);
    if (it == jrho.end()) throw ParseError(wb + ": missing representation for basis element");
    std::vector<Mat> pps, mms;
    for (std::size_t c = 0; c < ctx->size(); ++c) {
      const std::string& sl = ctx->simples[c];
      const std::string wc = wb + "." + sl;
      const Json* blocks = member_opt(*it, sl.c_str());
      if (!blocks) {
        if (h.plus.dims[c] != 0 || h.minus.dims[c] != 0)
          throw ParseError(wc + ": missing blocks for simple with nonzero fiber");
        pps.push_back(Mat::Zero(0, 0));
        mms.push_back(Mat::Zero(0, 0));
        continue;
      }
      const Json* pp = member_opt(*blocks, "pp");
      const Json* mm = member_opt(*blocks, "mm");
      pps.push_back(pp ? parse_matrix(*pp, h.plus.dims[c], h.plus.dims[c], wc + ".pp")
                       : Mat::Zero(h.plus.dims[c], h.plus.dims[c]));
      mms.push_back(mm ? parse_matrix(*mm, h.minus.dims[c], h.minus.dims[c], wc + ".mm")
                       : Mat::Zero(h.minus.dims[c], h.minus.dims[c]));
    }
    sc.module.rho.push_back(make_even(h, std::move(pps), std::move(mms)));
  }
  for (auto it = jrho.begin(); it != jrho.end(); ++it)
    if (std::find(sc.algebra.basis.begin(), sc.algebra.basis.end(), it.key()) == sc.algebra.basis.end())
      throw ParseError("scenario.module.rho: unknown basis label \"" + it.key() + "\"");

  const Json& jf = member(jmod, "f", "scenario.module");
  if (!jf.is_object()) throw ParseError("scenario.module.f: expected an object keyed by simple label");
  {
    std::vector<Mat> pms, mps;
    for (std::size_t c = 0; c < ctx->size(); ++c) {
      const std::string& sl = ctx->simples[c];
      const std::string wc = "scenario.module.f." + sl;
      const Json* blocks = member_opt(jf, sl.c_str());
      if (!blocks) {
        if (h.plus.dims[c] != 0 || h.minus.dims[c] != 0)
          throw ParseError(wc + ": missing blocks for simple with nonzero fiber");
        pms.push_back(Mat::Zero(0, 0));
        mps.push_back(Mat::Zero(0, 0));
        continue;
      }
      pms.push_back(parse_matrix(member(*blocks, "pm", wc), h.plus.dims[c], h.minus.dims[c], wc + ".pm"));
      mps.push_back(parse_matrix(member(*blocks, "mp", wc), h.minus.dims[c], h.plus.dims[c], wc + ".mp"));
    }
    sc.module.f_op = make_odd(h, std::move(pms), std::move(mps));
  }
  sc.module.require_shape();

  if (const Json* jpath = member_opt(j, "path")) {
    OperatorPath path;
    path.h = h;
    path.algebra = sc.algebra;
    path.p = sc.module.p;
    path.f_const = sc.module.f_op;
    path.t_end = parse_real(member(*jpath, "t_end", "scenario.path"), "scenario.path.t_end");
    if (!(path.t_end >= 0.0)) throw ParseError("scenario.path.t_end: expected a nonnegative number");

    const Json& jrt = member(*jpath, "rho_t", "scenario.path");
    if (!jrt.is_object()) throw ParseError("scenario.path.rho_t: expected an object keyed by basis label");
    for (int b = 0; b < sc.algebra.dim(); ++b) {
      const std::string& label = sc.algebra.basis[static_cast<std::size_t>(b)];
      const std::string wb = "scenario.path.rho_t." + label;
      auto it = jrt.find(label);
      if (it == jrt.end()) throw ParseError(wb + ": missing polynomial family for basis element");
      std::vector<EvenPolyBlocks> fam;
      for (std::size_t c = 0; c < ctx->size(); ++c) {
        const std::string& sl = ctx->simples[c];
        const std::string wc = wb + "." + sl;
        const Json* blocks = member_opt(*it, sl.c_str());
        if (!blocks) {
          if (h.plus.dims[c] != 0 || h.minus.dims[c] != 0)
            throw ParseError(wc + ": missing blocks for simple with nonzero fiber");
          fam.push_back({PolyMat::zero(0, 0), PolyMat::zero(0, 0)});
          continue;
        }
        const Json* pp = member_opt(*blocks, "pp");
        const Json* mm = member_opt(*blocks, "mm");
        fam.push_back({pp ? detail::parse_poly_mat(*pp, h.plus.dims[c], h.plus.dims[c], wc + ".pp")
                          : PolyMat::zero(h.plus.dims[c], h.plus.dims[c]),
                       mm ? detail::parse_poly_mat(*mm, h.minus.dims[c], h.minus.dims[c], wc + ".mm")
                          : PolyMat::zero(h.minus.dims[c], h.minus.dims[c])});
      }
      path.rho_t.push_back(std::move(fam));
    }

    if (const Json* jft = member_opt(*jpath, "f_t")) {
      path.has_f_path = true;
      for (std::size_t c = 0; c < ctx->size(); ++c) {
        const std::string& sl = ctx->simples[c];
        const std::string wc = "scenario.path.f_t." + sl;
        const Json* blocks = member_opt(*jft, sl.c_str());
        if (!blocks) {
          if (h.plus.dims[c] != 0 || h.minus.dims[c] != 0)
            throw ParseError(wc + ": missing blocks for simple with nonzero fiber");
          path.f_t.push_back({PolyMat::zero(0, 0), PolyMat::zero(0, 0)});
          continue;
        }
        path.f_t.push_back(
            {detail::parse_poly_mat(member(*blocks, "pm", wc), h.plus.dims[c], h.minus.dims[c], wc + ".pm"),
             detail::parse_poly_mat(member(*blocks, "mp", wc), h.minus.dims[c], h.plus.dims[c], wc + ".mp")});
      }
    }
    path.require_shape();
    sc.path = std::move(path);
  }
  return sc;
}

inline Scenario load_scenario(const std::string& file_path) {
  const std::string bytes = read_file(file_path);
  Json j;
  try {
    j = Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    throw ParseError(file_path + ": " + e.what());
  }
  return parse_scenario(j);
}

/// Cochain document: flat tensor, row-major with the last slot fastest.
inline Json cochain_to_json(const CyclicCochain& c) {
  Json out = Json::object();
  out["schema_version"] = kSchemaVersion;
  out["kind"] = "cochain";
  out["degree"] = c.degree;
  out["algebra"] = detail::algebra_to_json(c.algebra);
  Json tensor = Json::array();
  for (const Cplx& v : c.tensor) tensor.push_back(detail::complex_to_json(v));
  out["tensor"] = std::move(tensor);
  return out;
}

inline CyclicCochain cochain_from_json(const Json& j) {
  using namespace detail;
  if (!j.is_object()) throw ParseError("cochain: expected a JSON object");
  const int version = parse_int(member(j, "schema_version", "cochain"), "cochain.schema_version");
  if (version != kSchemaVersion)
    throw ParseError("cochain.schema_version: unsupported version " + std::to_string(version));
  CyclicCochain out;
  out.algebra = parse_algebra(member(j, "algebra", "cochain"), "cochain.algebra");
  out.degree = parse_int(member(j, "degree", "cochain"), "cochain.degree");
  if (out.degree < 0) throw ParseError("cochain.degree: expected a nonnegative integer");
  const Json& tensor = member(j, "tensor", "cochain");
  if (!tensor.is_array() || tensor.size() != out.expected_size(out.algebra.dim()))
    throw ParseError("cochain.tensor: expected " + std::to_string(out.expected_size(out.algebra.dim())) +
                     " entries");
  out.tensor.reserve(tensor.size());
  for (std::size_t i = 0; i < tensor.size(); ++i)
    out.tensor.push_back(parse_complex(tensor[i], "cochain.tensor[" + std::to_string(i) + "]"));
  return out;
}

inline void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

inline CyclicCochain load_cochain(const std::string& file_path) {
  const std::string bytes = read_file(file_path);
  Json j;
  try {
    j = Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    throw ParseError(file_path + ": " + e.what());
  }
  return cochain_from_json(j);
}

/// Machine-readable verification report. Residuals must be finite for a pass.
struct CheckReport {
  std::string command;
  Json inputs = Json::object();
  double tolerance = 1e-9;
  std::map<std::string, double> residuals;
  std::map<std::string, bool> decisions;
  long long elapsed_ms = 0;

  bool all_pass() const {
    for (const auto& [name, value] : residuals)
      if (!std::isfinite(value)) return false;
    for (const auto& [name, ok] : decisions)
      if (!ok) return false;
    return true;
  }

  Json to_json() const {
    Json out = Json::object();
    out["schema_version"] = kSchemaVersion;
    out["command"] = command;
    out["inputs"] = inputs;
    out["tolerance"] = tolerance;
    out["residuals"] = Json::object();
    for (const auto& [name, value] : residuals) out["residuals"][name] = value;
    out["decisions"] = Json::object();
    for (const auto& [name, ok] : decisions) out["decisions"][name] = ok;
    out["elapsed_ms"] = elapsed_ms;
    return out;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "command: " << command << "\n";
    for (auto it = inputs.begin(); it != inputs.end(); ++it)
      os << "input " << it.key() << ": " << it.value().dump() << "\n";
    os.precision(17);
    os << "tolerance: " << tolerance << "\n";
    for (const auto& [name, value] : residuals) os << "residual " << name << " = " << value << "\n";
    for (const auto& [name, ok] : decisions) os << "decision " << name << " = " << (ok ? "pass" : "fail") << "\n";
    os << "elapsed_ms: " << elapsed_ms << "\n";
    os << "overall: " << (all_pass() ? "pass" : "fail") << "\n";
    return os.str();
  }
};

}  // namespace cherncat
