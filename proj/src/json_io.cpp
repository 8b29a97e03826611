#include "diraclab/json_io.hpp"

#include <cmath>
#include <cstdio>

namespace diraclab {

Json matrix_to_json(const Matrix& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      entries.push_back({m(i, j).real(), m(i, j).imag()});
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Matrix matrix_from_json(const Json& j) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const Json& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != rows * cols)
    throw precondition_error("matrix_from_json: entry count mismatch");
  Matrix m(rows, cols);
  int idx = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      m(r, c) = Complex(entries[idx][0].get<double>(),
                        entries[idx][1].get<double>());
      ++idx;
    }
  return m;
}

Json module_to_json(const GradedModule& m) {
  Json action = Json::array();
  for (const Matrix& c : m.action) action.push_back(matrix_to_json(c));
  return Json{{"n", m.n},
              {"rank_plus", m.rank_plus},
              {"rank_minus", m.rank_minus},
              {"action", action}};
}

GradedModule module_from_json(const Json& j) {
  GradedModule m;
  m.n = j.at("n").get<int>();
  m.rank_plus = j.at("rank_plus").get<int>();
  m.rank_minus = j.at("rank_minus").get<int>();
  for (const Json& c : j.at("action")) m.action.push_back(matrix_from_json(c));
  if (static_cast<int>(m.action.size()) != m.n)
    throw precondition_error("module_from_json: need n action matrices");
  for (const Matrix& c : m.action)
    if (c.rows() != m.rank() || c.cols() != m.rank())
      throw precondition_error("module_from_json: action size mismatch");
  return m;
}

Json perturbation_to_json(const LinearPerturbation& p) {
  Json zs = Json::array();
  for (const Matrix& z : p.zs) zs.push_back(matrix_to_json(z));
  Json basepoint = Json::array();
  for (int i = 0; i < p.basepoint.size(); ++i) basepoint.push_back(p.basepoint(i));
  return Json{{"n", p.n},
              {"basepoint", basepoint},
              {"module", module_to_json(p.module)},
              {"Zs", zs}};
}

LinearPerturbation perturbation_from_json(const Json& j) {
  LinearPerturbation p;
  p.n = j.at("n").get<int>();
  p.module = module_from_json(j.at("module"));
  if (p.module.n != p.n)
    throw precondition_error("perturbation_from_json: module dimension mismatch");
  const Json& basepoint = j.at("basepoint");
  p.basepoint = RealVector::Zero(p.n);
  if (static_cast<int>(basepoint.size()) != p.n)
    throw precondition_error("perturbation_from_json: basepoint size mismatch");
  for (int i = 0; i < p.n; ++i) p.basepoint(i) = basepoint[i].get<double>();
  for (const Json& z : j.at("Zs")) p.zs.push_back(matrix_from_json(z));
  if (static_cast<int>(p.zs.size()) != p.n)
    throw precondition_error("perturbation_from_json: need n matrices Z_j");
  for (const Matrix& z : p.zs)
    if (z.rows() != p.module.rank() || z.cols() != p.module.rank())
      throw precondition_error("perturbation_from_json: Z size mismatch");
  return p;
}

Json result_to_json(const LocalIndexResult& r) {
  return Json{{"dim_ker_plus", r.dim_ker_plus},
              {"dim_ker_minus", r.dim_ker_minus},
              {"index", r.index},
              {"method", to_string(r.method)}};
}

namespace {

Json real_matrix_to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

RealMatrix real_matrix_from_json(const Json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) throw precondition_error("real matrix: empty");
  const int cols = static_cast<int>(j[0].size());
  RealMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols)
      throw precondition_error("real matrix: ragged rows");
    for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

}  // namespace

Json vector_field_to_json(const VectorFieldSpec& spec) {
  Json zeros = Json::array();
  for (const VectorFieldZero& z : spec.zeros)
    zeros.push_back(Json{{"label", z.label},
                         {"linearization", real_matrix_to_json(z.linearization)}});
  return Json{{"n", spec.n}, {"zeros", zeros}};
}

VectorFieldSpec vector_field_from_json(const Json& j) {
  VectorFieldSpec spec;
  spec.n = j.at("n").get<int>();
  for (const Json& z : j.at("zeros")) {
    VectorFieldZero zero;
    zero.label = z.value("label", "");
    zero.linearization = real_matrix_from_json(z.at("linearization"));
    if (zero.linearization.rows() != spec.n ||
        zero.linearization.cols() != spec.n)
      throw precondition_error("vector_field_from_json: linearization size");
    spec.zeros.push_back(zero);
  }
  return spec;
}

Json pin_zero_to_json(const PinZeroSpec& spec) {
  Json tail = Json::array();
  for (const RealVector& v : spec.tail) {
    Json vec = Json::array();
    for (int i = 0; i < v.size(); ++i) vec.push_back(v(i));
    tail.push_back(vec);
  }
  return Json{{"v1", real_matrix_to_json(spec.v1_linearization)},
              {"tail", tail}};
}

PinZeroSpec pin_zero_from_json(const Json& j) {
  PinZeroSpec spec;
  spec.v1_linearization = real_matrix_from_json(j.at("v1"));
  for (const Json& v : j.at("tail")) {
    RealVector vec(v.size());
    for (size_t i = 0; i < v.size(); ++i) vec(i) = v[i].get<double>();
    spec.tail.push_back(vec);
  }
  return spec;
}

Json spectrum_summary_to_json(const SpectrumResult& result) {
  Json j{{"s", result.s},
         {"ker_plus", result.ker_plus},
         {"ker_minus", result.ker_minus},
         {"index", result.index()},
         {"threshold", result.threshold},
         {"eigenvalues", result.records.size()}};
  if (!std::isnan(result.flatness)) j["flatness"] = result.flatness;
  if (result.betti)
    j["betti"] = {(*result.betti)[0], (*result.betti)[1], (*result.betti)[2]};
  return j;
}

Json cluster_fit_to_json(const ClusterFit& fit) {
  return Json{{"C", fit.c_max},
              {"fitted_exponent", fit.fitted_exponent},
              {"violations", fit.violations},
              {"windows_overlap", fit.windows_overlap},
              {"notes", fit.notes}};
}

std::string spectrum_to_csv(const std::vector<SpectrumResult>& sweep) {
  std::string out = "s,k,eigenvalue,grading,cluster_mu\n";
  char line[160];
  for (const SpectrumResult& res : sweep) {
    for (const EigenRecord& rec : res.records) {
      if (std::isnan(rec.cluster_mu)) {
        std::snprintf(line, sizeof(line), "%.12g,%d,%.12g,%d,\n", res.s, rec.k,
                      rec.eigenvalue, rec.grading);
      } else {
        std::snprintf(line, sizeof(line), "%.12g,%d,%.12g,%d,%.12g\n", res.s,
                      rec.k, rec.eigenvalue, rec.grading, rec.cluster_mu);
      }
      out += line;
    }
  }
  return out;
}

}  // namespace diraclab
