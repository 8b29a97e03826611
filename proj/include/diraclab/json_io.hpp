#pragma once

#include <json.hpp>

#include "diraclab/geometry.hpp"
#include "diraclab/local_index.hpp"
#include "diraclab/spectral.hpp"

namespace diraclab {

using Json = nlohmann::ordered_json;

// {rows, cols, entries: [[re, im], ...]} row-major
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json module_to_json(const GradedModule& m);
GradedModule module_from_json(const Json& j);

// {n, basepoint, module, Zs}
Json perturbation_to_json(const LinearPerturbation& p);
LinearPerturbation perturbation_from_json(const Json& j);

Json result_to_json(const LocalIndexResult& r);

Json vector_field_to_json(const VectorFieldSpec& spec);
VectorFieldSpec vector_field_from_json(const Json& j);

Json pin_zero_to_json(const PinZeroSpec& spec);
PinZeroSpec pin_zero_from_json(const Json& j);

Json spectrum_summary_to_json(const SpectrumResult& result);
Json cluster_fit_to_json(const ClusterFit& fit);

// CSV with header exactly `s,k,eigenvalue,grading,cluster_mu`.
std::string spectrum_to_csv(const std::vector<SpectrumResult>& sweep);

}  // namespace diraclab
