// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

// JSON encodings of the library types. Matrices are
// {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
// Output is written with every floating-point number at 17 significant
// digits so that identical results give identical bytes.

#pragma once

#include <string>

#include "json.hpp"
#include "lagflow/flow.hpp"
#include "lagflow/intersect.hpp"
#include "lagflow/universal.hpp"

namespace lagflow::json_io {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Throws InputError when the file is missing or not JSON.
Json read_file(const std::string& path);
std::string dump(const OrderedJson& j);

Matrix matrix_from(const Json& j, const std::string& what);
HermitianMatrix hermitian_from(const Json& j, const std::string& what);
UnitaryMatrix unitary_from(const Json& j, const std::string& what);
// A frame in the matrix encoding, optionally tagged {"kind": "lagrangian"}.
LagrangianFrame lagrangian_from(const Json& j, const std::string& what);

OrderedJson to_json(const Matrix& m);
OrderedJson to_json(const LagrangianFrame& l);
OrderedJson to_json(const FlowResult& f);

// {"kind": "affine", "A0", "A1", "intervals"?} for t -> A0 + t A1, or
// {"kind": "sampled", "grid", "values", "derivatives"?}.
HermitianPath hermitian_path_from(const Json& j);
// {"kind": "frames", "grid", "frames"}, {"kind": "switched_graphs", "path"}
// or {"kind": "cayley_exp", "U0", "G", "intervals"?} for t -> C(U0 exp(itG)).
LagrangianPath lagrangian_path_from(const Json& j);
// {"kind": "sampled", "grid", "values"} or
// {"kind": "exp", "U0", "G", "intervals"?} for t -> U0 exp(itG).
UnitaryLoop unitary_loop_from(const Json& j);
// {"k", "T0", "partials", "W_frame", "tol"?}.
FamilyJet family_jet_from(const Json& j);

struct MeshProblem {
    IsotropicSubspace w;
    std::vector<MeshFamily> charts;
};
// {"W_frame", "mesh"?, "charts": [chart...]} with charts
// {"kind": "cayley_unitary", "sign", "generators", "lower", "upper", "orientation"?}
// (t -> C(sign (i - A)(i + A)^{-1}), A = Σ x_i G_i) or
// {"kind": "affine_operator", "T0", "partials", "lower", "upper", "orientation"?}
// (switched graphs of T0 + Σ x_i P_i).
MeshProblem mesh_problem_from(const Json& j);

}  // namespace lagflow::json_io
