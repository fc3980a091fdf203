// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "lagflow/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lagflow/errors.hpp"

namespace lagflow::json_io {

namespace {

const Json& field(const Json& j, const char* key, const std::string& what) {
    if (!j.is_object()) throw InputError(what + " must be a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) throw InputError(what + ": missing field \"" + key + "\"");
    return *it;
}

bool has(const Json& j, const char* key) { return j.is_object() && j.contains(key); }

double number(const Json& j, const std::string& what) {
    if (!j.is_number()) throw InputError(what + " must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw InputError(what + " must be finite");
    return x;
}

long integer(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) throw InputError(what + " must be an integer");
    return j.get<long>();
}

std::size_t count(const Json& j, const std::string& what, std::size_t min) {
    const long v = integer(j, what);
    if (v < static_cast<long>(min)) throw InputError(what + " must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

std::vector<double> numbers(const Json& j, const std::string& what) {
    if (!j.is_array()) throw InputError(what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(number(x, what));
    return out;
}

const Json& array(const Json& j, const std::string& what) {
    if (!j.is_array()) throw InputError(what + " must be an array");
    return j;
}

std::string kind_of(const Json& j, const std::string& what) {
    const Json& k = field(j, "kind", what);
    if (!k.is_string()) throw InputError(what + ": \"kind\" must be a string");
    return k.get<std::string>();
}

int orientation_of(const Json& j, const std::string& what) {
    if (!has(j, "orientation")) return 1;
    const long o = integer(j["orientation"], what + " orientation");
    if (o != 1 && o != -1) throw InputError(what + ": orientation must be 1 or -1");
    return static_cast<int>(o);
}

std::size_t intervals_of(const Json& j, const std::string& what) {
    return has(j, "intervals") ? count(j["intervals"], what + " intervals", 1) : kDefaultIntervals;
}

void write(std::string& s, const OrderedJson& j) {
    switch (j.type()) {
        case OrderedJson::value_t::number_float: {
            const double x = j.get<double>();
            if (!std::isfinite(x)) throw NumericalError("non-finite result");
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            s += buf;
            return;
        }
        case OrderedJson::value_t::array: {
            s += '[';
            bool first = true;
            for (const auto& x : j) {
                if (!first) s += ',';
                first = false;
                write(s, x);
            }
            s += ']';
            return;
        }
        case OrderedJson::value_t::object: {
            s += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) s += ',';
                first = false;
                s += OrderedJson(it.key()).dump();
                s += ':';
                write(s, it.value());
            }
            s += '}';
            return;
        }
        default:
            s += j.dump();
    }
}

}  // namespace

Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": malformed JSON");
    }
}

std::string dump(const OrderedJson& j) {
    std::string s;
    write(s, j);
    s += '\n';
    return s;
}

Matrix matrix_from(const Json& j, const std::string& what) {
    const std::size_t rows = count(field(j, "rows", what), what + " rows", 0);
    const std::size_t cols = count(field(j, "cols", what), what + " cols", 0);
    const Json& data = array(field(j, "data", what), what + " data");
    if (data.size() != rows * cols) throw InputError(what + ": data must hold rows * cols entries");
    Matrix m(rows, cols);
    for (std::size_t k = 0; k < data.size(); ++k) {
        const Json& e = data[k];
        cplx z;
        if (e.is_number()) {
            z = number(e, what + " entry");
        } else if (e.is_array() && e.size() == 2) {
            z = cplx(number(e[0], what + " entry"), number(e[1], what + " entry"));
        } else {
            throw InputError(what + ": entries must be [re, im] pairs");
        }
        m(k / cols, k % cols) = z;
    }
    return m;
}

HermitianMatrix hermitian_from(const Json& j, const std::string& what) {
    const Matrix m = matrix_from(j, what);
    if (m.rows() != m.cols() || m.rows() == 0) throw InputError(what + " must be a non-empty square matrix");
    return HermitianMatrix::checked(m);
}

UnitaryMatrix unitary_from(const Json& j, const std::string& what) { return UnitaryMatrix(matrix_from(j, what)); }

LagrangianFrame lagrangian_from(const Json& j, const std::string& what) {
    if (has(j, "kind") && kind_of(j, what) != "lagrangian") throw InputError(what + " must be a lagrangian");
    const Matrix m = matrix_from(j, what);
    if (has(j, "n") && count(j["n"], what + " n", 1) != m.cols()) throw InputError(what + ": n does not match cols");
    return LagrangianFrame(m);
}

OrderedJson to_json(const Matrix& m) {
    OrderedJson data = OrderedJson::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) data.push_back({m(i, k).real(), m(i, k).imag()});
    OrderedJson j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = std::move(data);
    return j;
}

OrderedJson to_json(const LagrangianFrame& l) {
    OrderedJson j;
    j["kind"] = "lagrangian";
    j["n"] = l.n();
    const Matrix& f = l.frame();
    OrderedJson m = to_json(f);
    j["rows"] = std::move(m["rows"]);
    j["cols"] = std::move(m["cols"]);
    j["data"] = std::move(m["data"]);
    return j;
}

OrderedJson to_json(const FlowResult& f) {
    OrderedJson j;
    j["flow"] = f.flow;
    OrderedJson cs = OrderedJson::array();
    for (const Crossing& c : f.crossings) {
        OrderedJson x;
        x["t"] = c.t;
        x["sign"] = c.sign;
        cs.push_back(std::move(x));
    }
    j["crossings"] = std::move(cs);
    return j;
}

HermitianPath hermitian_path_from(const Json& j) {
    const std::string what = "path";
    const std::string kind = kind_of(j, what);
    if (kind == "affine")
        return HermitianPath::affine(hermitian_from(field(j, "A0", what), "A0"),
                                     hermitian_from(field(j, "A1", what), "A1"), intervals_of(j, what));
    if (kind == "sampled") {
        std::vector<HermitianMatrix> values, derivs;
        for (const auto& v : array(field(j, "values", what), "values")) values.push_back(hermitian_from(v, "value"));
        if (has(j, "derivatives"))
            for (const auto& v : array(j["derivatives"], "derivatives")) derivs.push_back(hermitian_from(v, "derivative"));
        return HermitianPath::sampled(numbers(field(j, "grid", what), "grid"), std::move(values), std::move(derivs));
    }
    throw InputError("unknown path kind \"" + kind + "\"");
}

LagrangianPath lagrangian_path_from(const Json& j) {
    const std::string what = "lagrangian path";
    const std::string kind = kind_of(j, what);
    if (kind == "frames") {
        std::vector<LagrangianFrame> frames;
        for (const auto& f : array(field(j, "frames", what), "frames")) frames.push_back(lagrangian_from(f, "frame"));
        return LagrangianPath::sampled(numbers(field(j, "grid", what), "grid"), std::move(frames));
    }
    if (kind == "switched_graphs") return LagrangianPath::switched_graphs(hermitian_path_from(field(j, "path", what)));
    if (kind == "cayley_exp") {
        const UnitaryMatrix u0 = unitary_from(field(j, "U0", what), "U0");
        const HermitianMatrix g = hermitian_from(field(j, "G", what), "G");
        if (g.dim() != u0.n()) throw InputError("U0 and G differ in size");
        return LagrangianPath::from_function(
            [u0, g](double t) { return grassmann::cayley_graph(UnitaryMatrix(u0.matrix() * linalg::expi(g, t), 1e-8)); },
            uniform_grid(intervals_of(j, what)));
    }
    throw InputError("unknown lagrangian path kind \"" + kind + "\"");
}

UnitaryLoop unitary_loop_from(const Json& j) {
    const std::string what = "loop";
    const std::string kind = kind_of(j, what);
    if (kind == "sampled") {
        std::vector<UnitaryMatrix> values;
        for (const auto& v : array(field(j, "values", what), "values")) values.push_back(unitary_from(v, "value"));
        return UnitaryLoop::sampled(numbers(field(j, "grid", what), "grid"), std::move(values));
    }
    if (kind == "exp") {
        const UnitaryMatrix u0 = unitary_from(field(j, "U0", what), "U0");
        const HermitianMatrix g = hermitian_from(field(j, "G", what), "G");
        if (g.dim() != u0.n()) throw InputError("U0 and G differ in size");
        return UnitaryLoop::from_function(
            [u0, g](double t) { return UnitaryMatrix(u0.matrix() * linalg::expi(g, t), 1e-8); },
            uniform_grid(intervals_of(j, what)));
    }
    throw InputError("unknown loop kind \"" + kind + "\"");
}

FamilyJet family_jet_from(const Json& j) {
    const std::string what = "jet";
    FamilyJet jet;
    jet.k = count(field(j, "k", what), "k", 1);
    jet.t0 = hermitian_from(field(j, "T0", what), "T0");
    for (const auto& p : array(field(j, "partials", what), "partials")) jet.partials.push_back(hermitian_from(p, "partial"));
    jet.w = matrix_from(field(j, "W_frame", what), "W_frame");
    if (jet.w.cols() > 0) jet.w = linalg::orthonormalize(jet.w);
    jet.validate();
    return jet;
}

MeshProblem mesh_problem_from(const Json& j) {
    const std::string what = "family";
    MeshProblem out;
    out.w = IsotropicSubspace::from_hminus(matrix_from(field(j, "W_frame", what), "W_frame"));
    const std::size_t nodes = has(j, "mesh") ? count(j["mesh"], "mesh", 3) : 17;
    const std::size_t n = out.w.ambient_n();
    for (const auto& c : array(field(j, "charts", what), "charts")) {
        const std::string kind = kind_of(c, "chart");
        std::vector<HermitianMatrix> gens;
        const char* key = kind == "cayley_unitary" ? "generators" : "partials";
        if (kind != "cayley_unitary" && kind != "affine_operator") throw InputError("unknown chart kind \"" + kind + "\"");
        for (const auto& g : array(field(c, key, "chart"), key)) {
            gens.push_back(hermitian_from(g, key));
            if (gens.back().dim() != n) throw InputError("chart matrices must match W_frame rows");
        }
        std::vector<double> lower = numbers(field(c, "lower", "chart"), "lower");
        std::vector<double> upper = numbers(field(c, "upper", "chart"), "upper");
        if (lower.size() != gens.size() || upper.size() != gens.size())
            throw InputError("chart bounds must have one entry per generator");
        MeshFamily f;
        if (kind == "cayley_unitary") {
            const double sign = number(field(c, "sign", "chart"), "sign");
            if (sign != 1.0 && sign != -1.0) throw InputError("chart sign must be 1 or -1");
            f.lower = std::move(lower);
            f.upper = std::move(upper);
            f.nodes = nodes;
            f.value = [gens, sign, n](const std::vector<double>& x) {
                Matrix a(n, n);
                for (std::size_t i = 0; i < gens.size(); ++i) a += gens[i].matrix() * cplx(x[i]);
                const Matrix id = Matrix::identity(n);
                const cplx i(0.0, 1.0);
                const Matrix u = (id * i - a) * linalg::inverse(id * i + a) * cplx(sign);
                return grassmann::cayley_graph(UnitaryMatrix(u, 1e-8));
            };
        } else {
            const HermitianMatrix t0 = hermitian_from(field(c, "T0", "chart"), "T0");
            if (t0.dim() != n) throw InputError("chart matrices must match W_frame rows");
            f = MeshFamily::of_operators(std::move(lower), std::move(upper), nodes,
                                         [gens, t0](const std::vector<double>& x) {
                                             HermitianMatrix t = t0;
                                             for (std::size_t i = 0; i < gens.size(); ++i) t = t + gens[i] * x[i];
                                             return t;
                                         });
        }
        f.orientation = orientation_of(c, "chart");
        f.validate();
        out.charts.push_back(std::move(f));
    }
    if (out.charts.empty()) throw InputError("family needs at least one chart");
    return out;
}

}  // namespace lagflow::json_io
