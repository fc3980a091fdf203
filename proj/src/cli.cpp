// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "lagflow/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "lagflow/errors.hpp"
#include "lagflow/json_io.hpp"
#include "lagflow/schubert.hpp"

namespace lagflow::cli {

namespace {

using json_io::Json;
using json_io::OrderedJson;

struct Options {
    std::optional<double> tol;

    std::string arnold_to_lagrangian, arnold_to_unitary, arnold_chart, arnold_base;

    std::string sf_path, sf_method = "crossing", sf_plot;
    std::string maslov_path, maslov_plot;

    std::string reduce_file, reduce_unitary;
    std::vector<std::size_t> reduce_indices;

    std::string schubert_path;
    std::string intersect_path;
    std::string total_path;

    std::string universal_spectrum, universal_flow, universal_reduce;
    std::vector<double> universal_window;
    std::optional<std::size_t> universal_m;
};

Tolerance tolerance(const Options& o) {
    Tolerance t = Tolerance::from_env();
    if (o.tol) t.rank_eps = *o.tol;
    t.validate();
    return t;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const std::string& path, const std::vector<double>& grid,
               const std::vector<std::vector<double>>& table) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write " + path);
    f << "t";
    for (std::size_t j = 0; j < (table.empty() ? 0 : table[0].size()); ++j) f << ",branch_" << j + 1;
    f << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        f << format_double(grid[i]);
        for (double x : table[i]) f << ',' << format_double(x);
        f << '\n';
    }
}

OrderedJson numbers(const std::vector<double>& xs) {
    OrderedJson a = OrderedJson::array();
    for (double x : xs) a.push_back(x);
    return a;
}

OrderedJson intersection_json(const IntersectionResult& r) {
    OrderedJson j;
    j["epsilon"] = r.epsilon;
    j["p"] = r.kernel_dim;
    j["det"] = r.det;
    return j;
}

OrderedJson arnold(const Options& o, const Tolerance& tol) {
    const int modes = !o.arnold_to_lagrangian.empty() + !o.arnold_to_unitary.empty() + !o.arnold_chart.empty();
    if (modes != 1) throw InputError("arnold needs exactly one of --to-lagrangian, --to-unitary, --chart");
    if (!o.arnold_to_lagrangian.empty()) {
        const UnitaryMatrix u = json_io::unitary_from(json_io::read_file(o.arnold_to_lagrangian), "unitary");
        return json_io::to_json(grassmann::cayley_graph(u));
    }
    if (!o.arnold_to_unitary.empty()) {
        const LagrangianFrame l = json_io::lagrangian_from(json_io::read_file(o.arnold_to_unitary), "lagrangian");
        return json_io::to_json(grassmann::lagrangian_to_unitary(l).matrix());
    }
    if (o.arnold_base.empty()) throw InputError("--chart needs --base");
    const LagrangianFrame l = json_io::lagrangian_from(json_io::read_file(o.arnold_chart), "lagrangian");
    const LagrangianFrame base = json_io::lagrangian_from(json_io::read_file(o.arnold_base), "base");
    if (l.n() != base.n()) throw InputError("lagrangian and base differ in size");
    OrderedJson j;
    j["coordinates"] = json_io::to_json(grassmann::chart_coordinates(l, base, tol).matrix());
    return j;
}

OrderedJson sf(const Options& o, const Tolerance& tol) {
    const HermitianPath path = json_io::hermitian_path_from(json_io::read_file(o.sf_path));
    FlowResult result;
    if (o.sf_method == "crossing") {
        result = spectral_flow_crossing(path, tol);
    } else if (o.sf_method == "tracking") {
        result = spectral_flow_tracking(path);
    } else {
        result = spectral_flow_crossing(path, tol);
        if (spectral_flow_tracking(path).flow != result.flow) throw PreconditionError("method disagreement");
    }
    if (!o.sf_plot.empty()) write_csv(o.sf_plot, path.grid(), eigenvalue_table(path, path.grid()));
    return json_io::to_json(result);
}

OrderedJson maslov(const Options& o, const Tolerance& tol) {
    const LagrangianPath path = json_io::lagrangian_path_from(json_io::read_file(o.maslov_path));
    const FlowResult result = maslov_index(path, tol);
    if (!o.maslov_plot.empty()) write_csv(o.maslov_plot, path.grid(), eigenphase_table(path, path.grid()));
    return json_io::to_json(result);
}

std::vector<std::size_t> indices_from(const Json& j) {
    if (!j.is_array()) throw InputError("W_indices must be an array of integers");
    std::vector<std::size_t> out;
    for (const auto& x : j) {
        if (!x.is_number_integer() || x.get<long>() < 1) throw InputError("W_indices must be positive integers");
        out.push_back(x.get<std::size_t>());
    }
    return out;
}

OrderedJson reduce_unitary_json(const UnitaryMatrix& u, const std::vector<std::size_t>& indices,
                                const Tolerance& tol) {
    OrderedJson j;
    j["unitary"] = json_io::to_json(reduction::reduce_unitary(u, indices, 1.0, tol).matrix());
    return j;
}

OrderedJson reduce(const Options& o, const Tolerance& tol) {
    if (!o.reduce_unitary.empty()) {
        if (!o.reduce_file.empty()) throw InputError("give either an input file or --unitary, not both");
        if (o.reduce_indices.empty()) throw InputError("--unitary needs --w-indices");
        const UnitaryMatrix u = json_io::unitary_from(json_io::read_file(o.reduce_unitary), "unitary");
        return reduce_unitary_json(u, o.reduce_indices, tol);
    }
    if (o.reduce_file.empty()) throw InputError("reduce needs an input file or --unitary");
    const Json in = json_io::read_file(o.reduce_file);
    if (!in.is_object()) throw InputError("reduce input must be a JSON object");
    if (in.contains("unitary")) {
        if (!in.contains("W_indices")) throw InputError("reduce input: missing field \"W_indices\"");
        return reduce_unitary_json(json_io::unitary_from(in["unitary"], "unitary"), indices_from(in["W_indices"]),
                                   tol);
    }
    if (in.contains("lagrangian")) {
        if (!in.contains("W_frame")) throw InputError("reduce input: missing field \"W_frame\"");
        const LagrangianFrame l = json_io::lagrangian_from(in["lagrangian"], "lagrangian");
        const IsotropicSubspace w = IsotropicSubspace::from_hminus(json_io::matrix_from(in["W_frame"], "W_frame"));
        if (w.ambient_n() != l.n()) throw InputError("lagrangian and W live in different spaces");
        OrderedJson j;
        j["lagrangian"] = json_io::to_json(reduction::reduce_lagrangian(l, w, tol));
        return j;
    }
    throw InputError("reduce input needs \"unitary\" or \"lagrangian\"");
}

OrderedJson schubert_report(const Options& o, const Tolerance& tol) {
    const LagrangianFrame l = json_io::lagrangian_from(json_io::read_file(o.schubert_path), "lagrangian");
    const Flag flag(l.n());
    const std::vector<std::size_t> profile = schubert::incidence_profile(l, flag, tol);
    const std::vector<std::size_t> drops = schubert::drop_nodes(profile);
    const bool generic = std::adjacent_find(drops.begin(), drops.end()) == drops.end();
    OrderedJson j;
    j["profile"] = profile;
    if (generic) {
        const SchubertIndex index(drops);
        j["index"] = index.entries();
        j["weight"] = index.weight();
    } else {
        j["index"] = nullptr;
        j["weight"] = nullptr;
    }
    j["generic"] = generic;
    return j;
}

OrderedJson intersect(const Options& o, Tolerance tol) {
    const Json in = json_io::read_file(o.intersect_path);
    const FamilyJet jet = json_io::family_jet_from(in);
    if (in.contains("tol")) {
        if (!in["tol"].is_number()) throw InputError("tol must be a number");
        tol.rank_eps = in["tol"].get<double>();
        tol.validate();
    }
    return intersection_json(intersection_number_operator(jet, tol));
}

OrderedJson intersect_total(const Options& o, const Tolerance& tol) {
    const json_io::MeshProblem problem = json_io::mesh_problem_from(json_io::read_file(o.total_path));
    const TotalIntersection t = total_intersection_number(problem.charts, problem.w, tol);
    OrderedJson j;
    j["total"] = t.total;
    OrderedJson cs = OrderedJson::array();
    for (const auto& e : t.crossings) {
        OrderedJson c;
        c["chart"] = e.chart;
        c["point"] = numbers(e.crossing.point);
        c["residual"] = e.crossing.residual;
        c["epsilon"] = e.result.epsilon;
        c["p"] = e.result.kernel_dim;
        c["det"] = e.result.det;
        cs.push_back(std::move(c));
    }
    j["crossings"] = std::move(cs);
    return j;
}

OrderedJson universal_report(const Options& o, const Tolerance& tol) {
    const int modes = !o.universal_spectrum.empty() + !o.universal_flow.empty() + !o.universal_reduce.empty();
    if (modes != 1) throw InputError("universal needs exactly one of --spectrum, --flow, --reduce");
    OrderedJson j;
    if (!o.universal_spectrum.empty()) {
        if (o.universal_window.size() != 2) throw InputError("--spectrum needs --window a b");
        const double a = o.universal_window[0], b = o.universal_window[1];
        const UnitaryMatrix u = json_io::unitary_from(json_io::read_file(o.universal_spectrum), "unitary");
        j["exact"] = numbers(universal::exact_spectrum(u, a, b));
        if (o.universal_m) {
            std::vector<double> in_window;
            for (double x : universal::discrete_spectrum(u, *o.universal_m).physical)
                if (x >= a && x <= b) in_window.push_back(x);
            j["m"] = *o.universal_m;
            j["discrete"] = numbers(in_window);
            j["error"] = universal::spectrum_error(u, *o.universal_m, a, b);
        }
        return j;
    }
    if (!o.universal_flow.empty()) {
        const UnitaryLoop loop = json_io::unitary_loop_from(json_io::read_file(o.universal_flow));
        if (o.universal_m) {
            OrderedJson r = json_io::to_json(universal::discretized_loop_flow(loop, *o.universal_m, tol));
            r["m"] = *o.universal_m;
            return r;
        }
        return json_io::to_json(universal::universal_loop_flow(loop, tol));
    }
    const UnitaryMatrix u = json_io::unitary_from(json_io::read_file(o.universal_reduce), "unitary");
    j["unitary"] = json_io::to_json(universal::universal_reduction(u).matrix());
    j["lagrangian"] = json_io::to_json(universal::reduced_lagrangian(u));
    return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Lagrangian Grassmannian, spectral flow and Maslov index computations", "lagflow"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--tol", o.tol, "rank threshold (overrides LAGFLOW_TOL)");

    CLI::App* arnold_cmd = app.add_subcommand("arnold", "unitary <-> lagrangian and chart coordinates");
    arnold_cmd->add_option("--to-lagrangian", o.arnold_to_lagrangian, "unitary file");
    arnold_cmd->add_option("--to-unitary", o.arnold_to_unitary, "lagrangian file");
    arnold_cmd->add_option("--chart", o.arnold_chart, "lagrangian file");
    arnold_cmd->add_option("--base", o.arnold_base, "chart base lagrangian file");

    CLI::App* sf_cmd = app.add_subcommand("sf", "spectral flow of a Hermitian path");
    sf_cmd->add_option("path", o.sf_path)->required();
    sf_cmd->add_option("--method", o.sf_method)->check(CLI::IsMember({"crossing", "tracking", "both"}));
    sf_cmd->add_option("--plot", o.sf_plot, "write eigenvalue branches as CSV");

    CLI::App* maslov_cmd = app.add_subcommand("maslov", "Maslov index of a lagrangian path");
    maslov_cmd->add_option("path", o.maslov_path)->required();
    maslov_cmd->add_option("--plot", o.maslov_plot, "write eigenphases as CSV");

    CLI::App* reduce_cmd = app.add_subcommand("reduce", "symplectic reduction");
    reduce_cmd->add_option("input", o.reduce_file);
    reduce_cmd->add_option("--unitary", o.reduce_unitary, "unitary file");
    reduce_cmd->add_option("--w-indices", o.reduce_indices, "1-based H- coordinates spanning W");

    CLI::App* schubert_cmd = app.add_subcommand("schubert", "Schubert cell of a lagrangian");
    schubert_cmd->add_option("lagrangian", o.schubert_path)->required();

    CLI::App* intersect_cmd = app.add_subcommand("intersect", "local intersection number of a jet");
    intersect_cmd->add_option("jet", o.intersect_path)->required();

    CLI::App* total_cmd = app.add_subcommand("intersect-total", "intersection number of a meshed family");
    total_cmd->add_option("family", o.total_path)->required();

    CLI::App* universal_cmd = app.add_subcommand("universal", "the universal family -i d/dt, f(1) = U f(0)");
    universal_cmd->add_option("--spectrum", o.universal_spectrum, "unitary file");
    universal_cmd->add_option("--window", o.universal_window, "spectral window a b")->expected(2);
    universal_cmd->add_option("--flow", o.universal_flow, "loop file");
    universal_cmd->add_option("--m", o.universal_m, "discretization nodes");
    universal_cmd->add_option("--reduce", o.universal_reduce, "unitary file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "lagflow: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        const Tolerance tol = tolerance(o);
        OrderedJson result;
        if (arnold_cmd->parsed()) result = arnold(o, tol);
        else if (sf_cmd->parsed()) result = sf(o, tol);
        else if (maslov_cmd->parsed()) result = maslov(o, tol);
        else if (reduce_cmd->parsed()) result = reduce(o, tol);
        else if (schubert_cmd->parsed()) result = schubert_report(o, tol);
        else if (intersect_cmd->parsed()) result = intersect(o, tol);
        else if (total_cmd->parsed()) result = intersect_total(o, tol);
        else result = universal_report(o, tol);
        out << json_io::dump(result);
        return kExitOk;
    } catch (const PreconditionError& e) {
        err << "lagflow: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const InputError& e) {
        err << "lagflow: " << e.what() << '\n';
        return kExitInput;
    } catch (const Json::exception& e) {
        err << "lagflow: malformed input: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "lagflow: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace lagflow::cli
