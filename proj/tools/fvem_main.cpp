// fvem: finite volume element solver for hyperbolic integro-differential equations.

#include "fvem/assembly.hpp"
#include "fvem/config.hpp"
#include "fvem/error.hpp"
#include "fvem/mesh.hpp"
#include "fvem/study.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out += (i ? "," : "") + items[i];
    return out;
}

fvem::StepRule parse_rule(const std::string& s) {
    fvem::StudyConfig tmp;
    fvem::apply_setting(tmp, "k_rule", s);
    return tmp.step_rule;
}

int cmd_study(const std::string& config_file, const std::vector<std::pair<std::string, std::string>>& overrides) {
    fvem::StudyConfig config = config_file.empty() ? fvem::StudyConfig{} : fvem::parse_config_file(config_file);
    for (const auto& [key, value] : overrides)
        fvem::apply_setting(config, key, value);
    config.validate();

    const auto report = fvem::run_study(config, &std::cerr);
    if (config.output.empty()) {
        fvem::write_csv(std::cout, report);
    } else {
        std::ofstream out(config.output, std::ios::binary);
        if (!out)
            throw fvem::Error("cannot open output file '" + config.output + "'");
        fvem::write_csv(out, report);
        if (!out)
            throw fvem::Error("failed writing output file '" + config.output + "'");
        std::cerr << "wrote " << config.output << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite volume element solver for hyperbolic integro-differential equations"};
    app.require_subcommand(1);

    // study
    auto* study = app.add_subcommand("study", "Run a mesh-refinement convergence study and emit CSV");
    std::string config_file;
    std::string s_problem, s_levels, s_rule, s_norms, s_output, s_quadrature;
    double s_k = 0.0, s_c = 0.0, s_safety = 0.0, s_T = 0.0;
    bool s_reproducible = false;
    study->add_option("--config", config_file, "Flat key = value config file")->check(CLI::ExistingFile);
    study->add_option("--problem", s_problem, "Problem name (" + join(fvem::available_problems()) + ")");
    study->add_option("--levels", s_levels, "Comma-separated mesh levels, e.g. 4,8,16,32");
    study->add_option("--k-rule", s_rule, "fixed | proportional | auto");
    study->add_option("--k", s_k, "Time step for the fixed rule");
    study->add_option("--c", s_c, "k = c * h_cell for the proportional rule");
    study->add_option("--safety", s_safety, "Fraction of k_max for the auto rule");
    study->add_option("--T", s_T, "Final time");
    study->add_option("--norms", s_norms, "Comma-separated subset of max,l2,h1");
    study->add_option("--quadrature", s_quadrature, "exact | endpoint");
    study->add_option("--output", s_output, "CSV output path (stdout if omitted)");
    study->add_flag("--reproducible", s_reproducible, "Byte-identical output (runtime column zeroed)");

    // run
    auto* runc = app.add_subcommand("run", "Run a single simulation");
    fvem::SingleRunRequest req;
    std::string r_rule = "auto", r_snapshots, r_prefix = "snapshot", r_quadrature = "endpoint", r_mesh;
    double r_T = -1.0;
    runc->add_option("--problem", req.problem, "Problem name (" + join(fvem::available_problems()) + ")");
    runc->add_option("--n", req.n, "Cells per side of the uniform mesh")->check(CLI::PositiveNumber);
    runc->add_option("--mesh", r_mesh, "Mesh file instead of the uniform mesh")->check(CLI::ExistingFile);
    runc->add_option("--k-rule", r_rule, "fixed | proportional | auto");
    runc->add_option("--k", req.k, "Time step for the fixed rule");
    runc->add_option("--c", req.c, "k = c * h_cell for the proportional rule");
    runc->add_option("--safety", req.safety, "Fraction of k_max for the auto rule");
    runc->add_option("--T", r_T, "Final time (problem default if omitted)");
    runc->add_option("--snapshot-times", r_snapshots, "Comma-separated output times");
    runc->add_option("--snapshot-prefix", r_prefix, "Snapshot file prefix");
    runc->add_option("--quadrature", r_quadrature, "exact | endpoint");
    runc->add_flag("--override-cfl", req.override_cfl, "Run even if k exceeds the stability limit");

    // mesh-info
    auto* info = app.add_subcommand("mesh-info", "Print mesh and dual-mesh diagnostics");
    std::size_t m_n = 4;
    std::string m_mesh, m_dump, m_problem;
    info->add_option("--n", m_n, "Cells per side of the uniform unit-square mesh")->check(CLI::PositiveNumber);
    info->add_option("--mesh", m_mesh, "Mesh file")->check(CLI::ExistingFile);
    info->add_option("--dump-stiffness", m_dump, "Write the stiffness matrix as 'i j value' lines");
    info->add_option("--problem", m_problem, "Problem whose coefficient is used for the dump (identity if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (study->parsed()) {
            std::vector<std::pair<std::string, std::string>> overrides;
            auto add = [&](const char* flag, const char* key, const std::string& v) {
                if (study->count(flag))
                    overrides.emplace_back(key, v);
            };
            auto num = [](double v) {
                std::ostringstream s;
                s.precision(17);
                s << v;
                return s.str();
            };
            add("--problem", "problem", s_problem);
            add("--levels", "levels", s_levels);
            add("--k-rule", "k_rule", s_rule);
            add("--k", "k", num(s_k));
            add("--c", "c", num(s_c));
            add("--safety", "safety", num(s_safety));
            add("--T", "T", num(s_T));
            add("--norms", "norms", s_norms);
            add("--quadrature", "quadrature", s_quadrature);
            add("--output", "output", s_output);
            if (s_reproducible)
                overrides.emplace_back("reproducible", "true");
            return cmd_study(config_file, overrides);
        }

        if (runc->parsed()) {
            fvem::problem_by_name(req.problem);
            req.step_rule = parse_rule(r_rule);
            if (r_T >= 0.0)
                req.final_time = r_T;
            if (!r_mesh.empty())
                req.mesh_file = r_mesh;
            fvem::StudyConfig tmp;
            fvem::apply_setting(tmp, "quadrature", r_quadrature);
            req.quadrature = tmp.quadrature;
            if (!r_snapshots.empty()) {
                std::stringstream ss(r_snapshots);
                for (std::string item; std::getline(ss, item, ',');) {
                    try {
                        req.snapshot_times.push_back(std::stod(item));
                    } catch (const std::exception&) {
                        throw fvem::ConfigError("malformed snapshot time '" + item + "'");
                    }
                }
            }

            std::unique_ptr<fvem::Discretization> disc;
            const auto summary = fvem::run_single(req, &disc);
            fvem::write_summary(std::cout, summary);
            for (const auto& snap : summary.snapshots) {
                const std::string path = r_prefix + "_" + std::to_string(snap.step) + ".txt";
                std::ofstream out(path);
                if (!out)
                    throw fvem::Error("cannot open snapshot file '" + path + "'");
                fvem::write_snapshot(out, disc->space(), snap.field);
                std::cout << "snapshot t=" << snap.time << " step=" << snap.step << " -> " << path << '\n';
            }
            return 0;
        }

        if (info->parsed()) {
            fvem::PrimalMesh mesh = m_mesh.empty() ? fvem::build_uniform_triangulation(m_n)
                                                   : fvem::read_mesh_file(m_mesh);
            const auto dual = fvem::build_dual_mesh(mesh);
            const auto report = fvem::quasi_uniformity_report(dual, mesh);
            std::cout << "nodes " << mesh.num_nodes() << '\n'
                      << "triangles " << mesh.num_triangles() << '\n'
                      << "interior_nodes " << mesh.num_interior_nodes() << '\n'
                      << "h " << mesh.h << '\n'
                      << "area " << mesh.total_area() << '\n'
                      << "dual_area " << dual.total_area() << '\n';
            if (report.interior_volume_ratio)
                std::cout << "interior_volume_over_h2 " << report.interior_volume_ratio->min << ' '
                          << report.interior_volume_ratio->max << '\n';
            std::cout << "triangle_area_over_h2 " << report.triangle_area_ratio.min << ' '
                      << report.triangle_area_ratio.max << '\n';
            if (!m_dump.empty()) {
                const auto coeff = m_problem.empty()
                                       ? fvem::CoefficientField::constant(fvem::Mat2::identity())
                                       : fvem::problem_by_name(m_problem).coeff;
                fvem::P1Space space(mesh);
                const auto a = fvem::assemble_stiffness(space, dual, coeff, fvem::FluxQuadrature::endpoint);
                std::ofstream out(m_dump);
                if (!out)
                    throw fvem::Error("cannot open dump file '" + m_dump + "'");
                fvem::write_coordinates(out, a);
                std::cout << "stiffness " << a.size() << "x" << a.size() << " nnz " << a.nonzeros()
                          << " -> " << m_dump << '\n';
            }
            return 0;
        }
    } catch (const fvem::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
