// gnr: analyse, mesh and verify ruled surfaces described by scene files.
//
// Exit codes: 0 success, 1 invariant failure (verify), 2 configuration
// error, 3 math or domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gnr/gnr.hpp"
#include "gnr/io/obj.hpp"
#include "gnr/io/report.hpp"
#include "gnr/io/scene.hpp"

namespace {

enum Exit { kOk = 0, kInvariantFailure = 1, kConfigError = 2, kMathError = 3 };

int emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return kOk;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return kConfigError;
    }
    out << text;
    return kOk;
}

std::string default_curves_path(const std::string& mesh_path) {
    const auto dot = mesh_path.rfind('.');
    const auto slash = mesh_path.find_last_of("/\\");
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    return (has_ext ? mesh_path.substr(0, dot) : mesh_path) + "_curves.obj";
}

int cmd_report(const std::string& scene_path, const std::string& out_path) {
    const auto scene = gnr::io::load_scene(scene_path);
    return emit(gnr::io::analysis_report(scene).dump(2) + "\n", out_path);
}

int cmd_frenet(const std::string& scene_path, double s) {
    const auto scene = gnr::io::load_scene(scene_path);
    std::cout << gnr::io::frenet_report(scene, s).dump(2) << "\n";
    return kOk;
}

int cmd_mesh(const std::string& scene_path, const std::string& out_path, std::string curves_path) {
    const auto scene = gnr::io::load_scene(scene_path);
    const auto surface = scene.surface();
    const auto grid = scene.grid();
    std::ostringstream mesh, curves;
    const auto stats = gnr::io::write_surface_obj(mesh, surface, grid);
    gnr::io::write_polylines_obj(curves, gnr::io::scene_polylines(surface, grid));
    if (curves_path.empty()) curves_path = default_curves_path(out_path);
    if (int rc = emit(mesh.str(), out_path)) return rc;
    if (int rc = emit(curves.str(), curves_path)) return rc;
    std::cerr << "wrote " << stats.vertices << " vertices, " << stats.triangles << " triangles to " << out_path
              << "; curves to " << curves_path << "\n";
    return kOk;
}

int cmd_verify(const std::string& scene_path) {
    const auto scene = gnr::io::load_scene(scene_path);
    const auto results = gnr::verify_surface(scene.surface(), scene.grid());
    bool ok = true;
    for (const auto& r : results) {
        char line[256];
        if (r.skipped) {
            std::snprintf(line, sizeof line, "SKIP %-42s", r.name.c_str());
        } else {
            std::snprintf(line, sizeof line, "%s %-42s residual=%.3e tol=%.1e", r.passed ? "PASS" : "FAIL",
                          r.name.c_str(), r.residual, r.tolerance);
            ok = ok && r.passed;
        }
        std::cout << line;
        if (!r.note.empty()) std::cout << "  (" << r.note << ")";
        std::cout << "\n";
    }
    std::cout << (ok ? "verify: all invariants hold\n" : "verify: invariant failure\n");
    return ok ? kOk : kInvariantFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized normal ruled surfaces: reports, meshes and invariant checks"};
    app.require_subcommand(1);

    std::string scene, out, curves_out;
    double at = 0.0;

    auto* report = app.add_subcommand("report", "Write a JSON analysis report");
    report->add_option("scene", scene, "Scene JSON file")->required();
    report->add_option("--out", out, "Output path (default: stdout)");

    auto* mesh = app.add_subcommand("mesh", "Write the surface as an OBJ mesh plus a curves file");
    mesh->add_option("scene", scene, "Scene JSON file")->required();
    mesh->add_option("--out", out, "Mesh OBJ path")->required();
    mesh->add_option("--curves-out", curves_out, "Curves OBJ path (default: <out>_curves.obj)");

    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    verify->add_option("scene", scene, "Scene JSON file")->required();

    auto* frenet = app.add_subcommand("frenet", "Print the Frenet apparatus of the base curve");
    frenet->add_option("scene", scene, "Scene JSON file")->required();
    frenet->add_option("--at", at, "Curve parameter s")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (*report) return cmd_report(scene, out);
        if (*mesh) return cmd_mesh(scene, out, curves_out);
        if (*verify) return cmd_verify(scene);
        if (*frenet) return cmd_frenet(scene, at);
    } catch (const gnr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const gnr::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const gnr::Error& e) {
        std::cerr << "math error: " << e.what() << "\n";
        return kMathError;
    }
    return kConfigError;
}
