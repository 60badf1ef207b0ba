#pragma once

// Wavefront OBJ output: the sampled surface as a triangle mesh and the base,
// striction and singular curves as polylines.

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "gnr/io/scene.hpp"
#include "gnr/parallel.hpp"
#include "gnr/surface.hpp"

namespace gnr::io {

namespace detail {

inline void write_vertex(std::ostream& os, const Vec3& p) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    os << buf;
}

}  // namespace detail

struct MeshStats {
    std::size_t vertices = 0;
    std::size_t triangles = 0;
};

/// ns*nu vertices, vertex (i, j) has 1-based index i*nu + j + 1.  Each grid
/// quad becomes (00, 10, 11) and (00, 11, 01), so face normals follow
/// dF/ds x dF/du.
inline MeshStats write_surface_obj(std::ostream& os, const GNRSurface& surface, const SampleGrid& grid) {
    const std::size_t ns = grid.s.size(), nu = grid.u.size();
    std::vector<Vec3> pts(ns * nu);
    parallel_for(ns, [&](std::size_t i) {
        const Section sec = surface.section(grid.s[i]);
        for (std::size_t j = 0; j < nu; ++j) pts[i * nu + j] = sec.alpha + grid.u[j] * sec.ruling;
    });
    os << "# ns " << ns << " nu " << nu << "\n";
    for (const auto& p : pts) detail::write_vertex(os, p);
    MeshStats st{pts.size(), 0};
    for (std::size_t i = 0; i + 1 < ns; ++i)
        for (std::size_t j = 0; j + 1 < nu; ++j) {
            const std::size_t v00 = i * nu + j + 1, v01 = v00 + 1, v10 = v00 + nu, v11 = v10 + 1;
            os << "f " << v00 << ' ' << v10 << ' ' << v11 << "\n";
            os << "f " << v00 << ' ' << v11 << ' ' << v01 << "\n";
            st.triangles += 2;
        }
    return st;
}

struct Polyline {
    std::string name;
    std::vector<std::vector<Vec3>> runs;  // each run of >= 2 points is an `l`, single points become `p`
};

inline void write_polylines_obj(std::ostream& os, const std::vector<Polyline>& lines) {
    std::size_t next = 1;
    for (const auto& pl : lines) {
        os << "o " << pl.name << "\n";
        for (const auto& run : pl.runs) {
            if (run.empty()) continue;
            for (const auto& p : run) detail::write_vertex(os, p);
            os << (run.size() == 1 ? "p" : "l");
            for (std::size_t k = 0; k < run.size(); ++k) os << ' ' << next + k;
            os << "\n";
            next += run.size();
        }
    }
}

/// Base curve, striction curve (split where the ruling is cylindrical) and
/// singular locus (restricted to the u range, split where samples are not
/// consecutive grid points).
inline std::vector<Polyline> scene_polylines(const GNRSurface& surface, const SampleGrid& grid) {
    Polyline base{"base_curve", {{}}};
    Polyline striction{"striction_curve", {{}}};
    for (double s : grid.s) {
        const Section sec = surface.section(s);
        base.runs.back().push_back(sec.alpha);
        try {
            striction.runs.back().push_back(striction_parameter(sec).point);
        } catch (const CylindricalRuling&) {
            if (!striction.runs.back().empty()) striction.runs.emplace_back();
        }
    }

    Polyline locus{"singular_locus", {}};
    const auto sl = singular_locus(surface, grid.s);
    const Interval ur = surface.u_range();
    std::size_t last_index = static_cast<std::size_t>(-2);
    for (const auto& p : sl.samples) {
        if (!ur.contains(p.u)) {
            last_index = static_cast<std::size_t>(-2);
            continue;
        }
        std::size_t idx = static_cast<std::size_t>(-1);
        for (std::size_t k = 0; k < grid.s.size(); ++k)
            if (grid.s[k] == p.s) idx = k;
        const bool consecutive = idx != static_cast<std::size_t>(-1) && idx == last_index + 1;
        if (!consecutive || locus.runs.empty()) locus.runs.emplace_back();
        locus.runs.back().push_back(p.point);
        last_index = idx == static_cast<std::size_t>(-1) ? static_cast<std::size_t>(-2) : idx;
    }
    std::vector<Polyline> out{base, striction, locus};
    for (auto& pl : out)
        pl.runs.erase(std::remove_if(pl.runs.begin(), pl.runs.end(), [](const auto& r) { return r.empty(); }),
                      pl.runs.end());
    return out;
}

}  // namespace gnr::io
