#pragma once

// Independent subset enumerator for the star inequality, built from the raw
// cell lists without the library's subset search.

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "circlepat/hypgeo.hpp"
#include "circlepat/surface.hpp"

namespace circlepat::testing {

struct RawFace {
    std::vector<int> verts;                  // corner vertex indices in boundary order
    std::vector<std::array<int, 3>> sides;   // (edge, tail, head) per boundary position
};

inline std::vector<RawFace> raw_faces(const CellularSurface& s) {
    std::vector<RawFace> out;
    for (const auto& f : s.faces()) {
        RawFace r;
        for (const auto& u : f.boundary) {
            const auto& e = s.edge(u.edge);
            const int t = u.forward ? e.v0 : e.v1;
            const int h = u.forward ? e.v1 : e.v0;
            r.verts.push_back(t);
            r.sides.push_back({u.edge, t, h});
        }
        out.push_back(r);
    }
    return out;
}

inline std::string key(const CellularSurface& s, std::uint32_t mask) {
    std::vector<int> ids;
    for (int v = 0; v < s.num_vertices(); ++v)
        if (mask >> v & 1u) ids.push_back(s.vertex_id(v));
    std::sort(ids.begin(), ids.end());
    std::string out = "V0={";
    for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + std::to_string(ids[i]);
    return out + "}";
}

// Every vertex subset, from the raw cell lists. The walk is the set of face
// sides with both ends outside the subset, in faces touching it; for
// triangles these are the link pairs.
struct Brute {
    std::set<std::string> violating;
    std::size_t connected = 0;
};

inline Brute brute_force(const CellularSurface& s, const EdgeWeights& w, int max_size = 64) {
    const int n = s.num_vertices();
    const auto faces = raw_faces(s);
    Brute out;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) > max_size) continue;
        auto in = [&](int v) { return (mask >> v & 1u) != 0; };
        // components: vertices of the subset sharing a face
        std::vector<int> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
        int nf = 0;
        double walk = 0.0;
        for (const auto& f : faces) {
            int first = -1;
            for (int v : f.verts)
                if (in(v)) {
                    if (first < 0) first = v;
                    parent[find(v)] = find(first);
                }
            if (first < 0) continue;
            ++nf;
            for (const auto& side : f.sides)
                if (!in(side[1]) && !in(side[2])) walk += w[side[0]] - kPi;
        }
        std::set<int> roots;
        for (int v = 0; v < n; ++v)
            if (in(v)) roots.insert(find(v));
        if (roots.size() != 1) continue;
        ++out.connected;
        int ne = 0;
        for (const auto& e : s.edges())
            if (in(e.v0) || in(e.v1)) ++ne;
        const int chi = __builtin_popcount(mask) - ne + nf;
        if (walk + 2.0 * kPi * chi >= 0.0) out.violating.insert(key(s, mask));
    }
    return out;
}

inline std::set<std::string> library_violations(const ConditionReport& r, const std::string& kind) {
    std::set<std::string> out;
    for (const auto& v : r.violations)
        if (v.kind == kind) out.insert(v.witness.substr(0, v.witness.find(' ')));
    return out;
}

}  // namespace circlepat::testing
