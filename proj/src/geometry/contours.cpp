#include "inkbot/geometry/contours.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace inkbot {

namespace {

// Undirected multigraph whose edges are line segments between positioned
// nodes. Linked into trails so that every component with at most two odd
// vertices becomes a single chain.
struct SegmentGraph {
    std::vector<Vec3> pos;
    std::vector<std::pair<int, int>> edges;

    int add_node(const Vec3& p) {
        pos.push_back(p);
        return static_cast<int>(pos.size()) - 1;
    }
};

ChainSet link_segments(const SegmentGraph& g) {
    const int n = static_cast<int>(g.pos.size());
    std::vector<std::vector<std::pair<int, int>>> adj(n);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        const auto [a, b] = g.edges[e];
        adj[a].push_back({e, b});
        adj[b].push_back({e, a});
    }
    std::vector<char> used(g.edges.size(), 0);
    std::vector<size_t> cursor(n, 0);
    auto next_edge = [&](int v) -> std::pair<int, int> {
        while (cursor[v] < adj[v].size() && used[adj[v][cursor[v]].first]) ++cursor[v];
        if (cursor[v] == adj[v].size()) return {-1, -1};
        return adj[v][cursor[v]];
    };
    auto remaining_degree = [&](int v) {
        int d = 0;
        for (const auto& [e, w] : adj[v]) d += used[e] ? 0 : 1;
        return d;
    };

    // Hierholzer; from a start vertex with odd degree this gives an Euler
    // trail when the component has exactly two odd vertices.
    auto euler = [&](int start) {
        std::vector<int> stack{start}, path;
        while (!stack.empty()) {
            const int v = stack.back();
            const auto [e, w] = next_edge(v);
            if (e < 0) {
                path.push_back(v);
                stack.pop_back();
            } else {
                used[e] = 1;
                stack.push_back(w);
            }
        }
        std::reverse(path.begin(), path.end());
        return path;
    };
    auto greedy = [&](int start) {
        std::vector<int> path{start};
        int v = start;
        for (auto [e, w] = next_edge(v); e >= 0; std::tie(e, w) = next_edge(v)) {
            used[e] = 1;
            v = w;
            path.push_back(v);
        }
        return path;
    };

    // Components over the edge graph.
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0 || adj[s].empty()) continue;
        std::vector<int> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (const auto& [e, w] : adj[v])
                if (comp[w] < 0) {
                    comp[w] = ncomp;
                    stack.push_back(w);
                }
        }
        ++ncomp;
    }
    std::vector<std::vector<int>> members(ncomp);
    for (int v = 0; v < n; ++v)
        if (comp[v] >= 0) members[comp[v]].push_back(v);

    ChainSet out;
    auto emit = [&](const std::vector<int>& path) {
        if (path.size() < 2) return;
        Chain3 c;
        c.closed = path.size() > 2 && path.front() == path.back();
        const size_t len = c.closed ? path.size() - 1 : path.size();
        for (size_t i = 0; i < len; ++i) c.points.push_back(g.pos[path[i]]);
        out.push_back(std::move(c));
    };
    for (const auto& mem : members) {
        std::vector<int> odd;
        for (int v : mem)
            if (adj[v].size() % 2) odd.push_back(v);
        if (odd.size() <= 2) {
            emit(euler(odd.empty() ? mem.front() : odd.front()));
            continue;
        }
        for (int v : odd)
            while (remaining_degree(v) % 2 == 1) emit(greedy(v));
        for (int v : mem)
            while (next_edge(v).first >= 0) emit(euler(v));
    }
    return out;
}

Vec3 face_centroid(const TriangleMesh& mesh, const Face& f) {
    return (mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]]) / 3.0;
}

// Node per mesh edge carrying an interpolated crossing point.
struct EdgePoints {
    std::unordered_map<int, int> node_of_edge;
    SegmentGraph graph;

    int node(int edge, const Vec3& p) {
        auto it = node_of_edge.find(edge);
        if (it != node_of_edge.end()) return it->second;
        const int id = graph.add_node(p);
        node_of_edge.emplace(edge, id);
        return id;
    }
};

}  // namespace

ChainSet extract_occluding_contours(const TriangleMesh& mesh, const Viewpoint& view) {
    if (mesh.empty()) return {};
    view.validate();
    const Camera cam(view);
    const MeshTopology topo(mesh);

    std::vector<char> front(mesh.faces.size());
    for (size_t f = 0; f < mesh.faces.size(); ++f) {
        const Vec3 n = face_normal(mesh, static_cast<int>(f));
        front[f] = n.dot(cam.eye() - face_centroid(mesh, mesh.faces[f])) > 0.0;
    }

    SegmentGraph g;
    g.pos = mesh.vertices;
    for (const auto& e : topo.edges) {
        const bool boundary = e.faces[1] < 0;
        if (boundary || front[e.faces[0]] != front[e.faces[1]]) g.edges.push_back({e.v0, e.v1});
    }
    return link_segments(g);
}

ChainSet extract_suggestive_contours(const TriangleMesh& mesh, const ViewCurvature& vc,
                                     const ContourParams& params) {
    const MeshTopology topo(mesh);
    EdgePoints ep;
    for (size_t f = 0; f < mesh.faces.size(); ++f) {
        const Face& tri = mesh.faces[f];
        if (vc.ndotv[tri[0]] <= 0 || vc.ndotv[tri[1]] <= 0 || vc.ndotv[tri[2]] <= 0) continue;

        int nodes[2];
        double dw[2];
        int found = 0;
        for (int c = 0; c < 3 && found < 2; ++c) {
            const int a = tri[(c + 1) % 3], b = tri[(c + 2) % 3];
            const double ka = vc.kr[a], kb = vc.kr[b];
            if ((ka > 0) == (kb > 0)) continue;
            const double t = ka / (ka - kb);
            const Vec3 p = mesh.vertices[a] + t * (mesh.vertices[b] - mesh.vertices[a]);
            dw[found] = vc.dwkr[a] + t * (vc.dwkr[b] - vc.dwkr[a]);
            nodes[found] = ep.node(topo.face_edges[f][c], p);
            ++found;
        }
        if (found != 2) continue;
        if (0.5 * (dw[0] + dw[1]) <= params.sc_derivative_threshold) continue;
        ep.graph.edges.push_back({nodes[0], nodes[1]});
    }
    return link_segments(ep.graph);
}

ChainSet extract_suggestive_contours(const TriangleMesh& mesh, const Viewpoint& view,
                                     const CurvatureField& field, const ContourParams& params) {
    if (mesh.empty()) return {};
    const MeshTopology topo(mesh);
    return extract_suggestive_contours(mesh, compute_view_curvature(mesh, topo, field, view), params);
}

ChainSet extract_apparent_ridges(const TriangleMesh& mesh, const MeshTopology& topo, const ViewCurvature& vc,
                                 const ContourParams& params) {
    const double thresh = params.ar_threshold_scale / std::max(diameter(mesh), 1e-12);
    EdgePoints ep;
    for (size_t f = 0; f < mesh.faces.size(); ++f) {
        const Face& tri = mesh.faces[f];
        // q1 blows up towards the silhouette; faces touching it give noise
        if (vc.ndotv[tri[0]] <= 0 || vc.ndotv[tri[1]] <= 0 || vc.ndotv[tri[2]] <= 0) continue;

        // orient t1 consistently across the face
        Vec3 t[3];
        double d[3];
        for (int c = 0; c < 3; ++c) {
            t[c] = vc.t1[tri[c]];
            d[c] = vc.dt1q1[tri[c]];
            if (c > 0 && t[c].dot(t[0]) < 0) {
                t[c] = -t[c];
                d[c] = -d[c];
            }
        }

        int nodes[2];
        double q[2];
        int found = 0;
        for (int c = 0; c < 3 && found < 2; ++c) {
            const int ia = (c + 1) % 3, ib = (c + 2) % 3;
            if ((d[ia] > 0) == (d[ib] > 0)) continue;
            const double s = d[ia] / (d[ia] - d[ib]);
            const int a = tri[ia], b = tri[ib];
            const Vec3 p = mesh.vertices[a] + s * (mesh.vertices[b] - mesh.vertices[a]);
            q[found] = vc.q1[a] + s * (vc.q1[b] - vc.q1[a]);
            nodes[found] = ep.node(topo.face_edges[f][c], p);
            ++found;
        }
        if (found != 2) continue;
        if (0.5 * (q[0] + q[1]) <= thresh) continue;

        // Maximum, not minimum: the oriented derivative must decrease along t1.
        const Vec3& p0 = mesh.vertices[tri[0]];
        const Vec3& p1 = mesh.vertices[tri[1]];
        const Vec3& p2 = mesh.vertices[tri[2]];
        const Vec3 cr = (p1 - p0).cross(p2 - p0);
        const double a2 = cr.norm();
        const Vec3 nf = cr / a2;
        const Vec3 grad = (d[0] * nf.cross(p2 - p1) + d[1] * nf.cross(p0 - p2) + d[2] * nf.cross(p1 - p0)) / a2;
        if (grad.dot(t[0] + t[1] + t[2]) >= 0) continue;

        ep.graph.edges.push_back({nodes[0], nodes[1]});
    }
    return link_segments(ep.graph);
}

ChainSet extract_apparent_ridges(const TriangleMesh& mesh, const Viewpoint& view,
                                 const CurvatureField& field, const ContourParams& params) {
    if (mesh.empty()) return {};
    const MeshTopology topo(mesh);
    return extract_apparent_ridges(mesh, topo, compute_view_curvature(mesh, topo, field, view), params);
}

ContourResult render_contours(const TriangleMesh& mesh, const Viewpoint& view, unsigned family_mask,
                              const ContourParams& params) {
    view.validate();
    ContourResult out;
    if (!mesh.empty()) {
        if (family_mask & static_cast<unsigned>(ContourFamily::OC))
            out.chains.push_back({ContourFamily::OC, extract_occluding_contours(mesh, view)});
        const unsigned curv = static_cast<unsigned>(ContourFamily::SC) | static_cast<unsigned>(ContourFamily::AR);
        if (family_mask & curv) {
            const CurvatureField field = compute_curvature(mesh);
            const MeshTopology topo(mesh);
            const ViewCurvature vc = compute_view_curvature(mesh, topo, field, view);
            if (family_mask & static_cast<unsigned>(ContourFamily::SC))
                out.chains.push_back({ContourFamily::SC, extract_suggestive_contours(mesh, vc, params)});
            if (family_mask & static_cast<unsigned>(ContourFamily::AR))
                out.chains.push_back({ContourFamily::AR, extract_apparent_ridges(mesh, topo, vc, params)});
        }
    }
    out.image = rasterize_contours(out.chains, view, mesh.empty() ? nullptr : &mesh);
    return out;
}

}  // namespace inkbot
