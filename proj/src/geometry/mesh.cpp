#include "inkbot/geometry/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace inkbot {

const char* to_string(ContourFamily f) {
    switch (f) {
    case ContourFamily::OC: return "OC";
    case ContourFamily::SC: return "SC";
    case ContourFamily::AR: return "AR";
    }
    return "?";
}

ContourFamily contour_family_from_string(const std::string& s) {
    if (s == "OC") return ContourFamily::OC;
    if (s == "SC") return ContourFamily::SC;
    if (s == "AR") return ContourFamily::AR;
    throw InvalidInput("unknown contour family '" + s + "'");
}

Vec3 face_normal(const TriangleMesh& mesh, int face) {
    const Face& f = mesh.faces[face];
    const Vec3 n = (mesh.vertices[f[1]] - mesh.vertices[f[0]])
                       .cross(mesh.vertices[f[2]] - mesh.vertices[f[0]]);
    const double len = n.norm();
    return len > 0 ? Vec3(n / len) : Vec3::UnitZ();
}

double face_area(const TriangleMesh& mesh, int face) {
    const Face& f = mesh.faces[face];
    return 0.5 * (mesh.vertices[f[1]] - mesh.vertices[f[0]])
                     .cross(mesh.vertices[f[2]] - mesh.vertices[f[0]])
                     .norm();
}

double diameter(const TriangleMesh& mesh) {
    if (mesh.vertices.empty()) return 0.0;
    Vec3 lo = mesh.vertices.front(), hi = lo;
    for (const Vec3& v : mesh.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return (hi - lo).norm();
}

void validate(const TriangleMesh& mesh) {
    const int nv = static_cast<int>(mesh.vertices.size());
    if (mesh.normals.size() != mesh.vertices.size())
        throw MeshError("normal count " + std::to_string(mesh.normals.size()) +
                        " != vertex count " + std::to_string(nv));
    const double diam = diameter(mesh);
    const double min_area = 1e-14 * diam * diam;
    for (size_t i = 0; i < mesh.faces.size(); ++i) {
        for (int idx : mesh.faces[i])
            if (idx < 0 || idx >= nv)
                throw MeshError("face " + std::to_string(i) + " references vertex " +
                                std::to_string(idx) + " (vertex count " + std::to_string(nv) + ")");
        if (face_area(mesh, static_cast<int>(i)) <= min_area)
            throw MeshError("face " + std::to_string(i) + " is degenerate (zero area)");
    }
    for (size_t i = 0; i < mesh.normals.size(); ++i)
        if (std::abs(mesh.normals[i].norm() - 1.0) > 1e-6)
            throw MeshError("normal " + std::to_string(i) + " is not unit length");
}

void compute_vertex_normals(TriangleMesh& mesh) {
    std::vector<Vec3> acc(mesh.vertices.size(), Vec3::Zero());
    for (const Face& f : mesh.faces) {
        // cross product magnitude is twice the area: area weighting for free
        const Vec3 n = (mesh.vertices[f[1]] - mesh.vertices[f[0]])
                           .cross(mesh.vertices[f[2]] - mesh.vertices[f[0]]);
        for (int v : f) acc[v] += n;
    }
    mesh.normals.resize(mesh.vertices.size());
    for (size_t i = 0; i < acc.size(); ++i) {
        const double len = acc[i].norm();
        mesh.normals[i] = len > 0 ? Vec3(acc[i] / len) : Vec3::UnitZ();
    }
}

namespace {

// Parses "7", "7/2", "7//3", "7/2/3" into (vertex, normal) 0-based indices.
std::pair<int, int> parse_corner(const std::string& tok, int nv, int nn) {
    auto fix = [](int idx, int count) { return idx < 0 ? count + idx : idx - 1; };
    int v = 0, n = 0;
    const size_t s1 = tok.find('/');
    v = std::stoi(tok.substr(0, s1));
    if (s1 != std::string::npos) {
        const size_t s2 = tok.find('/', s1 + 1);
        if (s2 != std::string::npos && s2 + 1 < tok.size()) n = std::stoi(tok.substr(s2 + 1));
    }
    return {fix(v, nv), n == 0 ? -1 : fix(n, nn)};
}

}  // namespace

TriangleMesh parse_obj(const std::string& text) {
    TriangleMesh mesh;
    std::vector<Vec3> file_normals;
    std::vector<int> normal_of_vertex;
    bool normals_complete = true;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z()))
                throw MeshError("obj line " + std::to_string(line_no) + ": bad vertex");
            mesh.vertices.push_back(p);
        } else if (tag == "vn") {
            Vec3 n;
            if (!(ls >> n.x() >> n.y() >> n.z()))
                throw MeshError("obj line " + std::to_string(line_no) + ": bad normal");
            file_normals.push_back(n);
        } else if (tag == "f") {
            std::vector<std::pair<int, int>> corners;
            std::string tok;
            const int nv = static_cast<int>(mesh.vertices.size());
            const int nn = static_cast<int>(file_normals.size());
            while (ls >> tok) corners.push_back(parse_corner(tok, nv, nn));
            if (corners.size() < 3)
                throw MeshError("obj line " + std::to_string(line_no) + ": face with < 3 corners");
            normal_of_vertex.resize(mesh.vertices.size(), -1);
            for (const auto& [v, n] : corners) {
                if (v < 0 || v >= nv)
                    throw MeshError("obj line " + std::to_string(line_no) + ": vertex index out of range");
                if (n < 0 || n >= nn) normals_complete = false;
                else normal_of_vertex[v] = n;
            }
            for (size_t k = 1; k + 1 < corners.size(); ++k)
                mesh.faces.push_back({corners[0].first, corners[k].first, corners[k + 1].first});
        }
    }

    normal_of_vertex.resize(mesh.vertices.size(), -1);
    if (normals_complete && !file_normals.empty() &&
        std::none_of(normal_of_vertex.begin(), normal_of_vertex.end(), [](int n) { return n < 0; })) {
        mesh.normals.resize(mesh.vertices.size());
        for (size_t i = 0; i < mesh.vertices.size(); ++i)
            mesh.normals[i] = file_normals[normal_of_vertex[i]].normalized();
    } else {
        compute_vertex_normals(mesh);
    }
    return mesh;
}

TriangleMesh load_obj(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_obj(ss.str());
}

void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << std::setprecision(9);
    for (const Vec3& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const Vec3& n : mesh.normals) out << "vn " << n.x() << ' ' << n.y() << ' ' << n.z() << '\n';
    for (const Face& f : mesh.faces) {
        out << 'f';
        for (int v : f) out << ' ' << v + 1 << "//" << v + 1;
        out << '\n';
    }
}

MeshTopology::MeshTopology(const TriangleMesh& mesh) {
    const size_t nv = mesh.vertices.size();
    vertex_edges_.resize(nv);
    vertex_faces.resize(nv);
    face_edges.resize(mesh.faces.size());

    for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        const Face& f = mesh.faces[fi];
        for (int c = 0; c < 3; ++c) {
            vertex_faces[f[c]].push_back(static_cast<int>(fi));
            const int a = std::min(f[(c + 1) % 3], f[(c + 2) % 3]);
            const int b = std::max(f[(c + 1) % 3], f[(c + 2) % 3]);
            int e = find_edge(a, b);
            if (e < 0) {
                e = static_cast<int>(edges.size());
                edges.push_back({a, b, {static_cast<int>(fi), -1}});
                vertex_edges_[a].emplace_back(b, e);
                vertex_edges_[b].emplace_back(a, e);
            } else if (edges[e].faces[1] < 0) {
                edges[e].faces[1] = static_cast<int>(fi);
            }
            face_edges[fi][c] = e;
        }
    }

    vertex_neighbors.resize(nv);
    for (size_t v = 0; v < nv; ++v) {
        for (const auto& [other, e] : vertex_edges_[v]) vertex_neighbors[v].push_back(other);
        std::sort(vertex_neighbors[v].begin(), vertex_neighbors[v].end());
    }
}

int MeshTopology::find_edge(int a, int b) const {
    if (a < 0 || a >= static_cast<int>(vertex_edges_.size())) return -1;
    for (const auto& [other, e] : vertex_edges_[a])
        if (other == b) return e;
    return -1;
}

}  // namespace inkbot
