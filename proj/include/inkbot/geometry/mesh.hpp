#pragma once

#include "inkbot/types.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace inkbot {

using Face = std::array<int, 3>;

/// Indexed triangle list with per-vertex unit normals.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    std::vector<Vec3> normals;

    bool empty() const { return faces.empty(); }
};

class MeshError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Throws MeshError naming the first violated invariant: face index out of
/// range, non-unit normal, zero-area face.
void validate(const TriangleMesh& mesh);

/// Area-weighted vertex normals. Vertices without faces get +Z.
void compute_vertex_normals(TriangleMesh& mesh);

Vec3 face_normal(const TriangleMesh& mesh, int face);
double face_area(const TriangleMesh& mesh, int face);

/// Length of the bounding-box diagonal.
double diameter(const TriangleMesh& mesh);

/// Reads the v/vn/f subset of Wavefront OBJ. Polygons are fan-triangulated.
/// Normals come from vn when every face corner references one, otherwise
/// they are recomputed.
TriangleMesh load_obj(const std::filesystem::path& path);
TriangleMesh parse_obj(const std::string& text);
void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

/// Edge/face adjacency derived from a mesh.
struct MeshTopology {
    struct Edge {
        int v0, v1;               // v0 < v1
        std::array<int, 2> faces; // second is -1 on boundary edges
    };

    std::vector<Edge> edges;
    std::vector<std::array<int, 3>> face_edges;  // edge index opposite each corner
    std::vector<std::vector<int>> vertex_faces;
    std::vector<std::vector<int>> vertex_neighbors;

    explicit MeshTopology(const TriangleMesh& mesh);

    /// Edge index joining a and b, or -1.
    int find_edge(int a, int b) const;

private:
    std::vector<std::vector<std::pair<int, int>>> vertex_edges_;
};

}  // namespace inkbot
