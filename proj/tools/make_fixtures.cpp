// Regenerates the bundled data files.
#include "inkbot/geometry/primitives.hpp"
#include "inkbot/io/json.hpp"
#include "inkbot/pipeline/hash.hpp"
#include "inkbot/pipeline/project.hpp"
#include "inkbot/simulator/metrics.hpp"

#include <iostream>

using namespace inkbot;

Viewpoint teapot_view() {
    Viewpoint v;
    v.eye = {0.8, -6.5, 2.6};
    v.target = {0.35, 0, 0.9};
    v.up = {0, 0, 1};
    v.fov_y_deg = 40;
    return v;
}

int main(int argc, char** argv) {
    const std::filesystem::path out = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(out);
    save_obj(primitives::teapot(), out / "teapot.obj");
    write_atomic(out / "teapot_view.json", json(teapot_view()).dump(2) + "\n");
    write_atomic(out / "workspace.json", json(WorkspaceFrame{}).dump(2) + "\n");
    const SCurveFixture s = s_curve_fixture();
    write_atomic(out / "s_curve.json",
                 json({{"points", s.points}, {"corners", s.corners}, {"angles", s.angles}}).dump(1) + "\n");
    write_atomic(out / "table1.csv", to_csv(reference_calibration_table()));
    std::cout << "wrote fixtures to " << out << "\n";
    return 0;
}
