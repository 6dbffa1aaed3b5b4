#pragma once

#include "inkbot/pipeline/project.hpp"
#include "inkbot/trajectory/program.hpp"

#include <vector>

namespace inkbot {

/// Stages whose outputs feed `s` directly.
std::vector<Stage> upstream(Stage s);

/// Hash of everything `s` reads: upstream output hashes plus its own
/// configuration. Upstream stages must have been run.
std::string stage_input_hash(const Project& p, Stage s);

/// Fresh when recorded and its inputs hash the same, recursively upstream.
Freshness freshness(const Project& p, Stage s);

/// Runs one stage, writes its artifacts atomically and saves the project.
/// Throws StaleError naming the first stage to rerun when an upstream
/// artifact is missing or stale.
void run_stage(Project& p, Stage s);

/// Runs every stage from `from` through `to` in order.
void run_through(Project& p, Stage to, Stage from = Stage::Contours);

/// Loaders for stored artifacts.
ContourImage load_contour_artifact(const Project& p);
std::vector<OptimizedStroke> load_strokes(const Project& p);
MappedDocument load_mapped(const Project& p);
RobotProgram load_program(const Project& p);

/// Fast in-memory preview of the current document at reduced resolution.
/// Does not touch stored artifacts.
CanvasRaster render_preview(const Project& p, double px_per_mm = 2.0);

/// SHA-256 of a canvas' 8-bit gray pixels.
std::string canvas_hash(const CanvasRaster& canvas);

}  // namespace inkbot
