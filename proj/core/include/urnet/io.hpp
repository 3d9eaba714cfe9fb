#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "urnet/estimate.hpp"
#include "urnet/events.hpp"
#include "urnet/matrix.hpp"
#include "urnet/model.hpp"
#include "urnet/spectral.hpp"
#include "urnet/stats.hpp"

namespace urnet {

// {"theta": [...], "gamma": [[...]], "w": [[...]]}, rows indexed by the
// influencer j; or {"raw": {"n0": [...], "rho": [[...]], "nu": [[...]]}}.
// Throws ValidationError on malformed or invalid input.
InteractionSpec parse_spec_json(const std::string& text);
InteractionSpec load_spec(const std::filesystem::path& file);
std::string spec_json(const InteractionSpec& spec);

// An array of rows, or an object carrying one under "gamma".
Matrix parse_matrix_json(const std::string& text);
Matrix load_matrix(const std::filesystem::path& file);

// Shortest round-trip decimal form.
std::string format_double(double x);

// Provenance plus events as [t, agent, item, new_system, new_agent] rows
// (agents 1-based).
std::string event_log_json(const EventLog& log);
EventLog parse_event_log_json(const std::string& text);

std::string heaps_fit_json(const HeapsFit& fit);
std::string spectral_json(const SpectralSummary& s);
std::string mle_json(const MleResult& m);
std::string pipeline_json(const PipelineResult& p);
std::string composition_json(const CompositionTable& table);

void write_ode_csv(std::ostream& out, const OdeTrajectory& traj);
void write_trajectories_csv(std::ostream& out, const Trajectories& traj);
void write_fit_csv(std::ostream& out, const HeapsFit& fit);
void write_ratio_csv(std::ostream& out, const RatioSeries& ratio);
void write_composition_csv(std::ostream& out, const CompositionTable& table);
void write_study_csv(std::ostream& out, const std::vector<StudyRowResult>& rows);

// Rows of the simulation-study input: [{"g11":..,"g22":..,"g12":..,"w12":..}]
// or [[g11, g22, g12, w12], ...].
std::vector<StudyRow> parse_study_rows(const std::string& text);

// Writes `content` to `file`, creating parent directories.
void write_file(const std::filesystem::path& file, const std::string& content);

}  // namespace urnet
