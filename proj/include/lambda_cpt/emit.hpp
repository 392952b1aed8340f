// emit.hpp: CSV and JSON output for trajectories, steady states and sweeps.

#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

#include "lambda_cpt/core.hpp"
#include "lambda_cpt/dressed.hpp"
#include "lambda_cpt/integrator.hpp"
#include "lambda_cpt/scenarios.hpp"
#include "lambda_cpt/steady.hpp"

namespace lambda_cpt {

// 12 significant digits in scientific notation; "nan" for non-finite values.
std::string format_number(double x);

inline constexpr const char* kTrajectoryHeader =
    "t,rho_aa,rho_bb,rho_cc,re_rho_bc,im_rho_bc,inv_ab,inv_ac,rho_DD,rho_BB,c0,trace_err,min_eig";

/// One row per sample. rho_DD and rho_BB are nan when r1 + r2 == 0; c0 is
/// nan outside the symmetric degenerate regime.
void write_trajectory_csv(std::ostream& os, const SystemParams& params, const Trajectory& traj);

inline constexpr const char* kSweepHeader =
    "r1,r2,gamma1,gamma2,p,delta,discriminant,null_space_dim,multi_steady,provenance,"
    "classification,rho_aa,rho_bb,rho_cc,re_rho_bc,im_rho_bc";

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

nlohmann::json to_json(const SystemParams& params);
nlohmann::json to_json(const DensityMatrix& rho);
nlohmann::json to_json(const SteadyStateReport& report);
nlohmann::json to_json(const UniquenessReport& report);
nlohmann::json to_json(const DressedRateSet& rates);
nlohmann::json to_json(const DressedDecayRates& rates);

// Final state, convergence time and diagnostics of one integration.
nlohmann::json trajectory_summary(const SystemParams& params, const Trajectory& traj);

nlohmann::json to_json(const ScenarioResult& result);

} // namespace lambda_cpt
