#pragma once

#include "cylbill/admissible.hpp"
#include "cylbill/entropy.hpp"
#include "cylbill/flow.hpp"
#include "cylbill/rotation.hpp"

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>

namespace cylbill {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// One event per line: {"t", "kind", "axis", "sign", "q", "v"}. Collisions
/// report the cylinder axis, sign 0 and the lattice line in "line".
void write_events_jsonl(std::ostream& out, const OrbitRecord& record);

inline constexpr const char* kSummaryHeader = "seed,T,r0,n_x,n_y,n_z,word_length,word_prefix,singular_flag";
void write_summary_row(std::ostream& out, std::uint64_t seed, const OrbitRecord& record);

inline constexpr const char* kRotationHeader = "seed,T,speed,word_length,n_x,n_y,n_z,prefix";
void write_rotation_row(std::ostream& out, const RotationSample& sample);

inline constexpr const char* kEntropyHeader = "T,eps0,r0,n_orbits,N_hat,log_rate,f,upper_rate,lower_rate";
void write_entropy_csv(std::ostream& out, const EntropyReport& report);

inline constexpr const char* kContactHeader =
    "index,cell_x,cell_y,cell_z,edge_axis,edge_x,edge_y,edge_z,parameter,angle,force,kind,idle,x,y,z";
void write_contacts_csv(std::ostream& out, const AdmissibleOrbit& orbit);

nlohmann::ordered_json plan_to_json(const EdgePlan& plan);
nlohmann::ordered_json orbit_to_json(const AdmissibleOrbit& orbit);

}  // namespace cylbill
