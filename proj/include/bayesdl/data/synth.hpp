#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bayesdl/core/types.hpp"
#include "bayesdl/data/table.hpp"

namespace bayesdl::data {

struct ClassDist {
  std::vector<std::string> labels;
  Vector proportions;  // sums to 1 within 1e-12
};

/// Destination shares of the booking data (NDF 59%, US 29%, other 4.8%,
/// FR 2.2%, GB 1.2%, IT 1.2%, ES 1%, CA 0.6%, DE 0.5%, NL 0.31%, AU 0.3%,
/// PT 0.11%), renormalized because the published percentages sum to 100.22.
ClassDist destination_prior();

struct SynthData {
  Table users;     // id, demographics, and the country_destination label
  Table sessions;  // user_id, action_type, device_type, duration
  std::vector<std::string> truth;
};

/// Synthetic users with the booking-data schema. Labels come from
/// destination_prior(); age is missing for 42% of users overall. The
/// label-dependent signal uses arbitrary fixed constants (see synth.cpp);
/// they are not estimates from any real data.
SynthData synth_airbnb(Index n_users, std::uint64_t seed);

}  // namespace bayesdl::data
